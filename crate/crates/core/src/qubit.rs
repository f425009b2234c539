//! Physical configuration, state preparation and exact time evolution of a
//! two-level system with `H = omega1 |0><0| + omega2 |1><1|` (hbar = 1).

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::linalg::{cis, Operator2, QubitState, C64};

/// Below this `|cos 2 theta|` the coupling `g = tan 2 theta` is treated as
/// infinite. `tan` of the nearest double to pi/2 is ~1.6e16, not `inf`.
pub const SINGULAR_COS_2THETA: f64 = 1e-12;

/// Which member of the prepared pair a phase computation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateSelector {
    Phi,
    Psi,
}

impl StateSelector {
    pub const BOTH: [StateSelector; 2] = [StateSelector::Phi, StateSelector::Psi];

    pub fn name(self) -> &'static str {
        match self {
            StateSelector::Phi => "phi",
            StateSelector::Psi => "psi",
        }
    }
}

/// Energies `omega1`, `omega2`, mixing angle `theta` and preparation phases
/// `gamma1`, `gamma2` (radians).
///
/// The closed-form phase results elsewhere in the crate assume
/// `gamma1 = gamma2 = 0`. Non-zero preparation phases multiply the amplitudes
/// `alpha = e^{i gamma1} cos theta`, `beta = e^{i gamma2} sin theta` and are
/// carried through the state constructors only; note that `psi = -beta|0> +
/// alpha|1>` is orthogonal to `phi` only when `gamma1 == gamma2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelParams {
    omega1: f64,
    omega2: f64,
    theta: f64,
    gamma1: f64,
    gamma2: f64,
}

fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { name, value })
    }
}

/// Validating constructor; see [`TwoLevelParams`].
pub fn make_params(
    omega1: f64,
    omega2: f64,
    theta: f64,
    gamma1: f64,
    gamma2: f64,
) -> Result<TwoLevelParams> {
    Ok(TwoLevelParams {
        omega1: finite("omega1", omega1)?,
        omega2: finite("omega2", omega2)?,
        theta: finite("theta", theta)?,
        gamma1: finite("gamma1", gamma1)?,
        gamma2: finite("gamma2", gamma2)?,
    })
}

impl TwoLevelParams {
    /// Parameters with zero preparation phases.
    pub fn new(omega1: f64, omega2: f64, theta: f64) -> Result<Self> {
        make_params(omega1, omega2, theta, 0.0, 0.0)
    }

    pub fn with_phases(self, gamma1: f64, gamma2: f64) -> Result<Self> {
        make_params(self.omega1, self.omega2, self.theta, gamma1, gamma2)
    }

    pub fn omega1(&self) -> f64 {
        self.omega1
    }

    pub fn omega2(&self) -> f64 {
        self.omega2
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }

    pub fn gamma2(&self) -> f64 {
        self.gamma2
    }

    /// `omega2 - omega1`.
    pub fn omega_minus(&self) -> f64 {
        self.omega2 - self.omega1
    }

    /// `omega_psipsi - omega_phiphi = (omega2 - omega1) cos 2 theta`.
    pub fn delta_omega(&self) -> f64 {
        let e = hamiltonian_elements(self);
        e.omega_psipsi - e.omega_phiphi
    }

    pub fn is_degenerate(&self) -> bool {
        self.omega1 == self.omega2
    }

    pub(crate) fn require_gap(&self) -> Result<()> {
        if self.is_degenerate() {
            Err(Error::DegenerateSpectrum { omega: self.omega1 })
        } else {
            Ok(())
        }
    }

    /// `T = 2 pi / (omega2 - omega1)`, negative when `omega2 < omega1`.
    pub fn period(&self) -> Result<f64> {
        self.require_gap()?;
        Ok(TAU / self.omega_minus())
    }

    pub fn is_coupling_singular(&self) -> bool {
        (2.0 * self.theta).cos().abs() < SINGULAR_COS_2THETA
    }

    /// `g = tan 2 theta`.
    pub fn coupling(&self) -> Result<f64> {
        if self.is_coupling_singular() {
            Err(Error::InfiniteCoupling { theta: self.theta })
        } else {
            Ok((2.0 * self.theta).tan())
        }
    }

    /// `alpha = e^{i gamma1} cos theta`.
    pub fn alpha(&self) -> C64 {
        cis(self.gamma1) * self.theta.cos()
    }

    /// `beta = e^{i gamma2} sin theta`.
    pub fn beta(&self) -> C64 {
        cis(self.gamma2) * self.theta.sin()
    }

    pub fn hamiltonian(&self) -> Operator2 {
        Operator2::diag(self.omega1, self.omega2)
    }
}

/// Ordered pair `(|phi>, |psi>)`. Doublet-index operators (the `sigma_1`
/// swap, `omega_d`) act on the position in this pair, never on the
/// amplitudes of the individual kets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDoublet {
    pub phi: QubitState,
    pub psi: QubitState,
}

impl StateDoublet {
    pub fn new(phi: QubitState, psi: QubitState) -> Self {
        Self { phi, psi }
    }

    pub fn get(&self, selector: StateSelector) -> QubitState {
        match selector {
            StateSelector::Phi => self.phi,
            StateSelector::Psi => self.psi,
        }
    }

    /// `sum_i <self_i | other_i>`.
    pub fn inner(&self, other: &StateDoublet) -> C64 {
        self.phi.inner(&other.phi) + self.psi.inner(&other.psi)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.phi.norm_sqr() + self.psi.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, z: C64) -> StateDoublet {
        StateDoublet::new(self.phi.scale(z), self.psi.scale(z))
    }

    /// Applies a Hilbert-space operator to both members.
    pub fn map_each(&self, op: &Operator2) -> StateDoublet {
        StateDoublet::new(op.apply(&self.phi), op.apply(&self.psi))
    }
}

impl std::ops::Add for StateDoublet {
    type Output = StateDoublet;
    fn add(self, rhs: StateDoublet) -> StateDoublet {
        StateDoublet::new(self.phi + rhs.phi, self.psi + rhs.psi)
    }
}

impl std::ops::Sub for StateDoublet {
    type Output = StateDoublet;
    fn sub(self, rhs: StateDoublet) -> StateDoublet {
        StateDoublet::new(self.phi - rhs.phi, self.psi - rhs.psi)
    }
}

/// `|phi(0)> = alpha|0> + beta|1>`, `|psi(0)> = -beta|0> + alpha|1>`.
pub fn basis_states(params: &TwoLevelParams) -> StateDoublet {
    let (a, b) = (params.alpha(), params.beta());
    StateDoublet::new(QubitState::new(a, b), QubitState::new(-b, a))
}

fn propagate(params: &TwoLevelParams, s: QubitState, t: f64) -> QubitState {
    QubitState::new(
        cis(-params.omega1 * t) * s.amp0,
        cis(-params.omega2 * t) * s.amp1,
    )
}

/// `e^{-iHt} |phi(0)>`.
pub fn evolve_phi(params: &TwoLevelParams, t: f64) -> QubitState {
    propagate(params, basis_states(params).phi, t)
}

/// `e^{-iHt} |psi(0)>`.
pub fn evolve_psi(params: &TwoLevelParams, t: f64) -> QubitState {
    propagate(params, basis_states(params).psi, t)
}

pub fn evolve(params: &TwoLevelParams, selector: StateSelector, t: f64) -> QubitState {
    match selector {
        StateSelector::Phi => evolve_phi(params, t),
        StateSelector::Psi => evolve_psi(params, t),
    }
}

pub fn evolve_doublet(params: &TwoLevelParams, t: f64) -> StateDoublet {
    StateDoublet::new(evolve_phi(params, t), evolve_psi(params, t))
}

/// `i d/dt` of the evolved state, from differentiating the closed form.
pub fn evolve_time_derivative(
    params: &TwoLevelParams,
    selector: StateSelector,
    t: f64,
) -> QubitState {
    let s = evolve(params, selector, t);
    QubitState::new(s.amp0 * params.omega1, s.amp1 * params.omega2)
}

/// Matrix elements of `H` in the prepared pair. Time independent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyElements {
    pub omega_phiphi: f64,
    pub omega_psipsi: f64,
    /// Equal to `omega_psiphi`.
    pub omega_phipsi: f64,
}

impl EnergyElements {
    pub fn diagonal(&self, selector: StateSelector) -> f64 {
        match selector {
            StateSelector::Phi => self.omega_phiphi,
            StateSelector::Psi => self.omega_psipsi,
        }
    }
}

pub fn hamiltonian_elements(params: &TwoLevelParams) -> EnergyElements {
    let (w1, w2, th) = (params.omega1, params.omega2, params.theta);
    let (s, c) = th.sin_cos();
    let (c2, s2) = (c * c, s * s);
    EnergyElements {
        omega_phiphi: w1 * c2 + w2 * s2,
        omega_psipsi: w1 * s2 + w2 * c2,
        omega_phipsi: 0.5 * (w2 - w1) * (2.0 * th).sin(),
    }
}

/// Matrix elements evaluated as explicit inner products `<a(t)|H|b(t)>`
/// on the evolved states. Agrees with [`hamiltonian_elements`] for
/// `gamma1 == gamma2 == 0`.
pub fn matrix_elements_at(params: &TwoLevelParams, t: f64) -> EnergyElements {
    let h = params.hamiltonian();
    let z = evolve_doublet(params, t);
    EnergyElements {
        omega_phiphi: h.matrix_element(&z.phi, &z.phi).re,
        omega_psipsi: h.matrix_element(&z.psi, &z.psi).re,
        omega_phipsi: h.matrix_element(&z.psi, &z.phi).re,
    }
}

/// `H` rebuilt from the time-dependent projectors and transition dyads of
/// the evolved pair.
#[allow(non_snake_case)]
pub fn reconstruct_H(params: &TwoLevelParams, t: f64) -> Operator2 {
    let e = hamiltonian_elements(params);
    let z = evolve_doublet(params, t);
    let (phi, psi) = (&z.phi, &z.psi);
    Operator2::outer(phi, phi).scale_real(e.omega_phiphi)
        + Operator2::outer(psi, psi).scale_real(e.omega_psipsi)
        + (Operator2::outer(phi, psi) + Operator2::outer(psi, phi)).scale_real(e.omega_phipsi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, FRAC_PI_6, PI};

    fn p(w1: f64, w2: f64, th: f64) -> TwoLevelParams {
        TwoLevelParams::new(w1, w2, th).unwrap()
    }

    #[test]
    fn make_params_rejects_non_finite() {
        assert!(matches!(
            make_params(f64::NAN, 1.0, 0.0, 0.0, 0.0),
            Err(Error::NonFinite { name: "omega1", .. })
        ));
        assert!(matches!(
            make_params(1.0, 1.0, 0.0, f64::INFINITY, 0.0),
            Err(Error::NonFinite { name: "gamma1", .. })
        ));
    }

    #[test]
    fn derived_quantities() {
        let q = p(1.0, 2.0, FRAC_PI_6);
        assert!((q.period().unwrap() - 2.0 * PI).abs() < 1e-15);
        assert!((q.coupling().unwrap() - 3f64.sqrt()).abs() < 1e-14);
        assert_eq!(q.omega_minus(), 1.0);

        let degenerate = p(1.0, 1.0, FRAC_PI_6);
        assert_eq!(
            degenerate.period(),
            Err(Error::DegenerateSpectrum { omega: 1.0 })
        );

        let flat = p(0.0, 1.0, 0.0);
        assert_eq!(flat.coupling().unwrap(), 0.0);
        assert_eq!(hamiltonian_elements(&flat).omega_phipsi, 0.0);
    }

    #[test]
    fn coupling_singular_at_quarter_pi() {
        for th in [FRAC_PI_4, 3.0 * FRAC_PI_4, -FRAC_PI_4] {
            assert!(matches!(
                p(1.0, 2.0, th).coupling(),
                Err(Error::InfiniteCoupling { .. })
            ));
        }
    }

    #[test]
    fn mixing_angle_relation() {
        for th in [0.1, 0.3, FRAC_PI_6, 1.0, 1.4] {
            let q = p(0.7, 2.9, th);
            let e = hamiltonian_elements(&q);
            let lhs = q.coupling().unwrap() * q.delta_omega();
            let rhs = 2.0 * e.omega_phipsi;
            assert!(
                (lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0),
                "theta={th}"
            );
        }
    }

    #[test]
    fn basis_state_examples() {
        let z = basis_states(&p(1.0, 2.0, 0.0));
        assert_eq!(z.phi, QubitState::ket0());
        assert_eq!(z.psi.amp1, C64::new(1.0, 0.0));
        assert_eq!(z.psi.amp0.norm(), 0.0);

        let z = basis_states(&p(1.0, 2.0, FRAC_PI_4));
        assert!(
            z.phi
                .max_deviation(&QubitState::real(FRAC_1_SQRT_2, FRAC_1_SQRT_2))
                < 1e-15
        );

        let z = basis_states(&p(1.0, 2.0, FRAC_PI_6));
        assert!(
            z.phi
                .max_deviation(&QubitState::real(3f64.sqrt() / 2.0, 0.5))
                < 1e-15
        );
        assert!(z.phi.inner(&z.psi).norm() < 1e-16);
    }

    #[test]
    fn unequal_preparation_phases_break_orthogonality() {
        let q = p(1.0, 2.0, FRAC_PI_6).with_phases(0.4, 0.4).unwrap();
        let z = basis_states(&q);
        assert!(z.phi.inner(&z.psi).norm() < 1e-15);

        let q = p(1.0, 2.0, FRAC_PI_6).with_phases(0.0, 0.5).unwrap();
        let z = basis_states(&q);
        // 2 cos(theta) sin(theta) sin(gamma1 - gamma2)
        let expected = (2.0 * FRAC_PI_6).sin() * 0.5f64.sin();
        assert!((z.phi.inner(&z.psi).norm() - expected).abs() < 1e-15);
    }

    #[test]
    fn evolution_at_zero_is_preparation() {
        let q = p(1.3, -0.4, 0.77);
        let z = basis_states(&q);
        assert_eq!(evolve_phi(&q, 0.0), z.phi);
        assert_eq!(evolve_psi(&q, 0.0), z.psi);
    }

    #[test]
    fn evolution_over_one_period() {
        let q = p(1.0, 2.0, FRAC_PI_6);
        let t = q.period().unwrap();
        let phase = cis(-2.0 * PI);
        let expected = basis_states(&q).phi.scale(phase);
        assert!(evolve_phi(&q, t).max_deviation(&expected) < 1e-14);
    }

    #[test]
    fn elements_examples() {
        let e = hamiltonian_elements(&p(1.0, 2.0, 0.0));
        assert_eq!(
            (e.omega_phiphi, e.omega_psipsi, e.omega_phipsi),
            (1.0, 2.0, 0.0)
        );

        let e = hamiltonian_elements(&p(1.0, 3.0, FRAC_PI_4));
        assert!((e.omega_phiphi - 2.0).abs() < 1e-15);
        assert!((e.omega_psipsi - 2.0).abs() < 1e-15);
        assert!((e.omega_phipsi - 1.0).abs() < 1e-15);

        let e = hamiltonian_elements(&p(1.0, 2.0, FRAC_PI_6));
        assert!((e.omega_phipsi - 3f64.sqrt() / 4.0).abs() < 1e-15);
    }

    #[test]
    fn reconstruction_examples() {
        let h = reconstruct_H(&p(1.0, 2.0, 0.0), 5.0);
        assert!((h - Operator2::diag(1.0, 2.0)).max_norm() < 1e-15);

        let h = reconstruct_H(&p(1.0, 2.0, FRAC_PI_6), 0.37);
        assert!((h - Operator2::diag(1.0, 2.0)).max_norm() < 1e-12);

        let h = reconstruct_H(&p(1.0, 2.0, FRAC_PI_6), 1.23);
        assert_eq!(h, h.adjoint());
    }

    #[test]
    fn time_derivative_matches_hamiltonian_action() {
        let q = p(0.3, 1.9, 0.6);
        for t in [0.0, 0.4, 7.1] {
            for sel in StateSelector::BOTH {
                let lhs = evolve_time_derivative(&q, sel, t);
                let rhs = q.hamiltonian().apply(&evolve(&q, sel, t));
                assert!(lhs.max_deviation(&rhs) < 1e-15);
            }
        }
    }
}
