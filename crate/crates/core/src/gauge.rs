//! Local-in-time gauge structure of the two-level evolution.
//!
//! Two distinct transformations live here:
//!
//! * the U(1) filter `U(t) = e^{-i f(t)}`, `f(t) = f0 - omega1 t`, which maps
//!   an evolved state to its "tilde" state whose `|0>` amplitude is frozen;
//! * the doublet rotation `U(t) = e^{-i g lambda(t) sigma_1}` acting on the
//!   index of `|zeta> = (|phi>, |psi>)`, under which the covariant derivative
//!   `D_t = d/dt + i g A sigma_1` transforms as a gauge connection.
//!
//! `sigma_1` and `omega_d` act on the doublet index only. Residuals that
//! need `d/dt` accept a [`Derivative`]: central differences or the exact
//! derivative of the closed forms.

use crate::error::{Error, Result};
use crate::linalg::{cis, Operator2, QubitState, C64, I, ONE, ZERO};
use crate::qubit::{
    basis_states, evolve, evolve_doublet, evolve_time_derivative, hamiltonian_elements,
    matrix_elements_at, EnergyElements, StateDoublet, StateSelector, TwoLevelParams,
};

/// Default central-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-6;

/// How `d/dt` is evaluated inside residual checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Derivative {
    /// `(x(t + h) - x(t - h)) / 2h`.
    Central { step: f64 },
    /// Exact derivative of the closed-form expressions.
    Analytic,
}

impl Default for Derivative {
    fn default() -> Self {
        Derivative::Central {
            step: DEFAULT_FD_STEP,
        }
    }
}

/// `i d/dt` of a doublet-valued trajectory.
fn i_dt<F, A>(trajectory: F, analytic_d_dt: A, t: f64, derivative: Derivative) -> StateDoublet
where
    F: Fn(f64) -> StateDoublet,
    A: FnOnce() -> StateDoublet,
{
    match derivative {
        Derivative::Central { step } => {
            let diff = trajectory(t + step) - trajectory(t - step);
            diff.scale(I / (2.0 * step))
        }
        Derivative::Analytic => analytic_d_dt().scale(I),
    }
}

/// The phase function `f(t) = f0 - omega1 t` of the U(1) filter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeFunction {
    pub f0: f64,
    slope: f64,
}

impl GaugeFunction {
    pub fn new(params: &TwoLevelParams, f0: f64) -> Self {
        Self {
            f0,
            slope: -params.omega1(),
        }
    }

    pub fn at(&self, t: f64) -> f64 {
        self.f0 + self.slope * t
    }

    pub fn slope(&self) -> f64 {
        self.slope
    }

    /// `U(t) = e^{-i f(t)}`.
    pub fn factor(&self, t: f64) -> C64 {
        cis(-self.at(t))
    }
}

/// `|s~(t)> = e^{-i f0} (a0 |0> + e^{-i (omega2 - omega1) t} a1 |1>)` where
/// `(a0, a1)` are the prepared amplitudes of the selected state.
pub fn tilde_state_of(
    params: &TwoLevelParams,
    selector: StateSelector,
    f0: f64,
    t: f64,
) -> QubitState {
    let s0 = basis_states(params).get(selector);
    let global = cis(-f0);
    QubitState::new(
        global * s0.amp0,
        global * cis(-params.omega_minus() * t) * s0.amp1,
    )
}

/// Gauge-filtered `phi` state, `U(t) |phi(t)>`.
pub fn tilde_state(params: &TwoLevelParams, f0: f64, t: f64) -> QubitState {
    tilde_state_of(params, StateSelector::Phi, f0, t)
}

/// `i d/dt |s~(t)>`, differentiated from the closed form.
pub fn tilde_state_derivative(
    params: &TwoLevelParams,
    selector: StateSelector,
    f0: f64,
    t: f64,
) -> QubitState {
    let s0 = basis_states(params).get(selector);
    let w = params.omega_minus();
    QubitState::new(ZERO, cis(-f0) * cis(-w * t) * s0.amp1 * w)
}

/// `(<phi~(0)|phi~(nT + tau)>, <phi~(0)|phi~(tau)>)`. The filtered state
/// carries no accumulated phase, so the two agree.
pub fn tilde_overlap_invariance(
    params: &TwoLevelParams,
    f0: f64,
    n: u32,
    tau: f64,
) -> Result<(C64, C64)> {
    let period = params.period()?;
    if !(0.0..period.abs()).contains(&tau) {
        return Err(Error::InvalidArgument(format!(
            "tau must lie in [0, |T|) = [0, {}), got {tau}",
            period.abs()
        )));
    }
    let start = tilde_state(params, f0, 0.0);
    let shifted = start.inner(&tilde_state(params, f0, n as f64 * period + tau));
    let reduced = start.inner(&tilde_state(params, f0, tau));
    Ok((shifted, reduced))
}

/// `|| -i (d/dt + iH) |phi~(t)> - omega1 |phi~(t)> ||`.
pub fn filtered_evolution_residual(
    params: &TwoLevelParams,
    f0: f64,
    t: f64,
    derivative: Derivative,
) -> f64 {
    let s = tilde_state(params, f0, t);
    let i_dt_s = match derivative {
        Derivative::Central { step } => {
            let diff = tilde_state(params, f0, t + step) - tilde_state(params, f0, t - step);
            diff.scale(I / (2.0 * step))
        }
        Derivative::Analytic => tilde_state_derivative(params, StateSelector::Phi, f0, t),
    };
    // -i d/dt = -(i d/dt)
    let lhs = params.hamiltonian().apply(&s) - i_dt_s;
    (lhs - s.scale_real(params.omega1())).norm()
}

/// Per-component residual of the doublet equation of motion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubletResidual {
    pub phi: f64,
    pub psi: f64,
}

impl DoubletResidual {
    fn of(r: &StateDoublet) -> Self {
        Self {
            phi: r.phi.norm(),
            psi: r.psi.norm(),
        }
    }

    pub fn combined(&self) -> f64 {
        self.phi.hypot(self.psi)
    }
}

/// `i d/dt |zeta> - omega_d |zeta> - omega_phipsi sigma_1 |zeta>`.
///
/// Uses `omega_phipsi` directly, so it stays finite where `g` diverges.
pub fn doublet_motion_residual(
    params: &TwoLevelParams,
    t: f64,
    derivative: Derivative,
) -> DoubletResidual {
    let e = hamiltonian_elements(params);
    let zeta = evolve_doublet(params, t);
    let lhs = i_dt(
        |s| evolve_doublet(params, s),
        || doublet_time_derivative(params, t),
        t,
        derivative,
    );
    let rhs = DoubletOperator::omega_d(&e).apply(&zeta)
        + DoubletOperator::sigma1()
            .scale(C64::from(e.omega_phipsi))
            .apply(&zeta);
    DoubletResidual::of(&(lhs - rhs))
}

/// `d/dt |zeta(t)>` (no factor of `i`).
fn doublet_time_derivative(params: &TwoLevelParams, t: f64) -> StateDoublet {
    let minus_i = -I;
    StateDoublet::new(
        evolve_time_derivative(params, StateSelector::Phi, t).scale(minus_i),
        evolve_time_derivative(params, StateSelector::Psi, t).scale(minus_i),
    )
}

/// A 2x2 block operator on doublets: `(B zeta)_i = sum_j B_ij zeta_j`, each
/// block acting on the qubit Hilbert space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubletOperator(pub [[Operator2; 2]; 2]);

impl DoubletOperator {
    /// Blocks `c_ij * 1`.
    pub fn from_scalars(c: [[C64; 2]; 2]) -> Self {
        let b = |z: C64| Operator2::identity().scale(z);
        DoubletOperator([[b(c[0][0]), b(c[0][1])], [b(c[1][0]), b(c[1][1])]])
    }

    pub fn identity() -> Self {
        Self::from_scalars([[ONE, ZERO], [ZERO, ONE]])
    }

    /// Swaps the two members of the doublet.
    pub fn sigma1() -> Self {
        Self::from_scalars([[ZERO, ONE], [ONE, ZERO]])
    }

    /// `omega_d = diag(omega_phiphi, omega_psipsi)`.
    pub fn omega_d(e: &EnergyElements) -> Self {
        Self::from_scalars([
            [C64::from(e.omega_phiphi), ZERO],
            [ZERO, C64::from(e.omega_psipsi)],
        ])
    }

    /// `exp(-i angle sigma_1) = cos(angle) - i sin(angle) sigma_1`.
    pub fn rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self::from_scalars([
            [C64::from(c), C64::new(0.0, -s)],
            [C64::new(0.0, -s), C64::from(c)],
        ])
    }

    pub fn apply(&self, z: &StateDoublet) -> StateDoublet {
        let b = &self.0;
        StateDoublet::new(
            b[0][0].apply(&z.phi) + b[0][1].apply(&z.psi),
            b[1][0].apply(&z.phi) + b[1][1].apply(&z.psi),
        )
    }

    pub fn scale(&self, z: C64) -> Self {
        self.map(|b| b.scale(z))
    }

    pub fn max_norm(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(Operator2::max_norm)
            .fold(0.0, f64::max)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    fn map(&self, f: impl Fn(&Operator2) -> Operator2) -> Self {
        let b = &self.0;
        DoubletOperator([[f(&b[0][0]), f(&b[0][1])], [f(&b[1][0]), f(&b[1][1])]])
    }
}

impl std::ops::Add for DoubletOperator {
    type Output = DoubletOperator;
    fn add(self, rhs: DoubletOperator) -> DoubletOperator {
        let (a, b) = (&self.0, &rhs.0);
        DoubletOperator([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl std::ops::Sub for DoubletOperator {
    type Output = DoubletOperator;
    fn sub(self, rhs: DoubletOperator) -> DoubletOperator {
        self + rhs.scale(C64::from(-1.0))
    }
}

impl std::ops::Mul for DoubletOperator {
    type Output = DoubletOperator;
    fn mul(self, rhs: DoubletOperator) -> DoubletOperator {
        let (a, b) = (&self.0, &rhs.0);
        let e = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
        DoubletOperator([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }
}

/// The single non-vanishing gauge component `A = (1/2) delta_omega` and the
/// coupling `g = tan 2 theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeField {
    pub a0: f64,
    pub g: f64,
}

impl GaugeField {
    pub fn of(params: &TwoLevelParams) -> Result<Self> {
        Ok(Self {
            a0: 0.5 * params.delta_omega(),
            g: params.coupling()?,
        })
    }

    /// `g A`, equal to `omega_phipsi`.
    pub fn coupled(&self) -> f64 {
        self.g * self.a0
    }

    /// `g A sigma_1` on doublets.
    pub fn connection(&self) -> DoubletOperator {
        DoubletOperator::sigma1().scale(C64::from(self.coupled()))
    }
}

/// A differentiable gauge parameter `lambda(t)`, supplied with its
/// derivative.
pub trait GaugeParameter: Sync {
    fn value(&self, t: f64) -> f64;
    fn derivative(&self, t: f64) -> f64;
}

/// `lambda(t) = c`.
#[derive(Debug, Clone, Copy)]
pub struct ConstantGauge(pub f64);

/// `lambda(t) = c t`.
#[derive(Debug, Clone, Copy)]
pub struct LinearGauge(pub f64);

/// `lambda(t) = amplitude * sin(frequency * t)`.
#[derive(Debug, Clone, Copy)]
pub struct SineGauge {
    pub amplitude: f64,
    pub frequency: f64,
}

impl Default for SineGauge {
    fn default() -> Self {
        Self {
            amplitude: 1.0,
            frequency: 1.0,
        }
    }
}

/// Closure pair `(lambda, lambda')`.
pub struct FnGauge<F, G> {
    pub value: F,
    pub derivative: G,
}

impl GaugeParameter for ConstantGauge {
    fn value(&self, _t: f64) -> f64 {
        self.0
    }
    fn derivative(&self, _t: f64) -> f64 {
        0.0
    }
}

impl GaugeParameter for LinearGauge {
    fn value(&self, t: f64) -> f64 {
        self.0 * t
    }
    fn derivative(&self, _t: f64) -> f64 {
        self.0
    }
}

impl GaugeParameter for SineGauge {
    fn value(&self, t: f64) -> f64 {
        self.amplitude * (self.frequency * t).sin()
    }
    fn derivative(&self, t: f64) -> f64 {
        self.amplitude * self.frequency * (self.frequency * t).cos()
    }
}

impl<F, G> GaugeParameter for FnGauge<F, G>
where
    F: Fn(f64) -> f64 + Sync,
    G: Fn(f64) -> f64 + Sync,
{
    fn value(&self, t: f64) -> f64 {
        (self.value)(t)
    }
    fn derivative(&self, t: f64) -> f64 {
        (self.derivative)(t)
    }
}

/// `|zeta'> = exp(-i g lambda sigma_1) |zeta>`.
pub fn gauge_transform_doublet(
    params: &TwoLevelParams,
    lambda_value: f64,
    doublet: &StateDoublet,
) -> Result<StateDoublet> {
    if !lambda_value.is_finite() {
        return Err(Error::NonFinite {
            name: "lambda",
            value: lambda_value,
        });
    }
    let g = params.coupling()?;
    Ok(DoubletOperator::rotation(g * lambda_value).apply(doublet))
}

/// `U(t) = exp(-i g lambda(t) sigma_1)` and its exact time derivative.
fn rotation_and_rate(
    g: f64,
    lambda: &dyn GaugeParameter,
    t: f64,
) -> (DoubletOperator, DoubletOperator) {
    let x = g * lambda.value(t);
    let rate = g * lambda.derivative(t);
    let (s, c) = x.sin_cos();
    let u = DoubletOperator::rotation(x);
    let du = DoubletOperator::from_scalars([
        [C64::from(-s * rate), C64::new(0.0, -c * rate)],
        [C64::new(0.0, -c * rate), C64::from(-s * rate)],
    ]);
    (u, du)
}

/// Transformed potential `A' = A + d lambda / dt` at time `t`.
pub fn gauge_field_transform(
    params: &TwoLevelParams,
    lambda: &dyn GaugeParameter,
    t: f64,
) -> Result<GaugeField> {
    let field = GaugeField::of(params)?;
    Ok(GaugeField {
        a0: field.a0 + lambda.derivative(t),
        g: field.g,
    })
}

/// Max-norm defect of
/// `g A' sigma_1 = U (g A sigma_1) U^-1 + i (dU/dt) U^-1`.
pub fn transformation_law_residual(
    params: &TwoLevelParams,
    lambda: &dyn GaugeParameter,
    t: f64,
) -> Result<f64> {
    let field = GaugeField::of(params)?;
    let transformed = gauge_field_transform(params, lambda, t)?;
    let (u, du) = rotation_and_rate(field.g, lambda, t);
    let u_inv = DoubletOperator::rotation(-field.g * lambda.value(t));
    let rhs = u * field.connection() * u_inv + (du * u_inv).scale(I);
    Ok((transformed.connection() - rhs).max_norm())
}

/// `|| [U(t), sigma_1] ||` in max-norm.
pub fn rotation_commutator(
    params: &TwoLevelParams,
    lambda: &dyn GaugeParameter,
    t: f64,
) -> Result<f64> {
    let g = params.coupling()?;
    let u = DoubletOperator::rotation(g * lambda.value(t));
    Ok(u.commutator(&DoubletOperator::sigma1()).max_norm())
}

struct Transformed {
    u: DoubletOperator,
    zeta: StateDoublet,
    /// `i D_t |zeta>`
    id_zeta: StateDoublet,
    zeta_prime: StateDoublet,
    /// `i D'_t |zeta'>`
    id_zeta_prime: StateDoublet,
}

fn transformed_doublet(
    params: &TwoLevelParams,
    lambda: &dyn GaugeParameter,
    t: f64,
    derivative: Derivative,
) -> Result<Transformed> {
    let field = GaugeField::of(params)?;
    let g = field.g;
    let zeta = evolve_doublet(params, t);
    let i_dt_zeta = i_dt(
        |s| evolve_doublet(params, s),
        || doublet_time_derivative(params, t),
        t,
        derivative,
    );
    let id_zeta = i_dt_zeta - field.connection().apply(&zeta);

    let (u, du) = rotation_and_rate(g, lambda, t);
    let zeta_prime = u.apply(&zeta);
    let i_dt_prime = i_dt(
        |s| DoubletOperator::rotation(g * lambda.value(s)).apply(&evolve_doublet(params, s)),
        || du.apply(&zeta) + u.apply(&doublet_time_derivative(params, t)),
        t,
        derivative,
    );
    let transformed = gauge_field_transform(params, lambda, t)?;
    let id_zeta_prime = i_dt_prime - transformed.connection().apply(&zeta_prime);
    Ok(Transformed {
        u,
        zeta,
        id_zeta,
        zeta_prime,
        id_zeta_prime,
    })
}

/// `|| U (i D_t |zeta>) - i D'_t (U |zeta>) ||`: the covariant derivative
/// intertwines with the gauge rotation.
pub fn covariance_residual(
    params: &TwoLevelParams,
    lambda: &dyn GaugeParameter,
    t: f64,
    derivative: Derivative,
) -> Result<f64> {
    let tr = transformed_doublet(params, lambda, t, derivative)?;
    debug_assert!(tr.zeta.norm() > 0.0);
    Ok((tr.u.apply(&tr.id_zeta) - tr.id_zeta_prime).norm())
}

/// `|| i D'_t |zeta'> - omega_d |zeta'> ||` with the untransformed `omega_d`.
///
/// Vanishes only when the rotation commutes with `omega_d`: for
/// `lambda(t) = 0`, `g = 0` or `omega_phiphi = omega_psipsi`. In general the
/// transformed equation carries `U omega_d U^-1`, see
/// [`covariant_motion_residual`].
pub fn transformed_motion_residual(
    params: &TwoLevelParams,
    lambda: &dyn GaugeParameter,
    t: f64,
    derivative: Derivative,
) -> Result<f64> {
    let tr = transformed_doublet(params, lambda, t, derivative)?;
    let omega_d = DoubletOperator::omega_d(&hamiltonian_elements(params));
    Ok((tr.id_zeta_prime - omega_d.apply(&tr.zeta_prime)).norm())
}

/// `|| i D'_t |zeta'> - U omega_d U^-1 |zeta'> ||`.
pub fn covariant_motion_residual(
    params: &TwoLevelParams,
    lambda: &dyn GaugeParameter,
    t: f64,
    derivative: Derivative,
) -> Result<f64> {
    let tr = transformed_doublet(params, lambda, t, derivative)?;
    let g = params.coupling()?;
    let u_inv = DoubletOperator::rotation(-g * lambda.value(t));
    let omega_d = tr.u * DoubletOperator::omega_d(&hamiltonian_elements(params)) * u_inv;
    Ok((tr.id_zeta_prime - omega_d.apply(&tr.zeta_prime)).norm())
}

fn max_spread(values: impl Iterator<Item = f64>) -> Option<f64> {
    let mut first = None;
    let mut worst: f64 = 0.0;
    for v in values {
        let base = *first.get_or_insert(v);
        worst = worst.max((v - base).abs());
    }
    first.map(|_| worst)
}

/// `max_t |A(t) - A(t_0)|` with `A(t) = (omega_psipsi(t) - omega_phiphi(t)) / 2`
/// evaluated from explicit matrix elements on the evolved states. With
/// `A` the only component, its time-constancy is the vanishing field
/// strength.
pub fn field_strength(params: &TwoLevelParams, t_grid: &[f64]) -> Result<f64> {
    max_spread(t_grid.iter().map(|&t| {
        let m = matrix_elements_at(params, t);
        0.5 * (m.omega_psipsi - m.omega_phiphi)
    }))
    .ok_or_else(|| Error::InvalidArgument("empty time grid".into()))
}

/// Same measure for the transformed potential `A'(t) = A + lambda'(t)`,
/// which is time dependent unless `lambda` is at most linear.
pub fn transformed_field_strength(
    params: &TwoLevelParams,
    lambda: &dyn GaugeParameter,
    t_grid: &[f64],
) -> Result<f64> {
    let values = t_grid
        .iter()
        .map(|&t| gauge_field_transform(params, lambda, t).map(|f| f.a0))
        .collect::<Result<Vec<_>>>()?;
    max_spread(values.into_iter()).ok_or_else(|| Error::InvalidArgument("empty time grid".into()))
}

/// The evolved state times `e^{-i f(t)}`, computed by direct multiplication.
pub fn filtered_by_multiplication(
    params: &TwoLevelParams,
    selector: StateSelector,
    f0: f64,
    t: f64,
) -> QubitState {
    GaugeFunction::new(params, f0).factor(t) * evolve(params, selector, t)
}
