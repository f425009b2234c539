//! Free-energy reading of the evolution: `H = F + TS` with `F` the part of
//! `H` diagonal in the instantaneous `{phi(t), psi(t)}` basis and `TS` the
//! off-diagonal transition term. Also the Anandan-Aharonov invariant and its
//! relation to the entropy term.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::exec::{Strategy, UniformGrid};
use crate::gauge::DoubletOperator;
use crate::linalg::Operator2;
use crate::phase::MIN_QUADRATURE_STEPS;
use crate::qubit::{evolve_doublet, hamiltonian_elements, StateSelector, TwoLevelParams};

/// `F(t) = omega_phiphi |phi(t)><phi(t)| + omega_psipsi |psi(t)><psi(t)|`.
pub fn free_energy_operator(params: &TwoLevelParams, t: f64) -> Operator2 {
    let e = hamiltonian_elements(params);
    let z = evolve_doublet(params, t);
    Operator2::outer(&z.phi, &z.phi).scale_real(e.omega_phiphi)
        + Operator2::outer(&z.psi, &z.psi).scale_real(e.omega_psipsi)
}

/// `TS(t) = omega_phipsi (|phi(t)><psi(t)| + |psi(t)><phi(t)|)`.
pub fn entropy_term(params: &TwoLevelParams, t: f64) -> Operator2 {
    let e = hamiltonian_elements(params);
    let z = evolve_doublet(params, t);
    (Operator2::outer(&z.phi, &z.psi) + Operator2::outer(&z.psi, &z.phi)).scale_real(e.omega_phipsi)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoDecomposition {
    pub f_op: Operator2,
    pub ts_op: Operator2,
    /// `g = tan 2 theta`; `None` where it diverges.
    pub temperature: Option<f64>,
    /// `A = delta_omega / 2`; reported only alongside a finite temperature.
    pub entropy_coeff: Option<f64>,
}

pub fn thermo_decomposition(params: &TwoLevelParams, t: f64) -> ThermoDecomposition {
    let temperature = params.coupling().ok();
    ThermoDecomposition {
        f_op: free_energy_operator(params, t),
        ts_op: entropy_term(params, t),
        temperature,
        entropy_coeff: temperature.map(|_| 0.5 * params.delta_omega()),
    }
}

/// `s_n` after `n` cycles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricInvariant {
    pub s_n: f64,
    pub n: u32,
}

/// `s_n = 2 integral_0^{nT} omega_psiphi dt = 2 pi n sin 2 theta`.
pub fn aa_invariant(params: &TwoLevelParams, n: u32) -> Result<GeometricInvariant> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "cycle count must be at least 1".into(),
        ));
    }
    params.require_gap()?;
    Ok(GeometricInvariant {
        s_n: n as f64 * TAU * (2.0 * params.theta()).sin(),
        n,
    })
}

/// `integral_{t0}^{t0 + nT} <zeta(t)| TS sigma_1 |zeta(t)> dt`, with `TS` the
/// Hilbert-space operator at time `t` and `sigma_1` swapping the doublet.
pub fn entropy_action_integral(params: &TwoLevelParams, n: u32, steps: usize) -> Result<f64> {
    entropy_action_integral_with(params, n, steps, 0.0, Strategy::default())
}

pub fn entropy_action_integral_with(
    params: &TwoLevelParams,
    n: u32,
    steps: usize,
    t0: f64,
    strategy: Strategy,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "cycle count must be at least 1".into(),
        ));
    }
    if steps < MIN_QUADRATURE_STEPS {
        return Err(Error::InvalidArgument(format!(
            "quadrature needs at least {MIN_QUADRATURE_STEPS} steps, got {steps}"
        )));
    }
    let span = n as f64 * params.period()?;
    let grid = UniformGrid::new(t0, t0 + span, steps);
    let swap = DoubletOperator::sigma1();
    Ok(grid.trapezoid(strategy, |t| {
        let zeta = evolve_doublet(params, t);
        let ts = entropy_term(params, t);
        zeta.inner(&swap.apply(&zeta).map_each(&ts)).re
    }))
}

/// Energy spread `sqrt(<H^2> - <H>^2)` of the selected evolved state,
/// evaluated as `|| (H - <H>) |s> ||`.
pub fn energy_spread(params: &TwoLevelParams, selector: StateSelector, t: f64) -> f64 {
    let h = params.hamiltonian();
    let s = evolve_doublet(params, t).get(selector);
    let mean = h.matrix_element(&s, &s).re;
    (h.apply(&s) - s.scale_real(mean)).norm()
}

/// `(Delta omega, omega_phipsi)` in the state `phi(t)`. The spread is a
/// non-negative root, so it matches `|omega_phipsi|`.
pub fn variance_link(params: &TwoLevelParams, t: f64) -> (f64, f64) {
    (
        energy_spread(params, StateSelector::Phi, t),
        hamiltonian_elements(params).omega_phipsi,
    )
}
