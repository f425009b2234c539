//! Total, dynamical and geometric phases of the cyclic evolution, with
//! overlap functions and numeric phase oracles.
//!
//! Phases are unwrapped: the total phase after `n` cycles is `n` times the
//! single-cycle value, not its residue mod 2 pi, so that
//! `total = dynamical + geometric` holds as an identity between reals.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::exec::{Strategy, UniformGrid};
use crate::gauge::{tilde_state_derivative, tilde_state_of};
use crate::linalg::{cis, QubitState, C64};
use crate::qubit::{
    basis_states, evolve, evolve_time_derivative, hamiltonian_elements, StateSelector,
    TwoLevelParams,
};
use crate::unwrap::PhaseTracker;

/// Grid nodes per 2 pi of the fastest phase rotation while tracking.
pub const TRACKING_POINTS_PER_TURN: f64 = 64.0;
/// Lower bound on tracking grid intervals.
pub const MIN_TRACKING_INTERVALS: usize = 1024;
/// Smallest quadrature resolution accepted by the numeric oracles.
pub const MIN_QUADRATURE_STEPS: usize = 1000;
/// Consecutive overlaps below this magnitude make the discrete phase
/// undefined.
pub const ZERO_OVERLAP: f64 = 1e-12;

/// `T = 2 pi / (omega2 - omega1)`.
pub fn period(params: &TwoLevelParams) -> Result<f64> {
    params.period()
}

fn require_cycles(n: u32) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidArgument(
            "cycle count must be at least 1".into(),
        ))
    } else {
        Ok(())
    }
}

fn require_steps(steps: usize) -> Result<()> {
    if steps < MIN_QUADRATURE_STEPS {
        Err(Error::InvalidArgument(format!(
            "quadrature needs at least {MIN_QUADRATURE_STEPS} steps, got {steps}"
        )))
    } else {
        Ok(())
    }
}

/// `<phi(0)|phi(t)> = e^{-i omega1 t} cos^2 theta + e^{-i omega2 t} sin^2 theta`.
pub fn overlap_phi(params: &TwoLevelParams, t: f64) -> C64 {
    let (s, c) = params.theta().sin_cos();
    cis(-params.omega1() * t) * (c * c) + cis(-params.omega2() * t) * (s * s)
}

/// `<psi(0)|phi(t)> = (1/2) sin 2theta e^{-i omega1 t} (e^{-i (omega2 - omega1) t} - 1)`.
///
/// Vanishes at every multiple of the period.
pub fn overlap_psi_phi(params: &TwoLevelParams, t: f64) -> C64 {
    let half_sin = 0.5 * (2.0 * params.theta()).sin();
    cis(-params.omega1() * t) * half_sin * (cis(-params.omega_minus() * t) - 1.0)
}

fn tracking_intervals(params: &TwoLevelParams, span: f64) -> usize {
    let fastest = params
        .omega1()
        .abs()
        .max(params.omega2().abs())
        .max(params.omega_minus().abs());
    let needed = (TRACKING_POINTS_PER_TURN * fastest * span.abs() / TAU).ceil() as usize;
    needed.max(MIN_TRACKING_INTERVALS)
}

fn track<F>(grid: &UniformGrid, strategy: Strategy, amplitude: F) -> f64
where
    F: Fn(f64) -> C64 + Sync + Send,
{
    let raw = strategy.sample(grid.len(), |k| amplitude(grid.node(k)).arg());
    let mut tracker = PhaseTracker::new();
    let origin = tracker.push(raw[0]);
    let mut last = origin;
    for &r in &raw[1..] {
        last = tracker.push(r);
    }
    last - origin
}

/// Unwrapped total phase accumulated over `n` cycles.
///
/// The state is written as `|s(t)> = e^{i f(t)} |s~(t)>` with `|s~>` the
/// gauge-filtered curve of [`crate::gauge::tilde_state_of`], which closes
/// on itself after every period. The argument of `<s~(t)|s(t)>` never
/// passes through zero, so its continuous lift along `[0, nT]` is unique
/// and fixes the branch of the total phase.
pub fn total_phase(params: &TwoLevelParams, selector: StateSelector, n: u32) -> Result<f64> {
    total_phase_with(params, selector, n, Strategy::default())
}

pub fn total_phase_with(
    params: &TwoLevelParams,
    selector: StateSelector,
    n: u32,
    strategy: Strategy,
) -> Result<f64> {
    require_cycles(n)?;
    let span = n as f64 * params.period()?;
    let grid = UniformGrid::new(0.0, span, tracking_intervals(params, span));
    Ok(track(&grid, strategy, |t| {
        tilde_state_of(params, selector, 0.0, t).inner(&evolve(params, selector, t))
    }))
}

/// Continuous lift of `arg <s(0)|s(t)>` over `[0, nT]`.
///
/// Agrees with [`total_phase`] modulo 2 pi. The branch differs by whole
/// turns whenever the overlap circles the origin, which happens for `phi`
/// when `sin^2 theta > cos^2 theta` (and for `psi` in the opposite case);
/// at `theta = pi/4` the overlap passes through zero and the lift is
/// ill-defined.
pub fn overlap_phase_tracked(
    params: &TwoLevelParams,
    selector: StateSelector,
    n: u32,
) -> Result<f64> {
    require_cycles(n)?;
    let span = n as f64 * params.period()?;
    let grid = UniformGrid::new(0.0, span, tracking_intervals(params, span));
    let start = basis_states(params).get(selector);
    Ok(track(&grid, Strategy::default(), |t| {
        start.inner(&evolve(params, selector, t))
    }))
}

/// `-n omega_ss T`, the energy-expectation part of the phase.
pub fn dynamical_phase(params: &TwoLevelParams, selector: StateSelector, n: u32) -> Result<f64> {
    require_cycles(n)?;
    let period = params.period()?;
    let w = hamiltonian_elements(params).diagonal(selector);
    Ok(-(n as f64) * w * period)
}

/// `-integral_0^{nT} <s(t)| i d/dt |s(t)> dt` by the trapezoidal rule.
pub fn dynamical_phase_numeric(
    params: &TwoLevelParams,
    selector: StateSelector,
    n: u32,
    steps: usize,
) -> Result<f64> {
    require_cycles(n)?;
    require_steps(steps)?;
    let span = n as f64 * params.period()?;
    let grid = UniformGrid::new(0.0, span, steps);
    let integral = grid.trapezoid(Strategy::default(), |t| {
        evolve(params, selector, t)
            .inner(&evolve_time_derivative(params, selector, t))
            .re
    });
    Ok(-integral)
}

/// `2 pi n sin^2 theta` for `phi`, `2 pi n cos^2 theta` for `psi`.
///
/// Depends on the mixing angle alone; the energies only enter through the
/// requirement that the evolution be cyclic.
pub fn geometric_phase(params: &TwoLevelParams, selector: StateSelector, n: u32) -> Result<f64> {
    require_cycles(n)?;
    params.require_gap()?;
    let (s, c) = params.theta().sin_cos();
    let per_cycle = match selector {
        StateSelector::Phi => TAU * (s * s),
        StateSelector::Psi => TAU * (c * c),
    };
    Ok(n as f64 * per_cycle)
}

/// `integral_0^{nT} <s~(t)| i d/dt |s~(t)> dt` over the gauge-filtered state
/// with constant phase `f0`, by the trapezoidal rule on `steps` intervals.
pub fn geometric_phase_numeric(
    params: &TwoLevelParams,
    selector: StateSelector,
    n: u32,
    steps: usize,
    f0: f64,
) -> Result<f64> {
    geometric_phase_numeric_with(params, selector, n, steps, f0, Strategy::default())
}

pub fn geometric_phase_numeric_with(
    params: &TwoLevelParams,
    selector: StateSelector,
    n: u32,
    steps: usize,
    f0: f64,
    strategy: Strategy,
) -> Result<f64> {
    require_cycles(n)?;
    require_steps(steps)?;
    let span = n as f64 * params.period()?;
    let grid = UniformGrid::new(0.0, span, steps);
    Ok(grid.trapezoid(strategy, |t| {
        let s = tilde_state_of(params, selector, f0, t);
        s.inner(&tilde_state_derivative(params, selector, f0, t)).re
    }))
}

/// Discrete geometric phase `-arg <s0|s1><s1|s2>...<s_{m-1}|s0>`.
///
/// The result is the sum of the principal arguments of the individual
/// overlaps; it is meaningful modulo 2 pi. Invariant under independent
/// phase changes of every state.
pub fn pancharatnam_phase(states: &[QubitState]) -> Result<f64> {
    let m = states.len();
    if m < 3 {
        return Err(Error::TooFewStates { len: m });
    }
    let mut acc = 0.0;
    for k in 0..m {
        let next = (k + 1) % m;
        let z = states[k].inner(&states[next]);
        let magnitude = z.norm();
        if magnitude < ZERO_OVERLAP {
            return Err(Error::ZeroOverlap {
                index: k,
                next,
                magnitude,
            });
        }
        acc += z.arg();
    }
    Ok(-acc)
}

/// `samples` states of the exact trajectory at `t_k = k nT / samples`,
/// `k = 0..samples`, i.e. the closed cycle without its repeated endpoint.
pub fn sample_trajectory(
    params: &TwoLevelParams,
    selector: StateSelector,
    n: u32,
    samples: usize,
    strategy: Strategy,
) -> Result<Vec<QubitState>> {
    require_cycles(n)?;
    let span = n as f64 * params.period()?;
    let dt = span / samples as f64;
    Ok(strategy.sample(samples, |k| evolve(params, selector, k as f64 * dt)))
}

/// [`pancharatnam_phase`] of `samples` points along `n` cycles.
pub fn pancharatnam_trajectory_phase(
    params: &TwoLevelParams,
    selector: StateSelector,
    n: u32,
    samples: usize,
) -> Result<f64> {
    let states = sample_trajectory(params, selector, n, samples, Strategy::default())?;
    pancharatnam_phase(&states)
}

/// `total = dynamical + geometric` with its closure residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseDecomposition {
    pub total: f64,
    pub dynamical: f64,
    pub geometric: f64,
    pub residual: f64,
}

impl PhaseDecomposition {
    pub fn new(total: f64, dynamical: f64, geometric: f64) -> Self {
        Self {
            total,
            dynamical,
            geometric,
            residual: (total - dynamical - geometric).abs(),
        }
    }
}

/// Tracked total phase against the closed-form dynamical and geometric
/// parts.
pub fn decompose(
    params: &TwoLevelParams,
    selector: StateSelector,
    n: u32,
) -> Result<PhaseDecomposition> {
    Ok(PhaseDecomposition::new(
        total_phase(params, selector, n)?,
        dynamical_phase(params, selector, n)?,
        geometric_phase(params, selector, n)?,
    ))
}

/// Tracked total phase against both quadrature oracles.
pub fn decompose_numeric(
    params: &TwoLevelParams,
    selector: StateSelector,
    n: u32,
    steps: usize,
) -> Result<PhaseDecomposition> {
    Ok(PhaseDecomposition::new(
        total_phase(params, selector, n)?,
        dynamical_phase_numeric(params, selector, n, steps)?,
        geometric_phase_numeric(params, selector, n, steps, 0.0)?,
    ))
}
