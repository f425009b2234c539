//! Fixed-step RK4 for `i d/dt |s> = H |s>` with `H = diag(omega1, omega2)`.
//!
//! Serves as an oracle for the closed-form evolution, so it integrates the
//! Schrodinger equation directly and never renormalizes: norm drift is part
//! of what it reports.

use crate::error::{Error, Result};
use crate::linalg::{QubitState, C64};
use crate::qubit::TwoLevelParams;

/// Largest permitted step as a fraction of `|T|`.
pub const MAX_STEP_FRACTION: f64 = 0.01;

const MINUS_I: C64 = C64::new(0.0, -1.0);

fn rhs(params: &TwoLevelParams, s: &QubitState) -> QubitState {
    QubitState::new(
        MINUS_I * params.omega1() * s.amp0,
        MINUS_I * params.omega2() * s.amp1,
    )
}

/// Integrates `state0` from `t = 0` to `t_final`.
///
/// The interval is split into `ceil(t_final / dt)` equal steps, so the step
/// actually taken never exceeds `dt`.
pub fn evolve_numeric(
    params: &TwoLevelParams,
    state0: QubitState,
    t_final: f64,
    dt: f64,
) -> Result<QubitState> {
    if !dt.is_finite() || dt <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "step must be positive, got {dt}"
        )));
    }
    if !t_final.is_finite() || t_final < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "final time must be finite and non-negative, got {t_final}"
        )));
    }
    if let Ok(period) = params.period() {
        let limit = period.abs() * MAX_STEP_FRACTION;
        if dt > limit {
            return Err(Error::StepTooLarge { dt, limit });
        }
    }
    if t_final == 0.0 {
        return Ok(state0);
    }

    let steps = (t_final / dt).ceil() as usize;
    let h = t_final / steps as f64;
    let mut s = state0;
    for _ in 0..steps {
        let k1 = rhs(params, &s);
        let k2 = rhs(params, &(s + (0.5 * h) * k1));
        let k3 = rhs(params, &(s + (0.5 * h) * k2));
        let k4 = rhs(params, &(s + h * k3));
        s = s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    Ok(s)
}
