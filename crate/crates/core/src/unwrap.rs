//! Continuous tracking of a complex argument.

use std::f64::consts::{PI, TAU};

/// Lifts a sequence of principal arguments to a continuous phase by counting
/// whole turns. Consecutive samples must differ by less than pi in the lifted
/// phase for the lift to be meaningful.
#[derive(Debug, Clone, Default)]
pub struct PhaseTracker {
    prev: Option<f64>,
    turns: i64,
}

impl PhaseTracker {
    pub fn new() -> Self {
        Self::default()
    }

    /// Feeds the next principal argument in (-pi, pi] and returns the
    /// lifted phase.
    pub fn push(&mut self, raw: f64) -> f64 {
        if let Some(prev) = self.prev {
            let diff = raw - prev;
            if diff > PI {
                self.turns -= 1;
            } else if diff < -PI {
                self.turns += 1;
            }
        }
        self.prev = Some(raw);
        raw + TAU * self.turns as f64
    }

    pub fn turns(&self) -> i64 {
        self.turns
    }
}

/// Lifts a whole sequence; the first element is taken as is.
pub fn unwrap_phases(raw: &[f64]) -> Vec<f64> {
    let mut tracker = PhaseTracker::new();
    raw.iter().map(|&x| tracker.push(x)).collect()
}

/// Reduces an angle to (-pi, pi].
pub fn wrap_to_pi(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Distance between two angles on the circle, in [0, pi].
pub fn angular_distance(a: f64, b: f64) -> f64 {
    wrap_to_pi(a - b).abs()
}
