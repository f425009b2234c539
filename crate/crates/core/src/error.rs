use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter `{name}` must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("degenerate spectrum: omega1 == omega2 == {omega}, the period is undefined")]
    DegenerateSpectrum { omega: f64 },

    #[error("integrator step {dt} exceeds the limit {limit} (|T|/100)")]
    StepTooLarge { dt: f64, limit: f64 },

    #[error("overlap between states {index} and {next} vanishes (|<s|s'>| = {magnitude:e})")]
    ZeroOverlap {
        index: usize,
        next: usize,
        magnitude: f64,
    },

    #[error("a closed overlap product needs at least 3 states, got {len}")]
    TooFewStates { len: usize },

    #[error("coupling g = tan(2 theta) is infinite at theta = {theta}")]
    InfiniteCoupling { theta: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
