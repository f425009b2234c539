//! Effective run configuration: built-in defaults, overridden by a flat
//! `key = value` file, overridden by command-line flags.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format `{other}` (expected json or csv)")),
        }
    }
}

impl Format {
    pub fn as_str(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaKind {
    Zero,
    Linear,
    Sine,
}

impl FromStr for LambdaKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "zero" => Ok(LambdaKind::Zero),
            "linear" => Ok(LambdaKind::Linear),
            "sine" => Ok(LambdaKind::Sine),
            other => Err(format!(
                "unknown gauge function `{other}` (zero, linear, sine)"
            )),
        }
    }
}

impl LambdaKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LambdaKind::Zero => "zero",
            LambdaKind::Linear => "linear",
            LambdaKind::Sine => "sine",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Theta,
    Omega1,
    Omega2,
    N,
}

impl FromStr for SweepParam {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "theta" => Ok(SweepParam::Theta),
            "omega1" => Ok(SweepParam::Omega1),
            "omega2" => Ok(SweepParam::Omega2),
            "n" => Ok(SweepParam::N),
            other => Err(format!("unknown sweep parameter `{other}`")),
        }
    }
}

impl SweepParam {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepParam::Theta => "theta",
            SweepParam::Omega1 => "omega1",
            SweepParam::Omega2 => "omega2",
            SweepParam::N => "n",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    BetaPhi,
    BetaPsi,
    TotalPhi,
    DynamicalPhi,
    Sn,
}

impl Quantity {
    pub const ALL: [Quantity; 5] = [
        Quantity::BetaPhi,
        Quantity::BetaPsi,
        Quantity::TotalPhi,
        Quantity::DynamicalPhi,
        Quantity::Sn,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Quantity::BetaPhi => "beta_phi",
            Quantity::BetaPsi => "beta_psi",
            Quantity::TotalPhi => "total_phi",
            Quantity::DynamicalPhi => "dynamical_phi",
            Quantity::Sn => "s_n",
        }
    }
}

impl FromStr for Quantity {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.as_str() == s)
            .ok_or_else(|| format!("unknown quantity `{s}`"))
    }
}

/// Swept parameter and its range.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.count < 2 {
            return Err(CliError::Config(format!(
                "sweep count must be >= 2, got {}",
                self.count
            )));
        }
        if self.start == self.stop {
            return Err(CliError::Config("sweep start and stop must differ".into()));
        }
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(CliError::Config("sweep range must be finite".into()));
        }
        if self.param == SweepParam::N {
            for v in [self.start, self.stop] {
                if v < 1.0 || v.fract() != 0.0 {
                    return Err(CliError::Config(format!(
                        "an n sweep needs positive integer bounds, got {v}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|k| {
                let v = if k == self.count - 1 {
                    self.stop
                } else {
                    self.start + step * k as f64
                };
                if self.param == SweepParam::N {
                    v.round()
                } else {
                    v
                }
            })
            .collect()
    }
}

/// Every option any subcommand reads. Subcommands ignore the keys they do
/// not use; the full set is echoed so a run can be reproduced from it.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub omega1: f64,
    pub omega2: f64,
    pub theta: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub n: u32,
    pub steps: usize,
    pub samples: usize,
    pub selector: String,
    /// `None` means one period.
    pub t_max: Option<f64>,
    pub points: usize,
    pub oracle: bool,
    pub dt: f64,
    pub t: Vec<f64>,
    pub lambda: Vec<LambdaKind>,
    pub lambda_c: f64,
    pub f0: f64,
    pub fd_step: f64,
    pub sweep: SweepSpec,
    pub quantity: Vec<Quantity>,
    pub format: Format,
    pub reproducible: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            omega1: 1.0,
            omega2: 2.0,
            theta: std::f64::consts::FRAC_PI_6,
            gamma1: 0.0,
            gamma2: 0.0,
            n: 1,
            steps: 100_000,
            samples: 10_000,
            selector: "phi".into(),
            t_max: None,
            points: 100,
            oracle: false,
            dt: 1e-4,
            t: vec![0.5, 0.9, 1.3],
            lambda: vec![LambdaKind::Zero, LambdaKind::Linear, LambdaKind::Sine],
            lambda_c: 0.5,
            f0: 0.0,
            fd_step: 1e-6,
            sweep: SweepSpec {
                param: SweepParam::Theta,
                start: 0.0,
                stop: std::f64::consts::FRAC_PI_2,
                count: 9,
            },
            quantity: Quantity::ALL.to_vec(),
            format: Format::Csv,
            reproducible: false,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    value
        .trim()
        .parse()
        .map_err(|e| CliError::Config(format!("bad value for `{key}`: {e}")))
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse(key, s))
        .collect()
}

fn join<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    items.iter().map(f).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "omega1" => self.omega1 = parse(key, value)?,
            "omega2" => self.omega2 = parse(key, value)?,
            "theta" => self.theta = parse(key, value)?,
            "gamma1" => self.gamma1 = parse(key, value)?,
            "gamma2" => self.gamma2 = parse(key, value)?,
            "n" => self.n = parse(key, value)?,
            "steps" => self.steps = parse(key, value)?,
            "samples" => self.samples = parse(key, value)?,
            "selector" => {
                let v = value.trim();
                if v != "phi" && v != "psi" {
                    return Err(CliError::Config(format!(
                        "selector must be phi or psi, got `{v}`"
                    )));
                }
                self.selector = v.to_string();
            }
            "t-max" => {
                self.t_max = match value.trim() {
                    "period" => None,
                    v => Some(parse(key, v)?),
                }
            }
            "points" => self.points = parse(key, value)?,
            "oracle" => self.oracle = parse(key, value)?,
            "dt" => self.dt = parse(key, value)?,
            "t" => self.t = parse_list(key, value)?,
            "lambda" => self.lambda = parse_list(key, value)?,
            "lambda-c" => self.lambda_c = parse(key, value)?,
            "f0" => self.f0 = parse(key, value)?,
            "fd-step" => self.fd_step = parse(key, value)?,
            "param" => self.sweep.param = parse(key, value)?,
            "start" => self.sweep.start = parse(key, value)?,
            "stop" => self.sweep.stop = parse(key, value)?,
            "count" => self.sweep.count = parse(key, value)?,
            "quantity" => self.quantity = parse_list(key, value)?,
            "format" => self.format = parse(key, value)?,
            "reproducible" => self.reproducible = parse(key, value)?,
            other => return Err(CliError::Config(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    /// Parses a flat `key = value` document on top of `self`. Blank lines
    /// and lines starting with `#` are ignored.
    pub fn apply_kv(&mut self, text: &str) -> Result<(), CliError> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn from_kv(text: &str) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        cfg.apply_kv(text)?;
        Ok(cfg)
    }

    /// Ordered `(key, value)` pairs; values use the shortest round-trip
    /// representation of each float.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        vec![
            ("omega1", self.omega1.to_string()),
            ("omega2", self.omega2.to_string()),
            ("theta", self.theta.to_string()),
            ("gamma1", self.gamma1.to_string()),
            ("gamma2", self.gamma2.to_string()),
            ("n", self.n.to_string()),
            ("steps", self.steps.to_string()),
            ("samples", self.samples.to_string()),
            ("selector", self.selector.clone()),
            (
                "t-max",
                self.t_max
                    .map_or_else(|| "period".to_string(), |v| v.to_string()),
            ),
            ("points", self.points.to_string()),
            ("oracle", self.oracle.to_string()),
            ("dt", self.dt.to_string()),
            ("t", join(&self.t, |v| v.to_string())),
            ("lambda", join(&self.lambda, |v| v.as_str().to_string())),
            ("lambda-c", self.lambda_c.to_string()),
            ("f0", self.f0.to_string()),
            ("fd-step", self.fd_step.to_string()),
            ("param", self.sweep.param.as_str().to_string()),
            ("start", self.sweep.start.to_string()),
            ("stop", self.sweep.stop.to_string()),
            ("count", self.sweep.count.to_string()),
            ("quantity", join(&self.quantity, |v| v.as_str().to_string())),
            ("format", self.format.as_str().to_string()),
            ("reproducible", self.reproducible.to_string()),
        ]
    }

    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.entries() {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }

    pub fn params(&self) -> Result<geophase::TwoLevelParams, CliError> {
        Ok(geophase::make_params(
            self.omega1,
            self.omega2,
            self.theta,
            self.gamma1,
            self.gamma2,
        )?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_unknown_and_malformed() {
        assert!(RunConfig::from_kv("bogus = 1").is_err());
        assert!(RunConfig::from_kv("theta 1").is_err());
        assert!(RunConfig::from_kv("theta = abc").is_err());
        assert!(RunConfig::from_kv("format = xml").is_err());
    }

    #[test]
    fn comments_and_blanks() {
        let cfg =
            RunConfig::from_kv("# a comment\n\n  theta = 0.25 \nlambda = zero, sine\n").unwrap();
        assert_eq!(cfg.theta, 0.25);
        assert_eq!(cfg.lambda, vec![LambdaKind::Zero, LambdaKind::Sine]);
    }

    #[test]
    fn sweep_validation() {
        let mut s = SweepSpec {
            param: SweepParam::N,
            start: 1.0,
            stop: 5.0,
            count: 5,
        };
        assert!(s.validate().is_ok());
        assert_eq!(s.values(), vec![1.0, 2.0, 3.0, 4.0, 5.0]);
        s.count = 1;
        assert!(s.validate().is_err());
        s.count = 3;
        s.stop = 1.0;
        assert!(s.validate().is_err());
        s.param = SweepParam::Theta;
        s.start = 0.0;
        assert!(s.validate().is_ok());
    }

    proptest! {
        #[test]
        fn kv_round_trip(
            w1 in -1e3..1e3f64,
            theta in -10.0..10.0f64,
            n in 1u32..100,
            ts in prop::collection::vec(-1e2..1e2f64, 1..5),
            t_max in prop::option::of(0.0..1e3f64),
            csv in any::<bool>(),
        ) {
            let cfg = RunConfig {
                omega1: w1,
                theta,
                n,
                t: ts,
                t_max,
                format: if csv { Format::Csv } else { Format::Json },
                ..RunConfig::default()
            };
            let back = RunConfig::from_kv(&cfg.to_kv()).unwrap();
            prop_assert_eq!(back, cfg);
        }
    }
}
