//! The five subcommands. Each turns a [`RunConfig`] into a [`Report`].

use std::f64::consts::TAU;

use geophase::exec::UniformGrid;
use geophase::gauge::{self, ConstantGauge, Derivative, GaugeParameter, LinearGauge, SineGauge};
use geophase::integrator::evolve_numeric;
use geophase::phase;
use geophase::qubit::evolve;
use geophase::thermo;
use geophase::unwrap::angular_distance;
use geophase::{
    basis_states, hamiltonian_elements, make_params, Error, QubitState, StateSelector, Strategy,
    TwoLevelParams,
};

use crate::config::{LambdaKind, Quantity, RunConfig, SweepParam};
use crate::output::{Cell, Report, Status, Table};
use crate::CliError;

pub const NORM_TOL: f64 = 1e-12;
pub const RK4_TOL: f64 = 1e-8;
pub const CLOSURE_TOL: f64 = 1e-9;
pub const GEOMETRIC_TOL: f64 = 1e-6;
pub const PANCHARATNAM_TOL: f64 = 1e-4;
pub const INVARIANT_TOL: f64 = 1e-8;
pub const OPERATOR_TOL: f64 = 1e-12;
pub const TILDE_TOL: f64 = 1e-12;
pub const FD_TOL: f64 = 1e-7;
pub const ANALYTIC_TOL: f64 = 1e-12;
pub const TRANSFORMATION_TOL: f64 = 1e-10;
pub const COVARIANCE_TOL: f64 = 1e-6;

fn selector(name: &str) -> StateSelector {
    match name {
        "psi" => StateSelector::Psi,
        _ => StateSelector::Phi,
    }
}

fn check(value: f64, tol: f64) -> Status {
    if value <= tol {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn worst(statuses: impl IntoIterator<Item = Status>) -> Status {
    let mut out = Status::Pass;
    for s in statuses {
        match s {
            Status::Fail => return Status::Fail,
            Status::Skipped => out = Status::Skipped,
            Status::Pass => {}
        }
    }
    out
}

fn max_component_deviation(a: &QubitState, b: &QubitState) -> f64 {
    (a.amp0 - b.amp0).norm().max((a.amp1 - b.amp1).norm())
}

pub fn evolve_cmd(cfg: &RunConfig) -> Result<Report, CliError> {
    let params = cfg.params()?;
    let period = params.period()?;
    let t_max = cfg.t_max.unwrap_or(period.abs());
    if !t_max.is_finite() || t_max <= 0.0 {
        return Err(CliError::Config(format!(
            "t-max must be positive, got {t_max}"
        )));
    }
    if cfg.points < 2 {
        return Err(CliError::Config(format!(
            "points must be >= 2, got {}",
            cfg.points
        )));
    }
    let sel = selector(&cfg.selector);
    let grid = UniformGrid::new(0.0, t_max, cfg.points - 1);
    let start = basis_states(&params).get(sel);
    let exact = Strategy::default().sample(grid.len(), |k| evolve(&params, sel, grid.node(k)));

    let mut columns = vec![
        "t",
        "re_amp0",
        "im_amp0",
        "re_amp1",
        "im_amp1",
        "norm",
        "re_overlap",
        "im_overlap",
    ];
    if cfg.oracle {
        columns.extend([
            "rk4_re_amp0",
            "rk4_im_amp0",
            "rk4_re_amp1",
            "rk4_im_amp1",
            "rk4_norm",
            "deviation",
        ]);
    }
    let mut table = Table::new(columns);
    let mut statuses = Vec::new();
    let mut numeric = start;
    for (k, s) in exact.iter().enumerate() {
        let t = grid.node(k);
        let overlap = start.inner(s);
        let norm = s.norm();
        statuses.push(check((norm - 1.0).abs(), NORM_TOL));
        let mut row: Vec<Cell> = vec![
            t.into(),
            s.amp0.re.into(),
            s.amp0.im.into(),
            s.amp1.re.into(),
            s.amp1.im.into(),
            norm.into(),
            overlap.re.into(),
            overlap.im.into(),
        ];
        if cfg.oracle {
            if k > 0 {
                numeric = evolve_numeric(&params, numeric, t - grid.node(k - 1), cfg.dt)?;
            }
            let dev = max_component_deviation(&numeric, s);
            statuses.push(check(dev, RK4_TOL));
            row.extend([
                numeric.amp0.re.into(),
                numeric.amp0.im.into(),
                numeric.amp1.re.into(),
                numeric.amp1.im.into(),
                numeric.norm().into(),
                dev.into(),
            ]);
        }
        table.push(row);
    }
    Ok(Report {
        command: "evolve",
        status: worst(statuses),
        table,
    })
}

pub fn phase_cmd(cfg: &RunConfig) -> Result<Report, CliError> {
    let params = cfg.params()?;
    params.period()?;
    let mut table = Table::new(vec![
        "selector",
        "n",
        "total",
        "dynamical",
        "geometric",
        "geometric_numeric",
        "pancharatnam",
        "closure_residual",
        "numeric_error",
        "pancharatnam_error",
        "status",
    ]);
    let mut statuses = Vec::new();
    for sel in StateSelector::BOTH {
        let d = phase::decompose(&params, sel, cfg.n)?;
        let numeric = phase::geometric_phase_numeric(&params, sel, cfg.n, cfg.steps, cfg.f0)?;
        let panch = phase::pancharatnam_trajectory_phase(&params, sel, cfg.n, cfg.samples)?;
        let numeric_error = (numeric - d.geometric).abs();
        let panch_error = angular_distance(panch, d.geometric);
        let status = worst([
            check(d.residual, CLOSURE_TOL),
            check(numeric_error, GEOMETRIC_TOL),
            check(panch_error, PANCHARATNAM_TOL),
        ]);
        statuses.push(status);
        table.push(vec![
            sel.name().into(),
            cfg.n.into(),
            d.total.into(),
            d.dynamical.into(),
            d.geometric.into(),
            numeric.into(),
            panch.into(),
            d.residual.into(),
            numeric_error.into(),
            panch_error.into(),
            status.as_str().into(),
        ]);
    }
    Ok(Report {
        command: "phase",
        status: worst(statuses),
        table,
    })
}

fn lambda_of(kind: LambdaKind, c: f64) -> Box<dyn GaugeParameter> {
    match kind {
        LambdaKind::Zero => Box::new(ConstantGauge(0.0)),
        LambdaKind::Linear => Box::new(LinearGauge(c)),
        LambdaKind::Sine => Box::new(SineGauge::default()),
    }
}

struct GaugeRows {
    table: Table,
    statuses: Vec<Status>,
}

impl GaugeRows {
    fn push(&mut self, name: &str, t: f64, lambda: &str, value: f64, tol: f64, note: &str) {
        let status = check(value, tol);
        self.statuses.push(status);
        self.row(name, t, lambda, value, tol, status.as_str(), note);
    }

    /// Recorded but never counted towards the command status.
    fn diagnostic(&mut self, name: &str, t: f64, lambda: &str, value: f64, tol: f64, note: &str) {
        self.row(name, t, lambda, value, tol, "diagnostic", note);
    }

    fn skip(&mut self, name: &str, t: f64, lambda: &str, tol: f64) {
        self.statuses.push(Status::Skipped);
        self.row(
            name,
            t,
            lambda,
            f64::NAN,
            tol,
            "skipped",
            "skipped: infinite coupling",
        );
    }

    #[allow(clippy::too_many_arguments)]
    fn row(
        &mut self,
        name: &str,
        t: f64,
        lambda: &str,
        value: f64,
        tol: f64,
        status: &str,
        note: &str,
    ) {
        self.table.push(vec![
            name.into(),
            t.into(),
            lambda.into(),
            value.into(),
            tol.into(),
            status.into(),
            note.into(),
        ]);
    }
}

const LITERAL_NOTE: &str =
    "untransformed omega_d; nonzero whenever the rotation does not commute with omega_d";

pub fn gauge_check_cmd(cfg: &RunConfig) -> Result<Report, CliError> {
    let params = cfg.params()?;
    let period = params.period()?;
    if cfg.t.is_empty() {
        return Err(CliError::Config(
            "gauge-check needs at least one t value".into(),
        ));
    }
    if cfg.fd_step.is_nan() || cfg.fd_step <= 0.0 {
        return Err(CliError::Config(format!(
            "fd-step must be positive, got {}",
            cfg.fd_step
        )));
    }
    let fd = Derivative::Central { step: cfg.fd_step };
    let mut rows = GaugeRows {
        table: Table::new(vec![
            "check",
            "t",
            "lambda",
            "value",
            "tolerance",
            "status",
            "note",
        ]),
        statuses: Vec::new(),
    };

    let strength = gauge::field_strength(&params, &cfg.t)?;
    rows.push(
        "field_strength",
        f64::NAN,
        "none",
        strength,
        OPERATOR_TOL,
        "",
    );
    for &t in &cfg.t {
        let tau = t.rem_euclid(period.abs());
        let (shifted, reduced) = gauge::tilde_overlap_invariance(&params, cfg.f0, cfg.n, tau)?;
        rows.push(
            "tilde_overlap_invariance",
            t,
            "none",
            (shifted - reduced).norm(),
            TILDE_TOL,
            "",
        );
        rows.push(
            "filtered_evolution_fd",
            t,
            "none",
            gauge::filtered_evolution_residual(&params, cfg.f0, t, fd),
            FD_TOL,
            "",
        );
        rows.push(
            "filtered_evolution_analytic",
            t,
            "none",
            gauge::filtered_evolution_residual(&params, cfg.f0, t, Derivative::Analytic),
            ANALYTIC_TOL,
            "",
        );
        rows.push(
            "doublet_motion_fd",
            t,
            "none",
            gauge::doublet_motion_residual(&params, t, fd).combined(),
            FD_TOL,
            "",
        );
        for &kind in &cfg.lambda {
            let name = kind.as_str();
            if params.is_coupling_singular() {
                rows.skip("transformation_law", t, name, TRANSFORMATION_TOL);
                rows.skip("covariance", t, name, COVARIANCE_TOL);
                rows.skip("covariant_motion", t, name, COVARIANCE_TOL);
                rows.skip("transformed_motion_literal", t, name, COVARIANCE_TOL);
                continue;
            }
            let lambda = lambda_of(kind, cfg.lambda_c);
            let lambda = lambda.as_ref();
            rows.push(
                "transformation_law",
                t,
                name,
                gauge::transformation_law_residual(&params, lambda, t)?,
                TRANSFORMATION_TOL,
                "",
            );
            rows.push(
                "covariance",
                t,
                name,
                gauge::covariance_residual(&params, lambda, t, fd)?,
                COVARIANCE_TOL,
                "",
            );
            rows.push(
                "covariant_motion",
                t,
                name,
                gauge::covariant_motion_residual(&params, lambda, t, fd)?,
                COVARIANCE_TOL,
                "transformed omega_d",
            );
            rows.diagnostic(
                "transformed_motion_literal",
                t,
                name,
                gauge::transformed_motion_residual(&params, lambda, t, fd)?,
                COVARIANCE_TOL,
                LITERAL_NOTE,
            );
        }
    }
    Ok(Report {
        command: "gauge-check",
        status: worst(rows.statuses),
        table: rows.table,
    })
}

pub fn invariant_cmd(cfg: &RunConfig) -> Result<Report, CliError> {
    let params = cfg.params()?;
    let period = params.period()?;
    if cfg.points < 2 {
        return Err(CliError::Config(format!(
            "points must be >= 2, got {}",
            cfg.points
        )));
    }
    let e = hamiltonian_elements(&params);
    let inv = thermo::aa_invariant(&params, cfg.n)?;
    let integral = thermo::entropy_action_integral(&params, cfg.n, cfg.steps)?;
    // 2 * integral_0^{nT} omega_phipsi dt with a time-independent integrand
    let reference = 2.0 * cfg.n as f64 * period * e.omega_phipsi;

    let grid = UniformGrid::new(0.0, period.abs(), cfg.points - 1);
    let closure = Strategy::default()
        .sample(grid.len(), |k| {
            let t = grid.node(k);
            let d = thermo::thermo_decomposition(&params, t);
            (d.f_op + d.ts_op - params.hamiltonian()).max_norm()
        })
        .into_iter()
        .fold(0.0, f64::max);

    let mut table = Table::new(vec![
        "quantity",
        "t",
        "value",
        "reference",
        "abs_error",
        "tolerance",
        "status",
    ]);
    let mut statuses = Vec::new();
    let mut push = |name: &str, t: f64, value: f64, reference: f64, tol: f64| {
        let err = (value - reference).abs();
        let status = check(err, tol);
        statuses.push(status);
        table.push(vec![
            name.into(),
            t.into(),
            value.into(),
            reference.into(),
            err.into(),
            tol.into(),
            status.as_str().into(),
        ]);
    };
    push("s_n", f64::NAN, inv.s_n, reference, INVARIANT_TOL);
    push("entropy_action", f64::NAN, integral, inv.s_n, INVARIANT_TOL);
    push(
        "decomposition_closure",
        f64::NAN,
        closure,
        0.0,
        OPERATOR_TOL,
    );
    for &t in &cfg.t {
        let (spread, w) = thermo::variance_link(&params, t);
        push("energy_spread", t, spread, w.abs(), OPERATOR_TOL);
    }
    Ok(Report {
        command: "invariant",
        status: worst(statuses),
        table,
    })
}

fn sweep_params(
    cfg: &RunConfig,
    param: SweepParam,
    v: f64,
) -> geophase::Result<(TwoLevelParams, u32)> {
    let (mut w1, mut w2, mut th, mut n) = (cfg.omega1, cfg.omega2, cfg.theta, cfg.n);
    match param {
        SweepParam::Theta => th = v,
        SweepParam::Omega1 => w1 = v,
        SweepParam::Omega2 => w2 = v,
        SweepParam::N => n = v as u32,
    }
    Ok((make_params(w1, w2, th, cfg.gamma1, cfg.gamma2)?, n))
}

fn sweep_point(
    p: &TwoLevelParams,
    n: u32,
    q: Quantity,
    steps: usize,
) -> geophase::Result<(f64, f64)> {
    use StateSelector::{Phi, Psi};
    Ok(match q {
        Quantity::BetaPhi => (
            phase::geometric_phase(p, Phi, n)?,
            phase::geometric_phase_numeric(p, Phi, n, steps, 0.0)?,
        ),
        Quantity::BetaPsi => (
            phase::geometric_phase(p, Psi, n)?,
            phase::geometric_phase_numeric(p, Psi, n, steps, 0.0)?,
        ),
        Quantity::TotalPhi => (
            -TAU * n as f64 * p.omega1() / p.omega_minus(),
            phase::total_phase(p, Phi, n)?,
        ),
        Quantity::DynamicalPhi => (
            phase::dynamical_phase(p, Phi, n)?,
            phase::dynamical_phase_numeric(p, Phi, n, steps)?,
        ),
        Quantity::Sn => (
            thermo::aa_invariant(p, n)?.s_n,
            thermo::entropy_action_integral(p, n, steps)?,
        ),
    })
}

pub fn sweep_cmd(cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.sweep.validate()?;
    if cfg.quantity.is_empty() {
        return Err(CliError::Config("sweep needs at least one quantity".into()));
    }
    let values = cfg.sweep.values();
    let param = cfg.sweep.param;
    // Points run concurrently; rows are assembled in sweep order.
    let points = Strategy::default().sample(values.len(), |k| {
        let v = values[k];
        cfg.quantity
            .iter()
            .map(|&q| {
                let pair =
                    sweep_params(cfg, param, v).and_then(|(p, n)| sweep_point(&p, n, q, cfg.steps));
                match pair {
                    Ok(pair) => Ok(pair),
                    Err(Error::DegenerateSpectrum { .. }) => Ok((f64::NAN, f64::NAN)),
                    Err(e) => Err(e),
                }
            })
            .collect::<geophase::Result<Vec<_>>>()
    });

    let mut table = Table::new(vec![
        "swept_value",
        "quantity",
        "closed_form",
        "numeric",
        "abs_error",
    ]);
    for (v, results) in values.iter().zip(points) {
        for (q, (closed, numeric)) in cfg.quantity.iter().zip(results?) {
            table.push(vec![
                (*v).into(),
                q.as_str().into(),
                closed.into(),
                numeric.into(),
                (numeric - closed).abs().into(),
            ]);
        }
    }
    Ok(Report {
        command: "sweep",
        status: Status::Pass,
        table,
    })
}
