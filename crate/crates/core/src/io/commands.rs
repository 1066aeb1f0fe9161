//! The six `vdwe` subcommands. Each writes its artifacts under the output
//! directory and returns a [`RunRecord`] whose verdicts decide the exit
//! status.

use std::fmt;
use std::fs;
use std::path::Path;

use super::config::{Config, ConfigIssue};
use super::output::{self, write_columns, write_file};
use super::record::RunRecord;
use super::snapshot;
use crate::background::{sample_box, BackgroundFlow, Point};
use crate::checks::{self, Verdict};
use crate::diagnostics::inequalities::{enrichment_study, sup_by_energy, SampleFamily};
use crate::diagnostics::{decay_fit, ComparisonFunction};
use crate::error::{Error, Result};
use crate::solver::mms;
use crate::solver::run::{run, scheme_config, RunFailure, RunOutput};
use crate::thermo::{self, ThermoState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Simulate,
    ConeTest,
    EosCheck,
    BackgroundCheck,
    InequalitySuite,
    Diagnose,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::ConeTest => "cone-test",
            Command::EosCheck => "eos-check",
            Command::BackgroundCheck => "background-check",
            Command::InequalitySuite => "inequality-suite",
            Command::Diagnose => "diagnose",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_BLOW_UP: i32 = 3;
pub const EXIT_CHECK_FAILED: i32 = 4;

/// Exit status for an error escaping a command.
pub fn exit_code(error: &Error) -> i32 {
    match error {
        Error::Config(_)
        | Error::InvalidGas(_)
        | Error::HypothesisViolated(_)
        | Error::InvalidArgument(_)
        | Error::DomainTooSmall { .. }
        | Error::DensityOutOfDomain { .. }
        | Error::DimensionMismatch { .. } => EXIT_CONFIG,
        Error::BlowUp { .. } | Error::TimeStepCollapse { .. } | Error::DomainMarginExhausted { .. } => EXIT_BLOW_UP,
        Error::PositivityViolation { .. } => EXIT_CHECK_FAILED,
        _ => EXIT_OTHER,
    }
}

/// Exit status of a completed command.
pub fn record_status(record: &RunRecord) -> i32 {
    if record.all_passed() {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

/// A command that stopped on an error after writing what it had.
#[derive(Debug)]
pub struct CommandFailure {
    pub error: Error,
    pub record: Option<Box<RunRecord>>,
}

impl From<Error> for CommandFailure {
    fn from(error: Error) -> Self {
        Self { error, record: None }
    }
}

/// Runs `command` and writes its artifacts under `out`.
pub fn execute(command: Command, config: &Config, out: &Path) -> Result<RunRecord, CommandFailure> {
    config.validate()?;
    fs::create_dir_all(out).map_err(|e| Error::Io(format!("{}: {e}", out.display())))?;
    let mut record = RunRecord::new(command.name(), config);
    let outcome = match command {
        Command::Simulate => simulate(config, out, &mut record),
        Command::ConeTest => cone_test(config, out, &mut record),
        Command::EosCheck => eos_check(config, out, &mut record),
        Command::BackgroundCheck => background_check(config, out, &mut record),
        Command::InequalitySuite => inequality_suite(config, out, &mut record),
        Command::Diagnose => diagnose(config, out, &mut record),
    };
    let written = record.write(out);
    match outcome.and(written) {
        Ok(()) => Ok(record),
        Err(error) => Err(CommandFailure { error, record: Some(Box::new(record)) }),
    }
}

fn fmt_exp(x: f64) -> String {
    format!("{x:.3e}")
}

/// Verdicts on a finished (or partial) run of the configured problem.
pub fn run_verdicts(config: &Config, out: &RunOutput) -> Vec<Verdict> {
    let mut v = Vec::new();
    let tol = config.scheme.positivity_tolerance;
    v.push(Verdict::new(
        "positivity",
        out.relative_undershoot() <= tol,
        format!("undershoot -min(pi)/max(pi0) = {} (allowed {})", fmt_exp(out.relative_undershoot()), fmt_exp(tol)),
    ));
    let gas = &config.gas;
    if gas.covolume > 0.0 {
        let max_rho = out.series.rows.iter().map(|r| r.max_rho).fold(0.0, f64::max);
        let limit = (1.0 - 1e-8) / gas.covolume;
        v.push(Verdict::new(
            "covolume bound",
            max_rho <= limit,
            format!("max rho = {} (limit {})", fmt_exp(max_rho), fmt_exp(limit)),
        ));
    }

    let trivial = out.initial.max_abs() == 0.0;
    let d = &config.diagnostics;
    let last = out.series.rows.last().map_or(0.0, |r| r.t);
    if trivial {
        v.push(Verdict::new("decay fits", true, "zero data, nothing decays"));
    } else if last + 1e-9 < d.fit_end {
        v.push(Verdict::new(
            "decay fits",
            false,
            format!("run ended at t = {last:.3}, before the fit window [{}, {}] closed", d.fit_start, d.fit_end),
        ));
    } else {
        for k in 0..=d.m {
            let predicted = out.series.config.predicted_exponent(k);
            match out.series.fit(k, (d.fit_start, d.fit_end)) {
                Ok(fit) => v.push(Verdict::new(
                    format!("decay of {}{k}", if config.scheme.general { "N" } else { "Y" }),
                    fit.passes(predicted, d.slack),
                    format!(
                        "exponent {:+.4} vs predicted {:+.4} + slack {} (rms {})",
                        fit.exponent,
                        predicted,
                        d.slack,
                        fmt_exp(fit.residual)
                    ),
                )),
                Err(e) => v.push(Verdict::new(format!("decay of Y{k}"), false, e.to_string())),
            }
        }
    }

    match out.series.envelope(out.comparison_exponent) {
        Ok(report) => v.push(Verdict::new(
            "comparison envelope",
            report.holds,
            format!(
                "C = {:.6}, nu = {}, worst zeta/envelope = {:.4}{}",
                out.series.constant,
                out.comparison_exponent,
                report.worst_ratio,
                report.first_violation.map_or(String::new(), |t| format!(", first violation at t = {t}"))
            ),
        )),
        Err(e) => v.push(Verdict::new("comparison envelope", false, e.to_string())),
    }

    let drift = &out.worst_drift;
    v.push(Verdict::new(
        "conservation",
        drift.max() <= d.conservation_tolerance,
        format!(
            "worst relative drift: mass {}, momentum {:?}, energy {} (allowed {})",
            fmt_exp(drift.mass),
            drift.momentum.iter().map(|m| fmt_exp(*m)).collect::<Vec<_>>(),
            fmt_exp(drift.energy),
            fmt_exp(d.conservation_tolerance)
        ),
    ));
    v
}

fn envelope_curve(out: &RunOutput) -> Option<Vec<f64>> {
    let cmp = ComparisonFunction::new(out.comparison_exponent, out.series.config.growth, out.series.constant).ok()?;
    let z0 = out.series.rows.first()?.zeta;
    Some(out.series.rows.iter().map(|r| cmp.envelope(z0, r.t)).collect())
}

/// Writes `series.csv`, `weighted_norms.csv`, snapshots and plot data of a run.
pub fn write_run(out_dir: &Path, out: &RunOutput) -> Result<()> {
    output::write_series(&out_dir.join("series.csv"), &out.series)?;
    output::write_weighted(&out_dir.join("weighted_norms.csv"), &out.series)?;
    let envelope = envelope_curve(out);
    output::write_plotdata(&out_dir.join("plotdata"), &out.series, envelope.as_deref())?;
    if !out.snapshots.is_empty() {
        let dir = out_dir.join("snapshots");
        fs::create_dir_all(&dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        for (i, f) in out.snapshots.iter().enumerate() {
            snapshot::write(&dir.join(format!("snapshot_{i:05}.bin")), f)?;
        }
    }
    snapshot::write(&out_dir.join("final.bin"), &out.final_fields)
}

fn simulate(config: &Config, out_dir: &Path, record: &mut RunRecord) -> Result<()> {
    let (output, error) = match run(config) {
        Ok(o) => (o, None),
        Err(RunFailure { error, partial: Some(p) }) => (*p, Some(error)),
        Err(RunFailure { error, partial: None }) => return Err(error),
    };
    write_run(out_dir, &output)?;
    record.events = output.events.clone();
    record.note(format!("{} steps, final time {}", output.steps, output.final_fields.time));
    for v in run_verdicts(config, &output) {
        record.verdict(v);
    }
    match error {
        None => Ok(()),
        Some(e) => Err(e),
    }
}

fn cone_test(config: &Config, out_dir: &Path, record: &mut RunRecord) -> Result<()> {
    let study = checks::cone_study(config)?;
    let cells: Vec<f64> = study.cells.iter().map(|&n| n as f64).collect();
    let outside: Vec<f64> = study.outside.iter().map(|r| r.discrepancy).collect();
    let inside: Vec<f64> = study.inside.iter().map(|r| r.discrepancy).collect();
    let plot = out_dir.join("plotdata");
    fs::create_dir_all(&plot).map_err(|e| Error::Io(format!("{}: {e}", plot.display())))?;
    write_columns(&plot, "cone_outside.dat", &cells, &outside)?;
    write_columns(&plot, "cone_inside.dat", &cells, &inside)?;
    for (n, r) in study.cells.iter().zip(&study.outside) {
        let (t, e): (Vec<f64>, Vec<f64>) = r.history.iter().copied().unzip();
        write_columns(&plot, &format!("cone_history_{n}.dat"), &t, &e)?;
    }
    for (n, (o, i)) in study.cells.iter().zip(study.outside.iter().zip(&study.inside)) {
        record.note(format!(
            "N = {n}: M = {:.4}, cone time {:.4}, discrepancy outside {} inside {}",
            o.speed_bound,
            o.cone_time,
            fmt_exp(o.discrepancy),
            fmt_exp(i.discrepancy)
        ));
    }
    let orders = study.outside_orders();
    let min_order = orders.iter().copied().fold(f64::INFINITY, f64::min);
    record.verdict(Verdict::new(
        "cone discrepancy refines away",
        min_order >= config.cone.min_order,
        format!(
            "observed orders {:?} (required >= {})",
            orders.iter().map(|o| format!("{o:.2}")).collect::<Vec<_>>(),
            config.cone.min_order
        ),
    ));
    let spread = study.inside_spread();
    let finest = inside.last().copied().unwrap_or(0.0);
    let floor = 0.1 * config.cone.perturbation_amplitude;
    record.verdict(Verdict::new(
        "inside-ball control stays O(1)",
        (0.5..=2.0).contains(&spread) && finest >= floor,
        format!("finest/coarsest = {spread:.3}, finest discrepancy {} (floor {})", fmt_exp(finest), fmt_exp(floor)),
    ));
    Ok(())
}

fn eos_check(config: &Config, out_dir: &Path, record: &mut RunRecord) -> Result<()> {
    let gas = config.gas_parameters()?;
    let e = &config.eos;
    let entropies = checks::linspace(e.entropy_min, e.entropy_max, 21);
    let roundtrip = checks::eos_roundtrip_error(&gas, e.densities, &entropies)?;
    record.verdict(Verdict::new(
        "rho <-> pi round trip",
        roundtrip <= e.tolerance,
        format!("max relative error {} over {}x{} states", fmt_exp(roundtrip), e.densities, entropies.len()),
    ));
    let ids = checks::identity_study(&gas, 10_000, (e.entropy_min, e.entropy_max), config.run.seed)?;
    record.verdict(Verdict::new(
        "closed-form identities",
        ids.algebraic <= e.tolerance,
        format!("max relative residual {} over {} states", fmt_exp(ids.algebraic), ids.states),
    ));
    record.verdict(Verdict::new(
        "derivative identities",
        ids.derivative <= e.fd_tolerance,
        format!("max relative residual {} against central differences", fmt_exp(ids.derivative)),
    ));
    record.verdict(Verdict::new("sign constraints", ids.constraints_hold, "gamma > 1, Gamma > 0, delta > 0, G > 1"));
    let sym = checks::symmetry_study(&gas, config.grid.dim, 10_000, config.run.seed)?;
    record.verdict(Verdict::new(
        "symmetrizability",
        sym.symbol <= 1e-13 && sym.classical <= 1e-13,
        format!(
            "relative asymmetry {} ((pi, u, s), {} vacuum draws), {} (classical)",
            fmt_exp(sym.symbol),
            sym.vacuum_draws,
            fmt_exp(sym.classical)
        ),
    ));
    record.verdict(Verdict::new(
        "speeds within bound",
        sym.speed_ratio <= 1.0 + 1e-12,
        format!("largest |eigenvalue| / speed bound = {:.6}", sym.speed_ratio),
    ));

    let mut table = String::from(
        "rho,s,pi,pressure,internal_energy,temperature,sound_speed,gamma,grueneisen,delta,fundamental,cp,gamma_star\n",
    );
    for rho in checks::linspace(0.0, checks::density_ceiling(&gas), e.densities).into_iter().skip(1) {
        for s in [e.entropy_min, 0.5 * (e.entropy_min + e.entropy_max), e.entropy_max] {
            let st = ThermoState::new(rho, s);
            let r = thermo::eos_eval(st, &gas)?;
            let cells = [
                rho,
                s,
                thermo::pi_from_state(st, &gas)?,
                r.pressure,
                r.internal_energy,
                r.temperature,
                r.sound_speed,
                r.adiabatic_exponent,
                r.grueneisen,
                r.thermal_coefficient,
                r.fundamental_derivative,
                r.cp,
                r.heat_capacity_ratio,
            ];
            table.push_str(&cells.map(output::format_number).join(","));
            table.push('\n');
        }
    }
    write_file(&out_dir.join("eos_table.csv"), &table)
}

fn background_check(config: &Config, out_dir: &Path, record: &mut RunRecord) -> Result<()> {
    let dim = config.grid.dim;
    let flow = config.background_flow()?.ok_or_else(|| {
        Error::Config(vec![ConfigIssue {
            line: None,
            key: "background.velocity".into(),
            message: "background-check needs a background velocity other than `none`".into(),
        }])
    })?;
    record.verdict(Verdict::new(
        "spectral gap",
        flow.h3().holds(),
        format!("distance of Spec(Du0) to (-inf, 0] >= {:.6} on the box", flow.h3().gap),
    ));

    let times = [0.0, 1.0, 10.0, 100.0];
    let half = config.grid.half_width;
    let points = sample_box(dim, half, if dim == 1 { 201 } else { 21 });
    let linear = checks::linear_background_error(dim, &times, &points)?;
    record.verdict(Verdict::new(
        "u0 = x closed form",
        linear <= 1e-10,
        format!("max error of ubar, D ubar, K against x/(1+t), 1/(1+t), 0: {}", fmt_exp(linear)),
    ));

    if dim == 1 {
        let u0 = flow.initial_velocity().clone();
        let xs = checks::linspace(-half, half, 41);
        let err = checks::shooting_error(&u0, &[0.0, 0.5, 2.0, 10.0, 100.0], &xs)?;
        record.verdict(Verdict::new(
            "Newton vs shooting",
            err <= 1e-10,
            format!("max |ubar_newton - ubar_shooting| = {}", fmt_exp(err)),
        ));
    }

    let profile_times: Vec<f64> =
        std::iter::once(0.0).chain(checks::linspace(-1.0, 2.0, 31).into_iter().map(|e| 10f64.powf(e))).collect();
    let labels: Vec<Point> = sample_box(dim, half, if dim == 1 { 401 } else { 41 });
    let profile = checks::background_profile(&flow, &profile_times, &labels)?;
    let plot = out_dir.join("plotdata");
    fs::create_dir_all(&plot).map_err(|e| Error::Io(format!("{}: {e}", plot.display())))?;
    write_columns(&plot, "deviation_sup.dat", &profile.times, &profile.deviation)?;
    write_columns(&plot, "hessian_sup.dat", &profile.times, &profile.hessian)?;
    record.verdict(Verdict::new(
        "K bounded on [0, 100]",
        profile.deviation.iter().all(|k| k.is_finite()),
        format!("sup |K| = {:.6}", profile.max_deviation()),
    ));
    if profile.hessian.iter().all(|&h| h > 0.0) {
        let fit = profile.hessian_decay((10.0, 100.0))?;
        record.verdict(Verdict::new(
            "Hessian decay",
            fit.exponent <= -2.7,
            format!("sup |D^2 ubar| ~ (1+t)^{:.4} on [10, 100] (prediction -3, slack 0.3)", fit.exponent),
        ));
    } else {
        record.note("D^2 ubar vanishes identically for this background; decay fit skipped");
    }

    let transport = density_transport_error(&flow, &labels, &[0.5, 5.0, 50.0])?;
    record.verdict(Verdict::new(
        "density transport",
        transport <= 1e-9,
        format!("max relative difference from rho0(y)/det(I + t Du0(y)): {}", fmt_exp(transport)),
    ));
    Ok(())
}

/// Quadrature-based density transport against the closed-form Jacobian.
pub fn density_transport_error(flow: &BackgroundFlow, labels: &[Point], times: &[f64]) -> Result<f64> {
    let d = flow.initial_velocity().dim();
    let rho0 = |y: Point| 1.0 + 0.5 * (-(y[0] * y[0] + y[1] * y[1])).exp();
    let mut worst = 0.0f64;
    for &t in times {
        for &y in labels.iter().step_by((labels.len() / 50).max(1)) {
            let u = flow.initial_velocity().value(y);
            let mut x = [0.0; 2];
            for i in 0..d {
                x[i] = y[i] + t * u[i];
            }
            let computed = flow.density_transport(rho0, t, x)?;
            let exact = rho0(y) * (-flow.log_jacobian(t, y)).exp();
            worst = worst.max((computed - exact).abs() / exact);
        }
    }
    Ok(worst)
}

fn inequality_suite(config: &Config, out_dir: &Path, record: &mut RunRecord) -> Result<()> {
    let q = &config.inequalities;
    let family = SampleFamily { count: q.samples, cells: q.cells, half_width: q.half_width, seed: config.run.seed };
    let study = enrichment_study(&family, q.enrichment)?;
    let mut text = String::from("check,base_ratio,enriched_ratio,change\n");
    for ((b, e), (_, change)) in study.base.iter().zip(&study.enriched).zip(study.changes()) {
        text.push_str(&format!(
            "{},{},{},{}\n",
            b.name,
            output::format_number(b.max_ratio),
            output::format_number(e.max_ratio),
            output::format_number(change)
        ));
        record.verdict(Verdict::new(
            b.name.clone(),
            e.max_ratio.is_finite() && change.abs() <= q.tolerance,
            format!(
                "max ratio {:.5} -> {:.5} under {}x enrichment ({:+.2}%)",
                b.max_ratio,
                e.max_ratio,
                q.enrichment,
                100.0 * change
            ),
        ));
    }
    write_file(&out_dir.join("inequalities.csv"), &text)?;

    // The energy bound is measured along the configured run, which must not
    // stop at the positivity check for the measurement to cover the window.
    let mut along = config.clone();
    along.scheme.positivity_tolerance = f64::INFINITY;
    let run_out = match run(&along) {
        Ok(o) => o,
        Err(RunFailure { partial: Some(p), error }) => {
            record.note(format!("run stopped early: {error}"));
            *p
        }
        Err(RunFailure { error, .. }) => return Err(error),
    };
    let series = &run_out.series;
    let z: Vec<f64> = series.rows.iter().map(|r| r.z).collect();
    let sups: Vec<Vec<f64>> = series.rows.iter().map(|r| r.sup.clone()).collect();
    let beta = series.config.beta;
    record.note(format!("beta = {beta} along the run"));
    for c in
        sup_by_energy(&series.times(), &z, &sups, beta, series.config.m, series.config.dim, (0.0, config.run.t_end))
    {
        record.verdict(Verdict::new(
            c.name.clone(),
            c.max_ratio.is_finite() && c.evaluated > 0,
            format!("max ratio {:.5} over {} outputs ({} skipped)", c.max_ratio, c.evaluated, c.skipped),
        ));
    }
    Ok(())
}

fn diagnose(config: &Config, out_dir: &Path, record: &mut RunRecord) -> Result<()> {
    let gas = config.gas_parameters()?;
    let scheme = scheme_config(config);
    if config.grid.dim == 1 {
        let space = mms::space_convergence(gas, scheme, &[128, 256, 512], 1.0)?;
        record.verdict(Verdict::new(
            "space convergence",
            space.min_order() >= 3.5,
            format!(
                "errors {:?}, orders {:?}",
                space.errors.iter().map(|e| fmt_exp(*e)).collect::<Vec<_>>(),
                space.orders.iter().map(|o| format!("{o:.3}")).collect::<Vec<_>>()
            ),
        ));
        let time = mms::time_convergence(gas, scheme, 128, &[128, 256, 512], 8, 1.0)?;
        record.verdict(Verdict::new(
            "time convergence",
            time.min_order() >= 3.5,
            format!(
                "errors {:?}, orders {:?}",
                time.errors.iter().map(|e| fmt_exp(*e)).collect::<Vec<_>>(),
                time.orders.iter().map(|o| format!("{o:.3}")).collect::<Vec<_>>()
            ),
        ));
    } else {
        record.note("manufactured-solution study runs in one dimension only; skipped");
    }

    // Re-analyse an earlier `simulate` in the same directory, if any.
    let (file, prefix) = if config.scheme.general { ("weighted_norms.csv", "N") } else { ("series.csv", "Y") };
    let path = out_dir.join(file);
    if path.exists() {
        let table = output::read_table(&path)?;
        let t = table.column("t").ok_or_else(|| Error::Format(format!("{file} lacks a `t` column")))?;
        let d = &config.diagnostics;
        let norms = crate::diagnostics::NormConfig::new(d.m, config.grid.dim, gas.gamma0, config.formulation())?;
        for k in 0..=d.m {
            let name = format!("{prefix}{k}");
            let Some(y) = table.column(&name) else { continue };
            if y.iter().all(|&v| v == 0.0) {
                record.note(format!("stored {name} vanishes; no fit"));
                continue;
            }
            let predicted = norms.predicted_exponent(k);
            let verdict = match decay_fit(&t, &y, k, (d.fit_start, d.fit_end)) {
                Ok(fit) => Verdict::new(
                    format!("stored decay of {name}"),
                    fit.passes(predicted, d.slack),
                    format!("exponent {:+.4} vs predicted {:+.4} + {}", fit.exponent, predicted, d.slack),
                ),
                Err(e) => Verdict::new(format!("stored decay of {name}"), false, e.to_string()),
            };
            record.verdict(verdict);
        }
    }
    Ok(())
}
