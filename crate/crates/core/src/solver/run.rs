use super::conservation::{conservation_monitor, drift, ConservationDrift, ConservedIntegrals};
use super::fields::FieldSet;
use super::grid::Grid;
use super::init::{init_data, InitialData};
use super::integrator::{Model, SchemeConfig, Solver};
use crate::background::{Background, Quiescent};
use crate::diagnostics::{general_exponent, sobolev_norms, NormConfig, SeriesRow, SobolevSeries};
use crate::error::{Error, Result};
use crate::io::config::Config;
use crate::par;
use crate::thermo::{self, GasParameters};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    Warning,
    Abort,
}

/// Something noteworthy that happened during a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub t: f64,
    pub kind: EventKind,
    pub message: String,
}

/// Everything recorded by [`run`].
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub series: SobolevSeries,
    pub events: Vec<Event>,
    pub initial: FieldSet,
    pub final_fields: FieldSet,
    pub snapshots: Vec<FieldSet>,
    pub steps: usize,
    /// Smallest value of `pi` seen after any step.
    pub lowest_pi: f64,
    /// Initial maximum of `pi`.
    pub initial_peak: f64,
    pub initial_integrals: ConservedIntegrals,
    /// Largest drift of each conserved quantity over the recorded outputs.
    pub worst_drift: ConservationDrift,
    /// Exponent of the comparison function used for the envelope.
    pub comparison_exponent: f64,
}

impl RunOutput {
    /// `-min(pi)/max(pi_0)`, clamped at zero.
    pub fn relative_undershoot(&self) -> f64 {
        if self.initial_peak > 0.0 {
            (-self.lowest_pi / self.initial_peak).max(0.0)
        } else {
            0.0
        }
    }
}

/// A run that stopped early; `partial` holds what was recorded up to the failure.
#[derive(Debug, Clone)]
pub struct RunFailure {
    pub error: Error,
    pub partial: Option<Box<RunOutput>>,
}

impl From<Error> for RunFailure {
    fn from(error: Error) -> Self {
        Self { error, partial: None }
    }
}

/// Builds the scheme parameters described by a configuration.
pub fn scheme_config(config: &Config) -> SchemeConfig {
    SchemeConfig {
        order: config.scheme.order,
        cfl: config.scheme.cfl,
        hyperviscosity: config.scheme.hyperviscosity,
        formulation: config.formulation(),
        positivity_tolerance: config.scheme.positivity_tolerance,
    }
}

/// Grid described by a configuration.
pub fn grid_of(config: &Config) -> Result<Grid> {
    Grid::centered(config.grid.dim, config.grid.cells, config.grid.half_width)
}

/// Initial data described by a configuration.
pub fn initial_data_of(config: &Config) -> InitialData {
    let mut center = [0.0; 2];
    for (c, v) in center.iter_mut().zip(&config.initial.center) {
        *c = *v;
    }
    InitialData {
        amplitude: config.initial.amplitude,
        entropy_amplitude: config.initial.entropy_amplitude,
        radius: config.initial.radius,
        center,
        base_pi: config.initial.base_pi,
        perturbations: Vec::new(),
    }
}

/// Background described by a configuration (quiescent when none is set).
pub fn background_of(config: &Config) -> Result<Box<dyn Background>> {
    Ok(match config.background_flow()? {
        Some(flow) => Box::new(flow),
        None => Box::new(Quiescent { dim: config.grid.dim }),
    })
}

struct Recorder<'c> {
    config: &'c Config,
    gas: GasParameters,
    series: SobolevSeries,
    events: Vec<Event>,
    initial_integrals: Option<ConservedIntegrals>,
    worst_drift: Option<ConservationDrift>,
    seam_warned: bool,
}

impl Recorder<'_> {
    fn record(&mut self, fields: &FieldSet, solver: &mut Solver) -> Result<()> {
        let formulation = self.config.formulation();
        let gas = self.gas;
        let norms = sobolev_norms(fields, self.config.diagnostics.m, formulation, |s| gas.entropy_weight(s));
        let n = fields.grid.len();
        let pi = fields.pi();
        let min_pi = par::min(n, |i| pi[i]);
        let max_pi = par::max(n, |i| pi[i]);
        let max_rho =
            par::max(n, |i| thermo::rho_from_pi(pi[i].max(0.0), fields.entropy_at(i), &gas).unwrap_or(f64::NAN));
        let bg = solver.background_at(fields.time)?;
        let integrals = conservation_monitor(fields, &bg, &gas, self.config.grid.buffer_cells)?;
        if integrals.seam_fraction > 1e-12 && !self.seam_warned {
            self.seam_warned = true;
            self.events.push(Event {
                t: fields.time,
                kind: EventKind::Warning,
                message: format!(
                    "perturbation reached the seam buffer (relative size {:.3e}); norms may alias and conservation is unreliable",
                    integrals.seam_fraction
                ),
            });
        }
        match &self.initial_integrals {
            None => self.initial_integrals = Some(integrals.clone()),
            Some(first) => {
                let now = drift(first, &integrals);
                let worst = self.worst_drift.get_or_insert_with(|| ConservationDrift {
                    mass: 0.0,
                    momentum: vec![0.0; now.momentum.len()],
                    energy: 0.0,
                });
                let keep = |w: &mut f64, x: f64| {
                    if x.abs() > w.abs() {
                        *w = x;
                    }
                };
                keep(&mut worst.mass, now.mass);
                keep(&mut worst.energy, now.energy);
                for (w, x) in worst.momentum.iter_mut().zip(&now.momentum) {
                    keep(w, *x);
                }
            }
        }
        self.series.push(SeriesRow {
            t: fields.time,
            plain: norms.plain,
            weighted: norms.weighted,
            z: 0.0,
            zeta: 0.0,
            min_pi,
            max_pi,
            max_rho,
            sup: norms.sup,
            mass: integrals.mass,
            momentum: integrals.momentum,
            energy: integrals.energy,
        });
        Ok(())
    }
}

struct Progress {
    fields: FieldSet,
    snapshots: Vec<FieldSet>,
    steps: usize,
    lowest_pi: f64,
}

/// Integrates the configured problem to `run.t_end`, recording diagnostics
/// every `run.output_interval`.
pub fn run(config: &Config) -> Result<RunOutput, RunFailure> {
    config.validate()?;
    let gas = config.gas_parameters()?;
    let background = background_of(config)?;
    let grid = grid_of(config)?;
    let formulation = config.formulation();
    let model = Model { gas, scheme: scheme_config(config), background: background.as_ref(), forcing: None };
    let data = initial_data_of(config);
    let initial =
        init_data(&data, grid, &gas, formulation, background.as_ref(), config.run.t_end, config.grid.buffer_cells)?;
    let mut solver = Solver::new(model, grid)?;
    let initial_peak = initial.pi().iter().copied().fold(0.0, f64::max);
    if initial_peak > 0.0 {
        solver.set_positivity_scale(Some(initial_peak));
    }
    let norm_config = NormConfig::new(config.diagnostics.m, grid.dim(), gas.gamma0, formulation)?;
    let comparison_exponent =
        if formulation.is_isentropic() { gas.nu } else { general_exponent(gas.nu, config.diagnostics.m) };
    let mut recorder = Recorder {
        config,
        gas,
        series: SobolevSeries::new(norm_config),
        events: Vec::new(),
        initial_integrals: None,
        worst_drift: None,
        seam_warned: false,
    };
    let mut progress = Progress { fields: initial.clone(), snapshots: Vec::new(), steps: 0, lowest_pi: 0.0 };
    let outcome = advance(config, &data, &mut solver, &mut recorder, &mut progress);

    let constant = match config.diagnostics.envelope_constant {
        Some(c) => c,
        None => match recorder.series.calibrate(comparison_exponent, config.diagnostics.calibration_end) {
            Ok(c) => c,
            Err(e) => {
                recorder.events.push(Event {
                    t: 0.0,
                    kind: EventKind::Warning,
                    message: format!("envelope constant not calibrated: {e}"),
                });
                0.0
            }
        },
    };
    recorder.series.set_constant(constant);
    if let Err(e) = &outcome {
        recorder.events.push(Event { t: progress.fields.time, kind: EventKind::Abort, message: e.to_string() });
    }
    let initial_integrals = recorder.initial_integrals.clone().unwrap_or(ConservedIntegrals {
        time: 0.0,
        mass: 0.0,
        momentum: vec![0.0; grid.dim()],
        energy: 0.0,
        mass_scale: 0.0,
        momentum_scale: vec![0.0; grid.dim()],
        energy_scale: 0.0,
        seam_fraction: 0.0,
    });
    let output = RunOutput {
        series: recorder.series,
        events: recorder.events,
        initial,
        final_fields: progress.fields,
        snapshots: progress.snapshots,
        steps: progress.steps,
        lowest_pi: progress.lowest_pi,
        initial_peak,
        worst_drift: recorder.worst_drift.unwrap_or(ConservationDrift {
            mass: 0.0,
            momentum: vec![0.0; grid.dim()],
            energy: 0.0,
        }),
        initial_integrals,
        comparison_exponent,
    };
    match outcome {
        Ok(()) => Ok(output),
        Err(error) => Err(RunFailure { error, partial: Some(Box::new(output)) }),
    }
}

fn advance(
    config: &Config,
    data: &InitialData,
    solver: &mut Solver,
    recorder: &mut Recorder,
    progress: &mut Progress,
) -> Result<()> {
    let t_end = config.run.t_end;
    let interval = config.run.output_interval;
    let grid = *solver.grid();
    let buffer = config.grid.buffer_cells;
    let watch_seam = data.is_vacuum() && buffer > 0;
    let seam_scale = progress.fields.max_abs();
    let seam_cells: Vec<usize> = (0..grid.len()).filter(|&i| grid.in_seam_buffer(i, buffer)).collect();
    let taper: Vec<f64> = seam_cells.iter().map(|&i| grid.seam_taper(i, buffer)).collect();

    recorder.record(&progress.fields, solver)?;
    if config.run.snapshot_every > 0 {
        progress.snapshots.push(progress.fields.clone());
    }
    let mut output_index = 0usize;
    while progress.fields.time < t_end {
        output_index += 1;
        let target = (output_index as f64 * interval).min(t_end);
        while progress.fields.time < target {
            let t = progress.fields.time;
            let remaining = target - t;
            let dt = solver.stable_dt(&progress.fields)?.min(remaining);
            if dt <= 1e-13 * t.max(1.0) && remaining > 1e-13 * t.max(1.0) {
                return Err(Error::TimeStepCollapse { t, dt });
            }
            let mut next = solver.step(&progress.fields, dt)?;
            if dt == remaining || target - next.time <= 1e-12 * target.max(1.0) {
                next.time = target;
            }
            progress.steps += 1;
            let min_pi = next.pi().iter().copied().fold(f64::INFINITY, f64::min);
            progress.lowest_pi = progress.lowest_pi.min(min_pi);
            if watch_seam {
                let worst = seam_cells
                    .iter()
                    .map(|&i| next.components.iter().fold(0.0f64, |m, c| m.max(c[i].abs())))
                    .fold(0.0, f64::max);
                if worst > config.scheme.buffer_tolerance * seam_scale {
                    progress.fields = next;
                    return Err(Error::DomainMarginExhausted { t: progress.fields.time, value: worst });
                }
                // A smooth sponge rather than a hard cut: zeroing leaves a jump at
                // the buffer edge whose derivatives pollute the higher norms.
                for c in next.components.iter_mut() {
                    for (&i, &m) in seam_cells.iter().zip(&taper) {
                        c[i] *= m;
                    }
                }
            }
            progress.fields = next;
        }
        recorder.record(&progress.fields, solver)?;
        if config.run.snapshot_every > 0 && output_index.is_multiple_of(config.run.snapshot_every) {
            progress.snapshots.push(progress.fields.clone());
        }
    }
    Ok(())
}
