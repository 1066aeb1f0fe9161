//! Manufactured solutions on the periodic interval `[0, 2 pi)` with a
//! quiescent background, and the space and time convergence studies built
//! on them.

use super::fields::FieldSet;
use super::grid::Grid;
use super::integrator::{Forcing, Model, SchemeConfig, Solver};
use crate::background::{Point, Quiescent};
use crate::error::{Error, Result};
use crate::symsys::{self, Formulation, PointJet};
use crate::thermo::GasParameters;

/// Smooth periodic travelling waves
/// `pi = p0 + a sin(x - t)`, `u = c cos(x - t/2)`, `s = e sin(x + t/2)`,
/// driven by the forcing that makes them exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Manufactured {
    pub gas: GasParameters,
    pub formulation: Formulation,
    pub base: f64,
    pub pi_amplitude: f64,
    pub velocity_amplitude: f64,
    pub entropy_amplitude: f64,
}

impl Manufactured {
    pub fn new(gas: GasParameters, formulation: Formulation) -> Self {
        Self { gas, formulation, base: 1.0, pi_amplitude: 0.2, velocity_amplitude: 0.3, entropy_amplitude: 0.1 }
    }

    /// Exact values and derivatives at `(t, x)`.
    pub fn jet(&self, t: f64, x: f64) -> PointJet {
        let (sp, cp) = (x - t).sin_cos();
        let (su, cu) = (x - 0.5 * t).sin_cos();
        let (ss, cs) = (x + 0.5 * t).sin_cos();
        let (a, c, e) = (self.pi_amplitude, self.velocity_amplitude, self.entropy_amplitude);
        let e = if self.formulation.is_isentropic() { 0.0 } else { e };
        PointJet {
            pi: self.base + a * sp,
            u: vec![c * cu],
            s: e * ss,
            pi_t: -a * cp,
            u_t: vec![0.5 * c * su],
            s_t: 0.5 * e * cs,
            grad_pi: vec![a * cp],
            grad_u: vec![-c * su],
            grad_s: vec![e * cs],
        }
    }

    /// Exact solution sampled on `grid` at time `t`.
    pub fn fields(&self, grid: Grid, t: f64) -> FieldSet {
        let general = !self.formulation.is_isentropic();
        let mut f = FieldSet::zeros(grid, general);
        f.time = t;
        for idx in 0..grid.len() {
            let jet = self.jet(t, grid.point(idx)[0]);
            f.components[0][idx] = jet.pi;
            f.components[1][idx] = jet.u[0];
            if general {
                f.components[2][idx] = jet.s;
            }
        }
        f
    }
}

impl Forcing for Manufactured {
    fn evaluate(&self, t: f64, x: Point, out: &mut [f64]) {
        let r = symsys::residual(&self.jet(t, x[0]), &self.gas, self.formulation)
            .expect("manufactured jet has consistent dimensions");
        out.copy_from_slice(&r);
    }
}

/// Errors on a sequence of resolutions and the observed orders between
/// consecutive ones.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStudy {
    /// Cells (space study) or time steps (time study).
    pub resolutions: Vec<usize>,
    pub errors: Vec<f64>,
    pub orders: Vec<f64>,
}

impl ConvergenceStudy {
    fn new(resolutions: Vec<usize>, errors: Vec<f64>) -> Self {
        let orders = errors
            .windows(2)
            .zip(resolutions.windows(2))
            .map(|(e, n)| (e[0] / e[1]).ln() / (n[1] as f64 / n[0] as f64).ln())
            .collect();
        Self { resolutions, errors, orders }
    }

    pub fn min_order(&self) -> f64 {
        self.orders.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

fn max_difference(a: &FieldSet, b: &FieldSet) -> f64 {
    a.components
        .iter()
        .zip(&b.components)
        .flat_map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q).abs()))
        .fold(0.0, f64::max)
}

fn periodic_grid(cells: usize) -> Result<Grid> {
    Grid::new(1, cells, 0.0, 2.0 * std::f64::consts::PI)
}

fn integrate(solver: &mut Solver, mut fields: FieldSet, t_end: f64, fixed_steps: Option<usize>) -> Result<FieldSet> {
    match fixed_steps {
        Some(n) => {
            let dt = t_end / n as f64;
            for _ in 0..n {
                fields = solver.step(&fields, dt)?;
            }
            fields.time = t_end;
        }
        None => {
            while fields.time < t_end {
                let remaining = t_end - fields.time;
                let dt = solver.stable_dt(&fields)?.min(remaining);
                if dt <= 0.0 {
                    return Err(Error::TimeStepCollapse { t: fields.time, dt });
                }
                fields = solver.step(&fields, dt)?;
                if dt == remaining {
                    fields.time = t_end;
                }
            }
        }
    }
    Ok(fields)
}

/// Max-norm error at `t_end` against the exact solution on each grid, with
/// the time step following the CFL rule (so `dt` shrinks with `h`).
pub fn space_convergence(
    gas: GasParameters,
    scheme: SchemeConfig,
    cells: &[usize],
    t_end: f64,
) -> Result<ConvergenceStudy> {
    let mms = Manufactured::new(gas, scheme.formulation);
    let background = Quiescent { dim: 1 };
    let model = Model { gas, scheme, background: &background, forcing: Some(&mms) };
    let errors = cells
        .iter()
        .map(|&n| {
            let grid = periodic_grid(n)?;
            let mut solver = Solver::new(model, grid)?;
            let end = integrate(&mut solver, mms.fields(grid, 0.0), t_end, None)?;
            Ok(max_difference(&end, &mms.fields(grid, t_end)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceStudy::new(cells.to_vec(), errors))
}

/// Error of fixed-step runs with `steps[i]` steps against a reference run
/// with `reference_factor` times more steps than the finest one, on a
/// single grid so that the spatial error cancels.
pub fn time_convergence(
    gas: GasParameters,
    scheme: SchemeConfig,
    cells: usize,
    steps: &[usize],
    reference_factor: usize,
    t_end: f64,
) -> Result<ConvergenceStudy> {
    let mms = Manufactured::new(gas, scheme.formulation);
    let background = Quiescent { dim: 1 };
    let model = Model { gas, scheme, background: &background, forcing: Some(&mms) };
    let grid = periodic_grid(cells)?;
    let finest = steps.iter().copied().max().ok_or_else(|| Error::InvalidArgument("no step counts".into()))?;
    let mut solver = Solver::new(model, grid)?;
    let initial = mms.fields(grid, 0.0);
    let stable = solver.stable_dt(&initial)?;
    let coarsest = steps.iter().copied().min().unwrap_or(finest);
    if t_end / coarsest as f64 > stable {
        return Err(Error::InvalidArgument(format!(
            "{coarsest} steps over {t_end} exceed the stable step {stable:.3e} on {cells} cells"
        )));
    }
    let reference = integrate(&mut solver, initial.clone(), t_end, Some(finest * reference_factor))?;
    let errors = steps
        .iter()
        .map(|&n| Ok(max_difference(&integrate(&mut solver, initial.clone(), t_end, Some(n))?, &reference)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceStudy::new(steps.to_vec(), errors))
}
