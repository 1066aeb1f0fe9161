use std::sync::Arc;

use rayon::prelude::*;

use super::fields::FieldSet;
use super::grid::Grid;
use super::stencil;
use crate::background::{Background, Point};
use crate::error::{Error, Result};
use crate::par;
use crate::symsys::{self, Formulation};
use crate::thermo::GasParameters;

/// Discretisation parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    /// Order of the central first-derivative stencil (2, 4, 6 or 8).
    pub order: usize,
    pub cfl: f64,
    /// Coefficient `mu` of the `-mu h^4 Lap_h^2` filter.
    pub hyperviscosity: f64,
    pub formulation: Formulation,
    /// Allowed undershoot of `pi` relative to its initial maximum.
    pub positivity_tolerance: f64,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        Self {
            order: 4,
            cfl: 0.4,
            hyperviscosity: 0.02,
            formulation: Formulation::Isentropic,
            positivity_tolerance: 1e-10,
        }
    }
}

/// Source term added to every component, used for manufactured solutions.
pub trait Forcing: Sync {
    /// Writes the forcing of each component at `(t, x)` into `out`.
    fn evaluate(&self, t: f64, x: Point, out: &mut [f64]);
}

/// Everything that defines the semi-discrete right-hand side.
#[derive(Clone, Copy)]
pub struct Model<'a> {
    pub gas: GasParameters,
    pub scheme: SchemeConfig,
    pub background: &'a dyn Background,
    pub forcing: Option<&'a dyn Forcing>,
}

/// Background velocity and gradient sampled at every cell for one time.
#[derive(Debug)]
pub struct BackgroundGrid {
    time: f64,
    /// `velocity[i][cell]`.
    pub velocity: Vec<Vec<f64>>,
    /// `gradient[i * d + j][cell] = d_j ubar_i`.
    pub gradient: Vec<Vec<f64>>,
}

impl BackgroundGrid {
    pub fn time(&self) -> f64 {
        self.time
    }
}

const CACHE_DEPTH: usize = 3;

/// Method-of-lines integrator: central differences in space, classical
/// fourth-order Runge–Kutta in time.
pub struct Solver<'a> {
    model: Model<'a>,
    grid: Grid,
    weights: &'static [f64],
    cache: Vec<Arc<BackgroundGrid>>,
    positivity_scale: Option<f64>,
}

impl<'a> Solver<'a> {
    pub fn new(model: Model<'a>, grid: Grid) -> Result<Self> {
        if model.background.dim() != grid.dim() {
            return Err(Error::DimensionMismatch { expected: grid.dim(), got: model.background.dim() });
        }
        model.scheme.formulation.validate(&model.gas)?;
        let s = &model.scheme;
        if !(s.cfl > 0.0 && s.cfl.is_finite()) {
            return Err(Error::InvalidArgument(format!("CFL number {} must be positive", s.cfl)));
        }
        if !(s.hyperviscosity >= 0.0 && s.hyperviscosity.is_finite()) {
            return Err(Error::InvalidArgument(format!("hyperviscosity {} must be >= 0", s.hyperviscosity)));
        }
        let weights = stencil::first_derivative_weights(s.order)?;
        Ok(Self { model, grid, weights, cache: Vec::new(), positivity_scale: None })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn model(&self) -> &Model<'a> {
        &self.model
    }

    /// Enables the positivity check of [`Solver::step`] relative to `scale`
    /// (normally the initial maximum of `pi`).
    pub fn set_positivity_scale(&mut self, scale: Option<f64>) {
        self.positivity_scale = scale;
    }

    /// Background fields at time `t`, computed exactly at every cell.
    pub fn background_at(&mut self, t: f64) -> Result<Arc<BackgroundGrid>> {
        if let Some(hit) = self.cache.iter().find(|b| b.time.to_bits() == t.to_bits()) {
            return Ok(hit.clone());
        }
        let d = self.grid.dim();
        let n = self.grid.len();
        let mut velocity = vec![vec![0.0; n]; d];
        let mut gradient = vec![vec![0.0; n]; d * d];
        if !self.model.background.is_quiescent() {
            let grid = self.grid;
            let bg = self.model.background;
            let samples: Vec<_> =
                (0..n).into_par_iter().with_min_len(256).map(|i| bg.sample(t, grid.point(i))).collect::<Result<_>>()?;
            for (cell, s) in samples.iter().enumerate() {
                for i in 0..d {
                    velocity[i][cell] = s.velocity[i];
                    for j in 0..d {
                        gradient[i * d + j][cell] = s.gradient[i][j];
                    }
                }
            }
        }
        let entry = Arc::new(BackgroundGrid { time: t, velocity, gradient });
        if self.cache.len() == CACHE_DEPTH {
            self.cache.remove(0);
        }
        self.cache.push(entry.clone());
        Ok(entry)
    }

    /// Semi-discrete time derivative of every component.
    pub fn rhs(&mut self, fields: &FieldSet) -> Result<Vec<Vec<f64>>> {
        let grid = self.grid;
        let d = grid.dim();
        let n = grid.len();
        let nc = fields.components.len();
        let bg = self.background_at(fields.time)?;
        let general = !self.model.scheme.formulation.is_isentropic();
        if nc != self.model.scheme.formulation.components(d) {
            return Err(Error::DimensionMismatch { expected: self.model.scheme.formulation.components(d), got: nc });
        }
        let mut grads = vec![vec![vec![0.0; n]; d]; nc];
        for (c, comp) in fields.components.iter().enumerate() {
            for axis in 0..d {
                stencil::derivative(comp, &grid, axis, self.weights, &mut grads[c][axis]);
            }
        }
        let gas = self.model.gas;
        let v = &fields.components;
        let mut flat = vec![0.0; n * nc];
        flat.par_chunks_mut(nc).with_min_len(256).enumerate().for_each(|(idx, out)| {
            let pi = v[0][idx];
            let s = if general { v[d + 1][idx] } else { 0.0 };
            let weight = if general { gas.entropy_weight(s) } else { 1.0 };
            let k = symsys::coupling(pi, s, &gas);
            let mut u = [0.0; 2];
            let mut div_u = 0.0;
            for j in 0..d {
                u[j] = v[1 + j][idx] + bg.velocity[j][idx];
                div_u += grads[1 + j][j][idx] + bg.gradient[j * d + j][idx];
            }
            let advect = |c: usize| -> f64 { (0..d).map(|j| u[j] * grads[c][j][idx]).sum() };
            out[0] = -advect(0) - k * div_u;
            for i in 0..d {
                let stretch: f64 = (0..d).map(|j| v[1 + j][idx] * bg.gradient[i * d + j][idx]).sum();
                out[1 + i] = -advect(1 + i) - stretch - k * weight * grads[0][i][idx];
            }
            if general {
                out[d + 1] = -advect(d + 1);
            }
        });
        let mut rate: Vec<Vec<f64>> = (0..nc).map(|c| (0..n).map(|i| flat[i * nc + c]).collect()).collect();

        let mu = self.model.scheme.hyperviscosity;
        if mu > 0.0 {
            let mut filt = vec![0.0; n];
            for (c, comp) in fields.components.iter().enumerate() {
                stencil::undivided_bilaplacian(comp, &grid, &mut filt);
                for (r, f) in rate[c].iter_mut().zip(&filt) {
                    *r -= mu * f;
                }
            }
        }
        if let Some(forcing) = self.model.forcing {
            let t = fields.time;
            let mut src = vec![0.0; n * nc];
            src.par_chunks_mut(nc)
                .with_min_len(256)
                .enumerate()
                .for_each(|(idx, out)| forcing.evaluate(t, grid.point(idx), out));
            for (c, r) in rate.iter_mut().enumerate() {
                for (idx, x) in r.iter_mut().enumerate() {
                    *x += src[idx * nc + c];
                }
            }
        }
        Ok(rate)
    }

    /// One classical Runge–Kutta step.
    pub fn step(&mut self, fields: &FieldSet, dt: f64) -> Result<FieldSet> {
        let k1 = self.rhs(fields)?;
        let k2 = self.rhs(&fields.axpy(0.5 * dt, &k1, 0.5 * dt))?;
        let k3 = self.rhs(&fields.axpy(0.5 * dt, &k2, 0.5 * dt))?;
        let k4 = self.rhs(&fields.axpy(dt, &k3, dt))?;
        let sixth = dt / 6.0;
        let components = fields
            .components
            .iter()
            .enumerate()
            .map(|(c, comp)| {
                comp.iter()
                    .enumerate()
                    .map(|(i, x)| x + sixth * (k1[c][i] + 2.0 * k2[c][i] + 2.0 * k3[c][i] + k4[c][i]))
                    .collect()
            })
            .collect();
        let next = FieldSet { grid: fields.grid, time: fields.time + dt, components };
        if !next.is_finite() {
            return Err(Error::BlowUp { t: next.time });
        }
        if let Some(scale) = self.positivity_scale {
            let tolerance = self.model.scheme.positivity_tolerance;
            let min_pi = next.pi().iter().copied().fold(f64::INFINITY, f64::min);
            if min_pi < -tolerance * scale {
                return Err(Error::PositivityViolation { t: next.time, min_pi, tolerance, scale });
            }
        }
        Ok(next)
    }

    /// Characteristic speed bound at every cell, background included.
    pub fn local_speeds(&mut self, fields: &FieldSet) -> Result<Vec<f64>> {
        let bg = self.background_at(fields.time)?;
        let d = self.grid.dim();
        let gas = self.model.gas;
        let formulation = self.model.scheme.formulation;
        let mut out = vec![0.0; self.grid.len()];
        par::fill(&mut out, |idx| {
            let speed = (0..d)
                .map(|j| {
                    let u = fields.components[1 + j][idx] + bg.velocity[j][idx];
                    u * u
                })
                .sum::<f64>()
                .sqrt();
            symsys::local_speed_bound(fields.pi()[idx], speed, fields.entropy_at(idx), &gas, formulation)
        });
        Ok(out)
    }

    /// Largest characteristic speed bound over the grid, background included.
    pub fn max_speed(&mut self, fields: &FieldSet) -> Result<f64> {
        let speeds = self.local_speeds(fields)?;
        Ok(par::max(speeds.len(), |i| speeds[i]))
    }

    /// Advective step `CFL h/(M d)`; infinite when nothing moves.
    pub fn cfl_dt(&mut self, fields: &FieldSet) -> Result<f64> {
        let m = self.max_speed(fields)?;
        let h = self.grid.spacing();
        Ok(if m > 0.0 { self.model.scheme.cfl * h / (m * self.grid.dim() as f64) } else { f64::INFINITY })
    }

    /// Step limit from the explicit hyperviscous term.
    pub fn filter_dt(&self) -> f64 {
        let mu = self.model.scheme.hyperviscosity;
        if mu > 0.0 {
            2.5 / (mu * stencil::bilaplacian_spectral_radius(self.grid.dim()))
        } else {
            f64::INFINITY
        }
    }

    /// `min(cfl_dt, filter_dt)`.
    pub fn stable_dt(&mut self, fields: &FieldSet) -> Result<f64> {
        Ok(self.cfl_dt(fields)?.min(self.filter_dt()))
    }
}
