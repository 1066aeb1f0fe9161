use super::fields::FieldSet;
use super::grid::Grid;
use super::init::distance;
use super::integrator::{Model, Solver};
use crate::background::Point;
use crate::error::{Error, Result};

/// Ball whose domain of determinacy is tested.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeSetup {
    pub center: Point,
    pub radius: f64,
    pub t_end: f64,
}

/// Agreement of two solutions on the cone `|x - x0| <= R - M t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeReport {
    /// Supremum of the speed bound over the ball and both runs.
    pub speed_bound: f64,
    /// Last time at which the cone is non-empty, capped by `t_end`.
    pub cone_time: f64,
    /// Supremum over the cone of `max_c |U_c - V_c|`.
    pub discrepancy: f64,
    /// Discrepancy on the initial ball.
    pub initial_discrepancy: f64,
    /// `(t, max discrepancy on the cone slice at t)`.
    pub history: Vec<(f64, f64)>,
    pub steps: usize,
}

struct Slice {
    time: f64,
    /// Max discrepancy per distance bin of width `h` around the centre.
    bins: Vec<f64>,
}

fn slice(a: &FieldSet, b: &FieldSet, setup: &ConeSetup, nbins: usize) -> Slice {
    let grid = a.grid;
    let h = grid.spacing();
    let mut bins = vec![0.0f64; nbins];
    for idx in 0..grid.len() {
        let r = distance(grid.point(idx), setup.center, grid.dim());
        if r > setup.radius {
            continue;
        }
        let bin = ((r / h) as usize).min(nbins - 1);
        let diff = a.components.iter().zip(&b.components).fold(0.0f64, |m, (x, y)| m.max((x[idx] - y[idx]).abs()));
        bins[bin] = bins[bin].max(diff);
    }
    Slice { time: a.time, bins }
}

fn ball_speed(solver: &mut Solver, fields: &FieldSet, setup: &ConeSetup) -> Result<f64> {
    let grid: Grid = fields.grid;
    let speeds = solver.local_speeds(fields)?;
    Ok((0..grid.len())
        .filter(|&i| distance(grid.point(i), setup.center, grid.dim()) <= setup.radius)
        .fold(0.0, |m, i| m.max(speeds[i])))
}

/// Integrates both data sets with identical time steps and measures their
/// largest difference inside the cone of the ball.
pub fn cone_agreement_test(model: Model, base: &FieldSet, other: &FieldSet, setup: &ConeSetup) -> Result<ConeReport> {
    base.check_compatible(other)?;
    if !(setup.radius > 0.0 && setup.t_end > 0.0) {
        return Err(Error::InvalidArgument("cone radius and duration must be positive".into()));
    }
    let grid = base.grid;
    let h = grid.spacing();
    let nbins = (setup.radius / h) as usize + 2;
    let mut a_solver = Solver::new(model, grid)?;
    let mut b_solver = Solver::new(model, grid)?;
    let (mut a, mut b) = (base.clone(), other.clone());
    let mut slices = vec![slice(&a, &b, setup, nbins)];
    let mut speed = ball_speed(&mut a_solver, &a, setup)?.max(ball_speed(&mut b_solver, &b, setup)?);
    let mut steps = 0;
    while a.time < setup.t_end * (1.0 - 1e-14) {
        let dt = a_solver.stable_dt(&a)?.min(b_solver.stable_dt(&b)?).min(setup.t_end - a.time);
        a = a_solver.step(&a, dt)?;
        b = b_solver.step(&b, dt)?;
        b.time = a.time;
        steps += 1;
        speed = speed.max(ball_speed(&mut a_solver, &a, setup)?).max(ball_speed(&mut b_solver, &b, setup)?);
        slices.push(slice(&a, &b, setup, nbins));
        if speed > 0.0 && a.time * speed >= setup.radius {
            break;
        }
    }
    let cone_time = if speed > 0.0 { setup.t_end.min(setup.radius / speed) } else { setup.t_end };
    let history: Vec<(f64, f64)> = slices
        .iter()
        .filter(|s| s.time <= cone_time)
        .map(|s| {
            let reach = setup.radius - speed * s.time;
            let worst = s
                .bins
                .iter()
                .enumerate()
                .filter(|(bin, _)| (*bin as f64 + 1.0) * h <= reach)
                .fold(0.0f64, |m, (_, v)| m.max(*v));
            (s.time, worst)
        })
        .collect();
    Ok(ConeReport {
        speed_bound: speed,
        cone_time,
        discrepancy: history.iter().fold(0.0, |m, (_, v)| m.max(*v)),
        initial_discrepancy: history.first().map_or(0.0, |x| x.1),
        history,
        steps,
    })
}
