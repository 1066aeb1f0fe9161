//! Verification studies shared by the `vdwe` commands, the examples and the
//! acceptance suite. Each returns raw measurements; pass/fail thresholds are
//! applied by the caller.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::background::{mat_sup, BackgroundFlow, InitialVelocity, Point, Quiescent};
use crate::diagnostics::{decay_fit, DecayFit};
use crate::error::{Error, Result};
use crate::io::Config;
use crate::solver::cone::{cone_agreement_test, ConeReport, ConeSetup};
use crate::solver::init::{init_data, BumpPerturbation, InitialData};
use crate::solver::run::{initial_data_of, scheme_config};
use crate::solver::{Grid, Model};
use crate::symsys::{self, SymmetrizedState};
use crate::thermo::{self, GasParameters, ThermoState};

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }
}

/// Densities used for sweeps: `[0, 0.99/b]`, or `[0, 10]` for a perfect gas.
pub fn density_ceiling(gas: &GasParameters) -> f64 {
    if gas.covolume > 0.0 {
        0.99 / gas.covolume
    } else {
        10.0
    }
}

/// `n` evenly spaced points on `[a, b]`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Largest relative error of `rho -> pi -> rho` over a density sweep times
/// the given entropies (absolute error at `rho = 0`).
pub fn eos_roundtrip_error(gas: &GasParameters, densities: usize, entropies: &[f64]) -> Result<f64> {
    let mut worst = 0.0f64;
    for rho in linspace(0.0, density_ceiling(gas), densities) {
        for &s in entropies {
            let pi = thermo::pi_from_state(ThermoState::new(rho, s), gas)?;
            let back = thermo::rho_from_pi(pi, s, gas)?;
            let err = if rho == 0.0 { back.abs() } else { (back - rho).abs() / rho };
            worst = worst.max(err);
        }
    }
    Ok(worst)
}

/// Worst residuals of the thermodynamic identities over random states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityStudy {
    pub states: usize,
    /// Closed-form identities.
    pub algebraic: f64,
    /// Identities checked against finite differences.
    pub derivative: f64,
    pub constraints_hold: bool,
}

pub fn identity_study(gas: &GasParameters, states: usize, entropy: (f64, f64), seed: u64) -> Result<IdentityStudy> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = density_ceiling(gas);
    let mut out = IdentityStudy { states, algebraic: 0.0, derivative: 0.0, constraints_hold: true };
    for _ in 0..states {
        let rho = rng.random_range(1e-6..top);
        let s = if entropy.0 < entropy.1 { rng.random_range(entropy.0..entropy.1) } else { entropy.0 };
        let r = thermo::thermo_identity_suite(ThermoState::new(rho, s), gas)?;
        out.algebraic = out.algebraic.max(r.thermal_heat_capacity).max(r.cp_relation).max(r.ratio_relation);
        out.derivative = out.derivative.max(r.fundamental_fd).max(r.sound_speed_fd);
        out.constraints_hold &= r.constraints_hold;
    }
    Ok(out)
}

/// Worst relative asymmetry of the symmetrized symbols over random states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryStudy {
    pub draws: usize,
    pub vacuum_draws: usize,
    /// `max |SA - (SA)^T| / max |SA|` for the `(pi, u, s)` symbol.
    pub symbol: f64,
    /// Same for the classical symbol with `rho >= 1e-6`.
    pub classical: f64,
    /// Largest eigenvalue modulus over the matching speed bound.
    pub speed_ratio: f64,
}

pub fn symmetry_study(gas: &GasParameters, dim: usize, draws: usize, seed: u64) -> Result<SymmetryStudy> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SymmetryStudy { draws, vacuum_draws: 0, symbol: 0.0, classical: 0.0, speed_ratio: 0.0 };
    let relative = |sym: &symsys::FluxSymbol| {
        let scale = sym.symmetrized().amax();
        if scale > 0.0 {
            sym.asymmetry() / scale
        } else {
            0.0
        }
    };
    for i in 0..draws {
        let xi: Vec<f64> = loop {
            let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
            if v.iter().map(|x| x * x).sum::<f64>() > 1e-4 {
                break v;
            }
        };
        let velocity: Vec<f64> = (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect();
        let entropy = rng.random_range(-1.0..1.0);
        let pi = if i % 10 == 0 {
            out.vacuum_draws += 1;
            0.0
        } else {
            rng.random_range(0.0..3.0)
        };
        let state = SymmetrizedState { pi, velocity: velocity.clone(), entropy };
        let sym = symsys::assemble_symbol(&xi, &state, gas)?;
        out.symbol = out.symbol.max(relative(&sym));

        let unit: Vec<f64> = {
            let n = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
            xi.iter().map(|x| x / n).collect()
        };
        let unit_sym = symsys::assemble_symbol(&unit, &state, gas)?;
        let bound = symsys::max_propagation_speed(
            [&state],
            gas,
            symsys::Formulation::General { theta: gas.half_gamma_minus_one().min(1.0) },
        );
        if bound > 0.0 {
            out.speed_ratio = out.speed_ratio.max(unit_sym.spectral_radius() / bound);
        }

        let rho = rng.random_range(1e-6..density_ceiling(gas));
        let classical = symsys::classical_symmetrizer(rho, &velocity, entropy, &xi, gas)?;
        out.classical = out.classical.max(relative(&classical));
    }
    Ok(out)
}

/// Largest error of the computed background against `ubar = x/(1 + t)`
/// for `u0(x) = x`, over `D ubar` and `K` as well.
pub fn linear_background_error(dim: usize, times: &[f64], points: &[Point]) -> Result<f64> {
    let flow = BackgroundFlow::new(InitialVelocity::linear(dim, 1.0), points)?;
    let mut worst = 0.0f64;
    for &t in times {
        for &x in points {
            let s = flow.evaluate(t, x)?;
            for i in 0..dim {
                let scale = 1.0 + x[i].abs() / (1.0 + t);
                worst = worst.max((s.velocity[i] - x[i] / (1.0 + t)).abs() / scale);
                for j in 0..dim {
                    let exact = if i == j { 1.0 / (1.0 + t) } else { 0.0 };
                    worst = worst.max((s.gradient[i][j] - exact).abs());
                    worst = worst.max(s.deviation[i][j].abs());
                }
            }
        }
    }
    Ok(worst)
}

/// Independent inversion of `y + t u0(y) = x` in one dimension: a dense scan
/// brackets the root, then bisection runs to machine precision.
pub fn shooting_foot(u0: &InitialVelocity, t: f64, x: f64) -> Result<f64> {
    let g = |y: f64| y + t * u0.value([y, 0.0])[0] - x;
    let reach = x.abs() + 1.0 + t * (u0.value([0.0, 0.0])[0].abs() + 1.0);
    let scan = linspace(-reach, reach, 4001);
    let (mut lo, mut hi) = scan
        .windows(2)
        .find(|w| g(w[0]) <= 0.0 && g(w[1]) >= 0.0)
        .map(|w| (w[0], w[1]))
        .ok_or_else(|| Error::CharacteristicInversion { x: vec![x], t, reason: "no sign change in scan".into() })?;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Largest difference between `ubar` from the Newton inversion and from the
/// shooting oracle, over a set of one-dimensional points and times.
pub fn shooting_error(u0: &InitialVelocity, times: &[f64], xs: &[f64]) -> Result<f64> {
    let samples: Vec<Point> = xs.iter().map(|&x| [x, 0.0]).collect();
    let flow = BackgroundFlow::new(u0.clone(), &samples)?;
    let mut worst = 0.0f64;
    for &t in times {
        for &x in xs {
            let newton = flow.evaluate(t, [x, 0.0])?.velocity[0];
            let oracle = u0.value([shooting_foot(u0, t, x)?, 0.0])[0];
            worst = worst.max((newton - oracle).abs());
        }
    }
    Ok(worst)
}

/// Supremum over Lagrangian labels of `|K(t)|` and `|D^2 ubar(t)|` at each time.
#[derive(Debug, Clone, PartialEq)]
pub struct BackgroundProfile {
    pub times: Vec<f64>,
    pub deviation: Vec<f64>,
    pub hessian: Vec<f64>,
}

impl BackgroundProfile {
    /// Power-law fit of the Hessian sup norm over `window`.
    pub fn hessian_decay(&self, window: (f64, f64)) -> Result<DecayFit> {
        decay_fit(&self.times, &self.hessian, 2, window)
    }

    pub fn max_deviation(&self) -> f64 {
        self.deviation.iter().copied().fold(0.0, f64::max)
    }
}

/// Sampling labels instead of positions covers the whole line at every
/// time, since characteristics spread linearly.
pub fn background_profile(flow: &BackgroundFlow, times: &[f64], labels: &[Point]) -> Result<BackgroundProfile> {
    let d = flow.initial_velocity().dim();
    let mut deviation = Vec::with_capacity(times.len());
    let mut hessian = Vec::with_capacity(times.len());
    for &t in times {
        let mut k_sup = 0.0f64;
        let mut h_sup = 0.0f64;
        for &y in labels {
            k_sup = k_sup.max(mat_sup(&flow.lagrangian_sample(t, y)?.deviation));
            let h = flow.lagrangian_hessian(t, y)?;
            for row in h.iter().take(d) {
                for col in row.iter().take(d) {
                    for v in col.iter().take(d) {
                        h_sup = h_sup.max(v.abs());
                    }
                }
            }
        }
        deviation.push(k_sup);
        hessian.push(h_sup);
    }
    Ok(BackgroundProfile { times: times.to_vec(), deviation, hessian })
}

/// Cone discrepancies on successively refined grids.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeStudy {
    pub cells: Vec<usize>,
    /// Perturbation supported outside the ball.
    pub outside: Vec<ConeReport>,
    /// Negative control: perturbation inside the ball.
    pub inside: Vec<ConeReport>,
}

fn orders(cells: &[usize], reports: &[ConeReport]) -> Vec<f64> {
    reports
        .windows(2)
        .zip(cells.windows(2))
        .map(|(r, n)| {
            let ratio = r[0].discrepancy / r[1].discrepancy;
            if r[1].discrepancy == 0.0 {
                f64::INFINITY
            } else {
                ratio.ln() / (n[1] as f64 / n[0] as f64).ln()
            }
        })
        .collect()
}

impl ConeStudy {
    /// Observed refinement orders of the outside-ball discrepancy.
    pub fn outside_orders(&self) -> Vec<f64> {
        orders(&self.cells, &self.outside)
    }

    pub fn inside_orders(&self) -> Vec<f64> {
        orders(&self.cells, &self.inside)
    }

    /// Ratio of finest to coarsest inside-ball discrepancy.
    pub fn inside_spread(&self) -> f64 {
        match (self.inside.first(), self.inside.last()) {
            (Some(a), Some(b)) if a.discrepancy > 0.0 => b.discrepancy / a.discrepancy,
            _ => f64::NAN,
        }
    }
}

fn point(v: &[f64]) -> Point {
    let mut p = [0.0; 2];
    for (a, b) in p.iter_mut().zip(v) {
        *a = *b;
    }
    p
}

/// Runs the cone agreement test on the configured cone grids, on a
/// non-vacuum base state at rest.
pub fn cone_study(config: &Config) -> Result<ConeStudy> {
    config.validate()?;
    let gas = config.gas_parameters()?;
    let c = &config.cone;
    let dim = config.grid.dim;
    let background = Quiescent { dim };
    let model = Model { gas, scheme: scheme_config(config), background: &background, forcing: None };
    let formulation = config.formulation();
    let setup = ConeSetup { center: point(&c.center), radius: c.radius, t_end: c.t_end };
    let base = InitialData { base_pi: c.base_pi, ..initial_data_of(config) };
    let with = |p: BumpPerturbation| InitialData { perturbations: vec![p], ..base.clone() };
    let outside = with(BumpPerturbation {
        center: point(&c.perturbation_center),
        radius: c.perturbation_radius,
        amplitude: c.perturbation_amplitude,
    });
    let inside =
        with(BumpPerturbation { center: setup.center, radius: 0.5 * c.radius, amplitude: c.perturbation_amplitude });

    let mut study = ConeStudy { cells: Vec::new(), outside: Vec::new(), inside: Vec::new() };
    for level in 0..c.levels {
        let cells = c.cells << level;
        let grid = Grid::centered(dim, cells, c.half_width)?;
        let reference = init_data(&base, grid, &gas, formulation, &background, c.t_end, 0)?;
        let make = |data: &InitialData| init_data(data, grid, &gas, formulation, &background, c.t_end, 0);
        study.outside.push(cone_agreement_test(model, &reference, &make(&outside)?, &setup)?);
        study.inside.push(cone_agreement_test(model, &reference, &make(&inside)?, &setup)?);
        study.cells.push(cells);
    }
    Ok(study)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_endpoints() {
        assert_eq!(linspace(0.0, 1.0, 3), vec![0.0, 0.5, 1.0]);
        assert_eq!(linspace(2.0, 5.0, 1), vec![2.0]);
    }

    #[test]
    fn shooting_matches_linear_closed_form() {
        let u0 = InitialVelocity::linear(1, 1.0);
        let y = shooting_foot(&u0, 3.0, 2.0).unwrap();
        assert!((y - 0.5).abs() < 1e-14);
    }

    #[test]
    fn roundtrip_is_tight_for_reference_gas() {
        let gas = GasParameters::with_gamma(0.5, 3.0).unwrap();
        assert!(eos_roundtrip_error(&gas, 50, &[-1.0, 0.0, 1.0]).unwrap() < 1e-12);
    }
}
