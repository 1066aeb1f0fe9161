//! Empirical constants of the interpolation, composition and product
//! inequalities used by the energy estimates, measured on random bump
//! families and along runs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::spectral::Spectral;
use crate::error::Result;
use crate::solver::{init::bump, Grid};

/// Largest observed `LHS/RHS` for one inequality instance.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityCheck {
    pub name: String,
    pub max_ratio: f64,
    pub evaluated: usize,
    /// Samples with a vanishing right-hand side.
    pub skipped: usize,
}

impl InequalityCheck {
    fn new(name: String) -> Self {
        Self { name, max_ratio: 0.0, evaluated: 0, skipped: 0 }
    }

    /// Records `(lhs, rhs)` pairs in order, so the result does not depend on
    /// how they were computed.
    fn record_all(&mut self, pairs: Vec<(f64, f64)>) {
        for (lhs, rhs) in pairs {
            self.record(lhs, rhs);
        }
    }

    fn record(&mut self, lhs: f64, rhs: f64) {
        if rhs > 0.0 && rhs.is_finite() {
            self.max_ratio = self.max_ratio.max(lhs / rhs);
            self.evaluated += 1;
        } else {
            self.skipped += 1;
        }
    }

    pub fn is_finite(&self) -> bool {
        self.max_ratio.is_finite()
    }
}

/// Random sums of one to three bumps on a one-dimensional grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleFamily {
    pub count: usize,
    pub cells: usize,
    pub half_width: f64,
    pub seed: u64,
}

impl SampleFamily {
    pub fn grid(&self) -> Result<Grid> {
        Grid::centered(1, self.cells, self.half_width)
    }

    pub fn generate(&self) -> Result<Vec<Vec<f64>>> {
        let grid = self.grid()?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        Ok((0..self.count).map(|_| random_bumps(&grid, &mut rng)).collect())
    }
}

fn random_bumps(grid: &Grid, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let terms = rng.random_range(1..=3);
    let mut f = vec![0.0; grid.len()];
    let reach = 0.5 * grid.length();
    for _ in 0..terms {
        let amplitude = 10f64.powf(rng.random_range(-1.0..1.0));
        let width = rng.random_range(0.5..3.0);
        let center = rng.random_range(-(reach - width - 1.0)..(reach - width - 1.0));
        for (i, v) in f.iter_mut().enumerate() {
            *v += amplitude * bump((grid.axis_coord(i) - center) / width);
        }
    }
    f
}

struct Derivatives<'a> {
    spectral: &'a Spectral,
    h: f64,
}

impl Derivatives<'_> {
    fn nth(&self, f: &[f64], k: usize) -> Vec<f64> {
        if k == 0 {
            return f.to_vec();
        }
        self.spectral.derivative(&self.spectral.forward(f), [k, 0])
    }

    fn lp(&self, f: &[f64], p: f64) -> f64 {
        if p.is_infinite() {
            return sup(f);
        }
        (self.h * f.iter().map(|x| x.abs().powf(p)).sum::<f64>()).powf(1.0 / p)
    }

    fn l2_of_derivative(&self, f: &[f64], k: usize) -> f64 {
        self.lp(&self.nth(f, k), 2.0)
    }
}

fn sup(f: &[f64]) -> f64 {
    f.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `||d^i z||_(2r/i) <= C ||z||_inf^(1 - i/r) ||D^r z||_2^(i/r)` for `1 <= i < r <= max_order`.
pub fn gagliardo_nirenberg(samples: &[Vec<f64>], grid: &Grid, max_order: usize) -> Vec<InequalityCheck> {
    let spectral = Spectral::new(*grid);
    let ops = Derivatives { spectral: &spectral, h: grid.spacing() };
    let mut checks = Vec::new();
    for r in 2..=max_order {
        for i in 1..r {
            let mut check = InequalityCheck::new(format!("gagliardo-nirenberg i={i} r={r}"));
            let theta = i as f64 / r as f64;
            check.record_all(
                samples
                    .par_iter()
                    .map(|z| {
                        let lhs = ops.lp(&ops.nth(z, i), 2.0 * r as f64 / i as f64);
                        (lhs, sup(z).powf(1.0 - theta) * ops.l2_of_derivative(z, r).powf(theta))
                    })
                    .collect(),
            );
            checks.push(check);
        }
    }
    checks
}

/// `||d^k f^nu||_2 <= C ||f||_inf^(nu - 1) ||D^k f||_2` for non-negative `f`,
/// `1 <= k <= max_order` and `k <= nu` when `nu` is not an integer.
pub fn power_bound(samples: &[Vec<f64>], grid: &Grid, exponents: &[f64], max_order: usize) -> Vec<InequalityCheck> {
    let spectral = Spectral::new(*grid);
    let ops = Derivatives { spectral: &spectral, h: grid.spacing() };
    let mut checks = Vec::new();
    for &nu in exponents {
        for k in 1..=max_order {
            if nu.fract() != 0.0 && k as f64 > nu {
                continue;
            }
            let mut check = InequalityCheck::new(format!("power nu={nu} k={k}"));
            check.record_all(
                samples
                    .par_iter()
                    .map(|f| {
                        let powered: Vec<f64> = f.iter().map(|x| x.max(0.0).powf(nu)).collect();
                        (ops.l2_of_derivative(&powered, k), sup(f).powf(nu - 1.0) * ops.l2_of_derivative(f, k))
                    })
                    .collect(),
            );
            checks.push(check);
        }
    }
    checks
}

/// Partners of each sample in the product check: sample `i` is paired with
/// `i + 1 ..= i + PRODUCT_PARTNERS`, so a family's pairs are a subset of the
/// pairs of any family that extends it.
const PRODUCT_PARTNERS: usize = 8;

/// `||d^k (f g)||_2 <= C (||f||_inf ||D^k g||_2 + ||g||_inf ||D^k f||_2)` over
/// pairs of nearby samples.
pub fn product_bound(samples: &[Vec<f64>], grid: &Grid, max_order: usize) -> Vec<InequalityCheck> {
    let spectral = Spectral::new(*grid);
    let ops = Derivatives { spectral: &spectral, h: grid.spacing() };
    // sup and ||D^k f||_2 for k = 1..=max_order, per sample
    let norms: Vec<(f64, Vec<f64>)> =
        samples.par_iter().map(|f| (sup(f), (1..=max_order).map(|k| ops.l2_of_derivative(f, k)).collect())).collect();
    let pairs: Vec<(usize, usize)> = (0..samples.len())
        .flat_map(|i| (i + 1..samples.len().min(i + 1 + PRODUCT_PARTNERS)).map(move |j| (i, j)))
        .collect();
    let measured: Vec<Vec<(f64, f64)>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let fg: Vec<f64> = samples[i].iter().zip(&samples[j]).map(|(a, b)| a * b).collect();
            let ((sf, df), (sg, dg)) = (&norms[i], &norms[j]);
            (1..=max_order).map(|k| (ops.l2_of_derivative(&fg, k), sf * dg[k - 1] + sg * df[k - 1])).collect()
        })
        .collect();
    (1..=max_order)
        .map(|k| {
            let mut check = InequalityCheck::new(format!("product k={k}"));
            check.record_all(measured.iter().map(|m| m[k - 1]).collect());
            check
        })
        .collect()
}

/// Sup norms bounded by the weighted energy along a run:
/// `||U||_inf <= C (1 + t)^(beta + 1) Z`, `||DU||_inf <= C (1 + t)^beta Z`, and
/// `||D^2 U||_inf <= C (1 + t)^(beta - 1) Z` when `m > 2 + d/2`.
pub fn sup_by_energy(
    times: &[f64],
    z: &[f64],
    sup_norms: &[Vec<f64>],
    beta: f64,
    m: usize,
    dim: usize,
    window: (f64, f64),
) -> Vec<InequalityCheck> {
    let orders = if m as f64 > 2.0 + dim as f64 / 2.0 { 3 } else { 2 };
    (0..orders)
        .map(|k| {
            let mut check = InequalityCheck::new(format!("sup-by-energy k={k}"));
            for ((&t, &zt), sups) in times.iter().zip(z).zip(sup_norms) {
                if t < window.0 || t > window.1 {
                    continue;
                }
                let rhs = (1.0 + t).powf(beta + 1.0 - k as f64) * zt;
                check.record(sups[k], rhs);
            }
            check
        })
        .collect()
}

/// All sample-based checks on one family.
pub fn inequality_suite(family: &SampleFamily) -> Result<Vec<InequalityCheck>> {
    let grid = family.grid()?;
    let samples = family.generate()?;
    let mut out = gagliardo_nirenberg(&samples, &grid, 3);
    out.extend(power_bound(&samples, &grid, &[2.0, 3.0, 2.5], 3));
    out.extend(product_bound(&samples, &grid, 3));
    Ok(out)
}

/// Max ratios on a base family against a family enriched by `factor`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnrichmentStudy {
    pub base: Vec<InequalityCheck>,
    pub enriched: Vec<InequalityCheck>,
}

impl EnrichmentStudy {
    /// Relative change of each max ratio, by check name.
    pub fn changes(&self) -> Vec<(String, f64)> {
        self.base
            .iter()
            .zip(&self.enriched)
            .map(|(b, e)| (b.name.clone(), if b.max_ratio > 0.0 { e.max_ratio / b.max_ratio - 1.0 } else { 0.0 }))
            .collect()
    }

    pub fn stable(&self, tolerance: f64) -> bool {
        self.enriched.iter().all(InequalityCheck::is_finite) && self.changes().iter().all(|(_, c)| c.abs() <= tolerance)
    }
}

/// Runs the suite on `family` and on a family `factor` times larger whose
/// first samples coincide with the base family.
pub fn enrichment_study(family: &SampleFamily, factor: usize) -> Result<EnrichmentStudy> {
    let base = inequality_suite(family)?;
    let enriched = inequality_suite(&SampleFamily { count: family.count * factor, ..family.clone() })?;
    Ok(EnrichmentStudy { base, enriched })
}
