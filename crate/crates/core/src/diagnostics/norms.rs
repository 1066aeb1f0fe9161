use super::spectral::{multi_indices, Spectral};
use crate::error::{Error, Result};
use crate::par;
use crate::solver::{stencil, FieldSet};
use crate::symsys::Formulation;

/// Exponents of the time-weighted energy.
#[derive(Debug, Clone, PartialEq)]
pub struct NormConfig {
    pub m: usize,
    pub dim: usize,
    pub formulation: Formulation,
    /// Rate shift `r`: `Y_k` is expected to decay like `(1 + t)^(-(k + r))`.
    pub rate_shift: f64,
    /// Exponent `a` of `zeta = (1 + t)^a exp(C/(1 + t)) Z`.
    pub growth: f64,
    /// `-g_1 - d/2`.
    pub beta: f64,
    /// `g_k` for `k = 0..=m`.
    pub exponents: Vec<f64>,
}

impl NormConfig {
    pub fn new(m: usize, dim: usize, gamma0: f64, formulation: Formulation) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return Err(Error::InvalidArgument(format!("dimension {dim} not in 1..=2")));
        }
        if m == 0 {
            return Err(Error::InvalidArgument("Sobolev order m must be at least 1".into()));
        }
        let half_d = dim as f64 / 2.0;
        let (rate_shift, growth, exponents): (f64, f64, Vec<f64>) = match formulation {
            Formulation::Isentropic => {
                let r = (1.0 - half_d).min((gamma0 / 2.0 - 1.0) * dim as f64);
                let g = (0..=m).map(|k| k as f64 - half_d - 1.0).collect();
                (r, 1.0 + half_d + r, g)
            }
            Formulation::General { theta } => {
                let r = theta / 2.0 - half_d;
                let a = 1.0 + theta / 2.0;
                let g = (0..=m).map(|k| k as f64 + r - a).collect();
                (r, a, g)
            }
        };
        let beta = -exponents[1] - half_d;
        Ok(Self { m, dim, formulation, rate_shift, growth, beta, exponents })
    }

    /// Predicted decay exponent `-(k + r)` of `Y_k`.
    pub fn predicted_exponent(&self, k: usize) -> f64 {
        -(k as f64 + self.rate_shift)
    }

    /// `Z = sum_k (1 + t)^(g_k) Y_k`.
    pub fn weighted_sum(&self, norms: &[f64], t: f64) -> f64 {
        norms.iter().zip(&self.exponents).map(|(y, g)| (1.0 + t).powf(*g) * y).sum()
    }

    /// `zeta = (1 + t)^a exp(C/(1 + t)) Z`.
    pub fn zeta(&self, z: f64, t: f64, c_fit: f64) -> f64 {
        (1.0 + t).powf(self.growth) * (c_fit / (1.0 + t)).exp() * z
    }
}

/// Sobolev norms of the perturbation at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct SobolevNorms {
    /// `Y_k = ||D^k U||_2`.
    pub plain: Vec<f64>,
    /// `N_k`, with the pointwise weight `A0(V)`; equal to `plain` for the
    /// isentropic formulation.
    pub weighted: Vec<f64>,
    /// `||D^k U||_inf` for `k = 0..=min(m, 2)`.
    pub sup: Vec<f64>,
}

/// Spectral `Y_k`, `N_k` and sup norms. `entropy_weight` maps `s` to the
/// weight of the `pi` component in `A0`.
pub fn sobolev_norms<W>(fields: &FieldSet, m: usize, formulation: Formulation, entropy_weight: W) -> SobolevNorms
where
    W: Fn(f64) -> f64,
{
    let grid = fields.grid;
    let n = grid.len();
    let vol = grid.cell_volume();
    let spectral = Spectral::new(grid);
    let mut weights: Vec<Option<Vec<f64>>> = vec![None; fields.components.len()];
    if let (Formulation::General { theta }, Some(s)) = (formulation, fields.entropy()) {
        weights[0] = Some(s.iter().map(|&x| entropy_weight(x)).collect());
        weights[grid.dim() + 1] = Some(vec![(1.0 + fields.time).powf(-theta); n]);
    }
    let transforms: Vec<_> = fields.components.iter().map(|c| spectral.forward(c)).collect();
    let mut plain = Vec::with_capacity(m + 1);
    let mut weighted = Vec::with_capacity(m + 1);
    let mut sup = Vec::new();
    for k in 0..=m {
        let mut pointwise = vec![0.0; n];
        let mut pointwise_weighted = vec![0.0; n];
        for (c, tr) in transforms.iter().enumerate() {
            for (alpha, mult) in multi_indices(grid.dim(), k) {
                let deriv = if k == 0 { fields.components[c].clone() } else { spectral.derivative(tr, alpha) };
                for i in 0..n {
                    let sq = mult * deriv[i] * deriv[i];
                    pointwise[i] += sq;
                    pointwise_weighted[i] += weights[c].as_ref().map_or(sq, |w| w[i] * sq);
                }
            }
        }
        plain.push((vol * par::sum(n, |i| pointwise[i])).sqrt());
        weighted.push((vol * par::sum(n, |i| pointwise_weighted[i])).sqrt());
        if k <= 2 {
            sup.push(par::max(n, |i| pointwise[i]).sqrt());
        }
    }
    SobolevNorms { plain, weighted, sup }
}

/// `Y_k` computed with repeated eighth-order central differences.
pub fn sobolev_norms_fd(fields: &FieldSet, m: usize) -> Vec<f64> {
    let grid = fields.grid;
    let n = grid.len();
    let weights = stencil::first_derivative_weights(8).expect("order 8 is supported");
    let mut out = Vec::with_capacity(m + 1);
    for k in 0..=m {
        let mut total = vec![0.0; n];
        for comp in &fields.components {
            for (alpha, mult) in multi_indices(grid.dim(), k) {
                let mut f = comp.clone();
                let mut tmp = vec![0.0; n];
                for (axis, &count) in alpha.iter().enumerate() {
                    for _ in 0..count {
                        stencil::derivative(&f, &grid, axis, weights, &mut tmp);
                        std::mem::swap(&mut f, &mut tmp);
                    }
                }
                for i in 0..n {
                    total[i] += mult * f[i] * f[i];
                }
            }
        }
        out.push((grid.cell_volume() * par::sum(n, |i| total[i])).sqrt());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::Grid;
    use std::f64::consts::PI;

    #[test]
    fn isentropic_exponents() {
        let cfg = NormConfig::new(3, 1, 3.0, Formulation::Isentropic).unwrap();
        assert_eq!(cfg.rate_shift, 0.5);
        assert_eq!(cfg.growth, 2.0);
        assert_eq!(cfg.beta, 0.0);
        assert_eq!(cfg.exponents, vec![-1.5, -0.5, 0.5, 1.5]);
        for k in 0..=3 {
            assert_eq!(k as f64 + cfg.rate_shift, cfg.exponents[k] + cfg.growth);
        }
    }

    #[test]
    fn general_exponents() {
        let cfg = NormConfig::new(2, 1, 3.0, Formulation::General { theta: 1.0 }).unwrap();
        assert_eq!(cfg.rate_shift, 0.0);
        assert_eq!(cfg.growth, 1.5);
        assert_eq!(cfg.beta, 0.0);
    }

    #[test]
    fn sine_has_equal_norms() {
        let g = Grid::new(1, 64, 0.0, 2.0 * PI).unwrap();
        let mut f = FieldSet::zeros(g, false);
        for i in 0..64 {
            f.components[0][i] = g.axis_coord(i).sin();
        }
        let norms = sobolev_norms(&f, 4, Formulation::Isentropic, |_| 1.0);
        for y in &norms.plain {
            assert!((y - PI.sqrt()).abs() < 1e-12, "{y}");
        }
        // cell-centred samples peak at cos(h/2)
        let peak = (PI / 64.0).cos();
        for s in &norms.sup {
            assert!((s - peak).abs() < 1e-12, "{s}");
        }
    }

    #[test]
    fn single_term_weighted_sum() {
        let cfg = NormConfig::new(1, 1, 3.0, Formulation::Isentropic).unwrap();
        let z = cfg.weighted_sum(&[2.0, 0.0], 3.0);
        assert!((z - 2.0 * 4f64.powf(-1.5)).abs() < 1e-15);
        assert!((cfg.zeta(z, 0.0, 0.7) - 0.7f64.exp() * z).abs() < 1e-15);
    }
}
