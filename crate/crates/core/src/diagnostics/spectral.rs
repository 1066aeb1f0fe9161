use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::solver::Grid;

/// Discrete Fourier differentiation on a periodic grid.
pub struct Spectral {
    grid: Grid,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    wavenumbers: Vec<f64>,
}

impl Spectral {
    pub fn new(grid: Grid) -> Self {
        let n = grid.cells();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let wavenumbers = (0..n)
            .map(|k| {
                let k = if k < n / 2 { k as f64 } else { k as f64 - n as f64 };
                2.0 * PI * k / grid.length()
            })
            .collect();
        Self { grid, forward, inverse, wavenumbers }
    }

    fn transform(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let n = self.grid.cells();
        plan.process(data);
        if self.grid.dim() == 2 {
            let mut column = vec![Complex64::new(0.0, 0.0); n];
            for i in 0..n {
                for j in 0..n {
                    column[j] = data[i + j * n];
                }
                plan.process(&mut column);
                for j in 0..n {
                    data[i + j * n] = column[j];
                }
            }
        }
    }

    pub fn forward(&self, f: &[f64]) -> Vec<Complex64> {
        let mut data: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.transform(&mut data, &self.forward);
        data
    }

    /// Real part of the normalised inverse transform.
    pub fn inverse_real(&self, mut data: Vec<Complex64>) -> Vec<f64> {
        self.transform(&mut data, &self.inverse);
        let scale = 1.0 / self.grid.len() as f64;
        data.into_iter().map(|c| c.re * scale).collect()
    }

    /// `d^alpha f` from its transform. The Nyquist mode is dropped along any
    /// axis differentiated an odd number of times.
    pub fn derivative(&self, transform: &[Complex64], alpha: [usize; 2]) -> Vec<f64> {
        let n = self.grid.cells();
        let factor = |k: usize, order: usize| -> Complex64 {
            if order == 0 {
                return Complex64::new(1.0, 0.0);
            }
            if order % 2 == 1 && k == n / 2 {
                return Complex64::new(0.0, 0.0);
            }
            Complex64::new(0.0, self.wavenumbers[k]).powu(order as u32)
        };
        let data = transform
            .iter()
            .enumerate()
            .map(|(idx, &c)| {
                let [i, j] = self.grid.split(idx);
                c * factor(i, alpha[0]) * factor(j, alpha[1])
            })
            .collect();
        self.inverse_real(data)
    }
}

/// Multi-indices of order `k` in `dim` dimensions with their multiplicity
/// among ordered `k`-tuples of axes.
pub fn multi_indices(dim: usize, k: usize) -> Vec<([usize; 2], f64)> {
    if dim == 1 {
        return vec![([k, 0], 1.0)];
    }
    (0..=k).map(|a| ([a, k - a], binomial(k, a))).collect()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn differentiates_trigonometric_modes() {
        let g = Grid::new(2, 32, 0.0, 2.0 * PI).unwrap();
        let sp = Spectral::new(g);
        let f: Vec<f64> = (0..g.len())
            .map(|i| {
                let p = g.point(i);
                (2.0 * p[0]).sin() * (3.0 * p[1]).cos()
            })
            .collect();
        let fx_fy = sp.derivative(&sp.forward(&f), [1, 1]);
        for i in 0..g.len() {
            let p = g.point(i);
            let exact = -6.0 * (2.0 * p[0]).cos() * (3.0 * p[1]).sin();
            assert!((fx_fy[i] - exact).abs() < 1e-11);
        }
    }

    #[test]
    fn multiplicities_sum_to_powers_of_dimension() {
        for k in 0..5 {
            let total: f64 = multi_indices(2, k).iter().map(|m| m.1).sum();
            assert_eq!(total, 2f64.powi(k as i32));
        }
    }
}
