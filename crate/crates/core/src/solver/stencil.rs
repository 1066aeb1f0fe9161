use super::grid::Grid;
use crate::error::{Error, Result};
use crate::par;

/// Central first-derivative weights `c_k`, `f' ~ sum_k c_k (f_{i+k} - f_{i-k})/h`.
pub fn first_derivative_weights(order: usize) -> Result<&'static [f64]> {
    const O2: [f64; 1] = [0.5];
    const O4: [f64; 2] = [2.0 / 3.0, -1.0 / 12.0];
    const O6: [f64; 3] = [0.75, -0.15, 1.0 / 60.0];
    const O8: [f64; 4] = [0.8, -0.2, 4.0 / 105.0, -1.0 / 280.0];
    match order {
        2 => Ok(&O2),
        4 => Ok(&O4),
        6 => Ok(&O6),
        8 => Ok(&O8),
        _ => Err(Error::InvalidArgument(format!("spatial order {order} not in {{2, 4, 6, 8}}"))),
    }
}

/// Periodic central first derivative along `axis`.
pub fn derivative(f: &[f64], grid: &Grid, axis: usize, weights: &[f64], out: &mut [f64]) {
    let inv_h = 1.0 / grid.spacing();
    par::fill(out, |idx| {
        let mut acc = 0.0;
        for (k, c) in weights.iter().enumerate() {
            let o = k as isize + 1;
            acc += c * (f[grid.shift(idx, axis, o)] - f[grid.shift(idx, axis, -o)]);
        }
        acc * inv_h
    });
}

/// Undivided discrete Laplacian `h^2 Lap_h f`.
pub fn undivided_laplacian(f: &[f64], grid: &Grid, out: &mut [f64]) {
    let d = grid.dim();
    par::fill(out, |idx| {
        let mut acc = -2.0 * d as f64 * f[idx];
        for axis in 0..d {
            acc += f[grid.shift(idx, axis, 1)] + f[grid.shift(idx, axis, -1)];
        }
        acc
    });
}

/// `h^4 Lap_h^2 f`; in one dimension the stencil `[1, -4, 6, -4, 1]`.
pub fn undivided_bilaplacian(f: &[f64], grid: &Grid, out: &mut [f64]) {
    let mut tmp = vec![0.0; f.len()];
    undivided_laplacian(f, grid, &mut tmp);
    undivided_laplacian(&tmp, grid, out);
}

/// Largest eigenvalue of `h^4 Lap_h^2`.
pub fn bilaplacian_spectral_radius(dim: usize) -> f64 {
    let l = 4.0 * dim as f64;
    l * l
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn derivative_orders() {
        for &order in &[2usize, 4, 6, 8] {
            let w = first_derivative_weights(order).unwrap();
            let mut errs = vec![];
            for &n in &[32usize, 64] {
                let g = Grid::new(1, n, 0.0, 2.0 * PI).unwrap();
                let f: Vec<f64> = (0..n).map(|i| g.axis_coord(i).sin()).collect();
                let mut d = vec![0.0; n];
                derivative(&f, &g, 0, w, &mut d);
                errs.push((0..n).map(|i| (d[i] - g.axis_coord(i).cos()).abs()).fold(0.0, f64::max));
            }
            let observed = (errs[0] / errs[1]).log2();
            assert!((observed - order as f64).abs() < 0.3, "order {order}: {observed}");
        }
    }

    #[test]
    fn bilaplacian_stencil_in_one_dimension() {
        let g = Grid::new(1, 16, 0.0, 16.0).unwrap();
        let mut f = vec![0.0; 16];
        f[8] = 1.0;
        let mut out = vec![0.0; 16];
        undivided_bilaplacian(&f, &g, &mut out);
        assert_eq!(&out[6..11], &[1.0, -4.0, 6.0, -4.0, 1.0]);
    }
}
