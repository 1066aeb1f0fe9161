use crate::background::Point;
use crate::error::{Error, Result};

/// Uniform periodic cell-centred grid on `[lower, lower + length)^d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    dim: usize,
    cells: usize,
    lower: f64,
    length: f64,
}

impl Grid {
    pub fn new(dim: usize, cells: usize, lower: f64, length: f64) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return Err(Error::InvalidArgument(format!("dimension {dim} not in 1..=2")));
        }
        if cells < 16 || !cells.is_power_of_two() {
            return Err(Error::InvalidArgument(format!("cells per axis {cells} must be a power of two >= 16")));
        }
        if !(length.is_finite() && length > 0.0 && lower.is_finite()) {
            return Err(Error::InvalidArgument(format!("invalid box [{lower}, {lower} + {length})")));
        }
        Ok(Self { dim, cells, lower, length })
    }

    /// Box `[-half_width, half_width)^d`.
    pub fn centered(dim: usize, cells: usize, half_width: f64) -> Result<Self> {
        Self::new(dim, cells, -half_width, 2.0 * half_width)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Cells per axis.
    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.cells as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Total number of cells.
    pub fn len(&self) -> usize {
        self.cells.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coordinate of cell `i` along one axis.
    pub fn axis_coord(&self, i: usize) -> f64 {
        self.lower + (i as f64 + 0.5) * self.spacing()
    }

    /// Per-axis indices of a flat index (x fastest).
    pub fn split(&self, idx: usize) -> [usize; 2] {
        if self.dim == 1 {
            [idx, 0]
        } else {
            [idx % self.cells, idx / self.cells]
        }
    }

    pub fn point(&self, idx: usize) -> Point {
        let [i, j] = self.split(idx);
        if self.dim == 1 {
            [self.axis_coord(i), 0.0]
        } else {
            [self.axis_coord(i), self.axis_coord(j)]
        }
    }

    /// Flat index of the neighbour `offset` cells away along `axis`, wrapping periodically.
    pub fn shift(&self, idx: usize, axis: usize, offset: isize) -> usize {
        let n = self.cells as isize;
        let [i, j] = self.split(idx);
        if axis == 0 {
            let k = (i as isize + offset).rem_euclid(n) as usize;
            k + j * self.cells
        } else {
            let k = (j as isize + offset).rem_euclid(n) as usize;
            i + k * self.cells
        }
    }

    /// Whether the cell lies within `width` cells of the periodic seam on any axis.
    pub fn in_seam_buffer(&self, idx: usize, width: usize) -> bool {
        let ij = self.split(idx);
        (0..self.dim).any(|a| ij[a] < width || ij[a] >= self.cells - width)
    }

    /// Damping factor of a sponge layer `width` cells wide at the seam: 1 in
    /// the interior, falling smoothly (C2 quintic ramp) to 0 at the seam itself.
    pub fn seam_taper(&self, idx: usize, width: usize) -> f64 {
        if width == 0 {
            return 1.0;
        }
        let ij = self.split(idx);
        (0..self.dim)
            .map(|a| {
                let from_seam = ij[a].min(self.cells - 1 - ij[a]);
                let r = (from_seam as f64 / width as f64).min(1.0);
                r * r * r * (10.0 - 15.0 * r + 6.0 * r * r)
            })
            .product()
    }

    /// Same box with a different resolution.
    pub fn with_cells(&self, cells: usize) -> Result<Self> {
        Self::new(self.dim, cells, self.lower, self.length)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_shift_wraps() {
        let g = Grid::centered(2, 16, 1.0).unwrap();
        assert_eq!(g.shift(0, 0, -1), 15);
        assert_eq!(g.shift(0, 1, -1), 15 * 16);
        assert_eq!(g.shift(g.shift(37, 0, 3), 0, -3), 37);
        assert!(Grid::centered(1, 24, 1.0).is_err());
    }

    #[test]
    fn seam_taper_ramps_inside_buffer() {
        let g = Grid::centered(1, 64, 1.0).unwrap();
        assert_eq!(g.seam_taper(0, 8), 0.0);
        assert_eq!(g.seam_taper(63, 8), 0.0);
        assert_eq!(g.seam_taper(8, 8), 1.0);
        assert_eq!(g.seam_taper(32, 8), 1.0);
        let ramp: Vec<f64> = (0..=8).map(|i| g.seam_taper(i, 8)).collect();
        assert!(ramp.windows(2).all(|w| w[0] < w[1] || w[1] == 1.0));
        assert_eq!(g.seam_taper(5, 0), 1.0);
    }
}
