use super::grid::Grid;
use crate::error::{Error, Result};

/// Perturbation unknowns on a grid. Component 0 is `pi`, components
/// `1..=d` the velocity perturbation `w`, and component `d + 1` the
/// entropy when the general formulation is used.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSet {
    pub grid: Grid,
    pub time: f64,
    pub components: Vec<Vec<f64>>,
}

impl FieldSet {
    pub fn zeros(grid: Grid, with_entropy: bool) -> Self {
        let n = grid.dim() + 1 + usize::from(with_entropy);
        Self { grid, time: 0.0, components: vec![vec![0.0; grid.len()]; n] }
    }

    pub fn has_entropy(&self) -> bool {
        self.components.len() == self.grid.dim() + 2
    }

    pub fn pi(&self) -> &[f64] {
        &self.components[0]
    }

    pub fn velocity(&self, axis: usize) -> &[f64] {
        &self.components[1 + axis]
    }

    pub fn entropy(&self) -> Option<&[f64]> {
        self.has_entropy().then(|| self.components[self.grid.dim() + 1].as_slice())
    }

    /// Entropy at one cell, zero for the isentropic formulation.
    pub fn entropy_at(&self, idx: usize) -> f64 {
        self.entropy().map_or(0.0, |s| s[idx])
    }

    /// `self + factor * rate`, with the time advanced by `dt`.
    pub(crate) fn axpy(&self, factor: f64, rate: &[Vec<f64>], dt: f64) -> Self {
        let components = self
            .components
            .iter()
            .zip(rate)
            .map(|(c, r)| c.iter().zip(r).map(|(a, b)| a + factor * b).collect())
            .collect();
        Self { grid: self.grid, time: self.time + dt, components }
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().flatten().all(|v| v.is_finite())
    }

    pub fn check_compatible(&self, other: &FieldSet) -> Result<()> {
        if self.grid != other.grid || self.components.len() != other.components.len() {
            return Err(Error::InvalidArgument("field sets live on different grids or formulations".into()));
        }
        Ok(())
    }
}
