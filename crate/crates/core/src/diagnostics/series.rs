use super::comparison::{calibrate_constant, ComparisonFunction, EnvelopeReport};
use super::fit::{decay_fit, DecayFit};
use super::norms::NormConfig;
use crate::error::Result;

/// Diagnostics recorded at one output time.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesRow {
    pub t: f64,
    /// `Y_k`, `k = 0..=m`.
    pub plain: Vec<f64>,
    /// `N_k` (equal to `Y_k` for the isentropic formulation).
    pub weighted: Vec<f64>,
    pub z: f64,
    pub zeta: f64,
    pub min_pi: f64,
    pub max_pi: f64,
    pub max_rho: f64,
    /// `||D^k U||_inf`, `k = 0..=2`.
    pub sup: Vec<f64>,
    pub mass: f64,
    pub momentum: Vec<f64>,
    pub energy: f64,
}

/// Time series of norms for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct SobolevSeries {
    pub config: NormConfig,
    /// Constant in `zeta = (1 + t)^a exp(C/(1 + t)) Z`.
    pub constant: f64,
    pub rows: Vec<SeriesRow>,
}

impl SobolevSeries {
    pub fn new(config: NormConfig) -> Self {
        Self { config, constant: 0.0, rows: Vec::new() }
    }

    /// Norms that enter `Z`: `N_k` for the general formulation, `Y_k` otherwise.
    pub fn primary(&self, k: usize) -> Vec<f64> {
        let general = !self.config.formulation.is_isentropic();
        self.rows.iter().map(|r| if general { r.weighted[k] } else { r.plain[k] }).collect()
    }

    pub fn times(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.t).collect()
    }

    /// Appends a row, filling `Z` and `zeta` from its norms.
    pub fn push(&mut self, mut row: SeriesRow) {
        let norms = if self.config.formulation.is_isentropic() { &row.plain } else { &row.weighted };
        row.z = self.config.weighted_sum(norms, row.t);
        row.zeta = self.config.zeta(row.z, row.t, self.constant);
        self.rows.push(row);
    }

    /// Replaces the constant and recomputes `zeta`.
    pub fn set_constant(&mut self, constant: f64) {
        self.constant = constant;
        for row in &mut self.rows {
            row.zeta = self.config.zeta(row.z, row.t, constant);
        }
    }

    pub fn fit(&self, k: usize, window: (f64, f64)) -> Result<DecayFit> {
        decay_fit(&self.times(), &self.primary(k), k, window)
    }

    /// Smallest constant making the envelope hold on `[0, window_end]`.
    pub fn calibrate(&self, nu: f64, window_end: f64) -> Result<f64> {
        let z: Vec<f64> = self.rows.iter().map(|r| r.z).collect();
        calibrate_constant(&self.times(), &z, nu, self.config.growth, window_end)
    }

    pub fn envelope(&self, nu: f64) -> Result<EnvelopeReport> {
        let cmp = ComparisonFunction::new(nu, self.config.growth, self.constant)?;
        let zeta: Vec<f64> = self.rows.iter().map(|r| r.zeta).collect();
        Ok(cmp.check(&self.times(), &zeta))
    }
}
