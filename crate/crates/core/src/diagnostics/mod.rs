//! Weighted Sobolev norms, decay-rate fits, the comparison envelope and
//! empirical inequality constants.

pub mod comparison;
pub mod fit;
pub mod inequalities;
pub mod norms;
pub mod series;
pub mod spectral;

pub use comparison::{calibrate_constant, general_exponent, ComparisonFunction, EnvelopeReport};
pub use fit::{decay_fit, DecayFit};
pub use norms::{sobolev_norms, sobolev_norms_fd, NormConfig, SobolevNorms};
pub use series::{SeriesRow, SobolevSeries};
