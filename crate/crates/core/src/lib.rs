//! Numerical laboratory for the compressible Euler equations of a
//! polytropic van der Waals gas near vacuum, in the symmetrized variables
//! `(pi, u, s)`, perturbing an expanding Burgers background.
//!
//! The crate is organised bottom-up:
//!
//! * [`thermo`]: closed-form equation of state and the vacuum-compatible variable `pi`.
//! * [`symsys`]: symbols, symmetrizers and background splittings.
//! * [`background`]: the pressureless expanding flow.
//! * [`solver`]: method-of-lines integrator, cone test and conservation monitor.
//! * [`diagnostics`]: weighted Sobolev norms, decay fits, comparison envelope, inequality checks.
//! * [`io`]: configuration files, run records and the command implementations behind the `vdwe` binary.
//!
//! Runnable walkthroughs live in `examples/`.

// Validation reads `!(x > 0.0)` on purpose so that NaN is rejected too; index
// loops over d <= 2 axes are clearer than zipped iterators.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod background;
pub mod checks;
pub mod diagnostics;
pub mod error;
pub mod io;
mod par;
mod quad;
pub mod solver;
pub mod symsys;
pub mod thermo;

pub use error::{Error, Result};
