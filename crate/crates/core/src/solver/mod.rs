//! Method-of-lines integrator on a periodic box, with the finite-speed cone
//! test, the conservation monitor and the configured reference run.

pub mod cone;
pub mod conservation;
pub mod fields;
pub mod grid;
pub mod init;
pub mod integrator;
pub mod mms;
pub mod run;
pub mod stencil;

pub use fields::FieldSet;
pub use grid::Grid;
pub use integrator::{BackgroundGrid, Forcing, Model, SchemeConfig, Solver};
