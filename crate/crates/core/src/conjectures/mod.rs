//! Numerical evidence for the interpolation-error conjectures on
//! self-conjugate grids.

mod grid;
mod kallioniemi;
mod ratio;
mod scan;

pub use grid::*;
pub use kallioniemi::*;
pub use ratio::*;
pub use scan::*;
