//! Linear recurrences, their interpolation coefficients and worst-case
//! amplitudes over polydiscs of roots and initial values.

mod closed_form;
mod interp;
mod recurrence;

pub use closed_form::*;
pub use interp::*;
pub use recurrence::*;
