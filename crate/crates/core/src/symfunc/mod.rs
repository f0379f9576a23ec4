//! Symmetric polynomials evaluated at points of `C^n`.
//!
//! Everything here is a specialization: elementary `e_d`, complete
//! homogeneous `h_d` and power sums `p_i` are tabulated once per point in a
//! [`SymTable`], and hook-shaped Schur polynomials are read off the table
//! with the bilinear `h`/`e` expansion. Exact integer routes (hook-content,
//! Kostka numbers) are provided for the all-ones specialization and for
//! cross-checks.

mod partition;
mod schur;
mod table;
mod tableaux;

pub use partition::{partitions_of, Hook, Partition};
pub use schur::{schur_hook, schur_hook_dual, schur_hook_ones, schur_ones_general};
pub use table::SymTable;
pub use tableaux::{enumerate_ssyt, kostka, monomial_sym, schur_via_kostka, Ssyt, KOSTKA_SIZE_CAP};
