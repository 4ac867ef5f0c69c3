//! Coset tables for the three involutory generators and their enumeration.

mod enumerate;
mod table;

pub use enumerate::{todd_coxeter, EnumerationLimits};
pub use table::{CanonicalTable, CosetTable};
