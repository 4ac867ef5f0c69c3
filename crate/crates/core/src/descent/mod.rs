//! Level-by-level enumeration of the 2-group quotients of Δ.
//!
//! Every quotient of order 2^(k+1) is a central extension by Z2 of one of
//! order 2^k. For a quotient Δ/K the extensions correspond to the nonzero
//! functionals on the coinvariants of V = K/[K,K]K².

mod census;
mod module;
pub mod store;

pub use census::{children, run_census, Census, CensusConfig, CensusRecord, Level, StoredNode};
pub use module::{coinvariants, extend, extend_by_values, schreier_module, Coinvariants, Extension, ModuleSpace};
pub use store::{crosscheck, load_census, read_counts, CrosscheckRow};
