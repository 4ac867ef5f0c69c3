//! Regular maps whose automorphism groups are 2-groups.
//!
//! Every group here is a quotient of Δ = ⟨ρ0, ρ1, ρ2 | ρi², (ρ0ρ2)²⟩ and
//! every map is given by the regular action of such a quotient on its flags.

pub mod analysis;
pub mod coset;
pub mod descent;
pub mod error;
pub mod expr;
pub mod gf2;
pub mod perm;
pub mod presentation;
pub mod verify;
pub mod word;

pub use analysis::{analyze, RegularMapRecord};
pub use coset::{todd_coxeter, CanonicalTable, CosetTable, EnumerationLimits};
pub use descent::{run_census, Census, CensusConfig, CensusRecord};
pub use error::{CensusError, EnumerationError, ParseError, PresentationError, TableError};
pub use expr::{parse_relator, RelatorExpr};
pub use presentation::{preset, preset_from_spec, FamilyTag, Presentation, FAMILIES};
pub use word::{Generator, Word};
