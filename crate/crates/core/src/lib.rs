//! Bi-orders on free groups, surface groups and the pure surface braid
//! kernel `K_n`, and generalized-torsion certificates for pure braid groups
//! of non-orientable surfaces.
//!
//! * [`words`]: reduced words over indexed alphabets, abelianization and
//!   generator maps.
//! * [`series`]: truncated non-commuting power series over `ℚ`.
//! * [`magnus`]: the Magnus expansion and order, order combinators for
//!   extensions, and property checks for orders.
//! * [`surface`]: surface groups with Dehn's algorithm and a bi-order from
//!   the Magnus expansion modulo the relator ideal.
//! * [`knorder`]: the order on `K_n` and the action of the loop braids.
//! * [`braid`]: Artin braid groups, the half twist, the mirror map and
//!   certificates.
//! * [`harness`]: seeded property suites.

pub mod braid;
pub mod error;
pub mod exec;
pub mod harness;
pub mod knorder;
pub mod magnus;
pub mod series;
pub mod surface;
mod text;
pub mod words;

pub use error::{Error, Result};
pub use exec::Exec;
pub use magnus::{Escalation, Group, OrderedGroup, Report, Violation};
pub use words::{Generator, GeneratorMap, Letter, Word};
