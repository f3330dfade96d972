//! Counting, normalization and exact uniform sampling of positive braids.
//!
//! Positive braids of length `k` on `n` strands are represented by their
//! lexicographically least Artin words (lex-representatives). The crate
//! counts them with Bronfman's recurrence ([`growth`]), describes which
//! continuations keep a word lex-minimal through admissible functions
//! ([`prefixes`]), counts constrained continuations with an
//! inclusion-exclusion dynamic program ([`counting`]) and uses those counts
//! to unrank, and hence sample uniformly ([`sampler`]).
//!
//! [`automaton`] builds the minimal acceptor of the lex-representative
//! language and [`oracle`] is a deliberately naive brute-force reference
//! used to validate all of the above.

pub mod automaton;
pub mod counting;
mod error;
pub mod growth;
pub mod oracle;
pub mod perm_braid;
pub mod prefixes;
pub mod sampler;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
pub use growth::GrowthTables;
pub use perm_braid::PermBraid;
pub use prefixes::{AdmissibleFunction, ForbiddenSet, Step};
pub use words::{ArtinWord, StrandCount};
