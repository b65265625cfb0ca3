//! Exact symbolic group theory at desk scale.
//!
//! * [`word`]: free-group words, cyclic words, conjugacy, roots, commensurability.
//! * [`presentation`]: finite presentations, quotients, non-conjugacy certificates.
//! * [`hnn`]: iterated HNN extensions with cyclic associations and Britton reduction.
//! * [`tower`]: conjugating towers with verifiable certificates.
//! * [`smallcanc`]: symmetrized sets, pieces, `C'(λ)`, Dehn's algorithm, relator families.
//! * [`relpath`]: paths over free products, components and their connectivity.

pub mod error;
pub mod hnn;
pub mod presentation;
pub mod relpath;
pub mod smallcanc;
pub mod tower;
pub mod word;

pub use error::{CertificationError, HnnError, TowerError, ParseError, PresentationError, QuotientError, RelPathError, SmallCancellationError, WordError};
pub use word::{Alphabet, CyclicWord, Letter, Word};
