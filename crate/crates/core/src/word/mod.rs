//! Free-group word algebra: reduction, cyclic words, conjugacy, primitive
//! roots and commensurability with witnesses.

mod alphabet;
pub mod cyclic;
pub mod enumerate;
pub mod roots;
#[allow(clippy::module_inception)]
mod word;

pub use alphabet::Alphabet;
pub use cyclic::{conjugator, cyclic_reduce, is_conjugate, CyclicWord};
pub use enumerate::ShortLex;
pub use roots::{
    commensurability_key, commensurable, primitive_root, CommensurabilityVerdict,
    CommensurabilityWitness,
};
pub use word::{is_freely_reduced, Letter, Word};
