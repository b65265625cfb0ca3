//! Iterated HNN extensions of free groups along infinite cyclic subgroups.
//!
//! Words are ordinary [`Word`](crate::word::Word)s over the tower alphabet.
//! Reduction is by Britton's lemma, one depth at a time: segments between
//! stable letters of the top depth are reduced recursively before pinches
//! `t c^m t^-1 -> d^m` are collapsed.

mod britton;
mod tower;

pub use britton::{Membership, TowerWord, Verdict3};
pub use tower::{AssociationSpec, CyclicAssociation, HnnTower, TowerSpec, DEFAULT_BOUND};
