//! Finite permutation groups and their subgroup lattices.

pub mod catalog;
mod finite;
mod lattice;
mod perm;

pub use finite::{Elem, FiniteGroup, ResourceCaps};
pub use lattice::{LatticeData, Subgroup, SubgroupClass, SubgroupId, SubgroupLattice};
pub use perm::Permutation;
