//! The abelian fiber `A`, the groups `Hom(H, A)` and their duals.

mod abelian;
mod decompose;
mod hom;

pub use abelian::{parse_fiber_spec, AbelianCode, AbelianElement, FiniteAbelianGroup, TorsionSubgroup};
pub use decompose::{decompose, CyclicDecomposition};
pub use hom::{
    abelianization_invariants, character_conjugate, conjugate_hom, dual_characters, inflate_character,
    restrict_hom, DualCharacter, FiberHom, HomGroup,
};
