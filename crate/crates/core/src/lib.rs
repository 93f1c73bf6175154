//! Exact computations in fibered Burnside rings `B^A(G)` of finite groups:
//! the standard basis and its multiplication, species and primitive
//! idempotents, congruences of species modulo primes, block idempotents and
//! the Weyl-group block isomorphism.

pub mod arith;
pub mod cyclo;
pub mod error;
pub mod exec;
pub mod fiber;
pub mod group;
pub mod linalg;
pub mod ring;
pub mod species;
pub mod spectrum;
pub mod verify;

pub use error::{FbrError, Result};
pub use exec::Exec;
