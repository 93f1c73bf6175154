//! Exact arithmetic in cyclotomic fields and their residue fields.

mod field;
mod modp;

pub use field::{cyclotomic_polynomial, field, Cyclotomic, CyclotomicField};
pub use modp::{
    distinct_degree_factorization, find_prime_ideal, graded_lex_cmp, irreducible_factors,
    poly_from_integers, poly_rem, prime_ideals_above, reduce_mod, FiniteFieldElem, PolyModP,
    PrimeIdealData,
};
pub use num_rational::BigRational;
