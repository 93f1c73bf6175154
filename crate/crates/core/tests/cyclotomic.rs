use fbr_core::arith::{euler_phi, gcd, p_part};
use fbr_core::cyclo::{prime_ideals_above, reduce_mod, Cyclotomic};
use proptest::prelude::*;

const LEVELS: [u64; 7] = [1, 2, 3, 4, 6, 8, 12];

fn element(n: u64, coeffs: &[i64]) -> Cyclotomic {
    let mut x = Cyclotomic::zero(n);
    for (k, &c) in coeffs.iter().enumerate() {
        x.add_scaled_assign(&Cyclotomic::zeta_pow(n, k as i64), c);
    }
    x
}

fn arb() -> impl Strategy<Value = (u64, Vec<i64>, Vec<i64>, Vec<i64>)> {
    let v = || prop::collection::vec(-5i64..6, 0..14);
    (prop::sample::select(LEVELS.to_vec()), v(), v(), v())
}

proptest! {
    #[test]
    fn ring_axioms((n, a, b, c) in arb()) {
        let (x, y, z) = (element(n, &a), element(n, &b), element(n, &c));
        prop_assert_eq!(x.add(&y), y.add(&x));
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        prop_assert_eq!(x.mul(&Cyclotomic::one(n)), x.clone());
        prop_assert!(x.sub(&x).is_zero());
        prop_assert!(x.add(&x.neg()).is_zero());
    }

    #[test]
    fn galois_is_a_ring_automorphism((n, a, b, _) in arb(), t in 1i64..24) {
        prop_assume!(gcd(t as u64, n) == 1);
        let (x, y) = (element(n, &a), element(n, &b));
        let s = |v: &Cyclotomic| v.galois(t).unwrap();
        prop_assert_eq!(s(&x.mul(&y)), s(&x).mul(&s(&y)));
        prop_assert_eq!(s(&x.add(&y)), s(&x).add(&s(&y)));
        prop_assert_eq!(s(&Cyclotomic::zeta_pow(n, 1)), Cyclotomic::zeta_pow(n, t));
    }

    #[test]
    fn reduction_is_a_ring_map((n, a, b, _) in arb(), pi in 0usize..3) {
        let p = [2u64, 3, 5][pi];
        let (x, y) = (element(n, &a), element(n, &b));
        for ideal in prime_ideals_above(p, n).unwrap() {
            let r = |v: &Cyclotomic| reduce_mod(v, &ideal).unwrap();
            prop_assert_eq!(r(&x.mul(&y)), r(&x).mul(&r(&y)));
            prop_assert_eq!(r(&x.add(&y)), r(&x).add(&r(&y)));
        }
    }
}

#[test]
fn zeta_has_exact_order() {
    for n in LEVELS {
        let z = Cyclotomic::zeta_pow(n, 1);
        let mut acc = Cyclotomic::one(n);
        for k in 1..=n {
            acc = acc.mul(&z);
            assert_eq!(acc.is_one(), k == n, "n = {n}, k = {k}");
        }
    }
}

#[test]
fn prime_ideal_splitting() {
    // Φ_n mod p is (product of distinct factors)^{φ(p^a)}, each factor of
    // degree ord_{n'}(p) where n = p^a n'
    for n in 1..=40u64 {
        for p in [2u64, 3, 5, 7] {
            let pa = p_part(n as usize, p as usize) as u64;
            let rest = n / pa;
            let mut f = 1;
            let mut q = p % rest.max(1);
            while rest > 1 && q != 1 {
                q = q * p % rest;
                f += 1;
            }
            let ideals = prime_ideals_above(p, n).unwrap();
            assert_eq!(ideals.len() as u64 * f, euler_phi(rest), "n = {n}, p = {p}");
            assert!(ideals.iter().all(|i| i.degree() as u64 == f));
        }
    }
}
