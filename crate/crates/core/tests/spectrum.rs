mod common;

use common::ring;
use fbr_core::arith::{gcd, prime_divisors};
use fbr_core::cyclo::prime_ideals_above;
use fbr_core::fiber::{character_conjugate, dual_characters, inflate_character};
use fbr_core::species::Species;
use fbr_core::spectrum::PrimeDescriptor;

const CASES: [(&str, u64); 7] = [("C6", 6), ("S3", 2), ("S3", 6), ("D4", 2), ("A4", 6), ("S4", 2), ("A5", 2)];

fn primes_of(s: &Species<'_>) -> Vec<PrimeDescriptor> {
    let ring = s.ring();
    prime_divisors(ring.group().order() as u64)
        .into_iter()
        .flat_map(|p| {
            prime_ideals_above(p, ring.level())
                .unwrap()
                .into_iter()
                .map(move |ideal| PrimeDescriptor::CharP { p, ideal })
        })
        .collect()
}

#[test]
fn regularization_is_congruent_and_regular_orbits_separate() {
    for (spec, a) in CASES {
        let r = ring(spec, a);
        let s = Species::new(&r).unwrap();
        for prime in primes_of(&s) {
            let p = prime.characteristic();
            for d in 0..s.len() {
                let reg = s.p_regularize(d, p).unwrap();
                assert!(s.is_p_regular(reg, p).unwrap());
                assert!(s.congruent_mod(d, reg, &prime).unwrap(), "{spec}: {d} vs {reg} at {p}");
            }
            let regular: Vec<usize> = (0..s.len()).filter(|&d| s.is_p_regular(d, p).unwrap()).collect();
            for &d1 in &regular {
                for &d2 in &regular {
                    assert_eq!(s.congruent_mod(d1, d2, &prime).unwrap(), d1 == d2, "{spec} at {p}");
                }
            }
        }
    }
}

#[test]
fn partitions_coarsen_characteristic_zero_and_respect_residuals() {
    for (spec, a) in CASES {
        let r = ring(spec, a);
        let s = Species::new(&r).unwrap();
        let g = r.group();
        let lat = r.lattice();
        let zero = s.p_equivalence_partition(&PrimeDescriptor::CharZero).unwrap();
        assert!(zero.classes.iter().all(|c| c.len() == 1));
        for prime in primes_of(&s) {
            let p = prime.characteristic();
            let part = s.p_equivalence_partition(&prime).unwrap();
            let covered: usize = part.classes.iter().map(Vec::len).sum();
            assert_eq!(covered, s.len());
            for class in &part.classes {
                let residual = |d: usize| lat.class_of(lat.perfect_residual(g, s.orbit(d).subgroup));
                let reg = |d: usize| lat.class_of(s.orbit(s.p_regularize(d, p).unwrap()).subgroup);
                for &d in class {
                    assert_eq!(residual(d), residual(class[0]), "{spec}: O^s differs inside a class");
                    assert_eq!(reg(d), reg(class[0]));
                }
            }
        }
    }
}

/// For `H ◁ K` with `K/H` a `p`-group and `Φ` fixed by `K`, the pairs
/// `(H, Φ)` and `(K, Φ ∘ res)` are congruent at every prime above `p`.
#[test]
fn normal_p_extensions_are_congruent() {
    let mut applicable = 0;
    for (spec, a) in CASES {
        let r = ring(spec, a);
        let s = Species::new(&r).unwrap();
        let g = r.group();
        let lat = r.lattice();
        for prime in primes_of(&s) {
            let p = prime.characteristic();
            for k in 0..lat.len() {
                for h in lat.subgroups_of(k) {
                    let index = lat.subgroup(k).order() / lat.subgroup(h).order();
                    let normal = lat.subgroup(k).elements().iter().all(|&x| lat.conjugate(g, x, h) == h);
                    if h == k || !normal || prime_divisors(index as u64) != [p] {
                        continue;
                    }
                    for phi in dual_characters(r.homs(h), r.level()).unwrap() {
                        let fixed = lat.subgroup(k).elements().iter().all(|&x| {
                            character_conjugate(g, lat, x, &phi, r.homs(h), r.homs(h)) == phi
                        });
                        if !fixed {
                            continue;
                        }
                        let up = inflate_character(lat, &phi, r.homs(h), r.homs(k));
                        let (d1, d2) = (s.canonicalize(h, &phi), s.canonicalize(k, &up));
                        assert!(s.congruent_mod(d1, d2, &prime).unwrap(), "{spec}: H = {h}, K = {k}");
                        applicable += 1;
                    }
                }
            }
        }
    }
    assert!(applicable > 0);
}

#[test]
fn galois_action_on_species() {
    for (spec, a) in CASES {
        let r = ring(spec, a);
        let s = Species::new(&r).unwrap();
        let n = r.level() as i64;
        for d in 0..s.len() {
            for t in (1..=n).filter(|&t| gcd(t as u64, n as u64) == 1) {
                let e = s.galois_conjugate(d, t).unwrap();
                let moved: Vec<_> = s.table()[d].iter().map(|x| x.galois(t).unwrap()).collect();
                assert_eq!(s.table()[e], moved, "{spec}: σ_{t} on orbit {d}");
            }
            let sig = s.rational_kernel_signature(d);
            for e in s.galois_orbit(d).unwrap() {
                assert_eq!(s.rational_kernel_signature(e), sig);
            }
        }
    }
}
