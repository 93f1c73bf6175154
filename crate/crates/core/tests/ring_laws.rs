mod common;

use common::{ring, SMALL_GROUPS};
use fbr_core::cyclo::Cyclotomic;
use fbr_core::ring::{FiberedRing, LocalElement, RingElement};
use proptest::prelude::*;

fn local(r: &FiberedRing, u: usize, picks: &[(u64, i64)]) -> LocalElement {
    let basis = r.local_basis(u);
    let mut x = LocalElement::zero(u, r.level());
    for &(k, c) in picks {
        let pair = &basis[(k % basis.len() as u64) as usize];
        for _ in 0..c.unsigned_abs() {
            x = x.add(&r.local_basis_element(u, pair).unwrap());
        }
    }
    x
}

fn global(r: &FiberedRing, picks: &[(u64, i64)]) -> RingElement {
    RingElement::from_integers(
        r.level(),
        picks.iter().map(|&(k, c)| ((k % r.rank() as u64) as usize, c)),
    )
}

#[test]
fn commutative_with_unit() {
    for spec in SMALL_GROUPS {
        for a in [2, 6] {
            let r = ring(spec, a);
            let one = r.one();
            for i in 0..r.rank() {
                let b = r.basis_element(i);
                assert_eq!(r.multiply(&one, &b).unwrap(), b);
                for j in 0..r.rank() {
                    assert_eq!(r.structure_constants(i, j), r.structure_constants(j, i), "{spec}");
                }
            }
        }
    }
}

#[test]
fn associative_on_basis_triples() {
    for spec in ["C2", "C4", "V4", "S3", "C6", "A4"] {
        let r = ring(spec, 2);
        let n = r.rank();
        for i in 0..n {
            for j in 0..n {
                let ij = r.multiply(&r.basis_element(i), &r.basis_element(j)).unwrap();
                for k in 0..n {
                    let left = r.multiply(&ij, &r.basis_element(k)).unwrap();
                    let jk = r.multiply(&r.basis_element(j), &r.basis_element(k)).unwrap();
                    let right = r.multiply(&r.basis_element(i), &jk).unwrap();
                    assert_eq!(left, right, "{spec}: ({i}, {j}, {k})");
                }
            }
        }
    }
}

#[test]
fn local_product_matches_structure_constants() {
    for spec in SMALL_GROUPS {
        let r = ring(spec, 6);
        for i in 0..r.rank() {
            for j in 0..r.rank() {
                let x = r.to_local(&r.basis_element(i));
                let y = r.to_local(&r.basis_element(j));
                let via_local = r.from_local(&r.local_multiply(&x, &y).unwrap()).unwrap();
                let direct = r.multiply(&r.basis_element(i), &r.basis_element(j)).unwrap();
                assert_eq!(via_local, direct, "{spec}: ({i}, {j})");
            }
        }
    }
}

type Picks = Vec<(u64, i64)>;

fn picks() -> impl Strategy<Value = Picks> {
    prop::collection::vec((any::<u64>(), -2i64..3), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn associative_and_retraction_multiplicative(
        gi in 0usize..SMALL_GROUPS.len(), a in prop::sample::select(vec![1u64, 2, 6]),
        x in picks(), y in picks(), z in picks(),
    ) {
        let r = ring(SMALL_GROUPS[gi], a);
        let (x, y, z) = (global(&r, &x), global(&r, &y), global(&r, &z));
        let xy = r.multiply(&x, &y).unwrap();
        prop_assert_eq!(r.multiply(&xy, &z).unwrap(), r.multiply(&x, &r.multiply(&y, &z).unwrap()).unwrap());
        prop_assert_eq!(
            r.pi_retraction(&xy),
            r.multiply(&r.pi_retraction(&x), &r.pi_retraction(&y)).unwrap()
        );
    }

    #[test]
    fn restriction_and_induction(
        gi in 0usize..SMALL_GROUPS.len(), chain in any::<(u64, u64)>(),
        x in picks(), y in picks(),
    ) {
        let r = ring(SMALL_GROUPS[gi], 2);
        let lat = r.lattice();
        let u = lat.whole();
        let below = lat.subgroups_of(u);
        let v = below[(chain.0 % below.len() as u64) as usize];
        let below_v = lat.subgroups_of(v);
        let w = below_v[(chain.1 % below_v.len() as u64) as usize];

        let xu = local(&r, u, &x);
        let yu = local(&r, u, &y);
        // restriction is a ring map and transitive
        let res = |t: usize, e: &LocalElement| r.restrict(t, e).unwrap();
        prop_assert_eq!(
            res(v, &r.local_multiply(&xu, &yu).unwrap()),
            r.local_multiply(&res(v, &xu), &res(v, &yu)).unwrap()
        );
        prop_assert_eq!(res(w, &res(v, &xu)), res(w, &xu));

        // induction is transitive and satisfies Frobenius reciprocity
        let xw = local(&r, w, &x);
        let ind = |t: usize, e: &LocalElement| r.induce(t, e).unwrap();
        prop_assert_eq!(ind(u, &ind(v, &xw)), ind(u, &xw));
        let xv = local(&r, v, &x);
        prop_assert_eq!(
            ind(u, &r.local_multiply(&xv, &res(v, &yu)).unwrap()),
            r.local_multiply(&ind(u, &xv), &yu).unwrap()
        );
    }

    #[test]
    fn conjugation_is_an_isomorphism(
        gi in 0usize..SMALL_GROUPS.len(), s in any::<(u64, u64, u64)>(), x in picks(), y in picks(),
    ) {
        let r = ring(SMALL_GROUPS[gi], 6);
        let g = r.group();
        let lat = r.lattice();
        let order = g.order() as u64;
        let (c, d) = ((s.0 % order) as usize, (s.1 % order) as usize);
        let u = (s.2 % lat.len() as u64) as usize;
        let (xu, yu) = (local(&r, u, &x), local(&r, u, &y));
        let conj = |e: &LocalElement, k: usize| r.conjugate_local(k, e);
        prop_assert_eq!(
            conj(&r.local_multiply(&xu, &yu).unwrap(), c),
            r.local_multiply(&conj(&xu, c), &conj(&yu, c)).unwrap()
        );
        prop_assert_eq!(conj(&conj(&xu, d), c), conj(&xu, g.mul(c, d)));
        prop_assert_eq!(conj(&conj(&xu, c), g.inv(c)), xu.clone());
        // conjugation by an element of U is trivial on B^A(U)
        let inner = lat.subgroup(u).elements()[(s.1 % lat.subgroup(u).order() as u64) as usize];
        prop_assert_eq!(conj(&xu, inner), xu);
    }
}

#[test]
fn unit_is_the_trivial_pair() {
    let r = ring("S3", 2);
    let one = r.one();
    assert_eq!(one.terms().len(), 1);
    assert_eq!(one.coeff(r.one_index()), Cyclotomic::one(r.level()));
}
