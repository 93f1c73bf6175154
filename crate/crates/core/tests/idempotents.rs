mod common;

use common::ring;
use fbr_core::species::Species;
use proptest::prelude::*;

const CASES: [(&str, u64); 6] = [("C4", 2), ("V4", 2), ("C6", 6), ("S3", 6), ("Q8", 2), ("A4", 2)];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn idempotents_are_orthogonal(case in 0usize..CASES.len(), i in any::<u64>(), j in any::<u64>()) {
        let (spec, a) = CASES[case];
        let r = ring(spec, a);
        let s = Species::new(&r).unwrap();
        let (d, e) = ((i % s.len() as u64) as usize, (j % s.len() as u64) as usize);
        let prod = r.multiply(s.idempotent(d), s.idempotent(e)).unwrap();
        if d == e {
            prop_assert_eq!(&prod, s.idempotent(d));
        } else {
            prop_assert!(prod.is_zero());
        }
    }
}

#[test]
fn coordinates_round_trip_through_idempotents() {
    for (spec, a) in CASES {
        let r = ring(spec, a);
        let s = Species::new(&r).unwrap();
        for i in 0..r.rank() {
            let b = r.basis_element(i);
            assert_eq!(s.from_coordinates(&s.coordinates(&b)), b, "{spec}");
        }
    }
}
