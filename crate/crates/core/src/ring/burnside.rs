//! The ordinary Burnside ring `B(G)` and its embedding `[G/H] ↦ [H, 1]_G`.

use super::{FiberedRing, RingElement};
use crate::cyclo::Cyclotomic;
use crate::group::{FiniteGroup, SubgroupLattice};

/// An element `Σ_c a_c [G/H_c]` of `B(G)`, indexed by subgroup class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BurnsideElement {
    pub coeffs: Vec<Cyclotomic>,
}

impl BurnsideElement {
    /// `[G/H]` for the class `class`.
    pub fn transitive(classes: usize, class: usize, level: u64) -> Self {
        let mut coeffs = vec![Cyclotomic::zero(level); classes];
        coeffs[class] = Cyclotomic::one(level);
        BurnsideElement { coeffs }
    }

    /// Marks `|X^{H_c}|` for every class `c`.
    pub fn marks(&self, table: &[Vec<u64>]) -> Vec<Cyclotomic> {
        let level = self.coeffs.first().map_or(1, |c| c.level());
        table
            .iter()
            .map(|row| {
                let mut acc = Cyclotomic::zero(level);
                for (a, &m) in self.coeffs.iter().zip(row) {
                    acc.add_scaled_assign(a, m as i64);
                }
                acc
            })
            .collect()
    }
}

/// `table[c][d] = |(G/H_d)^{H_c}|`, counted by letting `H_c` act on the
/// left cosets of `H_d`.
pub fn table_of_marks(g: &FiniteGroup, lattice: &SubgroupLattice) -> Vec<Vec<u64>> {
    let n = g.order();
    let reps: Vec<_> = lattice.classes().iter().map(|c| c.representative).collect();
    let cosets: Vec<(Vec<usize>, Vec<usize>)> = reps
        .iter()
        .map(|&k| {
            // coset_of[x] = id of the coset xK
            let elems = lattice.subgroup(k).elements();
            let mut coset_of = vec![usize::MAX; n];
            let mut first = Vec::new();
            for x in 0..n {
                if coset_of[x] != usize::MAX {
                    continue;
                }
                for &y in elems {
                    coset_of[g.mul(x, y)] = first.len();
                }
                first.push(x);
            }
            (coset_of, first)
        })
        .collect();
    reps.iter()
        .map(|&h| {
            let hs = lattice.subgroup(h).generators();
            cosets
                .iter()
                .map(|(coset_of, first)| {
                    first
                        .iter()
                        .enumerate()
                        .filter(|&(id, &x)| hs.iter().all(|&s| coset_of[g.mul(s, x)] == id))
                        .count() as u64
                })
                .collect()
        })
        .collect()
}

impl FiberedRing {
    pub fn burnside_embed(&self, x: &BurnsideElement) -> RingElement {
        RingElement::from_terms(
            self.level(),
            x.coeffs
                .iter()
                .enumerate()
                .map(|(c, a)| (self.trivial_pair_index(c), a.clone())),
        )
    }

    /// The section `[H, φ]_G ↦ [G/H]`.
    pub fn burnside_project(&self, x: &RingElement) -> BurnsideElement {
        let mut coeffs = vec![Cyclotomic::zero(self.level()); self.lattice().classes().len()];
        for (&i, a) in x.terms() {
            coeffs[self.basis().orbit(i).key.class].add_assign(a);
        }
        BurnsideElement { coeffs }
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::ring;
    use super::*;

    #[test]
    fn marks_of_s3() {
        let r = ring("S3", &[1]);
        let t = table_of_marks(r.group(), r.lattice());
        // classes: 1, C2, C3, S3
        assert_eq!(t[0], vec![6, 3, 2, 1]);
        assert_eq!(t[1], vec![0, 1, 0, 1]);
        assert_eq!(t[2], vec![0, 0, 2, 1]);
        assert_eq!(t[3], vec![0, 0, 0, 1]);
    }

    #[test]
    fn regular_set_squared() {
        let r = ring("S3", &[2]);
        let classes = r.lattice().classes().len();
        let reg = r.burnside_embed(&BurnsideElement::transitive(classes, 0, r.level()));
        let sq = r.multiply(&reg, &reg).unwrap();
        let six = Cyclotomic::from_integer(r.level(), 6);
        assert_eq!(sq, reg.scale(&six));
        let top = BurnsideElement::transitive(classes, classes - 1, r.level());
        assert_eq!(r.burnside_embed(&top), r.one());
        assert_eq!(r.burnside_project(&r.burnside_embed(&top)), top);
    }
}
