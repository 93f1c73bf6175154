//! Dual pairs `(H, Φ)`, species `s_{H,Φ}` and the primitive idempotents
//! of `K ⊗ B^A(G)`.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::cyclo::Cyclotomic;
use crate::error::{FbrError, Result};
use crate::fiber::{character_conjugate, conjugate_hom, dual_characters, DualCharacter};
use crate::group::{Elem, SubgroupId};
use crate::linalg;
use crate::ring::{FiberedRing, RingElement};

/// Canonical key of a dual orbit `[H, Φ]_G`: subgroup class and index of
/// `Φ` among the characters of `Hom(rep, A)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DualKey {
    pub class: usize,
    pub character: usize,
}

impl std::fmt::Display for DualKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.class, self.character)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualOrbit {
    pub key: DualKey,
    pub subgroup: SubgroupId,
    /// `|N_G(H, Φ)|`.
    pub stabilizer_order: usize,
}

struct ClassDuals {
    characters: Vec<DualCharacter>,
    lookup: HashMap<Vec<u64>, usize>,
    /// `action[a][j]`: index of `^{n_a}Φ_j` for the normalizer elements of
    /// the ring's class action.
    action: Vec<Vec<usize>>,
    canon: Vec<usize>,
}

/// Species of `B^A(G)` with the species table and idempotents.
pub struct Species<'r> {
    ring: &'r FiberedRing,
    classes: Vec<ClassDuals>,
    orbits: Vec<DualOrbit>,
    index: HashMap<DualKey, usize>,
    table: Vec<Vec<Cyclotomic>>,
    idempotents: Vec<OnceLock<RingElement>>,
}

impl<'r> Species<'r> {
    pub fn new(ring: &'r FiberedRing) -> Result<Self> {
        let n = ring.level();
        let lat = ring.lattice();
        let classes = ring.exec().try_map(lat.classes().len(), |c| {
            let ca = ring.class_action(c);
            let hg = ring.homs(ca.representative);
            let characters = dual_characters(hg, n)?;
            let lookup: HashMap<Vec<u64>, usize> = characters
                .iter()
                .enumerate()
                .map(|(j, ch)| (ch.values.clone(), j))
                .collect();
            let action: Vec<Vec<usize>> = ca
                .action
                .iter()
                .map(|perm| {
                    characters
                        .iter()
                        .map(|ch| {
                            let mut moved = vec![0u64; ch.values.len()];
                            for (i, &v) in ch.values.iter().enumerate() {
                                moved[perm[i]] = v;
                            }
                            lookup[&moved]
                        })
                        .collect()
                })
                .collect();
            let canon = (0..characters.len())
                .map(|j| action.iter().map(|row| row[j]).min().unwrap_or(j))
                .collect();
            Ok(ClassDuals {
                characters,
                lookup,
                action,
                canon,
            })
        })?;
        let mut orbits = Vec::new();
        for (c, cd) in classes.iter().enumerate() {
            let rep = lat.representative(c);
            for j in 0..cd.characters.len() {
                if cd.canon[j] != j {
                    continue;
                }
                let stabilizer_order = cd.action.iter().filter(|row| row[j] == j).count();
                orbits.push(DualOrbit {
                    key: DualKey { class: c, character: j },
                    subgroup: rep,
                    stabilizer_order,
                });
            }
        }
        if orbits.len() != ring.rank() {
            return Err(FbrError::invariant(format!(
                "{} dual orbits but rank {}",
                orbits.len(),
                ring.rank()
            )));
        }
        let index = orbits.iter().enumerate().map(|(i, o)| (o.key, i)).collect();
        let mut species = Species {
            ring,
            classes,
            orbits,
            index,
            table: Vec::new(),
            idempotents: Vec::new(),
        };
        let r = ring.rank();
        species.table = ring.exec().map(r, |d| (0..r).map(|b| species.species_value(d, b)).collect());
        species.idempotents = (0..r).map(|_| OnceLock::new()).collect();
        Ok(species)
    }

    pub fn ring(&self) -> &'r FiberedRing {
        self.ring
    }

    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn orbits(&self) -> &[DualOrbit] {
        &self.orbits
    }

    pub fn orbit(&self, d: usize) -> &DualOrbit {
        &self.orbits[d]
    }

    pub fn index_of(&self, key: DualKey) -> Option<usize> {
        self.index.get(&key).copied()
    }

    /// The character of dual orbit `d`, on `Hom(rep, A)`.
    pub fn character(&self, d: usize) -> &DualCharacter {
        let k = self.orbits[d].key;
        &self.classes[k.class].characters[k.character]
    }

    /// Dual orbit index of `(K, Ψ)` for an arbitrary subgroup `K` and a
    /// character `Ψ` of `Hom(K, A)`.
    pub fn canonicalize(&self, k: SubgroupId, psi: &DualCharacter) -> usize {
        let ring = self.ring;
        let lat = ring.lattice();
        let t = lat.transporter(k);
        let rep = lat.conjugate(ring.group(), t, k);
        let moved = character_conjugate(ring.group(), lat, t, psi, ring.homs(k), ring.homs(rep));
        let class = lat.class_of(rep);
        let cd = &self.classes[class];
        let j = cd.lookup[&moved.values];
        self.index[&DualKey {
            class,
            character: cd.canon[j],
        }]
    }

    /// Elements `g ∈ N_G(K)` with `^gΨ = Ψ`, i.e. `N_G(K, Ψ)`.
    pub fn stabilizer(&self, k: SubgroupId, psi: &DualCharacter) -> Result<SubgroupId> {
        let ring = self.ring;
        let g = ring.group();
        let lat = ring.lattice();
        let hg = ring.homs(k);
        let elems: Vec<Elem> = lat
            .subgroup(lat.normalizer(k))
            .elements()
            .iter()
            .copied()
            .filter(|&x| {
                hg.homs().iter().enumerate().all(|(i, phi)| {
                    let moved = conjugate_hom(g, lat, x, phi);
                    psi.values[hg.index_of(&moved.values).unwrap()] == psi.values[i]
                })
            })
            .collect();
        lat.find(&elems)
            .ok_or_else(|| FbrError::invariant("stabilizer of a dual pair is not a subgroup"))
    }

    /// `Σ_k counts[k] ζ^k = s_d(b)` by the double coset formula: the sum of
    /// `Φ(^gψ|_H)` over `g ∈ [H\G/K]` with `H ≤ ^gK`.
    fn species_exponents(&self, d: usize, b: usize) -> Vec<i64> {
        let ring = self.ring;
        let g = ring.group();
        let lat = ring.lattice();
        let h = self.orbits[d].subgroup;
        let phi = self.character(d);
        let psi = ring.pair(b);
        let hsub = lat.subgroup(h);
        let ksub = lat.subgroup(psi.domain);
        let hg = ring.homs(h);
        let mut counts = vec![0i64; ring.level() as usize];
        if hsub.order() > ksub.order() || !ksub.order().is_multiple_of(hsub.order()) {
            return counts;
        }
        for c in lat.double_coset_reps(g, h, psi.domain) {
            if !lat.is_contained(h, lat.conjugate(g, c, psi.domain)) {
                continue;
            }
            let cinv = g.inv(c);
            let values: Vec<_> = hsub
                .elements()
                .iter()
                .map(|&x| psi.values[ksub.position(g.conj(cinv, x)).unwrap()])
                .collect();
            let idx = hg.index_of(&values).expect("restricted conjugate is a hom");
            counts[phi.values[idx] as usize] += 1;
        }
        counts
    }

    /// `s_d(b_j)` for dual orbit `d` and basis element `j`.
    pub fn species_value(&self, d: usize, b: usize) -> Cyclotomic {
        Cyclotomic::from_exponent_counts(self.ring.level(), &self.species_exponents(d, b))
    }

    /// `Φ(π_H(res^G_H x))`, evaluated through the subgroup rings.
    pub fn species_value_composite(&self, d: usize, x: &RingElement) -> Result<Cyclotomic> {
        let ring = self.ring;
        let h = self.orbits[d].subgroup;
        let local = ring.restrict(h, &ring.to_local(x))?;
        let phi = self.character(d);
        let mut out = Cyclotomic::zero(ring.level());
        for (i, c) in ring.local_retraction(&local) {
            out.add_assign(&c.mul(&phi.evaluate(i)));
        }
        Ok(out)
    }

    /// Rows indexed by dual orbit, columns by basis element.
    pub fn table(&self) -> &[Vec<Cyclotomic>] {
        &self.table
    }

    pub fn determinant(&self) -> Result<Cyclotomic> {
        linalg::determinant(&self.table)
    }

    pub fn apply(&self, d: usize, x: &RingElement) -> Cyclotomic {
        let mut out = Cyclotomic::zero(self.ring.level());
        for (&i, c) in x.terms() {
            out.add_assign(&c.mul(&self.table[d][i]));
        }
        out
    }

    /// `(s_d(x))_d`.
    pub fn coordinates(&self, x: &RingElement) -> Vec<Cyclotomic> {
        (0..self.len()).map(|d| self.apply(d, x)).collect()
    }

    /// `e_d`, memoized.
    pub fn idempotent(&self, d: usize) -> &RingElement {
        self.idempotents[d].get_or_init(|| self.compute_idempotent(d))
    }

    pub fn precompute_idempotents(&self) {
        self.ring.exec().map(self.len(), |d| {
            self.idempotent(d);
        });
    }

    /// `1/(|N_G(H,Φ)||Hom(H,A)|) Σ_{K ≤ H, φ ∈ Hom(H,A)} |K| μ(K,H)
    /// conj(Φ(φ)) [K, φ|_K]`, summed over all subgroups `K ≤ H`.
    fn compute_idempotent(&self, d: usize) -> RingElement {
        let ring = self.ring;
        let lat = ring.lattice();
        let n = ring.level() as usize;
        let h = self.orbits[d].subgroup;
        let phi = self.character(d);
        let hg = ring.homs(h);
        let hsub = lat.subgroup(h);
        let mut counts: HashMap<usize, Vec<i64>> = HashMap::new();
        for &(k, mu) in lat.mobius_column(h) {
            if mu == 0 {
                continue;
            }
            let ksub = lat.subgroup(k);
            let positions: Vec<usize> = ksub
                .elements()
                .iter()
                .map(|&x| hsub.position(x).unwrap())
                .collect();
            let weight = ksub.order() as i64 * mu;
            for (i, f) in hg.homs().iter().enumerate() {
                let restricted = crate::fiber::FiberHom {
                    domain: k,
                    values: positions.iter().map(|&p| f.values[p]).collect(),
                };
                let idx = ring.index_of_pair(&restricted);
                let e = (n - phi.values[i] as usize) % n;
                counts.entry(idx).or_insert_with(|| vec![0; n])[e] += weight;
            }
        }
        let denom = BigRational::from_integer(BigInt::from(
            self.orbits[d].stabilizer_order * hg.len(),
        ));
        let inv = num_traits::Inv::inv(denom);
        RingElement::from_terms(
            ring.level(),
            counts.into_iter().map(|(idx, cs)| {
                (idx, Cyclotomic::from_exponent_counts(n as u64, &cs).scalar_mul(&inv))
            }),
        )
    }

    /// `Σ_d c_d e_d`.
    pub fn from_coordinates(&self, coords: &[Cyclotomic]) -> RingElement {
        let mut out = self.ring.zero();
        for (d, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.idempotent(d).scale(c));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Exec;
    use crate::fiber::FiniteAbelianGroup;
    use crate::group::catalog::parse_group_spec;
    use crate::group::ResourceCaps;

    fn ring(group: &str, fiber: &[u64]) -> FiberedRing {
        let g = parse_group_spec(group, 10_000).unwrap();
        let a = FiniteAbelianGroup::from_cyclic_factors(fiber).unwrap();
        FiberedRing::new(g, a, ResourceCaps::default(), Exec::Sequential).unwrap()
    }

    fn ints(row: &[Cyclotomic]) -> Vec<i64> {
        row.iter()
            .map(|c| i64::try_from(c.as_integer().unwrap()).unwrap())
            .collect()
    }

    #[test]
    fn c2_table_and_idempotents() {
        let r = ring("C2", &[2]);
        let s = Species::new(&r).unwrap();
        let rows: Vec<Vec<i64>> = s.table().iter().map(|row| ints(row)).collect();
        assert_eq!(rows, vec![vec![2, 1, 1], vec![0, 1, 1], vec![0, 1, -1]]);
        assert_eq!(s.determinant().unwrap(), Cyclotomic::from_integer(2, -4));
        let half = BigRational::new(1.into(), 2.into());
        let h = |v: &[(usize, i64)]| RingElement::from_integers(2, v.iter().copied()).scale_rational(&half);
        assert_eq!(s.idempotent(0), &h(&[(0, 1)]));
        assert_eq!(s.idempotent(1), &h(&[(1, 1), (2, 1), (0, -1)]));
        assert_eq!(s.idempotent(2), &h(&[(1, 1), (2, -1)]));
    }

    #[test]
    fn composite_path_agrees() {
        for (g, a) in [("S3", 2u64), ("D4", 2), ("C6", 6), ("A4", 3)] {
            let r = ring(g, &[a]);
            let s = Species::new(&r).unwrap();
            for d in 0..s.len() {
                for b in 0..r.rank() {
                    let x = r.basis_element(b);
                    assert_eq!(s.species_value_composite(d, &x).unwrap(), s.table()[d][b], "{g} d={d} b={b}");
                }
            }
        }
    }

    #[test]
    fn marks_for_trivial_fiber() {
        let r = ring("S4", &[1]);
        let s = Species::new(&r).unwrap();
        let marks = crate::ring::table_of_marks(r.group(), r.lattice());
        for (d, row) in s.table().iter().enumerate() {
            let expected: Vec<i64> = marks[d].iter().map(|&m| m as i64).collect();
            assert_eq!(ints(row), expected);
        }
    }

    #[test]
    fn idempotents_detect_their_species() {
        let r = ring("S3", &[2]);
        let s = Species::new(&r).unwrap();
        for d in 0..s.len() {
            let coords = s.coordinates(s.idempotent(d));
            for (k, c) in coords.iter().enumerate() {
                assert_eq!(c.is_one(), k == d);
                assert_eq!(c.is_zero(), k != d);
            }
        }
    }
}
