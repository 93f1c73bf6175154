//! The fibered Burnside ring `B^A(G)` in its standard basis.

mod burnside;
mod element;
mod local;

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

pub use burnside::{table_of_marks, BurnsideElement};
pub use element::RingElement;
pub use local::LocalElement;

use crate::arith::gcd;
use crate::error::{FbrError, Result};
use crate::exec::Exec;
use crate::fiber::{conjugate_hom, FiberHom, FiniteAbelianGroup, HomGroup};
use crate::group::{Elem, FiniteGroup, ResourceCaps, SubgroupId, SubgroupLattice};

/// Canonical key of a basis orbit `[H, φ]_G`: the subgroup class of `H`
/// and the index of `φ` in `Hom(rep, A)`, least within its orbit under the
/// normalizer of the representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisKey {
    pub class: usize,
    pub hom: usize,
}

impl std::fmt::Display for BasisKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.class, self.hom)
    }
}

/// A basis element `[H, φ]_G` with its orbit data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairOrbit {
    pub key: BasisKey,
    pub subgroup: SubgroupId,
    /// `|N_G(H, φ)|`.
    pub stabilizer_order: usize,
    /// `[G : N_G(H, φ)]`.
    pub orbit_size: usize,
}

/// The ordered list of all basis orbits.
#[derive(Clone, Debug)]
pub struct StandardBasis {
    orbits: Vec<PairOrbit>,
    index: HashMap<BasisKey, usize>,
}

impl StandardBasis {
    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn orbits(&self) -> &[PairOrbit] {
        &self.orbits
    }

    pub fn orbit(&self, i: usize) -> &PairOrbit {
        &self.orbits[i]
    }

    pub fn index_of(&self, key: BasisKey) -> Option<usize> {
        self.index.get(&key).copied()
    }
}

/// How the normalizer of a class representative permutes `Hom(rep, A)`.
#[derive(Clone, Debug)]
pub struct ClassAction {
    pub representative: SubgroupId,
    pub normalizer: Vec<Elem>,
    /// `action[a][i]` is the index of `^{n_a} φ_i` for `n_a = normalizer[a]`.
    pub action: Vec<Vec<usize>>,
    canon: Vec<usize>,
    witness: Vec<Elem>,
}

impl ClassAction {
    fn new(g: &FiniteGroup, lattice: &SubgroupLattice, rep: SubgroupId, homs: &HomGroup) -> Self {
        let normalizer = lattice.subgroup(lattice.normalizer(rep)).elements().to_vec();
        let action: Vec<Vec<usize>> = normalizer
            .iter()
            .map(|&n| {
                homs.homs()
                    .iter()
                    .map(|phi| {
                        let c = conjugate_hom(g, lattice, n, phi);
                        homs.index_of(&c.values).expect("normalizer preserves Hom(H, A)")
                    })
                    .collect()
            })
            .collect();
        let mut canon = vec![usize::MAX; homs.len()];
        let mut witness = vec![g.identity(); homs.len()];
        for i in 0..homs.len() {
            for (a, row) in action.iter().enumerate() {
                if row[i] < canon[i] {
                    canon[i] = row[i];
                    witness[i] = normalizer[a];
                }
            }
        }
        ClassAction {
            representative: rep,
            normalizer,
            action,
            canon,
            witness,
        }
    }

    /// Least index in the orbit of hom `i`.
    pub fn canonical(&self, i: usize) -> usize {
        self.canon[i]
    }

    /// An element `n` of the normalizer with `^n φ_i = φ_{canonical(i)}`.
    pub fn witness(&self, i: usize) -> Elem {
        self.witness[i]
    }

    /// Size of the orbit of hom `i`.
    pub fn orbit_len(&self, i: usize) -> usize {
        let mut seen: Vec<usize> = self.action.iter().map(|row| row[i]).collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }
}

/// Everything needed to compute in `B^A(G)` for one pair `(G, A)`.
pub struct FiberedRing {
    group: FiniteGroup,
    lattice: SubgroupLattice,
    fiber: FiniteAbelianGroup,
    level: u64,
    homs: Vec<HomGroup>,
    classes: Vec<ClassAction>,
    basis: StandardBasis,
    constants: Vec<OnceLock<Vec<(usize, i64)>>>,
    exec: Exec,
}

impl std::fmt::Debug for FiberedRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiberedRing")
            .field("group_order", &self.group.order())
            .field("fiber", &self.fiber.to_string())
            .field("rank", &self.rank())
            .finish()
    }
}

impl FiberedRing {
    pub fn new(group: FiniteGroup, fiber: FiniteAbelianGroup, caps: ResourceCaps, exec: Exec) -> Result<Self> {
        let lattice = SubgroupLattice::build(&group)?;
        Self::from_parts(group, lattice, fiber, caps, exec)
    }

    /// Builds the ring from an already computed lattice of `group`.
    pub fn from_parts(
        group: FiniteGroup,
        lattice: SubgroupLattice,
        fiber: FiniteAbelianGroup,
        caps: ResourceCaps,
        exec: Exec,
    ) -> Result<Self> {
        let level = gcd(fiber.exponent(), group.exponent() as u64);
        let homs = exec.try_map(lattice.len(), |h| {
            HomGroup::new(&group, &lattice, h, &fiber, caps.max_hom_count)
        })?;
        let classes: Vec<ClassAction> = exec.map(lattice.classes().len(), |c| {
            let rep = lattice.representative(c);
            ClassAction::new(&group, &lattice, rep, &homs[rep])
        });
        let mut orbits = Vec::new();
        for (c, ca) in classes.iter().enumerate() {
            let rep = ca.representative;
            let norm_order = ca.normalizer.len();
            for i in 0..homs[rep].len() {
                if ca.canonical(i) != i {
                    continue;
                }
                let stabilizer_order = norm_order / ca.orbit_len(i);
                orbits.push(PairOrbit {
                    key: BasisKey { class: c, hom: i },
                    subgroup: rep,
                    stabilizer_order,
                    orbit_size: group.order() / stabilizer_order,
                });
            }
        }
        let index = orbits.iter().enumerate().map(|(i, o)| (o.key, i)).collect();
        let basis = StandardBasis { orbits, index };
        let r = basis.len();
        if r.saturating_mul(r) > 1 << 24 {
            return Err(FbrError::resource(format!("rank {r} is too large")));
        }
        Ok(FiberedRing {
            group,
            lattice,
            fiber,
            level,
            homs,
            classes,
            basis,
            constants: (0..r * r).map(|_| OnceLock::new()).collect(),
            exec,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn lattice(&self) -> &SubgroupLattice {
        &self.lattice
    }

    pub fn fiber(&self) -> &FiniteAbelianGroup {
        &self.fiber
    }

    /// `n = exp(Tor_{exp G}(A))`, the level of the coefficient field.
    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn exec(&self) -> Exec {
        self.exec
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &StandardBasis {
        &self.basis
    }

    /// `Hom(H, A)` for any subgroup id.
    pub fn homs(&self, h: SubgroupId) -> &HomGroup {
        &self.homs[h]
    }

    pub fn class_action(&self, class: usize) -> &ClassAction {
        &self.classes[class]
    }

    /// The canonical pair representing basis element `i`.
    pub fn pair(&self, i: usize) -> &FiberHom {
        let o = &self.basis.orbits[i];
        self.homs[o.subgroup].hom(o.key.hom)
    }

    /// Basis index of the orbit of `pair`, with an element `g` such that
    /// `^g pair` is the canonical representative.
    pub fn canonicalize(&self, pair: &FiberHom) -> (usize, Elem) {
        let g = &self.group;
        let t = self.lattice.transporter(pair.domain);
        let moved = conjugate_hom(g, &self.lattice, t, pair);
        let class = self.lattice.class_of(moved.domain);
        let hg = &self.homs[moved.domain];
        let i = hg.index_of(&moved.values).expect("conjugate of a hom is a hom");
        let ca = &self.classes[class];
        let key = BasisKey {
            class,
            hom: ca.canonical(i),
        };
        let idx = self.basis.index[&key];
        (idx, g.mul(ca.witness(i), t))
    }

    pub fn index_of_pair(&self, pair: &FiberHom) -> usize {
        self.canonicalize(pair).0
    }

    /// Basis index of `[H, 1]_G` for a subgroup class.
    pub fn trivial_pair_index(&self, class: usize) -> usize {
        self.basis.index[&BasisKey { class, hom: 0 }]
    }

    /// Index of `[G, 1]_G`, the identity.
    pub fn one_index(&self) -> usize {
        self.trivial_pair_index(self.lattice.class_of(self.lattice.whole()))
    }

    /// `(H ∩ ^gK, φ|·^gψ|)` for pairs `(H, φ)` and `(K, ψ)`.
    pub(crate) fn product_pair(&self, phi: &FiberHom, psi: &FiberHom, c: Elem) -> FiberHom {
        let g = &self.group;
        let lat = &self.lattice;
        let gk = lat.conjugate(g, c, psi.domain);
        let l = lat.intersection(phi.domain, gk);
        let hsub = lat.subgroup(phi.domain);
        let ksub = lat.subgroup(psi.domain);
        let cinv = g.inv(c);
        let values = lat
            .subgroup(l)
            .elements()
            .iter()
            .map(|&x| {
                let a = phi.values[hsub.position(x).unwrap()];
                let b = psi.values[ksub.position(g.conj(cinv, x)).unwrap()];
                self.fiber.add(a, b)
            })
            .collect();
        FiberHom { domain: l, values }
    }

    /// `[H, φ][K, ψ]` by the double coset formula, with explicit choice of
    /// double coset representatives (`reversed` takes the last element of
    /// each double coset instead of the first).
    pub fn multiply_basis_with(&self, i: usize, j: usize, reversed: bool) -> Vec<(usize, i64)> {
        let phi = self.pair(i);
        let psi = self.pair(j);
        let n = self.group.order();
        let reps = if reversed {
            self.lattice.double_coset_reps_in(&self.group, phi.domain, psi.domain, (0..n).rev())
        } else {
            self.lattice.double_coset_reps(&self.group, phi.domain, psi.domain)
        };
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for c in reps {
            let pair = self.product_pair(phi, psi, c);
            *acc.entry(self.index_of_pair(&pair)).or_default() += 1;
        }
        acc.into_iter().collect()
    }

    /// Memoized structure constants of `b_i b_j`.
    pub fn structure_constants(&self, i: usize, j: usize) -> &[(usize, i64)] {
        self.constants[i * self.rank() + j].get_or_init(|| self.multiply_basis_with(i, j, false))
    }

    /// Fills the whole structure-constant table.
    pub fn precompute_constants(&self) {
        let r = self.rank();
        self.exec.map(r * r, |k| {
            self.structure_constants(k / r, k % r);
        });
    }

    /// Snapshot of the memo table (`None` for pairs not yet computed).
    pub fn constants_snapshot(&self) -> Vec<Option<Vec<(usize, i64)>>> {
        self.constants.iter().map(|c| c.get().cloned()).collect()
    }

    /// Seeds the memo table from a snapshot; entries already present are kept.
    pub fn preload_constants(&self, data: Vec<Option<Vec<(usize, i64)>>>) -> Result<()> {
        let r = self.rank();
        if data.len() != r * r {
            return Err(FbrError::invariant("structure-constant table has the wrong size"));
        }
        for (slot, entry) in self.constants.iter().zip(data) {
            if let Some(v) = entry {
                if v.iter().any(|&(k, _)| k >= r) {
                    return Err(FbrError::invariant("structure constant out of range"));
                }
                let _ = slot.set(v);
            }
        }
        Ok(())
    }

    pub fn basis_element(&self, i: usize) -> RingElement {
        RingElement::basis(self.level, i)
    }

    pub fn one(&self) -> RingElement {
        self.basis_element(self.one_index())
    }

    pub fn zero(&self) -> RingElement {
        RingElement::zero(self.level)
    }

    fn check_level(&self, x: &RingElement) -> Result<()> {
        if x.level() != self.level {
            return Err(FbrError::input(format!(
                "element has level {} but the ring has level {}",
                x.level(),
                self.level
            )));
        }
        if x.terms().keys().any(|&k| k >= self.rank()) {
            return Err(FbrError::input("element refers to a basis index out of range"));
        }
        Ok(())
    }

    /// Bilinear extension of the basis product.
    pub fn multiply(&self, x: &RingElement, y: &RingElement) -> Result<RingElement> {
        self.check_level(x)?;
        self.check_level(y)?;
        let mut out = RingElement::zero(self.level);
        for (&i, a) in x.terms() {
            for (&j, b) in y.terms() {
                let ab = a.mul(b);
                for &(k, c) in self.structure_constants(i, j) {
                    out.add_scaled_term(k, &ab, c);
                }
            }
        }
        out.normalize();
        Ok(out)
    }

    /// `π_G`: keeps only the terms `[G, ψ]`.
    pub fn pi_retraction(&self, x: &RingElement) -> RingElement {
        let whole = self.lattice.whole();
        let mut out = x.clone();
        out.retain(|i| self.basis.orbits[i].subgroup == whole);
        out
    }

    /// Basis indices of the orbits `[K, φ]` with `K` in `class`.
    pub fn class_range(&self, class: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.rank()).filter(move |&i| self.basis.orbits[i].key.class == class)
    }

    /// A human- and machine-readable description of basis element `i`.
    pub fn describe(&self, i: usize) -> OrbitDescriptor {
        let o = &self.basis.orbits[i];
        let sub = self.lattice.subgroup(o.subgroup);
        let phi = self.pair(i);
        let generators = sub
            .generators()
            .iter()
            .map(|&x| self.group.element(x).cycle_string())
            .collect();
        let hom_images = sub
            .generators()
            .iter()
            .map(|&x| self.fiber.decode(phi.values[sub.position(x).unwrap()]).exponents)
            .collect();
        OrbitDescriptor {
            key: o.key.to_string(),
            subgroup_order: sub.order(),
            subgroup_generators: generators,
            hom_images,
            stabilizer_order: o.stabilizer_order,
            orbit_size: o.orbit_size,
        }
    }
}

/// Serializable description of a basis orbit: subgroup generators as cycle
/// strings and the images of those generators in `A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OrbitDescriptor {
    pub key: String,
    pub subgroup_order: usize,
    pub subgroup_generators: Vec<String>,
    pub hom_images: Vec<Vec<u64>>,
    pub stabilizer_order: usize,
    pub orbit_size: usize,
}
