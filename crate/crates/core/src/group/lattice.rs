use std::collections::HashMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::finite::{Elem, FiniteGroup};
use crate::arith::{is_prime, p_part};
use crate::error::{FbrError, Result};

pub type SubgroupId = usize;

/// A subgroup of the ambient group, stored as a sorted list of element
/// indices plus a membership bitset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgroup {
    pub id: SubgroupId,
    elements: Vec<Elem>,
    generators: Vec<Elem>,
    #[serde(skip)]
    bits: Vec<u64>,
}

fn bitset(n: usize, elements: &[Elem]) -> Vec<u64> {
    let mut bits = vec![0u64; n.div_ceil(64)];
    for &e in elements {
        bits[e / 64] |= 1 << (e % 64);
    }
    bits
}

impl Subgroup {
    fn new(id: SubgroupId, group_order: usize, elements: Vec<Elem>, generators: Vec<Elem>) -> Self {
        let bits = bitset(group_order, &elements);
        Subgroup {
            id,
            elements,
            generators,
            bits,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    /// A generating set, reduced so that no generator is redundant.
    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    #[inline]
    pub fn contains(&self, e: Elem) -> bool {
        self.bits[e / 64] >> (e % 64) & 1 == 1
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.order() <= other.order()
            && other.order().is_multiple_of(self.order())
            && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    /// Position of `e` inside [`Subgroup::elements`].
    pub fn position(&self, e: Elem) -> Option<usize> {
        self.elements.binary_search(&e).ok()
    }
}

/// A conjugacy class of subgroups with its chosen representative (the
/// member with the lexicographically least element list).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupClass {
    pub representative: SubgroupId,
    pub members: Vec<SubgroupId>,
}

/// Serializable snapshot of a lattice, used by the session cache.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeData {
    pub subgroups: Vec<(Vec<Elem>, Vec<Elem>)>,
    pub classes: Vec<SubgroupClass>,
    pub normalizers: Vec<SubgroupId>,
    pub transporters: Vec<Elem>,
}

/// All subgroups of a finite group with conjugacy classes, normalizers and
/// Möbius values.
///
/// Subgroups are sorted by `(order, element list)`; classes are sorted by
/// their representative's id.
#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    group_order: usize,
    subgroups: Vec<Subgroup>,
    lookup: HashMap<Vec<u64>, SubgroupId>,
    class_of: Vec<usize>,
    classes: Vec<SubgroupClass>,
    normalizers: Vec<SubgroupId>,
    transporters: Vec<Elem>,
    mobius_columns: Vec<OnceLock<Vec<(SubgroupId, i64)>>>,
}

fn reduce_generators(g: &FiniteGroup, gens: &[Elem], target: usize) -> Vec<Elem> {
    let mut gens: Vec<Elem> = gens.iter().copied().filter(|&x| x != g.identity()).collect();
    gens.dedup();
    let mut i = 0;
    while i < gens.len() {
        let mut trial = gens.clone();
        trial.remove(i);
        if g.closure(&trial).len() == target {
            gens = trial;
        } else {
            i += 1;
        }
    }
    gens
}

impl SubgroupLattice {
    /// Enumerates every subgroup by cyclic extension: each class
    /// representative `H` is extended by every cyclic subgroup `<x>` of
    /// prime-power order not contained in it, and new subgroups are closed
    /// under conjugation.
    pub fn build(g: &FiniteGroup) -> Result<Self> {
        let n = g.order();
        // One generator per cyclic subgroup of prime-power order.
        let mut cyclic_gens: Vec<Elem> = Vec::new();
        let mut cyclic_seen: HashMap<Vec<u64>, ()> = HashMap::new();
        for x in 0..n {
            let o = g.element_order(x);
            if o > 1 && p_part(o, smallest_prime_factor(o)) == o {
                let c = g.closure(&[x]);
                if cyclic_seen.insert(bitset(n, &c), ()).is_none() {
                    cyclic_gens.push(x);
                }
            }
        }

        let mut found: HashMap<Vec<u64>, (Vec<Elem>, Vec<Elem>)> = HashMap::new();
        let trivial = vec![g.identity()];
        found.insert(bitset(n, &trivial), (trivial.clone(), vec![]));
        let mut queue: Vec<(Vec<Elem>, Vec<Elem>)> = vec![(trivial, vec![])];
        let mut head = 0;
        while head < queue.len() {
            let (h_elems, h_gens) = queue[head].clone();
            head += 1;
            let h_bits = bitset(n, &h_elems);
            for &x in &cyclic_gens {
                if h_bits[x / 64] >> (x % 64) & 1 == 1 {
                    continue;
                }
                let mut gens = h_gens.clone();
                gens.push(x);
                let k = g.closure(&gens);
                let kb = bitset(n, &k);
                if found.contains_key(&kb) {
                    continue;
                }
                let gens = reduce_generators(g, &gens, k.len());
                for c in 0..n {
                    let mut ck: Vec<Elem> = k.iter().map(|&y| g.conj(c, y)).collect();
                    ck.sort_unstable();
                    let cb = bitset(n, &ck);
                    found.entry(cb).or_insert_with(|| {
                        let cg = gens.iter().map(|&y| g.conj(c, y)).collect();
                        (ck, cg)
                    });
                }
                queue.push((k, gens));
            }
        }

        let mut all: Vec<(Vec<Elem>, Vec<Elem>)> = found.into_values().collect();
        all.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        let subgroups: Vec<Subgroup> = all
            .into_iter()
            .enumerate()
            .map(|(id, (e, gens))| Subgroup::new(id, n, e, gens))
            .collect();
        let lookup: HashMap<Vec<u64>, SubgroupId> =
            subgroups.iter().map(|s| (s.bits.clone(), s.id)).collect();

        let mut class_of = vec![usize::MAX; subgroups.len()];
        let mut classes = Vec::new();
        let mut normalizers = vec![usize::MAX; subgroups.len()];
        let mut transporters = vec![usize::MAX; subgroups.len()];
        for s in 0..subgroups.len() {
            if class_of[s] != usize::MAX {
                continue;
            }
            let cidx = classes.len();
            let mut members = Vec::new();
            let mut norm_elems = Vec::new();
            let mut conjugator: HashMap<SubgroupId, Elem> = HashMap::new();
            for c in 0..n {
                let t = conj_lookup(g, &lookup, &subgroups[s], c);
                if t == s {
                    norm_elems.push(c);
                }
                conjugator.entry(t).or_insert(c);
            }
            for (&t, &c) in &conjugator {
                class_of[t] = cidx;
                members.push(t);
                transporters[t] = g.inv(c);
            }
            members.sort_unstable();
            let norm = lookup[&bitset(n, &norm_elems)];
            for &t in &members {
                let c = conjugator[&t];
                normalizers[t] = conj_lookup(g, &lookup, &subgroups[norm], c);
            }
            classes.push(SubgroupClass {
                representative: s,
                members,
            });
        }
        let count = subgroups.len();
        Ok(SubgroupLattice {
            group_order: n,
            subgroups,
            lookup,
            class_of,
            classes,
            normalizers,
            transporters,
            mobius_columns: (0..count).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn to_data(&self) -> LatticeData {
        LatticeData {
            subgroups: self
                .subgroups
                .iter()
                .map(|s| (s.elements.clone(), s.generators.clone()))
                .collect(),
            classes: self.classes.clone(),
            normalizers: self.normalizers.clone(),
            transporters: self.transporters.clone(),
        }
    }

    /// Rebuilds a lattice from a cached snapshot, validating it against `g`.
    pub fn from_data(g: &FiniteGroup, data: LatticeData) -> Result<Self> {
        let n = g.order();
        let bad = |m: &str| FbrError::invariant(format!("cached lattice rejected: {m}"));
        let mut subgroups = Vec::with_capacity(data.subgroups.len());
        for (id, (e, gens)) in data.subgroups.into_iter().enumerate() {
            if e.iter().any(|&x| x >= n) || g.closure(&gens) != e {
                return Err(bad("subgroup does not match its generators"));
            }
            subgroups.push(Subgroup::new(id, n, e, gens));
        }
        let lookup: HashMap<Vec<u64>, SubgroupId> =
            subgroups.iter().map(|s| (s.bits.clone(), s.id)).collect();
        let mut class_of = vec![usize::MAX; subgroups.len()];
        for (ci, c) in data.classes.iter().enumerate() {
            for &m in &c.members {
                if m >= class_of.len() {
                    return Err(bad("class member out of range"));
                }
                class_of[m] = ci;
            }
        }
        if class_of.contains(&usize::MAX)
            || data.normalizers.len() != subgroups.len()
            || data.transporters.len() != subgroups.len()
        {
            return Err(bad("incomplete class data"));
        }
        let count = subgroups.len();
        Ok(SubgroupLattice {
            group_order: n,
            subgroups,
            lookup,
            class_of,
            classes: data.classes,
            normalizers: data.normalizers,
            transporters: data.transporters,
            mobius_columns: (0..count).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn subgroup(&self, id: SubgroupId) -> &Subgroup {
        &self.subgroups[id]
    }

    pub fn trivial(&self) -> SubgroupId {
        0
    }

    pub fn whole(&self) -> SubgroupId {
        self.subgroups.len() - 1
    }

    pub fn classes(&self) -> &[SubgroupClass] {
        &self.classes
    }

    pub fn class_of(&self, id: SubgroupId) -> usize {
        self.class_of[id]
    }

    pub fn representative(&self, class: usize) -> SubgroupId {
        self.classes[class].representative
    }

    pub fn normalizer(&self, id: SubgroupId) -> SubgroupId {
        self.normalizers[id]
    }

    /// An element `t` with `t H t^{-1}` equal to the representative of the
    /// class of `H`.
    pub fn transporter(&self, id: SubgroupId) -> Elem {
        self.transporters[id]
    }

    pub fn find(&self, elements: &[Elem]) -> Option<SubgroupId> {
        self.lookup.get(&bitset(self.group_order, elements)).copied()
    }

    /// `K ≤ H` as a relation on ids.
    pub fn is_contained(&self, k: SubgroupId, h: SubgroupId) -> bool {
        self.subgroups[k].is_subgroup_of(&self.subgroups[h])
    }

    /// All subgroups of `h`, ascending by id.
    pub fn subgroups_of(&self, h: SubgroupId) -> Vec<SubgroupId> {
        (0..=h).filter(|&k| self.is_contained(k, h)).collect()
    }

    pub fn intersection(&self, a: SubgroupId, b: SubgroupId) -> SubgroupId {
        let bits: Vec<u64> = self.subgroups[a]
            .bits
            .iter()
            .zip(&self.subgroups[b].bits)
            .map(|(x, y)| x & y)
            .collect();
        self.lookup[&bits]
    }

    /// `g H g^{-1}`.
    pub fn conjugate(&self, g: &FiniteGroup, c: Elem, h: SubgroupId) -> SubgroupId {
        conj_lookup(g, &self.lookup, &self.subgroups[h], c)
    }

    /// Whether `K` is contained in some conjugate of `H`.
    pub fn is_subconjugate(&self, k: SubgroupId, h: SubgroupId) -> bool {
        self.classes[self.class_of[h]]
            .members
            .iter()
            .any(|&m| self.is_contained(k, m))
    }

    pub fn is_conjugate(&self, a: SubgroupId, b: SubgroupId) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    /// Double coset representatives for `H \ G / K`: the least element of
    /// each double coset.
    pub fn double_coset_reps(&self, g: &FiniteGroup, h: SubgroupId, k: SubgroupId) -> Vec<Elem> {
        self.double_coset_reps_in(g, h, k, 0..g.order())
    }

    /// Double coset representatives for `H \ U / K`, where `candidates`
    /// enumerates `U ⊇ H, K`; each double coset is represented by its first
    /// candidate.
    pub fn double_coset_reps_in(
        &self,
        g: &FiniteGroup,
        h: SubgroupId,
        k: SubgroupId,
        candidates: impl IntoIterator<Item = Elem>,
    ) -> Vec<Elem> {
        let mut mark = vec![false; g.order()];
        let mut reps = Vec::new();
        let hs = self.subgroups[h].elements();
        let ks = self.subgroups[k].elements();
        for x in candidates {
            if mark[x] {
                continue;
            }
            reps.push(x);
            for &a in hs {
                let ax = g.mul(a, x);
                for &b in ks {
                    mark[g.mul(ax, b)] = true;
                }
            }
        }
        reps
    }

    /// `μ(K, H)` for every `K ≤ H`, memoized per `H`.
    pub fn mobius_column(&self, h: SubgroupId) -> &[(SubgroupId, i64)] {
        self.mobius_columns[h].get_or_init(|| {
            let below = self.subgroups_of(h);
            let mut mu: HashMap<SubgroupId, i64> = HashMap::new();
            // descending ids visit larger subgroups first
            for &k in below.iter().rev() {
                if k == h {
                    mu.insert(k, 1);
                    continue;
                }
                let s: i64 = below
                    .iter()
                    .filter(|&&l| l > k && self.is_contained(k, l))
                    .map(|l| mu[l])
                    .sum();
                mu.insert(k, -s);
            }
            below.into_iter().map(|k| (k, mu[&k])).collect()
        })
    }

    pub fn mobius(&self, k: SubgroupId, h: SubgroupId) -> Result<i64> {
        if !self.is_contained(k, h) {
            return Err(FbrError::input(format!(
                "mobius({k}, {h}) requires subgroup {k} to be contained in {h}"
            )));
        }
        let col = self.mobius_column(h);
        Ok(col.iter().find(|(x, _)| *x == k).map(|(_, m)| *m).unwrap_or(0))
    }

    pub fn derived_subgroup(&self, g: &FiniteGroup, h: SubgroupId) -> SubgroupId {
        let elems = self.subgroups[h].elements();
        let mut comm: Vec<Elem> = Vec::new();
        let mut seen = vec![false; g.order()];
        for &x in elems {
            for &y in elems {
                let c = g.commutator(x, y);
                if !seen[c] {
                    seen[c] = true;
                    comm.push(c);
                }
            }
        }
        self.find(&g.closure(&comm)).expect("derived subgroup is in the lattice")
    }

    /// `H = H^(0) ≥ H^(1) ≥ ...` up to and including the first repeated term.
    pub fn derived_series(&self, g: &FiniteGroup, h: SubgroupId) -> Vec<SubgroupId> {
        let mut series = vec![h];
        loop {
            let last = *series.last().unwrap();
            let next = self.derived_subgroup(g, last);
            if next == last {
                return series;
            }
            series.push(next);
        }
    }

    /// The solvable residual `O^s(H)`, the stable term of the derived series.
    pub fn perfect_residual(&self, g: &FiniteGroup, h: SubgroupId) -> SubgroupId {
        *self.derived_series(g, h).last().unwrap()
    }

    pub fn is_perfect(&self, g: &FiniteGroup, h: SubgroupId) -> bool {
        self.derived_subgroup(g, h) == h
    }

    pub fn is_solvable(&self, g: &FiniteGroup, h: SubgroupId) -> bool {
        self.perfect_residual(g, h) == self.trivial()
    }

    /// `O^p(H)`, generated by the elements of `H` of order prime to `p`.
    pub fn o_p_residual(&self, g: &FiniteGroup, h: SubgroupId, p: u64) -> Result<SubgroupId> {
        if !is_prime(p) {
            return Err(FbrError::input(format!("{p} is not prime")));
        }
        let gens: Vec<Elem> = self.subgroups[h]
            .elements()
            .iter()
            .copied()
            .filter(|&x| !(g.element_order(x) as u64).is_multiple_of(p))
            .collect();
        Ok(self.find(&g.closure(&gens)).expect("O^p(H) is in the lattice"))
    }

    /// Class indices whose representatives are perfect subgroups.
    pub fn perfect_subgroup_classes(&self, g: &FiniteGroup) -> Vec<usize> {
        (0..self.classes.len())
            .filter(|&c| self.is_perfect(g, self.classes[c].representative))
            .collect()
    }

    /// First subgroup `S` (by id) with `K ≤ S ≤ N` and `S/K` a Sylow
    /// `p`-subgroup of `N/K`. `K` must be normal in `N`.
    pub fn sylow_extension(&self, k: SubgroupId, n: SubgroupId, p: u64) -> SubgroupId {
        let index = self.subgroups[n].order() / self.subgroups[k].order();
        let target = self.subgroups[k].order() * p_part(index, p as usize);
        (0..self.len())
            .find(|&s| {
                self.subgroups[s].order() == target
                    && self.is_contained(k, s)
                    && self.is_contained(s, n)
            })
            .expect("Sylow subgroups exist")
    }
}

fn conj_lookup(
    g: &FiniteGroup,
    lookup: &HashMap<Vec<u64>, SubgroupId>,
    s: &Subgroup,
    c: Elem,
) -> SubgroupId {
    let mut bits = vec![0u64; s.bits.len()];
    for &x in &s.elements {
        let y = g.conj(c, x);
        bits[y / 64] |= 1 << (y % 64);
    }
    lookup[&bits]
}

fn smallest_prime_factor(n: usize) -> usize {
    (2..=n).find(|d| n.is_multiple_of(*d)).unwrap_or(n)
}
