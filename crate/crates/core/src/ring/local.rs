//! `B^A(U)` for subgroups `U ≤ G`, with induction, restriction and
//! conjugation between them.
//!
//! Pairs are kept as raw [`FiberHom`]s; the canonical representative of a
//! `U`-orbit is its least conjugate under `U`.

use std::collections::BTreeMap;

use super::{FiberedRing, RingElement};
use crate::cyclo::Cyclotomic;
use crate::error::{FbrError, Result};
use crate::fiber::{conjugate_hom, restrict_hom, FiberHom};
use crate::group::{Elem, SubgroupId};

/// An element of `B^A(U)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalElement {
    pub ambient: SubgroupId,
    level: u64,
    terms: BTreeMap<FiberHom, Cyclotomic>,
}

impl LocalElement {
    pub fn zero(ambient: SubgroupId, level: u64) -> Self {
        LocalElement {
            ambient,
            level,
            terms: BTreeMap::new(),
        }
    }

    pub fn terms(&self) -> &BTreeMap<FiberHom, Cyclotomic> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, pair: FiberHom, c: &Cyclotomic) {
        let slot = self
            .terms
            .entry(pair)
            .or_insert_with(|| Cyclotomic::zero(c.level()));
        slot.add_assign(c);
    }

    fn normalize(mut self) -> Self {
        self.terms.retain(|_, c| !c.is_zero());
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.ambient, other.ambient);
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c);
        }
        out.normalize()
    }
}

impl FiberedRing {
    fn ambient_elements(&self, u: SubgroupId) -> &[Elem] {
        self.lattice().subgroup(u).elements()
    }

    /// The least `U`-conjugate of `pair`.
    pub fn local_canonical(&self, u: SubgroupId, pair: &FiberHom) -> FiberHom {
        let g = self.group();
        let lat = self.lattice();
        let mut best: Option<FiberHom> = None;
        for &x in self.ambient_elements(u) {
            if best.as_ref().is_some_and(|b| lat.conjugate(g, x, pair.domain) > b.domain) {
                continue;
            }
            let c = conjugate_hom(g, lat, x, pair);
            if best.as_ref().is_none_or(|b| c < *b) {
                best = Some(c);
            }
        }
        best.expect("U is nonempty")
    }

    /// `[L, φ]_U` as a local element.
    pub fn local_basis_element(&self, u: SubgroupId, pair: &FiberHom) -> Result<LocalElement> {
        if !self.lattice().is_contained(pair.domain, u) {
            return Err(FbrError::input("pair is not inside the ambient subgroup"));
        }
        let mut out = LocalElement::zero(u, self.level());
        out.add_term(self.local_canonical(u, pair), &Cyclotomic::one(self.level()));
        Ok(out)
    }

    /// All canonical pairs of `B^A(U)`.
    pub fn local_basis(&self, u: SubgroupId) -> Vec<FiberHom> {
        let mut out: Vec<FiberHom> = self
            .lattice()
            .subgroups_of(u)
            .into_iter()
            .flat_map(|l| self.homs(l).homs().iter().map(move |p| self.local_canonical(u, p)))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Views an element of `B^A(G)` as a local element over `G`.
    pub fn to_local(&self, x: &RingElement) -> LocalElement {
        let mut out = LocalElement::zero(self.lattice().whole(), self.level());
        for (&i, c) in x.terms() {
            out.add_term(self.local_canonical(self.lattice().whole(), self.pair(i)), c);
        }
        out.normalize()
    }

    pub fn from_local(&self, x: &LocalElement) -> Result<RingElement> {
        if x.ambient != self.lattice().whole() {
            return Err(FbrError::input("local element does not live over G"));
        }
        Ok(RingElement::from_terms(
            self.level(),
            x.terms.iter().map(|(p, c)| (self.index_of_pair(p), c.clone())),
        ))
    }

    /// Product in `B^A(U)`.
    pub fn local_multiply(&self, x: &LocalElement, y: &LocalElement) -> Result<LocalElement> {
        if x.ambient != y.ambient {
            return Err(FbrError::input("local elements over different subgroups"));
        }
        let u = x.ambient;
        let mut out = LocalElement::zero(u, self.level());
        for (p, a) in &x.terms {
            for (q, b) in &y.terms {
                let ab = a.mul(b);
                let reps = self.lattice().double_coset_reps_in(
                    self.group(),
                    p.domain,
                    q.domain,
                    self.ambient_elements(u).iter().copied(),
                );
                for c in reps {
                    let pair = self.product_pair(p, q, c);
                    out.add_term(self.local_canonical(u, &pair), &ab);
                }
            }
        }
        Ok(out.normalize())
    }

    /// `res^U_V`.
    pub fn restrict(&self, v: SubgroupId, x: &LocalElement) -> Result<LocalElement> {
        let u = x.ambient;
        let lat = self.lattice();
        let g = self.group();
        if !lat.is_contained(v, u) {
            return Err(FbrError::input(format!("subgroup {v} is not contained in {u}")));
        }
        let mut out = LocalElement::zero(v, self.level());
        for (p, a) in &x.terms {
            let reps = lat.double_coset_reps_in(g, v, p.domain, self.ambient_elements(u).iter().copied());
            for c in reps {
                let moved = conjugate_hom(g, lat, c, p);
                let k = lat.intersection(v, moved.domain);
                let pair = restrict_hom(lat, &moved, k)?;
                out.add_term(self.local_canonical(v, &pair), a);
            }
        }
        Ok(out.normalize())
    }

    /// `ind^U_V` for `V = x.ambient ≤ U`.
    pub fn induce(&self, u: SubgroupId, x: &LocalElement) -> Result<LocalElement> {
        if !self.lattice().is_contained(x.ambient, u) {
            return Err(FbrError::input(format!(
                "subgroup {} is not contained in {u}",
                x.ambient
            )));
        }
        let mut out = LocalElement::zero(u, self.level());
        for (p, a) in &x.terms {
            out.add_term(self.local_canonical(u, p), a);
        }
        Ok(out.normalize())
    }

    /// `c_{g, U}`: `B^A(U) → B^A(^gU)`.
    pub fn conjugate_local(&self, c: Elem, x: &LocalElement) -> LocalElement {
        let g = self.group();
        let lat = self.lattice();
        let target = lat.conjugate(g, c, x.ambient);
        let mut out = LocalElement::zero(target, self.level());
        for (p, a) in &x.terms {
            let moved = conjugate_hom(g, lat, c, p);
            out.add_term(self.local_canonical(target, &moved), a);
        }
        out.normalize()
    }

    /// `π_U`: the coefficients of the terms `[U, ψ]_U`, by index in
    /// `Hom(U, A)`.
    pub fn local_retraction(&self, x: &LocalElement) -> BTreeMap<usize, Cyclotomic> {
        let hg = self.homs(x.ambient);
        x.terms
            .iter()
            .filter(|(p, _)| p.domain == x.ambient)
            .map(|(p, c)| (hg.index_of(&p.values).expect("hom of U"), c.clone()))
            .collect()
    }
}
