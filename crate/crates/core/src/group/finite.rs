use std::collections::{HashMap, HashSet, VecDeque};

use super::perm::Permutation;
use crate::error::{FbrError, Result};

/// Index of an element in [`FiniteGroup::elements`].
pub type Elem = usize;

/// Groups at most this large get a full multiplication table.
const TABLE_LIMIT: usize = 1500;

/// Limits guarding the exponential parts of the engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResourceCaps {
    pub max_group_order: usize,
    pub max_hom_count: usize,
}

impl Default for ResourceCaps {
    fn default() -> Self {
        ResourceCaps {
            max_group_order: 10_000,
            max_hom_count: 4096,
        }
    }
}

/// A finite permutation group with its complete element list.
///
/// Elements are sorted by image array, so the identity is always element 0
/// and element indices are stable canonical keys.
#[derive(Clone)]
pub struct FiniteGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, Elem>,
    inverses: Vec<Elem>,
    orders: Vec<usize>,
    table: Option<Vec<u32>>,
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

impl FiniteGroup {
    pub fn from_generators(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        Self::from_generators_capped(degree, generators, ResourceCaps::default().max_group_order)
    }

    /// Closes `generators` under composition, failing once more than
    /// `max_order` distinct elements have been produced.
    pub fn from_generators_capped(
        degree: usize,
        generators: Vec<Permutation>,
        max_order: usize,
    ) -> Result<Self> {
        if degree == 0 {
            return Err(FbrError::input("permutation degree must be at least 1"));
        }
        for g in &generators {
            if g.degree() != degree {
                return Err(FbrError::input(format!(
                    "generator {g} has degree {} but the group has degree {degree}",
                    g.degree()
                )));
            }
        }
        let id = Permutation::identity(degree);
        let mut seen: HashSet<Permutation> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(id.clone());
        queue.push_back(id);
        while let Some(x) = queue.pop_front() {
            for g in &generators {
                let y = x.compose(g);
                if !seen.contains(&y) {
                    if seen.len() >= max_order {
                        return Err(FbrError::resource(format!(
                            "group order exceeds the cap of {max_order}"
                        )));
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<Permutation> = seen.into_iter().collect();
        elements.sort();
        Ok(Self::from_sorted_elements(degree, generators, elements))
    }

    fn from_sorted_elements(
        degree: usize,
        generators: Vec<Permutation>,
        elements: Vec<Permutation>,
    ) -> Self {
        let index: HashMap<Permutation, Elem> =
            elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let inverses = elements.iter().map(|p| index[&p.inverse()]).collect();
        let orders = elements.iter().map(|p| p.order()).collect();
        let n = elements.len();
        let table = (n <= TABLE_LIMIT).then(|| {
            let mut t = vec![0u32; n * n];
            for (a, pa) in elements.iter().enumerate() {
                for (b, pb) in elements.iter().enumerate() {
                    t[a * n + b] = index[&pa.compose(pb)] as u32;
                }
            }
            t
        });
        FiniteGroup {
            degree,
            generators,
            elements,
            index,
            inverses,
            orders,
            table,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, i: Elem) -> &Permutation {
        &self.elements[i]
    }

    pub fn identity(&self) -> Elem {
        0
    }

    pub fn index_of(&self, p: &Permutation) -> Option<Elem> {
        self.index.get(p).copied()
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.table {
            Some(t) => t[a * self.elements.len() + b] as usize,
            None => self.index[&self.elements[a].compose(&self.elements[b])],
        }
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverses[a]
    }

    /// `g x g^{-1}`.
    #[inline]
    pub fn conj(&self, g: Elem, x: Elem) -> Elem {
        self.mul(self.mul(g, x), self.inverses[g])
    }

    /// `x^{-1} y^{-1} x y`.
    pub fn commutator(&self, x: Elem, y: Elem) -> Elem {
        self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))
    }

    pub fn element_order(&self, a: Elem) -> usize {
        self.orders[a]
    }

    pub fn pow(&self, a: Elem, k: usize) -> Elem {
        let mut r = self.identity();
        for _ in 0..k {
            r = self.mul(r, a);
        }
        r
    }

    pub fn exponent(&self) -> usize {
        self.orders.iter().fold(1, |acc, &o| num_integer::lcm(acc, o))
    }

    pub fn is_abelian(&self) -> bool {
        let gens: Vec<Elem> = self.generator_indices();
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn generator_indices(&self) -> Vec<Elem> {
        self.generators.iter().map(|g| self.index[g]).collect()
    }

    /// Closure of a set of element indices under multiplication, as a
    /// sorted index list.
    pub fn closure(&self, gens: &[Elem]) -> Vec<Elem> {
        let mut mark = vec![false; self.order()];
        let mut out = vec![self.identity()];
        mark[self.identity()] = true;
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !mark[y] {
                    mark[y] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(n: usize, s: &str) -> Permutation {
        Permutation::from_cycles(n, s).unwrap()
    }

    #[test]
    fn closure_orders() {
        let c2 = FiniteGroup::from_generators(2, vec![perm(2, "(1 2)")]).unwrap();
        assert_eq!(c2.order(), 2);
        let s3 = FiniteGroup::from_generators(3, vec![perm(3, "(1 2 3)"), perm(3, "(1 2)")]).unwrap();
        assert_eq!(s3.order(), 6);
        let triv = FiniteGroup::from_generators(1, vec![]).unwrap();
        assert_eq!(triv.order(), 1);
    }

    #[test]
    fn s3_closure_matches_all_permutations() {
        // The six permutations of three points, listed by hand.
        let all = ["()", "(1 2)", "(1 3)", "(2 3)", "(1 2 3)", "(1 3 2)"];
        let s3 = FiniteGroup::from_generators(3, vec![perm(3, "(1 2 3)"), perm(3, "(1 2)")]).unwrap();
        for s in all {
            assert!(s3.index_of(&perm(3, s)).is_some(), "{s} missing");
        }
    }

    #[test]
    fn closed_under_products_and_inverses() {
        let g = FiniteGroup::from_generators(4, vec![perm(4, "(1 2 3 4)"), perm(4, "(1 3)")]).unwrap();
        assert_eq!(g.order(), 8);
        for a in 0..g.order() {
            assert_eq!(g.mul(a, g.inv(a)), g.identity());
            for b in 0..g.order() {
                assert_eq!(
                    g.element(g.mul(a, b)),
                    &g.element(a).compose(g.element(b))
                );
            }
        }
        for gen in g.generators() {
            assert!(g.index_of(gen).is_some());
        }
    }

    #[test]
    fn input_and_resource_errors() {
        assert!(matches!(
            FiniteGroup::from_generators(0, vec![]),
            Err(FbrError::Input(_))
        ));
        assert!(matches!(
            FiniteGroup::from_generators(3, vec![perm(2, "(1 2)")]),
            Err(FbrError::Input(_))
        ));
        let s5 = vec![perm(5, "(1 2 3 4 5)"), perm(5, "(1 2)")];
        assert!(matches!(
            FiniteGroup::from_generators_capped(5, s5, 100),
            Err(FbrError::Resource(_))
        ));
    }
}
