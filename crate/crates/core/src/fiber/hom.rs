use std::collections::HashMap;

use super::abelian::{AbelianCode, FiniteAbelianGroup};
use super::decompose::decompose;
use crate::arith::{gcd, mod_inverse, p_part};
use crate::cyclo::Cyclotomic;
use crate::error::{FbrError, Result};
use crate::group::{Elem, FiniteGroup, SubgroupId, SubgroupLattice};

/// A homomorphism `H → A`, stored as its full value table aligned with the
/// sorted element list of `H`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiberHom {
    pub domain: SubgroupId,
    pub values: Vec<AbelianCode>,
}

impl FiberHom {
    pub fn trivial(domain: SubgroupId, order: usize) -> Self {
        FiberHom {
            domain,
            values: vec![0; order],
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Elements of the domain mapped to zero.
    pub fn kernel(&self, lattice: &SubgroupLattice) -> Vec<Elem> {
        let h = lattice.subgroup(self.domain);
        h.elements()
            .iter()
            .zip(&self.values)
            .filter(|(_, &v)| v == 0)
            .map(|(&e, _)| e)
            .collect()
    }
}

/// `^gφ` on `^gH`, with `(^gφ)(x) = φ(g^{-1} x g)`.
pub fn conjugate_hom(g: &FiniteGroup, lattice: &SubgroupLattice, c: Elem, phi: &FiberHom) -> FiberHom {
    let dst = lattice.conjugate(g, c, phi.domain);
    let src = lattice.subgroup(phi.domain);
    let cinv = g.inv(c);
    let values = lattice
        .subgroup(dst)
        .elements()
        .iter()
        .map(|&x| {
            let y = g.conj(cinv, x);
            phi.values[src.position(y).expect("conjugate lies in the domain")]
        })
        .collect();
    FiberHom { domain: dst, values }
}

/// `φ|_K`.
pub fn restrict_hom(lattice: &SubgroupLattice, phi: &FiberHom, k: SubgroupId) -> Result<FiberHom> {
    if !lattice.is_contained(k, phi.domain) {
        return Err(FbrError::input(format!(
            "subgroup {k} is not contained in the domain {}",
            phi.domain
        )));
    }
    let src = lattice.subgroup(phi.domain);
    let values = lattice
        .subgroup(k)
        .elements()
        .iter()
        .map(|&x| phi.values[src.position(x).unwrap()])
        .collect();
    Ok(FiberHom { domain: k, values })
}

/// `Hom(H, A)` with every element listed, sorted by value table, and a
/// decomposition into cyclic factors of prime-power order.
#[derive(Clone, Debug)]
pub struct HomGroup {
    pub domain: SubgroupId,
    homs: Vec<FiberHom>,
    lookup: HashMap<Vec<AbelianCode>, usize>,
    generators: Vec<usize>,
    generator_orders: Vec<u64>,
    coords: Vec<Vec<u64>>,
    structure: FiniteAbelianGroup,
}

fn enumerate_homs(
    g: &FiniteGroup,
    lattice: &SubgroupLattice,
    h: SubgroupId,
    fiber: &FiniteAbelianGroup,
    cap: usize,
) -> Result<Vec<Vec<AbelianCode>>> {
    let sub = lattice.subgroup(h);
    let gens = sub.generators();
    let order = sub.order();
    if gens.is_empty() {
        return Ok(vec![vec![0; order]]);
    }
    let candidates: Vec<Vec<AbelianCode>> = gens
        .iter()
        .map(|&x| {
            let o = g.element_order(x) as u64;
            fiber.elements().filter(|&a| fiber.scale(a, o) == 0).collect()
        })
        .collect();
    let tuples = candidates
        .iter()
        .try_fold(1usize, |acc, c| acc.checked_mul(c.len()))
        .filter(|&t| t <= cap.saturating_mul(64))
        .ok_or_else(|| FbrError::resource("too many generator images to search"))?;
    let mut out = Vec::new();
    let mut values = vec![AbelianCode::MAX; order];
    let mut queue = Vec::with_capacity(order);
    for t in 0..tuples {
        let mut rem = t;
        let images: Vec<AbelianCode> = candidates
            .iter()
            .map(|c| {
                let a = c[rem % c.len()];
                rem /= c.len();
                a
            })
            .collect();
        values.iter_mut().for_each(|v| *v = AbelianCode::MAX);
        queue.clear();
        values[0] = 0;
        queue.push(g.identity());
        let mut ok = true;
        let mut head = 0;
        'bfs: while head < queue.len() {
            let x = queue[head];
            head += 1;
            let vx = values[sub.position(x).unwrap()];
            for (&s, &a) in gens.iter().zip(&images) {
                let y = g.mul(x, s);
                let py = sub.position(y).unwrap();
                let vy = fiber.add(vx, a);
                if values[py] == AbelianCode::MAX {
                    values[py] = vy;
                    queue.push(y);
                } else if values[py] != vy {
                    ok = false;
                    break 'bfs;
                }
            }
        }
        if ok {
            out.push(values.clone());
            if out.len() > cap {
                return Err(FbrError::resource(format!(
                    "|Hom(H, A)| exceeds the cap of {cap}"
                )));
            }
        }
    }
    out.sort();
    Ok(out)
}

impl HomGroup {
    pub fn new(
        g: &FiniteGroup,
        lattice: &SubgroupLattice,
        h: SubgroupId,
        fiber: &FiniteAbelianGroup,
        cap: usize,
    ) -> Result<Self> {
        let tables = enumerate_homs(g, lattice, h, fiber, cap)?;
        let lookup: HashMap<Vec<AbelianCode>, usize> =
            tables.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        let add = |i: usize, j: usize| -> usize {
            let sum: Vec<AbelianCode> = tables[i]
                .iter()
                .zip(&tables[j])
                .map(|(&a, &b)| fiber.add(a, b))
                .collect();
            lookup[&sum]
        };
        let zero = 0; // the trivial hom has the least value table
        let dec = decompose(tables.len(), zero, &add)?;
        let structure = FiniteAbelianGroup::from_cyclic_factors(&dec.orders)?;
        let homs = tables
            .into_iter()
            .map(|values| FiberHom { domain: h, values })
            .collect();
        Ok(HomGroup {
            domain: h,
            homs,
            lookup,
            generators: dec.generators,
            generator_orders: dec.orders,
            coords: dec.coords,
            structure,
        })
    }

    pub fn len(&self) -> usize {
        self.homs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.homs.is_empty()
    }

    pub fn homs(&self) -> &[FiberHom] {
        &self.homs
    }

    pub fn hom(&self, i: usize) -> &FiberHom {
        &self.homs[i]
    }

    pub fn index_of(&self, values: &[AbelianCode]) -> Option<usize> {
        self.lookup.get(values).copied()
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn generator_orders(&self) -> &[u64] {
        &self.generator_orders
    }

    pub fn coordinates(&self, i: usize) -> &[u64] {
        &self.coords[i]
    }

    /// Invariant factors of `Hom(H, A)`.
    pub fn structure(&self) -> &FiniteAbelianGroup {
        &self.structure
    }

    pub fn exponent(&self) -> u64 {
        self.structure.exponent()
    }

    /// Pointwise sum of two homs, by index.
    pub fn add(&self, fiber: &FiniteAbelianGroup, i: usize, j: usize) -> usize {
        let sum: Vec<AbelianCode> = self.homs[i]
            .values
            .iter()
            .zip(&self.homs[j].values)
            .map(|(&a, &b)| fiber.add(a, b))
            .collect();
        self.lookup[&sum]
    }
}

/// A character `Φ : Hom(H, A) → μ_n`, stored as the exponent of `ζ_n` at
/// every hom of the domain (same order as [`HomGroup::homs`]).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DualCharacter {
    pub domain: SubgroupId,
    pub level: u64,
    /// Exponent of `ζ_n` assigned to each generator of the hom group.
    pub exponents: Vec<u64>,
    pub values: Vec<u64>,
}

impl DualCharacter {
    fn from_values(hg: &HomGroup, level: u64, values: Vec<u64>) -> Self {
        let exponents = hg.generators.iter().map(|&g| values[g]).collect();
        DualCharacter {
            domain: hg.domain,
            level,
            exponents,
            values,
        }
    }

    pub fn trivial(hg: &HomGroup, level: u64) -> Self {
        Self::from_values(hg, level, vec![0; hg.len()])
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// `o(Φ)`.
    pub fn order(&self) -> u64 {
        let g = self.values.iter().fold(self.level, |acc, &v| gcd(acc, v));
        self.level / g
    }

    /// `Φ^t`.
    pub fn pow(&self, t: i64) -> Self {
        let n = self.level as i64;
        let t = t.rem_euclid(n) as u64;
        let scale = |v: &u64| v * t % self.level;
        DualCharacter {
            domain: self.domain,
            level: self.level,
            exponents: self.exponents.iter().map(scale).collect(),
            values: self.values.iter().map(scale).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.domain, other.domain);
        let add = |(a, b): (&u64, &u64)| (a + b) % self.level;
        DualCharacter {
            domain: self.domain,
            level: self.level,
            exponents: self.exponents.iter().zip(&other.exponents).map(add).collect(),
            values: self.values.iter().zip(&other.values).map(add).collect(),
        }
    }

    /// `Φ(φ)` as `ζ_n^k`.
    pub fn evaluate(&self, hom: usize) -> Cyclotomic {
        Cyclotomic::zeta_pow(self.level, self.values[hom] as i64)
    }

    /// `\overline{Φ(φ)}`.
    pub fn conj_evaluate(&self, hom: usize) -> Cyclotomic {
        Cyclotomic::zeta_pow(self.level, -(self.values[hom] as i64))
    }

    /// `(Φ_p, Φ_{p'})` with `Φ = Φ_p Φ_{p'}`, `o(Φ_p)` a power of `p` and
    /// `o(Φ_{p'})` prime to `p`.
    pub fn p_parts(&self, p: u64) -> (Self, Self) {
        let o = self.order();
        let pa = p_part(o as usize, p as usize) as i64;
        let m = o as i64 / pa;
        // exponents mod o: Φ_p = Φ^{m (m^{-1} mod p^a)}, Φ_{p'} = Φ^{p^a (p^{-a} mod m)}
        let a = m * mod_inverse(m, pa).unwrap_or(0);
        let b = pa * mod_inverse(pa, m).unwrap_or(0);
        (self.pow(a), self.pow(b))
    }
}

/// All characters of `Hom(H, A)` with values in `μ_n`, sorted by value
/// table.
pub fn dual_characters(hg: &HomGroup, n: u64) -> Result<Vec<DualCharacter>> {
    for &o in hg.generator_orders() {
        if !n.is_multiple_of(o) {
            return Err(FbrError::invariant(format!(
                "hom group generator of order {o} does not divide the level {n}"
            )));
        }
    }
    let total = hg.len();
    let mut out = Vec::with_capacity(total);
    for idx in 0..total {
        let mut rem = idx as u64;
        let exps: Vec<u64> = hg
            .generator_orders()
            .iter()
            .map(|&o| {
                let k = rem % o;
                rem /= o;
                k * (n / o)
            })
            .collect();
        let values = (0..hg.len())
            .map(|j| {
                hg.coordinates(j)
                    .iter()
                    .zip(&exps)
                    .map(|(c, e)| c * e)
                    .sum::<u64>()
                    % n
            })
            .collect();
        out.push(DualCharacter::from_values(hg, n, values));
    }
    out.sort();
    Ok(out)
}

/// `^gΦ` on `Hom(^gH, A)`, with `(^gΦ)(φ) = Φ(^{g^{-1}}φ)`.
pub fn character_conjugate(
    g: &FiniteGroup,
    lattice: &SubgroupLattice,
    c: Elem,
    phi: &DualCharacter,
    src: &HomGroup,
    dst: &HomGroup,
) -> DualCharacter {
    debug_assert_eq!(dst.domain, lattice.conjugate(g, c, src.domain));
    let cinv = g.inv(c);
    let values = dst
        .homs()
        .iter()
        .map(|h| {
            let back = conjugate_hom(g, lattice, cinv, h);
            phi.values[src.index_of(&back.values).expect("conjugate hom exists")]
        })
        .collect();
    DualCharacter::from_values(dst, phi.level, values)
}

/// `Φ ∘ res^K_H` for `H ≤ K`: the character of `Hom(K, A)` sending `φ` to
/// `Φ(φ|_H)`.
pub fn inflate_character(
    lattice: &SubgroupLattice,
    phi: &DualCharacter,
    inner: &HomGroup,
    outer: &HomGroup,
) -> DualCharacter {
    let values = outer
        .homs()
        .iter()
        .map(|h| {
            let r = restrict_hom(lattice, h, inner.domain).expect("H ≤ K");
            phi.values[inner.index_of(&r.values).expect("restriction is a hom")]
        })
        .collect();
    DualCharacter::from_values(outer, phi.level, values)
}

/// Abelianization invariants of `H`, by decomposing `H/[H,H]` directly.
pub fn abelianization_invariants(g: &FiniteGroup, lattice: &SubgroupLattice, h: SubgroupId) -> Result<Vec<u64>> {
    let d = lattice.derived_subgroup(g, h);
    let sub = lattice.subgroup(h);
    let der = lattice.subgroup(d);
    // coset ids: least element of each coset x[H,H]
    let mut coset_of = HashMap::new();
    let mut reps = Vec::new();
    for &x in sub.elements() {
        if coset_of.contains_key(&x) {
            continue;
        }
        let id = reps.len();
        reps.push(x);
        for &y in der.elements() {
            coset_of.insert(g.mul(x, y), id);
        }
    }
    let add = |i: usize, j: usize| coset_of[&g.mul(reps[i], reps[j])];
    let zero = coset_of[&g.identity()];
    let dec = decompose(reps.len(), zero, &add)?;
    Ok(FiniteAbelianGroup::from_cyclic_factors(&dec.orders)?
        .invariant_factors()
        .to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog::parse_group_spec;

    fn setup(spec: &str) -> (FiniteGroup, SubgroupLattice) {
        let g = parse_group_spec(spec, 10_000).unwrap();
        let l = SubgroupLattice::build(&g).unwrap();
        (g, l)
    }

    #[test]
    fn hom_counts_match_abelianization() {
        // |Hom(H, C_m)| = Π gcd(d_i, m) over the abelianization invariants.
        for spec in ["C4", "V4", "S3", "D4", "Q8", "A4"] {
            let (g, l) = setup(spec);
            for m in [1u64, 2, 3, 4, 6] {
                let a = FiniteAbelianGroup::cyclic(m);
                for h in 0..l.len() {
                    let hg = HomGroup::new(&g, &l, h, &a, 4096).unwrap();
                    let inv = abelianization_invariants(&g, &l, h).unwrap();
                    let expected: u64 = inv.iter().map(|&d| gcd(d, m)).product();
                    assert_eq!(hg.len() as u64, expected, "{spec} H={h} m={m}");
                }
            }
        }
    }

    #[test]
    fn homs_are_homomorphisms_and_closed() {
        let (g, l) = setup("D4");
        let a = FiniteAbelianGroup::from_invariant_factors(vec![2, 2]).unwrap();
        let h = l.whole();
        let hg = HomGroup::new(&g, &l, h, &a, 4096).unwrap();
        let sub = l.subgroup(h);
        for phi in hg.homs() {
            for (i, &x) in sub.elements().iter().enumerate() {
                for (j, &y) in sub.elements().iter().enumerate() {
                    let xy = sub.position(g.mul(x, y)).unwrap();
                    assert_eq!(phi.values[xy], a.add(phi.values[i], phi.values[j]));
                }
            }
        }
        for i in 0..hg.len() {
            for j in 0..hg.len() {
                hg.add(&a, i, j);
            }
        }
        assert!(hg.hom(0).is_trivial());
        // D4^ab = C2 x C2, so Hom(D4, C2 x C2) = C2^4
        assert_eq!(hg.structure().invariant_factors(), &[2, 2, 2, 2]);
    }

    #[test]
    fn characters_form_the_dual() {
        let (g, l) = setup("C6");
        let a = FiniteAbelianGroup::cyclic(6);
        let hg = HomGroup::new(&g, &l, l.whole(), &a, 4096).unwrap();
        let chars = dual_characters(&hg, 6).unwrap();
        assert_eq!(chars.len(), 6);
        assert!(chars[0].is_trivial());
        let mut orders: Vec<u64> = chars.iter().map(|c| c.order()).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![1, 2, 3, 3, 6, 6]);
        for c in &chars {
            for p in [2, 3] {
                let (cp, cq) = c.p_parts(p);
                assert_eq!(&cp.mul(&cq), c);
                assert_eq!(p_part(cp.order() as usize, p as usize) as u64, cp.order());
                assert_eq!(cq.order() % p, if cq.order() == 0 { 0 } else { cq.order() % p });
                assert_ne!(cq.order() % p, 0);
            }
            // multiplicative on hom sums
            for i in 0..hg.len() {
                for j in 0..hg.len() {
                    let k = hg.add(&a, i, j);
                    assert_eq!(c.values[k], (c.values[i] + c.values[j]) % 6);
                }
            }
        }
        assert!(dual_characters(&hg, 4).is_err());
    }

    #[test]
    fn conjugation_and_restriction() {
        let (g, l) = setup("S3");
        let a = FiniteAbelianGroup::cyclic(2);
        let order2: Vec<SubgroupId> = (0..l.len()).filter(|&h| l.subgroup(h).order() == 2).collect();
        assert_eq!(order2.len(), 3);
        let h = order2[0];
        let hg = HomGroup::new(&g, &l, h, &a, 4096).unwrap();
        let sign = hg.hom(1).clone();
        for c in 0..g.order() {
            let conj = conjugate_hom(&g, &l, c, &sign);
            assert!(!conj.is_trivial());
            let back = conjugate_hom(&g, &l, g.inv(c), &conj);
            assert_eq!(back, sign);
        }
        let whole = HomGroup::new(&g, &l, l.whole(), &a, 4096).unwrap();
        let sgn = whole.hom(1);
        assert_eq!(restrict_hom(&l, sgn, h).unwrap(), sign);
        let c3 = (0..l.len()).find(|&h| l.subgroup(h).order() == 3).unwrap();
        assert!(restrict_hom(&l, sgn, c3).unwrap().is_trivial());
        assert!(restrict_hom(&l, &sign, c3).is_err());
        assert_eq!(sgn.kernel(&l), l.subgroup(c3).elements());
    }
}
