//! Congruences of species modulo primes, `p`-regular pairs, the Galois
//! action on dual pairs, connected components and blocks.

mod blocks;
mod weyl;

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

pub use blocks::{components, BlockDecomposition, BlockIdempotent, ComponentDescriptor};
pub use weyl::{weyl_block_iso, WeylBlockIso, WeylRow};

use crate::arith::{gcd, is_prime, p_part};
use crate::cyclo::{reduce_mod, FiniteFieldElem, PrimeIdealData};
use crate::error::{FbrError, Result};
use crate::fiber::{inflate_character, DualCharacter};
use crate::group::SubgroupId;
use crate::linalg::rational_rref;
use crate::species::Species;

/// A prime of `Z[ζ]`: zero, or a maximal ideal above a rational prime.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum PrimeDescriptor {
    CharZero,
    CharP { p: u64, ideal: PrimeIdealData },
}

impl PrimeDescriptor {
    pub fn characteristic(&self) -> u64 {
        match self {
            PrimeDescriptor::CharZero => 0,
            PrimeDescriptor::CharP { p, .. } => *p,
        }
    }
}

/// A dual pair `(H, Φ)` for an arbitrary subgroup `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualPair {
    pub subgroup: SubgroupId,
    pub character: DualCharacter,
}

/// The partition of the dual orbits induced by congruence of species
/// modulo a prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EquivalencePartition {
    pub prime: PrimeDescriptor,
    /// Sorted classes of dual orbit indices, sorted by least member.
    pub classes: Vec<Vec<usize>>,
    /// For a positive characteristic, the `p`-regular orbit in each class.
    pub regular_representatives: Vec<usize>,
}

fn sorted_classes(groups: impl IntoIterator<Item = Vec<usize>>) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = groups
        .into_iter()
        .map(|mut v| {
            v.sort_unstable();
            v
        })
        .collect();
    out.sort();
    out
}

impl Species<'_> {
    /// `DualPair` of a dual orbit's canonical representative.
    pub fn dual_pair(&self, d: usize) -> DualPair {
        DualPair {
            subgroup: self.orbit(d).subgroup,
            character: self.character(d).clone(),
        }
    }

    /// Whether `p ∤ o(Φ)` and `p ∤ [N_G(H, Φ) : H]`.
    pub fn is_p_regular_pair(&self, pair: &DualPair, p: u64) -> Result<bool> {
        if !is_prime(p) {
            return Err(FbrError::input(format!("{p} is not prime")));
        }
        let lat = self.ring().lattice();
        let stab = self.stabilizer(pair.subgroup, &pair.character)?;
        let index = (lat.subgroup(stab).order() / lat.subgroup(pair.subgroup).order()) as u64;
        Ok(!pair.character.order().is_multiple_of(p) && !index.is_multiple_of(p))
    }

    pub fn is_p_regular(&self, d: usize, p: u64) -> Result<bool> {
        if !is_prime(p) {
            return Err(FbrError::input(format!("{p} is not prime")));
        }
        let o = self.orbit(d);
        let h = self.ring().lattice().subgroup(o.subgroup).order();
        Ok(!self.character(d).order().is_multiple_of(p) && !((o.stabilizer_order / h) as u64).is_multiple_of(p))
    }

    /// Replaces `Φ` by `Φ_{p'}`, then climbs: `K_{i+1}/K_i` is a Sylow
    /// `p`-subgroup of `N_G(K_i, Ψ_i)/K_i` and `Ψ_{i+1} = Ψ_i ∘ res`.
    pub fn p_regularize_pair(&self, pair: &DualPair, p: u64) -> Result<DualPair> {
        if !is_prime(p) {
            return Err(FbrError::input(format!("{p} is not prime")));
        }
        let ring = self.ring();
        let lat = ring.lattice();
        let mut k = pair.subgroup;
        let mut psi = pair.character.p_parts(p).1;
        loop {
            let stab = self.stabilizer(k, &psi)?;
            let index = lat.subgroup(stab).order() / lat.subgroup(k).order();
            if p_part(index, p as usize) == 1 {
                return Ok(DualPair {
                    subgroup: k,
                    character: psi,
                });
            }
            let next = lat.sylow_extension(k, stab, p);
            psi = inflate_character(lat, &psi, ring.homs(k), ring.homs(next));
            k = next;
        }
    }

    /// Dual orbit of the `p`-regularization of orbit `d`.
    pub fn p_regularize(&self, d: usize, p: u64) -> Result<usize> {
        let reg = self.p_regularize_pair(&self.dual_pair(d), p)?;
        Ok(self.canonicalize(reg.subgroup, &reg.character))
    }

    /// Species row of `d` reduced modulo `ideal`.
    pub fn reduced_row(&self, d: usize, ideal: &PrimeIdealData) -> Result<Vec<FiniteFieldElem>> {
        self.table()[d].iter().map(|x| reduce_mod(x, ideal)).collect()
    }

    /// Congruence of two species on the whole standard basis.
    pub fn congruent_mod(&self, d1: usize, d2: usize, prime: &PrimeDescriptor) -> Result<bool> {
        match prime {
            PrimeDescriptor::CharZero => Ok(self.table()[d1] == self.table()[d2]),
            PrimeDescriptor::CharP { ideal, .. } => Ok(self.reduced_row(d1, ideal)? == self.reduced_row(d2, ideal)?),
        }
    }

    /// Partition by congruence of the reduced species rows.
    pub fn congruence_partition(&self, prime: &PrimeDescriptor) -> Result<Vec<Vec<usize>>> {
        let mut groups: BTreeMap<Vec<Vec<u64>>, Vec<usize>> = BTreeMap::new();
        let mut exact: Vec<Vec<usize>> = Vec::new();
        match prime {
            PrimeDescriptor::CharZero => {
                'outer: for d in 0..self.len() {
                    for class in exact.iter_mut() {
                        if self.table()[class[0]] == self.table()[d] {
                            class.push(d);
                            continue 'outer;
                        }
                    }
                    exact.push(vec![d]);
                }
                Ok(sorted_classes(exact))
            }
            PrimeDescriptor::CharP { ideal, .. } => {
                let rows = self
                    .ring()
                    .exec()
                    .try_map(self.len(), |d| self.reduced_row(d, ideal))?;
                for (d, row) in rows.into_iter().enumerate() {
                    let key = row.into_iter().map(|e| e.coeffs).collect();
                    groups.entry(key).or_default().push(d);
                }
                Ok(sorted_classes(groups.into_values()))
            }
        }
    }

    /// The partition of dual orbits at `prime`: by the class of the
    /// `p`-regularization, certified against the congruence partition.
    pub fn p_equivalence_partition(&self, prime: &PrimeDescriptor) -> Result<EquivalencePartition> {
        let oracle = self.congruence_partition(prime)?;
        let (classes, regular_representatives) = match prime {
            PrimeDescriptor::CharZero => ((0..self.len()).map(|d| vec![d]).collect(), Vec::new()),
            PrimeDescriptor::CharP { p, .. } => {
                let regs = self.ring().exec().try_map(self.len(), |d| self.p_regularize(d, *p))?;
                let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
                for (d, &r) in regs.iter().enumerate() {
                    groups.entry(r).or_default().push(d);
                }
                let classes = sorted_classes(groups.values().cloned());
                let mut reps = Vec::with_capacity(classes.len());
                for class in &classes {
                    let r = regs[class[0]];
                    if !self.is_p_regular(r, *p)? || !class.contains(&r) {
                        return Err(FbrError::theorem(format!(
                            "p-regularization of orbit {} is not a p-regular member of its class",
                            class[0]
                        )));
                    }
                    let regular: Vec<usize> = class
                        .iter()
                        .copied()
                        .filter(|&d| self.is_p_regular(d, *p).unwrap_or(false))
                        .collect();
                    if regular != [r] {
                        return Err(FbrError::theorem(format!(
                            "class of orbit {r} contains p-regular orbits {regular:?}"
                        )));
                    }
                    reps.push(r);
                }
                (classes, reps)
            }
        };
        if classes != oracle {
            return Err(FbrError::theorem(format!(
                "regularization partition {classes:?} disagrees with congruence partition {oracle:?}"
            )));
        }
        Ok(EquivalencePartition {
            prime: prime.clone(),
            classes,
            regular_representatives,
        })
    }

    /// `(H, Φ^t)` as a dual orbit.
    pub fn galois_conjugate(&self, d: usize, t: i64) -> Result<usize> {
        let n = self.ring().level();
        if gcd(t.rem_euclid(n as i64) as u64, n) != 1 {
            return Err(FbrError::input(format!("{t} is not a unit modulo {n}")));
        }
        let o = self.orbit(d);
        Ok(self.canonicalize(o.subgroup, &self.character(d).pow(t)))
    }

    /// The orbit of `d` under `σ_t : Φ ↦ Φ^t`, `t` a unit modulo `n`.
    pub fn galois_orbit(&self, d: usize) -> Result<Vec<usize>> {
        let n = self.ring().level();
        let mut out = Vec::new();
        for t in 1..=n.max(1) {
            if gcd(t, n) == 1 {
                out.push(self.galois_conjugate(d, t as i64)?);
            }
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Row space over `Q` of the rational components of the species row of
    /// `d`; its orthogonal complement is `ker s_d ∩ B^A(G)` tensored with `Q`.
    pub fn rational_kernel_signature(&self, d: usize) -> Vec<Vec<BigRational>> {
        let row = &self.table()[d];
        let degree = row.first().map_or(1, |c| c.coeffs().len());
        let comps: Vec<Vec<BigRational>> = (0..degree)
            .map(|k| row.iter().map(|c| c.coeffs()[k].clone()).collect())
            .collect();
        rational_rref(&comps)
    }
}
