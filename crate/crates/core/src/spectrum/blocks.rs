//! Connected components indexed by perfect subgroups, block idempotents
//! and block bases.

use serde::Serialize;

use crate::cyclo::Cyclotomic;
use crate::error::{FbrError, Result};
use crate::group::SubgroupId;
use crate::linalg;
use crate::ring::RingElement;
use crate::species::Species;

/// The dual and basis orbits whose subgroups have solvable residual
/// conjugate to `J`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ComponentDescriptor {
    pub perfect_class: usize,
    pub perfect_subgroup: SubgroupId,
    pub dual_orbits: Vec<usize>,
    pub basis_orbits: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockIdempotent {
    pub component: ComponentDescriptor,
    pub element: RingElement,
}

/// All blocks of `B^A(G)` with their bases.
#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    pub blocks: Vec<BlockIdempotent>,
    /// `bases[i][k] = [K, φ] e_[J]` for the `k`-th basis orbit of block `i`.
    pub bases: Vec<Vec<RingElement>>,
}

/// One component per class of perfect subgroups `J`.
pub fn components(species: &Species<'_>) -> Vec<ComponentDescriptor> {
    let ring = species.ring();
    let g = ring.group();
    let lat = ring.lattice();
    let residual_class = |h: SubgroupId| lat.class_of(lat.perfect_residual(g, h));
    lat.perfect_subgroup_classes(g)
        .into_iter()
        .map(|c| ComponentDescriptor {
            perfect_class: c,
            perfect_subgroup: lat.representative(c),
            dual_orbits: (0..species.len())
                .filter(|&d| residual_class(species.orbit(d).subgroup) == c)
                .collect(),
            basis_orbits: (0..ring.rank())
                .filter(|&b| residual_class(ring.basis().orbit(b).subgroup) == c)
                .collect(),
        })
        .collect()
}

impl Species<'_> {
    /// `e_[J] = Σ e_{H,Φ}` over the dual orbits of the component; fails if a
    /// coefficient is not a rational integer.
    pub fn block_idempotent(&self, component: &ComponentDescriptor) -> Result<BlockIdempotent> {
        let mut e = self.ring().zero();
        for &d in &component.dual_orbits {
            e = e.add(self.idempotent(d));
        }
        if !e.is_integral() {
            return Err(FbrError::theorem(format!(
                "block idempotent for perfect class {} has a non-integral coefficient",
                component.perfect_class
            )));
        }
        Ok(BlockIdempotent {
            component: component.clone(),
            element: e,
        })
    }

    /// `{[K, φ] e_[J]}` for the basis orbits of the component, checked to be
    /// linearly independent and to span the block.
    pub fn block_basis(&self, block: &BlockIdempotent) -> Result<Vec<RingElement>> {
        let ring = self.ring();
        let c = &block.component;
        let elems = ring.exec().try_map(c.basis_orbits.len(), |k| {
            ring.multiply(&ring.basis_element(c.basis_orbits[k]), &block.element)
        })?;
        let rows: Vec<Vec<Cyclotomic>> = elems
            .iter()
            .map(|x| (0..ring.rank()).map(|i| x.coeff(i)).collect())
            .collect();
        let rank = if rows.is_empty() { 0 } else { linalg::rank(&rows)? };
        if rank != c.basis_orbits.len() || rank != c.dual_orbits.len() {
            return Err(FbrError::theorem(format!(
                "block of perfect class {}: basis rank {rank}, {} generators, block dimension {}",
                c.perfect_class,
                c.basis_orbits.len(),
                c.dual_orbits.len()
            )));
        }
        if ring.lattice().representative(c.perfect_class) == ring.lattice().trivial() {
            for (&b, x) in c.basis_orbits.iter().zip(&elems) {
                if *x != ring.basis_element(b) {
                    return Err(FbrError::theorem(format!(
                        "[K, φ] e_[1] differs from [K, φ] for basis orbit {b}"
                    )));
                }
            }
        }
        Ok(elems)
    }

    /// Components, block idempotents and bases, after checking that the
    /// idempotents are orthogonal and sum to 1.
    pub fn block_decomposition(&self) -> Result<BlockDecomposition> {
        let ring = self.ring();
        let comps = components(self);
        let blocks: Vec<BlockIdempotent> = comps
            .iter()
            .map(|c| self.block_idempotent(c))
            .collect::<Result<_>>()?;
        let mut total = ring.zero();
        for (i, a) in blocks.iter().enumerate() {
            total = total.add(&a.element);
            for (j, b) in blocks.iter().enumerate() {
                let prod = ring.multiply(&a.element, &b.element)?;
                let expected = if i == j { a.element.clone() } else { ring.zero() };
                if prod != expected {
                    return Err(FbrError::theorem(format!(
                        "block idempotents {i} and {j} are not orthogonal idempotents"
                    )));
                }
            }
        }
        if total != ring.one() {
            return Err(FbrError::theorem("block idempotents do not sum to 1"));
        }
        let covered: usize = comps.iter().map(|c| c.basis_orbits.len()).sum();
        let covered_duals: usize = comps.iter().map(|c| c.dual_orbits.len()).sum();
        if covered != ring.rank() || covered_duals != self.len() {
            return Err(FbrError::invariant("components do not partition the orbits"));
        }
        let bases = blocks.iter().map(|b| self.block_basis(b)).collect::<Result<_>>()?;
        Ok(BlockDecomposition { blocks, bases })
    }
}
