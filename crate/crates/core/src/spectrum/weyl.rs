//! The isomorphism between the solvable block of `B^A(N_G(J)/J)` and the
//! `J`-block of `B^A(G)`, by inflation.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{FbrError, Result};
use crate::fiber::FiberHom;
use crate::group::{Elem, FiniteGroup, Permutation, ResourceCaps, SubgroupId};
use crate::ring::{FiberedRing, OrbitDescriptor, RingElement};
use crate::species::Species;

/// One row of the basis bijection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WeylRow {
    pub weyl_orbit: OrbitDescriptor,
    pub group_orbit: OrbitDescriptor,
    pub weyl_index: usize,
    pub group_index: usize,
}

/// The verified block isomorphism for one perfect subgroup `J`.
#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WeylBlockIso {
    pub perfect_class: usize,
    pub perfect_order: usize,
    pub weyl_order: usize,
    pub weyl_degree: usize,
    pub rows: Vec<WeylRow>,
    pub checked_products: usize,
}

/// `N_G(J)/J` acting on the cosets of `J`, with the quotient map on the
/// elements of `N_G(J)`.
struct Quotient {
    group: FiniteGroup,
    /// `image[i]` is the image of the `i`-th element of `N_G(J)`.
    image: Vec<Elem>,
}

fn weyl_quotient(ring: &FiberedRing, j: SubgroupId, caps: ResourceCaps) -> Result<Quotient> {
    let g = ring.group();
    let lat = ring.lattice();
    let norm = lat.subgroup(lat.normalizer(j));
    let jsub = lat.subgroup(j);
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for &x in norm.elements() {
        if coset_of[x] != usize::MAX {
            continue;
        }
        for &y in jsub.elements() {
            coset_of[g.mul(x, y)] = reps.len();
        }
        reps.push(x);
    }
    let degree = reps.len();
    let perm_of = |x: Elem| -> Result<Permutation> {
        Permutation::from_images(reps.iter().map(|&r| coset_of[g.mul(x, r)] as u32).collect())
    };
    let gens = norm
        .generators()
        .iter()
        .map(|&x| perm_of(x))
        .collect::<Result<Vec<_>>>()?;
    let group = FiniteGroup::from_generators_capped(degree, gens, caps.max_group_order)?;
    let image = norm
        .elements()
        .iter()
        .map(|&x| {
            let p = perm_of(x)?;
            group
                .index_of(&p)
                .ok_or_else(|| FbrError::invariant("coset action leaves the generated group"))
        })
        .collect::<Result<Vec<_>>>()?;
    if group.order() * jsub.order() != norm.order() {
        return Err(FbrError::invariant("coset action is not the quotient by J"));
    }
    Ok(Quotient { group, image })
}

/// Builds and checks the bijection `[K/J, φ]_W ↦ [K, φ̃]_G e_[J]`.
pub fn weyl_block_iso(species: &Species<'_>, perfect_class: usize, caps: ResourceCaps) -> Result<WeylBlockIso> {
    let ring = species.ring();
    let g = ring.group();
    let lat = ring.lattice();
    let j = lat.representative(perfect_class);
    if !lat.is_perfect(g, j) {
        return Err(FbrError::input(format!("subgroup class {perfect_class} is not perfect")));
    }
    let comp = super::components(species)
        .into_iter()
        .find(|c| c.perfect_class == perfect_class)
        .ok_or_else(|| FbrError::invariant("perfect class has no component"))?;
    let block = species.block_idempotent(&comp)?;
    let e_j = &block.element;

    let quotient = weyl_quotient(ring, j, caps)?;
    let norm = lat.subgroup(lat.normalizer(j));
    let weyl = FiberedRing::new(quotient.group.clone(), ring.fiber().clone(), caps, ring.exec())?;
    let wg = weyl.group();
    let wlat = weyl.lattice();

    let solvable: Vec<usize> = (0..weyl.rank())
        .filter(|&i| wlat.is_solvable(wg, weyl.basis().orbit(i).subgroup))
        .collect();

    // inflation of a pair of W to a pair of G
    let inflate = |pair: &FiberHom| -> Result<FiberHom> {
        let kbar = wlat.subgroup(pair.domain);
        let elems: Vec<Elem> = norm
            .elements()
            .iter()
            .zip(&quotient.image)
            .filter(|&(_, &w)| kbar.contains(w))
            .map(|(&x, _)| x)
            .collect();
        let k = lat
            .find(&elems)
            .ok_or_else(|| FbrError::invariant("preimage is not a subgroup"))?;
        let values = elems
            .iter()
            .map(|&x| {
                let w = quotient.image[norm.position(x).unwrap()];
                pair.values[kbar.position(w).unwrap()]
            })
            .collect();
        Ok(FiberHom { domain: k, values })
    };

    let mut images = Vec::with_capacity(solvable.len());
    for &i in &solvable {
        images.push(ring.index_of_pair(&inflate(weyl.pair(i))?));
    }
    let image_set: BTreeSet<usize> = images.iter().copied().collect();
    if image_set.len() != images.len() {
        return Err(FbrError::theorem("inflation map is not injective on basis orbits"));
    }
    let target: BTreeSet<usize> = comp.basis_orbits.iter().copied().collect();
    if image_set != target {
        return Err(FbrError::theorem(format!(
            "inflation image {image_set:?} differs from the block basis {target:?}"
        )));
    }

    let position = |w: usize| solvable.iter().position(|&s| s == w);
    let map_integral = |x: &[(usize, i64)]| -> Result<RingElement> {
        let mut terms = Vec::with_capacity(x.len());
        for &(w, c) in x {
            let k = position(w).ok_or_else(|| {
                FbrError::theorem("product of solvable-block basis elements leaves the block")
            })?;
            terms.push((images[k], c));
        }
        Ok(RingElement::from_integers(ring.level(), terms))
    };

    let pairs: Vec<(usize, usize)> = (0..solvable.len())
        .flat_map(|a| (0..solvable.len()).map(move |b| (a, b)))
        .collect();
    let checks = ring.exec().try_map(pairs.len(), |k| {
        let (a, b) = pairs[k];
        let mapped = map_integral(weyl.structure_constants(solvable[a], solvable[b]))?;
        let direct = RingElement::from_integers(
            ring.level(),
            ring.structure_constants(images[a], images[b]).iter().copied(),
        );
        let diff = ring.multiply(&mapped.sub(&direct), e_j)?;
        Ok(diff.is_zero())
    })?;
    if let Some(k) = checks.iter().position(|ok| !ok) {
        return Err(FbrError::theorem(format!(
            "inflation map is not multiplicative on the basis pair {:?}",
            pairs[k]
        )));
    }

    let wspecies = Species::new(&weyl)?;
    let wcomp = super::components(&wspecies)
        .into_iter()
        .find(|c| wlat.representative(c.perfect_class) == wlat.trivial())
        .ok_or_else(|| FbrError::invariant("Weyl group has no solvable component"))?;
    let e_w = wspecies.block_idempotent(&wcomp)?;
    let coeffs: Vec<(usize, i64)> = e_w
        .element
        .terms()
        .iter()
        .map(|(&w, c)| {
            let v = c.as_integer().expect("block idempotents are integral");
            (w, i64::try_from(v).expect("small coefficient"))
        })
        .collect();
    let mapped = ring.multiply(&map_integral(&coeffs)?, e_j)?;
    if mapped != *e_j {
        return Err(FbrError::theorem("inflation does not map e_[1] of W to e_[J]"));
    }

    let rows = solvable
        .iter()
        .zip(&images)
        .map(|(&w, &b)| WeylRow {
            weyl_orbit: weyl.describe(w),
            group_orbit: ring.describe(b),
            weyl_index: w,
            group_index: b,
        })
        .collect();
    Ok(WeylBlockIso {
        perfect_class,
        perfect_order: lat.subgroup(j).order(),
        weyl_order: wg.order(),
        weyl_degree: wg.degree(),
        rows,
        checked_products: pairs.len(),
    })
}
