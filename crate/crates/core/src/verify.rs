//! The acceptance suite: every criterion evaluated exactly over the group
//! catalog, with a deterministic textual report.

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::prime_divisors;
use crate::cyclo::{prime_ideals_above, Cyclotomic};
use crate::error::{FbrError, Result};
use crate::exec::Exec;
use crate::fiber::parse_fiber_spec;
use crate::group::catalog::parse_group_spec;
use crate::group::ResourceCaps;
use crate::ring::{table_of_marks, BurnsideElement, FiberedRing, RingElement};
use crate::species::Species;
use crate::spectrum::{weyl_block_iso, PrimeDescriptor};

pub const CATALOG_GROUPS: [&str; 11] = ["C2", "C4", "V4", "C6", "S3", "D4", "Q8", "A4", "S4", "A5", "S5"];
pub const CATALOG_FIBERS: [u64; 3] = [1, 2, 6];

/// Instances of rank above this are skipped.
pub const MAX_CATALOG_RANK: usize = 60;
/// Up to this rank, pairwise checks are exhaustive.
pub const EXHAUSTIVE_RANK: usize = 15;
pub const SAMPLED_PAIRS: usize = 200;

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub caps: ResourceCaps,
    pub exec: Exec,
    /// `(group spec, fiber spec)` instances for the catalog-wide criteria.
    pub instances: Vec<(String, String)>,
    /// Instances whose nontrivial perfect subgroups are checked by the
    /// Weyl criterion.
    pub weyl_instances: Vec<(String, String)>,
}

impl VerifyConfig {
    /// A run restricted to one instance.
    pub fn single(group: &str, fiber: &str) -> Self {
        let one = vec![(group.to_string(), fiber.to_string())];
        VerifyConfig {
            instances: one.clone(),
            weyl_instances: one,
            ..Self::default()
        }
    }
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            caps: ResourceCaps::default(),
            exec: Exec::default(),
            instances: CATALOG_GROUPS
                .iter()
                .flat_map(|g| CATALOG_FIBERS.iter().map(move |a| (g.to_string(), a.to_string())))
                .collect(),
            weyl_instances: ["A5", "S5"]
                .iter()
                .flat_map(|g| ["1", "2"].map(|a| (g.to_string(), a.to_string())))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub checks: u64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AcceptanceReport {
    pub seed: u64,
    pub instances: Vec<String>,
    pub criteria: Vec<CriterionResult>,
}

impl AcceptanceReport {
    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    /// One line per criterion.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.criteria {
            let _ = writeln!(
                s,
                "criterion {} {}: {} ({} checks) {}",
                c.id,
                c.name,
                if c.passed { "PASS" } else { "FAIL" },
                c.checks,
                c.detail
            );
        }
        s
    }
}

struct Instance {
    label: String,
    ring: FiberedRing,
}

fn build_ring(group: &str, fiber: &str, caps: ResourceCaps, exec: Exec) -> Result<FiberedRing> {
    let g = parse_group_spec(group, caps.max_group_order)?;
    let a = parse_fiber_spec(fiber)?;
    FiberedRing::new(g, a, caps, exec)
}

fn fail(msg: String) -> FbrError {
    FbrError::theorem(msg)
}

/// Exhaustive index pairs, or a seeded sample of them.
fn pair_schedule(rank: usize, rng: &mut ChaCha8Rng) -> (Vec<(usize, usize)>, bool) {
    if rank <= EXHAUSTIVE_RANK {
        let all = (0..rank).flat_map(|a| (0..rank).map(move |b| (a, b))).collect();
        (all, true)
    } else {
        let sample = (0..SAMPLED_PAIRS)
            .map(|_| (rng.gen_range(0..rank), rng.gen_range(0..rank)))
            .collect();
        (sample, false)
    }
}

fn species_isomorphism(instances: &[Instance]) -> Result<(u64, String)> {
    let mut checks = 0;
    for inst in instances {
        let s = Species::new(&inst.ring)?;
        let t = s.table();
        if t.len() != inst.ring.rank() || t.iter().any(|row| row.len() != t.len()) {
            return Err(fail(format!("{}: species table is not square", inst.label)));
        }
        if s.determinant()?.is_zero() {
            return Err(fail(format!("{}: species table is singular", inst.label)));
        }
        let distinct: HashSet<&Vec<Cyclotomic>> = t.iter().collect();
        if distinct.len() != t.len() {
            return Err(fail(format!("{}: repeated species rows", inst.label)));
        }
        checks += 3;
    }
    Ok((checks, format!("{} instances", instances.len())))
}

fn idempotents(instances: &[Instance], seed: u64) -> Result<(u64, String)> {
    let mut checks = 0;
    let mut sampled = 0;
    for (k, inst) in instances.iter().enumerate() {
        let ring = &inst.ring;
        let s = Species::new(ring)?;
        s.precompute_idempotents();
        let r = ring.rank();
        // species of idempotents, exhaustive at every rank
        let ok = ring.exec().all(r * r, |x| {
            let (d, e) = (x / r, x % r);
            let v = s.apply(d, s.idempotent(e));
            if d == e {
                v.is_one()
            } else {
                v.is_zero()
            }
        });
        if !ok {
            return Err(fail(format!("{}: s(e) is not a Kronecker delta", inst.label)));
        }
        checks += (r * r) as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
        let (pairs, exhaustive) = pair_schedule(r, &mut rng);
        if !exhaustive {
            sampled += 1;
        }
        let results = ring.exec().try_map(pairs.len(), |x| {
            let (d, e) = pairs[x];
            let prod = ring.multiply(s.idempotent(d), s.idempotent(e))?;
            Ok(if d == e {
                prod == *s.idempotent(d)
            } else {
                prod.is_zero()
            })
        })?;
        if let Some(x) = results.iter().position(|ok| !ok) {
            return Err(fail(format!(
                "{}: e_d e_d' != δ e_d for pair {:?}",
                inst.label, pairs[x]
            )));
        }
        checks += pairs.len() as u64;
        let mut total = ring.zero();
        for d in 0..r {
            total = total.add(s.idempotent(d));
        }
        if total != ring.one() {
            return Err(fail(format!("{}: idempotents do not sum to 1", inst.label)));
        }
        checks += 1;
    }
    Ok((
        checks,
        format!("{} instances, {} with sampled products", instances.len(), sampled),
    ))
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct C2Golden {
    species_rows: Vec<Vec<i64>>,
    determinant: i64,
    idempotents: Vec<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct S3Golden {
    rank: usize,
    orbits_per_class: Vec<usize>,
}

const C2_GOLDEN: &str = include_str!("../golden/c2_fiber2.json");
const S3_GOLDEN: &str = include_str!("../golden/s3_fiber2.json");

fn parse_golden_rational(s: &str) -> Result<num_rational::BigRational> {
    s.parse()
        .map_err(|_| FbrError::invariant(format!("bad golden rational {s:?}")))
}

fn micro_instances(caps: ResourceCaps, exec: Exec) -> Result<(u64, String)> {
    let golden: C2Golden =
        serde_json::from_str(C2_GOLDEN).map_err(|e| FbrError::invariant(e.to_string()))?;
    let ring = build_ring("C2", "2", caps, exec)?;
    let s = Species::new(&ring)?;
    let rows: Vec<Vec<Cyclotomic>> = golden
        .species_rows
        .iter()
        .map(|row| row.iter().map(|&v| Cyclotomic::from_integer(ring.level(), v)).collect())
        .collect();
    if s.table() != rows.as_slice() {
        return Err(fail("C2, A=2: species rows differ from the golden file".into()));
    }
    if s.determinant()? != Cyclotomic::from_integer(ring.level(), golden.determinant) {
        return Err(fail("C2, A=2: determinant differs from the golden file".into()));
    }
    for (d, coeffs) in golden.idempotents.iter().enumerate() {
        let expected = RingElement::from_terms(
            ring.level(),
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| Ok((i, Cyclotomic::from_rational(ring.level(), parse_golden_rational(c)?))))
                .collect::<Result<Vec<_>>>()?,
        );
        if *s.idempotent(d) != expected {
            return Err(fail(format!("C2, A=2: idempotent {d} differs from the golden file")));
        }
    }
    let golden: S3Golden =
        serde_json::from_str(S3_GOLDEN).map_err(|e| FbrError::invariant(e.to_string()))?;
    let s3 = build_ring("S3", "2", caps, exec)?;
    let per_class: Vec<usize> = (0..s3.lattice().classes().len())
        .map(|c| s3.class_range(c).count())
        .collect();
    if s3.rank() != golden.rank || per_class != golden.orbits_per_class {
        return Err(fail(format!("S3, A=2: rank {} with orbits {per_class:?}", s3.rank())));
    }
    Ok((3 + golden.orbits_per_class.len() as u64 + 2, "C2 with A=2 and S3 with A=2".into()))
}

fn structure_constants(instances: &[Instance]) -> Result<(u64, String)> {
    let mut checks = 0;
    for inst in instances {
        let ring = &inst.ring;
        let s = Species::new(ring)?;
        let r = ring.rank();
        ring.precompute_constants();
        let n = ring.level();
        let ok = ring.exec().all(r * r, |x| {
            let (i, j) = (x / r, x % r);
            let sc = ring.structure_constants(i, j);
            (0..s.len()).all(|d| {
                let t = &s.table()[d];
                let mut lhs = Cyclotomic::zero(n);
                for &(k, c) in sc {
                    lhs.add_scaled_assign(&t[k], c);
                }
                lhs == t[i].mul(&t[j])
            })
        });
        if !ok {
            return Err(fail(format!("{}: a species is not multiplicative", inst.label)));
        }
        checks += (r * r * s.len()) as u64;
        if r <= EXHAUSTIVE_RANK {
            for i in 0..r {
                for j in 0..r {
                    if ring.multiply_basis_with(i, j, true) != ring.structure_constants(i, j) {
                        return Err(fail(format!(
                            "{}: product ({i}, {j}) depends on double coset representatives",
                            inst.label
                        )));
                    }
                }
            }
            checks += (r * r) as u64;
        }
        let marks = table_of_marks(ring.group(), ring.lattice());
        let classes = marks.len();
        for a in 0..classes {
            for b in 0..classes {
                let x = ring.burnside_embed(&BurnsideElement::transitive(classes, a, n));
                let y = ring.burnside_embed(&BurnsideElement::transitive(classes, b, n));
                let prod = ring.multiply(&x, &y)?;
                let proj = ring.burnside_project(&prod);
                if ring.burnside_embed(&proj) != prod {
                    return Err(fail(format!("{}: Burnside products leave the image", inst.label)));
                }
                let got = proj.marks(&marks);
                for (l, m) in got.iter().enumerate() {
                    let expected = Cyclotomic::from_integer(n, (marks[l][a] * marks[l][b]) as i64);
                    if *m != expected {
                        return Err(fail(format!(
                            "{}: marks of [G/H_{a}][G/H_{b}] disagree at class {l}",
                            inst.label
                        )));
                    }
                }
                checks += classes as u64;
            }
        }
    }
    Ok((checks, format!("{} instances", instances.len())))
}

fn spectrum_partitions(instances: &[Instance]) -> Result<(u64, String)> {
    let mut checks = 0;
    let mut ideals_checked = 0;
    for inst in instances {
        let ring = &inst.ring;
        let s = Species::new(ring)?;
        let zero = s.p_equivalence_partition(&PrimeDescriptor::CharZero)?;
        if zero.classes.iter().any(|c| c.len() != 1) {
            return Err(fail(format!("{}: characteristic zero partition is not discrete", inst.label)));
        }
        checks += 1;
        for p in prime_divisors(ring.group().order() as u64) {
            let mut first: Option<Vec<Vec<usize>>> = None;
            for ideal in prime_ideals_above(p, ring.level())? {
                let part = s.p_equivalence_partition(&PrimeDescriptor::CharP { p, ideal })?;
                let regular = (0..s.len()).filter(|&d| s.is_p_regular(d, p).unwrap_or(false)).count();
                if regular != part.classes.len() {
                    return Err(fail(format!(
                        "{}: {} classes at p = {p} but {regular} p-regular orbits",
                        inst.label,
                        part.classes.len()
                    )));
                }
                match &first {
                    None => first = Some(part.classes),
                    Some(f) if *f != part.classes => {
                        return Err(fail(format!(
                            "{}: partition at p = {p} depends on the prime ideal",
                            inst.label
                        )))
                    }
                    _ => {}
                }
                ideals_checked += 1;
                checks += 2;
            }
        }
    }
    Ok((checks, format!("{} instances, {ideals_checked} prime ideals", instances.len())))
}

fn expected_block_count(group: &str) -> Option<usize> {
    match group {
        "A5" | "S5" => Some(2),
        g if CATALOG_GROUPS.contains(&g) => Some(1),
        _ => None,
    }
}

fn blocks(instances: &[Instance], groups: &[String]) -> Result<(u64, String)> {
    let mut checks = 0;
    for (inst, group) in instances.iter().zip(groups) {
        let ring = &inst.ring;
        let s = Species::new(ring)?;
        let perfect = ring.lattice().perfect_subgroup_classes(ring.group()).len();
        let decomposition = s.block_decomposition()?;
        if decomposition.blocks.len() != perfect {
            return Err(fail(format!("{}: block count differs from perfect classes", inst.label)));
        }
        if let Some(e) = expected_block_count(group) {
            if e != perfect {
                return Err(fail(format!("{}: expected {e} blocks, found {perfect}", inst.label)));
            }
        }
        checks += 2 + decomposition.blocks.len() as u64;
    }
    Ok((checks, format!("{} instances", instances.len())))
}

fn block_bases(instances: &[Instance]) -> Result<(u64, String)> {
    let mut checks = 0;
    let mut generators = 0;
    for inst in instances {
        let s = Species::new(&inst.ring)?;
        for block in crate::spectrum::components(&s) {
            let b = s.block_idempotent(&block)?;
            generators += s.block_basis(&b)?.len();
            checks += 1;
        }
    }
    Ok((checks, format!("{generators} basis elements")))
}

fn weyl(instances: &[(String, String)], caps: ResourceCaps, exec: Exec) -> Result<(u64, String)> {
    let mut checks = 0;
    let mut checked = Vec::new();
    for (group, fiber) in instances {
        let ring = build_ring(group, fiber, caps, exec)?;
        let s = Species::new(&ring)?;
        let lat = ring.lattice();
        for j in lat.perfect_subgroup_classes(ring.group()) {
            if lat.representative(j) == lat.trivial() {
                continue;
            }
            let iso = weyl_block_iso(&s, j, caps)?;
            checks += iso.checked_products as u64 + iso.rows.len() as u64 + 1;
            checked.push(format!("{group}, A={fiber}, |J|={}", iso.perfect_order));
        }
    }
    if checked.is_empty() {
        return Ok((0, "no nontrivial perfect subgroup".into()));
    }
    Ok((checks, checked.join("; ")))
}

fn record(id: u8, name: &str, outcome: Result<(u64, String)>) -> CriterionResult {
    match outcome {
        Ok((checks, detail)) => CriterionResult {
            id,
            name: name.into(),
            passed: true,
            checks,
            detail,
        },
        Err(e) => CriterionResult {
            id,
            name: name.into(),
            passed: false,
            checks: 0,
            detail: e.to_string(),
        },
    }
}

/// Criteria 1 to 8.
fn run_criteria(cfg: &VerifyConfig, exec: Exec) -> Result<(Vec<String>, Vec<CriterionResult>)> {
    let mut instances = Vec::new();
    let mut specs = Vec::new();
    for (g, a) in &cfg.instances {
        let ring = build_ring(g, a, cfg.caps, exec)?;
        if ring.rank() > MAX_CATALOG_RANK {
            continue;
        }
        instances.push(Instance {
            label: format!("{g}, A={a}"),
            ring,
        });
        specs.push(g.clone());
    }
    let labels = instances.iter().map(|i| i.label.clone()).collect();
    let results = vec![
        record(1, "species-isomorphism", species_isomorphism(&instances)),
        record(2, "primitive-idempotents", idempotents(&instances, cfg.seed)),
        record(3, "hand-verified-instances", micro_instances(cfg.caps, exec)),
        record(4, "structure-constants", structure_constants(&instances)),
        record(5, "spectrum-partitions", spectrum_partitions(&instances)),
        record(6, "block-decomposition", blocks(&instances, &specs)),
        record(7, "block-bases", block_bases(&instances)),
        record(8, "weyl-isomorphism", weyl(&cfg.weyl_instances, cfg.caps, exec)),
    ];
    Ok((labels, results))
}

/// Runs every criterion. Criterion 9 reruns criteria 1 to 8 with the other
/// execution strategy and compares the rendered reports byte for byte.
pub fn run_acceptance(cfg: &VerifyConfig) -> Result<AcceptanceReport> {
    let (instances, mut criteria) = run_criteria(cfg, cfg.exec)?;
    let first = AcceptanceReport {
        seed: cfg.seed,
        instances: instances.clone(),
        criteria: criteria.clone(),
    }
    .render();
    let other = match cfg.exec {
        Exec::Parallel => Exec::Sequential,
        Exec::Sequential => Exec::Parallel,
    };
    let (_, rerun) = run_criteria(cfg, other)?;
    let second = AcceptanceReport {
        seed: cfg.seed,
        instances: instances.clone(),
        criteria: rerun,
    }
    .render();
    criteria.push(record(
        9,
        "determinism",
        if first == second {
            Ok((1, "rerun report is byte-identical".into()))
        } else {
            Err(fail("rerun report differs".into()))
        },
    ));
    Ok(AcceptanceReport {
        seed: cfg.seed,
        instances,
        criteria,
    })
}
