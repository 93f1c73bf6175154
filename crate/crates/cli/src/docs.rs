//! The documents emitted by each command, as JSON values and aligned text.

use fbr_core::arith::prime_divisors;
use fbr_core::cyclo::{find_prime_ideal, prime_ideals_above, Cyclotomic};
use fbr_core::group::ResourceCaps;
use fbr_core::ring::{FiberedRing, OrbitDescriptor, RingElement};
use fbr_core::species::Species;
use fbr_core::spectrum::{weyl_block_iso, EquivalencePartition, PrimeDescriptor, WeylBlockIso};
use fbr_core::verify::AcceptanceReport;
use fbr_core::{FbrError, Result};
use serde::Serialize;
use serde_json::Value;

pub struct Output {
    pub json: Value,
    pub table: String,
    /// Nonzero when the document reports a failed check.
    pub exit_code: i32,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("documents serialize")
}

/// Left-aligned columns separated by two spaces.
fn render_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, (c, w)) in cells.iter().zip(&widths).enumerate() {
            if i + 1 == cells.len() {
                s.push_str(c);
            } else {
                s.push_str(&format!("{c:<w$}  "));
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(headers.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Header {
    group: String,
    group_order: usize,
    fiber: Vec<u64>,
    level: u64,
    rank: usize,
}

fn header(ring: &FiberedRing, spec: &str) -> Header {
    Header {
        group: spec.to_string(),
        group_order: ring.group().order(),
        fiber: ring.fiber().invariant_factors().to_vec(),
        level: ring.level(),
        rank: ring.rank(),
    }
}

fn header_line(h: &Header) -> String {
    format!(
        "group {} (order {}), fiber {:?}, level {}, rank {}\n",
        h.group, h.group_order, h.fiber, h.level, h.rank
    )
}

fn with_header<T: Serialize>(h: &Header, body: &T) -> Value {
    let mut v = to_value(h);
    let extra = to_value(body);
    if let (Value::Object(a), Value::Object(b)) = (&mut v, extra) {
        a.extend(b);
    }
    v
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Term {
    index: usize,
    key: String,
    coeff: Cyclotomic,
}

fn terms(ring: &FiberedRing, x: &RingElement) -> Vec<Term> {
    x.terms()
        .iter()
        .map(|(&i, c)| Term {
            index: i,
            key: ring.basis().orbit(i).key.to_string(),
            coeff: c.clone(),
        })
        .collect()
}

fn human(x: &RingElement) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (i, c)) in x.terms().iter().enumerate() {
        let text = c.to_human();
        let (neg, body) = match text.strip_prefix('-') {
            Some(rest) if !rest.contains(['+', '-']) => (true, rest.to_string()),
            _ => (false, text),
        };
        out.push_str(match (k, neg) {
            (0, false) => "",
            (0, true) => "-",
            (_, false) => " + ",
            (_, true) => " - ",
        });
        let simple = !body.contains(['+', '-', '*', 'z']);
        match body.as_str() {
            "1" => out.push_str(&format!("b{i}")),
            _ if simple => out.push_str(&format!("{body}*b{i}")),
            _ => out.push_str(&format!("({body})*b{i}")),
        }
    }
    out
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct BasisRow {
    index: usize,
    #[serde(flatten)]
    orbit: OrbitDescriptor,
}

pub fn basis(ring: &FiberedRing, spec: &str) -> Output {
    let h = header(ring, spec);
    let orbits: Vec<BasisRow> = (0..ring.rank())
        .map(|i| BasisRow {
            index: i,
            orbit: ring.describe(i),
        })
        .collect();
    let rows: Vec<Vec<String>> = orbits
        .iter()
        .map(|r| {
            vec![
                r.index.to_string(),
                r.orbit.key.clone(),
                r.orbit.subgroup_order.to_string(),
                format!("<{}>", r.orbit.subgroup_generators.join(", ")),
                format!("{:?}", r.orbit.hom_images),
                r.orbit.stabilizer_order.to_string(),
                r.orbit.orbit_size.to_string(),
            ]
        })
        .collect();
    let table = header_line(&h)
        + &render_table(
            &["index", "key", "|K|", "generators", "images", "|stab|", "orbit"],
            &rows,
        );
    #[derive(Serialize)]
    struct Body {
        orbits: Vec<BasisRow>,
    }
    Output {
        json: with_header(&h, &Body { orbits }),
        table,
        exit_code: 0,
    }
}

/// Parses `i`, `i:c` terms separated by commas into an element.
pub fn parse_element(ring: &FiberedRing, text: &str) -> Result<RingElement> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (i, c) = match part.split_once(':') {
            Some((i, c)) => (i.trim(), c.trim()),
            None => (part, "1"),
        };
        let i: usize = i
            .parse()
            .map_err(|_| FbrError::input(format!("bad basis index {i:?}")))?;
        let c: i64 = c
            .parse()
            .map_err(|_| FbrError::input(format!("bad coefficient {c:?}")))?;
        if i >= ring.rank() {
            return Err(FbrError::input(format!("basis index {i} out of range (rank {})", ring.rank())));
        }
        out.push((i, c));
    }
    let mut x = ring.zero();
    for (i, c) in out {
        x = x.add(&RingElement::from_integers(ring.level(), [(i, c)]));
    }
    Ok(x)
}

pub fn multiply(ring: &FiberedRing, spec: &str, left: &RingElement, right: &RingElement) -> Result<Output> {
    let h = header(ring, spec);
    let product = ring.multiply(left, right)?;
    #[derive(Serialize)]
    struct Body {
        left: Vec<Term>,
        right: Vec<Term>,
        product: Vec<Term>,
    }
    let table = header_line(&h)
        + &format!(
            "left     {}\nright    {}\nproduct  {}\n",
            human(left),
            human(right),
            human(&product)
        );
    Ok(Output {
        json: with_header(
            &h,
            &Body {
                left: terms(ring, left),
                right: terms(ring, right),
                product: terms(ring, &product),
            },
        ),
        table,
        exit_code: 0,
    })
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct DualRow {
    index: usize,
    key: String,
    subgroup_order: usize,
    subgroup_generators: Vec<String>,
    stabilizer_order: usize,
    character_exponents: Vec<u64>,
}

fn dual_rows(s: &Species<'_>) -> Vec<DualRow> {
    let ring = s.ring();
    (0..s.len())
        .map(|d| {
            let o = s.orbit(d);
            let sub = ring.lattice().subgroup(o.subgroup);
            DualRow {
                index: d,
                key: o.key.to_string(),
                subgroup_order: sub.order(),
                subgroup_generators: sub
                    .generators()
                    .iter()
                    .map(|&x| ring.group().element(x).cycle_string())
                    .collect(),
                stabilizer_order: o.stabilizer_order,
                character_exponents: s.character(d).exponents.clone(),
            }
        })
        .collect()
}

pub fn species(s: &Species<'_>, spec: &str) -> Result<Output> {
    let ring = s.ring();
    let h = header(ring, spec);
    let determinant = s.determinant()?;
    let duals = dual_rows(s);
    let mut headers = vec!["dual".to_string(), "|H|".into(), "|stab|".into()];
    headers.extend((0..ring.rank()).map(|i| format!("b{i}")));
    let rows: Vec<Vec<String>> = duals
        .iter()
        .map(|d| {
            let mut row = vec![d.key.clone(), d.subgroup_order.to_string(), d.stabilizer_order.to_string()];
            row.extend(s.table()[d.index].iter().map(Cyclotomic::to_human));
            row
        })
        .collect();
    let hs: Vec<&str> = headers.iter().map(String::as_str).collect();
    let table = header_line(&h)
        + &render_table(&hs, &rows)
        + &format!("determinant {}\n", determinant.to_human());
    #[derive(Serialize)]
    #[serde(rename_all = "camelCase")]
    struct Body<'a> {
        dual_orbits: Vec<DualRow>,
        table: &'a [Vec<Cyclotomic>],
        determinant: Cyclotomic,
    }
    Ok(Output {
        json: with_header(
            &h,
            &Body {
                dual_orbits: duals,
                table: s.table(),
                determinant,
            },
        ),
        table,
        exit_code: 0,
    })
}

pub fn idempotents(s: &Species<'_>, spec: &str) -> Output {
    let ring = s.ring();
    let h = header(ring, spec);
    s.precompute_idempotents();
    #[derive(Serialize)]
    #[serde(rename_all = "camelCase")]
    struct Row {
        dual_index: usize,
        dual_key: String,
        terms: Vec<Term>,
    }
    let rows: Vec<Row> = (0..s.len())
        .map(|d| Row {
            dual_index: d,
            dual_key: s.orbit(d).key.to_string(),
            terms: terms(ring, s.idempotent(d)),
        })
        .collect();
    let text: Vec<Vec<String>> = (0..s.len())
        .map(|d| vec![s.orbit(d).key.to_string(), human(s.idempotent(d))])
        .collect();
    #[derive(Serialize)]
    struct Body {
        idempotents: Vec<Row>,
    }
    Output {
        json: with_header(&h, &Body { idempotents: rows }),
        table: header_line(&h) + &render_table(&["dual", "idempotent"], &text),
        exit_code: 0,
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct PartitionDoc {
    characteristic: u64,
    ideal_factor: Option<Vec<u64>>,
    classes: Vec<Vec<usize>>,
    regular_representatives: Vec<usize>,
}

impl From<EquivalencePartition> for PartitionDoc {
    fn from(p: EquivalencePartition) -> Self {
        let (characteristic, ideal_factor) = match &p.prime {
            PrimeDescriptor::CharZero => (0, None),
            PrimeDescriptor::CharP { p, ideal } => (*p, Some(ideal.factor.clone())),
        };
        PartitionDoc {
            characteristic,
            ideal_factor,
            classes: p.classes,
            regular_representatives: p.regular_representatives,
        }
    }
}

/// `characteristic = None`: zero and the least prime ideal above every
/// prime divisor of `|G|`; `Some(0)`: zero only; `Some(p)`: every prime
/// ideal above `p`.
pub fn spectrum(s: &Species<'_>, spec: &str, characteristic: Option<u64>) -> Result<Output> {
    let ring = s.ring();
    let h = header(ring, spec);
    let n = ring.level();
    let primes: Vec<PrimeDescriptor> = match characteristic {
        Some(0) => vec![PrimeDescriptor::CharZero],
        Some(p) => prime_ideals_above(p, n)?
            .into_iter()
            .map(|ideal| PrimeDescriptor::CharP { p, ideal })
            .collect(),
        None => {
            let mut v = vec![PrimeDescriptor::CharZero];
            for p in prime_divisors(ring.group().order() as u64) {
                v.push(PrimeDescriptor::CharP {
                    p,
                    ideal: find_prime_ideal(p, n)?,
                });
            }
            v
        }
    };
    let partitions: Vec<PartitionDoc> = primes
        .iter()
        .map(|prime| s.p_equivalence_partition(prime).map(PartitionDoc::from))
        .collect::<Result<_>>()?;
    let keys = |class: &[usize]| {
        class
            .iter()
            .map(|&d| s.orbit(d).key.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut table = header_line(&h);
    for p in &partitions {
        match &p.ideal_factor {
            None => table.push_str("characteristic 0\n"),
            Some(f) => table.push_str(&format!("characteristic {}, factor {:?}\n", p.characteristic, f)),
        }
        let rows: Vec<Vec<String>> = p
            .classes
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let rep = p
                    .regular_representatives
                    .get(i)
                    .map(|&d| s.orbit(d).key.to_string())
                    .unwrap_or_else(|| "-".into());
                vec![i.to_string(), rep, keys(c)]
            })
            .collect();
        table.push_str(&render_table(&["class", "regular", "dual orbits"], &rows));
    }
    #[derive(Serialize)]
    struct Body {
        partitions: Vec<PartitionDoc>,
    }
    Ok(Output {
        json: with_header(&h, &Body { partitions }),
        table,
        exit_code: 0,
    })
}

pub fn blocks(s: &Species<'_>, spec: &str) -> Result<Output> {
    let ring = s.ring();
    let h = header(ring, spec);
    let decomposition = s.block_decomposition()?;
    #[derive(Serialize)]
    #[serde(rename_all = "camelCase")]
    struct BlockDoc {
        perfect_class: usize,
        perfect_order: usize,
        perfect_generators: Vec<String>,
        dual_orbits: Vec<usize>,
        basis_orbits: Vec<usize>,
        idempotent: Vec<Term>,
        basis: Vec<Vec<Term>>,
    }
    let lat = ring.lattice();
    let docs: Vec<BlockDoc> = decomposition
        .blocks
        .iter()
        .zip(&decomposition.bases)
        .map(|(b, basis)| {
            let sub = lat.subgroup(b.component.perfect_subgroup);
            BlockDoc {
                perfect_class: b.component.perfect_class,
                perfect_order: sub.order(),
                perfect_generators: sub
                    .generators()
                    .iter()
                    .map(|&x| ring.group().element(x).cycle_string())
                    .collect(),
                dual_orbits: b.component.dual_orbits.clone(),
                basis_orbits: b.component.basis_orbits.clone(),
                idempotent: terms(ring, &b.element),
                basis: basis.iter().map(|x| terms(ring, x)).collect(),
            }
        })
        .collect();
    let mut table = header_line(&h) + &format!("{} blocks\n", docs.len());
    for (b, block) in docs.iter().zip(&decomposition.blocks) {
        table.push_str(&format!(
            "J of order {} (class {}): {} basis orbits, idempotent {}\n",
            b.perfect_order,
            b.perfect_class,
            b.basis_orbits.len(),
            human(&block.element)
        ));
    }
    #[derive(Serialize)]
    struct Body {
        blocks: Vec<BlockDoc>,
    }
    Ok(Output {
        json: with_header(&h, &Body { blocks: docs }),
        table,
        exit_code: 0,
    })
}

/// Resolves `--perfect` to a class of perfect subgroups: a class index,
/// or a group spec matched by order.
pub fn resolve_perfect(ring: &FiberedRing, text: &str, max_order: usize) -> Result<usize> {
    let lat = ring.lattice();
    let perfect = lat.perfect_subgroup_classes(ring.group());
    if let Some(c) = text.strip_prefix('#') {
        let c: usize = c.parse().map_err(|_| FbrError::input(format!("bad class index {c:?}")))?;
        return perfect
            .contains(&c)
            .then_some(c)
            .ok_or_else(|| FbrError::input(format!("class {c} is not a perfect subgroup class")));
    }
    let order = if text == "1" {
        1
    } else {
        fbr_core::group::catalog::parse_group_spec(text, max_order)?.order()
    };
    let matches: Vec<usize> = perfect
        .into_iter()
        .filter(|&c| lat.subgroup(lat.representative(c)).order() == order)
        .collect();
    match matches.as_slice() {
        [c] => Ok(*c),
        [] => Err(FbrError::input(format!("no perfect subgroup of order {order}"))),
        _ => Err(FbrError::input(format!(
            "several perfect classes of order {order}; pass #<class> instead"
        ))),
    }
}

pub fn weyl(s: &Species<'_>, spec: &str, perfect_class: usize, caps: ResourceCaps) -> Result<Output> {
    let ring = s.ring();
    let h = header(ring, spec);
    let iso: WeylBlockIso = weyl_block_iso(s, perfect_class, caps)?;
    let rows: Vec<Vec<String>> = iso
        .rows
        .iter()
        .map(|r| {
            vec![
                r.weyl_orbit.key.clone(),
                r.weyl_orbit.subgroup_order.to_string(),
                r.group_orbit.key.clone(),
                r.group_orbit.subgroup_order.to_string(),
                format!("{:?}", r.group_orbit.hom_images),
            ]
        })
        .collect();
    let table = header_line(&h)
        + &format!(
            "J of order {}, W of order {} acting on {} points\n",
            iso.perfect_order, iso.weyl_order, iso.weyl_degree
        )
        + &render_table(&["W key", "|K/J|", "G key", "|K|", "images"], &rows)
        + &format!("verified: bijective, multiplicative on {} products\n", iso.checked_products);
    #[derive(Serialize)]
    struct Body<'a> {
        weyl: &'a WeylBlockIso,
        verdict: &'static str,
    }
    Ok(Output {
        json: with_header(
            &h,
            &Body {
                weyl: &iso,
                verdict: "verified",
            },
        ),
        table,
        exit_code: 0,
    })
}

pub fn verify(report: &AcceptanceReport) -> Output {
    #[derive(Serialize)]
    #[serde(rename_all = "camelCase")]
    struct Doc<'a> {
        #[serde(flatten)]
        report: &'a AcceptanceReport,
        all_passed: bool,
    }
    let passed = report.all_passed();
    Output {
        json: to_value(&Doc {
            report,
            all_passed: passed,
        }),
        table: report.render(),
        exit_code: if passed { 0 } else { 3 },
    }
}
