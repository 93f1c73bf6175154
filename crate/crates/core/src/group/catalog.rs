//! Named groups and the textual group grammar:
//! `C<n>`, `D<n>` (dihedral of order `2n`), `S<n>`, `A<n>`, `Q8`, `V4`, or
//! `perm:<degree>:<cycles>;<cycles>;...`.

use super::finite::FiniteGroup;
use super::perm::Permutation;
use crate::error::{FbrError, Result};

fn cyc(n: usize, s: &str) -> Permutation {
    Permutation::from_cycles(n, s).expect("catalog permutations are well formed")
}

fn cycle_1_to(n: usize, from: usize) -> String {
    let pts: Vec<String> = (from..=n).map(|i| i.to_string()).collect();
    format!("({})", pts.join(" "))
}

pub fn cyclic(n: usize) -> Vec<Permutation> {
    if n <= 1 {
        return vec![];
    }
    vec![cyc(n, &cycle_1_to(n, 1))]
}

pub fn dihedral(n: usize) -> (usize, Vec<Permutation>) {
    match n {
        0 | 1 => (2, cyclic(2)),
        2 => (4, klein()),
        _ => {
            let rot = cyc(n, &cycle_1_to(n, 1));
            let mut refl = String::new();
            for i in 2..=n.div_ceil(2) {
                let j = n + 2 - i;
                if i < j {
                    refl.push_str(&format!("({i} {j})"));
                }
            }
            (n, vec![rot, cyc(n, &refl)])
        }
    }
}

pub fn symmetric(n: usize) -> Vec<Permutation> {
    if n <= 1 {
        return vec![];
    }
    if n == 2 {
        return vec![cyc(2, "(1 2)")];
    }
    vec![cyc(n, &cycle_1_to(n, 1)), cyc(n, "(1 2)")]
}

pub fn alternating(n: usize) -> Vec<Permutation> {
    (1..=n.saturating_sub(2))
        .map(|i| cyc(n, &format!("({} {} {})", i, i + 1, i + 2)))
        .collect()
}

pub fn klein() -> Vec<Permutation> {
    vec![cyc(4, "(1 2)(3 4)"), cyc(4, "(1 3)(2 4)")]
}

/// Regular representation of the quaternion group on 8 points.
pub fn quaternion() -> Vec<Permutation> {
    vec![
        cyc(8, "(1 2 3 4)(5 6 7 8)"),
        cyc(8, "(1 5 3 7)(2 8 4 6)"),
    ]
}

fn parse_index(spec: &str, offset: usize) -> Result<usize> {
    let digits = &spec[offset..];
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(FbrError::Parse {
            position: offset,
            message: format!("expected a positive integer in group spec {spec:?}"),
        });
    }
    let n: usize = digits.parse().map_err(|_| FbrError::Parse {
        position: offset,
        message: "integer out of range".into(),
    })?;
    if n == 0 {
        return Err(FbrError::Parse {
            position: offset,
            message: "index must be at least 1".into(),
        });
    }
    Ok(n)
}

/// Parses a group spec and closes the generators, refusing groups larger
/// than `max_order`.
pub fn parse_group_spec(spec: &str, max_order: usize) -> Result<FiniteGroup> {
    let spec = spec.trim();
    let (degree, gens) = if let Some(rest) = spec.strip_prefix("perm:") {
        let colon = rest.find(':').ok_or(FbrError::Parse {
            position: 5,
            message: "expected perm:<degree>:<generators>".into(),
        })?;
        let degree = parse_index(&rest[..colon], 0).map_err(|_| FbrError::Parse {
            position: 5,
            message: "degree must be a positive integer".into(),
        })?;
        let body = &rest[colon + 1..];
        let mut gens = Vec::new();
        let mut offset = 6 + colon;
        for part in body.split(';') {
            if !part.trim().is_empty() {
                gens.push(Permutation::from_cycles(degree, part).map_err(|e| match e {
                    FbrError::Parse { position, message } => FbrError::Parse {
                        position: position + offset,
                        message,
                    },
                    other => other,
                })?);
            }
            offset += part.len() + 1;
        }
        (degree, gens)
    } else {
        match spec {
            "Q8" => (8, quaternion()),
            "V4" => (4, klein()),
            _ => {
                let kind = spec.chars().next().ok_or(FbrError::Parse {
                    position: 0,
                    message: "empty group spec".into(),
                })?;
                if !kind.is_ascii() {
                    return Err(FbrError::Parse {
                        position: 0,
                        message: format!("unknown group family {kind:?}"),
                    });
                }
                let n = parse_index(spec, 1)?;
                match kind {
                    'C' => (n, cyclic(n)),
                    'D' => dihedral(n),
                    'S' => (n, symmetric(n)),
                    'A' => (n.max(1), alternating(n)),
                    _ => {
                        return Err(FbrError::Parse {
                            position: 0,
                            message: format!("unknown group family {kind:?}"),
                        })
                    }
                }
            }
        }
    };
    FiniteGroup::from_generators_capped(degree, gens, max_order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_orders() {
        let cases = [
            ("C1", 1),
            ("C2", 2),
            ("C4", 4),
            ("C6", 6),
            ("V4", 4),
            ("D4", 8),
            ("D3", 6),
            ("Q8", 8),
            ("S3", 6),
            ("A4", 12),
            ("S4", 24),
            ("A5", 60),
            ("S5", 120),
        ];
        for (s, ord) in cases {
            assert_eq!(parse_group_spec(s, 10_000).unwrap().order(), ord, "{s}");
        }
    }

    #[test]
    fn perm_spec() {
        let g = parse_group_spec("perm:5:(1 2 3 4 5);(1 2)", 10_000).unwrap();
        assert_eq!(g.order(), 120);
        let t = parse_group_spec("perm:3:", 10_000).unwrap();
        assert_eq!(t.order(), 1);
    }

    #[test]
    fn q8_is_quaternion() {
        let g = parse_group_spec("Q8", 10_000).unwrap();
        // exactly one involution
        let involutions = (0..g.order()).filter(|&x| g.element_order(x) == 2).count();
        assert_eq!(involutions, 1);
        assert!(!g.is_abelian());
    }

    #[test]
    fn parse_errors_carry_positions() {
        match parse_group_spec("perm:3:(1 2);(1 5)", 10_000) {
            Err(FbrError::Parse { position, .. }) => assert_eq!(position, 16),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_group_spec("X3", 10_000), Err(FbrError::Parse { .. })));
        assert!(matches!(parse_group_spec("S", 10_000), Err(FbrError::Parse { .. })));
        assert!(matches!(parse_group_spec("S8", 10_000), Err(FbrError::Resource(_))));
    }
}
