use std::fmt;

use crate::error::{FbrError, Result};

/// A permutation of the points `{0, .., n-1}` stored as its image array.
///
/// Points are 0-based internally; cycle notation (parsing and display)
/// is 1-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(FbrError::input(format!(
                    "image array {images:?} is not a bijection on {n} points"
                )));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// Parses 1-based cycle notation such as `(1 2 3)(4 5)`. The empty
    /// string and `()` both denote the identity.
    pub fn from_cycles(degree: usize, text: &str) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut seen = vec![false; degree];
        let bytes = text.as_bytes();
        let mut pos = 0;
        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };
        skip_ws(&mut pos);
        while pos < bytes.len() {
            if bytes[pos] != b'(' {
                return Err(FbrError::Parse {
                    position: pos,
                    message: format!("expected '(' in cycle string {text:?}"),
                });
            }
            pos += 1;
            let mut cycle: Vec<usize> = Vec::new();
            loop {
                skip_ws(&mut pos);
                if pos >= bytes.len() {
                    return Err(FbrError::Parse {
                        position: pos,
                        message: "unterminated cycle".into(),
                    });
                }
                if bytes[pos] == b')' {
                    pos += 1;
                    break;
                }
                if bytes[pos] == b',' {
                    pos += 1;
                    continue;
                }
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if start == pos {
                    return Err(FbrError::Parse {
                        position: pos,
                        message: format!("unexpected character {:?}", bytes[pos] as char),
                    });
                }
                let point: usize = text[start..pos].parse().map_err(|_| FbrError::Parse {
                    position: start,
                    message: "point index out of range".into(),
                })?;
                if point == 0 || point > degree {
                    return Err(FbrError::Parse {
                        position: start,
                        message: format!("point {point} outside 1..={degree}"),
                    });
                }
                cycle.push(point - 1);
            }
            for &p in &cycle {
                if seen[p] {
                    return Err(FbrError::input(format!(
                        "point {} occurs twice in {text:?}; cycles must be disjoint",
                        p + 1
                    )));
                }
                seen[p] = true;
            }
            for (i, &p) in cycle.iter().enumerate() {
                images[p] = cycle[(i + 1) % cycle.len()] as u32;
            }
            skip_ws(&mut pos);
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    /// `self * other`, acting on the left: `(self * other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: other.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.apply(start) == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    /// 1-based cycle string; the identity renders as `()`.
    pub fn cycle_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        let mut s = String::new();
        for c in cycles {
            s.push('(');
            let parts: Vec<String> = c.iter().map(|p| (p + 1).to_string()).collect();
            s.push_str(&parts.join(" "));
            s.push(')');
        }
        s
    }

    pub fn order(&self) -> usize {
        self.cycles()
            .iter()
            .fold(1usize, |acc, c| num_integer::lcm(acc, c.len()))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycle_string())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycle_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles_round_trip() {
        let p = Permutation::from_cycles(5, "(1 2 3)(4 5)").unwrap();
        assert_eq!(p.images(), &[1, 2, 0, 4, 3]);
        assert_eq!(p.cycle_string(), "(1 2 3)(4 5)");
        assert_eq!(p.order(), 6);
        assert_eq!(Permutation::from_cycles(3, "").unwrap(), Permutation::identity(3));
    }

    #[test]
    fn composition_acts_right_to_left() {
        let a = Permutation::from_cycles(3, "(1 2)").unwrap();
        let b = Permutation::from_cycles(3, "(2 3)").unwrap();
        // a(b(1)) = a(1) = 2, a(b(2)) = a(3) = 3, a(b(3)) = a(2) = 1
        assert_eq!(a.compose(&b).cycle_string(), "(1 2 3)");
        assert!(a.compose(&a.inverse()).is_identity());
    }

    #[test]
    fn malformed_input_is_rejected() {
        assert!(Permutation::from_cycles(3, "(1 4)").is_err());
        assert!(Permutation::from_cycles(3, "(1 2)(2 3)").is_err());
        assert!(Permutation::from_cycles(3, "(1 2").is_err());
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
    }
}
