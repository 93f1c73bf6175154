use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, prime_divisors};
use crate::error::{FbrError, Result};

/// Packed index of an element of a [`FiniteAbelianGroup`] (mixed radix over
/// the invariant factors).
pub type AbelianCode = u32;

const MAX_FIBER_ORDER: u64 = 1 << 20;

/// A finite abelian group `C_{d1} × .. × C_{dk}` with `d1 | d2 | .. | dk`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
}

/// An element of a [`FiniteAbelianGroup`] as its exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AbelianElement {
    pub exponents: Vec<u64>,
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        FiniteAbelianGroup { factors: vec![] }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::from_cyclic_factors(&[n]).expect("positive order")
    }

    /// Normalizes an arbitrary list of cyclic orders into invariant factors
    /// by splitting into primary parts and recombining.
    pub fn from_cyclic_factors(orders: &[u64]) -> Result<Self> {
        if orders.contains(&0) {
            return Err(FbrError::input("cyclic factor orders must be positive"));
        }
        let total = orders.iter().try_fold(1u64, |acc, &d| acc.checked_mul(d));
        match total {
            Some(t) if t <= MAX_FIBER_ORDER => {}
            _ => return Err(FbrError::resource("fiber group is too large")),
        }
        let mut primary: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for &d in orders {
            for p in prime_divisors(d) {
                primary.entry(p).or_default().push(crate::arith::p_part(d as usize, p as usize) as u64);
            }
        }
        let len = primary.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1u64; len];
        for powers in primary.values_mut() {
            powers.sort_unstable();
            // align largest powers with the last factor
            for (slot, &q) in factors.iter_mut().rev().zip(powers.iter().rev()) {
                *slot *= q;
            }
        }
        Ok(FiniteAbelianGroup { factors })
    }

    /// Accepts factors that must already form a divisibility chain.
    pub fn from_invariant_factors(factors: Vec<u64>) -> Result<Self> {
        if factors.iter().any(|&d| d < 2) {
            return Err(FbrError::input("invariant factors must be at least 2"));
        }
        if factors.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(FbrError::input(format!(
                "{factors:?} is not a divisibility chain"
            )));
        }
        Self::from_cyclic_factors(&factors)
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn zero(&self) -> AbelianCode {
        0
    }

    pub fn encode(&self, e: &AbelianElement) -> AbelianCode {
        let mut code = 0u64;
        for (x, d) in e.exponents.iter().zip(&self.factors).rev() {
            code = code * d + x % d;
        }
        code as AbelianCode
    }

    pub fn decode(&self, code: AbelianCode) -> AbelianElement {
        let mut c = code as u64;
        let exponents = self
            .factors
            .iter()
            .map(|d| {
                let x = c % d;
                c /= d;
                x
            })
            .collect();
        AbelianElement { exponents }
    }

    pub fn add(&self, a: AbelianCode, b: AbelianCode) -> AbelianCode {
        let (mut x, mut y) = (a as u64, b as u64);
        let mut code = 0u64;
        let mut radix = 1u64;
        for &d in &self.factors {
            let s = (x % d + y % d) % d;
            x /= d;
            y /= d;
            code += s * radix;
            radix *= d;
        }
        code as AbelianCode
    }

    pub fn neg(&self, a: AbelianCode) -> AbelianCode {
        let e = self.decode(a);
        self.encode(&AbelianElement {
            exponents: e
                .exponents
                .iter()
                .zip(&self.factors)
                .map(|(x, d)| (d - x) % d)
                .collect(),
        })
    }

    pub fn scale(&self, a: AbelianCode, k: u64) -> AbelianCode {
        let e = self.decode(a);
        self.encode(&AbelianElement {
            exponents: e
                .exponents
                .iter()
                .zip(&self.factors)
                .map(|(x, d)| x * (k % d) % d)
                .collect(),
        })
    }

    pub fn element_order(&self, a: AbelianCode) -> u64 {
        let e = self.decode(a);
        e.exponents
            .iter()
            .zip(&self.factors)
            .fold(1, |acc, (x, d)| num_integer::lcm(acc, d / gcd(*x, *d)))
    }

    pub fn elements(&self) -> impl Iterator<Item = AbelianCode> {
        0..self.order() as AbelianCode
    }

    /// `Tor_n(A)` as an abstract group with its embedding into `A`.
    pub fn tor_n(&self, n: u64) -> TorsionSubgroup {
        let mut factors = Vec::new();
        let mut embedding = Vec::new();
        for (i, &d) in self.factors.iter().enumerate() {
            let g = gcd(d, n);
            if g > 1 {
                factors.push(g);
                embedding.push((i, d / g));
            }
        }
        TorsionSubgroup {
            group: FiniteAbelianGroup { factors },
            ambient: self.clone(),
            embedding,
        }
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| d.to_string()).collect();
        f.write_str(&parts.join("x"))
    }
}

/// `Tor_n(A) = Π C_{gcd(d_i, n)}` embedded componentwise by
/// `a_i ↦ (d_i / gcd(d_i, n)) a_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionSubgroup {
    pub group: FiniteAbelianGroup,
    pub ambient: FiniteAbelianGroup,
    /// `(component of A, multiplier)` for each factor of `group`.
    pub embedding: Vec<(usize, u64)>,
}

impl TorsionSubgroup {
    pub fn embed(&self, a: AbelianCode) -> AbelianCode {
        let e = self.group.decode(a);
        let mut out = vec![0u64; self.ambient.rank()];
        for (x, &(i, m)) in e.exponents.iter().zip(&self.embedding) {
            out[i] = x * m;
        }
        self.ambient.encode(&AbelianElement { exponents: out })
    }
}

/// Parses `A=d1xd2x..`, `d1xd2`, `1`, `A=1` or `trivial`.
pub fn parse_fiber_spec(spec: &str) -> Result<FiniteAbelianGroup> {
    let s = spec.trim();
    let body = s.strip_prefix("A=").unwrap_or(s);
    if body == "trivial" || body == "1" {
        return Ok(FiniteAbelianGroup::trivial());
    }
    let offset = s.len() - body.len();
    let mut orders = Vec::new();
    let mut pos = offset;
    for part in body.split('x') {
        let v: u64 = part.trim().parse().map_err(|_| FbrError::Parse {
            position: pos,
            message: format!("expected a positive integer in fiber spec {spec:?}"),
        })?;
        if v == 0 {
            return Err(FbrError::Parse {
                position: pos,
                message: "cyclic factor of order 0".into(),
            });
        }
        orders.push(v);
        pos += part.len() + 1;
    }
    FiniteAbelianGroup::from_cyclic_factors(&orders)
}
