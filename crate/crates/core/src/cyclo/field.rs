use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::gcd;
use crate::error::{FbrError, Result};

/// The `n`-th cyclotomic polynomial as integer coefficients, lowest degree
/// first, computed by dividing `x^n - 1` by `Φ_d` for the proper divisors `d`.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    assert!(n >= 1, "cyclotomic level must be positive");
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = exact_div_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut q = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        q[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// Precomputed data for `Q(ζ_n)`: the minimal polynomial and the reduced
/// form of every power `ζ^k`, `0 ≤ k < n`.
#[derive(Debug)]
pub struct CyclotomicField {
    n: u64,
    phi: Vec<i64>,
    powers: Vec<Vec<i64>>,
}

impl CyclotomicField {
    fn new(n: u64) -> Self {
        let phi = cyclotomic_polynomial(n);
        let d = phi.len() - 1;
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = vec![0i64; d];
        cur[0] = 1;
        for _ in 0..n {
            powers.push(cur.clone());
            // multiply by ζ and reduce
            let top = cur[d - 1];
            for i in (1..d).rev() {
                cur[i] = cur[i - 1] - top * phi[i];
            }
            cur[0] = -top * phi[0];
        }
        CyclotomicField { n, phi, powers }
    }

    pub fn level(&self) -> u64 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn minimal_polynomial(&self) -> &[i64] {
        &self.phi
    }

    /// Reduced coefficients of `ζ^k` for any integer `k`.
    pub fn power(&self, k: i64) -> &[i64] {
        &self.powers[k.rem_euclid(self.n as i64) as usize]
    }
}

/// Shared field data for level `n`.
pub fn field(n: u64) -> Arc<CyclotomicField> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CyclotomicField>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("cyclotomic field cache poisoned");
    guard
        .entry(n)
        .or_insert_with(|| Arc::new(CyclotomicField::new(n)))
        .clone()
}

/// An element of `Q(ζ_n)` in the basis `1, ζ, .., ζ^{φ(n)-1}`.
#[derive(Clone)]
pub struct Cyclotomic {
    field: Arc<CyclotomicField>,
    coeffs: Vec<BigRational>,
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.field.n == other.field.n && self.coeffs == other.coeffs
    }
}

impl Eq for Cyclotomic {}

impl Hash for Cyclotomic {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.n.hash(state);
        self.coeffs.hash(state);
    }
}

impl Cyclotomic {
    pub fn zero(n: u64) -> Self {
        let field = field(n);
        let d = field.degree();
        Cyclotomic {
            field,
            coeffs: vec![BigRational::zero(); d],
        }
    }

    pub fn one(n: u64) -> Self {
        Self::from_integer(n, 1)
    }

    pub fn from_integer(n: u64, v: i64) -> Self {
        Self::from_rational(n, BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(n: u64, v: BigRational) -> Self {
        let mut x = Self::zero(n);
        x.coeffs[0] = v;
        x
    }

    /// `ζ^k`.
    pub fn zeta_pow(n: u64, k: i64) -> Self {
        let mut counts = vec![0i64; n as usize];
        counts[k.rem_euclid(n as i64) as usize] = 1;
        Self::from_exponent_counts(n, &counts)
    }

    /// `Σ_k counts[k] ζ^k` for `k` in `0..n`.
    pub fn from_exponent_counts(n: u64, counts: &[i64]) -> Self {
        let field = field(n);
        let d = field.degree();
        let mut acc = vec![0i64; d];
        for (k, &c) in counts.iter().enumerate() {
            if c != 0 {
                for (a, &p) in acc.iter_mut().zip(field.power(k as i64)) {
                    *a += c * p;
                }
            }
        }
        Cyclotomic {
            field,
            coeffs: acc
                .into_iter()
                .map(|c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        }
    }

    /// Builds an element from explicit basis coefficients.
    pub fn from_coeffs(n: u64, coeffs: Vec<BigRational>) -> Result<Self> {
        let field = field(n);
        if coeffs.len() != field.degree() {
            return Err(FbrError::input(format!(
                "level {n} needs {} coefficients, got {}",
                field.degree(),
                coeffs.len()
            )));
        }
        Ok(Cyclotomic { field, coeffs })
    }

    pub fn level(&self) -> u64 {
        self.field.n
    }

    pub fn field(&self) -> &CyclotomicField {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then(|| &self.coeffs[0])
    }

    /// True when every basis coefficient has denominator 1, i.e. the value
    /// lies in `Z[ζ]`.
    pub fn is_algebraic_integer_form(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// The value as a rational integer, if it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|r| r.is_integer())
            .map(|r| r.to_integer())
    }

    fn check_level(&self, other: &Self) {
        assert_eq!(
            self.field.n, other.field.n,
            "cyclotomic level mismatch: {} vs {}",
            self.field.n, other.field.n
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_level(other);
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_level(other);
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.check_level(other);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    /// `self += k * other` for a rational integer `k`.
    pub fn add_scaled_assign(&mut self, other: &Self, k: i64) {
        self.check_level(other);
        if k == 0 {
            return;
        }
        let k = BigRational::from_integer(BigInt::from(k));
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a += b * &k;
            }
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_level(other);
        let d = self.field.degree();
        if d == 1 {
            return Cyclotomic {
                field: self.field.clone(),
                coeffs: vec![&self.coeffs[0] * &other.coeffs[0]],
            };
        }
        let mut out = vec![BigRational::zero(); d];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (o, &p) in out.iter_mut().zip(self.field.power((i + j) as i64)) {
                    if p != 0 {
                        *o += &ab * BigInt::from(p);
                    }
                }
            }
        }
        Cyclotomic {
            field: self.field.clone(),
            coeffs: out,
        }
    }

    pub fn scalar_mul(&self, r: &BigRational) -> Self {
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|a| a * r).collect(),
        }
    }

    pub fn scalar_div(&self, r: &BigRational) -> Result<Self> {
        if r.is_zero() {
            return Err(FbrError::input("division of a cyclotomic number by zero"));
        }
        Ok(self.scalar_mul(&r.recip()))
    }

    fn substitute(&self, t: i64) -> Self {
        let d = self.field.degree();
        let mut out = vec![BigRational::zero(); d];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (o, &p) in out.iter_mut().zip(self.field.power(i as i64 * t)) {
                if p != 0 {
                    *o += a * BigInt::from(p);
                }
            }
        }
        Cyclotomic {
            field: self.field.clone(),
            coeffs: out,
        }
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        self.substitute(-1)
    }

    /// The Galois automorphism `σ_t : ζ ↦ ζ^t`, defined for `gcd(t, n) = 1`.
    pub fn galois(&self, t: i64) -> Result<Self> {
        let n = self.field.n;
        if gcd(t.rem_euclid(n as i64) as u64, n) != 1 {
            return Err(FbrError::input(format!("gcd({t}, {n}) != 1")));
        }
        Ok(self.substitute(t))
    }

    /// Field norm to `Q`: the product of all Galois conjugates.
    #[cfg(test)]
    pub(crate) fn norm(&self) -> BigRational {
        let n = self.field.n;
        let mut acc = self.clone();
        for t in 2..n as i64 {
            if gcd(t as u64, n) == 1 {
                acc = acc.mul(&self.substitute(t));
            }
        }
        acc.coeffs[0].clone()
    }

    /// Multiplicative inverse via `x^{-1} = (Π_{σ ≠ 1} σ(x)) / N(x)`.
    /// Used internally for exact elimination over `Q(ζ)`.
    pub(crate) fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.field.n;
        let mut others = Cyclotomic::one(n);
        for t in 2..n as i64 {
            if gcd(t as u64, n) == 1 {
                others = others.mul(&self.substitute(t));
            }
        }
        let norm = self.mul(&others);
        debug_assert!(norm.is_rational());
        Some(others.scalar_mul(&norm.coeffs[0].recip()))
    }

    /// Human form: `1`, `-1`, `z`, `z^2+1`, `1/2*z-3`.
    pub fn to_human(&self) -> String {
        let mut s = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push(if neg { '-' } else { '+' });
            }
            let mono = match i {
                0 => String::new(),
                1 => "z".to_string(),
                k => format!("z^{k}"),
            };
            if i == 0 {
                s.push_str(&a.to_string());
            } else if a.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{a}*{mono}"));
            }
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (n={})", self.to_human(), self.field.n)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_human())
    }
}

fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub(crate) fn parse_rational(s: &str) -> Option<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim().parse::<BigInt>().ok()?, b.trim().parse::<BigInt>().ok()?),
        None => (s.trim().parse::<BigInt>().ok()?, BigInt::one()),
    };
    (!den.is_zero()).then(|| BigRational::new(num, den))
}

#[derive(Serialize, Deserialize)]
struct CyclotomicJson {
    level: u64,
    coeffs: Vec<String>,
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CyclotomicJson {
            level: self.field.n,
            coeffs: self.coeffs.iter().map(rational_string).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = CyclotomicJson::deserialize(deserializer)?;
        if raw.level == 0 {
            return Err(D::Error::custom("level must be positive"));
        }
        let coeffs = raw
            .coeffs
            .iter()
            .map(|s| parse_rational(s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}"))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Cyclotomic::from_coeffs(raw.level, coeffs).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        for n in 1..=30u64 {
            assert_eq!(
                cyclotomic_polynomial(n).len() as u64 - 1,
                crate::arith::euler_phi(n)
            );
        }
    }

    #[test]
    fn field_identities() {
        let z = Cyclotomic::zeta_pow(4, 1);
        let one = Cyclotomic::one(4);
        // (1 + ζ)(1 - ζ) = 1 - ζ² = 2 in Q(ζ_4)
        assert_eq!(one.add(&z).mul(&one.sub(&z)), Cyclotomic::from_integer(4, 2));
        assert_eq!(z.mul(&one), z);
        for n in [1u64, 2, 3, 4, 6, 12] {
            assert!(Cyclotomic::zeta_pow(n, n as i64).is_one());
            assert!(Cyclotomic::zeta_pow(n, 0).is_one());
        }
    }

    #[test]
    fn conjugation_and_galois() {
        let z = Cyclotomic::zeta_pow(4, 1);
        assert_eq!(z.conj(), z.neg());
        assert_eq!(z.galois(3).unwrap(), z.conj());
        assert_eq!(z.galois(1).unwrap(), z);
        assert!(z.galois(2).is_err());
        let r = Cyclotomic::from_rational(12, q(3, 7));
        assert_eq!(r.conj(), r);
        assert_eq!(r.galois(5).unwrap(), r);
        for k in 0..12 {
            let u = Cyclotomic::zeta_pow(12, k);
            assert!(u.mul(&u.conj()).is_one());
            assert_eq!(u.conj().conj(), u);
        }
    }

    #[test]
    fn galois_composes() {
        let x = Cyclotomic::zeta_pow(12, 1).add(&Cyclotomic::from_rational(12, q(1, 3)));
        for s in [1i64, 5, 7, 11] {
            for t in [1i64, 5, 7, 11] {
                let lhs = x.galois(t).unwrap().galois(s).unwrap();
                let rhs = x.galois((s * t) % 12).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn inverse_and_norm() {
        for n in [1u64, 3, 4, 5, 6, 12] {
            let x = Cyclotomic::zeta_pow(n, 1)
                .add(&Cyclotomic::from_integer(n, 2))
                .add(&Cyclotomic::zeta_pow(n, 3));
            let inv = x.inverse().unwrap();
            assert!(x.mul(&inv).is_one(), "n = {n}");
        }
        assert_eq!(Cyclotomic::from_integer(4, 3).norm(), q(9, 1));
        assert!(Cyclotomic::zero(6).inverse().is_none());
    }

    #[test]
    fn human_and_json() {
        let x = Cyclotomic::zeta_pow(4, 1).add(&Cyclotomic::one(4));
        assert_eq!(x.to_human(), "z+1");
        let y = Cyclotomic::from_rational(3, q(-1, 2)).add(&Cyclotomic::zeta_pow(3, 1).neg());
        assert_eq!(y.to_human(), "-z-1/2");
        assert_eq!(Cyclotomic::zero(5).to_human(), "0");
        let json = serde_json::to_string(&y).unwrap();
        assert_eq!(json, r#"{"level":3,"coeffs":["-1/2","-1/1"]}"#);
        let back: Cyclotomic = serde_json::from_str(&json).unwrap();
        assert_eq!(back, y);
    }

    #[test]
    fn scalar_division() {
        let x = Cyclotomic::from_integer(6, 3);
        assert_eq!(x.scalar_div(&q(3, 1)).unwrap(), Cyclotomic::one(6));
        assert!(x.scalar_div(&q(0, 1)).is_err());
    }
}
