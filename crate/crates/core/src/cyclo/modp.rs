//! Polynomials over `F_p`, factorization of cyclotomic polynomials modulo
//! `p`, and reduction of cyclotomic numbers modulo a prime above `p`.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::field::{cyclotomic_polynomial, Cyclotomic};
use crate::arith::{is_prime, mod_inverse};
use crate::error::{FbrError, Result};

/// A polynomial over `F_p`, lowest degree first, without trailing zeros.
pub type PolyModP = Vec<u64>;

fn trim(mut a: PolyModP) -> PolyModP {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn poly_from_integers(coeffs: &[i64], p: u64) -> PolyModP {
    trim(coeffs.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect())
}

fn poly_add(a: &[u64], b: &[u64], p: u64) -> PolyModP {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

pub fn poly_sub(a: &[u64], b: &[u64], p: u64) -> PolyModP {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect(),
    )
}

pub fn poly_mul(a: &[u64], b: &[u64], p: u64) -> PolyModP {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

/// Quotient and remainder; `b` must be nonzero.
pub fn poly_divrem(a: &[u64], b: &[u64], p: u64) -> (PolyModP, PolyModP) {
    let b = trim(b.to_vec());
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut rem = trim(a.to_vec());
    let db = b.len() - 1;
    let lead_inv = mod_inverse(b[db] as i64, p as i64).expect("p prime") as u64;
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let mut q = vec![0u64; rem.len() - db];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = rem[rem.len() - 1] * lead_inv % p;
        q[shift] = c;
        for (j, &bj) in b.iter().enumerate() {
            rem[shift + j] = (rem[shift + j] + p - c * bj % p) % p;
        }
        rem = trim(rem);
    }
    (trim(q), rem)
}

pub fn poly_rem(a: &[u64], b: &[u64], p: u64) -> PolyModP {
    poly_divrem(a, b, p).1
}

pub fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> PolyModP {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    make_monic(a, p)
}

fn make_monic(a: PolyModP, p: u64) -> PolyModP {
    match a.last() {
        None => a,
        Some(&l) => {
            let inv = mod_inverse(l as i64, p as i64).expect("p prime") as u64;
            a.into_iter().map(|c| c * inv % p).collect()
        }
    }
}

fn poly_powmod(base: &[u64], mut e: u64, modulus: &[u64], p: u64) -> PolyModP {
    let mut result = vec![1u64];
    let mut b = poly_rem(base, modulus, p);
    while e > 0 {
        if e & 1 == 1 {
            result = poly_rem(&poly_mul(&result, &b, p), modulus, p);
        }
        b = poly_rem(&poly_mul(&b, &b, p), modulus, p);
        e >>= 1;
    }
    result
}

/// Distinct-degree factorization of a squarefree monic polynomial: pairs
/// `(d, g_d)` where `g_d` is the product of all irreducible factors of
/// degree `d`.
pub fn distinct_degree_factorization(f: &[u64], p: u64) -> Vec<(usize, PolyModP)> {
    let mut out = Vec::new();
    let mut rest = make_monic(trim(f.to_vec()), p);
    let x = vec![0u64, 1];
    let mut h = x.clone();
    let mut d = 0;
    while rest.len() > 1 {
        d += 1;
        if 2 * d > rest.len() - 1 {
            let deg = rest.len() - 1;
            out.push((deg, rest));
            break;
        }
        h = poly_powmod(&h, p, &rest, p);
        let g = poly_gcd(&rest, &poly_sub(&h, &x, p), p);
        if g.len() > 1 {
            rest = poly_divrem(&rest, &g, p).0;
            h = poly_rem(&h, &rest, p);
            out.push((d, g));
        }
    }
    out
}

/// Balanced representative of `c` in `(-p/2, p/2]`.
fn balanced(c: u64, p: u64) -> i64 {
    if c > p / 2 {
        c as i64 - p as i64
    } else {
        c as i64
    }
}

/// Graded lexicographic order on monic polynomials: by degree, then by the
/// coefficients from `x^{d-1}` down to `x^0` read as balanced residues.
pub fn graded_lex_cmp(a: &[u64], b: &[u64], p: u64) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        for i in (0..a.len()).rev() {
            let o = balanced(a[i], p).cmp(&balanced(b[i], p));
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    })
}

fn monic_of_degree(d: usize, p: u64) -> impl Iterator<Item = PolyModP> {
    let count = p.pow(d as u32);
    (0..count).map(move |mut k| {
        let mut v = vec![0u64; d + 1];
        v[d] = 1;
        for c in v.iter_mut().take(d) {
            *c = k % p;
            k /= p;
        }
        v
    })
}

fn poly_derivative(a: &[u64], p: u64) -> PolyModP {
    trim(a.iter().enumerate().skip(1).map(|(i, &c)| (i as u64 % p) * c % p).collect())
}

/// `f(x^{1/p})` for `f` with `f' = 0`, using `c^p = c` on `F_p`.
fn poly_pth_root(a: &[u64], p: u64) -> PolyModP {
    a.iter().step_by(p as usize).copied().collect()
}

/// Splits a squarefree product of irreducibles of degree `d` by the
/// Cantor-Zassenhaus test, trying witnesses in a fixed order.
fn equal_degree_split(f: PolyModP, d: usize, p: u64, out: &mut Vec<PolyModP>) {
    if f.len() - 1 == d {
        out.push(f);
        return;
    }
    let witnesses = (1..).flat_map(|deg| monic_of_degree(deg, p));
    for a in witnesses {
        let a = poly_rem(&a, &f, p);
        if a.len() <= 1 {
            continue;
        }
        let t = if p == 2 {
            // trace map: a + a^2 + ... + a^{2^{d-1}}
            let mut acc = a.clone();
            let mut sq = a;
            for _ in 1..d {
                sq = poly_powmod(&sq, 2, &f, p);
                acc = poly_add(&acc, &sq, p);
            }
            acc
        } else {
            // a^{(p^d - 1)/2} = prod_i (a^{p^i})^{(p-1)/2}
            let mut acc = vec![1u64];
            let mut frob = a;
            for _ in 0..d {
                acc = poly_rem(&poly_mul(&acc, &poly_powmod(&frob, (p - 1) / 2, &f, p), p), &f, p);
                frob = poly_powmod(&frob, p, &f, p);
            }
            poly_sub(&acc, &[1], p)
        };
        let g = poly_gcd(&f, &t, p);
        if g.len() > 1 && g.len() < f.len() {
            let q = make_monic(poly_divrem(&f, &g, p).0, p);
            equal_degree_split(g, d, p, out);
            equal_degree_split(q, d, p, out);
            return;
        }
    }
}

/// Distinct irreducible factors of a monic `f` of positive degree.
fn distinct_factors(f: PolyModP, p: u64, out: &mut Vec<PolyModP>) {
    if f.len() <= 1 {
        return;
    }
    let df = poly_derivative(&f, p);
    if df.is_empty() {
        return distinct_factors(poly_pth_root(&f, p), p, out);
    }
    let g = make_monic(poly_gcd(&f, &df, p), p);
    let squarefree = make_monic(poly_divrem(&f, &g, p).0, p);
    for (d, part) in distinct_degree_factorization(&squarefree, p) {
        equal_degree_split(make_monic(part, p), d, p, out);
    }
    distinct_factors(g, p, out);
}

/// All distinct monic irreducible factors of `f` over `F_p`, sorted in
/// graded lexicographic order.
pub fn irreducible_factors(f: &[u64], p: u64) -> Vec<PolyModP> {
    let mut factors = Vec::new();
    distinct_factors(make_monic(trim(f.to_vec()), p), p, &mut factors);
    factors.sort_by(|a, b| graded_lex_cmp(a, b, p));
    factors.dedup();
    factors
}

/// The data of a prime ideal of `Z[ζ_n]` above `p`: the ideal
/// `(p, factor(ζ))` for a monic irreducible factor of `Φ_n` modulo `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeIdealData {
    pub p: u64,
    pub level: u64,
    pub factor: PolyModP,
}

impl PrimeIdealData {
    pub fn degree(&self) -> usize {
        self.factor.len() - 1
    }

    /// Size of the residue field.
    pub fn residue_field_order(&self) -> u64 {
        self.p.pow(self.degree() as u32)
    }
}

/// Every prime ideal above `p` in `Z[ζ_n]`, in graded lexicographic order
/// of the factors.
pub fn prime_ideals_above(p: u64, n: u64) -> Result<Vec<PrimeIdealData>> {
    if !is_prime(p) {
        return Err(FbrError::input(format!("{p} is not prime")));
    }
    let phi = poly_from_integers(&cyclotomic_polynomial(n), p);
    Ok(irreducible_factors(&phi, p)
        .into_iter()
        .map(|factor| PrimeIdealData { p, level: n, factor })
        .collect())
}

/// The least prime ideal above `p` in graded lexicographic order.
pub fn find_prime_ideal(p: u64, n: u64) -> Result<PrimeIdealData> {
    Ok(prime_ideals_above(p, n)?.remove(0))
}

/// An element of the residue field `F_p[x] / (factor)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteFieldElem {
    pub p: u64,
    pub factor: Arc<PolyModP>,
    pub coeffs: PolyModP,
}

impl FiniteFieldElem {
    pub fn from_poly(ideal: &PrimeIdealData, poly: &[u64]) -> Self {
        FiniteFieldElem {
            p: ideal.p,
            factor: Arc::new(ideal.factor.clone()),
            coeffs: poly_rem(poly, &ideal.factor, ideal.p),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                (self.coeffs.get(i).copied().unwrap_or(0) + other.coeffs.get(i).copied().unwrap_or(0))
                    % self.p
            })
            .collect();
        FiniteFieldElem {
            p: self.p,
            factor: self.factor.clone(),
            coeffs: trim(coeffs),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        FiniteFieldElem {
            p: self.p,
            factor: self.factor.clone(),
            coeffs: poly_rem(&poly_mul(&self.coeffs, &other.coeffs, self.p), &self.factor, self.p),
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut r = FiniteFieldElem {
            p: self.p,
            factor: self.factor.clone(),
            coeffs: vec![1],
        };
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        r
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }
}

impl Serialize for FiniteFieldElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            p: u64,
            factor: &'a [u64],
            coeffs: &'a [u64],
        }
        Repr {
            p: self.p,
            factor: &self.factor,
            coeffs: &self.coeffs,
        }
        .serialize(s)
    }
}

fn residue(x: &BigInt, p: u64) -> u64 {
    let r = x % BigInt::from(p);
    let r = r.to_i64().expect("residue fits");
    r.rem_euclid(p as i64) as u64
}

/// Image of `x` in `Z[ζ]/P`. Fails when a coefficient denominator is
/// divisible by `p`.
pub fn reduce_mod(x: &Cyclotomic, ideal: &PrimeIdealData) -> Result<FiniteFieldElem> {
    assert_eq!(x.level(), ideal.level, "prime ideal level mismatch");
    let p = ideal.p;
    let mut poly = Vec::with_capacity(x.coeffs().len());
    for c in x.coeffs() {
        let den = residue(c.denom(), p);
        if den == 0 {
            return Err(FbrError::NotIntegralAtP { p });
        }
        let num = if c.numer().is_zero() { 0 } else { residue(c.numer(), p) };
        let inv = mod_inverse(den as i64, p as i64).expect("denominator is a unit") as u64;
        poly.push(num * inv % p);
    }
    Ok(FiniteFieldElem::from_poly(ideal, &trim(poly)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_ideal_examples() {
        for p in [2u64, 3, 5, 7] {
            let pi = find_prime_ideal(p, 2).unwrap();
            assert_eq!(pi.factor, vec![1, 1], "x + 1 over F_{p}");
        }
        // 2² = -1 mod 5, so x - 2 = x + 3
        let pi = find_prime_ideal(5, 4).unwrap();
        assert_eq!(pi.factor, vec![3, 1]);
        assert_eq!(pi.degree(), 1);
        let pi = find_prime_ideal(3, 4).unwrap();
        assert_eq!(pi.factor, vec![1, 0, 1]);
        assert_eq!(pi.degree(), 2);
        assert!(find_prime_ideal(4, 4).is_err());
    }

    #[test]
    fn factors_divide_cyclotomic_polynomial() {
        for n in 1..=12u64 {
            for p in [2u64, 3, 5, 7] {
                let phi = poly_from_integers(&cyclotomic_polynomial(n), p);
                for pi in prime_ideals_above(p, n).unwrap() {
                    assert!(poly_rem(&phi, &pi.factor, p).is_empty(), "n={n} p={p}");
                }
            }
        }
    }

    /// Distinct irreducible factors by trial division, smallest degree first.
    fn trial_division_factors(f: &[u64], p: u64) -> Vec<PolyModP> {
        let mut rest = make_monic(trim(f.to_vec()), p);
        let mut factors = Vec::new();
        let mut d = 1;
        while rest.len() > 1 {
            if 2 * d > rest.len() - 1 {
                if !factors.contains(&rest) {
                    factors.push(rest);
                }
                break;
            }
            for g in monic_of_degree(d, p) {
                loop {
                    let (q, r) = poly_divrem(&rest, &g, p);
                    if !r.is_empty() {
                        break;
                    }
                    if !factors.contains(&g) {
                        factors.push(g.clone());
                    }
                    rest = q;
                }
            }
            d += 1;
        }
        factors.sort_by(|a, b| graded_lex_cmp(a, b, p));
        factors
    }

    #[test]
    fn splitting_agrees_with_trial_division() {
        for n in 1..=20u64 {
            for p in [2u64, 3, 5, 7] {
                let phi = poly_from_integers(&cyclotomic_polynomial(n), p);
                assert_eq!(irreducible_factors(&phi, p), trial_division_factors(&phi, p), "n={n} p={p}");
            }
        }
        let f = poly_mul(&[1, 1], &poly_mul(&[1, 1], &[1, 0, 1], 3), 3);
        assert_eq!(irreducible_factors(&f, 3), vec![vec![1, 1], vec![1, 0, 1]]);
    }

    #[test]
    fn large_prime_ideal_counts() {
        // 7 and 11 have order 22 modulo 23, 2 has order 11
        assert_eq!(prime_ideals_above(7, 23).unwrap().len(), 1);
        assert_eq!(prime_ideals_above(2, 23).unwrap().len(), 2);
        assert_eq!(prime_ideals_above(11, 23).unwrap().len(), 1);
        assert_eq!(prime_ideals_above(2, 60).unwrap().len(), 2);
    }

    #[test]
    fn ddf_agrees_with_trial_division() {
        for n in 1..=15u64 {
            for p in [2u64, 3, 5, 7] {
                if n % p == 0 {
                    continue;
                }
                let phi = poly_from_integers(&cyclotomic_polynomial(n), p);
                let exhaustive = trial_division_factors(&phi, p);
                let ddf = distinct_degree_factorization(&phi, p);
                let total: usize = ddf.iter().map(|(_, g)| g.len() - 1).sum();
                assert_eq!(total, phi.len() - 1);
                for (d, g) in ddf {
                    let count = exhaustive.iter().filter(|f| f.len() - 1 == d).count();
                    assert_eq!(count * d, g.len() - 1, "n={n} p={p} d={d}");
                }
            }
        }
    }

    #[test]
    fn reduction_is_a_ring_map() {
        let pi = find_prime_ideal(5, 4).unwrap();
        let z = Cyclotomic::zeta_pow(4, 1);
        assert_eq!(reduce_mod(&z, &pi).unwrap().coeffs, vec![2]);
        let x = z.add(&Cyclotomic::from_integer(4, 3));
        let y = z.mul(&z).add(&Cyclotomic::from_integer(4, -7));
        let lhs = reduce_mod(&x.mul(&y), &pi).unwrap();
        let rhs = reduce_mod(&x, &pi).unwrap().mul(&reduce_mod(&y, &pi).unwrap());
        assert_eq!(lhs, rhs);
        let half = Cyclotomic::from_rational(
            4,
            num_rational::BigRational::new(BigInt::from(1), BigInt::from(5)),
        );
        assert_eq!(reduce_mod(&half, &pi), Err(FbrError::NotIntegralAtP { p: 5 }));
    }

    #[test]
    fn p_power_roots_of_unity_reduce_to_one() {
        for (n, p) in [(4u64, 2u64), (6, 2), (6, 3), (12, 2), (12, 3), (9, 3)] {
            let pa = crate::arith::p_part(n as usize, p as usize) as i64;
            for pi in prime_ideals_above(p, n).unwrap() {
                let u = Cyclotomic::zeta_pow(n, n as i64 / pa);
                assert!(reduce_mod(&u, &pi).unwrap().is_one(), "n={n} p={p}");
            }
        }
    }
}
