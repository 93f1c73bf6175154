use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::cyclo::Cyclotomic;

/// A finite combination of standard basis elements with cyclotomic
/// coefficients. Keys are basis indices; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElement {
    level: u64,
    terms: BTreeMap<usize, Cyclotomic>,
}

impl RingElement {
    pub fn zero(level: u64) -> Self {
        RingElement {
            level,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(level: u64, i: usize) -> Self {
        Self::from_terms(level, [(i, Cyclotomic::one(level))])
    }

    pub fn from_terms(level: u64, terms: impl IntoIterator<Item = (usize, Cyclotomic)>) -> Self {
        let mut out = Self::zero(level);
        for (i, c) in terms {
            out.add_term(i, &c);
        }
        out.normalize();
        out
    }

    pub fn from_integers(level: u64, terms: impl IntoIterator<Item = (usize, i64)>) -> Self {
        Self::from_terms(
            level,
            terms.into_iter().map(|(i, c)| (i, Cyclotomic::from_integer(level, c))),
        )
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn terms(&self) -> &BTreeMap<usize, Cyclotomic> {
        &self.terms
    }

    pub fn coeff(&self, i: usize) -> Cyclotomic {
        self.terms.get(&i).cloned().unwrap_or_else(|| Cyclotomic::zero(self.level))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.keys().copied()
    }

    /// True when every coefficient is a rational integer.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.as_integer().is_some())
    }

    pub(crate) fn add_term(&mut self, i: usize, c: &Cyclotomic) {
        match self.terms.get_mut(&i) {
            Some(v) => v.add_assign(c),
            None => {
                self.terms.insert(i, c.clone());
            }
        }
    }

    pub(crate) fn add_scaled_term(&mut self, i: usize, c: &Cyclotomic, k: i64) {
        self.terms
            .entry(i)
            .or_insert_with(|| Cyclotomic::zero(c.level()))
            .add_scaled_assign(c, k);
    }

    pub(crate) fn normalize(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
    }

    pub(crate) fn retain(&mut self, keep: impl Fn(usize) -> bool) {
        self.terms.retain(|&i, _| keep(i));
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.level, other.level, "ring element level mismatch");
        let mut out = self.clone();
        for (&i, c) in &other.terms {
            out.add_term(i, c);
        }
        out.normalize();
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RingElement {
            level: self.level,
            terms: self.terms.iter().map(|(&i, c)| (i, c.neg())).collect(),
        }
    }

    pub fn scale(&self, s: &Cyclotomic) -> Self {
        let mut out = RingElement {
            level: self.level,
            terms: self.terms.iter().map(|(&i, c)| (i, c.mul(s))).collect(),
        };
        out.normalize();
        out
    }

    pub fn scale_rational(&self, s: &BigRational) -> Self {
        let mut out = RingElement {
            level: self.level,
            terms: self.terms.iter().map(|(&i, c)| (i, c.scalar_mul(s))).collect(),
        };
        out.normalize();
        out
    }

    /// Applies `σ_t` to every coefficient.
    pub fn galois(&self, t: i64) -> crate::Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|(&i, c)| Ok((i, c.galois(t)?)))
            .collect::<crate::Result<BTreeMap<_, _>>>()?;
        Ok(RingElement {
            level: self.level,
            terms,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_explicit_zeros() {
        let x = RingElement::from_integers(2, [(0, 1), (1, 2), (0, -1)]);
        assert_eq!(x.support().collect::<Vec<_>>(), vec![1]);
        assert!(x.sub(&x).is_zero());
        assert!(x.is_integral());
        let half = BigRational::new(1.into(), 2.into());
        assert!(!x.scale_rational(&half).scale_rational(&half).is_integral());
    }
}
