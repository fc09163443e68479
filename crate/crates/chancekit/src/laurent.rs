//! Sparse Laurent polynomials: finite rational combinations of `x^k`, `k` any
//! integer. Used for step distributions of lattice walks and the truncated
//! transfer DP.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(Rational::one(), 0)
    }

    pub fn monomial(c: Rational, k: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        LaurentPoly { terms }
    }

    pub fn from_terms(terms: &[(i64, Rational)]) -> Self {
        let mut p = LaurentPoly::zero();
        for (k, c) in terms {
            p.add_term(*k, c.clone());
        }
        p
    }

    pub fn add_term(&mut self, k: i64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_insert_with(Rational::zero);
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: i64) -> Rational {
        self.terms.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in rhs.iter() {
            out.add_term(k, c.clone());
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = LaurentPoly::zero();
        for (i, a) in self.iter() {
            for (j, b) in rhs.iter() {
                out.add_term(i + j, a * b);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(k, a)| (*k, a * c)).collect(),
        }
    }

    /// Splits into `(terms with exponent < at, terms with exponent >= at)`.
    pub fn split_at(&self, at: i64) -> (Self, Self) {
        let mut below = LaurentPoly::zero();
        let mut above = LaurentPoly::zero();
        for (k, c) in self.iter() {
            if k < at {
                below.terms.insert(k, c.clone());
            } else {
                above.terms.insert(k, c.clone());
            }
        }
        (below, above)
    }

    pub fn sum_coeffs(&self) -> Rational {
        let mut acc = Rational::zero();
        for (_, c) in self.iter() {
            acc += c;
        }
        acc
    }

    /// Evaluation at a nonzero rational point.
    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        if x.is_zero() && self.min_exp().is_some_and(|m| m < 0) {
            return Err(Error::PoleAtEvaluation);
        }
        let mut acc = Rational::zero();
        for (k, c) in self.iter() {
            let xi = x.pow(i32::try_from(k).expect("exponent fits in i32"))?;
            acc += &(c * &xi);
        }
        Ok(acc)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.terms
            .iter()
            .map(|(k, c)| c.to_f64() * x.powi(*k as i32))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::ratio(p, q)
    }

    #[test]
    fn basic_ops() {
        // h = x^-1/2 + x^2/2
        let h = LaurentPoly::from_terms(&[(-1, r(1, 2)), (2, r(1, 2))]);
        assert_eq!(h.min_exp(), Some(-1));
        assert_eq!(h.max_exp(), Some(2));
        assert_eq!(h.sum_coeffs(), r(1, 1));
        let h2 = h.mul(&h);
        assert_eq!(h2.coeff(-2), r(1, 4));
        assert_eq!(h2.coeff(1), r(1, 2));
        assert_eq!(h2.coeff(4), r(1, 4));
        assert_eq!(h2.sum_coeffs(), r(1, 1));
    }

    #[test]
    fn split_and_eval() {
        let h = LaurentPoly::from_terms(&[(-1, r(1, 2)), (2, r(1, 2))]);
        let (below, above) = h.split_at(0);
        assert_eq!(below.coeff(-1), r(1, 2));
        assert!(above.coeff(-1).is_zero());
        assert_eq!(above.coeff(2), r(1, 2));
        // h(4/5) = (1/2)(5/4) + (1/2)(16/25) = 5/8 + 8/25 = 189/200
        assert_eq!(h.eval(&r(4, 5)).unwrap(), r(189, 200));
        assert!(h.eval(&Rational::zero()).is_err());
    }

    #[test]
    fn cancellation_removes_terms() {
        let a = LaurentPoly::from_terms(&[(0, r(1, 1)), (3, r(2, 1))]);
        let b = LaurentPoly::from_terms(&[(3, r(-2, 1))]);
        let s = a.add(&b);
        assert_eq!(s.max_exp(), Some(0));
    }
}
