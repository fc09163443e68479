//! Rational functions in one variable over the exact rationals.
//!
//! Canonical form: numerator and denominator coprime, denominator monic and
//! nonzero. The zero function is `0/1`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::comb::{factorial, stirling2_table};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RationalFunction {
                num: Poly::zero(),
                den: Poly::one(),
            };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree() > Some(0) {
            (num.exact_div(&g), den.exact_div(&g))
        } else {
            (num, den)
        };
        let lc = den.leading_coeff().recip().unwrap();
        RationalFunction {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::PoleAtEvaluation);
        }
        Ok(self.num.eval(x).checked_div(&d)?)
    }

    /// First `n` power-series coefficients at the origin.
    pub fn series(&self, n: usize) -> Result<Vec<Rational>> {
        let d0 = self.den.coeff(0);
        if d0.is_zero() {
            return Err(Error::PoleAtOrigin);
        }
        let inv = d0.recip()?;
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.num.coeff(k);
            for j in 1..=k.min(self.den.deg0()) {
                let t = &self.den.coeff(j) * &out[k - j];
                acc -= &t;
            }
            out.push(&acc * &inv);
        }
        Ok(out)
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        let d = &self.den * &self.den;
        Self::normalized(n, d)
    }

    pub fn pow(&self, e: u32) -> Self {
        RationalFunction {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Values `(theta^k self)(1)` for `k = 0..=kmax`, where `theta = t d/dt`.
    ///
    /// For a probability generating function these are the raw moments
    /// `sum_n n^k a_n`; entry 0 is the total mass `self(1)`. Computed through
    /// the binomial-moment expansion of `self(1+u)` rather than by repeated
    /// differentiation, so cost stays polynomial in `kmax`.
    pub fn theta_at_one(&self, kmax: usize) -> Result<Vec<Rational>> {
        let one = Rational::one();
        let ntay = self.num.taylor_at(&one, kmax);
        let dtay = self.den.taylor_at(&one, kmax);
        if dtay[0].is_zero() {
            return Err(Error::InfiniteMoment("pole of the PGF at t = 1".into()));
        }
        // c_j = [u^j] self(1+u): series division
        let inv = dtay[0].recip()?;
        let mut c = Vec::with_capacity(kmax + 1);
        for k in 0..=kmax {
            let mut acc = ntay[k].clone();
            for j in 1..=k {
                let t = &dtay[j] * &c[k - j];
                acc -= &t;
            }
            c.push(&acc * &inv);
        }
        // theta^k at 1 = sum_j S(k,j) j! c_j
        let s2 = stirling2_table(kmax);
        let mut out = Vec::with_capacity(kmax + 1);
        out.push(c[0].clone());
        for k in 1..=kmax {
            let mut acc = Rational::zero();
            for (j, cj) in c.iter().enumerate().take(k + 1).skip(1) {
                acc += &(&(&s2[k][j] * &factorial(j)) * cj);
            }
            out.push(acc);
        }
        Ok(out)
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunction::normalized(n, &self.den * &rhs.den)
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        let n = &(&self.num * &rhs.den) - &(&rhs.num * &self.den);
        RationalFunction::normalized(n, &self.den * &rhs.den)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        assert!(!rhs.is_zero(), "division by zero rational function");
        RationalFunction::normalized(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
