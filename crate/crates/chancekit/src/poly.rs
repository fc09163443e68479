//! Dense univariate polynomials over the exact rationals.
//!
//! Coefficients are stored low degree first with no trailing zeros, so the zero
//! polynomial is the empty vector and `degree()` returns `None` for it.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn x() -> Self {
        Poly::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// Convenience constructor from small integers, low degree first.
    pub fn from_ints(cs: &[i64]) -> Self {
        Poly::new(cs.iter().map(|&c| Rational::from_int(c)).collect())
    }

    /// `c * x^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        Poly { coeffs: v }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with zero polynomial treated as degree 0 (for size arithmetic).
    pub fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64();
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| &Rational::from_int(i as i64 + 1) * c)
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplies by `x^k`.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Rational::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division: returns `(q, r)` with `self = q*rhs + r`, `deg r < deg rhs`.
    pub fn divrem(&self, rhs: &Poly) -> Result<(Poly, Poly)> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dlead = rhs.leading_coeff();
        let d = rhs.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quo = vec![Rational::zero(); rem.len() - d];
        for i in (d..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let q = &rem[i] / &dlead;
            for (j, c) in rhs.coeffs.iter().enumerate() {
                let t = &q * c;
                rem[i - d + j] -= &t;
            }
            quo[i - d] = q;
        }
        Ok((Poly::new(quo), Poly::new(rem)))
    }

    /// Division that must be exact; panics if a nonzero remainder appears
    /// (used where divisibility is guaranteed by construction).
    pub fn exact_div(&self, rhs: &Poly) -> Poly {
        let (q, r) = self.divrem(rhs).expect("division by zero polynomial");
        assert!(r.is_zero(), "polynomial division was not exact");
        q
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let lc = self.leading_coeff();
        self.scale(&lc.recip().unwrap())
    }

    /// Greatest common divisor, returned monic (1 for coprime inputs).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (_, a) = self.primitive_integer();
        let (_, b) = other.primitive_integer();
        if a.len() > 1 && b.len() > 1 && coprime_mod_probe(&a, &b) {
            return Poly::one();
        }
        let g = int_gcd(&a, &b);
        Poly::from_bigints(&g).monic()
    }

    /// Taylor coefficients around `a`: the first `order + 1` coefficients of
    /// `self` written in powers of `(x - a)`, via repeated synthetic division.
    pub fn taylor_at(&self, a: &Rational, order: usize) -> Vec<Rational> {
        let mut work = self.coeffs.clone();
        let mut out = Vec::with_capacity(order + 1);
        for _ in 0..=order {
            if work.is_empty() {
                out.push(Rational::zero());
                continue;
            }
            // synthetic division by (x - a): remainder becomes the next
            // coefficient, the rest of the buffer becomes the quotient
            let mut acc = Rational::zero();
            for i in (0..work.len()).rev() {
                acc = &(&acc * a) + &work[i];
                work[i] = acc.clone();
            }
            out.push(work.remove(0));
        }
        out
    }

    /// Polynomial composition `self(inner)`.
    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Poly::constant(c.clone());
        }
        acc
    }

    pub fn from_bigints(cs: &[BigInt]) -> Poly {
        Poly::new(cs.iter().map(|c| Rational::from_bigint(c.clone())).collect())
    }

    /// Primitive integer form with positive leading coefficient: returns `q`
    /// (a rational) and integer coefficients `v` with `self = q * v`.
    pub fn primitive_integer(&self) -> (Rational, Vec<BigInt>) {
        if self.is_zero() {
            return (Rational::one(), vec![]);
        }
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let mut content = BigInt::zero();
        for v in &ints {
            content = content.gcd(v);
        }
        let mut sign = BigInt::one();
        if ints.last().unwrap().is_negative() {
            sign = -sign;
        }
        let scale = &content * &sign;
        let prim: Vec<BigInt> = ints.iter().map(|v| v / &scale).collect();
        let q = Rational::new(scale, lcm).unwrap();
        (q, prim)
    }
}

/// Resultant of two univariate polynomials by the Euclidean remainder
/// sequence. `Res(a, b) = lc(b)^deg(a)` when `b` is a nonzero constant, 0 when
/// either argument is the zero polynomial, and the classic sign/power bookkeeping
/// otherwise.
pub fn resultant(a: &Poly, b: &Poly) -> Rational {
    if a.is_zero() || b.is_zero() {
        return Rational::zero();
    }
    let mut a = a.clone();
    let mut b = b.clone();
    let mut acc = Rational::one();
    if a.deg0() < b.deg0() {
        if (a.deg0() * b.deg0()) % 2 == 1 {
            acc = -acc;
        }
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let da = a.deg0();
        let db = b.deg0();
        if db == 0 {
            return &acc * &b.leading_coeff().pow(da as i32).unwrap();
        }
        let (_, r) = a.divrem(&b).expect("nonzero divisor");
        if r.is_zero() {
            return Rational::zero();
        }
        let dr = r.deg0();
        if (da * db) % 2 == 1 {
            acc = -acc;
        }
        acc = &acc * &b.leading_coeff().pow((da - dr) as i32).unwrap();
        a = b;
        b = r;
    }
}

/// Integer-polynomial gcd by the primitive pseudo-remainder sequence.
/// One-sided coprimality test: true means the inputs are provably coprime
/// over the rationals (their images mod some good word-size prime are), false
/// means unknown. Lets `gcd` skip the pseudo-remainder sequence in the common
/// case, which matters for the big interpolated numerators in the Markov solve.
fn coprime_mod_probe(a: &[BigInt], b: &[BigInt]) -> bool {
    // 2^61-1 and 2^31-1 (Mersenne), plus 10^18+9
    const PRIMES: [u64; 3] = [2_305_843_009_213_693_951, 2_147_483_647, 1_000_000_000_000_000_009];
    for &p in &PRIMES {
        let pb = BigInt::from(p);
        let red = |v: &[BigInt]| -> Vec<u64> {
            v.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect()
        };
        let (am, bm) = (red(a), red(b));
        if *am.last().unwrap() == 0 || *bm.last().unwrap() == 0 {
            continue; // bad reduction, degree dropped
        }
        if crate::intpoly::fpp_gcd(&am, &bm, p).len() == 1 {
            return true;
        }
    }
    false
}

fn int_gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        v
    }
    fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
        let mut content = BigInt::zero();
        for c in &v {
            content = content.gcd(c);
        }
        if content.is_zero() || content.is_one() {
            return v;
        }
        v.into_iter().map(|c| c / &content).collect()
    }
    // pseudo-remainder of a by b
    fn prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let db = b.len() - 1;
        let lb = b[db].clone();
        let mut r: Vec<BigInt> = a.to_vec();
        while r.len() > db {
            let dr = r.len() - 1;
            let lead = r[dr].clone();
            for c in r.iter_mut() {
                *c = &*c * &lb;
            }
            for j in 0..=db {
                r[dr - db + j] -= &lead * &b[j];
            }
            r = trim(r);
            if r.is_empty() {
                break;
            }
        }
        r
    }
    let mut a = primitive(trim(a.to_vec()));
    let mut b = primitive(trim(b.to_vec()));
    if a.is_empty() {
        return b;
    }
    if b.is_empty() {
        return a;
    }
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = prem(&a, &b);
        if r.is_empty() {
            return primitive(b);
        }
        a = b;
        b = primitive(r);
        if b.len() == 1 {
            return vec![BigInt::one()];
        }
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(&self.coeff(i) + &rhs.coeff(i));
        }
        Poly::new(v)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(&self.coeff(i) - &rhs.coeff(i));
        }
        Poly::new(v)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                v[i + j] += &(a * b);
            }
        }
        Poly::new(v)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() {
                ("-", c.abs())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl serde::Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for Poly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let coeffs = Vec::<Rational>::deserialize(d)?;
        Ok(Poly::new(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn construction_trims() {
        let p = Poly::new(vec![r("1"), r("0"), r("0")]);
        assert_eq!(p.degree(), Some(0));
        assert!(Poly::new(vec![r("0")]).is_zero());
        assert_eq!(Poly::zero().degree(), None);
    }

    #[test]
    fn arithmetic_and_eval() {
        let p = Poly::from_ints(&[1, 2, 3]); // 1 + 2t + 3t^2
        let q = Poly::from_ints(&[0, 1]); // t
        assert_eq!(&p * &q, Poly::from_ints(&[0, 1, 2, 3]));
        assert_eq!(&p + &q, Poly::from_ints(&[1, 3, 3]));
        assert_eq!(&p - &p, Poly::zero());
        assert_eq!(p.eval(&r("2")), r("17"));
        assert_eq!(p.derivative(), Poly::from_ints(&[2, 6]));
    }

    #[test]
    fn division() {
        let a = Poly::from_ints(&[-1, 0, 1]); // t^2 - 1
        let b = Poly::from_ints(&[1, 1]); // t + 1
        let (q, rem) = a.divrem(&b).unwrap();
        assert_eq!(q, Poly::from_ints(&[-1, 1]));
        assert!(rem.is_zero());
        let (q2, r2) = Poly::from_ints(&[1, 0, 1]).divrem(&b).unwrap();
        assert_eq!(&(&q2 * &b) + &r2, Poly::from_ints(&[1, 0, 1]));
    }

    #[test]
    fn gcd_of_products() {
        let a = &Poly::from_ints(&[1, 1]) * &Poly::from_ints(&[-2, 1]);
        let b = &Poly::from_ints(&[1, 1]) * &Poly::from_ints(&[3, 1]);
        assert_eq!(a.gcd(&b), Poly::from_ints(&[1, 1]));
        let c = Poly::from_ints(&[1, 2]);
        let d = Poly::from_ints(&[5]);
        assert_eq!(c.gcd(&d), Poly::one());
    }

    #[test]
    fn taylor_shift_examples() {
        // x^2 at a=1, order 2 -> [1, 2, 1]
        let p = Poly::from_ints(&[0, 0, 1]);
        assert_eq!(
            p.taylor_at(&r("1"), 2),
            vec![r("1"), r("2"), r("1")]
        );
        // 4 - 2x - x^2 at a=1 -> [1, -4, -1]
        let q = Poly::from_ints(&[4, -2, -1]);
        assert_eq!(
            q.taylor_at(&r("1"), 2),
            vec![r("1"), r("-4"), r("-1")]
        );
        // order beyond degree pads zeros
        assert_eq!(q.taylor_at(&r("1"), 4).len(), 5);
        assert!(q.taylor_at(&r("1"), 4)[4].is_zero());
    }

    #[test]
    fn compose_and_pow() {
        let p = Poly::from_ints(&[1, 1]); // 1 + t
        assert_eq!(p.pow(2), Poly::from_ints(&[1, 2, 1]));
        let q = Poly::from_ints(&[0, 0, 1]); // t^2
        assert_eq!(p.compose(&q), Poly::from_ints(&[1, 0, 1]));
    }

    #[test]
    fn resultants() {
        // Res(A, B) = lc(A)^deg(B) * prod B(roots of A)
        let a = Poly::from_ints(&[-1, 0, 1]); // roots +-1
        let b = Poly::from_ints(&[-4, 0, 1]); // B(1) = B(-1) = -3
        assert_eq!(resultant(&a, &b), r("9"));
        assert_eq!(resultant(&b, &a), r("9"));
        let c = Poly::from_ints(&[-2, 1]);
        let d = Poly::from_ints(&[-3, 1]);
        assert_eq!(resultant(&c, &d), r("-1"));
        // shared root -> 0
        let e = &a * &c;
        assert_eq!(resultant(&a, &e), r("0"));
        // constant cases
        assert_eq!(resultant(&Poly::from_ints(&[5]), &a), r("25"));
        assert_eq!(resultant(&a, &Poly::from_ints(&[5])), r("25"));
    }

    #[test]
    fn primitive_integer_relation() {
        let p = Poly::new(vec![r("1/2"), r("3/4")]);
        let (q, v) = p.primitive_integer();
        // reconstruct: q * v must equal p
        let back = Poly::from_bigints(&v).scale(&q);
        assert_eq!(back, p);
        assert!(v.last().unwrap() > &BigInt::from(0));
    }
}
