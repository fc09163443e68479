//! Sparse multivariate polynomials and the bivariate `P(f, t)` wrapper used
//! for algebraic PGF equations.
//!
//! Resultants are never expanded symbolically over polynomial entries: we
//! evaluate both inputs at scalar points, take scalar resultants there, and
//! interpolate back under explicit degree bounds. Sample points are chosen to
//! dodge the vanishing loci of the leading coefficients so the specialized
//! resultant equals the specialization of the resultant.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::poly::{resultant as poly_resultant, Poly};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u16>, Rational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = MPoly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        MPoly::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = MPoly::zero(nvars);
        p.add_term(e, Rational::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, exps: Vec<u16>, c: Rational) {
        assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(exps.clone())
            .or_insert_with(Rational::zero);
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u16>, &Rational)> {
        self.terms.iter()
    }

    pub fn degree_in(&self, var: usize) -> usize {
        self.terms
            .keys()
            .map(|e| e[var] as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in rhs.iter() {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = MPoly::zero(self.nvars);
        for (ea, ca) in self.iter() {
            for (eb, cb) in rhs.iter() {
                let e: Vec<u16> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = MPoly::one(self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn partial(&self, var: usize) -> Self {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in self.iter() {
            let k = e[var];
            if k == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[var] = k - 1;
            out.add_term(e2, c * &Rational::from_int(k as i64));
        }
        out
    }

    /// Substitutes the rational `x` for variable `var`; the result keeps the
    /// same variable arity with exponent 0 in `var`.
    pub fn eval_var(&self, var: usize, x: &Rational) -> Self {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in self.iter() {
            let mut e2 = e.clone();
            let k = e2[var];
            e2[var] = 0;
            let scaled = c * &x.pow(k as i32).unwrap();
            out.add_term(e2, scaled);
        }
        out
    }

    /// Substitutes a polynomial for variable `var`.
    pub fn subst_var(&self, var: usize, value: &MPoly) -> Self {
        assert_eq!(self.nvars, value.nvars);
        let dmax = self.degree_in(var);
        // precompute powers of the substituted value
        let mut powers = Vec::with_capacity(dmax + 1);
        powers.push(MPoly::one(self.nvars));
        for _ in 0..dmax {
            powers.push(powers.last().unwrap().mul(value));
        }
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in self.iter() {
            let mut e2 = e.clone();
            let k = e2[var] as usize;
            e2[var] = 0;
            let mut mono = MPoly::zero(self.nvars);
            mono.add_term(e2, c.clone());
            out = out.add(&mono.mul(&powers[k]));
        }
        out
    }

    /// Fully evaluates at a point.
    pub fn eval_all(&self, xs: &[Rational]) -> Rational {
        assert_eq!(xs.len(), self.nvars);
        let mut acc = Rational::zero();
        for (e, c) in self.iter() {
            let mut term = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term *= &xs[i].pow(k as i32).unwrap();
                }
            }
            acc += &term;
        }
        acc
    }

    /// The polynomial as univariate in `var`: entry `k` is the coefficient of
    /// `var^k`, an `MPoly` in which `var` has exponent zero.
    pub fn coeffs_in(&self, var: usize) -> Vec<MPoly> {
        let d = self.degree_in(var);
        let mut out = vec![MPoly::zero(self.nvars); d + 1];
        for (e, c) in self.iter() {
            let k = e[var] as usize;
            let mut e2 = e.clone();
            e2[var] = 0;
            out[k].add_term(e2, c.clone());
        }
        out
    }

    /// Specializes every variable except `var` and returns the univariate
    /// polynomial in `var`. `point[var]` is ignored.
    pub fn specialize_to_poly(&self, var: usize, point: &[Rational]) -> Poly {
        let mut coeffs = vec![Rational::zero(); self.degree_in(var) + 1];
        for (e, c) in self.iter() {
            let mut term = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if i != var && k > 0 {
                    term *= &point[i].pow(k as i32).unwrap();
                }
            }
            coeffs[e[var] as usize] += &term;
        }
        Poly::new(coeffs)
    }

    /// Divides by the rational content and fixes the sign so the leading term
    /// under graded-lex order has a positive coefficient; coefficients become
    /// integers with gcd 1.
    pub fn normalize_content(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        use num_bigint::BigInt;
        use num_integer::Integer;
        use num_traits::{One, Zero};
        let mut lcm = BigInt::one();
        for c in self.terms.values() {
            lcm = lcm.lcm(c.denom());
        }
        let mut content = BigInt::zero();
        for c in self.terms.values() {
            content = content.gcd(&(c.numer() * (&lcm / c.denom())));
        }
        let lead = self
            .terms
            .iter()
            .max_by(|(e1, _), (e2, _)| {
                let d1: usize = e1.iter().map(|&x| x as usize).sum();
                let d2: usize = e2.iter().map(|&x| x as usize).sum();
                d1.cmp(&d2).then_with(|| e1.cmp(e2))
            })
            .unwrap();
        let scale = if lead.1.is_negative() {
            Rational::new(-lcm, content).unwrap()
        } else {
            Rational::new(lcm, content).unwrap()
        };
        self.scale(&scale)
    }

    /// True when the two polynomials agree up to a nonzero rational factor.
    pub fn proportional(&self, rhs: &Self) -> bool {
        self.normalize_content() == rhs.normalize_content()
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*{}", names[i])?,
                    _ => write!(f, "*{}^{k}", names[i])?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Newton interpolation with values in any rational vector space; here,
/// multivariate polynomials. Nodes must be distinct.
fn newton_interpolate_mpoly(nodes: &[Rational], values: Vec<MPoly>, var: usize) -> MPoly {
    assert_eq!(nodes.len(), values.len());
    assert!(!values.is_empty());
    let nvars = values[0].nvars();
    let n = nodes.len();
    let mut coef = values;
    for level in 1..n {
        for i in (level..n).rev() {
            let dx = &nodes[i] - &nodes[i - level];
            let inv = dx.recip().expect("distinct interpolation nodes");
            coef[i] = coef[i].sub(&coef[i - 1]).scale(&inv);
        }
    }
    let mut p = MPoly::zero(nvars);
    for i in (0..n).rev() {
        // p = p * (x_var - node_i) + coef[i]
        let lin = MPoly::var(nvars, var).sub(&MPoly::constant(nvars, nodes[i].clone()));
        p = p.mul(&lin).add(&coef[i]);
    }
    p
}

/// Deterministic node generator used to dodge leading-coefficient zeros.
fn node_candidates(seed: u64) -> impl Iterator<Item = Rational> {
    // small integers first, then widen; offset by seed to re-randomize on retry
    (0u64..).map(move |i| Rational::from_int((1 + i + 7 * seed) as i64))
}

/// Resultant of `a` and `b` with respect to `var`, an `MPoly` in the remaining
/// variables (exponent of `var` is zero everywhere in the result).
pub fn mpoly_resultant(a: &MPoly, b: &MPoly, var: usize) -> Result<MPoly> {
    assert_eq!(a.nvars(), b.nvars());
    let nvars = a.nvars();
    let da = a.degree_in(var);
    let db = b.degree_in(var);
    if a.is_zero() || b.is_zero() {
        return Ok(MPoly::zero(nvars));
    }
    if da == 0 {
        return Ok(a.pow(db as u32));
    }
    if db == 0 {
        return Ok(b.pow(da as u32));
    }
    let lc_a = a.coeffs_in(var).pop().unwrap();
    let lc_b = b.coeffs_in(var).pop().unwrap();
    // degree bound of the resultant in each remaining variable
    let mut dims: Vec<(usize, usize)> = Vec::new(); // (variable, #nodes)
    for v in 0..nvars {
        if v == var {
            continue;
        }
        let bound = da * b.degree_in(v) + db * a.degree_in(v);
        if bound > 0 {
            dims.push((v, bound + 1));
        }
    }
    if dims.is_empty() {
        let pa = a.specialize_to_poly(var, &vec![Rational::zero(); nvars]);
        let pb = b.specialize_to_poly(var, &vec![Rational::zero(); nvars]);
        return Ok(MPoly::constant(nvars, poly_resultant(&pa, &pb)));
    }

    'retry: for seed in 0..64u64 {
        // per-dimension node lists
        let mut nodes: Vec<Vec<Rational>> = Vec::with_capacity(dims.len());
        for (k, (_, n)) in dims.iter().enumerate() {
            nodes.push(node_candidates(seed * 131 + k as u64).take(*n).collect());
        }
        // recursive evaluation over the grid
        fn build(
            depth: usize,
            dims: &[(usize, usize)],
            nodes: &[Vec<Rational>],
            point: &mut Vec<Rational>,
            a: &MPoly,
            b: &MPoly,
            var: usize,
            lc_a: &MPoly,
            lc_b: &MPoly,
        ) -> Option<MPoly> {
            if depth == dims.len() {
                if lc_a.eval_all(point).is_zero() || lc_b.eval_all(point).is_zero() {
                    return None;
                }
                let pa = a.specialize_to_poly(var, point);
                let pb = b.specialize_to_poly(var, point);
                let r = poly_resultant(&pa, &pb);
                return Some(MPoly::constant(a.nvars(), r));
            }
            let (v, _) = dims[depth];
            let mut values = Vec::with_capacity(nodes[depth].len());
            for x in &nodes[depth] {
                point[v] = x.clone();
                values.push(build(
                    depth + 1,
                    dims,
                    nodes,
                    point,
                    a,
                    b,
                    var,
                    lc_a,
                    lc_b,
                )?);
            }
            point[v] = Rational::zero();
            Some(newton_interpolate_mpoly(&nodes[depth], values, v))
        }
        let mut point = vec![Rational::zero(); nvars];
        match build(0, &dims, &nodes, &mut point, a, b, var, &lc_a, &lc_b) {
            Some(res) => return Ok(res),
            None => continue 'retry,
        }
    }
    Err(Error::EliminationDegenerate(
        "could not find sample points clear of leading-coefficient zeros".into(),
    ))
}

/// A polynomial `P(f, t)`, stored as coefficients of powers of `f`, each a
/// univariate polynomial in `t`. This is the shape of every algebraic PGF
/// equation in the crate.
#[derive(Clone, PartialEq, Eq)]
pub struct BivarPoly {
    fcoeffs: Vec<Poly>,
}

impl BivarPoly {
    pub fn new(mut fcoeffs: Vec<Poly>) -> Self {
        while fcoeffs.last().is_some_and(Poly::is_zero) {
            fcoeffs.pop();
        }
        BivarPoly { fcoeffs }
    }

    pub fn zero() -> Self {
        BivarPoly { fcoeffs: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.fcoeffs.is_empty()
    }

    pub fn degree_f(&self) -> usize {
        self.fcoeffs.len().saturating_sub(1)
    }

    pub fn degree_t(&self) -> usize {
        self.fcoeffs.iter().map(Poly::deg0).max().unwrap_or(0)
    }

    pub fn fcoeffs(&self) -> &[Poly] {
        &self.fcoeffs
    }

    pub fn coeff_f(&self, i: usize) -> Poly {
        self.fcoeffs.get(i).cloned().unwrap_or_else(Poly::zero)
    }

    /// Substitutes a rational value for `f`, leaving a polynomial in `t`.
    pub fn eval_f(&self, f: &Rational) -> Poly {
        let mut acc = Poly::zero();
        for c in self.fcoeffs.iter().rev() {
            acc = &acc.scale(f) + c;
        }
        acc
    }

    /// Substitutes a rational value for `t`, leaving a polynomial in `f`.
    pub fn eval_t(&self, t: &Rational) -> Poly {
        Poly::new(self.fcoeffs.iter().map(|c| c.eval(t)).collect())
    }

    pub fn eval(&self, f: &Rational, t: &Rational) -> Rational {
        self.eval_t(t).eval(f)
    }

    pub fn partial_f(&self) -> BivarPoly {
        if self.fcoeffs.len() <= 1 {
            return BivarPoly::zero();
        }
        BivarPoly::new(
            self.fcoeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c.scale(&Rational::from_int(i as i64 + 1)))
                .collect(),
        )
    }

    pub fn partial_t(&self) -> BivarPoly {
        BivarPoly::new(self.fcoeffs.iter().map(Poly::derivative).collect())
    }

    pub fn to_mpoly(&self) -> MPoly {
        // variable 0 = f, variable 1 = t
        let mut p = MPoly::zero(2);
        for (i, c) in self.fcoeffs.iter().enumerate() {
            for (j, a) in c.coeffs().iter().enumerate() {
                p.add_term(vec![i as u16, j as u16], a.clone());
            }
        }
        p
    }

    pub fn from_mpoly(p: &MPoly) -> Self {
        assert_eq!(p.nvars(), 2);
        let mut fcoeffs = vec![Poly::zero(); p.degree_in(0) + 1];
        for (e, c) in p.iter() {
            let mono = Poly::monomial(c.clone(), e[1] as usize);
            fcoeffs[e[0] as usize] = &fcoeffs[e[0] as usize] + &mono;
        }
        BivarPoly::new(fcoeffs)
    }

    /// Integer-primitive form with a positive leading graded-lex term; two
    /// equations defining the same curve compare equal after this.
    pub fn normalize(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        BivarPoly::from_mpoly(&self.to_mpoly().normalize_content())
    }

    pub fn proportional(&self, rhs: &Self) -> bool {
        self.to_mpoly().proportional(&rhs.to_mpoly())
    }

    /// Evaluates `P(f(t), t)` on a truncated power series `f` (mod `t^n`).
    pub fn eval_on_series(&self, fs: &[Rational], n: usize) -> Vec<Rational> {
        let n = n.min(fs.len());
        let mul = |a: &[Rational], b: &[Rational]| -> Vec<Rational> {
            let mut out = vec![Rational::zero(); n];
            for (i, x) in a.iter().enumerate().take(n) {
                if x.is_zero() {
                    continue;
                }
                for (j, y) in b.iter().enumerate().take(n - i) {
                    out[i + j] += &(x * y);
                }
            }
            out
        };
        // Horner in f
        let mut acc = vec![Rational::zero(); n];
        for c in self.fcoeffs.iter().rev() {
            acc = mul(&acc, &fs[..n]);
            for (j, a) in c.coeffs().iter().enumerate().take(n) {
                acc[j] += a;
            }
        }
        acc
    }

    /// Resultant eliminating `f` from two equations, returned as a polynomial
    /// in `t`.
    pub fn resultant_f(&self, rhs: &BivarPoly) -> Result<Poly> {
        let r = mpoly_resultant(&self.to_mpoly(), &rhs.to_mpoly(), 0)?;
        let mut coeffs = vec![Rational::zero(); r.degree_in(1) + 1];
        for (e, c) in r.iter() {
            debug_assert_eq!(e[0], 0);
            coeffs[e[1] as usize] += c;
        }
        Ok(Poly::new(coeffs))
    }
}

impl fmt::Display for BivarPoly {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(fm, "0");
        }
        let mut first = true;
        for (i, c) in self.fcoeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(fm, " + ")?;
            }
            first = false;
            match i {
                0 => write!(fm, "({c})")?,
                1 => write!(fm, "({c})*f")?,
                _ => write!(fm, "({c})*f^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl serde::Serialize for BivarPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.fcoeffs.serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for BivarPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let fcoeffs = Vec::<Poly>::deserialize(d)?;
        Ok(BivarPoly::new(fcoeffs))
    }
}
