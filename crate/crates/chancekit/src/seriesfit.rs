//! Fitting exact sequences to closed structures: constant-coefficient linear
//! recurrences, polynomial-coefficient recurrences, and algebraic equations
//! for the generating function.
//!
//! All fitters are guess-and-verify. A candidate is solved from a window of
//! the data, then checked exactly against terms it never saw; nothing is
//! returned unless the holdout passes. Minimality is by search order: lowest
//! order first, then lowest secondary parameter.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{nullspace, rref, Mat};
use crate::mpoly::BivarPoly;
use crate::poly::Poly;
use crate::ratfun::RationalFunction;
use crate::rational::Rational;

/// `a(n) = sum_{i=1..order} coeffs[i-1] * a(n-i)` for every `n >= valid_from`.
/// `prefix` holds `a(0..valid_from)` so the sequence can be replayed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CRecurrence {
    pub order: usize,
    pub coeffs: Vec<Rational>,
    pub valid_from: usize,
    pub prefix: Vec<Rational>,
}

impl CRecurrence {
    /// Exact check against a sequence (all indices `>= valid_from`).
    pub fn holds_for(&self, seq: &[Rational]) -> bool {
        if self.valid_from < self.order {
            return false;
        }
        for n in self.valid_from..seq.len() {
            let mut acc = Rational::zero();
            for (i, c) in self.coeffs.iter().enumerate() {
                acc += &(c * &seq[n - 1 - i]);
            }
            if acc != seq[n] {
                return false;
            }
        }
        true
    }

    /// Replays the sequence out to `len` terms.
    pub fn unroll(&self, len: usize) -> Vec<Rational> {
        let mut out = self.prefix.clone();
        out.truncate(len);
        while out.len() < len {
            let n = out.len();
            let mut acc = Rational::zero();
            for (i, c) in self.coeffs.iter().enumerate() {
                acc += &(c * &out[n - 1 - i]);
            }
            out.push(acc);
        }
        out
    }

    /// The generating function `sum a(n) t^n` as an explicit rational function
    /// with denominator `1 - c_1 t - ... - c_L t^L`.
    pub fn to_rational_function(&self) -> Result<RationalFunction> {
        let mut den = vec![Rational::one()];
        for c in &self.coeffs {
            den.push(-c);
        }
        let den = Poly::new(den);
        // numerator = (den * series) truncated below valid_from
        let series = self.unroll(self.valid_from + self.order);
        let mut num = vec![Rational::zero(); self.valid_from.max(1)];
        for (n, slot) in num.iter_mut().enumerate() {
            let mut acc = Rational::zero();
            for i in 0..=n.min(self.order) {
                acc += &(&den.coeff(i) * &series[n - i]);
            }
            *slot = acc;
        }
        RationalFunction::new(Poly::new(num), den)
    }
}

/// `sum_{i=0..order} coeffs[i](n) * a(n-i) = 0` for every `n >= valid_from`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PRecurrence {
    pub order: usize,
    pub degree: usize,
    pub coeffs: Vec<Poly>,
    pub valid_from: usize,
}

impl PRecurrence {
    pub fn residual(&self, seq: &[Rational], n: usize) -> Rational {
        let nn = Rational::from_int(n as i64);
        let mut acc = Rational::zero();
        for (i, p) in self.coeffs.iter().enumerate() {
            acc += &(&p.eval(&nn) * &seq[n - i]);
        }
        acc
    }

    pub fn holds_for(&self, seq: &[Rational]) -> bool {
        (self.valid_from..seq.len()).all(|n| self.residual(seq, n).is_zero())
    }

    /// Floating-point residual of the homogeneous form at index `n`.
    pub fn residual_f64(&self, seq: &[f64], n: usize) -> f64 {
        let nn = n as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, p)| p.eval_f64(nn) * seq[n - i])
            .sum()
    }

    /// Scales coefficients to a common integer-primitive form with the leading
    /// nonzero coefficient of `coeffs[0]` positive.
    pub fn normalize(&self) -> Self {
        let mut joined = Poly::zero();
        let shift = self.degree + 1;
        for (i, p) in self.coeffs.iter().enumerate() {
            joined = &joined + &p.shift_up(i * shift);
        }
        let (q, _) = joined.primitive_integer();
        let mut scale = q.recip().unwrap_or_else(|_| Rational::one());
        if self
            .coeffs
            .first()
            .map(Poly::leading_coeff)
            .map(|c| (&c * &scale).is_negative())
            .unwrap_or(false)
        {
            scale = -scale;
        }
        PRecurrence {
            order: self.order,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|p| p.scale(&scale)).collect(),
            valid_from: self.valid_from,
        }
    }

    /// Extends `prefix` out to index `upto` by solving for `a(n)` term by
    /// term. The prefix must reach at least `valid_from` and the leading
    /// coefficient must not vanish at any solved index.
    pub fn unroll(&self, prefix: &[Rational], upto: usize) -> Result<Vec<Rational>> {
        if prefix.len() < self.valid_from || prefix.len() <= self.order {
            return Err(Error::NeedMoreTerms {
                required: self.valid_from.max(self.order + 1),
                got: prefix.len(),
            });
        }
        let mut seq = prefix.to_vec();
        for n in seq.len()..=upto {
            let nn = Rational::from_int(n as i64);
            let p0 = self.coeffs[0].eval(&nn);
            if p0.is_zero() {
                return Err(Error::VerificationFailed(format!(
                    "recurrence leading coefficient vanishes at n = {n}"
                )));
            }
            let mut acc = Rational::zero();
            for i in 1..=self.order {
                acc += &(&self.coeffs[i].eval(&nn) * &seq[n - i]);
            }
            seq.push(&(-acc) * &p0.recip()?);
        }
        Ok(seq)
    }
}

/// True when the two recurrences agree up to one common polynomial factor:
/// `p_i(n) q_0(n) = q_i(n) p_0(n)` for all `i`.
pub fn precursive_equivalent(a: &PRecurrence, b: &PRecurrence) -> bool {
    if a.order != b.order {
        return false;
    }
    let (p0, q0) = (&a.coeffs[0], &b.coeffs[0]);
    if p0.is_zero() || q0.is_zero() {
        return false;
    }
    (0..=a.order).all(|i| {
        let pi = a.coeffs.get(i).cloned().unwrap_or_else(Poly::zero);
        let qi = b.coeffs.get(i).cloned().unwrap_or_else(Poly::zero);
        &pi * q0 == &qi * p0
    })
}

/// Minimal constant-coefficient recurrence: lowest order, then lowest
/// `valid_from`. Coefficients are solved on a tail window and the candidate is
/// accepted only if it reproduces a contiguous suffix of at least
/// `2*order + 2` terms.
pub fn fit_cfinite(seq: &[Rational], max_order: usize) -> Result<CRecurrence> {
    let need = 2 * max_order + 4;
    if seq.len() < need {
        return Err(Error::NeedMoreTerms {
            required: need,
            got: seq.len(),
        });
    }
    let len = seq.len();
    for order in 1..=max_order {
        let rows = (order + 6).min(len - order);
        let mut aug = Mat::zeros(rows, order + 1);
        for r in 0..rows {
            let n = len - 1 - r;
            for i in 0..order {
                *aug.at_mut(r, i) = seq[n - 1 - i].clone();
            }
            *aug.at_mut(r, order) = seq[n].clone();
        }
        let pivots = rref(&mut aug);
        if pivots.contains(&order) {
            continue; // inconsistent: no order-`order` recurrence fits the tail
        }
        let mut coeffs = vec![Rational::zero(); order];
        for (r, &p) in pivots.iter().enumerate() {
            coeffs[p] = aug.at(r, order).clone();
        }
        // backward scan for the earliest index the recurrence holds from
        let holds = |n: usize| -> bool {
            let mut acc = Rational::zero();
            for (i, c) in coeffs.iter().enumerate() {
                acc += &(c * &seq[n - 1 - i]);
            }
            acc == seq[n]
        };
        let mut valid_from = len;
        for n in (order..len).rev() {
            if holds(n) {
                valid_from = n;
            } else {
                break;
            }
        }
        if valid_from == len || len - valid_from < 2 * order + 2 {
            continue;
        }
        return Ok(CRecurrence {
            order,
            coeffs,
            valid_from,
            prefix: seq[..valid_from].to_vec(),
        });
    }
    Err(Error::VerificationFailed(format!(
        "no constant-coefficient recurrence of order <= {max_order} fits"
    )))
}

/// Minimal polynomial-coefficient recurrence: lowest order, then lowest
/// coefficient degree. The last `order + 2` terms are held out of the solve
/// and must be matched exactly.
pub fn fit_precursive(
    seq: &[Rational],
    max_order: usize,
    max_degree: usize,
) -> Result<PRecurrence> {
    let len = seq.len();
    let min_need = 9; // (order+1)(degree+1) + order + 6 at order 1, degree 0
    if len < min_need {
        return Err(Error::NeedMoreTerms {
            required: min_need,
            got: len,
        });
    }
    for order in 1..=max_order {
        for degree in 0..=max_degree {
            let unknowns = (order + 1) * (degree + 1);
            let need = unknowns + order + 6;
            if len < need {
                continue;
            }
            let holdout = order + 2;
            let avail = len - holdout - order;
            if avail < unknowns + 1 {
                continue;
            }
            // fit on a tail window so a recurrence that only kicks in after a
            // few initial terms is still found; the backward scan below
            // recovers the true validity range
            let take = (unknowns + 8).min(avail);
            let fit_rows: Vec<usize> = (len - holdout - take..len - holdout).collect();
            let mut m = Mat::zeros(fit_rows.len(), unknowns);
            for (r, &n) in fit_rows.iter().enumerate() {
                let nn = Rational::from_int(n as i64);
                for i in 0..=order {
                    let mut pw = Rational::one();
                    for k in 0..=degree {
                        *m.at_mut(r, i * (degree + 1) + k) = &seq[n - i] * &pw;
                        pw = &pw * &nn;
                    }
                }
            }
            let basis = nullspace(&m);
            let mut best: Option<(usize, PRecurrence)> = None;
            for v in basis.iter().filter(|v| {
                v[..degree + 1].iter().any(|c| !c.is_zero())
            }) {
                let coeffs: Vec<Poly> = (0..=order)
                    .map(|i| Poly::new(v[i * (degree + 1)..(i + 1) * (degree + 1)].to_vec()))
                    .collect();
                let rec = PRecurrence {
                    order,
                    degree,
                    coeffs,
                    valid_from: order,
                };
                // exact scan including the holdout terms
                let mut valid_from = len;
                for n in (order..len).rev() {
                    if rec.residual(seq, n).is_zero() {
                        valid_from = n;
                    } else {
                        break;
                    }
                }
                if valid_from == len || len - valid_from < unknowns + holdout {
                    continue;
                }
                if best.as_ref().map(|(vf, _)| valid_from < *vf).unwrap_or(true) {
                    best = Some((valid_from, rec));
                }
            }
            if let Some((valid_from, rec)) = best {
                let mut rec = rec.normalize();
                rec.valid_from = valid_from;
                return Ok(rec);
            }
        }
    }
    Err(Error::VerificationFailed(format!(
        "no polynomial recurrence with order <= {max_order}, degree <= {max_degree} fits"
    )))
}

/// Minimal algebraic equation `P(f, t) = 0` for the generating function of
/// `seq`, searching rectangles `(deg_f, deg_t)` in ascending total degree.
/// The fit window uses `(deg_f+1)(deg_t+1) + 8` terms; the candidate is then
/// re-verified on half again as many terms, which must all be present.
pub fn fit_algebraic(seq: &[Rational], max_total_degree: usize) -> Result<BivarPoly> {
    let len = seq.len();
    let mut best_missing: Option<usize> = None;
    for total in 2..=max_total_degree {
        for df in 1..total {
            let dt = total - df;
            let unknowns = (df + 1) * (dt + 1);
            let fit_terms = unknowns + 8;
            let verify_terms = fit_terms + fit_terms / 2;
            if len < verify_terms {
                best_missing = Some(best_missing.map_or(verify_terms, |b| b.min(verify_terms)));
                continue;
            }
            // powers of f as truncated series
            let mut fpows: Vec<Vec<Rational>> = Vec::with_capacity(df + 1);
            fpows.push({
                let mut one = vec![Rational::zero(); verify_terms];
                one[0] = Rational::one();
                one
            });
            for i in 1..=df {
                let prev = &fpows[i - 1];
                let mut next = vec![Rational::zero(); verify_terms];
                for (a, x) in prev.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (b, y) in seq.iter().enumerate().take(verify_terms - a) {
                        next[a + b] += &(x * y);
                    }
                }
                fpows.push(next);
            }
            // rows: series coefficient of f^i t^j must sum to zero
            let mut m = Mat::zeros(fit_terms, unknowns);
            for (col, (i, j)) in (0..=df)
                .flat_map(|i| (0..=dt).map(move |j| (i, j)))
                .enumerate()
            {
                for r in j..fit_terms {
                    *m.at_mut(r, col) = fpows[i][r - j].clone();
                }
            }
            let basis = nullspace(&m);
            'vectors: for v in &basis {
                // needs genuine f dependence
                if v[dt + 1..].iter().all(Rational::is_zero) {
                    continue;
                }
                let mut fcoeffs = Vec::with_capacity(df + 1);
                for i in 0..=df {
                    fcoeffs.push(Poly::new(v[i * (dt + 1)..(i + 1) * (dt + 1)].to_vec()));
                }
                let p = BivarPoly::new(fcoeffs);
                let out = p.eval_on_series(seq, verify_terms);
                if out.iter().any(|c| !c.is_zero()) {
                    continue 'vectors;
                }
                return Ok(p.normalize());
            }
        }
    }
    if let Some(required) = best_missing {
        return Err(Error::NeedMoreTerms {
            required,
            got: len,
        });
    }
    Err(Error::VerificationFailed(format!(
        "no algebraic equation of total degree <= {max_total_degree} fits"
    )))
}
