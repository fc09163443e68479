//! Pile games: a player repeatedly rolls a die with positive integer steps
//! and stops once the accumulated capital reaches a goal `n`.
//!
//! The exact duration PGF `F_n(t)` comes from a DP on capital. For large `n`
//! the raw moments of the duration are polynomials in `n` up to exponentially
//! small corrections; those polynomials are extracted from the grand
//! generating function
//!
//! ```text
//! sum_n F_n(t) x^(n-1) = t * u(x) / (1 - t * h(x)),
//!     u(x) = sum_r p_r (1 + x + ... + x^(i_r - 1)),
//!     h(x) = sum_r p_r x^(i_r),
//! ```
//!
//! by applying the Euler operator `theta = t d/dt`, setting `t = 1` and
//! reading off the principal part at `x = 1`.

use serde::{Deserialize, Serialize};

use crate::comb::{binomial, factorial};
use crate::error::{Error, Result};
use crate::markov::DieFace;
use crate::poly::Poly;
use crate::rational::Rational;
use crate::seriesfit::{fit_precursive, PRecurrence};

/// A die whose faces all move the pile forward.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositiveDie {
    pub faces: Vec<DieFace>,
}

impl PositiveDie {
    pub fn new(faces: Vec<DieFace>) -> Result<Self> {
        let die = PositiveDie { faces };
        die.validate()?;
        Ok(die)
    }

    /// Uniform die on steps `1..=k`.
    pub fn fair(k: u32) -> Self {
        let p = Rational::from_int(k as i64).recip().expect("k >= 1");
        PositiveDie {
            faces: (1..=k)
                .map(|step| DieFace {
                    step,
                    prob: p.clone(),
                })
                .collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.faces.is_empty() {
            return Err(Error::InvalidDie("die has no faces".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        let mut total = Rational::zero();
        for f in &self.faces {
            if f.step == 0 {
                return Err(Error::InvalidDie("steps must be >= 1".into()));
            }
            if !seen.insert(f.step) {
                return Err(Error::InvalidDie(format!("duplicate step {}", f.step)));
            }
            if !f.prob.is_positive() {
                return Err(Error::InvalidDie(format!(
                    "face {} has non-positive probability",
                    f.step
                )));
            }
            total += &f.prob;
        }
        if !total.is_one() {
            return Err(Error::InvalidDie(format!(
                "face probabilities sum to {total}, expected 1"
            )));
        }
        Ok(())
    }

    pub fn max_step(&self) -> u32 {
        self.faces.iter().map(|f| f.step).max().unwrap_or(0)
    }

    /// `E[P] = sum_r i_r p_r`.
    pub fn mean_step(&self) -> Rational {
        let mut acc = Rational::zero();
        for f in &self.faces {
            acc += &(&f.prob * &Rational::from_int(f.step as i64));
        }
        acc
    }
}

/// `F_0 .. F_n_max` in one backward pass: `F_0 = 1` and
/// `F_m = t * sum_r p_r F_{max(m - i_r, 0)}`.
pub fn duration_pgf_table(die: &PositiveDie, n_max: usize) -> Result<Vec<Poly>> {
    die.validate()?;
    let mut table: Vec<Poly> = Vec::with_capacity(n_max + 1);
    table.push(Poly::one());
    for m in 1..=n_max {
        let mut acc = Poly::zero();
        for f in &die.faces {
            let prev = m.saturating_sub(f.step as usize);
            acc = &acc + &table[prev].scale(&f.prob);
        }
        table.push(acc.shift_up(1));
    }
    Ok(table)
}

/// PGF of the number of rounds needed to reach at least `n`.
pub fn duration_pgf_exact(die: &PositiveDie, n: usize) -> Result<Poly> {
    Ok(duration_pgf_table(die, n)?.pop().expect("table nonempty"))
}

/// `b_{k,n} = C(k-1, n-k) (3k-n) / ((2k-n) 2^k)` for the fair `{1,2}` die:
/// the probability that goal `n` is first reached exactly at round `k`.
/// Only valid when `2k > n`; callers fall back to `duration_pgf_exact`
/// outside that range.
pub fn b_closed_form(k: i64, n: i64) -> Result<Rational> {
    if k < 0 || n < 0 || 2 * k <= n {
        return Err(Error::OutsideClosedFormDomain { k, n });
    }
    if n < k {
        return Ok(Rational::zero());
    }
    // here 1 <= k <= n and n - k <= k - 1, so the binomial is in range
    let num = &binomial((k - 1) as usize, (n - k) as usize) * &Rational::from_int(3 * k - n);
    let den = &Rational::from_int(2 * k - n) * &Rational::from_int(2).pow(k as i32)?;
    num.checked_div(&den)
}

/// Polynomial-in-`n` part of a duration moment; the true moment differs from
/// `poly_part(n)` by an exponentially small amount.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymptoticMoment {
    pub order: usize,
    pub poly_part: Poly,
}

/// Raw moment polynomials `M_0(n) .. M_kmax(n)`.
///
/// With `theta = t d/dt`, geometric expansion of the grand generating
/// function gives `theta^k G |_{t=1} = u(x) B_k(h(x)) / (1 - h(x))^(k+1)`
/// where the `B_k` satisfy `B_0 = 1`,
/// `B_{k+1} = (B_k + z B_k')(1 - z) + (k+1) z B_k`. Writing
/// `1 - h = (1 - x) q(x)` and Taylor-expanding the regular factor at `x = 1`
/// turns the principal part into `sum_j A_j / (1-x)^(j+1)`, and the
/// coefficient of `x^(n-1)` is `sum_j A_j C(n-1+j, j)`.
pub fn asymptotic_raw_moments(die: &PositiveDie, kmax: usize) -> Result<Vec<Poly>> {
    die.validate()?;
    let mut u = Poly::zero();
    let mut h = Poly::zero();
    for f in &die.faces {
        let s = f.step as usize;
        u = &u + &Poly::new(vec![f.prob.clone(); s]);
        h = &h + &Poly::monomial(f.prob.clone(), s);
    }
    let one_minus_x = Poly::from_ints(&[1, -1]);
    let q = (&Poly::one() - &h).exact_div(&one_minus_x);
    let at = Rational::one();
    let mut b = Poly::one();
    let mut raws = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        let num = &u * &b.compose(&h);
        let den = q.pow((k + 1) as u32);
        let rho = series_quotient(&num.taylor_at(&at, k), &den.taylor_at(&at, k))?;
        let mut m = Poly::zero();
        for j in 0..=k {
            // (x - 1)^s = (-1)^s (1 - x)^s, so A_j picks up a sign
            let mut c = rho[k - j].clone();
            if (k - j) % 2 == 1 {
                c = -c;
            }
            m = &m + &binom_shift_poly(j).scale(&c);
        }
        raws.push(m);
        let advanced = &b + &b.derivative().shift_up(1);
        b = &(&advanced * &one_minus_x) + &b.shift_up(1).scale(&Rational::from_int(k as i64 + 1));
    }
    Ok(raws)
}

/// Raw `k`-th moment polynomial of the duration for goal `n`.
pub fn asymptotic_moment(die: &PositiveDie, k: usize) -> Result<AsymptoticMoment> {
    let poly_part = asymptotic_raw_moments(die, k)?.pop().expect("k-th entry");
    Ok(AsymptoticMoment { order: k, poly_part })
}

/// Central `k`-th moment polynomial (`k >= 2`), via the binomial transform of
/// the raw moment polynomials.
pub fn asymptotic_central_moment(die: &PositiveDie, k: usize) -> Result<AsymptoticMoment> {
    if k < 2 {
        return Err(Error::InvalidParameter(
            "central moments start at order 2".into(),
        ));
    }
    let raws = asymptotic_raw_moments(die, k)?;
    let neg_mean = -&raws[1];
    let mut acc = Poly::zero();
    for (i, raw) in raws.iter().enumerate() {
        let term = raw * &neg_mean.pow((k - i) as u32);
        acc = &acc + &term.scale(&binomial(k, i));
    }
    Ok(AsymptoticMoment {
        order: k,
        poly_part: acc,
    })
}

/// `a(1) .. a(n_max)` where `a(n) = sum_k b_{k,n}^2` is the probability that
/// two independent players finish in the same round; the first mover wins
/// with probability `(1 + a(n)) / 2`.
pub fn exact_win_prob_sequence(die: &PositiveDie, n_max: usize) -> Result<Vec<Rational>> {
    let table = duration_pgf_table(die, n_max)?;
    Ok(table[1..]
        .iter()
        .map(|f| {
            let mut acc = Rational::zero();
            for c in f.coeffs() {
                acc += &(c * c);
            }
            acc
        })
        .collect())
}

/// First mover's winning probability `(1 + a(n)) / 2` in the two-player race
/// to goal `n`.
pub fn two_player_win_prob(die: &PositiveDie, n: usize) -> Result<Rational> {
    if n == 0 {
        return Err(Error::InvalidParameter("goal must be >= 1".into()));
    }
    let a = exact_win_prob_sequence(die, n)?.pop().expect("n >= 1");
    Ok(&(&Rational::one() + &a) * &Rational::ratio(1, 2))
}

/// Fits a polynomial-coefficient recurrence for `a(n)` from `n_terms` exact
/// values, holdout-verified. Indexing matches `a(n)` itself: the sequence is
/// anchored with `a(0) = 1` (both players are done after zero rounds).
pub fn win_prob_recurrence(die: &PositiveDie, n_terms: usize) -> Result<PRecurrence> {
    let mut seq = vec![Rational::one()];
    seq.extend(exact_win_prob_sequence(die, n_terms)?);
    fit_precursive(&seq, 5, 3).map_err(|e| match e {
        Error::NeedMoreTerms { .. } => e,
        _ => Error::VerificationFailed(format!(
            "no recurrence of order <= 5, degree <= 3 fits {n_terms} terms; increase n_terms"
        )),
    })
}

/// Power-series quotient of two Taylor expansions of equal length.
fn series_quotient(num: &[Rational], den: &[Rational]) -> Result<Vec<Rational>> {
    let d0 = den[0].recip()?;
    let mut out: Vec<Rational> = Vec::with_capacity(num.len());
    for s in 0..num.len() {
        let mut acc = num[s].clone();
        for i in 0..s {
            acc -= &(&out[i] * &den[s - i]);
        }
        out.push(&acc * &d0);
    }
    Ok(out)
}

/// `C(n-1+j, j)` as a polynomial in `n`.
fn binom_shift_poly(j: usize) -> Poly {
    let mut p = Poly::one();
    for i in 0..j {
        p = &p * &Poly::new(vec![Rational::from_int(i as i64), Rational::one()]);
    }
    p.scale(&factorial(j).recip().expect("factorial positive"))
}
