//! Exact truncated first-passage PGFs for arbitrary dice and goals.
//!
//! The iteration tracks the "still running" scenarios as a Laurent
//! polynomial `F_i(x)` over positions below the goal:
//!
//! ```text
//! F_0 = 1,  A = F_{i-1} * h,  F_i = A - G[A],  f_i = f_{i-1} + G[A](1) t^i,
//! ```
//!
//! where `h(x) = sum p_s x^s` is the step polynomial and `G` keeps the
//! part supported on exponents `>= m` (the walkers that just finished).
//! Everything is rational, so probability is conserved exactly at every
//! step.

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::rational::Rational;
use crate::ruin::GeneralDie;

/// Cutoff value that makes [`positive_part`] the identity.
pub const NO_CUTOFF: i64 = i64::MIN;

/// The part of `p` supported on exponents `>= m`.
pub fn positive_part(p: &LaurentPoly, m: i64) -> LaurentPoly {
    p.split_at(m).1
}

/// Exact truncation of the first-passage-to-`>= m` PGF after `K` rounds.
#[derive(Clone, Debug)]
pub struct TruncatedPGF {
    /// `coeffs[k]` = probability of finishing exactly at round `k`.
    pub coeffs: Vec<Rational>,
    pub goal: usize,
    /// Final `F_K(x)`: mass still in play, by position.
    pub residual_state: LaurentPoly,
    /// `f_K(1) = sum coeffs`.
    pub captured_mass: Rational,
}

impl TruncatedPGF {
    /// `(t d/dt)^j f_K |_{t=1} / f_K(1)`, the j-th moment conditioned on
    /// finishing within the truncation horizon. `j = 0` gives 1.
    pub fn conditional_moment(&self, j: usize) -> Result<Rational> {
        if self.captured_mass.is_zero() {
            return Err(Error::InvalidParameter(
                "no mass captured within the truncation horizon".into(),
            ));
        }
        Ok(&self.theta_derivative(j) / &self.captured_mass)
    }

    /// Unnormalized `(t d/dt)^j f_K |_{t=1} = sum k^j coeffs[k]`.
    pub fn theta_derivative(&self, j: usize) -> Rational {
        let mut acc = Rational::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc += &(c * &Rational::from_int(k as i64).pow(j as i32).expect("nonnegative power"));
        }
        acc
    }
}

fn step_poly(die: &GeneralDie) -> LaurentPoly {
    let mut h = LaurentPoly::zero();
    for face in &die.faces {
        h.add_term(face.step, face.prob.clone());
    }
    h
}

/// Run the exact iteration for `K` rounds.
pub fn truncated_pgf(die: &GeneralDie, m: usize, k: usize) -> Result<TruncatedPGF> {
    die.validate()?;
    if m == 0 || k == 0 {
        return Err(Error::InvalidParameter("need goal m >= 1 and K >= 1".into()));
    }
    let h = step_poly(die);
    let cutoff = m as i64;
    let max_down = die.max_down() as i64;

    let mut coeffs = vec![Rational::zero(); k + 1];
    let mut state = LaurentPoly::one();
    let mut captured = Rational::zero();
    for i in 1..=k {
        let advanced = state.mul(&h);
        let (still_running, finished) = advanced.split_at(cutoff);
        coeffs[i] = finished.sum_coeffs();
        captured += &coeffs[i];
        state = still_running;
        // exact conservation and support bounds, every step
        assert!(
            (&captured + &state.sum_coeffs()).is_one(),
            "probability must be conserved exactly"
        );
        if let (Some(lo), Some(hi)) = (state.min_exp(), state.max_exp()) {
            assert!(lo >= -(i as i64) * max_down, "support grew below the walk range");
            assert!(hi <= cutoff - 1, "running mass at or above the goal");
        }
        if state.is_zero() {
            break;
        }
    }
    Ok(TruncatedPGF {
        coeffs,
        goal: m,
        residual_state: state,
        captured_mass: captured,
    })
}

/// Pruned variant for very deep truncations: coefficients of `F_i` smaller
/// than `threshold` are dropped and their total mass is returned alongside
/// the (now slightly lossy) truncation. Conservation then reads
/// `captured + residual(1) + dropped = 1` exactly, so the second return
/// value is a certified bound on everything the pruning lost.
pub fn truncated_pgf_pruned(
    die: &GeneralDie,
    m: usize,
    k: usize,
    threshold: &Rational,
) -> Result<(TruncatedPGF, Rational)> {
    die.validate()?;
    if m == 0 || k == 0 {
        return Err(Error::InvalidParameter("need goal m >= 1 and K >= 1".into()));
    }
    if threshold.is_negative() {
        return Err(Error::InvalidParameter("pruning threshold must be >= 0".into()));
    }
    let h = step_poly(die);
    let cutoff = m as i64;

    let mut coeffs = vec![Rational::zero(); k + 1];
    let mut state = LaurentPoly::one();
    let mut captured = Rational::zero();
    let mut dropped = Rational::zero();
    for i in 1..=k {
        let advanced = state.mul(&h);
        let (still_running, finished) = advanced.split_at(cutoff);
        coeffs[i] = finished.sum_coeffs();
        captured += &coeffs[i];
        let mut pruned = LaurentPoly::zero();
        for (e, c) in still_running.iter() {
            if c.abs() < *threshold {
                dropped += c;
            } else {
                pruned.add_term(e, c.clone());
            }
        }
        state = pruned;
        assert!((&(&captured + &state.sum_coeffs()) + &dropped).is_one());
        if state.is_zero() {
            break;
        }
    }
    Ok((
        TruncatedPGF { coeffs, goal: m, residual_state: state, captured_mass: captured },
        dropped,
    ))
}

const DEFAULT_K_CAP: usize = 1_000_000;

/// Double `K` until the tail mass `1 - f_K(1)` drops to `eps` or the cap is
/// hit (positive drift terminates; zero/negative drift will exhaust the
/// cap for small `eps`).
pub fn truncate_to_tail(die: &GeneralDie, m: usize, eps: &Rational) -> Result<TruncatedPGF> {
    truncate_to_tail_capped(die, m, eps, DEFAULT_K_CAP)
}

pub fn truncate_to_tail_capped(
    die: &GeneralDie,
    m: usize,
    eps: &Rational,
    cap: usize,
) -> Result<TruncatedPGF> {
    if !eps.is_positive() {
        return Err(Error::InvalidParameter("tail target must be positive".into()));
    }
    let mut k = 64usize;
    loop {
        let t = truncated_pgf(die, m, k)?;
        if &(&Rational::one() - &t.captured_mass) <= eps {
            return Ok(t);
        }
        if k >= cap {
            return Err(Error::CapExceeded {
                cap,
                context: format!(
                    "tail mass still {} after {k} rounds (goal {m})",
                    (&Rational::one() - &t.captured_mass).to_decimal(3)
                ),
            });
        }
        k = (2 * k).min(cap);
    }
}
