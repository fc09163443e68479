//! Absorbing-chain board games: board descriptions to Markov processes,
//! duration PGFs, exact moments, and two-player winning probabilities.
//!
//! States are numbered 1..=N with state N the absorbing (winning) square.
//! The PGF solver uses evaluation-interpolation: the defining linear system
//! f_v(t) = t * sum_u p_vu f_u(t) is solved at integer values of t. The
//! forward-moving part of a board is a DAG, so back substitution collapses it
//! and only the snake-feedback states remain in a small dense solve whose
//! determinant equals the full system's determinant (the unit-triangular DAG
//! block contributes 1). Numerators and the shared denominator are then
//! recovered exactly by Newton interpolation and re-verified at held-out
//! sample points.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::comb::binomial;
use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::poly::Poly;
use crate::ratfun::RationalFunction;
use crate::rational::Rational;
use crate::seriesfit::fit_cfinite;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DieFace {
    pub step: u32,
    pub prob: Rational,
}

/// A snakes-and-ladders style board. Squares are 1..=size; play starts on
/// square 1 and the game ends on square size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoardSpec {
    pub size: usize,
    pub die: Vec<DieFace>,
    #[serde(default)]
    pub ladders: Vec<(usize, usize)>,
    #[serde(default)]
    pub snakes: Vec<(usize, usize)>,
}

impl BoardSpec {
    pub fn validate(&self) -> Result<()> {
        if self.size < 2 {
            return Err(Error::InvalidBoard("board needs at least two squares".into()));
        }
        if self.die.is_empty() {
            return Err(Error::InvalidDie("die has no faces".into()));
        }
        let mut total = Rational::zero();
        for f in &self.die {
            if f.step == 0 {
                return Err(Error::InvalidDie("die steps must be positive".into()));
            }
            if f.prob.is_zero() || f.prob.is_negative() {
                return Err(Error::InvalidDie("face probabilities must be positive".into()));
            }
            total += &f.prob;
        }
        if total != Rational::one() {
            return Err(Error::InvalidDie(format!(
                "face probabilities sum to {total}, not 1"
            )));
        }
        let mut sources = BTreeSet::new();
        let mut targets = BTreeSet::new();
        for (list, up) in [(&self.ladders, true), (&self.snakes, false)] {
            for &(from, to) in list {
                if from < 1 || from >= self.size || to < 1 || to > self.size {
                    return Err(Error::InvalidBoard(format!(
                        "jump {from} -> {to} leaves the board (or starts on the final square)"
                    )));
                }
                if up && from >= to {
                    return Err(Error::InvalidBoard(format!("ladder {from} -> {to} must go up")));
                }
                if !up && from <= to {
                    return Err(Error::InvalidBoard(format!("snake {from} -> {to} must go down")));
                }
                if !sources.insert(from) {
                    return Err(Error::InvalidBoard(format!(
                        "square {from} is the source of two jumps"
                    )));
                }
                targets.insert(to);
            }
        }
        if let Some(sq) = sources.intersection(&targets).next() {
            return Err(Error::InvalidBoard(format!(
                "square {sq} is both a jump source and a jump target (chained jumps)"
            )));
        }
        Ok(())
    }
}

/// Absorbing Markov process over states 1..=state_count; the last state is
/// absorbing and `transitions[v-1]` lists (target, probability) pairs for
/// transient state v.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovProcess {
    pub state_count: usize,
    pub transitions: Vec<Vec<(usize, Rational)>>,
}

impl MarkovProcess {
    pub fn transient_count(&self) -> usize {
        self.state_count - 1
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.state_count;
        if n < 2 {
            return Err(Error::InvalidBoard("need at least one transient state".into()));
        }
        if self.transitions.len() != n - 1 {
            return Err(Error::InvalidBoard(format!(
                "expected {} transition rows, found {}",
                n - 1,
                self.transitions.len()
            )));
        }
        let mut rev: Vec<Vec<usize>> = vec![vec![]; n + 1];
        for (i, row) in self.transitions.iter().enumerate() {
            let v = i + 1;
            if row.is_empty() {
                return Err(Error::InvalidBoard(format!("state {v} has no outgoing edges")));
            }
            let mut total = Rational::zero();
            for (u, p) in row {
                if *u < 1 || *u > n {
                    return Err(Error::InvalidBoard(format!("state {v} targets {u}, out of range")));
                }
                if p.is_zero() || p.is_negative() {
                    return Err(Error::InvalidBoard(format!(
                        "state {v} has a nonpositive transition probability"
                    )));
                }
                total += p;
                rev[*u].push(v);
            }
            if total != Rational::one() {
                return Err(Error::InvalidBoard(format!(
                    "state {v} outgoing probabilities sum to {total}, not 1"
                )));
            }
        }
        // every transient state must be able to reach the absorbing one
        let mut reach = vec![false; n + 1];
        reach[n] = true;
        let mut queue = vec![n];
        while let Some(u) = queue.pop() {
            for &v in &rev[u] {
                if !reach[v] {
                    reach[v] = true;
                    queue.push(v);
                }
            }
        }
        for v in 1..n {
            if !reach[v] {
                return Err(Error::UnreachableAbsorbing(v));
            }
        }
        Ok(())
    }
}

/// Move to clamp(v + step, size), then follow at most one jump.
pub fn build_board_process(spec: &BoardSpec) -> Result<MarkovProcess> {
    spec.validate()?;
    let n = spec.size;
    let mut jump = BTreeMap::new();
    for &(from, to) in spec.ladders.iter().chain(&spec.snakes) {
        jump.insert(from, to);
    }
    let mut transitions = Vec::with_capacity(n - 1);
    for v in 1..n {
        let mut row: BTreeMap<usize, Rational> = BTreeMap::new();
        for face in &spec.die {
            let mut u = (v + face.step as usize).min(n);
            if let Some(&to) = jump.get(&u) {
                u = to;
            }
            *row.entry(u).or_insert_with(Rational::zero) += &face.prob;
        }
        transitions.push(row.into_iter().collect());
    }
    let m = MarkovProcess { state_count: n, transitions };
    m.validate()?;
    Ok(m)
}

/// Duration PGFs before reduction: state v has PGF `numerators[v-1] /
/// shared_den`, with one denominator common to every state (Theorem-1 form).
#[derive(Clone, Debug)]
pub struct DurationSolution {
    pub numerators: Vec<Poly>,
    pub shared_den: Poly,
}

impl DurationSolution {
    pub fn pgf(&self, state: usize) -> Result<RationalFunction> {
        RationalFunction::new(self.numerators[state - 1].clone(), self.shared_den.clone())
    }

    pub fn pgfs(&self) -> Result<Vec<RationalFunction>> {
        (1..=self.numerators.len()).map(|v| self.pgf(v)).collect()
    }
}

/// Solves f_v(t) = t * sum_u p_vu f_u(t), f_N = 1 for every transient state.
pub fn solve_duration_raw(m: &MarkovProcess) -> Result<DurationSolution> {
    m.validate()?;
    let n = m.state_count;
    let trans = n - 1;

    // feedback states: targets of backward or self edges; everything else is
    // resolvable by substitution in decreasing state order
    let mut is_feedback = vec![false; n];
    for v in 1..n {
        for &(u, _) in &m.transitions[v - 1] {
            if u <= v {
                is_feedback[u] = true;
            }
        }
    }
    let fb: Vec<usize> = (1..n).filter(|&u| is_feedback[u]).collect();
    let fidx: BTreeMap<usize, usize> = fb.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let width = fb.len() + 1; // affine form: constant + one slot per feedback unknown

    // evaluate (f_1..f_{N-1}, det(I - tP)) at t = tau; None if tau is a root
    // of the determinant
    let eval_at = |tau: &Rational| -> Result<Option<(Vec<Rational>, Rational)>> {
        let mut affine: Vec<Vec<Rational>> = vec![vec![]; n];
        for v in (1..n).rev() {
            let mut acc = vec![Rational::zero(); width];
            for (u, p) in &m.transitions[v - 1] {
                let tp = tau * p;
                if *u == n {
                    acc[0] += &tp;
                } else if *u > v {
                    for (j, c) in affine[*u].iter().enumerate() {
                        acc[j] += &(&tp * c);
                    }
                } else {
                    acc[1 + fidx[u]] += &tp;
                }
            }
            affine[v] = acc;
        }
        let k = fb.len();
        let solved = if k == 0 {
            (vec![], Rational::one())
        } else {
            let mut mat = Mat::zeros(k, k);
            let mut rhs = vec![Rational::zero(); k];
            for (i, &s) in fb.iter().enumerate() {
                for j in 0..k {
                    let mut entry = -&affine[s][1 + j];
                    if i == j {
                        entry += &Rational::one();
                    }
                    *mat.at_mut(i, j) = entry;
                }
                rhs[i] = affine[s][0].clone();
            }
            match linalg::solve_with_det(&mat, &rhs) {
                Ok(sol) => sol,
                Err(Error::EliminationDegenerate(_)) => return Ok(None),
                Err(e) => return Err(e),
            }
        };
        let (x, det) = solved;
        let vals = (1..n)
            .map(|v| {
                let mut acc = affine[v][0].clone();
                for j in 0..fb.len() {
                    acc += &(&affine[v][1 + j] * &x[j]);
                }
                acc
            })
            .collect();
        Ok(Some((vals, det)))
    };

    // numerators and determinant all have degree <= trans; collect trans+1
    // interpolation points plus three held out for verification
    let needed = trans + 4;
    let mut pts: Vec<(Rational, Vec<Rational>, Rational)> = Vec::with_capacity(needed);
    let mut tau = 0i64;
    while pts.len() < needed {
        let t = Rational::from(tau);
        if let Some((vals, det)) = eval_at(&t)? {
            pts.push((t, vals, det));
        }
        tau += 1;
    }
    let (fit, held) = pts.split_at(trans + 1);

    let den_pts: Vec<(Rational, Rational)> =
        fit.iter().map(|(t, _, d)| (t.clone(), d.clone())).collect();
    let shared_den = linalg::newton_interpolate(&den_pts);
    let mut numerators = Vec::with_capacity(trans);
    for v in 1..n {
        let num_pts: Vec<(Rational, Rational)> = fit
            .iter()
            .map(|(t, vals, d)| (t.clone(), &vals[v - 1] * d))
            .collect();
        numerators.push(linalg::newton_interpolate(&num_pts));
    }

    for (t, vals, d) in held {
        if &shared_den.eval(t) != d {
            return Err(Error::VerificationFailed(
                "interpolated denominator disagrees at a held-out point".into(),
            ));
        }
        for v in 1..n {
            if numerators[v - 1].eval(t) != &vals[v - 1] * d {
                return Err(Error::VerificationFailed(format!(
                    "interpolated numerator for state {v} disagrees at a held-out point"
                )));
            }
        }
    }
    let at_one = shared_den.eval(&Rational::one());
    if at_one.is_zero() {
        return Err(Error::VerificationFailed("denominator vanishes at t = 1".into()));
    }
    for (v, num) in numerators.iter().enumerate() {
        if num.eval(&Rational::one()) != at_one {
            return Err(Error::VerificationFailed(format!(
                "PGF for state {} does not normalize to 1",
                v + 1
            )));
        }
    }
    Ok(DurationSolution { numerators, shared_den })
}

pub fn solve_duration_pgfs(m: &MarkovProcess) -> Result<Vec<RationalFunction>> {
    solve_duration_raw(m)?.pgfs()
}

/// Exact k-th raw moment (t d/dt)^k f at t = 1.
pub fn pgf_moment(f: &RationalFunction, k: usize) -> Result<Rational> {
    let mut thetas = f.theta_at_one(k)?;
    Ok(thetas.pop().unwrap())
}

/// Exact moments of the game duration for every transient start state.
#[derive(Clone, Debug)]
pub struct GameStats {
    pub expectation: Rational,
    pub variance: Rational,
    /// central moments of orders 3..=k, when requested
    pub central_moments: Vec<Rational>,
    /// decimal renderings (24 significant digits)
    pub standard_deviation: String,
    pub skewness: Option<String>,
    pub kurtosis: Option<String>,
}

const STAT_DIGITS: usize = 24;

fn stats_from_raw(raw: &[Rational]) -> Result<GameStats> {
    let k = raw.len() - 1;
    let m1 = raw[1].clone();
    // powers of -m1 for the raw-to-central binomial transform
    let mut neg_pow = vec![Rational::one()];
    for _ in 0..k {
        neg_pow.push(-&(neg_pow.last().unwrap() * &m1));
    }
    let mut central = vec![Rational::one(), Rational::zero()];
    for j in 2..=k {
        let mut mu = Rational::zero();
        for i in 0..=j {
            mu += &(&(&binomial(j, i) * &raw[i]) * &neg_pow[j - i]);
        }
        central.push(mu);
    }
    let variance = central[2].clone();
    if variance.is_negative() {
        return Err(Error::VerificationFailed("negative variance".into()));
    }
    let sd = variance.sqrt_floor(40)?;
    let standard_deviation = sd.to_decimal(STAT_DIGITS);
    let skewness = (k >= 3 && !variance.is_zero()).then(|| {
        let sq = &(&central[3] * &central[3]) / &(&(&variance * &variance) * &variance);
        let mag = sq.abs().sqrt_floor(40).unwrap().to_decimal(16);
        if central[3].is_negative() {
            format!("-{mag}")
        } else {
            mag
        }
    });
    let kurtosis = (k >= 4 && !variance.is_zero())
        .then(|| (&central[4] / &(&variance * &variance)).to_decimal(16));
    Ok(GameStats {
        expectation: m1,
        variance,
        central_moments: central[3.min(central.len())..].to_vec(),
        standard_deviation,
        skewness,
        kurtosis,
    })
}

/// Raw theta-moments by repeated differentiation of the defining linear
/// system, evaluated at t = 1: a triangular sequence of purely rational
/// solves, one per moment order, with no rational-function arithmetic.
pub fn moments_by_linear_solve(m: &MarkovProcess, k: usize) -> Result<Vec<GameStats>> {
    if k < 1 {
        return Err(Error::InvalidParameter("moment order must be at least 1".into()));
    }
    m.validate()?;
    let k = k.max(2); // variance is part of GameStats
    let n = m.state_count;
    let trans = n - 1;
    let mut a = Mat::identity(trans);
    for v in 1..n {
        for (u, p) in &m.transitions[v - 1] {
            if *u < n {
                *a.at_mut(v - 1, u - 1) -= p;
            }
        }
    }
    // raw[j][v-1] = theta^j f_v (1); theta^j f_N(1) = [j = 0]
    let mut raw: Vec<Vec<Rational>> = vec![vec![Rational::one(); trans]];
    for j in 1..=k {
        let mut rhs = vec![Rational::zero(); trans];
        for v in 1..n {
            for (u, p) in &m.transitions[v - 1] {
                let mut s = Rational::zero();
                for i in 0..j {
                    let mu = if *u == n {
                        if i == 0 {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    } else {
                        raw[i][*u - 1].clone()
                    };
                    s += &(&binomial(j, i) * &mu);
                }
                rhs[v - 1] += &(p * &s);
            }
        }
        raw.push(linalg::solve(&a, &rhs)?);
    }
    (0..trans)
        .map(|vi| {
            let per_state: Vec<Rational> = (0..=k).map(|j| raw[j][vi].clone()).collect();
            stats_from_raw(&per_state)
        })
        .collect()
}

/// The rational function with coefficients ([t^k]f)^2, reconstructed by
/// fitting a C-finite recurrence of order at most L(L+1)/2 (L = denominator
/// degree) to the squared series and re-verifying 20 extra coefficients.
pub fn hadamard_square(f: &RationalFunction) -> Result<RationalFunction> {
    let l = f.den().deg0();
    if l == 0 {
        // polynomial: square the coefficients directly
        let num = f.num().exact_div(f.den());
        return Ok(RationalFunction::from_poly(Poly::new(
            num.coeffs().iter().map(|c| c * c).collect(),
        )));
    }
    let max_order = l * (l + 1) / 2;
    let need = 3 * max_order + 10;
    let series = f.series(need + 20)?;
    let squared: Vec<Rational> = series.iter().map(|c| c * c).collect();
    let rec = fit_cfinite(&squared[..need], max_order)?;
    if !rec.holds_for(&squared) {
        return Err(Error::VerificationFailed(
            "hadamard square recurrence fails on verification coefficients".into(),
        ));
    }
    rec.to_rational_function()
}

/// Pr[first mover wins] = (1 + sum_k a_k^2) / 2 for two identical players,
/// ties going to the mover.
pub fn win_prob_exact(f: &RationalFunction) -> Result<Rational> {
    if f.eval(&Rational::one())? != Rational::one() {
        return Err(Error::InvalidParameter("win_prob_exact needs f(1) = 1".into()));
    }
    let g = hadamard_square(f)?;
    let s = g.eval(&Rational::one())?;
    Ok(&(&Rational::one() + &s) / &Rational::from(2))
}

const ROUND_CAP: usize = 1_000_000;

/// Certified bracket on Pr[first mover wins]: truncates both PGFs once both
/// tails drop below eps; the unseen winning mass is at most tail1 * tail2.
pub fn win_prob_approx(
    f1: &RationalFunction,
    f2: &RationalFunction,
    eps: &Rational,
) -> Result<(Rational, Rational)> {
    if eps.is_zero() || eps.is_negative() {
        return Err(Error::InvalidParameter("eps must be positive".into()));
    }
    if f1.eval(&Rational::one())? != Rational::one() || f2.eval(&Rational::one())? != Rational::one()
    {
        return Err(Error::InvalidParameter("win_prob_approx needs f(1) = 1".into()));
    }
    let mut cap = 64usize;
    loop {
        let a = f1.series(cap + 1)?;
        let b = f2.series(cap + 1)?;
        let mass = |s: &[Rational]| {
            let mut t = Rational::zero();
            for c in s {
                t += c;
            }
            t
        };
        let tail1 = &Rational::one() - &mass(&a);
        let tail2 = &Rational::one() - &mass(&b);
        if &tail1 <= eps && &tail2 <= eps {
            // lower = sum_{k <= cap} a_k Pr[T2 >= k], all certainly-winning mass
            let mut lower = Rational::zero();
            let mut b_before = Rational::zero(); // Pr[T2 <= k-1]
            for k in 0..=cap {
                lower += &(&a[k] * &(&Rational::one() - &b_before));
                b_before += &b[k];
            }
            let upper = &lower + &(&tail1 * &tail2);
            return Ok((lower, upper));
        }
        cap *= 2;
        if cap > ROUND_CAP {
            return Err(Error::CapExceeded { cap: ROUND_CAP, context: "win_prob_approx truncation".into() });
        }
    }
}

/// DP oracle: exact distribution of the absorption round starting from
/// `start`, as probabilities a_0..a_rounds.
pub fn duration_distribution(m: &MarkovProcess, start: usize, rounds: usize) -> Vec<Rational> {
    let n = m.state_count;
    let mut occupancy = vec![Rational::zero(); n + 1];
    let mut out = Vec::with_capacity(rounds + 1);
    if start == n {
        out.push(Rational::one());
    } else {
        occupancy[start] = Rational::one();
        out.push(Rational::zero());
    }
    for _ in 1..=rounds {
        let mut next = vec![Rational::zero(); n + 1];
        let mut absorbed = Rational::zero();
        for v in 1..n {
            if occupancy[v].is_zero() {
                continue;
            }
            for (u, p) in &m.transitions[v - 1] {
                let mass = &occupancy[v] * p;
                if *u == n {
                    absorbed += &mass;
                } else {
                    next[*u] += &mass;
                }
            }
        }
        occupancy = next;
        out.push(absorbed);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn toy_spec() -> BoardSpec {
        serde_json::from_str(
            r#"{"size":7,
                "die":[{"step":1,"prob":"1/2"},{"step":2,"prob":"1/2"}],
                "ladders":[[1,3]],
                "snakes":[[4,2]]}"#,
        )
        .unwrap()
    }

    fn toy_process() -> MarkovProcess {
        build_board_process(&toy_spec()).unwrap()
    }

    #[test]
    fn toy_board_transitions() {
        let m = toy_process();
        let h = r("1/2");
        let expected = vec![
            vec![(2, h.clone()), (3, h.clone())],
            vec![(2, h.clone()), (3, h.clone())],
            vec![(2, h.clone()), (5, h.clone())],
            vec![(5, h.clone()), (6, h.clone())],
            vec![(6, h.clone()), (7, h.clone())],
            vec![(7, Rational::one())],
        ];
        assert_eq!(m.transitions, expected);
    }

    #[test]
    fn board_spec_json_round_trip() {
        let spec = toy_spec();
        let text = serde_json::to_string(&spec).unwrap();
        let back: BoardSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(spec, back);
    }

    #[test]
    fn toy_pgf_is_the_printed_rational_function() {
        let fs = solve_duration_pgfs(&toy_process()).unwrap();
        // t^3 (1+t) / (2 (4 - 2t - t^2))
        let expected = RationalFunction::new(
            Poly::from_ints(&[0, 0, 0, 1, 1]),
            Poly::from_ints(&[8, -4, -2]),
        )
        .unwrap();
        assert_eq!(fs[0], expected);
    }

    #[test]
    fn deterministic_chain_pgfs() {
        let spec: BoardSpec = serde_json::from_str(
            r#"{"size":3,"die":[{"step":1,"prob":"1/1"}]}"#,
        )
        .unwrap();
        let fs = solve_duration_pgfs(&build_board_process(&spec).unwrap()).unwrap();
        assert_eq!(fs[0], RationalFunction::from_poly(Poly::from_ints(&[0, 0, 1])));
        assert_eq!(fs[1], RationalFunction::from_poly(Poly::from_ints(&[0, 1])));
    }

    #[test]
    fn shared_denominator_witness_and_normalization() {
        let sol = solve_duration_raw(&toy_process()).unwrap();
        assert_eq!(sol.shared_den.coeff(0), Rational::one()); // det(I) at t = 0
        for v in 1..=sol.numerators.len() {
            let f = sol.pgf(v).unwrap();
            assert_eq!(f.eval(&Rational::one()).unwrap(), Rational::one());
            // each reduced denominator divides the shared one
            let (_, rem) = sol.shared_den.divrem(f.den()).unwrap();
            assert!(rem.is_zero());
        }
    }

    #[test]
    fn toy_moments_match_both_paths() {
        let m = toy_process();
        let f1 = &solve_duration_pgfs(&m).unwrap()[0];
        assert_eq!(pgf_moment(f1, 1).unwrap(), r("15/2"));
        assert_eq!(pgf_moment(f1, 2).unwrap(), r("157/2"));
        let stats = moments_by_linear_solve(&m, 2).unwrap();
        assert_eq!(stats[0].expectation, r("15/2"));
        assert_eq!(stats[0].variance, r("89/4"));
        // agreement across all states
        let fs = solve_duration_pgfs(&m).unwrap();
        for (f, s) in fs.iter().zip(&stats) {
            assert_eq!(pgf_moment(f, 1).unwrap(), s.expectation);
            let m2 = pgf_moment(f, 2).unwrap();
            assert_eq!(&m2 - &(&s.expectation * &s.expectation), s.variance);
        }
    }

    #[test]
    fn dp_oracle_matches_rational_series() {
        let m = toy_process();
        let fs = solve_duration_pgfs(&m).unwrap();
        for v in 1..m.state_count {
            let dp = duration_distribution(&m, v, 40);
            assert_eq!(fs[v - 1].series(41).unwrap(), dp);
        }
    }

    #[test]
    fn hadamard_square_examples() {
        let geo = RationalFunction::new(Poly::one(), Poly::new(vec![r("1"), r("-1/2")])).unwrap();
        let g = hadamard_square(&geo).unwrap();
        let expected =
            RationalFunction::new(Poly::one(), Poly::new(vec![r("1"), r("-1/4")])).unwrap();
        assert_eq!(g, expected);

        let t = RationalFunction::from_poly(Poly::from_ints(&[0, 1]));
        assert_eq!(hadamard_square(&t).unwrap(), t);
    }

    #[test]
    fn toy_win_probabilities() {
        let f1 = solve_duration_pgfs(&toy_process()).unwrap().remove(0);
        let g = hadamard_square(&f1).unwrap();
        assert_eq!(g.eval(&Rational::one()).unwrap(), r("1/10"));
        assert_eq!(win_prob_exact(&f1).unwrap(), r("11/20"));

        let t = RationalFunction::from_poly(Poly::from_ints(&[0, 1]));
        assert_eq!(win_prob_exact(&t).unwrap(), Rational::one());
        let half_half = RationalFunction::new(
            Poly::new(vec![r("0"), r("1/2"), r("1/2")]),
            Poly::one(),
        )
        .unwrap();
        assert_eq!(win_prob_exact(&half_half).unwrap(), r("3/4"));
    }

    #[test]
    fn win_prob_bracket_contains_exact_value() {
        let f1 = solve_duration_pgfs(&toy_process()).unwrap().remove(0);
        let eps = r("1/1000");
        let (lo, hi) = win_prob_approx(&f1, &f1, &eps).unwrap();
        let exact = r("11/20");
        assert!(lo <= exact && exact <= hi);
        assert!(&hi - &lo <= &eps * &eps);

        let t = RationalFunction::from_poly(Poly::from_ints(&[0, 1]));
        let (lo, hi) = win_prob_approx(&t, &t, &eps).unwrap();
        assert_eq!(lo, Rational::one());
        assert_eq!(hi, Rational::one());
    }

    #[test]
    fn validation_rejects_bad_boards() {
        let bad_die: BoardSpec = serde_json::from_str(
            r#"{"size":5,"die":[{"step":1,"prob":"1/3"},{"step":2,"prob":"1/3"}]}"#,
        )
        .unwrap();
        assert!(matches!(bad_die.validate(), Err(Error::InvalidDie(_))));

        let dup: BoardSpec = serde_json::from_str(
            r#"{"size":9,"die":[{"step":1,"prob":"1"}],"snakes":[[4,2],[4,3]]}"#,
        )
        .unwrap();
        assert!(matches!(dup.validate(), Err(Error::InvalidBoard(_))));

        let chained: BoardSpec = serde_json::from_str(
            r#"{"size":9,"die":[{"step":1,"prob":"1"}],"ladders":[[2,5]],"snakes":[[5,3]]}"#,
        )
        .unwrap();
        assert!(matches!(chained.validate(), Err(Error::InvalidBoard(_))));
    }

    #[test]
    fn absorbing_must_be_reachable() {
        let spec: BoardSpec = serde_json::from_str(
            r#"{"size":4,"die":[{"step":1,"prob":"1"}],"snakes":[[2,1],[3,1]]}"#,
        )
        .unwrap();
        assert!(matches!(
            build_board_process(&spec),
            Err(Error::UnreachableAbsorbing(_))
        ));
    }
}
