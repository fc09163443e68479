//! Gambler's ruin with unlimited credit.
//!
//! A walker starts at 0 and moves by integer steps drawn from a fixed die
//! with at least one negative face; the game ends the first time the
//! position becomes positive (>= 1). The generating function of the game
//! length is algebraic. This module builds the quadratic `W_{a,b}` weight
//! enumerator system, extracts exact series coefficients by dynamic
//! programming, fits/eliminates the algebraic equation `P(f, t) = 0`, and
//! turns moments into algebraic numbers with explicit integer annihilating
//! polynomials.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::comb::{binomial, factorial};
use crate::error::{Error, Result};
use crate::intpoly::{factor_squarefree, isolate_real_roots, refine_root, squarefree_part};
use crate::mpoly::{mpoly_resultant, BivarPoly, MPoly};
use crate::poly::Poly;
use crate::rational::Rational;
use crate::seriesfit::fit_algebraic;

/// One face of a die whose steps may point either way. Serialized with the
/// same field names as the pile-game die, so positive-step JSON files work
/// in both places.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedFace {
    pub step: i64,
    pub prob: Rational,
}

/// A die with nonzero integer steps; negative steps allowed (and required
/// for the general W_{a,b} pipeline).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralDie {
    pub faces: Vec<SignedFace>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Drift {
    Positive,
    Zero,
    Negative,
}

impl GeneralDie {
    pub fn new(faces: Vec<SignedFace>) -> Result<Self> {
        let die = GeneralDie { faces };
        die.validate()?;
        Ok(die)
    }

    /// Die taking `+1` with probability `p` and `-k` otherwise (the
    /// Fuss-Catalan family).
    pub fn fuss(k: u32, p: &Rational) -> Result<Self> {
        GeneralDie::new(vec![
            SignedFace { step: 1, prob: p.clone() },
            SignedFace { step: -(k as i64), prob: &Rational::one() - p },
        ])
    }

    /// Die taking `-1` with probability `p` and `+k` otherwise (the mixed
    /// case).
    pub fn mixed(k: u32, p: &Rational) -> Result<Self> {
        GeneralDie::new(vec![
            SignedFace { step: -1, prob: p.clone() },
            SignedFace { step: k as i64, prob: &Rational::one() - p },
        ])
    }

    pub fn validate(&self) -> Result<()> {
        if self.faces.is_empty() {
            return Err(Error::InvalidDie("die has no faces".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        let mut total = Rational::zero();
        for face in &self.faces {
            if face.step == 0 {
                return Err(Error::InvalidDie("step 0 is not allowed".into()));
            }
            if !seen.insert(face.step) {
                return Err(Error::InvalidDie(format!("duplicate step {}", face.step)));
            }
            if !face.prob.is_positive() {
                return Err(Error::InvalidDie(format!(
                    "face {} has non-positive probability {}",
                    face.step, face.prob
                )));
            }
            total += &face.prob;
        }
        if !total.is_one() {
            return Err(Error::InvalidDie(format!("probabilities sum to {total}, not 1")));
        }
        Ok(())
    }

    /// Positive steps with their probabilities, sorted by step.
    pub fn up_steps(&self) -> Vec<(u64, Rational)> {
        let mut ups: Vec<(u64, Rational)> = self
            .faces
            .iter()
            .filter(|f| f.step > 0)
            .map(|f| (f.step as u64, f.prob.clone()))
            .collect();
        ups.sort_by_key(|(s, _)| *s);
        ups
    }

    /// Magnitudes of negative steps with their probabilities, sorted.
    pub fn down_steps(&self) -> Vec<(u64, Rational)> {
        let mut downs: Vec<(u64, Rational)> = self
            .faces
            .iter()
            .filter(|f| f.step < 0)
            .map(|f| ((-f.step) as u64, f.prob.clone()))
            .collect();
        downs.sort_by_key(|(s, _)| *s);
        downs
    }

    pub fn max_up(&self) -> u64 {
        self.faces.iter().map(|f| f.step.max(0) as u64).max().unwrap_or(0)
    }

    pub fn max_down(&self) -> u64 {
        self.faces.iter().map(|f| (-f.step).max(0) as u64).max().unwrap_or(0)
    }

    /// Expected step `sum p_i * step_i`.
    pub fn drift(&self) -> Rational {
        let mut d = Rational::zero();
        for face in &self.faces {
            d += &(&face.prob * &Rational::from_int(face.step));
        }
        d
    }

    pub fn drift_class(&self) -> Drift {
        let d = self.drift();
        if d.is_positive() {
            Drift::Positive
        } else if d.is_zero() {
            Drift::Zero
        } else {
            Drift::Negative
        }
    }
}

/// Fuss-Catalan number `C_{k,m} = ((k+1)m)! / (m! (km+1)!)`; `k = 1` gives
/// the Catalan numbers.
pub fn fuss_catalan_coeff(k: usize, m: usize) -> BigInt {
    assert!(k >= 1, "fuss_catalan_coeff needs k >= 1");
    let c = &factorial((k + 1) * m) / &(&factorial(m) * &factorial(k * m + 1));
    debug_assert!(c.is_integer());
    c.numer().clone()
}

/// Brute-force cycle-lemma oracle: number of `{+1, -k}` words of length
/// `(k+1)m + 1` containing `m` down-steps, with total sum 1 and every
/// proper prefix sum <= 0. The cycle lemma says this equals `C_{k,m}`.
pub fn cycle_lemma_count(k: usize, m: usize) -> u64 {
    fn go(len_left: usize, downs_left: usize, sum: i64, k: i64) -> u64 {
        if len_left == 0 {
            return u64::from(downs_left == 0 && sum == 1);
        }
        if sum > 0 {
            // a proper prefix went positive
            return 0;
        }
        let mut total = 0;
        if downs_left < len_left {
            total += go(len_left - 1, downs_left, sum + 1, k);
        }
        if downs_left > 0 {
            total += go(len_left - 1, downs_left - 1, sum - k, k);
        }
        total
    }
    go((k + 1) * m + 1, m, 0, k as i64)
}

/// Exact probability that the `{+1 w.p. p, -1 w.p. 1-p}` walk first reaches
/// `m` at round `2n + m`: `m (2n+m-1)! p^{n+m} (1-p)^n / (n! (n+m)!)`.
pub fn first_passage_prob_oracle(n: usize, m: usize, p: &Rational) -> Rational {
    assert!(m >= 1, "first passage target must be >= 1");
    let q = &Rational::one() - p;
    let count = &(&factorial(2 * n + m - 1) * &Rational::from_int(m as i64))
        / &(&factorial(n) * &factorial(n + m));
    let weight = &p.pow((n + m) as i32).expect("nonnegative power")
        * &q.pow(n as i32).expect("nonnegative power");
    &count * &weight
}

/// Algebraic first-passage PGF: the defining polynomial `P(f, t) = 0`
/// together with a cached series prefix that it annihilates.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraicPGF {
    pub equation: BivarPoly,
    pub series: Vec<Rational>,
    #[serde(skip, default = "drift_default")]
    pub drift_class: Drift,
}

fn drift_default() -> Drift {
    Drift::Zero
}

impl AlgebraicPGF {
    /// `P(f(t), t) = 0` through the whole cached window.
    pub fn annihilates_series(&self) -> bool {
        self.equation
            .eval_on_series(&self.series, self.series.len())
            .iter()
            .all(Rational::is_zero)
    }
}

fn convolve_trunc(a: &[Rational], b: &[Rational], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if y.is_zero() {
                continue;
            }
            out[i + j] += &(x * y);
        }
    }
    out
}

/// Collapse a 3-variable `MPoly` known to be free of `var` 0 into a
/// `BivarPoly` in `(vars[0], vars[1])`.
fn mpoly_to_bivar(p: &MPoly, fvar: usize, tvar: usize) -> BivarPoly {
    let df = p.degree_in(fvar);
    let dt = p.degree_in(tvar);
    let mut grid = vec![vec![Rational::zero(); dt + 1]; df + 1];
    for (exps, c) in p.iter() {
        for (v, e) in exps.iter().enumerate() {
            debug_assert!(v == fvar || v == tvar || *e == 0, "unexpected variable survived");
        }
        grid[exps[fvar] as usize][exps[tvar] as usize] += c;
    }
    BivarPoly::new(grid.into_iter().map(Poly::new).collect())
}

/// PGF of the first passage to `n` for steps `{+1 w.p. p, -1 w.p. 1-p}`.
/// The `n = 1` equation is `(1-p) t f^2 - f + p t = 0`; the general PGF is
/// its n-th power, with the annihilating equation obtained by eliminating
/// the base solution.
pub fn catalan_pgf(p: &Rational, n: usize) -> Result<AlgebraicPGF> {
    if !p.is_positive() || *p >= Rational::one() {
        return Err(Error::InvalidParameter(format!("need 0 < p < 1, got {p}")));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("goal n must be >= 1".into()));
    }
    let q = &Rational::one() - p;
    let base = BivarPoly::new(vec![
        Poly::new(vec![Rational::zero(), p.clone()]),
        Poly::constant(-&Rational::one()),
        Poly::new(vec![Rational::zero(), q]),
    ]);

    let len = 41 + 2 * n;
    let mut single = vec![Rational::zero(); len];
    let mut i = 0;
    while 2 * i + 1 < len {
        single[2 * i + 1] = first_passage_prob_oracle(i, 1, p);
        i += 1;
    }
    let mut series = single.clone();
    for _ in 1..n {
        series = convolve_trunc(&series, &single, len);
    }

    let equation = if n == 1 {
        base
    } else {
        // eliminate the base solution g from {base(g,t), y - g^n}
        let ring = 3; // g, y, t
        let mut base3 = MPoly::zero(ring);
        for (i, c) in base.fcoeffs().iter().enumerate() {
            for (j, r) in c.coeffs().iter().enumerate() {
                if !r.is_zero() {
                    base3.add_term(vec![i as u16, 0, j as u16], r.clone());
                }
            }
        }
        let mut power = MPoly::var(ring, 1);
        power.add_term(vec![n as u16, 0, 0], -&Rational::one());
        let r = mpoly_resultant(&base3, &power, 0)?;
        mpoly_to_bivar(&r, 1, 2).normalize()
    };

    let pgf = AlgebraicPGF {
        equation,
        series,
        drift_class: if *p > Rational::ratio(1, 2) {
            Drift::Positive
        } else if *p == Rational::ratio(1, 2) {
            Drift::Zero
        } else {
            Drift::Negative
        },
    };
    debug_assert!(pgf.annihilates_series());
    Ok(pgf)
}

/// Exact first-passage distribution by dynamic programming: `coeffs[k]` is
/// the probability that the walk first becomes positive at round `k <= K`.
pub fn wab_series(die: &GeneralDie, k: usize) -> Result<Vec<Rational>> {
    die.validate()?;
    let max_down = die.max_down() as usize;
    let mut coeffs = vec![Rational::zero(); k + 1];
    // state[d] = probability of sitting at -d, never having been positive
    let mut state = vec![Rational::one()];
    for round in 1..=k {
        let mut next = vec![Rational::zero(); state.len() + max_down];
        let mut absorbed = Rational::zero();
        for (d, mass) in state.iter().enumerate() {
            if mass.is_zero() {
                continue;
            }
            for face in &die.faces {
                let pos = face.step - d as i64;
                let contrib = mass * &face.prob;
                if pos >= 1 {
                    absorbed += &contrib;
                } else {
                    next[(-pos) as usize] += &contrib;
                }
            }
        }
        coeffs[round] = absorbed;
        while next.last().map_or(false, Rational::is_zero) {
            next.pop();
        }
        state = next;
        if state.is_empty() {
            break;
        }
    }
    Ok(coeffs)
}

/// f64 twin of [`wab_series`] for the recurrence-fixture numerics.
pub(crate) fn wab_series_f64(die: &GeneralDie, k: usize) -> Vec<f64> {
    let max_down = die.max_down() as usize;
    let faces: Vec<(i64, f64)> = die.faces.iter().map(|f| (f.step, f.prob.to_f64())).collect();
    let mut coeffs = vec![0.0; k + 1];
    let mut state = vec![1.0];
    for round in 1..=k {
        let mut next = vec![0.0; state.len() + max_down];
        let mut absorbed = 0.0;
        for (d, mass) in state.iter().enumerate() {
            if *mass == 0.0 {
                continue;
            }
            for (step, prob) in &faces {
                let pos = step - d as i64;
                let contrib = mass * prob;
                if pos >= 1 {
                    absorbed += contrib;
                } else {
                    next[(-pos) as usize] += contrib;
                }
            }
        }
        coeffs[round] = absorbed;
        state = next;
    }
    coeffs
}

/// The closed quadratic system for the weight enumerators `W_{a,b}` of
/// walks from `-a` to `-b` that never leave nonpositive territory.
///
/// Ring layout: variables `0..n` are the unknowns in discovery order, then
/// one `z_u` per up-step (sorted), then one `z_{-d}` per down-step.
#[derive(Clone, Debug)]
pub struct WabSystem {
    pub unknowns: Vec<(usize, usize)>,
    pub equations: Vec<MPoly>,
    pub z: MPoly,
    pub closed: bool,
    die: GeneralDie,
    /// Up-step sizes in ring order (variables `n..n+|U|`).
    pub ups: Vec<u64>,
    /// Down-step sizes in ring order (variables `n+|U|..`).
    pub downs: Vec<u64>,
}

const WAB_CLOSURE_CAP: usize = 4096;

/// Build the `W_{a,b}` system by fixed-point closure of the four schemas,
/// starting from the unknowns mentioned by the first-passage combination
/// `Z = sum_u (sum_{u'<u} W_{0,u'}) z_u`.
pub fn setup_wab_system(die: &GeneralDie) -> Result<WabSystem> {
    die.validate()?;
    let ups: Vec<u64> = die.up_steps().into_iter().map(|(s, _)| s).collect();
    let downs: Vec<u64> = die.down_steps().into_iter().map(|(s, _)| s).collect();
    if ups.is_empty() || downs.is_empty() {
        return Err(Error::InvalidDie(
            "the W_{a,b} system needs at least one positive and one negative step".into(),
        ));
    }

    // references made by the defining equation of W_{a,b}
    let refs = |a: usize, b: usize| -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        match (a, b) {
            (0, 0) => {
                for &d in &downs {
                    for &u in &ups {
                        out.push((d as usize - 1, u as usize - 1));
                    }
                }
            }
            (0, b) => {
                out.push((0, 0));
                for &d in &downs {
                    out.push((d as usize - 1, b - 1));
                }
            }
            (a, 0) => {
                out.push((0, 0));
                for &u in &ups {
                    out.push((a - 1, u as usize - 1));
                }
            }
            (a, b) => {
                out.push((a - 1, b - 1));
                out.push((0, b));
                for &u in &ups {
                    out.push((a - 1, u as usize - 1));
                }
            }
        }
        out
    };

    let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut order: Vec<(usize, usize)> = Vec::new();
    let mut work: Vec<(usize, usize)> = ups.iter().map(|&u| (0, u as usize - 1)).collect();
    while let Some(ab) = work.pop() {
        if index.contains_key(&ab) {
            continue;
        }
        index.insert(ab, order.len());
        order.push(ab);
        if order.len() > WAB_CLOSURE_CAP {
            return Err(Error::CapExceeded {
                cap: WAB_CLOSURE_CAP,
                context: "W_{a,b} closure did not stabilize".into(),
            });
        }
        work.extend(refs(ab.0, ab.1));
    }

    let n = order.len();
    let nvars = n + ups.len() + downs.len();
    let wv = |ab: (usize, usize)| MPoly::var(nvars, index[&ab]);
    let zu = |j: usize| MPoly::var(nvars, n + j);
    let zd = |j: usize| MPoly::var(nvars, n + ups.len() + j);

    let mut equations = Vec::with_capacity(n);
    for &(a, b) in &order {
        let rhs = match (a, b) {
            (0, 0) => {
                // W00 = 1 + (sum_{d,u} z_{-d} W_{d-1,u-1} z_u) W00
                let mut inner = MPoly::zero(nvars);
                for (dj, &d) in downs.iter().enumerate() {
                    for (uj, &u) in ups.iter().enumerate() {
                        inner = inner.add(
                            &zd(dj).mul(&wv((d as usize - 1, u as usize - 1))).mul(&zu(uj)),
                        );
                    }
                }
                MPoly::one(nvars).add(&inner.mul(&wv((0, 0))))
            }
            (0, b) => {
                // W_{0,b} = W00 (sum_d z_{-d} W_{d-1,b-1})
                let mut inner = MPoly::zero(nvars);
                for (dj, &d) in downs.iter().enumerate() {
                    inner = inner.add(&zd(dj).mul(&wv((d as usize - 1, b - 1))));
                }
                wv((0, 0)).mul(&inner)
            }
            (a, 0) => {
                // W_{a,0} = (sum_u W_{a-1,u-1} z_u) W00
                let mut inner = MPoly::zero(nvars);
                for (uj, &u) in ups.iter().enumerate() {
                    inner = inner.add(&wv((a - 1, u as usize - 1)).mul(&zu(uj)));
                }
                inner.mul(&wv((0, 0)))
            }
            (a, b) => {
                // W_{a,b} = W_{a-1,b-1} + (sum_u W_{a-1,u-1} z_u) W_{0,b}
                let mut inner = MPoly::zero(nvars);
                for (uj, &u) in ups.iter().enumerate() {
                    inner = inner.add(&wv((a - 1, u as usize - 1)).mul(&zu(uj)));
                }
                wv((a - 1, b - 1)).add(&inner.mul(&wv((0, b))))
            }
        };
        equations.push(wv((a, b)).sub(&rhs));
    }

    let mut z = MPoly::zero(nvars);
    for (uj, &u) in ups.iter().enumerate() {
        let mut partial = MPoly::zero(nvars);
        for below in 0..u as usize {
            partial = partial.add(&wv((0, below)));
        }
        z = z.add(&partial.mul(&zu(uj)));
    }

    Ok(WabSystem {
        unknowns: order,
        equations,
        z,
        closed: true,
        die: die.clone(),
        ups,
        downs,
    })
}

impl WabSystem {
    fn num_unknowns(&self) -> usize {
        self.unknowns.len()
    }

    /// Substitute `z_u = p_u t`, `z_{-d} = p_d t` into a system polynomial,
    /// producing a polynomial over `[W_0.., y, t]` (`y` unused here, kept so
    /// elimination can join a `y - Z` relation in the same ring).
    fn specialize(&self, p: &MPoly) -> MPoly {
        let n = self.num_unknowns();
        let probs: Vec<Rational> = {
            let ups = self.die.up_steps();
            let downs = self.die.down_steps();
            ups.into_iter().chain(downs).map(|(_, p)| p).collect()
        };
        let mut out = MPoly::zero(n + 2);
        for (exps, c) in p.iter() {
            let mut coeff = c.clone();
            let mut texp: u16 = 0;
            for (j, prob) in probs.iter().enumerate() {
                let e = exps[n + j];
                if e > 0 {
                    coeff = &coeff * &prob.pow(e as i32).expect("nonnegative power");
                    texp += e;
                }
            }
            let mut new_exps: Vec<u16> = exps[..n].to_vec();
            new_exps.push(0);
            new_exps.push(texp);
            out.add_term(new_exps, coeff);
        }
        out
    }

    /// Solve the specialized system as truncated power series in `t` by
    /// fixed-point iteration; returns one series (length `k+1`) per unknown.
    pub fn series_solution(&self, k: usize) -> Vec<Vec<Rational>> {
        let n = self.num_unknowns();
        let rhs: Vec<MPoly> = self
            .equations
            .iter()
            .enumerate()
            .map(|(i, eq)| MPoly::var(n + 2, i).sub(&self.specialize(eq)))
            .collect();
        let mut vals: Vec<Vec<Rational>> = self
            .unknowns
            .iter()
            .map(|&(a, b)| {
                let mut v = vec![Rational::zero(); k + 1];
                if a == b {
                    v[0] = Rational::one();
                }
                v
            })
            .collect();
        let mut tseries = vec![Rational::zero(); k + 1];
        if k >= 1 {
            tseries[1] = Rational::one();
        }
        let max_iters = 2 * (k + n) + 8;
        for _ in 0..max_iters {
            let mut changed = false;
            for i in 0..n {
                let mut inputs: Vec<&[Rational]> = vals.iter().map(|v| v.as_slice()).collect();
                let yseries = vec![Rational::zero(); k + 1];
                inputs.push(&yseries);
                inputs.push(&tseries);
                let new = eval_mpoly_series(&rhs[i], &inputs, k + 1);
                if new != vals[i] {
                    vals[i] = new;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        vals
    }

    /// First-passage series from the system solution (should match
    /// [`wab_series`] exactly).
    pub fn z_series(&self, k: usize) -> Vec<Rational> {
        let vals = self.series_solution(k);
        let mut inputs: Vec<&[Rational]> = vals.iter().map(|v| v.as_slice()).collect();
        let yseries = vec![Rational::zero(); k + 1];
        let mut tseries = vec![Rational::zero(); k + 1];
        if k >= 1 {
            tseries[1] = Rational::one();
        }
        inputs.push(&yseries);
        inputs.push(&tseries);
        eval_mpoly_series(&self.specialize(&self.z), &inputs, k + 1)
    }

    /// Eliminate every unknown from the specialized system joined with
    /// `y - Z`, leaving one polynomial relation `R(y, t) = 0` satisfied by
    /// the first-passage PGF. Resultant cascade; intended for small systems
    /// as a cross-check of the series-fit path.
    pub fn eliminate_pgf_equation(&self) -> Result<BivarPoly> {
        let n = self.num_unknowns();
        let yvar = n;
        let tvar = n + 1;
        let mut polys: Vec<MPoly> = self.equations.iter().map(|eq| self.specialize(eq)).collect();
        polys.push(MPoly::var(n + 2, yvar).sub(&self.specialize(&self.z)));

        for v in (0..n).rev() {
            let mut with_v: Vec<MPoly> = Vec::new();
            let mut rest: Vec<MPoly> = Vec::new();
            for p in polys {
                if p.degree_in(v) > 0 {
                    with_v.push(p);
                } else if !p.is_zero() {
                    rest.push(p);
                }
            }
            if with_v.is_empty() {
                polys = rest;
                continue;
            }
            with_v.sort_by_key(|p| p.degree_in(v));
            let pivot = with_v.remove(0);
            for p in with_v {
                let r = mpoly_resultant(&p, &pivot, v)?;
                if r.is_zero() {
                    return Err(Error::EliminationDegenerate(format!(
                        "resultant vanished while eliminating W_{:?}",
                        self.unknowns[v]
                    )));
                }
                rest.push(r.normalize_content());
            }
            polys = rest;
        }

        polys.retain(|p| p.degree_in(yvar) > 0);
        polys.sort_by_key(|p| (p.degree_in(yvar), p.total_degree()));
        match polys.into_iter().next() {
            Some(p) => Ok(mpoly_to_bivar(&p, yvar, tvar).normalize()),
            None => Err(Error::EliminationDegenerate(
                "no relation involving the PGF survived elimination".into(),
            )),
        }
    }
}

/// Evaluate an `MPoly` on truncated power series (one per ring variable).
fn eval_mpoly_series(p: &MPoly, vals: &[&[Rational]], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (exps, c) in p.iter() {
        let mut term = vec![Rational::zero(); len];
        term[0] = c.clone();
        for (v, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                term = convolve_trunc(&term, vals[v], len);
            }
        }
        for (o, t) in out.iter_mut().zip(term) {
            *o += &t;
        }
    }
    out
}

const FIT_MAX_TOTAL_DEGREE: usize = 12;
const FIT_MAX_TERMS: usize = 4096;

/// Fit-and-verify the algebraic equation of the first-passage PGF: grows
/// the exact series and the degree bound until `fit_algebraic` succeeds,
/// then re-verifies on a window twice the final fit size.
pub fn pgf_algebraic_equation(die: &GeneralDie) -> Result<AlgebraicPGF> {
    die.validate()?;
    if die.up_steps().is_empty() || die.down_steps().is_empty() {
        return Err(Error::InvalidDie(
            "need at least one positive and one negative step".into(),
        ));
    }
    let mut k = 64usize;
    let mut max_total = 6usize;
    loop {
        let series = wab_series(die, k)?;
        match fit_algebraic(&series, max_total) {
            Ok(equation) => {
                let double = wab_series(die, 2 * k)?;
                let residuals = equation.eval_on_series(&double, double.len());
                if residuals.iter().any(|c| !c.is_zero()) {
                    return Err(Error::VerificationFailed(
                        "fitted equation fails at doubled precision".into(),
                    ));
                }
                return Ok(AlgebraicPGF {
                    equation,
                    series: double,
                    drift_class: die.drift_class(),
                });
            }
            Err(Error::NeedMoreTerms { required, .. }) => {
                if required.max(2 * k) > FIT_MAX_TERMS {
                    return Err(Error::VerificationFailed(format!(
                        "no algebraic equation found with up to {k} series terms and total \
                         degree {max_total}; increase bounds"
                    )));
                }
                k = required.max(2 * k);
            }
            Err(Error::VerificationFailed(_)) if max_total < FIT_MAX_TOTAL_DEGREE => {
                max_total += 2;
            }
            Err(Error::VerificationFailed(_)) => {
                return Err(Error::VerificationFailed(format!(
                    "no algebraic equation found with up to {k} series terms and total degree \
                     {max_total}; increase bounds"
                )));
            }
            Err(e) => return Err(e),
        }
    }
}

/// Mixed-case PGF (Proposition-14 shape): steps `{-1 w.p. p, +k w.p. 1-p}`.
/// Assembled from the auxiliary relation
/// `g - 1 - p^k (1-p) t^{k+1} g^{k+1} = 0` and
/// `f = (1-p) t g sum_{i<k} (p t g)^i` by eliminating `g`.
pub fn mixed_case_pgf(k: usize, p: &Rational) -> Result<AlgebraicPGF> {
    if k < 1 {
        return Err(Error::InvalidParameter("need k >= 1".into()));
    }
    let bound = Rational::ratio(k as i64, k as i64 + 1);
    if !p.is_positive() || *p >= bound {
        return Err(Error::InvalidParameter(format!(
            "mixed case needs 0 < p < k/(k+1), got p = {p}"
        )));
    }
    let die = GeneralDie::mixed(k as u32, p)?;
    let q = &Rational::one() - p;

    // ring [g, y, t]
    let ring = 3;
    let g = MPoly::var(ring, 0);
    let y = MPoly::var(ring, 1);
    let t = MPoly::var(ring, 2);

    let coeff = &p.pow(k as i32).expect("nonnegative power") * &q;
    let mut rel = g.sub(&MPoly::one(ring));
    rel = rel.sub(
        &g.pow(k as u32 + 1)
            .mul(&t.pow(k as u32 + 1))
            .scale(&coeff),
    );

    // f = (1-p) t g * sum_{i=0}^{k-1} (p t g)^i
    let ptg = t.mul(&g).scale(p);
    let mut geom = MPoly::zero(ring);
    let mut pw = MPoly::one(ring);
    for _ in 0..k {
        geom = geom.add(&pw);
        pw = pw.mul(&ptg);
    }
    let fdef = y.sub(&t.mul(&g).scale(&q).mul(&geom));

    let r = mpoly_resultant(&rel, &fdef, 0)?;
    if r.is_zero() {
        return Err(Error::EliminationDegenerate(
            "mixed-case elimination produced the zero polynomial".into(),
        ));
    }
    let equation = mpoly_to_bivar(&r, 1, 2).normalize();

    let series = wab_series(&die, 80)?;
    let pgf = AlgebraicPGF {
        equation,
        series,
        drift_class: die.drift_class(),
    };
    if !pgf.annihilates_series() {
        return Err(Error::VerificationFailed(
            "mixed-case equation does not annihilate the walk series".into(),
        ));
    }
    Ok(pgf)
}

// ---------------------------------------------------------------------------
// Moments by implicit differentiation
//
// With theta = t d/dt and P(f, t) = 0, one shows inductively
//
//     theta^k f = N_k / P_f^(2k-1),
//     N_1 = -t P_t,
//     N_{k+1} = D(N_k) P_f - (2k-1) N_k D(P_f),   D(A) = t (A_t P_f - A_f P_t),
//
// all polynomial in (f, t). Where P_f is nonzero at (f(1), 1) the moments
// evaluate to rationals directly; where it vanishes they are algebraic and
// the relation `y P_f^(2k-1) - N_k = 0` is joined with `P = 0` by a
// resultant instead.
// ---------------------------------------------------------------------------

/// Numerator polynomials `N_1..N_j` of the theta-derivatives (2-variable
/// ring `[f, t]`); index 0 is unused.
fn theta_numerators(p: &MPoly, j: usize) -> Vec<MPoly> {
    let t = MPoly::var(2, 1);
    let pf = p.partial(0);
    let pt = p.partial(1);
    let dtilde =
        |a: &MPoly| t.mul(&a.partial(1).mul(&pf).sub(&a.partial(0).mul(&pt)));
    let mut out = vec![MPoly::zero(2)];
    if j == 0 {
        return out;
    }
    out.push(t.mul(&pt).neg());
    for k in 1..j {
        let next = dtilde(&out[k]).mul(&pf).sub(
            &out[k]
                .mul(&dtilde(&pf))
                .scale(&Rational::from_int(2 * k as i64 - 1)),
        );
        out.push(next);
    }
    out
}

/// `[g(1), theta g(1), ..., theta^j g(1)]` for the branch of `rel(g, t) = 0`
/// passing through `(g0, 1)`; needs `rel_g` nonsingular there.
fn theta_jet(rel: &MPoly, g0: &Rational, j: usize) -> Result<Vec<Rational>> {
    let point = [g0.clone(), Rational::one()];
    let den = rel.partial(0).eval_all(&point);
    if den.is_zero() {
        return Err(Error::EliminationDegenerate(
            "defining relation is singular at t = 1; the moment is not rational there".into(),
        ));
    }
    let mut out = vec![g0.clone()];
    let nks = theta_numerators(rel, j);
    for k in 1..=j {
        let num = nks[k].eval_all(&point);
        out.push(&num / &den.pow(2 * k as i32 - 1).expect("nonzero base"));
    }
    Ok(out)
}

/// Theta-values to the exponential jet `sum theta^i g / i! s^i` (the jet of
/// `g(e^s)` at `s = 0`, where theta becomes `d/ds`).
fn exp_jet(thetas: &[Rational]) -> Vec<Rational> {
    thetas
        .iter()
        .enumerate()
        .map(|(i, v)| v / &factorial(i))
        .collect()
}

fn jet_pow(jet: &[Rational], n: usize, len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    out[0] = Rational::one();
    for _ in 0..n {
        out = convolve_trunc(&out, jet, len);
    }
    out
}

/// Raw moments from an exponential jet of a PGF: `E[X^i] = i! jet[i]`.
fn raw_moments(jet: &[Rational]) -> Vec<Rational> {
    jet.iter().enumerate().map(|(i, v)| v * &factorial(i)).collect()
}

/// `j = 0`: total mass; `j = 1`: expectation; `j >= 2`: central moment.
fn requested_moment(raws: &[Rational], j: usize) -> Rational {
    match j {
        0 => raws[0].clone(),
        1 => raws[1].clone(),
        _ => {
            let neg_mean = -&raws[1];
            let mut acc = Rational::zero();
            for (i, raw) in raws.iter().enumerate().take(j + 1) {
                acc += &(&(&binomial(j, i) * raw)
                    * &neg_mean.pow((j - i) as i32).expect("nonnegative power"));
            }
            acc
        }
    }
}

/// Exact moments of the first passage to `n` for `{+1 w.p. p, -1 w.p. 1-p}`,
/// `p > 1/2`. Returns the expectation for `j = 1` and the j-th central
/// moment for `j >= 2`; expectation is `n/(2p-1)` and variance
/// `4np(1-p)/(2p-1)^3`.
pub fn catalan_moments(p: &Rational, n: usize, j: usize) -> Result<Rational> {
    if n == 0 {
        return Err(Error::InvalidParameter("goal n must be >= 1".into()));
    }
    if !p.is_positive() || *p > Rational::one() {
        return Err(Error::InvalidParameter(format!("need 0 < p <= 1, got {p}")));
    }
    let half = Rational::ratio(1, 2);
    if *p == half {
        return Err(Error::InfiniteMoment("zero drift: every moment diverges".into()));
    }
    if *p < half {
        return Err(Error::InfiniteMoment(
            "negative drift: the walk may never arrive; use conditional truncation moments".into(),
        ));
    }
    // goal-1 PGF g satisfies (1-p) t g^2 - g + p t = 0 and g(1) = 1
    let q = &Rational::one() - p;
    let mut rel = MPoly::zero(2);
    rel.add_term(vec![2, 1], q);
    rel.add_term(vec![1, 0], -&Rational::one());
    rel.add_term(vec![0, 1], p.clone());
    let thetas = theta_jet(&rel, &Rational::one(), j)?;
    let raws = raw_moments(&jet_pow(&exp_jet(&thetas), n, j + 1));
    Ok(requested_moment(&raws, j))
}

/// Exact moments of the first passage to `n` for `{+1 w.p. p, -k w.p. 1-p}`,
/// `p > k/(k+1)`. Same return convention as [`catalan_moments`]; the
/// expectation is `n/((p-1)k + p)`.
pub fn fuss_moments(k: usize, p: &Rational, n: usize, j: usize) -> Result<Rational> {
    if k == 0 || n == 0 {
        return Err(Error::InvalidParameter("need k >= 1 and n >= 1".into()));
    }
    if !p.is_positive() || *p > Rational::one() {
        return Err(Error::InvalidParameter(format!("need 0 < p <= 1, got {p}")));
    }
    let bound = Rational::ratio(k as i64, k as i64 + 1);
    if *p == bound {
        return Err(Error::InfiniteMoment("zero drift: every moment diverges".into()));
    }
    if *p < bound {
        return Err(Error::InfiniteMoment(
            "negative drift: the walk may never arrive; use conditional truncation moments".into(),
        ));
    }
    // auxiliary factor: g - 1 - p^k (1-p) t^(k+1) g^(k+1) = 0, g(1) = 1/p;
    // the goal-n PGF is (p t g)^n
    let q = &Rational::one() - p;
    let c = &p.pow(k as i32).expect("nonnegative power") * &q;
    let mut rel = MPoly::zero(2);
    rel.add_term(vec![1, 0], Rational::one());
    rel.add_term(vec![0, 0], -&Rational::one());
    rel.add_term(vec![k as u16 + 1, k as u16 + 1], -&c);
    let thetas = theta_jet(&rel, &p.recip()?, j)?;

    // jet of p t g at t = e^s: p * e^s * g-jet
    let es: Vec<Rational> = (0..=j).map(|i| factorial(i).recip().expect("nonzero")).collect();
    let base: Vec<Rational> = convolve_trunc(&exp_jet(&thetas), &es, j + 1)
        .into_iter()
        .map(|v| &v * p)
        .collect();
    let raws = raw_moments(&jet_pow(&base, n, j + 1));
    Ok(requested_moment(&raws, j))
}

/// Integer annihilating polynomial and isolating interval for an algebraic
/// moment.
#[derive(Clone, Debug)]
pub struct MinPolyResult {
    pub moment_order: usize,
    pub annihilating_poly: Poly,
    pub isolated_root: (Rational, Rational),
}

impl MinPolyResult {
    pub fn root_f64(&self) -> f64 {
        (&(&self.isolated_root.0 + &self.isolated_root.1) * &Rational::ratio(1, 2)).to_f64()
    }
}

/// f64 estimate of the j-th conditional moment of the first passage to 1,
/// used only to pick the right root of the annihilating polynomial.
fn numeric_moment_estimate(die: &GeneralDie, j: usize) -> f64 {
    let mut k = 1024usize;
    let mut last = f64::NAN;
    loop {
        let coeffs = wab_series_f64(die, k);
        let mut mass = 0.0;
        let mut acc = 0.0;
        for (i, c) in coeffs.iter().enumerate() {
            mass += c;
            acc += (i as f64).powi(j as i32) * c;
        }
        let est = acc / mass;
        if (est - last).abs() <= 1e-10 * est.abs().max(1.0) || k >= (1 << 17) {
            return est;
        }
        last = est;
        k *= 2;
    }
}

fn lift_ft_to_fyt(p: &MPoly) -> MPoly {
    let mut out = MPoly::zero(3);
    for (exps, c) in p.iter() {
        out.add_term(vec![exps[0], 0, exps[1]], c.clone());
    }
    out
}

fn mpoly_to_univar(p: &MPoly, var: usize) -> Poly {
    let mut coeffs = vec![Rational::zero(); p.degree_in(var) + 1];
    for (exps, c) in p.iter() {
        for (v, e) in exps.iter().enumerate() {
            debug_assert!(v == var || *e == 0);
        }
        coeffs[exps[var] as usize] += c;
    }
    Poly::new(coeffs)
}

/// Annihilator of `y = a_root / b_root` given annihilators of the parts:
/// eliminate `B` from `sum_i a_i (y B)^i` and `b(B)`.
fn ratio_annihilator(a: &Poly, b: &Poly) -> Result<Poly> {
    let mut t = MPoly::zero(2);
    for (i, c) in a.coeffs().iter().enumerate() {
        if !c.is_zero() {
            t.add_term(vec![i as u16, i as u16], c.clone());
        }
    }
    let mut bm = MPoly::zero(2);
    for (i, c) in b.coeffs().iter().enumerate() {
        if !c.is_zero() {
            bm.add_term(vec![0, i as u16], c.clone());
        }
    }
    let r = mpoly_resultant(&t, &bm, 1)?;
    if r.is_zero() {
        return Err(Error::EliminationDegenerate(
            "ratio elimination produced the zero polynomial".into(),
        ));
    }
    Ok(mpoly_to_univar(&r, 0))
}

/// Annihilating polynomial for the j-th moment `(t d/dt)^j f |_{t=1}` of a
/// first-passage PGF (divided by `f(1)` when the drift is negative), with
/// the root isolated to width 1e-13 and selected by the numeric estimate.
pub fn moment_min_poly(die: &GeneralDie, j: usize) -> Result<MinPolyResult> {
    let pgf = pgf_algebraic_equation(die)?;
    moment_min_poly_from(&pgf, die, j)
}

pub fn moment_min_poly_from(pgf: &AlgebraicPGF, die: &GeneralDie, j: usize) -> Result<MinPolyResult> {
    if j == 0 {
        return Err(Error::InvalidParameter("moment order must be >= 1".into()));
    }
    if die.drift_class() == Drift::Zero {
        return Err(Error::InfiniteMoment(
            "zero drift: the first-passage time has no finite moments".into(),
        ));
    }

    let p2 = pgf.equation.to_mpoly();
    let nj = theta_numerators(&p2, j).pop().expect("j >= 1");
    let pf = p2.partial(0);

    // join y P_f^(2j-1) - N_j with P and eliminate f
    let relation = MPoly::var(3, 1)
        .mul(&lift_ft_to_fyt(&pf.pow(2 * j as u32 - 1)))
        .sub(&lift_ft_to_fyt(&nj));
    let r = mpoly_resultant(&lift_ft_to_fyt(&p2), &relation, 0)?;
    if r.is_zero() {
        return Err(Error::EliminationDegenerate(
            "resultant of the equation with its derivative relation vanished".into(),
        ));
    }

    // strip (t-1)-factors until t = 1 gives a nonzero polynomial in y
    let mut grid = mpoly_to_bivar(&r, 1, 2);
    let one = Rational::one();
    let linear = Poly::from_ints(&[-1, 1]);
    let ann_raw = loop {
        let at_one: Vec<Rational> = grid.fcoeffs().iter().map(|c| c.eval(&one)).collect();
        if at_one.iter().any(|c| !c.is_zero()) {
            break Poly::new(at_one);
        }
        let divided: Result<Vec<Poly>> = grid
            .fcoeffs()
            .iter()
            .map(|c| {
                let (qt, rem) = c.divrem(&linear)?;
                debug_assert!(rem.is_zero());
                Ok(qt)
            })
            .collect();
        grid = BivarPoly::new(divided?);
    };

    let ann = if die.drift_class() == Drift::Negative {
        // conditional mode: the reported moment is theta^j f(1) / f(1)
        let b = squarefree_part(&pgf.equation.eval_t(&one));
        ratio_annihilator(&ann_raw, &b)?
    } else {
        ann_raw
    };
    if ann.degree().unwrap_or(0) == 0 {
        return Err(Error::EliminationDegenerate(
            "moment elimination left no dependence on the moment variable".into(),
        ));
    }

    let estimate = numeric_moment_estimate(die, j);
    let eps = Rational::ratio(1, 10_000_000_000_000);
    let mut best: Option<(f64, Poly, (Rational, Rational))> = None;
    for factor in factor_squarefree(&squarefree_part(&ann))? {
        if factor.degree().unwrap_or(0) == 0 {
            continue;
        }
        for (lo, hi) in isolate_real_roots(&factor) {
            let (lo, hi) = refine_root(&factor, &lo, &hi, &eps);
            let mid = (&(&lo + &hi) * &Rational::ratio(1, 2)).to_f64();
            let dist = (mid - estimate).abs();
            if best.as_ref().map_or(true, |(d, _, _)| dist < *d) {
                best = Some((dist, factor.clone(), (lo, hi)));
            }
        }
    }
    match best {
        Some((dist, factor, interval)) if dist <= 1e-6 * estimate.abs().max(1.0) => {
            Ok(MinPolyResult {
                moment_order: j,
                annihilating_poly: factor,
                isolated_root: interval,
            })
        }
        _ => Err(Error::VerificationFailed(format!(
            "no isolated root of the annihilating polynomial matches the numeric estimate \
             {estimate:.9} for moment order {j}"
        ))),
    }
}

/// Expected first-passage time to `>= m`.
#[derive(Clone, Debug)]
pub enum ReachExpectation {
    Exact(Rational),
    /// Truncation value with a certified-under-geometric-tail error bound.
    Numeric { value: f64, error_bound: f64 },
}

impl ReachExpectation {
    pub fn to_f64(&self) -> f64 {
        match self {
            ReachExpectation::Exact(v) => v.to_f64(),
            ReachExpectation::Numeric { value, .. } => *value,
        }
    }
}

/// Expected rounds for the walk to first reach `>= m`. Exact for dice that
/// cannot jump past intermediate levels going up (`U = {1}`, where the
/// goal-m PGF is the m-th power of the goal-1 PGF) and for all-positive
/// dice; otherwise a truncation value with an explicit tail bound.
pub fn reach_m_expectation(die: &GeneralDie, m: usize) -> Result<ReachExpectation> {
    die.validate()?;
    if m == 0 {
        return Err(Error::InvalidParameter("goal m must be >= 1".into()));
    }
    match die.drift_class() {
        Drift::Zero => {
            return Err(Error::InfiniteMoment("zero drift: infinite expected passage time".into()))
        }
        Drift::Negative => {
            return Err(Error::InfiniteMoment(
                "negative drift: arrival is not certain; use conditional truncation moments"
                    .into(),
            ))
        }
        Drift::Positive => {}
    }

    if die.down_steps().is_empty() {
        // pure pile game: exact DP expectation
        let faces = die
            .faces
            .iter()
            .map(|f| crate::markov::DieFace { step: f.step as u32, prob: f.prob.clone() })
            .collect();
        let pd = crate::pile::PositiveDie::new(faces)?;
        let pgf = crate::pile::duration_pgf_exact(&pd, m)?;
        return Ok(ReachExpectation::Exact(pgf.derivative().eval(&Rational::one())));
    }

    if die.max_up() == 1 {
        // skip-free upward: E[T_m] = m E[T_1], and E[T_1] is rational
        // because P_f does not vanish at (1, 1)
        let pgf = pgf_algebraic_equation(die)?;
        let p2 = pgf.equation.to_mpoly();
        let point = [Rational::one(), Rational::one()];
        let den = p2.partial(0).eval_all(&point);
        if !den.is_zero() {
            let e1 = &(-&p2.partial(1).eval_all(&point)) / &den;
            return Ok(ReachExpectation::Exact(&e1 * &Rational::from_int(m as i64)));
        }
    }

    // truncate and certify the tail against the observed geometric decay
    let mut k = 256usize;
    loop {
        let t = crate::truncate::truncated_pgf(die, m, k)?;
        let eps = (&Rational::one() - &t.captured_mass).to_f64();
        let value = t.theta_derivative(1).to_f64();
        if eps == 0.0 {
            return Ok(ReachExpectation::Numeric { value, error_bound: 0.0 });
        }
        let quarter = k / 4;
        let window = |from: usize, to: usize| -> f64 {
            t.coeffs[from..to].iter().map(Rational::to_f64).sum()
        };
        let s0 = window(k - 2 * quarter, k - quarter);
        let s1 = window(k - quarter, k);
        let error_bound = if s0 > 0.0 && s1 > 0.0 && s1 < s0 {
            let r = (s1 / s0).powf(1.0 / quarter as f64);
            2.0 * eps * ((k + 1) as f64 + r / (1.0 - r))
        } else {
            f64::INFINITY
        };
        if error_bound <= 1e-7 || k >= (1 << 12) {
            return Ok(ReachExpectation::Numeric { value, error_bound });
        }
        k *= 2;
    }
}

/// One of the transcribed two-player recurrences (Propositions 7, 8 and
/// 10 through 13). All describe `f(m) = sum_n b_{n,m}^2` where `b_{n,m}`
/// is the probability that a single player first reaches `m` at round `n`;
/// the mover's winning probability is `(1 + f(m))/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FixtureId {
    Prop7,
    Prop8,
    Prop10,
    Prop11,
    Prop12,
    Prop13,
}

impl FixtureId {
    pub fn all() -> [FixtureId; 6] {
        [
            FixtureId::Prop7,
            FixtureId::Prop8,
            FixtureId::Prop10,
            FixtureId::Prop11,
            FixtureId::Prop12,
            FixtureId::Prop13,
        ]
    }

    pub fn name(self) -> &'static str {
        match self {
            FixtureId::Prop7 => "prop7",
            FixtureId::Prop8 => "prop8",
            FixtureId::Prop10 => "prop10",
            FixtureId::Prop11 => "prop11",
            FixtureId::Prop12 => "prop12",
            FixtureId::Prop13 => "prop13",
        }
    }

    pub fn parse(s: &str) -> Option<FixtureId> {
        let s = s.trim().to_ascii_lowercase();
        let s = s.strip_prefix("prop").unwrap_or(&s);
        match s {
            "7" => Some(FixtureId::Prop7),
            "8" => Some(FixtureId::Prop8),
            "10" => Some(FixtureId::Prop10),
            "11" => Some(FixtureId::Prop11),
            "12" => Some(FixtureId::Prop12),
            "13" => Some(FixtureId::Prop13),
            _ => None,
        }
    }

    /// Magnitude of the losing step in the underlying `{+1, -k}` walk.
    pub fn down_step(self) -> u32 {
        match self {
            FixtureId::Prop7 | FixtureId::Prop8 => 1,
            FixtureId::Prop10 => 2,
            FixtureId::Prop11 => 3,
            FixtureId::Prop12 => 4,
            FixtureId::Prop13 => 5,
        }
    }

    /// The `p` this fixture is routinely checked at.
    pub fn default_p(self) -> Rational {
        match self {
            FixtureId::Prop7 => Rational::ratio(1, 2),
            FixtureId::Prop8 | FixtureId::Prop10 => Rational::ratio(3, 4),
            FixtureId::Prop11 => Rational::ratio(4, 5),
            FixtureId::Prop12 | FixtureId::Prop13 => Rational::ratio(9, 10),
        }
    }

    /// The `m` window this fixture is routinely checked over.
    pub fn default_m_range(self) -> std::ops::RangeInclusive<u32> {
        match self {
            FixtureId::Prop7 => 1..=8,
            FixtureId::Prop8 => 5..=15,
            FixtureId::Prop10 => 7..=20,
            FixtureId::Prop11 => 9..=20,
            FixtureId::Prop12 => 11..=22,
            FixtureId::Prop13 => 13..=24,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum FixtureRhs {
    Zero,
    NegEightOverPi,
}

/// A transcribed recurrence `sum_s coeff_s(m, p) f(m + shift_s) = rhs`.
/// Coefficients live in the two-variable polynomial ring with variable 0
/// standing for `m` and variable 1 for `p`. These tables are data: they are
/// only ever evaluated and checked against independently computed `f(m)`,
/// never re-derived.
struct TwoPlayerFixture {
    id: FixtureId,
    terms: Vec<(i64, MPoly)>,
    rhs: FixtureRhs,
}

fn two_player_fixture(id: FixtureId) -> TwoPlayerFixture {
    let m = || MPoly::var(2, 0);
    let p = || MPoly::var(2, 1);
    // m - n and p - 1
    let ms = |n: i64| m().sub(&MPoly::constant(2, Rational::from_int(n)));
    let pm1 = || p().sub(&MPoly::one(2));
    // a m^2 + b m + c
    let quad = |a: i64, b: i64, c: i64| {
        let mut out = MPoly::zero(2);
        out.add_term(vec![2, 0], Rational::from_int(a));
        out.add_term(vec![1, 0], Rational::from_int(b));
        out.add_term(vec![0, 0], Rational::from_int(c));
        out
    };
    match id {
        // (2m^2+5m+2) f(m+2) + (-12m^2-24m-10) f(m+1) + (2m^2+3m) f(m) = -8/pi
        FixtureId::Prop7 => TwoPlayerFixture {
            id,
            terms: vec![(2, quad(2, 5, 2)), (1, quad(-12, -24, -10)), (0, quad(2, 3, 0))],
            rhs: FixtureRhs::NegEightOverPi,
        },
        FixtureId::Prop8 => {
            // the third coefficient is printed fully expanded; transcribe it
            // monomial by monomial as (m-power, p-power, coefficient)
            let mut mid = MPoly::zero(2);
            for &(em, ep, c) in &[
                (2, 4, -2),
                (2, 3, 4),
                (1, 4, 8),
                (2, 2, -2),
                (1, 3, -16),
                (0, 4, -4),
                (1, 2, 8),
                (0, 3, 8),
                (2, 0, 1),
                (0, 2, -4),
                (1, 0, -4),
                (0, 0, 4),
            ] {
                mid.add_term(vec![em, ep], Rational::from_int(c));
            }
            TwoPlayerFixture {
                id,
                terms: vec![
                    (0, m().mul(&pm1().pow(4)).mul(&ms(3))),
                    (-1, pm1().pow(2).mul(&quad(2, -7, 4)).neg()),
                    (-2, mid),
                    (-3, p().pow(2).mul(&quad(2, -9, 8)).neg()),
                    (-4, p().pow(4).mul(&ms(1)).mul(&ms(4))),
                ],
                rhs: FixtureRhs::Zero,
            }
        }
        FixtureId::Prop10 => TwoPlayerFixture {
            id,
            terms: vec![
                (0, m().mul(&pm1().pow(4)).mul(&ms(5))),
                (-2, pm1().pow(2).mul(&quad(1, -6, 6)).scale(&Rational::from_int(-2))),
                (-3, p().pow(2).mul(&pm1().pow(2)).mul(&quad(2, -13, 12)).neg()),
                (-4, ms(3).mul(&ms(4))),
                (-5, p().pow(2).mul(&quad(2, -15, 24)).neg()),
                (-6, p().pow(4).mul(&ms(2)).mul(&ms(6))),
            ],
            rhs: FixtureRhs::Zero,
        },
        FixtureId::Prop11 => TwoPlayerFixture {
            id,
            terms: vec![
                (0, m().mul(&pm1().pow(4)).mul(&ms(7))),
                (-3, pm1().pow(2).mul(&quad(2, -17, 24)).neg()),
                (-4, p().pow(2).mul(&pm1().pow(2)).mul(&quad(1, -9, 12)).scale(&Rational::from_int(-2))),
                (-6, ms(4).mul(&ms(6))),
                (-7, p().pow(2).mul(&quad(2, -21, 48)).neg()),
                (-8, p().pow(4).mul(&ms(3)).mul(&ms(8))),
            ],
            rhs: FixtureRhs::Zero,
        },
        FixtureId::Prop12 => TwoPlayerFixture {
            id,
            terms: vec![
                (0, m().mul(&pm1().pow(4)).mul(&ms(9))),
                (-4, pm1().pow(2).mul(&quad(1, -11, 20)).scale(&Rational::from_int(-2))),
                (-5, p().pow(2).mul(&pm1().pow(2)).mul(&quad(2, -23, 40)).neg()),
                (-8, ms(5).mul(&ms(8))),
                (-9, p().pow(2).mul(&quad(2, -27, 80)).neg()),
                (-10, p().pow(4).mul(&ms(4)).mul(&ms(10))),
            ],
            rhs: FixtureRhs::Zero,
        },
        FixtureId::Prop13 => TwoPlayerFixture {
            id,
            terms: vec![
                (0, m().mul(&pm1().pow(4)).mul(&ms(11))),
                (-5, pm1().pow(2).mul(&quad(2, -27, 60)).neg()),
                (-6, p().pow(2).mul(&pm1().pow(2)).mul(&quad(1, -14, 30)).scale(&Rational::from_int(-2))),
                (-10, ms(6).mul(&ms(10))),
                (-11, p().pow(2).mul(&quad(2, -33, 120)).neg()),
                (-12, p().pow(4).mul(&ms(5)).mul(&ms(12))),
            ],
            rhs: FixtureRhs::Zero,
        },
    }
}

/// Checksum of the transcription, over a canonical rendering of the
/// coefficient tables. Frozen values live in the unit tests; any edit to a
/// table must consciously update them.
pub fn fixture_checksum(id: FixtureId) -> u64 {
    let fix = two_player_fixture(id);
    let mut s = format!(
        "{}|rhs={}",
        fix.id.name(),
        match fix.rhs {
            FixtureRhs::Zero => "0",
            FixtureRhs::NegEightOverPi => "-8/pi",
        }
    );
    for (shift, coeff) in &fix.terms {
        s.push_str(&format!("|{shift}:"));
        for (exps, c) in coeff.iter() {
            s.push_str(&format!("m{}p{}={};", exps[0], exps[1], c));
        }
    }
    let mut h: u64 = 5381;
    for b in s.bytes() {
        h = h.wrapping_mul(33) ^ u64::from(b);
    }
    h
}

/// Outcome of checking one transcribed recurrence against `f(m)` data that
/// was computed independently of it.
#[derive(Clone, Debug, Serialize)]
pub struct FixtureReport {
    pub fixture: FixtureId,
    pub p: Rational,
    pub checksum: String,
    /// Normalized residual per `m`: `|lhs - rhs|` over the largest term.
    pub residuals: Vec<(u32, f64)>,
    pub max_residual: f64,
    pub tolerance: f64,
    /// `(label, computed, reference)` for printed initial values.
    pub initial_value_checks: Vec<(String, f64, f64)>,
    pub ok: bool,
}

pub const FIXTURE_TOLERANCE: f64 = 1e-8;

/// Residuals of `sum_s coeff_s(m, p) f(m + s) = rhs` over `m_range`,
/// normalized by the largest participating term so that the scale of the
/// (rapidly growing) coefficients does not mask or inflate a mismatch.
fn recurrence_residuals(
    terms: &[(i64, MPoly)],
    p: &Rational,
    f: &[f64],
    rhs: f64,
    m_range: std::ops::RangeInclusive<u32>,
) -> Vec<(u32, f64)> {
    let mut out = Vec::new();
    for m in m_range {
        let point = [Rational::from_int(i64::from(m)), p.clone()];
        let mut lhs = 0.0;
        let mut scale = rhs.abs().max(1.0);
        for (shift, coeff) in terms {
            let c = coeff.eval_all(&point).to_f64();
            let term = c * f[(i64::from(m) + shift) as usize];
            lhs += term;
            scale = scale.max(term.abs());
        }
        out.push((m, (lhs - rhs).abs() / scale));
    }
    out
}

/// `f(m) = sum_n b_{n,m}^2` for the `{+1, -1}` walk, summed in f64 via the
/// term ratio `b_{n+1,m}/b_{n,m} = (2n+m+1)(2n+m) pq / ((n+1)(n+m+1))`.
///
/// With `geometric` set (p != 1/2) the terms decay like `(4pq)^n` and the
/// loop stops once they are negligible; hitting the cap first is an error.
/// At p = 1/2 the terms only decay like `m^2/(4 pi n^3)`, so the full
/// `n_cap` terms are summed and the truncation error is about
/// `m^2/(8 pi n_cap^2)`: below 1e-12 for m <= 10 at the default cap.
fn b_squared_table(p: f64, m_hi: u32, n_cap: usize, geometric: bool) -> Result<Vec<f64>> {
    let q = 1.0 - p;
    let mut table = vec![0.0; m_hi as usize + 1];
    for m in 1..=m_hi {
        let mf = f64::from(m);
        let mut b = p.powi(m as i32);
        let mut acc = b * b;
        let mut converged = !geometric;
        for n in 0..n_cap {
            let nf = n as f64;
            b *= (2.0 * nf + mf + 1.0) * (2.0 * nf + mf) * p * q / ((nf + 1.0) * (nf + mf + 1.0));
            let term = b * b;
            acc += term;
            if geometric && term < acc * 1e-18 && nf > 4.0 * mf + 64.0 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::CapExceeded {
                cap: n_cap,
                context: format!("b_{{n,{m}}} terms decay too slowly at p = {p}"),
            });
        }
        table[m as usize] = acc;
    }
    Ok(table)
}

fn convolve_trunc_f64(a: &[f64], b: &[f64], len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    for (i, ai) in a.iter().enumerate().take(len) {
        if *ai == 0.0 {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(len - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// `f(m) = sum_n b_{n,m}^2` for the `{+1 w.p. p, -k w.p. 1-p}` walk. All
/// up-steps are +1, so the first passage to `m` is the m-fold convolution
/// of the first passage to 1; the horizon doubles until the partial sums
/// stabilise (the first-passage coefficients decay geometrically above the
/// drift threshold, so the last doubling bounds the remaining tail).
fn fuss_f_table(k: u32, p: &Rational, m_hi: u32) -> Result<Vec<f64>> {
    let die = GeneralDie::fuss(k, p)?;
    let mut horizon = 2048usize;
    loop {
        let base = wab_series_f64(&die, horizon);
        let mut table = vec![0.0; m_hi as usize + 1];
        let mut stable = true;
        let mut cur = base.clone();
        for m in 1..=m_hi as usize {
            if m > 1 {
                cur = convolve_trunc_f64(&cur, &base, horizon + 1);
            }
            let full: f64 = cur.iter().map(|c| c * c).sum();
            let half: f64 = cur[..=horizon / 2].iter().map(|c| c * c).sum();
            if (full - half).abs() > 1e-12 * full.max(1.0) {
                stable = false;
                break;
            }
            table[m] = full;
        }
        if stable {
            return Ok(table);
        }
        if horizon >= (1 << 15) {
            return Err(Error::CapExceeded {
                cap: horizon,
                context: format!("first-passage series for k = {k}, p = {p} does not stabilise"),
            });
        }
        horizon *= 2;
    }
}

/// Check one transcribed two-player recurrence against `f(m)` computed
/// numerically from the first-passage distribution (the explicit `b_{n,m}`
/// formula for the `{+1,-1}` walks, the dynamic-programming series plus
/// convolution powers for the `{+1,-k}` walks). For Proposition 7 the
/// printed initial values `f(1) = (4-pi)/pi` and `f(2) = (16-5pi)/pi` are
/// checked too.
pub fn verify_twoplayer_recurrences(
    which: FixtureId,
    p: &Rational,
    m_range: std::ops::RangeInclusive<u32>,
) -> Result<FixtureReport> {
    let fix = two_player_fixture(which);
    let k = which.down_step();
    if which == FixtureId::Prop7 {
        if *p != Rational::ratio(1, 2) {
            return Err(Error::InvalidParameter(
                "proposition 7 is stated for the fair coin p = 1/2".into(),
            ));
        }
    } else {
        let lower = Rational::ratio(i64::from(k), i64::from(k) + 1);
        if *p <= lower || *p >= Rational::one() {
            return Err(Error::InvalidParameter(format!(
                "{} needs {}/{} < p < 1, got {p}",
                which.name(),
                k,
                k + 1
            )));
        }
    }
    let (m_lo, m_hi) = (*m_range.start(), *m_range.end());
    if m_lo == 0 || m_lo > m_hi {
        return Err(Error::InvalidParameter(format!("bad m range {m_lo}..={m_hi}")));
    }
    let min_shift = fix.terms.iter().map(|(s, _)| *s).min().unwrap();
    let max_shift = fix.terms.iter().map(|(s, _)| *s).max().unwrap();
    if i64::from(m_lo) + min_shift < 1 {
        return Err(Error::InvalidParameter(format!(
            "{} reaches back {} terms: m must start at {} or later",
            which.name(),
            -min_shift,
            1 - min_shift
        )));
    }
    let hi_needed = (i64::from(m_hi) + max_shift.max(0)) as u32;

    let f = match which {
        FixtureId::Prop7 => b_squared_table(0.5, hi_needed, 2_000_000, false)?,
        FixtureId::Prop8 => b_squared_table(p.to_f64(), hi_needed, 50_000_000, true)?,
        _ => fuss_f_table(k, p, hi_needed)?,
    };

    let pi = std::f64::consts::PI;
    let rhs = match fix.rhs {
        FixtureRhs::Zero => 0.0,
        FixtureRhs::NegEightOverPi => -8.0 / pi,
    };
    let residuals = recurrence_residuals(&fix.terms, p, &f, rhs, m_lo..=m_hi);
    let max_residual = residuals.iter().map(|(_, r)| *r).fold(0.0, f64::max);

    let mut initial_value_checks = Vec::new();
    if which == FixtureId::Prop7 {
        initial_value_checks.push(("f(1) = (4-pi)/pi".to_string(), f[1], (4.0 - pi) / pi));
        initial_value_checks.push(("f(2) = (16-5pi)/pi".to_string(), f[2], (16.0 - 5.0 * pi) / pi));
    }

    let ok = max_residual < FIXTURE_TOLERANCE
        && initial_value_checks.iter().all(|(_, got, want)| (got - want).abs() < 1e-6);
    Ok(FixtureReport {
        fixture: which,
        p: p.clone(),
        checksum: format!("{:016x}", fixture_checksum(which)),
        residuals,
        max_residual,
        tolerance: FIXTURE_TOLERANCE,
        initial_value_checks,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn die_from(faces: &[(i64, &str)]) -> GeneralDie {
        GeneralDie::new(
            faces
                .iter()
                .map(|(s, p)| SignedFace { step: *s, prob: r(p) })
                .collect(),
        )
        .unwrap()
    }

    fn prop16_die() -> GeneralDie {
        die_from(&[(-1, "1/4"), (-2, "1/8"), (1, "1/4"), (2, "3/8")])
    }

    #[test]
    fn die_validation_and_drift() {
        assert!(GeneralDie::new(vec![]).is_err());
        assert!(GeneralDie::new(vec![SignedFace { step: 0, prob: r("1") }]).is_err());
        assert!(GeneralDie::new(vec![
            SignedFace { step: 1, prob: r("1/2") },
            SignedFace { step: 1, prob: r("1/2") },
        ])
        .is_err());
        assert!(GeneralDie::new(vec![SignedFace { step: 1, prob: r("1/2") }]).is_err());

        let die = die_from(&[(1, "1/2"), (-2, "1/2")]);
        assert_eq!(die.drift(), r("-1/2"));
        assert_eq!(die.drift_class(), Drift::Negative);
        assert_eq!(die.max_up(), 1);
        assert_eq!(die.max_down(), 2);

        let die = prop16_die();
        assert_eq!(die.drift(), r("1/2"));
        assert_eq!(die.drift_class(), Drift::Positive);
        assert_eq!(die.up_steps(), vec![(1, r("1/4")), (2, r("3/8"))]);
        assert_eq!(die.down_steps(), vec![(1, r("1/4")), (2, r("1/8"))]);
    }

    #[test]
    fn die_json_shares_field_names_with_pile_die() {
        let die = die_from(&[(-1, "1/2"), (2, "1/2")]);
        let json = serde_json::to_string(&die).unwrap();
        assert!(json.contains("\"step\""));
        assert!(json.contains("\"prob\""));
        let back: GeneralDie = serde_json::from_str(&json).unwrap();
        assert_eq!(back, die);
        // positive-step files parse as either die
        let positive = r#"{"faces":[{"step":1,"prob":"1/2"},{"step":2,"prob":"1/2"}]}"#;
        assert!(serde_json::from_str::<GeneralDie>(positive).is_ok());
        assert!(serde_json::from_str::<crate::pile::PositiveDie>(positive).is_ok());
    }

    #[test]
    fn fuss_catalan_small_values() {
        // k=1 gives Catalan numbers
        let catalan = [1u64, 1, 2, 5, 14, 42, 132, 429];
        for (m, &c) in catalan.iter().enumerate() {
            assert_eq!(fuss_catalan_coeff(1, m), BigInt::from(c));
        }
        assert_eq!(fuss_catalan_coeff(1, 3), BigInt::from(5));
        assert_eq!(fuss_catalan_coeff(2, 2), BigInt::from(3));
        for k in 1..=6 {
            assert_eq!(fuss_catalan_coeff(k, 0), BigInt::from(1));
        }
        // closed form against an independent product formula
        // C_{k,m} = binom((k+1)m, m) / (km+1)
        for k in 1..=5 {
            for m in 0..=30 {
                let via_binom = &binomial((k + 1) * m, m) / &Rational::from_int((k * m + 1) as i64);
                assert!(via_binom.is_integer());
                assert_eq!(fuss_catalan_coeff(k, m), via_binom.numer().clone());
            }
        }
    }

    #[test]
    fn cycle_lemma_matches_fuss_catalan() {
        for m in 0..=8 {
            assert_eq!(BigInt::from(cycle_lemma_count(1, m)), fuss_catalan_coeff(1, m));
        }
        for k in 1..=3 {
            for m in 0..=5 {
                assert_eq!(BigInt::from(cycle_lemma_count(k, m)), fuss_catalan_coeff(k, m));
            }
        }
    }

    #[test]
    fn first_passage_oracle_values() {
        assert_eq!(first_passage_prob_oracle(0, 1, &r("3/4")), r("3/4"));
        assert_eq!(first_passage_prob_oracle(1, 1, &r("1/2")), r("1/8"));
        // positive drift: partial sums approach 1 (terms shrink by ~4pq = 3/4,
        // so thirty terms leave ~1e-6 and eighty leave well under 1e-9)
        let p = r("3/4");
        let mut total = Rational::zero();
        for n in 0..=30 {
            total += &first_passage_prob_oracle(n, 1, &p);
        }
        assert!((&Rational::one() - &total).to_f64() < 1e-5);
        for n in 31..=80 {
            total += &first_passage_prob_oracle(n, 1, &p);
        }
        assert!((&Rational::one() - &total).to_f64() < 1e-9);
        // matches the walk DP for goal 1
        let die = die_from(&[(1, "3/5"), (-1, "2/5")]);
        let series = wab_series(&die, 15).unwrap();
        for n in 0..7 {
            assert_eq!(series[2 * n + 1], first_passage_prob_oracle(n, 1, &r("3/5")));
        }
    }

    #[test]
    fn wab_series_examples() {
        let fair = die_from(&[(1, "1/2"), (-1, "1/2")]);
        let s = wab_series(&fair, 5).unwrap();
        assert_eq!(s, vec![r("0"), r("1/2"), r("0"), r("1/8"), r("0"), r("1/16")]);

        let det = die_from(&[(2, "1")]);
        assert_eq!(wab_series(&det, 1).unwrap(), vec![r("0"), r("1")]);

        // goal-m convolution sanity: first passage to 2 for fair walk starts
        // at round 2 with prob 1/4
        let s = wab_series(&fair, 12).unwrap();
        let two = convolve_trunc(&s, &s, 13);
        assert_eq!(two[2], r("1/4"));
        assert_eq!(two[4], r("1/8"));
    }

    #[test]
    fn wab_system_dyck_and_two_step() {
        let fair = die_from(&[(1, "1/2"), (-1, "1/2")]);
        let sys = setup_wab_system(&fair).unwrap();
        assert_eq!(sys.unknowns, vec![(0, 0)]);
        assert!(sys.closed);
        // W = 1 + z_{-1} W z_1 W: equation has the quadratic term
        assert_eq!(sys.equations[0].degree_in(0), 2);

        let die = die_from(&[(2, "2/3"), (-1, "1/3")]);
        let sys = setup_wab_system(&die).unwrap();
        let mut unknowns = sys.unknowns.clone();
        unknowns.sort();
        assert_eq!(unknowns, vec![(0, 0), (0, 1)]);
    }

    #[test]
    fn wab_system_series_matches_walk_dp() {
        for die in [
            die_from(&[(1, "1/2"), (-1, "1/2")]),
            die_from(&[(2, "2/3"), (-1, "1/3")]),
            die_from(&[(1, "3/4"), (-2, "1/4")]),
            prop16_die(),
        ] {
            let sys = setup_wab_system(&die).unwrap();
            let k = 14;
            assert_eq!(sys.z_series(k), wab_series(&die, k).unwrap());
        }
    }

    #[test]
    fn catalan_pgf_examples() {
        let pgf = catalan_pgf(&r("1/2"), 1).unwrap();
        assert_eq!(pgf.series[1], r("1/2"));
        assert_eq!(pgf.series[3], r("1/8"));
        assert_eq!(pgf.series[5], r("1/16"));
        // t f^2 / 2 - f + t / 2 = 0
        let expected = BivarPoly::new(vec![
            Poly::new(vec![r("0"), r("1/2")]),
            Poly::constant(r("-1")),
            Poly::new(vec![r("0"), r("1/2")]),
        ]);
        assert!(pgf.equation.proportional(&expected));
        assert_eq!(pgf.drift_class, Drift::Zero);
        assert!(pgf.annihilates_series());

        // n = 3: series is the cube; equation annihilates it
        let pgf3 = catalan_pgf(&r("2/3"), 3).unwrap();
        assert!(pgf3.annihilates_series());
        assert_eq!(pgf3.series[3], r("8/27"));
        assert_eq!(pgf3.drift_class, Drift::Positive);

        assert!(catalan_pgf(&r("0"), 1).is_err());
        assert!(catalan_pgf(&r("1/2"), 0).is_err());
    }

    #[test]
    fn fitted_equation_fair_walk() {
        let fair = die_from(&[(1, "1/2"), (-1, "1/2")]);
        let pgf = pgf_algebraic_equation(&fair).unwrap();
        let expected = BivarPoly::new(vec![
            Poly::new(vec![r("0"), r("1/2")]),
            Poly::constant(r("-1")),
            Poly::new(vec![r("0"), r("1/2")]),
        ]);
        assert!(pgf.equation.proportional(&expected));
        assert!(pgf.annihilates_series());
    }

    #[test]
    fn fitted_equation_fuss_shape() {
        // {+1: 2/3, -2: 1/3}: f - pt - (1-p) t f^3 = 0 after clearing the
        // auxiliary g = f/(pt)
        let die = die_from(&[(1, "2/3"), (-2, "1/3")]);
        let pgf = pgf_algebraic_equation(&die).unwrap();
        let expected = BivarPoly::new(vec![
            Poly::new(vec![r("0"), r("-2/3")]),
            Poly::constant(r("1")),
            Poly::zero(),
            Poly::new(vec![r("0"), r("-1/3")]),
        ]);
        assert!(pgf.equation.proportional(&expected));
    }

    #[test]
    fn elimination_cross_check_small_dice() {
        for die in [
            die_from(&[(1, "1/2"), (-1, "1/2")]),
            die_from(&[(2, "2/3"), (-1, "1/3")]),
            die_from(&[(1, "3/4"), (-2, "1/4")]),
        ] {
            let sys = setup_wab_system(&die).unwrap();
            let eliminated = sys.eliminate_pgf_equation().unwrap();
            let series = wab_series(&die, 40).unwrap();
            let residuals = eliminated.eval_on_series(&series, series.len());
            assert!(
                residuals.iter().all(Rational::is_zero),
                "eliminated equation must annihilate the walk series for {die:?}"
            );
        }
    }

    #[test]
    fn mixed_case_equation_annihilates_series() {
        for k in 2..=4 {
            let pgf = mixed_case_pgf(k, &r("1/2")).unwrap();
            assert_eq!(pgf.drift_class, Drift::Positive);
            assert!(pgf.annihilates_series(), "mixed case k={k}");
        }
        // k=1 with p=1/3 is the negative-binomial-free catalan shape
        let pgf = mixed_case_pgf(1, &r("1/3")).unwrap();
        assert!(pgf.annihilates_series());
        assert!(mixed_case_pgf(2, &r("2/3")).is_err());
    }

    #[test]
    fn catalan_moment_values() {
        assert_eq!(catalan_moments(&r("3/4"), 1, 1).unwrap(), r("2"));
        assert_eq!(catalan_moments(&r("3/4"), 1, 2).unwrap(), r("6"));
        assert_eq!(catalan_moments(&r("1"), 5, 1).unwrap(), r("5"));
        assert_eq!(catalan_moments(&r("1"), 5, 2).unwrap(), r("0"));
        // printed formulas across a grid
        for p in ["3/4", "9/10", "5/8"] {
            let p = r(p);
            let q = &Rational::one() - &p;
            let d = &(&p + &p) - &Rational::one(); // 2p - 1
            for n in [1usize, 2, 5] {
                let nn = Rational::from_int(n as i64);
                let e = catalan_moments(&p, n, 1).unwrap();
                assert_eq!(e, &nn / &d);
                let v = catalan_moments(&p, n, 2).unwrap();
                let formula = &(&(&r("4") * &nn) * &(&p * &q)) / &d.pow(3).unwrap();
                assert_eq!(v, formula);
            }
        }
        assert!(matches!(catalan_moments(&r("1/2"), 1, 1), Err(Error::InfiniteMoment(_))));
        assert!(matches!(catalan_moments(&r("1/3"), 1, 1), Err(Error::InfiniteMoment(_))));
    }

    #[test]
    fn fuss_moment_values() {
        assert_eq!(fuss_moments(2, &r("9/10"), 1, 1).unwrap(), r("10/7"));
        // k = 1 reduces to the catalan family
        for j in 1..=4 {
            assert_eq!(
                fuss_moments(1, &r("3/4"), 2, j).unwrap(),
                catalan_moments(&r("3/4"), 2, j).unwrap()
            );
        }
        assert_eq!(fuss_moments(1, &r("3/4"), 2, 1).unwrap(), r("4"));
        // expectation formula n/((p-1)k + p) on a grid
        for (k, p) in [(2usize, "9/10"), (3, "4/5"), (5, "9/10")] {
            let p = r(p);
            let d = &(&(&p - &Rational::one()) * &Rational::from_int(k as i64)) + &p;
            for n in [1usize, 3] {
                assert_eq!(fuss_moments(k, &p, n, 1).unwrap(), &Rational::from_int(n as i64) / &d);
            }
        }
        // variance: the sign-corrected closed form -np(k+1)^2(p-1)/((p-1)k+p)^3,
        // cross-checked numerically below in the acceptance suite
        let var = fuss_moments(2, &r("9/10"), 1, 2).unwrap();
        assert_eq!(var, r("810/343"));
        assert!(matches!(fuss_moments(2, &r("2/3"), 1, 1), Err(Error::InfiniteMoment(_))));
        assert!(matches!(fuss_moments(2, &r("1/2"), 1, 1), Err(Error::InfiniteMoment(_))));
    }

    #[test]
    fn fuss_variance_matches_truncation_numerics() {
        // independent check of the corrected variance sign: exact DP series
        let p = r("9/10");
        let die = GeneralDie::fuss(2, &p).unwrap();
        let series = wab_series(&die, 400).unwrap();
        let (mut mean, mut second) = (0.0, 0.0);
        for (k, c) in series.iter().enumerate() {
            let c = c.to_f64();
            mean += k as f64 * c;
            second += (k as f64) * (k as f64) * c;
        }
        let var = second - mean * mean;
        let exact = fuss_moments(2, &p, 1, 2).unwrap().to_f64();
        assert!((var - exact).abs() < 1e-9, "dp {var} vs closed {exact}");
    }

    #[test]
    fn min_poly_golden_ratio() {
        let die = die_from(&[(-1, "1/2"), (2, "1/2")]);
        let res = moment_min_poly(&die, 1).unwrap();
        assert_eq!(res.annihilating_poly, Poly::from_ints(&[-4, -2, 1]));
        let root = res.root_f64();
        assert!((root - (1.0 + 5.0f64.sqrt())).abs() < 1e-10, "root {root}");
        let width = (&res.isolated_root.1 - &res.isolated_root.0).to_f64();
        assert!(width <= 1e-12);
    }

    #[test]
    fn min_poly_k3_and_k4() {
        let die = die_from(&[(-1, "1/2"), (3, "1/2")]);
        let res = moment_min_poly(&die, 1).unwrap();
        assert_eq!(res.annihilating_poly, Poly::from_ints(&[-4, -4, 0, 1]));
        assert!((res.root_f64() - 2.382975767906237).abs() < 1e-10);

        let die = die_from(&[(-1, "1/2"), (4, "1/2")]);
        let res = moment_min_poly(&die, 1).unwrap();
        assert_eq!(res.annihilating_poly, Poly::from_ints(&[-16, -24, -8, 4, 3]));
        assert!((res.root_f64() - 2.1561901553356811).abs() < 1e-10);
    }

    #[test]
    fn min_poly_conditional_negative_drift() {
        // {+1: 1/3, -1: 2/3}: conditional on ever reaching +1, the expected
        // arrival round is exactly 3
        let die = die_from(&[(1, "1/3"), (-1, "2/3")]);
        let res = moment_min_poly(&die, 1).unwrap();
        assert!(res.annihilating_poly.eval(&r("3")).is_zero());
        assert!((res.root_f64() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn min_poly_rejects_zero_drift() {
        let die = die_from(&[(1, "1/2"), (-1, "1/2")]);
        assert!(matches!(moment_min_poly(&die, 1), Err(Error::InfiniteMoment(_))));
    }

    #[test]
    fn reach_expectation_small_cases() {
        let det = die_from(&[(1, "1")]);
        match reach_m_expectation(&det, 3).unwrap() {
            ReachExpectation::Exact(v) => assert_eq!(v, r("3")),
            other => panic!("expected exact, got {other:?}"),
        }
        // skip-free upward: m / drift
        let die = die_from(&[(1, "3/4"), (-1, "1/4")]);
        match reach_m_expectation(&die, 4).unwrap() {
            ReachExpectation::Exact(v) => {
                assert_eq!(v, r("8"));
                assert_eq!(v, catalan_moments(&r("3/4"), 4, 1).unwrap());
            }
            other => panic!("expected exact, got {other:?}"),
        }
        let fuss = die_from(&[(1, "9/10"), (-2, "1/10")]);
        match reach_m_expectation(&fuss, 3).unwrap() {
            ReachExpectation::Exact(v) => assert_eq!(v, fuss_moments(2, &r("9/10"), 3, 1).unwrap()),
            other => panic!("expected exact, got {other:?}"),
        }
        assert!(reach_m_expectation(&die_from(&[(1, "1/2"), (-1, "1/2")]), 1).is_err());
    }

    #[test]
    fn reach_expectation_golden() {
        let die = die_from(&[(-1, "1/2"), (2, "1/2")]);
        match reach_m_expectation(&die, 1).unwrap() {
            ReachExpectation::Numeric { value, error_bound } => {
                let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
                assert!(error_bound < 1e-6, "bound {error_bound}");
                assert!((value - 2.0 * phi).abs() < 1e-6, "value {value}");
            }
            other => panic!("expected numeric, got {other:?}"),
        }
    }

    #[test]
    fn negative_drift_value_at_one() {
        // {+1 p, -1 1-p} at p in {1/4, 1/3}: f(1) = p/(1-p)
        for p in ["1/4", "1/3"] {
            let p = r(p);
            let q = &Rational::one() - &p;
            let die = GeneralDie::new(vec![
                SignedFace { step: 1, prob: p.clone() },
                SignedFace { step: -1, prob: q.clone() },
            ])
            .unwrap();
            let pgf = pgf_algebraic_equation(&die).unwrap();
            let at_one = pgf.equation.eval_t(&Rational::one());
            assert!(at_one.eval(&(&p / &q)).is_zero(), "f(1) = p/(1-p) must be a root");
            assert!(at_one.eval(&Rational::one()).is_zero());
        }
    }

    #[test]
    fn fixture_transcriptions_frozen() {
        // at p = 1 the walk is +1 forever, so f(m) = 1 for every m and the
        // homogeneous recurrences must collapse: their coefficients sum to
        // the zero polynomial in m
        for id in FixtureId::all() {
            if id == FixtureId::Prop7 {
                continue;
            }
            let fix = two_player_fixture(id);
            let sum = fix
                .terms
                .iter()
                .fold(MPoly::zero(2), |acc, (_, c)| acc.add(c))
                .eval_var(1, &Rational::one());
            assert!(sum.is_zero(), "{id:?} coefficient sum at p = 1: {sum:?}");
        }
        let frozen: [(FixtureId, u64); 6] = [
            (FixtureId::Prop7, 0x8829930d2de0170f),
            (FixtureId::Prop8, 0xfbbc2d2850415373),
            (FixtureId::Prop10, 0xf97b6f382f1dc174),
            (FixtureId::Prop11, 0xe7c19889d1d399bb),
            (FixtureId::Prop12, 0xf78e451741cc4e04),
            (FixtureId::Prop13, 0xb63022f7b908441c),
        ];
        for (id, want) in frozen {
            assert_eq!(fixture_checksum(id), want, "transcription of {id:?} changed");
        }
        assert_eq!(FixtureId::parse("Prop11"), Some(FixtureId::Prop11));
        assert_eq!(FixtureId::parse("8"), Some(FixtureId::Prop8));
        assert_eq!(FixtureId::parse("prop9"), None);
    }

    #[test]
    fn b_squared_table_matches_oracle_sums() {
        // the f64 ratio recurrence against the exact b_{n,m} formula; the
        // tail beyond n = 90 at p = 3/4 is below (9/16)^90 ~ 1e-22
        let p = r("3/4");
        let table = b_squared_table(0.75, 3, 10_000, true).unwrap();
        for m in 1..=3usize {
            let mut acc = 0.0;
            for n in 0..=90 {
                let b = first_passage_prob_oracle(n, m, &p).to_f64();
                acc += b * b;
            }
            assert!((table[m] - acc).abs() < 1e-13, "m = {m}: {} vs {acc}", table[m]);
        }
    }

    #[test]
    fn trivial_recurrence_residual_is_zero() {
        // constant sequence against f(m) - f(m-1) = 0
        let terms =
            vec![(0i64, MPoly::one(2)), (-1i64, MPoly::one(2).neg())];
        let f = vec![0.27; 12];
        let residuals = recurrence_residuals(&terms, &r("1/2"), &f, 0.0, 3..=10);
        assert!(residuals.iter().all(|(_, r)| *r == 0.0));
    }

    #[test]
    fn verify_prop7_fair_coin() {
        let report =
            verify_twoplayer_recurrences(FixtureId::Prop7, &r("1/2"), 1..=8).unwrap();
        assert!(report.ok, "{report:?}");
        assert!(report.max_residual < 1e-8, "max residual {}", report.max_residual);
        let (_, got, want) = &report.initial_value_checks[0];
        assert!((got - 0.2732395).abs() < 1e-6, "f(1) = {got}");
        assert!((got - want).abs() < 1e-9);
        // stated for the fair coin only
        assert!(verify_twoplayer_recurrences(FixtureId::Prop7, &r("2/3"), 1..=8).is_err());
    }

    #[test]
    fn verify_prop8_loaded_coin() {
        let report =
            verify_twoplayer_recurrences(FixtureId::Prop8, &r("3/4"), 5..=15).unwrap();
        assert!(report.ok, "{report:?}");
        assert_eq!(report.residuals.len(), 11);
        // p outside (1/2, 1) is rejected, as is an m window that reaches
        // back past f(1)
        assert!(verify_twoplayer_recurrences(FixtureId::Prop8, &r("1/2"), 5..=15).is_err());
        assert!(verify_twoplayer_recurrences(FixtureId::Prop8, &r("3/4"), 3..=15).is_err());
    }

    #[test]
    fn verify_fuss_recurrences() {
        for id in [FixtureId::Prop10, FixtureId::Prop11, FixtureId::Prop12, FixtureId::Prop13] {
            let report =
                verify_twoplayer_recurrences(id, &id.default_p(), id.default_m_range())
                    .unwrap();
            assert!(report.ok, "{report:?}");
        }
        // p at or below the drift threshold k/(k+1) is rejected
        assert!(verify_twoplayer_recurrences(FixtureId::Prop10, &r("2/3"), 7..=20).is_err());
    }
}
