//! Property families shared by the `properties` and `acceptance` targets.
//!
//! Each check returns `Ok(detail)` with a one-line summary or `Err(why)`
//! describing the first violation, so both callers can print uniform
//! pass/fail lines.

use chancekit::markov::{
    build_board_process, duration_distribution, moments_by_linear_solve, solve_duration_pgfs,
    BoardSpec, DieFace,
};
use chancekit::montecarlo::{simulate_board, simulate_two_player, simulate_walk, SimReport};
use chancekit::ruin::{
    catalan_moments, fuss_moments, reach_m_expectation, GeneralDie, SignedFace,
};
use chancekit::seriesfit::{fit_algebraic, fit_cfinite, fit_precursive};
use chancekit::truncate::truncated_pgf;
use chancekit::{Rational, Result};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub type Check = std::result::Result<String, String>;

pub fn r(s: &str) -> Rational {
    s.parse().unwrap()
}

pub fn load_board(name: &str) -> BoardSpec {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    let spec: BoardSpec = serde_json::from_str(&text).unwrap();
    spec.validate().unwrap();
    spec
}

pub fn toy_board() -> BoardSpec {
    BoardSpec {
        size: 7,
        die: fair_die(2),
        ladders: vec![(1, 3)],
        snakes: vec![(4, 2)],
    }
}

fn fair_die(k: i64) -> Vec<DieFace> {
    (1..=k)
        .map(|s| DieFace {
            step: s as u32,
            prob: Rational::ratio(1, k),
        })
        .collect()
}

fn general(pairs: &[(i64, &str)]) -> GeneralDie {
    GeneralDie::new(
        pairs
            .iter()
            .map(|&(step, p)| SignedFace { step, prob: r(p) })
            .collect(),
    )
    .unwrap()
}

/// Every board of size 2..=6 with no jump or one jump, under a fair {1,2}
/// die (plus a fair {1,2,3} die from size 4 up).
pub fn small_board_corpus() -> Vec<BoardSpec> {
    let mut out = Vec::new();
    for size in 2..=6usize {
        let mut dice = vec![fair_die(2)];
        if size >= 4 {
            dice.push(fair_die(3));
        }
        for die in dice {
            let mut boards = vec![(Vec::new(), Vec::new())];
            for from in 1..size {
                for to in 1..=size {
                    if to == from {
                        continue;
                    }
                    if from < to {
                        boards.push((vec![(from, to)], Vec::new()));
                    } else {
                        boards.push((Vec::new(), vec![(from, to)]));
                    }
                }
            }
            for (ladders, snakes) in boards {
                out.push(BoardSpec {
                    size,
                    die: die.clone(),
                    ladders,
                    snakes,
                });
            }
        }
    }
    out
}

/// PGF normalization: `f_v(1) = 1` exactly for every transient state of
/// every corpus board.
pub fn check_pgf_normalization() -> Check {
    let corpus = small_board_corpus();
    let mut states = 0usize;
    for spec in &corpus {
        spec.validate().map_err(|e| e.to_string())?;
        let m = build_board_process(spec).map_err(|e| e.to_string())?;
        let fs = solve_duration_pgfs(&m).map_err(|e| e.to_string())?;
        for (v, f) in fs.iter().enumerate() {
            let total = f.eval(&Rational::one()).map_err(|e| e.to_string())?;
            if !total.is_one() {
                return Err(format!(
                    "size {} jumps {:?}/{:?} state {}: f(1) = {total}",
                    spec.size,
                    spec.ladders,
                    spec.snakes,
                    v + 1
                ));
            }
            states += 1;
        }
    }
    Ok(format!(
        "f(1) = 1 exactly on {} states across {} boards",
        states,
        corpus.len()
    ))
}

/// The solved rational PGFs reproduce the exact round-by-round DP
/// distribution, coefficient by coefficient, from every start state.
pub fn check_dp_vs_ratfun() -> Check {
    let mut boards: Vec<BoardSpec> = small_board_corpus().into_iter().step_by(7).collect();
    boards.push(toy_board());
    boards.push(BoardSpec {
        size: 10,
        die: fair_die(3),
        ladders: vec![(2, 7), (4, 9)],
        snakes: vec![(8, 3)],
    });
    let mut compared = 0usize;
    for spec in &boards {
        let m = build_board_process(spec).map_err(|e| e.to_string())?;
        let fs = solve_duration_pgfs(&m).map_err(|e| e.to_string())?;
        for (v, f) in fs.iter().enumerate() {
            let series = f.series(26).map_err(|e| e.to_string())?;
            let dp = duration_distribution(&m, v + 1, 25);
            if series != dp {
                return Err(format!(
                    "size {} jumps {:?}/{:?} state {}: series disagrees with DP",
                    spec.size,
                    spec.ladders,
                    spec.snakes,
                    v + 1
                ));
            }
            compared += 26;
        }
    }
    Ok(format!(
        "{} boards, {compared} coefficients: solved PGF == DP oracle",
        boards.len()
    ))
}

/// Truncation engine conserves probability exactly: captured + in-play = 1.
pub fn check_truncation_conservation() -> Check {
    let dice = [
        general(&[(1, "1/2"), (-1, "1/2")]),
        general(&[(2, "1/2"), (-1, "1/2")]),
        general(&[(1, "1/4"), (2, "3/8"), (-1, "1/4"), (-2, "1/8")]),
        general(&[(1, "4/5"), (-3, "1/5")]),
        general(&[(5, "1/2"), (-1, "1/2")]),
        general(&[(1, "1/3"), (-1, "2/3")]),
        general(&[(2, "1/2"), (-1, "1/3"), (-3, "1/6")]),
        general(&[(2, "1")]),
    ];
    let mut cases = 0usize;
    for die in &dice {
        for m in [1usize, 2, 5] {
            for k in [1usize, 6, 37] {
                let t = truncated_pgf(die, m, k).map_err(|e| e.to_string())?;
                let residual = t.residual_state.sum_coeffs();
                let total = &t.captured_mass + &residual;
                if !total.is_one() {
                    return Err(format!(
                        "die {:?} m={m} K={k}: captured + residual = {total}",
                        die.faces
                    ));
                }
                let sum: Rational = t
                    .coeffs
                    .iter()
                    .fold(Rational::zero(), |acc, c| &acc + c);
                if sum != t.captured_mass {
                    return Err(format!("die {:?} m={m} K={k}: coefficient sum drifts", die.faces));
                }
                cases += 1;
            }
        }
    }
    Ok(format!("captured + residual = 1 exactly in {cases} truncations"))
}

fn rand_in(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> i64 {
    lo + (rng.next_u64() % (hi - lo + 1) as u64) as i64
}

fn cfinite_instance(rng: &mut ChaCha8Rng) -> Option<Vec<Rational>> {
    let order = rand_in(rng, 1, 4) as usize;
    let mut coeffs: Vec<i64> = (0..order).map(|_| rand_in(rng, -3, 3)).collect();
    if coeffs[order - 1] == 0 {
        coeffs[order - 1] = 1;
    }
    let mut seq: Vec<Rational> = (0..order)
        .map(|_| Rational::from_int(rand_in(rng, -5, 5)))
        .collect();
    if seq.iter().all(Rational::is_zero) {
        return None;
    }
    for n in order..26 {
        let mut acc = Rational::zero();
        for (i, c) in coeffs.iter().enumerate() {
            acc += &(&Rational::from_int(*c) * &seq[n - 1 - i]);
        }
        seq.push(acc);
    }
    Some(seq)
}

fn precursive_instance(rng: &mut ChaCha8Rng) -> Vec<Rational> {
    // a(n) = (alpha n + beta) / (gamma n + delta) * a(n-1)
    let alpha = rand_in(rng, 0, 3);
    let beta = rand_in(rng, 1, 4);
    let gamma = rand_in(rng, 0, 3);
    let delta = rand_in(rng, 1, 4);
    let mut seq = vec![Rational::from_int(rand_in(rng, 1, 3))];
    for n in 1..34i64 {
        let ratio = Rational::new(
            (alpha * n + beta).into(),
            (gamma * n + delta).into(),
        )
        .unwrap();
        let next = &ratio * seq.last().unwrap();
        seq.push(next);
    }
    seq
}

fn algebraic_instance(rng: &mut ChaCha8Rng) -> Vec<Rational> {
    if rng.next_u64() % 2 == 0 {
        // f = (1 + c t)^(p/q), a degree-q algebraic series
        let (p, q) = *[(1i64, 2i64), (3, 2), (1, 3), (2, 3)]
            .get(rand_in(rng, 0, 3) as usize)
            .unwrap();
        let c = Rational::from_int(rand_in(rng, 1, 2));
        let e = Rational::ratio(p, q);
        let mut seq = vec![Rational::one()];
        for n in 0..47i64 {
            let scale = &(&e - &Rational::from_int(n)) / &Rational::from_int(n + 1);
            let next = &(seq.last().unwrap() * &scale) * &c;
            seq.push(next);
        }
        seq
    } else {
        // Fuss-Catalan style: f = 1 + a t f^k
        let a = Rational::from_int(rand_in(rng, 1, 3));
        let k = rand_in(rng, 2, 4) as u32;
        let len = 48usize;
        let mut f = vec![Rational::zero(); len];
        f[0] = Rational::one();
        for _ in 0..len {
            // truncated power, then one substitution round
            let mut pw = vec![Rational::zero(); len];
            pw[0] = Rational::one();
            for _ in 0..k {
                let mut next = vec![Rational::zero(); len];
                for (i, x) in pw.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in f.iter().enumerate().take(len - i) {
                        if !y.is_zero() {
                            next[i + j] += &(x * y);
                        }
                    }
                }
                pw = next;
            }
            let mut updated = vec![Rational::zero(); len];
            updated[0] = Rational::one();
            for i in 0..len - 1 {
                updated[i + 1] = &a * &pw[i];
            }
            updated[0] = Rational::one();
            if updated == f {
                break;
            }
            f = updated;
        }
        f
    }
}

/// Fit-then-verify holdout discipline on 150 randomized instances: every
/// fitted object must reproduce terms it never saw.
pub fn check_fit_holdout() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_cafe);
    let mut done = 0usize;

    while done < 60 {
        let Some(seq) = cfinite_instance(&mut rng) else { continue };
        let rec = fit_cfinite(&seq[..18], 6)
            .map_err(|e| format!("cfinite instance {done}: {e}"))?;
        if rec.unroll(26) != seq {
            return Err(format!("cfinite instance {done}: holdout terms diverge"));
        }
        done += 1;
    }

    for i in 0..50 {
        let seq = precursive_instance(&mut rng);
        let rec = fit_precursive(&seq[..22], 4, 3)
            .map_err(|e| format!("precursive instance {i}: {e}"))?;
        if !rec.holds_for(&seq) {
            return Err(format!("precursive instance {i}: fails on held-out terms"));
        }
    }

    for i in 0..40 {
        let seq = algebraic_instance(&mut rng);
        let eq = fit_algebraic(&seq[..40], 8)
            .map_err(|e| format!("algebraic instance {i}: {e}"))?;
        let residuals = eq.eval_on_series(&seq, seq.len());
        if residuals.iter().any(|c| !c.is_zero()) {
            return Err(format!("algebraic instance {i}: equation breaks on held-out terms"));
        }
    }

    Ok("150 instances (60 C-finite, 50 P-recursive, 40 algebraic) verified on held-out terms".into())
}

fn exact_board_mean(spec: &BoardSpec) -> Result<f64> {
    let m = build_board_process(spec)?;
    Ok(moments_by_linear_solve(&m, 2)?[0].expectation.to_f64())
}

fn within_4se(name: &str, got: &SimReport, exact: f64) -> Check {
    let diff = (got.mean - exact).abs();
    if !(diff <= 4.0 * got.std_error) {
        return Err(format!(
            "{name}: simulated {} vs exact {exact}, gap {diff} > 4 x {}",
            got.mean, got.std_error
        ));
    }
    if got.censored != 0 {
        return Err(format!("{name}: {} trials censored", got.censored));
    }
    Ok(format!("{name} z = {:+.2}", (got.mean - exact) / got.std_error))
}

/// Monte Carlo agreement with the exact engines at 4 standard errors.
pub fn check_monte_carlo_agreement() -> Check {
    let mut lines = Vec::new();

    let boards = [
        ("toy", toy_board()),
        ("winning_moves", load_board("winning_moves.json")),
        ("cardinal", load_board("cardinal.json")),
        ("cardinal_alt", load_board("cardinal_alt.json")),
    ];
    for (i, (name, spec)) in boards.iter().enumerate() {
        let exact = exact_board_mean(spec).map_err(|e| e.to_string())?;
        let m = build_board_process(spec).map_err(|e| e.to_string())?;
        let sim = simulate_board(&m, 100_000, 7001 + i as u64);
        lines.push(within_4se(name, &sim, exact)?);
    }

    // two-player toy race: exact win probability 11/20
    let m = build_board_process(&toy_board()).map_err(|e| e.to_string())?;
    let sim = simulate_two_player(&m, 200_000, 7100);
    let wr = sim.win_rate.expect("two-player report has a win rate");
    let se = (0.55f64 * 0.45 / 200_000.0).sqrt();
    if (wr - 0.55).abs() > 4.0 * se {
        return Err(format!("toy two-player: win rate {wr} vs exact 0.55"));
    }
    lines.push(format!("toy win rate z = {:+.2}", (wr - 0.55) / se));

    let walks = [
        ("catalan p=3/4 m=3", general(&[(1, "3/4"), (-1, "1/4")]), 3u32,
         catalan_moments(&r("3/4"), 3, 1).map_err(|e| e.to_string())?.to_f64()),
        ("fuss k=2 p=3/4 m=2", general(&[(1, "3/4"), (-2, "1/4")]), 2,
         fuss_moments(2, &r("3/4"), 2, 1).map_err(|e| e.to_string())?.to_f64()),
        ("mixed k=2 m=1", general(&[(-1, "1/2"), (2, "1/2")]), 1,
         reach_m_expectation(&general(&[(-1, "1/2"), (2, "1/2")]), 1)
             .map_err(|e| e.to_string())?.to_f64()),
        ("mixed k=2 m=5", general(&[(-1, "1/2"), (2, "1/2")]), 5,
         reach_m_expectation(&general(&[(-1, "1/2"), (2, "1/2")]), 5)
             .map_err(|e| e.to_string())?.to_f64()),
        ("prop16 m=1", general(&[(1, "1/4"), (2, "3/8"), (-1, "1/4"), (-2, "1/8")]), 1,
         reach_m_expectation(
             &general(&[(1, "1/4"), (2, "3/8"), (-1, "1/4"), (-2, "1/8")]), 1)
             .map_err(|e| e.to_string())?.to_f64()),
    ];
    for (i, (name, die, m, exact)) in walks.iter().enumerate() {
        let sim = simulate_walk(die, *m, 200_000, 7200 + i as u64, 1_000_000);
        lines.push(within_4se(name, &sim, *exact)?);
    }

    Ok(format!("{} targets within 4 SE ({})", lines.len(), lines.join(", ")))
}
