//! Monte Carlo sanity checks for the exact engines.
//!
//! Trial `i` of a run seeded with `s` draws from its own ChaCha8 stream,
//! keyed by a splitmix64 expansion of `splitmix64(s) ^ i`. Streams are
//! therefore independent of execution order and every report is bitwise
//! reproducible from `(seed, trials, config)`.
//!
//! Rational transition probabilities are mapped to integer weights on a
//! common-denominator lattice and sampled by exact integer comparison
//! against a rejection-sampled uniform integer; no floating-point
//! thresholds enter the sampling path.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::markov::MarkovProcess;
use crate::rational::Rational;
use crate::ruin::GeneralDie;

/// Generator identifier embedded in every report.
pub const ALGORITHM: &str = "chacha8+splitmix64";

/// Summary statistics of one simulation run. `mean`, `sample_std` and
/// `std_error` describe the per-trial duration (conditioned on finishing
/// within the cap, for capped walks); `win_rate` is present in two-player
/// mode only.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimReport {
    pub algorithm: String,
    pub seed: u64,
    pub trials: u64,
    pub mean: f64,
    pub sample_std: f64,
    pub std_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub win_rate: Option<f64>,
    /// Trajectories cut off by the round cap (walk mode; 0 elsewhere).
    pub censored: u64,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The stream for one trial: ChaCha8 keyed by a splitmix64 expansion of
/// `hash(seed) ^ trial`. Hashing the run seed first keeps adjacent seeds
/// from sharing per-trial streams (`43 ^ t` merely permutes `42 ^ t`);
/// XORing the trial index afterwards is the split.
fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut run = seed;
    let mut state = splitmix64(&mut run) ^ trial;
    let mut key = [0u8; 32];
    for chunk in key.chunks_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Integer weights on the common-denominator lattice of a probability row.
struct Lattice {
    /// Cumulative weights; the last entry is the lattice size.
    cum: Vec<u128>,
    /// Bit length of `total - 1`, for the rejection sampler.
    bits: u32,
}

impl Lattice {
    fn new(probs: &[&Rational]) -> Lattice {
        let mut l = BigInt::one();
        for p in probs {
            l = l.lcm(p.denom());
        }
        let mut cum = Vec::with_capacity(probs.len());
        let mut acc: u128 = 0;
        for p in probs {
            let w = (p.numer() * (&l / p.denom()))
                .to_u128()
                .expect("probability lattice exceeds 128 bits");
            acc = acc.checked_add(w).expect("probability lattice exceeds 128 bits");
            cum.push(acc);
        }
        let total = l.to_u128().expect("probability lattice exceeds 128 bits");
        assert_eq!(acc, total, "probabilities do not fill the lattice");
        let bits = 128 - (total - 1).leading_zeros();
        Lattice { cum, bits }
    }

    /// Uniform index with exactly the row's probabilities.
    fn draw(&self, rng: &mut ChaCha8Rng) -> usize {
        let total = *self.cum.last().unwrap();
        if total == 1 {
            return 0;
        }
        let u = loop {
            let v = if self.bits <= 64 {
                u128::from(rng.next_u64() >> (64 - self.bits))
            } else {
                let hi = u128::from(rng.next_u64()) << 64;
                (hi | u128::from(rng.next_u64())) >> (128 - self.bits)
            };
            if v < total {
                break v;
            }
        };
        self.cum.iter().position(|c| u < *c).unwrap()
    }
}

/// Exact integer tallies of trial durations; converted to floating point
/// only when the report is assembled, so accumulation order cannot matter.
#[derive(Default)]
struct Tally {
    done: u64,
    sum: u128,
    sumsq: u128,
}

impl Tally {
    fn record(&mut self, duration: u64) {
        self.done += 1;
        self.sum += u128::from(duration);
        self.sumsq += u128::from(duration) * u128::from(duration);
    }

    fn report(&self, trials: u64, seed: u64, wins: Option<u64>, censored: u64) -> SimReport {
        let (mean, sample_std, std_error) = if self.done == 0 {
            (f64::NAN, f64::NAN, f64::NAN)
        } else {
            let n = self.done as f64;
            let mean = self.sum as f64 / n;
            let std = if self.done >= 2 {
                let num = u128::from(self.done) * self.sumsq - self.sum * self.sum;
                (num as f64 / (n * (n - 1.0))).sqrt()
            } else {
                0.0
            };
            (mean, std, std / n.sqrt())
        };
        SimReport {
            algorithm: ALGORITHM.to_string(),
            seed,
            trials,
            mean,
            sample_std,
            std_error,
            win_rate: wins.map(|w| w as f64 / trials as f64),
            censored,
        }
    }
}

fn board_samplers(m: &MarkovProcess) -> Vec<(Vec<usize>, Lattice)> {
    m.transitions
        .iter()
        .map(|row| {
            let targets: Vec<usize> = row.iter().map(|(u, _)| *u).collect();
            let probs: Vec<&Rational> = row.iter().map(|(_, p)| p).collect();
            (targets, Lattice::new(&probs))
        })
        .collect()
}

fn run_board(samplers: &[(Vec<usize>, Lattice)], absorbing: usize, rng: &mut ChaCha8Rng) -> u64 {
    let mut state = 1usize;
    let mut rounds = 0u64;
    while state != absorbing {
        let (targets, lattice) = &samplers[state - 1];
        state = targets[lattice.draw(rng)];
        rounds += 1;
    }
    rounds
}

/// Empirical duration statistics for the solitaire game started at state 1.
pub fn simulate_board(m: &MarkovProcess, trials: u64, seed: u64) -> SimReport {
    assert!(trials >= 1, "need at least one trial");
    let samplers = board_samplers(m);
    let mut tally = Tally::default();
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        tally.record(run_board(&samplers, m.state_count, &mut rng));
    }
    tally.report(trials, seed, None, 0)
}

/// Two players alternate on the same board; whoever is absorbed first wins
/// and ties go to the first mover. `mean` describes the winner's duration
/// `min(d1, d2)`.
pub fn simulate_two_player(m: &MarkovProcess, trials: u64, seed: u64) -> SimReport {
    assert!(trials >= 1, "need at least one trial");
    let samplers = board_samplers(m);
    let mut tally = Tally::default();
    let mut wins = 0u64;
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let d1 = run_board(&samplers, m.state_count, &mut rng);
        let d2 = run_board(&samplers, m.state_count, &mut rng);
        if d1 <= d2 {
            wins += 1;
        }
        tally.record(d1.min(d2));
    }
    tally.report(trials, seed, Some(wins), 0)
}

/// Empirical first-passage statistics for the walk started at 0 with goal
/// `m`, conditioned on finishing within `round_cap` rounds; trajectories
/// that hit the cap are counted in `censored` and excluded from the
/// duration statistics.
pub fn simulate_walk(
    die: &GeneralDie,
    m: u32,
    trials: u64,
    seed: u64,
    round_cap: u64,
) -> SimReport {
    assert!(trials >= 1, "need at least one trial");
    assert!(m >= 1 && round_cap >= 1);
    let steps: Vec<i64> = die.faces.iter().map(|f| f.step).collect();
    let probs: Vec<&Rational> = die.faces.iter().map(|f| &f.prob).collect();
    let lattice = Lattice::new(&probs);
    let goal = i64::from(m);
    let mut tally = Tally::default();
    let mut censored = 0u64;
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let mut pos = 0i64;
        let mut rounds = 0u64;
        loop {
            if rounds == round_cap {
                censored += 1;
                break;
            }
            pos += steps[lattice.draw(&mut rng)];
            rounds += 1;
            if pos >= goal {
                tally.record(rounds);
                break;
            }
        }
    }
    tally.report(trials, seed, None, censored)
}
