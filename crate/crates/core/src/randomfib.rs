//! Random Fibonacci sequences `t_1 = t_2 = 1`, `t_n = ±t_{n−1} ± t_{n−2}`.
//!
//! Three views of the growth rate live here:
//!
//! * a Monte Carlo estimate of `lim |t_n|^{1/n}` over seeded walks,
//! * the exact expectation `E(|t_n|)` by dynamic programming over the
//!   distribution of consecutive pairs,
//! * the real root of `x³ − 2x² − 1`, which governs `E(|t_n|)^{1/n}`.
//!
//! # Random signs
//!
//! Walk `i` of a run with master seed `s` draws its signs from a ChaCha8
//! stream seeded (via `SeedableRng::seed_from_u64`) with
//! `splitmix64(s + i·0x9E3779B97F4A7C15)`. Each step consumes one `u32`:
//! bit 0 set negates the `t_{n−1}` term, bit 1 set negates the `t_{n−2}`
//! term. The output is therefore a pure function of `(n, trials, seed)`
//! on every platform and for any number of worker threads.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fibcore::Rational;

/// Default cap on `n` for [`exact_expectation`].
pub const DEFAULT_EXPECTATION_CAP: u32 = 24;
/// Largest `n` whose branch counts `4^{n−2}` fit in the table's counters.
pub const MAX_EXPECTATION_CAP: u32 = 33;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn apply(self, v: i128) -> i128 {
        match self {
            Sign::Plus => v,
            Sign::Minus => -v,
        }
    }

    fn apply_big(self, v: &BigInt) -> BigInt {
        match self {
            Sign::Plus => v.clone(),
            Sign::Minus => -v,
        }
    }
}

/// Supplies the pair of signs used at each step of a walk.
pub trait SignSource {
    /// Signs for `(t_{n−1}, t_{n−2})`.
    fn next_signs(&mut self) -> (Sign, Sign);
}

/// The documented seeded generator; see the module docs.
pub struct SeededSigns {
    rng: ChaCha8Rng,
}

impl SeededSigns {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Generator for walk `index` of a run seeded with `master_seed`.
    pub fn for_walk(master_seed: u64, index: u64) -> Self {
        Self::new(walk_seed(master_seed, index))
    }
}

impl SignSource for SeededSigns {
    fn next_signs(&mut self) -> (Sign, Sign) {
        let bits = self.rng.next_u32();
        let pick = |b: u32| if bits & b == 0 { Sign::Plus } else { Sign::Minus };
        (pick(1), pick(2))
    }
}

/// Replays a fixed list of sign pairs, cycling when exhausted.
pub struct ForcedSigns {
    pairs: Vec<(Sign, Sign)>,
    pos: usize,
}

impl ForcedSigns {
    pub fn new(pairs: Vec<(Sign, Sign)>) -> Self {
        assert!(!pairs.is_empty(), "forced sign stream must not be empty");
        Self { pairs, pos: 0 }
    }

    /// Always `(+, +)`: the walk degenerates to the Fibonacci numbers.
    pub fn all_plus() -> Self {
        Self::new(vec![(Sign::Plus, Sign::Plus)])
    }
}

impl SignSource for ForcedSigns {
    fn next_signs(&mut self) -> (Sign, Sign) {
        let out = self.pairs[self.pos % self.pairs.len()];
        self.pos += 1;
        out
    }
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of walk `index` under `master_seed`.
pub fn walk_seed(master_seed: u64, index: u64) -> u64 {
    splitmix64(master_seed.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

/// A full random Fibonacci trajectory `t_1, …, t_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignWalk {
    pub seed: Option<u64>,
    /// `values[k - 1]` is `t_k`.
    pub values: Vec<BigInt>,
}

impl SignWalk {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn last(&self) -> &BigInt {
        self.values.last().expect("walk has at least two terms")
    }
}

/// Walk of length `n ≥ 2` driven by an arbitrary sign source.
pub fn simulate_walk_with<S: SignSource>(n: usize, signs: &mut S) -> Result<SignWalk> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("walk length must be at least 2, got {n}")));
    }
    let mut values = vec![BigInt::one(), BigInt::one()];
    for k in 2..n {
        let (s1, s2) = signs.next_signs();
        let next = s1.apply_big(&values[k - 1]) + s2.apply_big(&values[k - 2]);
        values.push(next);
    }
    Ok(SignWalk { seed: None, values })
}

/// Walk of length `n ≥ 2` from the documented seeded generator.
pub fn simulate_walk(n: usize, seed: u64) -> Result<SignWalk> {
    let mut walk = simulate_walk_with(n, &mut SeededSigns::new(seed))?;
    walk.seed = Some(seed);
    Ok(walk)
}

/// `ln |t_n|`, or `None` when `t_n = 0`.
///
/// Runs in `i128` and switches to big integers only if a term overflows.
fn terminal_log<S: SignSource>(n: usize, signs: &mut S) -> Option<f64> {
    let (mut prev, mut cur) = (1i128, 1i128);
    let mut k = 2;
    while k < n {
        let (s1, s2) = signs.next_signs();
        match s1.apply(cur).checked_add(s2.apply(prev)) {
            Some(next) => {
                prev = cur;
                cur = next;
                k += 1;
            }
            None => {
                let mut big_prev = BigInt::from(prev);
                let mut big_cur = BigInt::from(cur);
                let mut pending = Some((s1, s2));
                while k < n {
                    let (s1, s2) = pending.take().unwrap_or_else(|| signs.next_signs());
                    let next = s1.apply_big(&big_cur) + s2.apply_big(&big_prev);
                    big_prev = std::mem::replace(&mut big_cur, next);
                    k += 1;
                }
                return ln_abs(&big_cur);
            }
        }
    }
    if cur == 0 {
        None
    } else {
        Some((cur.unsigned_abs() as f64).ln())
    }
}

fn ln_abs(v: &BigInt) -> Option<f64> {
    if v.is_zero() {
        return None;
    }
    let bits = v.bits();
    if bits < 1000 {
        return Some(v.abs().to_f64().expect("fits in f64").ln());
    }
    let shift = bits - 64;
    let top = (v.abs() >> shift).to_f64().expect("fits in f64");
    Some(top.ln() + shift as f64 * std::f64::consts::LN_2)
}

/// Monte Carlo estimate of `lim |t_n|^{1/n}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LyapunovEstimate {
    pub n: usize,
    pub trials: u64,
    pub included: u64,
    pub zero_terminal_count: u64,
    /// Mean of `(1/n) ln |t_n|` over walks with `t_n ≠ 0`.
    pub mean_log_rate: f64,
    pub standard_error: f64,
    /// `exp(mean_log_rate)`.
    pub estimate: f64,
}

/// Estimates the Viswanath constant from `trials` seeded walks of length `n`.
///
/// Walks ending at zero are excluded from the mean and counted.
pub fn estimate_viswanath(n: usize, trials: u64, master_seed: u64) -> Result<LyapunovEstimate> {
    if n < 10 {
        return Err(Error::OutOfRange(format!("walk length must be at least 10, got {n}")));
    }
    estimate_with(n, trials, |i| SeededSigns::for_walk(master_seed, i))
}

/// Same estimator with a caller-chosen sign source per walk index.
pub fn estimate_with<S, F>(n: usize, trials: u64, make_source: F) -> Result<LyapunovEstimate>
where
    S: SignSource,
    F: Fn(u64) -> S + Sync,
{
    if trials == 0 {
        return Err(Error::OutOfRange("at least one trial is required".into()));
    }
    if n < 2 {
        return Err(Error::OutOfRange(format!("walk length must be at least 2, got {n}")));
    }
    // Collected in index order, so the summation below never depends on
    // how the work was scheduled.
    let logs: Vec<Option<f64>> = (0..trials)
        .into_par_iter()
        .map(|i| terminal_log(n, &mut make_source(i)))
        .collect();
    summarize(n, &logs)
}

fn summarize(n: usize, logs: &[Option<f64>]) -> Result<LyapunovEstimate> {
    let rates: Vec<f64> = logs.iter().flatten().map(|l| l / n as f64).collect();
    let included = rates.len() as u64;
    let zero_terminal_count = logs.len() as u64 - included;
    if included == 0 {
        return Err(Error::AllWalksZero);
    }
    let mean = rates.iter().sum::<f64>() / included as f64;
    let standard_error = if included > 1 {
        let var = rates.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (included - 1) as f64;
        (var / included as f64).sqrt()
    } else {
        0.0
    };
    Ok(LyapunovEstimate {
        n,
        trials: logs.len() as u64,
        included,
        zero_terminal_count,
        mean_log_rate: mean,
        standard_error,
        estimate: mean.exp(),
    })
}

/// Exact distribution of `(|t_{k−1}|, |t_k|)` at one level `k`.
///
/// Negating both entries of a pair negates every later term, and the
/// four sign choices are symmetric, so the future of `|t|` depends only on
/// the absolute values. States are merged on that key; weights are branch
/// counts out of `4^{k−2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectationTable {
    pub level: u32,
    counts: HashMap<(u64, u64), u64>,
}

impl ExpectationTable {
    /// Level 2: the single pair `(1, 1)` with probability 1.
    pub fn initial() -> Self {
        Self { level: 2, counts: HashMap::from([((1, 1), 1)]) }
    }

    /// Advances one level by branching every state into its four sign choices.
    pub fn step(&self) -> Self {
        let mut next: HashMap<(u64, u64), u64> = HashMap::with_capacity(self.counts.len() * 2);
        for (&(a, b), &c) in &self.counts {
            let (a, b) = (a as i64, b as i64);
            for (s1, s2) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let t = s1 * b + s2 * a;
                *next.entry((b as u64, t.unsigned_abs())).or_default() += c;
            }
        }
        Self { level: self.level + 1, counts: next }
    }

    /// `4^{k−2}`.
    pub fn denominator(&self) -> BigInt {
        BigInt::from(4).pow(self.level - 2)
    }

    pub fn state_count(&self) -> usize {
        self.counts.len()
    }

    /// Every state with its exact probability, sorted by state.
    pub fn probabilities(&self) -> Vec<((u64, u64), Rational)> {
        let denom = self.denominator();
        let mut out: Vec<_> = self
            .counts
            .iter()
            .map(|(&k, &c)| (k, Rational::new(c.into(), denom.clone())))
            .collect();
        out.sort_by(|x, y| x.0.cmp(&y.0));
        out
    }

    /// `Σ p = 1`, checked exactly.
    pub fn total_probability(&self) -> Rational {
        let total: BigInt = self.counts.values().map(|&c| BigInt::from(c)).sum();
        Rational::new(total, self.denominator())
    }

    /// `E(|t_k|)` at this level.
    pub fn expected_abs(&self) -> Rational {
        let total: BigInt = self
            .counts
            .iter()
            .map(|(&(_, b), &c)| BigInt::from(b) * BigInt::from(c))
            .sum();
        Rational::new(total, self.denominator())
    }
}

/// Table at level `n`, subject to `cap`.
pub fn expectation_table(n: u32, cap: u32) -> Result<ExpectationTable> {
    if n < 3 {
        return Err(Error::OutOfRange(format!("n must be at least 3, got {n}")));
    }
    let cap = cap.min(MAX_EXPECTATION_CAP);
    if n > cap {
        return Err(Error::AboveCap {
            what: "n",
            value: n as u64,
            cap: cap as u64,
            hint: "state counts grow quickly; raise the cap explicitly (at most 33)",
        });
    }
    let mut table = ExpectationTable::initial();
    while table.level < n {
        table = table.step();
    }
    Ok(table)
}

/// Exact `E(|t_n|)` for `3 ≤ n ≤` [`DEFAULT_EXPECTATION_CAP`].
pub fn exact_expectation(n: u32) -> Result<Rational> {
    exact_expectation_capped(n, DEFAULT_EXPECTATION_CAP)
}

pub fn exact_expectation_capped(n: u32, cap: u32) -> Result<Rational> {
    Ok(expectation_table(n, cap)?.expected_abs())
}

/// Bracketed root of `x³ − 2x² − 1` on `[2, 3]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RittaudRoot {
    pub lo: Rational,
    pub hi: Rational,
    pub iterations: u32,
}

impl RittaudRoot {
    /// Midpoint of the final bracket.
    pub fn root(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    /// `root − 1`, the growth rate of `E(|t_n|)^{1/n}`.
    pub fn growth_rate(&self) -> Rational {
        self.root() - Rational::one()
    }
}

pub fn rittaud_cubic(x: &Rational) -> Rational {
    let two = Rational::from_integer(2.into());
    x * x * x - two * x * x - Rational::one()
}

/// Bisection for the real root of `x³ − 2x² − 1` until the bracket is no
/// wider than `tolerance`. The bracket always satisfies `f(lo) < 0 < f(hi)`.
pub fn rittaud_root(tolerance: &Rational) -> Result<RittaudRoot> {
    if !tolerance.is_positive() {
        return Err(Error::OutOfRange("tolerance must be positive".into()));
    }
    let mut lo = Rational::from_integer(2.into());
    let mut hi = Rational::from_integer(3.into());
    let mut iterations = 0;
    while &hi - &lo > *tolerance {
        let mid = (&lo + &hi) / Rational::from_integer(2.into());
        if rittaud_cubic(&mid).is_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    Ok(RittaudRoot { lo, hi, iterations })
}

/// `true` when the rational's denominator is a power of 4.
pub fn is_power_of_four_denominator(r: &BigRational) -> bool {
    let mut d = r.denom().clone();
    let four = BigInt::from(4);
    while d.is_multiple_of(&four) {
        d /= &four;
    }
    // A reduced fraction with denominator 4^j·(1 or 2) is c/4^j after scaling.
    d.is_one() || d == BigInt::from(2)
}
