//! Counting functions `#A(x) = |A ∩ [1, x]|`, density profiles, and the
//! density of Fibonacci residues modulo prime powers.

use std::path::Path;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fibcore::{fib, is_prime, residue_bitmap, FibConvention, Rational};

/// Default cap on `p^λ` for residue densities.
pub const DEFAULT_MODULUS_CAP: u64 = 1 << 26;

/// A set of positive integers with a total membership test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntegerSet {
    /// Distinct values of the Fibonacci sequence.
    FibonacciValues,
    /// Naturals whose binary digit sum is even.
    GelfondN0,
    /// Strictly increasing list of naturals.
    ExplicitList(Vec<u64>),
}

impl IntegerSet {
    /// Builds an explicit set, sorting and deduplicating.
    pub fn explicit(mut values: Vec<u64>) -> Self {
        values.sort_unstable();
        values.dedup();
        IntegerSet::ExplicitList(values)
    }

    /// Reads newline-delimited decimal naturals; blank lines are skipped.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let mut values = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let v = line
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("line {}: {line:?} is not a natural", i + 1)))?;
            values.push(v);
        }
        Ok(Self::explicit(values))
    }

    pub fn name(&self) -> &'static str {
        match self {
            IntegerSet::FibonacciValues => "fib",
            IntegerSet::GelfondN0 => "evil",
            IntegerSet::ExplicitList(_) => "explicit",
        }
    }

    pub fn contains(&self, n: u64) -> bool {
        match self {
            IntegerSet::FibonacciValues => is_fibonacci(n),
            IntegerSet::GelfondN0 => gelfond_member(n),
            IntegerSet::ExplicitList(v) => v.binary_search(&n).is_ok(),
        }
    }
}

fn is_fibonacci(n: u64) -> bool {
    let (mut a, mut b) = (0u64, 1u64);
    while a < n {
        let Some(next) = a.checked_add(b) else { return false };
        a = b;
        b = next;
    }
    a == n
}

/// Membership in the Gelfond set `N₀`: the binary digit sum is even.
pub fn gelfond_member(n: u64) -> bool {
    n.count_ones() % 2 == 0
}

/// Number of `n ∈ [0, x]` with even binary digit sum, by walking the
/// binary digits of `x` from the top.
fn evil_count_through(x: u64) -> u64 {
    let mut count = 0u64;
    let mut ones_above = 0u32;
    for bit in (0..64).rev() {
        if (x >> bit) & 1 == 1 {
            // Numbers agreeing with x above `bit` and having a 0 here: the
            // `bit` free low bits split evenly by parity when bit > 0.
            count += if bit == 0 {
                u64::from(ones_above % 2 == 0)
            } else {
                1u64 << (bit - 1)
            };
            ones_above += 1;
        }
    }
    count + u64::from(ones_above % 2 == 0)
}

/// `#A(x) = |A ∩ [1, x]|`.
pub fn counting_function(set: &IntegerSet, x: u64) -> u64 {
    match set {
        IntegerSet::FibonacciValues => {
            // Classic F_2, F_3, … are the distinct positive values.
            (2u64..)
                .take_while(|&k| fib(k, FibConvention::Classic) <= x.into())
                .count() as u64
        }
        IntegerSet::GelfondN0 => evil_count_through(x) - 1,
        IntegerSet::ExplicitList(v) => {
            let upto = v.partition_point(|&e| e <= x);
            let zero = v.first() == Some(&0);
            (upto - usize::from(zero && upto > 0)) as u64
        }
    }
}

/// Comparison of `#𝓕(x)` against `log x / log φ` and the corrected
/// `log(√5 x) / log φ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LogBoundCheck {
    pub x: u64,
    pub count: u64,
    pub log_bound: f64,
    pub log_bound_holds: bool,
    pub corrected_bound: f64,
    pub corrected_bound_holds: bool,
}

/// Counts and ratios `#A(x_i)/x_i` at increasing sample points.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityProfile {
    pub set: String,
    pub points: Vec<u64>,
    pub counts: Vec<u64>,
    pub ratios: Vec<Rational>,
    /// `tail_min[i] = min_{j ≥ i} ratios[j]`.
    pub tail_min: Vec<Rational>,
    /// `tail_max[i] = max_{j ≥ i} ratios[j]`.
    pub tail_max: Vec<Rational>,
    /// Present for the Fibonacci set only.
    pub log_bound: Option<Vec<LogBoundCheck>>,
}

pub fn density_profile(set: &IntegerSet, xs: &[u64]) -> Result<DensityProfile> {
    if xs.is_empty() {
        return Err(Error::OutOfRange("at least one sample point is required".into()));
    }
    if xs[0] == 0 || xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::OutOfRange("sample points must be positive and increasing".into()));
    }
    let counts: Vec<u64> = xs.par_iter().map(|&x| counting_function(set, x)).collect();
    let ratios: Vec<Rational> = xs
        .iter()
        .zip(&counts)
        .map(|(&x, &c)| Rational::new(BigInt::from(c), BigInt::from(x)))
        .collect();
    let mut tail_min = ratios.clone();
    let mut tail_max = ratios.clone();
    for i in (0..ratios.len().saturating_sub(1)).rev() {
        if tail_min[i + 1] < tail_min[i] {
            tail_min[i] = tail_min[i + 1].clone();
        }
        if tail_max[i + 1] > tail_max[i] {
            tail_max[i] = tail_max[i + 1].clone();
        }
    }
    let log_bound = matches!(set, IntegerSet::FibonacciValues).then(|| {
        let log_phi = ((1.0 + 5f64.sqrt()) / 2.0).ln();
        xs.iter()
            .zip(&counts)
            .map(|(&x, &count)| {
                let log_bound = (x as f64).ln() / log_phi;
                let corrected_bound = (5f64.sqrt() * x as f64).ln() / log_phi;
                LogBoundCheck {
                    x,
                    count,
                    log_bound,
                    log_bound_holds: (count as f64) <= log_bound,
                    corrected_bound,
                    corrected_bound_holds: (count as f64) <= corrected_bound,
                }
            })
            .collect()
    });
    Ok(DensityProfile {
        set: set.name().to_string(),
        points: xs.to_vec(),
        counts,
        ratios,
        tail_min,
        tail_max,
        log_bound,
    })
}

impl DensityProfile {
    /// CSV with header `x,count,ratio,ratio_decimal`.
    pub fn to_csv(&self, digits: usize) -> String {
        let mut out = String::from("x,count,ratio,ratio_decimal\n");
        for ((x, c), r) in self.points.iter().zip(&self.counts).zip(&self.ratios) {
            out.push_str(&format!(
                "{x},{c},{},{}\n",
                crate::fibcore::rational_string(r),
                crate::fibcore::rational_to_decimal(r, digits)
            ));
        }
        out
    }
}

/// `|{F_n mod p^λ}| / p^λ` for one `λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueDensity {
    pub p: u64,
    pub lambda: u32,
    pub modulus: u64,
    pub pisano_period: u64,
    pub count: u64,
    pub density: Rational,
}

pub fn fib_residue_density(p: u64, lambda: u32) -> Result<ResidueDensity> {
    fib_residue_density_capped(p, lambda, DEFAULT_MODULUS_CAP)
}

pub fn fib_residue_density_capped(p: u64, lambda: u32, cap: u64) -> Result<ResidueDensity> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if lambda == 0 {
        return Err(Error::OutOfRange("lambda must be at least 1".into()));
    }
    let modulus = p
        .checked_pow(lambda)
        .filter(|&m| m <= cap)
        .ok_or(Error::AboveCap {
            what: "p^lambda",
            value: p.saturating_pow(lambda),
            cap,
            hint: "residue enumeration needs memory proportional to the modulus",
        })?;
    let (seen, pisano_period) = residue_bitmap(modulus, 1)?;
    let count = seen.iter().filter(|&&b| b).count() as u64;
    Ok(ResidueDensity {
        p,
        lambda,
        modulus,
        pisano_period,
        count,
        density: Rational::new(count.into(), modulus.into()),
    })
}

impl ResidueDensity {
    pub fn density_f64(&self) -> f64 {
        self.density.to_f64().unwrap_or(f64::NAN)
    }
}
