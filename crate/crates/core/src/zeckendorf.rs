//! Zeckendorf representations over the shifted Fibonacci numbers
//! `F_1 = 1, F_2 = 2, F_3 = 3, F_4 = 5, …`.
//!
//! Index 0 is never used: with `F_0 = F_1 = 1` it would duplicate `F_1` and
//! break uniqueness.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fibcore::{fib, FibConvention};

/// A 0/1 coefficient vector `a_1 … a_n` with `a_n = 1` and no two adjacent
/// ones, together with the value `Σ a_s F_s` it denotes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeckendorfRep {
    /// `coefficients[s - 1]` is `a_s`.
    coefficients: Vec<u8>,
    value: BigUint,
}

impl ZeckendorfRep {
    /// Builds a representation from the indices carrying a one.
    ///
    /// Indices must be at least 1 and pairwise non-adjacent; duplicates are
    /// rejected along with index 0.
    pub fn from_indices(indices: &[usize]) -> Result<Self> {
        let Some(&top) = indices.iter().max() else {
            return Err(Error::InvalidRepresentation("no coefficient is one".into()));
        };
        let mut coefficients = vec![0u8; top];
        for &i in indices {
            if i == 0 {
                return Err(Error::InvalidRepresentation("index 0 is not allowed".into()));
            }
            if coefficients[i - 1] == 1 {
                return Err(Error::InvalidRepresentation(format!("index {i} repeated")));
            }
            coefficients[i - 1] = 1;
        }
        Self::from_coefficients(coefficients)
    }

    /// Builds a representation from `a_1 … a_n`, validating the invariants.
    pub fn from_coefficients(coefficients: Vec<u8>) -> Result<Self> {
        validate(&coefficients)?;
        let value = weighted_sum(&coefficients);
        Ok(Self { coefficients, value })
    }

    pub fn coefficients(&self) -> &[u8] {
        &self.coefficients
    }

    /// Indices `s` with `a_s = 1`, ascending.
    pub fn indices(&self) -> Vec<usize> {
        self.coefficients
            .iter()
            .enumerate()
            .filter_map(|(i, &c)| (c == 1).then_some(i + 1))
            .collect()
    }

    /// The leading index `n`.
    pub fn leading_index(&self) -> usize {
        self.coefficients.len()
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }
}

fn validate(coefficients: &[u8]) -> Result<()> {
    match coefficients.last() {
        Some(1) => {}
        Some(_) => return Err(Error::InvalidRepresentation("leading coefficient is zero".into())),
        None => return Err(Error::InvalidRepresentation("empty coefficient vector".into())),
    }
    if let Some(c) = coefficients.iter().find(|&&c| c > 1) {
        return Err(Error::InvalidRepresentation(format!("coefficient {c} is not 0 or 1")));
    }
    if let Some(s) = coefficients.windows(2).position(|w| w[0] == 1 && w[1] == 1) {
        return Err(Error::InvalidRepresentation(format!(
            "adjacent ones at indices {} and {}",
            s + 1,
            s + 2
        )));
    }
    Ok(())
}

fn weighted_sum(coefficients: &[u8]) -> BigUint {
    let mut sum = BigUint::zero();
    let (mut f_prev, mut f) = (BigUint::from(1u32), BigUint::from(1u32));
    for &c in coefficients {
        if c == 1 {
            sum += &f;
        }
        let next = &f + &f_prev;
        f_prev = std::mem::replace(&mut f, next);
    }
    sum
}

/// Shifted Fibonacci numbers `F_1, F_2, …` up to and including the first
/// one exceeding `a`.
fn fib_ladder(a: &BigUint) -> Vec<BigUint> {
    let mut ladder = vec![BigUint::from(1u32), BigUint::from(2u32)];
    while ladder.last().expect("nonempty") <= a {
        let n = ladder.len();
        let next = &ladder[n - 1] + &ladder[n - 2];
        ladder.push(next);
    }
    ladder
}

/// Greedy decomposition of `a ≥ 1`.
///
/// Picks the unique `n` with `F_n ≤ a < F_{n+1}`, subtracts, and repeats on
/// the remainder, which is always below `F_{n−1}`.
pub fn encode(a: &BigUint) -> Result<ZeckendorfRep> {
    if a.is_zero() {
        return Err(Error::ZeroHasNoRepresentation);
    }
    let ladder = fib_ladder(a);
    let top = ladder.iter().rposition(|f| f <= a).expect("F_1 = 1 <= a");
    let mut coefficients = vec![0u8; top + 1];
    let mut rest = a.clone();
    for s in (0..=top).rev() {
        if ladder[s] <= rest {
            rest -= &ladder[s];
            coefficients[s] = 1;
        }
    }
    debug_assert!(rest.is_zero());
    Ok(ZeckendorfRep { coefficients, value: a.clone() })
}

/// Convenience wrapper over [`encode`] for machine integers.
pub fn encode_u64(a: u64) -> Result<ZeckendorfRep> {
    encode(&BigUint::from(a))
}

/// Weighted sum of a representation, after checking its invariants.
pub fn decode(rep: &ZeckendorfRep) -> Result<BigUint> {
    validate(&rep.coefficients)?;
    Ok(weighted_sum(&rep.coefficients))
}

/// Counts the 0/1 vectors over indices `1..=max_index` with no adjacent
/// ones whose weighted sum is `a`, by visiting every such vector.
pub fn uniqueness_oracle(a: u64, max_index: usize) -> u64 {
    let weights: Vec<u64> = (1..=max_index as u64)
        .map(|s| {
            u64::try_from(fib(s, FibConvention::Shifted)).expect("index small enough for u64")
        })
        .collect();

    fn visit(weights: &[u64], pos: usize, sum: u64, target: u64) -> u64 {
        if pos >= weights.len() {
            return u64::from(sum == target);
        }
        // a_pos = 0, or a_pos = 1 which forces a_{pos+1} = 0
        visit(weights, pos + 1, sum, target)
            + visit(weights, pos + 2, sum.saturating_add(weights[pos]), target)
    }

    visit(&weights, 0, 0, a)
}

/// The smallest index `n` with `F_n ≥ a` (shifted convention).
pub fn covering_index(a: u64) -> usize {
    let mut s = 1usize;
    while fib(s as u64, FibConvention::Shifted) < BigUint::from(a) {
        s += 1;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn encode_examples() {
        assert_eq!(encode_u64(1).unwrap().indices(), vec![1]);
        assert_eq!(encode_u64(10).unwrap().indices(), vec![2, 5]);
        assert_eq!(encode_u64(100).unwrap().indices(), vec![3, 5, 10]);
        assert_eq!(encode_u64(0), Err(Error::ZeroHasNoRepresentation));
    }

    #[test]
    fn decode_examples() {
        let d = |ix: &[usize]| decode(&ZeckendorfRep::from_indices(ix).unwrap()).unwrap();
        assert_eq!(d(&[1]), BigUint::from(1u32));
        assert_eq!(d(&[2, 5]), BigUint::from(10u32));
        assert_eq!(d(&[3, 5, 10]), BigUint::from(100u32));
    }

    #[test]
    fn invalid_representations_are_rejected() {
        assert!(ZeckendorfRep::from_indices(&[2, 3]).is_err());
        assert!(ZeckendorfRep::from_indices(&[0, 2]).is_err());
        assert!(ZeckendorfRep::from_indices(&[]).is_err());
        assert!(ZeckendorfRep::from_coefficients(vec![1, 0, 0]).is_err());
        assert!(ZeckendorfRep::from_coefficients(vec![2, 0, 1]).is_err());
        let bad = ZeckendorfRep { coefficients: vec![0, 1, 1], value: BigUint::from(5u32) };
        assert!(decode(&bad).is_err());
    }

    #[test]
    fn round_trip_and_leading_index() {
        for a in 1..=10_000u64 {
            let rep = encode_u64(a).unwrap();
            assert_eq!(decode(&rep).unwrap(), BigUint::from(a));
            let n = rep.leading_index() as u64;
            let big = BigUint::from(a);
            assert!(fib(n, FibConvention::Shifted) <= big);
            assert!(big < fib(n + 1, FibConvention::Shifted));
            assert!(rep.coefficients().windows(2).all(|w| w[0] * w[1] == 0));
        }
    }

    #[test]
    fn uniqueness_examples() {
        assert_eq!(uniqueness_oracle(1, 1), 1);
        assert_eq!(uniqueness_oracle(50, covering_index(50)), 1);
        // 3 = F_3 = F_1 + F_2 only once adjacency is forbidden.
        assert_eq!(uniqueness_oracle(3, 3), 1);
    }

    #[test]
    fn large_values_round_trip() {
        let a = fib(300, FibConvention::Shifted) + fib(100, FibConvention::Shifted) + 7u32;
        let rep = encode(&a).unwrap();
        assert_eq!(decode(&rep).unwrap(), a);
        assert_eq!(rep.leading_index(), 300);
    }

    proptest! {
        #[test]
        fn no_adjacent_ones(a in 1u64..u64::MAX) {
            let rep = encode_u64(a).unwrap();
            prop_assert!(rep.coefficients().windows(2).all(|w| w[0] * w[1] == 0));
            prop_assert_eq!(rep.coefficients().last(), Some(&1));
            prop_assert_eq!(decode(&rep).unwrap(), BigUint::from(a));
        }
    }
}
