//! Digit expansions of real numbers in a constant base `θ > 1` and in the
//! Fibonacci-denominator system `a = a_0 + Σ ᾱ_k / F_k`.
//!
//! Values live in Q(√5) so that bases such as `φ` are handled exactly; a
//! rational value is just an element with zero surd part.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fibcore::{fib_int, FibConvention, QuadraticReal};

/// Exact real number carrier for expansions: a rational or an element of
/// Q(√5).
pub type RealValue = QuadraticReal;

/// Digits `λ̄_k = ⌊θ x_{k−1}⌋` and remainders `x_k = {θ x_{k−1}}` of a value
/// `α ∈ [0, 1)` in base `θ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaExpansion {
    pub value: RealValue,
    pub base: RealValue,
    pub digits: Vec<BigInt>,
    /// `remainders[k]` is `x_k`; `remainders[0] = α`.
    pub remainders: Vec<RealValue>,
}

/// Expands `alpha ∈ [0, 1)` to `n` digits in base `theta > 1`.
///
/// Once a remainder hits zero every later digit is zero; the expansion is
/// padded rather than truncated.
pub fn theta_digits(alpha: &RealValue, theta: &RealValue, n: usize) -> Result<ThetaExpansion> {
    if *theta <= QuadraticReal::one() {
        return Err(Error::BaseTooSmall);
    }
    check_unit_interval(alpha)?;
    let mut digits = Vec::with_capacity(n);
    let mut remainders = Vec::with_capacity(n + 1);
    remainders.push(alpha.clone());
    let mut x = alpha.clone();
    for _ in 0..n {
        let scaled = theta * &x;
        let digit = scaled.floor();
        x = &scaled - &QuadraticReal::from_integer(digit.clone());
        digits.push(digit);
        remainders.push(x.clone());
    }
    Ok(ThetaExpansion { value: alpha.clone(), base: theta.clone(), digits, remainders })
}

fn check_unit_interval(alpha: &RealValue) -> Result<()> {
    if alpha.is_negative() || *alpha >= QuadraticReal::one() {
        return Err(Error::OutOfRange(format!("value {alpha} is not in [0, 1)")));
    }
    Ok(())
}

/// `Σ_{k≤n} digits_k / θ^k` for an arbitrary digit stream.
pub fn digit_stream_sum(digits: &[BigInt], theta: &RealValue, n: usize) -> RealValue {
    let inv = theta.recip().expect("base is nonzero");
    let mut weight = QuadraticReal::one();
    let mut acc = QuadraticReal::zero();
    for d in digits.iter().take(n) {
        weight = &weight * &inv;
        acc = &acc + &(&weight * &QuadraticReal::from_integer(d.clone()));
    }
    acc
}

/// `A_n = Σ_{k≤n} λ̄_k / θ^k`.
pub fn theta_partial_sum(exp: &ThetaExpansion, n: usize) -> Result<RealValue> {
    if n > exp.digits.len() {
        return Err(Error::OutOfRange(format!(
            "prefix {n} exceeds the {} computed digits",
            exp.digits.len()
        )));
    }
    Ok(digit_stream_sum(&exp.digits, &exp.base, n))
}

/// Does `0 ≤ α − A_n < θ^{−n}` hold for the first `n` digits of `digits`?
pub fn theta_prefix_bound_holds(
    alpha: &RealValue,
    theta: &RealValue,
    digits: &[BigInt],
    n: usize,
) -> bool {
    let gap = alpha - &digit_stream_sum(digits, theta, n);
    !gap.is_negative() && gap < theta.pow(-(n as i64))
}

impl ThetaExpansion {
    /// First prefix length at which `0 ≤ α − A_n < θ^{−n}` fails, if any.
    pub fn first_bound_violation(&self) -> Option<usize> {
        let inv = self.base.recip().expect("base is nonzero");
        let mut weight = QuadraticReal::one();
        let mut partial = QuadraticReal::zero();
        for (k, d) in self.digits.iter().enumerate() {
            weight = &weight * &inv;
            partial = &partial + &(&weight * &QuadraticReal::from_integer(d.clone()));
            let gap = &self.value - &partial;
            if gap.is_negative() || gap >= weight {
                return Some(k + 1);
            }
        }
        None
    }

    /// Every digit is an integer in `[0, θ)`.
    pub fn digits_in_range(&self) -> bool {
        self.digits.iter().all(|d| {
            let d = QuadraticReal::from_integer(d.clone());
            !d.is_negative() && d < self.base
        })
    }
}

/// `a = a_0 + Σ ᾱ_k / F_k` with `F_0 = F_1 = 1` and `ᾱ_k ∈ {0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibFractionRep {
    pub value: RealValue,
    pub integer_part: BigInt,
    /// `digits[k - 1]` is `ᾱ_k`.
    pub digits: Vec<u8>,
    /// `remainders[k]` is `x_k`; `remainders[0] = {a}`.
    pub remainders: Vec<RealValue>,
}

/// Digits of `a ≥ 0` in the Fibonacci-denominator system, `n` of them.
///
/// `ᾱ_k = ⌊(F_k / F_{k−1}) x_{k−1}⌋`, `x_k = {(F_k / F_{k−1}) x_{k−1}}`
/// with `x_0 = {a}`. Since `F_k / F_{k−1} < 2` and `x < 1`, each digit
/// is 0 or 1.
pub fn fib_fraction_digits(a: &RealValue, n: usize) -> Result<FibFractionRep> {
    if a.is_negative() {
        return Err(Error::OutOfRange(format!("value {a} is negative")));
    }
    let integer_part = a.floor();
    let mut x = a.fract();
    let mut remainders = vec![x.clone()];
    let mut digits = Vec::with_capacity(n);
    let mut f_prev = fib_int(0, FibConvention::Shifted);
    for k in 1..=n as u64 {
        let f = fib_int(k, FibConvention::Shifted);
        let ratio = QuadraticReal::from_ratio(f.clone(), f_prev);
        let scaled = &ratio * &x;
        let digit = scaled.floor();
        x = &scaled - &QuadraticReal::from_integer(digit.clone());
        digits.push(if digit.is_zero() { 0 } else { 1 });
        debug_assert!(digit.is_zero() || digit.is_one());
        remainders.push(x.clone());
        f_prev = f;
    }
    Ok(FibFractionRep { value: a.clone(), integer_part, digits, remainders })
}

/// `a_0 + Σ_{k≤n} digits_k / F_k` for an arbitrary 0/1 stream.
pub fn fib_stream_sum(integer_part: &BigInt, digits: &[u8], n: usize) -> RealValue {
    let mut acc = QuadraticReal::from_integer(integer_part.clone());
    for (k, &d) in digits.iter().take(n).enumerate() {
        if d != 0 {
            let f = fib_int(k as u64 + 1, FibConvention::Shifted);
            acc = &acc + &QuadraticReal::from_ratio(i64::from(d), f);
        }
    }
    acc
}

/// `A_n = a_0 + Σ_{k≤n} ᾱ_k / F_k`.
pub fn fib_fraction_partial(rep: &FibFractionRep, n: usize) -> Result<RealValue> {
    if n > rep.digits.len() {
        return Err(Error::OutOfRange(format!(
            "prefix {n} exceeds the {} computed digits",
            rep.digits.len()
        )));
    }
    Ok(fib_stream_sum(&rep.integer_part, &rep.digits, n))
}

/// Does `0 ≤ a − A_n < 1/F_n` hold for the first `n` digits of `digits`?
pub fn fib_prefix_bound_holds(a: &RealValue, integer_part: &BigInt, digits: &[u8], n: usize) -> bool {
    let gap = a - &fib_stream_sum(integer_part, digits, n);
    let bound = QuadraticReal::from_ratio(1, fib_int(n as u64, FibConvention::Shifted));
    !gap.is_negative() && gap < bound
}

impl FibFractionRep {
    /// First prefix length `n ≥ 1` at which `0 ≤ a − A_n < 1/F_n` fails.
    pub fn first_bound_violation(&self) -> Option<usize> {
        let mut partial = QuadraticReal::from_integer(self.integer_part.clone());
        for (k, &d) in self.digits.iter().enumerate() {
            let f = fib_int(k as u64 + 1, FibConvention::Shifted);
            let inv = QuadraticReal::from_ratio(1, f);
            if d != 0 {
                partial = &partial + &inv;
            }
            let gap = &self.value - &partial;
            if gap.is_negative() || gap >= inv {
                return Some(k + 1);
            }
        }
        None
    }
}
