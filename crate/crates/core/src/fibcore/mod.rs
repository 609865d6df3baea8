//! Fibonacci numbers, their generalizations and the exact number types the
//! rest of the crate is built on.

mod quadratic;

use std::collections::{BTreeSet, VecDeque};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use quadratic::QuadraticReal;

/// Arbitrary-precision fraction, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Indexing convention for the Fibonacci sequence.
///
/// `Shifted(n) == Classic(n + 1)` for every `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum FibConvention {
    /// `F_0 = 0, F_1 = 1`.
    #[default]
    Classic,
    /// `F_0 = F_1 = 1`.
    Shifted,
}

impl FibConvention {
    pub fn name(self) -> &'static str {
        match self {
            FibConvention::Classic => "classic",
            FibConvention::Shifted => "shifted",
        }
    }

    fn offset(self) -> u64 {
        match self {
            FibConvention::Classic => 0,
            FibConvention::Shifted => 1,
        }
    }
}

/// Returns `(F_n, F_{n+1})` in the classic convention by fast doubling.
fn fib_pair(n: u64) -> (BigUint, BigUint) {
    let mut a = BigUint::zero();
    let mut b = BigUint::one();
    for bit in (0..64 - n.leading_zeros()).rev() {
        // (F_2k, F_2k+1) from (F_k, F_k+1)
        let two_b = &b << 1usize;
        let c = &a * (&two_b - &a);
        let d = &a * &a + &b * &b;
        if (n >> bit) & 1 == 1 {
            b = &c + &d;
            a = d;
        } else {
            a = c;
            b = d;
        }
    }
    (a, b)
}

/// `F_n` under the given convention.
pub fn fib(n: u64, conv: FibConvention) -> BigUint {
    fib_pair(n + conv.offset()).0
}

/// `F_n` as a signed integer, convenient for rational arithmetic.
pub fn fib_int(n: u64, conv: FibConvention) -> BigInt {
    BigInt::from(fib(n, conv))
}

/// `F_0..=F_n` under the given convention, by direct recurrence.
pub fn fib_table(n: u64, conv: FibConvention) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let (mut a, mut b) = match conv {
        FibConvention::Classic => (BigUint::zero(), BigUint::one()),
        FibConvention::Shifted => (BigUint::one(), BigUint::one()),
    };
    for _ in 0..=n {
        out.push(a.clone());
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    out
}

/// Generalized Fibonacci number of order `r` with seeds `0, …, 0, 1`.
///
/// `t_0 = … = t_{r−2} = 0`, `t_{r−1} = 1`, and each later term is the
/// sum of the previous `r` terms. Order 2 is the classic sequence.
pub fn order_r_fib(r: u32, n: u64) -> Result<BigUint> {
    if r < 2 {
        return Err(Error::OrderTooSmall(r));
    }
    let r = r as u64;
    if n + 1 < r {
        return Ok(BigUint::zero());
    }
    if n + 1 == r {
        return Ok(BigUint::one());
    }
    let mut window: VecDeque<BigUint> = (0..r - 1).map(|_| BigUint::zero()).collect();
    window.push_back(BigUint::one());
    let mut sum = BigUint::one();
    for _ in r..=n {
        let next = sum.clone();
        let dropped = window.pop_front().expect("window holds r terms");
        sum = sum - dropped + &next;
        window.push_back(next);
    }
    Ok(window.pop_back().expect("window holds r terms"))
}

/// Least `π > 0` with `(F_π, F_{π+1}) ≡ (0, 1) (mod m)`.
pub fn pisano_period(m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::ZeroModulus);
    }
    if m == 1 {
        return Ok(1);
    }
    let m = m as u128;
    let (mut a, mut b) = (0u128, 1u128);
    let mut period = 0u64;
    loop {
        let next = (a + b) % m;
        a = b;
        b = next;
        period += 1;
        if a == 0 && b == 1 {
            return Ok(period);
        }
    }
}

/// Bitmap of residues attained by `F_n mod m` over `periods` full Pisano
/// periods, together with the period.
pub(crate) fn residue_bitmap(m: u64, periods: u64) -> Result<(Vec<bool>, u64)> {
    let period = pisano_period(m)?;
    let mut seen = vec![false; m as usize];
    let modulus = m as u128;
    let (mut a, mut b) = (0u128, 1u128 % modulus);
    for _ in 0..period * periods {
        seen[a as usize] = true;
        let next = (a + b) % modulus;
        a = b;
        b = next;
    }
    Ok((seen, period))
}

/// The set `{F_n mod m : n ≥ 0}`, read off one Pisano period.
pub fn fib_residues(m: u64) -> Result<BTreeSet<u64>> {
    let (seen, _) = residue_bitmap(m, 1)?;
    Ok(seen
        .iter()
        .enumerate()
        .filter_map(|(r, &hit)| hit.then_some(r as u64))
        .collect())
}

/// Euler's totient by trial-division factorization.
pub fn totient(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::OutOfRange("totient is defined for n >= 1".into()));
    }
    let mut rest = n;
    let mut result = n;
    let mut p = 2u64;
    while p * p <= rest {
        if rest % p == 0 {
            while rest % p == 0 {
                rest /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if rest > 1 {
        result -= result / rest;
    }
    Ok(result)
}

/// Totients of `1..=n` by a sieve; index 0 holds 0.
pub fn totient_table(n: usize) -> Vec<u64> {
    let mut phi: Vec<u64> = (0..=n as u64).collect();
    for i in 2..=n {
        if phi[i] == i as u64 {
            for j in (i..=n).step_by(i) {
                phi[j] -= phi[j] / i as u64;
            }
        }
    }
    phi
}

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The first `count` convergents of `√5 = [2; 4, 4, 4, …]`.
pub fn sqrt5_convergents(count: usize) -> Vec<Rational> {
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let a = BigInt::from(if i == 0 { 2 } else { 4 });
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        out.push(Rational::new(h.clone(), k.clone()));
    }
    out
}

/// Renders `scaled / 10^digits` as a decimal string.
pub(crate) fn format_scaled(scaled: &BigInt, digits: usize) -> String {
    let negative = scaled.is_negative();
    let mut s = scaled.abs().to_string();
    if digits > 0 {
        if s.len() <= digits {
            s = format!("{}{}", "0".repeat(digits + 1 - s.len()), s);
        }
        s.insert(s.len() - digits, '.');
    }
    if negative {
        s.insert(0, '-');
    }
    s
}

/// Exact decimal rendering of a rational, rounded half-up.
pub fn rational_to_decimal(r: &Rational, digits: usize) -> String {
    let scale = BigInt::from(10).pow(digits as u32);
    let scaled = r * Rational::from_integer(scale) + Rational::new(1.into(), 2.into());
    format_scaled(&scaled.floor().to_integer(), digits)
}

/// Exact decimal rendering of a rational, truncated toward negative infinity.
pub fn rational_to_decimal_floor(r: &Rational, digits: usize) -> String {
    let scale = BigInt::from(10).pow(digits as u32);
    let scaled = r * Rational::from_integer(scale);
    format_scaled(&scaled.floor().to_integer(), digits)
}

/// Parses `"p"`, `"p/q"` or a finite decimal like `"0.125"` into a rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let whole: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        let frac_num: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = BigInt::from(10).pow(frac.len() as u32);
        let frac_part = Rational::new(frac_num, scale);
        let whole = Rational::from_integer(whole.abs());
        let v = whole + frac_part;
        return Ok(if negative { -v } else { v });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Parses an element of Q(√5): a rational, `phi`, or a sum of rational
/// terms and rational multiples of `sqrt5`, e.g. `1/2+1/2*sqrt5` or
/// `-1 + 2*sqrt5`.
pub fn parse_real(s: &str) -> Result<QuadraticReal> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    match compact.as_str() {
        "phi" => return Ok(QuadraticReal::phi()),
        "psi" => return Ok(QuadraticReal::psi()),
        "" => return Err(Error::Parse("empty number".into())),
        _ => {}
    }
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, c) in compact.char_indices() {
        if (c == '+' || c == '-') && i > start {
            terms.push(&compact[start..i]);
            start = i;
        }
    }
    terms.push(&compact[start..]);

    let mut value = QuadraticReal::zero();
    for term in terms {
        let body = term.strip_prefix('+').unwrap_or(term);
        if let Some(coef) = body.strip_suffix("sqrt5") {
            let coef = coef.strip_suffix('*').unwrap_or(coef);
            let q = match coef {
                "" => Rational::one(),
                "-" => -Rational::one(),
                c => parse_rational(c)?,
            };
            value = &value + &QuadraticReal::new(Rational::zero(), q);
        } else {
            value = &value + &QuadraticReal::from_rational(parse_rational(body)?);
        }
    }
    Ok(value)
}

/// `"p/q"`, or `"p"` for integers.
pub fn rational_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use std::cmp::Ordering;

    fn naive_fib(n: u64, conv: FibConvention) -> BigUint {
        let (mut a, mut b) = match conv {
            FibConvention::Classic => (BigUint::zero(), BigUint::one()),
            FibConvention::Shifted => (BigUint::one(), BigUint::one()),
        };
        for _ in 0..n {
            let next = &a + &b;
            a = std::mem::replace(&mut b, next);
        }
        a
    }

    #[test]
    fn fib_examples() {
        assert_eq!(fib(0, FibConvention::Classic), BigUint::zero());
        assert_eq!(fib(10, FibConvention::Classic), BigUint::from(55u32));
        assert_eq!(fib(5, FibConvention::Shifted), BigUint::from(8u32));
    }

    #[test]
    fn fast_doubling_matches_recurrence() {
        for conv in [FibConvention::Classic, FibConvention::Shifted] {
            let table = fib_table(2000, conv);
            for n in 0..=2000u64 {
                assert_eq!(fib(n, conv), table[n as usize], "n={n} {conv:?}");
            }
            assert_eq!(table[2000], naive_fib(2000, conv));
        }
    }

    #[test]
    fn conversion_law() {
        for n in 0..300 {
            assert_eq!(fib(n, FibConvention::Shifted), fib(n + 1, FibConvention::Classic));
        }
    }

    #[test]
    fn binet_holds_exactly() {
        let phi = QuadraticReal::phi();
        let psi = QuadraticReal::psi();
        let s5 = QuadraticReal::sqrt5();
        let (mut pp, mut qq) = (QuadraticReal::one(), QuadraticReal::one());
        for n in 0..=200u64 {
            let lhs = &s5 * &QuadraticReal::from_integer(fib_int(n, FibConvention::Classic));
            assert_eq!(lhs, &pp - &qq, "n={n}");
            pp = &pp * &phi;
            qq = &qq * &psi;
        }
    }

    #[test]
    fn order_r_examples() {
        for n in 0..=30 {
            assert_eq!(order_r_fib(2, n).unwrap(), fib(n, FibConvention::Classic));
        }
        assert_eq!(order_r_fib(3, 8).unwrap(), BigUint::from(24u32));
        assert_eq!(order_r_fib(4, 8).unwrap(), BigUint::from(15u32));
        assert_eq!(order_r_fib(1, 8), Err(Error::OrderTooSmall(1)));
    }

    #[test]
    fn order_r_matches_naive_sum() {
        for r in 2..7u32 {
            let mut seq: Vec<u64> = vec![0; r as usize - 1];
            seq.push(1);
            while seq.len() < 40 {
                let s = seq[seq.len() - r as usize..].iter().sum();
                seq.push(s);
            }
            for (n, v) in seq.iter().enumerate() {
                assert_eq!(order_r_fib(r, n as u64).unwrap(), BigUint::from(*v));
            }
        }
    }

    #[test]
    fn pisano_examples() {
        assert_eq!(pisano_period(1).unwrap(), 1);
        assert_eq!(pisano_period(2).unwrap(), 3);
        assert_eq!(pisano_period(8).unwrap(), 12);
        assert_eq!(pisano_period(10).unwrap(), 60);
        assert_eq!(pisano_period(0), Err(Error::ZeroModulus));
    }

    #[test]
    fn pisano_is_a_period() {
        for m in 1..=64u64 {
            let pi = pisano_period(m).unwrap();
            let seq: Vec<u64> = {
                let (mut a, mut b) = (0u64, 1 % m);
                (0..4 * pi + 2)
                    .map(|_| {
                        let out = a;
                        let next = (a + b) % m;
                        a = b;
                        b = next;
                        out
                    })
                    .collect()
            };
            for n in 0..=(3 * pi) as usize {
                assert_eq!(seq[n], seq[n + pi as usize], "m={m} n={n}");
            }
        }
    }

    #[test]
    fn residue_examples() {
        let v = |m| fib_residues(m).unwrap().into_iter().collect::<Vec<_>>();
        assert_eq!(v(2), vec![0, 1]);
        assert_eq!(v(8), vec![0, 1, 2, 3, 5, 7]);
        assert_eq!(v(11), vec![0, 1, 2, 3, 5, 8, 10]);
    }

    #[test]
    fn totient_examples() {
        assert_eq!(totient(1).unwrap(), 1);
        assert_eq!(totient(7).unwrap(), 6);
        assert_eq!(totient(12).unwrap(), 4);
        let table = totient_table(500);
        for n in 1..=500u64 {
            let brute = (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64;
            assert_eq!(totient(n).unwrap(), brute);
            assert_eq!(table[n as usize], brute);
        }
    }

    #[test]
    fn convergent_examples() {
        let c = sqrt5_convergents(4);
        assert_eq!(c[0], Rational::from_integer(2.into()));
        assert_eq!(c[1], Rational::new(9.into(), 4.into()));
        assert_eq!(c[2], Rational::new(38.into(), 17.into()));
        assert_eq!(c[3], Rational::new(161.into(), 72.into()));
    }

    #[test]
    fn convergents_alternate_around_sqrt5() {
        let s5 = QuadraticReal::sqrt5();
        for (i, c) in sqrt5_convergents(40).into_iter().enumerate() {
            let k = i + 1;
            let diff = &QuadraticReal::from_rational(c) - &s5;
            let expected = if k % 2 == 1 { Ordering::Less } else { Ordering::Greater };
            assert_eq!(diff.signum(), expected, "k={k}");
        }
    }

    #[test]
    fn decimal_helpers() {
        let r = Rational::new(1.into(), 3.into());
        assert_eq!(rational_to_decimal(&r, 4), "0.3333");
        assert_eq!(rational_to_decimal(&Rational::new((-2).into(), 3.into()), 2), "-0.67");
        assert_eq!(rational_to_decimal(&Rational::new(5.into(), 8.into()), 0), "1");
        assert_eq!(parse_rational("0.125").unwrap(), Rational::new(1.into(), 8.into()));
        assert_eq!(parse_rational("-7/14").unwrap(), Rational::new((-1).into(), 2.into()));
        assert_eq!(parse_rational("-0.5").unwrap(), Rational::new((-1).into(), 2.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(parse_real("phi").unwrap(), QuadraticReal::phi());
        assert_eq!(parse_real("1/2 + 1/2*sqrt5").unwrap(), QuadraticReal::phi());
        assert_eq!(parse_real("-1+sqrt5").unwrap(), &QuadraticReal::sqrt5() - &QuadraticReal::one());
        assert_eq!(parse_real("3-2*sqrt5").unwrap().to_decimal(3), "-1.472");
        assert_eq!(parse_real("-sqrt5").unwrap(), -QuadraticReal::sqrt5());
        assert_eq!(parse_real("3/2").unwrap(), QuadraticReal::from_ratio(3, 2));
        assert!(parse_real("2*sqrtx").is_err());
        assert!(parse_real("").is_err());
    }
}
