//! Exact arithmetic in the real quadratic field Q(√5).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational_to_decimal;

/// An element `p + q·√5` of Q(√5) with rational coordinates.
///
/// Comparison, sign and floor are decided exactly from the coordinates;
/// no floating point is involved anywhere except [`QuadraticReal::to_f64`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticReal {
    p: BigRational,
    q: BigRational,
}

impl QuadraticReal {
    pub fn new(p: BigRational, q: BigRational) -> Self {
        Self { p, q }
    }

    pub fn from_rational(p: BigRational) -> Self {
        Self { p, q: BigRational::zero() }
    }

    pub fn from_integer<T: Into<BigInt>>(n: T) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    /// `n / d` as a rational element. Panics if `d == 0`.
    pub fn from_ratio<T: Into<BigInt>, U: Into<BigInt>>(n: T, d: U) -> Self {
        Self::from_rational(BigRational::new(n.into(), d.into()))
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn sqrt5() -> Self {
        Self { p: BigRational::zero(), q: BigRational::one() }
    }

    /// The golden ratio `1/2 + √5/2`.
    pub fn phi() -> Self {
        let half = BigRational::new(1.into(), 2.into());
        Self { p: half.clone(), q: half }
    }

    /// The conjugate root `1 − φ = 1/2 − √5/2`.
    pub fn psi() -> Self {
        let half = BigRational::new(1.into(), 2.into());
        Self { p: half.clone(), q: -half }
    }

    /// Rational part.
    pub fn rational_part(&self) -> &BigRational {
        &self.p
    }

    /// Coefficient of √5.
    pub fn surd_part(&self) -> &BigRational {
        &self.q
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.p)
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        Self { p: self.p.clone(), q: -self.q.clone() }
    }

    /// Field norm `p² − 5q²`.
    pub fn norm(&self) -> BigRational {
        &self.p * &self.p - BigRational::from_integer(5.into()) * &self.q * &self.q
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // The norm of a nonzero element never vanishes since √5 is irrational.
        let n = self.norm();
        Some(Self { p: &self.p / &n, q: -(&self.q / &n) })
    }

    /// Integer power; negative exponents go through [`recip`](Self::recip).
    ///
    /// Panics on a negative power of zero.
    pub fn pow(&self, exp: i64) -> Self {
        let base = if exp < 0 {
            self.recip().expect("negative power of zero")
        } else {
            self.clone()
        };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        acc
    }

    /// Exact sign as an [`Ordering`] against zero.
    pub fn signum(&self) -> Ordering {
        let sp = self.p.cmp(&BigRational::zero());
        let sq = self.q.cmp(&BigRational::zero());
        match (sp, sq) {
            (s, Ordering::Equal) => s,
            (Ordering::Equal, s) => s,
            (a, b) if a == b => a,
            _ => {
                // Opposite signs: the larger magnitude wins, p² vs 5q².
                let p2 = &self.p * &self.p;
                let q2 = BigRational::from_integer(5.into()) * &self.q * &self.q;
                if p2 > q2 {
                    sp
                } else {
                    sq
                }
            }
        }
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Exact `⌊self⌋`.
    ///
    /// Writes the value as `(a + b√5)/d` over a common denominator and
    /// brackets `b√5` between consecutive integers with an integer square
    /// root. Because `a + b√5` lies strictly inside `(a + s, a + s + 1)`
    /// when `b ≠ 0`, the floor of the quotient is `⌊(a + s)/d⌋`.
    pub fn floor(&self) -> BigInt {
        let d = self.p.denom().lcm(self.q.denom());
        let a = self.p.numer() * (&d / self.p.denom());
        let b = self.q.numer() * (&d / self.q.denom());
        if b.is_zero() {
            return a.div_floor(&d);
        }
        let root = (BigInt::from(5) * &b * &b).sqrt();
        let s = if b.sign() == Sign::Minus { -root - 1 } else { root };
        (a + s).div_floor(&d)
    }

    pub fn ceil(&self) -> BigInt {
        -(-self.clone()).floor()
    }

    /// Fractional part `self − ⌊self⌋`, always in `[0, 1)`.
    pub fn fract(&self) -> Self {
        self - &Self::from_integer(self.floor())
    }

    /// Floating-point approximation for display only.
    pub fn to_f64(&self) -> f64 {
        let p = self.p.to_f64().unwrap_or(f64::NAN);
        let q = self.q.to_f64().unwrap_or(f64::NAN);
        p + q * 5f64.sqrt()
    }

    /// Decimal string rounded half-up to `digits` places, computed exactly.
    pub fn to_decimal(&self, digits: usize) -> String {
        if let Some(r) = self.as_rational() {
            return rational_to_decimal(r, digits);
        }
        let scale = BigInt::from(10).pow(digits as u32);
        let scaled = self * &Self::from_integer(scale.clone());
        let rounded = (scaled + Self::from_ratio(1, 2)).floor();
        super::format_scaled(&rounded, digits)
    }
}

impl fmt::Display for QuadraticReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            return write!(f, "{}", self.p);
        }
        if self.p.is_zero() {
            return write!(f, "{}*sqrt5", self.q);
        }
        if self.q.is_negative() {
            write!(f, "{} - {}*sqrt5", self.p, -self.q.clone())
        } else {
            write!(f, "{} + {}*sqrt5", self.p, self.q)
        }
    }
}

impl PartialOrd for QuadraticReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadraticReal {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl From<BigRational> for QuadraticReal {
    fn from(r: BigRational) -> Self {
        Self::from_rational(r)
    }
}

impl From<i64> for QuadraticReal {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl<'a> Add<&'a QuadraticReal> for &'a QuadraticReal {
    type Output = QuadraticReal;
    fn add(self, rhs: &QuadraticReal) -> QuadraticReal {
        QuadraticReal { p: &self.p + &rhs.p, q: &self.q + &rhs.q }
    }
}

impl<'a> Sub<&'a QuadraticReal> for &'a QuadraticReal {
    type Output = QuadraticReal;
    fn sub(self, rhs: &QuadraticReal) -> QuadraticReal {
        QuadraticReal { p: &self.p - &rhs.p, q: &self.q - &rhs.q }
    }
}

impl<'a> Mul<&'a QuadraticReal> for &'a QuadraticReal {
    type Output = QuadraticReal;
    fn mul(self, rhs: &QuadraticReal) -> QuadraticReal {
        let five = BigRational::from_integer(5.into());
        QuadraticReal {
            p: &self.p * &rhs.p + five * &self.q * &rhs.q,
            q: &self.p * &rhs.q + &self.q * &rhs.p,
        }
    }
}

impl<'a> Div<&'a QuadraticReal> for &'a QuadraticReal {
    type Output = QuadraticReal;
    fn div(self, rhs: &QuadraticReal) -> QuadraticReal {
        self * &rhs.recip().expect("division by zero in Q(sqrt5)")
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<QuadraticReal> for QuadraticReal {
            type Output = QuadraticReal;
            fn $m(self, rhs: QuadraticReal) -> QuadraticReal {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a QuadraticReal> for QuadraticReal {
            type Output = QuadraticReal;
            fn $m(self, rhs: &QuadraticReal) -> QuadraticReal {
                (&self).$m(rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for QuadraticReal {
    type Output = QuadraticReal;
    fn neg(self) -> QuadraticReal {
        QuadraticReal { p: -self.p, q: -self.q }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qr(pn: i64, pd: i64, qn: i64, qd: i64) -> QuadraticReal {
        QuadraticReal::new(
            BigRational::new(pn.into(), pd.into()),
            BigRational::new(qn.into(), qd.into()),
        )
    }

    #[test]
    fn golden_ratio_identities() {
        let phi = QuadraticReal::phi();
        let psi = QuadraticReal::psi();
        assert_eq!(&phi * &psi, QuadraticReal::from_integer(-1));
        assert_eq!(&phi * &phi, &phi + &QuadraticReal::one());
        assert_eq!(&phi * &(&phi - &QuadraticReal::one()), QuadraticReal::one());
        assert_eq!(phi.pow(-1), &phi - &QuadraticReal::one());
    }

    #[test]
    fn floor_at_known_points() {
        assert_eq!(QuadraticReal::sqrt5().floor(), 2.into());
        assert_eq!((-QuadraticReal::sqrt5()).floor(), (-3).into());
        assert_eq!(QuadraticReal::phi().floor(), 1.into());
        assert_eq!(QuadraticReal::psi().floor(), (-1).into());
        // φ³ = 2 + √5 ≈ 4.236
        assert_eq!(QuadraticReal::phi().pow(3).floor(), 4.into());
        // 9/4 − √5 ≈ 0.0139
        assert_eq!(qr(9, 4, -1, 1).floor(), 0.into());
        assert_eq!(qr(-9, 4, 1, 1).floor(), (-1).into());
        assert_eq!(QuadraticReal::from_ratio(-7, 2).floor(), (-4).into());
    }

    #[test]
    fn sign_with_mixed_coordinates() {
        assert_eq!(qr(9, 4, -1, 1).signum(), Ordering::Greater);
        assert_eq!(qr(2, 1, -1, 1).signum(), Ordering::Less);
        assert_eq!(qr(0, 1, 0, 1).signum(), Ordering::Equal);
        assert!(QuadraticReal::phi() > QuadraticReal::from_ratio(1618033988, 1_000_000_000));
        assert!(QuadraticReal::phi() < QuadraticReal::from_ratio(1618033989, 1_000_000_000));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(QuadraticReal::sqrt5().to_decimal(6), "2.236068");
        assert_eq!(QuadraticReal::phi().to_decimal(0), "2");
        assert_eq!((-QuadraticReal::sqrt5()).to_decimal(3), "-2.236");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn floor_brackets_value(pn in -10_000i64..10_000, pd in 1i64..500,
                                qn in -10_000i64..10_000, qd in 1i64..500) {
            let x = qr(pn, pd, qn, qd);
            let f = QuadraticReal::from_integer(x.floor());
            prop_assert!(f <= x);
            prop_assert!(x < &f + &QuadraticReal::one());
            let fr = x.fract();
            prop_assert!(fr >= QuadraticReal::zero() && fr < QuadraticReal::one());
        }

        #[test]
        fn ring_ops_are_exact(a in -50i64..50, b in -50i64..50, c in -50i64..50, d in 1i64..50) {
            let x = qr(a, d, b, 1);
            let y = qr(c, 1, a, d);
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            if !y.is_zero() {
                prop_assert_eq!(&(&x * &y) / &y, x.clone());
            }
            // Ordering agrees with floating point away from ties.
            let diff = x.to_f64() - y.to_f64();
            if diff.abs() > 1e-9 {
                prop_assert_eq!(x > y, diff > 0.0);
            }
        }
    }
}
