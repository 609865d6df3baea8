//! Exact verification of Fibonacci sum and series identities.
//!
//! Finite identities are decided by exact rational equality. Infinite
//! series are truncated and paired with a rigorous rational bound on the
//! neglected tail, derived from `F_n ≥ φ^{n−2}` (classic indexing) and a
//! rational bracket of `φ`. A claim that fails is reported as
//! [`Verdict::Refuted`] together with the exact values that disagree.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::fibcore::{
    fib_int, rational_string, sqrt5_convergents, FibConvention, QuadraticReal, Rational,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum IdentityId {
    /// `Σ_{n≥1} 1/(F_n F_{n+2k}) = (1/F_{2k}) Σ_{n=1}^{k} 1/(F_{2n−1} F_{2n})`.
    Reciprocal,
    /// `Σ_{n=1}^{b} (−1)^n F_a/(F_n F_{n+a}) = Σ_{n=1}^{a} (−1)^n F_b/(F_n F_{n+b})`.
    Symmetry,
    /// `Σ |√5 − c_n| = 2 Σ 1/(F_{3n} φ^{3n}) = 4 Σ 1/(F_{6n−3} F_{6n})`.
    Sqrt5Cf,
    /// `Σ F_{2ki}` (even k) or `Σ F_{ki}²` (odd k) `= F_{kn} F_{k(n+1)} / k!`.
    DfLemma,
}

impl IdentityId {
    pub fn name(self) -> &'static str {
        match self {
            IdentityId::Reciprocal => "reciprocal",
            IdentityId::Symmetry => "symmetry",
            IdentityId::Sqrt5Cf => "sqrt5cf",
            IdentityId::DfLemma => "dflemma",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "reciprocal" => Some(IdentityId::Reciprocal),
            "symmetry" => Some(IdentityId::Symmetry),
            "sqrt5cf" => Some(IdentityId::Sqrt5Cf),
            "dflemma" => Some(IdentityId::DfLemma),
            _ => None,
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    ExactEqual,
    WithinTailBound,
    Refuted,
}

/// One side of an identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Estimate {
    Exact(QuadraticReal),
    /// A partial sum of positive terms; the full sum lies in
    /// `[partial, partial + tail_bound]`.
    Truncated { partial: QuadraticReal, tail_bound: Rational },
}

impl Estimate {
    pub fn lo(&self) -> QuadraticReal {
        match self {
            Estimate::Exact(v) => v.clone(),
            Estimate::Truncated { partial, .. } => partial.clone(),
        }
    }

    pub fn hi(&self) -> QuadraticReal {
        match self {
            Estimate::Exact(v) => v.clone(),
            Estimate::Truncated { partial, tail_bound } => {
                partial + &QuadraticReal::from_rational(tail_bound.clone())
            }
        }
    }

    pub fn contains(&self, x: &QuadraticReal) -> bool {
        self.lo() <= *x && *x <= self.hi()
    }

    pub fn overlaps(&self, other: &Estimate) -> bool {
        self.lo() <= other.hi() && other.lo() <= self.hi()
    }

    pub fn to_json(&self, digits: usize) -> Value {
        match self {
            Estimate::Exact(v) => json!({
                "kind": "exact",
                "value": v.to_string(),
                "decimal": v.to_decimal(digits),
            }),
            Estimate::Truncated { partial, tail_bound } => json!({
                "kind": "interval",
                "partial": partial.to_string(),
                "tail_bound": rational_string(tail_bound),
                "lo_decimal": self.lo().to_decimal(digits),
                "hi_decimal": self.hi().to_decimal(digits),
            }),
        }
    }
}

/// Exact values exhibiting a failed claim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub lhs: QuadraticReal,
    pub rhs: QuadraticReal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub id: IdentityId,
    pub params: Vec<(&'static str, i64)>,
    pub convention: FibConvention,
    pub lhs: Estimate,
    pub rhs: Estimate,
    /// Further expressions claimed equal to both sides.
    pub extra: Vec<(&'static str, Estimate)>,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    /// Largest tail bound used by any truncated side.
    pub tail_bound: Option<Rational>,
}

impl IdentityReport {
    pub fn is_refuted(&self) -> bool {
        self.verdict == Verdict::Refuted
    }

    pub fn to_json(&self, digits: usize) -> Value {
        let params: serde_json::Map<String, Value> =
            self.params.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
        let extra: serde_json::Map<String, Value> = self
            .extra
            .iter()
            .map(|(k, e)| (k.to_string(), e.to_json(digits)))
            .collect();
        json!({
            "identity": self.id.name(),
            "params": params,
            "convention": self.convention.name(),
            "lhs": self.lhs.to_json(digits),
            "rhs": self.rhs.to_json(digits),
            "extra": extra,
            "verdict": self.verdict,
            "witness": self.witness.as_ref().map(|w| json!({
                "lhs": w.lhs.to_string(),
                "rhs": w.rhs.to_string(),
                "lhs_decimal": w.lhs.to_decimal(digits),
                "rhs_decimal": w.rhs.to_decimal(digits),
            })),
            "tail_bound": self.tail_bound.as_ref().map(rational_string),
        })
    }
}

fn f(n: u64) -> BigInt {
    fib_int(n, FibConvention::Classic)
}

fn ratio(n: BigInt, d: BigInt) -> Rational {
    Rational::new(n, d)
}

/// `F_30 / F_29`, a rational just below `φ`.
pub fn phi_lower() -> Rational {
    ratio(f(30), f(29))
}

/// `F_31 / F_30`, a rational just above `φ`.
pub fn phi_upper() -> Rational {
    ratio(f(31), f(30))
}

/// A rational upper bound for `φ^e`.
pub fn phi_pow_upper(e: i64) -> Rational {
    let base = if e >= 0 { phi_upper() } else { phi_lower() };
    pow_rational(&base, e)
}

fn pow_rational(base: &Rational, e: i64) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= base;
    }
    if e < 0 {
        acc.recip()
    } else {
        acc
    }
}

/// Upper bound for `1 / (1 − φ^{−m})`, `m ≥ 1`.
fn geometric_factor_upper(m: i64) -> Rational {
    let shrink = pow_rational(&phi_lower(), -m);
    (Rational::one() - shrink).recip()
}

fn exact(r: Rational) -> Estimate {
    Estimate::Exact(QuadraticReal::from_rational(r))
}

fn verdict_for_exact(lhs: &QuadraticReal, rhs: &QuadraticReal) -> (Verdict, Option<Witness>) {
    if lhs == rhs {
        (Verdict::ExactEqual, None)
    } else {
        (Verdict::Refuted, Some(Witness { lhs: lhs.clone(), rhs: rhs.clone() }))
    }
}

/// `Σ_{n=1}^{terms} 1/(F_n F_{n+2k})` against the finite closed form.
///
/// Tail bound: every neglected term is at most `φ^{4−2n−2k}`, so the tail
/// after `N` terms is below `φ^{4−2N−2k} / (1 − φ^{−2}) = φ^{5−2N−2k}`.
pub fn check_reciprocal_sum(k: u64, terms: u64) -> IdentityReport {
    assert!(k >= 1 && terms >= 1, "k and terms must be at least 1");
    let partial: Rational = (1..=terms).map(|n| ratio(BigInt::one(), f(n) * f(n + 2 * k))).sum();
    let rhs: Rational = (1..=k)
        .map(|n| ratio(BigInt::one(), f(2 * n - 1) * f(2 * n)))
        .sum::<Rational>()
        / Rational::from_integer(f(2 * k));
    let tail_bound = phi_pow_upper(5 - 2 * terms as i64 - 2 * k as i64);
    let lhs = Estimate::Truncated {
        partial: QuadraticReal::from_rational(partial.clone()),
        tail_bound: tail_bound.clone(),
    };
    let rhs_q = QuadraticReal::from_rational(rhs.clone());
    let (verdict, witness) = if lhs.contains(&rhs_q) {
        (Verdict::WithinTailBound, None)
    } else {
        (
            Verdict::Refuted,
            Some(Witness { lhs: QuadraticReal::from_rational(partial), rhs: rhs_q }),
        )
    };
    IdentityReport {
        id: IdentityId::Reciprocal,
        params: vec![("k", k as i64), ("terms", terms as i64)],
        convention: FibConvention::Classic,
        lhs,
        rhs: exact(rhs),
        extra: Vec::new(),
        verdict,
        witness,
        tail_bound: Some(tail_bound),
    }
}

fn alternating_sum(outer: u64, shift: u64) -> Rational {
    let scale = f(shift);
    (1..=outer)
        .map(|n| {
            let term = ratio(scale.clone(), f(n) * f(n + shift));
            if n % 2 == 1 {
                -term
            } else {
                term
            }
        })
        .sum()
}

/// Both finite alternating sums, compared exactly.
pub fn check_symmetry(a: u64, b: u64) -> IdentityReport {
    assert!(a >= 1 && b >= 1, "a and b must be at least 1");
    let lhs = QuadraticReal::from_rational(alternating_sum(b, a));
    let rhs = QuadraticReal::from_rational(alternating_sum(a, b));
    let (verdict, witness) = verdict_for_exact(&lhs, &rhs);
    IdentityReport {
        id: IdentityId::Symmetry,
        params: vec![("a", a as i64), ("b", b as i64)],
        convention: FibConvention::Classic,
        lhs: Estimate::Exact(lhs),
        rhs: Estimate::Exact(rhs),
        extra: Vec::new(),
        verdict,
        witness,
        tail_bound: None,
    }
}

/// The three expressions for `Σ |√5 − [2; 4, …, 4]|`, each truncated after
/// `terms` summands with its own tail bound.
///
/// * convergent errors: `|√5 − p_n/q_n| < 1/(q_n q_{n+1})` and `q_n ≥ 4^{n−1}`
///   give a tail below `(16/15) 4^{−2T−1}`;
/// * `2/(F_{3n} φ^{3n}) ≤ 2 φ^{2−6n}`, tail below `2 φ^{−4−6T}/(1 − φ^{−6})`;
/// * `4/(F_{6n−3} F_{6n}) ≤ 4 φ^{7−12n}`, tail below `4 φ^{−5−12T}/(1 − φ^{−12})`.
pub fn check_sqrt5_cf(terms: u64) -> IdentityReport {
    assert!(terms >= 1, "terms must be at least 1");
    let t = terms as i64;
    let s5 = QuadraticReal::sqrt5();

    let convergent_sum = sqrt5_convergents(terms as usize)
        .into_iter()
        .fold(QuadraticReal::zero(), |acc, c| {
            &acc + &(&s5 - &QuadraticReal::from_rational(c)).abs()
        });
    let convergent_tail = ratio(16.into(), 15.into()) * pow_rational(&ratio(4.into(), 1.into()), -2 * t - 1);

    let phi = QuadraticReal::phi();
    let golden_sum = (1..=terms).fold(QuadraticReal::zero(), |acc, n| {
        let denom = &QuadraticReal::from_integer(f(3 * n)) * &phi.pow(3 * n as i64);
        &acc + &(&QuadraticReal::from_integer(2) / &denom)
    });
    let golden_tail =
        Rational::from_integer(2.into()) * phi_pow_upper(-4 - 6 * t) * geometric_factor_upper(6);

    let fib_sum: Rational = (1..=terms)
        .map(|n| ratio(4.into(), f(6 * n - 3) * f(6 * n)))
        .sum();
    let fib_tail =
        Rational::from_integer(4.into()) * phi_pow_upper(-5 - 12 * t) * geometric_factor_upper(12);

    let lhs = Estimate::Truncated { partial: convergent_sum, tail_bound: convergent_tail.clone() };
    let middle = Estimate::Truncated { partial: golden_sum, tail_bound: golden_tail.clone() };
    let rhs = Estimate::Truncated {
        partial: QuadraticReal::from_rational(fib_sum),
        tail_bound: fib_tail.clone(),
    };

    let all_overlap = lhs.overlaps(&middle) && lhs.overlaps(&rhs) && middle.overlaps(&rhs);
    let (verdict, witness) = if all_overlap {
        (Verdict::WithinTailBound, None)
    } else {
        (Verdict::Refuted, Some(Witness { lhs: lhs.lo(), rhs: rhs.lo() }))
    };
    let tail_bound = [convergent_tail, golden_tail, fib_tail]
        .into_iter()
        .max()
        .expect("three bounds");
    IdentityReport {
        id: IdentityId::Sqrt5Cf,
        params: vec![("terms", t)],
        convention: FibConvention::Classic,
        lhs,
        rhs,
        extra: vec![("golden_power_sum", middle)],
        verdict,
        witness,
        tail_bound: Some(tail_bound),
    }
}

fn factorial(k: u64) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Both sides of the lemma under the chosen convention, compared exactly.
pub fn check_df_lemma(k: u64, n: u64, conv: FibConvention) -> IdentityReport {
    assert!(k >= 1 && n >= 1, "k and n must be at least 1");
    let fc = |i: u64| fib_int(i, conv);
    let lhs: BigInt = if k % 2 == 0 {
        (1..=n).map(|i| fc(2 * k * i)).sum()
    } else {
        (1..=n).map(|i| {
            let v = fc(k * i);
            &v * &v
        })
        .sum()
    };
    let rhs = ratio(fc(k * n) * fc(k * (n + 1)), factorial(k));
    let lhs = QuadraticReal::from_integer(lhs);
    let rhs = QuadraticReal::from_rational(rhs);
    let (verdict, witness) = verdict_for_exact(&lhs, &rhs);
    IdentityReport {
        id: IdentityId::DfLemma,
        params: vec![("k", k as i64), ("n", n as i64)],
        convention: conv,
        lhs: Estimate::Exact(lhs),
        rhs: Estimate::Exact(rhs),
        extra: Vec::new(),
        verdict,
        witness,
        tail_bound: None,
    }
}

/// Smallest `n ≤ max_n` at which the lemma fails for this `k`, if any.
pub fn df_lemma_first_failure(k: u64, conv: FibConvention, max_n: u64) -> Option<IdentityReport> {
    (1..=max_n).map(|n| check_df_lemma(k, n, conv)).find(|r| r.is_refuted())
}

/// Every check in the standard acceptance matrix, in a fixed order.
pub fn sweep() -> Vec<IdentityReport> {
    let mut jobs: Vec<Box<dyn Fn() -> IdentityReport + Send + Sync>> = Vec::new();
    for k in 1..=5 {
        jobs.push(Box::new(move || check_reciprocal_sum(k, 50)));
    }
    for a in 2..=30 {
        for b in 2..a {
            jobs.push(Box::new(move || check_symmetry(a, b)));
        }
    }
    for t in 1..=10 {
        jobs.push(Box::new(move || check_sqrt5_cf(t)));
    }
    for n in 1..=50 {
        jobs.push(Box::new(move || check_df_lemma(1, n, FibConvention::Classic)));
    }
    for conv in [FibConvention::Classic, FibConvention::Shifted] {
        jobs.push(Box::new(move || check_df_lemma(2, 2, conv)));
    }
    jobs.par_iter().map(|job| job()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cmp::Ordering;

    fn q(n: i64, d: i64) -> QuadraticReal {
        QuadraticReal::from_ratio(n, d)
    }

    #[test]
    fn phi_bracket_is_valid() {
        let phi = QuadraticReal::phi();
        assert!(QuadraticReal::from_rational(phi_lower()) < phi);
        assert!(QuadraticReal::from_rational(phi_upper()) > phi);
        for e in -40..=10 {
            assert!(QuadraticReal::from_rational(phi_pow_upper(e)) >= phi.pow(e), "e={e}");
        }
    }

    #[test]
    fn fibonacci_lower_bound_used_by_tails() {
        let phi = QuadraticReal::phi();
        for n in 1..200u64 {
            assert!(QuadraticReal::from_integer(f(n)) >= phi.pow(n as i64 - 2));
        }
    }

    #[test]
    fn reciprocal_examples() {
        let r1 = check_reciprocal_sum(1, 10);
        assert_eq!(r1.rhs, Estimate::Exact(q(1, 1)));
        let r2 = check_reciprocal_sum(2, 10);
        assert_eq!(r2.rhs, Estimate::Exact(q(7, 18)));
        assert_eq!(r2.verdict, Verdict::WithinTailBound);
        assert_eq!(r2.lhs.lo().to_decimal(5), "0.38886");
    }

    #[test]
    fn reciprocal_gap_shrinks() {
        for k in 1..=4 {
            let mut last_gap: Option<QuadraticReal> = None;
            for terms in 1..=30 {
                let r = check_reciprocal_sum(k, terms);
                let gap = &r.rhs.lo() - &r.lhs.lo();
                assert!(!gap.is_negative());
                if let Some(prev) = &last_gap {
                    assert_eq!(gap.cmp(prev), Ordering::Less);
                }
                last_gap = Some(gap);
                assert_eq!(r.verdict, Verdict::WithinTailBound);
            }
        }
    }

    #[test]
    fn tail_bounds_are_sound_under_doubling() {
        for terms in 1..=12u64 {
            for (old, new) in [
                (check_reciprocal_sum(3, terms), check_reciprocal_sum(3, 2 * terms)),
                (check_sqrt5_cf(terms), check_sqrt5_cf(2 * terms)),
            ] {
                let pairs = std::iter::once((&old.lhs, &new.lhs))
                    .chain(std::iter::once((&old.rhs, &new.rhs)))
                    .chain(old.extra.iter().map(|e| &e.1).zip(new.extra.iter().map(|e| &e.1)));
                for (o, n) in pairs {
                    if let Estimate::Truncated { .. } = o {
                        assert!(o.contains(&n.lo()), "terms={terms}");
                    }
                }
            }
        }
    }

    #[test]
    fn symmetry_examples() {
        assert_eq!(check_symmetry(2, 2).verdict, Verdict::ExactEqual);
        let r = check_symmetry(3, 2);
        assert_eq!(r.verdict, Verdict::ExactEqual);
        assert_eq!(r.lhs, Estimate::Exact(q(-4, 15)));
    }

    #[test]
    fn symmetry_full_sweep() {
        for a in 1..=30 {
            for b in 1..=30 {
                assert_eq!(check_symmetry(a, b).verdict, Verdict::ExactEqual, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn sqrt5_first_terms() {
        let r = check_sqrt5_cf(1);
        assert_eq!(r.lhs.lo(), &QuadraticReal::sqrt5() - &q(2, 1));
        assert_eq!(r.rhs.lo(), q(1, 4));
        // 2/(F_3 φ³) = 1/φ³ = √5 − 2
        assert_eq!(r.extra[0].1.lo(), &QuadraticReal::sqrt5() - &q(2, 1));
    }

    #[test]
    fn sqrt5_intervals_overlap() {
        for t in 1..=10 {
            let r = check_sqrt5_cf(t);
            assert_eq!(r.verdict, Verdict::WithinTailBound, "terms={t}");
        }
        let r = check_sqrt5_cf(4);
        let common = q(25_081_953_905, 100_000_000_000);
        assert!(r.lhs.contains(&common) && r.rhs.contains(&common));
        assert!(r.extra[0].1.contains(&common));
    }

    #[test]
    fn convergent_errors_alternate() {
        let s5 = QuadraticReal::sqrt5();
        for (i, c) in sqrt5_convergents(12).into_iter().enumerate() {
            let signed = &s5 - &QuadraticReal::from_rational(c);
            let flipped = if i % 2 == 0 { signed.clone() } else { -signed.clone() };
            assert_eq!(signed.abs(), flipped);
        }
    }

    #[test]
    fn df_lemma_examples() {
        for n in 1..=50 {
            assert_eq!(check_df_lemma(1, n, FibConvention::Classic).verdict, Verdict::ExactEqual);
        }
        let r = check_df_lemma(1, 2, FibConvention::Shifted);
        assert_eq!(r.verdict, Verdict::Refuted);
        let w = r.witness.unwrap();
        assert_eq!((w.lhs, w.rhs), (q(5, 1), q(6, 1)));

        let c = check_df_lemma(2, 2, FibConvention::Classic).witness.unwrap();
        assert_eq!((c.lhs, c.rhs), (q(24, 1), q(12, 1)));
        let s = check_df_lemma(2, 2, FibConvention::Shifted).witness.unwrap();
        assert_eq!((s.lhs, s.rhs), (q(39, 1), q(65, 2)));
    }

    #[test]
    fn refutation_witnesses_reevaluate() {
        for k in 1..=6 {
            for conv in [FibConvention::Classic, FibConvention::Shifted] {
                for n in 1..=8 {
                    let r = check_df_lemma(k, n, conv);
                    if let Some(w) = &r.witness {
                        assert_ne!(w.lhs, w.rhs);
                        let again = check_df_lemma(k, n, conv);
                        assert_eq!(again.lhs, Estimate::Exact(w.lhs.clone()));
                        assert_eq!(again.rhs, Estimate::Exact(w.rhs.clone()));
                    }
                    assert_eq!(r.is_refuted(), r.witness.is_some());
                }
            }
        }
        assert_eq!(df_lemma_first_failure(2, FibConvention::Classic, 10).unwrap().params[1], ("n", 1));
        assert!(df_lemma_first_failure(1, FibConvention::Classic, 40).is_none());
    }

    #[test]
    fn sweep_is_ordered_and_complete() {
        let s = sweep();
        assert_eq!(s.len(), 5 + 406 + 10 + 50 + 2);
        assert_eq!(s[0].id, IdentityId::Reciprocal);
        assert_eq!(s.last().unwrap().convention, FibConvention::Shifted);
        assert_eq!(s.iter().filter(|r| r.is_refuted()).count(), 2);
    }
}
