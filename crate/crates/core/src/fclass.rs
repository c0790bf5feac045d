//! Symbolic distortion-function classes and their comparison under the
//! equivalence f ⪯ g ⟺ f(x) ≤ Cg(Cx+C) + Cx + C.
//!
//! Three families cover every class this crate produces: `n^q` with q an
//! exact rational or a certified real interval, `(n^k/W(n))^{1/(k-1)}`
//! (which sits strictly between `n^{k/(k-1)-ε}` and `n^{k/(k-1)}`), and
//! `n·m^n`. The W classes are kept symbolic: no real exponent q satisfies
//! `n^q ≍ (n^k/W(n))^{1/(k-1)}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use thiserror::Error;

use crate::numeric::{rat_int, RatInterval};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FnClassError {
    #[error("Lambert W is defined here for x >= 0 only (got {0})")]
    WDomain(f64),
    #[error("evaluation requires n >= 1 (got {0})")]
    BadScale(f64),
    #[error("evaluation overflows f64")]
    Overflow,
    #[error("cannot evaluate an unknown class")]
    UnknownClass,
}

/// An exponent: exact rational, or a certified real enclosure.
#[derive(Clone, Debug, PartialEq)]
pub enum Exponent {
    Exact(BigRational),
    Interval(RatInterval),
}

impl Exponent {
    pub fn exact_i64(n: i64, d: i64) -> Self {
        Exponent::Exact(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Exponent::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            Exponent::Interval(iv) => iv.to_f64(),
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Exponent::Exact(q) => Some(q),
            Exponent::Interval(_) => None,
        }
    }

    fn bounds(&self) -> (BigRational, BigRational) {
        match self {
            Exponent::Exact(q) => (q.clone(), q.clone()),
            Exponent::Interval(iv) => (iv.lo.clone(), iv.hi.clone()),
        }
    }

    fn mul(&self, other: &Exponent) -> Exponent {
        match (self, other) {
            (Exponent::Exact(a), Exponent::Exact(b)) => Exponent::Exact(a * b),
            _ => {
                let (alo, ahi) = self.bounds();
                let (blo, bhi) = other.bounds();
                let iv = RatInterval::new(alo, ahi).mul(&RatInterval::new(blo, bhi));
                Exponent::Interval(iv)
            }
        }
    }
}

/// A symbolic growth class under the standard equivalence of functions.
#[derive(Clone, Debug, PartialEq)]
pub enum FnClass {
    /// n^q.
    Power(Exponent),
    /// (n^k / W(n))^{1/(k-1)} for k >= 2, W the Lambert W function.
    PowerOverW(u32),
    /// n · m^n for m >= 2 (m = 1 normalizes to Power(1) on construction).
    LinTimesExp(u64),
    Unknown(String),
}

/// Outcome of comparing two classes in the ⪯ preorder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Comparison {
    Precedes,
    Equivalent,
    Dominates,
    IncomparableAtPrecision,
}

impl FnClass {
    pub fn linear() -> FnClass {
        FnClass::Power(Exponent::Exact(BigRational::one()))
    }

    pub fn power_int(q: i64) -> FnClass {
        FnClass::Power(Exponent::Exact(rat_int(q)))
    }

    pub fn power_ratio(n: i64, d: i64) -> FnClass {
        FnClass::Power(Exponent::exact_i64(n, d))
    }

    pub fn power_exact(q: BigRational) -> FnClass {
        FnClass::Power(Exponent::Exact(q))
    }

    pub fn power_interval(iv: RatInterval) -> FnClass {
        if iv.is_point() {
            FnClass::Power(Exponent::Exact(iv.lo))
        } else {
            FnClass::Power(Exponent::Interval(iv))
        }
    }

    /// n·m^n; m = 1 collapses to the linear class.
    pub fn lin_times_exp(m: u64) -> FnClass {
        assert!(m >= 1);
        if m == 1 {
            FnClass::linear()
        } else {
            FnClass::LinTimesExp(m)
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, FnClass::Power(Exponent::Exact(q)) if q.is_one())
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, FnClass::Unknown(_))
    }

    pub fn exponent_f64(&self) -> Option<f64> {
        match self {
            FnClass::Power(e) => Some(e.to_f64()),
            _ => None,
        }
    }
}

/// The (k-1)-order Dehn class of ℤ^k: n^{k/(k-1)}.
pub fn dehn_class_zk(k: u32) -> FnClass {
    assert!(k >= 2, "Dehn class defined for k >= 2");
    FnClass::power_ratio(k as i64, k as i64 - 1)
}

/// f ⪯ g, when decidable at the available precision.
fn leq(f: &FnClass, g: &FnClass) -> Option<bool> {
    use FnClass::*;
    let threshold = |k: u32| BigRational::new(BigInt::from(k), BigInt::from(k - 1));
    match (f, g) {
        (Power(a), Power(b)) => {
            let (alo, ahi) = a.bounds();
            let (blo, bhi) = b.bounds();
            if ahi <= blo {
                Some(true)
            } else if alo > bhi {
                Some(false)
            } else {
                None
            }
        }
        // n^q ⪯ (n^k/W(n))^{1/(k-1)} iff q < k/(k-1).
        (Power(a), PowerOverW(k)) => {
            let t = threshold(*k);
            let (alo, ahi) = a.bounds();
            if ahi < t {
                Some(true)
            } else if alo >= t {
                Some(false)
            } else {
                None
            }
        }
        // (n^k/W(n))^{1/(k-1)} ⪯ n^q iff q >= k/(k-1).
        (PowerOverW(k), Power(a)) => {
            let t = threshold(*k);
            let (alo, ahi) = a.bounds();
            if alo >= t {
                Some(true)
            } else if ahi < t {
                Some(false)
            } else {
                None
            }
        }
        // Ordered by effective exponent k/(k-1), with equal k equivalent.
        (PowerOverW(k), PowerOverW(j)) => Some(k >= j),
        (LinTimesExp(m), LinTimesExp(m2)) => Some(m <= m2),
        (LinTimesExp(_), Power(_)) | (LinTimesExp(_), PowerOverW(_)) => Some(false),
        (Power(_), LinTimesExp(_)) | (PowerOverW(_), LinTimesExp(_)) => Some(true),
        (Unknown(_), _) | (_, Unknown(_)) => None,
    }
}

/// Compare two classes in the ⪯ preorder. Interval-valued exponents
/// compare when their enclosures are disjoint or provably equal; anything
/// else reports `IncomparableAtPrecision` so callers can retry tighter.
pub fn compare(f: &FnClass, g: &FnClass) -> Comparison {
    debug_assert!(!f.is_unknown() && !g.is_unknown());
    if f == g {
        return Comparison::Equivalent;
    }
    match (leq(f, g), leq(g, f)) {
        (Some(true), Some(true)) => Comparison::Equivalent,
        (Some(true), Some(false)) => Comparison::Precedes,
        (Some(false), Some(true)) => Comparison::Dominates,
        _ => Comparison::IncomparableAtPrecision,
    }
}

/// Composition f ∘ g on power classes: Power(q1) ∘ Power(q2) = Power(q1·q2).
/// Anything else is out of scope and returns `Unknown` with a note.
pub fn compose(f: &FnClass, g: &FnClass) -> FnClass {
    match (f, g) {
        (FnClass::Power(a), FnClass::Power(b)) => FnClass::Power(a.mul(b)),
        _ => FnClass::Unknown(format!(
            "composition is supported for power classes only (got {f} ∘ {g})"
        )),
    }
}

/// Principal-branch Lambert W by Halley iteration from w0 = ln(1+x).
/// Returns w with |w·e^w - x| <= tol·max(1, x).
pub fn lambert_w(x: f64, tol: f64) -> Result<f64, FnClassError> {
    if !(x >= 0.0) {
        return Err(FnClassError::WDomain(x));
    }
    assert!(tol > 0.0);
    if x == 0.0 {
        return Ok(0.0);
    }
    let mut w = x.ln_1p();
    if w == 0.0 {
        w = x; // tiny x: W(x) ≈ x
    }
    for _ in 0..200 {
        let ew = w.exp();
        let f = w * ew - x;
        if f.abs() <= tol * x.max(1.0) {
            return Ok(w);
        }
        let df = (w + 1.0) * ew;
        let d2f = (w + 2.0) * ew;
        let denom = df - f * d2f / (2.0 * df);
        w -= f / denom;
    }
    Ok(w)
}

/// Numeric rendering of a class at scale n.
pub fn evaluate(f: &FnClass, n: f64, tol: f64) -> Result<f64, FnClassError> {
    if n < 1.0 || !n.is_finite() {
        return Err(FnClassError::BadScale(n));
    }
    let guard = |log_value: f64| -> Result<f64, FnClassError> {
        if log_value > 700.0 {
            Err(FnClassError::Overflow)
        } else {
            Ok(log_value.exp())
        }
    };
    match f {
        FnClass::Power(e) => guard(e.to_f64() * n.ln()),
        FnClass::PowerOverW(k) => {
            let w = lambert_w(n, tol)?;
            let k = *k as f64;
            if n == 1.0 {
                return Ok(1.0);
            }
            guard((k * n.ln() - w.ln()) / (k - 1.0))
        }
        FnClass::LinTimesExp(m) => guard(n.ln() + n * (*m as f64).ln()),
        FnClass::Unknown(_) => Err(FnClassError::UnknownClass),
    }
}

/// Decimal rendering of a rational with the given number of fractional
/// digits (round toward zero). Used for stable report strings.
pub fn decimal_string(x: &BigRational, digits: u32) -> String {
    let sign = if x.is_negative() { "-" } else { "" };
    let abs = x.clone().abs();
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (abs * BigRational::from_integer(scale.clone()))
        .floor()
        .to_integer();
    let int_part = &scaled / &scale;
    let frac_part = &scaled % &scale;
    let frac_str = format!("{:0>width$}", frac_part.to_string(), width = digits as usize);
    format!("{sign}{int_part}.{frac_str}")
}

impl std::fmt::Display for FnClass {
    /// Canonical renderings: "n", "n^2", "n^{3/2}", "n^{1.564476…(±1.0e-30)}",
    /// "n^2/W(n)", "(n^3/W(n))^{1/2}", "n*2^n", "unknown".
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FnClass::Power(Exponent::Exact(q)) => {
                if q.is_one() {
                    write!(f, "n")
                } else if q.is_integer() {
                    write!(f, "n^{}", q.to_integer())
                } else {
                    write!(f, "n^{{{}/{}}}", q.numer(), q.denom())
                }
            }
            FnClass::Power(Exponent::Interval(iv)) => {
                let mid = iv.midpoint();
                let radius = (iv.width() / rat_int(2)).to_f64().unwrap_or(f64::NAN);
                write!(f, "n^{{{}(±{:.1e})}}", decimal_string(&mid, 12), radius)
            }
            FnClass::PowerOverW(k) => {
                if *k == 2 {
                    write!(f, "n^2/W(n)")
                } else {
                    write!(f, "(n^{}/W(n))^{{1/{}}}", k, k - 1)
                }
            }
            FnClass::LinTimesExp(m) => write!(f, "n*{m}^n"),
            FnClass::Unknown(_) => write!(f, "unknown"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    #[test]
    fn compare_power_order() {
        assert_eq!(
            compare(&FnClass::power_ratio(3, 2), &FnClass::power_int(2)),
            Comparison::Precedes
        );
        assert_eq!(
            compare(&FnClass::power_int(2), &FnClass::power_int(2)),
            Comparison::Equivalent
        );
        assert_eq!(
            compare(&FnClass::power_int(3), &FnClass::power_int(2)),
            Comparison::Dominates
        );
    }

    #[test]
    fn compare_w_class_against_powers() {
        let w2 = FnClass::PowerOverW(2);
        // n^2/W(n) strictly precedes n^2.
        assert_eq!(compare(&w2, &FnClass::power_int(2)), Comparison::Precedes);
        assert_eq!(compare(&FnClass::power_int(2), &w2), Comparison::Dominates);
        // Any q < 2 precedes the W class.
        assert_eq!(
            compare(&FnClass::power_ratio(199, 100), &w2),
            Comparison::Precedes
        );
        assert_eq!(compare(&w2, &w2), Comparison::Equivalent);
        // Effective-exponent order between W classes: larger k grows slower.
        assert_eq!(compare(&FnClass::PowerOverW(3), &w2), Comparison::Precedes);
    }

    /// Numeric sampling oracle for the one-sided W rules: n^2/W(n) stays
    /// below n^2 and the gap is unbounded over n = 2^10 .. 2^60.
    #[test]
    fn w_class_sampling_oracle() {
        let w2 = FnClass::PowerOverW(2);
        let p2 = FnClass::power_int(2);
        let mut prev_gap = 0.0;
        for e in [10u32, 20, 30, 40, 50, 60] {
            let n = (2.0f64).powi(e as i32);
            let a = evaluate(&w2, n, 1e-12).unwrap();
            let b = evaluate(&p2, n, 1e-12).unwrap();
            assert!(a < b);
            let gap = b / a; // equals W(n), unbounded
            assert!(gap > prev_gap);
            prev_gap = gap;
        }
    }

    #[test]
    fn compare_exponential() {
        assert_eq!(
            compare(&FnClass::LinTimesExp(2), &FnClass::power_int(100)),
            Comparison::Dominates
        );
        assert_eq!(
            compare(&FnClass::PowerOverW(2), &FnClass::LinTimesExp(2)),
            Comparison::Precedes
        );
        assert_eq!(
            compare(&FnClass::LinTimesExp(2), &FnClass::LinTimesExp(3)),
            Comparison::Precedes
        );
    }

    #[test]
    fn compare_interval_exponents() {
        let f = FnClass::power_interval(RatInterval::new(rat(3, 2), rat(8, 5)));
        // Disjoint: decidable.
        assert_eq!(compare(&f, &FnClass::power_int(2)), Comparison::Precedes);
        assert_eq!(compare(&f, &FnClass::power_int(1)), Comparison::Dominates);
        // Overlapping: incomparable at this precision.
        let g = FnClass::power_interval(RatInterval::new(rat(31, 20), rat(33, 20)));
        assert_eq!(compare(&f, &g), Comparison::IncomparableAtPrecision);
        // Structural equality still reports equivalent.
        assert_eq!(compare(&f, &f), Comparison::Equivalent);
    }

    #[test]
    fn lin_times_exp_normalizes() {
        assert_eq!(FnClass::lin_times_exp(1), FnClass::linear());
        assert_eq!(FnClass::lin_times_exp(3), FnClass::LinTimesExp(3));
    }

    #[test]
    fn compose_powers() {
        let f = compose(&FnClass::power_int(2), &FnClass::power_ratio(3, 2));
        assert_eq!(f, FnClass::power_int(3));
        let id = FnClass::linear();
        assert_eq!(
            compose(&id, &FnClass::power_ratio(7, 5)),
            FnClass::power_ratio(7, 5)
        );
        assert_eq!(
            compose(&FnClass::power_ratio(7, 5), &id),
            FnClass::power_ratio(7, 5)
        );
        assert!(compose(&FnClass::PowerOverW(2), &FnClass::power_int(2)).is_unknown());
    }

    #[test]
    fn compose_associative_on_powers() {
        let samples = [
            FnClass::power_int(1),
            FnClass::power_ratio(3, 2),
            FnClass::power_int(2),
            FnClass::power_ratio(7, 3),
        ];
        for a in &samples {
            for b in &samples {
                for c in &samples {
                    let left = compose(&compose(a, b), c);
                    let right = compose(a, &compose(b, c));
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn dehn_classes() {
        assert_eq!(dehn_class_zk(2), FnClass::power_int(2));
        assert_eq!(dehn_class_zk(3), FnClass::power_ratio(3, 2));
        assert_eq!(dehn_class_zk(4), FnClass::power_ratio(4, 3));
    }

    #[test]
    fn lambert_w_special_values() {
        assert_eq!(lambert_w(0.0, 1e-12).unwrap(), 0.0);
        let w_e = lambert_w(std::f64::consts::E, 1e-14).unwrap();
        assert!((w_e - 1.0).abs() < 1e-12);
        // Ω constant by an independent bisection oracle on w·e^w = 1.
        let mut lo = 0.0f64;
        let mut hi = 1.0f64;
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if mid * mid.exp() > 1.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let omega = 0.5 * (lo + hi);
        let w1 = lambert_w(1.0, 1e-14).unwrap();
        assert!((w1 - omega).abs() < 1e-12);
        assert!((w1 - 0.5671432904097838).abs() < 1e-12);
        assert!(lambert_w(-1.0, 1e-9).is_err());
    }

    #[test]
    fn lambert_w_round_trip() {
        let tol = 1e-12;
        for x in [0.1f64, 0.5, 1.0, 2.0, 5.0] {
            let y = x * x.exp();
            let w = lambert_w(y, tol).unwrap();
            assert!((w - x).abs() <= 10.0 * tol * x.max(1.0), "round trip at {x}");
        }
    }

    #[test]
    fn evaluate_examples() {
        assert!((evaluate(&FnClass::power_int(2), 10.0, 1e-12).unwrap() - 100.0).abs() < 1e-9);
        let e = std::f64::consts::E;
        let v = evaluate(&FnClass::PowerOverW(2), e, 1e-14).unwrap();
        assert!((v - e * e).abs() < 1e-9);
        let v = evaluate(&FnClass::LinTimesExp(2), 3.0, 1e-12).unwrap();
        assert!((v - 24.0).abs() < 1e-9);
        assert!(evaluate(&FnClass::power_int(2), 0.5, 1e-12).is_err());
        assert_eq!(
            evaluate(&FnClass::LinTimesExp(3), 1e6, 1e-12),
            Err(FnClassError::Overflow)
        );
    }

    /// compare is a preorder on a generated set: reflexive (up to the
    /// equivalence) and transitive where decidable.
    #[test]
    fn compare_is_preorder() {
        let set = [
            FnClass::power_int(1),
            FnClass::power_ratio(6, 5),
            FnClass::power_ratio(3, 2),
            FnClass::PowerOverW(3),
            FnClass::power_ratio(2, 1),
            FnClass::PowerOverW(2),
            FnClass::LinTimesExp(2),
            FnClass::LinTimesExp(5),
        ];
        for f in &set {
            assert_eq!(compare(f, f), Comparison::Equivalent);
        }
        for f in &set {
            for g in &set {
                for h in &set {
                    let fg = compare(f, g);
                    let gh = compare(g, h);
                    if (fg == Comparison::Precedes || fg == Comparison::Equivalent)
                        && (gh == Comparison::Precedes || gh == Comparison::Equivalent)
                    {
                        let fh = compare(f, h);
                        assert!(
                            fh == Comparison::Precedes || fh == Comparison::Equivalent,
                            "transitivity broke: {f} vs {h}"
                        );
                    }
                }
            }
        }
    }

    /// If f strictly precedes g then numerically f(n) <= C·g(Cn+C) + Cn + C
    /// with C = 8 over a sample of large n (harness constant, not canonical).
    #[test]
    fn evaluate_respects_compare() {
        let set = [
            FnClass::power_int(1),
            FnClass::power_ratio(6, 5),
            FnClass::power_ratio(3, 2),
            FnClass::PowerOverW(2),
            FnClass::power_int(2),
            FnClass::LinTimesExp(2),
        ];
        let c = 8.0f64;
        for f in &set {
            for g in &set {
                if compare(f, g) != Comparison::Precedes {
                    continue;
                }
                for e in [10u32, 20, 30, 40] {
                    let n = (2.0f64).powi(e as i32);
                    let lhs = evaluate(f, n, 1e-12).unwrap_or(f64::INFINITY);
                    let rhs = evaluate(g, c * n + c, 1e-12)
                        .map(|v| c * v + c * n + c)
                        .unwrap_or(f64::INFINITY);
                    assert!(lhs <= rhs, "{f} vs {g} at n = 2^{e}");
                }
            }
        }
    }

    #[test]
    fn rendering_is_canonical() {
        assert_eq!(FnClass::linear().to_string(), "n");
        assert_eq!(FnClass::power_int(2).to_string(), "n^2");
        assert_eq!(FnClass::power_ratio(3, 2).to_string(), "n^{3/2}");
        assert_eq!(FnClass::PowerOverW(2).to_string(), "n^2/W(n)");
        assert_eq!(FnClass::PowerOverW(3).to_string(), "(n^3/W(n))^{1/2}");
        assert_eq!(FnClass::LinTimesExp(2).to_string(), "n*2^n");
        let iv = FnClass::power_interval(RatInterval::new(rat(3, 2), rat(3, 2)));
        assert_eq!(iv.to_string(), "n^{3/2}"); // points collapse to exact
    }

    #[test]
    fn decimal_string_renders() {
        assert_eq!(decimal_string(&rat(3, 2), 4), "1.5000");
        assert_eq!(decimal_string(&rat(-1, 3), 6), "-0.333333");
    }
}
