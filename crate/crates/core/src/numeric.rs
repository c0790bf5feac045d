//! Exact rational interval arithmetic with certified endpoints.
//!
//! All interval endpoints are `BigRational`s, so the only operations that
//! introduce error are the transcendental ones (`ln`, square roots), and
//! those return certified enclosures: the true value always lies between
//! the returned bounds. Dyadic rounding keeps denominators at a fixed
//! number of bits so repeated operations cannot blow up.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(big(n), big(d))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(big(n))
}

/// Largest multiple of 2^-bits that is <= x.
pub fn dyadic_floor(x: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    let scaled = (x * BigRational::from_integer(scale.clone())).floor();
    scaled / BigRational::from_integer(scale)
}

/// Smallest multiple of 2^-bits that is >= x.
pub fn dyadic_ceil(x: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    let scaled = (x * BigRational::from_integer(scale.clone())).ceil();
    scaled / BigRational::from_integer(scale)
}

/// Rational lower bound for sqrt(x), within 2^-bits of the true value.
/// Requires x >= 0.
pub fn sqrt_lower(x: &BigRational, bits: u32) -> BigRational {
    assert!(!x.is_negative(), "sqrt of negative rational");
    if x.is_zero() {
        return BigRational::zero();
    }
    // sqrt(n/d) = sqrt(n*d)/d; isqrt gives the floor.
    let n = x.numer();
    let d = x.denom();
    let shifted = (n * d) << (2 * bits);
    let s = shifted.sqrt();
    BigRational::new(s, d << bits)
}

/// Rational upper bound for sqrt(x), within 2^-bits of the true value.
pub fn sqrt_upper(x: &BigRational, bits: u32) -> BigRational {
    assert!(!x.is_negative(), "sqrt of negative rational");
    if x.is_zero() {
        return BigRational::zero();
    }
    let n = x.numer();
    let d = x.denom();
    let shifted = (n * d) << (2 * bits);
    let s = shifted.sqrt() + BigInt::one();
    BigRational::new(s, d << bits)
}

/// A closed interval with exact rational endpoints, `lo <= hi`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RatInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        RatInterval { lo, hi }
    }

    pub fn point(x: BigRational) -> Self {
        RatInterval { lo: x.clone(), hi: x }
    }

    pub fn from_int(n: i64) -> Self {
        Self::point(rat_int(n))
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &RatInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / rat_int(2)
    }

    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }

    pub fn add(&self, other: &RatInterval) -> RatInterval {
        RatInterval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn sub(&self, other: &RatInterval) -> RatInterval {
        RatInterval::new(&self.lo - &other.hi, &self.hi - &other.lo)
    }

    pub fn mul(&self, other: &RatInterval) -> RatInterval {
        let candidates = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = candidates.iter().min().unwrap().clone();
        let hi = candidates.iter().max().unwrap().clone();
        RatInterval::new(lo, hi)
    }

    /// Division, requiring 0 not in `other`.
    pub fn div(&self, other: &RatInterval) -> RatInterval {
        assert!(
            other.lo.is_positive() || other.hi.is_negative(),
            "interval division by an interval containing zero"
        );
        let inv = RatInterval::new(
            BigRational::one() / other.hi.clone(),
            BigRational::one() / other.lo.clone(),
        );
        self.mul(&inv)
    }

    pub fn scale(&self, c: &BigRational) -> RatInterval {
        if c.is_negative() {
            RatInterval::new(&self.hi * c, &self.lo * c)
        } else {
            RatInterval::new(&self.lo * c, &self.hi * c)
        }
    }

    /// Componentwise max with a scalar.
    pub fn max_scalar(&self, c: &BigRational) -> RatInterval {
        RatInterval::new(self.lo.clone().max(c.clone()), self.hi.clone().max(c.clone()))
    }

    /// Round outward to dyadic endpoints with the given precision.
    pub fn round_out(&self, bits: u32) -> RatInterval {
        RatInterval::new(dyadic_floor(&self.lo, bits), dyadic_ceil(&self.hi, bits))
    }

    pub fn intersect(&self, other: &RatInterval) -> Option<RatInterval> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        if lo <= hi {
            Some(RatInterval::new(lo, hi))
        } else {
            None
        }
    }
}

/// Partial sum of atanh(u) = sum u^(2k+1)/(2k+1) with a certified tail bound.
/// Requires 0 <= u < 1/2 (callers reduce arguments into this range).
/// Returns (lower, upper) with lower <= atanh(u) <= upper.
fn atanh_bounds(u: &BigRational, bits: u32) -> (BigRational, BigRational) {
    assert!(!u.is_negative() && u < &rat(1, 2));
    if u.is_zero() {
        return (BigRational::zero(), BigRational::zero());
    }
    // |u| < 1/2 gives at least one bit per term; aim the tail below 2^-(bits+2).
    let u_f = u.to_f64().unwrap_or(0.5);
    let bits_per_term = -2.0 * u_f.log2();
    let terms = ((bits as f64 + 4.0) / bits_per_term).ceil() as u32 + 1;

    let u2 = u * u;
    let mut sum = BigRational::zero();
    let mut power = u.clone();
    for k in 0..terms {
        sum += &power / rat_int((2 * k + 1) as i64);
        power = dyadic_floor(&(&power * &u2), 4 * bits);
    }
    // Tail <= u^(2K+1)/(2K+1) * 1/(1-u^2); with u < 1/2 the factor is < 4/3.
    let tail = &power * rat(2, 1) / rat_int((2 * terms + 1) as i64);
    // The dyadic_floor in the power recurrence only shrinks terms, and the
    // discarded mass per term is < 2^-(4*bits), so bump the tail accordingly.
    let slack = BigRational::new(BigInt::from(terms + 1), BigInt::one() << (3 * bits));
    (sum.clone(), sum + tail + slack)
}

/// Certified enclosure of ln 2.
pub fn ln2_interval(bits: u32) -> RatInterval {
    // ln 2 = 2 atanh(1/3).
    let (lo, hi) = atanh_bounds(&rat(1, 3), bits + 2);
    RatInterval::new(lo * rat_int(2), hi * rat_int(2))
}

/// Certified enclosure of ln x for a single positive rational.
pub fn ln_point(x: &BigRational, bits: u32) -> RatInterval {
    assert!(x.is_positive(), "ln of a non-positive rational");
    if x.is_one() {
        return RatInterval::point(BigRational::zero());
    }
    // Reduce x = 2^j * y with y in [3/4, 3/2); then ln x = j ln2 + 2 atanh(u),
    // u = (y-1)/(y+1) in [-1/7, 1/5].
    let mut j: i64 = 0;
    let mut y = x.clone();
    let three_halves = rat(3, 2);
    let three_quarters = rat(3, 4);
    while y >= three_halves {
        y /= rat_int(2);
        j += 1;
    }
    while y < three_quarters {
        y *= rat_int(2);
        j -= 1;
    }
    // Keep the series argument at a bounded size.
    let y = RatInterval::new(dyadic_floor(&y, bits + 8), dyadic_ceil(&y, bits + 8));

    let u_lo = (&y.lo - BigRational::one()) / (&y.lo + BigRational::one());
    let u_hi = (&y.hi - BigRational::one()) / (&y.hi + BigRational::one());

    let atanh_iv = |u: &BigRational| -> RatInterval {
        if u.is_negative() {
            let (lo, hi) = atanh_bounds(&(-u.clone()), bits + 2);
            RatInterval::new(-hi, -lo)
        } else {
            let (lo, hi) = atanh_bounds(u, bits + 2);
            RatInterval::new(lo, hi)
        }
    };
    let a_lo = atanh_iv(&u_lo);
    let a_hi = atanh_iv(&u_hi);
    let two_atanh = RatInterval::new(a_lo.lo * rat_int(2), a_hi.hi * rat_int(2));

    if j == 0 {
        return two_atanh;
    }
    let ln2 = ln2_interval(bits + 2);
    let jr = rat_int(j);
    let j_term = if j > 0 {
        RatInterval::new(&ln2.lo * &jr, &ln2.hi * &jr)
    } else {
        RatInterval::new(&ln2.hi * &jr, &ln2.lo * &jr)
    };
    two_atanh.add(&j_term)
}

/// Certified enclosure of ln over a positive interval.
pub fn ln_interval(x: &RatInterval, bits: u32) -> RatInterval {
    assert!(x.lo.is_positive(), "ln of an interval reaching zero");
    if x.is_point() {
        return ln_point(&x.lo, bits);
    }
    let lo = ln_point(&x.lo, bits);
    let hi = ln_point(&x.hi, bits);
    RatInterval::new(lo.lo, hi.hi)
}

/// Detect whether ln(d)/ln(alpha) is a small rational s/t by exact
/// verification of d^t = alpha^s. Both inputs must be > 1. Returns the
/// ratio in lowest terms if found.
pub fn detect_log_ratio(d: &BigRational, alpha: &BigRational, max_den: u64) -> Option<BigRational> {
    let d_f = d.to_f64()?;
    let a_f = alpha.to_f64()?;
    if d_f <= 1.0 || a_f <= 1.0 {
        return None;
    }
    let x = d_f.ln() / a_f.ln();
    for (s, t) in convergents(x, max_den) {
        if t == 0 {
            continue;
        }
        // Check d^t == alpha^s exactly (s, t > 0 since x > 0).
        if s >= 0 && pow_rat(d, t) == pow_rat(alpha, s as u64) {
            return Some(rat(s, t as i64));
        }
    }
    None
}

fn pow_rat(x: &BigRational, e: u64) -> BigRational {
    let mut result = BigRational::one();
    let mut base = x.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result *= &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    result
}

/// Continued-fraction convergents of x with denominator <= max_den.
fn convergents(x: f64, max_den: u64) -> Vec<(i64, u64)> {
    let mut out = Vec::new();
    let (mut p0, mut q0): (i64, u64) = (1, 0);
    let (mut p1, mut q1): (i64, u64) = (x.floor() as i64, 1);
    out.push((p1, q1));
    let mut frac = x - x.floor();
    for _ in 0..40 {
        if frac.abs() < 1e-15 {
            break;
        }
        let r = 1.0 / frac;
        let a = r.floor() as i64;
        frac = r - r.floor();
        let p2 = a.saturating_mul(p1).saturating_add(p0);
        let q2 = (a as u64).saturating_mul(q1).saturating_add(q0);
        if q2 > max_den {
            break;
        }
        out.push((p2, q2));
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    out
}

/// Exact complex rational number, used for certified root refinement.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl ComplexRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        ComplexRat { re, im }
    }

    pub fn zero() -> Self {
        ComplexRat::new(BigRational::zero(), BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn add(&self, other: &ComplexRat) -> ComplexRat {
        ComplexRat::new(&self.re + &other.re, &self.im + &other.im)
    }

    pub fn sub(&self, other: &ComplexRat) -> ComplexRat {
        ComplexRat::new(&self.re - &other.re, &self.im - &other.im)
    }

    pub fn mul(&self, other: &ComplexRat) -> ComplexRat {
        ComplexRat::new(
            &self.re * &other.re - &self.im * &other.im,
            &self.re * &other.im + &self.im * &other.re,
        )
    }

    pub fn div(&self, other: &ComplexRat) -> ComplexRat {
        let n = other.norm_sq();
        assert!(!n.is_zero(), "complex division by zero");
        let conj = ComplexRat::new(other.re.clone(), -other.im.clone());
        let p = self.mul(&conj);
        ComplexRat::new(p.re / n.clone(), p.im / n)
    }

    /// Round both parts to dyadic rationals (toward zero bias is irrelevant
    /// here; this only limits coefficient growth between Newton steps).
    pub fn round(&self, bits: u32) -> ComplexRat {
        ComplexRat::new(dyadic_floor(&self.re, bits), dyadic_floor(&self.im, bits))
    }

    pub fn from_f64(re: f64, im: f64) -> Option<ComplexRat> {
        Some(ComplexRat::new(
            BigRational::from_float(re)?,
            BigRational::from_float(im)?,
        ))
    }
}

/// Sign of a rational as -1, 0, 1.
pub fn sign(x: &BigRational) -> i32 {
    match x.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}
