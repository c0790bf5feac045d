//! Certified isolation of root moduli for integer polynomials.
//!
//! Real roots are isolated with exact Sturm sequences, so their modulus
//! bounds are rational and rigorous by construction. Non-real roots are
//! approximated by Aberth iteration in floating point, refined by Newton
//! steps in exact rational complex arithmetic, and certified through the
//! classical inclusion bound: for squarefree f of degree D, some root lies
//! within D·|f(z)/f'(z)| of any point z. Pairwise-disjoint disks that stay
//! off the real axis therefore each contain exactly one root.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{IntMatError, IntPolynomial};
use crate::numeric::{
    rat_int, sign, sqrt_upper, ComplexRat, RatInterval,
};

/// Position of a root modulus relative to the unit circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum UnitCircleClass {
    Below,
    On,
    Above,
}

/// One certified modulus: an enclosing interval, how many eigenvalues share
/// it, and its position relative to the unit circle.
#[derive(Clone, Debug, PartialEq)]
pub struct ModulusEntry {
    pub interval: RatInterval,
    pub multiplicity: usize,
    pub class: UnitCircleClass,
}

/// Isolate the moduli of all roots of a monic polynomial with nonzero
/// constant term and no cyclotomic factors. `precision` caps the working
/// precision in bits; classification against 1 that still fails at the cap
/// is reported as `AmbiguousSpectrum`.
pub fn isolate_moduli(
    p: &IntPolynomial,
    precision: u32,
) -> Result<Vec<ModulusEntry>, IntMatError> {
    assert!(p.is_monic() && !p.coeff(0).is_zero());
    let mut entries: Vec<(RatInterval, usize, UnitCircleClass, RatInterval)> = Vec::new();
    // Each entry keeps (modulus interval, multiplicity, class, root interval
    // on the real line or an empty placeholder for complex pairs) so the
    // negation merge below can reason about actual root positions.

    for (factor, mult) in p.squarefree_decomposition() {
        let mut f = factor.clone();
        // Integer roots first: they come out exact and make later bisection
        // midpoints provably non-roots (a monic integer polynomial has no
        // other rational roots).
        for r in integer_root_candidates(&f) {
            let rr = BigRational::from_integer(r.clone());
            if f.eval_rational(&rr).is_zero() {
                let linear = IntPolynomial::new(vec![-r.clone(), BigInt::one()]);
                let (q, rem) = f.div_rem_monic(&linear);
                debug_assert!(rem.is_zero());
                f = q;
                let abs = rr.clone().abs();
                let class = classify_exact(&abs);
                entries.push((
                    RatInterval::point(abs),
                    mult,
                    class,
                    RatInterval::point(rr),
                ));
            }
        }
        if f.degree() == 0 {
            continue;
        }

        let target_bits = (precision / 2).max(48);
        // Real (irrational) roots by Sturm isolation.
        let real_intervals = isolate_real_roots(&f, target_bits);
        let real_count = real_intervals.len();
        for iv in real_intervals {
            let (modulus, class) = classify_real_interval(&f, iv.clone(), precision)?;
            entries.push((modulus, mult, class, iv));
        }

        // Complex conjugate pairs.
        let pair_count = (f.degree() - real_count) / 2;
        debug_assert_eq!(f.degree(), real_count + 2 * pair_count);
        if pair_count > 0 {
            let pairs = isolate_complex_pairs(&f, pair_count, target_bits, precision)?;
            for (modulus, class) in pairs {
                let placeholder = RatInterval::point(BigRational::zero());
                entries.push((modulus, 2 * mult, class, placeholder));
            }
        }
    }

    // Merge negation pairs of real roots (r, -r have provably equal
    // modulus). The proof is a Sturm count on the intersection of one
    // isolating interval with the mirror of the other: any root there is
    // both roots at once, forcing r' = -r.
    let sf = p.squarefree_part();
    let mut merged: Vec<ModulusEntry> = Vec::new();
    let mut used = vec![false; entries.len()];
    for i in 0..entries.len() {
        if used[i] {
            continue;
        }
        let (iv_i, mult_i, class_i, root_i) = entries[i].clone();
        let mut total_mult = mult_i;
        if !root_i.is_point() || !root_i.lo.is_zero() {
            // A real root: look for its negation partner among later entries.
            for j in i + 1..entries.len() {
                if used[j] {
                    continue;
                }
                let (_, mult_j, class_j, root_j) = &entries[j];
                if root_j.is_point() && root_j.lo.is_zero() {
                    continue; // complex placeholder
                }
                let mirrored = RatInterval::new(-root_i.hi.clone(), -root_i.lo.clone());
                let is_pair = if root_i.is_point() && root_j.is_point() {
                    // Exact roots: negation is a direct equality check.
                    root_j.lo == mirrored.lo
                } else if let Some(overlap) = mirrored.intersect(root_j) {
                    // A root of the squarefree part inside the overlap lies
                    // in both isolating regions at once, proving r' = -r.
                    !overlap.is_point() && sturm_count(&sf, &overlap) >= 1
                } else {
                    false
                };
                if is_pair {
                    debug_assert_eq!(class_i, *class_j);
                    total_mult += mult_j;
                    used[j] = true;
                }
            }
        }
        used[i] = true;
        merged.push(ModulusEntry {
            interval: iv_i,
            multiplicity: total_mult,
            class: class_i,
        });
    }
    merged.sort_by(|a, b| {
        a.interval
            .lo
            .cmp(&b.interval.lo)
            .then(a.interval.hi.cmp(&b.interval.hi))
    });
    Ok(merged)
}

fn classify_exact(abs: &BigRational) -> UnitCircleClass {
    match abs.cmp(&rat_int(1)) {
        std::cmp::Ordering::Less => UnitCircleClass::Below,
        std::cmp::Ordering::Equal => UnitCircleClass::On,
        std::cmp::Ordering::Greater => UnitCircleClass::Above,
    }
}

fn integer_root_candidates(f: &IntPolynomial) -> Vec<BigInt> {
    let c0 = f.coeff(0).abs();
    if c0.is_zero() {
        return vec![];
    }
    let mut out = Vec::new();
    // Divisors of the constant term, both signs.
    let mut d = BigInt::one();
    while (&d * &d) <= c0 {
        if (&c0 % &d).is_zero() {
            let q = &c0 / &d;
            for cand in [d.clone(), -d.clone(), q.clone(), -q] {
                if !out.contains(&cand) {
                    out.push(cand);
                }
            }
        }
        d += BigInt::one();
        if d.to_u64().is_none_or(|v| v > 1_000_000) {
            break; // constant term too composite to enumerate; Sturm will cover
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Sturm machinery
// ---------------------------------------------------------------------------

fn sturm_chain(f: &IntPolynomial) -> Vec<IntPolynomial> {
    let mut chain = vec![f.primitive(), f.derivative().primitive()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let rem = neg_rem_primitive(&chain[n - 2], &chain[n - 1]);
        if rem.is_zero() {
            break;
        }
        chain.push(rem);
    }
    chain
}

/// -(a mod b) over ℚ, scaled by a positive rational into a primitive
/// integer polynomial (positive scaling preserves the sign pattern that
/// Sturm counting depends on).
fn neg_rem_primitive(a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
    let mut r: Vec<BigRational> = a
        .coeffs()
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    let db = b.degree();
    let lead = BigRational::from_integer(b.leading());
    let trim = |v: &mut Vec<BigRational>| {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
    };
    trim(&mut r);
    while r.len() > db {
        let da = r.len() - 1;
        let f = &r[da] / &lead;
        for j in 0..=db {
            let delta = &f * &BigRational::from_integer(b.coeff(j));
            r[da - db + j] -= delta;
        }
        trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    if r.is_empty() {
        return IntPolynomial::zero();
    }
    let mut denom_lcm = BigInt::one();
    for c in &r {
        denom_lcm = num_integer::lcm(denom_lcm, c.denom().clone());
    }
    let ints: Vec<BigInt> = r
        .iter()
        .map(|c| -((c * BigRational::from_integer(denom_lcm.clone())).to_integer()))
        .collect();
    let p = IntPolynomial::new(ints);
    // Divide by positive content only.
    let content = p.content();
    if content.is_zero() {
        return p;
    }
    IntPolynomial::new(p.coeffs().iter().map(|c| c / &content).collect())
}

fn sign_variations(chain: &[IntPolynomial], x: &BigRational) -> usize {
    let mut last = 0i32;
    let mut variations = 0;
    for p in chain {
        let s = sign(&p.eval_rational(x));
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            variations += 1;
        }
        last = s;
    }
    variations
}

/// Number of distinct real roots of a squarefree polynomial in (a, b].
pub fn sturm_count(f: &IntPolynomial, interval: &RatInterval) -> usize {
    let chain = sturm_chain(f);
    let va = sign_variations(&chain, &interval.lo);
    let vb = sign_variations(&chain, &interval.hi);
    va.saturating_sub(vb)
}

/// Cauchy root bound: all roots have |z| < 1 + max|a_i|/|lead|.
fn cauchy_bound(f: &IntPolynomial) -> BigRational {
    let lead = BigRational::from_integer(f.leading().abs());
    let mut max = BigRational::zero();
    for c in f.coeffs() {
        let a = BigRational::from_integer(c.clone().abs());
        if a > max {
            max = a;
        }
    }
    BigRational::one() + max / lead + BigRational::one()
}

/// Disjoint isolating intervals for every real root of a squarefree
/// polynomial with no rational roots, refined to width <= 2^-target and
/// with sign-definite endpoints.
fn isolate_real_roots(f: &IntPolynomial, target: u32) -> Vec<RatInterval> {
    let chain = sturm_chain(f);
    let bound = cauchy_bound(f);
    let mut stack = vec![RatInterval::new(-bound.clone(), bound)];
    let mut isolated = Vec::new();
    while let Some(iv) = stack.pop() {
        let count = {
            let va = sign_variations(&chain, &iv.lo);
            let vb = sign_variations(&chain, &iv.hi);
            va.saturating_sub(vb)
        };
        match count {
            0 => {}
            1 => isolated.push(iv),
            _ => {
                let mid = iv.midpoint();
                stack.push(RatInterval::new(iv.lo.clone(), mid.clone()));
                stack.push(RatInterval::new(mid, iv.hi.clone()));
            }
        }
    }
    // Refine each: bisection keeps exactly one root inside, endpoints are
    // rational non-roots throughout (f has no rational roots).
    let width_target = BigRational::new(BigInt::one(), BigInt::one() << target);
    let refined: Vec<RatInterval> = isolated
        .into_iter()
        .map(|mut iv| {
            loop {
                let sign_definite = sign(&iv.lo) == sign(&iv.hi) && sign(&iv.lo) != 0;
                if iv.width() <= width_target && sign_definite {
                    break iv;
                }
                let mid = iv.midpoint();
                let s_lo = sign(&f.eval_rational(&iv.lo));
                let s_mid = sign(&f.eval_rational(&mid));
                debug_assert!(s_mid != 0, "rational midpoint cannot be a root here");
                if s_lo != s_mid {
                    iv = RatInterval::new(iv.lo.clone(), mid);
                } else {
                    iv = RatInterval::new(mid, iv.hi.clone());
                }
            }
        })
        .collect();
    let mut refined = refined;
    refined.sort_by(|a, b| a.lo.cmp(&b.lo));
    refined
}

/// Modulus interval + circle classification for an isolated real root,
/// refining by bisection until the comparison with 1 resolves.
fn classify_real_interval(
    f: &IntPolynomial,
    mut iv: RatInterval,
    precision: u32,
) -> Result<(RatInterval, UnitCircleClass), IntMatError> {
    let one = rat_int(1);
    let mut bits_spent = 0u32;
    loop {
        let (alo, ahi) = abs_bounds(&iv);
        if ahi < one {
            return Ok((RatInterval::new(alo, ahi), UnitCircleClass::Below));
        }
        if alo > one {
            return Ok((RatInterval::new(alo, ahi), UnitCircleClass::Above));
        }
        if alo == one && ahi == one {
            return Ok((RatInterval::new(alo, ahi), UnitCircleClass::On));
        }
        if bits_spent >= precision {
            return Err(IntMatError::AmbiguousSpectrum);
        }
        let mid = iv.midpoint();
        let s_lo = sign(&f.eval_rational(&iv.lo));
        let s_mid = sign(&f.eval_rational(&mid));
        if s_mid == 0 {
            // mid is an exact root (possible when ±1 is a root upstream;
            // excluded for cyclotomic-free input, kept as a guard).
            return Err(IntMatError::AmbiguousSpectrum);
        }
        if s_lo != s_mid {
            iv = RatInterval::new(iv.lo.clone(), mid);
        } else {
            iv = RatInterval::new(mid, iv.hi.clone());
        }
        bits_spent += 1;
    }
}

fn abs_bounds(iv: &RatInterval) -> (BigRational, BigRational) {
    let a = iv.lo.clone().abs();
    let b = iv.hi.clone().abs();
    if sign(&iv.lo) != sign(&iv.hi) {
        (BigRational::zero(), a.max(b))
    } else {
        (a.clone().min(b.clone()), a.max(b))
    }
}

// ---------------------------------------------------------------------------
// Complex pairs: Aberth seeds + exact Newton + disk certification
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
struct C64 {
    re: f64,
    im: f64,
}

impl C64 {
    fn new(re: f64, im: f64) -> Self {
        C64 { re, im }
    }
    fn add(self, o: C64) -> C64 {
        C64::new(self.re + o.re, self.im + o.im)
    }
    fn sub(self, o: C64) -> C64 {
        C64::new(self.re - o.re, self.im - o.im)
    }
    fn mul(self, o: C64) -> C64 {
        C64::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
    fn div(self, o: C64) -> C64 {
        let d = o.re * o.re + o.im * o.im;
        C64::new(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )
    }
    fn norm(self) -> f64 {
        self.re.hypot(self.im)
    }
}

fn eval_c64(coeffs: &[f64], z: C64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc.mul(z).add(C64::new(c, 0.0));
    }
    acc
}

/// All roots of f in f64 by Aberth–Ehrlich iteration.
fn aberth_roots(f: &IntPolynomial) -> Result<Vec<C64>, IntMatError> {
    let n = f.degree();
    let coeffs: Vec<f64> = f
        .coeffs()
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::INFINITY))
        .collect();
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(IntMatError::InvalidInput(
            "polynomial coefficients exceed floating-point range".into(),
        ));
    }
    let deriv: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * i as f64)
        .collect();
    let r0 = 1.0
        + coeffs[..n]
            .iter()
            .map(|c| (c / coeffs[n]).abs())
            .fold(0.0, f64::max);
    let mut z: Vec<C64> = (0..n)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / n as f64 + 0.41;
            C64::new(r0 * 0.8 * theta.cos(), r0 * 0.8 * theta.sin())
        })
        .collect();
    for _ in 0..400 {
        let mut max_step = 0.0f64;
        for j in 0..n {
            let pz = eval_c64(&coeffs, z[j]);
            let dpz = eval_c64(&deriv, z[j]);
            if dpz.norm() == 0.0 {
                continue;
            }
            let newton = pz.div(dpz);
            let mut s = C64::new(0.0, 0.0);
            for k in 0..n {
                if k != j {
                    s = s.add(C64::new(1.0, 0.0).div(z[j].sub(z[k])));
                }
            }
            let denom = C64::new(1.0, 0.0).sub(newton.mul(s));
            let step = newton.div(denom);
            z[j] = z[j].sub(step);
            max_step = max_step.max(step.norm() / (1.0 + z[j].norm()));
        }
        if max_step < 1e-14 {
            break;
        }
    }
    Ok(z)
}

/// Certified modulus intervals for the `pair_count` conjugate pairs of a
/// squarefree polynomial (degree = #real roots + 2*pair_count).
fn isolate_complex_pairs(
    f: &IntPolynomial,
    pair_count: usize,
    target: u32,
    precision: u32,
) -> Result<Vec<(RatInterval, UnitCircleClass)>, IntMatError> {
    let approx = aberth_roots(f)?;
    let mut upper: Vec<C64> = approx.iter().copied().filter(|z| z.im > 1e-9).collect();
    if upper.len() != pair_count {
        // Retry with a tighter near-real filter before giving up.
        upper = approx.iter().copied().filter(|z| z.im > 1e-6).collect();
        if upper.len() != pair_count {
            return Err(IntMatError::AmbiguousSpectrum);
        }
    }
    let deriv = f.derivative();
    let deg = BigRational::from_integer(BigInt::from(f.degree() as i64));
    let one = rat_int(1);

    // Refine each root until its certified disk is small enough to place
    // the modulus relative to the unit circle.
    let mut disks: Vec<(ComplexRat, BigRational)> = Vec::new(); // (center, radius upper bound)
    let mut results = Vec::new();
    for z0 in &upper {
        let mut wbits: u32 = 64;
        let mut z = ComplexRat::from_f64(z0.re, z0.im)
            .ok_or(IntMatError::AmbiguousSpectrum)?
            .round(wbits);
        let mut certified: Option<(BigRational, RatInterval, UnitCircleClass)> = None;
        for _ in 0..64 {
            let pz = f.eval_complex(&z);
            let dpz = deriv.eval_complex(&z);
            if dpz.is_zero() {
                break;
            }
            // Certified radius: some root lies within deg*|p(z)/p'(z)| of z.
            let ratio_sq = pz.norm_sq() / dpz.norm_sq();
            let radius_sq = &deg * &deg * ratio_sq;
            let radius = sqrt_upper(&radius_sq, wbits);
            let center_norm_sq = z.norm_sq();
            // Above: |z| - r > 1  <=>  |z|^2 > (1+r)^2.
            let above = center_norm_sq > (&one + &radius) * (&one + &radius);
            let below = radius < one
                && center_norm_sq < (&one - &radius) * (&one - &radius);
            let tight = radius <= BigRational::new(BigInt::one(), BigInt::one() << target);
            if tight && (above || below) {
                let norm_lo = crate::numeric::sqrt_lower(&center_norm_sq, wbits + 4);
                let norm_hi = sqrt_upper(&center_norm_sq, wbits + 4);
                let lo = (&norm_lo - &radius).max(BigRational::zero());
                let hi = &norm_hi + &radius;
                let class = if above {
                    UnitCircleClass::Above
                } else {
                    UnitCircleClass::Below
                };
                certified = Some((radius, RatInterval::new(lo, hi), class));
                break;
            }
            if wbits >= precision {
                break;
            }
            wbits = (wbits * 2).min(precision.max(64));
            let step = pz.div(&dpz);
            z = z.sub(&step).round(wbits);
        }
        let Some((radius, interval, class)) = certified else {
            return Err(IntMatError::AmbiguousSpectrum);
        };
        // Off-axis check: the disk must not touch the real line, so it
        // contains a genuinely complex root.
        if z.im <= radius {
            return Err(IntMatError::AmbiguousSpectrum);
        }
        disks.push((z, radius));
        results.push((interval, class));
    }

    // Pairwise disjointness: with all upper-half disks disjoint (and their
    // mirror images automatically disjoint from them), each disk holds
    // exactly one root.
    for i in 0..disks.len() {
        for j in i + 1..disks.len() {
            let d2 = disks[i].0.sub(&disks[j].0).norm_sq();
            let rsum = &disks[i].1 + &disks[j].1;
            if d2 <= &rsum * &rsum {
                return Err(IntMatError::AmbiguousSpectrum);
            }
        }
    }
    Ok(results)
}




#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sturm_counts_roots_of_quadratic() {
        // x^2 - 4x + 2 has roots 2±√2 ≈ 0.586, 3.414.
        let f = IntPolynomial::from_i64(&[2, -4, 1]);
        assert_eq!(
            sturm_count(&f, &RatInterval::new(rat_int(0), rat_int(4))),
            2
        );
        assert_eq!(
            sturm_count(&f, &RatInterval::new(rat_int(0), rat_int(1))),
            1
        );
        assert_eq!(
            sturm_count(&f, &RatInterval::new(rat_int(1), rat_int(3))),
            0
        );
    }

    #[test]
    fn isolates_quadratic_moduli() {
        // Roots 2±√2; both certified off the unit circle.
        let f = IntPolynomial::from_i64(&[2, -4, 1]);
        let entries = isolate_moduli(&f, 256).unwrap();
        assert_eq!(entries.len(), 2);
        let small = &entries[0];
        let large = &entries[1];
        assert_eq!(small.class, UnitCircleClass::Below);
        assert_eq!(large.class, UnitCircleClass::Above);
        // 2-√2 = 0.58578643..., 2+√2 = 3.41421356...
        let small_mid = small.interval.to_f64();
        let large_mid = large.interval.to_f64();
        assert!((small_mid - 0.5857864376269049).abs() < 1e-12);
        assert!((large_mid - 3.414213562373095).abs() < 1e-12);
    }

    #[test]
    fn complex_pair_moduli() {
        // x^2 - 2x + 2: roots 1±i, modulus √2.
        let f = IntPolynomial::from_i64(&[2, -2, 1]);
        let entries = isolate_moduli(&f, 256).unwrap();
        assert_eq!(entries.len(), 1);
        assert_eq!(entries[0].multiplicity, 2);
        assert_eq!(entries[0].class, UnitCircleClass::Above);
        assert!((entries[0].interval.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn negation_pair_merges() {
        // x^2 - 4: roots ±2 share modulus 2 and merge into one entry.
        let f = IntPolynomial::from_i64(&[-4, 0, 1]);
        let entries = isolate_moduli(&f, 128).unwrap();
        assert_eq!(entries.len(), 1);
        assert_eq!(entries[0].multiplicity, 2);
        assert!(entries[0].interval.contains(&rat_int(2)));
    }

    #[test]
    fn mixed_real_and_complex() {
        // (x^2+4)(x-3): moduli {2, 2, 3}.
        let f = IntPolynomial::from_i64(&[4, 0, 1]).mul(&IntPolynomial::from_i64(&[-3, 1]));
        let entries = isolate_moduli(&f, 128).unwrap();
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[0].multiplicity, 2); // the pair ±2i
        assert!(entries[0].interval.contains(&rat_int(2)));
        assert_eq!(entries[1].multiplicity, 1);
        assert!(entries[1].interval.contains(&rat_int(3)));
    }

    #[test]
    fn salem_like_root_on_circle_is_ambiguous() {
        // Lehmer's polynomial: non-cyclotomic with several roots exactly on
        // the unit circle; classification must refuse rather than guess.
        let lehmer = IntPolynomial::from_i64(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
        let (factors, rem) = lehmer.strip_cyclotomic().unwrap();
        assert!(factors.is_empty());
        assert_eq!(rem.degree(), 10);
        assert_eq!(isolate_moduli(&rem, 96), Err(IntMatError::AmbiguousSpectrum));
    }

    #[test]
    fn repeated_factor_multiplicity() {
        // (x-2)^2: one entry, multiplicity 2.
        let f = IntPolynomial::from_i64(&[-2, 1]).mul(&IntPolynomial::from_i64(&[-2, 1]));
        let entries = isolate_moduli(&f, 128).unwrap();
        assert_eq!(entries.len(), 1);
        assert_eq!(entries[0].multiplicity, 2);
        assert_eq!(entries[0].class, UnitCircleClass::Above);
    }
}
