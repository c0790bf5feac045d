//! Integer polynomials: exact arithmetic, gcd, squarefree decomposition,
//! cyclotomic factors.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

use super::IntMatError;
use crate::numeric::ComplexRat;

/// Polynomial with arbitrary-precision integer coefficients, ascending
/// degree, trimmed so the leading coefficient is nonzero (the zero
/// polynomial is the empty coefficient list).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: vec![] }
    }

    pub fn one() -> Self {
        IntPolynomial { coeffs: vec![BigInt::one()] }
    }

    /// x^n with coefficient 1.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        IntPolynomial { coeffs }
    }

    /// Build from monic rational coefficients; panics if any coefficient is
    /// not an integer (valid for monic factors of integer polynomials).
    pub fn from_rational_monic(coeffs: &[BigRational]) -> Self {
        let ints = coeffs
            .iter()
            .map(|c| {
                assert!(c.is_integer(), "monic factor must have integer coefficients");
                c.to_integer()
            })
            .collect();
        IntPolynomial::new(ints)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree; the zero polynomial reports degree 0 alongside is_zero().
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeffs_i64(&self) -> Vec<i64> {
        self.coeffs
            .iter()
            .map(|c| i64::try_from(c).expect("coefficient does not fit i64"))
            .collect()
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn add(&self, other: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect();
        IntPolynomial::new(coeffs)
    }

    pub fn sub(&self, other: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - other.coeff(i)).collect();
        IntPolynomial::new(coeffs)
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || other.is_zero() {
            return IntPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPolynomial::new(coeffs)
    }

    /// Division with remainder by a monic divisor, exact over ℤ.
    pub fn div_rem_monic(&self, divisor: &IntPolynomial) -> (IntPolynomial, IntPolynomial) {
        assert!(divisor.is_monic(), "divisor must be monic");
        let d = divisor.degree();
        if self.is_zero() || self.degree() < d {
            return (IntPolynomial::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); self.degree() - d + 1];
        for i in (d..rem.len()).rev() {
            let c = rem[i].clone();
            if c.is_zero() {
                continue;
            }
            quot[i - d] = c.clone();
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                let delta = &c * dc;
                rem[i - d + j] -= delta;
            }
        }
        (IntPolynomial::new(quot), IntPolynomial::new(rem))
    }

    pub fn derivative(&self) -> IntPolynomial {
        if self.coeffs.len() <= 1 {
            return IntPolynomial::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i as i64))
            .collect();
        IntPolynomial::new(coeffs)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_complex(&self, z: &ComplexRat) -> ComplexRat {
        let mut acc = ComplexRat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z);
            acc.re += BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Content (gcd of coefficients, positive).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = num_integer::gcd(g, c.clone());
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> IntPolynomial {
        if self.is_zero() {
            return IntPolynomial::zero();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        IntPolynomial::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Monic gcd over ℚ, returned as a primitive integer polynomial
    /// (monic whenever both inputs are monic, by Gauss's lemma).
    pub fn gcd(&self, other: &IntPolynomial) -> IntPolynomial {
        let mut a: Vec<BigRational> = self
            .coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let mut b: Vec<BigRational> = other
            .coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let trim = |v: &mut Vec<BigRational>| {
            while v.last().is_some_and(|c| c.is_zero()) {
                v.pop();
            }
        };
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            // a mod b.
            let db = b.len() - 1;
            let lead = b[db].clone();
            while a.len() > db {
                let da = a.len() - 1;
                let f = &a[da] / &lead;
                if !f.is_zero() {
                    for j in 0..=db {
                        let delta = &f * &b[j];
                        a[da - db + j] -= delta;
                    }
                }
                a.pop();
                trim(&mut a);
                if a.is_empty() {
                    break;
                }
            }
            std::mem::swap(&mut a, &mut b);
        }
        if a.is_empty() {
            return IntPolynomial::zero();
        }
        // Clear denominators, take primitive part.
        let mut denom_lcm = BigInt::one();
        for c in &a {
            denom_lcm = num_integer::lcm(denom_lcm, c.denom().clone());
        }
        let ints: Vec<BigInt> = a
            .iter()
            .map(|c| (c * BigRational::from_integer(denom_lcm.clone())).to_integer())
            .collect();
        IntPolynomial::new(ints).primitive()
    }

    /// Squarefree part: p / gcd(p, p').
    pub fn squarefree_part(&self) -> IntPolynomial {
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.clone().primitive();
        }
        let (q, r) = self.div_rem_monic(&g.monicized());
        debug_assert!(r.is_zero());
        q.primitive()
    }

    /// Yun squarefree decomposition for monic polynomials: returns
    /// (factor, multiplicity) pairs with factors squarefree, pairwise
    /// coprime, and product of factor^mult equal to the input.
    pub fn squarefree_decomposition(&self) -> Vec<(IntPolynomial, usize)> {
        assert!(self.is_monic());
        let mut out = Vec::new();
        if self.degree() == 0 {
            return out;
        }
        let deriv = self.derivative();
        let g = self.gcd(&deriv).monicized();
        if g.degree() == 0 {
            out.push((self.clone(), 1));
            return out;
        }
        let (mut c, r) = self.div_rem_monic(&g);
        debug_assert!(r.is_zero());
        let (dq, r) = deriv.div_rem_monic(&g);
        debug_assert!(r.is_zero());
        let mut d = dq.sub(&c.derivative());
        let mut mult = 1usize;
        while c.degree() > 0 {
            let p = c.gcd(&d).monicized();
            if p.degree() > 0 {
                out.push((p.clone(), mult));
                let (c_next, r) = c.div_rem_monic(&p);
                debug_assert!(r.is_zero());
                let (d_next, r) = d.div_rem_monic(&p);
                debug_assert!(r.is_zero());
                c = c_next;
                d = d_next.sub(&c.derivative());
            } else {
                d = d.sub(&c.derivative());
            }
            mult += 1;
            assert!(mult <= self.degree() + 1, "Yun decomposition diverged");
        }
        out
    }

    /// Divide out all cyclotomic factors Φ_n with multiplicity.
    ///
    /// Candidates are the n with φ(n) <= deg p; the remainder has no
    /// cyclotomic factor. All eigenvalues of an integer matrix lie on the
    /// unit circle exactly when this remainder is trivial (Kronecker).
    pub fn strip_cyclotomic(
        &self,
    ) -> Result<(Vec<(u64, usize)>, IntPolynomial), IntMatError> {
        if !self.is_monic() {
            return Err(IntMatError::InvalidInput(
                "cyclotomic stripping requires a monic polynomial".into(),
            ));
        }
        if self.coeff(0).is_zero() {
            return Err(IntMatError::Singular);
        }
        let mut rem = self.clone();
        let mut factors = Vec::new();
        for n in phi_inverse_candidates(self.degree() as u64) {
            let phi_n = cyclotomic(n);
            if phi_n.degree() > rem.degree() {
                continue;
            }
            let mut mult = 0;
            loop {
                let (q, r) = rem.div_rem_monic(&phi_n);
                if r.is_zero() && !q.is_zero() {
                    rem = q;
                    mult += 1;
                } else {
                    break;
                }
            }
            if mult > 0 {
                factors.push((n, mult));
            }
        }
        Ok((factors, rem))
    }

    /// Force leading coefficient +1 (input must have leading ±1 or be a
    /// primitive gcd output whose sign we normalize).
    pub fn monicized(&self) -> IntPolynomial {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let lead = self.leading();
        assert!(
            lead.clone().abs().is_one(),
            "cannot monicize a polynomial with leading coefficient {lead}"
        );
        IntPolynomial::new(self.coeffs.iter().map(|c| c / &lead).collect())
    }

    /// The reversed-sign polynomial ±p(-x), normalized monic.
    pub fn compose_neg_monic(&self) -> IntPolynomial {
        let coeffs: Vec<BigInt> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
            .collect();
        IntPolynomial::new(coeffs).monicized()
    }
}

impl std::fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let abs = c.clone().abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}")?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Euler's totient by trial factorization (arguments stay small here).
fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// All n with φ(n) <= bound, ascending. φ(n) >= sqrt(n/2) gives the cutoff.
pub fn phi_inverse_candidates(bound: u64) -> Vec<u64> {
    let limit = 2 * bound * bound + 2;
    (1..=limit).filter(|&n| euler_phi(n) <= bound).collect()
}

/// n-th cyclotomic polynomial via x^n - 1 = Π_{d|n} Φ_d.
pub fn cyclotomic(n: u64) -> IntPolynomial {
    thread_local! {
        static CACHE: std::cell::RefCell<BTreeMap<u64, IntPolynomial>> =
            const { std::cell::RefCell::new(BTreeMap::new()) };
    }
    CACHE.with(|cache| {
        if let Some(p) = cache.borrow().get(&n) {
            return p.clone();
        }
        let result = if n == 1 {
            IntPolynomial::from_i64(&[-1, 1])
        } else {
            let mut num = IntPolynomial::monomial(n as usize).sub(&IntPolynomial::one());
            for d in 1..n {
                if n.is_multiple_of(d) {
                    let phi_d = cyclotomic(d);
                    let (q, r) = num.div_rem_monic(&phi_d);
                    debug_assert!(r.is_zero());
                    num = q;
                }
            }
            num
        };
        cache.borrow_mut().insert(n, result.clone());
        result
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_small_indices() {
        assert_eq!(cyclotomic(1).coeffs_i64(), vec![-1, 1]); // x - 1
        assert_eq!(cyclotomic(2).coeffs_i64(), vec![1, 1]); // x + 1
        assert_eq!(cyclotomic(3).coeffs_i64(), vec![1, 1, 1]);
        assert_eq!(cyclotomic(4).coeffs_i64(), vec![1, 0, 1]); // x^2 + 1
        assert_eq!(cyclotomic(6).coeffs_i64(), vec![1, -1, 1]);
        assert_eq!(cyclotomic(12).coeffs_i64(), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn strip_cyclotomic_examples() {
        // x^2 + 1 = Φ_4.
        let p = IntPolynomial::from_i64(&[1, 0, 1]);
        let (factors, rem) = p.strip_cyclotomic().unwrap();
        assert_eq!(factors, vec![(4, 1)]);
        assert!(rem.is_one());

        // x^2 - 3x + 1: roots (3±√5)/2 off the unit circle; nothing strips.
        let p = IntPolynomial::from_i64(&[1, -3, 1]);
        let (factors, rem) = p.strip_cyclotomic().unwrap();
        assert!(factors.is_empty());
        assert_eq!(rem, p);

        // x - 1 = Φ_1.
        let p = IntPolynomial::from_i64(&[-1, 1]);
        let (factors, rem) = p.strip_cyclotomic().unwrap();
        assert_eq!(factors, vec![(1, 1)]);
        assert!(rem.is_one());

        // Zero constant term rejected.
        let p = IntPolynomial::from_i64(&[0, 1]);
        assert_eq!(p.strip_cyclotomic(), Err(IntMatError::Singular));
    }

    #[test]
    fn strip_cyclotomic_multiplicity_and_product() {
        // (x-1)^2 (x^2+1) (x^2 - 3x + 1)
        let p = IntPolynomial::from_i64(&[-1, 1])
            .mul(&IntPolynomial::from_i64(&[-1, 1]))
            .mul(&IntPolynomial::from_i64(&[1, 0, 1]))
            .mul(&IntPolynomial::from_i64(&[1, -3, 1]));
        let (factors, rem) = p.strip_cyclotomic().unwrap();
        assert_eq!(factors, vec![(1, 2), (4, 1)]);
        assert_eq!(rem.coeffs_i64(), vec![1, -3, 1]);
        // Factors multiply back to the input exactly.
        let mut product = rem;
        for (n, mult) in factors {
            for _ in 0..mult {
                product = product.mul(&cyclotomic(n));
            }
        }
        assert_eq!(product, p);
    }

    #[test]
    fn gcd_and_squarefree() {
        // gcd((x-1)^2(x+2), (x-1)(x+3)) = x - 1.
        let a = IntPolynomial::from_i64(&[-1, 1])
            .mul(&IntPolynomial::from_i64(&[-1, 1]))
            .mul(&IntPolynomial::from_i64(&[2, 1]));
        let b = IntPolynomial::from_i64(&[-1, 1]).mul(&IntPolynomial::from_i64(&[3, 1]));
        assert_eq!(a.gcd(&b).monicized().coeffs_i64(), vec![-1, 1]);

        let sf = a.squarefree_part();
        // (x-1)(x+2) = x^2 + x - 2.
        assert_eq!(sf.coeffs_i64(), vec![-2, 1, 1]);
    }

    #[test]
    fn squarefree_decomposition_recovers_multiplicities() {
        // (x-1)^2 (x^2-3x+1)
        let p = IntPolynomial::from_i64(&[-1, 1])
            .mul(&IntPolynomial::from_i64(&[-1, 1]))
            .mul(&IntPolynomial::from_i64(&[1, -3, 1]));
        let decomp = p.squarefree_decomposition();
        let mut rebuilt = IntPolynomial::one();
        for (f, mult) in &decomp {
            for _ in 0..*mult {
                rebuilt = rebuilt.mul(f);
            }
        }
        assert_eq!(rebuilt, p);
        assert!(decomp.iter().any(|(f, m)| *m == 2 && f.degree() == 1));
        assert!(decomp.iter().any(|(f, m)| *m == 1 && f.degree() == 2));
    }

    #[test]
    fn phi_inverse_contains_expected() {
        let c = phi_inverse_candidates(2);
        assert_eq!(c, vec![1, 2, 3, 4, 6]);
        let c4 = phi_inverse_candidates(4);
        assert!(c4.contains(&5) && c4.contains(&8) && c4.contains(&12));
        assert!(!c4.contains(&7)); // φ(7) = 6 > 4
    }

    #[test]
    fn display_renders_readably() {
        let p = IntPolynomial::from_i64(&[1, -3, 1]);
        assert_eq!(p.to_string(), "x^2 - 3x + 1");
        assert_eq!(IntPolynomial::from_i64(&[0, 0, 2]).to_string(), "2x^2");
    }
}
