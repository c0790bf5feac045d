//! Exact integer linear algebra and certified spectral classification.

mod poly;
mod roots;
mod spectral;

pub use poly::{cyclotomic, phi_inverse_candidates, IntPolynomial};
pub use roots::{isolate_moduli, ModulusEntry, UnitCircleClass};
pub use spectral::{eigenvalue_moduli, spectral_profile, SpectralProfile};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;


#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntMatError {
    #[error("matrix is singular (det M = 0): Γ_M requires injective φ")]
    Singular,
    #[error("matrix rows have unequal lengths or are empty")]
    NotSquare,
    #[error("eigenvalue modulus straddles 1 at maximum precision (Salem-type borderline)")]
    AmbiguousSpectrum,
    #[error("{0}")]
    InvalidInput(String),
}

/// A square matrix with arbitrary-precision integer entries, row-major.
///
/// The automorphism φ of ℤ^m sends the generator `x_i` to the vector in
/// column `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(dim: usize, entries: Vec<BigInt>) -> Result<Self, IntMatError> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(IntMatError::NotSquare);
        }
        Ok(IntMatrix { dim, entries })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, IntMatError> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(IntMatError::NotSquare);
        }
        let entries = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| BigInt::from(x)))
            .collect();
        Ok(IntMatrix { dim, entries })
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![BigInt::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = BigInt::one();
        }
        IntMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &BigInt {
        &self.entries[row * self.dim + col]
    }

    /// Column `i` as a vector; this is φ(x_i) written in the basis x_1..x_m.
    pub fn column(&self, col: usize) -> Vec<BigInt> {
        (0..self.dim).map(|r| self.get(r, col).clone()).collect()
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.get(r, c).clone()).collect())
            .collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut entries = vec![BigInt::zero(); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let term = a * other.get(k, j);
                    entries[i * d + j] += term;
                }
            }
        }
        IntMatrix { dim: d, entries }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, other.dim);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        IntMatrix { dim: self.dim, entries }
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, other.dim);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        IntMatrix { dim: self.dim, entries }
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        IntMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> IntMatrix {
        let mut result = IntMatrix::identity(self.dim);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMatrix::identity(self.dim)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Characteristic polynomial det(xI - M) by the Faddeev–LeVerrier
    /// recurrence; every division is exact over ℤ.
    pub fn char_poly(&self) -> IntPolynomial {
        let m = self.dim;
        // coeffs[i] is the coefficient of x^i; monic of degree m.
        let mut coeffs = vec![BigInt::zero(); m + 1];
        coeffs[m] = BigInt::one();
        let mut n_k = self.clone();
        for k in 1..=m {
            let tr: BigInt = (0..m).map(|i| n_k.get(i, i).clone()).sum();
            let (c_k, rem) = num_integer::Integer::div_rem(&(-tr), &BigInt::from(k as i64));
            debug_assert!(rem.is_zero(), "Faddeev-LeVerrier division must be exact");
            coeffs[m - k] = c_k.clone();
            if k < m {
                let shifted = n_k.add(&IntMatrix::identity(m).scale(&c_k));
                n_k = self.mul(&shifted);
            }
        }
        IntPolynomial::new(coeffs)
    }

    /// det M, read off the characteristic polynomial: det = (-1)^m p(0).
    pub fn det(&self) -> BigInt {
        let p = self.char_poly();
        let c0 = p.coeff(0);
        if self.dim.is_multiple_of(2) {
            c0
        } else {
            -c0
        }
    }

    /// Evaluate a polynomial at this matrix (Horner).
    pub fn eval_poly(&self, p: &IntPolynomial) -> IntMatrix {
        let mut acc = IntMatrix {
            dim: self.dim,
            entries: vec![BigInt::zero(); self.dim * self.dim],
        };
        for c in p.coeffs().iter().rev() {
            acc = self.mul(&acc);
            acc = acc.add(&IntMatrix::identity(self.dim).scale(c));
        }
        acc
    }

    /// Rank over ℚ by fraction-free (Bareiss) elimination.
    pub fn rank(&self) -> usize {
        let d = self.dim;
        let mut m: Vec<Vec<BigInt>> = self.rows();
        let mut rank = 0;
        let mut prev_pivot = BigInt::one();
        let mut row = 0;
        for col in 0..d {
            // Find a pivot.
            let Some(p) = (row..d).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(row, p);
            for r in row + 1..d {
                for c in col + 1..d {
                    let val = (&m[row][col] * &m[r][c] - &m[r][col] * &m[row][c]) / &prev_pivot;
                    m[r][c] = val;
                }
                m[r][col] = BigInt::zero();
            }
            prev_pivot = m[row][col].clone();
            rank += 1;
            row += 1;
            if row == d {
                break;
            }
        }
        rank
    }

    /// Exact inverse, defined only when |det| = 1 (so the inverse is integral).
    pub fn inverse_unimodular(&self) -> Result<IntMatrix, IntMatError> {
        let det = self.det();
        if det.clone().abs() != BigInt::one() {
            return Err(IntMatError::InvalidInput(format!(
                "matrix with det {det} is not an automorphism of Z^m"
            )));
        }
        // Solve M X = I column by column with rational Gaussian elimination.
        let d = self.dim;
        let mut cols = Vec::with_capacity(d);
        for j in 0..d {
            let mut rhs = vec![BigRational::zero(); d];
            rhs[j] = BigRational::one();
            let sol = self.solve_rational(&rhs).ok_or(IntMatError::Singular)?;
            cols.push(sol);
        }
        let mut entries = vec![BigInt::zero(); d * d];
        for (j, col) in cols.iter().enumerate() {
            for i in 0..d {
                let v = &col[i];
                debug_assert!(v.is_integer());
                entries[i * d + j] = v.to_integer();
            }
        }
        Ok(IntMatrix { dim: d, entries })
    }

    /// Solve M x = b over ℚ; None when singular.
    fn solve_rational(&self, b: &[BigRational]) -> Option<Vec<BigRational>> {
        let d = self.dim;
        let mut a: Vec<Vec<BigRational>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| BigRational::from_integer(self.get(i, j).clone()))
                    .chain(std::iter::once(b[i].clone()))
                    .collect()
            })
            .collect();
        for col in 0..d {
            let p = (col..d).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, p);
            let pivot = a[col][col].clone();
            for c in col..=d {
                a[col][c] = &a[col][c] / &pivot;
            }
            for r in 0..d {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for c in col..=d {
                        let delta = &f * &a[col][c];
                        a[r][c] = &a[r][c] - delta;
                    }
                }
            }
        }
        Some((0..d).map(|i| a[i][d].clone()).collect())
    }

    /// Minimal polynomial over ℚ: the first linear dependency among
    /// I, M, M², … found by Gaussian elimination on flattened powers.
    /// Monic with integer coefficients (it divides the characteristic
    /// polynomial, so Gauss's lemma applies).
    pub fn min_poly(&self) -> IntPolynomial {
        let d = self.dim;
        let n = d * d;
        // Echelon basis rows together with the combination that produced them.
        let mut basis: Vec<(Vec<BigRational>, Vec<BigRational>)> = Vec::new();
        let mut power = IntMatrix::identity(d);
        for degree in 0..=d {
            let mut vec: Vec<BigRational> = power
                .entries
                .iter()
                .map(|e| BigRational::from_integer(e.clone()))
                .collect();
            let mut combo = vec![BigRational::zero(); d + 1];
            combo[degree] = BigRational::one();
            // Reduce against the basis.
            for (bvec, bcombo) in &basis {
                let lead = bvec.iter().position(|x| !x.is_zero()).unwrap();
                if !vec[lead].is_zero() {
                    let f = &vec[lead] / &bvec[lead];
                    for i in 0..n {
                        let delta = &f * &bvec[i];
                        vec[i] = &vec[i] - delta;
                    }
                    for i in 0..=d {
                        let delta = &f * &bcombo[i];
                        combo[i] = &combo[i] - delta;
                    }
                }
            }
            if vec.iter().all(|x| x.is_zero()) {
                // combo gives the minimal polynomial; make it monic.
                let lead = combo[degree].clone();
                let coeffs: Vec<BigRational> = combo[..=degree]
                    .iter()
                    .map(|c| c / &lead)
                    .collect();
                return IntPolynomial::from_rational_monic(&coeffs);
            }
            basis.push((vec, combo));
            power = power.mul(self);
        }
        unreachable!("Cayley-Hamilton guarantees a dependency by degree m");
    }

    /// True iff the minimal polynomial is squarefree.
    pub fn is_diagonalizable(&self) -> bool {
        let mp = self.min_poly();
        mp.gcd(&mp.derivative()).degree() == 0
    }

    /// Exact multiplicative order, when finite. Requires det M != 0.
    ///
    /// M has finite order iff it is diagonalizable and its characteristic
    /// polynomial is a product of cyclotomics; the order is then the lcm of
    /// the cyclotomic indices, verified here by exact powering.
    pub fn finite_order(&self) -> Result<Option<u64>, IntMatError> {
        let p = self.char_poly();
        if p.coeff(0).is_zero() {
            return Err(IntMatError::Singular);
        }
        let (factors, remainder) = p.strip_cyclotomic()?;
        if remainder.degree() > 0 {
            return Ok(None);
        }
        if !self.is_diagonalizable() {
            return Ok(None);
        }
        let mut n: u64 = 1;
        for (idx, _) in &factors {
            n = num_integer::lcm(n, *idx);
        }
        let powered = self.pow(n);
        if powered.is_identity() {
            Ok(Some(n))
        } else {
            // Cannot happen when the two preconditions hold; kept as a guard.
            Ok(None)
        }
    }

    /// Jordan block sizes of the unipotent part, for matrices whose
    /// eigenvalues all lie on the unit circle (characteristic polynomial a
    /// product of cyclotomics). With N the order of the semisimple part,
    /// M^N is unipotent and rank((M^N - I)^j) reads off the block sizes.
    pub fn unipotent_block_sizes(&self) -> Result<Vec<usize>, IntMatError> {
        let p = self.char_poly();
        if p.coeff(0).is_zero() {
            return Err(IntMatError::Singular);
        }
        let (factors, remainder) = p.strip_cyclotomic()?;
        if remainder.degree() > 0 {
            return Err(IntMatError::InvalidInput(
                "unipotent block sizes require all eigenvalues on the unit circle".into(),
            ));
        }
        let mut n: u64 = 1;
        for (idx, _) in &factors {
            n = num_integer::lcm(n, *idx);
        }
        let u = self.pow(n).sub(&IntMatrix::identity(self.dim));
        let m = self.dim;
        // ranks[j] = rank(U^j); ranks[0] = m.
        let mut ranks = vec![m];
        let mut power = IntMatrix::identity(m);
        loop {
            power = power.mul(&u);
            let r = power.rank();
            ranks.push(r);
            if r == 0 {
                break;
            }
            if ranks.len() > m + 1 {
                return Err(IntMatError::InvalidInput(
                    "matrix power is not unipotent".into(),
                ));
            }
        }
        // Number of blocks of size >= j is ranks[j-1] - ranks[j].
        let mut result = Vec::new();
        let max_size = ranks.len() - 1;
        for size in (1..=max_size).rev() {
            let at_least_this = ranks[size - 1] - ranks[size];
            let at_least_next = if size < max_size {
                ranks[size] - ranks[size + 1]
            } else {
                0
            };
            let exactly = at_least_this - at_least_next;
            for _ in 0..exactly {
                result.push(size);
            }
        }
        debug_assert_eq!(result.iter().sum::<usize>(), m);
        Ok(result)
    }

    /// |det M| as a rational, convenient for the formula layer.
    pub fn abs_det_rational(&self) -> BigRational {
        BigRational::from_integer(self.det().abs())
    }
}

impl std::fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn char_poly_identity_2x2() {
        let p = IntMatrix::identity(2).char_poly();
        // x^2 - 2x + 1
        assert_eq!(p.coeffs_i64(), vec![1, -2, 1]);
    }

    #[test]
    fn char_poly_cofactor_cases() {
        // [[2,1],[1,1]] -> x^2 - 3x + 1, by hand cofactor expansion.
        let p = mat(&[vec![2, 1], vec![1, 1]]).char_poly();
        assert_eq!(p.coeffs_i64(), vec![1, -3, 1]);
        // [[0,-1],[1,0]] -> x^2 + 1.
        let p = mat(&[vec![0, -1], vec![1, 0]]).char_poly();
        assert_eq!(p.coeffs_i64(), vec![1, 0, 1]);
    }

    #[test]
    fn det_reads_off_char_poly() {
        assert_eq!(mat(&[vec![2, 0], vec![0, 3]]).det(), BigInt::from(6));
        assert_eq!(mat(&[vec![0, -1], vec![1, 0]]).det(), BigInt::from(1));
        assert_eq!(mat(&[vec![1, 2], vec![2, 4]]).det(), BigInt::from(0));
        assert_eq!(
            mat(&[vec![0, 0, 2], vec![1, 0, 0], vec![0, 1, 0]]).det(),
            BigInt::from(2)
        );
    }

    #[test]
    fn cayley_hamilton_on_samples() {
        let samples = [
            mat(&[vec![2, 1], vec![1, 1]]),
            mat(&[vec![0, -1], vec![1, 0]]),
            mat(&[vec![1, 1, 0], vec![0, 1, 1], vec![0, 0, 1]]),
            mat(&[vec![3, -2, 5], vec![0, 1, 7], vec![2, 2, 2]]),
        ];
        for m in &samples {
            let p = m.char_poly();
            assert!(m.eval_poly(&p).is_zero(), "Cayley-Hamilton failed");
        }
    }

    #[test]
    fn min_poly_examples() {
        // Diagonalizable with distinct eigenvalues: min poly = char poly.
        let m = mat(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(m.min_poly().coeffs_i64(), vec![6, -5, 1]);
        // Jordan block: (x-1)^2.
        let m = mat(&[vec![1, 1], vec![0, 1]]);
        assert_eq!(m.min_poly().coeffs_i64(), vec![1, -2, 1]);
        // Identity 3x3: x - 1.
        assert_eq!(IntMatrix::identity(3).min_poly().coeffs_i64(), vec![-1, 1]);
    }

    #[test]
    fn diagonalizability() {
        assert!(IntMatrix::identity(2).is_diagonalizable());
        assert!(!mat(&[vec![1, 1], vec![0, 1]]).is_diagonalizable());
        assert!(mat(&[vec![2, 0], vec![0, 3]]).is_diagonalizable());
    }

    #[test]
    fn finite_order_examples() {
        assert_eq!(IntMatrix::identity(2).finite_order().unwrap(), Some(1));
        // Rotation by 90 degrees: order 4, verified by direct powering.
        let r = mat(&[vec![0, -1], vec![1, 0]]);
        assert_eq!(r.finite_order().unwrap(), Some(4));
        for j in 1..4u64 {
            assert!(!r.pow(j).is_identity());
        }
        assert!(r.pow(4).is_identity());
        // Unipotent: no finite order.
        assert_eq!(
            mat(&[vec![1, 1], vec![0, 1]]).finite_order().unwrap(),
            None
        );
        // Singular input is rejected.
        assert_eq!(
            mat(&[vec![1, 1], vec![1, 1]]).finite_order(),
            Err(IntMatError::Singular)
        );
    }

    #[test]
    fn unipotent_blocks_examples() {
        assert_eq!(
            IntMatrix::identity(3).unipotent_block_sizes().unwrap(),
            vec![1, 1, 1]
        );
        assert_eq!(
            mat(&[vec![1, 1], vec![0, 1]]).unipotent_block_sizes().unwrap(),
            vec![2]
        );
        let j3 = mat(&[vec![1, 1, 0], vec![0, 1, 1], vec![0, 0, 1]]);
        assert_eq!(j3.unipotent_block_sizes().unwrap(), vec![3]);
        // Mixed: rotation block + Jordan block; M^4 has blocks [2,1,1].
        let m = mat(&[
            vec![0, -1, 0, 0],
            vec![1, 0, 0, 0],
            vec![0, 0, 1, 1],
            vec![0, 0, 0, 1],
        ]);
        assert_eq!(m.unipotent_block_sizes().unwrap(), vec![2, 1, 1]);
    }

    #[test]
    fn block_sizes_invariant_under_conjugation() {
        let j3 = mat(&[vec![1, 1, 0], vec![0, 1, 1], vec![0, 0, 1]]);
        // Unimodular P.
        let p = mat(&[vec![1, 2, 0], vec![0, 1, 3], vec![0, 0, 1]]);
        let p_inv = p.inverse_unimodular().unwrap();
        let conj = p.mul(&j3).mul(&p_inv);
        assert_eq!(conj.unipotent_block_sizes().unwrap(), vec![3]);
    }

    #[test]
    fn inverse_unimodular_roundtrip() {
        let m = mat(&[vec![2, 1], vec![1, 1]]);
        let inv = m.inverse_unimodular().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(mat(&[vec![2, 0], vec![0, 1]]).inverse_unimodular().is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(IntMatrix::identity(4).rank(), 4);
        assert_eq!(mat(&[vec![1, 2], vec![2, 4]]).rank(), 1);
        assert_eq!(mat(&[vec![0, 0], vec![0, 0]]).rank(), 0);
    }

    proptest! {
        /// Cayley–Hamilton as a property over random small matrices,
        /// independently of the hand-picked samples.
        #[test]
        fn prop_cayley_hamilton(entries in proptest::collection::vec(-4i64..=4, 9)) {
            let rows: Vec<Vec<i64>> = entries.chunks(3).map(|c| c.to_vec()).collect();
            let m = mat(&rows);
            let p = m.char_poly();
            prop_assert!(m.eval_poly(&p).is_zero());
        }

        /// min_poly divides char_poly and annihilates the matrix.
        #[test]
        fn prop_min_poly_annihilates(entries in proptest::collection::vec(-3i64..=3, 9)) {
            let rows: Vec<Vec<i64>> = entries.chunks(3).map(|c| c.to_vec()).collect();
            let m = mat(&rows);
            let mp = m.min_poly();
            prop_assert!(m.eval_poly(&mp).is_zero());
            let cp = m.char_poly();
            let (_, rem) = cp.div_rem_monic(&mp);
            prop_assert!(rem.is_zero());
        }
    }
}
