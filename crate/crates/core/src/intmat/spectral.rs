//! Assembly of the full spectral profile of an integer matrix.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{IntMatError, IntMatrix, IntPolynomial, ModulusEntry, UnitCircleClass};
use crate::numeric::{rat_int, RatInterval};

/// Everything the distortion classifier needs to know about the spectrum
/// of M: certified eigenvalue moduli, |det|, diagonalizability, finite
/// order, and (in the all-on-circle case) the unipotent Jordan block sizes.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralProfile {
    /// |det M|.
    pub d_abs: BigInt,
    /// Certified moduli with multiplicities; multiplicities sum to m.
    pub moduli: Vec<ModulusEntry>,
    /// Number of eigenvalues off the unit circle, counted with multiplicity.
    pub n_off_circle: usize,
    /// Exact multiplicative order, when finite.
    pub finite_order: Option<u64>,
    pub diagonalizable: bool,
    /// Jordan block sizes of M^N (N the semisimple order), present exactly
    /// when all eigenvalues lie on the unit circle. Sorted descending.
    pub unipotent_block_sizes: Option<Vec<usize>>,
    /// Product of the cyclotomic factors of the characteristic polynomial.
    pub cyclotomic_part: IntPolynomial,
    pub dim: usize,
}

impl SpectralProfile {
    /// The moduli of the eigenvalues that are strictly off the circle.
    pub fn off_circle_entries(&self) -> Vec<&ModulusEntry> {
        self.moduli
            .iter()
            .filter(|e| e.class != UnitCircleClass::On)
            .collect()
    }

    /// True when every eigenvalue has |λ| = 1.
    pub fn all_on_circle(&self) -> bool {
        self.n_off_circle == 0
    }
}

/// Certified moduli of the roots of a monic integer polynomial.
///
/// The cyclotomic part is classified exactly (those roots all have
/// modulus 1); the cyclotomic-free remainder is isolated numerically with
/// a posteriori error bounds. By Kronecker's criterion a root of the
/// remainder straddling the circle at full precision is a genuine
/// borderline (Salem-type) and is reported as `AmbiguousSpectrum`.
pub fn eigenvalue_moduli(
    p: &IntPolynomial,
    precision: u32,
) -> Result<Vec<ModulusEntry>, IntMatError> {
    if !p.is_monic() {
        return Err(IntMatError::InvalidInput(
            "eigenvalue moduli require a monic polynomial".into(),
        ));
    }
    let precision = precision.max(32);
    let (cyclo_factors, remainder) = p.strip_cyclotomic()?;
    let mut entries = Vec::new();
    let cyclo_degree: usize = cyclo_factors
        .iter()
        .map(|(n, mult)| super::poly::cyclotomic(*n).degree() * mult)
        .sum();
    if cyclo_degree > 0 {
        entries.push(ModulusEntry {
            interval: RatInterval::point(rat_int(1)),
            multiplicity: cyclo_degree,
            class: UnitCircleClass::On,
        });
    }
    if remainder.degree() > 0 {
        entries.extend(super::roots::isolate_moduli(&remainder, precision)?);
    }
    entries.sort_by(|a, b| {
        a.interval
            .lo
            .cmp(&b.interval.lo)
            .then(a.interval.hi.cmp(&b.interval.hi))
    });
    debug_assert_eq!(
        entries.iter().map(|e| e.multiplicity).sum::<usize>(),
        p.degree()
    );
    Ok(entries)
}

/// Full spectral classification of M. Fails on singular input and
/// propagates `AmbiguousSpectrum` from the moduli layer.
pub fn spectral_profile(m: &IntMatrix, precision: u32) -> Result<SpectralProfile, IntMatError> {
    let char_poly = m.char_poly();
    let det = m.det();
    if det.is_zero() {
        return Err(IntMatError::Singular);
    }
    let (cyclo_factors, remainder) = char_poly.strip_cyclotomic()?;
    let mut cyclotomic_part = IntPolynomial::one();
    for (n, mult) in &cyclo_factors {
        for _ in 0..*mult {
            cyclotomic_part = cyclotomic_part.mul(&super::poly::cyclotomic(*n));
        }
    }
    let moduli = eigenvalue_moduli(&char_poly, precision)?;
    let n_off_circle = moduli
        .iter()
        .filter(|e| e.class != UnitCircleClass::On)
        .map(|e| e.multiplicity)
        .sum();
    let diagonalizable = m.is_diagonalizable();
    let finite_order = m.finite_order()?;
    let unipotent_block_sizes = if remainder.degree() == 0 {
        Some(m.unipotent_block_sizes()?)
    } else {
        None
    };
    Ok(SpectralProfile {
        d_abs: det.abs(),
        moduli,
        n_off_circle,
        finite_order,
        diagonalizable,
        unipotent_block_sizes,
        cyclotomic_part,
        dim: m.dim(),
    })
}
