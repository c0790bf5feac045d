//! Spectral classification of k-volume distortion for the groups
//! `Γ_M = ⟨x_1,…,x_m, t | [x_i,x_j], t x_i t⁻¹ = φ(x_i)⟩` defined by an
//! integer matrix `M`, together with an exact ℓ1-minimal-filling oracle on
//! cellular chain complexes that measures distortion at desk scale.
//!
//! The crate is organized as five layers:
//!
//! * [`numeric`]: dyadic rounding, certified rational intervals, interval ln.
//! * [`intmat`]: exact integer linear algebra, characteristic and minimal
//!   polynomials, cyclotomic detection, certified eigenvalue moduli.
//! * [`fclass`]: symbolic growth classes (`n^q`, `(n^k/W(n))^{1/(k-1)}`,
//!   `n·m^n`) with the standard `f ⪯ g` comparison, plus Lambert W.
//! * [`chains`]: cubical grid complexes, mapping-torus slab complexes, and
//!   an exact rational LP / branch-and-bound minimal-filling solver.
//! * [`classify`] / [`witness`]: the distortion classifier and the
//!   hard-cycle families used to measure predicted exponents.

pub mod chains;
pub mod classify;
pub mod fclass;
pub mod intmat;
pub mod numeric;
pub mod witness;

pub use classify::{ClassifyRequest, DistortionVerdict, Mode, Rigor};
pub use fclass::FnClass;
pub use intmat::{IntMatrix, IntPolynomial, SpectralProfile};
