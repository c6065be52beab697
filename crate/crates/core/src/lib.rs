//! Exact arithmetic for Diophantine approximation on missing-digit sets in
//! the formal Laurent series field F_p((1/X)).
//!
//! The crate is organised bottom-up:
//!
//! * [`algebra`] — the prime field F_p, polynomials F_p[X], reduced rational
//!   functions, and the degree absolute value.
//! * [`laurent`] — truncated Laurent series with explicit precision, lazy
//!   digit expansion of rational functions, and digit-alphabet membership.
//! * [`cfrac`] — continued fractions over F_p(X) and F_p((1/X)):
//!   Euclidean expansion, convergents, the ultrametric error identity, and
//!   the folding transform.
//! * [`mds`] — missing-digit sets MDS(A) as exact cylinder-set algebra with
//!   the Hausdorff-gamma measure, plus digit-restricted polynomial families.
//! * [`khintchine`] — the approximation-set experiment suite: exact measures
//!   of the sets A_n*, quasi-independence, Borel–Cantelli ratios, series
//!   tests, and the theta transform.
//! * [`exponent`] — irrationality exponents: folding schedules, iterated
//!   constructions with prescribed exponent, verification windows, and the
//!   factorial-gap element.
//!
//! All measures and magnitudes are exact: rationals are `num::BigRational`,
//! absolute values are integer exponents of p. No floating point enters any
//! identity; floats appear only as reporting annotations and in explicitly
//! guarded rounding paths.

pub mod algebra;
pub mod cfrac;
pub mod exponent;
pub mod khintchine;
pub mod laurent;
pub mod mds;

pub use algebra::{FieldElement, Magnitude, Poly, RatFun};
pub use cfrac::{CFrac, ConvergentTable};
pub use laurent::{DigitStream, LaurentTrunc};
pub use mds::{Cylinder, CylinderSet, MdsConfig};
