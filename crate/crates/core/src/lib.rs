//! Symmetric three-term recursions and their low-rank deformations.
//!
//! A [`CoefficientSequence`] `(a_n, b_n)` defines a Jacobi matrix, its
//! orthogonal polynomials of the first and second kind, the resolvent element
//! `G00(z)` and the spectral density `rho(x)`. The [`deformation`] module
//! modifies the leading coefficients (`a_0`, or the leading 2×2 block) and
//! transports polynomials, resolvent and density to the deformed operator.
//! [`chebyshev`] holds closed forms for `a_n = 0, b_n = 1/2`; [`spectra`]
//! works with finite truncations.

pub mod chebyshev;
pub mod deformation;
pub mod error;
pub mod interp;
pub mod recursion;
pub mod resolvent;
pub mod sequence;
pub mod spectra;

pub use num_complex::Complex64;

pub use deformation::{Deformation, DeformationOne, DeformationThree};
pub use error::{Error, Result};
pub use recursion::{PolyVector, Polynomials, TransferMatrix};
pub use resolvent::{DensityGrid, DensityMethod, ResolventOptions, Tail};
pub use sequence::{CoefficientSequence, Family, SequenceKind};
pub use spectra::{FiniteRatioOptions, TridiagonalMatrix};
