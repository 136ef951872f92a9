//! Bracket-product calculus for sampled signals on rational lattices, and the
//! Weyl-Heisenberg (Gabor) frame analysis built on top of it.
//!
//! The library is organized around one structural idea: signals live on a
//! grid with step `dt = 1/L` on which both the shift `a = p/L` and the
//! modulation period `1/b = q/L` are exact integer multiples of `dt`. Lattice
//! combinatorics (translation, periodization, modulation aliasing) stay
//! exact; floating point only carries sample values and quadrature.
//!
//! Modules:
//! - [`signal`]: grids, sampled and periodic signals, the unitary operators.
//! - [`bracket`]: the pointwise (bracket) inner product, norms, normalization.
//! - [`ortho`]: bracket orthogonality, Gram-Schmidt, projections, representers.
//! - [`gabor`]: frame operators (naive and fiberized), frame identities,
//!   tightness, Riesz/spectral/a-frame bounds, completeness, reconstruction.
//! - [`window`]: built-in window generators.
//! - [`io`]: JSON wire formats.

pub mod bracket;
pub mod error;
pub mod gabor;
pub mod io;
mod linalg;
pub mod ortho;
pub mod signal;
pub mod window;

pub use error::{Error, Result};
pub use signal::{LatticeGrid, ModUnit, Period, PeriodicSignal, SampledSignal, ShiftUnit};
