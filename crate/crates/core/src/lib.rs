//! Meyer wavelet systems on periodic grids, Riesz transforms as exact
//! frequency multipliers, and the Triebel-Lizorkin-type norms and window
//! functionals built from wavelet coefficients, with scripted experiments
//! that exercise the norm-equivalence and counterexample constructions at
//! desk scale.
//!
//! Layout:
//!
//! * [`quad`] -- adaptive Gauss-Kronrod quadrature.
//! * [`bump`] -- the smooth transition function seeding the profiles.
//! * [`meyer`] -- the 1-D profiles and D-dimensional tensor generators.
//! * [`grid`] -- periodic sampling, spectra, and random band-limited input.
//! * [`wavelet`] -- analysis/synthesis, projections, truncation slices.
//! * [`riesz`] -- the multiplier transforms and their operator identities.
//! * [`norms`] -- grid norms, the coefficient-side norms, window functionals.
//! * [`daubechies`] -- compactly supported scaling functions by cascade.
//! * [`experiments`] -- reproducible counterexample and equivalence scans.
//! * [`verify`] -- the structural invariant suite.
//! * [`io`] -- the grid binary format and the coefficient CSV.

pub mod bump;
pub mod daubechies;
pub mod experiments;
pub mod grid;
pub mod io;
pub mod meyer;
pub mod norms;
pub mod quad;
pub mod riesz;
pub mod stats;
pub mod verify;
pub mod wavelet;

pub use grid::{GridFunction, GridSpec, SpectralFunction};
pub use meyer::{MeyerSystem, TensorLabel};
pub use norms::{NormKind, NormReport};
pub use riesz::RieszComponent;
pub use wavelet::{CoefficientField, WaveletBasis, WaveletIndex};

/// Report schema tag carried by every JSON artifact this workspace emits.
pub const REPORT_SCHEMA: &str = "tlwavelab/1";
