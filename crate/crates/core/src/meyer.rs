//! Meyer wavelet profiles in frequency, and the wavelet in space.
//!
//! The 1-D system is built from the bump transition `g`:
//!
//! ```text
//! Phi(xi)   = (1/sqrt(2 pi)) cos(pi/2 g(3|xi|/(2 pi) - 1))
//! m_phi     = 2 pi-periodic extension of sqrt(2 pi) Phi(2 xi) from [-pi, pi)
//! psi_hat   = e^{i xi/2} m_phi(xi/2 + pi) Phi(xi/2)
//! ```
//!
//! `Phi` is identically `1/sqrt(2 pi)` inside [-2pi/3, 2pi/3], vanishes outside
//! (-4pi/3, 4pi/3), and satisfies the partition identity
//! `Phi(xi)^2 + Phi(xi - 2 pi)^2 = 1/(2 pi)` on [0, 2 pi]; `psi_hat` is
//! supported in the annulus [2pi/3, 8pi/3] in |xi|. D-dimensional generators
//! are coordinate tensor products selected by a 0/1 label per axis.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::bump::BumpProfile;
use crate::quad::{integrate, QuadError};

/// Inner edge of the flat region of `Phi`.
pub const PHI_FLAT_EDGE: f64 = 2.0 * PI / 3.0;
/// Outer support edge of `Phi`.
pub const PHI_SUPPORT_EDGE: f64 = 4.0 * PI / 3.0;
/// Inner support edge of `psi_hat` (in |xi|).
pub const PSI_SUPPORT_INNER: f64 = 2.0 * PI / 3.0;
/// Outer support edge of `psi_hat` (in |xi|).
pub const PSI_SUPPORT_OUTER: f64 = 8.0 * PI / 3.0;

const INV_SQRT_2PI: f64 = 0.3989422804014327; // 1/sqrt(2 pi)
const SQRT_2PI: f64 = 2.5066282746310002;

#[derive(Debug, Clone, thiserror::Error)]
pub enum MeyerError {
    #[error("dimension {0} unsupported (this build handles 1 and 2)")]
    BadDimension(usize),
    #[error("tensor label has dimension {label} but system has dimension {system}")]
    LabelDimension { label: usize, system: usize },
    #[error(transparent)]
    Quad(#[from] QuadError),
}

/// Axis selector for a D-dimensional tensor generator.
///
/// Bit `l` set means the mother profile `psi_hat` acts on axis `l`; clear
/// means the father profile `Phi`. The all-zero label is the father generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TensorLabel {
    bits: u8,
    dim: u8,
}

impl TensorLabel {
    pub fn new(bits: u8, dim: usize) -> Result<Self, MeyerError> {
        if dim == 0 || dim > 2 {
            return Err(MeyerError::BadDimension(dim));
        }
        if usize::from(bits) >= (1usize << dim) {
            return Err(MeyerError::LabelDimension {
                label: bits.count_ones() as usize,
                system: dim,
            });
        }
        Ok(Self {
            bits,
            dim: dim as u8,
        })
    }

    pub fn father(dim: usize) -> Self {
        Self::new(0, dim).expect("father label")
    }

    /// All mother labels for the dimension, in increasing bit order.
    pub fn mothers(dim: usize) -> impl Iterator<Item = TensorLabel> {
        (1..(1u8 << dim)).map(move |bits| TensorLabel {
            bits,
            dim: dim as u8,
        })
    }

    pub fn is_father(&self) -> bool {
        self.bits == 0
    }

    /// Whether axis `l` carries the mother profile.
    pub fn axis_is_mother(&self, l: usize) -> bool {
        (self.bits >> l) & 1 == 1
    }

    pub fn bits(&self) -> u8 {
        self.bits
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }
}

/// The 1-D Meyer profiles plus the tensor-product D-dimensional generators.
///
/// Immutable after construction; all evaluations are read-only and safe to
/// call from any number of threads.
#[derive(Debug, Clone)]
pub struct MeyerSystem {
    bump: BumpProfile,
    dimension: usize,
}

impl MeyerSystem {
    pub fn new(dimension: usize) -> Result<Self, MeyerError> {
        let bump = BumpProfile::new()?;
        Self::from_bump(bump, dimension)
    }

    pub fn with_accuracy(
        dimension: usize,
        node_count: usize,
        quad_tol: f64,
    ) -> Result<Self, MeyerError> {
        let bump = BumpProfile::with_accuracy(node_count, quad_tol)?;
        Self::from_bump(bump, dimension)
    }

    pub fn from_bump(bump: BumpProfile, dimension: usize) -> Result<Self, MeyerError> {
        if dimension == 0 || dimension > 2 {
            return Err(MeyerError::BadDimension(dimension));
        }
        Ok(Self { bump, dimension })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn bump(&self) -> &BumpProfile {
        &self.bump
    }

    pub fn quad_tol(&self) -> f64 {
        self.bump.quad_tol()
    }

    /// Frequency profile `Phi`. Even; exactly flat inside [-2pi/3, 2pi/3];
    /// exactly zero for |xi| >= 4pi/3.
    pub fn phi_hat(&self, xi: f64) -> f64 {
        let a = xi.abs();
        if a <= PHI_FLAT_EDGE {
            return INV_SQRT_2PI;
        }
        if a >= PHI_SUPPORT_EDGE {
            return 0.0;
        }
        let t = 3.0 * a / (2.0 * PI) - 1.0;
        INV_SQRT_2PI * (0.5 * PI * self.bump.eval(t)).cos()
    }

    /// The 2 pi-periodic low-pass filter, `sqrt(2 pi) Phi(2 xi)` on [-pi, pi).
    pub fn m_phi(&self, xi: f64) -> f64 {
        let reduced = xi - 2.0 * PI * ((xi + PI) / (2.0 * PI)).floor();
        SQRT_2PI * self.phi_hat(2.0 * reduced)
    }

    /// Fourier transform of the mother wavelet.
    pub fn psi_hat(&self, xi: f64) -> Complex64 {
        let modulus = self.psi_hat_modulus(xi);
        if modulus == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(modulus, 0.5 * xi)
    }

    /// `|psi_hat|`, which is even and supported in [2pi/3, 8pi/3] in |xi|.
    pub fn psi_hat_modulus(&self, xi: f64) -> f64 {
        let a = xi.abs();
        if a <= PSI_SUPPORT_INNER || a >= PSI_SUPPORT_OUTER {
            return 0.0;
        }
        self.m_phi(0.5 * xi + PI) * self.phi_hat(0.5 * xi)
    }

    /// The father wavelet in space, by quadrature over the support of `Phi`.
    pub fn phi_space(&self, x: f64, tol: f64) -> Result<f64, QuadError> {
        let r = integrate(
            |xi| self.phi_hat(xi) * (x * xi).cos(),
            0.0,
            PHI_SUPPORT_EDGE,
            tol,
        )?;
        Ok(2.0 * INV_SQRT_2PI * r.value)
    }

    /// The mother wavelet in space:
    /// `psi(x) = (2/sqrt(2 pi)) Int_{2pi/3}^{8pi/3} cos((x + 1/2) xi) a(xi) dxi`
    /// with `a(xi) = m_phi(xi/2 + pi) Phi(xi/2) >= 0`. Symmetric about -1/2.
    pub fn psi_space(&self, x: f64, tol: f64) -> Result<f64, QuadError> {
        let r = integrate(
            |xi| self.psi_hat_modulus(xi) * ((x + 0.5) * xi).cos(),
            PSI_SUPPORT_INNER,
            PSI_SUPPORT_OUTER,
            tol,
        )?;
        Ok(2.0 * INV_SQRT_2PI * r.value)
    }

    /// `psi(0)` against its closed-form lower bound.
    ///
    /// The bound controls the magnitude: `|psi(0)| >= (sqrt(3)/pi) cos(pi/2 g(1/2))`,
    /// with the signed value also reported (it is negative for this profile;
    /// the annulus weight sits where `cos(xi/2) < 0`).
    pub fn psi_zero_report(&self) -> Result<PsiZeroReport, QuadError> {
        let tol = self.quad_tol().max(1e-12);
        let psi_zero = self.psi_space(0.0, tol)?;
        let g_half = self.bump.eval(0.5);
        let bound = (3.0f64.sqrt() / PI) * (0.5 * PI * g_half).cos();
        Ok(PsiZeroReport {
            psi_zero,
            magnitude: psi_zero.abs(),
            lower_bound: bound,
            margin: psi_zero.abs() - bound,
            quad_tol: tol,
        })
    }

    /// Tensor generator in frequency: per axis, `Phi` where the label bit is
    /// clear and `psi_hat` where it is set.
    pub fn tensor_psi_hat(&self, label: TensorLabel, xi: &[f64]) -> Result<Complex64, MeyerError> {
        if label.dim() != self.dimension || xi.len() != self.dimension {
            return Err(MeyerError::LabelDimension {
                label: label.dim(),
                system: self.dimension,
            });
        }
        let mut acc = Complex64::new(1.0, 0.0);
        for (l, &x) in xi.iter().enumerate() {
            if label.axis_is_mother(l) {
                acc *= self.psi_hat(x);
            } else {
                acc *= self.phi_hat(x);
            }
            if acc.norm_sqr() == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
        }
        Ok(acc)
    }
}

/// Result of the `psi(0)` bound check.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct PsiZeroReport {
    /// Signed value of the wavelet at the origin.
    pub psi_zero: f64,
    /// `|psi(0)|`, the quantity the lower bound controls.
    pub magnitude: f64,
    /// `(sqrt(3)/pi) cos(pi/2 g(1/2))`.
    pub lower_bound: f64,
    /// `magnitude - lower_bound`; nonnegative up to quadrature error.
    pub margin: f64,
    pub quad_tol: f64,
}
