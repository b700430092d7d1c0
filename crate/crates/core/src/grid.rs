//! Periodic band-limited discretization.
//!
//! Functions live on the torus of period `L = 2^P` per axis, sampled at
//! `N = 2^G` points per axis. The spectral form stores Fourier coefficients
//! `c_m` with frequencies `xi_m = 2 pi m / L`, `m` in `[-N/2, N/2)` per axis,
//! in FFT bin order. For band-limited data the two forms are exactly
//! equivalent, and inner products computed on either side agree to rounding.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::FftPlanner;

/// Grid geometry plus the wavelet scale window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct GridSpec {
    /// Spatial dimension, 1 or 2.
    pub dimension: usize,
    /// Period exponent: period `L = 2^period_exp`.
    pub period_exp: u32,
    /// Grid exponent: `N = 2^grid_exp` samples per axis.
    pub grid_exp: u32,
    /// Coarsest mother scale.
    pub j_lo: i32,
    /// Finest mother scale.
    pub j_hi: i32,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum GridError {
    #[error("dimension {0} unsupported (must be 1 or 2)")]
    BadDimension(usize),
    #[error("empty or inverted scale window [{j_lo}, {j_hi}]")]
    EmptyWindow { j_lo: i32, j_hi: i32 },
    #[error(
        "finest scale {j_hi} exceeds the Nyquist guard (max {max} for G={grid_exp}, P={period_exp})"
    )]
    ScaleTooFine {
        j_hi: i32,
        max: i32,
        grid_exp: u32,
        period_exp: u32,
    },
    #[error("coarsest scale {j_lo} below the representable floor {min} for P={period_exp}")]
    ScaleTooCoarse {
        j_lo: i32,
        min: i32,
        period_exp: u32,
    },
    #[error("sample buffer has {got} entries, spec wants {want}")]
    SampleCount { got: usize, want: usize },
    #[error("grid specs differ: {0:?} vs {1:?}")]
    SpecMismatch(Box<GridSpec>, Box<GridSpec>),
    #[error("input must have zero mean for this operation: |mean| = {0:.3e}")]
    NonzeroMean(f64),
}

impl GridSpec {
    pub fn new(
        dimension: usize,
        period_exp: u32,
        grid_exp: u32,
        j_lo: i32,
        j_hi: i32,
    ) -> Result<Self, GridError> {
        if dimension == 0 || dimension > 2 {
            return Err(GridError::BadDimension(dimension));
        }
        if j_lo > j_hi {
            return Err(GridError::EmptyWindow { j_lo, j_hi });
        }
        // Nyquist guard: the finest mother band must clear pi N / L.
        let max_hi = grid_exp as i32 - period_exp as i32 - 2;
        if j_hi > max_hi {
            return Err(GridError::ScaleTooFine {
                j_hi,
                max: max_hi,
                grid_exp,
                period_exp,
            });
        }
        // Coarsest band must still hold a nonzero lattice frequency.
        let min_lo = -(period_exp as i32) + 1;
        if j_lo < min_lo {
            return Err(GridError::ScaleTooCoarse {
                j_lo,
                min: min_lo,
                period_exp,
            });
        }
        Ok(Self {
            dimension,
            period_exp,
            grid_exp,
            j_lo,
            j_hi,
        })
    }

    /// Full representable window for the geometry.
    pub fn with_default_window(
        dimension: usize,
        period_exp: u32,
        grid_exp: u32,
    ) -> Result<Self, GridError> {
        let j_lo = -(period_exp as i32) + 1;
        let j_hi = grid_exp as i32 - period_exp as i32 - 2;
        Self::new(dimension, period_exp, grid_exp, j_lo, j_hi)
    }

    /// Desk-scale 1-D default: L = 2^5, N = 2^14.
    pub fn default_1d() -> Self {
        Self::with_default_window(1, 5, 14).expect("default 1-D spec")
    }

    /// Desk-scale 2-D default: L = 2^3, N = 2^9 per axis.
    pub fn default_2d() -> Self {
        Self::with_default_window(2, 3, 9).expect("default 2-D spec")
    }

    pub fn period(&self) -> f64 {
        (1u64 << self.period_exp) as f64
    }

    pub fn samples_per_axis(&self) -> usize {
        1usize << self.grid_exp
    }

    pub fn total_samples(&self) -> usize {
        self.samples_per_axis().pow(self.dimension as u32)
    }

    /// Number of wavelet translates per axis at scale `j` (`L 2^j`).
    pub fn translates_at(&self, j: i32) -> usize {
        let e = self.period_exp as i32 + j;
        debug_assert!(e >= 0, "scale {j} below representable floor");
        1usize << e
    }

    /// Cell volume of the sampling grid, `(L/N)^D`.
    pub fn cell_volume(&self) -> f64 {
        (self.period() / self.samples_per_axis() as f64).powi(self.dimension as i32)
    }

    /// Torus volume `L^D`.
    pub fn volume(&self) -> f64 {
        self.period().powi(self.dimension as i32)
    }

    /// Signed frequency index for FFT bin `idx` on one axis.
    pub fn signed_index(&self, idx: usize) -> i64 {
        let n = self.samples_per_axis();
        if idx < n / 2 {
            idx as i64
        } else {
            idx as i64 - n as i64
        }
    }

    /// Frequency `xi = 2 pi m / L` for FFT bin `idx` on one axis.
    pub fn frequency(&self, idx: usize) -> f64 {
        2.0 * std::f64::consts::PI * self.signed_index(idx) as f64 / self.period()
    }

    /// Decompose a flat index into per-axis bin indices.
    pub fn unflatten(&self, flat: usize) -> [usize; 2] {
        let n = self.samples_per_axis();
        match self.dimension {
            1 => [flat, 0],
            _ => [flat / n, flat % n],
        }
    }

    pub fn flatten(&self, idx: [usize; 2]) -> usize {
        let n = self.samples_per_axis();
        match self.dimension {
            1 => idx[0],
            _ => idx[0] * n + idx[1],
        }
    }

    /// Largest |m| per axis fully covered by the scale window (the region
    /// where father-at-j_lo plus mothers through j_hi resolve the identity).
    pub fn covered_bin_limit(&self) -> i64 {
        let l = 1i64 << self.period_exp;
        // |xi| <= (2 pi / 3) 2^{j_hi + 1}  <=>  |m| <= L 2^{j_hi + 1} / 3
        let e = self.j_hi + 1;
        if e >= 0 {
            (l << e) / 3
        } else {
            (l >> (-e)) / 3
        }
    }
}

/// Spatial samples on the torus, row-major over axes.
#[derive(Debug, Clone)]
pub struct GridFunction {
    spec: GridSpec,
    samples: Vec<Complex64>,
}

/// Fourier coefficients `c_m`, stored in FFT bin order (same layout).
#[derive(Debug, Clone)]
pub struct SpectralFunction {
    spec: GridSpec,
    coeffs: Vec<Complex64>,
}

impl GridFunction {
    pub fn zeros(spec: GridSpec) -> Self {
        Self {
            samples: vec![Complex64::new(0.0, 0.0); spec.total_samples()],
            spec,
        }
    }

    pub fn from_samples(spec: GridSpec, samples: Vec<Complex64>) -> Result<Self, GridError> {
        if samples.len() != spec.total_samples() {
            return Err(GridError::SampleCount {
                got: samples.len(),
                want: spec.total_samples(),
            });
        }
        Ok(Self { spec, samples })
    }

    /// Sample a function of the spatial coordinate (coordinates in [0, L)).
    pub fn sample_with(spec: GridSpec, f: impl Fn(&[f64]) -> Complex64) -> Self {
        let n = spec.samples_per_axis();
        let step = spec.period() / n as f64;
        let mut samples = Vec::with_capacity(spec.total_samples());
        match spec.dimension {
            1 => {
                for i in 0..n {
                    samples.push(f(&[i as f64 * step]));
                }
            }
            _ => {
                for i0 in 0..n {
                    let x0 = i0 as f64 * step;
                    for i1 in 0..n {
                        samples.push(f(&[x0, i1 as f64 * step]));
                    }
                }
            }
        }
        Self { spec, samples }
    }

    /// Tensor product of per-axis sample vectors (each of length N).
    pub fn from_axis_factors(spec: GridSpec, factors: &[Vec<Complex64>]) -> Result<Self, GridError> {
        let n = spec.samples_per_axis();
        if factors.len() != spec.dimension || factors.iter().any(|f| f.len() != n) {
            return Err(GridError::SampleCount {
                got: factors.iter().map(|f| f.len()).sum(),
                want: spec.dimension * n,
            });
        }
        let mut samples = Vec::with_capacity(spec.total_samples());
        match spec.dimension {
            1 => samples.extend_from_slice(&factors[0]),
            _ => {
                for &a in &factors[0] {
                    for &b in &factors[1] {
                        samples.push(a * b);
                    }
                }
            }
        }
        Ok(Self { spec, samples })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    pub fn to_spectral(&self) -> SpectralFunction {
        let mut coeffs = self.samples.clone();
        fft_nd(&mut coeffs, &self.spec, FftDirection::Forward);
        let scale = 1.0 / self.spec.total_samples() as f64;
        for c in &mut coeffs {
            *c *= scale;
        }
        SpectralFunction {
            spec: self.spec,
            coeffs,
        }
    }

    pub fn mean(&self) -> Complex64 {
        let sum: Complex64 = self.samples.iter().sum();
        sum / self.samples.len() as f64
    }

    /// Max |imaginary part| over samples; a real-input sanity probe.
    pub fn max_imag(&self) -> f64 {
        self.samples.iter().map(|c| c.im.abs()).fold(0.0, f64::max)
    }
}

impl SpectralFunction {
    pub fn zeros(spec: GridSpec) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); spec.total_samples()],
            spec,
        }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn to_grid(&self) -> GridFunction {
        let mut samples = self.coeffs.clone();
        fft_nd(&mut samples, &self.spec, FftDirection::Inverse);
        GridFunction {
            spec: self.spec,
            samples,
        }
    }

    /// Zero the DC bin (work modulo constants).
    pub fn zero_dc(&mut self) {
        self.coeffs[0] = Complex64::new(0.0, 0.0);
    }

    pub fn dc(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// `L^D sum |c_m|^2`, the squared L2 norm over the torus.
    pub fn l2_norm_sqr(&self) -> f64 {
        self.spec.volume() * self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>()
    }

    /// `L^D sum c_m conj(d_m)`, the torus inner product.
    pub fn inner(&self, other: &SpectralFunction) -> Result<Complex64, GridError> {
        if self.spec != other.spec {
            return Err(GridError::SpecMismatch(
                Box::new(self.spec),
                Box::new(other.spec),
            ));
        }
        let sum: Complex64 = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b.conj())
            .sum();
        Ok(sum * self.spec.volume())
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum FftDirection {
    Forward,
    Inverse,
}

/// In-place D-dimensional FFT (unnormalized in both directions).
pub(crate) fn fft_nd(data: &mut [Complex64], spec: &GridSpec, dir: FftDirection) {
    let n = spec.samples_per_axis();
    let mut planner = FftPlanner::new();
    let fft = match dir {
        FftDirection::Forward => planner.plan_fft_forward(n),
        FftDirection::Inverse => planner.plan_fft_inverse(n),
    };
    match spec.dimension {
        1 => fft.process(data),
        _ => {
            // rows (contiguous)
            for row in data.chunks_exact_mut(n) {
                fft.process(row);
            }
            // columns (strided)
            let mut scratch = vec![Complex64::new(0.0, 0.0); n];
            for col in 0..n {
                for (i, s) in scratch.iter_mut().enumerate() {
                    *s = data[i * n + col];
                }
                fft.process(&mut scratch);
                for (i, s) in scratch.iter().enumerate() {
                    data[i * n + col] = *s;
                }
            }
        }
    }
}

/// Random real zero-mean band-limited function whose spectrum lies inside the
/// frequency box fully covered by the spec's scale window.
///
/// The draw order is a fixed function of the spec, so a given RNG stream
/// always produces the same function.
pub fn random_band_limited(spec: &GridSpec, rng: &mut impl Rng) -> GridFunction {
    let mut s = SpectralFunction::zeros(*spec);
    let n = spec.samples_per_axis();
    let mmax = spec.covered_bin_limit();
    let total = spec.total_samples();
    for flat in 0..total {
        let idx = spec.unflatten(flat);
        let m: Vec<i64> = (0..spec.dimension)
            .map(|l| spec.signed_index(idx[l]))
            .collect();
        if m.iter().all(|&v| v == 0) || m.iter().any(|&v| v.abs() > mmax) {
            continue;
        }
        // fill each conjugate pair once, from its canonical member
        let canonical = match m.iter().find(|&&v| v != 0) {
            Some(&first) => first > 0,
            None => false,
        };
        if !canonical {
            continue;
        }
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        let v = Complex64::new(re, im);
        let mirror: usize = {
            let mut midx = [0usize; 2];
            for l in 0..spec.dimension {
                midx[l] = (n - idx[l]) % n;
            }
            spec.flatten(midx)
        };
        s.coeffs_mut()[flat] = v;
        s.coeffs_mut()[mirror] = v.conj();
    }
    s.to_grid()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn spec_validation() {
        assert!(GridSpec::new(1, 5, 14, -4, 7).is_ok());
        assert!(matches!(
            GridSpec::new(3, 5, 14, -4, 7),
            Err(GridError::BadDimension(3))
        ));
        assert!(matches!(
            GridSpec::new(1, 5, 14, 3, 2),
            Err(GridError::EmptyWindow { .. })
        ));
        assert!(matches!(
            GridSpec::new(1, 5, 14, -4, 8),
            Err(GridError::ScaleTooFine { .. })
        ));
        assert!(matches!(
            GridSpec::new(1, 5, 14, -5, 7),
            Err(GridError::ScaleTooCoarse { .. })
        ));
    }

    #[test]
    fn default_windows() {
        let d1 = GridSpec::default_1d();
        assert_eq!((d1.j_lo, d1.j_hi), (-4, 7));
        let d2 = GridSpec::default_2d();
        assert_eq!((d2.j_lo, d2.j_hi), (-2, 4));
    }

    #[test]
    fn fft_round_trip_1d_2d() {
        for spec in [
            GridSpec::with_default_window(1, 3, 8).unwrap(),
            GridSpec::with_default_window(2, 2, 5).unwrap(),
        ] {
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            let f = random_band_limited(&spec, &mut rng);
            let back = f.to_spectral().to_grid();
            let mut worst = 0.0f64;
            for (a, b) in f.samples().iter().zip(back.samples()) {
                worst = worst.max((a - b).norm());
            }
            assert!(worst < 1e-12, "round trip err {worst:e}");
        }
    }

    #[test]
    fn random_functions_are_real_and_zero_mean() {
        let spec = GridSpec::default_1d();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let f = random_band_limited(&spec, &mut rng);
        assert!(f.max_imag() < 1e-12);
        assert!(f.mean().norm() < 1e-13);
    }

    #[test]
    fn spectral_parseval_against_grid_sum() {
        let spec = GridSpec::with_default_window(2, 2, 6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = random_band_limited(&spec, &mut rng);
        let grid_l2: f64 =
            f.samples().iter().map(|c| c.norm_sqr()).sum::<f64>() * spec.cell_volume();
        let spec_l2 = f.to_spectral().l2_norm_sqr();
        assert_abs_diff_eq!(grid_l2, spec_l2, epsilon = 1e-10 * grid_l2.max(1.0));
    }

    #[test]
    fn determinism_same_seed_same_function() {
        let spec = GridSpec::default_1d();
        let a = random_band_limited(&spec, &mut ChaCha8Rng::seed_from_u64(7));
        let b = random_band_limited(&spec, &mut ChaCha8Rng::seed_from_u64(7));
        assert_eq!(a.samples(), b.samples());
    }

    #[test]
    fn tensor_factor_constructor() {
        let spec = GridSpec::with_default_window(2, 2, 5).unwrap();
        let n = spec.samples_per_axis();
        let fx: Vec<Complex64> = (0..n).map(|i| Complex64::new(i as f64, 0.0)).collect();
        let fy: Vec<Complex64> = (0..n).map(|i| Complex64::new(1.0 + i as f64, 0.0)).collect();
        let g = GridFunction::from_axis_factors(spec, &[fx.clone(), fy.clone()]).unwrap();
        for i0 in (0..n).step_by(7) {
            for i1 in (0..n).step_by(5) {
                let got = g.samples()[spec.flatten([i0, i1])];
                assert_abs_diff_eq!(got.re, fx[i0].re * fy[i1].re, epsilon = 1e-12);
            }
        }
    }
}
