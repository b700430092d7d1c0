//! Riesz transforms as exact frequency multipliers.
//!
//! `R_ell` multiplies Fourier coefficients by `-i xi_ell / |xi|`; the DC bin
//! maps to zero because all the norms here live modulo constants. `R_0` is
//! the identity. Everything in this module is a pure function of immutable
//! inputs and can run concurrently without coordination.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::grid::{GridError, GridFunction, SpectralFunction};
use crate::meyer::TensorLabel;
use crate::norms::f01q_norm;
use crate::stats::RatioStats;
use crate::wavelet::{WaveletBasis, WaveletError, WaveletIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RieszComponent(usize);

#[derive(Debug, Clone, thiserror::Error)]
pub enum RieszError {
    #[error("component {ell} out of range for dimension {dim} (0 = identity, 1..=D)")]
    BadComponent { ell: usize, dim: usize },
    #[error(transparent)]
    Grid(#[from] GridError),
}

impl RieszComponent {
    /// `ell = 0` is the identity; `1..=dim` are the coordinate transforms.
    pub fn new(ell: usize, dim: usize) -> Result<Self, RieszError> {
        if ell > dim {
            return Err(RieszError::BadComponent { ell, dim });
        }
        Ok(Self(ell))
    }

    pub fn index(&self) -> usize {
        self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0 == 0
    }
}

/// Apply the multiplier in place on Fourier coefficients.
pub fn riesz_apply_spectral(ell: RieszComponent, s: &mut SpectralFunction) {
    if ell.is_identity() {
        return;
    }
    let spec = *s.spec();
    let axis = ell.index() - 1;
    let total = spec.total_samples();
    for flat in 0..total {
        let v = s.coeffs()[flat];
        if v.norm_sqr() == 0.0 {
            continue;
        }
        let idx = spec.unflatten(flat);
        let mut norm_sq = 0.0;
        let mut xi_axis = 0.0;
        for (l, &bin) in idx.iter().enumerate().take(spec.dimension) {
            let xi = spec.frequency(bin);
            norm_sq += xi * xi;
            if l == axis {
                xi_axis = xi;
            }
        }
        let coeff = if norm_sq == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, -xi_axis / norm_sq.sqrt())
        };
        s.coeffs_mut()[flat] = v * coeff;
    }
}

/// `R_ell f` on spatial samples.
pub fn riesz_apply(ell: RieszComponent, f: &GridFunction) -> GridFunction {
    if ell.is_identity() {
        return f.clone();
    }
    let mut s = f.to_spectral();
    riesz_apply_spectral(ell, &mut s);
    s.to_grid()
}

/// `sum_ell R_ell^2 f`, which equals `-f` for zero-mean input.
///
/// Nonzero-mean input is rejected: the constant mode is annihilated by the
/// multiplier, so the identity cannot hold on it.
pub fn riesz_square_sum(f: &GridFunction) -> Result<GridFunction, RieszError> {
    let spec = *f.spec();
    let s = f.to_spectral();
    let scale = f
        .samples()
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max)
        .max(1e-300);
    let mean = s.dc().norm();
    if mean > 1e-12 * scale {
        return Err(RieszError::Grid(GridError::NonzeroMean(mean)));
    }
    let mut acc = SpectralFunction::zeros(spec);
    for ell in 1..=spec.dimension {
        let comp = RieszComponent::new(ell, spec.dimension)?;
        let mut t = s.clone();
        riesz_apply_spectral(comp, &mut t);
        riesz_apply_spectral(comp, &mut t);
        for (a, b) in acc.coeffs_mut().iter_mut().zip(t.coeffs()) {
            *a += b;
        }
    }
    Ok(acc.to_grid())
}

/// Max of `|(R_ell psi_{j,k}, psi_{jt,kt})|` over a deterministic sample of
/// labels, translations, and components.
pub fn near_diagonal_gram(
    basis: &WaveletBasis,
    j: i32,
    jt: i32,
    sample_count: usize,
    seed: u64,
) -> Result<f64, WaveletError> {
    use rand::Rng;
    let spec = *basis.spec();
    let d = spec.dimension;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels: Vec<TensorLabel> = TensorLabel::mothers(d).collect();
    let mj = spec.translates_at(j) as u32;
    let mjt = spec.translates_at(jt) as u32;
    let mut worst = 0.0f64;
    for _ in 0..sample_count {
        let la = labels[rng.gen_range(0..labels.len())];
        let lb = labels[rng.gen_range(0..labels.len())];
        let mut ka = [0u32; 2];
        let mut kb = [0u32; 2];
        for l in 0..d {
            ka[l] = rng.gen_range(0..mj);
            kb[l] = rng.gen_range(0..mjt);
        }
        let ell = rng.gen_range(1..=d);
        let a = WaveletIndex::new(la, j, ka);
        let b = WaveletIndex::new(lb, jt, kb);
        let g = basis.gram_inner(a, b, Some(ell))?;
        worst = worst.max(g.norm());
    }
    Ok(worst)
}

/// Empirical distribution of `||R_ell f||_{F^0_{1,q}} / ||f||_{F^0_{1,q}}`
/// over seeded random band-limited inputs.
pub fn riesz_bounded_ratio(
    basis: &WaveletBasis,
    q: f64,
    trials: usize,
    seed: u64,
) -> Result<RatioStats, WaveletError> {
    let mut stats = RatioStats::new();
    if trials == 0 {
        return Ok(stats);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = *basis.spec();
    for _ in 0..trials {
        let f = crate::grid::random_band_limited(&spec, &mut rng);
        let c = basis.analyze(&f)?;
        let denom = f01q_norm(&c, q).expect("q validated by caller");
        if denom == 0.0 {
            continue;
        }
        for ell in 1..=spec.dimension {
            let comp = RieszComponent::new(ell, spec.dimension)
                .expect("component within dimension");
            let rf = riesz_apply(comp, &f);
            let rc = basis.analyze(&rf)?;
            let num = f01q_norm(&rc, q).expect("q validated by caller");
            stats.push(num / denom);
        }
    }
    Ok(stats)
}
