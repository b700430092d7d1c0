//! Wavelet analysis and synthesis on the periodic grid.
//!
//! The basis is the periodization of the L2-normalized tensor Meyer system
//! `2^{Dj/2} psi^lambda(2^j x - k)`, `k` in `[0, L 2^j)^D` per scale, plus the
//! father family at the coarsest scale for completeness. All coefficients are
//! inner products computed in frequency space, where every generator has
//! compact support; on band-limited input the expansion is exact and the
//! basis is exactly orthonormal (no spatial truncation enters anywhere).
//!
//! The constant (DC) mode is projected out: analysis treats input modulo
//! constants, matching the homogeneous setting the norms live in.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::grid::{GridError, GridFunction, GridSpec, SpectralFunction};
use crate::meyer::{MeyerError, MeyerSystem, TensorLabel};
use crate::quad::QuadError;

/// Index of one basis function: tensor label, scale, translation.
///
/// Father indices (all-zero label) appear only at the coarsest scale of the
/// window. Ordering is (scale, label bits, translation), which fixes the
/// iteration order of every coefficient container in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WaveletIndex {
    pub scale: i32,
    pub label: TensorLabel,
    pub translate: [u32; 2],
}

impl WaveletIndex {
    pub fn new(label: TensorLabel, scale: i32, translate: [u32; 2]) -> Self {
        Self {
            scale,
            label,
            translate,
        }
    }
}

/// Sparse coefficient container tied to a grid spec.
#[derive(Debug, Clone)]
pub struct CoefficientField {
    spec: GridSpec,
    entries: BTreeMap<WaveletIndex, Complex64>,
}

impl CoefficientField {
    pub fn empty(spec: GridSpec) -> Self {
        Self {
            spec,
            entries: BTreeMap::new(),
        }
    }

    pub fn single(spec: GridSpec, idx: WaveletIndex, value: Complex64) -> Self {
        let mut f = Self::empty(spec);
        f.insert(idx, value);
        f
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    /// Insert a coefficient. Exact zeros are dropped; the index must be valid
    /// for the spec (mother scale inside the window, father only at the
    /// coarsest scale, translations within range).
    pub fn insert(&mut self, idx: WaveletIndex, value: Complex64) {
        assert!(
            self.index_valid(&idx),
            "coefficient index {idx:?} invalid for spec {:?}",
            self.spec
        );
        if value.norm_sqr() != 0.0 {
            self.entries.insert(idx, value);
        }
    }

    pub fn index_valid(&self, idx: &WaveletIndex) -> bool {
        let scale_ok = if idx.label.is_father() {
            idx.scale == self.spec.j_lo
        } else {
            idx.scale >= self.spec.j_lo && idx.scale <= self.spec.j_hi
        };
        if !scale_ok || idx.label.dim() != self.spec.dimension {
            return false;
        }
        let m = self.spec.translates_at(idx.scale) as u32;
        (0..self.spec.dimension).all(|l| idx.translate[l] < m)
    }

    pub fn get(&self, idx: &WaveletIndex) -> Option<Complex64> {
        self.entries.get(idx).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&WaveletIndex, &Complex64)> {
        self.entries.iter()
    }

    /// Sum of squared moduli (the Parseval mass).
    pub fn l2_mass(&self) -> f64 {
        self.entries.values().map(|c| c.norm_sqr()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Populated mother scale range, if any mother entries exist.
    pub fn mother_scale_range(&self) -> Option<(i32, i32)> {
        let mut lo = i32::MAX;
        let mut hi = i32::MIN;
        for idx in self.entries.keys() {
            if !idx.label.is_father() {
                lo = lo.min(idx.scale);
                hi = hi.max(idx.scale);
            }
        }
        (lo <= hi).then_some((lo, hi))
    }

    /// Keep mother entries with scale in `[lo, hi]`; fathers are dropped.
    pub fn mother_slice(&self, lo: i32, hi: i32) -> Self {
        let entries = self
            .entries
            .iter()
            .filter(|(idx, _)| !idx.label.is_father() && idx.scale >= lo && idx.scale <= hi)
            .map(|(idx, v)| (*idx, *v))
            .collect();
        Self {
            spec: self.spec,
            entries,
        }
    }

    /// All father entries.
    pub fn father_slice(&self) -> Self {
        let entries = self
            .entries
            .iter()
            .filter(|(idx, _)| idx.label.is_father())
            .map(|(idx, v)| (*idx, *v))
            .collect();
        Self {
            spec: self.spec,
            entries,
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|(idx, v)| (*idx, v * factor))
            .collect();
        Self {
            spec: self.spec,
            entries,
        }
    }
}

/// Scale-window restriction `P_{s,N}`: mother entries with `s - n <= j <= s`.
/// Father entries are dropped.
pub fn project_scale_window(c: &CoefficientField, s: i32, n: i32) -> CoefficientField {
    c.mother_slice(s - n, s)
}

/// Single-scale slice `Q_j`: mother entries at scale `j` only.
pub fn project_single_scale(c: &CoefficientField, j: i32) -> CoefficientField {
    c.mother_slice(j, j)
}

#[derive(Debug, Clone, thiserror::Error)]
#[error("truncation split t={t} outside 0..={max}")]
pub struct SplitOutOfRange {
    pub t: i32,
    pub max: i32,
}

/// Upper truncation slice `T1`: scales `s - t + 1 ..= s` (empty at t = 0).
pub fn op_t1(
    c: &CoefficientField,
    s: i32,
    t: i32,
    n: i32,
) -> Result<CoefficientField, SplitOutOfRange> {
    if t < 0 || t > n + 1 {
        return Err(SplitOutOfRange { t, max: n + 1 });
    }
    Ok(if t == 0 {
        CoefficientField::empty(*c.spec())
    } else {
        c.mother_slice(s - t + 1, s)
    })
}

/// Lower truncation slice `T2`: scales `s - N ..= s - t` (empty at t = N + 1).
pub fn op_t2(
    c: &CoefficientField,
    s: i32,
    t: i32,
    n: i32,
) -> Result<CoefficientField, SplitOutOfRange> {
    if t < 0 || t > n + 1 {
        return Err(SplitOutOfRange { t, max: n + 1 });
    }
    Ok(if t == n + 1 {
        CoefficientField::empty(*c.spec())
    } else {
        c.mother_slice(s - n, s - t)
    })
}

#[derive(Debug, thiserror::Error)]
pub enum WaveletError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Meyer(#[from] MeyerError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("index {0:?} invalid for this basis")]
    BadIndex(WaveletIndex),
}

/// Precomputed per-scale frequency profiles and FFT plans for one grid.
///
/// Construction is single-threaded; afterwards the basis is immutable and
/// every method is safe to call concurrently.
pub struct WaveletBasis {
    system: MeyerSystem,
    spec: GridSpec,
    /// psi_hat(2^{-j} xi_m) per scale (indexed j - j_lo), per axis bin.
    psi_profiles: Vec<Vec<Complex64>>,
    /// Phi(2^{-j} xi_m) per scale (indexed j - j_lo), per axis bin.
    phi_profiles: Vec<Vec<f64>>,
    forward_plans: BTreeMap<usize, Arc<dyn Fft<f64>>>,
    inverse_plans: BTreeMap<usize, Arc<dyn Fft<f64>>>,
}

impl WaveletBasis {
    pub fn new(system: MeyerSystem, spec: GridSpec) -> Result<Self, WaveletError> {
        if system.dimension() != spec.dimension {
            return Err(WaveletError::Meyer(MeyerError::LabelDimension {
                label: system.dimension(),
                system: spec.dimension,
            }));
        }
        let n = spec.samples_per_axis();
        let scales = (spec.j_hi - spec.j_lo + 1) as usize;
        let mut psi_profiles = Vec::with_capacity(scales);
        let mut phi_profiles = Vec::with_capacity(scales);
        for j in spec.j_lo..=spec.j_hi {
            let dil = (-j as f64).exp2();
            let mut psi = Vec::with_capacity(n);
            let mut phi = Vec::with_capacity(n);
            for idx in 0..n {
                let xi = spec.frequency(idx) * dil;
                psi.push(system.psi_hat(xi));
                phi.push(system.phi_hat(xi));
            }
            psi_profiles.push(psi);
            phi_profiles.push(phi);
        }
        let mut planner = FftPlanner::new();
        let mut forward_plans = BTreeMap::new();
        let mut inverse_plans = BTreeMap::new();
        for j in spec.j_lo..=spec.j_hi {
            let m = spec.translates_at(j);
            forward_plans
                .entry(m)
                .or_insert_with(|| planner.plan_fft_forward(m));
            inverse_plans
                .entry(m)
                .or_insert_with(|| planner.plan_fft_inverse(m));
        }
        Ok(Self {
            system,
            spec,
            psi_profiles,
            phi_profiles,
            forward_plans,
            inverse_plans,
        })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn system(&self) -> &MeyerSystem {
        &self.system
    }

    fn scale_slot(&self, j: i32) -> usize {
        (j - self.spec.j_lo) as usize
    }

    /// Per-axis profile for (label bit, scale) at axis bin `idx`.
    fn axis_profile(&self, mother: bool, j: i32, idx: usize) -> Complex64 {
        let slot = self.scale_slot(j);
        if mother {
            self.psi_profiles[slot][idx]
        } else {
            Complex64::new(self.phi_profiles[slot][idx], 0.0)
        }
    }

    /// Channels in deterministic order: mothers per scale, then the father
    /// family at the coarsest scale.
    fn channels(&self) -> Vec<(TensorLabel, i32)> {
        let d = self.spec.dimension;
        let mut out = Vec::new();
        for j in self.spec.j_lo..=self.spec.j_hi {
            for label in TensorLabel::mothers(d) {
                out.push((label, j));
            }
        }
        out.push((TensorLabel::father(d), self.spec.j_lo));
        out
    }

    /// Per-axis bin range (inclusive |m| bound) touched by a channel profile.
    fn axis_support(&self, mother: bool, j: i32) -> i64 {
        let l = self.spec.period() as i64;
        // mother: |xi| <= (8 pi/3) 2^j  =>  |m| <= (4/3) L 2^j
        // father: |xi| <  (4 pi/3) 2^j  =>  |m| <= (2/3) L 2^j
        let num = if mother { 4 * l } else { 2 * l };
        let e = j;
        let v = if e >= 0 { num << e } else { num >> (-e) };
        v / 3
    }

    /// Analyze spatial samples. The DC mode is dropped.
    pub fn analyze(&self, f: &GridFunction) -> Result<CoefficientField, WaveletError> {
        if *f.spec() != self.spec {
            return Err(WaveletError::Grid(GridError::SpecMismatch(
                Box::new(*f.spec()),
                Box::new(self.spec),
            )));
        }
        Ok(self.analyze_spectral(&f.to_spectral()))
    }

    /// Analyze from Fourier coefficients.
    pub fn analyze_spectral(&self, s: &SpectralFunction) -> CoefficientField {
        let d = self.spec.dimension;
        let n = self.spec.samples_per_axis();
        let two_pi_pow = (2.0 * std::f64::consts::PI).powi(d as i32 / 2)
            * if d % 2 == 1 {
                (2.0 * std::f64::consts::PI).sqrt()
            } else {
                1.0
            };
        let mut out = CoefficientField::empty(self.spec);

        for (label, j) in self.channels() {
            let m = self.spec.translates_at(j);
            let mut folded = vec![Complex64::new(0.0, 0.0); m.pow(d as u32)];
            let sup: Vec<i64> = (0..d)
                .map(|l| self.axis_support(label.axis_is_mother(l), j))
                .collect();

            // Gather over the rectangular support, folding bins mod M per axis.
            self.for_each_support_bin(&sup, |bins| {
                let flat = self.flat_from_bins(bins, n);
                let c = s.coeffs()[flat];
                if c.norm_sqr() == 0.0 {
                    return;
                }
                let mut w = c;
                for (l, &bin) in bins.iter().enumerate().take(d) {
                    w *= self.axis_profile(label.axis_is_mother(l), j, bin).conj();
                }
                if w.norm_sqr() == 0.0 {
                    return;
                }
                let fold = self.fold_index(bins, m, d);
                folded[fold] += w;
            });

            // Small inverse transform per axis turns folded bins into the
            // translation-indexed coefficients.
            let inv = &self.inverse_plans[&m];
            apply_per_axis(&mut folded, m, d, inv);

            let norm = two_pi_pow * (-(d as f64) * j as f64 / 2.0).exp2();
            for (flat, &v) in folded.iter().enumerate() {
                let value = v * norm;
                if value.norm_sqr() > 0.0 {
                    let translate = unflatten_m(flat, m, d);
                    out.insert(WaveletIndex::new(label, j, translate), value);
                }
            }
        }
        out
    }

    /// Synthesize Fourier coefficients from a coefficient field.
    pub fn synthesize_spectral(&self, c: &CoefficientField) -> SpectralFunction {
        let d = self.spec.dimension;
        let n = self.spec.samples_per_axis();
        let two_pi_pow = (2.0 * std::f64::consts::PI).powi(d as i32 / 2)
            * if d % 2 == 1 {
                (2.0 * std::f64::consts::PI).sqrt()
            } else {
                1.0
            };
        let vol = self.spec.volume();
        let mut s = SpectralFunction::zeros(self.spec);

        // Group entries per channel.
        type ChannelEntries = Vec<([u32; 2], Complex64)>;
        let mut per_channel: BTreeMap<(i32, u8), ChannelEntries> = BTreeMap::new();
        for (idx, &v) in c.iter() {
            per_channel
                .entry((idx.scale, idx.label.bits()))
                .or_default()
                .push((idx.translate, v));
        }

        for ((j, bits), entries) in per_channel {
            let label = TensorLabel::new(bits, d).expect("stored label is valid");
            let m = self.spec.translates_at(j);
            let mut a = vec![Complex64::new(0.0, 0.0); m.pow(d as u32)];
            for (translate, v) in entries {
                let mut flat = 0usize;
                for &t in translate.iter().take(d) {
                    flat = flat * m + t as usize;
                }
                a[flat] = v;
            }
            let fwd = &self.forward_plans[&m];
            apply_per_axis(&mut a, m, d, fwd);

            let norm = two_pi_pow / vol * (-(d as f64) * j as f64 / 2.0).exp2();
            let sup: Vec<i64> = (0..d)
                .map(|l| self.axis_support(label.axis_is_mother(l), j))
                .collect();
            self.for_each_support_bin(&sup, |bins| {
                let mut prof = Complex64::new(norm, 0.0);
                for (l, &bin) in bins.iter().enumerate().take(d) {
                    prof *= self.axis_profile(label.axis_is_mother(l), j, bin);
                }
                if prof.norm_sqr() == 0.0 {
                    return;
                }
                let fold = self.fold_index(bins, m, d);
                let flat = self.flat_from_bins(bins, n);
                s.coeffs_mut()[flat] += prof * a[fold];
            });
        }
        s
    }

    pub fn synthesize(&self, c: &CoefficientField) -> GridFunction {
        self.synthesize_spectral(c).to_grid()
    }

    /// Spatial samples of a single basis function.
    pub fn wavelet_function(&self, idx: WaveletIndex) -> Result<GridFunction, WaveletError> {
        self.check_index(&idx)?;
        let c = CoefficientField::single(self.spec, idx, Complex64::new(1.0, 0.0));
        Ok(self.synthesize(&c))
    }

    fn check_index(&self, idx: &WaveletIndex) -> Result<(), WaveletError> {
        let valid_scale = if idx.label.is_father() {
            idx.scale == self.spec.j_lo
        } else {
            idx.scale >= self.spec.j_lo && idx.scale <= self.spec.j_hi
        };
        let m = if valid_scale {
            self.spec.translates_at(idx.scale) as u32
        } else {
            0
        };
        let valid = valid_scale
            && idx.label.dim() == self.spec.dimension
            && (0..self.spec.dimension).all(|l| idx.translate[l] < m);
        if valid {
            Ok(())
        } else {
            Err(WaveletError::BadIndex(*idx))
        }
    }

    /// Exact torus inner product `(A psi_i, psi_i')` with `A` the identity or
    /// the `ell`-th Riesz component, computed over the shared frequency
    /// support.
    pub fn gram_inner(
        &self,
        a: WaveletIndex,
        b: WaveletIndex,
        riesz_ell: Option<usize>,
    ) -> Result<Complex64, WaveletError> {
        self.check_index(&a)?;
        self.check_index(&b)?;
        let d = self.spec.dimension;
        let vol = self.spec.volume();
        let two_pi_pow_sq = (2.0 * std::f64::consts::PI).powi(d as i32);

        let sup: Vec<i64> = (0..d)
            .map(|l| {
                self.axis_support(a.label.axis_is_mother(l), a.scale)
                    .min(self.axis_support(b.label.axis_is_mother(l), b.scale))
            })
            .collect();
        let ma = self.spec.translates_at(a.scale) as f64;
        let mb = self.spec.translates_at(b.scale) as f64;
        let scale_norm = two_pi_pow_sq / (vol * vol)
            * (-(d as f64) * (a.scale + b.scale) as f64 / 2.0).exp2();

        let mut acc = Complex64::new(0.0, 0.0);
        self.for_each_support_bin(&sup, |bins| {
            let mut da = Complex64::new(1.0, 0.0);
            let mut db = Complex64::new(1.0, 0.0);
            let mut phase = 0.0f64;
            let mut norm_sq = 0.0f64;
            let mut mult_num = 0.0f64;
            for (l, &bin) in bins.iter().enumerate().take(d) {
                da *= self.axis_profile(a.label.axis_is_mother(l), a.scale, bin);
                db *= self.axis_profile(b.label.axis_is_mother(l), b.scale, bin);
                let m_signed = self.spec.signed_index(bin) as f64;
                phase += m_signed
                    * (a.translate[l] as f64 / ma - b.translate[l] as f64 / mb);
                let xi = self.spec.frequency(bin);
                norm_sq += xi * xi;
                if let Some(ell) = riesz_ell {
                    if ell >= 1 && ell - 1 == l {
                        mult_num = xi;
                    }
                }
            }
            if da.norm_sqr() == 0.0 || db.norm_sqr() == 0.0 {
                return;
            }
            let mut term = da * db.conj()
                * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * phase);
            if let Some(ell) = riesz_ell {
                if ell >= 1 {
                    if norm_sq == 0.0 {
                        return;
                    }
                    term *= Complex64::new(0.0, -mult_num / norm_sq.sqrt());
                }
            }
            acc += term;
        });
        Ok(acc * vol * scale_norm)
    }

    /// Orthogonal projection onto the scale-`j0` father space, as the
    /// spectral fold-and-cut by the squared father profile.
    pub fn father_projection(
        &self,
        f: &GridFunction,
        j0: i32,
    ) -> Result<GridFunction, WaveletError> {
        if *f.spec() != self.spec {
            return Err(WaveletError::Grid(GridError::SpecMismatch(
                Box::new(*f.spec()),
                Box::new(self.spec),
            )));
        }
        let min_lo = -(self.spec.period_exp as i32);
        if j0 < min_lo || j0 > self.spec.j_hi + 2 {
            return Err(WaveletError::Grid(GridError::ScaleTooCoarse {
                j_lo: j0,
                min: min_lo,
                period_exp: self.spec.period_exp,
            }));
        }
        let d = self.spec.dimension;
        let n = self.spec.samples_per_axis();
        let s = f.to_spectral();
        let m = {
            let e = self.spec.period_exp as i32 + j0;
            1usize << e
        };
        let dil = (-j0 as f64).exp2();
        let profile: Vec<f64> = (0..n)
            .map(|idx| self.system.phi_hat(self.spec.frequency(idx) * dil))
            .collect();
        let sup_axis = {
            let l = self.spec.period() as i64;
            let num = 2 * l;
            let v = if j0 >= 0 { num << j0 } else { num >> (-j0) };
            v / 3
        };
        let sup: Vec<i64> = (0..d).map(|_| sup_axis).collect();

        let mut folded = vec![Complex64::new(0.0, 0.0); m.pow(d as u32)];
        self.for_each_support_bin(&sup, |bins| {
            let flat = self.flat_from_bins(bins, n);
            let mut w = s.coeffs()[flat];
            if w.norm_sqr() == 0.0 {
                return;
            }
            for l in 0..d {
                w *= profile[bins[l]];
            }
            folded[self.fold_index(bins, m, d)] += w;
        });

        let two_pi_pow = (2.0 * std::f64::consts::PI).powi(d as i32);
        let mut out = SpectralFunction::zeros(self.spec);
        self.for_each_support_bin(&sup, |bins| {
            let mut p = Complex64::new(two_pi_pow, 0.0);
            for l in 0..d {
                p *= profile[bins[l]];
            }
            if p.norm_sqr() == 0.0 {
                return;
            }
            let flat = self.flat_from_bins(bins, n);
            out.coeffs_mut()[flat] = p * folded[self.fold_index(bins, m, d)];
        });
        Ok(out.to_grid())
    }

    fn fold_index(&self, bins: &[usize], m: usize, d: usize) -> usize {
        // bin indices fold mod M directly because M divides N
        let mut flat = 0usize;
        for &b in bins.iter().take(d) {
            flat = flat * m + (b % m);
        }
        flat
    }

    fn flat_from_bins(&self, bins: &[usize], n: usize) -> usize {
        let mut flat = 0usize;
        for &b in bins.iter().take(self.spec.dimension) {
            flat = flat * n + b;
        }
        flat
    }

    /// Visit every FFT bin whose signed index per axis is within the given
    /// bounds in absolute value.
    fn for_each_support_bin(&self, sup: &[i64], mut visit: impl FnMut(&[usize])) {
        let n = self.spec.samples_per_axis() as i64;
        let d = self.spec.dimension;
        let clamp = |s: i64| s.min(n / 2 - 1);
        match d {
            1 => {
                let s0 = clamp(sup[0]);
                for m0 in -s0..=s0 {
                    let b0 = m0.rem_euclid(n) as usize;
                    visit(&[b0, 0]);
                }
            }
            _ => {
                let s0 = clamp(sup[0]);
                let s1 = clamp(sup[1]);
                for m0 in -s0..=s0 {
                    let b0 = m0.rem_euclid(n) as usize;
                    for m1 in -s1..=s1 {
                        let b1 = m1.rem_euclid(n) as usize;
                        visit(&[b0, b1]);
                    }
                }
            }
        }
    }

    /// Max over `x_samples` of the truncated lattice sum
    /// `sum_{|k| <= radius} prod_l |phi(x_l - k_l)|` for the father tensor.
    pub fn father_summability(
        &self,
        x_samples: &[Vec<f64>],
        radius: i64,
        tol: f64,
    ) -> Result<f64, WaveletError> {
        let mut worst = 0.0f64;
        for x in x_samples {
            if x.len() != self.spec.dimension {
                return Err(WaveletError::Meyer(MeyerError::LabelDimension {
                    label: x.len(),
                    system: self.spec.dimension,
                }));
            }
            let mut prod = 1.0;
            for &xl in x {
                let mut axis_sum = 0.0;
                for k in -radius..=radius {
                    axis_sum += self.system.phi_space(xl - k as f64, tol)?.abs();
                }
                prod *= axis_sum;
            }
            worst = worst.max(prod);
        }
        Ok(worst)
    }
}

/// Run a 1-D transform along every axis of a d-dimensional M^d array.
fn apply_per_axis(data: &mut [Complex64], m: usize, d: usize, plan: &Arc<dyn Fft<f64>>) {
    match d {
        1 => plan.process(data),
        _ => {
            for row in data.chunks_exact_mut(m) {
                plan.process(row);
            }
            let mut scratch = vec![Complex64::new(0.0, 0.0); m];
            for col in 0..m {
                for (i, s) in scratch.iter_mut().enumerate() {
                    *s = data[i * m + col];
                }
                plan.process(&mut scratch);
                for (i, s) in scratch.iter().enumerate() {
                    data[i * m + col] = *s;
                }
            }
        }
    }
}

fn unflatten_m(flat: usize, m: usize, d: usize) -> [u32; 2] {
    match d {
        1 => [flat as u32, 0],
        _ => [(flat / m) as u32, (flat % m) as u32],
    }
}

/// Convenience: analyze without holding a basis (builds one per call).
pub fn analyze_with(
    system: &MeyerSystem,
    f: &GridFunction,
) -> Result<CoefficientField, WaveletError> {
    let basis = WaveletBasis::new(system.clone(), *f.spec())?;
    basis.analyze(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::random_band_limited;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn basis_1d() -> WaveletBasis {
        let spec = GridSpec::with_default_window(1, 3, 9).unwrap();
        WaveletBasis::new(MeyerSystem::new(1).unwrap(), spec).unwrap()
    }

    fn basis_2d() -> WaveletBasis {
        let spec = GridSpec::with_default_window(2, 2, 6).unwrap();
        WaveletBasis::new(MeyerSystem::new(2).unwrap(), spec).unwrap()
    }

    #[test]
    fn parseval_and_round_trip_1d() {
        let basis = basis_1d();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let f = random_band_limited(basis.spec(), &mut rng);
            let s = f.to_spectral();
            let c = basis.analyze_spectral(&s);
            let l2 = s.l2_norm_sqr();
            assert_abs_diff_eq!(c.l2_mass(), l2, epsilon = 1e-9 * l2);
            let back = basis.synthesize(&c);
            let mut worst = 0.0f64;
            let mut amp = 0.0f64;
            for (a, b) in f.samples().iter().zip(back.samples()) {
                worst = worst.max((a - b).norm());
                amp = amp.max(a.norm());
            }
            assert!(worst <= 1e-9 * amp, "round trip {worst:e} vs amp {amp:e}");
        }
    }

    #[test]
    fn parseval_and_round_trip_2d() {
        let basis = basis_2d();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = random_band_limited(basis.spec(), &mut rng);
        let s = f.to_spectral();
        let c = basis.analyze_spectral(&s);
        let l2 = s.l2_norm_sqr();
        assert_abs_diff_eq!(c.l2_mass(), l2, epsilon = 1e-9 * l2);
        let back = basis.synthesize(&c);
        let mut worst = 0.0f64;
        for (a, b) in f.samples().iter().zip(back.samples()) {
            worst = worst.max((a - b).norm());
        }
        let amp = f.samples().iter().map(|c| c.norm()).fold(0.0, f64::max);
        assert!(worst <= 1e-9 * amp);
    }

    #[test]
    fn single_wavelet_analyzes_to_delta() {
        let basis = basis_1d();
        let idx = WaveletIndex::new(TensorLabel::mothers(1).next().unwrap(), 1, [3, 0]);
        let w = basis.wavelet_function(idx).unwrap();
        let c = basis.analyze(&w).unwrap();
        let diag = c.get(&idx).unwrap();
        assert_abs_diff_eq!(diag.re, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(diag.im, 0.0, epsilon = 1e-9);
        let off = c
            .iter()
            .filter(|(i, _)| **i != idx)
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max);
        assert!(off <= 1e-9, "max off-diagonal {off:e}");
    }

    #[test]
    fn analyze_zero_is_empty() {
        let basis = basis_1d();
        let f = GridFunction::zeros(*basis.spec());
        let c = basis.analyze(&f).unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn synthesize_empty_is_zero() {
        let basis = basis_1d();
        let c = CoefficientField::empty(*basis.spec());
        let f = basis.synthesize(&c);
        assert!(f.samples().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn cosine_tone_lands_on_its_scale_only() {
        // A real tone at xi = 2 pi 2^j sits inside the scale-j band; the
        // conjugate bin pair cancels exactly in the adjacent scale j+1.
        let basis = basis_1d();
        let spec = *basis.spec();
        let j = 2i32;
        let freq = 2.0 * std::f64::consts::PI * (j as f64).exp2();
        let f = GridFunction::sample_with(spec, |x| Complex64::new((freq * x[0]).cos(), 0.0));
        let c = basis.analyze(&f).unwrap();
        let mut per_scale: BTreeMap<i32, f64> = BTreeMap::new();
        for (idx, v) in c.iter() {
            if !idx.label.is_father() {
                let e = per_scale.entry(idx.scale).or_insert(0.0);
                *e = e.max(v.norm());
            }
        }
        for (scale, max_abs) in per_scale {
            if scale == j {
                assert!(max_abs > 1e-3, "tone scale should be populated");
            } else {
                assert!(max_abs <= 1e-9, "unexpected mass at scale {scale}: {max_abs:e}");
            }
        }
    }

    #[test]
    fn gram_orthonormality_sampled() {
        let basis = basis_1d();
        let spec = *basis.spec();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mother = TensorLabel::mothers(1).next().unwrap();
        let mut indices = Vec::new();
        for _ in 0..20 {
            let j = rng.gen_range(spec.j_lo..=spec.j_hi);
            let m = spec.translates_at(j) as u32;
            let k = rng.gen_range(0..m);
            indices.push(WaveletIndex::new(mother, j, [k, 0]));
        }
        indices.push(WaveletIndex::new(
            TensorLabel::father(1),
            spec.j_lo,
            [1, 0],
        ));
        for (i, &a) in indices.iter().enumerate() {
            for &b in &indices[i..] {
                let g = basis.gram_inner(a, b, None).unwrap();
                let expect = if a == b { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(g.re, expect, epsilon = 1e-8);
                assert_abs_diff_eq!(g.im, 0.0, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn truncation_slices_partition_the_window() {
        let basis = basis_1d();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = random_band_limited(basis.spec(), &mut rng);
        let c = basis.analyze(&f).unwrap();
        let (s, n) = (2, 4);
        let p = project_scale_window(&c, s, n);
        for t in 0..=n + 1 {
            let t1 = op_t1(&c, s, t, n).unwrap();
            let t2 = op_t2(&c, s, t, n).unwrap();
            assert_eq!(t1.len() + t2.len(), p.len(), "partition at t={t}");
            // disjoint and exact as sets, with identical values
            for (idx, v) in t1.iter().chain(t2.iter()) {
                assert_eq!(p.get(idx).unwrap(), *v);
            }
        }
        assert!(op_t1(&c, s, -1, n).is_err());
        assert!(op_t2(&c, s, n + 2, n).is_err());
        assert!(op_t1(&c, s, 0, n).unwrap().is_empty());
        assert!(op_t2(&c, s, n + 1, n).unwrap().is_empty());
    }

    #[test]
    fn single_scale_slices_sum_to_identity() {
        let basis = basis_1d();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let f = random_band_limited(basis.spec(), &mut rng);
        let c = basis.analyze(&f).unwrap();
        let spec = basis.spec();
        let mut count = 0;
        for j in spec.j_lo..=spec.j_hi {
            count += project_single_scale(&c, j).len();
        }
        let mothers_total = c.iter().filter(|(i, _)| !i.label.is_father()).count();
        assert_eq!(count, mothers_total);
        // out-of-window slice is empty
        assert!(project_single_scale(&c, spec.j_hi + 5).is_empty());
    }

    #[test]
    fn father_projection_idempotent_and_band_cut() {
        let basis = basis_1d();
        let spec = *basis.spec();
        let j0 = 1;
        // build something already in the father space
        let mut c = CoefficientField::empty(spec);
        // father space at j0 is spanned by scale < j0 content; use a mother
        // at a coarser scale plus the father family
        c.insert(
            WaveletIndex::new(TensorLabel::mothers(1).next().unwrap(), -1, [1, 0]),
            Complex64::new(0.8, 0.0),
        );
        c.insert(
            WaveletIndex::new(TensorLabel::father(1), spec.j_lo, [1, 0]),
            Complex64::new(0.5, 0.0),
        );
        let f = basis.synthesize(&c);
        let p = basis.father_projection(&f, j0).unwrap();
        let mut worst = 0.0f64;
        for (a, b) in f.samples().iter().zip(p.samples()) {
            worst = worst.max((a - b).norm());
        }
        assert!(worst < 1e-9, "projection should fix the father space: {worst:e}");
        let pp = basis.father_projection(&p, j0).unwrap();
        let mut worst2 = 0.0f64;
        for (a, b) in p.samples().iter().zip(pp.samples()) {
            worst2 = worst2.max((a - b).norm());
        }
        assert!(worst2 < 1e-9, "idempotence: {worst2:e}");

        // a pure tone above the father band dies
        let freq = 2.0 * std::f64::consts::PI * 2.0f64.powi(j0 + 2);
        let tone = GridFunction::sample_with(spec, |x| Complex64::new((freq * x[0]).cos(), 0.0));
        let ptone = basis.father_projection(&tone, j0).unwrap();
        let sup = ptone.samples().iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(sup < 1e-9, "tone above band survives: {sup:e}");
    }

    #[test]
    // the frozen oracle value happens to sit within a few 1e-11 of sqrt(2);
    // that numerical coincidence is not a closed form
    #[allow(clippy::approx_constant)]
    fn father_lattice_sum_stable_under_radius_doubling() {
        let basis = basis_1d();
        let tol = 1e-10;
        let a = basis
            .father_summability(&[vec![0.0]], 64, tol)
            .unwrap();
        let b = basis
            .father_summability(&[vec![0.0]], 128, tol)
            .unwrap();
        assert!(b >= a - 1e-12, "monotone in radius");
        assert!((b - a).abs() < 1e-6, "radius doubling changed sum by {:e}", b - a);
        // frozen reference from two independent evaluations
        assert_abs_diff_eq!(b, 1.4142135623, epsilon = 1e-6);
    }
}
