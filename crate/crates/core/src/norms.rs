//! Norms and functionals on grid functions and coefficient fields.
//!
//! Coefficients are L2-normalized throughout, so the discrete norms read:
//!
//! * `f01q`: integral of the scale-stacked weight
//!   `( sum_{lambda,j,k} [2^{jD/2} |c| chi_{Q_{j,k}}(x)]^q )^{1/q}`,
//!   evaluated exactly by one pass over the dyadic tree (the integrand is
//!   piecewise constant on the mesh of populated cubes).
//! * `f0infq`: `sup_Q ( |Q|^{-1} sum_{Q_{j,k} subset Q} 2^{jD(q/2-1)} |c|^q )^{1/q}`
//!   over all dyadic cubes up to the full torus, by one bottom-up pass.
//!   At q = 2 this is the Carleson form of the BMO condition.
//! * the window functionals built from the truncation slices `T1`, `T2` (a
//!   minimum over the split for the `1,q` family, a supremum for the
//!   `infinity,q` family), enumerated over every window meeting the
//!   populated scale range.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use std::collections::BTreeMap;

use crate::grid::{GridError, GridFunction};
use crate::stats::RatioStats;
use crate::wavelet::{CoefficientField, WaveletBasis, WaveletError};

#[derive(Debug, thiserror::Error)]
pub enum NormError {
    #[error("q = {0} out of range (need 1 < q < infinity)")]
    BadQ(f64),
    #[error("coefficient field does not match the supplied function: residual {0:.3e}")]
    FieldMismatch(f64),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Wavelet(#[from] WaveletError),
}

fn check_q(q: f64) -> Result<(), NormError> {
    if q > 1.0 && q.is_finite() {
        Ok(())
    } else {
        Err(NormError::BadQ(q))
    }
}

/// Rectangle-rule `L^1` norm over the torus.
pub fn l1_norm(f: &GridFunction) -> f64 {
    f.samples().iter().map(|c| c.norm()).sum::<f64>() * f.spec().cell_volume()
}

/// Max of `|f|` over samples.
pub fn linf_norm(f: &GridFunction) -> f64 {
    f.samples().iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Rectangle-rule squared `L^2` norm.
pub fn l2_norm_sqr(f: &GridFunction) -> f64 {
    f.samples().iter().map(|c| c.norm_sqr()).sum::<f64>() * f.spec().cell_volume()
}

/// Dyadic cube `Q_{j,k}` of side `2^{-j}` at lattice position `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct DyadicCube {
    pub scale: i32,
    pub pos: [u32; 2],
}

impl DyadicCube {
    pub fn side(&self) -> f64 {
        (-self.scale as f64).exp2()
    }

    pub fn volume(&self, dim: usize) -> f64 {
        self.side().powi(dim as i32)
    }

    pub fn parent(&self) -> DyadicCube {
        DyadicCube {
            scale: self.scale - 1,
            pos: [self.pos[0] >> 1, self.pos[1] >> 1],
        }
    }

    pub fn child(&self, corner: [u32; 2]) -> DyadicCube {
        DyadicCube {
            scale: self.scale + 1,
            pos: [2 * self.pos[0] + corner[0], 2 * self.pos[1] + corner[1]],
        }
    }
}

/// Per-cube q-th-power mass for the `f01q` integrand: all labels sharing a
/// cube add their powers.
fn cube_masses(c: &CoefficientField, q: f64, weight_exp: f64) -> BTreeMap<DyadicCube, f64> {
    let d = c.spec().dimension as f64;
    let mut masses: BTreeMap<DyadicCube, f64> = BTreeMap::new();
    for (idx, v) in c.iter() {
        let w = ((idx.scale as f64) * d * weight_exp).exp2() * v.norm().powf(q);
        let cube = DyadicCube {
            scale: idx.scale,
            pos: idx.translate,
        };
        *masses.entry(cube).or_insert(0.0) += w;
    }
    masses
}

/// `f01q` norm of a coefficient field (fathers included with the same weight).
pub fn f01q_norm(c: &CoefficientField, q: f64) -> Result<f64, NormError> {
    check_q(q)?;
    if c.is_empty() {
        return Ok(0.0);
    }
    let d = c.spec().dimension;
    // weight (2^{jD/2} |c|)^q => exponent q/2 on 2^{jD}
    let masses = cube_masses(c, q, q / 2.0);

    // Active tree: every mass cube plus all ancestors up to the coarsest
    // populated scale.
    let coarsest = masses.keys().map(|c| c.scale).min().unwrap();
    #[derive(Default)]
    struct Node {
        mass: f64,
        children: Vec<DyadicCube>,
    }
    let mut nodes: BTreeMap<DyadicCube, Node> = BTreeMap::new();
    for (&cube, &mass) in &masses {
        nodes.entry(cube).or_default().mass = mass;
        let mut cur = cube;
        while cur.scale > coarsest {
            let parent = cur.parent();
            let entry = nodes.entry(parent).or_default();
            if !entry.children.contains(&cur) {
                entry.children.push(cur);
            } else {
                break;
            }
            cur = parent;
        }
    }

    // Depth-first accumulation of stacked q-powers; any volume not covered by
    // an active child contributes with the accumulator at this depth.
    fn descend(
        nodes: &BTreeMap<DyadicCube, Node>,
        cube: DyadicCube,
        acc: f64,
        q: f64,
        dim: usize,
    ) -> f64 {
        let node = &nodes[&cube];
        let acc = acc + node.mass;
        let child_vol = DyadicCube {
            scale: cube.scale + 1,
            pos: [0, 0],
        }
        .volume(dim);
        let mut total = 0.0;
        let mut covered = 0.0;
        for &child in &node.children {
            covered += child_vol;
            total += descend(nodes, child, acc, q, dim);
        }
        let rest = cube.volume(dim) - covered;
        if rest > 0.0 && acc > 0.0 {
            total += rest * acc.powf(1.0 / q);
        }
        total
    }

    let tops: Vec<DyadicCube> = nodes
        .keys()
        .copied()
        .filter(|c| c.scale == coarsest)
        .collect();
    let mut total = 0.0;
    for top in tops {
        total += descend(&nodes, top, 0.0, q, d);
    }
    Ok(total)
}

/// `f0infq` functional: Carleson-type sup over dyadic cubes, up to the whole
/// torus.
pub fn f0infq_functional(c: &CoefficientField, q: f64) -> Result<f64, NormError> {
    check_q(q)?;
    if c.is_empty() {
        return Ok(0.0);
    }
    let spec = *c.spec();
    let d = spec.dimension;
    // weight 2^{jD(q/2 - 1)} |c|^q
    let masses = cube_masses(c, q, q / 2.0 - 1.0);
    let finest = masses.keys().map(|c| c.scale).max().unwrap();
    let torus_scale = -(spec.period_exp as i32);

    // Bottom-up: aggregate each level into its parents, track the sup.
    let mut best = 0.0f64;
    let mut level: BTreeMap<DyadicCube, f64> = BTreeMap::new();
    for j in (torus_scale..=finest).rev() {
        for (&cube, &m) in masses.iter().filter(|(c, _)| c.scale == j) {
            *level.entry(cube).or_insert(0.0) += m;
        }
        let mut next: BTreeMap<DyadicCube, f64> = BTreeMap::new();
        for (&cube, &t) in &level {
            debug_assert_eq!(cube.scale, j);
            let vol = cube.volume(d);
            let value = (t / vol).powf(1.0 / q);
            best = best.max(value);
            if j > torus_scale {
                *next.entry(cube.parent()).or_insert(0.0) += t;
            }
        }
        level = next;
    }
    Ok(best)
}

/// One truncation window with its chosen split.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct WindowChoice {
    pub s: i32,
    pub n: i32,
    pub t: i32,
    pub value: f64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct WindowNormResult {
    pub value: f64,
    /// Windows realizing the outer sup, each with its optimal split.
    pub witnesses: Vec<WindowChoice>,
}

/// Range-keyed caches of slice norms; every window evaluation reduces to a
/// clipped scale interval, so only O(span^2) distinct values ever arise.
struct SliceCache<'a> {
    basis: &'a WaveletBasis,
    c: &'a CoefficientField,
    populated: Vec<i32>,
    f01q: BTreeMap<(i32, i32), f64>,
    f0infq: BTreeMap<(i32, i32), f64>,
    l1: BTreeMap<(i32, i32), f64>,
    linf: BTreeMap<(i32, i32), f64>,
    prefix_grids: BTreeMap<i32, Vec<Complex64>>,
    q: f64,
}

impl<'a> SliceCache<'a> {
    fn new(basis: &'a WaveletBasis, c: &'a CoefficientField, q: f64) -> Self {
        let populated: Vec<i32> = {
            let mut scales: Vec<i32> = c
                .iter()
                .filter(|(i, _)| !i.label.is_father())
                .map(|(i, _)| i.scale)
                .collect();
            scales.sort_unstable();
            scales.dedup();
            scales
        };
        Self {
            basis,
            c,
            populated,
            f01q: BTreeMap::new(),
            f0infq: BTreeMap::new(),
            l1: BTreeMap::new(),
            linf: BTreeMap::new(),
            prefix_grids: BTreeMap::new(),
            q,
        }
    }

    /// Clip a scale interval to the populated range; `None` when empty.
    fn clip(&self, lo: i32, hi: i32) -> Option<(i32, i32)> {
        let lo = self.populated.iter().copied().find(|&j| j >= lo)?;
        let hi = self.populated.iter().rev().copied().find(|&j| j <= hi)?;
        (lo <= hi).then_some((lo, hi))
    }

    fn f01q_range(&mut self, lo: i32, hi: i32) -> Result<f64, NormError> {
        let Some(key) = self.clip(lo, hi) else {
            return Ok(0.0);
        };
        if let Some(&v) = self.f01q.get(&key) {
            return Ok(v);
        }
        let slice = self.c.mother_slice(key.0, key.1);
        let v = f01q_norm(&slice, self.q)?;
        self.f01q.insert(key, v);
        Ok(v)
    }

    fn f0infq_range(&mut self, lo: i32, hi: i32) -> Result<f64, NormError> {
        let Some(key) = self.clip(lo, hi) else {
            return Ok(0.0);
        };
        if let Some(&v) = self.f0infq.get(&key) {
            return Ok(v);
        }
        let slice = self.c.mother_slice(key.0, key.1);
        let v = f0infq_functional(&slice, self.q)?;
        self.f0infq.insert(key, v);
        Ok(v)
    }

    /// Cumulative synthesized grid over populated scales <= `hi`.
    fn prefix_grid(&mut self, hi: i32) -> &Vec<Complex64> {
        if !self.prefix_grids.contains_key(&hi) {
            let spec = *self.basis.spec();
            let mut acc = vec![Complex64::new(0.0, 0.0); spec.total_samples()];
            // build from the previous populated prefix when available
            let prev = self
                .prefix_grids
                .range(..hi)
                .next_back()
                .map(|(&j, _)| j);
            let from = match prev {
                Some(j) => {
                    acc.copy_from_slice(&self.prefix_grids[&j]);
                    j
                }
                None => i32::MIN,
            };
            for &j in &self.populated.clone() {
                if j > from && j <= hi {
                    let slice = self.c.mother_slice(j, j);
                    let g = self.basis.synthesize(&slice);
                    for (a, b) in acc.iter_mut().zip(g.samples()) {
                        *a += b;
                    }
                }
            }
            self.prefix_grids.insert(hi, acc);
        }
        &self.prefix_grids[&hi]
    }

    fn grid_range_norms(&mut self, lo: i32, hi: i32) -> Result<(f64, f64), NormError> {
        let Some(key) = self.clip(lo, hi) else {
            return Ok((0.0, 0.0));
        };
        if let (Some(&a), Some(&b)) = (self.l1.get(&key), self.linf.get(&key)) {
            return Ok((a, b));
        }
        let cell = self.basis.spec().cell_volume();
        let lower = self.populated.iter().copied().rfind(|&j| j < key.0);
        let hi_grid = self.prefix_grid(key.1).clone();
        let mut l1 = 0.0;
        let mut linf = 0.0f64;
        match lower {
            Some(lj) => {
                let lo_grid = self.prefix_grid(lj);
                for (a, b) in hi_grid.iter().zip(lo_grid) {
                    let v = (a - b).norm();
                    l1 += v;
                    linf = linf.max(v);
                }
            }
            None => {
                for a in &hi_grid {
                    let v = a.norm();
                    l1 += v;
                    linf = linf.max(v);
                }
            }
        }
        l1 *= cell;
        self.l1.insert(key, l1);
        self.linf.insert(key, linf);
        Ok((l1, linf))
    }
}

/// Window families enumerated by the wavelet-expansion functionals: every
/// `(s, N)` whose scale interval meets the representable window.
fn window_family(basis: &WaveletBasis) -> Vec<(i32, i32)> {
    let spec = basis.spec();
    let mut out = Vec::new();
    for s in spec.j_lo - 1..=spec.j_hi + 1 {
        for n in 1..=(spec.j_hi - spec.j_lo + 2) {
            out.push((s, n));
        }
    }
    out
}

fn validate_pair(
    basis: &WaveletBasis,
    c: &CoefficientField,
    f: &GridFunction,
) -> Result<(), NormError> {
    if c.spec() != f.spec() {
        return Err(NormError::Grid(GridError::SpecMismatch(
            Box::new(*c.spec()),
            Box::new(*f.spec()),
        )));
    }
    // Coefficients must reproduce f (modulo its mean, which analysis drops).
    let back = basis.synthesize(c);
    let mean = f.mean();
    let mut worst = 0.0f64;
    let mut amp = 0.0f64;
    for (a, b) in f.samples().iter().zip(back.samples()) {
        worst = worst.max((a - mean - b).norm());
        amp = amp.max((a - mean).norm());
    }
    if worst > 1e-6 * amp.max(1e-300) {
        return Err(NormError::FieldMismatch(worst));
    }
    Ok(())
}

/// The `1,q` wavelet-expansion functional:
/// `sup_{s,N} min_t [ ||T1||_{F01q} + ||T2||_{L1} ]`, with the realizing
/// windows. Ties in the inner min break toward smaller `t`; the witness list
/// carries every window attaining the sup.
pub fn we1q_norm(
    basis: &WaveletBasis,
    c: &CoefficientField,
    f: &GridFunction,
    q: f64,
) -> Result<WindowNormResult, NormError> {
    check_q(q)?;
    validate_pair(basis, c, f)?;
    let mut cache = SliceCache::new(basis, c, q);
    let mut best = 0.0f64;
    let mut witnesses: Vec<WindowChoice> = Vec::new();
    for (s, n) in window_family(basis) {
        let mut inner_best: Option<WindowChoice> = None;
        for t in 0..=n + 1 {
            // T1: scales s-t+1..=s (empty at t=0); T2: scales s-N..=s-t.
            let t1 = if t == 0 {
                0.0
            } else {
                cache.f01q_range(s - t + 1, s)?
            };
            let t2 = if t == n + 1 {
                0.0
            } else {
                cache.grid_range_norms(s - n, s - t)?.0
            };
            let value = t1 + t2;
            let better = match &inner_best {
                None => true,
                Some(w) => value < w.value,
            };
            if better {
                inner_best = Some(WindowChoice { s, n, t, value });
            }
        }
        let w = inner_best.expect("at least one split per window");
        if w.value > best {
            best = w.value;
            witnesses.clear();
            witnesses.push(w);
        } else if w.value == best && best > 0.0 {
            witnesses.push(w);
        }
    }
    Ok(WindowNormResult {
        value: best,
        witnesses,
    })
}

/// The `infinity,q` wavelet-expansion functional:
/// `sup_{s,N} sup_t [ ||T1||_{F0infq} + ||T2||_{Linf} ]`.
pub fn weinfq_norm(
    basis: &WaveletBasis,
    c: &CoefficientField,
    f: &GridFunction,
    q: f64,
) -> Result<f64, NormError> {
    check_q(q)?;
    validate_pair(basis, c, f)?;
    let mut cache = SliceCache::new(basis, c, q);
    let mut best = 0.0f64;
    for (s, n) in window_family(basis) {
        for t in 0..=n + 1 {
            let t1 = if t == 0 {
                0.0
            } else {
                cache.f0infq_range(s - t + 1, s)?
            };
            let t2 = if t == n + 1 {
                0.0
            } else {
                cache.grid_range_norms(s - n, s - t)?.1
            };
            best = best.max(t1 + t2);
        }
    }
    Ok(best)
}

/// `min(||f||_L1, ||f||_F01q)` -- the `{1,q}` functional on the union space.
pub fn min_1q(c: &CoefficientField, f: &GridFunction, q: f64) -> Result<f64, NormError> {
    check_q(q)?;
    Ok(l1_norm(f).min(f01q_norm(c, q)?))
}

/// Upper bound on the sum-space norm
/// `inf { ||a||_L1 + ||b||_F01q : f = a + b }`,
/// minimized over the two trivial splittings plus every scale-cutoff
/// splitting (fine scales to the smooth part, the rest to L1). This is an
/// upper bound only; the true infimum ranges over all splittings.
pub fn sum_space_upper(
    basis: &WaveletBasis,
    c: &CoefficientField,
    f: &GridFunction,
    q: f64,
) -> Result<f64, NormError> {
    check_q(q)?;
    validate_pair(basis, c, f)?;
    let mut best = l1_norm(f).min(f01q_norm(c, q)?);
    let mut scales: Vec<i32> = c
        .iter()
        .filter(|(i, _)| !i.label.is_father())
        .map(|(i, _)| i.scale)
        .collect();
    scales.sort_unstable();
    scales.dedup();
    for &tau in &scales {
        // smooth part: mother entries at scales >= tau
        let smooth = c.mother_slice(tau, i32::MAX);
        let g = f01q_norm(&smooth, q)?;
        // remainder: f minus the synthesized smooth part
        let smooth_grid = basis.synthesize(&smooth);
        let mut rest = f.clone();
        for (a, b) in rest.samples_mut().iter_mut().zip(smooth_grid.samples()) {
            *a -= b;
        }
        let candidate = l1_norm(&rest) + g;
        best = best.min(candidate);
    }
    Ok(best)
}

/// Empirical max over random fields and scales of
/// `||Q_j f||_{H1-wavelet} / ||f||_{WE1q}` (numerator is `f01q` at q = 2 of
/// the single-scale slice).
pub fn qj_h1_ratio(
    basis: &WaveletBasis,
    q: f64,
    trials: usize,
    seed: u64,
) -> Result<RatioStats, NormError> {
    if !(2.0..f64::INFINITY).contains(&q) {
        return Err(NormError::BadQ(q));
    }
    let mut stats = RatioStats::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = *basis.spec();
    for _ in 0..trials {
        let f = crate::grid::random_band_limited(&spec, &mut rng);
        let c = basis.analyze(&f)?;
        let denom = we1q_norm(basis, &c, &f, q)?.value;
        if denom <= 1e-300 {
            continue;
        }
        for j in spec.j_lo..=spec.j_hi {
            let slice = crate::wavelet::project_single_scale(&c, j);
            if slice.is_empty() {
                continue;
            }
            let num = f01q_norm(&slice, 2.0)?;
            stats.push(num / denom);
        }
    }
    Ok(stats)
}

/// Names for the report emitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    L1,
    Linf,
    F01q,
    F0infq,
    H1,
    We1q,
    Weinfq,
    Min1q,
    Sum1qUpper,
}

/// A named norm value with its parameters, ready for serialization.
#[derive(Debug, Clone, serde::Serialize)]
pub struct NormReport {
    pub name: NormKind,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<WindowChoice>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

impl NormReport {
    pub fn plain(name: NormKind, value: f64) -> Self {
        Self {
            name,
            value,
            q: None,
            witnesses: None,
            notes: None,
        }
    }

    pub fn with_q(name: NormKind, value: f64, q: f64) -> Self {
        Self {
            name,
            value,
            q: Some(q),
            witnesses: None,
            notes: None,
        }
    }
}

/// Randomized random-coefficient field on a small set of indices (test and
/// demo helper; deterministic for a given rng stream).
pub fn random_coefficients(
    basis: &WaveletBasis,
    entries: usize,
    rng: &mut ChaCha8Rng,
) -> CoefficientField {
    use crate::meyer::TensorLabel;
    use crate::wavelet::WaveletIndex;
    let spec = *basis.spec();
    let labels: Vec<TensorLabel> = TensorLabel::mothers(spec.dimension).collect();
    let mut c = CoefficientField::empty(spec);
    while c.len() < entries {
        let j = rng.gen_range(spec.j_lo..=spec.j_hi);
        let m = spec.translates_at(j) as u32;
        let mut k = [0u32; 2];
        for slot in k.iter_mut().take(spec.dimension) {
            *slot = rng.gen_range(0..m);
        }
        let label = labels[rng.gen_range(0..labels.len())];
        let re: f64 = rng.gen_range(-1.0..1.0);
        let im: f64 = rng.gen_range(-1.0..1.0);
        c.insert(
            WaveletIndex::new(label, j, k),
            Complex64::new(re, im),
        );
    }
    c
}
