//! The invariant suite behind the `verify` command: every structural identity
//! the rest of the toolkit leans on, run at configurable size with a
//! machine-readable verdict per check.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::experiments::{sub_seed, DemoError};
use crate::grid::{random_band_limited, GridSpec};
use crate::meyer::MeyerSystem;
use crate::norms::l1_norm;
use crate::riesz::{near_diagonal_gram, riesz_square_sum, RieszComponent};
use crate::wavelet::{op_t1, op_t2, project_scale_window, WaveletBasis, WaveletIndex};

/// One named check with its measured value and threshold.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    /// Stable identifier naming the property under test.
    pub check: &'static str,
    pub passed: bool,
    /// Measured quantity (an error, a defect, or a ratio, per the check).
    pub value: f64,
    /// Pass threshold the value is compared against.
    pub threshold: f64,
    /// Direction: true if pass means value <= threshold.
    pub upper_bound: bool,
}

impl CheckOutcome {
    fn upper(check: &'static str, value: f64, threshold: f64) -> Self {
        Self {
            check,
            passed: value <= threshold,
            value,
            threshold,
            upper_bound: true,
        }
    }

    fn lower(check: &'static str, value: f64, threshold: f64) -> Self {
        Self {
            check,
            passed: value >= threshold,
            value,
            threshold,
            upper_bound: false,
        }
    }
}

/// Verification sizes; the defaults finish in seconds.
#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub spec: GridSpec,
    pub seed: u64,
    pub gram_pairs: usize,
    pub parseval_trials: usize,
    pub square_sum_trials: usize,
}

impl VerifyConfig {
    pub fn desk_default(dimension: usize) -> Self {
        let spec = if dimension == 1 {
            GridSpec::with_default_window(1, 4, 11).expect("default verify spec")
        } else {
            GridSpec::with_default_window(2, 3, 8).expect("default verify spec")
        };
        Self {
            spec,
            seed: 7,
            gram_pairs: 60,
            parseval_trials: 10,
            square_sum_trials: 10,
        }
    }
}

/// Run the invariant suite. Returns one outcome per check.
pub fn run_suite(config: &VerifyConfig) -> Result<Vec<CheckOutcome>, DemoError> {
    let spec = config.spec;
    let system = MeyerSystem::new(spec.dimension)?;
    let basis = WaveletBasis::new(system.clone(), spec)?;
    let mut out = Vec::new();

    // profile partition identity
    {
        let mut worst = 0.0f64;
        for i in 0..10_000 {
            let xi = 2.0 * std::f64::consts::PI * i as f64 / 9_999.0;
            let a = system.phi_hat(xi);
            let b = system.phi_hat(xi - 2.0 * std::f64::consts::PI);
            worst = worst.max((a * a + b * b - 1.0 / (2.0 * std::f64::consts::PI)).abs());
        }
        out.push(CheckOutcome::upper("profile-partition-identity", worst, 1e-9));
    }

    // wavelet value at the origin against its closed-form bound
    {
        let r = system.psi_zero_report()?;
        out.push(CheckOutcome::lower(
            "wavelet-origin-lower-bound",
            r.margin,
            -1e-6,
        ));
    }

    // orthonormality of sampled basis pairs
    {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(config.seed, "gram"));
        let labels: Vec<_> = crate::meyer::TensorLabel::mothers(spec.dimension).collect();
        let mut worst = 0.0f64;
        for _ in 0..config.gram_pairs {
            let draw = |rng: &mut ChaCha8Rng| {
                let j = rng.gen_range(spec.j_lo..=spec.j_hi);
                let m = spec.translates_at(j) as u32;
                let mut k = [0u32; 2];
                for slot in k.iter_mut().take(spec.dimension) {
                    *slot = rng.gen_range(0..m);
                }
                let label = labels[rng.gen_range(0..labels.len())];
                WaveletIndex::new(label, j, k)
            };
            let a = draw(&mut rng);
            let b = draw(&mut rng);
            let g = basis.gram_inner(a, b, None)?;
            let expect = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((g.re - expect).abs().max(g.im.abs()));
        }
        out.push(CheckOutcome::upper("gram-orthonormality", worst, 1e-8));
    }

    // Parseval and reconstruction on random band-limited input
    {
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(config.seed, "parseval"));
        let mut worst_parseval = 0.0f64;
        let mut worst_round = 0.0f64;
        for _ in 0..config.parseval_trials {
            let f = random_band_limited(&spec, &mut rng);
            let s = f.to_spectral();
            let c = basis.analyze_spectral(&s);
            let l2 = s.l2_norm_sqr();
            worst_parseval = worst_parseval.max((c.l2_mass() - l2).abs() / l2);
            let back = basis.synthesize(&c);
            let amp = f.samples().iter().map(|v| v.norm()).fold(0.0, f64::max);
            let mut diff = 0.0f64;
            for (a, b) in f.samples().iter().zip(back.samples()) {
                diff = diff.max((a - b).norm());
            }
            worst_round = worst_round.max(diff / amp);
        }
        out.push(CheckOutcome::upper("parseval", worst_parseval, 1e-9));
        out.push(CheckOutcome::upper("analyze-synthesize-round-trip", worst_round, 1e-9));
    }

    // Riesz near-diagonality: vanishing at scale gap >= 2, overlap at gap 1
    {
        let j = 0.min(spec.j_hi - 2).max(spec.j_lo);
        let far = near_diagonal_gram(&basis, j, j + 2, 40, sub_seed(config.seed, "neardiag"))?;
        out.push(CheckOutcome::upper("riesz-near-diagonality-gap2", far, 1e-12));
        let adjacent =
            near_diagonal_gram(&basis, j, j + 1, 60, sub_seed(config.seed, "adjacent"))?;
        out.push(CheckOutcome::lower(
            "riesz-adjacent-scale-overlap",
            adjacent,
            1e-6,
        ));
    }

    // Riesz square-sum identity
    {
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(config.seed, "squaresum"));
        let mut worst = 0.0f64;
        for _ in 0..config.square_sum_trials {
            let f = random_band_limited(&spec, &mut rng);
            let g = riesz_square_sum(&f)?;
            let amp = f.samples().iter().map(|v| v.norm()).fold(0.0, f64::max);
            let mut diff = 0.0f64;
            for (a, b) in f.samples().iter().zip(g.samples()) {
                diff = diff.max((a + b).norm());
            }
            worst = worst.max(diff / amp);
        }
        out.push(CheckOutcome::upper("riesz-square-sum-identity", worst, 1e-10));
    }

    // anti-self-adjointness of each component
    {
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(config.seed, "antiadjoint"));
        let f = random_band_limited(&spec, &mut rng);
        let g = random_band_limited(&spec, &mut rng);
        let mut worst = 0.0f64;
        for ell in 1..=spec.dimension {
            let comp = RieszComponent::new(ell, spec.dimension)?;
            let rf = crate::riesz::riesz_apply(comp, &f).to_spectral();
            let rg = crate::riesz::riesz_apply(comp, &g).to_spectral();
            let lhs = rf.inner(&g.to_spectral())?;
            let rhs = f.to_spectral().inner(&rg)?;
            worst = worst.max((lhs + rhs).norm());
        }
        out.push(CheckOutcome::upper("riesz-anti-self-adjoint", worst, 1e-10));
    }

    // truncation slices partition the window projection
    {
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(config.seed, "partition"));
        let f = random_band_limited(&spec, &mut rng);
        let c = basis.analyze(&f)?;
        let s = spec.j_hi - 1;
        let n = (spec.j_hi - spec.j_lo).max(1);
        let p = project_scale_window(&c, s, n);
        let mut defect = 0usize;
        for t in 0..=n + 1 {
            let t1 = op_t1(&c, s, t, n).expect("t within range");
            let t2 = op_t2(&c, s, t, n).expect("t within range");
            if t1.len() + t2.len() != p.len() {
                defect += 1;
            }
        }
        out.push(CheckOutcome::upper(
            "truncation-partition",
            defect as f64,
            0.0,
        ));
    }

    // father family: lattice summability and projection L1 bound
    {
        let radius_sum = basis.father_summability(&[vec![0.0; spec.dimension]], 64, 1e-9)?;
        let doubled = basis.father_summability(&[vec![0.0; spec.dimension]], 128, 1e-9)?;
        out.push(CheckOutcome::upper(
            "father-lattice-summability",
            (doubled - radius_sum).abs(),
            1e-6,
        ));

        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(config.seed, "fatherproj"));
        let f = random_band_limited(&spec, &mut rng);
        let j0 = (spec.j_lo + 1).min(spec.j_hi);
        let p = basis.father_projection(&f, j0)?;
        let ratio = l1_norm(&p) / l1_norm(&f);
        out.push(CheckOutcome::upper("father-projection-l1-ratio", ratio, 10.0));
    }

    Ok(out)
}
