//! Property tests for the structural invariants: homogeneity and
//! monotonicity of the coefficient norms, the truncation partition, and the
//! analyze/synthesize identity on arbitrary coefficient fields.

use num_complex::Complex64;
use proptest::prelude::*;

use tlwavelab::grid::GridSpec;
use tlwavelab::meyer::{MeyerSystem, TensorLabel};
use tlwavelab::norms::{f01q_norm, f0infq_functional};
use tlwavelab::wavelet::{
    op_t1, op_t2, project_scale_window, CoefficientField, WaveletBasis, WaveletIndex,
};

fn test_spec() -> GridSpec {
    GridSpec::with_default_window(1, 3, 9).unwrap()
}

/// Strategy: a small coefficient field with entries at arbitrary valid
/// mother indices of the test spec.
fn arb_field() -> impl Strategy<Value = CoefficientField> {
    let spec = test_spec();
    let entry = (
        spec.j_lo..=spec.j_hi,
        0u32..64,
        -1.0f64..1.0,
        -1.0f64..1.0,
    );
    proptest::collection::vec(entry, 1..10).prop_map(move |rows| {
        let mut c = CoefficientField::empty(spec);
        let label = TensorLabel::mothers(1).next().unwrap();
        for (j, kraw, re, im) in rows {
            let m = spec.translates_at(j) as u32;
            let idx = WaveletIndex::new(label, j, [kraw % m, 0]);
            c.insert(idx, Complex64::new(re, im));
        }
        c
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coefficient_norms_are_homogeneous(c in arb_field(), alpha in 0.01f64..100.0, q in 1.1f64..6.0) {
        let scaled = c.scale(alpha);
        let a = f01q_norm(&c, q).unwrap();
        let b = f01q_norm(&scaled, q).unwrap();
        prop_assert!((b - alpha * a).abs() <= 1e-12 * b.max(1.0));
        let a2 = f0infq_functional(&c, q).unwrap();
        let b2 = f0infq_functional(&scaled, q).unwrap();
        prop_assert!((b2 - alpha * a2).abs() <= 1e-12 * b2.max(1.0));
    }

    #[test]
    fn carleson_functional_monotone_in_entries(c in arb_field(), q in 1.1f64..6.0) {
        let spec = *c.spec();
        let base = f0infq_functional(&c, q).unwrap();
        let mut bigger = c.clone();
        // add (not replace) an entry: find a free slot at the finest scale
        let label = TensorLabel::mothers(1).next().unwrap();
        let m = spec.translates_at(spec.j_hi) as u32;
        let free = (0..m)
            .map(|k| WaveletIndex::new(label, spec.j_hi, [k, 0]))
            .find(|idx| bigger.get(idx).is_none())
            .expect("small fields leave free slots");
        bigger.insert(free, Complex64::new(0.25, -0.1));
        let grown = f0infq_functional(&bigger, q).unwrap();
        prop_assert!(grown + 1e-12 >= base);
    }

    #[test]
    fn truncation_slices_partition_for_every_split(c in arb_field(), s in -3i32..5, n in 1i32..8) {
        let p = project_scale_window(&c, s, n);
        for t in 0..=n + 1 {
            let t1 = op_t1(&c, s, t, n).unwrap();
            let t2 = op_t2(&c, s, t, n).unwrap();
            prop_assert_eq!(t1.len() + t2.len(), p.len());
            for (idx, v) in t1.iter().chain(t2.iter()) {
                prop_assert_eq!(p.get(idx), Some(*v));
            }
        }
    }

    #[test]
    fn analysis_inverts_synthesis_on_coefficients(c in arb_field()) {
        // The periodized system is an orthonormal family, so analyze after
        // synthesize restores the coefficients exactly (up to rounding).
        let basis = WaveletBasis::new(MeyerSystem::new(1).unwrap(), *c.spec()).unwrap();
        let f = basis.synthesize(&c);
        let back = basis.analyze(&f).unwrap();
        let mut worst = 0.0f64;
        for (idx, v) in c.iter() {
            let w = back.get(idx).unwrap_or(Complex64::new(0.0, 0.0));
            worst = worst.max((v - w).norm());
        }
        for (idx, w) in back.iter() {
            if c.get(idx).is_none() {
                worst = worst.max(w.norm());
            }
        }
        prop_assert!(worst <= 1e-9, "coefficient mismatch {}", worst);
    }
}
