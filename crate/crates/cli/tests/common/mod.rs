//! Brute-force oracles for the small-instance norm checks, independent of the
//! tree-walking implementations: plain integer containment logic over dense
//! cell and cube enumerations.

use tlwavelab::wavelet::CoefficientField;

/// Dense evaluation of the `f01q` integral for small 1-D fields: partition
/// the torus into cells at the finest populated scale, stack the q-powers of
/// every covering cube per cell, integrate cell by cell.
pub fn dense_f01q(c: &CoefficientField, q: f64) -> f64 {
    if c.is_empty() {
        return 0.0;
    }
    assert_eq!(c.spec().dimension, 1, "oracle is 1-D");
    let jmax = c.iter().map(|(i, _)| i.scale).max().unwrap();
    let l = c.spec().period() as i64;
    let cells = (l << jmax.max(0)) >> (-jmax.min(0)) as u32;
    let cells = cells as u64;
    let cell_vol = c.spec().period() / cells as f64;
    let mut total = 0.0;
    for cell in 0..cells {
        let mut stack = 0.0f64;
        for (idx, v) in c.iter() {
            // cube (j, k) covers cell i at scale jmax iff i >> (jmax - j) == k
            let shift = (jmax - idx.scale) as u32;
            if (cell >> shift) == u64::from(idx.translate[0]) {
                let w = ((idx.scale as f64) / 2.0).exp2() * v.norm();
                stack += w.powf(q);
            }
        }
        total += cell_vol * stack.powf(1.0 / q);
    }
    total
}

/// Dense evaluation of the Carleson-type sup for small 1-D fields: every
/// dyadic cube from the whole torus down to the finest populated scale.
pub fn dense_f0infq(c: &CoefficientField, q: f64) -> f64 {
    if c.is_empty() {
        return 0.0;
    }
    assert_eq!(c.spec().dimension, 1, "oracle is 1-D");
    let spec = c.spec();
    let jmax = c.iter().map(|(i, _)| i.scale).max().unwrap();
    let torus_scale = -(spec.period_exp as i32);
    let mut best = 0.0f64;
    for js in torus_scale..=jmax {
        let count = spec.translates_at(js) as u64;
        let vol = (-(js as f64)).exp2();
        for ks in 0..count {
            let mut mass = 0.0;
            for (idx, v) in c.iter() {
                if idx.scale < js {
                    continue;
                }
                let shift = (idx.scale - js) as u32;
                if (u64::from(idx.translate[0]) >> shift) == ks {
                    mass += ((idx.scale as f64) * (q / 2.0 - 1.0)).exp2() * v.norm().powf(q);
                }
            }
            if mass > 0.0 {
                best = best.max((mass / vol).powf(1.0 / q));
            }
        }
    }
    best
}
