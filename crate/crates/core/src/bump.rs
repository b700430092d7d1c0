//! The smooth bump that seeds the wavelet profile.
//!
//! `f(x) = exp(-1/x^2)` for positive `x` (zero otherwise) gives the familiar
//! compactly-flat C-infinity transition `g`: the normalized cumulative integral
//! of `f1(x) = f(x) f(1-x)`. Everything downstream (the frequency profile, the
//! low-pass filter, the wavelet itself) evaluates through `g`.

use crate::quad::{integrate, QuadError};

/// `exp(-1/x^2)` on the positive axis, zero on the rest. Smooth across 0.
pub fn eval_f(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / (x * x)).exp()
    } else {
        0.0
    }
}

/// The symmetric integrand `f1(x) = f(x) f(1-x)`, supported on [0, 1].
pub fn eval_f1(x: f64) -> f64 {
    eval_f(x) * eval_f(1.0 - x)
}

/// Normalized cumulative integral of `f1`, evaluated directly by adaptive
/// quadrature. This is the slow reference path; profile evaluation goes
/// through the tabulated [`BumpProfile`].
pub fn eval_g(x: f64, tol: f64) -> Result<f64, QuadError> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    if x >= 1.0 {
        return Ok(1.0);
    }
    let total = integrate(eval_f1, 0.0, 1.0, tol)?.value;
    let part = integrate(eval_f1, 0.0, x, tol)?.value;
    Ok((part / total).clamp(0.0, 1.0))
}

/// Default number of table nodes.
pub const DEFAULT_NODES: usize = 2048;
/// Default absolute quadrature tolerance for the table build.
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;

/// Tabulated transition function `g` with certified accuracy.
///
/// Nodes are Chebyshev-Lobatto points mapped to [0, 1]; values come from
/// panel-by-panel adaptive quadrature of `f1`; evaluation is monotone cubic
/// Hermite interpolation with the analytic slope `f1(x)/normalizer` at each
/// node (Fritsch-Carlson limited, so monotonicity survives any rounding).
#[derive(Debug, Clone)]
pub struct BumpProfile {
    nodes: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
    normalizer: f64,
    quad_tol: f64,
}

impl BumpProfile {
    /// Build a table with the default resolution and tolerance.
    pub fn new() -> Result<Self, QuadError> {
        Self::with_accuracy(DEFAULT_NODES, DEFAULT_QUAD_TOL)
    }

    pub fn with_accuracy(node_count: usize, quad_tol: f64) -> Result<Self, QuadError> {
        if !quad_tol.is_finite() || quad_tol <= 0.0 {
            return Err(QuadError::BadTolerance(quad_tol));
        }
        let n = node_count.max(16);
        let mut nodes = Vec::with_capacity(n);
        for i in 0..n {
            let theta = std::f64::consts::PI * i as f64 / (n - 1) as f64;
            nodes.push(0.5 * (1.0 - theta.cos()));
        }
        nodes[0] = 0.0;
        nodes[n - 1] = 1.0;

        // Cumulative panel integrals; per-panel tolerance proportional to
        // panel width so the total stays within quad_tol.
        let mut cumulative = Vec::with_capacity(n);
        cumulative.push(0.0);
        let mut acc = 0.0f64;
        for i in 1..n {
            let (a, b) = (nodes[i - 1], nodes[i]);
            let panel_tol = (quad_tol * (b - a)).max(1e-300);
            let piece = integrate(eval_f1, a, b, panel_tol)?.value.max(0.0);
            acc += piece;
            cumulative.push(acc);
        }
        let normalizer = acc;

        let mut values: Vec<f64> = cumulative.iter().map(|v| v / normalizer).collect();
        // f1 is symmetric about 1/2 and the node set mirrors onto itself, so
        // averaging the two cumulative runs cancels accumulated quadrature
        // bias and pins g(x) + g(1-x) = 1 on the table.
        for i in 0..n / 2 {
            let j = n - 1 - i;
            let avg = 0.5 * (values[i] + 1.0 - values[j]);
            values[i] = avg;
            values[j] = 1.0 - avg;
        }
        values[0] = 0.0;
        values[n - 1] = 1.0;
        if n % 2 == 1 {
            values[n / 2] = 0.5;
        }
        for i in 1..n {
            if values[i] < values[i - 1] {
                values[i] = values[i - 1];
            }
        }

        let mut slopes: Vec<f64> = nodes.iter().map(|&x| eval_f1(x) / normalizer).collect();
        fritsch_carlson_limit(&nodes, &values, &mut slopes);

        Ok(Self {
            nodes,
            values,
            slopes,
            normalizer,
            quad_tol,
        })
    }

    /// Table evaluation of `g`. Arguments outside [0, 1] clamp to {0, 1}.
    pub fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= 1.0 {
            return 1.0;
        }
        let i = match self
            .nodes
            .binary_search_by(|probe| probe.partial_cmp(&x).unwrap())
        {
            Ok(exact) => return self.values[exact],
            Err(ins) => ins - 1,
        };
        let h = self.nodes[i + 1] - self.nodes[i];
        let t = (x - self.nodes[i]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        (h00 * self.values[i]
            + h10 * h * self.slopes[i]
            + h01 * self.values[i + 1]
            + h11 * h * self.slopes[i + 1])
            .clamp(0.0, 1.0)
    }

    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    pub fn quad_tol(&self) -> f64 {
        self.quad_tol
    }

    pub fn sample_nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn sample_values(&self) -> &[f64] {
        &self.values
    }
}

/// Clamp Hermite slopes into the Fritsch-Carlson monotonicity region.
fn fritsch_carlson_limit(nodes: &[f64], values: &[f64], slopes: &mut [f64]) {
    let n = nodes.len();
    for i in 0..n - 1 {
        let h = nodes[i + 1] - nodes[i];
        let delta = (values[i + 1] - values[i]) / h;
        if delta == 0.0 {
            slopes[i] = 0.0;
            slopes[i + 1] = 0.0;
            continue;
        }
        let alpha = slopes[i] / delta;
        let beta = slopes[i + 1] / delta;
        let r = alpha * alpha + beta * beta;
        if r > 9.0 {
            let tau = 3.0 / r.sqrt();
            slopes[i] = tau * alpha * delta;
            slopes[i + 1] = tau * beta * delta;
        }
    }
}
