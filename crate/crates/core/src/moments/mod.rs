//! E|Σ a_j U_j|^p for independent U_j uniform on [−1, 1], by three
//! independent engines: Fourier quadrature, the exact piecewise-polynomial
//! density, and Monte Carlo. Also closed forms for two summands and exact
//! even moments.

mod density;
mod even;
mod fourier;
mod mc;

pub use density::{density, density_of_scales, moment_density, Piece, PiecewisePolyDensity, MAX_PIECES, MAX_TERMS};
pub use even::{even_moment, even_moment_rational, MAX_EVEN_K};
pub use fourier::{moment_fourier, moment_fourier_with};
pub use mc::{moment_mc, McEstimate, MCConfig};

use crate::error::{domain, Error, Result};
use serde::Serialize;

/// A coefficient vector in canonical form: positive, unit Euclidean norm,
/// sorted in decreasing order.
///
/// Signs are irrelevant because each U_j is symmetric, so construction takes
/// absolute values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Weights {
    a: Vec<f64>,
}

impl Weights {
    pub fn new(raw: &[f64]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::Weights("empty weight vector".into()));
        }
        if let Some(bad) = raw.iter().find(|v| !v.is_finite() || **v == 0.0) {
            return Err(Error::Weights(format!("weight {bad} is zero or not finite")));
        }
        // Scale by the largest entry first so the norm cannot overflow.
        let big = raw.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let norm = raw.iter().map(|v| (v / big).powi(2)).sum::<f64>().sqrt() * big;
        let mut a: Vec<f64> = raw.iter().map(|v| v.abs() / norm).collect();
        a.sort_by(|x, y| y.total_cmp(x));
        Ok(Self { a })
    }

    pub fn equal(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Weights("need at least one weight".into()));
        }
        Ok(Self {
            a: vec![1.0 / (n as f64).sqrt(); n],
        })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.a
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// Σ a_j, the half-width of the support of Σ a_j U_j.
    pub fn l1(&self) -> f64 {
        self.a.iter().sum()
    }
}

/// E|U₁ + x U₂|^p = ((1+x)^{2+p} − (1−x)^{2+p}) / (2 (1+p)(2+p) x).
pub fn moment_closed_pair(x: f64, p: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(domain("moment_closed_pair: x", x, "(0, 1]"));
    }
    if !(p > 0.0) || !p.is_finite() {
        return Err(domain("moment_closed_pair: p", p, "(0, inf)"));
    }
    let r = 2.0 + p;
    if x < 0.05 {
        // Odd binomial terms of the numerator: 2 Σ_{j odd} C(r, j) x^j.
        let mut c = r; // C(r, 1)
        let mut sum = 0.0;
        let mut xp = 1.0;
        for j in (1..24).step_by(2) {
            sum += c * xp;
            let j = j as f64;
            c *= (r - j) * (r - j - 1.0) / ((j + 1.0) * (j + 2.0));
            xp *= x * x;
        }
        return Ok(sum / ((1.0 + p) * r));
    }
    Ok(((1.0 + x).powf(r) - (1.0 - x).powf(r)) / (2.0 * (1.0 + p) * r * x))
}
