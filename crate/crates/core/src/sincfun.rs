//! Geometry of f(t) = |sin t / t|: block maxima, level-set roots, and grid
//! verifiers for the elementary inequalities about it.
//!
//! Block k is the interval (kπ, (k+1)π). Every root here is found by plain
//! bisection, which keeps its bracket even where f is flat.

use crate::error::{domain, Error, Result};
use crate::quadrature::series::EvenSeries;
use crate::report::{GridSpec, MarginTracker, VerificationReport};
use serde_json::json;
use std::f64::consts::PI;
use std::sync::LazyLock;

/// |sin t| / t for t > 0, with the limit value 1 at t = 0.
pub fn sinc_abs(t: f64) -> f64 {
    if t == 0.0 {
        1.0
    } else {
        (t.sin() / t).abs()
    }
}

/// sin t / t with sinc(0) = 1.
pub fn sinc(t: f64) -> f64 {
    if t == 0.0 {
        1.0
    } else {
        t.sin() / t
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SincExtremum {
    pub k: usize,
    pub t_bar: f64,
    pub y_k: f64,
}

/// Roots of f(t) = y in block k. Block 0 has only the right root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelRoots {
    pub y: f64,
    pub k: usize,
    pub t_minus: Option<f64>,
    pub t_plus: f64,
}

/// Bisection for a sign change of `h` on [lo, hi]; runs until the midpoint
/// is no longer strictly inside the bracket.
pub(crate) fn bisect<F: Fn(f64) -> f64>(h: F, mut lo: f64, mut hi: f64) -> f64 {
    let h_lo = h(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            break;
        }
        let v = h(mid);
        if v == 0.0 {
            return mid;
        }
        if (v > 0.0) == (h_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn compute_max(k: usize) -> SincExtremum {
    if k == 0 {
        return SincExtremum {
            k,
            t_bar: 0.0,
            y_k: 1.0,
        };
    }
    // f'(t) vanishes where t cos t = sin t; that root sits in the first half
    // of the block, where t cos t − sin t changes sign.
    let lo = k as f64 * PI;
    let t_bar = bisect(|t| t * t.cos() - t.sin(), lo, lo + 0.5 * PI);
    SincExtremum {
        k,
        t_bar,
        y_k: sinc_abs(t_bar),
    }
}

const CACHED: usize = 200;

static MAXIMA: LazyLock<Vec<SincExtremum>> = LazyLock::new(|| (0..=CACHED).map(compute_max).collect());

/// The unique local maximum of f on block k (k = 0 gives t̄ = 0, y = 1).
pub fn local_max(k: usize) -> SincExtremum {
    if k <= CACHED {
        MAXIMA[k]
    } else {
        compute_max(k)
    }
}

/// Roots of f(t) = y on block k.
pub fn level_roots(y: f64, k: usize) -> Result<LevelRoots> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(domain("level_roots: y", y, "(0, y_k)"));
    }
    let ext = local_max(k);
    if y >= ext.y_k {
        return Err(Error::LevelAboveMax {
            y,
            k,
            y_max: ext.y_k,
        });
    }
    let lo = k as f64 * PI;
    let hi = (k + 1) as f64 * PI;
    let h = |t: f64| sinc_abs(t) - y;
    if k == 0 {
        return Ok(LevelRoots {
            y,
            k,
            t_minus: None,
            t_plus: bisect(h, 0.0, PI),
        });
    }
    Ok(LevelRoots {
        y,
        k,
        t_minus: Some(bisect(h, lo, ext.t_bar)),
        t_plus: bisect(h, ext.t_bar, hi),
    })
}

/// The inequalities about f that the rest of the argument relies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SincLemma {
    /// sin t / t < e^{−t²/6} on (0, π).
    FBelowGaussian,
    /// |cos t − sin t / t| < 11/10.
    DerivativeBound,
    /// 1/((k+½)π) ≤ y_k ≤ 1/(kπ), and y_1 < e^{−3/2}.
    ExtremaBounds,
    /// For y < 1/(30π): t₀ > 0.98π and t₁⁺ > 1.97π.
    RootLowerBounds,
    /// 1/sin²x > 1/x² + 1/(π−x)² on (0, π).
    InverseSinSq,
    /// |sin t|/(t(t−(k−1)π)) nonincreasing on ((k−1)π, kπ).
    SlopeMonotone,
    /// |sin t|/(t(kπ−t)) unimodal on ((k−1)π, kπ).
    SlopeUnimodal,
}

impl SincLemma {
    pub const ALL: [SincLemma; 7] = [
        SincLemma::FBelowGaussian,
        SincLemma::DerivativeBound,
        SincLemma::ExtremaBounds,
        SincLemma::RootLowerBounds,
        SincLemma::InverseSinSq,
        SincLemma::SlopeMonotone,
        SincLemma::SlopeUnimodal,
    ];

    pub fn id(self) -> &'static str {
        match self {
            SincLemma::FBelowGaussian => "sinc.f_below_gaussian",
            SincLemma::DerivativeBound => "sinc.derivative_bound",
            SincLemma::ExtremaBounds => "sinc.extrema_bounds",
            SincLemma::RootLowerBounds => "sinc.root_lower_bounds",
            SincLemma::InverseSinSq => "sinc.inverse_sin_sq",
            SincLemma::SlopeMonotone => "sinc.slope_monotone",
            SincLemma::SlopeUnimodal => "sinc.slope_unimodal",
        }
    }
}

/// Rounding allowance for grid margins.
pub const LEMMA_TOLERANCE: f64 = 1e-12;

/// Interior points of (a, b), `per_unit` per unit length (at least 2).
fn open_grid(a: f64, b: f64, per_unit: usize) -> impl Iterator<Item = f64> {
    let n = (((b - a) * per_unit as f64).ceil() as usize).max(2);
    let h = (b - a) / n as f64;
    (1..n).map(move |i| a + h * i as f64)
}

/// e^{−t²/6} − sin t / t, accurate in relative terms near 0 where both
/// sides agree to fourth order.
fn gaussian_minus_sinc(t: f64) -> f64 {
    static LN_SINC: LazyLock<EvenSeries> = LazyLock::new(|| EvenSeries::sinc(1.0, 24).ln());
    if t < 1.0 {
        // −t²/6 − ln sinc t = −Σ_{k≥2} l_k t^{2k}
        let x = t * t;
        let mut r = 0.0;
        for &c in LN_SINC.c[2..].iter().rev() {
            r = r * x + c;
        }
        let d = -r * x * x;
        sinc(t) * d.exp_m1()
    } else {
        (-t * t / 6.0).exp() - sinc(t)
    }
}

/// Check one lemma on a grid with `per_unit` points per unit length
/// (1000 or more is the intended resolution).
pub fn verify_sinc_lemma(id: SincLemma, per_unit: usize) -> VerificationReport {
    let per_unit = per_unit.max(1);
    let mut m = MarginTracker::new();
    let grid = match id {
        SincLemma::FBelowGaussian => {
            let mut n = 0;
            for t in open_grid(0.0, PI, per_unit) {
                n += 1;
                m.push(gaussian_minus_sinc(t), || json!({ "t": t }));
            }
            GridSpec::new(format!("t in (0, pi), {per_unit} per unit"), n)
        }
        SincLemma::DerivativeBound => {
            // For t > 100 the bound |cos t − sin t/t| ≤ 1 + 1/t holds
            // analytically, so the grid stops there.
            let mut n = 0;
            for t in open_grid(0.0, 100.0, per_unit).chain(std::iter::once(100.0)) {
                n += 1;
                let v = (t.cos() - t.sin() / t).abs();
                m.push(1.1 - v, || json!({ "t": t, "value": v }));
            }
            GridSpec::new(format!("t in (0, 100], {per_unit} per unit"), n)
        }
        SincLemma::ExtremaBounds => {
            let kmax = per_unit;
            for k in 1..=kmax {
                let e = local_max(k);
                let lo = 1.0 / ((k as f64 + 0.5) * PI);
                let hi = 1.0 / (k as f64 * PI);
                m.push(e.y_k - lo, || json!({ "k": k, "side": "lower" }));
                m.push(hi - e.y_k, || json!({ "k": k, "side": "upper" }));
            }
            m.push((-1.5f64).exp() - local_max(1).y_k, || json!({ "k": 1, "side": "exp(-3/2)" }));
            GridSpec::new(format!("k = 1..{kmax}"), kmax)
        }
        SincLemma::RootLowerBounds => {
            // Both roots move left as y grows, so the grid is refined
            // towards the right endpoint.
            let top = 1.0 / (30.0 * PI);
            let n = (per_unit / 10).max(50);
            let ys = (1..n)
                .map(|i| top * (1.0 - (1.0 - i as f64 / n as f64).powi(3)))
                .chain(std::iter::once(top * (1.0 - 1e-12)));
            for y in ys {
                match (level_roots(y, 0), level_roots(y, 1)) {
                    (Ok(r0), Ok(r1)) => {
                        m.push(r0.t_plus - 0.98 * PI, || json!({ "y": y, "root": "t0" }));
                        m.push(r1.t_plus - 1.97 * PI, || json!({ "y": y, "root": "t1" }));
                    }
                    _ => m.push(f64::NAN, || json!({ "y": y, "error": "no root" })),
                }
            }
            GridSpec::new("y in (0, 1/(30 pi)), cubic refinement at the top", n)
        }
        SincLemma::InverseSinSq => {
            let mut n = 0;
            for x in open_grid(0.0, PI, per_unit) {
                n += 1;
                let s = x.sin();
                let v = 1.0 / (s * s) - 1.0 / (x * x) - 1.0 / ((PI - x) * (PI - x));
                m.push(v, || json!({ "x": x }));
            }
            GridSpec::new(format!("x in (0, pi), {per_unit} per unit"), n)
        }
        SincLemma::SlopeMonotone | SincLemma::SlopeUnimodal => {
            let monotone = id == SincLemma::SlopeMonotone;
            let pts = (per_unit * 10).max(10_000);
            for k in 1..=20usize {
                let a = (k - 1) as f64 * PI;
                let b = k as f64 * PI;
                let g = |t: f64| {
                    let d = if monotone { t - a } else { b - t };
                    t.sin().abs() / (t * d)
                };
                let h = (b - a) / (pts + 1) as f64;
                let vals: Vec<f64> = (1..=pts).map(|i| g(a + h * i as f64)).collect();
                if monotone {
                    for i in 0..vals.len() - 1 {
                        m.push(vals[i] - vals[i + 1], || json!({ "k": k, "t": a + h * (i + 1) as f64 }));
                    }
                } else {
                    let peak = vals
                        .iter()
                        .enumerate()
                        .max_by(|x, y| x.1.total_cmp(y.1))
                        .map(|(i, _)| i)
                        .unwrap_or(0);
                    for i in 0..vals.len() - 1 {
                        let d = if i < peak {
                            vals[i + 1] - vals[i]
                        } else {
                            vals[i] - vals[i + 1]
                        };
                        m.push(d, || json!({ "k": k, "t": a + h * (i + 1) as f64, "peak_index": peak }));
                    }
                }
            }
            GridSpec::new(format!("k = 1..20, {pts} interior points per block"), 20 * pts)
        }
    };
    m.finish(id.id(), grid, LEMMA_TOLERANCE)
}
