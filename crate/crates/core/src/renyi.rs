//! Rényi entropies h_p = log(∫ f^p)/(1 − p) of the exact densities of
//! Σ a_j U_j, the Gaussian reference values, and the two-sided comparison
//! log 2 ≤ h_p(Σ a_j U_j) ≤ h_p(Z/√3).
//!
//! Next to the support edge the density vanishes like z^{k₀}, so f^p has an
//! algebraic endpoint singularity. The edge piece is written as z^{k₀} r(z)
//! with r(0) > 0 and integrated after z = w·v^m, which turns the singular
//! factor into a smooth power of v. Everything is evaluated in logarithms
//! relative to max f so that large p neither overflows nor underflows.

use crate::error::{domain, Error, Result};
use crate::moments::{density, even_moment, Piece, PiecewisePolyDensity, Weights, MAX_EVEN_K};
use crate::quadrature::{adapt, QuadratureResult};
use crate::report::{GridSpec, MarginTracker, VerificationReport};
use serde::Serialize;
use serde_json::json;
use std::f64::consts::{LN_2, PI};

/// Target error of ∫ f^p relative to its size.
const REL_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RenyiValue {
    pub p: f64,
    /// Entropy in nats.
    pub value: f64,
    pub err_bound: f64,
}

/// A piece split as z^{k0} r(z) on [0, width], r(0) ≠ 0.
struct Split<'a> {
    width: f64,
    k0: usize,
    r: &'a [f64],
}

fn split<'a>(piece: &Piece<'a>) -> Split<'a> {
    let w = piece.width;
    let scale: f64 = piece
        .poly
        .iter()
        .enumerate()
        .map(|(k, c)| c.abs() * w.powi(k as i32))
        .sum();
    let k0 = piece
        .poly
        .iter()
        .enumerate()
        .position(|(k, c)| c.abs() * w.powi(k as i32) > 4.0 * f64::EPSILON * scale)
        .unwrap_or(0);
    Split {
        width: w,
        k0,
        r: &piece.poly[k0..],
    }
}

fn horner(c: &[f64], z: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * z + v)
}

/// Exponent of the substitution: with α the power of z at 0, v^{m(α+1)−1}
/// is at least five times differentiable.
fn sub_power(alpha: f64) -> i32 {
    if alpha == 0.0 {
        1
    } else {
        (6.0 / (alpha + 1.0)).ceil().clamp(1.0, 60.0) as i32
    }
}

/// ∫_0^w h(z, ln f(z)) dz for a piece, with the endpoint substitution; h
/// receives ln f at the mapped point and returns the integrand without the
/// Jacobian.
fn piece_integral<H: Fn(f64) -> f64>(s: &Split, alpha: f64, h: H, tol: f64) -> QuadratureResult {
    let m = sub_power(alpha);
    let (w, k0) = (s.width, s.k0 as f64);
    let lw = w.ln();
    let g = |v: f64| {
        if v <= 0.0 {
            return 0.0;
        }
        let lv = v.ln();
        let z = w * v.powi(m);
        let rv = horner(s.r, z);
        if !(rv > 0.0) {
            return 0.0;
        }
        let ln_f = k0 * (lw + m as f64 * lv) + rv.ln();
        // dz = m w v^{m−1} dv
        h(ln_f) * m as f64 * w * (lv * (m - 1) as f64).exp()
    };
    adapt(&g, 0.0, 1.0, tol, 400)
}

/// ln max f over the breakpoints; the densities here are symmetric and
/// unimodal, so this is ln f(0).
fn ln_max(d: &PiecewisePolyDensity) -> f64 {
    d.breakpoints().iter().map(|&x| d.eval(x)).fold(0.0, f64::max).ln()
}

/// ln ∫ f^p with an error bound on ∫ (f/max f)^p.
fn ln_power_integral(d: &PiecewisePolyDensity, p: f64) -> (f64, f64, f64) {
    let lm = ln_max(d);
    let (lo, hi) = d.support();
    let pieces: Vec<Piece> = d.left_half().collect();
    let tol = REL_TOL * (hi - lo) / pieces.len() as f64;
    let mut total = QuadratureResult::exact(0.0);
    for piece in &pieces {
        let s = split(piece);
        let r = piece_integral(&s, p * s.k0 as f64, |lf| (p * (lf - lm)).exp(), tol);
        total = total.plus(r);
    }
    let j = 2.0 * total.value;
    (p * lm + j.ln(), 2.0 * total.err_bound, j)
}

/// h_p of a density for p > 0, p ≠ 1; p = ∞ gives −log max f.
pub fn renyi_entropy(d: &PiecewisePolyDensity, p: f64) -> Result<RenyiValue> {
    if !(p > 0.0) || p == 1.0 || p.is_nan() {
        return Err(domain("renyi_entropy: p", p, "(0, 1) or (1, inf]"));
    }
    if p.is_infinite() {
        return Ok(RenyiValue {
            p,
            value: -ln_max(d),
            err_bound: 4.0 * f64::EPSILON,
        });
    }
    let (ln_j, err, j) = ln_power_integral(d, p);
    if !ln_j.is_finite() {
        return Err(Error::NonConvergence {
            what: "renyi_entropy: power integral",
            terms: d.num_pieces(),
        });
    }
    let value = ln_j / (1.0 - p);
    Ok(RenyiValue {
        p,
        value,
        err_bound: err / (j * (1.0 - p).abs()) + 4.0 * f64::EPSILON * value.abs(),
    })
}

/// h_1 = −∫ f log f.
pub fn shannon_entropy(d: &PiecewisePolyDensity) -> Result<RenyiValue> {
    let (lo, hi) = d.support();
    let pieces: Vec<Piece> = d.left_half().collect();
    let tol = REL_TOL * (hi - lo) / pieces.len() as f64;
    let mut total = QuadratureResult::exact(0.0);
    for piece in &pieces {
        let s = split(piece);
        let r = piece_integral(&s, s.k0 as f64, |lf| -lf * lf.exp(), tol);
        total = total.plus(r);
    }
    let value = 2.0 * total.value;
    if !value.is_finite() {
        return Err(Error::NonConvergence {
            what: "shannon_entropy",
            terms: d.num_pieces(),
        });
    }
    Ok(RenyiValue {
        p: 1.0,
        value,
        err_bound: 2.0 * total.err_bound,
    })
}

/// h_p of N(0, variance): ½ log(2π·variance) − log p/(2(1 − p)); the p = 1
/// and p = ∞ limits are ½ log(2πe·variance) and ½ log(2π·variance).
pub fn renyi_gaussian(variance: f64, p: f64) -> Result<f64> {
    if !(variance > 0.0) || !variance.is_finite() {
        return Err(domain("renyi_gaussian: variance", variance, "(0, inf)"));
    }
    if !(p > 0.0) || p.is_nan() {
        return Err(domain("renyi_gaussian: p", p, "(0, inf]"));
    }
    let base = 0.5 * (2.0 * PI * variance).ln();
    Ok(if p == 1.0 {
        base + 0.5
    } else if p.is_infinite() {
        base
    } else {
        base - p.ln() / (2.0 * (1.0 - p))
    })
}

/// log 2 ≤ h_p(Σ a_j U_j) ≤ h_p(Z/√3) for every p in the grid (0 < p < 1),
/// with slack 1e-9. Weight vectors up to 12 entries.
pub fn sandwich_check(w: &Weights, p_grid: &[f64]) -> Result<VerificationReport> {
    if w.len() > 12 {
        return Err(Error::Size {
            what: "sandwich_check weights",
            size: w.len(),
            limit: 12,
        });
    }
    if let Some(&bad) = p_grid.iter().find(|&&p| !(p > 0.0 && p < 1.0)) {
        return Err(domain("sandwich_check: p", bad, "(0, 1)"));
    }
    let d = density(w)?;
    let mut t = MarginTracker::new();
    for &p in p_grid {
        let h = renyi_entropy(&d, p)?;
        let top = renyi_gaussian(1.0 / 3.0, p)?;
        let lower = h.value - LN_2;
        let upper = top - h.value;
        let side = if lower <= upper { "lower" } else { "upper" };
        t.push(lower.min(upper), || {
            json!({"p": p, "h_p": h.value, "err": h.err_bound, "gaussian": top, "tight_side": side})
        });
    }
    let grid = GridSpec::new(format!("n = {}, p in {:?}", w.len(), p_grid), p_grid.len());
    Ok(t.finish("renyi.sandwich", grid, 1e-9))
}

/// (2k − 1)!!/3^k, the 2k-th moment of N(0, 1/3).
fn gaussian_even_moment(k: usize) -> f64 {
    (1..=k).map(|i| (2 * i - 1) as f64 / 3.0).product()
}

/// The two ingredients of the upper bound at one p ∈ (0, 1):
/// E X^{2k} ≤ (2k−1)!!/3^k for k = 1..k_max, and the integral inequality
/// ∫ f g^{p−1} ≤ ∫ g^p they imply (g the N(0, 1/3) density), evaluated
/// directly. Both margins are relative; k = 1 is an equality.
pub fn holder_moment_route_check(w: &Weights, p: f64, k_max: usize) -> Result<VerificationReport> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain("holder_moment_route_check: p", p, "(0, 1)"));
    }
    if !(1..=15).contains(&k_max) {
        return Err(domain("holder_moment_route_check: k_max", k_max as f64, "[1, 15]"));
    }
    debug_assert!(k_max <= MAX_EVEN_K);
    let mut moments = MarginTracker::new();
    for k in 1..=k_max {
        let e = even_moment(w, k)?;
        let g = gaussian_even_moment(k);
        moments.push((g - e) / g, || json!({"k": k, "even_moment": e, "gaussian": g}));
    }
    let moments = moments.finish(
        "renyi.holder.even_moments",
        GridSpec::new(format!("k = 1..{k_max}"), k_max),
        1e-12,
    );

    // With the common factor (3/2π)^{(p−1)/2} removed, ∫ g^p = p^{−1/2} and
    // ∫ f g^{p−1} = ∫ f(x) e^{3(1−p)x²/2} dx.
    let d = density(w)?;
    let c = 1.5 * (1.0 - p);
    let pieces: Vec<Piece> = d.left_half().collect();
    let tol = 1e-13 / pieces.len() as f64;
    let mut lhs = QuadratureResult::exact(0.0);
    for piece in &pieces {
        let f = |z: f64| {
            let x = piece.left + z;
            piece.eval_local(z) * (c * x * x).exp()
        };
        lhs = lhs.plus(adapt(&f, 0.0, piece.width, tol, 100));
    }
    let lhs = lhs.scale(2.0);
    let rhs = p.powf(-0.5);
    let integral = VerificationReport::new(
        "renyi.holder.integral",
        GridSpec::new(format!("p = {p}"), 1),
        (rhs - lhs.upper()) / rhs,
        0.0,
        json!({"p": p, "mixed": lhs.value, "gaussian": rhs, "err": lhs.err_bound}),
    );
    Ok(VerificationReport::merge("renyi.holder_route", &[moments, integral]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_semi_infinite;
    use crate::specfun::Accuracy;
    use proptest::prelude::*;

    fn pair() -> PiecewisePolyDensity {
        density(&Weights::new(&[1.0, 1.0]).unwrap()).unwrap()
    }

    #[test]
    fn uniform_is_log_two() {
        let d = density(&Weights::new(&[1.0]).unwrap()).unwrap();
        for &p in &[0.01, 0.3, 0.9, 1.7, 25.0, f64::INFINITY] {
            let h = renyi_entropy(&d, p).unwrap();
            assert!((h.value - LN_2).abs() < 1e-14, "p={p}: {}", h.value);
        }
        assert!((shannon_entropy(&d).unwrap().value - LN_2).abs() < 1e-14);
    }

    #[test]
    fn triangle_closed_forms() {
        // f(x) = (√2 − |x|)/2, ∫ f^p = 2^{(3−p)/2}/(p+1)
        let d = pair();
        for &p in &[0.1, 0.5, 0.9, 3.0] {
            let want = ((1.5 - 0.5 * p) * LN_2 - p.ln_1p()) / (1.0 - p);
            let h = renyi_entropy(&d, p).unwrap();
            assert!((h.value - want).abs() < 1e-12, "p={p}: {} vs {want}", h.value);
            assert!(h.err_bound < 1e-9);
        }
        let h = renyi_entropy(&d, 0.5).unwrap().value;
        assert!((h - 2.0 * (2f64.powf(1.25) / 1.5).ln()).abs() < 1e-12);
        // triangle of half-width b: h₁ = ½ + log b
        let s = shannon_entropy(&d).unwrap().value;
        assert!((s - (0.5 + 0.5 * LN_2)).abs() < 1e-12, "{s}");
    }

    #[test]
    fn midpoint_rule_oracle() {
        let d = density(&Weights::new(&[5.0, 4.0, 2.0, 2.0, 1.0]).unwrap()).unwrap();
        let (lo, hi) = d.support();
        let n = 400_000;
        let dx = (hi - lo) / n as f64;
        for &p in &[0.5, 0.8, 2.5] {
            let j: f64 = (0..n).map(|k| d.eval(lo + (k as f64 + 0.5) * dx).max(0.0).powf(p)).sum::<f64>() * dx;
            let want = j.ln() / (1.0 - p);
            let h = renyi_entropy(&d, p).unwrap().value;
            assert!((h - want).abs() < 1e-8, "p={p}: {h} vs {want}");
        }
    }

    #[test]
    fn shannon_is_the_limit() {
        for raw in [vec![1.0, 1.0], vec![3.0, 2.0, 1.0], vec![1.0; 6]] {
            let d = density(&Weights::new(&raw).unwrap()).unwrap();
            let s = shannon_entropy(&d).unwrap().value;
            let l = renyi_entropy(&d, 1.0 - 1e-4).unwrap().value;
            let r = renyi_entropy(&d, 1.0 + 1e-4).unwrap().value;
            // Each side is off by ½·Var(log f(X))·1e-4 to first order; the
            // symmetric average cancels that term.
            assert!((0.5 * (l + r) - s).abs() < 1e-8, "{l} {s} {r}");
            assert!(((l - s) - (s - r)).abs() < 1e-8, "{l} {s} {r}");
            assert!((l - s).abs() < 1e-4 && (r - s).abs() < 1e-4, "{l} {s} {r}");
            assert!(l >= s && s >= r);
        }
    }

    #[test]
    fn support_and_max_limits() {
        let w = Weights::new(&[3.0, 2.0, 1.0, 1.0]).unwrap();
        let d = density(&w).unwrap();
        let h0 = renyi_entropy(&d, 1e-7).unwrap().value;
        assert!((h0 - (2.0 * w.l1()).ln()).abs() < 1e-4, "{h0}");
        let inf = renyi_entropy(&d, f64::INFINITY).unwrap().value;
        assert!((inf + d.eval(0.0).ln()).abs() < 1e-15);
        let big = renyi_entropy(&d, 1e4).unwrap().value;
        assert!(big >= inf && big - inf < 2e-3, "{big} vs {inf}");
    }

    #[test]
    fn gaussian_formula_against_quadrature() {
        for &(v, p) in &[(1.0 / 3.0, 0.5), (2.0, 0.2), (0.7, 3.0)] {
            let acc = Accuracy::with_tol(1e-11);
            let g = |x: f64| ((-x * x / (2.0 * v)).exp() / (2.0 * PI * v).sqrt()).powf(p);
            let j = 2.0 * integrate_semi_infinite(g, 0.0, &acc).unwrap().value;
            let want = j.ln() / (1.0 - p);
            assert!((renyi_gaussian(v, p).unwrap() - want).abs() < 1e-10);
        }
        let v = renyi_gaussian(1.0 / 3.0, 0.5).unwrap();
        assert!((v - (0.5 * (2.0 * PI / 3.0).ln() + LN_2)).abs() < 1e-15);
        assert!((v - 1.0628).abs() < 1e-4);
        let lim = renyi_gaussian(2.0, 1.0).unwrap();
        assert!((lim - 0.5 * (2.0 * PI * std::f64::consts::E * 2.0).ln()).abs() < 1e-15);
        assert!((renyi_gaussian(2.0, 1.0 + 1e-7).unwrap() - lim).abs() < 1e-7);
        assert!(renyi_gaussian(0.0, 0.5).is_err() && renyi_gaussian(1.0, 0.0).is_err());
    }

    #[test]
    fn sandwich_examples() {
        let grid: Vec<f64> = (1..10).map(|i| i as f64 / 10.0).collect();
        let r = sandwich_check(&Weights::new(&[1.0]).unwrap(), &grid).unwrap();
        assert!(r.pass && r.min_margin.abs() < 1e-13, "{r:?}");
        let r = sandwich_check(&Weights::equal(12).unwrap(), &grid).unwrap();
        assert!(r.pass);
        // The gap to the Gaussian shrinks in p; it is below 0.02 from p = 0.5 on.
        let d = density(&Weights::equal(12).unwrap()).unwrap();
        let gaps: Vec<f64> = grid
            .iter()
            .map(|&p| renyi_gaussian(1.0 / 3.0, p).unwrap() - renyi_entropy(&d, p).unwrap().value)
            .collect();
        assert!(gaps.windows(2).all(|g| g[1] < g[0]), "{gaps:?}");
        assert!(gaps[4..].iter().all(|&g| g > 0.0 && g < 0.02), "{gaps:?}");
        assert!(sandwich_check(&Weights::equal(13).unwrap(), &grid).is_err());
        assert!(sandwich_check(&Weights::equal(2).unwrap(), &[1.0]).is_err());
    }

    #[test]
    fn holder_examples() {
        let w = Weights::new(&[1.0, 1.0]).unwrap();
        assert!((even_moment(&w, 2).unwrap() - 4.0 / 15.0).abs() < 1e-15);
        assert!((gaussian_even_moment(2) - 1.0 / 3.0).abs() < 1e-16);
        let r = holder_moment_route_check(&w, 0.5, 15).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(holder_moment_route_check(&w, 0.5, 16).is_err());
        assert!(holder_moment_route_check(&w, 1.5, 3).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn nonincreasing_in_p(raw in prop::collection::vec(0.05f64..1.0, 1..7)) {
            let d = density(&Weights::new(&raw).unwrap()).unwrap();
            let ps = [0.1, 0.3, 0.5, 0.7, 0.9, 1.2, 1.5, 2.0];
            let hs: Vec<f64> = ps.iter().map(|&p| renyi_entropy(&d, p).unwrap().value).collect();
            for pair in hs.windows(2) {
                prop_assert!(pair[1] <= pair[0] + 1e-12, "{:?}", hs);
            }
            let s = shannon_entropy(&d).unwrap().value;
            prop_assert!(hs[4] >= s - 1e-12 && s >= hs[5] - 1e-12);
            prop_assert!(s >= LN_2 - 1e-12);
        }

        #[test]
        fn scaling_shifts_by_log(raw in prop::collection::vec(0.05f64..1.0, 1..6), c in 0.1f64..10.0, p in 0.05f64..3.0) {
            prop_assume!((p - 1.0).abs() > 1e-3);
            let d = density(&Weights::new(&raw).unwrap()).unwrap();
            let a = renyi_entropy(&d, p).unwrap().value;
            let b = renyi_entropy(&d.scaled(c).unwrap(), p).unwrap().value;
            prop_assert!((b - a - c.ln()).abs() < 1e-10, "{} vs {}", b - a, c.ln());
        }

        #[test]
        fn holder_random(raw in prop::collection::vec(0.05f64..1.0, 1..9), p in 0.05f64..0.95) {
            let r = holder_moment_route_check(&Weights::new(&raw).unwrap(), p, 10).unwrap();
            prop_assert!(r.pass, "{:?}", r);
        }
    }
}
