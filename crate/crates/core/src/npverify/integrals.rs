//! I_p(s) = κ_p ∫_0^∞ (1 − |sinc(t/√s)|^s) t^{−p−1} dt and
//! H(p, s) = ∫_0^∞ (g^s − f^s) t^{−p−1} dt.
//!
//! Both are split at ε (series head), at π (Kronrod on the main lobe), and
//! handled block by block beyond π, where |sin t|^s t^{−s−p−1} has an
//! explicit tail bracket.

use crate::error::{domain, Result};
use crate::quadrature::series::{EvenSeries, DEFAULT_TERMS};
use crate::quadrature::{adapt, integrate_pi_blocks, PiBlockIntegrand, QuadratureResult};
use crate::specfun::{gaussian_abs_moment, kappa, upper_incomplete_gamma, Accuracy};
use std::f64::consts::PI;

/// Target error of each piece.
const PIECE_TOL: f64 = 1e-12;

fn check_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain("p", p, "(0, 1)"));
    }
    Ok(())
}

fn check_s(s: f64) -> Result<()> {
    if !(s >= 1.0) || !s.is_finite() {
        return Err(domain("s", s, "[1, inf)"));
    }
    Ok(())
}

/// Series cut: small enough that s·ε²/6 stays modest for large s.
pub(crate) fn head_cut(s: f64) -> f64 {
    0.1f64.min(0.3 / s.sqrt())
}

/// log sinc(t) as an even series.
fn log_sinc() -> EvenSeries {
    EvenSeries::sinc(1.0, DEFAULT_TERMS).ln()
}

fn series_result(num: &EvenSeries, p: f64, eps: f64, log_weight: bool) -> QuadratureResult {
    let mut n = num.clone();
    n.c[0] = 0.0;
    let (v, e) = n.power_integral(p, eps, log_weight);
    QuadratureResult {
        value: v,
        err_bound: e,
        blocks_used: 1,
    }
}

/// ∫_0^∞ (1 − f(u)^s) u^{−p−1} du.
fn one_minus_f_power(s: f64, p: f64) -> Result<QuadratureResult> {
    let eps = head_cut(s);
    let head = series_result(&log_sinc().scaled(s).exp().scaled(-1.0), p, eps, false);
    let mid_f = |u: f64| -(s * (u.sin() / u).ln()).exp_m1() * u.powf(-p - 1.0);
    let mid = adapt(&mid_f, eps, PI, PIECE_TOL, 500);
    let blocks = integrate_pi_blocks(&PiBlockIntegrand::abs_sin(s, s + p + 1.0), 1, &Accuracy::with_tol(PIECE_TOL))?;
    let one = QuadratureResult::exact(PI.powf(-p) / p);
    Ok(head.plus(mid).plus(one).plus(-blocks))
}

/// I_p(s) for s ≥ 1 and 0 < p < 1.
///
/// Substituting t = √s·u gives κ_p s^{−p/2} ∫ (1 − f(u)^s) u^{−p−1} du.
pub fn i_p(s: f64, p: f64) -> Result<QuadratureResult> {
    check_p(p)?;
    check_s(s)?;
    let r = one_minus_f_power(s, p)?.scale(kappa(p)? * s.powf(-0.5 * p));
    Ok(r)
}

/// I_p(∞) = E|Z/√3|^p in closed form.
pub fn i_p_inf(p: f64) -> Result<f64> {
    check_p(p)?;
    Ok(gaussian_abs_moment(p)? * 3f64.powf(-0.5 * p))
}

/// I_p(∞) = κ_p ∫ (1 − e^{−t²/6}) t^{−p−1} dt by quadrature, as an
/// independent route to the closed form.
pub fn i_p_inf_quadrature(p: f64) -> Result<QuadratureResult> {
    check_p(p)?;
    let eps = 0.1;
    let head = series_result(&EvenSeries::quadratic(-1.0 / 6.0, DEFAULT_TERMS).exp().scaled(-1.0), p, eps, false);
    let mid_f = |t: f64| -(-t * t / 6.0).exp_m1() * t.powf(-p - 1.0);
    let mid = adapt(&mid_f, eps, PI, PIECE_TOL, 500);
    let gauss = integrate_pi_blocks(&PiBlockIntegrand::gaussian(1.0 / 6.0, p + 1.0), 1, &Accuracy::with_tol(PIECE_TOL))?;
    let one = QuadratureResult::exact(PI.powf(-p) / p);
    Ok(head.plus(mid).plus(one).plus(-gauss).scale(kappa(p)?))
}

/// ∫_π^∞ e^{−s t²/6} t^{−p−1} dt = ½ (s/6)^{p/2} Γ(−p/2, sπ²/6).
pub(crate) fn gaussian_tail_from_pi(s: f64, p: f64) -> Result<QuadratureResult> {
    let v = 0.5 * (s / 6.0).powf(0.5 * p) * upper_incomplete_gamma(-0.5 * p, s * PI * PI / 6.0)?;
    Ok(QuadratureResult {
        value: v,
        err_bound: 1e-14 * v.abs(),
        blocks_used: 1,
    })
}

/// g^s − f^s on (0, π), computed as e^{sL} expm1(s(G − L)) while the
/// difference is small, so that the cancellation near 0 is avoided.
pub(crate) fn g_minus_f_power(t: f64, s: f64) -> f64 {
    let l = (t.sin() / t).ln();
    let g = -t * t / 6.0;
    let d = s * (g - l);
    if d.abs() <= 1.0 {
        (s * l).exp() * d.exp_m1()
    } else {
        (s * g).exp() - (s * l).exp()
    }
}

/// ∫_0^π (g^s − f^s) t^{−p−1} dt, the main-lobe part of H.
pub(crate) fn h_main_lobe(p: f64, s: f64) -> QuadratureResult {
    let eps = head_cut(s);
    let num = EvenSeries::quadratic(-s / 6.0, DEFAULT_TERMS)
        .exp()
        .sub(&log_sinc().scaled(s).exp());
    let head = series_result(&num, p, eps, false);
    let mid_f = |t: f64| g_minus_f_power(t, s) * t.powf(-p - 1.0);
    head.plus(adapt(&mid_f, eps, PI, PIECE_TOL, 500))
}

/// H(p, s) = ∫_0^∞ (g(t)^s − f(t)^s) t^{−p−1} dt, signed, with error bound.
pub fn h_integral(p: f64, s: f64) -> Result<QuadratureResult> {
    check_p(p)?;
    check_s(s)?;
    let lobe = h_main_lobe(p, s);
    let gauss = gaussian_tail_from_pi(s, p)?;
    let blocks = integrate_pi_blocks(&PiBlockIntegrand::abs_sin(s, s + p + 1.0), 1, &Accuracy::with_tol(PIECE_TOL))?;
    Ok(lobe.plus(gauss).plus(-blocks))
}
