//! Numerical lemmas used by the certificate: the sums u_m(p) and their
//! tabulated lower bounds, the envelope h_p(y) on (0, 1/(30π)), and the
//! bounds on ψ(p) together with the polynomial inequality behind H(p,2) ≥ 0.

use crate::report::{GridSpec, MarginTracker, VerificationReport};
use crate::specfun::psi_ratio;
use serde::Serialize;
use serde_json::json;
use std::f64::consts::PI;

/// Published lower bounds (m, −u_m′(1), u_m(1)) for m = 1..29.
pub const TABLE1: [(usize, f64, f64); 29] = [
    (1, 0.24, 1.06),
    (2, 0.44, 1.27),
    (3, 0.58, 1.36),
    (4, 0.70, 1.40),
    (5, 0.79, 1.41),
    (6, 0.86, 1.41),
    (7, 0.91, 1.40),
    (8, 0.96, 1.38),
    (9, 0.99, 1.36),
    (10, 1.02, 1.34),
    (11, 1.05, 1.32),
    (12, 1.07, 1.29),
    (13, 1.08, 1.27),
    (14, 1.10, 1.25),
    (15, 1.11, 1.23),
    (16, 1.12, 1.21),
    (17, 1.13, 1.19),
    (18, 1.13, 1.17),
    (19, 1.14, 1.15),
    (20, 1.14, 1.14),
    (21, 1.14, 1.12),
    (22, 1.14, 1.10),
    (23, 1.15, 1.09),
    (24, 1.15, 1.07),
    (25, 1.15, 1.06),
    (26, 1.15, 1.04),
    (27, 1.15, 1.03),
    (28, 1.15, 1.02),
    (29, 1.14, 1.00),
];

fn b_and_logs(m: usize) -> (f64, Vec<f64>) {
    let x = PI * (m as f64 + 1.5);
    let l = x.ln();
    let big_b = 20.0 * l / (11.0 * x);
    let root = (6.0 * l / (PI * PI)).sqrt();
    let b = (0..=m).map(|k| root / (k + 1) as f64).collect();
    (big_b, b)
}

/// u_m(p) = B_m (b_{0,m}^p + 2 Σ_{k=1}^m b_{k,m}^p).
pub fn u_m(p: f64, m: usize) -> f64 {
    let (big_b, b) = b_and_logs(m);
    big_b * (b[0].powf(p) + 2.0 * b[1..].iter().map(|v| v.powf(p)).sum::<f64>())
}

/// d/dp u_m(p).
pub fn u_m_prime(p: f64, m: usize) -> f64 {
    let (big_b, b) = b_and_logs(m);
    let term = |v: f64| v.powf(p) * v.ln();
    big_b * (term(b[0]) + 2.0 * b[1..].iter().map(|&v| term(v)).sum::<f64>())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Table1Row {
    pub m: usize,
    pub neg_du: f64,
    pub u: f64,
    pub table_neg_du: f64,
    pub table_u: f64,
}

pub fn table1_rows() -> Vec<Table1Row> {
    TABLE1
        .iter()
        .map(|&(m, tdu, tu)| Table1Row {
            m,
            neg_du: -u_m_prime(1.0, m),
            u: u_m(1.0, m),
            table_neg_du: tdu,
            table_u: tu,
        })
        .collect()
}

/// The table rows plus u_m(p) > 1 and convexity of u_m on a p-grid of the
/// given step. The table comparison has zero tolerance.
pub fn table1_reports(p_step: f64) -> Vec<VerificationReport> {
    let rows = table1_rows();
    let mut du = MarginTracker::new();
    let mut u = MarginTracker::new();
    for r in &rows {
        du.push(r.neg_du - r.table_neg_du, || json!({"m": r.m, "neg_du": r.neg_du, "table": r.table_neg_du}));
        u.push(r.u - r.table_u, || json!({"m": r.m, "u": r.u, "table": r.table_u}));
    }
    let n = ((1.0 / p_step).round() as usize).max(2);
    let ps: Vec<f64> = (1..n).map(|i| i as f64 / n as f64).collect();
    let mut above = MarginTracker::new();
    let mut convex = MarginTracker::new();
    for m in 1..=29 {
        for &p in &ps {
            above.push(u_m(p, m) - 1.0, || json!({"m": m, "p": p}));
        }
        let h = 0.01;
        for i in 1..100 {
            let p = i as f64 * h;
            let d2 = (u_m(p - h, m) - 2.0 * u_m(p, m) + u_m(p + h, m)) / (h * h);
            convex.push(d2, || json!({"m": m, "p": p}));
        }
    }
    vec![
        du.finish("np.table1.neg_du", GridSpec::new("m = 1..29 at p = 1", 29), 0.0),
        u.finish("np.table1.u", GridSpec::new("m = 1..29 at p = 1", 29), 0.0),
        above.finish(
            "np.table1.u_above_one",
            GridSpec::new(format!("m = 1..29, p = i/{n}"), 29 * ps.len()),
            0.0,
        ),
        convex.finish(
            "np.table1.convexity",
            GridSpec::new("m = 1..29, second differences with step 0.01", 29 * 99),
            1e-9,
        ),
    ]
}

pub fn table1_check() -> VerificationReport {
    VerificationReport::merge("np.table1", &table1_reports(1e-3))
}

fn envelope_coeffs(p: f64) -> (f64, f64, f64, f64) {
    let alpha = 2.0 * PI.powf(1.0 - p) * (3.0 - 1.0 / (1.0 - p) + 1.5 / p);
    let beta = 2.0 / (1.0 - p) + 1.05f64.powf(p) / p;
    let gamma = 3.0 * PI / p;
    let x = 30.0 * PI;
    let delta = (x / (6.0 * x.ln())).powf(0.5 * p) / p;
    (alpha, beta, gamma, delta)
}

/// The domain edge 1/(30π).
pub const ENVELOPE_Y_MAX: f64 = 1.0 / (30.0 * PI);

fn envelope_domain(y: f64, p: f64) -> crate::Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(crate::error::domain("envelope_h: p", p, "(0, 1)"));
    }
    if !(y > 0.0 && y <= ENVELOPE_Y_MAX) {
        return Err(crate::error::domain("envelope_h: y", y, "(0, 1/(30 pi)]"));
    }
    Ok(())
}

/// h_p(y) = δ_p y^{p/2−1} + γ_p y^p − β_p y^{p−1} − α_p. The right end
/// 1/(30π) is accepted as well, since the boundary value is checked.
pub fn envelope_h(y: f64, p: f64) -> crate::Result<f64> {
    envelope_domain(y, p)?;
    let (a, b, g, d) = envelope_coeffs(p);
    Ok(d * y.powf(0.5 * p - 1.0) + g * y.powf(p) - b * y.powf(p - 1.0) - a)
}

pub fn envelope_h_prime(y: f64, p: f64) -> crate::Result<f64> {
    envelope_domain(y, p)?;
    let (_, b, g, d) = envelope_coeffs(p);
    Ok((0.5 * p - 1.0) * d * y.powf(0.5 * p - 2.0) + p * g * y.powf(p - 1.0) - (p - 1.0) * b * y.powf(p - 2.0))
}

/// h_p > 0 and h_p′ < 0 over p = i·p_step and `y_points` log-uniform levels
/// in [1e-10, 1/(30π)]. Margins are relative to the largest term, so that
/// the tiny-y region, where h is huge, does not mask the edge.
pub fn envelope_check(p_step: f64, y_points: usize) -> Vec<VerificationReport> {
    let n = ((1.0 / p_step).round() as usize).max(2);
    let y_points = y_points.max(2);
    let (l0, l1) = (1e-10f64.ln(), ENVELOPE_Y_MAX.ln());
    let mut pos = MarginTracker::new();
    let mut dec = MarginTracker::new();
    for i in 1..n {
        let p = i as f64 / n as f64;
        let (a, b, g, d) = envelope_coeffs(p);
        for j in 0..y_points {
            let y = if j + 1 == y_points {
                ENVELOPE_Y_MAX
            } else {
                (l0 + (l1 - l0) * j as f64 / (y_points - 1) as f64).exp()
            };
            let terms = [d * y.powf(0.5 * p - 1.0), g * y.powf(p), b * y.powf(p - 1.0), a.abs()];
            let scale: f64 = terms.iter().map(|t| t.abs()).sum();
            let h = envelope_h(y, p).unwrap_or(f64::NAN);
            pos.push(h / scale, || json!({"p": p, "y": y, "h": h}));
            let hp = envelope_h_prime(y, p).unwrap_or(f64::NAN);
            dec.push(-hp * y / scale, || json!({"p": p, "y": y, "h_prime": hp}));
        }
    }
    let grid = || GridSpec::new(format!("p = i/{n}, y log-uniform in [1e-10, 1/(30 pi)], {y_points} levels"), (n - 1) * y_points);
    vec![
        pos.finish("np.envelope.positive", grid(), 0.0),
        dec.finish("np.envelope.decreasing", grid(), 0.0),
    ]
}

/// The two ψ bounds and the polynomial inequality, each on a grid of the
/// given step over its open domain.
pub fn gamma_bound_reports(step: f64) -> Vec<VerificationReport> {
    let n = ((1.0 / step).round() as usize).max(2);
    let mut small = MarginTracker::new();
    let mut all = MarginTracker::new();
    let mut poly = MarginTracker::new();
    let mut small_pts = 0;
    for i in 1..n {
        let p = i as f64 / n as f64;
        let psi = psi_ratio(p).unwrap_or(f64::NAN);
        if p < 0.69 {
            small_pts += 1;
            small.push(1.0 / (2.0 - 1.5f64.powf(0.5 * p)) - psi, || json!({"p": p, "psi": psi}));
        }
        all.push(1.0 + p * (p + 1.0) / 6.0 - psi, || json!({"p": p, "psi": psi}));
        poly.push(2f64.powf(p + 1.0) - (p + 2.0) * (1.0 + p * (p + 1.0) / 6.0), || json!({"p": p}));
    }
    vec![
        small.finish(
            "gamma.psi_small_p",
            GridSpec::new(format!("p = i/{n} < 0.69"), small_pts),
            0.0,
        ),
        all.finish("gamma.psi_all_p", GridSpec::new(format!("p = i/{n} in (0, 1)"), n - 1), 0.0),
        poly.finish(
            "claim_a.polynomial",
            GridSpec::new(format!("p = i/{n} in (0, 1)"), n - 1),
            0.0,
        ),
    ]
}

pub fn gamma_bound_checks() -> VerificationReport {
    VerificationReport::merge("gamma_bounds", &gamma_bound_reports(1e-4))
}
