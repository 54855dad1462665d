//! Sharp constants c_p ≤ C_p in c_p ≤ ‖Σ a_j U_j‖_p ≤ C_p over unit vectors
//! a, the capped function Φ_p and its extended convexity, the two-summand
//! base case, and a heuristic search for the minimizing weights.

use crate::error::{domain, Result};
use crate::moments::{moment_fourier, moment_fourier_with, Weights};
use crate::report::{GridSpec, MarginTracker, VerificationReport};
use crate::specfun::gaussian_abs_moment;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use std::f64::consts::FRAC_PI_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeTag {
    /// −1 < p < 0
    NegPhase,
    /// 0 < p ≤ 1
    UnitInterval,
    /// p > 1
    AboveOne,
}

/// The pair of sharp constants at one p.
#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstantRegime {
    pub p: f64,
    pub c_p: f64,
    pub C_p: f64,
    pub regime_tag: RegimeTag,
}

impl ConstantRegime {
    /// Human-readable formulas for c_p and C_p at this p.
    pub fn formulas(&self) -> (&'static str, &'static str) {
        match self.regime_tag {
            RegimeTag::NegPhase => ("min{||Z||_p/sqrt(3), ||U1+U2||_p/sqrt(2)}", "||U1||_p = (1+p)^(-1/p)"),
            _ if self.p < 2.0 => ("||Z||_p/sqrt(3)", "||U1||_p = (1+p)^(-1/p)"),
            _ => ("||U1||_p = (1+p)^(-1/p)", "||Z||_p/sqrt(3)"),
        }
    }
}

/// ‖U₁‖_p = (1+p)^{−1/p}.
fn uniform_norm(p: f64) -> f64 {
    (-(p.ln_1p()) / p).exp()
}

/// ‖Z‖_p/√3 = ‖Z/√3‖_p.
fn gaussian_norm(p: f64) -> Result<f64> {
    Ok(gaussian_abs_moment(p)?.powf(1.0 / p) / 3f64.sqrt())
}

/// ‖(U₁+U₂)/√2‖_p, from E|U₁+U₂|^p = 2^{p+1}/((1+p)(2+p)).
fn pair_norm(p: f64) -> f64 {
    let m = 2f64.powf(p + 1.0) / ((1.0 + p) * (2.0 + p));
    m.powf(1.0 / p) / 2f64.sqrt()
}

/// Sharp constants for p ∈ (−1, 0) ∪ (0, ∞).
///
/// The Gaussian value is the lower constant below p = 2 and the upper one
/// above; at p = 2 both equal 1/√3.
pub fn constants(p: f64) -> Result<ConstantRegime> {
    if !(p > -1.0) || p == 0.0 || !p.is_finite() {
        return Err(domain("constants: p", p, "(-1, 0) or (0, inf)"));
    }
    let z = gaussian_norm(p)?;
    let u = uniform_norm(p);
    let (c_p, big, regime_tag) = if p < 0.0 {
        (z.min(pair_norm(p)), u, RegimeTag::NegPhase)
    } else if p <= 1.0 {
        (z, u, RegimeTag::UnitInterval)
    } else if p < 2.0 {
        (z, u, RegimeTag::AboveOne)
    } else {
        (u, z, RegimeTag::AboveOne)
    };
    Ok(ConstantRegime {
        p,
        c_p,
        C_p: big,
        regime_tag,
    })
}

/// φ_p(x) = (1+x)^{p/2}.
pub fn phi(x: f64, p: f64) -> f64 {
    (0.5 * p * x.ln_1p()).exp()
}

/// Φ_p(x): φ_p for x ≥ 1, the reflection 2φ_p(1) − φ_p(2 − x) on [0, 1].
/// NaN outside x ≥ 0, 0 < p < 2.
pub fn phi_cap(x: f64, p: f64) -> f64 {
    if !(x >= 0.0) || !(p > 0.0 && p < 2.0) {
        return f64::NAN;
    }
    if x >= 1.0 {
        phi(x, p)
    } else {
        2.0 * phi(1.0, p) - phi(2.0 - x, p)
    }
}

/// (Φ_p(a) + Φ_p(b))/2 ≥ Φ_p((a+b)/2) on the lattice a, b ∈ (2/N)ℤ ∩ [0, 2],
/// a + b ≤ 2.
///
/// Equality holds on a = b and, since Φ_p(a) = 2φ_p(1) − φ_p(2 − a) there,
/// on a + b = 2. The verdict carries a 1e-12 rounding allowance for those;
/// the witness also records the smallest margin away from both lines, which
/// must be strictly positive.
pub fn extended_convexity_check(p: f64, per_axis: usize) -> Result<VerificationReport> {
    if !(p > 0.0 && p < 2.0) {
        return Err(domain("extended_convexity_check: p", p, "(0, 2)"));
    }
    if per_axis < 2 {
        return Err(domain("extended_convexity_check: per_axis", per_axis as f64, "[2, inf)"));
    }
    let n = per_axis;
    let h = 2.0 / n as f64;
    let mut all = MarginTracker::new();
    let mut off = MarginTracker::new();
    let mut points = 0;
    for i in 0..=n {
        for j in i..=n - i {
            let (a, b) = (i as f64 * h, j as f64 * h);
            let m = 0.5 * (phi_cap(a, p) + phi_cap(b, p)) - phi_cap(0.5 * (a + b), p);
            points += 1;
            let at = || json!({"a": a, "b": b});
            all.push(m, at);
            if i != j && i + j != n {
                off.push(m, at);
            }
        }
    }
    let grid = GridSpec::new(format!("a, b in (2/{n})Z, 0 <= a <= b, a + b <= 2, p = {p}"), points);
    let mut r = all.finish(&format!("phi.extended_convexity.p={p}"), grid, 1e-12);
    r.witness = json!({"at": r.witness, "strict_min": off.min, "strict_at": off.at});
    r.pass = r.pass && off.min > 0.0;
    Ok(r)
}

/// Both sides of the base-case inequality at (x, p):
/// ((1+x)^{2+p} − (1−x)^{2+p}) / (2(2+p)x) and c_p^p (1+p) Φ_p(x²).
pub fn base_case_sides(x: f64, p: f64) -> Result<(f64, f64)> {
    if !(x > 0.0 && x < 1.0) {
        return Err(domain("base_case_sides: x", x, "(0, 1)"));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(domain("base_case_sides: p", p, "(0, 1)"));
    }
    let q = 2.0 + p;
    let (up, down) = (q * x.ln_1p(), q * (-x).ln_1p());
    let lhs = down.exp() * (up - down).exp_m1() / (2.0 * q * x);
    let cpp = gaussian_abs_moment(p)? * 3f64.powf(-0.5 * p);
    Ok((lhs, cpp * (1.0 + p) * phi_cap(x * x, p)))
}

/// The base case on p ∈ step·ℕ ∩ (0, 0.69), x ∈ step·ℕ ∩ (0, 1).
pub fn base_case_check(step: f64) -> Result<VerificationReport> {
    if !(step > 0.0 && step < 0.5) {
        return Err(domain("base_case_check: step", step, "(0, 0.5)"));
    }
    let ps: Vec<f64> = (1..).map(|k| k as f64 * step).take_while(|&p| p < 0.69).collect();
    let xs: Vec<f64> = (1..).map(|k| k as f64 * step).take_while(|&x| x < 1.0).collect();
    let rows: Vec<MarginTracker> = ps
        .par_iter()
        .map(|&p| {
            let mut t = MarginTracker::new();
            for &x in &xs {
                let m = base_case_sides(x, p).map_or(f64::NAN, |(l, r)| l - r);
                t.push(m, || json!({"p": p, "x": x}));
            }
            t
        })
        .collect();
    let mut t = MarginTracker::new();
    for r in rows {
        let at = r.at;
        t.push(r.min, || at);
    }
    let grid = GridSpec::new(format!("p, x in {step}N, 0 < p < 0.69, 0 < x < 1"), ps.len() * xs.len());
    Ok(t.finish("khinchin.base_case", grid, 0.0))
}

/// E|U₁ + Σ a_j U_j|^p ≥ c_p^p φ_p(Σ a_j²) for each tail (a_2, …, a_n) with
/// every a_j² ≤ 1 and Σ a_j² ≥ 1, 0 < p < 1.
///
/// The left side is (1+S)^{p/2} times the moment of the normalized vector,
/// evaluated by Fourier quadrature; its error bound is subtracted from the
/// margin.
pub fn corollary_check(p: f64, tails: &[Vec<f64>]) -> Result<VerificationReport> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain("corollary_check: p", p, "(0, 1)"));
    }
    let cpp = constants(p)?.c_p.powf(p);
    let mut t = MarginTracker::new();
    for tail in tails {
        let s: f64 = tail.iter().map(|a| a * a).sum();
        if tail.iter().any(|a| !(a * a <= 1.0)) || !(s >= 1.0) {
            return Err(domain("corollary_check: sum of squared tail weights", s, "[1, inf) with each a^2 <= 1"));
        }
        let mut raw = vec![1.0];
        raw.extend(tail.iter().copied().filter(|a| *a != 0.0));
        let m = moment_fourier(&Weights::new(&raw)?, p)?;
        let scale = phi(s, p);
        let margin = scale * (m.value - m.err_bound) - cpp * scale;
        t.push(margin, || json!({"tail": tail, "lhs": scale * m.value, "rhs": cpp * scale}));
    }
    let grid = GridSpec::new(format!("{} supplied tails, p = {p}", tails.len()), tails.len());
    Ok(t.finish("khinchin.corollary", grid, 0.0))
}

/// Outcome of [`extremum_search`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremumResult {
    pub n: usize,
    pub p: f64,
    pub best_weights: Weights,
    pub best_moment: f64,
    /// c_p^p; `best_moment` stays above it up to quadrature error.
    pub lower_bound: f64,
    pub evaluations: usize,
    pub restarts: usize,
}

const GOLDEN_STEPS: usize = 16;
const SEARCH_TOL: f64 = 1e-10;
const RESTARTS: usize = 4;

fn moment_of_raw(a: &[f64], p: f64) -> f64 {
    let kept: Vec<f64> = a.iter().copied().filter(|v| *v > 1e-12).collect();
    Weights::new(&kept)
        .and_then(|w| moment_fourier_with(&w, p, SEARCH_TOL))
        .map_or(f64::INFINITY, |r| r.value)
}

/// Golden-section search on θ ∈ [0, π/2] for the pair (i, j) with
/// a_i² + a_j² held fixed. Keeps the starting point if nothing better shows up.
fn pair_step(a: &mut [f64], i: usize, j: usize, p: f64, current: f64) -> (f64, usize) {
    let r = a[i].hypot(a[j]);
    let mut trial = a.to_vec();
    let mut eval = |th: f64| {
        trial[i] = r * th.cos();
        trial[j] = r * th.sin();
        moment_of_raw(&trial, p)
    };
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (0.0, FRAC_PI_2);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (eval(x1), eval(x2));
    let mut used = 2;
    for _ in 2..GOLDEN_STEPS {
        if f1 <= f2 {
            hi = x2;
            (x2, f2) = (x1, f1);
            x1 = hi - g * (hi - lo);
            f1 = eval(x1);
        } else {
            lo = x1;
            (x1, f1) = (x2, f2);
            x2 = lo + g * (hi - lo);
            f2 = eval(x2);
        }
        used += 1;
    }
    let (th, f) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    if f < current {
        a[i] = r * th.cos();
        a[j] = r * th.sin();
        (f, used)
    } else {
        (current, used)
    }
}

fn one_restart(n: usize, p: f64, budget: usize, seed: u64, index: u64) -> (Vec<f64>, f64, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let mut a: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    let mut best = moment_of_raw(&a, p);
    let mut used = 1;
    'outer: while used < budget {
        for i in 0..n {
            for j in i + 1..n {
                if used + GOLDEN_STEPS > budget {
                    break 'outer;
                }
                let (f, k) = pair_step(&mut a, i, j, p, best);
                best = f;
                used += k;
            }
        }
    }
    (a, best, used)
}

/// Minimize E|Σ a_j U_j|^p over positive unit vectors with n entries by
/// random restarts and golden-section sweeps over coordinate pairs.
///
/// Restart r draws from ChaCha8 keyed by `seed` on stream r, so the result
/// depends only on (n, p, budget, seed). Heuristic: the returned point is
/// the best one seen, not a certified minimizer.
pub fn extremum_search(n: usize, p: f64, budget: usize, seed: u64) -> Result<ExtremumResult> {
    if !(2..=16).contains(&n) {
        return Err(domain("extremum_search: n", n as f64, "[2, 16]"));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(domain("extremum_search: p", p, "(0, 1)"));
    }
    if budget == 0 {
        return Err(domain("extremum_search: budget", 0.0, "[1, inf)"));
    }
    let restarts = RESTARTS.min(budget);
    let per = budget / restarts;
    let runs: Vec<(Vec<f64>, f64, usize)> = (0..restarts as u64)
        .into_par_iter()
        .map(|r| one_restart(n, p, per, seed, r))
        .collect();
    let evaluations = runs.iter().map(|r| r.2).sum();
    let (a, best, _) = runs
        .into_iter()
        .reduce(|x, y| if y.1 < x.1 { y } else { x })
        .expect("at least one restart");
    let kept: Vec<f64> = a.into_iter().filter(|v| *v > 1e-12).collect();
    Ok(ExtremumResult {
        n,
        p,
        best_weights: Weights::new(&kept)?,
        best_moment: best,
        lower_bound: constants(p)?.c_p.powf(p),
        evaluations,
        restarts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::{moment_closed_pair, moment_density};
    use proptest::prelude::*;

    #[test]
    fn constant_examples() {
        let c = constants(2.0).unwrap();
        assert!((c.c_p - 1.0 / 3f64.sqrt()).abs() < 1e-15 && (c.C_p - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        let c = constants(0.5).unwrap();
        assert!((c.C_p - 4.0 / 9.0).abs() < 1e-15);
        assert!((c.c_p - gaussian_abs_moment(0.5).unwrap().powi(2) / 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(c.regime_tag, RegimeTag::UnitInterval);
        let c = constants(3.0).unwrap();
        let want = (2.0 * (2.0 / std::f64::consts::PI).sqrt()).cbrt() / 3f64.sqrt();
        assert!((c.C_p - want).abs() < 1e-14, "{} vs {want}", c.C_p);
        assert!((c.c_p - 0.25f64.powf(1.0 / 3.0)).abs() < 1e-15);
        let c = constants(-0.5).unwrap();
        assert_eq!(c.regime_tag, RegimeTag::NegPhase);
        assert!(c.c_p <= gaussian_norm(-0.5).unwrap() && c.c_p <= pair_norm(-0.5));
        for bad in [-1.0, 0.0, f64::NAN, -3.0] {
            assert!(constants(bad).is_err());
        }
    }

    #[test]
    fn limits_at_one() {
        let l = constants(1.0 - 1e-9).unwrap();
        let r = constants(1.0 + 1e-9).unwrap();
        assert!((l.C_p - 0.5).abs() < 1e-8 && (r.C_p - 0.5).abs() < 1e-8);
        let z1 = (2.0 / std::f64::consts::PI).sqrt() / 3f64.sqrt();
        assert!((l.c_p - z1).abs() < 1e-8 && (r.c_p - z1).abs() < 1e-8);
    }

    #[test]
    fn pair_norm_closed_form() {
        // p = −1/2: E|U₁+U₂|^{−1/2} = 2^{1/2}/(½·3/2)
        let m = 2f64.sqrt() / 0.75;
        assert!((pair_norm(-0.5) - m.powi(-2) / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn phi_cap_examples() {
        for &p in &[0.1, 0.5, 1.3, 1.9] {
            assert!((phi_cap(1.0, p) - 2f64.powf(0.5 * p)).abs() < 1e-15);
            assert!((phi_cap(0.0, p) - (2f64.powf(1.0 + 0.5 * p) - 3f64.powf(0.5 * p))).abs() < 1e-15);
        }
        // Φ(0.5) = 2φ(1) − φ(1.5) = 2·2^{1/4} − 2.5^{1/4}
        assert!((phi_cap(0.5, 0.5) - (2.0 * 2f64.powf(0.25) - 2.5f64.powf(0.25))).abs() < 1e-15);
        assert!(phi_cap(-0.1, 0.5).is_nan() && phi_cap(0.5, 2.0).is_nan());
    }

    #[test]
    fn extended_convexity_grids() {
        for &p in &[0.3, 0.69, 1.0, 1.5] {
            let r = extended_convexity_check(p, 200).unwrap();
            assert!(r.pass, "{r:?}");
            assert!(r.min_margin.abs() < 1e-15);
            assert!(r.witness["strict_min"].as_f64().unwrap() > 0.0);
        }
        // a = 0, b = 2 at p = 1 lies on the equality line a + b = 2
        let m = 0.5 * (phi_cap(0.0, 1.0) + phi_cap(2.0, 1.0)) - phi_cap(1.0, 1.0);
        assert!(m.abs() < 1e-15);
        assert!(extended_convexity_check(2.0, 10).is_err());
    }

    #[test]
    fn base_case_examples() {
        // x → 0⁺: LHS → 1, RHS → c_p^p(1+p)Φ_p(0)
        let (l, r) = base_case_sides(1e-9, 0.5).unwrap();
        assert!((l - 1.0).abs() < 1e-12);
        let cpp = constants(0.5).unwrap().c_p.sqrt();
        assert!((r - cpp * 1.5 * phi_cap(0.0, 0.5)).abs() < 1e-15);
        assert!(l > r);
        let (l, r) = base_case_sides(0.5, 0.3).unwrap();
        assert!(l > r);
        // LHS/(1+p) is the two-summand moment
        let p = 0.4;
        for &x in &[0.01, 0.3, 0.99] {
            let (l, _) = base_case_sides(x, p).unwrap();
            assert!((l / (1.0 + p) - moment_closed_pair(x, p).unwrap()).abs() < 1e-14);
        }
        let rep = base_case_check(1e-2).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn corollary_on_fixed_tails() {
        let tails = vec![vec![1.0], vec![0.8, 0.6], vec![0.5, 0.5, 0.5, 0.5], vec![1.0, 1.0, 0.3]];
        for &p in &[0.2, 0.6, 0.9] {
            assert!(corollary_check(p, &tails).unwrap().pass);
        }
        assert!(corollary_check(0.5, &[vec![0.5]]).is_err());
        assert!(corollary_check(0.5, &[vec![1.5, 0.2]]).is_err());
    }

    #[test]
    fn search_two_summands_matches_grid() {
        let p = 0.5;
        let grid_min = (1..=2000)
            .map(|i| {
                let x = i as f64 / 2000.0;
                moment_closed_pair(x, p).unwrap() / (1.0 + x * x).powf(0.5 * p)
            })
            .fold(f64::INFINITY, f64::min);
        let r = extremum_search(2, p, 200, 7).unwrap();
        assert!(r.best_moment >= r.lower_bound - 1e-6);
        assert!((r.best_moment - grid_min).abs() < 1e-6, "{} vs {grid_min}", r.best_moment);
        let again = extremum_search(2, p, 200, 7).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn equal_weights_approach_gaussian() {
        let p = 0.5;
        let cpp = constants(p).unwrap().c_p.powf(p);
        let m = moment_density(&Weights::equal(16).unwrap(), p).unwrap().value;
        assert!(m >= cpp && m - cpp < 1e-2, "{m} vs {cpp}");
    }

    #[test]
    fn search_respects_bound() {
        let r = extremum_search(5, 0.3, 600, 1).unwrap();
        assert!(r.best_moment >= r.lower_bound - 1e-6);
        assert!(r.best_weights.len() <= 5);
        assert!(r.evaluations <= 600);
        assert!(extremum_search(1, 0.3, 10, 1).is_err());
        assert!(extremum_search(3, 0.3, 0, 1).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn lower_not_above_upper(p in -0.999f64..8.0) {
            prop_assume!(p.abs() > 1e-6);
            let c = constants(p).unwrap();
            prop_assert!(c.c_p <= c.C_p * (1.0 + 1e-14), "{c:?}");
        }

        #[test]
        fn cap_dominates_phi(x in 0.0f64..2.0, p in 0.01f64..1.99) {
            let d = phi_cap(x, p) - phi(x, p);
            if x >= 1.0 {
                prop_assert_eq!(d, 0.0);
            } else {
                prop_assert!(d > 0.0, "x={} p={} d={}", x, p, d);
            }
        }

        #[test]
        fn cap_continuous_at_one(p in 0.01f64..1.99) {
            let d = phi_cap(1.0 - 1e-10, p) - phi_cap(1.0, p);
            prop_assert!(d.abs() < 1e-9);
        }

        #[test]
        fn corollary_random(raw in prop::collection::vec(0.05f64..1.0, 1..6), p in 0.05f64..0.95) {
            // scale up until Σ a² ≥ 1 without any a² exceeding 1
            let s: f64 = raw.iter().map(|a| a * a).sum();
            let big = raw.iter().fold(0.0f64, |m, a| m.max(*a));
            let k = (1.0 / s.sqrt()).max(1.0).min(1.0 / big);
            let tail: Vec<f64> = raw.iter().map(|a| a * k).collect();
            prop_assume!(tail.iter().map(|a| a * a).sum::<f64>() >= 1.0);
            prop_assert!(corollary_check(p, &[tail]).unwrap().pass);
        }
    }
}
