//! Adaptive Gauss–Kronrod integration with conservative error bounds, and a
//! block scheme for integrands of the form w(t)·K(t)·t^{−q} on (kπ, ∞).
//!
//! Error bounds are the QUADPACK rescaled Kronrod–Gauss differences
//! multiplied by [`SAFETY`]; tails use analytic brackets.

pub mod series;

use crate::error::{domain, Error, Result};
use crate::specfun::{gamma_real, ln_gamma, Accuracy};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

/// Multiplier applied to every rule-based error estimate.
pub const SAFETY: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub err_bound: f64,
    pub blocks_used: usize,
}

impl QuadratureResult {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            err_bound: 0.0,
            blocks_used: 1,
        }
    }

    /// Sum of two results; errors add.
    pub fn plus(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            err_bound: self.err_bound + other.err_bound,
            blocks_used: self.blocks_used + other.blocks_used,
        }
    }

    pub fn scale(self, k: f64) -> Self {
        Self {
            value: self.value * k,
            err_bound: self.err_bound * k.abs(),
            blocks_used: self.blocks_used,
        }
    }

    pub fn lower(&self) -> f64 {
        self.value - self.err_bound
    }

    pub fn upper(&self) -> f64 {
        self.value + self.err_bound
    }

    /// Fail unless the bound meets `tol`.
    pub fn require(self, tol: f64) -> Result<Self> {
        if self.err_bound <= tol && self.value.is_finite() {
            Ok(self)
        } else {
            Err(Error::ToleranceNotMet {
                requested: tol,
                achieved: self.err_bound,
            })
        }
    }
}

impl std::ops::Neg for QuadratureResult {
    type Output = Self;

    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// One 21-point Kronrod panel: (value, rescaled error estimate).
fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut res_g = 0.0;
    let mut res_k = WGK[10] * fc;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let x = h * XGK[j];
        let f1 = f(c - x);
        let f2 = f(c + x);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * h;
    res_abs *= h.abs();
    res_asc *= h.abs();
    let mut err = ((res_k - res_g) * h).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    if !value.is_finite() {
        err = f64::INFINITY;
    }
    (value, err)
}

struct Seg {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Seg {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Seg {}
impl PartialOrd for Seg {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Seg {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Best-effort adaptive bisection: refines the worst panel until the
/// certified bound meets `tol` or the panel budget is spent. Never fails;
/// callers decide what to do with an unmet bound.
pub(crate) fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, max_segs: usize) -> QuadratureResult {
    let (v, e) = gk21(f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Seg { a, b, value: v, err: e });
    let mut frozen: Vec<Seg> = Vec::new();
    let mut err_sum = e;
    let mut count = 1usize;
    while SAFETY * err_sum > tol && count < max_segs.max(1) {
        let Some(s) = heap.pop() else { break };
        let m = 0.5 * (s.a + s.b);
        if !(m > s.a && m < s.b) || s.err.is_nan() {
            err_sum -= s.err;
            frozen.push(s);
            continue;
        }
        let (v1, e1) = gk21(f, s.a, m);
        let (v2, e2) = gk21(f, m, s.b);
        err_sum += e1 + e2 - s.err;
        heap.push(Seg { a: s.a, b: m, value: v1, err: e1 });
        heap.push(Seg { a: m, b: s.b, value: v2, err: e2 });
        count += 1;
        if err_sum.is_nan() {
            break;
        }
    }
    let mut value = 0.0;
    let mut err = 0.0;
    for s in heap.iter().chain(frozen.iter()) {
        value += s.value;
        err += s.err;
    }
    QuadratureResult {
        value,
        err_bound: SAFETY * err,
        blocks_used: count,
    }
}

/// ∫_a^b f with |value − I| ≤ err_bound ≤ acc.abs_tol; `acc.max_terms`
/// caps the number of panels.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, acc: &Accuracy) -> Result<QuadratureResult> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(domain("integrate: interval", b - a, "finite a < b"));
    }
    adapt(&f, a, b, acc.abs_tol, acc.max_terms).require(acc.abs_tol)
}

/// ∫_a^∞ f through the map t = a + (1 − u)/u on (0, 1].
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(f: F, a: f64, acc: &Accuracy) -> Result<QuadratureResult> {
    if !a.is_finite() {
        return Err(domain("integrate_semi_infinite: a", a, "finite"));
    }
    let g = |u: f64| {
        let t = a + (1.0 - u) / u;
        let v = f(t) / (u * u);
        if v.is_finite() {
            v
        } else if t.is_infinite() {
            0.0
        } else {
            v
        }
    };
    adapt(&g, 0.0, 1.0, acc.abs_tol, acc.max_terms).require(acc.abs_tol)
}

/// Kernel K(t) of a block integrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BlockKernel {
    /// |sin t|^s, nonnegative on every block.
    AbsSinPower(f64),
    /// sin t, alternating in sign from block to block.
    Sin,
    /// e^{−c t²}.
    Gaussian(f64),
}

/// Extra weight factor w(t).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockWeight {
    One,
    Log,
}

/// w(t)·K(t)·t^{−q}, integrated over (kπ, ∞) block by block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiBlockIntegrand {
    pub kernel: BlockKernel,
    pub q: f64,
    pub weight: BlockWeight,
}

impl PiBlockIntegrand {
    pub fn abs_sin(s: f64, q: f64) -> Self {
        Self {
            kernel: BlockKernel::AbsSinPower(s),
            q,
            weight: BlockWeight::One,
        }
    }

    pub fn gaussian(c: f64, q: f64) -> Self {
        Self {
            kernel: BlockKernel::Gaussian(c),
            q,
            weight: BlockWeight::One,
        }
    }

    pub fn with_log(mut self) -> Self {
        self.weight = BlockWeight::Log;
        self
    }

    pub fn eval(&self, t: f64) -> f64 {
        let k = match self.kernel {
            BlockKernel::AbsSinPower(s) => t.sin().abs().powf(s),
            BlockKernel::Sin => t.sin(),
            BlockKernel::Gaussian(c) => (-c * t * t).exp(),
        };
        self.envelope(t) * k
    }

    /// W(t) = w(t)·t^{−q}
    fn envelope(&self, t: f64) -> f64 {
        let base = t.powf(-self.q);
        match self.weight {
            BlockWeight::One => base,
            BlockWeight::Log => base * t.ln(),
        }
    }

    /// ∫_T^∞ W(t) dt, closed form.
    fn envelope_integral(&self, t: f64) -> f64 {
        let q1 = self.q - 1.0;
        let base = t.powf(-q1);
        match self.weight {
            BlockWeight::One => base / q1,
            BlockWeight::Log => base * (t.ln() / q1 + 1.0 / (q1 * q1)),
        }
    }

    fn validate(&self) -> Result<()> {
        if !self.q.is_finite() {
            return Err(domain("PiBlockIntegrand::q", self.q, "finite"));
        }
        match self.kernel {
            BlockKernel::AbsSinPower(s) if !(s > 0.0) => {
                Err(domain("PiBlockIntegrand: sine power", s, "(0, inf)"))
            }
            BlockKernel::Gaussian(c) if !(c > 0.0) => {
                Err(domain("PiBlockIntegrand: Gaussian rate", c, "(0, inf)"))
            }
            _ => Ok(()),
        }
    }

    /// (estimate, certified half-width) of the tail Σ_{k≥K} B_k.
    fn tail(&self, k: usize) -> Result<(f64, f64)> {
        let t = k as f64 * PI;
        match self.kernel {
            BlockKernel::AbsSinPower(s) => {
                if self.q <= 1.0 {
                    return Err(Error::TailBound(format!(
                        "t^(-{}) envelope is not integrable",
                        self.q
                    )));
                }
                // Block k lies between C_s W((k+1)π) and C_s W(kπ) for a
                // decreasing envelope, and Σ W(kπ) is bracketed by integrals.
                let cs = abs_sin_block_mass(s);
                let est = cs / PI * self.envelope_integral(t);
                Ok((est, cs * self.envelope(t)))
            }
            BlockKernel::Sin => {
                if self.q <= 0.0 {
                    return Err(Error::TailBound(format!(
                        "t^(-{}) envelope does not decay",
                        self.q
                    )));
                }
                // Alternating blocks b_K, b_{K+1}, … that decrease convexly:
                // the tail lies within (b_K − b_{K+1})/4 of
                // b_K/2 + (b_K − b_{K+1})/4, and b_K − b_{K+1} is at most
                // 2(W(Kπ) − W((K+2)π)). The estimate is filled in by the
                // caller once b_K and b_{K+1} are integrated.
                let w0 = self.envelope(t);
                let w2 = self.envelope(t + 2.0 * PI);
                Ok((f64::NAN, 0.5 * (w0 - w2)))
            }
            BlockKernel::Gaussian(c) => {
                if self.q < 0.0 {
                    return Err(Error::TailBound(format!(
                        "t^(-{}) envelope is increasing",
                        self.q
                    )));
                }
                let b = self.envelope(t) * (-c * t * t).exp() / (2.0 * c * t);
                Ok((0.5 * b, 0.5 * b))
            }
        }
    }
}

/// ∫_0^π sin^s t dt = √π Γ((s+1)/2) / Γ(s/2 + 1).
pub fn abs_sin_block_mass(s: f64) -> f64 {
    if s > 100.0 {
        // the gamma values overflow long before their ratio does
        let lr = ln_gamma(0.5 * (s + 1.0)).unwrap_or(f64::NAN) - ln_gamma(0.5 * s + 1.0).unwrap_or(f64::NAN);
        return PI.sqrt() * lr.exp();
    }
    PI.sqrt() * gamma_real(0.5 * (s + 1.0)) / gamma_real(0.5 * s + 1.0)
}

const MAX_BLOCKS: usize = 5_000_000;

/// ∫_{kπ}^∞ f for k = `from_block` ≥ 1: per-block adaptive integration up to
/// a cut K chosen so that the analytic tail half-width is at most half the
/// tolerance.
pub fn integrate_pi_blocks(f: &PiBlockIntegrand, from_block: usize, acc: &Accuracy) -> Result<QuadratureResult> {
    f.validate()?;
    if from_block == 0 {
        return Err(domain("integrate_pi_blocks: from_block", 0.0, "[1, inf)"));
    }
    if f.weight == BlockWeight::Log && f.q * PI.ln() <= 1.0 {
        return Err(Error::TailBound(
            "log-weighted envelope is not decreasing from pi".into(),
        ));
    }
    if f.kernel == BlockKernel::Sin && f.weight == BlockWeight::Log && from_block < 2 {
        return Err(Error::TailBound(
            "log-weighted alternating blocks need convexity, start at 2 pi".into(),
        ));
    }
    let half = 0.5 * acc.abs_tol;
    let mut k_hi = from_block + 1;
    while f.tail(k_hi)?.1 > half {
        if k_hi > MAX_BLOCKS {
            return Err(Error::TailBound(format!(
                "tail above {half:e} after {MAX_BLOCKS} blocks"
            )));
        }
        k_hi *= 2;
    }
    let mut k_lo = from_block;
    while k_hi - k_lo > 1 {
        let mid = k_lo + (k_hi - k_lo) / 2;
        if f.tail(mid)?.1 <= half {
            k_hi = mid;
        } else {
            k_lo = mid;
        }
    }
    let cut = k_hi;
    let (mut tail_est, mut tail_err) = f.tail(cut)?;
    let g = |t: f64| f.eval(t);
    if f.kernel == BlockKernel::Sin {
        let tiny = 1e-3 * half;
        let b0 = adapt(&g, cut as f64 * PI, (cut + 1) as f64 * PI, tiny, 200);
        let b1 = adapt(&g, (cut + 1) as f64 * PI, (cut + 2) as f64 * PI, tiny, 200);
        let d = (b0.value.abs() - b1.value.abs()).max(0.0);
        tail_est = b0.value.signum() * (0.5 * b0.value.abs() + 0.25 * d);
        tail_err = 0.25 * d + b0.err_bound + b1.err_bound;
    }
    let nblocks = cut - from_block;
    let per_block = half / nblocks as f64;
    let mut total = QuadratureResult {
        value: 0.0,
        err_bound: 0.0,
        blocks_used: 0,
    };
    for k in from_block..cut {
        let r = adapt(&g, k as f64 * PI, (k + 1) as f64 * PI, per_block, 200);
        total = total.plus(r);
    }
    total.blocks_used = nblocks + 1;
    total.value += tail_est;
    total.err_bound += tail_err;
    total.require(acc.abs_tol)
}
