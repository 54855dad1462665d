//! Modified distribution functions under dμ = t^{−p−1} dt:
//! F(y) = μ{t > 0 : f(t) < y} and G(y) = μ{t > 0 : g(t) < y}.

use crate::error::{domain, Error, Result};
use crate::sincfun::{level_roots, local_max};
use serde::Serialize;

/// Distance to a block maximum at which F is refused, since a root pair
/// merges there and the block count is ambiguous.
const COLLISION: f64 = 1e-13;
const CACHED_BLOCKS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModDistPoint {
    pub y: f64,
    pub p: f64,
    pub f_val: f64,
    pub g_val: f64,
}

fn check(y: f64, p: f64) -> Result<()> {
    if !(y > 0.0 && y < 1.0) {
        return Err(domain("modified distribution: y", y, "(0, 1)"));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(domain("modified distribution: p", p, "(0, 1)"));
    }
    Ok(())
}

/// G(y) = (1/p)(−6 log y)^{−p/2}.
pub fn g_mod(y: f64, p: f64) -> Result<f64> {
    check(y, p)?;
    Ok((-6.0 * y.ln()).powf(-0.5 * p) / p)
}

/// μ(a, b) = (a^{−p} − b^{−p})/p, written to keep digits when b ≈ a.
fn mu(a: f64, b: f64, p: f64) -> f64 {
    -a.powf(-p) * (-p * (b / a).ln()).exp_m1() / p
}

/// The m with y_{m+1} < y < y_m (m = 0 above y_1).
///
/// Up to block 200 the maxima are cached; beyond, the bracket
/// 1/((k+½)π) < y_k < 1/(kπ) narrows m to a couple of candidates, which
/// are then resolved exactly.
pub fn block_count(y: f64) -> Result<usize> {
    if !(y > 0.0 && y < 1.0) {
        return Err(domain("block_count: y", y, "(0, 1)"));
    }
    let above = |k: usize| local_max(k).y_k > y;
    let m = if !above(CACHED_BLOCKS) {
        // binary search for the last k with y_k > y
        let (mut lo, mut hi) = (0usize, CACHED_BLOCKS);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if above(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    } else {
        let guess = (1.0 / (std::f64::consts::PI * y) - 1.5).floor().max(CACHED_BLOCKS as f64) as usize;
        let mut k = guess;
        while k > CACHED_BLOCKS && !above(k) {
            k -= 1;
        }
        while above(k + 1) {
            k += 1;
        }
        k
    };
    for k in [m, m + 1] {
        if k >= 1 && (local_max(k).y_k - y).abs() <= COLLISION {
            return Err(Error::LevelCollision { y, k });
        }
    }
    Ok(m)
}

/// F(y) from the roots of f = y, summed block by block.
pub fn f_mod(y: f64, p: f64) -> Result<f64> {
    check(y, p)?;
    let m = block_count(y)?;
    f_mod_blocks(y, p, m)
}

/// F(y) using blocks 1..=m_cap. Blocks whose maximum lies below y are
/// entirely inside the set and enter with a zero-length excluded interval,
/// so any m_cap at or above the true block count gives the same value.
pub fn f_mod_blocks(y: f64, p: f64, m_cap: usize) -> Result<f64> {
    check(y, p)?;
    let m = block_count(y)?;
    if m_cap < m {
        return Err(Error::Domain {
            what: "f_mod_blocks: block cap below the block count",
            value: m_cap as f64,
            domain: "[block_count(y), inf)",
        });
    }
    let mut prev = level_roots(y, 0)?.t_plus;
    let mut total = 0.0;
    for k in 1..=m_cap {
        let (lo, hi) = if k <= m {
            let r = level_roots(y, k)?;
            (r.t_minus.expect("blocks k ≥ 1 have two roots"), r.t_plus)
        } else {
            let t = local_max(k).t_bar;
            (t, t)
        };
        total += mu(prev, lo, p);
        prev = hi;
    }
    Ok(total + prev.powf(-p) / p)
}

/// Both distribution functions at one level.
pub fn mod_dist_point(y: f64, p: f64) -> Result<ModDistPoint> {
    Ok(ModDistPoint {
        y,
        p,
        f_val: f_mod(y, p)?,
        g_val: g_mod(y, p)?,
    })
}
