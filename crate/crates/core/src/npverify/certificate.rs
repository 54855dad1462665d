//! Certificate that G − F changes sign exactly once on (0, y₁), from + to −.
//!
//! The sign is sampled on a log-uniform grid; the crossing y★ is bracketed
//! by bisection between the last + and the first − sample. Alongside the
//! sampled pattern, the two conditions of the proof are checked: the
//! closed-form lower bound u_m(p) on F′/G′ exceeds 1 for m = 1..29, and
//! G > F at every sample below a = y₃₀.

use super::distribution::{f_mod, g_mod};
use super::lemmas::u_m;
use crate::error::{domain, Error, Result};
use crate::report::{GridSpec, VerificationReport};
use crate::sincfun::local_max;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

/// Sampling plan for the certificate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignGrid {
    /// Smallest level of the log-uniform part.
    pub lo: f64,
    /// Gap left below y₁.
    pub top_gap: f64,
    pub points: usize,
    /// Extra levels below `lo`.
    pub spot: Vec<f64>,
}

impl Default for SignGrid {
    fn default() -> Self {
        Self {
            lo: 1e-4,
            top_gap: 1e-9,
            points: 2000,
            spot: vec![1e-6, 1e-5],
        }
    }
}

impl SignGrid {
    fn levels(&self) -> Result<Vec<f64>> {
        let y1 = local_max(1).y_k;
        let hi = y1 - self.top_gap;
        if !(self.lo > 0.0 && self.lo < hi) || self.points < 2 {
            return Err(domain("SignGrid: lower level", self.lo, "(0, y_1 - gap)"));
        }
        let (l0, l1) = (self.lo.ln(), hi.ln());
        let mut ys: Vec<f64> = self.spot.iter().copied().filter(|&y| y > 0.0 && y < self.lo).collect();
        ys.extend((0..self.points).map(|i| (l0 + (l1 - l0) * i as f64 / (self.points - 1) as f64).exp()));
        ys.sort_by(f64::total_cmp);
        Ok(ys)
    }

    pub fn spec(&self) -> GridSpec {
        GridSpec::new(
            format!(
                "log-uniform y in [{:e}, y_1 - {:e}], plus spot levels {:?}",
                self.lo, self.top_gap, self.spot
            ),
            self.points + self.spot.len(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignSample {
    pub y: f64,
    pub g_minus_f: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignChangeCertificate {
    pub p: f64,
    /// Bracket [lo, hi] around the crossing; G − F > 0 at lo and < 0 at hi.
    pub y_star: [f64; 2],
    pub sign_changes: usize,
    /// a = y₃₀, the split between the two conditions.
    pub a_threshold: f64,
    /// min over m = 1..29 of u_m(p) − 1.
    pub condition_i_margin: f64,
    /// min of (G − F)/G over samples below a.
    pub condition_ii_margin: f64,
    pub grid: Vec<SignSample>,
}

impl SignChangeCertificate {
    pub fn y_star_mid(&self) -> f64 {
        0.5 * (self.y_star[0] + self.y_star[1])
    }

    /// Summary verdict; the margin is the worse of the two conditions.
    pub fn to_report(&self, grid: GridSpec) -> VerificationReport {
        let margin = self.condition_i_margin.min(self.condition_ii_margin);
        let which = if self.condition_i_margin <= self.condition_ii_margin {
            "condition_i"
        } else {
            "condition_ii"
        };
        VerificationReport::new(
            format!("np.sign_change.p={}", self.p),
            grid,
            margin,
            0.0,
            json!({
                "p": self.p,
                "y_star": self.y_star,
                "sign_changes": self.sign_changes,
                "a_threshold": self.a_threshold,
                "limiting": which,
            }),
        )
    }
}

fn g_minus_f(y: f64, p: f64) -> Result<f64> {
    // A level that hits a block maximum is moved off it by a relative 1e-11.
    let v = match f_mod(y, p) {
        Ok(f) => g_mod(y, p)? - f,
        Err(Error::LevelCollision { .. }) => {
            let y2 = y * (1.0 - 1e-11);
            g_mod(y2, p)? - f_mod(y2, p)?
        }
        Err(e) => return Err(e),
    };
    Ok(v)
}

/// Build and check the certificate for one p ∈ (0, 1).
pub fn sign_change_certificate(p: f64, grid: &SignGrid) -> Result<SignChangeCertificate> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain("sign_change_certificate: p", p, "(0, 1)"));
    }
    let ys = grid.levels()?;
    let vals: Vec<f64> = ys.par_iter().map(|&y| g_minus_f(y, p)).collect::<Result<_>>()?;
    let samples: Vec<SignSample> = ys
        .iter()
        .zip(&vals)
        .map(|(&y, &g_minus_f)| SignSample { y, g_minus_f })
        .collect();

    let zeros: Vec<f64> = samples.iter().filter(|s| s.g_minus_f == 0.0).map(|s| s.y).collect();
    if !zeros.is_empty() {
        return Err(Error::Certificate {
            p,
            reason: "G - F vanishes at a sample".into(),
            offending: zeros,
        });
    }
    let changes: Vec<usize> = (1..samples.len())
        .filter(|&i| (samples[i].g_minus_f > 0.0) != (samples[i - 1].g_minus_f > 0.0))
        .collect();
    if changes.len() != 1 || samples[0].g_minus_f < 0.0 {
        return Err(Error::Certificate {
            p,
            reason: format!("expected one change from + to -, saw {} changes", changes.len()),
            offending: changes.iter().map(|&i| samples[i].y).collect(),
        });
    }
    let i = changes[0];
    let (mut lo, mut hi) = (samples[i - 1].y, samples[i].y);
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if g_minus_f(mid, p)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let a = local_max(30).y_k;
    let cond_i = (1..=29).map(|m| u_m(p, m) - 1.0).fold(f64::INFINITY, f64::min);
    let below: Vec<&SignSample> = samples.iter().filter(|s| s.y < a).collect();
    let cond_ii = below
        .iter()
        .map(|s| s.g_minus_f / g_mod(s.y, p).unwrap_or(f64::NAN))
        .fold(f64::INFINITY, f64::min);
    let bad: Vec<f64> = below.iter().filter(|s| !(s.g_minus_f > 0.0)).map(|s| s.y).collect();
    if !(cond_i > 0.0) || !bad.is_empty() {
        return Err(Error::Certificate {
            p,
            reason: format!("condition (i) margin {cond_i:e}, condition (ii) failures {}", bad.len()),
            offending: bad,
        });
    }
    Ok(SignChangeCertificate {
        p,
        y_star: [lo, hi],
        sign_changes: 1,
        a_threshold: a,
        condition_i_margin: cond_i,
        condition_ii_margin: cond_ii,
        grid: samples,
    })
}
