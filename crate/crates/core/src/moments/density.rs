//! Exact density of Σ a_j U_j as a piecewise polynomial, built by repeated
//! convolution with the box densities 1/(2a) on [−a, a].
//!
//! Each piece stores its polynomial in the local coordinate z = x − left
//! end, which keeps the coefficients well scaled. Only the left half is
//! computed at every step; the right half is its mirror image, so the
//! density is symmetric by construction and the edge pieces, where the
//! density is tiny, are computed from masses that are tiny as well.

use super::Weights;
use crate::error::{domain, Error, Result};
use crate::quadrature::{adapt, QuadratureResult};

/// Largest number of summands accepted by the density engine.
pub const MAX_TERMS: usize = 64;
/// Largest number of pieces a density may have.
pub const MAX_PIECES: usize = 1 << 17;

const DEDUP_REL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePolyDensity {
    breaks: Vec<f64>,
    coeffs: Vec<Vec<f64>>,
}

/// One piece: `poly(z)` on [left, left + width], z = x − left.
#[derive(Debug, Clone, Copy)]
pub struct Piece<'a> {
    pub left: f64,
    pub width: f64,
    pub poly: &'a [f64],
}

impl Piece<'_> {
    pub fn eval_local(&self, z: f64) -> f64 {
        horner(self.poly, z)
    }
}

pub(crate) fn horner(c: &[f64], z: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * z + v)
}

/// Coefficients of P(z + d) given those of P(z).
fn taylor_shift(c: &[f64], d: f64) -> Vec<f64> {
    let mut r = c.to_vec();
    if d == 0.0 {
        return r;
    }
    let n = r.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            r[j] += d * r[j + 1];
        }
    }
    r
}

/// Coefficients of Q(z) = ∫_0^z P.
fn antiderivative(c: &[f64]) -> Vec<f64> {
    let mut q = Vec::with_capacity(c.len() + 1);
    q.push(0.0);
    for (m, v) in c.iter().enumerate() {
        q.push(v / (m + 1) as f64);
    }
    q
}

impl PiecewisePolyDensity {
    pub fn breakpoints(&self) -> &[f64] {
        &self.breaks
    }

    pub fn num_pieces(&self) -> usize {
        self.coeffs.len()
    }

    pub fn piece(&self, i: usize) -> Piece<'_> {
        Piece {
            left: self.breaks[i],
            width: self.breaks[i + 1] - self.breaks[i],
            poly: &self.coeffs[i],
        }
    }

    pub fn pieces(&self) -> impl Iterator<Item = Piece<'_>> + '_ {
        (0..self.num_pieces()).map(move |i| self.piece(i))
    }

    /// Pieces on [0, ∞); the density is even and 0 is always a breakpoint.
    pub fn right_half(&self) -> impl Iterator<Item = Piece<'_>> + '_ {
        let start = self.breaks.partition_point(|&b| b < 0.0);
        (start..self.num_pieces()).map(move |i| self.piece(i))
    }

    /// Pieces on (−∞, 0].
    pub fn left_half(&self) -> impl Iterator<Item = Piece<'_>> + '_ {
        let end = self.breaks.partition_point(|&b| b < 0.0);
        (0..end).map(move |i| self.piece(i))
    }

    pub fn support(&self) -> (f64, f64) {
        (self.breaks[0], *self.breaks.last().unwrap())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.iter().map(|c| c.len()).max().unwrap_or(1) - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if !(x >= lo && x <= hi) {
            return 0.0;
        }
        let i = self.breaks.partition_point(|&b| b <= x).clamp(1, self.num_pieces()) - 1;
        horner(&self.coeffs[i], x - self.breaks[i])
    }

    /// ∫ f over the support, piece by piece in closed form.
    pub fn mass(&self) -> f64 {
        self.pieces().map(|p| horner(&antiderivative(p.poly), p.width)).sum()
    }

    /// Density of c·X for c > 0.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(domain("PiecewisePolyDensity::scaled", c, "(0, inf)"));
        }
        Ok(Self {
            breaks: self.breaks.iter().map(|b| b * c).collect(),
            coeffs: self
                .coeffs
                .iter()
                .map(|p| {
                    let mut s = 1.0 / c;
                    p.iter()
                        .map(|v| {
                            let r = v * s;
                            s /= c;
                            r
                        })
                        .collect()
                })
                .collect(),
        })
    }

    fn uniform(a: f64) -> Self {
        let h = 0.5 / a;
        Self {
            breaks: vec![-a, 0.0, a],
            coeffs: vec![vec![h], vec![h]],
        }
    }

    /// Density of X + aV with V uniform on [−1, 1], for 0 < a ≤ half-width.
    fn convolve_box(&self, a: f64) -> Result<Self> {
        let s = *self.breaks.last().unwrap();
        let big = s + a;
        let tol = DEDUP_REL * big;
        let mut cand: Vec<f64> = self
            .breaks
            .iter()
            .flat_map(|&b| [b - a, b + a])
            .filter(|&x| x < -tol)
            .collect();
        cand.push(-big);
        cand.push(0.0);
        cand.sort_by(f64::total_cmp);
        let mut cuts: Vec<f64> = Vec::with_capacity(cand.len());
        for x in cand {
            match cuts.last() {
                Some(&last) if x - last <= tol => {}
                _ => cuts.push(x),
            }
        }
        // Snap the ends exactly.
        cuts[0] = -big;
        if let Some(l) = cuts.last_mut() {
            if l.abs() <= tol {
                *l = 0.0;
            }
        }
        if *cuts.last().unwrap() != 0.0 {
            cuts.push(0.0);
        }
        let pieces = 2 * (cuts.len() - 1);
        if pieces > MAX_PIECES {
            return Err(Error::Size {
                what: "density pieces",
                size: pieces,
                limit: MAX_PIECES,
            });
        }

        let q: Vec<Vec<f64>> = self.coeffs.iter().map(|c| antiderivative(c)).collect();
        let widths: Vec<f64> = self.breaks.windows(2).map(|w| w[1] - w[0]).collect();
        let masses: Vec<f64> = q.iter().zip(&widths).map(|(qi, &w)| horner(qi, w)).collect();
        let mut prefix = vec![0.0; masses.len() + 1];
        for i in 0..masses.len() {
            prefix[i + 1] = prefix[i] + masses[i];
        }
        let locate = |x: f64| -> Option<usize> {
            if x < self.breaks[0] {
                None
            } else {
                Some(self.breaks.partition_point(|&b| b <= x).clamp(1, widths.len()) - 1)
            }
        };
        let inv = 0.5 / a;
        let mut left_polys: Vec<Vec<f64>> = Vec::with_capacity(cuts.len() - 1);
        for l in 0..cuts.len() - 1 {
            let c0 = cuts[l];
            let mid = 0.5 * (c0 + cuts[l + 1]);
            let ir = locate(mid + a).expect("window right end lies inside the support");
            let dr = (c0 + a - self.breaks[ir]).clamp(0.0, widths[ir]);
            let mut poly = taylor_shift(&q[ir], dr);
            match locate(mid - a) {
                None => poly[0] += prefix[ir],
                Some(il) => {
                    let dl = (c0 - a - self.breaks[il]).clamp(0.0, widths[il]);
                    let ql = taylor_shift(&q[il], dl);
                    if il == ir {
                        for (p, v) in poly.iter_mut().zip(&ql) {
                            *p -= v;
                        }
                    } else {
                        for (p, v) in poly.iter_mut().zip(&ql) {
                            *p -= v;
                        }
                        poly[0] += masses[il] + (prefix[ir] - prefix[il + 1]);
                    }
                }
            }
            for v in poly.iter_mut() {
                *v *= inv;
            }
            left_polys.push(poly);
        }
        let mut breaks = cuts.clone();
        for &c in cuts.iter().rev().skip(1) {
            breaks.push(-c);
        }
        let mut coeffs = left_polys.clone();
        for l in (0..left_polys.len()).rev() {
            let h = cuts[l + 1] - cuts[l];
            let mut r = taylor_shift(&left_polys[l], h);
            for (j, v) in r.iter_mut().enumerate() {
                if j % 2 == 1 {
                    *v = -*v;
                }
            }
            coeffs.push(r);
        }
        Ok(Self { breaks, coeffs })
    }
}

/// Density of Σ a_j U_j for canonical weights.
pub fn density(w: &Weights) -> Result<PiecewisePolyDensity> {
    density_of_scales(w.as_slice())
}

/// Density of Σ s_j U_j for arbitrary positive scales (no normalization).
pub fn density_of_scales(scales: &[f64]) -> Result<PiecewisePolyDensity> {
    if scales.is_empty() {
        return Err(Error::Weights("empty scale vector".into()));
    }
    if scales.len() > MAX_TERMS {
        return Err(Error::Size {
            what: "density summands",
            size: scales.len(),
            limit: MAX_TERMS,
        });
    }
    if let Some(bad) = scales.iter().find(|s| !(**s > 0.0) || !s.is_finite()) {
        return Err(Error::Weights(format!("scale {bad} is not positive and finite")));
    }
    let mut s = scales.to_vec();
    s.sort_by(|x, y| y.total_cmp(x));
    let mut d = PiecewisePolyDensity::uniform(s[0]);
    for &a in &s[1..] {
        d = d.convolve_box(a)?;
    }
    Ok(d)
}

/// E|X|^p = 2 ∫_0^∞ x^p f(x) dx from the exact density, p > −1.
pub fn moment_density(w: &Weights, p: f64) -> Result<QuadratureResult> {
    if !(p > -1.0) || !p.is_finite() {
        return Err(domain("moment_density: p", p, "(-1, inf)"));
    }
    let d = density(w)?;
    Ok(moment_of_density(&d, p, 1e-12))
}

pub(crate) fn moment_of_density(d: &PiecewisePolyDensity, p: f64, tol: f64) -> QuadratureResult {
    let n = d.right_half().count().max(1);
    let per = tol / n as f64;
    let mut total = QuadratureResult {
        value: 0.0,
        err_bound: 0.0,
        blocks_used: 0,
    };
    for piece in d.right_half() {
        if piece.left == 0.0 {
            // ∫_0^w z^p Σ c_m z^m dz in closed form
            let v: f64 = piece
                .poly
                .iter()
                .enumerate()
                .map(|(m, c)| c * piece.width.powf(m as f64 + p + 1.0) / (m as f64 + p + 1.0))
                .sum();
            total = total.plus(QuadratureResult::exact(v));
        } else {
            let f = |z: f64| (piece.left + z).powf(p) * piece.eval_local(z);
            total = total.plus(adapt(&f, 0.0, piece.width, per, 100));
        }
    }
    let mut r = total.scale(2.0);
    r.err_bound += 16.0 * f64::EPSILON * r.value.abs();
    r
}
