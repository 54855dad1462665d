//! Truncated even power series Σ c_k t^{2k}, used to integrate numerators
//! that vanish at the origin against t^{−p−1} without adaptive refinement.

/// Coefficients of t^0, t^2, t^4, ….
#[derive(Debug, Clone, PartialEq)]
pub struct EvenSeries {
    pub c: Vec<f64>,
}

pub const DEFAULT_TERMS: usize = 24;

impl EvenSeries {
    pub fn zeros(terms: usize) -> Self {
        Self { c: vec![0.0; terms] }
    }

    /// sin(a t) / (a t).
    pub fn sinc(a: f64, terms: usize) -> Self {
        let mut c = Vec::with_capacity(terms);
        let a2 = a * a;
        let mut v = 1.0;
        for k in 0..terms {
            c.push(v);
            v *= -a2 / ((2 * k + 2) * (2 * k + 3)) as f64;
        }
        Self { c }
    }

    /// −c t², the exponent of a Gaussian factor.
    pub fn quadratic(coef: f64, terms: usize) -> Self {
        let mut s = Self::zeros(terms);
        if terms > 1 {
            s.c[1] = coef;
        }
        s
    }

    pub fn terms(&self) -> usize {
        self.c.len()
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            c: self.c.iter().map(|v| v * k).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.terms().min(other.terms());
        Self {
            c: (0..n).map(|i| self.c[i] + other.c[i]).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scaled(-1.0))
    }

    /// log of a series with constant term 1.
    ///
    /// Works in the variable x = t²: l_k = a_k − (1/k) Σ_{j<k} j l_j a_{k−j}.
    pub fn ln(&self) -> Self {
        assert!((self.c[0] - 1.0).abs() < 1e-15, "ln needs unit constant term");
        let n = self.terms();
        let mut l = vec![0.0; n];
        for k in 1..n {
            let s: f64 = (1..k).map(|j| j as f64 * l[j] * self.c[k - j]).sum();
            l[k] = self.c[k] - s / k as f64;
        }
        Self { c: l }
    }

    /// exp of a series; e_k = (1/k) Σ_{j=1..k} j g_j e_{k−j}.
    pub fn exp(&self) -> Self {
        let n = self.terms();
        let mut e = vec![0.0; n];
        e[0] = self.c[0].exp();
        for k in 1..n {
            let mut s = 0.0;
            for j in 1..=k {
                s += j as f64 * self.c[j] * e[k - j];
            }
            e[k] = s / k as f64;
        }
        Self { c: e }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let x = t * t;
        self.c.iter().rev().fold(0.0, |acc, &v| acc * x + v)
    }

    /// ∫_0^ε N(t) t^{−p−1} (−log t)^j dt for j ∈ {0, 1}, where N is this
    /// series with its constant term dropped (the caller guarantees it
    /// cancels). Returns the value and a bound on the truncation and
    /// rounding error, assuming the coefficients decay at least
    /// geometrically at the cut.
    pub fn power_integral(&self, p: f64, eps: f64, log_weight: bool) -> (f64, f64) {
        let le = eps.ln();
        let mut sum = 0.0;
        let mut abs_sum = 0.0;
        let mut last = [0.0f64; 3];
        for k in 1..self.terms() {
            let a = 2.0 * k as f64 - p;
            debug_assert!(a > 0.0);
            let base = eps.powf(a);
            let w = if log_weight {
                base * (1.0 / (a * a) - le / a)
            } else {
                base / a
            };
            let term = self.c[k] * w;
            sum += term;
            abs_sum += term.abs();
            last = [last[1], last[2], term.abs()];
        }
        let ratio = if last[1] > 0.0 {
            (last[2] / last[1]).max(if last[0] > 0.0 { last[1] / last[0] } else { 0.0 })
        } else {
            0.0
        };
        let tail = if ratio < 0.5 {
            2.0 * last[2] * ratio / (1.0 - ratio)
        } else {
            f64::INFINITY
        };
        (sum, tail + 4.0 * f64::EPSILON * abs_sum)
    }
}
