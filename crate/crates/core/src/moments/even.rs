//! Exact even moments E(Σ a_jU_j)^{2k}.
//!
//! With m_j(t) = Σ_m a_j^{2m} t^{2m}/(2m+1)! the exponential generating
//! function of a_jU_j, the moment is (2k)! times the t^{2k} coefficient of
//! Π_j m_j(t). The float path stays accurate because every term is positive.

use super::Weights;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub const MAX_EVEN_K: usize = 30;
/// Guard on k·n for the rational path, whose numbers grow with both.
const MAX_RATIONAL_WORK: usize = 4096;

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::Domain {
            what: "even_moment: k",
            value: 0.0,
            domain: "1..=30",
        });
    }
    if k > MAX_EVEN_K {
        return Err(Error::Overflow("even_moment: k exceeds 30"));
    }
    Ok(())
}

/// E(Σ a_jU_j)^{2k} in floating point.
pub fn even_moment(w: &Weights, k: usize) -> Result<f64> {
    check_k(k)?;
    // e[m] = 1/(2m+1)!, used as the per-summand EGF coefficient
    let mut inv_fact = vec![1.0f64; 2 * k + 2];
    for i in 1..inv_fact.len() {
        inv_fact[i] = inv_fact[i - 1] / i as f64;
    }
    let mut acc = vec![0.0f64; k + 1];
    acc[0] = 1.0;
    for &a in w.as_slice() {
        let a2 = a * a;
        let mut term = vec![0.0f64; k + 1];
        let mut pw = 1.0;
        for (m, t) in term.iter_mut().enumerate() {
            *t = pw * inv_fact[2 * m + 1];
            pw *= a2;
        }
        let mut next = vec![0.0f64; k + 1];
        for (i, ai) in acc.iter().enumerate() {
            if *ai == 0.0 {
                continue;
            }
            for (m, tm) in term.iter().enumerate().take(k + 1 - i) {
                next[i + m] += ai * tm;
            }
        }
        acc = next;
    }
    let mut fact = 1.0f64;
    for i in 1..=2 * k {
        fact *= i as f64;
    }
    let v = acc[k] * fact;
    if !v.is_finite() {
        return Err(Error::Overflow("even_moment"));
    }
    Ok(v)
}

/// E(Σ a_jU_j)^{2k} exactly, given the squared weights a_j² as rationals.
/// The squares need not sum to one.
pub fn even_moment_rational(squares: &[BigRational], k: usize) -> Result<BigRational> {
    check_k(k)?;
    if squares.is_empty() {
        return Err(Error::Weights("empty weight vector".into()));
    }
    if squares.iter().any(|s| *s <= BigRational::zero()) {
        return Err(Error::Weights("squared weights must be positive".into()));
    }
    if k * squares.len() > MAX_RATIONAL_WORK {
        return Err(Error::Overflow("even_moment_rational: k·n too large"));
    }
    let mut fact = vec![BigInt::one(); 2 * k + 2];
    for i in 1..fact.len() {
        fact[i] = &fact[i - 1] * BigInt::from(i);
    }
    let mut acc = vec![BigRational::zero(); k + 1];
    acc[0] = BigRational::one();
    for a2 in squares {
        let mut term = Vec::with_capacity(k + 1);
        let mut pw = BigRational::one();
        for m in 0..=k {
            term.push(&pw / BigRational::from_integer(fact[2 * m + 1].clone()));
            pw *= a2;
        }
        let mut next = vec![BigRational::zero(); k + 1];
        for i in 0..=k {
            if acc[i].is_zero() {
                continue;
            }
            for m in 0..=k - i {
                next[i + m] += &acc[i] * &term[m];
            }
        }
        acc = next;
    }
    Ok(&acc[k] * BigRational::from_integer(fact[2 * k].clone()))
}
