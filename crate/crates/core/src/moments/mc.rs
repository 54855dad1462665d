//! Seeded Monte Carlo estimate of E|Σ a_jU_j|^p.
//!
//! Sample i draws its n uniforms from ChaCha8 keyed by the seed at word
//! position 2·n·i, so each sample depends only on (seed, i). Chunks run in
//! parallel and are combined in index order, which makes the result
//! independent of the thread count.

use super::Weights;
use crate::error::{domain, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const CHUNK: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MCConfig {
    pub samples: u64,
    pub seed: u64,
}

impl MCConfig {
    pub fn new(samples: u64, seed: u64) -> Result<Self> {
        if samples == 0 {
            return Err(domain("MCConfig: samples", 0.0, "[1, inf)"));
        }
        Ok(Self { samples, seed })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
}

#[derive(Clone, Copy)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn combine(self, o: Self) -> Self {
        if self.n == 0.0 {
            return o;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * o.n / n,
            m2: self.m2 + o.m2 + d * d * self.n * o.n / n,
        }
    }
}

fn run_chunk(a: &[f64], p: f64, seed: u64, start: u64, len: u64) -> Moments {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(2 * a.len() as u128 * start as u128);
    let mut m = Moments { n: 0.0, mean: 0.0, m2: 0.0 };
    for _ in 0..len {
        let x: f64 = a.iter().map(|aj| aj * (2.0 * rng.gen::<f64>() - 1.0)).sum();
        let v = x.abs().powf(p);
        m.n += 1.0;
        let d = v - m.mean;
        m.mean += d / m.n;
        m.m2 += d * (v - m.mean);
    }
    m
}

pub fn moment_mc(w: &Weights, p: f64, cfg: &MCConfig) -> Result<McEstimate> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(domain("moment_mc: p", p, "(0, inf)"));
    }
    if cfg.samples == 0 {
        return Err(domain("moment_mc: samples", 0.0, "[1, inf)"));
    }
    let a = w.as_slice();
    let chunks = cfg.samples.div_ceil(CHUNK);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let len = CHUNK.min(cfg.samples - start);
            run_chunk(a, p, cfg.seed, start, len)
        })
        .collect();
    let total = parts
        .into_iter()
        .fold(Moments { n: 0.0, mean: 0.0, m2: 0.0 }, Moments::combine);
    let var = if total.n > 1.0 { total.m2 / (total.n - 1.0) } else { 0.0 };
    Ok(McEstimate {
        estimate: total.mean,
        stderr: (var / total.n).sqrt(),
    })
}
