//! Acceptance suite. One PASS/FAIL line per criterion; exits nonzero if any
//! criterion fails. Every tolerance and runtime budget is pinned below.

use khinchin::khinchin::{base_case_check, constants};
use khinchin::moments::{density, moment_density, moment_fourier, moment_mc, MCConfig};
use khinchin::npverify::{
    claim_b_pieces, gamma_bound_reports, h_integral, i_p, i_p_inf, sign_change_certificate, table1_reports, SignGrid,
};
use khinchin::renyi::renyi_entropy;
use khinchin::specfun::{gamma, kappa};
use khinchin::{VerificationReport, Weights};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

const TABLE1_BUDGET: Duration = Duration::from_secs(1);
const CLAIM_B_BUDGET: Duration = Duration::from_secs(10);
const CLAIM_B_H_FLOOR: f64 = 0.0003;
const CLAIM_B_PIECES: [f64; 3] = [0.0434, 0.0184, 0.0615];
const CLAIM_B_QUAD_ERR: f64 = 1e-8;
const CLAIM_A_BUDGET: Duration = Duration::from_secs(30);
const CLAIM_A_POINTS: usize = 50;
const CLAIM_A_TOL: f64 = 1e-7;
const INTEGRAL_BUDGET: Duration = Duration::from_secs(300);
const INTEGRAL_SLACK: f64 = 1e-8;
const SHARP_BUDGET: Duration = Duration::from_secs(600);
const SHARP_VECTORS: usize = 500;
const SHARP_MAX_N: usize = 8;
const SHARP_SLACK: f64 = 1e-8;
const ENGINE_TOL: f64 = 1e-6;
const SANDWICH_BUDGET: Duration = Duration::from_secs(300);
const SANDWICH_VECTORS: usize = 200;
const SANDWICH_MAX_N: usize = 12;
const SANDWICH_SLACK: f64 = 1e-9;
const ORACLE_INSTANCES: usize = 100;
const MC_INSTANCES: usize = 20;
const MC_SAMPLES: u64 = 1_000_000;
const MC_SIGMAS: f64 = 4.0;
const GAMMA_BASE_BUDGET: Duration = Duration::from_secs(30);
const GRID_STEP: f64 = 1e-3;

fn p_tenths() -> Vec<f64> {
    (1..10).map(|i| i as f64 / 10.0).collect()
}

fn random_weights(rng: &mut ChaCha8Rng, max_n: usize) -> Weights {
    let n = rng.gen_range(1..=max_n);
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..1.0)).collect();
    Weights::new(&raw).unwrap()
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn all_pass(reports: &[VerificationReport]) -> (bool, f64) {
    let min = reports.iter().map(|r| r.min_margin).fold(f64::INFINITY, f64::min);
    (reports.iter().all(|r| r.pass && r.min_margin >= 0.0), min)
}

fn table1() -> Outcome {
    let reports = table1_reports(GRID_STEP);
    let (pass, min) = all_pass(&reports);
    outcome(pass, format!("{} reports, min margin {min:.3e}", reports.len()))
}

fn claim_b() -> Outcome {
    let (h, pieces) = match (h_integral(0.6, 1.0), claim_b_pieces(0.6)) {
        (Ok(h), Ok(pc)) => (h, pc),
        (Err(e), _) | (_, Err(e)) => return outcome(false, e.to_string()),
    };
    let [first, second, third] = CLAIM_B_PIECES;
    let parts = [pieces.main_lobe, pieces.gaussian_tail, pieces.sine_tail];
    let max_err = parts.iter().chain([&h]).map(|q| q.err_bound).fold(0.0, f64::max);
    let pass = h.value - h.err_bound > CLAIM_B_H_FLOOR
        && pieces.main_lobe.value - pieces.main_lobe.err_bound > first
        && pieces.gaussian_tail.value - pieces.gaussian_tail.err_bound > second
        && pieces.sine_tail.value + pieces.sine_tail.err_bound < third
        && max_err <= CLAIM_B_QUAD_ERR;
    outcome(
        pass,
        format!(
            "H(0.6,1) = {:.6}, pieces {:.5} / {:.5} / {:.5}, max quadrature error {max_err:.1e}",
            h.value, pieces.main_lobe.value, pieces.gaussian_tail.value, pieces.sine_tail.value
        ),
    )
}

fn claim_a() -> Outcome {
    let mut worst = 0.0f64;
    let mut min_h = f64::INFINITY;
    for i in 1..=CLAIM_A_POINTS {
        let p = i as f64 / (CLAIM_A_POINTS + 1) as f64;
        let h = match h_integral(p, 2.0) {
            Ok(h) => h.value,
            Err(e) => return outcome(false, format!("p = {p}: {e}")),
        };
        let closed = 2f64.powf(p + 1.0) / ((p + 1.0) * (p + 2.0))
            - (4.0f64 / 3.0).powf(p / 2.0) * gamma((1.0 + p) / 2.0).unwrap() / PI.sqrt();
        worst = worst.max((kappa(p).unwrap() * h - closed).abs());
        min_h = min_h.min(h);
    }
    outcome(
        worst <= CLAIM_A_TOL && min_h >= 0.0,
        format!("max identity gap {worst:.2e}, min H(p,2) {min_h:.3e}"),
    )
}

fn integral_inequality() -> Outcome {
    let high: Vec<f64> = (61..=99).map(|i| i as f64 / 100.0).collect();
    let all: Vec<f64> = (1..=19).map(|i| i as f64 / 20.0).collect();
    let mut cases: Vec<(f64, f64)> = Vec::new();
    for &p in &high {
        cases.extend([1.0, 1.5, 2.0, 4.0, 8.0].map(|s| (p, s)));
    }
    for &p in &all {
        cases.extend([2.0, 3.0, 4.0, 8.0].map(|s| (p, s)));
    }
    let mut min = (f64::INFINITY, 0.0, 0.0);
    for &(p, s) in &cases {
        let margin = match (i_p(s, p), i_p_inf(p)) {
            (Ok(v), Ok(inf)) => v.value - inf,
            (Err(e), _) | (_, Err(e)) => return outcome(false, format!("(p, s) = ({p}, {s}): {e}")),
        };
        if margin < min.0 {
            min = (margin, p, s);
        }
    }
    outcome(
        min.0 >= -INTEGRAL_SLACK,
        format!("{} pairs, min I_p(s) - I_p(inf) = {:.3e} at (p, s) = ({}, {})", cases.len(), min.0, min.1, min.2),
    )
}

fn sign_change() -> Outcome {
    let grid = SignGrid::default();
    let mut notes = Vec::new();
    let mut pass = true;
    for p in [0.1, 0.3, 0.5, 0.7, 0.9] {
        match sign_change_certificate(p, &grid) {
            Ok(c) => {
                pass &= c.sign_changes == 1;
                notes.push(format!("p={p}: {} change, y* ~ {:.5}", c.sign_changes, c.y_star_mid()));
            }
            Err(e) => {
                pass = false;
                notes.push(format!("p={p}: {e}"));
            }
        }
    }
    outcome(pass, notes.join("; "))
}

fn sharp_constant() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let ps = p_tenths();
    let lower: Vec<f64> = ps.iter().map(|&p| constants(p).unwrap().c_p.powf(p)).collect();
    let (mut low_margin, mut high_margin, mut engine_gap) = (f64::INFINITY, f64::INFINITY, 0.0f64);
    for _ in 0..SHARP_VECTORS {
        let w = random_weights(&mut rng, SHARP_MAX_N);
        for (&p, &lo) in ps.iter().zip(&lower) {
            let (f, d) = match (moment_fourier(&w, p), moment_density(&w, p)) {
                (Ok(f), Ok(d)) => (f.value, d.value),
                (Err(e), _) | (_, Err(e)) => return outcome(false, format!("{:?} p={p}: {e}", w.as_slice())),
            };
            engine_gap = engine_gap.max((f - d).abs());
            low_margin = low_margin.min(f - lo);
            high_margin = high_margin.min(1.0 / (1.0 + p) - f);
        }
    }
    outcome(
        low_margin >= -SHARP_SLACK && high_margin >= -SHARP_SLACK && engine_gap <= ENGINE_TOL,
        format!(
            "{SHARP_VECTORS} vectors x 9 p: min above c_p^p {low_margin:.2e}, min below 1/(1+p) {high_margin:.2e}, engine gap {engine_gap:.1e}"
        ),
    )
}

fn equal_weights_convergence() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for p in [0.1, 0.5, 0.9] {
        let cp = constants(p).unwrap().c_p.powf(p);
        let gaps: Vec<f64> = [4, 16, 64]
            .iter()
            .map(|&n| moment_density(&Weights::equal(n).unwrap(), p).map_or(f64::NAN, |q| q.value - cp))
            .collect();
        pass &= gaps[0] > gaps[1] && gaps[1] > gaps[2] && gaps[2] >= -SHARP_SLACK;
        notes.push(format!("p={p}: {:.2e} > {:.2e} > {:.2e}", gaps[0], gaps[1], gaps[2]));
    }
    outcome(pass, notes.join("; "))
}

fn sandwich() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let ps = p_tenths();
    let (mut low, mut high) = (f64::INFINITY, f64::INFINITY);
    for _ in 0..SANDWICH_VECTORS {
        let w = random_weights(&mut rng, SANDWICH_MAX_N);
        let d = density(&w).unwrap();
        for &p in &ps {
            let h = match renyi_entropy(&d, p) {
                Ok(h) => h.value,
                Err(e) => return outcome(false, format!("{:?} p={p}: {e}", w.as_slice())),
            };
            let top = 0.5 * (2.0 * PI / 3.0).ln() - p.ln() / (2.0 * (1.0 - p));
            low = low.min(h - 2f64.ln());
            high = high.min(top - h);
        }
    }
    outcome(
        low >= -SANDWICH_SLACK && high >= -SANDWICH_SLACK,
        format!("{SANDWICH_VECTORS} vectors x 9 p: min above log 2 {low:.2e}, min below Gaussian bound {high:.2e}"),
    )
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut gap = 0.0f64;
    for _ in 0..ORACLE_INSTANCES {
        let w = random_weights(&mut rng, SHARP_MAX_N);
        let p = rng.gen_range(0.05..1.95);
        match (moment_fourier(&w, p), moment_density(&w, p)) {
            (Ok(f), Ok(d)) => gap = gap.max((f.value - d.value).abs()),
            (Err(e), _) | (_, Err(e)) => return outcome(false, e.to_string()),
        }
    }
    let mut worst_z = 0.0f64;
    for i in 0..MC_INSTANCES {
        let w = random_weights(&mut rng, SHARP_MAX_N);
        let p = rng.gen_range(0.05..1.95);
        let exact = moment_density(&w, p).unwrap().value;
        let est = moment_mc(&w, p, &MCConfig::new(MC_SAMPLES, 1000 + i as u64).unwrap()).unwrap();
        worst_z = worst_z.max((est.estimate - exact).abs() / est.stderr);
    }
    outcome(
        gap <= ENGINE_TOL && worst_z <= MC_SIGMAS,
        format!("{ORACLE_INSTANCES} fourier/density pairs, max gap {gap:.1e}; {MC_INSTANCES} MC runs, max |z| {worst_z:.2}"),
    )
}

fn gamma_and_base_case() -> Outcome {
    let mut reports = gamma_bound_reports(GRID_STEP);
    match base_case_check(GRID_STEP) {
        Ok(r) => reports.push(r),
        Err(e) => return outcome(false, e.to_string()),
    }
    let (pass, min) = all_pass(&reports);
    outcome(pass && min > 0.0, format!("{} reports, min margin {min:.3e}", reports.len()))
}

type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 table of lower bounds", table1, Some(TABLE1_BUDGET)),
        ("2 quantitative H(0.6,1)", claim_b, Some(CLAIM_B_BUDGET)),
        ("3 H(p,2) identity", claim_a, Some(CLAIM_A_BUDGET)),
        ("4 integral inequality", integral_inequality, Some(INTEGRAL_BUDGET)),
        ("5 sign-change certificates", sign_change, None),
        ("6 sharp-constant property", sharp_constant, Some(SHARP_BUDGET)),
        ("6b equal-weights convergence", equal_weights_convergence, None),
        ("7 Renyi sandwich", sandwich, Some(SANDWICH_BUDGET)),
        ("8 oracle equivalence", oracle_equivalence, None),
        ("9 gamma bounds and base case", gamma_and_base_case, Some(GAMMA_BASE_BUDGET)),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let t = Instant::now();
        let out = run();
        let took = t.elapsed();
        let in_time = budget.is_none_or(|b| took <= b);
        let pass = out.pass && in_time;
        failed += usize::from(!pass);
        let limit = budget.map_or(String::new(), |b| format!(" / {:.0?}", b));
        println!(
            "{} criterion {name}: {} [{:.2?}{limit}]",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            took
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
