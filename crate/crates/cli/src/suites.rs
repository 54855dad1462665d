//! The `verify` suites: each maps to a list of reports.

use clap::ValueEnum;
use khinchin::khinchin::{base_case_check, extended_convexity_check};
use khinchin::npverify::{
    claim_a_check, claim_b_reports, envelope_check, gamma_bound_reports, sign_change_certificate, table1_reports,
    SignGrid,
};
use khinchin::renyi::{holder_moment_route_check, sandwich_check};
use khinchin::sincfun::{verify_sinc_lemma, SincLemma};
use khinchin::{Error, GridSpec, VerificationReport, Weights};
use serde_json::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Sinc,
    Table1,
    Envelope,
    GammaBounds,
    ClaimA,
    ClaimB,
    SignChange,
    Phi,
    BaseCase,
    Sandwich,
    All,
}

const SIGN_CHANGE_P: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];
const PHI_P: [f64; 4] = [0.3, 0.69, 1.0, 1.5];

fn p_grid() -> Vec<f64> {
    (1..10).map(|i| i as f64 / 10.0).collect()
}

/// Default weight vectors for the sandwich suite: equal weights n = 1..12
/// and a few uneven ones.
fn sandwich_weights() -> Vec<Weights> {
    let mut ws: Vec<Weights> = (1..=12).map(|n| Weights::equal(n).unwrap()).collect();
    for raw in [&[3.0, 4.0][..], &[5.0, 3.0, 1.0], &[1.0, 0.5, 0.25, 0.125, 0.0625], &[2.0, 1.0, 1.0, 1.0, 1.0, 1.0]] {
        ws.push(Weights::new(raw).unwrap());
    }
    ws
}

/// A library error inside a suite becomes a failing report.
fn failed(id: &str, e: &Error) -> VerificationReport {
    VerificationReport::new(id, GridSpec::new("not evaluated", 0), f64::NAN, 0.0, json!({"error": e.to_string()}))
}

fn sign_change(p: f64) -> VerificationReport {
    let grid = SignGrid::default();
    match sign_change_certificate(p, &grid) {
        Ok(c) => {
            let mut r = c.to_report(grid.spec());
            r.witness["condition_i_margin"] = json!(c.condition_i_margin);
            r.witness["condition_ii_margin"] = json!(c.condition_ii_margin);
            r
        }
        Err(e) => failed(&format!("np.sign_change.p={p}"), &e),
    }
}

pub fn run(suite: Suite, p: Option<f64>, weights: Option<&Weights>) -> Vec<VerificationReport> {
    let ps = |default: &[f64]| p.map_or(default.to_vec(), |v| vec![v]);
    match suite {
        Suite::Sinc => SincLemma::ALL.iter().map(|&id| verify_sinc_lemma(id, 1000)).collect(),
        Suite::Table1 => table1_reports(1e-3),
        Suite::Envelope => envelope_check(1e-3, 400),
        Suite::GammaBounds => gamma_bound_reports(1e-4),
        Suite::ClaimA => claim_a_check(50).unwrap_or_else(|e| vec![failed("claim_a", &e)]),
        Suite::ClaimB => claim_b_reports(20).unwrap_or_else(|e| vec![failed("claim_b", &e)]),
        Suite::SignChange => ps(&SIGN_CHANGE_P).into_iter().map(sign_change).collect(),
        Suite::Phi => ps(&PHI_P)
            .into_iter()
            .map(|p| extended_convexity_check(p, 400).unwrap_or_else(|e| failed("phi.extended_convexity", &e)))
            .collect(),
        Suite::BaseCase => vec![base_case_check(1e-3).unwrap_or_else(|e| failed("khinchin.base_case", &e))],
        Suite::Sandwich => {
            let grid = ps(&p_grid());
            let ws = weights.map_or_else(sandwich_weights, |w| vec![w.clone()]);
            let mut out = Vec::new();
            for w in &ws {
                out.push(sandwich_check(w, &grid).unwrap_or_else(|e| failed("renyi.sandwich", &e)));
                let parts: Vec<VerificationReport> = grid
                    .iter()
                    .map(|&p| holder_moment_route_check(w, p, 15).unwrap_or_else(|e| failed("renyi.holder_route", &e)))
                    .collect();
                out.push(VerificationReport::merge("renyi.holder_route", &parts));
            }
            out
        }
        Suite::All => [
            Suite::Sinc,
            Suite::Table1,
            Suite::Envelope,
            Suite::GammaBounds,
            Suite::ClaimA,
            Suite::ClaimB,
            Suite::SignChange,
            Suite::Phi,
            Suite::BaseCase,
            Suite::Sandwich,
        ]
        .into_iter()
        .flat_map(|s| run(s, p, weights))
        .collect(),
    }
}
