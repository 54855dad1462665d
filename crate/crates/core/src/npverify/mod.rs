//! The integral inequality I_p(s) ≥ I_p(∞) and the machinery behind it:
//! the integrals I_p and H, the modified distribution functions of
//! f(t) = |sin t / t| and g(t) = e^{−t²/6} under dμ = t^{−p−1}dt, the
//! single-sign-change certificate, and the verifiers for the auxiliary
//! numerical lemmas and the two claims H(p, 2) ≥ 0 and H(p, 1) ≥ 0.

mod certificate;
mod claims;
mod distribution;
mod integrals;
mod lemmas;

pub use certificate::{sign_change_certificate, SignChangeCertificate, SignGrid, SignSample};
pub use claims::{
    claim_a_check, claim_a_closed_form, claim_b_check, claim_b_pieces, claim_b_reports, dh_dp_direct, dh_dp_lower_bound,
    g_minus_f_crossing, ClaimBPieces, DhDpBound, T0,
};
pub use distribution::{block_count, f_mod, f_mod_blocks, g_mod, mod_dist_point, ModDistPoint};
pub use integrals::{h_integral, i_p, i_p_inf, i_p_inf_quadrature};
pub use lemmas::{
    envelope_check, envelope_h, envelope_h_prime, gamma_bound_checks, gamma_bound_reports, table1_check, table1_reports,
    table1_rows, u_m, u_m_prime, ENVELOPE_Y_MAX,
    Table1Row, TABLE1,
};
