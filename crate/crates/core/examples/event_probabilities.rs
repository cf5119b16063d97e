//! Closed-form lower bounds for the rectangle events next to Monte Carlo
//! frequencies.
//!
//! `cargo run --example event_probabilities`

use hjlab::probability::{liminf_lower, mc_estimate, p_ck_lower, p_dk_given_ck_lower, EventQuery};
use hjlab::EnvParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let delta = 0.5;
    println!("P(C_k) >= 1 - (1 - T_k^-2)^(floor(delta T_k)^2):");
    for k in [1, 2, 4, 8, 20] {
        println!("  k = {k:2}: {:.6}", p_ck_lower(k, delta));
    }
    println!("  limit 1 - exp(-delta^2) = {:.6}", -(-delta * delta).exp_m1());
    println!("liminf P(B_k) >= {:.4} at delta = lambda = 1", liminf_lower(1.0, 1.0));

    for k in 1..=4 {
        let params = EnvParams { lambda: 1.0, mu: 1.0, k_max: k + 6, ..EnvParams::default() };
        let est = mc_estimate(&EventQuery::new(k, delta, params, 5_000))?;
        let bound = p_ck_lower(k, delta) * p_dk_given_ck_lower(k, &params);
        println!(
            "k = {k}: C_k box {:.4} (exact {:.4}), B_k {:.4} +- {:.4} (lower bound {bound:.2e})",
            est.c_box.value(),
            p_ck_lower(k, delta),
            est.b_k.value(),
            est.b_k.standard_error()
        );
    }
    Ok(())
}
