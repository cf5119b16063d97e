//! Checks that `u⁺` is a strict supersolution around a planted complete
//! rectangle, and that the rotated `u⁻` is a strict subsolution.
//!
//! `cargo run --example verify_supersolution`

use hjlab::closed_forms::{
    check_derivative_bounds, verification_window, verify_subsolution, verify_supersolution, Case, SuperSolutionSpec,
    VerificationPlan,
};
use hjlab::{Background, EnvParams, Environment, Orientation, Plant, PlantSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k = 2;
    let params = EnvParams { k_max: k, ..EnvParams::default() };
    let spec = SuperSolutionSpec::from_params(&params, [0.0, 0.0], k)?;
    let plan = VerificationPlan { per_case: 5_000, per_seam: 500, ..VerificationPlan::default() };
    let window = verification_window(&spec, plan.span, params.env_grid_h);
    let plants = PlantSpec::new(vec![Plant::present(Orientation::Horizontal, k, 0, 0)]);
    let env = Environment::build(params, window, plants, Background::Empty)?;

    let plus = verify_supersolution(&spec, &env, &plan)?;
    for case in Case::ALL {
        let (n, margin) = plus.per_case()[&case];
        println!("case {}: bound {:.2}, {n} samples, min margin {margin:.4}", case.number(), spec.case_bound(case));
    }
    println!("u+ passed: {} (tolerance {})", plus.passed(), plus.tolerance);

    let minus = verify_subsolution(&spec, &env.rotate(), &plan)?;
    println!("u- passed: {}, largest residual {:+.4}", minus.passed(), minus.extreme_residual());

    let deriv = check_derivative_bounds(&spec, 20_000, 3);
    println!(
        "derivative bounds: {} violations, finite-difference gap {:.1e}, max |grad u+| {:.3}",
        deriv.violations.len(),
        deriv.max_fd_error,
        deriv.max_grad_inf
    );
    Ok(())
}
