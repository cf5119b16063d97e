//! Solves the viscous equation with one planted horizontal rectangle of
//! scale 3 through the origin, then repeats on the rotated environment.
//!
//! `cargo run --example solve_planted`

use hjlab::closed_forms::SuperSolutionSpec;
use hjlab::hamiltonian::HamiltonianParams;
use hjlab::solver::{compare_with_supersolution, normalize_value, solve, SolverConfig};
use hjlab::{EnvParams, Environment, Orientation, Plant, PlantSpec, Window};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k = 3;
    let params = EnvParams { k_max: k, ..EnvParams::default() };
    let t = EnvParams::t_k(k);
    let config = SolverConfig { keep_snapshots: true, ..SolverConfig::for_horizon(t) };
    let window = Window::centered_square(config.radius + 1.0);
    let plants = PlantSpec::new(vec![Plant::present(Orientation::Horizontal, k, 0, 0)]);
    let horizontal = Environment::planted_only(params, window, plants)?;
    let vertical = horizontal.rotate();

    let spec = SuperSolutionSpec::from_params(&params, [0.0, 0.0], k)?;
    for (name, env) in [("horizontal", &horizontal), ("vertical", &vertical)] {
        let hp = HamiltonianParams::new(params.q, env)?;
        let run = solve(&hp, config)?;
        println!(
            "{name}: u({t})/{t} = {:+.5}, steps = {}, max |grad u| = {:.4}, monotone = {}",
            normalize_value(&run, t)?,
            run.steps,
            run.max_grad_inf,
            run.monotone()
        );
        if name == "horizontal" {
            let cmp = compare_with_supersolution(&run.snapshots, &spec)?;
            println!("  u_num <= u+ + 0.05 max(t, 1): {} (worst excess {:+.4})", cmp.passed(), cmp.worst_excess);
        }
    }
    println!("bound from the supersolution: u+({t}, 0)/{t} = {:+.3}", -0.5 + params.eta);
    Ok(())
}
