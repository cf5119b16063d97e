//! Solves on an asymmetric planted environment and on its quarter-turn
//! rotation; the two values at the origin are opposite.
//!
//! `cargo run --example rotation_antisymmetry`

use hjlab::hamiltonian::HamiltonianParams;
use hjlab::solver::{solve, SolverConfig};
use hjlab::{Background, EnvParams, Environment, Plant, PlantSpec, Window};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = EnvParams { k_max: 2, ..EnvParams::default() };
    let plants: PlantSpec =
        PlantSpec::new(vec!["h:1:3:2".parse::<Plant>()?, "v:1:-30:5".parse()?, "h:2:10:-25".parse()?]);
    let t = 4.0;
    let config = SolverConfig::for_horizon(t);
    let window = Window::centered_square(config.radius + 2.0);
    let env = Environment::build(params, window, plants, Background::Empty)?;
    let rotated = env.rotate();

    let a = solve(&HamiltonianParams::new(params.q, &env)?, config)?;
    let b = solve(&HamiltonianParams::new(params.q, &rotated)?, config)?;
    let (ua, ub) = (a.value_at(t)?, b.value_at(t)?);
    println!("u_1({t}, 0) = {ua:+.9}");
    println!("u_2({t}, 0) = {ub:+.9}");
    println!(
        "sum = {:.2e}, allowed {:.2e} (max |grad u| {:.3} and {:.3})",
        (ua + ub).abs(),
        1e-9 * a.steps as f64 + 4.0 * params.env_grid_h * t,
        a.max_grad_inf,
        b.max_grad_inf
    );
    Ok(())
}
