//! Structural checks of the Hamiltonian: superlinear growth, unit
//! Lipschitz constant on the box `‖p‖∞ ≤ 2`, and the quarter-turn
//! antisymmetry of the kinetic part.
//!
//! `cargo run --example hamiltonian_assumptions`

use hjlab::hamiltonian::{check_assumptions, kinetic, rotate_gradient, HamiltonianParams};
use hjlab::{EnvParams, Environment, Orientation, Plant, PlantSpec, Window};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = EnvParams::default();
    let plants = PlantSpec::new(vec![Plant::present(Orientation::Vertical, 1, 0, 0)]);
    let env = Environment::planted_only(params, Window::centered_square(30.0), plants)?;
    let hp = HamiltonianParams::new(params.q, &env)?;

    let xs = [[0.0, 0.0], [10.0, 3.0], [-25.0, 20.0]];
    let report = check_assumptions(&hp, &xs, 360)?;
    for (r, ratio) in &report.growth_ratios {
        println!("min H/R on |p| = {r}: {ratio:.4}");
    }
    println!("Lipschitz per axis on |p|_inf <= 2: {:?}", report.lipschitz_per_axis);
    println!("all assumptions hold: {}", report.passed());

    let p = [0.7, -1.3];
    println!("K(p) = {:+.3}, K(rotated p) = {:+.3}", kinetic(p, params.q), kinetic(rotate_gradient(p), params.q));
    Ok(())
}
