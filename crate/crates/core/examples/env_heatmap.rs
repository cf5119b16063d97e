//! Samples a random environment, then a lone planted rectangle, and writes
//! both cost fields as PGM heatmaps.
//!
//! `cargo run --example env_heatmap -- [output-dir]`

use std::path::PathBuf;

use hjlab::environment::write_heatmap_pgm;
use hjlab::{Background, EnvParams, Environment, Orientation, Plant, PlantSpec, Window};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "hjlab-examples".into()));
    std::fs::create_dir_all(&dir)?;

    // small rectangles so that the random field is not saturated
    let sparse = EnvParams { lambda: 3.0, mu: 2.0, k_max: 4, seed: 7, ..EnvParams::default() };
    let random = Environment::sample(sparse, Window::centered_square(24.0), PlantSpec::default())?;
    let complete = random.rectangles().iter().filter(|r| random.is_complete(r)).count();
    println!(
        "random: {} rectangles ({complete} complete), c(0, 0) = {:+.3}, truncation bound {:.3}",
        random.rectangles().len(),
        random.c_value([0.0, 0.0])?,
        random.truncation_bound()
    );
    write_heatmap_pgm(&random, &dir.join("random.pgm"))?;

    let params = EnvParams::default();
    let plants = PlantSpec::new(vec![Plant::present(Orientation::Horizontal, 1, 0, 0)]);
    let lone = Environment::build(params, Window::centered_square(48.0), plants, Background::Empty)?;
    println!(
        "lone horizontal k=1: c(0, 0) = {:+.3}, c(0, 30) = {:+.3}, error bound {}",
        lone.c_value([0.0, 0.0])?,
        lone.c_value([0.0, 30.0])?,
        lone.c_error_bound()
    );
    write_heatmap_pgm(&lone, &dir.join("lone.pgm"))?;
    println!("wrote {}", dir.display());
    Ok(())
}
