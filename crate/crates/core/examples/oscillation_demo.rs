//! Alternates planted horizontal and vertical rectangles across scales and
//! prints `u(T_k, 0) / T_k` at each, through the experiment driver.
//!
//! `cargo run --example oscillation_demo`

use hjlab::experiments::{cmd_demo_oscillation, Config};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("hjlab-oscillation");
    let mut config = Config::parse(
        "demo.horizontal = 1@0:0, 3@0:300\n\
         demo.vertical = 2@200:0\n",
    )?;
    config.set("output.dir", &dir.to_string_lossy())?;
    let outcome = cmd_demo_oscillation(&config)?;
    for line in &outcome.lines {
        println!("{line}");
    }
    Ok(())
}
