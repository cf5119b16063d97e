use std::io::{self, Write};
use std::path::{Path, PathBuf};

use super::{SolutionField, SolverRun};
use crate::pgm;

/// Probe series as CSV: `t,u_probe,u_probe_over_t,max_grad_inf`.
pub fn write_probe_csv(run: &SolverRun, mut out: impl Write, comment: Option<&str>) -> io::Result<()> {
    if let Some(c) = comment {
        writeln!(out, "# {c}")?;
    }
    writeln!(out, "t,u_probe,u_probe_over_t,max_grad_inf")?;
    for &(t, u, g) in &run.probe {
        writeln!(out, "{t},{u},{},{g}", u / t)?;
    }
    Ok(())
}

/// Writes the field as an auto-scaled greymap and returns the path of the
/// sidecar file holding the value range. Top row is the largest `x₂`.
pub fn write_snapshot_pgm(field: &SolutionField, path: &Path) -> io::Result<PathBuf> {
    let n = field.grid.n();
    let lo = field.values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = field.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    let mut pixels = Vec::with_capacity(n * n);
    for b in (0..n).rev() {
        for a in 0..n {
            let v = field.values[b * n + a];
            pixels.push(pgm::unit_to_byte(if span > 0.0 { (v - lo) / span } else { 0.5 }));
        }
    }
    pgm::write_p5(path, n, n, &pixels)?;
    let sidecar = path.with_extension("range.txt");
    std::fs::write(&sidecar, format!("t = {}\nmin = {lo}\nmax = {hi}\n", field.t))?;
    Ok(sidecar)
}
