use std::io::{self, Write};
use std::path::Path;

use super::{EnvError, Environment};
use crate::pgm;

/// Rectangles as CSV: `orientation,k,l,m,length,width,complete`.
pub fn rectangles_csv(env: &Environment) -> String {
    let mut out = String::from("orientation,k,l,m,length,width,complete\n");
    for r in env.rectangles() {
        let (l, m) = r.center();
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.orientation(),
            r.k(),
            l,
            m,
            r.length(),
            r.width(),
            env.is_complete(r)
        ));
    }
    out
}

pub fn write_rectangles_csv(env: &Environment, mut out: impl Write, comment: Option<&str>) -> io::Result<()> {
    if let Some(c) = comment {
        writeln!(out, "# {c}")?;
    }
    out.write_all(rectangles_csv(env).as_bytes())
}

/// Heatmap of `c` over the evaluable grid nodes; `v` maps to
/// `round((v + 1/2) * 255)`, top row is the largest `x2`.
pub fn write_heatmap_pgm(env: &Environment, path: &Path) -> Result<(), HeatmapError> {
    let ((i_lo, i_hi), (j_lo, j_hi)) = env.node_range();
    let width = (i_hi - i_lo + 1).max(0) as usize;
    let height = (j_hi - j_lo + 1).max(0) as usize;
    let mut pixels = Vec::with_capacity(width * height);
    for j in (j_lo..=j_hi).rev() {
        for i in i_lo..=i_hi {
            pixels.push(pgm::unit_to_byte(env.c_node(i, j)? + 0.5));
        }
    }
    pgm::write_p5(path, width, height, &pixels)?;
    Ok(())
}

#[derive(Debug, thiserror::Error)]
pub enum HeatmapError {
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Io(#[from] io::Error),
}
