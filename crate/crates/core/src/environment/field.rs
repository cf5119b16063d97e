use std::collections::HashMap;
use std::sync::OnceLock;

use rayon::prelude::*;

use super::edt::{squared_edt, INF};
use super::{level_from_scales, Environment, Orientation};
use crate::geometry::{Point, Window};

const TILE: i64 = 64;

/// Inclusive node index ranges.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Block {
    pub i0: i64,
    pub i1: i64,
    pub j0: i64,
    pub j1: i64,
}

impl Block {
    fn nx(&self) -> usize {
        (self.i1 - self.i0 + 1) as usize
    }

    fn ny(&self) -> usize {
        (self.j1 - self.j0 + 1) as usize
    }

    fn at(&self, values: &[f64], i: i64, j: i64) -> f64 {
        values[(j - self.j0) as usize * self.nx() + (i - self.i0) as usize]
    }
}

/// Nodes `(i h, j h)` covering the window, split into lazily filled tiles.
#[derive(Debug)]
pub(crate) struct FieldGrid {
    h: f64,
    i_lo: i64,
    i_hi: i64,
    j_lo: i64,
    j_hi: i64,
    tiles_x: i64,
    tiles: Vec<OnceLock<Box<[f64]>>>,
}

impl FieldGrid {
    pub fn new(window: &Window, h: f64) -> Self {
        let i_lo = (window.min[0] / h - 1e-9).ceil() as i64;
        let i_hi = (window.max[0] / h + 1e-9).floor() as i64;
        let j_lo = (window.min[1] / h - 1e-9).ceil() as i64;
        let j_hi = (window.max[1] / h + 1e-9).floor() as i64;
        let tiles_x = ((i_hi - i_lo + 1).max(0) + TILE - 1) / TILE;
        let tiles_y = ((j_hi - j_lo + 1).max(0) + TILE - 1) / TILE;
        let tiles = (0..tiles_x * tiles_y).map(|_| OnceLock::new()).collect();
        Self { h, i_lo, i_hi, j_lo, j_hi, tiles_x, tiles }
    }

    pub fn range(&self) -> ((i64, i64), (i64, i64)) {
        ((self.i_lo, self.i_hi), (self.j_lo, self.j_hi))
    }

    pub fn has_node(&self, i: i64, j: i64) -> bool {
        i >= self.i_lo && i <= self.i_hi && j >= self.j_lo && j <= self.j_hi
    }

    fn tile_of(&self, i: i64, j: i64) -> (i64, i64) {
        ((i - self.i_lo) / TILE, (j - self.j_lo) / TILE)
    }

    fn tile_block(&self, t: (i64, i64)) -> Block {
        let i0 = self.i_lo + t.0 * TILE;
        let j0 = self.j_lo + t.1 * TILE;
        Block { i0, i1: (i0 + TILE - 1).min(self.i_hi), j0, j1: (j0 + TILE - 1).min(self.j_hi) }
    }

    pub fn node_cached(&self, i: i64, j: i64, compute: impl Fn(Block) -> Vec<f64>) -> f64 {
        let t = self.tile_of(i, j);
        let block = self.tile_block(t);
        let values = self.tiles[(t.1 * self.tiles_x + t.0) as usize].get_or_init(|| compute(block).into_boxed_slice());
        block.at(values, i, j)
    }

    /// Lower-left node and bilinear weights for `x`.
    fn locate(&self, x: Point) -> (i64, i64, f64, f64) {
        let fi = x[0] / self.h;
        let fj = x[1] / self.h;
        let i = (fi.floor() as i64).clamp(self.i_lo, (self.i_hi - 1).max(self.i_lo));
        let j = (fj.floor() as i64).clamp(self.j_lo, (self.j_hi - 1).max(self.j_lo));
        let fx = (fi - i as f64).clamp(0.0, 1.0);
        let fy = (fj - j as f64).clamp(0.0, 1.0);
        (i, j, fx, fy)
    }

    pub fn interpolate_cached(&self, x: Point, compute: impl Fn(Block) -> Vec<f64>) -> f64 {
        let (i, j, fx, fy) = self.locate(x);
        let v = |a, b| self.node_cached(a, b, &compute);
        bilinear(v(i, j), v(i + 1, j), v(i, j + 1), v(i + 1, j + 1), fx, fy)
    }

    pub fn interpolate_batch(&self, xs: &[Point], compute: impl Fn(Block) -> Vec<f64> + Sync) -> Vec<f64> {
        let mut groups: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (n, &x) in xs.iter().enumerate() {
            let (i, j, _, _) = self.locate(x);
            groups.entry(self.tile_of(i, j)).or_default().push(n);
        }
        let mut groups: Vec<_> = groups.into_iter().collect();
        groups.sort_unstable_by_key(|(t, _)| *t);
        let pieces: Vec<Vec<(usize, f64)>> = groups
            .par_iter()
            .map(|(t, members)| {
                let tb = self.tile_block(*t);
                let block = Block { i1: (tb.i1 + 1).min(self.i_hi), j1: (tb.j1 + 1).min(self.j_hi), ..tb };
                let values = compute(block);
                members
                    .iter()
                    .map(|&n| {
                        let (i, j, fx, fy) = self.locate(xs[n]);
                        let v = |a, b| block.at(&values, a, b);
                        (n, bilinear(v(i, j), v(i + 1, j), v(i, j + 1), v(i + 1, j + 1), fx, fy))
                    })
                    .collect()
            })
            .collect();
        let mut out = vec![0.0; xs.len()];
        for (n, v) in pieces.into_iter().flatten() {
            out[n] = v;
        }
        out
    }
}

#[inline]
fn bilinear(v00: f64, v10: f64, v01: f64, v11: f64, fx: f64, fy: f64) -> f64 {
    (1.0 - fy) * ((1.0 - fx) * v00 + fx * v10) + fy * ((1.0 - fx) * v01 + fx * v11)
}

/// Regularized field at the nodes of `block`.
///
/// The piecewise-constant levels are rasterized on the block plus a halo of
/// width `> 1`; since the convolution only looks a distance 1 away, exact
/// distance transforms on the padded patch give exact node values.
pub(crate) fn compute_block(env: &Environment, block: Block) -> Vec<f64> {
    let h = env.params.env_grid_h;
    let halo = (1.0 / h).ceil() as i64 + 1;
    let patch = Block { i0: block.i0 - halo, i1: block.i1 + halo, j0: block.j0 - halo, j1: block.j1 + halo };
    let (nx, ny) = (patch.nx(), patch.ny());
    let mut kh = vec![0u32; nx * ny];
    let mut kv = vec![0u32; nx * ny];
    let area = Window::new([patch.i0 as f64 * h, patch.j0 as f64 * h], [patch.i1 as f64 * h, patch.j1 as f64 * h]);
    env.index.candidates(&area, |id| {
        let r = &env.rects[id];
        let (a, b) = r.half_extents();
        let (l, m) = (r.center().0 as f64, r.center().1 as f64);
        let bounds = r.bounds();
        let cols: Vec<usize> = ((bounds.min[0] / h).floor() as i64 - 1..=(bounds.max[0] / h).ceil() as i64 + 1)
            .filter(|&i| i >= patch.i0 && i <= patch.i1 && (i as f64 * h - l).abs() <= a)
            .map(|i| (i - patch.i0) as usize)
            .collect();
        if cols.is_empty() {
            return;
        }
        let target = match r.orientation() {
            Orientation::Horizontal => &mut kh,
            Orientation::Vertical => &mut kv,
        };
        for j in ((bounds.min[1] / h).floor() as i64 - 1)..=((bounds.max[1] / h).ceil() as i64 + 1) {
            if j < patch.j0 || j > patch.j1 || (j as f64 * h - m).abs() > b {
                continue;
            }
            let row = (j - patch.j0) as usize * nx;
            for &c in &cols {
                let slot = &mut target[row + c];
                *slot = (*slot).max(r.k());
            }
        }
    });

    let levels: Vec<f64> = kh.iter().zip(&kv).map(|(&a, &b)| level_from_scales(a, b)).collect();
    let distance_to = |level: f64| -> Option<Vec<f64>> {
        let mask: Vec<bool> = levels.iter().map(|&v| v == level).collect();
        if mask.iter().any(|&m| m) {
            Some(squared_edt(&mask, nx, ny))
        } else {
            None
        }
    };
    let out_len = block.nx() * block.ny();
    if levels.iter().all(|&v| v == 0.0) {
        return vec![0.0; out_len];
    }
    let d_neg = distance_to(-0.5);
    let d_zero = distance_to(0.0);
    let d_pos = distance_to(0.5);
    let dist = |d: &Option<Vec<f64>>, idx: usize| match d {
        Some(v) if v[idx] < INF => v[idx].sqrt() * h,
        _ => f64::INFINITY,
    };

    let mut out = Vec::with_capacity(out_len);
    for j in block.j0..=block.j1 {
        for i in block.i0..=block.i1 {
            let idx = (j - patch.j0) as usize * nx + (i - patch.i0) as usize;
            let v = levels[idx];
            let c = if v < 0.0 {
                // sup_y { c²(y) - |x - y| }, clipped at 0
                (-0.5f64).max(-dist(&d_zero, idx)).max(0.5 - dist(&d_pos, idx)).min(0.0)
            } else if v > 0.0 {
                // inf_y { c²(y) + |x - y| }, clipped at 0
                0.5f64.min(dist(&d_zero, idx)).min(-0.5 + dist(&d_neg, idx)).max(0.0)
            } else {
                0.0
            };
            out.push(c);
        }
    }
    out
}
