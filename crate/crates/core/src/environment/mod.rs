//! The stationary random field `c_ω` built from dyadic rectangles.
//!
//! Horizontal rectangles push the field to `-1/2`, vertical ones to `+1/2`.
//! Where orientations overlap the larger scale wins and equal scales cancel
//! to `0` ([`Environment::c2_value`]). The piecewise-constant field is then
//! made 1-Lipschitz by an inf/sup-convolution ([`Environment::c_value`]),
//! evaluated through exact grid distance transforms.

mod edt;
mod export;
mod field;
mod index;
pub mod oracle;
mod params;
mod rectangle;

use thiserror::Error;

pub use export::{rectangles_csv, write_heatmap_pgm, write_rectangles_csv, HeatmapError};
pub use params::EnvParams;
pub use rectangle::{bernoulli_draw, raw_bernoulli, Orientation, Plant, PlantSpec, Rectangle};

use crate::geometry::{Point, Window};
use field::FieldGrid;
use index::RectIndex;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnvError {
    #[error("invalid environment parameters: {0}")]
    InvalidParams(String),
    #[error("point ({}, {}) is outside sampled window", .0[0], .0[1])]
    OutsideWindow(Point),
    #[error("point ({}, {}) is outside evaluable region", .0[0], .0[1])]
    OutsideEvaluable(Point),
}

/// What the Bernoulli variables not covered by a plant do.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Background {
    /// Independent draws with parameter `T_k^{-2}`.
    Random,
    /// Every unplanted variable is zero: only planted rectangles exist. This
    /// conditions on the (positive-probability, for a bounded window) event
    /// that no other rectangle meets the window.
    Empty,
}

/// A value of `c` at a point; implemented by [`Environment`] and by
/// [`ConstantCost`] for calibration runs.
pub trait CostField: Sync {
    fn cost(&self, x: Point) -> Result<f64, EnvError>;

    /// Batch evaluation; implementations may share work between nearby points.
    fn costs(&self, xs: &[Point]) -> Result<Vec<f64>, EnvError> {
        xs.iter().map(|&x| self.cost(x)).collect()
    }
}

/// `c ≡ value` everywhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantCost(pub f64);

impl CostField for ConstantCost {
    fn cost(&self, _x: Point) -> Result<f64, EnvError> {
        Ok(self.0)
    }
}

/// A realization of the environment over a bounded window.
///
/// Immutable after construction. The regularized field is cached lazily per
/// tile; evaluation is safe from many threads.
#[derive(Debug)]
pub struct Environment {
    params: EnvParams,
    window: Window,
    sample_window: Window,
    plants: PlantSpec,
    background: Background,
    rects: Vec<Rectangle>,
    index: RectIndex,
    grid: FieldGrid,
}

impl Environment {
    /// Samples every rectangle of scale `<= k_max` that meets the window, with
    /// plants overriding their draws.
    pub fn sample(params: EnvParams, window: Window, plants: PlantSpec) -> Result<Self, EnvError> {
        Self::build(params, window, plants, Background::Random)
    }

    /// Only the planted rectangles; see [`Background::Empty`].
    pub fn planted_only(params: EnvParams, window: Window, plants: PlantSpec) -> Result<Self, EnvError> {
        Self::build(params, window, plants, Background::Empty)
    }

    pub fn build(
        params: EnvParams,
        window: Window,
        plants: PlantSpec,
        background: Background,
    ) -> Result<Self, EnvError> {
        params.validate_geometry()?;
        check_window(&window)?;
        for p in &plants.entries {
            if p.k < 1 || p.k > params.k_max {
                return Err(EnvError::InvalidParams(format!("plant {p} has scale outside 1..={}", params.k_max)));
            }
        }
        let sample_window = window.expand(Self::sample_margin(&params));
        let rects = sample_rectangles(&params, &sample_window, &plants, background);
        Ok(Self::assemble(params, window, sample_window, plants, background, rects))
    }

    /// An environment with an explicit rectangle set, e.g. a rotated one.
    /// Rectangles not meeting the sampled region are dropped.
    pub fn from_rectangles(params: EnvParams, window: Window, rects: Vec<Rectangle>) -> Result<Self, EnvError> {
        params.validate_geometry()?;
        check_window(&window)?;
        let sample_window = window.expand(Self::sample_margin(&params));
        let rects = rects.into_iter().filter(|r| r.intersects_window(&sample_window)).collect();
        Ok(Self::assemble(params, window, sample_window, PlantSpec::default(), Background::Empty, rects))
    }

    fn assemble(
        params: EnvParams,
        window: Window,
        sample_window: Window,
        plants: PlantSpec,
        background: Background,
        rects: Vec<Rectangle>,
    ) -> Self {
        let index = RectIndex::build(&rects);
        let grid = FieldGrid::new(&window, params.env_grid_h);
        Self { params, window, sample_window, plants, background, rects, index, grid }
    }

    /// Rectangles are sampled this far beyond the window so the distance
    /// transforms near its edge see everything within distance 1.
    fn sample_margin(params: &EnvParams) -> f64 {
        1.0 + 3.0 * params.env_grid_h
    }

    pub fn params(&self) -> &EnvParams {
        &self.params
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn plants(&self) -> &PlantSpec {
        &self.plants
    }

    pub fn background(&self) -> Background {
        self.background
    }

    /// All sampled rectangles, in scan order.
    pub fn rectangles(&self) -> &[Rectangle] {
        &self.rects
    }

    /// Region where [`Environment::c_value`] is defined.
    pub fn evaluable(&self) -> Window {
        self.window.shrink(self.params.env_grid_h)
    }

    /// Documented bound on `|c_value - c|`.
    pub fn c_error_bound(&self) -> f64 {
        2.0 * self.params.env_grid_h
    }

    /// Largest scales `(k_h, k_v)` of horizontal / vertical rectangles
    /// containing `x` (0 when none).
    pub fn covering_scales(&self, x: Point) -> (u32, u32) {
        let mut kh = 0;
        let mut kv = 0;
        self.index.candidates_at(x, |i| {
            let r = &self.rects[i];
            if r.contains(x) {
                match r.orientation() {
                    Orientation::Horizontal => kh = kh.max(r.k()),
                    Orientation::Vertical => kv = kv.max(r.k()),
                }
            }
        });
        (kh, kv)
    }

    /// Piecewise-constant field `c²` in `{-1/2, 0, 1/2}`: the largest covering
    /// scale decides, equal scales give `0`.
    pub fn c2_value(&self, x: Point) -> Result<f64, EnvError> {
        if !self.window.contains(x) {
            return Err(EnvError::OutsideWindow(x));
        }
        let (kh, kv) = self.covering_scales(x);
        Ok(level_from_scales(kh, kv))
    }

    /// Lipschitz field `c` at `x`, by bilinear interpolation of exact grid
    /// values. Absolute error is at most [`Environment::c_error_bound`].
    pub fn c_value(&self, x: Point) -> Result<f64, EnvError> {
        if !self.evaluable().contains(x) {
            return Err(EnvError::OutsideEvaluable(x));
        }
        Ok(self.grid.interpolate_cached(x, |block| field::compute_block(self, block)))
    }

    /// Batch form of [`Environment::c_value`]. Tiles are computed on the fly
    /// and not cached, so memory stays bounded for very large windows.
    pub fn c_values(&self, xs: &[Point]) -> Result<Vec<f64>, EnvError> {
        let ev = self.evaluable();
        if let Some(&bad) = xs.iter().find(|&&x| !ev.contains(x)) {
            return Err(EnvError::OutsideEvaluable(bad));
        }
        Ok(self.grid.interpolate_batch(xs, |block| field::compute_block(self, block)))
    }

    /// Field value at grid node `(i, j)`, i.e. at `(i h, j h)`.
    pub fn c_node(&self, i: i64, j: i64) -> Result<f64, EnvError> {
        let h = self.params.env_grid_h;
        let x = [i as f64 * h, j as f64 * h];
        if !self.grid.has_node(i, j) {
            return Err(EnvError::OutsideEvaluable(x));
        }
        Ok(self.grid.node_cached(i, j, |block| field::compute_block(self, block)))
    }

    /// Node index range `((i_lo, i_hi), (j_lo, j_hi))` of the field grid.
    pub fn node_range(&self) -> ((i64, i64), (i64, i64)) {
        self.grid.range()
    }

    /// True iff no rectangle of the opposite orientation and scale `>= r.k()`
    /// intersects `r`. Only sampled rectangles are consulted.
    pub fn is_complete(&self, r: &Rectangle) -> bool {
        let mut complete = true;
        self.index.candidates(&r.bounds(), |i| {
            let other = &self.rects[i];
            if other.orientation() != r.orientation() && other.k() >= r.k() && other.intersects(r) {
                complete = false;
            }
        });
        complete
    }

    /// The environment `ω₂` with `c_{ω₂}(x) = -c_{ω₁}(x̂)`, `x̂ = (x2, -x1)`.
    pub fn rotate(&self) -> Environment {
        let rects = self.rects.iter().map(Rectangle::rotated).collect();
        let plants = PlantSpec::new(
            self.plants
                .entries
                .iter()
                .map(|p| Plant { orientation: p.orientation.opposite(), l: -p.m, m: p.l, ..*p })
                .collect(),
        );
        let window = self.window.rotated();
        Self::assemble(self.params, window, self.sample_window.rotated(), plants, self.background, rects)
    }

    /// Upper bound on the probability that some rectangle of scale
    /// `> k_max` meets the window (union bound over the scanned indices).
    pub fn truncation_bound(&self) -> f64 {
        truncation_bound(&self.params, &self.window)
    }
}

impl CostField for Environment {
    fn cost(&self, x: Point) -> Result<f64, EnvError> {
        self.c_value(x)
    }

    fn costs(&self, xs: &[Point]) -> Result<Vec<f64>, EnvError> {
        self.c_values(xs)
    }
}

fn check_window(w: &Window) -> Result<(), EnvError> {
    if w.is_bounded() {
        Ok(())
    } else {
        Err(EnvError::InvalidParams(format!("window {w:?} is not a bounded box")))
    }
}

#[inline]
pub(crate) fn level_from_scales(kh: u32, kv: u32) -> f64 {
    match kh.cmp(&kv) {
        std::cmp::Ordering::Greater => -0.5,
        std::cmp::Ordering::Less => 0.5,
        std::cmp::Ordering::Equal => 0.0,
    }
}

/// Integer center ranges scanned at scale `k` for one orientation.
fn scan_range(params: &EnvParams, window: &Window, orientation: Orientation, k: u32) -> ((i64, i64), (i64, i64)) {
    let (a, b) = match orientation {
        Orientation::Horizontal => (params.length(k) / 2.0, params.width() / 2.0),
        Orientation::Vertical => (params.width() / 2.0, params.length(k) / 2.0),
    };
    (
        ((window.min[0] - a - 1.0).floor() as i64, (window.max[0] + a + 1.0).ceil() as i64),
        ((window.min[1] - b - 1.0).floor() as i64, (window.max[1] + b + 1.0).ceil() as i64),
    )
}

/// Every rectangle of scale `<= k_max` meeting `window`.
pub fn sample_rectangles(
    params: &EnvParams,
    window: &Window,
    plants: &PlantSpec,
    background: Background,
) -> Vec<Rectangle> {
    let mut out = Vec::new();
    match background {
        Background::Random => {
            for k in 1..=params.k_max {
                for orientation in [Orientation::Horizontal, Orientation::Vertical] {
                    let ((l0, l1), (m0, m1)) = scan_range(params, window, orientation, k);
                    for l in l0..=l1 {
                        for m in m0..=m1 {
                            if bernoulli_draw(params, plants, orientation, k, l, m) {
                                let r = Rectangle::new(orientation, k, (l, m), params);
                                if r.intersects_window(window) {
                                    out.push(r);
                                }
                            }
                        }
                    }
                }
            }
        }
        Background::Empty => {
            let mut seen = std::collections::HashSet::new();
            for p in plants.entries.iter().rev() {
                if !seen.insert((p.orientation, p.k, p.l, p.m)) || !p.present {
                    continue;
                }
                let r = Rectangle::new(p.orientation, p.k, (p.l, p.m), params);
                if r.intersects_window(window) {
                    out.push(r);
                }
            }
            out.sort_by_key(|r| r.key());
        }
    }
    out
}

/// Union bound `Σ_{k > k_max} Σ_j #scanned indices · T_k^{-2}`, capped at 1.
pub fn truncation_bound(params: &EnvParams, window: &Window) -> f64 {
    let mut total = 0.0;
    for k in (params.k_max + 1)..=(params.k_max + 200).min(1000) {
        let mut term = 0.0;
        for orientation in [Orientation::Horizontal, Orientation::Vertical] {
            // same index counts as `scan_range`, kept in floating point for large k
            let (a, b) = match orientation {
                Orientation::Horizontal => (params.length(k) / 2.0, params.width() / 2.0),
                Orientation::Vertical => (params.width() / 2.0, params.length(k) / 2.0),
            };
            let span = |lo: f64, hi: f64, pad: f64| (hi + pad + 1.0).ceil() - (lo - pad - 1.0).floor() + 1.0;
            let count = span(window.min[0], window.max[0], a) * span(window.min[1], window.max[1], b);
            term += count * (-2.0 * k as f64).exp2();
        }
        total += term;
        if term < 1e-18 * total {
            break;
        }
    }
    total.min(1.0)
}
