use std::collections::HashMap;

use super::rectangle::{Orientation, Rectangle};
use crate::geometry::{Point, Window};

/// Per-scale uniform bucket grid over integer rectangle centers.
///
/// Buckets of one `(orientation, k)` layer are as large as the rectangles of
/// that layer, so a point query touches at most four buckets per layer.
#[derive(Debug, Clone, Default)]
pub(crate) struct RectIndex {
    layers: HashMap<(Orientation, u32), Layer>,
}

#[derive(Debug, Clone)]
struct Layer {
    bucket: (i64, i64),
    half: (f64, f64),
    cells: HashMap<(i64, i64), Vec<usize>>,
}

impl RectIndex {
    pub fn build(rects: &[Rectangle]) -> Self {
        let mut layers: HashMap<(Orientation, u32), Layer> = HashMap::new();
        for (i, r) in rects.iter().enumerate() {
            let layer = layers.entry((r.orientation(), r.k())).or_insert_with(|| {
                let half = r.half_extents();
                Layer {
                    bucket: ((2.0 * half.0).ceil().max(1.0) as i64, (2.0 * half.1).ceil().max(1.0) as i64),
                    half,
                    cells: HashMap::new(),
                }
            });
            let (l, m) = r.center();
            let key = (l.div_euclid(layer.bucket.0), m.div_euclid(layer.bucket.1));
            layer.cells.entry(key).or_default().push(i);
        }
        Self { layers }
    }

    /// Indices of rectangles whose bounds may intersect `query`; callers
    /// apply the exact predicate.
    pub fn candidates(&self, query: &Window, mut visit: impl FnMut(usize)) {
        for layer in self.layers.values() {
            let lo_l = (query.min[0] - layer.half.0).floor() as i64;
            let hi_l = (query.max[0] + layer.half.0).ceil() as i64;
            let lo_m = (query.min[1] - layer.half.1).floor() as i64;
            let hi_m = (query.max[1] + layer.half.1).ceil() as i64;
            for bl in lo_l.div_euclid(layer.bucket.0)..=hi_l.div_euclid(layer.bucket.0) {
                for bm in lo_m.div_euclid(layer.bucket.1)..=hi_m.div_euclid(layer.bucket.1) {
                    if let Some(ids) = layer.cells.get(&(bl, bm)) {
                        ids.iter().copied().for_each(&mut visit);
                    }
                }
            }
        }
    }

    pub fn candidates_at(&self, x: Point, visit: impl FnMut(usize)) {
        self.candidates(&Window::new(x, x), visit)
    }
}
