//! Slow reference evaluations, kept independent of the indexed fast paths.
//!
//! Used by tests and the acceptance suite only.

use super::{EnvError, EnvParams, Environment, Orientation, Rectangle};
use crate::geometry::Point;

fn covers(params: &EnvParams, r: &Rectangle, x: Point) -> bool {
    let long = params.lambda * (r.k() as f64).exp2() + 1.0;
    let short = params.mu + 1.0;
    let (dx, dy) = ((x[0] - r.center().0 as f64).abs(), (x[1] - r.center().1 as f64).abs());
    match r.orientation() {
        Orientation::Horizontal => 2.0 * dx <= long && 2.0 * dy <= short,
        Orientation::Vertical => 2.0 * dx <= short && 2.0 * dy <= long,
    }
}

/// Literal replay of the two painting phases over a linear scan of all
/// rectangles: horizontals paint `-1/2` scale by scale, then every vertical
/// of scale `k` applies the three-case rule in increasing `k`.
pub fn c2_sequential_oracle(env: &Environment, x: Point) -> Result<f64, EnvError> {
    if !env.window().contains(x) {
        return Err(EnvError::OutsideWindow(x));
    }
    let params = env.params();
    let rects = env.rectangles();
    let k_top = rects.iter().map(Rectangle::k).max().unwrap_or(0);

    let mut c = 0.0;
    for k in 1..=k_top {
        for r in rects.iter().filter(|r| r.k() == k && r.orientation() == Orientation::Horizontal) {
            if covers(params, r, x) {
                c = -0.5;
            }
        }
    }
    let horizontal_at = |pred: &dyn Fn(u32) -> bool| {
        rects.iter().any(|r| r.orientation() == Orientation::Horizontal && pred(r.k()) && covers(params, r, x))
    };
    for k in 1..=k_top {
        for r in rects.iter().filter(|r| r.k() == k && r.orientation() == Orientation::Vertical) {
            if !covers(params, r, x) {
                continue;
            }
            if horizontal_at(&|kk| kk > k) {
                // untouched
            } else if horizontal_at(&|kk| kk == k) {
                c = 0.0;
            } else {
                c = 0.5;
            }
        }
    }
    Ok(c)
}

/// Brute-force inf/sup-convolution of the sequential `c²` over a local grid
/// of spacing `step` covering the unit disc around `x`.
pub fn c_brute_force(env: &Environment, x: Point, step: f64) -> Result<f64, EnvError> {
    let here = c2_sequential_oracle(env, x)?;
    let n = (1.0 / step).ceil() as i64 + 1;
    let mut inf_plus = here;
    let mut sup_minus = here;
    for a in -n..=n {
        for b in -n..=n {
            let y = [x[0] + a as f64 * step, x[1] + b as f64 * step];
            let d = (a as f64 * step).hypot(b as f64 * step);
            if d > 1.0 + step {
                continue;
            }
            let v = c2_sequential_oracle(env, y)?;
            inf_plus = inf_plus.min(v + d);
            sup_minus = sup_minus.max(v - d);
        }
    }
    Ok(if here > 0.0 {
        inf_plus.max(0.0)
    } else if here < 0.0 {
        sup_minus.min(0.0)
    } else {
        0.0
    })
}
