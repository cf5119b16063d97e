use std::fmt;
use std::str::FromStr;

use super::{EnvError, EnvParams};
use crate::geometry::{Point, Window};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    /// Long axis along `x1`; sets the field to `-1/2`.
    Horizontal,
    /// Long axis along `x2`; sets the field to `+1/2`.
    Vertical,
}

impl Orientation {
    /// Family index `j ∈ {1, 2}` of the Bernoulli variables.
    pub fn index(self) -> u64 {
        match self {
            Orientation::Horizontal => 1,
            Orientation::Vertical => 2,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Orientation::Horizontal => Orientation::Vertical,
            Orientation::Vertical => Orientation::Horizontal,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::Horizontal => "horizontal",
            Orientation::Vertical => "vertical",
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Orientation {
    type Err = EnvError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "h" | "H" | "horizontal" | "1" => Ok(Orientation::Horizontal),
            "v" | "V" | "vertical" | "2" => Ok(Orientation::Vertical),
            other => Err(EnvError::InvalidParams(format!("unknown orientation '{other}'"))),
        }
    }
}

/// One sampled rectangle. Length and width are derived from `(k, lambda, mu)`
/// when the rectangle is created and cannot be set independently.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rectangle {
    orientation: Orientation,
    k: u32,
    center: (i64, i64),
    length: f64,
    width: f64,
}

impl Rectangle {
    pub fn new(orientation: Orientation, k: u32, center: (i64, i64), params: &EnvParams) -> Self {
        Self { orientation, k, center, length: params.length(k), width: params.width() }
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn center(&self) -> (i64, i64) {
        self.center
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    /// Half extents along `(x1, x2)`.
    pub fn half_extents(&self) -> (f64, f64) {
        match self.orientation {
            Orientation::Horizontal => (self.length / 2.0, self.width / 2.0),
            Orientation::Vertical => (self.width / 2.0, self.length / 2.0),
        }
    }

    pub fn bounds(&self) -> Window {
        let (a, b) = self.half_extents();
        let (l, m) = (self.center.0 as f64, self.center.1 as f64);
        Window::new([l - a, m - b], [l + a, m + b])
    }

    /// Closed-set membership.
    pub fn contains(&self, x: Point) -> bool {
        let (a, b) = self.half_extents();
        (x[0] - self.center.0 as f64).abs() <= a && (x[1] - self.center.1 as f64).abs() <= b
    }

    pub fn intersects(&self, other: &Rectangle) -> bool {
        self.bounds().intersects(&other.bounds())
    }

    pub fn intersects_window(&self, w: &Window) -> bool {
        self.bounds().intersects(w)
    }

    /// Distance from `x` to the complement of the rectangle (zero outside).
    pub fn depth(&self, x: Point) -> f64 {
        let (a, b) = self.half_extents();
        let d1 = a - (x[0] - self.center.0 as f64).abs();
        let d2 = b - (x[1] - self.center.1 as f64).abs();
        d1.min(d2).max(0.0)
    }

    /// The rectangle seen by the rotated environment: horizontal `(l, m)`
    /// becomes vertical `(-m, l)` and vice versa, same scale.
    pub fn rotated(&self) -> Self {
        Self {
            orientation: self.orientation.opposite(),
            k: self.k,
            center: (-self.center.1, self.center.0),
            length: self.length,
            width: self.width,
        }
    }

    pub(crate) fn key(&self) -> (Orientation, u32, i64, i64) {
        (self.orientation, self.k, self.center.0, self.center.1)
    }
}

/// A forced Bernoulli outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Plant {
    pub orientation: Orientation,
    pub k: u32,
    pub l: i64,
    pub m: i64,
    pub present: bool,
}

impl Plant {
    pub fn present(orientation: Orientation, k: u32, l: i64, m: i64) -> Self {
        Self { orientation, k, l, m, present: true }
    }

    pub fn absent(orientation: Orientation, k: u32, l: i64, m: i64) -> Self {
        Self { orientation, k, l, m, present: false }
    }
}

impl fmt::Display for Plant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = match self.orientation {
            Orientation::Horizontal => 'h',
            Orientation::Vertical => 'v',
        };
        write!(f, "{o}:{}:{}:{}:{}", self.k, self.l, self.m, u8::from(self.present))
    }
}

impl FromStr for Plant {
    type Err = EnvError;

    /// Parses `orientation:k:l:m[:present]`, e.g. `h:3:0:0` or `v:2:5:-1:0`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || EnvError::InvalidParams(format!("malformed plant '{s}', expected o:k:l:m[:0|1]"));
        let parts: Vec<&str> = s.trim().split(':').collect();
        if parts.len() != 4 && parts.len() != 5 {
            return Err(bad());
        }
        let orientation = parts[0].parse()?;
        let k = parts[1].trim().parse().map_err(|_| bad())?;
        let l = parts[2].trim().parse().map_err(|_| bad())?;
        let m = parts[3].trim().parse().map_err(|_| bad())?;
        let present = match parts.get(4).map(|p| p.trim()) {
            None | Some("1") | Some("true") => true,
            Some("0") | Some("false") => false,
            _ => return Err(bad()),
        };
        Ok(Plant { orientation, k, l, m, present })
    }
}

/// Forced outcomes overriding the Bernoulli draws at exactly their indices.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PlantSpec {
    pub entries: Vec<Plant>,
}

impl PlantSpec {
    pub fn new(entries: Vec<Plant>) -> Self {
        Self { entries }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Last entry wins when an index is listed twice.
    pub fn lookup(&self, orientation: Orientation, k: u32, l: i64, m: i64) -> Option<bool> {
        self.entries
            .iter()
            .rev()
            .find(|p| p.orientation == orientation && p.k == k && p.l == l && p.m == m)
            .map(|p| p.present)
    }
}

/// The unplanted Bernoulli variable `X^j_{k,l,m}` with parameter `T_k^{-2}`.
#[inline]
pub fn raw_bernoulli(seed: u64, orientation: Orientation, k: u32, l: i64, m: i64) -> bool {
    let h = rng::mix(seed, &[orientation.index(), k as u64, l as u64, m as u64]);
    rng::unit_interval(h) < (-2.0 * k as f64).exp2()
}

/// Bernoulli draw with plant overrides.
pub fn bernoulli_draw(
    params: &EnvParams,
    plants: &PlantSpec,
    orientation: Orientation,
    k: u32,
    l: i64,
    m: i64,
) -> bool {
    plants.lookup(orientation, k, l, m).unwrap_or_else(|| raw_bernoulli(params.seed, orientation, k, l, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plant_overrides_draw() {
        let params = EnvParams::default();
        let plants = PlantSpec::new(vec![Plant::present(Orientation::Horizontal, 3, 0, 0)]);
        assert!(bernoulli_draw(&params, &plants, Orientation::Horizontal, 3, 0, 0));
        let off = PlantSpec::new(vec![Plant::absent(Orientation::Horizontal, 3, 0, 0)]);
        assert!(!bernoulli_draw(&params, &off, Orientation::Horizontal, 3, 0, 0));
    }

    #[test]
    fn draws_are_reproducible() {
        let params = EnvParams { seed: 99, ..EnvParams::default() };
        let none = PlantSpec::default();
        for l in -20..20 {
            let a = bernoulli_draw(&params, &none, Orientation::Vertical, 1, l, 3);
            let b = bernoulli_draw(&params, &none, Orientation::Vertical, 1, l, 3);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn empirical_rate_at_scale_two() {
        // exact parameter T_2^{-2} = 1/16; SE = sqrt(p(1-p)/n)
        let n = 1_000_000i64;
        let hits = (0..n).filter(|&i| raw_bernoulli(17, Orientation::Horizontal, 2, i % 1000, i / 1000)).count() as f64;
        let p = 1.0 / 16.0;
        let se = (p * (1.0 - p) / n as f64).sqrt();
        assert!((hits / n as f64 - p).abs() <= 3.0 * se, "{}", hits / n as f64);
    }

    #[test]
    fn rectangle_geometry() {
        let p = EnvParams::default();
        let r = Rectangle::new(Orientation::Horizontal, 2, (0, 0), &p);
        assert_eq!(r.length(), 161.0);
        assert_eq!(r.width(), 41.0);
        assert!(r.contains([80.5, 20.5]));
        assert!(!r.contains([80.6, 0.0]));
        let v = r.rotated();
        assert_eq!(v.orientation(), Orientation::Vertical);
        assert!(v.contains([20.5, 80.5]));
        assert!(!v.contains([21.0, 0.0]));
        assert_eq!(r.rotated().rotated().rotated().rotated(), r);
    }

    #[test]
    fn plant_text_round_trip() {
        let p: Plant = "v:4:-3:12:0".parse().unwrap();
        assert_eq!(p, Plant::absent(Orientation::Vertical, 4, -3, 12));
        assert_eq!(p.to_string().parse::<Plant>().unwrap(), p);
        assert!("x:1:0:0".parse::<Plant>().is_err());
    }
}
