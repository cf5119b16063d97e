//! Planar points and axis-aligned windows.

/// A point of the plane, `[x1, x2]`.
pub type Point = [f64; 2];

/// The quarter turn `x ↦ (x2, -x1)` relating an environment to its rotated twin.
#[inline]
pub fn quarter_turn(x: Point) -> Point {
    [x[1], -x[0]]
}

/// Inverse of [`quarter_turn`]: `y ↦ (-y2, y1)`.
#[inline]
pub fn inverse_quarter_turn(y: Point) -> Point {
    [-y[1], y[0]]
}

#[inline]
pub fn euclidean(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Closed axis-aligned box `[min0, max0] × [min1, max1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub min: Point,
    pub max: Point,
}

impl Window {
    pub fn new(min: Point, max: Point) -> Self {
        Self { min, max }
    }

    /// The square `[-r, r]²`.
    pub fn centered_square(r: f64) -> Self {
        Self::new([-r, -r], [r, r])
    }

    pub fn is_bounded(&self) -> bool {
        self.min.iter().chain(self.max.iter()).all(|v| v.is_finite())
            && self.min[0] <= self.max[0]
            && self.min[1] <= self.max[1]
    }

    pub fn contains(&self, x: Point) -> bool {
        x[0] >= self.min[0] && x[0] <= self.max[0] && x[1] >= self.min[1] && x[1] <= self.max[1]
    }

    pub fn expand(&self, margin: f64) -> Self {
        Self::new([self.min[0] - margin, self.min[1] - margin], [self.max[0] + margin, self.max[1] + margin])
    }

    pub fn shrink(&self, margin: f64) -> Self {
        self.expand(-margin)
    }

    pub fn width(&self) -> f64 {
        self.max[0] - self.min[0]
    }

    pub fn height(&self) -> f64 {
        self.max[1] - self.min[1]
    }

    pub fn intersects(&self, other: &Window) -> bool {
        self.min[0] <= other.max[0]
            && other.min[0] <= self.max[0]
            && self.min[1] <= other.max[1]
            && other.min[1] <= self.max[1]
    }

    pub fn contains_window(&self, other: &Window) -> bool {
        self.contains(other.min) && self.contains(other.max)
    }

    /// Image of the window under [`inverse_quarter_turn`], i.e. the set of `x`
    /// with `quarter_turn(x)` in `self`.
    pub fn rotated(&self) -> Self {
        Self::new([-self.max[1], self.min[0]], [-self.min[1], self.max[0]])
    }
}
