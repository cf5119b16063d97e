//! The separated non-convex Hamiltonian
//! `H(p, x) = -c(x) + |p2| - |p1| + max(‖p‖∞ - 2, 0)^q`.

use crate::environment::{CostField, EnvError};
use crate::geometry::Point;

/// Gradient-only part `|p2| - |p1| + max(‖p‖∞ - 2, 0)^q`.
#[inline]
pub fn kinetic(p: [f64; 2], q: f64) -> f64 {
    let (a1, a2) = (p[0].abs(), p[1].abs());
    let excess = (a1.max(a2) - 2.0).max(0.0);
    let growth = if excess > 0.0 { excess.powf(q) } else { 0.0 };
    a2 - a1 + growth
}

/// `p̂ = (p2, -p1)`; on `‖p‖∞ ≤ 2`, `kinetic(p̂) = -kinetic(p)`.
#[inline]
pub fn rotate_gradient(p: [f64; 2]) -> [f64; 2] {
    [p[1], -p[0]]
}

#[derive(Clone, Copy)]
pub struct HamiltonianParams<'a> {
    pub q: f64,
    pub env: &'a dyn CostField,
}

impl std::fmt::Debug for HamiltonianParams<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HamiltonianParams").field("q", &self.q).finish_non_exhaustive()
    }
}

impl<'a> HamiltonianParams<'a> {
    pub fn new(q: f64, env: &'a dyn CostField) -> Result<Self, EnvError> {
        if !(q > 1.0) || !q.is_finite() {
            return Err(EnvError::InvalidParams(format!("q must exceed 1, got {q}")));
        }
        Ok(Self { q, env })
    }

    /// `H(p, x)`.
    pub fn eval(&self, p: [f64; 2], x: Point) -> Result<f64, EnvError> {
        Ok(-self.env.cost(x)? + kinetic(p, self.q))
    }
}

/// `H(p, x)` given an already evaluated `c(x)`.
#[inline]
pub fn hamiltonian_with_cost(p: [f64; 2], c: f64, q: f64) -> f64 {
    -c + kinetic(p, q)
}

/// Outcome of [`check_assumptions`].
#[derive(Debug, Clone, PartialEq)]
pub struct AssumptionReport {
    /// `(R, min_{|p| = R} H / R)` for `R ∈ {4, 8, 16, 32}`.
    pub growth_ratios: Vec<(f64, f64)>,
    pub superlinear: bool,
    /// Largest per-axis difference quotient on `‖p‖∞ ≤ 2`.
    pub lipschitz_per_axis: [f64; 2],
    pub lipschitz_unit: bool,
    /// Human-readable witnesses of failed checks.
    pub witnesses: Vec<String>,
}

impl AssumptionReport {
    pub fn passed(&self) -> bool {
        self.superlinear && self.lipschitz_unit
    }
}

/// Samples `H` on circles `|p| = R` (superlinear growth of the minimum) and
/// difference quotients on the box `‖p‖∞ ≤ 2` (per-axis Lipschitz constant 1),
/// at the given points `xs`.
pub fn check_assumptions(
    hp: &HamiltonianParams<'_>,
    xs: &[Point],
    sample_count: usize,
) -> Result<AssumptionReport, EnvError> {
    if sample_count == 0 || xs.is_empty() {
        return Err(EnvError::InvalidParams("need at least one sample and one point".into()));
    }
    let costs = xs.iter().map(|&x| hp.env.cost(x)).collect::<Result<Vec<_>, _>>()?;
    let mut witnesses = Vec::new();

    let mut growth_ratios = Vec::new();
    for radius in [4.0, 8.0, 16.0, 32.0] {
        let mut min_h = f64::INFINITY;
        for s in 0..sample_count {
            let theta = std::f64::consts::TAU * s as f64 / sample_count as f64;
            let p = [radius * theta.cos(), radius * theta.sin()];
            let kin = kinetic(p, hp.q);
            for &c in &costs {
                min_h = min_h.min(kin - c);
            }
        }
        growth_ratios.push((radius, min_h / radius));
    }
    let mut superlinear = true;
    for w in growth_ratios.windows(2) {
        if !(w[1].1 > w[0].1) {
            superlinear = false;
            witnesses.push(format!(
                "min H/R not increasing: R={} ratio={} then R={} ratio={}",
                w[0].0, w[0].1, w[1].0, w[1].1
            ));
        }
    }

    // difference quotients with both endpoints inside the box
    let step = 1e-3;
    let mut lip = [0.0f64; 2];
    let n = (sample_count as f64).sqrt().ceil().max(2.0) as usize;
    for a in 0..n {
        for b in 0..n {
            let p = [-2.0 + (4.0 - step) * a as f64 / (n - 1) as f64, -2.0 + (4.0 - step) * b as f64 / (n - 1) as f64];
            for axis in 0..2 {
                let mut p2 = p;
                p2[axis] += step;
                let quotient = (kinetic(p2, hp.q) - kinetic(p, hp.q)).abs() / step;
                lip[axis] = lip[axis].max(quotient);
            }
        }
    }
    let lipschitz_unit = lip.iter().all(|&l| (l - 1.0).abs() <= 1e-9);
    if !lipschitz_unit {
        witnesses.push(format!("per-axis Lipschitz constants {lip:?} differ from 1"));
    }

    Ok(AssumptionReport { growth_ratios, superlinear, lipschitz_per_axis: lip, lipschitz_unit, witnesses })
}
