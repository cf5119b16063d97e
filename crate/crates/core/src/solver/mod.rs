//! Explicit monotone scheme for `∂_t u + H(∇u, x) - Δu = 0`, `u(0, ·) = 0`,
//! on a square centred at the origin.
//!
//! Forward Euler in time, a Lax-Friedrichs numerical Hamiltonian and the
//! 5-point Laplacian in space. The step is restricted by
//! `dt ≤ cfl / (4/h² + 2α/h)`, which keeps every stencil coefficient
//! nonnegative as long as `α` dominates the per-axis Lipschitz constant of
//! `H` on the gradients met (1 on `‖p‖∞ ≤ 2`, monitored at run time).

mod output;

use rayon::prelude::*;
use thiserror::Error;

use crate::closed_forms::SuperSolutionSpec;
use crate::environment::EnvError;
use crate::geometry::Point;
use crate::hamiltonian::{hamiltonian_with_cost, HamiltonianParams};

pub use output::{write_probe_csv, write_snapshot_pgm};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("invalid solver configuration: {0}")]
    Config(String),
    #[error("time step {dt} exceeds the stability limit {limit}")]
    Cfl { dt: f64, limit: f64 },
    #[error("no probe value recorded at t = {0}")]
    NotRecorded(f64),
    #[error(transparent)]
    Env(#[from] EnvError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// Zero normal derivative by ghost reflection.
    NeumannZero,
    /// Boundary nodes held at 0.
    DirichletZero,
}

impl Boundary {
    pub fn as_str(self) -> &'static str {
        match self {
            Boundary::NeumannZero => "neumann_zero",
            Boundary::DirichletZero => "dirichlet_zero",
        }
    }
}

impl std::str::FromStr for Boundary {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "neumann_zero" | "neumann" => Ok(Boundary::NeumannZero),
            "dirichlet_zero" | "dirichlet" => Ok(Boundary::DirichletZero),
            other => Err(format!("unknown boundary mode {other:?}")),
        }
    }
}

/// Which terms the scheme integrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dynamics {
    Full,
    /// `∂_t u = Δu` only; used to calibrate the diffusion stencil.
    HeatOnly,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub h: f64,
    pub cfl: f64,
    pub t_final: f64,
    /// Half-width of the square domain.
    pub radius: f64,
    /// Accept `radius < 2 t_final + 20`.
    pub radius_override: bool,
    pub alpha: f64,
    pub boundary: Boundary,
    pub probe: Point,
    pub grad_monitor_threshold: f64,
    pub dynamics: Dynamics,
    /// Keep the whole field at `t = 0` and at every recorded time.
    pub keep_snapshots: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self::for_horizon(8.0)
    }
}

impl SolverConfig {
    /// Defaults with the domain radius `2 t_final + 20`.
    pub fn for_horizon(t_final: f64) -> Self {
        Self {
            h: 0.25,
            cfl: 0.9,
            t_final,
            radius: Self::default_radius(t_final),
            radius_override: false,
            alpha: 2.0,
            boundary: Boundary::NeumannZero,
            probe: [0.0, 0.0],
            grad_monitor_threshold: 2.0,
            dynamics: Dynamics::Full,
            keep_snapshots: false,
        }
    }

    pub fn default_radius(t_final: f64) -> f64 {
        2.0 * t_final + 20.0
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        let bad = |m: String| Err(SolverError::Config(m));
        if !(self.h > 0.0 && self.h.is_finite()) {
            return bad(format!("h must be positive, got {}", self.h));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return bad(format!("cfl must lie in (0, 1], got {}", self.cfl));
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return bad(format!("t_final must be nonnegative, got {}", self.t_final));
        }
        if !(self.alpha >= 1.0 && self.alpha.is_finite()) {
            return bad(format!("alpha must be at least 1, got {}", self.alpha));
        }
        if !(self.radius > self.h) || !self.radius.is_finite() {
            return bad(format!("radius {} must exceed h", self.radius));
        }
        if !self.radius_override && self.radius < Self::default_radius(self.t_final) - 1e-9 {
            return bad(format!(
                "radius {} is below 2 t_final + 20 = {} (set the override to accept)",
                self.radius,
                Self::default_radius(self.t_final)
            ));
        }
        if self.probe.iter().any(|p| p.abs() > self.radius) {
            return bad(format!("probe {:?} lies outside the domain", self.probe));
        }
        if !(self.grad_monitor_threshold > 0.0) {
            return bad("grad_monitor_threshold must be positive".into());
        }
        Ok(())
    }

    /// `cfl / (4/h² + 2α/h)`, or `cfl·h²/4` for pure diffusion.
    pub fn dt_limit(&self) -> f64 {
        match self.dynamics {
            Dynamics::Full => self.cfl / (4.0 / (self.h * self.h) + 2.0 * self.alpha / self.h),
            Dynamics::HeatOnly => self.cfl * self.h * self.h / 4.0,
        }
    }
}

/// Uniform square grid `{(i h, j h)}` with `|i|, |j| ≤ half`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub h: f64,
    pub half: usize,
}

impl Grid {
    pub fn new(radius: f64, h: f64) -> Self {
        let ratio = radius / h;
        let half = if (ratio - ratio.round()).abs() < 1e-9 { ratio.round() } else { ratio.ceil() } as usize;
        Self { h, half }
    }

    /// Nodes per axis.
    pub fn n(&self) -> usize {
        2 * self.half + 1
    }

    pub fn len(&self) -> usize {
        self.n() * self.n()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn extent(&self) -> f64 {
        self.half as f64 * self.h
    }

    /// Coordinates of node `(a, b)` with `0 ≤ a, b < n`; row `b` holds `x₂`.
    #[inline]
    pub fn point(&self, a: usize, b: usize) -> Point {
        [(a as f64 - self.half as f64) * self.h, (b as f64 - self.half as f64) * self.h]
    }

    pub fn points(&self) -> Vec<Point> {
        let n = self.n();
        (0..n).flat_map(|b| (0..n).map(move |a| self.point(a, b))).collect()
    }

    /// Bilinear interpolation of nodal `values` at `x`.
    pub fn interpolate(&self, values: &[f64], x: Point) -> f64 {
        let n = self.n();
        let fx = (x[0] / self.h + self.half as f64).clamp(0.0, (n - 1) as f64);
        let fy = (x[1] / self.h + self.half as f64).clamp(0.0, (n - 1) as f64);
        let a = (fx.floor() as usize).min(n - 2);
        let b = (fy.floor() as usize).min(n - 2);
        let (sx, sy) = (fx - a as f64, fy - b as f64);
        let v = |i: usize, j: usize| values[j * n + i];
        (1.0 - sy) * ((1.0 - sx) * v(a, b) + sx * v(a + 1, b)) + sy * ((1.0 - sx) * v(a, b + 1) + sx * v(a + 1, b + 1))
    }
}

/// Nodal values at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionField {
    pub grid: Grid,
    pub t: f64,
    pub values: Vec<f64>,
    /// Running maximum of the discrete `‖∇u‖∞` (one-sided differences).
    pub max_grad_inf: f64,
}

impl SolutionField {
    pub fn zeros(grid: Grid) -> Self {
        Self { grid, t: 0.0, values: vec![0.0; grid.len()], max_grad_inf: 0.0 }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(Point) -> f64) -> Self {
        let values = grid.points().into_iter().map(f).collect();
        let mut field = Self { grid, t: 0.0, values, max_grad_inf: 0.0 };
        field.max_grad_inf = field.grad_inf();
        field
    }

    pub fn at(&self, x: Point) -> f64 {
        self.grid.interpolate(&self.values, x)
    }

    /// Largest one-sided difference quotient in either direction.
    pub fn grad_inf(&self) -> f64 {
        let n = self.grid.n();
        let h = self.grid.h;
        let u = &self.values;
        let mut g: f64 = 0.0;
        for b in 0..n {
            for a in 0..n {
                let v = u[b * n + a];
                if a + 1 < n {
                    g = g.max((u[b * n + a + 1] - v).abs() / h);
                }
                if b + 1 < n {
                    g = g.max((u[(b + 1) * n + a] - v).abs() / h);
                }
            }
        }
        g
    }
}

/// Result of [`solve`].
#[derive(Debug, Clone)]
pub struct SolverRun {
    pub config: SolverConfig,
    /// `(t, u(t, probe), max_grad_inf so far)` at `t = 1, 2, …` and at `t_final`.
    pub probe: Vec<(f64, f64, f64)>,
    pub steps: usize,
    /// Largest step used.
    pub dt: f64,
    pub max_grad_inf: f64,
    pub warnings: Vec<String>,
    pub final_field: SolutionField,
    /// Fields at `t = 0` and every recorded time, when requested.
    pub snapshots: Vec<SolutionField>,
}

impl SolverRun {
    /// No gradient warning fired, so the stencil stayed monotone.
    pub fn monotone(&self) -> bool {
        self.warnings.is_empty()
    }

    pub fn value_at(&self, t: f64) -> Result<f64, SolverError> {
        self.probe.iter().find(|p| (p.0 - t).abs() < 1e-9).map(|p| p.1).ok_or(SolverError::NotRecorded(t))
    }
}

/// `u(T, probe)/T`, the value of the rescaled problem at `ε = 1/T`.
pub fn normalize_value(run: &SolverRun, t: f64) -> Result<f64, SolverError> {
    if !(t > 0.0) {
        return Err(SolverError::NotRecorded(t));
    }
    Ok(run.value_at(t)? / t)
}

/// Lax-Friedrichs numerical Hamiltonian from backward and forward differences.
#[inline]
pub fn lf_hamiltonian(pm: [f64; 2], pp: [f64; 2], c: f64, q: f64, alpha: f64) -> f64 {
    let p = [0.5 * (pm[0] + pp[0]), 0.5 * (pm[1] + pp[1])];
    hamiltonian_with_cost(p, c, q) - 0.5 * alpha * (pp[0] - pm[0]) - 0.5 * alpha * (pp[1] - pm[1])
}

/// Grid, node costs and configuration of one run.
pub struct Solver {
    config: SolverConfig,
    grid: Grid,
    costs: Vec<f64>,
    q: f64,
}

impl Solver {
    pub fn new(config: SolverConfig, hp: &HamiltonianParams<'_>) -> Result<Self, SolverError> {
        config.validate()?;
        let grid = Grid::new(config.radius, config.h);
        let costs = match config.dynamics {
            Dynamics::Full => hp.env.costs(&grid.points())?,
            Dynamics::HeatOnly => vec![0.0; grid.len()],
        };
        Ok(Self { config, grid, costs, q: hp.q })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    /// One forward-Euler step. Refuses steps above the stability limit.
    pub fn step(&self, field: &mut SolutionField, dt: f64) -> Result<(), SolverError> {
        let limit = self.config.dt_limit();
        if dt > limit * (1.0 + 1e-12) || !(dt > 0.0) {
            return Err(SolverError::Cfl { dt, limit });
        }
        let n = self.grid.n();
        let h = self.grid.h;
        let inv_h = 1.0 / h;
        let inv_h2 = inv_h * inv_h;
        let (alpha, q) = (self.config.alpha, self.q);
        let heat_only = self.config.dynamics == Dynamics::HeatOnly;
        let dirichlet = self.config.boundary == Boundary::DirichletZero;
        let u = &field.values;
        let costs = &self.costs;
        let mut next = vec![0.0; u.len()];
        let row_grads: Vec<f64> = next
            .par_chunks_mut(n)
            .enumerate()
            .map(|(b, row)| {
                let mut g: f64 = 0.0;
                for (a, out) in row.iter_mut().enumerate() {
                    let idx = b * n + a;
                    let on_edge = a == 0 || b == 0 || a == n - 1 || b == n - 1;
                    if dirichlet && on_edge {
                        *out = 0.0;
                        continue;
                    }
                    let v = u[idx];
                    // ghost reflection u[-1] = u[1] for the Neumann edge
                    let west = if a > 0 { u[idx - 1] } else { u[idx + 1] };
                    let east = if a + 1 < n { u[idx + 1] } else { u[idx - 1] };
                    let south = if b > 0 { u[idx - n] } else { u[idx + n] };
                    let north = if b + 1 < n { u[idx + n] } else { u[idx - n] };
                    let pm = [(v - west) * inv_h, (v - south) * inv_h];
                    let pp = [(east - v) * inv_h, (north - v) * inv_h];
                    g = g.max(pm[0].abs()).max(pm[1].abs()).max(pp[0].abs()).max(pp[1].abs());
                    let lap = (west + east + south + north - 4.0 * v) * inv_h2;
                    let transport = if heat_only { 0.0 } else { lf_hamiltonian(pm, pp, costs[idx], q, alpha) };
                    *out = v - dt * (transport - lap);
                }
                g
            })
            .collect();
        field.values = next;
        field.t += dt;
        let g = row_grads.into_iter().fold(0.0, f64::max);
        field.max_grad_inf = field.max_grad_inf.max(g);
        Ok(())
    }

    /// Integrates `init` to `t_final`, recording the probe at every integer
    /// time and at `t_final`. Each unit interval is split into equal steps
    /// below the stability limit.
    pub fn run(&self, init: SolutionField) -> Result<SolverRun, SolverError> {
        if init.grid != self.grid {
            return Err(SolverError::Config("initial field grid does not match the solver grid".into()));
        }
        let cfg = self.config;
        let limit = cfg.dt_limit();
        let mut field = init;
        let mut run = SolverRun {
            config: cfg,
            probe: Vec::new(),
            steps: 0,
            dt: 0.0,
            max_grad_inf: field.max_grad_inf,
            warnings: Vec::new(),
            final_field: SolutionField::zeros(self.grid),
            snapshots: Vec::new(),
        };
        if cfg.keep_snapshots {
            run.snapshots.push(field.clone());
        }
        let mut marks: Vec<f64> = (1..=cfg.t_final.floor() as usize).map(|t| t as f64).collect();
        if cfg.t_final > marks.last().copied().unwrap_or(0.0) + 1e-12 {
            marks.push(cfg.t_final);
        }
        let mut t0 = 0.0;
        for &t1 in &marks {
            let span = t1 - t0;
            let count = (span / limit).ceil().max(1.0) as usize;
            let dt = span / count as f64;
            run.dt = run.dt.max(dt);
            for _ in 0..count {
                self.step(&mut field, dt)?;
            }
            run.steps += count;
            field.t = t1;
            if field.max_grad_inf > cfg.grad_monitor_threshold && run.warnings.is_empty() {
                run.warnings.push(format!(
                    "discrete gradient {:.4} exceeds monitor threshold {} by t = {t1}; alpha may not dominate the \
                     Lipschitz constant of H, run is flagged non-monotone",
                    field.max_grad_inf, cfg.grad_monitor_threshold
                ));
            }
            run.probe.push((t1, field.at(cfg.probe), field.max_grad_inf));
            if cfg.keep_snapshots {
                run.snapshots.push(field.clone());
            }
            t0 = t1;
        }
        run.max_grad_inf = field.max_grad_inf;
        run.final_field = field;
        Ok(run)
    }
}

/// Solves from `u(0, ·) = 0`.
pub fn solve(hp: &HamiltonianParams<'_>, config: SolverConfig) -> Result<SolverRun, SolverError> {
    let solver = Solver::new(config, hp)?;
    solver.run(SolutionField::zeros(solver.grid()))
}

/// Outcome of [`compare_with_supersolution`].
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub nodes_checked: usize,
    pub times_checked: usize,
    /// Largest `u_num - u⁺ - tol(t)`; nonpositive when the check passes.
    pub worst_excess: f64,
    /// `(t, x, u_num - u⁺)` at the worst node.
    pub witness: Option<(f64, Point, f64)>,
}

impl ComparisonReport {
    pub fn passed(&self) -> bool {
        self.worst_excess <= 0.0
    }
}

/// Discretisation budget `0.05·max(t, 1)` of the comparison check.
pub fn comparison_tolerance(t: f64) -> f64 {
    0.05 * t.max(1.0)
}

/// Checks `u_num(t, x) ≤ u⁺(t, x) + 0.05·max(t, 1)` at every node of every
/// snapshot with `t ≤ T_k`.
pub fn compare_with_supersolution(
    snapshots: &[SolutionField],
    spec: &SuperSolutionSpec,
) -> Result<ComparisonReport, SolverError> {
    if snapshots.is_empty() {
        return Err(SolverError::Config("no snapshots to compare; enable keep_snapshots".into()));
    }
    let mut report =
        ComparisonReport { nodes_checked: 0, times_checked: 0, worst_excess: f64::NEG_INFINITY, witness: None };
    for field in snapshots.iter().filter(|f| f.t <= spec.t_max() + 1e-12) {
        let t = field.t.min(spec.t_max());
        let tol = comparison_tolerance(t);
        let n = field.grid.n();
        for b in 0..n {
            for a in 0..n {
                let x = field.grid.point(a, b);
                let u_plus = spec.u_plus(t, x).map_err(|e| SolverError::Config(e.to_string()))?;
                let gap = field.values[b * n + a] - u_plus;
                if gap - tol > report.worst_excess {
                    report.worst_excess = gap - tol;
                    report.witness = Some((t, x, gap));
                }
            }
        }
        report.nodes_checked += n * n;
        report.times_checked += 1;
    }
    Ok(report)
}
