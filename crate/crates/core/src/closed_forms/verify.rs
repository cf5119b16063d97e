//! Stratified residual verification and the derivative-bound suite.
//!
//! Uniform sampling over a window of size `λT_k` almost never lands in the
//! rectangle's neighbourhood for large `k`, so every case region and every
//! seam `|x_i - X_i| = √2σ_i` gets its own quota.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;
use std::io::{self, Write};

use super::{Case, ClosedFormError, SuperSolutionSpec};
use crate::environment::Environment;
use crate::geometry::{inverse_quarter_turn, Point, Window};
use crate::rng::SplitMix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerificationPlan {
    /// Points drawn strictly inside each of the four case regions.
    pub per_case: usize,
    /// Points drawn on the seams (split between the `x₁` seam, the `x₂`
    /// seam and their corners).
    pub per_seam: usize,
    /// Outer regions extend to `span·√2σ_i` from the centre.
    pub span: f64,
    pub seed: u64,
}

impl Default for VerificationPlan {
    fn default() -> Self {
        Self { per_case: 10_000, per_seam: 1_000, span: 2.0, seed: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleKind {
    /// Requirement `residual ≥ bound - tolerance`.
    Super,
    /// Requirement `residual ≤ bound + tolerance`.
    Sub,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualSample {
    pub t: f64,
    pub x: Point,
    pub case: Case,
    pub on_seam: bool,
    pub residual: f64,
    /// Signed bound: a lower bound for [`SampleKind::Super`], an upper bound
    /// for [`SampleKind::Sub`].
    pub case_bound: f64,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub kind: SampleKind,
    pub tolerance: f64,
    pub samples: Vec<ResidualSample>,
}

impl VerificationReport {
    /// How far a sample is on the good side of its bound.
    pub fn margin(&self, s: &ResidualSample) -> f64 {
        match self.kind {
            SampleKind::Super => s.residual - s.case_bound,
            SampleKind::Sub => s.case_bound - s.residual,
        }
    }

    pub fn violations(&self) -> Vec<&ResidualSample> {
        self.samples.iter().filter(|s| self.margin(s) < -self.tolerance).collect()
    }

    pub fn passed(&self) -> bool {
        self.violations().is_empty()
    }

    /// Per case: `(sample count, smallest margin)`.
    pub fn per_case(&self) -> BTreeMap<Case, (usize, f64)> {
        let mut out = BTreeMap::new();
        for s in &self.samples {
            let e = out.entry(s.case).or_insert((0, f64::INFINITY));
            e.0 += 1;
            e.1 = e.1.min(self.margin(s));
        }
        out
    }

    /// Smallest signed bound over the sampled cases (for supersolutions, the
    /// weakest case bound).
    pub fn weakest_bound(&self) -> f64 {
        self.samples.iter().map(|s| s.case_bound.abs()).fold(f64::INFINITY, f64::min)
    }

    /// Worst residual in the direction of the requirement.
    pub fn extreme_residual(&self) -> f64 {
        match self.kind {
            SampleKind::Super => self.samples.iter().map(|s| s.residual).fold(f64::INFINITY, f64::min),
            SampleKind::Sub => self.samples.iter().map(|s| s.residual).fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

/// The box sampled by [`verify_supersolution`], padded so its points are
/// evaluable in an environment built on the returned window.
pub fn verification_window(spec: &SuperSolutionSpec, span: f64, env_grid_h: f64) -> Window {
    let (r1, r2) = (span * SQRT_2 * spec.sigma1(), span * SQRT_2 * spec.sigma2());
    let c = spec.center();
    Window::new([c[0] - r1, c[1] - r2], [c[0] + r1, c[1] + r2]).expand(2.0 * env_grid_h)
}

/// Stratified points `(t, x, on_seam)` around the supersolution's centre.
fn stratified_points(spec: &SuperSolutionSpec, plan: &VerificationPlan) -> Vec<(f64, Point, bool)> {
    let mut rng = SplitMix::new(plan.seed);
    let c = spec.center();
    let edges = [SQRT_2 * spec.sigma1(), SQRT_2 * spec.sigma2()];
    let sign = |rng: &mut SplitMix| if rng.next_u64() & 1 == 0 { 1.0 } else { -1.0 };
    let inner = |rng: &mut SplitMix, axis: usize| rng.uniform(-edges[axis], edges[axis]);
    let outer = |rng: &mut SplitMix, axis: usize| {
        sign(rng) * rng.uniform(edges[axis], plan.span * edges[axis]).max(edges[axis] * (1.0 + 1e-12))
    };
    let seam = |rng: &mut SplitMix, axis: usize| sign(rng) * edges[axis];
    let mut out = Vec::with_capacity(4 * plan.per_case + plan.per_seam);
    let t_max = spec.t_max();
    for case in Case::ALL {
        for _ in 0..plan.per_case {
            let (far1, far2) = match case {
                Case::FarBoth => (true, true),
                Case::FarTransverse => (false, true),
                Case::FarAlong => (true, false),
                Case::Near => (false, false),
            };
            let d1 = if far1 { outer(&mut rng, 0) } else { inner(&mut rng, 0) };
            let d2 = if far2 { outer(&mut rng, 1) } else { inner(&mut rng, 1) };
            out.push((rng.uniform(0.0, t_max), [c[0] + d1, c[1] + d2], false));
        }
    }
    for n in 0..plan.per_seam {
        let (d1, d2) = match n % 3 {
            0 => {
                let d2 = if rng.next_u64() & 1 == 0 { inner(&mut rng, 1) } else { outer(&mut rng, 1) };
                (seam(&mut rng, 0), d2)
            }
            1 => {
                let d1 = if rng.next_u64() & 1 == 0 { inner(&mut rng, 0) } else { outer(&mut rng, 0) };
                (d1, seam(&mut rng, 1))
            }
            _ => (seam(&mut rng, 0), seam(&mut rng, 1)),
        };
        out.push((rng.uniform(0.0, t_max), [c[0] + d1, c[1] + d2], true));
    }
    out
}

fn check_coverage(env: &Environment, xs: &[Point]) -> Result<(), ClosedFormError> {
    let area = env.evaluable();
    match xs.iter().find(|&&x| !area.contains(x)) {
        Some(&x) => Err(crate::environment::EnvError::OutsideEvaluable(x).into()),
        None => Ok(()),
    }
}

/// Evaluates `residual_plus` at stratified points and compares with the
/// case bounds. Tolerance is the environment's `2·env_grid_h`.
pub fn verify_supersolution(
    spec: &SuperSolutionSpec,
    env: &Environment,
    plan: &VerificationPlan,
) -> Result<VerificationReport, ClosedFormError> {
    let points = stratified_points(spec, plan);
    let xs: Vec<Point> = points.iter().map(|p| p.1).collect();
    check_coverage(env, &xs)?;
    let costs = env.c_values(&xs)?;
    let mut samples = Vec::with_capacity(points.len());
    for (&(t, x, on_seam), c) in points.iter().zip(costs) {
        let (case, bound) = spec.residual_plus_case_bound(t, x)?;
        let residual = spec.residual_plus_with_cost(t, x, c)?;
        samples.push(ResidualSample { t, x, case, on_seam, residual, case_bound: bound });
    }
    Ok(VerificationReport { kind: SampleKind::Super, tolerance: env.c_error_bound(), samples })
}

/// The mirrored check: `residual_minus(t, x) ≤ -bound(x̂)` in the rotated
/// environment, with `x̂` drawn by the same stratification.
pub fn verify_subsolution(
    spec: &SuperSolutionSpec,
    rotated_env: &Environment,
    plan: &VerificationPlan,
) -> Result<VerificationReport, ClosedFormError> {
    let points = stratified_points(spec, plan);
    let xs: Vec<Point> = points.iter().map(|p| inverse_quarter_turn(p.1)).collect();
    check_coverage(rotated_env, &xs)?;
    let costs = rotated_env.c_values(&xs)?;
    let mut samples = Vec::with_capacity(points.len());
    for ((&(t, x_hat, on_seam), &x), c) in points.iter().zip(&xs).zip(costs) {
        let (case, bound) = spec.residual_plus_case_bound(t, x_hat)?;
        let residual = spec.residual_minus_with_cost(t, x, c)?;
        samples.push(ResidualSample { t, x, case, on_seam, residual, case_bound: -bound });
    }
    Ok(VerificationReport { kind: SampleKind::Sub, tolerance: rotated_env.c_error_bound(), samples })
}

/// CSV with columns `t,x1,x2,case,residual,case_bound`.
pub fn write_report_csv(report: &VerificationReport, mut out: impl Write, comment: Option<&str>) -> io::Result<()> {
    if let Some(c) = comment {
        writeln!(out, "# {c}")?;
    }
    writeln!(out, "t,x1,x2,case,residual,case_bound")?;
    for s in &report.samples {
        writeln!(out, "{},{},{},{},{},{}", s.t, s.x[0], s.x[1], s.case.number(), s.residual, s.case_bound)?;
    }
    Ok(())
}

/// Outcome of [`check_derivative_bounds`].
#[derive(Debug, Clone, Default)]
pub struct DerivativeReport {
    pub samples: usize,
    /// Each entry names the violated bound and the witness.
    pub violations: Vec<String>,
    /// Largest gap between analytic derivatives and centred differences.
    pub max_fd_error: f64,
    pub max_grad_inf: f64,
}

impl DerivativeReport {
    pub const FD_STEP: f64 = 1e-5;
    pub const FD_TOLERANCE: f64 = 1e-6;

    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.max_fd_error <= Self::FD_TOLERANCE
    }
}

/// Checks, at `samples` stratified points:
/// `∂_t u⁺ ≥ -1/2 + η`, `|∂_{x₁}u⁺| ≤ 4/λ`, `∂²_{x₁}u⁺ ≤ 4/λ`,
/// `∂²_{x₂}u⁺ ≤ 4/μ`, `‖∇u⁺‖∞ ≤ 2`; away from the centre in `x₁`,
/// `∂_t u⁺ ≥ 1/2 + η` and `∂²_{x₁}u⁺ ≤ 0`; away in `x₂`, `∂²_{x₂}u⁺ ≤ 0`
/// and `|∂_{x₂}u⁺| ≥ 1`. Analytic first derivatives are compared with
/// centred differences of `u⁺`, second derivatives with centred
/// differences of the analytic gradient.
pub fn check_derivative_bounds(spec: &SuperSolutionSpec, samples: usize, seed: u64) -> DerivativeReport {
    let per_case = samples.div_ceil(5).max(1);
    let plan = VerificationPlan { per_case, per_seam: per_case, span: 2.0, seed };
    let points = stratified_points(spec, &plan);
    let (lambda, mu, eta) = (spec.lambda(), spec.mu(), spec.eta());
    let c = spec.center();
    let edges = [SQRT_2 * spec.sigma1(), SQRT_2 * spec.sigma2()];
    let slack = 1e-12;
    let step = DerivativeReport::FD_STEP;
    let mut report = DerivativeReport { samples: points.len(), ..Default::default() };
    let fail = |name: &str, t: f64, x: Point, v: f64, report: &mut DerivativeReport| {
        if report.violations.len() < 50 {
            report.violations.push(format!("{name}: t={t} x=({}, {}) value={v}", x[0], x[1]));
        }
    };
    for (t, x, _) in points {
        let dt = spec.dt_unchecked(x);
        let g = spec.grad_unchecked(t, x);
        let [d11, d22] = spec.hessian_diag_unchecked(t, x);
        if dt < -0.5 + eta - slack {
            fail("dt >= -1/2 + eta", t, x, dt, &mut report);
        }
        if g[0].abs() > 4.0 / lambda + slack {
            fail("|d1| <= 4/lambda", t, x, g[0], &mut report);
        }
        if d11 > 4.0 / lambda + slack {
            fail("d11 <= 4/lambda", t, x, d11, &mut report);
        }
        if d22 > 4.0 / mu + slack {
            fail("d22 <= 4/mu", t, x, d22, &mut report);
        }
        let gi = g[0].abs().max(g[1].abs());
        report.max_grad_inf = report.max_grad_inf.max(gi);
        if gi > 2.0 + slack {
            fail("|grad|_inf <= 2", t, x, gi, &mut report);
        }
        if (x[0] - c[0]).abs() > edges[0] {
            if dt < 0.5 + eta - slack {
                fail("dt >= 1/2 + eta away in x1", t, x, dt, &mut report);
            }
            if d11 > slack {
                fail("d11 <= 0 away in x1", t, x, d11, &mut report);
            }
        }
        if (x[1] - c[1]).abs() > edges[1] {
            if d22 > slack {
                fail("d22 <= 0 away in x2", t, x, d22, &mut report);
            }
            if g[1].abs() < 1.0 - slack {
                fail("|d2| >= 1 away in x2", t, x, g[1], &mut report);
            }
        }

        let u = |tt: f64, y: Point| spec.value_unchecked(tt, y);
        let fd_t = (u(t + step, x) - u(t - step, x)) / (2.0 * step);
        let fd_1 = (u(t, [x[0] + step, x[1]]) - u(t, [x[0] - step, x[1]])) / (2.0 * step);
        let fd_2 = (u(t, [x[0], x[1] + step]) - u(t, [x[0], x[1] - step])) / (2.0 * step);
        let gr = |y: Point| spec.grad_unchecked(t, y);
        let fd_11 = (gr([x[0] + step, x[1]])[0] - gr([x[0] - step, x[1]])[0]) / (2.0 * step);
        let fd_22 = (gr([x[0], x[1] + step])[1] - gr([x[0], x[1] - step])[1]) / (2.0 * step);
        for (a, b) in [(fd_t, dt), (fd_1, g[0]), (fd_2, g[1]), (fd_11, d11), (fd_22, d22)] {
            report.max_fd_error = report.max_fd_error.max((a - b).abs());
        }
    }
    report
}
