//! The explicit supersolution
//! `u⁺(t, x) = t(-1/2 + η) + 2t h₁(x₁)/(λT_k) + h₂(x₂)` attached to a
//! horizontal rectangle of scale `k` centred at `X`, and the rotated
//! subsolution `u⁻(t, x) = -u⁺(t, x̂)`.
//!
//! `h(x) = (x - X)·erf((x - X)/(σ√2))` with `σ₁ = λT_k/√2`, `σ₂ = μ/√2`.
//! `erf` comes from `libm` (a port of the FreeBSD `s_erf.c` rational
//! approximations, absolute error below `1e-15`).

mod verify;

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use thiserror::Error;

use crate::environment::{CostField, EnvError, EnvParams};
use crate::geometry::{quarter_turn, Point};
use crate::hamiltonian::hamiltonian_with_cost;

pub use verify::{
    check_derivative_bounds, verification_window, verify_subsolution, verify_supersolution, write_report_csv,
    DerivativeReport, ResidualSample, SampleKind, VerificationPlan, VerificationReport,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClosedFormError {
    #[error("invalid supersolution parameters: {0}")]
    InvalidSpec(String),
    #[error("time {t} outside [0, {t_max}]")]
    TimeOutOfRange { t: f64, t_max: f64 },
    #[error(transparent)]
    Env(#[from] EnvError),
}

/// Standard normal-based profile `h(x) = (x - X)·erf((x - X)/(σ√2))`.
#[inline]
pub fn h(x: f64, center: f64, sigma: f64) -> f64 {
    let d = x - center;
    d * libm::erf(d / (sigma * SQRT_2))
}

/// Density of `N(X, σ²)` at `x`.
#[inline]
fn normal_density(x: f64, center: f64, sigma: f64) -> f64 {
    let z = (x - center) / sigma;
    (-0.5 * z * z).exp() / (sigma * (2.0 * PI).sqrt())
}

/// `h'(x) = erf((x - X)/(σ√2)) + 2(x - X) f(x)`.
#[inline]
pub fn h_prime(x: f64, center: f64, sigma: f64) -> f64 {
    let d = x - center;
    libm::erf(d / (sigma * SQRT_2)) + 2.0 * d * normal_density(x, center, sigma)
}

/// `h''(x) = 2 f(x) (2 - (x - X)²/σ²)`.
#[inline]
pub fn h_double_prime(x: f64, center: f64, sigma: f64) -> f64 {
    let z = (x - center) / sigma;
    2.0 * normal_density(x, center, sigma) * (2.0 - z * z)
}

/// One of the four regions of the case analysis. Points on a seam
/// `|x_i - X_i| = √2σ_i` go to the inner side, whose bound is weaker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Case {
    /// `|x₂ - X₂| > √2σ₂`, `|x₁ - X₁| > √2σ₁`.
    FarBoth,
    /// `|x₂ - X₂| > √2σ₂`, `|x₁ - X₁| ≤ √2σ₁`.
    FarTransverse,
    /// `|x₂ - X₂| ≤ √2σ₂`, `|x₁ - X₁| > √2σ₁`.
    FarAlong,
    /// `|x₂ - X₂| ≤ √2σ₂`, `|x₁ - X₁| ≤ √2σ₁`: the rectangle's neighbourhood.
    Near,
}

impl Case {
    pub const ALL: [Case; 4] = [Case::FarBoth, Case::FarTransverse, Case::FarAlong, Case::Near];

    /// Case number 1..=4.
    pub fn number(self) -> u8 {
        match self {
            Case::FarBoth => 1,
            Case::FarTransverse => 2,
            Case::FarAlong => 3,
            Case::Near => 4,
        }
    }
}

/// Centre, scale and constants of a supersolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperSolutionSpec {
    center: Point,
    k: u32,
    lambda: f64,
    mu: f64,
    eta: f64,
    q: f64,
    sigma1: f64,
    sigma2: f64,
}

impl SuperSolutionSpec {
    /// Rejects parameters violating `min(λ, μ) ≥ 16/η` or `η ∉ (0, 1/2)`.
    pub fn new(center: Point, k: u32, lambda: f64, mu: f64, eta: f64) -> Result<Self, ClosedFormError> {
        let params = EnvParams { lambda, mu, eta, k_max: k.max(1), ..EnvParams::default() };
        Self::from_params(&params, center, k)
    }

    pub fn from_params(params: &EnvParams, center: Point, k: u32) -> Result<Self, ClosedFormError> {
        if !(1..=60).contains(&k) {
            return Err(ClosedFormError::InvalidSpec(format!("scale k = {k} outside 1..=60")));
        }
        if !center.iter().all(|c| c.is_finite()) {
            return Err(ClosedFormError::InvalidSpec("center must be finite".into()));
        }
        let checked = EnvParams { k_max: params.k_max.max(k), ..*params };
        checked.validate().map_err(|e| ClosedFormError::InvalidSpec(e.to_string()))?;
        let t_k = EnvParams::t_k(k);
        Ok(Self {
            center,
            k,
            lambda: params.lambda,
            mu: params.mu,
            eta: params.eta,
            q: params.q,
            sigma1: params.lambda * t_k * FRAC_1_SQRT_2,
            sigma2: params.mu * FRAC_1_SQRT_2,
        })
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn sigma1(&self) -> f64 {
        self.sigma1
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    /// Time horizon `T_k`.
    pub fn t_max(&self) -> f64 {
        EnvParams::t_k(self.k)
    }

    /// `λT_k`, the normalisation of the `x₁` profile.
    fn lt(&self) -> f64 {
        self.lambda * self.t_max()
    }

    fn check_time(&self, t: f64) -> Result<(), ClosedFormError> {
        if (0.0..=self.t_max()).contains(&t) {
            Ok(())
        } else {
            Err(ClosedFormError::TimeOutOfRange { t, t_max: self.t_max() })
        }
    }

    pub fn h1(&self, x1: f64) -> f64 {
        h(x1, self.center[0], self.sigma1)
    }

    pub fn h2(&self, x2: f64) -> f64 {
        h(x2, self.center[1], self.sigma2)
    }

    pub(crate) fn value_unchecked(&self, t: f64, x: Point) -> f64 {
        t * (-0.5 + self.eta) + 2.0 * t * self.h1(x[0]) / self.lt() + self.h2(x[1])
    }

    pub(crate) fn grad_unchecked(&self, t: f64, x: Point) -> [f64; 2] {
        [2.0 * t * h_prime(x[0], self.center[0], self.sigma1) / self.lt(), h_prime(x[1], self.center[1], self.sigma2)]
    }

    /// `[∂²_{x₁} u⁺, ∂²_{x₂} u⁺]`.
    pub(crate) fn hessian_diag_unchecked(&self, t: f64, x: Point) -> [f64; 2] {
        [
            2.0 * t * h_double_prime(x[0], self.center[0], self.sigma1) / self.lt(),
            h_double_prime(x[1], self.center[1], self.sigma2),
        ]
    }

    pub(crate) fn dt_unchecked(&self, x: Point) -> f64 {
        -0.5 + self.eta + 2.0 * self.h1(x[0]) / self.lt()
    }

    pub fn u_plus(&self, t: f64, x: Point) -> Result<f64, ClosedFormError> {
        self.check_time(t)?;
        Ok(self.value_unchecked(t, x))
    }

    pub fn grad_u_plus(&self, t: f64, x: Point) -> Result<[f64; 2], ClosedFormError> {
        self.check_time(t)?;
        Ok(self.grad_unchecked(t, x))
    }

    pub fn laplacian_u_plus(&self, t: f64, x: Point) -> Result<f64, ClosedFormError> {
        self.check_time(t)?;
        let [a, b] = self.hessian_diag_unchecked(t, x);
        Ok(a + b)
    }

    pub fn dt_u_plus(&self, t: f64, x: Point) -> Result<f64, ClosedFormError> {
        self.check_time(t)?;
        Ok(self.dt_unchecked(x))
    }

    /// Residual given `c(x)` directly.
    pub fn residual_plus_with_cost(&self, t: f64, x: Point, c: f64) -> Result<f64, ClosedFormError> {
        self.check_time(t)?;
        let [l1, l2] = self.hessian_diag_unchecked(t, x);
        Ok(self.dt_unchecked(x) + hamiltonian_with_cost(self.grad_unchecked(t, x), c, self.q) - l1 - l2)
    }

    /// `∂_t u⁺ + H(∇u⁺, x) - Δu⁺`.
    pub fn residual_plus(&self, t: f64, x: Point, env: &dyn CostField) -> Result<f64, ClosedFormError> {
        self.check_time(t)?;
        let c = env.cost(x)?;
        self.residual_plus_with_cost(t, x, c)
    }

    pub fn classify(&self, x: Point) -> Case {
        let far1 = (x[0] - self.center[0]).abs() > SQRT_2 * self.sigma1;
        let far2 = (x[1] - self.center[1]).abs() > SQRT_2 * self.sigma2;
        match (far2, far1) {
            (true, true) => Case::FarBoth,
            (true, false) => Case::FarTransverse,
            (false, true) => Case::FarAlong,
            (false, false) => Case::Near,
        }
    }

    /// Lower bound on the residual from the case analysis alone.
    pub fn case_bound(&self, case: Case) -> f64 {
        let (a, b) = (4.0 / self.lambda, 4.0 / self.mu);
        match case {
            Case::FarBoth => self.eta - a,
            Case::FarTransverse => self.eta - 2.0 * a,
            Case::FarAlong => self.eta - a - b,
            Case::Near => self.eta - 2.0 * a - b,
        }
    }

    /// The case of `x` and its analytic lower bound.
    pub fn residual_plus_case_bound(&self, t: f64, x: Point) -> Result<(Case, f64), ClosedFormError> {
        self.check_time(t)?;
        let case = self.classify(x);
        Ok((case, self.case_bound(case)))
    }

    /// `u⁻(t, x) = -u⁺(t, x̂)`.
    pub fn u_minus(&self, t: f64, x: Point) -> Result<f64, ClosedFormError> {
        Ok(-self.u_plus(t, quarter_turn(x))?)
    }

    pub fn grad_u_minus(&self, t: f64, x: Point) -> Result<[f64; 2], ClosedFormError> {
        let [g1, g2] = self.grad_u_plus(t, quarter_turn(x))?;
        // x̂ = (x₂, -x₁): ∂₁u⁻ = ∂₂u⁺(x̂), ∂₂u⁻ = -∂₁u⁺(x̂)
        Ok([g2, -g1])
    }

    /// Residual of `u⁻` given `c(x)` in the rotated environment.
    pub fn residual_minus_with_cost(&self, t: f64, x: Point, c: f64) -> Result<f64, ClosedFormError> {
        let y = quarter_turn(x);
        self.check_time(t)?;
        let [l1, l2] = self.hessian_diag_unchecked(t, y);
        let grad = self.grad_u_minus(t, x)?;
        Ok(-self.dt_unchecked(y) + hamiltonian_with_cost(grad, c, self.q) + l1 + l2)
    }

    /// `∂_t u⁻ + H(∇u⁻, x) - Δu⁻` evaluated in `rotated_env`.
    pub fn residual_minus(&self, t: f64, x: Point, rotated_env: &dyn CostField) -> Result<f64, ClosedFormError> {
        self.check_time(t)?;
        let c = rotated_env.cost(x)?;
        self.residual_minus_with_cost(t, x, c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::ConstantCost;
    use crate::rng::SplitMix;

    fn spec(k: u32) -> SuperSolutionSpec {
        SuperSolutionSpec::new([0.0, 0.0], k, 40.0, 40.0, 0.4).unwrap()
    }

    /// Maclaurin series for small arguments, Laplace continued fraction for
    /// the complement otherwise.
    fn erf_oracle(x: f64) -> f64 {
        let z = x.abs();
        let v = if z < 2.5 {
            let mut term = z;
            let mut sum = z;
            let mut n = 0.0;
            while term.abs() > 1e-18 * sum.abs() {
                n += 1.0;
                term *= -z * z / n;
                sum += term / (2.0 * n + 1.0);
            }
            2.0 / PI.sqrt() * sum
        } else {
            let mut frac = 0.0;
            for n in (1..200).rev() {
                frac = (n as f64 / 2.0) / (z + frac);
            }
            1.0 - (-z * z).exp() / PI.sqrt() / (z + frac)
        };
        v.copysign(x)
    }

    #[test]
    fn erf_matches_independent_oracle() {
        let mut worst: f64 = 0.0;
        for i in -6000..=6000 {
            let x = i as f64 * 1e-3;
            worst = worst.max((libm::erf(x) - erf_oracle(x)).abs());
        }
        assert!(worst <= 1e-12, "worst erf error {worst}");
    }

    #[test]
    fn profile_basics() {
        let s = spec(3);
        assert!((s.sigma1() - 320.0 / SQRT_2).abs() < 1e-12);
        assert!((s.sigma2() - 40.0 / SQRT_2).abs() < 1e-12);
        assert_eq!(h(2.0, 2.0, 1.0), 0.0);
        assert_eq!(h_prime(2.0, 2.0, 1.0), 0.0);
        let mut rng = SplitMix::new(3);
        for _ in 0..100_000 {
            let x = rng.uniform(-2000.0, 2000.0);
            assert!(s.h1(x) >= 0.0 && s.h2(x) >= 0.0);
            assert!(h_prime(x, 0.0, s.sigma2()).abs() <= 2.0);
            if x.abs() > s.lt() {
                assert!(s.h1(x) >= s.lt() / 2.0);
            }
            if x.abs() > SQRT_2 * s.sigma2() {
                assert!(h_prime(x, 0.0, s.sigma2()).abs() >= 1.0);
            }
        }
    }

    #[test]
    fn second_derivative_matches_finite_difference() {
        let mut rng = SplitMix::new(11);
        let step = 1e-5;
        for _ in 0..10_000 {
            let sigma = rng.uniform(1.0, 500.0);
            let c = rng.uniform(-50.0, 50.0);
            let x = c + rng.uniform(-4.0, 4.0) * sigma;
            let fd = (h_prime(x + step, c, sigma) - h_prime(x - step, c, sigma)) / (2.0 * step);
            assert!((fd - h_double_prime(x, c, sigma)).abs() <= 1e-6);
        }
    }

    #[test]
    fn h_prime_monotonicity_structure() {
        let (c, sigma) = (1.5, 7.0);
        let edge = SQRT_2 * sigma;
        let xs: Vec<f64> = (-4000..=4000).map(|i| c + i as f64 * 0.01 * sigma / 10.0).collect();
        for w in xs.windows(2) {
            let (a, b) = (h_prime(w[0], c, sigma), h_prime(w[1], c, sigma));
            let mid = 0.5 * (w[0] + w[1]) - c;
            if mid.abs() < edge - 0.01 {
                assert!(b >= a, "h' should increase at {mid}");
            } else if mid.abs() > edge + 0.01 {
                assert!(b <= a, "h' should decrease at {mid}");
            }
        }
        let peak = h_prime(c + edge, c, sigma);
        assert!(peak <= 2.0 && peak > 1.0);
    }

    #[test]
    fn value_at_center_and_horizon() {
        let s = spec(3);
        assert_eq!(s.u_plus(0.0, [0.0, 0.0]).unwrap(), 0.0);
        assert!((s.u_plus(8.0, [0.0, 0.0]).unwrap() - 8.0 * (-0.1)).abs() < 1e-15);
        assert_eq!(s.u_minus(0.0, [0.0, 0.0]).unwrap(), 0.0);
        assert!(matches!(s.u_plus(8.5, [0.0, 0.0]), Err(ClosedFormError::TimeOutOfRange { .. })));
        assert!(s.u_plus(-0.1, [0.0, 0.0]).is_err());
    }

    #[test]
    fn case_bounds() {
        let s = spec(2);
        let b: Vec<f64> = Case::ALL.iter().map(|&c| s.case_bound(c)).collect();
        for (got, want) in b.iter().zip([0.3, 0.2, 0.2, 0.1]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert_eq!(s.classify([0.0, 0.0]), Case::Near);
        assert_eq!(s.classify([200.0, 0.0]), Case::FarAlong);
        assert_eq!(s.classify([0.0, 60.0]), Case::FarTransverse);
        assert_eq!(s.classify([200.0, -60.0]), Case::FarBoth);
        // seams belong to the inner side
        assert_eq!(s.classify([160.0, 40.0]), Case::Near);
    }

    #[test]
    fn rejects_small_lambda() {
        assert!(SuperSolutionSpec::new([0.0, 0.0], 3, 20.0, 20.0, 0.4).is_err());
        assert!(SuperSolutionSpec::new([0.0, 0.0], 3, 33.0, 33.0, 0.49).is_ok());
    }

    #[test]
    fn subsolution_residual_is_mirrored() {
        let s = spec(2);
        let mut rng = SplitMix::new(17);
        for _ in 0..10_000 {
            let t = rng.uniform(0.0, 4.0);
            let x = [rng.uniform(-300.0, 300.0), rng.uniform(-300.0, 300.0)];
            let c = rng.uniform(-0.5, 0.5);
            let plus = s.residual_plus_with_cost(t, quarter_turn(x), c).unwrap();
            let minus = s.residual_minus_with_cost(t, x, -c).unwrap();
            assert!((plus + minus).abs() < 1e-12);
        }
        let env = ConstantCost(-0.5);
        assert!(s.residual_plus(1.0, [0.0, 0.0], &env).unwrap() >= 0.1);
    }
}
