use super::EnvError;

/// Constants of the random rectangle environment and of the Hamiltonian built on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvParams {
    /// Rectangle length factor: a scale-`k` rectangle has length `lambda * 2^k + 1`.
    pub lambda: f64,
    /// Rectangle width parameter: every rectangle has width `mu + 1`.
    pub mu: f64,
    pub eta: f64,
    /// Growth exponent of the Hamiltonian outside `‖p‖∞ ≤ 2`.
    pub q: f64,
    /// Search radius factor of the rectangle events.
    pub delta: f64,
    /// Largest sampled scale.
    pub k_max: u32,
    pub seed: u64,
    /// Spacing of the grid used to evaluate the Lipschitz regularization.
    pub env_grid_h: f64,
}

impl Default for EnvParams {
    fn default() -> Self {
        Self { lambda: 40.0, mu: 40.0, eta: 0.4, q: 2.0, delta: 0.5, k_max: 6, seed: 1, env_grid_h: 0.25 }
    }
}

impl EnvParams {
    /// Dyadic scale `T_k = 2^k`.
    #[inline]
    pub fn t_k(k: u32) -> f64 {
        (k as f64).exp2()
    }

    /// Length `lambda * T_k + 1` of a scale-`k` rectangle.
    #[inline]
    pub fn length(&self, k: u32) -> f64 {
        self.lambda * Self::t_k(k) + 1.0
    }

    /// Width `mu + 1`, shared by every scale.
    #[inline]
    pub fn width(&self) -> f64 {
        self.mu + 1.0
    }

    /// Checks the constraints needed to build and evaluate an environment.
    pub fn validate_geometry(&self) -> Result<(), EnvError> {
        let positive = |name: &'static str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(EnvError::InvalidParams(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("lambda", self.lambda)?;
        positive("mu", self.mu)?;
        positive("delta", self.delta)?;
        positive("env_grid_h", self.env_grid_h)?;
        if self.k_max < 1 || self.k_max > 60 {
            return Err(EnvError::InvalidParams(format!("k_max must lie in 1..=60, got {}", self.k_max)));
        }
        if self.env_grid_h > 0.25 {
            return Err(EnvError::InvalidParams(format!("env_grid_h must be at most 1/4, got {}", self.env_grid_h)));
        }
        if !(self.q > 1.0) || !self.q.is_finite() {
            return Err(EnvError::InvalidParams(format!("q must exceed 1, got {}", self.q)));
        }
        if !(self.eta > 0.0 && self.eta < 0.5) {
            return Err(EnvError::InvalidParams(format!("eta must lie in (0, 1/2), got {}", self.eta)));
        }
        Ok(())
    }

    /// Full validation, including the size condition `min(lambda, mu) >= 16 / eta`
    /// under which the supersolution argument applies.
    pub fn validate(&self) -> Result<(), EnvError> {
        self.validate_geometry()?;
        let bound = 16.0 / self.eta;
        if self.lambda.min(self.mu) < bound {
            return Err(EnvError::InvalidParams(format!(
                "min(lambda, mu) = {} is below 16/eta = {bound}",
                self.lambda.min(self.mu)
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_condition_is_enforced() {
        let mut p = EnvParams::default();
        assert!(p.validate().is_ok());
        p.lambda = 20.0;
        assert!(p.validate().is_err());
        assert!(p.validate_geometry().is_ok());
        p.lambda = 40.0;
        p.eta = 0.49;
        p.mu = (16.0f64 / 0.49).ceil();
        assert!(p.validate().is_ok());
    }

    #[test]
    fn grid_and_scale_limits() {
        let p = EnvParams { env_grid_h: 0.3, ..EnvParams::default() };
        assert!(p.validate_geometry().is_err());
        let p = EnvParams { k_max: 0, ..EnvParams::default() };
        assert!(p.validate_geometry().is_err());
        assert_eq!(EnvParams::default().length(3), 321.0);
        assert_eq!(EnvParams::default().width(), 41.0);
    }
}
