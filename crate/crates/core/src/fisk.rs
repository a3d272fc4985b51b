//! Log-logistic (Fisk) residual model for flow end-point errors.

use crate::error::CoreError;
use crate::scalar::Scalar;

/// Density floor applied before taking logs, keeping energies finite.
pub fn density_floor<T: Scalar>() -> T {
    T::c(1e-12)
}

/// Log-logistic distribution with scale `alpha` (pixels) and shape `beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiskModel<T> {
    alpha: T,
    beta: T,
}

impl<T: Scalar> FiskModel<T> {
    pub fn new(alpha: T, beta: T) -> Result<Self, CoreError> {
        if alpha <= T::zero() || beta <= T::zero() || !alpha.finite() || !beta.finite() {
            return Err(CoreError::invalid(format!(
                "Fisk parameters must be positive, got alpha={} beta={}",
                alpha.to_f64c(),
                beta.to_f64c()
            )));
        }
        Ok(FiskModel { alpha, beta })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    /// Probability density at `x >= 0`.
    pub fn pdf(&self, x: T) -> T {
        if x < T::zero() {
            return T::zero();
        }
        if x == T::zero() {
            // beta > 1: density 0; beta == 1: 1/alpha; beta < 1: diverges.
            return if self.beta > T::one() {
                T::zero()
            } else if self.beta == T::one() {
                T::one() / self.alpha
            } else {
                T::c(f64::INFINITY)
            };
        }
        let r = x / self.alpha;
        let rb = r.powf(self.beta);
        let denom = T::one() + rb;
        (self.beta / self.alpha) * rb / r / (denom * denom)
    }

    /// Cumulative distribution at `x >= 0`.
    pub fn cdf(&self, x: T) -> T {
        if x <= T::zero() {
            return T::zero();
        }
        let rb = (x / self.alpha).powf(self.beta);
        rb / (T::one() + rb)
    }

    /// Negative log-density of a nonnegative residual.
    ///
    /// Residuals are floored at 1e-9 and the density at 1e-12 before the
    /// log, so a zero residual yields a large finite value instead of an
    /// infinity (for `beta > 1` the density vanishes at the origin).
    pub fn nll(&self, residual: T) -> Result<T, CoreError> {
        if residual < T::zero() || !residual.finite() {
            return Err(CoreError::invalid(format!(
                "residual must be nonnegative, got {}",
                residual.to_f64c()
            )));
        }
        let x = residual.max(T::c(1e-9));
        Ok(-self.pdf(x).max(density_floor()).ln())
    }

    /// Analytic mode: `alpha * ((beta-1)/(beta+1))^(1/beta)` for `beta > 1`,
    /// zero otherwise.
    pub fn mode(&self) -> T {
        if self.beta > T::one() {
            self.alpha
                * ((self.beta - T::one()) / (self.beta + T::one())).powf(T::one() / self.beta)
        } else {
            T::zero()
        }
    }
}
