//! Robust kernels for registration residuals.

use crate::error::CoreError;
use crate::scalar::Scalar;

/// Cauchy kernel `psi(r) = (c^2 / 2) * ln(1 + (r/c)^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CauchyKernel<T> {
    scale: T,
}

impl<T: Scalar> CauchyKernel<T> {
    pub fn new(scale: T) -> Result<Self, CoreError> {
        if scale <= T::zero() || !scale.finite() {
            return Err(CoreError::invalid("Cauchy scale must be positive"));
        }
        Ok(CauchyKernel { scale })
    }

    pub fn scale(&self) -> T {
        self.scale
    }

    #[inline]
    pub fn cost(&self, r: T) -> T {
        let z = r / self.scale;
        self.scale * self.scale * T::c(0.5) * (T::one() + z * z).ln()
    }

    /// IRLS weight `psi'(r) / r = 1 / (1 + (r/c)^2)`.
    #[inline]
    pub fn weight(&self, r: T) -> T {
        let z = r / self.scale;
        T::one() / (T::one() + z * z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn quadratic_near_zero_bounded_growth_far() {
        let k = CauchyKernel::new(0.1f64).unwrap();
        // Near zero: psi(r) ~ r^2 / 2.
        assert_relative_eq!(k.cost(1e-4), 0.5e-8, max_relative = 1e-3);
        // Large residuals grow only logarithmically.
        assert!(k.cost(100.0) < 0.1);
        assert_relative_eq!(k.weight(0.0), 1.0);
        assert!(k.weight(1.0) < 0.01);
    }

    #[test]
    fn weight_is_cost_derivative_over_r() {
        let k = CauchyKernel::new(0.25f64).unwrap();
        for r in [0.01, 0.1, 0.5, 2.0] {
            let h = 1e-7;
            let d = (k.cost(r + h) - k.cost(r - h)) / (2.0 * h);
            assert_relative_eq!(k.weight(r), d / r, max_relative = 1e-5);
        }
    }
}
