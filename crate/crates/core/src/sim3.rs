//! Sim(3) similarity transforms with exp/log maps.
//!
//! Tangent vectors are 7-dimensional: `[rho (3), omega (3), sigma (1)]`
//! with `sigma = ln(scale)` last. The group action is `p' = s * R * p + t`.

use nalgebra::{Matrix3, SMatrix, SVector, Vector3};

use crate::scalar::Scalar;
use crate::se3::{skew, so3_exp, so3_log, Se3};

pub type Vector7<T> = SVector<T, 7>;
pub type Matrix7<T> = SMatrix<T, 7, 7>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sim3<T> {
    pub pose: Se3<T>,
    pub scale: T,
}

impl<T: Scalar> Sim3<T> {
    pub fn identity() -> Self {
        Sim3 {
            pose: Se3::identity(),
            scale: T::one(),
        }
    }

    pub fn new(pose: Se3<T>, scale: T) -> Self {
        assert!(scale > T::zero(), "Sim(3) scale must be positive");
        Sim3 { pose, scale }
    }

    pub fn from_se3(pose: Se3<T>) -> Self {
        Sim3 {
            pose,
            scale: T::one(),
        }
    }

    #[inline]
    pub fn transform(&self, p: &Vector3<T>) -> Vector3<T> {
        self.pose.rotation * p * self.scale + self.pose.translation
    }

    pub fn compose(&self, other: &Sim3<T>) -> Sim3<T> {
        Sim3 {
            pose: Se3 {
                rotation: self.pose.rotation * other.pose.rotation,
                translation: self.pose.rotation * other.pose.translation * self.scale
                    + self.pose.translation,
            },
            scale: self.scale * other.scale,
        }
    }

    pub fn inverse(&self) -> Sim3<T> {
        let s_inv = T::one() / self.scale;
        let rt = self.pose.rotation.transpose();
        Sim3 {
            pose: Se3 {
                rotation: rt,
                translation: -(rt * self.pose.translation) * s_inv,
            },
            scale: s_inv,
        }
    }

    /// The SE(3) part with the scale folded into the translation so that the
    /// rigid transform plus a depth rescale reproduces the similarity:
    /// `S * x = s * (R * x + t/s)`.
    pub fn se3_with_scaled_translation(&self) -> Se3<T> {
        Se3 {
            rotation: self.pose.rotation,
            translation: self.pose.translation / self.scale,
        }
    }

    pub fn exp(tangent: &Vector7<T>) -> Self {
        let rho = Vector3::new(tangent[0], tangent[1], tangent[2]);
        let omega = Vector3::new(tangent[3], tangent[4], tangent[5]);
        let sigma = tangent[6];
        let w = sim3_w_matrix(&omega, sigma);
        Sim3 {
            pose: Se3 {
                rotation: so3_exp(&omega),
                translation: w * rho,
            },
            scale: sigma.exp(),
        }
    }

    pub fn log(&self) -> Vector7<T> {
        let sigma = self.scale.ln();
        let omega = so3_log(&self.pose.rotation);
        let w = sim3_w_matrix(&omega, sigma);
        let rho = w
            .lu()
            .solve(&self.pose.translation)
            .expect("Sim(3) W matrix is invertible away from theta = 2*pi");
        Vector7::from_column_slice(&[rho.x, rho.y, rho.z, omega.x, omega.y, omega.z, sigma])
    }

    pub fn renormalized(&self) -> Sim3<T> {
        Sim3 {
            pose: self.pose.renormalized(),
            scale: self.scale,
        }
    }

    pub fn cast<U: Scalar>(&self) -> Sim3<U> {
        Sim3 {
            pose: self.pose.cast(),
            scale: U::c(self.scale.to_f64c()),
        }
    }
}

impl<T: Scalar> std::ops::Mul for Sim3<T> {
    type Output = Sim3<T>;
    fn mul(self, rhs: Sim3<T>) -> Sim3<T> {
        self.compose(&rhs)
    }
}

/// `W(omega, sigma)` such that `exp([rho, omega, sigma]).t = W * rho`.
///
/// `W = integral_0^1 e^{sigma tau} exp(tau [omega]x) dtau`, expanded as
/// `c1*I + c2*[omega]x + c3*[omega]x^2`. The closed forms cancel badly when
/// both `sigma` and `theta` are small, so a double power series takes over
/// below 0.5 (truncation there is far below f64 roundoff).
fn sim3_w_matrix<T: Scalar>(omega: &Vector3<T>, sigma: T) -> Matrix3<T> {
    let theta = omega.norm();
    let (c1, c2, c3) = if sigma.abs() < T::c(0.5) && theta < T::c(0.5) {
        w_coeffs_series(sigma, theta)
    } else {
        w_coeffs_closed(sigma, theta)
    };
    let wx = skew(omega);
    Matrix3::identity() * c1 + wx * c2 + wx * wx * c3
}

/// Series in `(sigma, theta^2)`:
///   c1 = sum_m sigma^m / (m+1)!
///   c2 = sum_{m,j} sigma^m (-u)^j / (m! (2j+1)! (m+2j+2)),  u = theta^2
///   c3 = sum_{m,j} sigma^m (-u)^j / (m! (2j+2)! (m+2j+3))
fn w_coeffs_series<T: Scalar>(sigma: T, theta: T) -> (T, T, T) {
    let u = theta * theta;
    let tol = T::c(1e-19);

    let mut c1 = T::zero();
    let mut pow_a = T::one(); // sigma^m / m!
    for m in 0..30 {
        let term = pow_a / T::c((m + 1) as f64);
        c1 += term;
        if term.abs() < tol {
            break;
        }
        pow_a *= sigma / T::c((m + 1) as f64);
    }

    let mut c2 = T::zero();
    let mut c3 = T::zero();
    let mut uj = T::one(); // (-u)^j
    let mut fact_2j1 = T::one(); // (2j+1)!
    let mut fact_2j2 = T::c(2.0); // (2j+2)!
    for j in 0..12 {
        let mut pow_a = T::one();
        let mut sum2 = T::zero();
        let mut sum3 = T::zero();
        for m in 0..30 {
            let t2 = pow_a / (fact_2j1 * T::c((m + 2 * j + 2) as f64));
            let t3 = pow_a / (fact_2j2 * T::c((m + 2 * j + 3) as f64));
            sum2 += t2;
            sum3 += t3;
            if t2.abs() < tol && t3.abs() < tol {
                break;
            }
            pow_a *= sigma / T::c((m + 1) as f64);
        }
        c2 += uj * sum2;
        c3 += uj * sum3;
        if (uj * sum2).abs() < tol && (uj * sum3).abs() < tol {
            break;
        }
        uj *= -u;
        let k = 2 * j;
        fact_2j1 *= T::c(((k + 2) * (k + 3)) as f64);
        fact_2j2 *= T::c(((k + 3) * (k + 4)) as f64);
    }
    (c1, c2, c3)
}

/// Closed forms, valid once `max(|sigma|, theta) >= 0.5` keeps the
/// denominators away from the cancellation regime:
///   c1 = (e^a - 1)/a
///   c2 = [e^a (a sinc(t) - cos t) + 1] / (a^2 + t^2)
///   c3 = [e^a a^2 h(t) + (e^a - 1) - a e^a sinc(t)] / (a (a^2 + t^2))
/// with h(t) = (1 - cos t)/t^2 evaluated as a half-angle sinc square.
fn w_coeffs_closed<T: Scalar>(sigma: T, theta: T) -> (T, T, T) {
    let a = sigma;
    let t = theta;
    let ea = a.exp();
    let em1 = expm1_stable(a);
    let sinc_t = sinc(t);
    let cos_t = t.cos();
    let half = t * T::c(0.5);
    let h = T::c(0.5) * sinc(half) * sinc(half);
    let denom = a * a + t * t;

    // In this branch max(|a|, t) >= 0.5, so when |a| is tiny the denominator
    // is still bounded below by t^2 >= 0.25 and the a -> 0 limits apply.
    let c1 = if a.abs() < T::c(1e-6) {
        T::one() + a * T::c(0.5)
    } else {
        em1 / a
    };
    let c2 = (ea * (a * sinc_t - cos_t) + T::one()) / denom;
    let c3 = if a.abs() < T::c(1e-6) {
        ((T::one() - sinc_t) + a * (h + T::c(0.5) - sinc_t)) / denom
    } else {
        (ea * a * a * h + em1 - a * ea * sinc_t) / (a * denom)
    };
    (c1, c2, c3)
}

fn sinc<T: Scalar>(x: T) -> T {
    if x.abs() < T::c(1e-5) {
        let x2 = x * x;
        T::one() - x2 / T::c(6.0) + x2 * x2 / T::c(120.0)
    } else {
        x.sin() / x
    }
}

fn expm1_stable<T: Scalar>(a: T) -> T {
    if a.abs() < T::c(1e-5) {
        a * (T::one() + a * T::c(0.5) + a * a / T::c(6.0))
    } else {
        a.exp() - T::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    type S = Sim3<f64>;

    fn v7(a: [f64; 7]) -> Vector7<f64> {
        Vector7::from_column_slice(&a)
    }

    #[test]
    fn log_of_identity_is_zero() {
        assert_eq!(S::identity().log(), Vector7::zeros());
    }

    #[test]
    fn exp_log_roundtrip_generic() {
        let cases = [
            [0.3, -0.2, 0.5, 0.2, -0.1, 0.3, 0.4],
            [1.0, 2.0, -1.0, 0.0, 0.0, 0.0, 0.0],
            [0.5, 0.5, 0.5, 1e-9, -1e-9, 1e-9, 1e-12],
            [0.5, 0.5, 0.5, 0.0, 0.0, 0.0, 0.7],
            [0.5, -0.5, 0.25, 0.8, 0.1, -0.3, 1e-14],
            [0.1, 0.2, 0.3, 0.49, 0.0, 0.0, 0.4999],
            [0.1, 0.2, 0.3, 0.51, 0.0, 0.0, 0.5001],
            [-0.2, 0.7, 0.1, 0.001, 0.002, -0.001, 0.001],
        ];
        for c in cases {
            let v = v7(c);
            let back = S::exp(&v).log();
            assert_relative_eq!(back, v, epsilon = 1e-9, max_relative = 1e-9);
        }
    }

    #[test]
    fn compose_inverse_is_identity() {
        let s = S::exp(&v7([0.3, -0.2, 0.5, 0.2, -0.1, 0.3, 0.4]));
        let id = s.compose(&s.inverse());
        assert_relative_eq!(id.pose.rotation, Matrix3::identity(), epsilon = 1e-12);
        assert!(id.pose.translation.norm() < 1e-12);
        assert_relative_eq!(id.scale, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn action_composes() {
        let a = S::exp(&v7([0.3, -0.2, 0.5, 0.2, -0.1, 0.3, 0.4]));
        let b = S::exp(&v7([-0.1, 0.4, 0.2, -0.3, 0.2, 0.1, -0.2]));
        let p = Vector3::new(0.7, -1.2, 2.5);
        let lhs = a.compose(&b).transform(&p);
        let rhs = a.transform(&b.transform(&p));
        assert_relative_eq!(lhs, rhs, epsilon = 1e-12);
    }

    #[test]
    fn reduces_to_se3_at_unit_scale() {
        let v6 = nalgebra::Vector6::new(0.3, -0.2, 0.5, 0.2, -0.1, 0.3);
        let se3 = Se3::exp(&v6);
        let sim3 = S::exp(&v7([0.3, -0.2, 0.5, 0.2, -0.1, 0.3, 0.0]));
        assert_relative_eq!(sim3.pose.rotation, se3.rotation, epsilon = 1e-12);
        assert_relative_eq!(sim3.pose.translation, se3.translation, epsilon = 1e-12);
        assert_eq!(sim3.scale, 1.0);
    }
}
