//! SE(3) rigid transforms with exp/log maps.
//!
//! Tangent vectors are laid out as `[rho_x, rho_y, rho_z, omega_x, omega_y,
//! omega_z]`: translational part first, rotational part last.

use nalgebra::{Matrix3, Matrix6, Vector3, Vector6};

use crate::error::CoreError;
use crate::scalar::Scalar;

/// Rigid transform: `p' = R * p + t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Se3<T> {
    pub rotation: Matrix3<T>,
    pub translation: Vector3<T>,
}

/// Skew-symmetric matrix such that `skew(a) * b == a.cross(b)`.
#[inline]
pub fn skew<T: Scalar>(v: &Vector3<T>) -> Matrix3<T> {
    Matrix3::new(
        T::zero(),
        -v.z,
        v.y,
        v.z,
        T::zero(),
        -v.x,
        -v.y,
        v.x,
        T::zero(),
    )
}

/// Rotation-matrix exponential (Rodrigues with small-angle series).
pub fn so3_exp<T: Scalar>(omega: &Vector3<T>) -> Matrix3<T> {
    let theta2 = omega.norm_squared();
    let w = skew(omega);
    let w2 = w * w;
    if theta2 < T::c(1e-14) {
        // sin(t)/t = 1 - t^2/6, (1-cos t)/t^2 = 1/2 - t^2/24
        let a = T::one() - theta2 / T::c(6.0);
        let b = T::c(0.5) - theta2 / T::c(24.0);
        Matrix3::identity() + w * a + w2 * b
    } else {
        let theta = theta2.sqrt();
        let a = theta.sin() / theta;
        let b = (T::one() - theta.cos()) / theta2;
        Matrix3::identity() + w * a + w2 * b
    }
}

/// Rotation-matrix logarithm, valid on all of SO(3).
///
/// Near the angle-pi branch the usual `(R - R^T)` extraction loses the axis;
/// there the axis is recovered from the dominant diagonal of
/// `(R + I) / 2 = axis * axis^T` at `theta == pi`, with signs fixed from the
/// off-diagonal entries. At exactly pi the sign of the axis is arbitrary and
/// the lexicographically-positive one is returned.
pub fn so3_log<T: Scalar>(r: &Matrix3<T>) -> Vector3<T> {
    let trace = r[(0, 0)] + r[(1, 1)] + r[(2, 2)];
    let cos_theta = ((trace - T::one()) * T::c(0.5)).clamp(-T::one(), T::one());
    let theta = cos_theta.acos();
    let vee = Vector3::new(
        r[(2, 1)] - r[(1, 2)],
        r[(0, 2)] - r[(2, 0)],
        r[(1, 0)] - r[(0, 1)],
    );

    if theta < T::c(1e-6) {
        // omega = vee/2 * (1 + theta^2/6)
        return vee * T::c(0.5) * (T::one() + theta * theta / T::c(6.0));
    }
    if theta > T::PI() - T::c(1e-4) {
        // B = (R + I)/2 approaches axis*axis^T as theta -> pi.
        let b = (r + Matrix3::identity()) * T::c(0.5);
        let (i, j, k) = if b[(0, 0)] >= b[(1, 1)] && b[(0, 0)] >= b[(2, 2)] {
            (0, 1, 2)
        } else if b[(1, 1)] >= b[(2, 2)] {
            (1, 2, 0)
        } else {
            (2, 0, 1)
        };
        let mut axis = Vector3::zeros();
        axis[i] = b[(i, i)].max(T::zero()).sqrt();
        axis[j] = b[(i, j)] / axis[i];
        axis[k] = b[(i, k)] / axis[i];
        let axis = axis.normalize();
        // Fix the overall sign from the skew part where it is still nonzero.
        let sign = axis.dot(&vee);
        let axis = if sign < T::zero() { -axis } else { axis };
        return axis * theta;
    }
    vee * (theta / (T::c(2.0) * theta.sin()))
}

/// Left SE(3) Jacobian `V` such that `exp([rho, omega]).t = V(omega) * rho`.
fn so3_left_jacobian<T: Scalar>(omega: &Vector3<T>) -> Matrix3<T> {
    let theta2 = omega.norm_squared();
    let w = skew(omega);
    let w2 = w * w;
    if theta2 < T::c(1e-14) {
        let b = T::c(0.5) - theta2 / T::c(24.0);
        let c = T::c(1.0 / 6.0) - theta2 / T::c(120.0);
        Matrix3::identity() + w * b + w2 * c
    } else {
        let theta = theta2.sqrt();
        let b = (T::one() - theta.cos()) / theta2;
        let c = (theta - theta.sin()) / (theta2 * theta);
        Matrix3::identity() + w * b + w2 * c
    }
}

impl<T: Scalar> Se3<T> {
    pub fn identity() -> Self {
        Se3 {
            rotation: Matrix3::identity(),
            translation: Vector3::zeros(),
        }
    }

    pub fn new(rotation: Matrix3<T>, translation: Vector3<T>) -> Self {
        Se3 {
            rotation,
            translation,
        }
    }

    pub fn from_translation(t: Vector3<T>) -> Self {
        Se3 {
            rotation: Matrix3::identity(),
            translation: t,
        }
    }

    /// Checks `R^T R = I` and `det(R) = +1` within `tol`.
    pub fn check_rotation(&self, tol: T) -> Result<(), CoreError> {
        let rtr = self.rotation.transpose() * self.rotation;
        let err = (rtr - Matrix3::identity()).norm();
        let det_err = (self.rotation.determinant() - T::one()).abs();
        if err > tol || det_err > tol {
            return Err(CoreError::invalid(format!(
                "rotation is not orthonormal (|R^T R - I| = {:.3e}, |det - 1| = {:.3e})",
                err.to_f64c(),
                det_err.to_f64c()
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn transform(&self, p: &Vector3<T>) -> Vector3<T> {
        self.rotation * p + self.translation
    }

    #[inline]
    pub fn compose(&self, other: &Se3<T>) -> Se3<T> {
        Se3 {
            rotation: self.rotation * other.rotation,
            translation: self.rotation * other.translation + self.translation,
        }
    }

    pub fn inverse(&self) -> Se3<T> {
        let rt = self.rotation.transpose();
        Se3 {
            rotation: rt,
            translation: -(rt * self.translation),
        }
    }

    pub fn exp(tangent: &Vector6<T>) -> Self {
        let rho = Vector3::new(tangent[0], tangent[1], tangent[2]);
        let omega = Vector3::new(tangent[3], tangent[4], tangent[5]);
        Se3 {
            rotation: so3_exp(&omega),
            translation: so3_left_jacobian(&omega) * rho,
        }
    }

    pub fn log(&self) -> Vector6<T> {
        let omega = so3_log(&self.rotation);
        let v = so3_left_jacobian(&omega);
        let rho = v
            .lu()
            .solve(&self.translation)
            .expect("SE(3) left Jacobian is invertible away from theta = 2*pi");
        Vector6::new(rho.x, rho.y, rho.z, omega.x, omega.y, omega.z)
    }

    /// Rotation angle in radians.
    pub fn angle(&self) -> T {
        so3_log(&self.rotation).norm()
    }

    /// Adjoint matrix mapping tangent vectors across a change of frame:
    /// `log(T * exp(v) * T^-1) = Ad(T) * v`.
    pub fn adjoint(&self) -> Matrix6<T> {
        let mut ad = Matrix6::zeros();
        let tr = skew(&self.translation) * self.rotation;
        for i in 0..3 {
            for j in 0..3 {
                ad[(i, j)] = self.rotation[(i, j)];
                ad[(i + 3, j + 3)] = self.rotation[(i, j)];
                ad[(i, j + 3)] = tr[(i, j)];
            }
        }
        ad
    }

    /// Re-orthonormalize the rotation (polar projection via QR of columns).
    /// Keeps long compose chains from drifting off the manifold.
    pub fn renormalized(&self) -> Se3<T> {
        let svd = self.rotation.svd(true, true);
        let u = svd.u.unwrap();
        let vt = svd.v_t.unwrap();
        let mut r = u * vt;
        if r.determinant() < T::zero() {
            let mut u2 = u;
            u2.column_mut(2).neg_mut();
            r = u2 * vt;
        }
        Se3 {
            rotation: r,
            translation: self.translation,
        }
    }

    pub fn cast<U: Scalar>(&self) -> Se3<U> {
        Se3 {
            rotation: self.rotation.map(|v| U::c(v.to_f64c())),
            translation: self.translation.map(|v| U::c(v.to_f64c())),
        }
    }
}

impl<T: Scalar> std::ops::Mul for Se3<T> {
    type Output = Se3<T>;
    fn mul(self, rhs: Se3<T>) -> Se3<T> {
        self.compose(&rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    type S = Se3<f64>;

    #[test]
    fn log_of_identity_is_zero() {
        assert_eq!(S::identity().log(), Vector6::zeros());
    }

    #[test]
    fn exp_of_z_quarter_turn() {
        let v = Vector6::new(0.0, 0.0, 0.0, 0.0, 0.0, std::f64::consts::FRAC_PI_2);
        let t = S::exp(&v);
        let expect = Matrix3::new(0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0);
        assert_relative_eq!(t.rotation, expect, epsilon = 1e-12);
    }

    #[test]
    fn compose_inverse_is_identity() {
        let v = Vector6::new(0.3, -0.2, 0.8, 0.1, -0.4, 0.2);
        let t = S::exp(&v);
        let id = t.compose(&t.inverse());
        assert_relative_eq!(id.rotation, Matrix3::identity(), epsilon = 1e-9);
        assert!(id.translation.norm() < 1e-9);
    }

    #[test]
    fn log_exp_roundtrip() {
        let v = Vector6::new(0.5, -0.3, 0.2, 0.4, 0.5, -0.6);
        let back = S::exp(&v).log();
        assert_relative_eq!(back, v, epsilon = 1e-9);
    }

    #[test]
    fn log_near_pi_branch() {
        for axis in [
            Vector3::new(1.0, 0.0, 0.0),
            Vector3::new(0.0, 1.0, 0.0),
            Vector3::new(1.0, 2.0, -0.5).normalize(),
        ] {
            for theta in [std::f64::consts::PI - 1e-3, std::f64::consts::PI - 1e-7] {
                let r = so3_exp(&(axis * theta));
                let w = so3_log(&r);
                assert_relative_eq!(w.norm(), theta, epsilon = 1e-6);
                assert!((w.normalize() - axis).norm() < 1e-5);
            }
        }
    }

    #[test]
    fn adjoint_change_of_frame() {
        let t = S::exp(&Vector6::new(0.2, 0.1, -0.3, 0.3, -0.2, 0.1));
        let v = Vector6::new(0.01, -0.02, 0.015, 0.005, 0.01, -0.005);
        let lhs = (t.compose(&S::exp(&v)).compose(&t.inverse())).log();
        let rhs = t.adjoint() * v;
        assert_relative_eq!(lhs, rhs, epsilon = 1e-6);
    }
}
