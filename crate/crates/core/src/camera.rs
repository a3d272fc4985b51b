//! Pinhole camera model.
//!
//! Coordinate conventions used throughout the crate: right-handed camera
//! frame with `Z` pointing forward (into the scene), `X` right, `Y` down.
//! Pixel origin is the top-left corner, pixel centers sit on integer
//! coordinates, and flow is stored as `(dx, dy)` displacements.

use nalgebra::{Vector2, Vector3};

use crate::error::CoreError;
use crate::scalar::Scalar;

/// Pinhole intrinsics of a rectified camera (no distortion model).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraIntrinsics<T> {
    pub fx: T,
    pub fy: T,
    pub cx: T,
    pub cy: T,
    pub width: usize,
    pub height: usize,
}

impl<T: Scalar> CameraIntrinsics<T> {
    pub fn new(
        fx: T,
        fy: T,
        cx: T,
        cy: T,
        width: usize,
        height: usize,
    ) -> Result<Self, CoreError> {
        if fx <= T::zero() || fy <= T::zero() {
            return Err(CoreError::BadIntrinsics(format!(
                "focal lengths must be positive, got fx={:?} fy={:?}",
                fx.to_f64c(),
                fy.to_f64c()
            )));
        }
        if cx < T::zero() || cx >= T::c(width as f64) || cy < T::zero() || cy >= T::c(height as f64)
        {
            return Err(CoreError::BadIntrinsics(
                "principal point must lie inside the image".into(),
            ));
        }
        Ok(CameraIntrinsics {
            fx,
            fy,
            cx,
            cy,
            width,
            height,
        })
    }

    /// Project a camera-space point with `z > 0` to continuous pixel coordinates.
    #[inline]
    pub fn project(&self, p: &Vector3<T>) -> Vector2<T> {
        Vector2::new(
            self.fx * p.x / p.z + self.cx,
            self.fy * p.y / p.z + self.cy,
        )
    }

    /// Unit-depth backprojection of a continuous pixel coordinate.
    #[inline]
    pub fn ray(&self, pixel: &Vector2<T>) -> Vector3<T> {
        Vector3::new(
            (pixel.x - self.cx) / self.fx,
            (pixel.y - self.cy) / self.fy,
            T::one(),
        )
    }

    /// `true` when a continuous coordinate lies inside the pixel grid.
    #[inline]
    pub fn contains(&self, uv: &Vector2<T>) -> bool {
        uv.x >= T::zero()
            && uv.y >= T::zero()
            && uv.x <= T::c((self.width - 1) as f64)
            && uv.y <= T::c((self.height - 1) as f64)
    }

    /// Intrinsics of the same camera rendered at `factor` times the resolution.
    ///
    /// Pixel centers are kept aligned, so `cx' = (cx + 0.5) * factor - 0.5`.
    pub fn scaled(&self, factor: T) -> Self {
        let half = T::c(0.5);
        CameraIntrinsics {
            fx: self.fx * factor,
            fy: self.fy * factor,
            cx: (self.cx + half) * factor - half,
            cy: (self.cy + half) * factor - half,
            width: ((T::c(self.width as f64) * factor).to_f64c().round() as usize).max(1),
            height: ((T::c(self.height as f64) * factor).to_f64c().round() as usize).max(1),
        }
    }

    /// Image diagonal in pixels; the support bound for flow end-point errors.
    pub fn diagonal(&self) -> T {
        let w = T::c(self.width as f64);
        let h = T::c(self.height as f64);
        (w * w + h * h).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cam() -> CameraIntrinsics<f64> {
        CameraIntrinsics::new(320.0, 320.0, 160.0, 120.0, 320, 240).unwrap()
    }

    #[test]
    fn rejects_bad_intrinsics() {
        assert!(CameraIntrinsics::new(0.0, 320.0, 160.0, 120.0, 320, 240).is_err());
        assert!(CameraIntrinsics::new(320.0, 320.0, 400.0, 120.0, 320, 240).is_err());
    }

    #[test]
    fn project_ray_roundtrip() {
        let k = cam();
        let px = Vector2::new(100.25, 50.5);
        let p = k.ray(&px) * 2.0;
        let back = k.project(&p);
        assert!((back - px).norm() < 1e-12);
    }

    #[test]
    fn contains_uses_pixel_centers() {
        let k = cam();
        assert!(k.contains(&Vector2::new(0.0, 0.0)));
        assert!(k.contains(&Vector2::new(319.0, 239.0)));
        assert!(!k.contains(&Vector2::new(319.5, 100.0)));
        assert!(!k.contains(&Vector2::new(-0.1, 100.0)));
    }
}
