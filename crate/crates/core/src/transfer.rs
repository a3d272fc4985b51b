//! Depth/pixel transfer across camera frames, rigid-flow synthesis and
//! normal-map estimation.

use nalgebra::{Vector2, Vector3};

use crate::camera::CameraIntrinsics;
use crate::error::CoreError;
use crate::maps::{DepthMap, FlowField, NormalMap};
use crate::scalar::Scalar;
use crate::se3::Se3;

/// Minimum transferred Z before a point counts as behind the camera.
pub fn z_min<T: Scalar>() -> T {
    T::c(1e-6)
}

/// Backproject pixel `j` at `depth` into a camera-space point with `z = depth`.
pub fn pixel_to_point<T: Scalar>(
    pixel: &Vector2<T>,
    depth: T,
    intr: &CameraIntrinsics<T>,
) -> Result<Vector3<T>, CoreError> {
    if depth <= T::zero() || !depth.finite() {
        return Err(CoreError::invalid(format!(
            "depth must be positive, got {}",
            depth.to_f64c()
        )));
    }
    Ok(intr.ray(pixel) * depth)
}

/// Project a camera-space point back to pixel coordinates.
pub fn point_to_pixel<T: Scalar>(
    point: &Vector3<T>,
    intr: &CameraIntrinsics<T>,
) -> Result<Vector2<T>, CoreError> {
    if point.z <= z_min() {
        return Err(CoreError::BehindCamera {
            z: point.z.to_f64c(),
        });
    }
    Ok(intr.project(point))
}

/// Transfer the point seen at pixel `j` with depth `theta_j` into the frame
/// related by `pose`; the returned Z-component is the transferred depth.
pub fn transfer_point<T: Scalar>(
    theta_j: T,
    pixel: &Vector2<T>,
    pose: &Se3<T>,
    intr: &CameraIntrinsics<T>,
) -> Result<Vector3<T>, CoreError> {
    Ok(pose.transform(&pixel_to_point(pixel, theta_j, intr)?))
}

/// Continuous reprojection of a source pixel into another frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reprojection<T> {
    /// Continuous target coordinates.
    pub uv: Vector2<T>,
    /// Nearest-integer pixel index (may be out of bounds).
    pub pixel: (i64, i64),
    /// Whether `uv` lies inside the target pixel grid.
    pub in_bounds: bool,
    /// Transferred Z-depth in the target frame.
    pub depth: T,
}

/// Reproject pixel `j` with depth `theta_j` through `pose` into the target
/// image. Landing outside the frame is reported as a status, not an error;
/// a transferred depth at or below `z_min` is.
pub fn reproject<T: Scalar>(
    theta_j: T,
    pixel: &Vector2<T>,
    pose: &Se3<T>,
    intr: &CameraIntrinsics<T>,
) -> Result<Reprojection<T>, CoreError> {
    let p = transfer_point(theta_j, pixel, pose, intr)?;
    if p.z <= z_min() {
        return Err(CoreError::BehindCamera { z: p.z.to_f64c() });
    }
    let uv = intr.project(&p);
    Ok(Reprojection {
        uv,
        pixel: (
            uv.x.round().to_f64c() as i64,
            uv.y.round().to_f64c() as i64,
        ),
        in_bounds: intr.contains(&uv),
        depth: p.z,
    })
}

/// Flow field induced by camera motion `pose` over a static `depth` map.
/// Pixels with invalid depth or points behind the camera are left invalid.
pub fn rigid_flow<T: Scalar>(
    depth: &DepthMap<T>,
    pose: &Se3<T>,
    intr: &CameraIntrinsics<T>,
) -> FlowField<T> {
    let mut flow = FlowField::new_invalid(depth.width(), depth.height());
    for (x, y, d) in depth.iter_valid() {
        let pixel = Vector2::new(T::c(x as f64), T::c(y as f64));
        if let Ok(r) = reproject(d, &pixel, pose, intr) {
            flow.set(x, y, r.uv - pixel);
        }
    }
    flow
}

/// Surface normals from central differences of the backprojected depth map.
///
/// Interior pixels need the full 3x3 neighborhood of valid depths; border
/// pixels fall back to one-sided differences. Normals are oriented toward
/// the camera (`n_z < 0` in the Z-forward frame).
pub fn normal_map<T: Scalar>(depth: &DepthMap<T>, intr: &CameraIntrinsics<T>) -> NormalMap<T> {
    let w = depth.width();
    let h = depth.height();
    let mut normals = NormalMap::new_invalid(w, h);

    let point = |x: usize, y: usize| -> Option<Vector3<T>> {
        let d = depth.get(x, y)?;
        let pixel = Vector2::new(T::c(x as f64), T::c(y as f64));
        Some(intr.ray(&pixel) * d)
    };

    for y in 0..h {
        for x in 0..w {
            if depth.get(x, y).is_none() {
                continue;
            }
            // Horizontal tangent: central if both sides valid, else one-sided.
            let left = if x > 0 { point(x - 1, y) } else { None };
            let right = if x + 1 < w { point(x + 1, y) } else { None };
            let center = point(x, y).unwrap();
            let dx = match (left, right) {
                (Some(l), Some(r)) => Some(r - l),
                (Some(l), None) => Some(center - l),
                (None, Some(r)) => Some(r - center),
                (None, None) => None,
            };
            let up = if y > 0 { point(x, y - 1) } else { None };
            let down = if y + 1 < h { point(x, y + 1) } else { None };
            let dy = match (up, down) {
                (Some(u), Some(d)) => Some(d - u),
                (Some(u), None) => Some(center - u),
                (None, Some(d)) => Some(d - center),
                (None, None) => None,
            };
            let (Some(dx), Some(dy)) = (dx, dy) else {
                continue;
            };
            let n = dx.cross(&dy);
            let norm = n.norm();
            if norm < T::c(1e-12) {
                continue;
            }
            let mut n = n / norm;
            // Camera looks down +Z; a visible surface faces the camera.
            if n.z > T::zero() {
                n = -n;
            }
            normals.set(x, y, n);
        }
    }
    normals
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::Vector6;

    fn cam() -> CameraIntrinsics<f64> {
        CameraIntrinsics::new(320.0, 320.0, 160.0, 120.0, 320, 240).unwrap()
    }

    #[test]
    fn principal_point_ray_is_optical_axis() {
        let k = cam();
        let p = pixel_to_point(&Vector2::new(160.0, 120.0), 3.5, &k).unwrap();
        assert_relative_eq!(p, Vector3::new(0.0, 0.0, 3.5), epsilon = 1e-15);
    }

    #[test]
    fn unit_focal_offset() {
        let k = cam();
        let p = pixel_to_point(&Vector2::new(160.0 + 320.0, 120.0), 1.0, &k).unwrap();
        assert_relative_eq!(p, Vector3::new(1.0, 0.0, 1.0), epsilon = 1e-15);
    }

    #[test]
    fn closed_form_backprojection() {
        let k = CameraIntrinsics::new(320.0, 320.0, 160.0, 120.0, 320, 240).unwrap();
        let p = pixel_to_point(&Vector2::new(100.0, 50.0), 2.0, &k).unwrap();
        assert_relative_eq!(p, Vector3::new(-0.375, -0.4375, 2.0), epsilon = 1e-15);
    }

    #[test]
    fn nonpositive_depth_rejected() {
        let k = cam();
        assert!(pixel_to_point(&Vector2::new(10.0, 10.0), 0.0, &k).is_err());
        assert!(pixel_to_point(&Vector2::new(10.0, 10.0), -1.0, &k).is_err());
    }

    #[test]
    fn identity_transfer_preserves_depth() {
        let k = cam();
        let p = transfer_point(2.5, &Vector2::new(33.0, 77.0), &Se3::identity(), &k).unwrap();
        assert_relative_eq!(p.z, 2.5, epsilon = 1e-15);
    }

    #[test]
    fn z_translation_adds() {
        let k = cam();
        let t = Se3::from_translation(Vector3::new(0.0, 0.0, 0.75));
        let p = transfer_point(2.0, &Vector2::new(50.0, 60.0), &t, &k).unwrap();
        assert_relative_eq!(p.z, 2.75, epsilon = 1e-15);
    }

    #[test]
    fn transfer_matches_homogeneous_multiply() {
        // Independent oracle: 4x4 homogeneous-coordinate chain.
        let k = cam();
        let pose = Se3::exp(&Vector6::new(0.2, -0.1, 0.3, 0.1, 0.2, -0.1));
        let pixel = Vector2::new(123.0, 81.0);
        let d = 3.2;

        let mut m = nalgebra::Matrix4::<f64>::identity();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(&pose.rotation);
        m.fixed_view_mut::<3, 1>(0, 3).copy_from(&pose.translation);
        let hom = Vector3::new((pixel.x - 160.0) / 320.0, (pixel.y - 120.0) / 320.0, 1.0) * d;
        let expect = m * nalgebra::Vector4::new(hom.x, hom.y, hom.z, 1.0);

        let got = transfer_point(d, &pixel, &pose, &k).unwrap();
        assert_relative_eq!(got, expect.fixed_rows::<3>(0).into_owned(), epsilon = 1e-12);
    }

    #[test]
    fn identity_reprojection_is_fixed_point() {
        let k = cam();
        let r = reproject(4.0, &Vector2::new(200.0, 100.0), &Se3::identity(), &k).unwrap();
        assert_relative_eq!(r.uv, Vector2::new(200.0, 100.0), epsilon = 1e-12);
        assert!(r.in_bounds);
    }

    #[test]
    fn half_turn_mirrors_about_principal_point() {
        let k = cam();
        let pose = Se3::new(
            crate::se3::so3_exp(&Vector3::new(0.0, 0.0, std::f64::consts::PI)),
            Vector3::zeros(),
        );
        let j = Vector2::new(160.0 + 30.0, 120.0 + 20.0);
        let r = reproject(2.0, &j, &pose, &k).unwrap();
        assert_relative_eq!(r.uv, Vector2::new(160.0 - 30.0, 120.0 - 20.0), epsilon = 1e-9);
    }

    #[test]
    fn behind_camera_is_an_error() {
        let k = cam();
        let pose = Se3::from_translation(Vector3::new(0.0, 0.0, -5.0));
        match reproject(2.0, &Vector2::new(160.0, 120.0), &pose, &k) {
            Err(CoreError::BehindCamera { .. }) => {}
            other => panic!("expected behind-camera error, got {other:?}"),
        }
    }

    #[test]
    fn identity_rigid_flow_is_zero() {
        let k = cam();
        let depth = DepthMap::constant(320, 240, 2.0);
        let flow = rigid_flow(&depth, &Se3::identity(), &k);
        for (_, _, f) in flow.iter_valid() {
            assert!(f.norm() == 0.0);
        }
        assert_eq!(flow.iter_valid().count(), 320 * 240);
    }

    #[test]
    fn translational_flow_over_plane() {
        // Fronto-parallel plane at depth d, pure X translation t:
        // flow = (-fx * t / d, 0) everywhere.
        let k = cam();
        let d = 2.0;
        let t = 0.1;
        let depth = DepthMap::constant(320, 240, d);
        let pose = Se3::from_translation(Vector3::new(-t, 0.0, 0.0));
        let flow = rigid_flow(&depth, &pose, &k);
        let expect = Vector2::new(-320.0 * t / d, 0.0);
        let f = flow.get(57, 191).unwrap();
        assert_relative_eq!(f, expect, epsilon = 1e-12);
    }

    #[test]
    fn plane_normals_face_camera() {
        let k = cam();
        let depth = DepthMap::constant(64, 48, 3.0);
        let normals = normal_map(&depth, &k);
        let n = normals.get(30, 20).unwrap();
        assert_relative_eq!(n, Vector3::new(0.0, 0.0, -1.0), epsilon = 1e-9);
    }

    #[test]
    fn isolated_pixel_has_no_normal() {
        let k = cam();
        let mut depth = DepthMap::new_invalid(16, 16);
        depth.set(8, 8, 2.0);
        let normals = normal_map(&depth, &k);
        assert!(normals.get(8, 8).is_none());
    }

    #[test]
    fn slanted_plane_normal_recovered() {
        // Plane z = 2 + 0.3 * x_world: analytic normal along (-0.3, 0, 1)
        // (camera-facing sign flips it).
        let k = cam();
        let a = 0.3;
        let depth = DepthMap::from_fn(320, 240, |x, y| {
            let _ = y;
            // Solve z = 2 + a * (x_pix - cx)/fx * z  =>  z (1 - a*xr) = 2
            let xr = (x as f64 - 160.0) / 320.0;
            2.0 / (1.0 - a * xr)
        });
        let normals = normal_map(&depth, &k);
        let expect = Vector3::new(a, 0.0, -1.0).normalize();
        let n = normals.get(100, 100).unwrap();
        let angle = n.dot(&expect).clamp(-1.0, 1.0).acos().to_degrees();
        assert!(angle < 0.5, "normal off by {angle} deg");
    }
}
