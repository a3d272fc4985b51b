//! Canned scenes used across the test suites and the CLI oracle exporter.

use nalgebra::{Isometry3, Vector3};

use flowslam_core::CameraIntrinsicsF64;

use crate::scene::{
    look_at, MovingBox, NoiseSpec, Primitive, SyntheticScene, TrajectorySpec,
};

/// Shared desk-scale camera: 120x90, ~62 degree horizontal FOV.
pub fn desk_camera() -> CameraIntrinsicsF64 {
    CameraIntrinsicsF64::new(100.0, 100.0, 59.5, 44.5, 120, 90).unwrap()
}

pub const DESK_BASELINE: f64 = 0.25;

/// A textured corridor flown forward with gentle sway; the workhorse scene
/// for stereo end-to-end runs.
pub fn corridor(seed: u64, n_frames: usize) -> SyntheticScene {
    let mut primitives = vec![Primitive::Room {
        min: Vector3::new(-2.0, -1.2, -5.0),
        max: Vector3::new(2.0, 1.2, 6.0 + 0.12 * n_frames as f64 + 30.0),
    }];
    // Obstacles along the walls for parallax and occlusions.
    let mut z = 4.0;
    let mut side = 1.0;
    while z < 0.12 * n_frames as f64 + 20.0 {
        primitives.push(Primitive::SolidBox {
            min: Vector3::new(side * 1.1 - 0.35, 0.3, z),
            max: Vector3::new(side * 1.1 + 0.35, 1.2, z + 0.7),
        });
        primitives.push(Primitive::SolidBox {
            min: Vector3::new(-side * 1.4 - 0.3, -1.2, z + 2.0),
            max: Vector3::new(-side * 1.4 + 0.3, -0.4, z + 2.6),
        });
        z += 4.5;
        side = -side;
    }

    let mut poses = Vec::with_capacity(n_frames);
    for i in 0..n_frames {
        let t = i as f64;
        let x = 0.35 * (t * std::f64::consts::TAU / 90.0).sin();
        let y = 0.1 * (t * std::f64::consts::TAU / 70.0).cos();
        let z = 0.12 * t;
        let eye = Vector3::new(x, y, z);
        let ahead = Vector3::new(
            0.35 * ((t + 15.0) * std::f64::consts::TAU / 90.0).sin() * 0.5,
            0.0,
            z + 5.0,
        );
        poses.push(look_at(eye, ahead, Vector3::new(0.0, 1.0, 0.0)));
    }

    SyntheticScene {
        intrinsics: desk_camera(),
        baseline: DESK_BASELINE,
        primitives,
        flat_surfaces: vec![],
        moving_box: None,
        trajectory: TrajectorySpec::Poses(poses),
        noise: NoiseSpec::noiseless(),
        seed,
    }
}

/// A circular sweep inside a textured room, closing a loop after a full
/// revolution; exercises loop-closure detection and drift correction.
pub fn loop_room(seed: u64, n_frames: usize) -> SyntheticScene {
    let mut primitives = vec![Primitive::Room {
        min: Vector3::new(-8.0, -1.6, -8.0),
        max: Vector3::new(8.0, 1.6, 8.0),
    }];
    // Landmark boxes near the walls.
    for i in 0..10 {
        let phi = i as f64 * std::f64::consts::TAU / 10.0 + 0.37;
        let r = 6.8;
        let c = Vector3::new(r * phi.cos(), 0.6, r * phi.sin());
        let h = Vector3::new(0.45, 0.9, 0.45);
        primitives.push(Primitive::SolidBox {
            min: c - h,
            max: c + h,
        });
    }

    let radius = 5.0;
    let mut poses = Vec::with_capacity(n_frames);
    for i in 0..n_frames {
        let phi = i as f64 * std::f64::consts::TAU / n_frames as f64;
        let eye = Vector3::new(radius * phi.cos(), 0.0, radius * phi.sin());
        // Face mostly along the direction of travel, drifted outward a bit.
        let look_phi = phi + 0.45;
        let target = Vector3::new(
            7.2 * look_phi.cos(),
            0.1 * (3.0 * phi).sin(),
            7.2 * look_phi.sin(),
        );
        poses.push(look_at(eye, target, Vector3::new(0.0, 1.0, 0.0)));
    }

    SyntheticScene {
        intrinsics: desk_camera(),
        baseline: DESK_BASELINE,
        primitives,
        flat_surfaces: vec![],
        moving_box: None,
        trajectory: TrajectorySpec::Poses(poses),
        noise: NoiseSpec::noiseless(),
        seed,
    }
}

/// Static background with one rigid box crossing the view; exercises
/// rigidness down-weighting and see-through depth estimation.
pub fn dynamic_scene(seed: u64, n_frames: usize) -> SyntheticScene {
    let primitives = vec![
        Primitive::Room {
            min: Vector3::new(-4.0, -1.5, -3.0),
            max: Vector3::new(4.0, 1.5, 7.0),
        },
        Primitive::SolidBox {
            min: Vector3::new(-2.6, -0.2, 4.5),
            max: Vector3::new(-1.6, 1.5, 5.5),
        },
        Primitive::SolidBox {
            min: Vector3::new(1.8, -1.0, 4.0),
            max: Vector3::new(2.8, 0.2, 5.0),
        },
    ];
    let moving_box = MovingBox {
        half_extents: Vector3::new(0.4, 0.4, 0.25),
        center_start: Vector3::new(-1.3, -0.1, 2.8),
        velocity: Vector3::new(0.085, 0.0, 0.0),
    };

    let mut poses = Vec::with_capacity(n_frames);
    for i in 0..n_frames {
        let t = i as f64;
        let eye = Vector3::new(0.05 * t, 0.02 * (t * 0.4).sin(), 0.06 * t);
        let target = Vector3::new(0.05 * t * 0.3, 0.0, 6.0);
        poses.push(look_at(eye, target, Vector3::new(0.0, 1.0, 0.0)));
    }

    SyntheticScene {
        intrinsics: desk_camera(),
        baseline: DESK_BASELINE,
        primitives,
        flat_surfaces: vec![],
        moving_box: Some(moving_box),
        trajectory: TrajectorySpec::Poses(poses),
        noise: NoiseSpec::noiseless(),
        seed,
    }
}

/// Fronto-parallel plane at `depth` with the camera starting at the origin
/// and following the supplied poses (identity when empty).
pub fn fronto_plane(seed: u64, depth: f64, poses: Vec<Isometry3<f64>>) -> SyntheticScene {
    let poses = if poses.is_empty() {
        vec![Isometry3::identity()]
    } else {
        poses
    };
    SyntheticScene {
        intrinsics: desk_camera(),
        baseline: DESK_BASELINE,
        primitives: vec![Primitive::Plane {
            point: Vector3::new(0.0, 0.0, depth),
            normal: Vector3::new(0.0, 0.0, -1.0),
        }],
        flat_surfaces: vec![],
        moving_box: None,
        trajectory: TrajectorySpec::Poses(poses),
        noise: NoiseSpec::noiseless(),
        seed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::render::render_frame;

    #[test]
    fn corridor_renders_full_depth() {
        let scene = corridor(7, 10);
        let (depth, intensity) = render_frame(&scene, 0);
        assert_eq!(depth.valid_count(), 120 * 90);
        let mean: f64 =
            intensity.as_slice().iter().sum::<f64>() / intensity.as_slice().len() as f64;
        assert!(mean > 0.2 && mean < 0.8);
    }

    #[test]
    fn fronto_plane_depth_is_uniform() {
        let scene = fronto_plane(1, 3.0, vec![]);
        let (depth, _) = render_frame(&scene, 0);
        // Z-depth (not ray length) is constant over a fronto-parallel plane.
        for (_, _, d) in depth.iter_valid() {
            assert!((d - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn same_seed_renders_identically() {
        let a = render_frame(&corridor(11, 5), 2);
        let b = render_frame(&corridor(11, 5), 2);
        assert_eq!(a.0, b.0);
        assert_eq!(a.1, b.1);
    }

    #[test]
    fn box_occludes_plane_at_analytic_silhouette() {
        // Camera at origin looking +z; box in front of the end wall.
        let mut scene = fronto_plane(3, 6.0, vec![]);
        scene.primitives.push(Primitive::SolidBox {
            min: Vector3::new(-0.5, -0.5, 2.75),
            max: Vector3::new(0.5, 0.5, 3.25),
        });
        let (depth, _) = render_frame(&scene, 0);
        let k = scene.intrinsics;
        // Analytic silhouette: |x_cam| <= 0.5 at z = 2.75 -> pixel offset
        // fx * 0.5 / 2.75 from the principal point.
        let edge = k.fx * 0.5 / 2.75;
        let y_c = k.cy.round() as usize;
        for x in 0..k.width {
            let dx = x as f64 - k.cx;
            let d = depth.get(x, y_c).unwrap();
            if dx.abs() < edge - 1.0 {
                assert!(d < 3.5, "inside silhouette at x={x}: {d}");
            } else if dx.abs() > edge + 1.0 {
                assert!((d - 6.0).abs() < 1e-9, "outside silhouette at x={x}: {d}");
            }
        }
    }
}
