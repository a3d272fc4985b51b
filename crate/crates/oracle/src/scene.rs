//! Analytic scene model: primitives, camera trajectory and noise spec.
//!
//! Projection and ray-casting here are written directly against
//! `nalgebra::Isometry3`, independent of the core transfer operations, so
//! the two implementations can cross-validate each other.

use nalgebra::{Isometry3, Translation3, UnitQuaternion, Vector3};

use flowslam_core::CameraIntrinsicsF64;

#[derive(Debug, Clone)]
pub enum Primitive {
    /// Infinite plane through `point` with unit `normal`.
    Plane {
        point: Vector3<f64>,
        normal: Vector3<f64>,
    },
    /// Solid axis-aligned box seen from outside.
    SolidBox { min: Vector3<f64>, max: Vector3<f64> },
    /// Axis-aligned room seen from inside (faces point inward).
    Room { min: Vector3<f64>, max: Vector3<f64> },
}

/// A rigid box translating with constant velocity; the one dynamic element.
#[derive(Debug, Clone)]
pub struct MovingBox {
    pub half_extents: Vector3<f64>,
    pub center_start: Vector3<f64>,
    /// World-units per frame.
    pub velocity: Vector3<f64>,
}

impl MovingBox {
    pub fn center_at(&self, frame: f64) -> Vector3<f64> {
        self.center_start + self.velocity * frame
    }
}

#[derive(Debug, Clone)]
pub enum TrajectorySpec {
    /// Explicit world-from-camera poses, one per frame.
    Poses(Vec<Isometry3<f64>>),
}

#[derive(Debug, Clone, Copy)]
pub struct NoiseSpec {
    /// Per-component Gaussian flow noise, pixels.
    pub flow_noise_std: f64,
    /// Fraction of pixels replaced by gross flow outliers.
    pub flow_outlier_fraction: f64,
    /// Magnitude bound of gross outliers, pixels.
    pub flow_outlier_mag: f64,
    /// Probability that an occluded pixel is corrupted like an outlier.
    pub occlusion_corrupt_prob: f64,
    /// Gaussian noise on stereo disparity, pixels.
    pub disparity_noise_std: f64,
}

impl NoiseSpec {
    pub fn noiseless() -> Self {
        NoiseSpec {
            flow_noise_std: 0.0,
            flow_outlier_fraction: 0.0,
            flow_outlier_mag: 8.0,
            occlusion_corrupt_prob: 0.0,
            disparity_noise_std: 0.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticScene {
    pub intrinsics: CameraIntrinsicsF64,
    /// Stereo baseline (right camera at +x in the left camera frame).
    pub baseline: f64,
    pub primitives: Vec<Primitive>,
    /// Indices into `primitives` rendered at constant intensity
    /// (textureless regions for robustness tests).
    pub flat_surfaces: Vec<usize>,
    pub moving_box: Option<MovingBox>,
    pub trajectory: TrajectorySpec,
    pub noise: NoiseSpec,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceId {
    Static(usize),
    Moving,
}

#[derive(Debug, Clone, Copy)]
pub struct Hit {
    /// Ray parameter; equals camera-space Z-depth for unit-Z camera rays.
    pub depth: f64,
    pub point_world: Vector3<f64>,
    pub surface: SurfaceId,
}

impl SyntheticScene {
    pub fn frame_count(&self) -> usize {
        match &self.trajectory {
            TrajectorySpec::Poses(p) => p.len(),
        }
    }

    /// World-from-camera pose of the left camera at `frame`.
    pub fn pose_world(&self, frame: usize) -> Isometry3<f64> {
        match &self.trajectory {
            TrajectorySpec::Poses(p) => p[frame],
        }
    }

    /// World-from-camera pose of the right stereo camera at `frame`.
    pub fn pose_world_right(&self, frame: usize) -> Isometry3<f64> {
        self.pose_world(frame) * Translation3::new(self.baseline, 0.0, 0.0)
    }

    /// Camera ray of pixel `(x, y)` in world coordinates, scaled so the ray
    /// parameter equals camera-space Z-depth.
    pub fn pixel_ray(&self, pose: &Isometry3<f64>, x: f64, y: f64) -> (Vector3<f64>, Vector3<f64>) {
        let k = &self.intrinsics;
        let dir_cam = Vector3::new((x - k.cx) / k.fx, (y - k.cy) / k.fy, 1.0);
        let origin = pose.translation.vector;
        let dir_world = pose.rotation * dir_cam;
        (origin, dir_world)
    }

    /// Nearest surface along a ray at time `frame` (for moving geometry).
    pub fn cast(&self, origin: &Vector3<f64>, dir: &Vector3<f64>, frame: f64) -> Option<Hit> {
        let mut best: Option<Hit> = None;
        let mut consider = |depth: f64, surface: SurfaceId| {
            if depth > 1e-6 && best.map_or(true, |b| depth < b.depth) {
                best = Some(Hit {
                    depth,
                    point_world: origin + dir * depth,
                    surface,
                });
            }
        };
        for (i, prim) in self.primitives.iter().enumerate() {
            match prim {
                Primitive::Plane { point, normal } => {
                    let denom = dir.dot(normal);
                    if denom.abs() > 1e-12 {
                        let t = (point - origin).dot(normal) / denom;
                        consider(t, SurfaceId::Static(i));
                    }
                }
                Primitive::SolidBox { min, max } => {
                    if let Some((t_near, _)) = ray_aabb(origin, dir, min, max) {
                        consider(t_near, SurfaceId::Static(i));
                    }
                }
                Primitive::Room { min, max } => {
                    if let Some((_, t_far)) = ray_aabb(origin, dir, min, max) {
                        consider(t_far, SurfaceId::Static(i));
                    }
                }
            }
        }
        if let Some(mb) = &self.moving_box {
            let c = mb.center_at(frame);
            let min = c - mb.half_extents;
            let max = c + mb.half_extents;
            if let Some((t_near, _)) = ray_aabb(origin, dir, &min, &max) {
                consider(t_near, SurfaceId::Moving);
            }
        }
        best
    }
}

/// Slab-method ray/AABB intersection; returns entry and exit parameters
/// when the ray crosses the box in front of the origin.
fn ray_aabb(
    origin: &Vector3<f64>,
    dir: &Vector3<f64>,
    min: &Vector3<f64>,
    max: &Vector3<f64>,
) -> Option<(f64, f64)> {
    let mut t0 = f64::NEG_INFINITY;
    let mut t1 = f64::INFINITY;
    for i in 0..3 {
        if dir[i].abs() < 1e-15 {
            if origin[i] < min[i] || origin[i] > max[i] {
                return None;
            }
            continue;
        }
        let inv = 1.0 / dir[i];
        let (mut a, mut b) = ((min[i] - origin[i]) * inv, (max[i] - origin[i]) * inv);
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        t0 = t0.max(a);
        t1 = t1.min(b);
        if t0 > t1 {
            return None;
        }
    }
    (t1 > 1e-6).then_some((t0, t1))
}

/// Build a look-at world-from-camera pose. The camera frame is X right,
/// Y down, Z forward; `down_world` is the world direction gravity points to
/// (scenes here use a Y-down world, so `(0, 1, 0)`).
pub fn look_at(
    eye: Vector3<f64>,
    target: Vector3<f64>,
    down_world: Vector3<f64>,
) -> Isometry3<f64> {
    let forward = (target - eye).normalize();
    let right = down_world.cross(&forward).normalize();
    let down = forward.cross(&right);
    let rot = nalgebra::Matrix3::from_columns(&[right, down, forward]);
    let q = UnitQuaternion::from_matrix(&rot);
    Isometry3::from_parts(Translation3::from(eye), q)
}
