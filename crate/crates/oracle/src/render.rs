//! Exact renders of depth, intensity, inter-frame flow and stereo flow.

use nalgebra::{Isometry3, Vector2, Vector3};
use rand::Rng;
use rand_distr::{Distribution, Normal};

use flowslam_core::{DepthMapF64, FlowFieldF64, Grid};

use crate::noise::{rng_stream, texture};
use crate::scene::{SurfaceId, SyntheticScene};

/// Exact flow plus the per-pixel occlusion flag (visible in the source
/// frame but covered in the target frame).
pub struct RenderedFlow {
    pub flow: FlowFieldF64,
    pub occluded: Grid<bool>,
}

/// Depth and procedural-texture intensity of one frame.
pub fn render_frame(scene: &SyntheticScene, frame: usize) -> (DepthMapF64, Grid<f64>) {
    let pose = scene.pose_world(frame);
    render_view(scene, &pose, frame as f64)
}

/// Same as [`render_frame`] for the right stereo camera.
pub fn render_frame_right(scene: &SyntheticScene, frame: usize) -> (DepthMapF64, Grid<f64>) {
    let pose = scene.pose_world_right(frame);
    render_view(scene, &pose, frame as f64)
}

fn render_view(
    scene: &SyntheticScene,
    pose: &Isometry3<f64>,
    time: f64,
) -> (DepthMapF64, Grid<f64>) {
    let k = &scene.intrinsics;
    let mut depth = DepthMapF64::new_invalid(k.width, k.height);
    let mut intensity = Grid::new(k.width, k.height, 0.0);
    for y in 0..k.height {
        for x in 0..k.width {
            let (origin, dir) = scene.pixel_ray(pose, x as f64, y as f64);
            if let Some(hit) = scene.cast(&origin, &dir, time) {
                depth.set(x, y, hit.depth);
                let value = match hit.surface {
                    // Texture rides along with the moving object.
                    SurfaceId::Moving => {
                        let mb = scene.moving_box.as_ref().unwrap();
                        let local = hit.point_world - mb.center_at(time) + mb.center_start;
                        texture(scene.seed, &local)
                    }
                    SurfaceId::Static(i) if scene.flat_surfaces.contains(&i) => 0.5,
                    SurfaceId::Static(_) => texture(scene.seed, &hit.point_world),
                };
                intensity.set(x, y, value);
            }
        }
    }
    (depth, intensity)
}

/// Exact optical flow from frame `from` to frame `to`, computed by
/// per-pixel cast / surface advection / reprojection.
pub fn render_flow(scene: &SyntheticScene, from: usize, to: usize) -> RenderedFlow {
    let k = &scene.intrinsics;
    let pose_from = scene.pose_world(from);
    let pose_to = scene.pose_world(to);
    let world_from_to = pose_to.inverse();
    let (depth_to, _) = render_frame(scene, to);

    let mut flow = FlowFieldF64::new_invalid(k.width, k.height);
    let mut occluded = Grid::new(k.width, k.height, false);
    for y in 0..k.height {
        for x in 0..k.width {
            let (origin, dir) = scene.pixel_ray(&pose_from, x as f64, y as f64);
            let Some(hit) = scene.cast(&origin, &dir, from as f64) else {
                continue;
            };
            // Surface point at the target time: moving geometry advects.
            let p_world = match hit.surface {
                SurfaceId::Moving => {
                    let mb = scene.moving_box.as_ref().unwrap();
                    hit.point_world + mb.velocity * (to as f64 - from as f64)
                }
                SurfaceId::Static(_) => hit.point_world,
            };
            let p_cam = world_from_to * p_world;
            if p_cam.z <= 1e-6 {
                continue;
            }
            let u = k.fx * p_cam.x / p_cam.z + k.cx;
            let v = k.fy * p_cam.y / p_cam.z + k.cy;
            flow.set(x, y, Vector2::new(u - x as f64, v - y as f64));

            // Occlusion: the target view sees a nearer surface at the
            // landing pixel.
            let (ui, vi) = (u.round() as i64, v.round() as i64);
            if ui < 0 || vi < 0 || ui >= k.width as i64 || vi >= k.height as i64 {
                occluded.set(x, y, true);
            } else if let Some(d) = depth_to.get(ui as usize, vi as usize) {
                if d < p_cam.z * 0.99 - 0.01 {
                    occluded.set(x, y, true);
                }
            }
        }
    }
    RenderedFlow { flow, occluded }
}

/// Noisy flow per the scene's noise spec: Gaussian jitter per component,
/// gross outliers on a random pixel fraction, and optional corruption of
/// occluded pixels (mimicking an estimator hallucinating at occlusions).
pub fn render_flow_noisy(scene: &SyntheticScene, from: usize, to: usize) -> RenderedFlow {
    let exact = render_flow(scene, from, to);
    let spec = &scene.noise;
    if spec.flow_noise_std == 0.0
        && spec.flow_outlier_fraction == 0.0
        && spec.occlusion_corrupt_prob == 0.0
    {
        return exact;
    }
    let mut rng = rng_stream(scene.seed, &[0xf10a, from as u64, to as u64]);
    let gauss = Normal::new(0.0, spec.flow_noise_std.max(1e-300)).unwrap();
    let mut flow = exact.flow.clone();
    for y in 0..flow.height() {
        for x in 0..flow.width() {
            let Some(f) = flow.get(x, y) else { continue };
            let outlier = rng.gen::<f64>() < spec.flow_outlier_fraction
                || (exact.occluded.at(x, y) && rng.gen::<f64>() < spec.occlusion_corrupt_prob);
            let v = if outlier {
                let m = spec.flow_outlier_mag;
                f + Vector2::new(rng.gen_range(-m..m), rng.gen_range(-m..m))
            } else if spec.flow_noise_std > 0.0 {
                f + Vector2::new(gauss.sample(&mut rng), gauss.sample(&mut rng))
            } else {
                f
            };
            flow.set(x, y, v);
        }
    }
    RenderedFlow {
        flow,
        occluded: exact.occluded,
    }
}

/// Exact left-to-right stereo flow at `frame`. For static geometry the X
/// component is `-fx * baseline / depth` (negative disparity).
pub fn render_stereo_flow(scene: &SyntheticScene, frame: usize) -> FlowFieldF64 {
    let k = &scene.intrinsics;
    let pose_left = scene.pose_world(frame);
    let right_from_world = scene.pose_world_right(frame).inverse();

    let mut flow = FlowFieldF64::new_invalid(k.width, k.height);
    for y in 0..k.height {
        for x in 0..k.width {
            let (origin, dir) = scene.pixel_ray(&pose_left, x as f64, y as f64);
            let Some(hit) = scene.cast(&origin, &dir, frame as f64) else {
                continue;
            };
            let p_cam = right_from_world * hit.point_world;
            if p_cam.z <= 1e-6 {
                continue;
            }
            let u = k.fx * p_cam.x / p_cam.z + k.cx;
            let v = k.fy * p_cam.y / p_cam.z + k.cy;
            flow.set(x, y, Vector2::new(u - x as f64, v - y as f64));
        }
    }
    flow
}

/// Noisy stereo flow: Gaussian disparity noise on the X component.
pub fn render_stereo_flow_noisy(scene: &SyntheticScene, frame: usize) -> FlowFieldF64 {
    let mut flow = render_stereo_flow(scene, frame);
    let std = scene.noise.disparity_noise_std;
    if std == 0.0 {
        return flow;
    }
    let mut rng = rng_stream(scene.seed, &[0x57e0, frame as u64]);
    let gauss = Normal::new(0.0, std).unwrap();
    for y in 0..flow.height() {
        for x in 0..flow.width() {
            if let Some(f) = flow.get(x, y) {
                flow.set(x, y, Vector2::new(f.x + gauss.sample(&mut rng), f.y));
            }
        }
    }
    flow
}
