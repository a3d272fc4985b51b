//! Binary little-endian PLY export of keyframe depth maps.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use flowslam_core::{CameraIntrinsicsF64, ConfidenceMapF64, DepthMapF64, Grid, Sim3f64};
use nalgebra::Vector2;

use crate::error::Result;

/// One keyframe's contribution to the aggregated point cloud.
pub struct CloudKeyframe<'a> {
    pub depth: &'a DepthMapF64,
    pub confidence: &'a ConfidenceMapF64,
    /// Optional intensity in [0, 1]; gray levels come from here.
    pub intensity: Option<&'a Grid<f64>>,
    /// World-from-keyframe pose.
    pub pose_world: Sim3f64,
    pub intrinsics: CameraIntrinsicsF64,
}

/// Write pixels with confidence at or above `threshold`, backprojected and
/// transformed into the world frame. Returns the vertex count.
pub fn write_pointcloud_ply(
    keyframes: &[CloudKeyframe<'_>],
    threshold: f64,
    path: impl AsRef<Path>,
) -> Result<usize> {
    let mut vertices: Vec<([f32; 3], [u8; 3])> = Vec::new();
    for kf in keyframes {
        for (x, y, d) in kf.depth.iter_valid() {
            if kf.confidence.get(x, y) < threshold {
                continue;
            }
            let pixel = Vector2::new(x as f64, y as f64);
            let p = kf.intrinsics.ray(&pixel) * d;
            let pw = kf.pose_world.transform(&p);
            let gray = kf
                .intensity
                .map(|img| (img.at(x, y).clamp(0.0, 1.0) * 255.0) as u8)
                .unwrap_or(200);
            vertices.push((
                [pw.x as f32, pw.y as f32, pw.z as f32],
                [gray, gray, gray],
            ));
        }
    }

    let mut w = BufWriter::new(File::create(path)?);
    write!(
        w,
        "ply\nformat binary_little_endian 1.0\nelement vertex {}\n\
         property float x\nproperty float y\nproperty float z\n\
         property uchar red\nproperty uchar green\nproperty uchar blue\n\
         end_header\n",
        vertices.len()
    )?;
    for (p, c) in &vertices {
        for v in p {
            w.write_all(&v.to_le_bytes())?;
        }
        w.write_all(c)?;
    }
    w.flush()?;
    Ok(vertices.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use flowslam_core::{CameraIntrinsics, ConfidenceMap, DepthMap};
    use tempfile::tempdir;

    fn cam() -> CameraIntrinsicsF64 {
        CameraIntrinsics::new(100.0, 100.0, 8.0, 6.0, 16, 12).unwrap()
    }

    #[test]
    fn single_vertex_header_count() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("one.ply");
        let mut depth = DepthMap::new_invalid(16, 12);
        depth.set(4, 4, 2.0);
        let conf = ConfidenceMap::constant(16, 12, 1.0);
        let n = write_pointcloud_ply(
            &[CloudKeyframe {
                depth: &depth,
                confidence: &conf,
                intensity: None,
                pose_world: Sim3f64::identity(),
                intrinsics: cam(),
            }],
            0.5,
            &path,
        )
        .unwrap();
        assert_eq!(n, 1);
        let bytes = std::fs::read(&path).unwrap();
        let header_end = bytes
            .windows(11)
            .position(|w| w == b"end_header\n")
            .unwrap()
            + 11;
        let text = String::from_utf8_lossy(&bytes[..header_end]);
        assert!(text.contains("element vertex 1\n"));
        assert_eq!(bytes.len() - header_end, 15); // 3 f32 + 3 u8
    }

    #[test]
    fn threshold_above_one_empties_cloud() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("empty.ply");
        let depth = DepthMap::constant(16, 12, 2.0);
        let conf = ConfidenceMap::constant(16, 12, 1.0);
        let n = write_pointcloud_ply(
            &[CloudKeyframe {
                depth: &depth,
                confidence: &conf,
                intensity: None,
                pose_world: Sim3f64::identity(),
                intrinsics: cam(),
            }],
            1.0 + 1e-9,
            &path,
        )
        .unwrap();
        assert_eq!(n, 0);
    }

    #[test]
    fn plane_keyframe_vertices_satisfy_plane_equation() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("plane.ply");
        let depth = DepthMap::constant(16, 12, 3.0);
        let conf = ConfidenceMap::constant(16, 12, 1.0);
        let n = write_pointcloud_ply(
            &[CloudKeyframe {
                depth: &depth,
                confidence: &conf,
                intensity: None,
                pose_world: Sim3f64::identity(),
                intrinsics: cam(),
            }],
            0.0,
            &path,
        )
        .unwrap();
        assert_eq!(n, 16 * 12);

        // Plane-fit oracle: all vertices must satisfy z = 3 within 1e-6.
        let bytes = std::fs::read(&path).unwrap();
        let header_end = bytes
            .windows(11)
            .position(|w| w == b"end_header\n")
            .unwrap()
            + 11;
        for v in bytes[header_end..].chunks_exact(15) {
            let z = f32::from_le_bytes(v[8..12].try_into().unwrap());
            assert!((z - 3.0).abs() < 1e-6);
        }
    }
}
