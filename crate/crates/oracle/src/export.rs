//! Export a synthetic scene to the on-disk dataset layout, so the full CLI
//! pipeline runs on oracle data unmodified.

use std::path::Path;

use flowslam_io::{
    write_calibration, write_flo, write_pfm, write_pfm_depth, write_trajectory, Calibration,
    IoError, TrajectoryEntry, TrajectoryFormat,
};

use crate::render::{render_flow, render_flow_noisy, render_frame, render_stereo_flow,
    render_stereo_flow_noisy};
use crate::scene::SyntheticScene;

#[derive(Debug, Clone, Copy)]
pub struct ExportOptions {
    /// Flow files per frame: to the next 1..=flows_ahead frames.
    pub flows_ahead: usize,
    /// Write left-to-right stereo flow per frame.
    pub stereo: bool,
    /// Write per-frame ground-truth depth as an RGB-D style prior.
    pub rgbd: bool,
    /// Apply the scene's noise spec to the exported flows.
    pub noisy: bool,
    /// Write intensity images.
    pub images: bool,
}

impl Default for ExportOptions {
    fn default() -> Self {
        ExportOptions {
            flows_ahead: 6,
            stereo: true,
            rgbd: false,
            noisy: false,
            images: true,
        }
    }
}

/// Write the tartanair-like layout under `root`: `calib.txt`, `times.txt`,
/// `image_left/`, `flow/`, optional `flow_stereo/` and `depth_prior/`, plus
/// `groundtruth.txt` (TUM) for evaluation.
pub fn export_manifest(
    scene: &SyntheticScene,
    root: impl AsRef<Path>,
    opts: &ExportOptions,
) -> Result<(), IoError> {
    let root = root.as_ref();
    let n = scene.frame_count();
    std::fs::create_dir_all(root.join("flow"))?;
    if opts.images {
        std::fs::create_dir_all(root.join("image_left"))?;
    }
    if opts.stereo {
        std::fs::create_dir_all(root.join("flow_stereo"))?;
    }
    if opts.rgbd {
        std::fs::create_dir_all(root.join("depth_prior"))?;
    }

    write_calibration(
        &Calibration {
            intrinsics: scene.intrinsics,
            baseline: opts.stereo.then_some(scene.baseline),
        },
        root.join("calib.txt"),
    )?;

    let times: String = (0..n).map(|i| format!("{:.6}\n", i as f64 * 0.1)).collect();
    std::fs::write(root.join("times.txt"), times)?;

    let mut gt = Vec::with_capacity(n);
    for i in 0..n {
        let pose = scene.pose_world(i);
        gt.push(TrajectoryEntry {
            timestamp: i as f64 * 0.1,
            pose: flowslam_core::Se3f64::new(
                pose.rotation.to_rotation_matrix().into_inner(),
                pose.translation.vector,
            ),
        });
    }
    write_trajectory(&gt, TrajectoryFormat::Tum, root.join("groundtruth.txt"))?;

    for i in 0..n {
        if opts.images {
            let (_, intensity) = render_frame(scene, i);
            write_pfm(&intensity, root.join(format!("image_left/{i:06}.pfm")))?;
        }
        if opts.rgbd {
            let (depth, _) = render_frame(scene, i);
            write_pfm_depth(&depth, root.join(format!("depth_prior/{i:06}.pfm")))?;
        }
        if opts.stereo {
            let flow = if opts.noisy {
                render_stereo_flow_noisy(scene, i)
            } else {
                render_stereo_flow(scene, i)
            };
            write_flo(&flow, root.join(format!("flow_stereo/{i:06}.flo")))?;
        }
        for k in 1..=opts.flows_ahead {
            let j = i + k;
            if j >= n {
                break;
            }
            let rendered = if opts.noisy {
                render_flow_noisy(scene, i, j)
            } else {
                render_flow(scene, i, j)
            };
            write_flo(
                &rendered.flow,
                root.join(format!("flow/{i:06}_{j:06}_flow.flo")),
            )?;
        }
    }
    Ok(())
}
