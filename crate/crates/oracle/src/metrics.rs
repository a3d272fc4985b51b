//! Trajectory evaluation: ATE after gauge alignment, KITTI-style relative
//! pose error over metric sub-sequence lengths, and completeness.

use nalgebra::{Matrix3, Vector3};
use thiserror::Error;

use flowslam_core::Se3f64;
use flowslam_io::TrajectoryEntry;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlignMode {
    Se3,
    Sim3,
}

#[derive(Debug, Clone)]
pub struct TrajectoryMetrics {
    /// RMSE of aligned position residuals, meters.
    pub ate_rmse: f64,
    /// Mean relative translation error over sub-sequences, percent.
    pub rpe_translation_percent: f64,
    /// Mean relative rotation error, degrees per meter. Absent when
    /// completeness is below 0.8.
    pub rpe_rotation_deg_per_m: Option<f64>,
    /// Fraction of ground-truth frames with a matched estimate.
    pub completeness: f64,
    /// Ground-truth path length, meters.
    pub gt_path_length: f64,
}

/// Sub-sequence lengths (meters) for the relative-pose-error protocol,
/// scaled to desk-sized scenes.
pub fn desk_subsequence_lengths() -> Vec<f64> {
    (1..=8).map(|i| 2.0 * i as f64).collect()
}

/// Umeyama least-squares alignment: returns `(s, R, t)` minimizing
/// `sum || x_i - (s R y_i + t) ||^2` (s fixed to 1 for SE(3) mode).
pub fn umeyama_align(
    xs: &[Vector3<f64>],
    ys: &[Vector3<f64>],
    mode: AlignMode,
) -> (f64, Matrix3<f64>, Vector3<f64>) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<Vector3<f64>>() / n;
    let my = ys.iter().sum::<Vector3<f64>>() / n;
    let mut cov = Matrix3::zeros();
    let mut var_y = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        cov += (x - mx) * (y - my).transpose();
        var_y += (y - my).norm_squared();
    }
    cov /= n;
    var_y /= n;

    let svd = cov.svd(true, true);
    let u = svd.u.unwrap();
    let v_t = svd.v_t.unwrap();
    let mut d = Matrix3::identity();
    if (u * v_t).determinant() < 0.0 {
        d[(2, 2)] = -1.0;
    }
    let r = u * d * v_t;
    let s = match mode {
        AlignMode::Se3 => 1.0,
        AlignMode::Sim3 => {
            if var_y < 1e-300 {
                1.0
            } else {
                (svd.singular_values[0] * d[(0, 0)]
                    + svd.singular_values[1] * d[(1, 1)]
                    + svd.singular_values[2] * d[(2, 2)])
                    / var_y
            }
        }
    };
    let t = mx - r * my * s;
    (s, r, t)
}

fn rotation_angle(r: &Matrix3<f64>) -> f64 {
    let tr = (r[(0, 0)] + r[(1, 1)] + r[(2, 2)] - 1.0) * 0.5;
    tr.clamp(-1.0, 1.0).acos()
}

fn path_length(positions: &[Vector3<f64>]) -> f64 {
    positions
        .windows(2)
        .map(|w| (w[1] - w[0]).norm())
        .sum()
}

/// Match estimated poses to ground truth by timestamp (nearest within half
/// the median ground-truth frame spacing) and evaluate.
pub fn evaluate_trajectory(
    estimated: &[TrajectoryEntry],
    ground_truth: &[TrajectoryEntry],
    mode: AlignMode,
    lengths: &[f64],
) -> Result<TrajectoryMetrics, MetricsError> {
    if ground_truth.len() < 2 {
        return Err(MetricsError::InsufficientData(
            "need at least 2 ground-truth poses".into(),
        ));
    }
    let mut spacings: Vec<f64> = ground_truth
        .windows(2)
        .map(|w| (w[1].timestamp - w[0].timestamp).abs())
        .collect();
    spacings.sort_by(|a, b| a.total_cmp(b));
    let tol = (spacings[spacings.len() / 2] * 0.5).max(1e-9);

    // gt index -> est index
    let mut matches: Vec<(usize, usize)> = Vec::new();
    for (gi, g) in ground_truth.iter().enumerate() {
        let best = estimated
            .iter()
            .enumerate()
            .map(|(ei, e)| (ei, (e.timestamp - g.timestamp).abs()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        if let Some((ei, dt)) = best {
            if dt <= tol {
                matches.push((gi, ei));
            }
        }
    }
    if matches.len() < 2 {
        return Err(MetricsError::InsufficientData(format!(
            "only {} timestamp-matched pose pairs",
            matches.len()
        )));
    }
    let completeness = matches.len() as f64 / ground_truth.len() as f64;

    let gt_pos: Vec<Vector3<f64>> = matches
        .iter()
        .map(|&(gi, _)| ground_truth[gi].pose.translation)
        .collect();
    let est_pos: Vec<Vector3<f64>> = matches
        .iter()
        .map(|&(_, ei)| estimated[ei].pose.translation)
        .collect();
    let (s, r, t) = umeyama_align(&gt_pos, &est_pos, mode);

    // Aligned estimates (full poses, for relative errors).
    let aligned: Vec<Se3f64> = matches
        .iter()
        .map(|&(_, ei)| {
            let p = &estimated[ei].pose;
            Se3f64::new(r * p.rotation, r * p.translation * s + t)
        })
        .collect();
    let gt_poses: Vec<Se3f64> = matches
        .iter()
        .map(|&(gi, _)| ground_truth[gi].pose)
        .collect();

    let ate_rmse = (gt_pos
        .iter()
        .zip(&aligned)
        .map(|(g, a)| (g - a.translation).norm_squared())
        .sum::<f64>()
        / matches.len() as f64)
        .sqrt();

    // Cumulative ground-truth arc length at each matched pose.
    let arc: Vec<f64> = {
        let mut acc = vec![0.0];
        for w in gt_pos.windows(2) {
            let last = *acc.last().unwrap();
            acc.push(last + (w[1] - w[0]).norm());
        }
        acc
    };

    let mut trans_errs = Vec::new();
    let mut rot_errs = Vec::new();
    for i in 0..matches.len() {
        for &len in lengths {
            let target = arc[i] + len;
            let Some(j) = arc[i..].iter().position(|&a| a >= target) else {
                continue;
            };
            let j = i + j;
            let seg = arc[j] - arc[i];
            if seg <= 1e-9 {
                continue;
            }
            let gt_rel = gt_poses[i].inverse().compose(&gt_poses[j]);
            let est_rel = aligned[i].inverse().compose(&aligned[j]);
            let err = gt_rel.inverse().compose(&est_rel);
            trans_errs.push(err.translation.norm() / seg * 100.0);
            rot_errs.push(rotation_angle(&err.rotation).to_degrees() / seg);
        }
    }
    if trans_errs.is_empty() {
        // Fall back to single-step relative errors on very short tracks.
        for w in 0..matches.len() - 1 {
            let seg = arc[w + 1] - arc[w];
            if seg <= 1e-9 {
                continue;
            }
            let gt_rel = gt_poses[w].inverse().compose(&gt_poses[w + 1]);
            let est_rel = aligned[w].inverse().compose(&aligned[w + 1]);
            let err = gt_rel.inverse().compose(&est_rel);
            trans_errs.push(err.translation.norm() / seg * 100.0);
            rot_errs.push(rotation_angle(&err.rotation).to_degrees() / seg);
        }
    }

    let mean = |v: &[f64]| {
        if v.is_empty() {
            0.0
        } else {
            v.iter().sum::<f64>() / v.len() as f64
        }
    };
    Ok(TrajectoryMetrics {
        ate_rmse,
        rpe_translation_percent: mean(&trans_errs),
        rpe_rotation_deg_per_m: (completeness >= 0.8).then(|| mean(&rot_errs)),
        completeness,
        gt_path_length: path_length(
            &ground_truth
                .iter()
                .map(|e| e.pose.translation)
                .collect::<Vec<_>>(),
        ),
    })
}
