//! TUM and KITTI trajectory interchange.
//!
//! TUM lines: `timestamp tx ty tz qx qy qz qw` (Hamilton quaternion,
//! normalized on write). KITTI lines: the 12 row-major entries of the
//! `3x4 [R|t]` world-from-camera matrix; timestamps are implicit frame
//! indices on read.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use flowslam_core::Se3f64;
use nalgebra::{Matrix3, Quaternion, UnitQuaternion, Vector3};

use crate::error::{IoError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryEntry {
    pub timestamp: f64,
    /// World-from-camera pose.
    pub pose: Se3f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrajectoryFormat {
    Tum,
    Kitti,
}

fn pose_is_finite(p: &Se3f64) -> bool {
    p.rotation.iter().all(|v| v.is_finite()) && p.translation.iter().all(|v| v.is_finite())
}

pub fn write_trajectory(
    entries: &[TrajectoryEntry],
    format: TrajectoryFormat,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    if let Some(index) = entries.iter().position(|e| !pose_is_finite(&e.pose)) {
        return Err(IoError::NonFinitePose {
            path: path.to_path_buf(),
            index,
        });
    }
    let mut w = BufWriter::new(File::create(path)?);
    match format {
        TrajectoryFormat::Tum => {
            for e in entries {
                let q = UnitQuaternion::from_matrix(&e.pose.rotation);
                let t = e.pose.translation;
                writeln!(
                    w,
                    "{:.6} {:.12} {:.12} {:.12} {:.12} {:.12} {:.12} {:.12}",
                    e.timestamp, t.x, t.y, t.z, q.i, q.j, q.k, q.w
                )?;
            }
        }
        TrajectoryFormat::Kitti => {
            for e in entries {
                let r = &e.pose.rotation;
                let t = &e.pose.translation;
                let row = [
                    r[(0, 0)],
                    r[(0, 1)],
                    r[(0, 2)],
                    t.x,
                    r[(1, 0)],
                    r[(1, 1)],
                    r[(1, 2)],
                    t.y,
                    r[(2, 0)],
                    r[(2, 1)],
                    r[(2, 2)],
                    t.z,
                ];
                let line: Vec<String> = row.iter().map(|v| format!("{v:.12e}")).collect();
                writeln!(w, "{}", line.join(" "))?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Read a trajectory file, sniffing the format from the token count per
/// line: 8 tokens is TUM, 12 is KITTI.
pub fn read_trajectory(path: impl AsRef<Path>) -> Result<Vec<TrajectoryEntry>> {
    let path = path.as_ref();
    let r = BufReader::new(File::open(path)?);
    let mut entries = Vec::new();
    for (lineno, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| IoError::Format {
                path: path.to_path_buf(),
                offset: lineno as u64,
                msg: format!("unparsable number on line {}: {e}", lineno + 1),
            })?;
        match toks.len() {
            8 => {
                let q = UnitQuaternion::from_quaternion(Quaternion::new(
                    toks[7], toks[4], toks[5], toks[6],
                ));
                entries.push(TrajectoryEntry {
                    timestamp: toks[0],
                    pose: Se3f64::new(
                        q.to_rotation_matrix().into_inner(),
                        Vector3::new(toks[1], toks[2], toks[3]),
                    ),
                });
            }
            12 => {
                let rotation = Matrix3::new(
                    toks[0], toks[1], toks[2], toks[4], toks[5], toks[6], toks[8], toks[9],
                    toks[10],
                );
                entries.push(TrajectoryEntry {
                    timestamp: entries.len() as f64,
                    pose: Se3f64::new(rotation, Vector3::new(toks[3], toks[7], toks[11])),
                });
            }
            n => {
                return Err(IoError::Format {
                    path: path.to_path_buf(),
                    offset: lineno as u64,
                    msg: format!("line {} has {n} fields, expected 8 (TUM) or 12 (KITTI)", lineno + 1),
                })
            }
        }
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use flowslam_core::se3::so3_exp;
    use tempfile::tempdir;

    #[test]
    fn identity_tum_line() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("t.txt");
        write_trajectory(
            &[TrajectoryEntry {
                timestamp: 0.0,
                pose: Se3f64::identity(),
            }],
            TrajectoryFormat::Tum,
            &path,
        )
        .unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let toks: Vec<f64> = text
            .split_whitespace()
            .map(|t| t.parse().unwrap())
            .collect();
        assert_eq!(toks, vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn identity_kitti_line() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("k.txt");
        write_trajectory(
            &[TrajectoryEntry {
                timestamp: 0.0,
                pose: Se3f64::identity(),
            }],
            TrajectoryFormat::Kitti,
            &path,
        )
        .unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let toks: Vec<f64> = text
            .split_whitespace()
            .map(|t| t.parse().unwrap())
            .collect();
        assert_eq!(
            toks,
            vec![1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0]
        );
    }

    #[test]
    fn roundtrip_both_formats() {
        let dir = tempdir().unwrap();
        let mut entries = Vec::new();
        for i in 0..25 {
            let angle = 0.13 * i as f64;
            let pose = Se3f64::new(
                so3_exp(&(Vector3::new(0.3, -0.5, 0.81).normalize() * angle)),
                Vector3::new(i as f64 * 0.71, (i as f64).sin(), -2.0 + 0.05 * i as f64),
            );
            entries.push(TrajectoryEntry {
                timestamp: i as f64 * 0.1,
                pose,
            });
        }
        for format in [TrajectoryFormat::Tum, TrajectoryFormat::Kitti] {
            let path = dir.path().join(format!("{format:?}.txt"));
            write_trajectory(&entries, format, &path).unwrap();
            let back = read_trajectory(&path).unwrap();
            assert_eq!(back.len(), entries.len());
            for (a, b) in entries.iter().zip(&back) {
                assert!((a.pose.rotation - b.pose.rotation).norm() < 1e-9);
                assert!((a.pose.translation - b.pose.translation).norm() < 1e-9);
                if format == TrajectoryFormat::Tum {
                    assert!((a.timestamp - b.timestamp).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn non_finite_pose_aborts_with_index() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("bad.txt");
        let entries = vec![
            TrajectoryEntry {
                timestamp: 0.0,
                pose: Se3f64::identity(),
            },
            TrajectoryEntry {
                timestamp: 1.0,
                pose: Se3f64::new(Matrix3::identity(), Vector3::new(f64::NAN, 0.0, 0.0)),
            },
        ];
        match write_trajectory(&entries, TrajectoryFormat::Tum, &path) {
            Err(IoError::NonFinitePose { index: 1, .. }) => {}
            other => panic!("expected non-finite pose at index 1, got {other:?}"),
        }
    }
}
