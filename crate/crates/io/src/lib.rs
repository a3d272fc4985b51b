//! File interchange for the dense-indirect SLAM pipeline: Middlebury `.flo`
//! flow, PFM float maps, TUM/KITTI trajectories, binary PLY point clouds,
//! calibration files and dataset manifests.

pub mod calib;
pub mod error;
pub mod flo;
pub mod manifest;
pub mod pfm;
pub mod ply;
pub mod trajectory;

pub use calib::{read_calibration, write_calibration, Calibration};
pub use error::{IoError, Result};
pub use flo::{read_flo, write_flo};
pub use manifest::{load_manifest, FrameRecord, ManifestLayout, SequenceManifest};
pub use pfm::{read_pfm, read_pfm_depth, write_pfm, write_pfm_depth};
pub use ply::{write_pointcloud_ply, CloudKeyframe};
pub use trajectory::{read_trajectory, write_trajectory, TrajectoryEntry, TrajectoryFormat};
