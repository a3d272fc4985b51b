//! Core geometry and residual models for dense-indirect SLAM.
//!
//! Everything here is generic over the floating-point scalar (see
//! [`Scalar`]); the `*64`/`*32` aliases below pick concrete precisions.
//!
//! Conventions: right-handed camera frame, Z forward, X right, Y down;
//! pixel origin top-left with centers on integer coordinates; flow stored as
//! `(dx, dy)`; depth is the Z-component of the camera-space point (not ray
//! length), so inverse depth is `1/z`.

pub mod camera;
pub mod error;
pub mod fisk;
pub mod grid;
pub mod maps;
pub mod mixture;
pub mod robust;
pub mod scalar;
pub mod se3;
pub mod sim3;
pub mod transfer;

pub use camera::CameraIntrinsics;
pub use error::CoreError;
pub use fisk::FiskModel;
pub use grid::Grid;
pub use maps::{ConfidenceMap, DepthMap, FlowField, NormalMap, RigidnessMap};
pub use mixture::{
    depth_prior_likelihood, geom_prior_energy, rigidness_responsibility, GaussianUniformMixture,
    PriorResidualModel, PriorView,
};
pub use robust::CauchyKernel;
pub use scalar::Scalar;
pub use se3::Se3;
pub use sim3::{Matrix7, Sim3, Vector7};
pub use transfer::{
    normal_map, pixel_to_point, point_to_pixel, reproject, rigid_flow, transfer_point,
    Reprojection,
};

/// Double-precision aliases used by the pipeline crates.
pub type Se3f64 = Se3<f64>;
pub type Sim3f64 = Sim3<f64>;
pub type CameraIntrinsicsF64 = CameraIntrinsics<f64>;
pub type DepthMapF64 = DepthMap<f64>;
pub type FlowFieldF64 = FlowField<f64>;
pub type NormalMapF64 = NormalMap<f64>;
pub type RigidnessMapF64 = RigidnessMap<f64>;
pub type ConfidenceMapF64 = ConfidenceMap<f64>;
pub type FiskModelF64 = FiskModel<f64>;

/// Single-precision aliases for memory-bound storage.
pub type Se3f32 = Se3<f32>;
pub type Sim3f32 = Sim3<f32>;
pub type CameraIntrinsicsF32 = CameraIntrinsics<f32>;
pub type DepthMapF32 = DepthMap<f32>;
pub type FlowFieldF32 = FlowField<f32>;
