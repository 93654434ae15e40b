//! Pose-labeled image synthesis from dense point clouds, and evaluation of
//! 6-DOF camera relocalization.
//!
//! A point cloud is swept by a grid of camera poses; each pose is rendered
//! with a splat rasterizer over an analytic sky box and written with its
//! label into CSV manifests split into train and held-out test sets. The
//! [`eval`] module scores predictions written in the same format.
//!
//! Geometry, camera, point cloud, sampler and renderer code is generic over
//! the scalar type ([`Real`], implemented for `f32` and `f64`). Dataset,
//! evaluation and the CLI work in `f64`.

pub mod camera;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod geometry;
pub mod pointcloud;
pub mod renderer;
pub mod sampler;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Vec3F32 = geometry::Vec3<f32>;
pub type Vec3F64 = geometry::Vec3<f64>;
pub type Mat3F32 = geometry::Mat3<f32>;
pub type Mat3F64 = geometry::Mat3<f64>;
pub type OrientationF32 = geometry::Orientation<f32>;
pub type OrientationF64 = geometry::Orientation<f64>;
pub type RotationF32 = geometry::Rotation<f32>;
pub type RotationF64 = geometry::Rotation<f64>;
pub type PoseF32 = geometry::Pose<f32>;
pub type PoseF64 = geometry::Pose<f64>;
pub type IntrinsicsF32 = camera::Intrinsics<f32>;
pub type IntrinsicsF64 = camera::Intrinsics<f64>;
pub type PointCloudF32 = pointcloud::PointCloud<f32>;
pub type PointCloudF64 = pointcloud::PointCloud<f64>;
pub type GridSpecF32 = sampler::GridSpec<f32>;
pub type GridSpecF64 = sampler::GridSpec<f64>;
pub type RenderOptionsF32 = renderer::RenderOptions<f32>;
pub type RenderOptionsF64 = renderer::RenderOptions<f64>;
