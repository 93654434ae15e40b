//! Pose representation, rotation conversions, pose distances and the
//! weighted pose loss.
//!
//! Everything here is a pure function over immutable values.

mod linalg;
mod pose;
mod rotation;

pub use linalg::{Mat3, Vec3};
pub use pose::{pose_difference, pose_loss, position_error, LossWeights, Pose};
pub use rotation::{
    euler_to_rotmat, geodesic_angle, normalize_orientation, rotation_angle, rotmat_to_euler,
    sin_cos_deg, wrap_degrees, EulerDecomposition, Orientation, Rotation,
};
