use serde::{Deserialize, Serialize};

use super::linalg::Vec3;
use super::rotation::{normalize_orientation, wrap_degrees, Orientation};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// A 6-DOF camera pose: position in meters, orientation in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Pose<T = f64> {
    pub position: Vec3<T>,
    pub orientation: Orientation<T>,
}

impl<T: Real> Pose<T> {
    /// Builds a pose with a normalized orientation.
    pub fn new(position: Vec3<T>, orientation: Orientation<T>) -> Result<Self> {
        let pose = Self {
            position,
            orientation,
        };
        if !pose.is_finite() {
            return Err(Error::invalid(format!("non-finite pose {pose:?}")));
        }
        Ok(Self {
            position,
            orientation: normalize_orientation(&orientation),
        })
    }

    pub fn identity() -> Self {
        Self {
            position: Vec3::zeros(),
            orientation: Orientation::zero(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.position.is_finite() && self.orientation.is_finite()
    }

    /// `[x, y, z, pitch, yaw, roll]`.
    pub fn to_array(&self) -> [T; 6] {
        let p = self.position;
        let o = self.orientation;
        [p.x, p.y, p.z, o.pitch, o.yaw, o.roll]
    }

    pub fn from_array(a: [T; 6]) -> Self {
        Self {
            position: Vec3::new(a[0], a[1], a[2]),
            orientation: Orientation::new(a[3], a[4], a[5]),
        }
    }

    pub fn cast<U: Real>(&self) -> Pose<U> {
        Pose {
            position: self.position.cast(),
            orientation: self.orientation.cast(),
        }
    }
}

/// Per-component weights for [`pose_loss`], ordered like [`Pose::to_array`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossWeights<T = f64>([T; 6]);

impl<T: Real> LossWeights<T> {
    pub fn new(w: [T; 6]) -> Result<Self> {
        if let Some(bad) = w.iter().find(|v| !(v.is_finite() && **v >= T::zero())) {
            return Err(Error::invalid(format!(
                "loss weights must be finite and non-negative, got {bad}"
            )));
        }
        Ok(Self(w))
    }

    /// Weight `pos` on the three position components and `ori` on the angles.
    pub fn split(pos: T, ori: T) -> Result<Self> {
        Self::new([pos, pos, pos, ori, ori, ori])
    }

    pub fn as_array(&self) -> &[T; 6] {
        &self.0
    }
}

impl<T: Real> Default for LossWeights<T> {
    fn default() -> Self {
        Self([T::one(); 6])
    }
}

/// Component-wise difference `pred - gt` with the angle terms wrapped into
/// (-180, 180].
pub fn pose_difference<T: Real>(pred: &Pose<T>, gt: &Pose<T>) -> [T; 6] {
    let a = pred.to_array();
    let b = gt.to_array();
    let mut d = [T::zero(); 6];
    for i in 0..6 {
        d[i] = a[i] - b[i];
        if i >= 3 {
            d[i] = wrap_degrees(d[i]);
        }
    }
    d
}

/// Weighted Euclidean pose loss `‖w ⊙ (pred − gt)‖₂`.
///
/// One meter of position error counts the same as one degree of
/// orientation error at unit weights.
pub fn pose_loss<T: Real>(pred: &Pose<T>, gt: &Pose<T>, w: &LossWeights<T>) -> T {
    pose_difference(pred, gt)
        .iter()
        .zip(w.as_array())
        .map(|(d, w)| {
            let v = *d * *w;
            v * v
        })
        .sum::<T>()
        .sqrt()
}

/// Euclidean distance between the two positions, meters.
pub fn position_error<T: Real>(a: &Pose<T>, b: &Pose<T>) -> T {
    (a.position - b.position).norm()
}
