//! Euler-angle orientations and rotation matrices.
//!
//! Project-wide convention: a right-handed, Y-up frame with the orientation
//! applied as intrinsic yaw (about Y), then pitch (about X), then roll (about
//! Z), i.e. `R = R_Y(yaw) · R_X(pitch) · R_Z(roll)`. Angles are in degrees.

use serde::{Deserialize, Serialize};

use super::linalg::{Mat3, Vec3};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Pitch, yaw and roll in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Orientation<T = f64> {
    pub pitch: T,
    pub yaw: T,
    pub roll: T,
}

impl<T: Real> Orientation<T> {
    pub const fn new(pitch: T, yaw: T, roll: T) -> Self {
        Self { pitch, yaw, roll }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn is_finite(&self) -> bool {
        self.pitch.is_finite() && self.yaw.is_finite() && self.roll.is_finite()
    }

    /// True when pitch ∈ [-90, 90] and yaw, roll ∈ (-180, 180].
    pub fn is_normalized(&self) -> bool {
        let (q, h) = (T::lit(90.0), T::lit(180.0));
        self.is_finite()
            && self.pitch >= -q
            && self.pitch <= q
            && self.yaw > -h
            && self.yaw <= h
            && self.roll > -h
            && self.roll <= h
    }

    pub fn to_array(self) -> [T; 3] {
        [self.pitch, self.yaw, self.roll]
    }

    pub fn cast<U: Real>(self) -> Orientation<U> {
        Orientation::new(
            U::lit(self.pitch.as_f64()),
            U::lit(self.yaw.as_f64()),
            U::lit(self.roll.as_f64()),
        )
    }
}

/// A proper orthonormal 3×3 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation<T = f64>(Mat3<T>);

impl<T: Real> Rotation<T> {
    pub fn identity() -> Self {
        Self(Mat3::identity())
    }

    /// Tolerance used for the orthonormality and determinant checks.
    pub fn tolerance() -> T {
        T::lit(1e-9).max(T::epsilon() * T::lit(32.0))
    }

    /// Wraps `m` after checking `mᵀm = I` and `det m = +1` within
    /// [`Rotation::tolerance`].
    pub fn from_matrix(m: Mat3<T>) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::invalid("rotation matrix has non-finite entries"));
        }
        let tol = Self::tolerance();
        let ortho = (m.transpose() * m).max_abs_diff(&Mat3::identity());
        if ortho > tol {
            return Err(Error::invalid(format!(
                "matrix is not orthonormal (max |RᵀR - I| = {ortho})"
            )));
        }
        let det = m.determinant();
        if (det - T::one()).abs() > tol {
            return Err(Error::invalid(format!("rotation determinant is {det}, expected +1")));
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &Mat3<T> {
        &self.0
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    #[inline]
    pub fn apply(&self, v: Vec3<T>) -> Vec3<T> {
        self.0 * v
    }

    /// Applies the inverse rotation (`Rᵀ v`).
    #[inline]
    pub fn apply_inverse(&self, v: Vec3<T>) -> Vec3<T> {
        let r = &self.0.rows;
        Vec3::new(
            r[0][0] * v.x + r[1][0] * v.y + r[2][0] * v.z,
            r[0][1] * v.x + r[1][1] * v.y + r[2][1] * v.z,
            r[0][2] * v.x + r[1][2] * v.y + r[2][2] * v.z,
        )
    }

    pub fn compose(&self, o: &Self) -> Self {
        Self(self.0 * o.0)
    }
}

/// `(sin, cos)` of an angle in degrees, exact at multiples of 90°.
pub fn sin_cos_deg<T: Real>(deg: T) -> (T, T) {
    let r = deg % T::lit(360.0);
    let (z, o) = (T::zero(), T::one());
    if r == z {
        (z, o)
    } else if r == T::lit(90.0) || r == T::lit(-270.0) {
        (o, z)
    } else if r == T::lit(180.0) || r == T::lit(-180.0) {
        (z, -o)
    } else if r == T::lit(270.0) || r == T::lit(-90.0) {
        (-o, z)
    } else {
        r.to_radians().sin_cos()
    }
}

/// Wraps an angle in degrees into (-180, 180].
pub fn wrap_degrees<T: Real>(a: T) -> T {
    let full = T::lit(360.0);
    let half = T::lit(180.0);
    let r = a % full;
    if r > half {
        r - full
    } else if r <= -half {
        r + full
    } else {
        r
    }
}

/// Builds `R_Y(yaw) · R_X(pitch) · R_Z(roll)`.
pub fn euler_to_rotmat<T: Real>(o: &Orientation<T>) -> Result<Rotation<T>> {
    if !o.is_finite() {
        return Err(Error::invalid(format!("non-finite orientation {o:?}")));
    }
    let (sp, cp) = sin_cos_deg(o.pitch);
    let (sy, cy) = sin_cos_deg(o.yaw);
    let (sr, cr) = sin_cos_deg(o.roll);
    Ok(Rotation(Mat3::from_rows([
        [cy * cr + sy * sp * sr, sy * sp * cr - cy * sr, sy * cp],
        [cp * sr, cp * cr, -sp],
        [cy * sp * sr - sy * cr, sy * sr + cy * sp * cr, cy * cp],
    ])))
}

/// Result of decomposing a rotation into Euler angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerDecomposition<T = f64> {
    pub orientation: Orientation<T>,
    /// Pitch sits at ±90°; yaw and roll are coupled and roll was pinned to 0.
    pub gimbal_locked: bool,
}

/// Inverse of [`euler_to_rotmat`]; pitch lands in [-90, 90].
pub fn rotmat_to_euler<T: Real>(r: &Rotation<T>) -> EulerDecomposition<T> {
    let m = r.matrix();
    let cp = m[(0, 2)].hypot(m[(2, 2)]);
    let gimbal_tol = Rotation::<T>::tolerance();
    if cp <= gimbal_tol {
        let positive = m[(1, 2)] <= T::zero();
        let (pitch, sp) = if positive {
            (T::lit(90.0), T::one())
        } else {
            (T::lit(-90.0), -T::one())
        };
        let yaw = (sp * m[(0, 1)]).atan2(m[(0, 0)]).to_degrees();
        return EulerDecomposition {
            orientation: Orientation::new(pitch, wrap_degrees(yaw), T::zero()),
            gimbal_locked: true,
        };
    }
    let pitch = (-m[(1, 2)]).atan2(cp).to_degrees();
    let yaw = m[(0, 2)].atan2(m[(2, 2)]).to_degrees();
    let roll = m[(1, 0)].atan2(m[(1, 1)]).to_degrees();
    EulerDecomposition {
        orientation: Orientation::new(pitch, wrap_degrees(yaw), wrap_degrees(roll)),
        gimbal_locked: false,
    }
}

/// Maps any finite orientation to the equivalent one with pitch in
/// [-90, 90] and yaw, roll in (-180, 180].
pub fn normalize_orientation<T: Real>(o: &Orientation<T>) -> Orientation<T> {
    let (q, h) = (T::lit(90.0), T::lit(180.0));
    let mut pitch = wrap_degrees(o.pitch);
    let mut yaw = o.yaw;
    let mut roll = o.roll;
    // R_Y(y+180) R_X(180-p) R_Z(r+180) == R_Y(y) R_X(p) R_Z(r)
    if pitch > q {
        pitch = h - pitch;
        yaw = yaw + h;
        roll = roll + h;
    } else if pitch < -q {
        pitch = -h - pitch;
        yaw = yaw + h;
        roll = roll + h;
    }
    Orientation::new(pitch, wrap_degrees(yaw), wrap_degrees(roll))
}

/// Minimal rotation angle between two orientations, in degrees within [0, 180].
///
/// Evaluates `acos((tr(R_aᵀ R_b) - 1) / 2)` through the equivalent
/// `atan2(sin θ, cos θ)` form, which stays accurate near 0° and 180°.
pub fn geodesic_angle<T: Real>(a: &Orientation<T>, b: &Orientation<T>) -> Result<T> {
    let ra = euler_to_rotmat(a)?;
    let rb = euler_to_rotmat(b)?;
    Ok(rotation_angle(&ra.transpose().compose(&rb)))
}

/// Rotation angle of a single rotation, degrees.
pub fn rotation_angle<T: Real>(r: &Rotation<T>) -> T {
    let m = r.matrix();
    let two = T::lit(2.0);
    let cos = ((m.trace() - T::one()) / two).max(-T::one()).min(T::one());
    let axis = Vec3::new(
        m[(2, 1)] - m[(1, 2)],
        m[(0, 2)] - m[(2, 0)],
        m[(1, 0)] - m[(0, 1)],
    );
    let sin = axis.norm() / two;
    sin.atan2(cos).to_degrees()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rx(a: f64) -> Mat3 {
        let (s, c) = a.to_radians().sin_cos();
        Mat3::from_rows([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])
    }
    fn ry(a: f64) -> Mat3 {
        let (s, c) = a.to_radians().sin_cos();
        Mat3::from_rows([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])
    }
    fn rz(a: f64) -> Mat3 {
        let (s, c) = a.to_radians().sin_cos();
        Mat3::from_rows([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    }

    fn o(p: f64, y: f64, r: f64) -> Orientation {
        Orientation::new(p, y, r)
    }

    #[test]
    fn zero_angles_give_identity() {
        let r = euler_to_rotmat(&o(0.0, 0.0, 0.0)).unwrap();
        assert_eq!(*r.matrix(), Mat3::identity());
    }

    #[test]
    fn yaw_90_maps_z_to_x() {
        let r = euler_to_rotmat(&o(0.0, 90.0, 0.0)).unwrap();
        let v = r.apply(Vec3::new(0.0, 0.0, 1.0));
        assert!((v - Vec3::new(1.0, 0.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn matches_elementary_product() {
        let r = euler_to_rotmat(&o(30.0, 40.0, 50.0)).unwrap();
        let brute = ry(40.0) * rx(30.0) * rz(50.0);
        assert!(r.matrix().max_abs_diff(&brute) < 1e-15);
    }

    #[test]
    fn non_finite_rejected() {
        assert!(euler_to_rotmat(&o(f64::NAN, 0.0, 0.0)).is_err());
        assert!(euler_to_rotmat(&o(0.0, f64::INFINITY, 0.0)).is_err());
    }

    #[test]
    fn decompose_identity() {
        let d = rotmat_to_euler(&Rotation::<f64>::identity());
        assert_eq!(d.orientation, o(0.0, 0.0, 0.0));
        assert!(!d.gimbal_locked);
    }

    #[test]
    fn decompose_round_trip() {
        let d = rotmat_to_euler(&euler_to_rotmat(&o(10.0, 20.0, 30.0)).unwrap());
        let got = d.orientation;
        assert!((got.pitch - 10.0).abs() < 1e-12);
        assert!((got.yaw - 20.0).abs() < 1e-12);
        assert!((got.roll - 30.0).abs() < 1e-12);
    }

    #[test]
    fn gimbal_lock_pins_roll() {
        let r = euler_to_rotmat(&o(-90.0, 55.0, 0.0)).unwrap();
        let d = rotmat_to_euler(&r);
        assert!(d.gimbal_locked);
        assert_eq!(d.orientation.pitch, -90.0);
        assert_eq!(d.orientation.roll, 0.0);
        assert!((d.orientation.yaw - 55.0).abs() < 1e-12);
        let back = euler_to_rotmat(&d.orientation).unwrap();
        assert!(back.matrix().max_abs_diff(r.matrix()) < 1e-9);

        // yaw and roll collapse into one angle at pitch -90: yaw + roll.
        let r = euler_to_rotmat(&o(-90.0, 20.0, 15.0)).unwrap();
        let d = rotmat_to_euler(&r);
        assert!(d.gimbal_locked);
        assert!((d.orientation.yaw - 35.0).abs() < 1e-12);
        let back = euler_to_rotmat(&d.orientation).unwrap();
        assert!(back.matrix().max_abs_diff(r.matrix()) < 1e-9);

        // and yaw - roll at +90.
        let r = euler_to_rotmat(&o(90.0, 20.0, 15.0)).unwrap();
        let d = rotmat_to_euler(&r);
        assert!(d.gimbal_locked);
        assert_eq!(d.orientation.pitch, 90.0);
        assert!((d.orientation.yaw - 5.0).abs() < 1e-12);
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_orientation(&o(0.0, 360.0, 0.0)), o(0.0, 0.0, 0.0));
        assert_eq!(normalize_orientation(&o(0.0, 190.0, 0.0)), o(0.0, -170.0, 0.0));
        assert_eq!(normalize_orientation(&o(0.0, -180.0, 0.0)), o(0.0, 180.0, 0.0));

        let src = o(100.0, 0.0, 0.0);
        let n = normalize_orientation(&src);
        assert!(n.is_normalized());
        let a = euler_to_rotmat(&src).unwrap();
        let b = euler_to_rotmat(&n).unwrap();
        assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-9);
    }

    #[test]
    fn wrap_seam() {
        assert_eq!(wrap_degrees(358.0), -2.0);
        assert_eq!(wrap_degrees(180.0), 180.0);
        assert_eq!(wrap_degrees(-180.0), 180.0);
        assert_eq!(wrap_degrees(-540.0), 180.0);
        assert_eq!(wrap_degrees(725.0), 5.0);
    }

    #[test]
    fn geodesic_examples() {
        let a = o(10.0, 20.0, 30.0);
        assert!(geodesic_angle(&a, &a).unwrap() < 1e-12);
        let g = geodesic_angle(&o(0.0, 0.0, 0.0), &o(0.0, 90.0, 0.0)).unwrap();
        assert!((g - 90.0).abs() < 1e-12);
        let g = geodesic_angle(&o(0.0, 0.0, 0.0), &o(0.0, 180.0, 0.0)).unwrap();
        assert!((g - 180.0).abs() < 1e-12);
    }

    #[test]
    fn from_matrix_checks_properness() {
        let mirror = Mat3::from_rows([[-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        assert!(Rotation::from_matrix(mirror).is_err());
        let skew = Mat3::from_rows([[1.0, 0.1, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        assert!(Rotation::from_matrix(skew).is_err());
        assert!(Rotation::from_matrix(ry(33.0) * rx(-12.0)).is_ok());
    }

    #[test]
    fn single_precision_round_trip() {
        let src = Orientation::<f32>::new(12.5, -130.0, 44.0);
        let d = rotmat_to_euler(&euler_to_rotmat(&src).unwrap());
        assert!((d.orientation.pitch - 12.5).abs() < 1e-3);
        assert!((d.orientation.yaw + 130.0).abs() < 1e-3);
        assert!((d.orientation.roll - 44.0).abs() < 1e-3);
    }
}
