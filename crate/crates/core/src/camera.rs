//! Ideal pinhole camera: intrinsics, world→camera transforms and projection.
//!
//! Zero skew and no lens distortion. The camera looks down its +Z axis with
//! +X to the right and +Y up; `(u, v)` are continuous pixel coordinates with
//! `u` growing rightwards and `v` growing upwards.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{euler_to_rotmat, Pose, Rotation, Vec3};
use crate::scalar::Real;

pub const DEFAULT_NEAR_PLANE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Intrinsics<T = f64> {
    pub fx: T,
    pub fy: T,
    pub cx: T,
    pub cy: T,
    pub width: u32,
    pub height: u32,
}

impl<T: Real> Intrinsics<T> {
    pub fn new(fx: T, fy: T, cx: T, cy: T, width: u32, height: u32) -> Result<Self> {
        let intr = Self {
            fx,
            fy,
            cx,
            cy,
            width,
            height,
        };
        intr.validate()?;
        Ok(intr)
    }

    pub fn validate(&self) -> Result<()> {
        if self.width < 1 || self.height < 1 {
            return Err(Error::invalid(format!(
                "resolution {}x{} must be at least 1x1",
                self.width, self.height
            )));
        }
        if !(self.fx.is_finite() && self.fx > T::zero() && self.fy.is_finite() && self.fy > T::zero()) {
            return Err(Error::invalid(format!(
                "focal lengths must be positive, got fx={} fy={}",
                self.fx, self.fy
            )));
        }
        let w = T::lit(f64::from(self.width));
        let h = T::lit(f64::from(self.height));
        if !(self.cx >= T::zero() && self.cx < w && self.cy >= T::zero() && self.cy < h) {
            return Err(Error::invalid(format!(
                "principal point ({}, {}) outside {}x{}",
                self.cx, self.cy, self.width, self.height
            )));
        }
        Ok(())
    }

    /// Square-pixel intrinsics from a vertical field of view.
    pub fn from_fov(fov_deg: T, width: u32, height: u32) -> Result<Self> {
        if !(fov_deg > T::zero() && fov_deg < T::lit(180.0)) {
            return Err(Error::invalid(format!("field of view {fov_deg} outside (0, 180)")));
        }
        if width < 1 || height < 1 {
            return Err(Error::invalid(format!("resolution {width}x{height} must be at least 1x1")));
        }
        let two = T::lit(2.0);
        let half_h = T::lit(f64::from(height)) / two;
        let fy = half_h / (fov_deg / two).to_radians().tan();
        Self::new(fy, fy, T::lit(f64::from(width)) / two, half_h, width, height)
    }

    /// Rescales to a new sensor resolution.
    pub fn scaled(&self, new_w: u32, new_h: u32) -> Result<Self> {
        if new_w < 1 || new_h < 1 {
            return Err(Error::invalid(format!("resolution {new_w}x{new_h} must be at least 1x1")));
        }
        let sx = T::lit(f64::from(new_w)) / T::lit(f64::from(self.width));
        let sy = T::lit(f64::from(new_h)) / T::lit(f64::from(self.height));
        Ok(Self {
            fx: self.fx * sx,
            fy: self.fy * sy,
            cx: self.cx * sx,
            cy: self.cy * sy,
            width: new_w,
            height: new_h,
        })
    }

    pub fn cast<U: Real>(&self) -> Intrinsics<U> {
        Intrinsics {
            fx: U::lit(self.fx.as_f64()),
            fy: U::lit(self.fy.as_f64()),
            cx: U::lit(self.cx.as_f64()),
            cy: U::lit(self.cy.as_f64()),
            width: self.width,
            height: self.height,
        }
    }
}

pub fn intrinsics_from_fov<T: Real>(fov_deg: T, width: u32, height: u32) -> Result<Intrinsics<T>> {
    Intrinsics::from_fov(fov_deg, width, height)
}

pub fn scale_intrinsics<T: Real>(intr: &Intrinsics<T>, new_w: u32, new_h: u32) -> Result<Intrinsics<T>> {
    intr.scaled(new_w, new_h)
}

/// Rigid world→camera transform, `x_cam = rotation · x_world + translation`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViewTransform<T = f64> {
    rotation: Rotation<T>,
    translation: Vec3<T>,
}

impl<T: Real> ViewTransform<T> {
    /// The camera sits at `pose.position` with orientation `R`, so world
    /// points map to `Rᵀ(x − t)`.
    pub fn from_pose(pose: &Pose<T>) -> Result<Self> {
        if !pose.position.is_finite() {
            return Err(Error::invalid(format!("non-finite camera position {:?}", pose.position)));
        }
        let r = euler_to_rotmat(&pose.orientation)?;
        let rotation = r.transpose();
        let translation = -rotation.apply(pose.position);
        Ok(Self {
            rotation,
            translation,
        })
    }

    #[inline]
    pub fn to_camera(&self, world: Vec3<T>) -> Vec3<T> {
        self.rotation.apply(world) + self.translation
    }

    #[inline]
    pub fn to_world(&self, cam: Vec3<T>) -> Vec3<T> {
        self.rotation.apply_inverse(cam - self.translation)
    }

    pub fn rotation(&self) -> &Rotation<T> {
        &self.rotation
    }

    pub fn translation(&self) -> Vec3<T> {
        self.translation
    }

    /// Homogeneous 4×4 form, last row `(0, 0, 0, 1)`.
    pub fn to_homogeneous(&self) -> [[T; 4]; 4] {
        let r = &self.rotation.matrix().rows;
        let t = self.translation.to_array();
        let (z, o) = (T::zero(), T::one());
        [
            [r[0][0], r[0][1], r[0][2], t[0]],
            [r[1][0], r[1][1], r[1][2], t[1]],
            [r[2][0], r[2][1], r[2][2], t[2]],
            [z, z, z, o],
        ]
    }
}

pub fn pose_to_view<T: Real>(pose: &Pose<T>) -> Result<ViewTransform<T>> {
    ViewTransform::from_pose(pose)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection<T = f64> {
    pub u: T,
    pub v: T,
    pub depth: T,
}

/// Projects with the default 0.01 m near plane.
pub fn project<T: Real>(intr: &Intrinsics<T>, view: &ViewTransform<T>, p: Vec3<T>) -> Option<Projection<T>> {
    project_with_near(intr, view, p, T::lit(DEFAULT_NEAR_PLANE))
}

/// `None` when the point is at or in front of the near plane, or lands
/// outside `[0, width) × [0, height)`.
#[inline]
pub fn project_with_near<T: Real>(
    intr: &Intrinsics<T>,
    view: &ViewTransform<T>,
    p: Vec3<T>,
    near: T,
) -> Option<Projection<T>> {
    let c = view.to_camera(p);
    if !(c.z > near) {
        return None;
    }
    let u = intr.fx * c.x / c.z + intr.cx;
    let v = intr.fy * c.y / c.z + intr.cy;
    let inside = u >= T::zero()
        && u < T::lit(f64::from(intr.width))
        && v >= T::zero()
        && v < T::lit(f64::from(intr.height));
    inside.then_some(Projection { u, v, depth: c.z })
}

/// Camera-frame direction through pixel coordinates `(u, v)`, with unit depth.
#[inline]
pub fn pixel_ray<T: Real>(intr: &Intrinsics<T>, u: T, v: T) -> Vec3<T> {
    Vec3::new((u - intr.cx) / intr.fx, (v - intr.cy) / intr.fy, T::one())
}

/// Inverse of [`project`]: the world point at `depth` along pixel `(u, v)`.
pub fn unproject<T: Real>(intr: &Intrinsics<T>, view: &ViewTransform<T>, p: &Projection<T>) -> Vec3<T> {
    view.to_world(pixel_ray(intr, p.u, p.v) * p.depth)
}
