//! Virtual-camera pose sweep: a translation grid crossed with an
//! orientation sphere. The camera visits each grid crossing and takes one
//! shot per orientation.


use crate::error::{Error, Result};
use crate::geometry::{normalize_orientation, Orientation, Pose, Vec3};
use crate::pointcloud::Aabb;
use crate::scalar::Real;

pub const DEFAULT_POSE_CAP: usize = 10_000_000;
pub const DEFAULT_STEP: f64 = 1.0;
pub const DEFAULT_HEIGHT: f64 = 1.6;
pub const DEFAULT_YAW_COUNT: usize = 8;
pub const DEFAULT_PITCHES: [f64; 3] = [-10.0, 0.0, 10.0];

/// Axis-aligned grid on the x–z plane at `origin.y + height_y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T = f64> {
    pub origin: Vec3<T>,
    pub step_x: T,
    pub step_z: T,
    pub count_x: usize,
    pub count_z: usize,
    pub height_y: T,
}

impl<T: Real> GridSpec<T> {
    pub fn validate(&self) -> Result<()> {
        if !self.origin.is_finite() || !self.height_y.is_finite() {
            return Err(Error::invalid("grid origin and height must be finite"));
        }
        for (name, v) in [("step_x", self.step_x), ("step_z", self.step_z)] {
            if !(v.is_finite() && v > T::zero()) {
                return Err(Error::invalid(format!("grid {name} must be positive, got {v}")));
            }
        }
        if self.count_x < 1 || self.count_z < 1 {
            return Err(Error::invalid("grid counts must be at least 1"));
        }
        Ok(())
    }

    /// A grid centered on the x–z footprint of `bounds`, with its plane on
    /// `bounds.min.y`. Counts default to as many steps as fit the footprint.
    pub fn centered_on(
        bounds: &Aabb<T>,
        step_x: T,
        step_z: T,
        count_x: Option<usize>,
        count_z: Option<usize>,
        height_y: T,
    ) -> Result<Self> {
        let ext = bounds.extent();
        let fit = |extent: T, step: T| -> usize {
            let n = (extent / step).floor().to_usize().unwrap_or(1);
            n.max(1)
        };
        let count_x = count_x.unwrap_or_else(|| fit(ext.x, step_x));
        let count_z = count_z.unwrap_or_else(|| fit(ext.z, step_z));
        let c = bounds.center();
        let half = T::lit(0.5);
        let origin = Vec3::new(
            c.x - step_x * T::lit((count_x - 1) as f64) * half,
            bounds.min.y,
            c.z - step_z * T::lit((count_z - 1) as f64) * half,
        );
        let grid = Self {
            origin,
            step_x,
            step_z,
            count_x,
            count_z,
            height_y,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn len(&self) -> usize {
        self.count_x * self.count_z
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrientationSpec<T = f64> {
    pub yaw_count: usize,
    pub pitch_values: Vec<T>,
    pub roll: T,
}

impl<T: Real> Default for OrientationSpec<T> {
    fn default() -> Self {
        Self {
            yaw_count: DEFAULT_YAW_COUNT,
            pitch_values: DEFAULT_PITCHES.iter().map(|p| T::lit(*p)).collect(),
            roll: T::zero(),
        }
    }
}

impl<T: Real> OrientationSpec<T> {
    pub fn validate(&self) -> Result<()> {
        if self.yaw_count < 1 {
            return Err(Error::invalid("yaw_count must be at least 1"));
        }
        if self.pitch_values.is_empty() {
            return Err(Error::invalid("pitch_values must not be empty"));
        }
        let q = T::lit(90.0);
        if let Some(p) = self.pitch_values.iter().find(|p| !(**p >= -q && **p <= q)) {
            return Err(Error::invalid(format!("pitch {p} outside [-90, 90]")));
        }
        if !self.roll.is_finite() {
            return Err(Error::invalid("roll must be finite"));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.yaw_count * self.pitch_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Row-major positions: x index varies fastest.
pub fn grid_positions<T: Real>(spec: &GridSpec<T>) -> Result<Vec<Vec3<T>>> {
    spec.validate()?;
    let mut out = Vec::with_capacity(spec.len());
    for j in 0..spec.count_z {
        for i in 0..spec.count_x {
            out.push(
                spec.origin
                    + Vec3::new(
                        T::lit(i as f64) * spec.step_x,
                        spec.height_y,
                        T::lit(j as f64) * spec.step_z,
                    ),
            );
        }
    }
    Ok(out)
}

/// For each pitch, `yaw_count` headings spaced 360/yaw_count apart from 0.
pub fn orientation_sphere<T: Real>(spec: &OrientationSpec<T>) -> Result<Vec<Orientation<T>>> {
    spec.validate()?;
    let step = T::lit(360.0) / T::lit(spec.yaw_count as f64);
    let mut out = Vec::with_capacity(spec.len());
    for &pitch in &spec.pitch_values {
        for k in 0..spec.yaw_count {
            let yaw = T::lit(k as f64) * step;
            out.push(normalize_orientation(&Orientation::new(pitch, yaw, spec.roll)));
        }
    }
    Ok(out)
}

/// Grid-major Cartesian product of positions and orientations.
pub fn enumerate_poses<T: Real>(
    grid: &GridSpec<T>,
    orient: &OrientationSpec<T>,
    cap: usize,
) -> Result<Vec<Pose<T>>> {
    grid.validate()?;
    orient.validate()?;
    let requested = grid.count_x as u128 * grid.count_z as u128 * orient.len() as u128;
    if requested > cap as u128 {
        return Err(Error::Capacity { requested, cap });
    }
    let positions = grid_positions(grid)?;
    let orientations = orientation_sphere(orient)?;
    Ok(positions
        .iter()
        .flat_map(|p| {
            orientations.iter().map(move |o| Pose {
                position: *p,
                orientation: *o,
            })
        })
        .collect())
}
