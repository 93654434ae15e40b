//! Colored point clouds: the scene substrate for rendering.

mod ply;
mod procedural;

pub use ply::{encode_ply, load_ply, read_ply, write_ply, PlyEncoding, PlyRead};
pub use procedural::{procedural_cloud, RoomSpec};

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::scalar::Real;

pub const DEFAULT_COLOR: [u8; 3] = [128, 128, 128];

/// Points with RGB colors, stored as parallel arrays.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointCloud<T = f64> {
    positions: Vec<Vec3<T>>,
    colors: Vec<[u8; 3]>,
}

impl<T: Real> PointCloud<T> {
    pub fn new() -> Self {
        Self {
            positions: Vec::new(),
            colors: Vec::new(),
        }
    }

    pub fn with_capacity(n: usize) -> Self {
        Self {
            positions: Vec::with_capacity(n),
            colors: Vec::with_capacity(n),
        }
    }

    pub fn from_parts(positions: Vec<Vec3<T>>, colors: Vec<[u8; 3]>) -> Result<Self> {
        if positions.len() != colors.len() {
            return Err(Error::invalid(format!(
                "{} positions but {} colors",
                positions.len(),
                colors.len()
            )));
        }
        if let Some(i) = positions.iter().position(|p| !p.is_finite()) {
            return Err(Error::invalid(format!("point {i} has non-finite coordinates")));
        }
        Ok(Self { positions, colors })
    }

    /// Panics on non-finite coordinates.
    pub fn push(&mut self, position: Vec3<T>, color: [u8; 3]) {
        assert!(position.is_finite(), "non-finite point {position:?}");
        self.positions.push(position);
        self.colors.push(color);
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[Vec3<T>] {
        &self.positions
    }

    pub fn colors(&self) -> &[[u8; 3]] {
        &self.colors
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec3<T>, &[u8; 3])> {
        self.positions.iter().zip(&self.colors)
    }

    pub fn bounding_box(&self) -> Result<Aabb<T>> {
        bounding_box(self)
    }

    pub fn cast<U: Real>(&self) -> PointCloud<U> {
        PointCloud {
            positions: self.positions.iter().map(|p| p.cast()).collect(),
            colors: self.colors.clone(),
        }
    }
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb<T = f64> {
    pub min: Vec3<T>,
    pub max: Vec3<T>,
}

impl<T: Real> Aabb<T> {
    pub fn center(&self) -> Vec3<T> {
        (self.min + self.max) * T::lit(0.5)
    }

    pub fn extent(&self) -> Vec3<T> {
        self.max - self.min
    }

    pub fn contains(&self, p: &Vec3<T>) -> bool {
        p.x >= self.min.x
            && p.y >= self.min.y
            && p.z >= self.min.z
            && p.x <= self.max.x
            && p.y <= self.max.y
            && p.z <= self.max.z
    }
}

/// Tight component-wise bounds of a nonempty cloud.
pub fn bounding_box<T: Real>(cloud: &PointCloud<T>) -> Result<Aabb<T>> {
    let (first, rest) = cloud
        .positions
        .split_first()
        .ok_or_else(|| Error::invalid("bounding box of an empty point cloud"))?;
    let (min, max) = rest
        .iter()
        .fold((*first, *first), |(lo, hi), p| (lo.component_min(p), hi.component_max(p)));
    Ok(Aabb { min, max })
}
