//! Seeded synthetic "room" scenes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::PointCloud;
use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::scalar::Real;

/// An axis-aligned box room: floor at y = 0, centered on x = z = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoomSpec {
    /// Extent along x, meters.
    pub width: f64,
    /// Extent along y (floor to ceiling), meters.
    pub height: f64,
    /// Extent along z, meters.
    pub depth: f64,
    pub points: usize,
}

impl RoomSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("width", self.width), ("height", self.height), ("depth", self.depth)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("room {name} must be positive, got {v}")));
            }
        }
        if self.points < 1 {
            return Err(Error::invalid("room point count must be at least 1"));
        }
        Ok(())
    }
}

const FACE_COLORS: [[f64; 3]; 6] = [
    [150.0, 120.0, 90.0],  // floor
    [235.0, 235.0, 225.0], // ceiling
    [200.0, 60.0, 50.0],   // x = -w/2
    [60.0, 170.0, 80.0],   // x = +w/2
    [60.0, 90.0, 200.0],   // z = -d/2
    [220.0, 190.0, 60.0],  // z = +d/2
];

/// Texture cell edge, meters.
const CELL: f64 = 2.0;
const JITTER: f64 = 10.0;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-cell brightness in [0.45, 1.0], stable for a (seed, face, cell).
fn cell_shade(seed: u64, face: usize, a: f64, b: f64) -> f64 {
    let ia = (a / CELL).floor() as i64 as u64;
    let ib = (b / CELL).floor() as i64 as u64;
    let h = splitmix64(seed ^ splitmix64(face as u64 ^ splitmix64(ia ^ splitmix64(ib))));
    0.45 + 0.55 * ((h >> 11) as f64 / (1u64 << 53) as f64)
}

/// Deterministic colored points on the six interior faces of a box room.
///
/// Faces are sampled in proportion to their area. Each face has a base
/// color modulated by a seeded 2 m checker of brightness levels plus small
/// per-point jitter, so views differ with both heading and position.
pub fn procedural_cloud<T: Real>(seed: u64, spec: &RoomSpec) -> Result<PointCloud<T>> {
    spec.validate()?;
    let (w, h, d) = (spec.width, spec.height, spec.depth);
    let (hw, hd) = (w / 2.0, d / 2.0);
    let areas = [w * d, w * d, h * d, h * d, w * h, w * h];
    let total: f64 = areas.iter().sum();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cloud = PointCloud::with_capacity(spec.points);
    for _ in 0..spec.points {
        let mut pick = rng.random::<f64>() * total;
        let mut face = 5;
        for (i, a) in areas.iter().enumerate() {
            if pick < *a {
                face = i;
                break;
            }
            pick -= a;
        }
        let s: f64 = rng.random();
        let t: f64 = rng.random();
        // (a, b) are the in-face texture coordinates.
        let (pos, a, b) = match face {
            0 => {
                let (x, z) = (-hw + s * w, -hd + t * d);
                ([x, 0.0, z], x + hw, z + hd)
            }
            1 => {
                let (x, z) = (-hw + s * w, -hd + t * d);
                ([x, h, z], x + hw, z + hd)
            }
            2 | 3 => {
                let (y, z) = (s * h, -hd + t * d);
                let x = if face == 2 { -hw } else { hw };
                ([x, y, z], z + hd, y)
            }
            _ => {
                let (x, y) = (-hw + s * w, t * h);
                let z = if face == 4 { -hd } else { hd };
                ([x, y, z], x + hw, y)
            }
        };
        let shade = cell_shade(seed, face, a, b);
        let base = FACE_COLORS[face];
        let mut color = [0u8; 3];
        for k in 0..3 {
            let j = rng.random_range(-JITTER..=JITTER);
            color[k] = (base[k] * shade + j).round().clamp(0.0, 255.0) as u8;
        }
        cloud.push(Vec3::new(T::lit(pos[0]), T::lit(pos[1]), T::lit(pos[2])), color);
    }
    Ok(cloud)
}
