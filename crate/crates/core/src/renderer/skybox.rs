use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::image::Image;
use crate::camera::{pixel_ray, Intrinsics};
use crate::error::{Error, Result};
use crate::geometry::{euler_to_rotmat, Pose};
use crate::scalar::Real;

/// Analytic background: a vertical horizon→zenith gradient above the
/// horizon and a flat ground color below it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SkyboxPreset {
    None,
    #[default]
    Noon,
    Dusk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SkyColors {
    pub horizon: [u8; 3],
    pub zenith: [u8; 3],
    pub ground: [u8; 3],
}

impl SkyboxPreset {
    pub fn colors(self) -> SkyColors {
        match self {
            SkyboxPreset::None => SkyColors {
                horizon: [0, 0, 0],
                zenith: [0, 0, 0],
                ground: [0, 0, 0],
            },
            SkyboxPreset::Noon => SkyColors {
                horizon: [190, 215, 240],
                zenith: [70, 130, 220],
                ground: [110, 100, 85],
            },
            SkyboxPreset::Dusk => SkyColors {
                horizon: [250, 150, 90],
                zenith: [40, 40, 100],
                ground: [50, 40, 40],
            },
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            SkyboxPreset::None => "none",
            SkyboxPreset::Noon => "noon",
            SkyboxPreset::Dusk => "dusk",
        }
    }
}

impl fmt::Display for SkyboxPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for SkyboxPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(SkyboxPreset::None),
            "noon" => Ok(SkyboxPreset::Noon),
            "dusk" => Ok(SkyboxPreset::Dusk),
            other => Err(Error::config(
                "render.skybox",
                format!("unknown sky-box preset '{other}' (expected none, noon or dusk)"),
            )),
        }
    }
}

/// Color for a ray whose normalized world-up component is `up`.
pub fn sky_color<T: Real>(colors: &SkyColors, up: T) -> [u8; 3] {
    if up <= T::zero() {
        return colors.ground;
    }
    let t = up.min(T::one());
    let mut c = [0u8; 3];
    for k in 0..3 {
        let h = T::lit(f64::from(colors.horizon[k]));
        let z = T::lit(f64::from(colors.zenith[k]));
        let v = (h + (z - h) * t).round();
        c[k] = v.to_u8().unwrap_or(if v < T::zero() { 0 } else { 255 });
    }
    c
}

/// Renders the background seen from `pose`.
///
/// Pixel `(col, row)` samples the ray through `u = col + 0.5`,
/// `v = height - row - 0.5`; only the world-up component of each ray
/// matters, so the result does not depend on yaw.
pub fn fill_skybox<T: Real>(intr: &Intrinsics<T>, pose: &Pose<T>, preset: SkyboxPreset) -> Result<Image> {
    let colors = preset.colors();
    let mut img = Image::new(intr.width, intr.height, colors.ground);
    if preset == SkyboxPreset::None {
        return Ok(img);
    }
    let up_row = euler_to_rotmat(&pose.orientation)?.matrix().row(1);
    let half = T::lit(0.5);
    let h = T::lit(f64::from(intr.height));
    for row in 0..intr.height {
        let v = h - T::lit(f64::from(row)) - half;
        for col in 0..intr.width {
            let d = pixel_ray(intr, T::lit(f64::from(col)) + half, v);
            let up = up_row.dot(&d) / d.norm();
            img.set(col, row, sky_color(&colors, up));
        }
    }
    Ok(img)
}
