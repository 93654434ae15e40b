use serde::{Deserialize, Serialize};

use super::image::Image;
use crate::error::{Error, Result};

/// Per-pixel color transform approximating time of day and weather:
/// `c' = (1 − s) · 255 · (tint · c/255)^gamma + s · haze`, then rounded and
/// clamped to [0, 255].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShaderPreset {
    pub id: String,
    pub tint: [f64; 3],
    pub gamma: f64,
    pub haze_color: [u8; 3],
    pub haze_strength: f64,
}

impl ShaderPreset {
    pub fn identity() -> Self {
        Self {
            id: "identity".into(),
            tint: [1.0, 1.0, 1.0],
            gamma: 1.0,
            haze_color: [0, 0, 0],
            haze_strength: 0.0,
        }
    }

    pub fn noon() -> Self {
        Self {
            id: "noon".into(),
            tint: [1.05, 1.03, 0.97],
            gamma: 0.95,
            haze_color: [235, 240, 255],
            haze_strength: 0.05,
        }
    }

    pub fn dusk() -> Self {
        Self {
            id: "dusk".into(),
            tint: [1.0, 0.6, 0.4],
            gamma: 1.1,
            haze_color: [70, 40, 90],
            haze_strength: 0.15,
        }
    }

    pub fn overcast() -> Self {
        Self {
            id: "overcast".into(),
            tint: [0.85, 0.87, 0.9],
            gamma: 1.0,
            haze_color: [180, 180, 185],
            haze_strength: 0.25,
        }
    }

    /// Looks up a built-in preset by id.
    pub fn named(id: &str) -> Result<Self> {
        match id {
            "identity" | "none" => Ok(Self::identity()),
            "noon" => Ok(Self::noon()),
            "dusk" => Ok(Self::dusk()),
            "overcast" => Ok(Self::overcast()),
            other => Err(Error::config(
                "render.shader",
                format!("unknown shader preset '{other}' (expected identity, noon, dusk or overcast)"),
            )),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.tint.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return Err(Error::invalid("shader tint must be non-negative"));
        }
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(Error::invalid("shader gamma must be positive"));
        }
        if !(self.haze_strength.is_finite() && (0.0..=1.0).contains(&self.haze_strength)) {
            return Err(Error::invalid("shader haze_strength must lie in [0, 1]"));
        }
        Ok(())
    }

    /// Transformed value of one channel.
    pub fn shade(&self, channel: usize, c: u8) -> u8 {
        let x = 255.0 * (self.tint[channel] * (f64::from(c) / 255.0)).powf(self.gamma);
        let s = self.haze_strength;
        let y = (1.0 - s) * x + s * f64::from(self.haze_color[channel]);
        y.round().clamp(0.0, 255.0) as u8
    }

    fn lut(&self) -> [[u8; 256]; 3] {
        let mut lut = [[0u8; 256]; 3];
        for (k, table) in lut.iter_mut().enumerate() {
            for (c, v) in table.iter_mut().enumerate() {
                *v = self.shade(k, c as u8);
            }
        }
        lut
    }
}

pub fn apply_shader_in_place(img: &mut Image, preset: &ShaderPreset) {
    if *preset == ShaderPreset::identity() {
        return;
    }
    let lut = preset.lut();
    for px in img.pixels_mut().chunks_exact_mut(3) {
        for k in 0..3 {
            px[k] = lut[k][px[k] as usize];
        }
    }
}

pub fn apply_shader(img: &Image, preset: &ShaderPreset) -> Result<Image> {
    preset.validate()?;
    let mut out = img.clone();
    apply_shader_in_place(&mut out, preset);
    Ok(out)
}
