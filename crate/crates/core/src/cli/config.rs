//! The JSON generation config.
//!
//! Relative paths resolve against the directory holding the config file.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::camera::Intrinsics;
use crate::dataset::GenerateRequest;
use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::pointcloud::{load_ply, procedural_cloud, Aabb, PointCloud, RoomSpec};
use crate::renderer::{RenderOptions, ShaderPreset, SkyboxPreset};
use crate::sampler::{
    GridSpec, OrientationSpec, DEFAULT_HEIGHT, DEFAULT_PITCHES, DEFAULT_POSE_CAP, DEFAULT_STEP, DEFAULT_YAW_COUNT,
};

/// Shown by `posesynth generate --help`.
pub const CONFIG_HELP: &str = r#"CONFIG is one JSON document. Defaults in brackets.

  cloud          path to a PLY point cloud            (exactly one of cloud
  procedural     {"room": {"width", "height",          and procedural)
                  "depth", "points"}, "seed"}
  camera         {"fov_deg", "width", "height"} or {"intrinsics": {"fx", "fy",
                  "cx", "cy", "width", "height"}}
  grid           {"origin": [x, y, z]        [centered on the cloud's bounds]
                  "step_x", "step_z"         [1.0]
                  "count_x", "count_z"       [as many steps as fit]
                  "height"}                  [1.6, above origin.y]
  orientations   {"yaw_count"                [8]
                  "pitch_values"             [[-10, 0, 10]]
                  "roll"}                    [0]
  render         {"splat_radius_px" [2], "reference_depth" [2],
                  "max_splat_px" [8], "near_plane" [0.01],
                  "skybox" [noon: none|noon|dusk],
                  "shader" [identity: identity|noon|dusk|overcast]}
  holdout_every  every k-th pose goes to testB, 0 disables [7]
  max_poses      refuse sweeps larger than this [10000000]
  output         dataset root

Example:
  {"procedural": {"room": {"width": 10, "height": 4, "depth": 10,
                           "points": 100000}, "seed": 7},
   "camera": {"fov_deg": 90, "width": 224, "height": 224},
   "orientations": {"pitch_values": [0]},
   "output": "room_dataset"}"#;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProceduralScene {
    pub room: RoomSpec,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CameraConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fov_deg: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intrinsics: Option<Intrinsics>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<[f64; 3]>,
    #[serde(default = "default_step")]
    pub step_x: f64,
    #[serde(default = "default_step")]
    pub step_z: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count_x: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count_z: Option<usize>,
    #[serde(default = "default_height")]
    pub height: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            origin: None,
            step_x: DEFAULT_STEP,
            step_z: DEFAULT_STEP,
            count_x: None,
            count_z: None,
            height: DEFAULT_HEIGHT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrientationConfig {
    #[serde(default = "default_yaw_count")]
    pub yaw_count: usize,
    #[serde(default = "default_pitches")]
    pub pitch_values: Vec<f64>,
    #[serde(default)]
    pub roll: f64,
}

impl Default for OrientationConfig {
    fn default() -> Self {
        Self {
            yaw_count: DEFAULT_YAW_COUNT,
            pitch_values: default_pitches(),
            roll: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RenderConfig {
    #[serde(default = "default_splat_radius")]
    pub splat_radius_px: f64,
    #[serde(default = "default_reference_depth")]
    pub reference_depth: f64,
    #[serde(default = "default_max_splat")]
    pub max_splat_px: f64,
    #[serde(default = "default_near")]
    pub near_plane: f64,
    #[serde(default = "default_skybox")]
    pub skybox: String,
    #[serde(default = "default_shader")]
    pub shader: String,
}

impl Default for RenderConfig {
    fn default() -> Self {
        let d = RenderOptions::<f64>::default();
        Self {
            splat_radius_px: d.splat_radius_px,
            reference_depth: d.reference_depth,
            max_splat_px: d.max_splat_px,
            near_plane: d.near_plane,
            skybox: default_skybox(),
            shader: default_shader(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerationConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cloud: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub procedural: Option<ProceduralScene>,
    pub camera: CameraConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub orientations: OrientationConfig,
    #[serde(default)]
    pub render: RenderConfig,
    #[serde(default = "default_holdout")]
    pub holdout_every: usize,
    #[serde(default = "default_max_poses")]
    pub max_poses: usize,
    /// Where the dataset goes; not echoed, since it does not affect content.
    #[serde(default, skip_serializing)]
    pub output: Option<PathBuf>,
}

fn default_step() -> f64 {
    DEFAULT_STEP
}
fn default_height() -> f64 {
    DEFAULT_HEIGHT
}
fn default_yaw_count() -> usize {
    DEFAULT_YAW_COUNT
}
fn default_pitches() -> Vec<f64> {
    DEFAULT_PITCHES.to_vec()
}
fn default_splat_radius() -> f64 {
    RenderOptions::<f64>::default().splat_radius_px
}
fn default_reference_depth() -> f64 {
    RenderOptions::<f64>::default().reference_depth
}
fn default_max_splat() -> f64 {
    RenderOptions::<f64>::default().max_splat_px
}
fn default_near() -> f64 {
    RenderOptions::<f64>::default().near_plane
}
fn default_skybox() -> String {
    SkyboxPreset::default().id().to_string()
}
fn default_shader() -> String {
    ShaderPreset::identity().id
}
fn default_holdout() -> usize {
    7
}
fn default_max_poses() -> usize {
    DEFAULT_POSE_CAP
}

/// Re-labels a nested validation error with the config field it came from.
fn at(field: &str, r: Result<()>) -> Result<()> {
    r.map_err(|e| match e {
        Error::InvalidArgument(m) => Error::config(field, m),
        other => other,
    })
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::config(field, format!("must be a positive number, got {v}")))
    }
}

impl GenerationConfig {
    /// Parses and validates a config file, resolving its relative paths.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg: Self = serde_json::from_str(&text).map_err(|e| {
            Error::config(
                "config",
                format!("{}: line {} column {}: {e}", path.display(), e.line(), e.column()),
            )
        })?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let Some(c) = cfg.cloud.as_mut() {
            resolve(c);
        }
        if let Some(o) = cfg.output.as_mut() {
            resolve(o);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks everything that can be checked without loading the cloud.
    pub fn validate(&self) -> Result<()> {
        match (&self.cloud, &self.procedural) {
            (Some(_), Some(_)) => return Err(Error::config("cloud", "give either cloud or procedural, not both")),
            (None, None) => return Err(Error::config("cloud", "one of cloud or procedural is required")),
            (None, Some(p)) => at("procedural.room", p.room.validate())?,
            (Some(_), None) => {}
        }
        self.intrinsics()?;

        let g = &self.grid;
        positive("grid.step_x", g.step_x)?;
        positive("grid.step_z", g.step_z)?;
        if !g.height.is_finite() {
            return Err(Error::config("grid.height", "must be finite"));
        }
        if let Some(o) = g.origin {
            if o.iter().any(|v| !v.is_finite()) {
                return Err(Error::config("grid.origin", "must be finite"));
            }
        }
        for (name, c) in [("grid.count_x", g.count_x), ("grid.count_z", g.count_z)] {
            if c == Some(0) {
                return Err(Error::config(name, "must be at least 1"));
            }
        }

        let o = &self.orientations;
        if o.yaw_count == 0 {
            return Err(Error::config("orientations.yaw_count", "must be at least 1"));
        }
        at("orientations.pitch_values", self.orientation_spec().validate())?;

        let r = &self.render;
        positive("render.reference_depth", r.reference_depth)?;
        positive("render.near_plane", r.near_plane)?;
        if !(r.splat_radius_px.is_finite() && r.splat_radius_px >= 0.0) {
            return Err(Error::config("render.splat_radius_px", "must be non-negative"));
        }
        if !(r.max_splat_px.is_finite() && r.max_splat_px >= 1.0) {
            return Err(Error::config("render.max_splat_px", "must be at least 1"));
        }
        self.render_options()?;

        if self.holdout_every == 1 {
            return Err(Error::config("holdout_every", "must be 0 (no holdout) or at least 2"));
        }
        if self.max_poses == 0 {
            return Err(Error::config("max_poses", "must be at least 1"));
        }
        if self.output.is_none() {
            return Err(Error::config("output", "is required"));
        }
        Ok(())
    }

    pub fn intrinsics(&self) -> Result<Intrinsics> {
        let c = &self.camera;
        match (c.intrinsics, c.fov_deg, c.width, c.height) {
            (Some(k), None, None, None) => {
                at("camera.intrinsics", k.validate())?;
                Ok(k)
            }
            (None, Some(fov), Some(w), Some(h)) => {
                if !(fov.is_finite() && fov > 0.0 && fov < 180.0) {
                    return Err(Error::config("camera.fov_deg", format!("must lie in (0, 180), got {fov}")));
                }
                if w == 0 || h == 0 {
                    return Err(Error::config("camera.width", "resolution must be nonzero"));
                }
                Intrinsics::from_fov(fov, w, h).map_err(|e| Error::config("camera", e.to_string()))
            }
            _ => Err(Error::config(
                "camera",
                "give either intrinsics, or all of fov_deg, width and height",
            )),
        }
    }

    pub fn orientation_spec(&self) -> OrientationSpec {
        OrientationSpec {
            yaw_count: self.orientations.yaw_count,
            pitch_values: self.orientations.pitch_values.clone(),
            roll: self.orientations.roll,
        }
    }

    pub fn render_options(&self) -> Result<RenderOptions> {
        let r = &self.render;
        let opts = RenderOptions {
            splat_radius_px: r.splat_radius_px,
            reference_depth: r.reference_depth,
            max_splat_px: r.max_splat_px,
            near_plane: r.near_plane,
            skybox: r.skybox.parse()?,
            shader: ShaderPreset::named(&r.shader)?,
        };
        at("render", opts.validate())?;
        Ok(opts)
    }

    /// The grid, centered on `bounds` unless an origin is given.
    pub fn grid_spec(&self, bounds: &Aabb) -> Result<GridSpec> {
        let g = &self.grid;
        let spec = match g.origin {
            Some([x, y, z]) => GridSpec {
                origin: Vec3::new(x, y, z),
                step_x: g.step_x,
                step_z: g.step_z,
                count_x: g.count_x.unwrap_or(1),
                count_z: g.count_z.unwrap_or(1),
                height_y: g.height,
            },
            None => GridSpec::centered_on(bounds, g.step_x, g.step_z, g.count_x, g.count_z, g.height)?,
        };
        at("grid", spec.validate())?;
        Ok(spec)
    }

    pub fn load_cloud(&self) -> Result<PointCloud> {
        match (&self.cloud, &self.procedural) {
            (Some(path), None) => load_ply(path),
            (None, Some(p)) => procedural_cloud(p.seed, &p.room),
            _ => Err(Error::config("cloud", "one of cloud or procedural is required")),
        }
    }

    pub fn request(&self, cloud: &PointCloud) -> Result<GenerateRequest> {
        Ok(GenerateRequest {
            intrinsics: self.intrinsics()?,
            grid: self.grid_spec(&cloud.bounding_box()?)?,
            orientations: self.orientation_spec(),
            render: self.render_options()?,
            holdout_every: self.holdout_every,
            max_poses: self.max_poses,
        })
    }

    /// Pretty JSON with all defaults filled in; stable across runs.
    pub fn echo(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }
}
