//! Z-buffered disc splatting of a point cloud.
//!
//! Every visible point becomes a filled disc whose radius shrinks with
//! depth. Each pixel keeps the splat with the smallest `(depth, index)`, a
//! total order, so the image does not depend on how work is split across
//! threads.

use rayon::prelude::*;

use super::image::Image;
use super::shader::{apply_shader_in_place, ShaderPreset};
use super::skybox::{fill_skybox, SkyboxPreset};
use crate::camera::{project_with_near, Intrinsics, ViewTransform, DEFAULT_NEAR_PLANE};
use crate::error::{Error, Result};
use crate::geometry::Pose;
use crate::pointcloud::PointCloud;
use crate::scalar::Real;

/// Rows per parallel raster band.
const BAND_ROWS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions<T = f64> {
    /// Splat radius in pixels for a point at `reference_depth`.
    pub splat_radius_px: T,
    /// Meters.
    pub reference_depth: T,
    /// Upper bound on the splat radius, pixels (at least 1).
    pub max_splat_px: T,
    /// Meters.
    pub near_plane: T,
    pub skybox: SkyboxPreset,
    pub shader: ShaderPreset,
}

impl<T: Real> Default for RenderOptions<T> {
    fn default() -> Self {
        Self {
            splat_radius_px: T::lit(2.0),
            reference_depth: T::lit(2.0),
            max_splat_px: T::lit(8.0),
            near_plane: T::lit(DEFAULT_NEAR_PLANE),
            skybox: SkyboxPreset::default(),
            shader: ShaderPreset::identity(),
        }
    }
}

impl<T: Real> RenderOptions<T> {
    pub fn validate(&self) -> Result<()> {
        let finite_nonneg = |v: T| v.is_finite() && v >= T::zero();
        if !finite_nonneg(self.splat_radius_px) {
            return Err(Error::invalid("splat_radius_px must be non-negative"));
        }
        if !(self.reference_depth.is_finite() && self.reference_depth > T::zero()) {
            return Err(Error::invalid("reference_depth must be positive"));
        }
        if !(self.max_splat_px.is_finite() && self.max_splat_px >= T::one()) {
            return Err(Error::invalid("max_splat_px must be at least 1"));
        }
        if !(self.near_plane.is_finite() && self.near_plane > T::zero()) {
            return Err(Error::invalid("near_plane must be positive"));
        }
        self.shader.validate()
    }

    /// `clamp(splat_radius_px · reference_depth / depth, 1, max_splat_px)`.
    #[inline]
    pub fn splat_radius(&self, depth: T) -> T {
        (self.splat_radius_px * self.reference_depth / depth)
            .max(T::one())
            .min(self.max_splat_px)
    }
}

/// A projected point ready for rasterization, in buffer coordinates.
#[derive(Debug, Clone, Copy)]
struct Splat<T> {
    col: i32,
    row: i32,
    extent: i32,
    radius_sq: T,
    depth: T,
    index: u32,
}

/// Converts continuous `(u, v)` to the containing pixel `(col, row)`.
#[inline]
pub fn pixel_of<T: Real>(u: T, v: T, height: u32) -> (i32, i32) {
    let col = u.floor().to_i32().unwrap_or(i32::MIN);
    let row = height as i32 - 1 - v.floor().to_i32().unwrap_or(i32::MIN);
    (col, row)
}

fn project_all<T: Real>(
    cloud: &PointCloud<T>,
    intr: &Intrinsics<T>,
    view: &ViewTransform<T>,
    opts: &RenderOptions<T>,
) -> Vec<Splat<T>> {
    cloud
        .positions()
        .par_iter()
        .enumerate()
        .filter_map(|(i, p)| {
            let pr = project_with_near(intr, view, *p, opts.near_plane)?;
            let r = opts.splat_radius(pr.depth);
            let (col, row) = pixel_of(pr.u, pr.v, intr.height);
            Some(Splat {
                col,
                row,
                extent: r.floor().to_i32().unwrap_or(0),
                radius_sq: r * r,
                depth: pr.depth,
                index: i as u32,
            })
        })
        .collect()
}

/// Renders `cloud` over the sky-box, then applies the shader preset.
pub fn splat_render<T: Real>(
    cloud: &PointCloud<T>,
    intr: &Intrinsics<T>,
    pose: &Pose<T>,
    opts: &RenderOptions<T>,
) -> Result<Image> {
    opts.validate()?;
    intr.validate()?;
    if cloud.len() > u32::MAX as usize {
        return Err(Error::invalid("point clouds beyond u32::MAX points are not supported"));
    }
    let view = ViewTransform::from_pose(pose)?;
    let mut img = fill_skybox(intr, pose, opts.skybox)?;
    let splats = project_all(cloud, intr, &view, opts);

    let (w, h) = (intr.width as usize, intr.height as usize);
    let bands = h.div_ceil(BAND_ROWS);
    let mut bins: Vec<Vec<u32>> = vec![Vec::new(); bands];
    for (k, s) in splats.iter().enumerate() {
        let lo = (s.row - s.extent).max(0);
        let hi = (s.row + s.extent).min(h as i32 - 1);
        if lo > hi {
            continue;
        }
        for band in lo as usize / BAND_ROWS..=hi as usize / BAND_ROWS {
            bins[band].push(k as u32);
        }
    }

    let colors = cloud.colors();
    img.pixels_mut()
        .par_chunks_mut(BAND_ROWS * w * 3)
        .zip(bins.par_iter())
        .enumerate()
        .for_each(|(band, (out, bin))| {
            let row0 = (band * BAND_ROWS) as i32;
            let rows = out.len() / (w * 3);
            let mut depth = vec![T::infinity(); rows * w];
            let mut winner = vec![u32::MAX; rows * w];
            for &k in bin {
                let s = &splats[k as usize];
                let r0 = (s.row - s.extent).max(row0);
                let r1 = (s.row + s.extent).min(row0 + rows as i32 - 1);
                let c0 = (s.col - s.extent).max(0);
                let c1 = (s.col + s.extent).min(w as i32 - 1);
                for row in r0..=r1 {
                    let dy = row - s.row;
                    let base = (row - row0) as usize * w;
                    for col in c0..=c1 {
                        let dx = col - s.col;
                        if T::lit(f64::from(dx * dx + dy * dy)) > s.radius_sq {
                            continue;
                        }
                        let i = base + col as usize;
                        if s.depth < depth[i] || (s.depth == depth[i] && s.index < winner[i]) {
                            depth[i] = s.depth;
                            winner[i] = s.index;
                        }
                    }
                }
            }
            for (i, &idx) in winner.iter().enumerate() {
                if idx != u32::MAX {
                    out[i * 3..i * 3 + 3].copy_from_slice(&colors[idx as usize]);
                }
            }
        });

    apply_shader_in_place(&mut img, &opts.shader);
    Ok(img)
}
