use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use super::layout::{Split, INCOMPLETE_MARKER, MEAN_FILE};
use super::manifest::{write_atomic, write_manifest, ManifestRecord};
use super::mean::MeanAccumulator;
use crate::camera::Intrinsics;
use crate::error::{Error, Result};
use crate::pointcloud::PointCloud;
use crate::renderer::{splat_render, RenderOptions};
use crate::sampler::{enumerate_poses, GridSpec, OrientationSpec};

/// Everything besides the cloud that determines a synthetic dataset.
#[derive(Debug, Clone)]
pub struct GenerateRequest {
    pub intrinsics: Intrinsics,
    pub grid: GridSpec,
    pub orientations: OrientationSpec,
    pub render: RenderOptions,
    /// Every `holdout_every`-th pose goes to testB; 0 disables holdout.
    pub holdout_every: usize,
    pub max_poses: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GenerateSummary {
    pub poses: usize,
    pub train: usize,
    pub test_b: usize,
}

/// Split for the pose at enumeration index `i`.
pub fn holdout_split(i: usize, holdout_every: usize) -> Split {
    if holdout_every >= 2 && (i + 1) % holdout_every == 0 {
        Split::TestB
    } else {
        Split::Train
    }
}

#[derive(Serialize)]
struct Marker<'a> {
    status: &'a str,
    stage: &'a str,
    total_poses: usize,
    error: Option<String>,
}

fn write_marker(root: &Path, stage: &str, total: usize, error: Option<String>) -> Result<()> {
    let m = Marker {
        status: "incomplete",
        stage,
        total_poses: total,
        error,
    };
    let json = serde_json::to_vec_pretty(&m).expect("marker serializes");
    write_atomic(&root.join(INCOMPLETE_MARKER), &json)
}

/// Renders every pose of the sweep into `out_root` and writes the split
/// manifests and the train mean image.
///
/// An `INCOMPLETE.json` marker exists for the whole run and is removed only
/// on success; on failure it records the error.
pub fn generate_dataset(cloud: &PointCloud, req: &GenerateRequest, out_root: &Path) -> Result<GenerateSummary> {
    if req.holdout_every == 1 {
        return Err(Error::invalid("holdout_every must be 0 or at least 2"));
    }
    if cloud.is_empty() {
        return Err(Error::invalid("cannot render an empty point cloud"));
    }
    req.intrinsics.validate()?;
    req.render.validate()?;
    let poses = enumerate_poses(&req.grid, &req.orientations, req.max_poses)?;

    for split in Split::ALL {
        let dir = out_root.join(split.image_dir());
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    }
    write_marker(out_root, "rendering", poses.len(), None)?;

    match render_all(cloud, req, &poses, out_root) {
        Ok(summary) => {
            let marker = out_root.join(INCOMPLETE_MARKER);
            fs::remove_file(&marker).map_err(|e| Error::io(marker, e))?;
            Ok(summary)
        }
        Err(e) => {
            // best effort: the original error matters more than the marker's
            let _ = write_marker(out_root, "failed", poses.len(), Some(e.to_string()));
            Err(e)
        }
    }
}

fn render_all(
    cloud: &PointCloud,
    req: &GenerateRequest,
    poses: &[crate::geometry::Pose],
    out_root: &Path,
) -> Result<GenerateSummary> {
    let (w, h) = (req.intrinsics.width, req.intrinsics.height);
    let rel_path = |i: usize| format!("{}/{i:07}.png", holdout_split(i, req.holdout_every).image_dir());

    let mean = poses
        .par_iter()
        .enumerate()
        .try_fold(
            || MeanAccumulator::new(w, h),
            |mut acc, (i, pose)| {
                let img = splat_render(cloud, &req.intrinsics, pose, &req.render)?;
                let path: PathBuf = out_root.join(rel_path(i));
                img.save_png(&path)?;
                if holdout_split(i, req.holdout_every) == Split::Train {
                    acc.add(&img, &path)?;
                }
                Ok::<_, Error>(acc)
            },
        )
        .try_reduce(|| MeanAccumulator::new(w, h), |a, b| Ok(a.merge(b)))?;

    let mut train = Vec::new();
    let mut test_b = Vec::new();
    for (i, pose) in poses.iter().enumerate() {
        let rec = ManifestRecord::new(rel_path(i), *pose);
        match holdout_split(i, req.holdout_every) {
            Split::TestB => test_b.push(rec),
            _ => train.push(rec),
        }
    }
    write_manifest(&train, out_root.join(Split::Train.manifest_file()))?;
    write_manifest(&test_b, out_root.join(Split::TestB.manifest_file()))?;
    let test_a = out_root.join(Split::TestA.manifest_file());
    if !test_a.exists() {
        write_manifest(&[], &test_a)?;
    }
    if let Some(m) = mean.finish() {
        m.write(out_root.join(MEAN_FILE))?;
    }
    Ok(GenerateSummary {
        poses: poses.len(),
        train: train.len(),
        test_b: test_b.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn holdout_arithmetic() {
        let b = (0..8).filter(|i| holdout_split(*i, 4) == Split::TestB).count();
        assert_eq!(b, 2);
        assert!((0..100).all(|i| holdout_split(i, 0) == Split::Train));
        let b = (0..800).filter(|i| holdout_split(*i, 7) == Split::TestB).count();
        assert_eq!(b, 114);
    }
}
