use std::collections::HashSet;
use std::fs;
use std::path::Path;

use rayon::prelude::*;

use super::layout::Split;
use super::manifest::{read_manifest, write_manifest, ManifestRecord};
use crate::error::{Error, Result};
use crate::geometry::Pose;
use crate::renderer::{center_crop_resize, Image};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngestSummary {
    pub split: Split,
    pub ingested: usize,
    /// Image files in the frames directory that no pose row mentions.
    pub unlisted_frames: usize,
}

/// Output name for a frame: path separators flattened, `.png` extension.
fn ingested_name(rel: &str) -> String {
    let stem = match rel.rfind('.') {
        Some(dot) if dot > rel.rfind('/').map_or(0, |s| s + 1) => &rel[..dot],
        _ => rel,
    };
    format!("frame_{}.png", stem.replace(['/', '\\'], "_"))
}

fn is_image_file(p: &Path) -> bool {
    p.extension()
        .and_then(|e| e.to_str())
        .map(|e| matches!(e.to_ascii_lowercase().as_str(), "png" | "jpg" | "jpeg"))
        .unwrap_or(false)
}

/// Copies externally posed real frames into a dataset split.
///
/// `poses_manifest` uses the manifest CSV format with image paths relative
/// to `frames_dir`. Each frame is center-cropped and resized to
/// `target_w × target_h` and saved as PNG under the split's image
/// directory. Records are appended to an existing split manifest.
pub fn ingest_real_frames(
    frames_dir: &Path,
    poses_manifest: &Path,
    target_w: u32,
    target_h: u32,
    out_root: &Path,
    split: Split,
) -> Result<IngestSummary> {
    if split == Split::TestB {
        return Err(Error::invalid("real frames go to testA or train, not testB"));
    }
    let rows = read_manifest(poses_manifest)?;
    if !frames_dir.is_dir() {
        return Err(Error::io(
            frames_dir,
            std::io::Error::new(std::io::ErrorKind::NotFound, "frames directory not found"),
        ));
    }
    let listed: HashSet<&str> = rows.iter().map(|r| r.image_path.as_str()).collect();
    let unlisted_frames = fs::read_dir(frames_dir)
        .map_err(|e| Error::io(frames_dir, e))?
        .filter_map(|e| e.ok())
        .filter(|e| is_image_file(&e.path()))
        .filter(|e| !listed.contains(e.file_name().to_string_lossy().as_ref()))
        .count();

    let image_dir = out_root.join(split.image_dir());
    fs::create_dir_all(&image_dir).map_err(|e| Error::io(&image_dir, e))?;

    let manifest_path = out_root.join(split.manifest_file());
    let mut records = if manifest_path.exists() {
        read_manifest(&manifest_path)?
    } else {
        Vec::new()
    };
    let existing: HashSet<String> = records.iter().map(|r| r.image_path.clone()).collect();

    let new_records = rows
        .par_iter()
        .map(|row| {
            let src = frames_dir.join(&row.image_path);
            if !src.is_file() {
                return Err(Error::Image {
                    path: src,
                    message: format!("frame listed in {} does not exist", poses_manifest.display()),
                });
            }
            let pose = Pose::new(row.pose.position, row.pose.orientation)?;
            let img = center_crop_resize(&Image::load(&src)?, target_w, target_h)?;
            let rel = format!("{}/{}", split.image_dir(), ingested_name(&row.image_path));
            if existing.contains(&rel) {
                return Err(Error::invalid(format!(
                    "{rel} is already in {}",
                    manifest_path.display()
                )));
            }
            img.save_png(out_root.join(&rel))?;
            Ok(ManifestRecord::new(rel, pose))
        })
        .collect::<Result<Vec<_>>>()?;

    if new_records.is_empty() {
        log::warn!("{}: no frames listed, wrote an empty manifest", poses_manifest.display());
    }
    if unlisted_frames > 0 {
        log::warn!(
            "{}: {unlisted_frames} image files have no pose row and were ignored",
            frames_dir.display()
        );
    }
    let ingested = new_records.len();
    records.extend(new_records);
    write_manifest(&records, &manifest_path)?;
    Ok(IngestSummary {
        split,
        ingested,
        unlisted_frames,
    })
}
