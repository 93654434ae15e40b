//! Per-pixel training mean and its binary file format.
//!
//! File layout: the magic `PSMEAN1\n`, then `"<width> <height>\n"` in
//! decimal, then `width·height·3` little-endian IEEE-754 f32 values in
//! row-major RGB order.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::manifest::{manifest_dir, read_manifest, write_atomic, ManifestRecord};
use crate::error::{Error, Result};
use crate::renderer::Image;

pub const MEAN_MAGIC: &[u8] = b"PSMEAN1\n";

#[derive(Debug, Clone, PartialEq)]
pub struct MeanImage {
    pub width: u32,
    pub height: u32,
    /// Row-major RGB means in [0, 255].
    pub values: Vec<f64>,
}

impl MeanImage {
    #[inline]
    pub fn at(&self, col: u32, row: u32, channel: usize) -> f64 {
        self.values[(row as usize * self.width as usize + col as usize) * 3 + channel]
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(MEAN_MAGIC.len() + 16 + self.values.len() * 4);
        out.extend_from_slice(MEAN_MAGIC);
        out.extend_from_slice(format!("{} {}\n", self.width, self.height).as_bytes());
        for v in &self.values {
            out.extend_from_slice(&(*v as f32).to_le_bytes());
        }
        out
    }

    pub fn decode(bytes: &[u8], source: &Path) -> Result<Self> {
        let bad = |m: String| Error::Image {
            path: source.to_path_buf(),
            message: m,
        };
        let rest = bytes
            .strip_prefix(MEAN_MAGIC)
            .ok_or_else(|| bad("missing PSMEAN1 magic".into()))?;
        let nl = rest
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| bad("missing dimension line".into()))?;
        let dims = std::str::from_utf8(&rest[..nl]).map_err(|_| bad("dimension line is not text".into()))?;
        let mut it = dims.split_whitespace().map(str::parse::<u32>);
        let (Some(Ok(width)), Some(Ok(height)), None) = (it.next(), it.next(), it.next()) else {
            return Err(bad(format!("bad dimension line {dims:?}")));
        };
        let body = &rest[nl + 1..];
        let n = width as usize * height as usize * 3;
        if body.len() != n * 4 {
            return Err(bad(format!("expected {} data bytes, found {}", n * 4, body.len())));
        }
        let values = body
            .chunks_exact(4)
            .map(|c| f64::from(f32::from_le_bytes([c[0], c[1], c[2], c[3]])))
            .collect();
        Ok(Self { width, height, values })
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        write_atomic(path.as_ref(), &self.encode())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::decode(&bytes, path)
    }
}

/// Exact integer accumulation of pixel sums.
#[derive(Debug, Clone)]
pub struct MeanAccumulator {
    width: u32,
    height: u32,
    sums: Vec<u64>,
    count: u64,
}

impl MeanAccumulator {
    pub fn new(width: u32, height: u32) -> Self {
        Self {
            width,
            height,
            sums: vec![0; width as usize * height as usize * 3],
            count: 0,
        }
    }

    pub fn add(&mut self, img: &Image, path: &Path) -> Result<()> {
        if (img.width(), img.height()) != (self.width, self.height) {
            return Err(Error::Image {
                path: path.to_path_buf(),
                message: format!(
                    "size {}x{} differs from the dataset's {}x{}",
                    img.width(),
                    img.height(),
                    self.width,
                    self.height
                ),
            });
        }
        for (s, &p) in self.sums.iter_mut().zip(img.pixels()) {
            *s += u64::from(p);
        }
        self.count += 1;
        Ok(())
    }

    pub fn merge(mut self, other: Self) -> Self {
        for (a, b) in self.sums.iter_mut().zip(&other.sums) {
            *a += b;
        }
        self.count += other.count;
        self
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn finish(&self) -> Option<MeanImage> {
        (self.count > 0).then(|| MeanImage {
            width: self.width,
            height: self.height,
            values: self.sums.iter().map(|&s| s as f64 / self.count as f64).collect(),
        })
    }
}

/// Mean over the images of `records`, resolved against `root`.
pub fn compute_mean_image(records: &[ManifestRecord], root: &Path) -> Result<MeanImage> {
    let first = records
        .first()
        .ok_or_else(|| Error::invalid("mean image of an empty manifest"))?;
    let first_path = root.join(&first.image_path);
    let probe = Image::load(&first_path)?;
    let (w, h) = (probe.width(), probe.height());
    let acc = records
        .par_iter()
        .map(|r| root.join(&r.image_path))
        .try_fold(
            || MeanAccumulator::new(w, h),
            |mut acc, path: PathBuf| {
                acc.add(&Image::load(&path)?, &path)?;
                Ok::<_, Error>(acc)
            },
        )
        .try_reduce(|| MeanAccumulator::new(w, h), |a, b| Ok(a.merge(b)))?;
    Ok(acc.finish().expect("nonempty"))
}

/// Reads a manifest and averages its images.
pub fn compute_mean_from_manifest(manifest: impl AsRef<Path>) -> Result<MeanImage> {
    let manifest = manifest.as_ref();
    let records = read_manifest(manifest)?;
    compute_mean_image(&records, &manifest_dir(manifest))
}
