use std::path::Path;

use rayon::prelude::*;

use crate::dataset::{compute_mean_image, ManifestRecord, MeanImage};
use crate::error::{Error, Result};
use crate::geometry::Pose;
use crate::renderer::Image;

pub const DEFAULT_DESCRIPTOR_SIZE: u32 = 16;

const LUMA: [f64; 3] = [0.299, 0.587, 0.114];

/// Mean-subtracted grayscale, area-averaged down to `size × size`, row-major.
///
/// Cell `(i, j)` averages source columns `floor(i·w/size) .. floor((i+1)·w/size)`
/// and the matching rows, so every source pixel lands in exactly one cell.
pub fn descriptor(img: &Image, mean: &MeanImage, size: u32) -> Result<Vec<f64>> {
    let (w, h) = (img.width(), img.height());
    if (mean.width, mean.height) != (w, h) {
        return Err(Error::invalid(format!(
            "image is {w}x{h} but the mean image is {}x{}",
            mean.width, mean.height
        )));
    }
    if size == 0 || w < size || h < size {
        return Err(Error::invalid(format!("descriptor size {size} does not fit a {w}x{h} image")));
    }
    let px = img.pixels();
    let gray = |col: u32, row: u32| -> f64 {
        let base = (row as usize * w as usize + col as usize) * 3;
        (0..3).map(|c| LUMA[c] * (px[base + c] as f64 - mean.values[base + c])).sum()
    };
    let edge = |k: u32, n: u32| (k as u64 * n as u64 / size as u64) as u32;
    let mut out = Vec::with_capacity((size * size) as usize);
    for j in 0..size {
        let (r0, r1) = (edge(j, h), edge(j + 1, h));
        for i in 0..size {
            let (c0, c1) = (edge(i, w), edge(i + 1, w));
            let mut acc = 0.0;
            for row in r0..r1 {
                for col in c0..c1 {
                    acc += gray(col, row);
                }
            }
            out.push(acc / ((r1 - r0) * (c1 - c0)) as f64);
        }
    }
    Ok(out)
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Nearest-neighbor retrieval over a train split.
#[derive(Debug, Clone)]
pub struct KnnIndex {
    descriptor_size: u32,
    mean: MeanImage,
    descriptors: Vec<Vec<f64>>,
    poses: Vec<Pose>,
}

/// The winning train entry for a query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub index: usize,
    /// Squared L2 descriptor distance.
    pub distance_sq: f64,
    pub pose: Pose,
}

impl KnnIndex {
    /// Loads every train image under `root`. Without `mean`, the train mean is computed.
    pub fn build(train: &[ManifestRecord], root: &Path, mean: Option<MeanImage>, descriptor_size: u32) -> Result<Self> {
        if train.is_empty() {
            return Err(Error::invalid("knn baseline needs a nonempty train set"));
        }
        let mean = match mean {
            Some(m) => m,
            None => compute_mean_image(train, root)?,
        };
        let descriptors = train
            .par_iter()
            .map(|r| {
                let path = root.join(&r.image_path);
                let img = Image::load(&path)?;
                descriptor(&img, &mean, descriptor_size).map_err(|e| match e {
                    Error::InvalidArgument(m) => Error::Image { path, message: m },
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            descriptor_size,
            mean,
            descriptors,
            poses: train.iter().map(|r| r.pose).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.poses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poses.is_empty()
    }

    pub fn descriptor_size(&self) -> u32 {
        self.descriptor_size
    }

    pub fn descriptors(&self) -> &[Vec<f64>] {
        &self.descriptors
    }

    pub fn mean(&self) -> &MeanImage {
        &self.mean
    }

    pub fn describe(&self, img: &Image) -> Result<Vec<f64>> {
        descriptor(img, &self.mean, self.descriptor_size)
    }

    /// Lowest squared distance wins; equal distances go to the lowest index.
    pub fn nearest(&self, img: &Image) -> Result<Neighbor> {
        let q = self.describe(img)?;
        let (distance_sq, index) = self
            .descriptors
            .par_iter()
            .enumerate()
            .map(|(i, d)| (squared_distance(&q, d), i))
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
            .expect("index is nonempty");
        Ok(Neighbor {
            index,
            distance_sq,
            pose: self.poses[index],
        })
    }
}

/// Pose of the train image nearest to `query`.
pub fn knn_predict(index: &KnnIndex, query: &Image) -> Result<Pose> {
    Ok(index.nearest(query)?.pose)
}

/// Predicts every record of `queries`, with images resolved against `root`.
pub fn knn_predict_manifest(index: &KnnIndex, queries: &[ManifestRecord], root: &Path) -> Result<Vec<ManifestRecord>> {
    queries
        .iter()
        .map(|q| {
            let img = Image::load(root.join(&q.image_path))?;
            Ok(ManifestRecord::new(q.image_path.clone(), knn_predict(index, &img)?))
        })
        .collect()
}
