use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::manifest::{read_manifest, ManifestRecord};
use crate::error::{Error, Result};
use crate::geometry::Pose;

pub const MEAN_FILE: &str = "mean.psmean";
pub const CONFIG_ECHO_FILE: &str = "config.echo.json";
pub const INCOMPLETE_MARKER: &str = "INCOMPLETE.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Split {
    Train,
    /// Held-out real frames.
    TestA,
    /// Held-out synthesized images.
    TestB,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::TestA, Split::TestB];

    pub fn name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::TestA => "testA",
            Split::TestB => "testB",
        }
    }

    pub fn manifest_file(self) -> String {
        format!("{}.csv", self.name())
    }

    /// Image directory relative to the dataset root.
    pub fn image_dir(self) -> String {
        format!("images/{}", self.name())
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Split::ALL
            .into_iter()
            .find(|sp| sp.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::invalid(format!("unknown split '{s}' (expected train, testA or testB)")))
    }
}

/// A dataset root with its three split manifests.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetLayout {
    pub root: PathBuf,
    pub train: Vec<ManifestRecord>,
    pub test_a: Vec<ManifestRecord>,
    pub test_b: Vec<ManifestRecord>,
}

impl DatasetLayout {
    /// Reads the manifests under `root`; a missing manifest is an empty split.
    pub fn open(root: impl AsRef<Path>) -> Result<Self> {
        let root = root.as_ref().to_path_buf();
        let load = |split: Split| -> Result<Vec<ManifestRecord>> {
            let p = root.join(split.manifest_file());
            if p.exists() {
                read_manifest(&p)
            } else {
                Ok(Vec::new())
            }
        };
        Ok(Self {
            train: load(Split::Train)?,
            test_a: load(Split::TestA)?,
            test_b: load(Split::TestB)?,
            root,
        })
    }

    pub fn records(&self, split: Split) -> &[ManifestRecord] {
        match split {
            Split::Train => &self.train,
            Split::TestA => &self.test_a,
            Split::TestB => &self.test_b,
        }
    }

    pub fn manifest_path(&self, split: Split) -> PathBuf {
        self.root.join(split.manifest_file())
    }
}

/// A test record colliding with a train record.
#[derive(Debug, Clone, PartialEq)]
pub struct Overlap {
    pub split: Split,
    pub image_path: String,
    pub train_image_path: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SplitReport {
    /// Same image path in train and a test split. Always a failure.
    pub path_overlaps: Vec<Overlap>,
    /// Distinct images with bit-identical poses across splits. A warning.
    pub pose_overlaps: Vec<Overlap>,
}

impl SplitReport {
    pub fn passed(&self) -> bool {
        self.path_overlaps.is_empty()
    }
}

impl fmt::Display for SplitReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.path_overlaps {
            writeln!(f, "FAIL image overlap: {} record {:?} also in train", o.split, o.image_path)?;
        }
        for o in &self.pose_overlaps {
            writeln!(
                f,
                "WARN pose overlap: {} record {:?} has the same pose as train record {:?}",
                o.split, o.image_path, o.train_image_path
            )?;
        }
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status}: {} image overlaps, {} pose overlaps",
            self.path_overlaps.len(),
            self.pose_overlaps.len()
        )
    }
}

fn pose_key(p: &Pose) -> [u64; 6] {
    // +0.0 and -0.0 describe the same pose
    p.to_array().map(|v| if v == 0.0 { 0u64 } else { v.to_bits() })
}

/// Checks that no test record shares an image (by path) with train, and
/// reports test records whose exact pose also occurs in train.
pub fn validate_splits(layout: &DatasetLayout) -> SplitReport {
    let by_path: HashMap<&str, ()> = layout.train.iter().map(|r| (r.image_path.as_str(), ())).collect();
    let by_pose: HashMap<[u64; 6], &str> = layout
        .train
        .iter()
        .rev()
        .map(|r| (pose_key(&r.pose), r.image_path.as_str()))
        .collect();

    let mut report = SplitReport::default();
    for split in [Split::TestA, Split::TestB] {
        for r in layout.records(split) {
            if by_path.contains_key(r.image_path.as_str()) {
                report.path_overlaps.push(Overlap {
                    split,
                    image_path: r.image_path.clone(),
                    train_image_path: r.image_path.clone(),
                });
            } else if let Some(train) = by_pose.get(&pose_key(&r.pose)) {
                report.pose_overlaps.push(Overlap {
                    split,
                    image_path: r.image_path.clone(),
                    train_image_path: train.to_string(),
                });
            }
        }
    }
    report
}
