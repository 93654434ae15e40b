//! Dataset generation, persistence and split bookkeeping.
//!
//! Layout under a dataset root:
//!
//! ```text
//! images/{train,testA,testB}/   rendered or ingested PNGs
//! train.csv testA.csv testB.csv split manifests
//! mean.psmean                   per-pixel train mean
//! config.echo.json              resolved generation config
//! ```

mod generate;
mod ingest;
mod layout;
mod manifest;
mod mean;

pub use generate::{generate_dataset, holdout_split, GenerateRequest, GenerateSummary};
pub use ingest::{ingest_real_frames, IngestSummary};
pub use layout::{
    validate_splits, DatasetLayout, Overlap, Split, SplitReport, CONFIG_ECHO_FILE, INCOMPLETE_MARKER, MEAN_FILE,
};
pub use manifest::{
    format_manifest, manifest_dir, parse_manifest, read_manifest, write_manifest, ManifestRecord, MANIFEST_HEADER,
    MANIFEST_MAGIC,
};
pub use mean::{compute_mean_from_manifest, compute_mean_image, MeanAccumulator, MeanImage, MEAN_MAGIC};
