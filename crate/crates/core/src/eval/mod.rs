//! Scoring of pose predictions and a nearest-neighbor retrieval baseline.

mod knn;
mod metrics;

pub use knn::{descriptor, knn_predict, knn_predict_manifest, KnnIndex, Neighbor, DEFAULT_DESCRIPTOR_SIZE};
pub use metrics::{evaluate, format_cell, format_report, pose_errors, Metrics, Prediction};
