//! Random linkage instances per graph and paired image datasets.

mod config;
mod dataset;
mod rng;
mod sample;

use std::path::PathBuf;

use thiserror::Error;

use crate::kinematics::KinematicsError;
use crate::raster::RasterError;

pub use config::{SampleConfig, CANVAS_SIDE};
pub use dataset::{
    accept_draws, assign_split, generate_dataset, load_manifest, load_summary, read_manifest, render_pair, resolve,
    split_samples, Dataset, DatasetSummary, GraphAcceptance, SamplePair, Split, SplitCounts, CURVE_DIR, MANIFEST_FILE,
    MECHANISM_DIR, SUMMARY_FILE,
};
pub use rng::{sample_rng, split_unit};
pub use sample::{drawn_points, sample_instance, screen, Accepted, RejectReason};

#[derive(Debug, Error)]
pub enum SampleError {
    #[error("invalid sampling config: {0}")]
    InvalidConfig(String),
    #[error("graph {graph_id}: only {accepted} of {needed} samples accepted after {draws} draws")]
    RejectionCapExceeded { graph_id: String, draws: u64, accepted: usize, needed: usize },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("sample {id}: {source}")]
    Render { id: String, source: KinematicsError },
    #[error("{path}: {source}")]
    Image { path: PathBuf, source: RasterError },
    #[error("{path}:{line}: {source}")]
    Manifest { path: PathBuf, line: usize, source: serde_json::Error },
}
