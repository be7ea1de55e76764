use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::SampleConfig;
use super::rng::split_unit;
use super::sample::{sample_instance, Accepted, RejectReason};
use super::SampleError;
use crate::graph::MechanismGraph;
use crate::kinematics::{trace, KinematicsError, LinkageInstance};
use crate::raster::{render_curve, render_mechanism, ImageBuffer, Transform};

pub const MANIFEST_FILE: &str = "manifest.jsonl";
pub const SUMMARY_FILE: &str = "dataset.json";
pub const CURVE_DIR: &str = "curves";
pub const MECHANISM_DIR: &str = "mechs";

/// Draws evaluated per parallel batch at minimum.
const MIN_BATCH: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
}

/// Split for a sample id: a keyed hash compared against `train_ratio`, so
/// the assignment never depends on dataset order or size.
pub fn assign_split(seed: u64, id: &str, train_ratio: f64) -> Split {
    if split_unit(seed, id) < train_ratio {
        Split::Train
    } else {
        Split::Test
    }
}

/// One manifest line: a paired curve and mechanism image plus everything
/// needed to re-render both bit-identically.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplePair {
    pub id: String,
    pub graph_id: String,
    /// Index of the accepted draw in the graph's draw stream.
    pub draw: u64,
    pub split: Split,
    pub instance: LinkageInstance,
    pub steps: usize,
    pub image_size: u32,
    pub transform: Transform,
    pub curve_image: String,
    pub mechanism_image: String,
    pub speed_min: f64,
    pub speed_max: f64,
    /// Reserved for joint-coordinate and video exports; always null here.
    pub joints: Option<String>,
    pub video: Option<String>,
}

/// Renders `(curve, mechanism)` from the stored instance and transform.
pub fn render_pair(pair: &SamplePair) -> Result<(ImageBuffer, ImageBuffer), KinematicsError> {
    let traj = trace(&pair.instance, pair.steps)?;
    let curve = render_curve(&traj, &pair.transform, pair.image_size, false);
    let mech = render_mechanism(&pair.instance, 0.0, &pair.transform, pair.image_size)?;
    Ok((curve, mech))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphAcceptance {
    pub graph_id: String,
    /// Draws consumed up to and including the last accepted one.
    pub draws: u64,
    pub accepted: u64,
    pub infeasible_cycle: u64,
    pub degenerate_curve: u64,
    pub out_of_bounds: u64,
}

impl GraphAcceptance {
    pub fn rate(&self) -> f64 {
        if self.draws == 0 {
            0.0
        } else {
            self.accepted as f64 / self.draws as f64
        }
    }

    fn record(&mut self, reason: RejectReason) {
        match reason {
            RejectReason::InfeasibleCycle => self.infeasible_cycle += 1,
            RejectReason::DegenerateCurve => self.degenerate_curve += 1,
            RejectReason::OutOfBounds => self.out_of_bounds += 1,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitCounts {
    pub train: usize,
    pub test: usize,
}

/// Contents of the dataset summary file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub config: SampleConfig,
    pub graphs: Vec<String>,
    pub samples: usize,
    pub splits: SplitCounts,
    pub acceptance: Vec<GraphAcceptance>,
    pub manifest: String,
    pub joints: Option<String>,
    pub video: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Dataset {
    pub summary: DatasetSummary,
    pub samples: Vec<SamplePair>,
}

impl Dataset {
    pub fn split(&self, split: Split) -> impl Iterator<Item = &SamplePair> {
        self.samples.iter().filter(move |s| s.split == split)
    }
}

/// Accepts `config.per_graph` draws for one graph, consuming the draw
/// stream in order. Batches run in parallel but are scanned sequentially,
/// so the result is the same for any thread count.
pub fn accept_draws(
    graph: &MechanismGraph,
    graph_id: &str,
    config: &SampleConfig,
) -> Result<(Vec<(u64, Accepted)>, GraphAcceptance), SampleError> {
    let need = config.per_graph;
    let budget = (need as u64).saturating_mul(config.rejection_factor as u64);
    let mut stats = GraphAcceptance { graph_id: graph_id.to_string(), ..Default::default() };
    let mut accepted = Vec::with_capacity(need);
    let mut next = 0u64;
    while accepted.len() < need {
        if next >= budget {
            return Err(SampleError::RejectionCapExceeded {
                graph_id: graph_id.to_string(),
                draws: next,
                accepted: accepted.len(),
                needed: need,
            });
        }
        let batch = ((need - accepted.len()) as u64 * 2).max(MIN_BATCH).min(budget - next);
        let results: Vec<_> =
            (next..next + batch).into_par_iter().map(|i| sample_instance(graph, graph_id, i, config)).collect();
        for (i, r) in (next..).zip(results) {
            if accepted.len() == need {
                break;
            }
            stats.draws += 1;
            match r {
                Ok(acc) => {
                    stats.accepted += 1;
                    accepted.push((i, acc));
                }
                Err(reason) => stats.record(reason),
            }
        }
        next += batch;
    }
    Ok((accepted, stats))
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> SampleError + '_ {
    move |source| SampleError::Io { path: path.to_path_buf(), source }
}

fn write_json_lines(path: &Path, samples: &[SamplePair]) -> Result<(), SampleError> {
    let mut w = BufWriter::new(File::create(path).map_err(io_err(path))?);
    for s in samples {
        serde_json::to_writer(&mut w, s).map_err(|e| io_err(path)(e.into()))?;
        w.write_all(b"\n").map_err(io_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Samples, renders and writes a dataset under `out`:
/// `curves/{id}.png`, `mechs/{id}.png`, `manifest.jsonl` and `dataset.json`.
///
/// The manifest is written last through a temporary file, so a failed run
/// never leaves a manifest pointing at missing images.
pub fn generate_dataset(
    graphs: &[(String, MechanismGraph)],
    config: &SampleConfig,
    out: &Path,
) -> Result<Dataset, SampleError> {
    config.validate()?;
    for dir in [CURVE_DIR, MECHANISM_DIR] {
        let d = out.join(dir);
        fs::create_dir_all(&d).map_err(io_err(&d))?;
    }

    let mut samples = Vec::with_capacity(graphs.len() * config.per_graph);
    let mut acceptance = Vec::with_capacity(graphs.len());
    for (graph_id, graph) in graphs {
        let (accepted, stats) = accept_draws(graph, graph_id, config)?;
        acceptance.push(stats);
        let pairs: Vec<SamplePair> = accepted
            .into_iter()
            .enumerate()
            .map(|(n, (draw, acc))| make_pair(graph_id, n, draw, acc, config))
            .collect();
        pairs.par_iter().try_for_each(|p| write_images(p, out))?;
        samples.extend(pairs);
    }

    let manifest = out.join(MANIFEST_FILE);
    let partial = out.join(format!("{MANIFEST_FILE}.partial"));
    if let Err(e) =
        write_json_lines(&partial, &samples).and_then(|_| fs::rename(&partial, &manifest).map_err(io_err(&manifest)))
    {
        let _ = fs::remove_file(&partial);
        return Err(e);
    }

    let splits = SplitCounts {
        train: samples.iter().filter(|s| s.split == Split::Train).count(),
        test: samples.iter().filter(|s| s.split == Split::Test).count(),
    };
    let summary = DatasetSummary {
        config: config.clone(),
        graphs: graphs.iter().map(|(id, _)| id.clone()).collect(),
        samples: samples.len(),
        splits,
        acceptance,
        manifest: MANIFEST_FILE.to_string(),
        joints: None,
        video: None,
    };
    let path = out.join(SUMMARY_FILE);
    let text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    fs::write(&path, text + "\n").map_err(io_err(&path))?;
    Ok(Dataset { summary, samples })
}

fn make_pair(graph_id: &str, n: usize, draw: u64, acc: Accepted, config: &SampleConfig) -> SamplePair {
    let id = format!("{graph_id}-{n:06}");
    let (speed_min, speed_max) = acc.trajectory.speed_range();
    SamplePair {
        split: assign_split(config.seed, &id, config.train_ratio),
        curve_image: format!("{CURVE_DIR}/{id}.png"),
        mechanism_image: format!("{MECHANISM_DIR}/{id}.png"),
        graph_id: graph_id.to_string(),
        draw,
        transform: Transform::fit(acc.sweep_bbox, config.image_size, config.margin),
        instance: acc.instance,
        steps: config.steps,
        image_size: config.image_size,
        speed_min,
        speed_max,
        joints: None,
        video: None,
        id,
    }
}

fn write_images(pair: &SamplePair, out: &Path) -> Result<(), SampleError> {
    let (curve, mech) = render_pair(pair).map_err(|source| SampleError::Render { id: pair.id.clone(), source })?;
    for (img, rel) in [(curve, &pair.curve_image), (mech, &pair.mechanism_image)] {
        let path = out.join(rel);
        img.save(&path).map_err(|source| SampleError::Image { path, source })?;
    }
    Ok(())
}

/// Reads `manifest.jsonl` from a dataset directory.
pub fn load_manifest(dir: &Path) -> Result<Vec<SamplePair>, SampleError> {
    read_manifest(&dir.join(MANIFEST_FILE))
}

/// Reads a manifest file, one sample per line.
pub fn read_manifest(path: &Path) -> Result<Vec<SamplePair>, SampleError> {
    let path = path.to_path_buf();
    let file = File::open(&path).map_err(io_err(&path))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_err(&path))?;
        if line.trim().is_empty() {
            continue;
        }
        let pair = serde_json::from_str(&line).map_err(|source| SampleError::Manifest {
            path: path.clone(),
            line: i + 1,
            source,
        })?;
        out.push(pair);
    }
    Ok(out)
}

pub fn load_summary(dir: &Path) -> Result<DatasetSummary, SampleError> {
    let path = dir.join(SUMMARY_FILE);
    let text = fs::read_to_string(&path).map_err(io_err(&path))?;
    serde_json::from_str(&text).map_err(|source| SampleError::Manifest { path, line: 0, source })
}

/// Re-splits samples with a new ratio and seed.
pub fn split_samples(samples: &[SamplePair], train_ratio: f64, seed: u64) -> (Vec<SamplePair>, Vec<SamplePair>) {
    samples
        .iter()
        .cloned()
        .map(|mut s| {
            s.split = assign_split(seed, &s.id, train_ratio);
            s
        })
        .partition(|s| s.split == Split::Train)
}

/// Absolute path of a manifest-relative file.
pub fn resolve(dir: &Path, rel: &str) -> PathBuf {
    dir.join(rel)
}
