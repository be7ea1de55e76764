//! Curve-to-mechanism baseline: descriptor retrieval over a dataset, then
//! simplex refinement of the retrieved instances against the target curve.

mod descriptor;
mod extract;
mod simplex;

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{BBox, Point};
use crate::kinematics::{sweep, trace, LinkageInstance, Trajectory, DEFAULT_STEPS};
use crate::metrics::chamfer;
use crate::raster::{
    normalize_speeds, render_curve, render_mechanism, ImageBuffer, RasterError, Transform, DEFAULT_IMAGE_SIZE,
};
use crate::sampling::{drawn_points, resolve, SamplePair};

pub use descriptor::{
    describe, descriptor_distance, resample_closed, CurveDescriptor, Normalization, DESCRIPTOR_LEN, SHAPE_POINTS,
    SPEED_BINS,
};
pub use extract::{curve_from_image, CELL};
pub use simplex::{nelder_mead, SimplexResult};

/// Objective value for parameter vectors whose crank cannot turn fully.
pub const INFEASIBLE_PENALTY: f64 = 1e6;

#[derive(Debug, Error)]
pub enum SynthesisError {
    #[error("dataset has no usable samples")]
    EmptyDataset,
    #[error("target image contains no curve")]
    NoCurvePixels,
    #[error("target curve has no extent")]
    DegenerateTarget,
    #[error("{path}: {source}")]
    Image { path: PathBuf, source: RasterError },
    #[error("sample {id} cannot be traced: {reason}")]
    Sample { id: String, reason: String },
}

/// Coordinates a target's points are expressed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetFrame {
    /// World units, as produced by tracing.
    World,
    /// Pixel cell centroids of a curve image, y flipped to point up.
    Pixel,
}

/// A curve to match: ordered closed points, optionally with one normalized
/// speed in [0, 1] per point.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveTarget {
    pub points: Vec<Point>,
    pub speeds: Option<Vec<f64>>,
    pub frame: TargetFrame,
}

impl CurveTarget {
    pub fn from_trajectory(traj: &Trajectory) -> Self {
        Self { points: traj.points.clone(), speeds: Some(normalize_speeds(&traj.speeds)), frame: TargetFrame::World }
    }

    pub fn from_image(img: &ImageBuffer) -> Result<Self, SynthesisError> {
        let (points, speeds) = curve_from_image(img).ok_or(SynthesisError::NoCurvePixels)?;
        Ok(Self { points, speeds, frame: TargetFrame::Pixel })
    }

    pub fn describe(&self) -> Result<(CurveDescriptor, Normalization), SynthesisError> {
        describe(&self.points, self.speeds.as_deref()).ok_or(SynthesisError::DegenerateTarget)
    }
}

/// How dataset curves are described: from the exact traced trajectory, or
/// from the stored curve image (the same path an image target takes).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DescriptorSource {
    Trajectory,
    Image,
}

#[derive(Clone, Debug)]
pub struct IndexEntry {
    pub sample: SamplePair,
    pub descriptor: CurveDescriptor,
}

/// Descriptors for every sample of a dataset. Queries are exact linear
/// scans, run in parallel.
#[derive(Clone, Debug, Default)]
pub struct CurveIndex {
    pub entries: Vec<IndexEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Retrieved {
    pub entry: usize,
    pub distance: f64,
}

impl CurveIndex {
    pub fn build(dir: &Path, samples: &[SamplePair], source: DescriptorSource) -> Result<Self, SynthesisError> {
        let entries = samples
            .par_iter()
            .map(|s| {
                let target = match source {
                    DescriptorSource::Trajectory => {
                        let traj = trace(&s.instance, s.steps).map_err(untraceable(&s.id))?;
                        CurveTarget::from_trajectory(&traj)
                    }
                    DescriptorSource::Image => {
                        let path = resolve(dir, &s.curve_image);
                        let img = ImageBuffer::load(&path).map_err(|source| SynthesisError::Image { path, source })?;
                        CurveTarget::from_image(&img)?
                    }
                };
                let (descriptor, _) = target.describe()?;
                Ok(IndexEntry { sample: s.clone(), descriptor })
            })
            .collect::<Result<Vec<_>, SynthesisError>>()?;
        Ok(Self { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The `k` nearest entries by descriptor distance, nearest first; ties
    /// keep manifest order.
    pub fn retrieve(&self, target: &CurveDescriptor, k: usize) -> Result<Vec<Retrieved>, SynthesisError> {
        if self.entries.is_empty() {
            return Err(SynthesisError::EmptyDataset);
        }
        let mut all: Vec<Retrieved> = self
            .entries
            .par_iter()
            .enumerate()
            .map(|(entry, e)| Retrieved { entry, distance: descriptor_distance(target, &e.descriptor) })
            .collect();
        all.sort_by(|a, b| a.distance.total_cmp(&b.distance).then(a.entry.cmp(&b.entry)));
        all.truncate(k);
        Ok(all)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RefineOptions {
    pub max_evals: usize,
    pub steps: usize,
    /// Initial simplex edge, relative to each parameter's magnitude.
    pub initial_step: f64,
    pub ftol: f64,
}

impl Default for RefineOptions {
    fn default() -> Self {
        Self { max_evals: 500, steps: DEFAULT_STEPS, initial_step: 0.05, ftol: 1e-12 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefinementResult {
    pub initial: LinkageInstance,
    pub optimized: LinkageInstance,
    pub initial_chamfer: f64,
    pub final_chamfer: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

/// Chamfer distance between the traced curve and `target`, or
/// [`INFEASIBLE_PENALTY`] when the instance cannot complete a cycle.
pub fn objective(instance: &LinkageInstance, target: &[Point], steps: usize) -> f64 {
    match trace(instance, steps) {
        Ok(traj) => chamfer(&traj.points, target).unwrap_or(INFEASIBLE_PENALTY),
        Err(_) => INFEASIBLE_PENALTY,
    }
}

/// Simplex search over the instance's continuous parameters. Returns the
/// best point evaluated, so the final objective never exceeds the initial.
pub fn refine(instance: &LinkageInstance, target: &[Point], options: &RefineOptions) -> RefinementResult {
    let x0 = instance.params();
    let steps: Vec<f64> = x0.iter().map(|v| options.initial_step * v.abs().max(0.2)).collect();
    let initial_chamfer = objective(instance, target, options.steps);
    let r = nelder_mead(
        |x| objective(&instance.with_params(x), target, options.steps),
        &x0,
        &steps,
        options.max_evals,
        options.ftol,
    );
    let (optimized, final_chamfer) =
        if r.fx < initial_chamfer { (instance.with_params(&r.x), r.fx) } else { (instance.clone(), initial_chamfer) };
    RefinementResult {
        initial: instance.clone(),
        optimized,
        initial_chamfer,
        final_chamfer,
        iterations: r.iterations,
        evaluations: r.evaluations,
        converged: r.converged,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthesisOptions {
    pub top_k: usize,
    pub refine: RefineOptions,
    pub image_size: u32,
    pub margin: f64,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        Self { top_k: 5, refine: RefineOptions::default(), image_size: DEFAULT_IMAGE_SIZE, margin: 0.05 }
    }
}

/// One refined retrieval candidate. Chamfer values are in the candidate's
/// world frame; `relative_chamfer` divides by the curve's RMS radius so
/// candidates of different sizes compare fairly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub sample_id: String,
    pub descriptor_distance: f64,
    pub relative_chamfer: f64,
    /// RMS radius of the retrieved curve.
    pub scale: f64,
    pub refinement: RefinementResult,
}

#[derive(Clone, Debug)]
pub struct SynthesisOutcome {
    pub image: ImageBuffer,
    pub transform: Transform,
    pub instance: LinkageInstance,
    pub best: usize,
    pub candidates: Vec<Candidate>,
}

impl SynthesisOutcome {
    pub fn refinement(&self) -> &RefinementResult {
        &self.candidates[self.best].refinement
    }
}

fn untraceable(id: &str) -> impl FnOnce(crate::kinematics::KinematicsError) -> SynthesisError + '_ {
    move |e| SynthesisError::Sample { id: id.to_string(), reason: e.to_string() }
}

/// Places `target` in the world frame of `sample`'s curve by matching
/// centroid and RMS radius. Image targets are matched against the sample's
/// own curve image, extracted the same way, and then mapped to world units
/// through the sample's transform, so both sides carry the same pixel bias.
/// Also returns the RMS radius of the sample's traced curve.
pub fn align_target(
    target: &CurveTarget,
    sample: &SamplePair,
    steps: usize,
) -> Result<(Vec<Point>, f64), SynthesisError> {
    let (_, norm_t) = target.describe()?;
    let traj = trace(&sample.instance, steps).map_err(untraceable(&sample.id))?;
    let (_, norm_world) = describe(&traj.points, None).ok_or(SynthesisError::DegenerateTarget)?;
    let aligned = match target.frame {
        TargetFrame::World => target.points.iter().map(|&p| norm_world.inverse(norm_t.forward(p))).collect(),
        TargetFrame::Pixel => {
            let img = render_curve(&traj, &sample.transform, sample.image_size, false);
            let (_, norm_px) = CurveTarget::from_image(&img)?.describe()?;
            target
                .points
                .iter()
                .map(|&p| {
                    let q = norm_px.inverse(norm_t.forward(p));
                    sample.transform.to_world(q.x, -q.y)
                })
                .collect()
        }
    };
    Ok((aligned, norm_world.scale))
}

/// Retrieves the `top_k` nearest dataset curves, refines each toward the
/// target, and renders the best mechanism at θ = 0.
pub fn synthesize(
    target: &CurveTarget,
    index: &CurveIndex,
    options: &SynthesisOptions,
) -> Result<SynthesisOutcome, SynthesisError> {
    let (descriptor, _) = target.describe()?;
    let hits = index.retrieve(&descriptor, options.top_k.max(1))?;
    let candidates = hits
        .par_iter()
        .map(|hit| {
            let sample = &index.entries[hit.entry].sample;
            let (aligned, scale) = align_target(target, sample, options.refine.steps)?;
            let refinement = refine(&sample.instance, &aligned, &options.refine);
            Ok(Candidate {
                sample_id: sample.id.clone(),
                descriptor_distance: hit.distance,
                relative_chamfer: refinement.final_chamfer / scale,
                scale,
                refinement,
            })
        })
        .collect::<Result<Vec<_>, SynthesisError>>()?;
    let best = (0..candidates.len())
        .min_by(|&a, &b| candidates[a].relative_chamfer.total_cmp(&candidates[b].relative_chamfer))
        .expect("at least one candidate");
    let instance = candidates[best].refinement.optimized.clone();
    let transform = fit_transform(&instance, options.refine.steps, options.image_size, options.margin)?;
    let image =
        render_mechanism(&instance, 0.0, &transform, options.image_size).map_err(untraceable(&instance.graph_id))?;
    Ok(SynthesisOutcome { image, transform, instance, best, candidates })
}

/// Transform that frames every drawn node over a full cycle, as used for
/// dataset images.
pub fn fit_transform(
    instance: &LinkageInstance,
    steps: usize,
    size: u32,
    margin: f64,
) -> Result<Transform, SynthesisError> {
    let configs = sweep(instance, steps).map_err(untraceable(&instance.graph_id))?;
    let bbox = BBox::from_points(drawn_points(instance, &configs)).expect("non-empty sweep");
    Ok(Transform::fit(bbox, size, margin))
}
