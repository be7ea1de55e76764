use serde::{Deserialize, Serialize};

use super::SampleError;
use crate::kinematics::{DEFAULT_STEPS, MIN_STEPS};
use crate::raster::{DEFAULT_IMAGE_SIZE, MAX_IMAGE_SIZE, MIN_IMAGE_SIZE};

/// Everything that determines a generated dataset besides the graph list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SampleConfig {
    /// Accepted samples per graph.
    pub per_graph: usize,
    /// Range for crank and link lengths, world units.
    pub length_range: [f64; 2],
    /// Fixed pivots (and rail origins) are drawn from this square.
    pub pivot_range: [f64; 2],
    /// Signed offset of a slider's line from the ground rail.
    pub rail_offset_range: [f64; 2],
    pub steps: usize,
    pub image_size: u32,
    /// Free border on each side, as a fraction of the image size.
    pub margin: f64,
    pub seed: u64,
    /// Give up on a graph after `per_graph · rejection_factor` draws.
    pub rejection_factor: usize,
    /// Redraws of a single node's lengths before the whole draw is rejected.
    pub node_redraws: usize,
    /// Smallest accepted side of the curve's bounding box, as a fraction of
    /// the nominal canvas side.
    pub min_curve_extent: f64,
    /// Nodes must stay within this multiple of the nominal canvas half-width.
    pub bounds_factor: f64,
    pub train_ratio: f64,
}

/// Side length of the nominal canvas [-1, 1]².
pub const CANVAS_SIDE: f64 = 2.0;

impl Default for SampleConfig {
    fn default() -> Self {
        Self {
            per_graph: 10_000,
            length_range: [0.1, 0.9],
            pivot_range: [-0.5, 0.5],
            rail_offset_range: [-0.3, 0.3],
            steps: DEFAULT_STEPS,
            image_size: DEFAULT_IMAGE_SIZE,
            margin: 0.05,
            seed: 0,
            rejection_factor: 1000,
            node_redraws: 64,
            min_curve_extent: 0.05,
            bounds_factor: 3.0,
            train_ratio: 0.95,
        }
    }
}

fn ordered(r: [f64; 2]) -> bool {
    r[0].is_finite() && r[1].is_finite() && r[0] < r[1]
}

impl SampleConfig {
    pub fn validate(&self) -> Result<(), SampleError> {
        let bad = |msg: &str| Err(SampleError::InvalidConfig(msg.to_string()));
        if self.per_graph == 0 {
            return bad("per_graph must be positive");
        }
        if !ordered(self.length_range) || self.length_range[0] <= 0.0 {
            return bad("length_range must be positive and ordered");
        }
        if !ordered(self.pivot_range) || !ordered(self.rail_offset_range) {
            return bad("pivot_range and rail_offset_range must be ordered");
        }
        if self.steps < MIN_STEPS {
            return bad("steps must be at least 8");
        }
        if !(MIN_IMAGE_SIZE..=MAX_IMAGE_SIZE).contains(&self.image_size) {
            return bad("image_size must be within 64..=256");
        }
        if !(0.0..=0.25).contains(&self.margin) {
            return bad("margin must be within [0, 0.25]");
        }
        if self.rejection_factor == 0 || self.node_redraws == 0 {
            return bad("rejection_factor and node_redraws must be positive");
        }
        if !(self.min_curve_extent >= 0.0 && self.bounds_factor > 0.0) {
            return bad("min_curve_extent must be >= 0 and bounds_factor > 0");
        }
        if !(self.train_ratio > 0.0 && self.train_ratio < 1.0) {
            return bad("train_ratio must be within (0, 1)");
        }
        Ok(())
    }
}
