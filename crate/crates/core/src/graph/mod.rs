//! Triangle-layer mechanism graphs.
//!
//! Every graph starts from three seed nodes: the crank pivot `FixedA` (id 0),
//! the second ground `FixedB` (id 1) and the crank tip `Input` (id 2). Each
//! triangle layer adds one node pinned to two existing parents. For slider
//! seeds node 1 stands for the ground rail instead of a pivot; the graph
//! machinery is identical.

mod canon;
mod catalog;
mod enumerate;
mod filter;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use canon::{canonical_form, CanonicalCode};
pub use catalog::{build_catalog, Catalog, CatalogEntry, FilterReport, StageCounts};
pub use enumerate::{count_combinations, enumerate_sequences, MAX_COUNT_LAYERS, MAX_ENUM_LAYERS};
pub use filter::{apply_filters, Filter};

pub const FIXED_A: usize = 0;
pub const FIXED_B: usize = 1;
pub const INPUT: usize = 2;
pub const SEED_NODES: usize = 3;

/// Largest layer count accepted by [`build_catalog`].
pub const MAX_CATALOG_LAYERS: usize = 5;

/// Canonical labeling is brute force over node permutations; keep graphs small.
pub const MAX_CANON_NODES: usize = 9;

/// Two parent node ids, stored ascending.
pub type ParentPair = [usize; 2];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("{layers} triangle layers exceeds the supported maximum of {max}")]
    TooManyLayers { layers: usize, max: usize },
    #[error("layer {layer}: invalid parent pair {pair:?} with {available} nodes available")]
    InvalidParents { layer: usize, pair: ParentPair, available: usize },
    #[error("graph has no unique drawing node")]
    NoUniqueDrawingNode,
    #[error("graph with {nodes} nodes is too large for canonical labeling")]
    TooLargeForCanon { nodes: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeedKind {
    Revolute,
    Slider,
}

impl SeedKind {
    /// Prefix used in catalog ids (`T3-2`, `ST3-2`).
    pub fn id_prefix(self) -> &'static str {
        match self {
            SeedKind::Revolute => "T",
            SeedKind::Slider => "ST",
        }
    }

    pub(crate) fn code_byte(self) -> u8 {
        match self {
            SeedKind::Revolute => b'R',
            SeedKind::Slider => b'S',
        }
    }
}

impl fmt::Display for SeedKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeedKind::Revolute => "revolute",
            SeedKind::Slider => "slider",
        })
    }
}

impl std::str::FromStr for SeedKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "revolute" => Ok(SeedKind::Revolute),
            "slider" => Ok(SeedKind::Slider),
            other => Err(format!("unknown seed kind `{other}` (expected revolute or slider)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeRole {
    FixedA,
    FixedB,
    Input,
    Added,
}

pub fn role_of(node: usize) -> NodeRole {
    match node {
        FIXED_A => NodeRole::FixedA,
        FIXED_B => NodeRole::FixedB,
        INPUT => NodeRole::Input,
        _ => NodeRole::Added,
    }
}

/// Ordered parent-pair choices, one per triangle layer.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConstructionSequence {
    pub seed_kind: SeedKind,
    pub layers: Vec<ParentPair>,
}

impl ConstructionSequence {
    /// Builds a sequence after checking every pair references earlier nodes.
    pub fn new(seed_kind: SeedKind, layers: Vec<ParentPair>) -> Result<Self, GraphError> {
        for (i, &[p, q]) in layers.iter().enumerate() {
            let available = SEED_NODES + i;
            if p >= q || q >= available {
                return Err(GraphError::InvalidParents { layer: i + 1, pair: [p, q], available });
            }
        }
        Ok(Self { seed_kind, layers })
    }

    pub fn k(&self) -> usize {
        self.layers.len()
    }

    pub fn node_count(&self) -> usize {
        SEED_NODES + self.layers.len()
    }

    /// Parent pair of an added node, `None` for seed nodes.
    pub fn parents_of(&self, node: usize) -> Option<ParentPair> {
        node.checked_sub(SEED_NODES).and_then(|i| self.layers.get(i)).copied()
    }

    /// Per-node flag: does the node parent anything? The crank counts as
    /// `FixedA` parenting `Input`.
    pub(crate) fn has_children(&self) -> Vec<bool> {
        let mut used = vec![false; self.node_count()];
        used[FIXED_A] = true;
        for &[p, q] in &self.layers {
            used[p] = true;
            used[q] = true;
        }
        used
    }

    /// Added nodes that parent nothing.
    pub(crate) fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        let used = self.has_children();
        (SEED_NODES..self.node_count()).filter(move |&n| !used[n])
    }
}

/// A construction sequence resolved into nodes, links and a drawing node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MechanismGraph {
    pub seed_kind: SeedKind,
    pub k: usize,
    pub parents: Vec<ParentPair>,
    pub links: BTreeSet<[usize; 2]>,
    pub drawing_node: usize,
}

impl MechanismGraph {
    pub fn from_sequence(seq: &ConstructionSequence) -> Result<Self, GraphError> {
        let mut leaves = seq.leaves();
        let drawing_node = match (leaves.next(), leaves.next()) {
            (Some(n), None) => n,
            _ => return Err(GraphError::NoUniqueDrawingNode),
        };
        Ok(Self {
            seed_kind: seq.seed_kind,
            k: seq.k(),
            parents: seq.layers.clone(),
            links: links_of(&seq.layers),
            drawing_node,
        })
    }

    pub fn node_count(&self) -> usize {
        SEED_NODES + self.k
    }

    pub fn nodes(&self) -> impl Iterator<Item = (usize, NodeRole)> {
        (0..self.node_count()).map(|n| (n, role_of(n)))
    }

    pub fn sequence(&self) -> ConstructionSequence {
        ConstructionSequence { seed_kind: self.seed_kind, layers: self.parents.clone() }
    }

    pub fn parents_of(&self, node: usize) -> Option<ParentPair> {
        node.checked_sub(SEED_NODES).and_then(|i| self.parents.get(i)).copied()
    }
}

/// Ground and crank links plus two links per added node.
pub(crate) fn links_of(layers: &[ParentPair]) -> BTreeSet<[usize; 2]> {
    let mut links = BTreeSet::new();
    links.insert([FIXED_A, FIXED_B]);
    links.insert([FIXED_A, INPUT]);
    for (i, &[p, q]) in layers.iter().enumerate() {
        let n = SEED_NODES + i;
        links.insert([p, n]);
        links.insert([q, n]);
    }
    links
}
