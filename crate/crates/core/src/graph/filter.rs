//! Structural filters over construction sequences.
//!
//! Each filter is a pure predicate, so the surviving set of the conjunction
//! does not depend on evaluation order. The per-stage counts reported in the
//! catalog apply them cumulatively in [`Filter::ALL`] order.

use rayon::prelude::*;

use super::{ConstructionSequence, MechanismGraph, FIXED_A, FIXED_B, INPUT, SEED_NODES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Filter {
    /// Exactly one node in the whole graph parents nothing (the crank counts
    /// as `FixedA` parenting `Input`). That node is the drawing node; both
    /// `FixedB` and `Input` must therefore drive something.
    SingleDrawingNode,
    /// No added node is pinned to both grounds (it would be a third fixed
    /// node), and no drawing node hangs directly off a ground, where it could
    /// only trace a circular arc or a line.
    TwoFixedNodes,
    /// No node is added onto a body that is already a rigid triangle.
    /// Triangulating a binary link is allowed: it turns the link into a
    /// ternary link.
    NoRedundantTriangles,
}

impl Filter {
    pub const ALL: [Filter; 3] = [Filter::SingleDrawingNode, Filter::TwoFixedNodes, Filter::NoRedundantTriangles];

    pub fn label(self) -> &'static str {
        match self {
            Filter::SingleDrawingNode => "Filter 1: One drawing node",
            Filter::TwoFixedNodes => "Filter 2: Two fixed nodes",
            Filter::NoRedundantTriangles => "Filter 3: No redundant links",
        }
    }

    pub fn accepts(self, seq: &ConstructionSequence) -> bool {
        match self {
            Filter::SingleDrawingNode => single_drawing_node(seq),
            Filter::TwoFixedNodes => two_fixed_nodes(seq),
            Filter::NoRedundantTriangles => no_redundant_triangles(seq),
        }
    }
}

fn single_drawing_node(seq: &ConstructionSequence) -> bool {
    seq.has_children().iter().filter(|used| !**used).count() == 1
}

fn is_fixed(node: usize) -> bool {
    node == FIXED_A || node == FIXED_B
}

fn two_fixed_nodes(seq: &ConstructionSequence) -> bool {
    if seq.layers.iter().any(|&[p, q]| is_fixed(p) && is_fixed(q)) {
        return false;
    }
    seq.leaves().all(|leaf| {
        let [p, q] = seq.layers[leaf - SEED_NODES];
        !is_fixed(p) && !is_fixed(q)
    })
}

fn no_redundant_triangles(seq: &ConstructionSequence) -> bool {
    // Bodies pairwise share at most one node, so a parent pair lies in at
    // most one of them.
    let mut bodies: Vec<Vec<usize>> = vec![vec![FIXED_A, FIXED_B], vec![FIXED_A, INPUT]];
    for (i, &[p, q]) in seq.layers.iter().enumerate() {
        let node = SEED_NODES + i;
        match bodies.iter_mut().find(|b| b.contains(&p) && b.contains(&q)) {
            Some(body) if body.len() >= 3 => return false,
            Some(body) => body.push(node),
            None => {
                bodies.push(vec![p, node]);
                bodies.push(vec![q, node]);
            }
        }
    }
    true
}

/// Sequences passing every filter, resolved to graphs, in input order.
pub fn apply_filters(sequences: &[ConstructionSequence]) -> Vec<MechanismGraph> {
    sequences
        .par_iter()
        .filter(|s| Filter::ALL.iter().all(|f| f.accepts(s)))
        .map(|s| MechanismGraph::from_sequence(s).expect("filtered sequence has one drawing node"))
        .collect()
}
