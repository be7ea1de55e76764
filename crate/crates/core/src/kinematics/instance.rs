use serde::{Deserialize, Serialize};

use super::solve::{Branch, Rail};
use super::KinematicsError;
use crate::geom::Point;
use crate::graph::{MechanismGraph, ParentPair, SeedKind, FIXED_B, SEED_NODES};

/// How an added node is pinned to its parents.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Constraint {
    /// Distances to the first and second parent.
    Dyad { len_p: f64, len_q: f64 },
    /// One parent is the ground rail: the node slides along the rail shifted
    /// by `offset` and keeps distance `len` to its other parent.
    Slider { offset: f64, len: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AddedNode {
    pub parents: ParentPair,
    #[serde(flatten)]
    pub constraint: Constraint,
    pub branch: Branch,
}

impl AddedNode {
    /// Parent that is not the rail, for slider constraints.
    pub fn free_parent(&self) -> usize {
        let [p, q] = self.parents;
        if p == FIXED_B {
            q
        } else {
            p
        }
    }
}

/// A mechanism graph with concrete geometry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkageInstance {
    pub graph_id: String,
    pub seed_kind: SeedKind,
    pub fixed_a: Point,
    /// Second ground pivot; revolute seeds only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_b: Option<Point>,
    /// Ground rail; slider seeds only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rail: Option<Rail>,
    pub crank_length: f64,
    pub crank_phase: f64,
    pub nodes: Vec<AddedNode>,
}

fn positive(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

impl LinkageInstance {
    pub fn k(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_count(&self) -> usize {
        SEED_NODES + self.nodes.len()
    }

    /// The drawing node is the last added node.
    pub fn drawing_node(&self) -> usize {
        self.node_count() - 1
    }

    pub fn parents(&self) -> Vec<ParentPair> {
        self.nodes.iter().map(|n| n.parents).collect()
    }

    /// Where node 1 sits in a configuration: the pivot or the rail origin.
    pub fn second_ground(&self) -> Point {
        match (self.fixed_b, self.rail) {
            (Some(b), _) => b,
            (None, Some(rail)) => rail.origin,
            (None, None) => Point::ORIGIN,
        }
    }

    pub fn validate(&self) -> Result<(), KinematicsError> {
        let invalid = |msg: String| Err(KinematicsError::InvalidInstance(msg));
        match self.seed_kind {
            SeedKind::Revolute if self.fixed_b.is_none() || self.rail.is_some() => {
                return invalid("revolute instances need fixed_b and no rail".into());
            }
            SeedKind::Slider if self.rail.is_none() || self.fixed_b.is_some() => {
                return invalid("slider instances need a rail and no fixed_b".into());
            }
            _ => {}
        }
        if let Some(rail) = &self.rail {
            if (rail.direction.norm() - 1.0).abs() > 1e-9 || !rail.origin.is_finite() {
                return invalid("rail direction must be a unit vector".into());
            }
        }
        if !self.fixed_a.is_finite() || !self.second_ground().is_finite() {
            return invalid("ground positions must be finite".into());
        }
        if !positive(self.crank_length) || !self.crank_phase.is_finite() {
            return invalid("crank length must be positive and phase finite".into());
        }
        for (i, node) in self.nodes.iter().enumerate() {
            let id = SEED_NODES + i;
            let [p, q] = node.parents;
            if p >= q || q >= id {
                return invalid(format!("node {id}: bad parents {:?}", node.parents));
            }
            let on_rail = self.seed_kind == SeedKind::Slider && (p == FIXED_B || q == FIXED_B);
            match node.constraint {
                Constraint::Dyad { len_p, len_q } => {
                    if on_rail {
                        return invalid(format!("node {id}: rail parent needs a slider constraint"));
                    }
                    if !positive(len_p) || !positive(len_q) {
                        return invalid(format!("node {id}: lengths must be positive"));
                    }
                }
                Constraint::Slider { offset, len } => {
                    if !on_rail {
                        return invalid(format!("node {id}: slider constraint without a rail parent"));
                    }
                    if !offset.is_finite() || !positive(len) {
                        return invalid(format!("node {id}: bad slider offset/length"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Does this instance realize `graph`?
    pub fn matches_graph(&self, graph: &MechanismGraph) -> bool {
        self.seed_kind == graph.seed_kind && self.parents() == graph.parents
    }

    /// Continuous parameters in a fixed order: grounds, crank, then two
    /// values per added node. Slider rails contribute their angle as well.
    pub fn params(&self) -> Vec<f64> {
        let mut v = vec![self.fixed_a.x, self.fixed_a.y];
        if let Some(b) = self.fixed_b {
            v.extend([b.x, b.y]);
        }
        if let Some(rail) = self.rail {
            v.extend([rail.origin.x, rail.origin.y, rail.direction.y.atan2(rail.direction.x)]);
        }
        v.extend([self.crank_length, self.crank_phase]);
        for node in &self.nodes {
            match node.constraint {
                Constraint::Dyad { len_p, len_q } => v.extend([len_p, len_q]),
                Constraint::Slider { offset, len } => v.extend([offset, len]),
            }
        }
        v
    }

    /// Copy with parameters replaced; inverse of [`params`](Self::params).
    /// The result may be invalid (e.g. negative lengths).
    pub fn with_params(&self, params: &[f64]) -> LinkageInstance {
        assert_eq!(params.len(), self.params().len(), "parameter vector length");
        let mut it = params.iter().copied();
        let mut next = || it.next().expect("length checked");
        let mut out = self.clone();
        out.fixed_a = Point::new(next(), next());
        if out.fixed_b.is_some() {
            out.fixed_b = Some(Point::new(next(), next()));
        }
        if out.rail.is_some() {
            let origin = Point::new(next(), next());
            out.rail = Some(Rail::new(origin, next()));
        }
        out.crank_length = next();
        out.crank_phase = next();
        for node in &mut out.nodes {
            node.constraint = match node.constraint {
                Constraint::Dyad { .. } => Constraint::Dyad { len_p: next(), len_q: next() },
                Constraint::Slider { .. } => Constraint::Slider { offset: next(), len: next() },
            };
        }
        out
    }

    /// Classic four-bar with an equilateral coupler point, ground along +x
    /// from the origin. Lengths follow the Grashof naming.
    pub fn four_bar(ground: f64, crank: f64, coupler: f64, rocker: f64) -> LinkageInstance {
        LinkageInstance {
            graph_id: "T2-1".into(),
            seed_kind: SeedKind::Revolute,
            fixed_a: Point::ORIGIN,
            fixed_b: Some(Point::new(ground, 0.0)),
            rail: None,
            crank_length: crank,
            crank_phase: 0.0,
            nodes: vec![
                AddedNode {
                    parents: [1, 2],
                    constraint: Constraint::Dyad { len_p: rocker, len_q: coupler },
                    branch: Branch::Positive,
                },
                AddedNode {
                    parents: [2, 3],
                    constraint: Constraint::Dyad { len_p: coupler, len_q: coupler },
                    branch: Branch::Positive,
                },
            ],
        }
    }
}
