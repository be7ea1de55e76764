use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::instance::{Constraint, LinkageInstance};
use super::solve::{solve_dyad, solve_slider, Branch, SolveError};
use super::KinematicsError;
use crate::geom::Point;
use crate::graph::{SeedKind, FIXED_A, FIXED_B, INPUT, SEED_NODES};

/// Default number of crank steps per cycle.
pub const DEFAULT_STEPS: usize = 360;
pub const MIN_STEPS: usize = 8;

/// Node positions at one crank angle, indexed by node id. For slider seeds
/// node 1 holds the rail origin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub theta: f64,
    pub positions: Vec<Point>,
}

impl Configuration {
    pub fn drawing_point(&self) -> Point {
        *self.positions.last().expect("configuration has nodes")
    }
}

/// Drawing-node path over one crank cycle, sampled uniformly in crank angle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub points: Vec<Point>,
    /// World units per radian of crank travel.
    pub speeds: Vec<f64>,
}

impl Trajectory {
    /// Builds a closed trajectory, deriving speeds from consecutive points.
    pub fn from_points(points: Vec<Point>) -> Self {
        let n = points.len();
        let dtheta = TAU / n as f64;
        let speeds = (0..n).map(|i| points[(i + 1) % n].distance(points[i]) / dtheta).collect();
        Self { points, speeds }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn speed_range(&self) -> (f64, f64) {
        self.speeds.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &s| (lo.min(s), hi.max(s)))
    }
}

/// Solves every node at crank angle `theta`, layer by layer.
pub fn assemble(instance: &LinkageInstance, theta: f64) -> Result<Configuration, KinematicsError> {
    let n = instance.node_count();
    let mut pos = Vec::with_capacity(n);
    pos.push(instance.fixed_a);
    pos.push(instance.second_ground());
    pos.push(instance.fixed_a + Point::from_angle(theta + instance.crank_phase) * instance.crank_length);

    for (i, node) in instance.nodes.iter().enumerate() {
        let id = SEED_NODES + i;
        let fail = |source| KinematicsError::Assembly { node: id, theta, source };
        let [p, q] = node.parents;
        let r = match node.constraint {
            Constraint::Dyad { len_p, len_q } => solve_dyad(pos[p], pos[q], len_p, len_q, node.branch),
            Constraint::Slider { offset, len } => {
                let rail = instance.rail.ok_or(fail(SolveError::Degenerate))?.shifted(offset);
                solve_slider(pos[node.free_parent()], &rail, len, node.branch)
            }
        }
        .map_err(fail)?;
        pos.push(r);
    }
    Ok(Configuration { theta, positions: pos })
}

/// Crank angle of step `i` on an `n`-step grid; exact modulo the grid.
pub fn step_angle(i: usize, n: usize) -> f64 {
    TAU * (i % n) as f64 / n as f64
}

/// Full configurations for every grid step.
pub fn sweep(instance: &LinkageInstance, steps: usize) -> Result<Vec<Configuration>, KinematicsError> {
    if steps < MIN_STEPS {
        return Err(KinematicsError::TooFewSteps { steps });
    }
    instance.validate()?;
    (0..steps)
        .map(|i| {
            assemble(instance, step_angle(i, steps)).map_err(|e| match e {
                KinematicsError::Assembly { node, theta, source } => {
                    KinematicsError::InfeasibleCycle { step: i, node, theta, source }
                }
                other => other,
            })
        })
        .collect()
}

/// Drawing-node trajectory over one full crank revolution.
pub fn trace(instance: &LinkageInstance, steps: usize) -> Result<Trajectory, KinematicsError> {
    let configs = sweep(instance, steps)?;
    Ok(Trajectory::from_points(configs.iter().map(Configuration::drawing_point).collect()))
}

/// Largest constraint violation over every link of a configuration.
pub fn max_link_residual(instance: &LinkageInstance, config: &Configuration) -> f64 {
    let pos = &config.positions;
    let mut worst = (pos[INPUT].distance(pos[FIXED_A]) - instance.crank_length).abs();
    if let Some(b) = instance.fixed_b {
        worst = worst.max(pos[FIXED_B].distance(b));
    }
    for (i, node) in instance.nodes.iter().enumerate() {
        let r = pos[SEED_NODES + i];
        let [p, q] = node.parents;
        let err = match node.constraint {
            Constraint::Dyad { len_p, len_q } => {
                (r.distance(pos[p]) - len_p).abs().max((r.distance(pos[q]) - len_q).abs())
            }
            Constraint::Slider { offset, len } => {
                let rail = instance.rail.expect("validated slider instance");
                let off = (rail.signed_distance(r) - offset).abs();
                off.max((r.distance(pos[node.free_parent()]) - len).abs())
            }
        };
        worst = worst.max(err);
    }
    worst
}

/// Branch each added node actually sits on in `config`.
pub fn realized_branches(instance: &LinkageInstance, config: &Configuration) -> Vec<Branch> {
    let pos = &config.positions;
    instance
        .nodes
        .iter()
        .enumerate()
        .map(|(i, node)| {
            let r = pos[SEED_NODES + i];
            let [p, q] = node.parents;
            let sign = match node.constraint {
                Constraint::Dyad { .. } => (pos[q] - pos[p]).cross(r - pos[p]),
                Constraint::Slider { .. } => {
                    let rail = instance.rail.expect("validated slider instance");
                    rail.parameter(r) - rail.parameter(pos[node.free_parent()])
                }
            };
            Branch::from_sign(sign)
        })
        .collect()
}

/// Crank-slider with a coupler point: slider block on the rail, drawing node
/// rigid with the coupler.
pub fn crank_slider(crank: f64, coupler: f64, offset: f64) -> LinkageInstance {
    use super::instance::AddedNode;
    use super::solve::Rail;
    LinkageInstance {
        graph_id: "ST2-1".into(),
        seed_kind: SeedKind::Slider,
        fixed_a: Point::ORIGIN,
        fixed_b: None,
        rail: Some(Rail::new(Point::ORIGIN, 0.0)),
        crank_length: crank,
        crank_phase: 0.0,
        nodes: vec![
            AddedNode {
                parents: [1, 2],
                constraint: Constraint::Slider { offset, len: coupler },
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
