use std::f64::consts::{PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::config::{SampleConfig, CANVAS_SIDE};
use super::rng::sample_rng;
use crate::geom::{BBox, Point};
use crate::graph::{MechanismGraph, SeedKind, FIXED_B, SEED_NODES};
use crate::kinematics::{
    solve_dyad, solve_slider, sweep, AddedNode, Branch, Configuration, Constraint, LinkageInstance, Rail, Trajectory,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RejectReason {
    InfeasibleCycle,
    DegenerateCurve,
    OutOfBounds,
}

impl std::fmt::Display for RejectReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RejectReason::InfeasibleCycle => "infeasible cycle",
            RejectReason::DegenerateCurve => "degenerate curve",
            RejectReason::OutOfBounds => "out of bounds",
        })
    }
}

/// A draw that passed screening, with what rendering needs.
#[derive(Clone, Debug)]
pub struct Accepted {
    pub instance: LinkageInstance,
    pub trajectory: Trajectory,
    /// Bounds of every drawn node over the whole cycle.
    pub sweep_bbox: BBox,
}

fn uniform(rng: &mut impl Rng, [lo, hi]: [f64; 2]) -> f64 {
    rng.random_range(lo..hi)
}

fn branch(rng: &mut impl Rng) -> Branch {
    if rng.random_bool(0.5) {
        Branch::Positive
    } else {
        Branch::Negative
    }
}

/// Draws instance `index` of `graph` and screens it.
///
/// Grounds, crank and per-node lengths are uniform over the configured
/// ranges. A node whose lengths cannot be assembled at the start pose is
/// redrawn (up to `node_redraws` times), which conditions the draw on
/// assembling at θ = 0 without changing the distribution otherwise.
pub fn sample_instance(
    graph: &MechanismGraph,
    graph_id: &str,
    index: u64,
    config: &SampleConfig,
) -> Result<Accepted, RejectReason> {
    let mut rng = sample_rng(config.seed, graph_id, index);
    let pivot = |rng: &mut _| Point::new(uniform(rng, config.pivot_range), uniform(rng, config.pivot_range));

    let fixed_a = pivot(&mut rng);
    let (fixed_b, rail) = match graph.seed_kind {
        SeedKind::Revolute => (Some(pivot(&mut rng)), None),
        SeedKind::Slider => {
            let origin = pivot(&mut rng);
            (None, Some(Rail::new(origin, rng.random_range(0.0..PI))))
        }
    };
    let crank_length = uniform(&mut rng, config.length_range);
    let crank_phase = rng.random_range(0.0..TAU);

    let mut instance = LinkageInstance {
        graph_id: graph_id.to_string(),
        seed_kind: graph.seed_kind,
        fixed_a,
        fixed_b,
        rail,
        crank_length,
        crank_phase,
        nodes: Vec::with_capacity(graph.k),
    };
    let mut pos = vec![fixed_a, instance.second_ground(), fixed_a + Point::from_angle(crank_phase) * crank_length];

    for (i, &parents) in graph.parents.iter().enumerate() {
        let on_rail = graph.seed_kind == SeedKind::Slider && parents.contains(&FIXED_B);
        let mut placed = None;
        for _ in 0..config.node_redraws {
            let constraint = if on_rail {
                Constraint::Slider {
                    offset: uniform(&mut rng, config.rail_offset_range),
                    len: uniform(&mut rng, config.length_range),
                }
            } else {
                Constraint::Dyad {
                    len_p: uniform(&mut rng, config.length_range),
                    len_q: uniform(&mut rng, config.length_range),
                }
            };
            let node = AddedNode { parents, constraint, branch: branch(&mut rng) };
            let [p, q] = parents;
            let solved = match constraint {
                Constraint::Dyad { len_p, len_q } => solve_dyad(pos[p], pos[q], len_p, len_q, node.branch),
                Constraint::Slider { offset, len } => {
                    let line = rail.expect("slider seed").shifted(offset);
                    solve_slider(pos[node.free_parent()], &line, len, node.branch)
                }
            };
            if let Ok(r) = solved {
                placed = Some((node, r));
                break;
            }
        }
        let (node, r) = placed.ok_or(RejectReason::InfeasibleCycle)?;
        debug_assert_eq!(pos.len(), SEED_NODES + i);
        instance.nodes.push(node);
        pos.push(r);
    }
    screen(instance, config)
}

/// Accept/reject test applied to every draw: the crank must turn fully, the
/// curve must not collapse, and nothing may wander far off the canvas.
pub fn screen(instance: LinkageInstance, config: &SampleConfig) -> Result<Accepted, RejectReason> {
    let configs = sweep(&instance, config.steps).map_err(|_| RejectReason::InfeasibleCycle)?;
    let trajectory = Trajectory::from_points(configs.iter().map(Configuration::drawing_point).collect());

    let curve_bb = BBox::from_points(trajectory.points.iter().copied()).expect("non-empty");
    if curve_bb.width().min(curve_bb.height()) < config.min_curve_extent * CANVAS_SIDE {
        return Err(RejectReason::DegenerateCurve);
    }
    let limit = config.bounds_factor * CANVAS_SIDE / 2.0;
    let drawn = drawn_points(&instance, &configs);
    let sweep_bbox = BBox::from_points(drawn).expect("non-empty");
    let inside = |p: Point| p.x.abs() <= limit && p.y.abs() <= limit;
    if !inside(sweep_bbox.min) || !inside(sweep_bbox.max) {
        return Err(RejectReason::OutOfBounds);
    }
    Ok(Accepted { instance, trajectory, sweep_bbox })
}

/// Every node position that appears in a mechanism image, over all poses.
/// The rail anchor of slider seeds is not a drawn joint.
pub fn drawn_points<'a>(
    instance: &'a LinkageInstance,
    configs: &'a [Configuration],
) -> impl Iterator<Item = Point> + 'a {
    let skip_anchor = instance.seed_kind == SeedKind::Slider;
    configs.iter().flat_map(move |c| {
        c.positions.iter().enumerate().filter(move |(id, _)| !(skip_anchor && *id == FIXED_B)).map(|(_, &p)| p)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_catalog, ConstructionSequence};

    fn four_bar_graph() -> MechanismGraph {
        let seq = ConstructionSequence::new(SeedKind::Revolute, vec![[1, 2], [2, 3]]).unwrap();
        MechanismGraph::from_sequence(&seq).unwrap()
    }

    #[test]
    fn draws_are_deterministic() {
        let g = four_bar_graph();
        let cfg = SampleConfig::default();
        for index in 0..20 {
            let a = sample_instance(&g, "T2-1", index, &cfg);
            let b = sample_instance(&g, "T2-1", index, &cfg);
            match (a, b) {
                (Ok(a), Ok(b)) => {
                    assert_eq!(a.instance, b.instance);
                    assert_eq!(a.trajectory, b.trajectory);
                }
                (Err(a), Err(b)) => assert_eq!(a, b),
                _ => panic!("nondeterministic draw {index}"),
            }
        }
    }

    #[test]
    fn some_draws_are_accepted() {
        let g = four_bar_graph();
        let cfg = SampleConfig::default();
        let ok = (0..200).filter(|&i| sample_instance(&g, "T2-1", i, &cfg).is_ok()).count();
        assert!(ok > 20, "only {ok} of 200 accepted");
    }

    #[test]
    fn non_grashof_is_rejected() {
        let inst = LinkageInstance::four_bar(0.4, 0.3, 0.4, 0.8);
        assert_eq!(screen(inst, &SampleConfig::default()).unwrap_err(), RejectReason::InfeasibleCycle);
    }

    #[test]
    fn flat_curve_is_degenerate() {
        // A very short crank barely moves anything.
        let mut inst = LinkageInstance::four_bar(0.8, 0.02, 0.8, 0.8);
        inst.nodes[1].constraint = Constraint::Dyad { len_p: 0.5, len_q: 0.5 };
        assert_eq!(screen(inst, &SampleConfig::default()).unwrap_err(), RejectReason::DegenerateCurve);
    }

    #[test]
    fn far_nodes_are_out_of_bounds() {
        let mut inst = LinkageInstance::four_bar(4.0, 1.0, 3.0, 3.5);
        inst.fixed_b = Some(Point::new(4.0, 0.0));
        assert_eq!(screen(inst, &SampleConfig::default()).unwrap_err(), RejectReason::OutOfBounds);
    }

    #[test]
    fn accepted_draw_realizes_graph() {
        let cat = build_catalog(3, SeedKind::Slider).unwrap();
        let cfg = SampleConfig::default();
        for entry in &cat.entries {
            let g = entry.graph().unwrap();
            let hit = (0..2000).find_map(|i| sample_instance(&g, &entry.id, i, &cfg).ok());
            let acc = hit.unwrap_or_else(|| panic!("{} never accepted", entry.id));
            assert!(acc.instance.matches_graph(&g));
            acc.instance.validate().unwrap();
        }
    }
}
