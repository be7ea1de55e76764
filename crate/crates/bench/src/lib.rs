//! Fixed inputs shared by the benchmarks in `benches/`.

use linkforge_core::graph::build_catalog;
use linkforge_core::kinematics::trace;
use linkforge_core::{LinkageInstance, MechanismGraph, Point, SeedKind};

pub const STEPS: usize = 360;
pub const IMAGE_SIZE: u32 = 128;

/// Crank-rocker used by the kinematics, raster and refinement benches.
pub fn four_bar() -> LinkageInstance {
    LinkageInstance::four_bar(0.8, 0.25, 0.7, 0.7)
}

/// Nearby curve the refinement bench fits `four_bar()` to.
pub fn refine_target() -> Vec<Point> {
    trace(&LinkageInstance::four_bar(0.8, 0.27, 0.7, 0.72), STEPS).expect("crank-rocker traces").points
}

/// The single T2 graph and its id.
pub fn t2_graph() -> (String, MechanismGraph) {
    let catalog = build_catalog(2, SeedKind::Revolute).expect("T2 catalog");
    let entry = &catalog.entries[0];
    (entry.id.clone(), entry.graph().expect("catalog graph"))
}
