//! Planar linkage toolkit: triangle-layer graph enumeration, kinematic
//! simulation, paired image datasets, PSNR evaluation and a retrieval plus
//! refinement synthesis baseline.
//!
//! The commonly shared types are re-exported at the crate root.

pub mod geom;
pub mod graph;
pub mod kinematics;
pub mod metrics;
pub mod raster;
pub mod sampling;
pub mod synthesis;

pub use geom::{BBox, Point};
pub use graph::{
    build_catalog, CanonicalCode, Catalog, CatalogEntry, ConstructionSequence, FilterReport, GraphError,
    MechanismGraph, SeedKind,
};
pub use kinematics::{trace, Branch, Constraint, GrashofClass, KinematicsError, LinkageInstance, Rail, Trajectory};
pub use metrics::{EvalReport, MetricsError, Task};
pub use raster::{ImageBuffer, RasterError, Transform};
pub use sampling::{Dataset, SampleConfig, SampleError, SamplePair, Split};
pub use synthesis::{CurveDescriptor, CurveTarget, RefinementResult, SynthesisError, SynthesisOutcome};
