use std::sync::OnceLock;

use linkforge_core::graph::build_catalog;
use linkforge_core::kinematics::trace;
use linkforge_core::sampling::{generate_dataset, resolve, SampleConfig};
use linkforge_core::synthesis::{
    describe, descriptor_distance, nelder_mead, synthesize, CurveIndex, CurveTarget, DescriptorSource, RefineOptions,
    SynthesisError, SynthesisOptions,
};
use linkforge_core::{Dataset, ImageBuffer, Point, SeedKind};
use proptest::prelude::*;
use tempfile::TempDir;

struct Fixture {
    dir: TempDir,
    dataset: Dataset,
    by_trajectory: CurveIndex,
    by_image: CurveIndex,
}

fn fixture() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let dir = tempfile::tempdir().unwrap();
        let graphs: Vec<_> = build_catalog(3, SeedKind::Revolute)
            .unwrap()
            .entries
            .iter()
            .map(|e| (e.id.clone(), e.graph().unwrap()))
            .collect();
        let config = SampleConfig { per_graph: 40, seed: 4, ..SampleConfig::default() };
        let dataset = generate_dataset(&graphs, &config, dir.path()).unwrap();
        let by_trajectory = CurveIndex::build(dir.path(), &dataset.samples, DescriptorSource::Trajectory).unwrap();
        let by_image = CurveIndex::build(dir.path(), &dataset.samples, DescriptorSource::Image).unwrap();
        Fixture { dir, dataset, by_trajectory, by_image }
    })
}

fn quick() -> SynthesisOptions {
    SynthesisOptions {
        top_k: 3,
        refine: RefineOptions { max_evals: 120, ..RefineOptions::default() },
        ..Default::default()
    }
}

#[test]
fn retrieval_matches_a_linear_scan() {
    let f = fixture();
    for probe in [0, 17, 99, 150] {
        let traj = trace(&f.dataset.samples[probe].instance, 360).unwrap();
        let (desc, _) = CurveTarget::from_trajectory(&traj).describe().unwrap();
        let mut scan: Vec<(f64, usize)> = f
            .by_trajectory
            .entries
            .iter()
            .enumerate()
            .map(|(i, e)| (descriptor_distance(&desc, &e.descriptor), i))
            .collect();
        scan.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let got = f.by_trajectory.retrieve(&desc, 10).unwrap();
        let got: Vec<(f64, usize)> = got.iter().map(|r| (r.distance, r.entry)).collect();
        assert_eq!(got, scan[..10].to_vec());
    }
}

#[test]
fn a_dataset_curve_retrieves_itself() {
    let f = fixture();
    for probe in [3, 44, 120] {
        let traj = trace(&f.dataset.samples[probe].instance, 360).unwrap();
        let (desc, _) = CurveTarget::from_trajectory(&traj).describe().unwrap();
        let top = f.by_trajectory.retrieve(&desc, 1).unwrap()[0];
        assert_eq!(top.entry, probe);
        assert_eq!(top.distance, 0.0);
    }
}

#[test]
fn moved_and_scaled_targets_retrieve_the_same_curve() {
    let f = fixture();
    let traj = trace(&f.dataset.samples[60].instance, 360).unwrap();
    let base = CurveTarget::from_trajectory(&traj);
    let mut moved = base.clone();
    moved.points = base.points.iter().map(|p| *p * 3.5 + Point::new(-2.0, 7.0)).collect();
    let top = |t: &CurveTarget| f.by_trajectory.retrieve(&t.describe().unwrap().0, 1).unwrap()[0];
    assert_eq!(top(&base).entry, top(&moved).entry);
    assert!(top(&moved).distance < 1e-9);
}

#[test]
fn exact_trajectory_target_is_reproduced() {
    let f = fixture();
    let traj = trace(&f.dataset.samples[25].instance, 360).unwrap();
    let out = synthesize(&CurveTarget::from_trajectory(&traj), &f.by_trajectory, &quick()).unwrap();
    assert_eq!(out.candidates[out.best].sample_id, f.dataset.samples[25].id);
    assert!(out.refinement().final_chamfer < 1e-9, "{}", out.refinement().final_chamfer);
    assert_eq!(out.image.size(), 128);
}

#[test]
fn curve_image_target_finds_its_own_sample() {
    let f = fixture();
    let sample = &f.dataset.samples[80];
    let img = ImageBuffer::load(resolve(f.dir.path(), &sample.curve_image)).unwrap();
    let out = synthesize(&CurveTarget::from_image(&img).unwrap(), &f.by_image, &quick()).unwrap();
    assert_eq!(out.candidates[0].sample_id, sample.id);
    assert_eq!(out.candidates[0].descriptor_distance, 0.0);
    // The curve image is only known to pixel resolution: about one pixel of
    // Chamfer error relative to the curve radius remains.
    assert!(out.candidates[out.best].relative_chamfer < 0.05);
}

#[test]
fn refinement_never_worsens_any_candidate() {
    let f = fixture();
    let mut target = trace(&f.dataset.samples[10].instance, 360).unwrap();
    for p in &mut target.points {
        p.y *= 1.15;
    }
    let out = synthesize(&CurveTarget::from_trajectory(&target), &f.by_trajectory, &quick()).unwrap();
    for c in &out.candidates {
        assert!(c.refinement.final_chamfer <= c.refinement.initial_chamfer);
        assert!(c.refinement.evaluations <= 120);
    }
    let best = out.candidates[out.best].relative_chamfer;
    assert!(out.candidates.iter().all(|c| c.relative_chamfer >= best));
}

#[test]
fn blank_and_empty_inputs_are_errors() {
    assert!(matches!(CurveTarget::from_image(&ImageBuffer::new(64)), Err(SynthesisError::NoCurvePixels)));
    let empty = CurveIndex::default();
    let traj = trace(&fixture().dataset.samples[0].instance, 360).unwrap();
    let r = synthesize(&CurveTarget::from_trajectory(&traj), &empty, &quick());
    assert!(matches!(r, Err(SynthesisError::EmptyDataset)));
}

fn curve() -> impl Strategy<Value = Vec<Point>> {
    (0.2..2.0f64, 0.2..2.0f64, 0.0..1.0f64, 0usize..3).prop_map(|(a, b, wobble, lobes)| {
        (0..120)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / 120.0;
                let r = 1.0 + wobble * 0.3 * (t * (lobes + 2) as f64).sin();
                Point::new(a * r * t.cos(), b * r * t.sin())
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn descriptor_distance_is_a_symmetric_premetric(a in curve(), b in curve()) {
        let (da, _) = describe(&a, None).unwrap();
        let (db, _) = describe(&b, None).unwrap();
        prop_assert_eq!(descriptor_distance(&da, &da), 0.0);
        prop_assert!(descriptor_distance(&da, &db) >= 0.0);
        prop_assert!((descriptor_distance(&da, &db) - descriptor_distance(&db, &da)).abs() <= 1e-9);
    }

    #[test]
    fn descriptor_ignores_position_and_size(a in curve(), s in 0.01..100.0f64, dx in -5.0..5.0f64, dy in -5.0..5.0f64) {
        let moved: Vec<Point> = a.iter().map(|p| *p * s + Point::new(dx, dy)).collect();
        let (da, na) = describe(&a, None).unwrap();
        let (dm, nm) = describe(&moved, None).unwrap();
        prop_assert!(descriptor_distance(&da, &dm) <= 1e-9);
        prop_assert!((nm.scale / na.scale - s).abs() <= 1e-9 * s);
    }

    #[test]
    fn simplex_minimizes_convex_quadratics(cx in -3.0..3.0f64, cy in -3.0..3.0f64, w in 0.5..20.0f64) {
        let f = |x: &[f64]| (x[0] - cx).powi(2) + w * (x[1] - cy).powi(2);
        let r = nelder_mead(f, &[0.0, 0.0], &[0.5, 0.5], 2000, 1e-14);
        prop_assert!((r.x[0] - cx).abs() < 1e-4 && (r.x[1] - cy).abs() < 1e-4);
        prop_assert!(r.evaluations <= 2000);
        prop_assert!(r.fx <= f(&[0.0, 0.0]));
    }
}
