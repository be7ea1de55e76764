use std::fs::{self, File};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use linkforge_core::graph::{build_catalog, Catalog, CatalogEntry, GraphError, MechanismGraph};
use linkforge_core::kinematics::{trace, LinkageInstance, Trajectory, DEFAULT_STEPS};
use linkforge_core::metrics::{evaluate_pairs, MetricsError};
use linkforge_core::raster::{render_curve, render_mechanism, DEFAULT_IMAGE_SIZE};
use linkforge_core::sampling::{
    generate_dataset, load_manifest, read_manifest, SampleError, Split, CURVE_DIR, MANIFEST_FILE, MECHANISM_DIR,
    SUMMARY_FILE,
};
use linkforge_core::synthesis::{fit_transform, synthesize, CurveIndex, CurveTarget, DescriptorSource};
use linkforge_core::{Point, SeedKind, Task};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::config::{effective_seed, FileConfig};
use crate::error::{runtime, validation, CliResult};
use crate::{Cli, Command, SplitArg};

pub const CATALOG_FILE: &str = "catalog.jsonl";
pub const REPORT_FILE: &str = "report.json";

pub fn run(cli: Cli) -> CliResult<()> {
    let file = FileConfig::load(cli.config.as_deref())?;
    let workers = cli.workers.or(file.workers).unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().map_err(runtime)?;
    let ctx = Context { seed: effective_seed(cli.seed, &file)?, force: cli.force, file };
    pool.install(|| dispatch(&ctx, cli.command))
}

struct Context {
    seed: u64,
    force: bool,
    file: FileConfig,
}

fn dispatch(ctx: &Context, command: Command) -> CliResult<()> {
    match command {
        Command::Enumerate { layers, seed_kind, out } => enumerate(ctx, layers, seed_kind, out.as_deref()),
        Command::Simulate { catalog, id, instance, steps, out, curve_png, mech_png, img } => {
            let outputs = SimulateOutputs { trajectory: out, curve_png, mech_png, img };
            simulate(ctx, &catalog, &id, &instance, steps, outputs)
        }
        Command::GenDataset { catalog, graphs, per_graph, img, out } => {
            gen_dataset(ctx, &catalog, &graphs, per_graph, img, &out)
        }
        Command::Eval { pred, gt, manifest, task, split, out } => {
            eval(ctx, &pred, &gt, &manifest, task, split, out.as_deref())
        }
        Command::Synthesize { target, dataset, topk, evals, img, out } => {
            synthesize_cmd(ctx, &target, &dataset, topk, evals, img, out.as_deref())
        }
    }
}

/// Refuses to touch existing outputs unless `--force` was given.
fn guard(ctx: &Context, paths: &[PathBuf]) -> CliResult<()> {
    if ctx.force {
        return Ok(());
    }
    match paths.iter().find(|p| p.exists()) {
        Some(p) => Err(validation(format!("{} exists; pass --force to overwrite", p.display()))),
        None => Ok(()),
    }
}

fn create_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| runtime(format!("{}: {e}", dir.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        create_dir(parent)?;
    }
    fs::write(path, bytes).map_err(|e| runtime(format!("{}: {e}", path.display())))
}

fn pretty<T: Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s.into_bytes()
}

fn enumerate(ctx: &Context, layers: usize, seed_kind: SeedKind, out: Option<&Path>) -> CliResult<()> {
    if let Some(dir) = out {
        guard(ctx, &[dir.join(CATALOG_FILE), dir.join(REPORT_FILE)])?;
    }
    let catalog = build_catalog(layers, seed_kind).map_err(|e| match e {
        GraphError::TooManyLayers { .. } => validation(e),
        other => runtime(other),
    })?;
    print!("{}", catalog.report.table());
    println!("distinct graphs: {}", catalog.total());
    if let Some(dir) = out {
        create_dir(dir)?;
        let mut buf = Vec::new();
        catalog.write_jsonl(&mut buf).map_err(runtime)?;
        write_file(&dir.join(CATALOG_FILE), &buf)?;
        let report = json!({
            "command": "enumerate",
            "version": env!("CARGO_PKG_VERSION"),
            "config": { "layers": layers, "seed_kind": seed_kind },
            "total": catalog.total(),
            "counts": catalog.report,
        });
        write_file(&dir.join(REPORT_FILE), &pretty(&report))?;
    }
    Ok(())
}

fn load_catalog(path: &Path) -> CliResult<Vec<CatalogEntry>> {
    let file = if path.is_dir() { path.join(CATALOG_FILE) } else { path.to_path_buf() };
    let f = File::open(&file).map_err(|e| validation(format!("{}: {e}", file.display())))?;
    Catalog::read_jsonl(BufReader::new(f)).map_err(|e| validation(format!("{}: {e}", file.display())))
}

fn graph_of(entry: &CatalogEntry) -> CliResult<MechanismGraph> {
    entry.graph().map_err(|e| validation(format!("catalog entry {}: {e}", entry.id)))
}

/// Trajectory file written by `simulate` and accepted as a synthesis target.
#[derive(Debug, Serialize, Deserialize)]
pub struct TrajectoryFile {
    pub graph_id: Option<String>,
    pub steps: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<LinkageInstance>,
    pub points: Vec<Point>,
    pub speeds: Vec<f64>,
}

struct SimulateOutputs {
    trajectory: Option<PathBuf>,
    curve_png: Option<PathBuf>,
    mech_png: Option<PathBuf>,
    img: Option<u32>,
}

fn simulate(
    ctx: &Context,
    catalog: &Path,
    id: &str,
    instance_path: &Path,
    steps: Option<usize>,
    outputs: SimulateOutputs,
) -> CliResult<()> {
    let outs: Vec<PathBuf> =
        [&outputs.trajectory, &outputs.curve_png, &outputs.mech_png].into_iter().flatten().cloned().collect();
    guard(ctx, &outs)?;
    let entries = load_catalog(catalog)?;
    let entry =
        entries.iter().find(|e| e.id == id).ok_or_else(|| validation(format!("graph `{id}` not in catalog")))?;
    let graph = graph_of(entry)?;
    let text =
        fs::read_to_string(instance_path).map_err(|e| validation(format!("{}: {e}", instance_path.display())))?;
    let instance: LinkageInstance =
        serde_json::from_str(&text).map_err(|e| validation(format!("{}: {e}", instance_path.display())))?;
    instance.validate().map_err(validation)?;
    if !instance.matches_graph(&graph) {
        return Err(validation(format!("instance does not realize graph `{id}`")));
    }
    let steps = steps.or(ctx.file.steps).unwrap_or(DEFAULT_STEPS);
    let traj = trace(&instance, steps).map_err(runtime)?;

    let size = outputs.img.unwrap_or(DEFAULT_IMAGE_SIZE);
    if outputs.curve_png.is_some() || outputs.mech_png.is_some() {
        let t = fit_transform(&instance, steps, size, ctx.file.sample.margin).map_err(runtime)?;
        if let Some(p) = &outputs.curve_png {
            render_curve(&traj, &t, size, false).save(p).map_err(|e| runtime(format!("{}: {e}", p.display())))?;
        }
        if let Some(p) = &outputs.mech_png {
            let img = render_mechanism(&instance, 0.0, &t, size).map_err(runtime)?;
            img.save(p).map_err(|e| runtime(format!("{}: {e}", p.display())))?;
        }
    }

    let file = TrajectoryFile {
        graph_id: Some(id.to_string()),
        steps,
        instance: Some(instance),
        points: traj.points,
        speeds: traj.speeds,
    };
    match &outputs.trajectory {
        Some(p) => write_file(p, &pretty(&file)),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(&pretty(&file)).map_err(runtime)
        }
    }
}

fn select_graphs(entries: &[CatalogEntry], list: &str) -> CliResult<Vec<(String, MechanismGraph)>> {
    if list.trim() == "all" {
        return entries.iter().map(|e| Ok((e.id.clone(), graph_of(e)?))).collect();
    }
    let mut out: Vec<(String, MechanismGraph)> = Vec::new();
    for id in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let entry =
            entries.iter().find(|e| e.id == id).ok_or_else(|| validation(format!("graph `{id}` not in catalog")))?;
        if out.iter().any(|(seen, _)| seen == id) {
            return Err(validation(format!("graph `{id}` listed twice")));
        }
        out.push((id.to_string(), graph_of(entry)?));
    }
    if out.is_empty() {
        return Err(validation("no graphs selected"));
    }
    Ok(out)
}

fn gen_dataset(
    ctx: &Context,
    catalog: &Path,
    graphs: &str,
    per_graph: Option<usize>,
    img: Option<u32>,
    out: &Path,
) -> CliResult<()> {
    let mut config = ctx.file.sample.clone();
    config.seed = ctx.seed;
    if let Some(n) = per_graph {
        config.per_graph = n;
    }
    if let Some(s) = img {
        config.image_size = s;
    }
    if let Some(s) = ctx.file.steps {
        config.steps = s;
    }
    config.validate().map_err(validation)?;
    let selected = select_graphs(&load_catalog(catalog)?, graphs)?;
    guard(ctx, &[out.join(MANIFEST_FILE), out.join(SUMMARY_FILE)])?;
    for stale in [CURVE_DIR, MECHANISM_DIR] {
        let d = out.join(stale);
        if d.exists() {
            fs::remove_dir_all(&d).map_err(|e| runtime(format!("{}: {e}", d.display())))?;
        }
    }
    for stale in [MANIFEST_FILE, SUMMARY_FILE] {
        let _ = fs::remove_file(out.join(stale));
    }

    let ds = generate_dataset(&selected, &config, out).map_err(|e| match e {
        SampleError::InvalidConfig(_) => validation(e),
        other => runtime(other),
    })?;
    let s = &ds.summary;
    println!("samples: {} (train {}, test {})", s.samples, s.splits.train, s.splits.test);
    if let Some(worst) = s.acceptance.iter().min_by(|a, b| a.rate().total_cmp(&b.rate())) {
        println!("lowest acceptance: {} at {:.1}%", worst.graph_id, 100.0 * worst.rate());
    }
    Ok(())
}

fn eval(
    ctx: &Context,
    pred: &Path,
    gt: &Path,
    manifest: &Path,
    task: Task,
    split: SplitArg,
    out: Option<&Path>,
) -> CliResult<()> {
    if let Some(p) = out {
        guard(ctx, &[p.to_path_buf()])?;
    }
    let samples = read_manifest(manifest).map_err(validation)?;
    let ids: Vec<&str> = samples
        .iter()
        .filter(|s| match split {
            SplitArg::All => true,
            SplitArg::Train => s.split == Split::Train,
            SplitArg::Test => s.split == Split::Test,
        })
        .map(|s| s.id.as_str())
        .collect();
    if ids.is_empty() {
        return Err(validation("no manifest samples in the selected split"));
    }
    let report = evaluate_pairs(pred, gt, &ids, task).map_err(|e| match e {
        MetricsError::DimensionMismatch(..) => validation(e),
        other => runtime(other),
    })?;
    println!("{}", report.row());
    if let Some(p) = out {
        let mut buf = Vec::new();
        let config = json!({
            "record": "config",
            "pred": pred,
            "gt": gt,
            "manifest": manifest,
            "task": task,
            "split": format!("{split:?}").to_lowercase(),
        });
        serde_json::to_writer(&mut buf, &config).map_err(runtime)?;
        buf.push(b'\n');
        report.write_jsonl(&mut buf).map_err(runtime)?;
        write_file(p, &buf)?;
    }
    Ok(())
}

fn synthesize_cmd(
    ctx: &Context,
    target: &Path,
    dataset: &Path,
    topk: Option<usize>,
    evals: Option<usize>,
    img: Option<u32>,
    out: Option<&Path>,
) -> CliResult<()> {
    const OUTPUTS: [&str; 4] = ["instance.json", "mechanism.png", "curve.png", "result.json"];
    if let Some(dir) = out {
        guard(ctx, &OUTPUTS.map(|f| dir.join(f)))?;
    }
    let mut options = ctx.file.synthesis;
    if let Some(k) = topk {
        options.top_k = k;
    }
    if let Some(n) = evals {
        options.refine.max_evals = n;
    }
    if options.top_k == 0 || options.refine.max_evals == 0 {
        return Err(validation("topk and evals must be positive"));
    }

    let is_png = target.extension().is_some_and(|e| e.eq_ignore_ascii_case("png"));
    let (curve_target, source) = if is_png {
        let image =
            linkforge_core::ImageBuffer::load(target).map_err(|e| validation(format!("{}: {e}", target.display())))?;
        (CurveTarget::from_image(&image).map_err(validation)?, DescriptorSource::Image)
    } else {
        let text = fs::read_to_string(target).map_err(|e| validation(format!("{}: {e}", target.display())))?;
        let file: TrajectoryFile =
            serde_json::from_str(&text).map_err(|e| validation(format!("{}: {e}", target.display())))?;
        if file.points.len() != file.speeds.len() || file.points.len() < 3 {
            return Err(validation("trajectory needs at least 3 points with one speed each"));
        }
        let traj = Trajectory { points: file.points, speeds: file.speeds };
        (CurveTarget::from_trajectory(&traj), DescriptorSource::Trajectory)
    };

    let samples = load_manifest(dataset).map_err(validation)?;
    let train: Vec<_> = samples.iter().filter(|s| s.split == Split::Train).cloned().collect();
    let pool = if train.is_empty() { samples } else { train };
    options.image_size = img.or_else(|| pool.first().map(|s| s.image_size)).unwrap_or(DEFAULT_IMAGE_SIZE);
    let index = CurveIndex::build(dataset, &pool, source).map_err(runtime)?;
    let outcome = synthesize(&curve_target, &index, &options).map_err(runtime)?;

    let best = &outcome.candidates[outcome.best];
    let summary = json!({
        "target": target,
        "dataset": dataset,
        "options": options,
        "seed": ctx.seed,
        "best": outcome.best,
        "sample_id": best.sample_id,
        "graph_id": outcome.instance.graph_id,
        "initial_chamfer": best.refinement.initial_chamfer,
        "final_chamfer": best.refinement.final_chamfer,
        "relative_chamfer": best.relative_chamfer,
    });
    println!("{summary}");
    if let Some(dir) = out {
        create_dir(dir)?;
        write_file(&dir.join(OUTPUTS[0]), &pretty(&outcome.instance))?;
        let save = |img: &linkforge_core::ImageBuffer, name: &str| {
            let p = dir.join(name);
            img.save(&p).map_err(|e| runtime(format!("{}: {e}", p.display())))
        };
        save(&outcome.image, OUTPUTS[1])?;
        let traj = trace(&outcome.instance, options.refine.steps).map_err(runtime)?;
        save(&render_curve(&traj, &outcome.transform, options.image_size, false), OUTPUTS[2])?;
        let result = json!({
            "summary": summary,
            "transform": outcome.transform,
            "candidates": outcome.candidates,
        });
        write_file(&dir.join(OUTPUTS[3]), &pretty(&result))?;
    }
    Ok(())
}
