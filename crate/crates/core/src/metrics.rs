//! Image and curve accuracy metrics, and the mean ± std evaluation report.

use std::fmt;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::Point;
use crate::raster::{ImageBuffer, RasterError};

/// PSNR reported for identical images.
pub const PSNR_CAP: f64 = 100.0;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("image dimensions differ: {0}x{0} vs {1}x{1}")]
    DimensionMismatch(u32, u32),
    #[error("point set is empty")]
    EmptySet,
    #[error("sample `{id}` missing: {path}")]
    MissingSample { id: String, path: PathBuf },
    #[error("cannot read `{path}`: {source}")]
    Image { path: PathBuf, source: RasterError },
}

/// Peak signal-to-noise ratio over all pixels and channels with MAX = 255,
/// capped at [`PSNR_CAP`].
pub fn psnr(a: &ImageBuffer, b: &ImageBuffer) -> Result<f64, MetricsError> {
    if a.size() != b.size() {
        return Err(MetricsError::DimensionMismatch(a.size(), b.size()));
    }
    let sse: u64 = a
        .as_raw()
        .iter()
        .zip(b.as_raw())
        .map(|(&x, &y)| {
            let d = x.abs_diff(y) as u64;
            d * d
        })
        .sum();
    if sse == 0 {
        return Ok(PSNR_CAP);
    }
    let mse = sse as f64 / a.as_raw().len() as f64;
    Ok((10.0 * (255.0f64 * 255.0 / mse).log10()).min(PSNR_CAP))
}

/// Symmetric Chamfer distance: mean nearest-neighbour distance from `a` to
/// `b` plus the same from `b` to `a`.
pub fn chamfer(a: &[Point], b: &[Point]) -> Result<f64, MetricsError> {
    if a.is_empty() || b.is_empty() {
        return Err(MetricsError::EmptySet);
    }
    Ok(mean_nearest(a, b) + mean_nearest(b, a))
}

fn mean_nearest(from: &[Point], to: &[Point]) -> f64 {
    let total: f64 =
        from.iter().map(|&p| to.iter().map(|&q| (q - p).norm_sq()).fold(f64::INFINITY, f64::min).sqrt()).sum();
    total / from.len() as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Synthesis,
    Analysis,
    C2m2c,
    Baseline,
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Task::Synthesis => "synthesis",
            Task::Analysis => "analysis",
            Task::C2m2c => "c2m2c",
            Task::Baseline => "baseline",
        })
    }
}

impl std::str::FromStr for Task {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "synthesis" => Ok(Task::Synthesis),
            "analysis" => Ok(Task::Analysis),
            "c2m2c" => Ok(Task::C2m2c),
            "baseline" => Ok(Task::Baseline),
            other => Err(format!("unknown task `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleScore {
    pub id: String,
    pub psnr: f64,
}

/// Per-sample PSNR with population mean and standard deviation. Capped
/// samples are included in the statistics and also counted separately.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub task: Task,
    pub samples: Vec<SampleScore>,
    pub mean: f64,
    pub std: f64,
    pub count: usize,
    pub capped: usize,
}

impl EvalReport {
    pub fn from_scores(task: Task, samples: Vec<SampleScore>) -> Self {
        let count = samples.len();
        let n = count.max(1) as f64;
        let mean = samples.iter().map(|s| s.psnr).sum::<f64>() / n;
        let var = samples.iter().map(|s| (s.psnr - mean).powi(2)).sum::<f64>() / n;
        let capped = samples.iter().filter(|s| s.psnr >= PSNR_CAP).count();
        Self { task, samples, mean, std: var.sqrt(), count, capped }
    }

    /// `task  mean ± std  (n=…, capped=…)`
    pub fn row(&self) -> String {
        format!(
            "{:<10} {:>6.2} ± {:<5.2} (n={}, capped={})",
            self.task.to_string(),
            self.mean,
            self.std,
            self.count,
            self.capped
        )
    }

    /// One record per sample followed by a summary record.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> io::Result<()> {
        #[derive(Serialize)]
        struct Sample<'a> {
            record: &'static str,
            task: Task,
            id: &'a str,
            psnr: f64,
        }
        #[derive(Serialize)]
        struct Summary {
            record: &'static str,
            task: Task,
            mean: f64,
            std: f64,
            count: usize,
            capped: usize,
        }
        for s in &self.samples {
            let rec = Sample { record: "sample", task: self.task, id: &s.id, psnr: s.psnr };
            serde_json::to_writer(&mut w, &rec)?;
            w.write_all(b"\n")?;
        }
        let summary = Summary {
            record: "summary",
            task: self.task,
            mean: self.mean,
            std: self.std,
            count: self.count,
            capped: self.capped,
        };
        serde_json::to_writer(&mut w, &summary)?;
        w.write_all(b"\n")?;
        w.flush()
    }
}

fn load(id: &str, dir: &Path) -> Result<ImageBuffer, MetricsError> {
    let path = dir.join(format!("{id}.png"));
    if !path.is_file() {
        return Err(MetricsError::MissingSample { id: id.to_string(), path });
    }
    ImageBuffer::load(&path).map_err(|source| MetricsError::Image { path, source })
}

/// Scores `{pred}/{id}.png` against `{gt}/{id}.png` for every id.
pub fn evaluate_pairs<S: AsRef<str> + Sync>(
    pred_dir: &Path,
    gt_dir: &Path,
    ids: &[S],
    task: Task,
) -> Result<EvalReport, MetricsError> {
    let scores = ids
        .par_iter()
        .map(|id| {
            let id = id.as_ref();
            let pred = load(id, pred_dir)?;
            let gt = load(id, gt_dir)?;
            Ok(SampleScore { id: id.to_string(), psnr: psnr(&pred, &gt)? })
        })
        .collect::<Result<Vec<_>, MetricsError>>()?;
    Ok(EvalReport::from_scores(task, scores))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shifted(img: &ImageBuffer, delta: u8) -> ImageBuffer {
        let data = img.as_raw().iter().map(|b| b + delta).collect();
        ImageBuffer::from_raw(img.size(), data).unwrap()
    }

    #[test]
    fn psnr_closed_forms() {
        let gray = ImageBuffer::filled(64, [100, 120, 140]);
        assert_eq!(psnr(&gray, &gray).unwrap(), PSNR_CAP);
        let p = psnr(&gray, &shifted(&gray, 16)).unwrap();
        assert!((p - 24.05).abs() <= 0.01, "{p}");
        let black = ImageBuffer::filled(64, [0, 0, 0]);
        let white = ImageBuffer::filled(64, [255, 255, 255]);
        assert_eq!(psnr(&black, &white).unwrap(), 0.0);
    }

    #[test]
    fn psnr_dimension_mismatch() {
        let a = ImageBuffer::new(64);
        let b = ImageBuffer::new(128);
        assert!(matches!(psnr(&a, &b), Err(MetricsError::DimensionMismatch(64, 128))));
    }

    #[test]
    fn chamfer_cases() {
        let a = [Point::new(0.0, 0.0)];
        let b = [Point::new(3.0, 4.0)];
        assert_eq!(chamfer(&a, &b).unwrap(), 10.0);
        assert_eq!(chamfer(&a, &a).unwrap(), 0.0);
        assert!(matches!(chamfer(&a, &[]), Err(MetricsError::EmptySet)));
    }

    #[test]
    fn shifted_grid_chamfer() {
        let a: Vec<Point> = (0..5).map(|i| Point::new(i as f64, 0.0)).collect();
        let b: Vec<Point> = a.iter().map(|&p| p + Point::new(0.01, 0.0)).collect();
        assert!((chamfer(&a, &b).unwrap() - 0.02).abs() < 1e-12);
    }

    #[test]
    fn report_statistics() {
        let scores =
            [10.0, 20.0, 30.0].iter().enumerate().map(|(i, &p)| SampleScore { id: i.to_string(), psnr: p }).collect();
        let r = EvalReport::from_scores(Task::Analysis, scores);
        assert_eq!(r.mean, 20.0);
        assert!((r.std - (200.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!(r.row().starts_with("analysis    20.00 ± 8.16"));
        let mut buf = Vec::new();
        r.write_jsonl(&mut buf).unwrap();
        let last = String::from_utf8(buf).unwrap().lines().last().unwrap().to_string();
        assert!(last.starts_with(r#"{"record":"summary","task":"analysis","mean":20.0"#));
    }
}
