use serde::{Deserialize, Serialize};

use crate::geom::Point;

pub const SHAPE_POINTS: usize = 64;
pub const SPEED_BINS: usize = 8;
pub const DESCRIPTOR_LEN: usize = 2 * SHAPE_POINTS + SPEED_BINS;

/// 64 arc-length-resampled points, centered and scaled to unit RMS radius,
/// followed by an 8-bin arc-length-weighted histogram of normalized speed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveDescriptor(pub Vec<f64>);

/// Similarity that maps a curve into descriptor space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub centroid: Point,
    pub scale: f64,
}

impl Normalization {
    pub fn forward(&self, p: Point) -> Point {
        (p - self.centroid) * (1.0 / self.scale)
    }

    pub fn inverse(&self, p: Point) -> Point {
        p * self.scale + self.centroid
    }
}

impl CurveDescriptor {
    fn shape(&self, i: usize) -> Point {
        Point::new(self.0[2 * i], self.0[2 * i + 1])
    }

    pub fn speed_bins(&self) -> &[f64] {
        &self.0[2 * SHAPE_POINTS..]
    }
}

/// Resamples the closed polyline through `points` at `n` equal arc-length
/// steps starting from `points[0]`.
pub fn resample_closed(points: &[Point], n: usize) -> Option<Vec<Point>> {
    let m = points.len();
    if m < 2 {
        return None;
    }
    let seg: Vec<f64> = (0..m).map(|i| points[i].distance(points[(i + 1) % m])).collect();
    let total: f64 = seg.iter().sum();
    if !(total.is_finite() && total > 0.0) {
        return None;
    }
    let mut out = Vec::with_capacity(n);
    let (mut i, mut start) = (0usize, 0.0f64);
    for j in 0..n {
        let s = total * j as f64 / n as f64;
        while i + 1 < m && start + seg[i] < s {
            start += seg[i];
            i += 1;
        }
        let t = if seg[i] > 0.0 { ((s - start) / seg[i]).clamp(0.0, 1.0) } else { 0.0 };
        out.push(points[i] + (points[(i + 1) % m] - points[i]) * t);
    }
    Some(out)
}

/// Descriptor of a closed curve. `speeds`, when given, holds one normalized
/// speed in [0, 1] per segment `points[i] → points[i+1]`; without it the
/// histogram is uniform. `None` for curves with no extent.
pub fn describe(points: &[Point], speeds: Option<&[f64]>) -> Option<(CurveDescriptor, Normalization)> {
    let res = resample_closed(points, SHAPE_POINTS)?;
    let centroid = res.iter().fold(Point::ORIGIN, |a, &p| a + p) * (1.0 / SHAPE_POINTS as f64);
    let rms = (res.iter().map(|&p| (p - centroid).norm_sq()).sum::<f64>() / SHAPE_POINTS as f64).sqrt();
    if rms.is_nan() || rms <= 1e-12 {
        return None;
    }
    let norm = Normalization { centroid, scale: rms };
    let mut v = Vec::with_capacity(DESCRIPTOR_LEN);
    for p in res {
        let q = norm.forward(p);
        v.extend([q.x, q.y]);
    }
    v.extend(speed_histogram(points, speeds));
    Some((CurveDescriptor(v), norm))
}

fn speed_histogram(points: &[Point], speeds: Option<&[f64]>) -> [f64; SPEED_BINS] {
    let mut h = [0.0; SPEED_BINS];
    let Some(speeds) = speeds else {
        return [1.0 / SPEED_BINS as f64; SPEED_BINS];
    };
    let m = points.len();
    for (i, &u) in speeds.iter().enumerate().take(m) {
        let bin = ((u.clamp(0.0, 1.0) * SPEED_BINS as f64) as usize).min(SPEED_BINS - 1);
        h[bin] += points[i].distance(points[(i + 1) % m]);
    }
    let total: f64 = h.iter().sum();
    if total > 0.0 {
        h.iter_mut().for_each(|b| *b /= total);
    }
    h
}

/// Euclidean distance between descriptors, minimized over the start point
/// and traversal direction of the resampled shape. Neither is recoverable
/// from an image, so both are factored out.
pub fn descriptor_distance(a: &CurveDescriptor, b: &CurveDescriptor) -> f64 {
    let hist: f64 = a.speed_bins().iter().zip(b.speed_bins()).map(|(x, y)| (x - y).powi(2)).sum();
    let n = SHAPE_POINTS;
    let mut best = f64::INFINITY;
    for shift in 0..n {
        for reverse in [false, true] {
            let mut d = hist;
            for i in 0..n {
                let j = if reverse { (shift + n - i) % n } else { (shift + i) % n };
                d += (a.shape(i) - b.shape(j)).norm_sq();
                if d >= best {
                    break;
                }
            }
            best = best.min(d);
        }
    }
    best.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn ellipse(n: usize, a: f64, b: f64, phase: f64) -> Vec<Point> {
        (0..n)
            .map(|i| {
                let t = phase + TAU * i as f64 / n as f64;
                Point::new(a * t.cos(), b * t.sin())
            })
            .collect()
    }

    #[test]
    fn resample_square_is_even() {
        let sq = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(1.0, 1.0), Point::new(0.0, 1.0)];
        let r = resample_closed(&sq, 8).unwrap();
        assert_eq!(r[1], Point::new(0.5, 0.0));
        assert_eq!(r[2], Point::new(1.0, 0.0));
        assert_eq!(r[4], Point::new(1.0, 1.0));
        assert_eq!(r[7], Point::new(0.0, 0.5));
    }

    #[test]
    fn similarity_invariant() {
        let a = ellipse(200, 1.0, 0.4, 0.0);
        let b: Vec<Point> = a.iter().map(|&p| p * 2.0 + Point::new(3.0, -1.0)).collect();
        let (da, _) = describe(&a, None).unwrap();
        let (db, nb) = describe(&b, None).unwrap();
        assert!(descriptor_distance(&da, &db) < 1e-9);
        assert_eq!(da.0.len(), DESCRIPTOR_LEN);
        assert!((nb.centroid - Point::new(3.0, -1.0)).norm() < 1e-9);
    }

    #[test]
    fn start_and_direction_invariant() {
        let a = ellipse(256, 1.0, 0.4, 0.0);
        let shifted = ellipse(256, 1.0, 0.4, TAU * 37.0 / 256.0);
        let reversed: Vec<Point> = (0..a.len()).map(|i| a[(a.len() - i) % a.len()]).collect();
        let (da, _) = describe(&a, None).unwrap();
        let (dc, _) = describe(&ellipse(256, 1.0, 0.7, 0.0), None).unwrap();
        let different = descriptor_distance(&da, &dc);
        let (dr, _) = describe(&reversed, None).unwrap();
        assert!(descriptor_distance(&da, &dr) < 1e-9);
        // A start point between resample positions costs at most half a spacing.
        let (ds, _) = describe(&shifted, None).unwrap();
        assert!(descriptor_distance(&da, &ds) < 0.5 * different);
    }

    #[test]
    fn histogram_sums_to_one() {
        let a = ellipse(100, 1.0, 1.0, 0.0);
        let speeds: Vec<f64> = (0..100).map(|i| i as f64 / 99.0).collect();
        let (d, _) = describe(&a, Some(&speeds)).unwrap();
        let s: f64 = d.speed_bins().iter().sum();
        assert!((s - 1.0).abs() < 1e-12);
        assert!(d.speed_bins().iter().all(|&b| (b - 0.125).abs() < 0.02));
    }

    #[test]
    fn degenerate_curve_has_no_descriptor() {
        assert!(describe(&[Point::ORIGIN; 10], None).is_none());
        assert!(describe(&[Point::ORIGIN], None).is_none());
    }
}
