use std::collections::BTreeMap;

use crate::geom::Point;
use crate::raster::ImageBuffer;

/// Side of the pixel cells that are merged into one curve sample.
pub const CELL: u32 = 3;

/// A pixel counts as ink when some channel is at least this far below 255.
const INK_THRESHOLD: u8 = 48;

#[derive(Default)]
struct Cell {
    x: f64,
    y: f64,
    red: f64,
    blue: f64,
    n: f64,
}

/// Recovers an ordered closed curve from a curve image.
///
/// Ink pixels are pooled into `CELL`² cells, each cell becomes one point at
/// its pixel centroid, and points are ordered by greedy nearest-neighbour
/// chaining. Points are returned in a y-up frame (`(px, -py)`). Speeds are
/// read back from the slow-to-fast gradient as `r / (r + b)`; they are
/// `None` for grayscale images.
pub fn curve_from_image(img: &ImageBuffer) -> Option<(Vec<Point>, Option<Vec<f64>>)> {
    let mut cells: BTreeMap<(u32, u32), Cell> = BTreeMap::new();
    for (x, y, [r, g, b]) in img.pixels() {
        if r.min(g).min(b) > 255 - INK_THRESHOLD {
            continue;
        }
        let c = cells.entry((y / CELL, x / CELL)).or_default();
        c.x += x as f64;
        c.y += y as f64;
        c.red += r as f64;
        c.blue += b as f64;
        c.n += 1.0;
    }
    if cells.len() < 3 {
        return None;
    }
    let samples: Vec<(Point, Option<f64>)> = cells
        .values()
        .map(|c| {
            let p = Point::new(c.x / c.n, -c.y / c.n);
            let rb = c.red + c.blue;
            (p, (rb > 0.0).then(|| c.red / rb))
        })
        .collect();
    let colored = samples.iter().filter(|(_, u)| u.is_some()).count();
    let order = chain(&samples.iter().map(|(p, _)| *p).collect::<Vec<_>>());
    let points = order.iter().map(|&i| samples[i].0).collect();
    let speeds = (2 * colored > samples.len()).then(|| order.iter().map(|&i| samples[i].1.unwrap_or(0.5)).collect());
    Some((points, speeds))
}

/// Greedy nearest-neighbour ordering starting from the first point.
fn chain(points: &[Point]) -> Vec<usize> {
    let n = points.len();
    let mut used = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut cur = 0;
    used[0] = true;
    order.push(0);
    for _ in 1..n {
        let next = (0..n)
            .filter(|&j| !used[j])
            .min_by(|&a, &b| {
                let da = (points[a] - points[cur]).norm_sq();
                let db = (points[b] - points[cur]).norm_sq();
                da.total_cmp(&db)
            })
            .expect("unvisited point");
        used[next] = true;
        order.push(next);
        cur = next;
    }
    order
}
