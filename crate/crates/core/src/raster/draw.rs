use super::{ImageBuffer, Rgb};

/// Bresenham segment thickened to `width` pixels by offsets perpendicular to
/// the major axis.
pub fn draw_line(img: &mut ImageBuffer, a: (i64, i64), b: (i64, i64), width: u32, color: Rgb) {
    let (dx, dy) = ((b.0 - a.0).abs(), -(b.1 - a.1).abs());
    let x_major = dx >= -dy;
    let half = (width.max(1) as i64 - 1) / 2;
    let (sx, sy) = (if a.0 < b.0 { 1 } else { -1 }, if a.1 < b.1 { 1 } else { -1 });
    let (mut x, mut y) = a;
    let mut err = dx + dy;
    loop {
        for o in -half..=half {
            if x_major {
                img.put(x, y + o, color);
            } else {
                img.put(x + o, y, color);
            }
        }
        if (x, y) == b {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x += sx;
        }
        if e2 <= dx {
            err += dx;
            y += sy;
        }
    }
}

/// Filled disc: every pixel within `radius` of the center.
pub fn draw_disc(img: &mut ImageBuffer, c: (i64, i64), radius: i64, color: Rgb) {
    for dy in -radius..=radius {
        for dx in -radius..=radius {
            if dx * dx + dy * dy <= radius * radius {
                img.put(c.0 + dx, c.1 + dy, color);
            }
        }
    }
}

/// Clips the segment to the box [lo, hi]² (Liang–Barsky); `None` if it
/// misses.
pub(crate) fn clip_segment(a: (f64, f64), b: (f64, f64), lo: f64, hi: f64) -> Option<((f64, f64), (f64, f64))> {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for (p, q) in [(-dx, a.0 - lo), (dx, hi - a.0), (-dy, a.1 - lo), (dy, hi - a.1)] {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                t0 = t0.max(r);
            } else {
                t1 = t1.min(r);
            }
        }
    }
    (t0 <= t1).then_some(((a.0 + t0 * dx, a.1 + t0 * dy), (a.0 + t1 * dx, a.1 + t1 * dy)))
}
