use serde::{Deserialize, Serialize};

use crate::geom::{BBox, Point};

/// Uniform-scale world-to-pixel map. World y points up, pixel y down:
/// `px = scale·x + tx`, `py = ty - scale·y`. Pixel centers sit at integer
/// coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transform {
    pub scale: f64,
    pub tx: f64,
    pub ty: f64,
}

impl Transform {
    /// Fits `bbox` centered into a `size`² image, leaving `margin · size`
    /// pixels free on every side.
    pub fn fit(bbox: BBox, size: u32, margin: f64) -> Transform {
        let extent = (size - 1) as f64;
        let span = extent * (1.0 - 2.0 * margin);
        let world = bbox.width().max(bbox.height());
        let scale = if world > 0.0 { span / world } else { span };
        let c = bbox.center();
        let mid = extent / 2.0;
        Transform { scale, tx: mid - scale * c.x, ty: mid + scale * c.y }
    }

    /// The nominal canvas [-1, 1]² filling the whole image.
    pub fn canvas(size: u32) -> Transform {
        Self::fit(BBox { min: Point::new(-1.0, -1.0), max: Point::new(1.0, 1.0) }, size, 0.0)
    }

    pub fn apply(&self, p: Point) -> (f64, f64) {
        (self.scale * p.x + self.tx, self.ty - self.scale * p.y)
    }

    /// Nearest pixel, rounding half up.
    pub fn to_pixel(&self, p: Point) -> (i64, i64) {
        let (x, y) = self.apply(p);
        ((x + 0.5).floor() as i64, (y + 0.5).floor() as i64)
    }

    pub fn to_world(&self, px: f64, py: f64) -> Point {
        Point::new((px - self.tx) / self.scale, (self.ty - py) / self.scale)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canvas_maps_corners_to_corners() {
        let t = Transform::canvas(128);
        assert_eq!(t.to_pixel(Point::new(-1.0, 1.0)), (0, 0));
        assert_eq!(t.to_pixel(Point::new(1.0, -1.0)), (127, 127));
    }

    #[test]
    fn fit_respects_margin() {
        let bb = BBox { min: Point::new(0.0, 0.0), max: Point::new(2.0, 1.0) };
        let t = Transform::fit(bb, 101, 0.05);
        let (x0, y0) = t.apply(bb.min);
        let (x1, y1) = t.apply(bb.max);
        assert!((x0 - 5.0).abs() < 1e-12 && (x1 - 95.0).abs() < 1e-12);
        assert!((y0 - y1 - 45.0).abs() < 1e-12);
        let p = t.to_world(x1, y1);
        assert!(p.distance(bb.max) < 1e-12);
    }
}
