use super::draw::{clip_segment, draw_disc, draw_line};
use super::{normalize_speeds, ColorScheme, ImageBuffer, Rgb, Transform};
use crate::graph::{SeedKind, FIXED_A, FIXED_B, INPUT, SEED_NODES};
use crate::kinematics::{assemble, Constraint, KinematicsError, LinkageInstance, Trajectory};

const STROKE: u32 = 3;
const JOINT_RADIUS: i64 = 3;

/// Mechanism at crank angle `theta0`: ground red, crank green, other links
/// blue, then every joint as a yellow disc. Slider rails are drawn red
/// across the whole image.
pub fn render_mechanism(
    instance: &LinkageInstance,
    theta0: f64,
    transform: &Transform,
    size: u32,
) -> Result<ImageBuffer, KinematicsError> {
    let scheme = ColorScheme::V1;
    let config = assemble(instance, theta0)?;
    let px: Vec<(i64, i64)> = config.positions.iter().map(|&p| transform.to_pixel(p)).collect();
    let mut img = ImageBuffer::new(size);

    match instance.seed_kind {
        SeedKind::Revolute => draw_line(&mut img, px[FIXED_A], px[FIXED_B], STROKE, scheme.ground),
        SeedKind::Slider => {
            let rail = instance.rail.expect("slider instance has a rail");
            let mut offsets: Vec<f64> = instance
                .nodes
                .iter()
                .filter_map(|n| match n.constraint {
                    Constraint::Slider { offset, .. } => Some(offset),
                    Constraint::Dyad { .. } => None,
                })
                .collect();
            offsets.dedup();
            for offset in offsets {
                let line = rail.shifted(offset);
                let a = transform.apply(line.origin);
                let reach = 4.0 * size as f64;
                let d = (line.direction.x * reach, -line.direction.y * reach);
                let hi = size as f64 + 1.0;
                if let Some((p, q)) = clip_segment((a.0 - d.0, a.1 - d.1), (a.0 + d.0, a.1 + d.1), -2.0, hi) {
                    let round = |(x, y): (f64, f64)| ((x + 0.5).floor() as i64, (y + 0.5).floor() as i64);
                    draw_line(&mut img, round(p), round(q), STROKE, scheme.ground);
                }
            }
        }
    }
    draw_line(&mut img, px[FIXED_A], px[INPUT], STROKE, scheme.input);
    for (i, node) in instance.nodes.iter().enumerate() {
        let id = SEED_NODES + i;
        let [p, q] = node.parents;
        match node.constraint {
            Constraint::Dyad { .. } => {
                draw_line(&mut img, px[p], px[id], STROKE, scheme.link);
                draw_line(&mut img, px[q], px[id], STROKE, scheme.link);
            }
            Constraint::Slider { .. } => draw_line(&mut img, px[node.free_parent()], px[id], STROKE, scheme.link),
        }
    }
    for (id, &c) in px.iter().enumerate() {
        if id == FIXED_B && instance.seed_kind == SeedKind::Slider {
            continue;
        }
        draw_disc(&mut img, c, JOINT_RADIUS, scheme.joint);
    }
    Ok(img)
}

/// Closed curve, one segment per sample, colored by normalized speed (or
/// black when `grayscale`).
pub fn render_curve(trajectory: &Trajectory, transform: &Transform, size: u32, grayscale: bool) -> ImageBuffer {
    let mut img = ImageBuffer::new(size);
    let n = trajectory.len();
    let px: Vec<(i64, i64)> = trajectory.points.iter().map(|&p| transform.to_pixel(p)).collect();
    for (i, color) in segment_colors(trajectory, grayscale).into_iter().enumerate() {
        draw_line(&mut img, px[i], px[(i + 1) % n], STROKE, color);
    }
    img
}

/// Stroke color of each curve segment, in drawing order.
pub fn segment_colors(trajectory: &Trajectory, grayscale: bool) -> Vec<Rgb> {
    let scheme = ColorScheme::V1;
    if grayscale {
        return vec![scheme.grayscale; trajectory.len()];
    }
    normalize_speeds(&trajectory.speeds).into_iter().map(|u| scheme.gradient(u)).collect()
}
