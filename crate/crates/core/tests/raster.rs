use linkforge_core::kinematics::{crank_slider, trace};
use linkforge_core::raster::{draw_line, render_curve, render_mechanism, ColorScheme, WHITE};
use linkforge_core::synthesis::fit_transform;
use linkforge_core::{ImageBuffer, LinkageInstance, Point, Transform};
use proptest::prelude::*;

fn colors(img: &ImageBuffer) -> std::collections::BTreeSet<[u8; 3]> {
    img.pixels().map(|(_, _, c)| c).collect()
}

#[test]
fn mechanism_image_uses_the_palette() {
    let inst = LinkageInstance::four_bar(0.8, 0.25, 0.7, 0.7);
    let t = fit_transform(&inst, 360, 128, 0.05).unwrap();
    let img = render_mechanism(&inst, 0.0, &t, 128).unwrap();
    let used = colors(&img);
    let s = ColorScheme::V1;
    for c in [WHITE, s.ground, s.input, s.link, s.joint] {
        assert!(used.contains(&c), "missing {c:?}");
    }
    assert!(used.len() <= 5, "{used:?}");
}

#[test]
fn slider_mechanism_draws_its_rail() {
    let inst = crank_slider(0.2, 0.6, 0.0);
    let t = fit_transform(&inst, 360, 64, 0.05).unwrap();
    let img = render_mechanism(&inst, 0.0, &t, 64).unwrap();
    let red = ColorScheme::V1.ground;
    // The rail spans the image; links and joints may cover parts of it.
    let row = t.to_pixel(Point::new(0.0, 0.0)).1;
    assert_eq!(img.get(0, row), Some(red));
    let red_in_row = (0..64).filter(|&x| img.get(x, row) == Some(red)).count();
    assert!(red_in_row >= 8, "{red_in_row}");
}

#[test]
fn curve_image_runs_from_slow_to_fast() {
    let inst = LinkageInstance::four_bar(0.8, 0.25, 0.7, 0.7);
    let traj = trace(&inst, 360).unwrap();
    let t = fit_transform(&inst, 360, 128, 0.05).unwrap();
    let img = render_curve(&traj, &t, 128, false);
    let used = colors(&img);
    assert!(used.iter().all(|c| *c == WHITE || c[1] == 0));
    assert!(used.iter().any(|c| c[0] > 200 && c[2] < 55));
    assert!(used.iter().any(|c| c[2] > 200 && c[0] < 55));

    let grey = render_curve(&traj, &t, 128, true);
    assert_eq!(colors(&grey), [[0, 0, 0], WHITE].into_iter().collect());
}

#[test]
fn png_round_trip_and_stable_bytes() {
    let inst = LinkageInstance::four_bar(0.8, 0.25, 0.7, 0.7);
    let t = fit_transform(&inst, 360, 96, 0.05).unwrap();
    let img = render_mechanism(&inst, 0.3, &t, 96).unwrap();
    let encode = |i: &ImageBuffer| {
        let mut buf = Vec::new();
        i.write_png(&mut buf).unwrap();
        buf
    };
    let bytes = encode(&img);
    assert_eq!(bytes, encode(&render_mechanism(&inst, 0.3, &t, 96).unwrap()));
    let back = ImageBuffer::read_png(&bytes[..]).unwrap();
    assert_eq!(back, img);
    assert!(ImageBuffer::read_png(&b"not a png"[..]).is_err());
}

#[test]
fn transform_round_trips_pixels() {
    let t = Transform::canvas(128);
    for &(x, y) in &[(0.0, 0.0), (0.3, -0.7), (-1.0, 1.0)] {
        let (px, py) = t.apply(Point::new(x, y));
        let back = t.to_world(px, py);
        assert!((back.x - x).abs() < 1e-12 && (back.y - y).abs() < 1e-12);
    }
}

proptest! {
    #[test]
    fn lines_anywhere_stay_inside_the_image(
        ax in -10_000i64..10_000, ay in -10_000i64..10_000,
        bx in -10_000i64..10_000, by in -10_000i64..10_000,
        width in 1u32..6,
    ) {
        let mut img = ImageBuffer::new(32);
        draw_line(&mut img, (ax, ay), (bx, by), width, [1, 2, 3]);
        prop_assert_eq!(img.as_raw().len(), 32 * 32 * 3);
    }

    #[test]
    fn visible_endpoints_are_painted(ax in 0i64..32, ay in 0i64..32, bx in 0i64..32, by in 0i64..32) {
        let mut img = ImageBuffer::new(32);
        draw_line(&mut img, (ax, ay), (bx, by), 1, [9, 9, 9]);
        prop_assert_eq!(img.get(ax, ay), Some([9, 9, 9]));
        prop_assert_eq!(img.get(bx, by), Some([9, 9, 9]));
    }

    #[test]
    fn fitted_curves_stay_inside_the_margin(
        crank in 0.1..0.3f64, coupler in 0.6..0.9f64, size in prop_oneof![Just(64u32), Just(128), Just(256)],
    ) {
        let inst = LinkageInstance::four_bar(0.8, crank, coupler, 0.75);
        let traj = trace(&inst, 360).unwrap();
        let t = fit_transform(&inst, 360, size, 0.05).unwrap();
        let lo = (0.05 * (size - 1) as f64).floor() as i64 - 2;
        let hi = size as i64 - 1 - lo;
        for p in &traj.points {
            let (x, y) = t.to_pixel(*p);
            prop_assert!(x >= lo && x <= hi && y >= lo && y <= hi);
        }
    }
}
