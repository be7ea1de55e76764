use linkforge_core::metrics::{chamfer, evaluate_pairs, psnr, PSNR_CAP};
use linkforge_core::{ImageBuffer, Point, Task};
use proptest::prelude::*;
use serde::Deserialize;

#[derive(Deserialize)]
struct Case {
    size: u32,
    a: [u64; 4],
    b: [u64; 4],
    psnr: f64,
}

/// Channel c of pixel (x, y) is (a·x + b·y + c0·(c+1)) mod m.
fn pattern(size: u32, [a, b, c0, m]: [u64; 4]) -> ImageBuffer {
    let mut data = Vec::with_capacity((size * size * 3) as usize);
    for y in 0..size as u64 {
        for x in 0..size as u64 {
            for c in 0..3 {
                data.push(((a * x + b * y + c0 * (c + 1)) % m) as u8);
            }
        }
    }
    ImageBuffer::from_raw(size, data).unwrap()
}

#[test]
fn psnr_matches_frozen_reference_values() {
    let cases: Vec<Case> = serde_json::from_str(include_str!("fixtures/psnr_cases.json")).unwrap();
    assert_eq!(cases.len(), 10);
    for c in cases {
        let got = psnr(&pattern(c.size, c.a), &pattern(c.size, c.b)).unwrap();
        assert!((got - c.psnr).abs() <= 1e-9, "{:?} vs {:?}: {got} != {}", c.a, c.b, c.psnr);
    }
}

#[test]
fn psnr_reference_points() {
    let grey = ImageBuffer::filled(32, [100, 100, 100]);
    assert_eq!(psnr(&grey, &grey).unwrap(), PSNR_CAP);
    let plus16 = psnr(&grey, &ImageBuffer::filled(32, [116, 116, 116])).unwrap();
    assert!((plus16 - 24.05).abs() <= 0.01);
    let bw = psnr(&ImageBuffer::filled(32, [0; 3]), &ImageBuffer::filled(32, [255; 3])).unwrap();
    assert_eq!(bw, 0.0);
    assert!(psnr(&grey, &ImageBuffer::filled(16, [0; 3])).is_err());
}

#[test]
fn evaluation_over_directories() {
    let pred = tempfile::tempdir().unwrap();
    let gt = tempfile::tempdir().unwrap();
    let ids = ["a", "b"];
    ImageBuffer::filled(16, [100; 3]).save(pred.path().join("a.png")).unwrap();
    ImageBuffer::filled(16, [100; 3]).save(gt.path().join("a.png")).unwrap();
    ImageBuffer::filled(16, [100; 3]).save(pred.path().join("b.png")).unwrap();
    ImageBuffer::filled(16, [116; 3]).save(gt.path().join("b.png")).unwrap();
    let report = evaluate_pairs(pred.path(), gt.path(), &ids, Task::Analysis).unwrap();
    assert_eq!(report.count, 2);
    assert_eq!(report.capped, 1);
    let b = 10.0 * (255.0f64 * 255.0 / 256.0).log10();
    assert!((report.mean - (100.0 + b) / 2.0).abs() <= 1e-9);
    assert!((report.std - (100.0 - b) / 2.0).abs() <= 1e-9);

    let mut buf = Vec::new();
    report.write_jsonl(&mut buf).unwrap();
    let lines: Vec<serde_json::Value> =
        String::from_utf8(buf).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[2]["record"], "summary");
    assert_eq!(lines[2]["task"], "analysis");

    assert!(evaluate_pairs(pred.path(), gt.path(), &["missing"], Task::Analysis).is_err());
}

fn image(size: u32) -> impl Strategy<Value = ImageBuffer> {
    proptest::collection::vec(any::<u8>(), (size * size * 3) as usize)
        .prop_map(move |d| ImageBuffer::from_raw(size, d).unwrap())
}

fn points() -> impl Strategy<Value = Vec<Point>> {
    proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64).prop_map(|(x, y)| Point::new(x, y)), 1..40)
}

proptest! {
    #[test]
    fn psnr_is_symmetric(a in image(8), b in image(8)) {
        prop_assert_eq!(psnr(&a, &b).unwrap(), psnr(&b, &a).unwrap());
    }

    #[test]
    fn psnr_ignores_pixel_order(a in image(6), b in image(6), shift in 1usize..36) {
        let rotate = |img: &ImageBuffer| {
            let mut d = img.as_raw().to_vec();
            d.rotate_left(3 * shift);
            ImageBuffer::from_raw(6, d).unwrap()
        };
        prop_assert!((psnr(&a, &b).unwrap() - psnr(&rotate(&a), &rotate(&b)).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn psnr_falls_as_noise_grows(base in image(8), noise in proptest::collection::vec(1u8..=60, 192)) {
        let add = |k: u8| {
            let d = base.as_raw().iter().zip(&noise).map(|(&p, &n)| {
                let n = n.saturating_mul(k).min(120);
                if p < 128 { p + n } else { p - n }
            });
            ImageBuffer::from_raw(8, d.collect()).unwrap()
        };
        let small = psnr(&base, &add(1)).unwrap();
        let large = psnr(&base, &add(2)).unwrap();
        prop_assert!(large <= small);
        prop_assert!(small < PSNR_CAP);
    }

    #[test]
    fn chamfer_is_symmetric_and_zero_on_self(a in points(), b in points()) {
        prop_assert!((chamfer(&a, &b).unwrap() - chamfer(&b, &a).unwrap()).abs() <= 1e-12);
        prop_assert_eq!(chamfer(&a, &a).unwrap(), 0.0);
        prop_assert!(chamfer(&a, &b).unwrap() >= 0.0);
    }

    #[test]
    fn chamfer_of_shifted_copy_is_bounded_by_the_shift(a in points(), dx in 0.0..0.5f64) {
        // Every point's own shifted copy is dx away, in both directions.
        let b: Vec<Point> = a.iter().map(|p| Point::new(p.x + dx, p.y)).collect();
        prop_assert!(chamfer(&a, &b).unwrap() <= 2.0 * dx + 1e-12);
    }
}
