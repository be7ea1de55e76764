use serde::{Deserialize, Serialize};

pub type Rgb = [u8; 3];

pub const WHITE: Rgb = [255, 255, 255];

/// Fixed palette for mechanism and curve images. Bump `version` whenever a
/// color changes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorScheme {
    pub version: u32,
    pub ground: Rgb,
    pub input: Rgb,
    pub link: Rgb,
    pub joint: Rgb,
    pub slow: Rgb,
    pub fast: Rgb,
    pub grayscale: Rgb,
}

impl ColorScheme {
    pub const V1: ColorScheme = ColorScheme {
        version: 1,
        ground: [255, 0, 0],
        input: [0, 255, 0],
        link: [0, 0, 255],
        joint: [255, 255, 0],
        slow: [0, 0, 255],
        fast: [255, 0, 0],
        grayscale: [0, 0, 0],
    };

    /// Linear interpolation from `slow` (u = 0) to `fast` (u = 1), rounded
    /// half up per channel.
    pub fn gradient(&self, u: f64) -> Rgb {
        let u = u.clamp(0.0, 1.0);
        std::array::from_fn(|c| {
            let (a, b) = (self.slow[c] as f64, self.fast[c] as f64);
            (a + (b - a) * u + 0.5).floor() as u8
        })
    }
}

impl Default for ColorScheme {
    fn default() -> Self {
        Self::V1
    }
}

pub fn speed_to_color(u: f64) -> Rgb {
    ColorScheme::V1.gradient(u)
}

/// Maps speeds to [0, 1] by min/max. A constant profile (spread within
/// 1e-9 of the maximum) maps to 0.5 everywhere.
pub fn normalize_speeds(speeds: &[f64]) -> Vec<f64> {
    let (lo, hi) = speeds.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &s| (lo.min(s), hi.max(s)));
    let spread = hi - lo;
    if spread.is_nan() || spread <= 1e-9 * hi.abs().max(f64::MIN_POSITIVE) {
        return vec![0.5; speeds.len()];
    }
    speeds.iter().map(|s| (s - lo) / spread).collect()
}
