//! Deterministic RGB rendering of mechanisms and curves.
//!
//! All rasterization is integer-only after a single rounding of each
//! endpoint, so output bytes do not depend on platform or run.

mod color;
mod draw;
mod render;
mod transform;

use std::fs::File;
use std::io::{self, BufWriter, Cursor, Read, Write};
use std::path::Path;

use thiserror::Error;

pub use color::{normalize_speeds, speed_to_color, ColorScheme, Rgb, WHITE};
pub use draw::{draw_disc, draw_line};
pub use render::{render_curve, render_mechanism, segment_colors};
pub use transform::Transform;

pub const DEFAULT_IMAGE_SIZE: u32 = 128;
pub const MIN_IMAGE_SIZE: u32 = 64;
pub const MAX_IMAGE_SIZE: u32 = 256;

#[derive(Debug, Error)]
pub enum RasterError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("png encoding failed: {0}")]
    Encode(#[from] png::EncodingError),
    #[error("png decoding failed: {0}")]
    Decode(#[from] png::DecodingError),
    #[error("unsupported png layout: {0}")]
    Unsupported(String),
}

/// Square 8-bit RGB image, row-major, white background.
#[derive(Clone, PartialEq, Eq)]
pub struct ImageBuffer {
    size: u32,
    data: Vec<u8>,
}

impl std::fmt::Debug for ImageBuffer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ImageBuffer").field("size", &self.size).finish_non_exhaustive()
    }
}

impl ImageBuffer {
    pub fn new(size: u32) -> Self {
        Self::filled(size, WHITE)
    }

    pub fn filled(size: u32, color: Rgb) -> Self {
        let data = std::iter::repeat_n(color, (size * size) as usize).flatten().collect();
        Self { size, data }
    }

    /// Wraps raw RGB bytes; `None` if the length is not `size² · 3`.
    pub fn from_raw(size: u32, data: Vec<u8>) -> Option<Self> {
        (data.len() == (size * size * 3) as usize).then_some(Self { size, data })
    }

    pub fn width(&self) -> u32 {
        self.size
    }

    pub fn height(&self) -> u32 {
        self.size
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn as_raw(&self) -> &[u8] {
        &self.data
    }

    pub fn as_raw_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    fn index(&self, x: i64, y: i64) -> Option<usize> {
        let s = self.size as i64;
        (x >= 0 && y >= 0 && x < s && y < s).then(|| ((y * s + x) * 3) as usize)
    }

    pub fn get(&self, x: i64, y: i64) -> Option<Rgb> {
        self.index(x, y).map(|i| [self.data[i], self.data[i + 1], self.data[i + 2]])
    }

    /// Writes a pixel; coordinates outside the image are ignored.
    pub fn put(&mut self, x: i64, y: i64, color: Rgb) {
        if let Some(i) = self.index(x, y) {
            self.data[i..i + 3].copy_from_slice(&color);
        }
    }

    pub fn pixels(&self) -> impl Iterator<Item = (u32, u32, Rgb)> + '_ {
        let s = self.size;
        self.data.chunks_exact(3).enumerate().map(move |(i, c)| (i as u32 % s, i as u32 / s, [c[0], c[1], c[2]]))
    }

    /// PNG with fixed compression and filter settings and no ancillary chunks.
    pub fn write_png<W: Write>(&self, w: W) -> Result<(), RasterError> {
        let mut enc = png::Encoder::new(w, self.size, self.size);
        enc.set_color(png::ColorType::Rgb);
        enc.set_depth(png::BitDepth::Eight);
        enc.set_compression(png::Compression::Balanced);
        enc.set_filter(png::Filter::Sub);
        let mut writer = enc.write_header()?;
        writer.write_image_data(&self.data)?;
        writer.finish()?;
        Ok(())
    }

    /// Reads a square PNG, converting gray/alpha/16-bit layouts to RGB8.
    pub fn read_png<R: Read>(mut r: R) -> Result<Self, RasterError> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        let mut dec = png::Decoder::new(Cursor::new(bytes));
        dec.set_transformations(png::Transformations::EXPAND | png::Transformations::STRIP_16);
        let mut reader = dec.read_info()?;
        let mut buf = vec![0; reader.output_buffer_size().unwrap_or(0)];
        let info = reader.next_frame(&mut buf)?;
        if info.width != info.height {
            return Err(RasterError::Unsupported(format!("image must be square, got {}x{}", info.width, info.height)));
        }
        let px = (info.width * info.height) as usize;
        let bytes = &buf[..info.buffer_size()];
        let data: Vec<u8> = match info.color_type {
            png::ColorType::Rgb => bytes.to_vec(),
            png::ColorType::Rgba => bytes.chunks_exact(4).flat_map(|c| [c[0], c[1], c[2]]).collect(),
            png::ColorType::Grayscale => bytes.iter().flat_map(|&g| [g, g, g]).collect(),
            png::ColorType::GrayscaleAlpha => bytes.chunks_exact(2).flat_map(|c| [c[0], c[0], c[0]]).collect(),
            other => return Err(RasterError::Unsupported(format!("{other:?}"))),
        };
        if data.len() != px * 3 {
            return Err(RasterError::Unsupported("unexpected buffer length".into()));
        }
        Ok(Self { size: info.width, data })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), RasterError> {
        let mut w = BufWriter::new(File::create(path)?);
        self.write_png(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, RasterError> {
        Self::read_png(File::open(path)?)
    }
}
