//! Grayscale rasters, binary masks and Netpbm PGM (P2/P5) encoding.
//!
//! Masks persist as single-byte 0/255 PGMs so they stay viewable and diffable.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Row-major grayscale raster with an explicit intensity ceiling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    maxval: u16,
    data: Vec<u16>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, maxval: u16, data: Vec<u16>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "{width}x{height} has no pixels"
            )));
        }
        if maxval == 0 {
            return Err(Error::MaxvalOutOfRange(0));
        }
        if data.len() != width * height {
            return Err(Error::SizeMismatch(data.len(), width * height));
        }
        if let Some(v) = data.iter().find(|&&v| v > maxval) {
            return Err(Error::InvalidImage(format!(
                "sample {v} exceeds maxval {maxval}"
            )));
        }
        Ok(GrayImage {
            width,
            height,
            maxval,
            data,
        })
    }

    /// Image filled with a single value.
    pub fn filled(width: usize, height: usize, maxval: u16, value: u16) -> Result<Self> {
        Self::new(width, height, maxval, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn maxval(&self) -> u16 {
        self.maxval
    }

    pub fn data(&self) -> &[u16] {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u16 {
        self.data[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: u16) {
        debug_assert!(value <= self.maxval);
        self.data[row * self.width + col] = value;
    }

    /// Swaps columns so that `(r, c)` lands on `(r, width - 1 - c)`.
    pub fn mirror(&self) -> GrayImage {
        let mut data = Vec::with_capacity(self.data.len());
        for row in self.data.chunks_exact(self.width) {
            data.extend(row.iter().rev());
        }
        GrayImage { data, ..*self }
    }

    pub(crate) fn with_data(&self, data: Vec<u16>) -> GrayImage {
        debug_assert_eq!(data.len(), self.data.len());
        GrayImage { data, ..*self }
    }
}

/// Row-major boolean raster.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl BinaryMask {
    pub fn new(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != width * height {
            return Err(Error::SizeMismatch(bits.len(), width * height));
        }
        Ok(BinaryMask {
            width,
            height,
            bits,
        })
    }

    pub fn empty(width: usize, height: usize) -> Self {
        BinaryMask {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut bits = Vec::with_capacity(width * height);
        for r in 0..height {
            for c in 0..width {
                bits.push(f(r, c));
            }
        }
        BinaryMask {
            width,
            height,
            bits,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.bits[row * self.width + col] = value;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_all_false(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn same_shape(&self, other: &BinaryMask) -> Result<()> {
        if self.width != other.width || self.height != other.height {
            return Err(Error::SizeMismatch(self.bits.len(), other.bits.len()));
        }
        Ok(())
    }

    pub fn and(&self, other: &BinaryMask) -> Result<BinaryMask> {
        self.same_shape(other)?;
        let bits = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| *a && *b)
            .collect();
        Ok(BinaryMask { bits, ..*self })
    }

    pub fn or(&self, other: &BinaryMask) -> Result<BinaryMask> {
        self.same_shape(other)?;
        let bits = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| *a || *b)
            .collect();
        Ok(BinaryMask { bits, ..*self })
    }

    pub fn not(&self) -> BinaryMask {
        let bits = self.bits.iter().map(|b| !b).collect();
        BinaryMask { bits, ..*self }
    }

    pub fn is_subset_of(&self, other: &BinaryMask) -> bool {
        self.width == other.width
            && self.height == other.height
            && self.bits.iter().zip(&other.bits).all(|(a, b)| !*a || *b)
    }

    pub fn mirror(&self) -> BinaryMask {
        let mut bits = Vec::with_capacity(self.bits.len());
        for row in self.bits.chunks_exact(self.width.max(1)) {
            bits.extend(row.iter().rev());
        }
        BinaryMask { bits, ..*self }
    }

    /// Iterates `(row, col)` of every set pixel in raster order.
    pub fn points(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.width;
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| (i / w, i % w))
    }
}

/// `true` becomes 255, `false` becomes 0.
pub fn mask_to_image(mask: &BinaryMask) -> GrayImage {
    let data = mask.bits.iter().map(|&b| if b { 255 } else { 0 }).collect();
    GrayImage {
        width: mask.width,
        height: mask.height,
        maxval: 255,
        data,
    }
}

/// Marks pixels strictly brighter than `thr`.
pub fn image_to_mask(img: &GrayImage, thr: u16) -> BinaryMask {
    let bits = img.data.iter().map(|&v| v > thr).collect();
    BinaryMask {
        width: img.width,
        height: img.height,
        bits,
    }
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderCursor<'a> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&b) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if b == b'\n' || b == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<u32> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(match self.bytes.get(self.pos) {
                None => Error::BadHeader(format!("missing {what}")),
                Some(b) => Error::BadHeader(format!("unexpected byte {b:#04x} reading {what}")),
            });
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::BadHeader(format!("{what} does not fit in 32 bits")))
    }
}

/// Parses a binary (P5) or ASCII (P2) PGM.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let magic = bytes.get(..2).unwrap_or(bytes);
    let binary = match magic {
        b"P5" => true,
        b"P2" => false,
        other => return Err(Error::BadMagic(String::from_utf8_lossy(other).into_owned())),
    };
    let mut cur = HeaderCursor { bytes, pos: 2 };
    let width = cur.number("width")? as usize;
    let height = cur.number("height")? as usize;
    let maxval = cur.number("maxval")?;
    if maxval == 0 || maxval > u16::MAX as u32 {
        return Err(Error::MaxvalOutOfRange(maxval));
    }
    let maxval = maxval as u16;
    if width == 0 || height == 0 {
        return Err(Error::BadHeader(format!("zero dimension {width}x{height}")));
    }
    let expected = width
        .checked_mul(height)
        .ok_or_else(|| Error::BadHeader("dimensions overflow".into()))?;

    let data = if binary {
        // exactly one whitespace byte separates maxval from the raster
        match bytes.get(cur.pos) {
            Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
            _ => return Err(Error::BadHeader("missing whitespace after maxval".into())),
        }
        let raster = &bytes[cur.pos..];
        if maxval <= 255 {
            if raster.len() < expected {
                return Err(Error::TruncatedData {
                    expected,
                    found: raster.len(),
                });
            }
            raster[..expected]
                .iter()
                .map(|&b| b as u16)
                .collect::<Vec<_>>()
        } else {
            if raster.len() < 2 * expected {
                return Err(Error::TruncatedData {
                    expected,
                    found: raster.len() / 2,
                });
            }
            raster[..2 * expected]
                .chunks_exact(2)
                .map(|p| u16::from_be_bytes([p[0], p[1]]))
                .collect()
        }
    } else {
        let mut data = Vec::with_capacity(expected);
        while data.len() < expected {
            cur.skip_space_and_comments();
            if cur.pos >= bytes.len() {
                return Err(Error::TruncatedData {
                    expected,
                    found: data.len(),
                });
            }
            let v = cur.number("sample")?;
            if v > maxval as u32 {
                return Err(Error::InvalidImage(format!(
                    "sample {v} exceeds maxval {maxval}"
                )));
            }
            data.push(v as u16);
        }
        data
    };
    GrayImage::new(width, height, maxval, data)
}

/// Encodes as binary P5; samples take two big-endian bytes when maxval > 255.
pub fn write_pgm(img: &GrayImage) -> Vec<u8> {
    let header = format!("P5\n{} {}\n{}\n", img.width, img.height, img.maxval);
    let wide = img.maxval > 255;
    let mut out = Vec::with_capacity(header.len() + img.data.len() * if wide { 2 } else { 1 });
    out.extend_from_slice(header.as_bytes());
    if wide {
        for &v in &img.data {
            out.extend_from_slice(&v.to_be_bytes());
        }
    } else {
        out.extend(img.data.iter().map(|&v| v as u8));
    }
    out
}

pub fn load_pgm(path: impl AsRef<Path>) -> Result<GrayImage> {
    read_pgm(&fs::read(path)?)
}

pub fn save_pgm(path: impl AsRef<Path>, img: &GrayImage) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, write_pgm(img)).map_err(|source| Error::UnwritableOutput {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_mask(path: impl AsRef<Path>) -> Result<BinaryMask> {
    let img = load_pgm(path)?;
    Ok(image_to_mask(&img, img.maxval() / 2))
}

pub fn save_mask(path: impl AsRef<Path>, mask: &BinaryMask) -> Result<()> {
    save_pgm(path, &mask_to_image(mask))
}
