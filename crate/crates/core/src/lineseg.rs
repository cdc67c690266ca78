//! Straight-line pectoral boundary: trace the candidate edge, fit a line,
//! rasterize it and cut the breast along its extension.

use crate::error::{Error, Result};
use crate::imageio::{BinaryMask, GrayImage};
use crate::labeling::ccl_candidate;
use crate::preprocess::RoiWindow;

/// Segment between two `(row, col)` points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineSegment {
    pub p0: (f64, f64),
    pub p1: (f64, f64),
}

impl LineSegment {
    pub fn new(p0: (f64, f64), p1: (f64, f64)) -> Result<Self> {
        if p0 == p1 {
            return Err(Error::DegenerateSegment);
        }
        Ok(LineSegment { p0, p1 })
    }
}

/// One `(row, col)` per row, rows strictly increasing.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BoundaryTrace {
    pub points: Vec<(usize, usize)>,
}

/// Rightmost set column of each row that has one.
pub fn trace_boundary(candidate: &BinaryMask) -> Result<BoundaryTrace> {
    let w = candidate.width();
    let points: Vec<_> = candidate
        .bits()
        .chunks_exact(w.max(1))
        .enumerate()
        .filter_map(|(r, row)| row.iter().rposition(|&b| b).map(|c| (r, c)))
        .collect();
    if points.is_empty() {
        return Err(Error::EmptyMask);
    }
    Ok(BoundaryTrace { points })
}

/// `col = intercept + slope * row`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineFit {
    pub intercept: f64,
    pub slope: f64,
    /// Sum of squared column residuals.
    pub residual: f64,
    /// Fitted line between the first and last traced rows.
    pub segment: LineSegment,
}

impl LineFit {
    #[inline]
    pub fn col_at(&self, row: f64) -> f64 {
        self.intercept + self.slope * row
    }
}

/// Least-squares fit of column against row.
pub fn fit_line(trace: &BoundaryTrace) -> Result<LineFit> {
    let pts = &trace.points;
    if pts.len() < 2 {
        return Err(Error::TooFewPoints(pts.len()));
    }
    let n = pts.len() as f64;
    let mean_r = pts.iter().map(|p| p.0 as f64).sum::<f64>() / n;
    let mean_c = pts.iter().map(|p| p.1 as f64).sum::<f64>() / n;
    let (mut srr, mut src) = (0.0, 0.0);
    for &(r, c) in pts {
        let dr = r as f64 - mean_r;
        srr += dr * dr;
        src += dr * (c as f64 - mean_c);
    }
    if srr == 0.0 {
        return Err(Error::TooFewPoints(1));
    }
    let slope = src / srr;
    let intercept = mean_c - slope * mean_r;
    let residual = pts
        .iter()
        .map(|&(r, c)| (c as f64 - intercept - slope * r as f64).powi(2))
        .sum();
    let first = pts[0].0 as f64;
    let last = pts[pts.len() - 1].0 as f64;
    let segment = LineSegment::new(
        (first, intercept + slope * first),
        (last, intercept + slope * last),
    )?;
    Ok(LineFit {
        intercept,
        slope,
        residual,
        segment,
    })
}

/// Liang-Barsky clip of `seg` to `[0, h-1] x [0, w-1]`.
fn clip(seg: &LineSegment, width: usize, height: usize) -> Option<((f64, f64), (f64, f64))> {
    let (r0, c0) = seg.p0;
    let (dr, dc) = (seg.p1.0 - r0, seg.p1.1 - c0);
    let (rmax, cmax) = (height as f64 - 1.0, width as f64 - 1.0);
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for (p, q) in [(-dr, r0), (dr, rmax - r0), (-dc, c0), (dc, cmax - c0)] {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let t = q / p;
            if p < 0.0 {
                t0 = t0.max(t);
            } else {
                t1 = t1.min(t);
            }
        }
    }
    (t0 <= t1).then_some(((r0 + t0 * dr, c0 + t0 * dc), (r0 + t1 * dr, c0 + t1 * dc)))
}

/// 8-connected pixel chain from `p0` to `p1` (midpoint/Bresenham stepping),
/// clipped to the image.
pub fn rasterize_line(
    seg: &LineSegment,
    width: usize,
    height: usize,
) -> Result<Vec<(usize, usize)>> {
    let (a, b) = clip(seg, width, height).ok_or(Error::DegenerateSegment)?;
    let (mut r, mut c) = (a.0.round() as i64, a.1.round() as i64);
    let (r1, c1) = (b.0.round() as i64, b.1.round() as i64);
    let (dr, dc) = ((r1 - r).abs(), (c1 - c).abs());
    let (sr, sc) = ((r1 - r).signum(), (c1 - c).signum());
    let mut err = dc - dr;
    let mut out = Vec::with_capacity(dr.max(dc) as usize + 1);
    loop {
        out.push((r as usize, c as usize));
        if r == r1 && c == c1 {
            break;
        }
        let e2 = 2 * err;
        if e2 > -dr {
            err -= dr;
            c += sc;
        }
        if e2 < dc {
            err += dc;
            r += sr;
        }
    }
    Ok(out)
}

/// Breast pixels inside `window` on the chest-wall side of the fitted line.
///
/// Each row keeps one run starting at its first breast column and ending at
/// the pixel the line rounds to in that row, which counts as pectoral.
pub fn half_plane_mask(fit: &LineFit, breast: &BinaryMask, window: &RoiWindow) -> BinaryMask {
    let mut out = BinaryMask::empty(breast.width(), breast.height());
    for r in window.row_start..window.row_end.min(breast.height()) {
        let limit = fit.col_at(r as f64).round();
        if limit < 0.0 {
            continue;
        }
        let cols = window.col_start..window.col_end.min(breast.width());
        let Some(start) = cols.clone().find(|&c| breast.get(r, c)) else {
            continue;
        };
        for c in start..cols.end {
            if !breast.get(r, c) || c as f64 > limit {
                break;
            }
            out.set(r, c, true);
        }
    }
    out
}

/// Line through a traced candidate boundary, cut against the breast.
pub fn line_from_candidate(candidate: &BinaryMask, breast: &BinaryMask) -> Result<BinaryMask> {
    let fit = fit_line(&trace_boundary(candidate)?)?;
    let roi = RoiWindow::for_size(breast.width(), breast.height());
    Ok(half_plane_mask(&fit, breast, &roi))
}

pub fn line_pectoral(img: &GrayImage, breast: &BinaryMask) -> Result<BinaryMask> {
    let candidate = ccl_candidate(img, breast)?;
    line_from_candidate(&candidate, breast)
}
