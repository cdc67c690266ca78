//! Smoothing, background removal, orientation and ROI extraction.

use crate::error::{Error, Result};
use crate::imageio::{BinaryMask, GrayImage};
use crate::labeling::{fill_holes, largest_component, Connectivity};

/// Side of the image holding the chest wall and the pectoral corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Left,
    Right,
}

impl Orientation {
    pub fn flipped(self) -> Orientation {
        match self {
            Orientation::Left => Orientation::Right,
            Orientation::Right => Orientation::Left,
        }
    }
}

/// Half-open pixel window `[row_start, row_end) x [col_start, col_end)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RoiWindow {
    pub row_start: usize,
    pub row_end: usize,
    pub col_start: usize,
    pub col_end: usize,
}

impl RoiWindow {
    /// Top-left quadrant, rounded up.
    pub fn for_size(width: usize, height: usize) -> RoiWindow {
        RoiWindow {
            row_start: 0,
            row_end: height.div_ceil(2),
            col_start: 0,
            col_end: width.div_ceil(2),
        }
    }

    /// Tight box around the set pixels of `mask`.
    pub fn bounding(mask: &BinaryMask) -> Option<RoiWindow> {
        let mut pts = mask.points();
        let (r0, c0) = pts.next()?;
        let mut win = RoiWindow {
            row_start: r0,
            row_end: r0 + 1,
            col_start: c0,
            col_end: c0 + 1,
        };
        for (r, c) in pts {
            win.row_end = win.row_end.max(r + 1);
            win.col_start = win.col_start.min(c);
            win.col_end = win.col_end.max(c + 1);
        }
        Some(win)
    }

    pub fn rows(&self) -> usize {
        self.row_end - self.row_start
    }

    pub fn cols(&self) -> usize {
        self.col_end - self.col_start
    }

    #[inline]
    pub fn contains(&self, row: usize, col: usize) -> bool {
        (self.row_start..self.row_end).contains(&row)
            && (self.col_start..self.col_end).contains(&col)
    }

    pub fn mask(&self, width: usize, height: usize) -> BinaryMask {
        BinaryMask::from_fn(width, height, |r, c| self.contains(r, c))
    }
}

/// 3x3 median with replicated edges.
pub fn smooth(img: &GrayImage) -> GrayImage {
    let (w, h) = (img.width(), img.height());
    let src = img.data();
    let mut out = Vec::with_capacity(src.len());
    let mut win = [0u16; 9];
    for r in 0..h {
        let rows = [r.saturating_sub(1), r, (r + 1).min(h - 1)];
        for c in 0..w {
            let cols = [c.saturating_sub(1), c, (c + 1).min(w - 1)];
            let mut k = 0;
            for &rr in &rows {
                for &cc in &cols {
                    win[k] = src[rr * w + cc];
                    k += 1;
                }
            }
            let (_, median, _) = win.select_nth_unstable(4);
            out.push(*median);
        }
    }
    img.with_data(out)
}

/// Otsu threshold over a histogram. Class 0 is `v <= t`; ties go to the
/// smaller `t`.
pub fn otsu_from_histogram(hist: &[u64]) -> Result<u16> {
    if hist.iter().filter(|&&n| n > 0).count() < 2 {
        return Err(Error::DegenerateHistogram);
    }
    let total: u64 = hist.iter().sum();
    let weighted: f64 = hist
        .iter()
        .enumerate()
        .map(|(v, &n)| v as f64 * n as f64)
        .sum();
    let mut best = (f64::NEG_INFINITY, 0usize);
    let mut n0 = 0u64;
    let mut sum0 = 0.0;
    for (t, &n) in hist.iter().enumerate().take(hist.len() - 1) {
        n0 += n;
        sum0 += t as f64 * n as f64;
        let n1 = total - n0;
        if n0 == 0 || n1 == 0 {
            continue;
        }
        let (w0, w1) = (n0 as f64, n1 as f64);
        let diff = sum0 / w0 - (weighted - sum0) / w1;
        let between = w0 * w1 * diff * diff;
        if between > best.0 {
            best = (between, t);
        }
    }
    Ok(best.1 as u16)
}

/// Otsu threshold of an arbitrary pixel sample.
pub fn otsu_threshold_of(values: impl IntoIterator<Item = u16>, maxval: u16) -> Result<u16> {
    let mut hist = vec![0u64; maxval as usize + 1];
    for v in values {
        hist[v as usize] += 1;
    }
    otsu_from_histogram(&hist)
}

pub fn otsu_threshold(img: &GrayImage) -> Result<u16> {
    otsu_threshold_of(img.data().iter().copied(), img.maxval())
}

/// Largest bright 4-connected region above the Otsu level, holes filled.
/// Drops labels, frames and other background clutter.
pub fn breast_region(img: &GrayImage) -> Result<BinaryMask> {
    let thr = match otsu_threshold(img) {
        Ok(t) => t,
        Err(Error::DegenerateHistogram) => return Err(Error::EmptyForeground),
        Err(e) => return Err(e),
    };
    let fg = crate::imageio::image_to_mask(img, thr);
    let largest = largest_component(&fg, Connectivity::Four).ok_or(Error::EmptyForeground)?;
    Ok(fill_holes(&largest))
}

/// Left when the left half holds at least as much breast as the right half.
/// The middle column of an odd-width mask is ignored so that mirroring
/// always flips an unbalanced decision.
pub fn detect_orientation(breast: &BinaryMask) -> Result<Orientation> {
    if breast.is_all_false() {
        return Err(Error::EmptyMask);
    }
    let w = breast.width();
    let half = w / 2;
    let (mut left, mut right) = (0usize, 0usize);
    for (_, c) in breast.points() {
        if c < half {
            left += 1;
        } else if c >= w - half {
            right += 1;
        }
    }
    Ok(if left >= right {
        Orientation::Left
    } else {
        Orientation::Right
    })
}

/// Mirrors right-sided images so the pectoral corner sits top-left.
pub fn canonicalize(img: &GrayImage, orientation: Orientation) -> GrayImage {
    match orientation {
        Orientation::Left => img.clone(),
        Orientation::Right => img.mirror(),
    }
}

pub fn canonicalize_mask(mask: &BinaryMask, orientation: Orientation) -> BinaryMask {
    match orientation {
        Orientation::Left => mask.clone(),
        Orientation::Right => mask.mirror(),
    }
}

pub fn extract_roi(img: &GrayImage) -> RoiWindow {
    RoiWindow::for_size(img.width(), img.height())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labeling::label_components;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_image(rng: &mut ChaCha8Rng, w: usize, h: usize) -> GrayImage {
        let data = (0..w * h).map(|_| rng.random_range(0..=255)).collect();
        GrayImage::new(w, h, 255, data).unwrap()
    }

    fn brute_median(img: &GrayImage, r: usize, c: usize) -> u16 {
        let (w, h) = (img.width() as isize, img.height() as isize);
        let mut v = Vec::new();
        for dr in -1..=1isize {
            for dc in -1..=1isize {
                let rr = (r as isize + dr).clamp(0, h - 1) as usize;
                let cc = (c as isize + dc).clamp(0, w - 1) as usize;
                v.push(img.get(rr, cc));
            }
        }
        v.sort();
        v[4]
    }

    /// Direct between-class variance at every candidate, no running sums.
    fn brute_otsu(img: &GrayImage) -> u16 {
        let mut best = (-1.0f64, 0u16);
        for t in 0..=254u16 {
            let lo: Vec<f64> = img
                .data()
                .iter()
                .filter(|&&v| v <= t)
                .map(|&v| v as f64)
                .collect();
            let hi: Vec<f64> = img
                .data()
                .iter()
                .filter(|&&v| v > t)
                .map(|&v| v as f64)
                .collect();
            if lo.is_empty() || hi.is_empty() {
                continue;
            }
            let n = img.len() as f64;
            let (w0, w1) = (lo.len() as f64 / n, hi.len() as f64 / n);
            let m0 = lo.iter().sum::<f64>() / lo.len() as f64;
            let m1 = hi.iter().sum::<f64>() / hi.len() as f64;
            let var = w0 * w1 * (m0 - m1).powi(2);
            if var > best.0 + 1e-9 * var.abs().max(1.0) {
                best = (var, t);
            }
        }
        best.1
    }

    #[test]
    fn smooth_keeps_constants() {
        let img = GrayImage::filled(7, 5, 255, 42).unwrap();
        assert_eq!(smooth(&img), img);
    }

    #[test]
    fn smooth_kills_spike() {
        let mut img = GrayImage::filled(3, 3, 255, 0).unwrap();
        img.set(1, 1, 255);
        assert_eq!(smooth(&img).get(1, 1), 0);
    }

    #[test]
    fn smooth_matches_sorted_window() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let img = random_image(&mut rng, 8, 8);
            let out = smooth(&img);
            for r in 0..8 {
                for c in 0..8 {
                    assert_eq!(out.get(r, c), brute_median(&img, r, c));
                }
            }
        }
    }

    #[test]
    fn otsu_bimodal() {
        let data = [vec![10u16; 50], vec![200u16; 50]].concat();
        let img = GrayImage::new(10, 10, 255, data).unwrap();
        let t = otsu_threshold(&img).unwrap();
        assert!((10..200).contains(&t));
        assert_eq!(t, 10);
    }

    #[test]
    fn otsu_constant_is_degenerate() {
        let img = GrayImage::filled(4, 4, 255, 9).unwrap();
        assert!(matches!(
            otsu_threshold(&img),
            Err(Error::DegenerateHistogram)
        ));
    }

    #[test]
    fn otsu_matches_exhaustive_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let img = random_image(&mut rng, 16, 12);
            assert_eq!(otsu_threshold(&img).unwrap(), brute_otsu(&img));
        }
    }

    #[test]
    fn breast_region_keeps_largest_blob() {
        let (w, h) = (60, 50);
        let mut img = GrayImage::filled(w, h, 255, 10).unwrap();
        for r in 5..40 {
            for c in 0..30 {
                img.set(r, c, 180);
            }
        }
        // label artifact
        for r in 44..47 {
            for c in 50..56 {
                img.set(r, c, 250);
            }
        }
        // hole inside the blob
        img.set(20, 10, 10);
        let m = breast_region(&img).unwrap();
        assert_eq!(m.count(), 35 * 30);
        assert!(!m.get(45, 52));
        assert!(m.get(20, 10));
    }

    #[test]
    fn dark_image_has_no_breast() {
        let img = GrayImage::filled(10, 10, 255, 0).unwrap();
        assert!(matches!(breast_region(&img), Err(Error::EmptyForeground)));
    }

    #[test]
    fn orientation_basics() {
        let m = BinaryMask::from_fn(10, 4, |_, c| c < 3);
        assert_eq!(detect_orientation(&m).unwrap(), Orientation::Left);
        assert_eq!(detect_orientation(&m.mirror()).unwrap(), Orientation::Right);
        let balanced = BinaryMask::from_fn(10, 4, |_, c| c == 0 || c == 9);
        assert_eq!(detect_orientation(&balanced).unwrap(), Orientation::Left);
        assert!(matches!(
            detect_orientation(&BinaryMask::empty(3, 3)),
            Err(Error::EmptyMask)
        ));
    }

    #[test]
    fn canonicalize_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let img = random_image(&mut rng, 9, 4);
        assert_eq!(canonicalize(&img, Orientation::Left), img);
        let m = canonicalize(&img, Orientation::Right);
        for r in 0..4 {
            for c in 0..9 {
                assert_eq!(m.get(r, 8 - c), img.get(r, c));
            }
        }
        assert_eq!(canonicalize(&m, Orientation::Right), img);
    }

    #[test]
    fn roi_quadrant() {
        let roi = |w, h| RoiWindow::for_size(w, h);
        assert_eq!((roi(100, 100).row_end, roi(100, 100).col_end), (50, 50));
        assert_eq!((roi(101, 101).row_end, roi(101, 101).col_end), (51, 51));
        assert_eq!((roi(1, 1).row_end, roi(1, 1).col_end), (1, 1));
        let img = GrayImage::filled(7, 3, 255, 0).unwrap();
        assert_eq!(
            extract_roi(&img),
            RoiWindow {
                row_start: 0,
                row_end: 2,
                col_start: 0,
                col_end: 4
            }
        );
    }

    fn arb_image() -> impl Strategy<Value = GrayImage> {
        (1usize..16, 1usize..16).prop_flat_map(|(w, h)| {
            proptest::collection::vec(0u16..=255, w * h)
                .prop_map(move |d| GrayImage::new(w, h, 255, d).unwrap())
        })
    }

    proptest! {
        #[test]
        fn smooth_stays_in_range(img in arb_image()) {
            let lo = *img.data().iter().min().unwrap();
            let hi = *img.data().iter().max().unwrap();
            let out = smooth(&img);
            prop_assert!(out.data().iter().all(|&v| lo <= v && v <= hi));
        }

        #[test]
        fn mirror_flips_unbalanced_orientation(
            bits in proptest::collection::vec(any::<bool>(), 1..120),
            w in 1usize..12,
        ) {
            let h = bits.len() / w;
            prop_assume!(h > 0);
            let m = BinaryMask::new(w, h, bits[..w * h].to_vec()).unwrap();
            prop_assume!(!m.is_all_false());
            let half = w / 2;
            let left = m.points().filter(|&(_, c)| c < half).count();
            let right = m.points().filter(|&(_, c)| c >= w - half).count();
            let o = detect_orientation(&m).unwrap();
            if left != right {
                prop_assert_eq!(detect_orientation(&m.mirror()).unwrap(), o.flipped());
            }
        }

        #[test]
        fn roi_inside_image(w in 1usize..500, h in 1usize..500) {
            let roi = RoiWindow::for_size(w, h);
            prop_assert!(roi.row_start < roi.row_end && roi.row_end <= h);
            prop_assert!(roi.col_start < roi.col_end && roi.col_end <= w);
        }

        #[test]
        fn breast_region_is_single_filled_component(img in arb_image()) {
            if let Ok(m) = breast_region(&img) {
                prop_assert_eq!(label_components(&m, Connectivity::Four).n_components(), 1);
                prop_assert_eq!(crate::labeling::fill_holes(&m), m);
            }
        }
    }
}
