//! Segmentation quality measures: probabilistic Rand index, local
//! consistency error, Jaccard/Tanimoto, cosine angle, mean absolute error and
//! Hausdorff distance.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::imageio::BinaryMask;

/// Per-pixel region labels of one segmentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segmentation {
    labels: Vec<u32>,
}

impl Segmentation {
    pub fn new(labels: Vec<u32>) -> Self {
        Segmentation { labels }
    }

    /// Two regions: set pixels (label 1) and the rest (label 0).
    pub fn from_mask(mask: &BinaryMask) -> Self {
        Segmentation {
            labels: mask.bits().iter().map(|&b| b as u32).collect(),
        }
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn n_pixels(&self) -> usize {
        self.labels.len()
    }
}

/// Reference segmentations of one image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundTruthSet {
    truths: Vec<Segmentation>,
}

impl GroundTruthSet {
    pub fn new(truths: Vec<Segmentation>) -> Result<Self> {
        let first = truths.first().ok_or(Error::EmptyGroundTruth)?;
        if let Some(bad) = truths.iter().find(|t| t.n_pixels() != first.n_pixels()) {
            return Err(Error::SizeMismatch(first.n_pixels(), bad.n_pixels()));
        }
        Ok(GroundTruthSet { truths })
    }

    pub fn single(truth: Segmentation) -> Self {
        GroundTruthSet {
            truths: vec![truth],
        }
    }

    pub fn truths(&self) -> &[Segmentation] {
        &self.truths
    }

    pub fn n_pixels(&self) -> usize {
        self.truths[0].n_pixels()
    }
}

#[inline]
fn pairs(n: u64) -> u128 {
    n as u128 * n.saturating_sub(1) as u128 / 2
}

/// Region sizes and joint (contingency) counts of two labelings.
struct Contingency {
    left: BTreeMap<u32, u64>,
    right: BTreeMap<u32, u64>,
    joint: BTreeMap<(u32, u32), u64>,
}

impl Contingency {
    fn of(a: &[u32], b: &[u32]) -> Self {
        let mut t = Contingency {
            left: BTreeMap::new(),
            right: BTreeMap::new(),
            joint: BTreeMap::new(),
        };
        for (&x, &y) in a.iter().zip(b) {
            *t.left.entry(x).or_default() += 1;
            *t.right.entry(y).or_default() += 1;
            *t.joint.entry((x, y)).or_default() += 1;
        }
        t
    }
}

/// Probabilistic Rand index of `s` against the ground-truth set.
///
/// Averages, over all unordered pixel pairs, the probability that the truths
/// agree with `s` about the pair being together or apart. Computed from
/// per-truth contingency tables in integer arithmetic, then divided once.
pub fn pri(s: &Segmentation, gt: &GroundTruthSet) -> Result<f64> {
    let n = s.n_pixels();
    if n != gt.n_pixels() {
        return Err(Error::SizeMismatch(n, gt.n_pixels()));
    }
    if n < 2 {
        return Err(Error::TooFewPixels(n));
    }
    let total = pairs(n as u64);
    let mut agree: u128 = 0;
    for truth in gt.truths() {
        let t = Contingency::of(s.labels(), truth.labels());
        let same_s: u128 = t.left.values().map(|&c| pairs(c)).sum();
        let same_t: u128 = t.right.values().map(|&c| pairs(c)).sum();
        let same_both: u128 = t.joint.values().map(|&c| pairs(c)).sum();
        let apart_both = total + same_both - same_s - same_t;
        agree += same_both + apart_both;
    }
    Ok(agree as f64 / (total as f64 * gt.truths().len() as f64))
}

/// `|R1(i) \ R2(i)| / |R1(i)|` where `Rk(i)` is pixel `i`'s region in `sk`.
pub fn local_error(s1: &Segmentation, s2: &Segmentation, i: usize) -> Result<f64> {
    if s1.n_pixels() != s2.n_pixels() {
        return Err(Error::SizeMismatch(s1.n_pixels(), s2.n_pixels()));
    }
    if i >= s1.n_pixels() {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: s1.n_pixels(),
        });
    }
    let (a, b) = (s1.labels[i], s2.labels[i]);
    let mut region = 0u64;
    let mut shared = 0u64;
    for (&x, &y) in s1.labels.iter().zip(&s2.labels) {
        if x == a {
            region += 1;
            shared += (y == b) as u64;
        }
    }
    Ok((region - shared) as f64 / region as f64)
}

/// Local consistency error: mean over pixels of the smaller of the two
/// directional local errors.
pub fn lce(s1: &Segmentation, s2: &Segmentation) -> Result<f64> {
    let n = s1.n_pixels();
    if n != s2.n_pixels() {
        return Err(Error::SizeMismatch(n, s2.n_pixels()));
    }
    if n == 0 {
        return Err(Error::TooFewPixels(0));
    }
    let t = Contingency::of(s1.labels(), s2.labels());
    // every pixel with the same (a, b) pair has the same error, so sum per cell
    let mut sum = 0.0;
    for (&(a, b), &count) in &t.joint {
        let r1 = t.left[&a] as f64;
        let r2 = t.right[&b] as f64;
        let both = count as f64;
        let e12 = (r1 - both) / r1;
        let e21 = (r2 - both) / r2;
        sum += count as f64 * e12.min(e21);
    }
    Ok(sum / n as f64)
}

/// Jaccard coefficient `|A ∩ B| / |A ∪ B|`; two empty masks score 1.
pub fn jaccard(a: &BinaryMask, b: &BinaryMask) -> Result<f64> {
    let m = AttributeCounts::of(a, b)?;
    let union = m.m01 + m.m10 + m.m11;
    if union == 0 {
        return Ok(1.0);
    }
    Ok(m.m11 as f64 / union as f64)
}

pub fn jaccard_distance(a: &BinaryMask, b: &BinaryMask) -> Result<f64> {
    Ok(1.0 - jaccard(a, b)?)
}

/// Co-occurrence counts of two binary attribute vectors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AttributeCounts {
    /// Both 0.
    pub m00: u64,
    /// `a` 0, `b` 1.
    pub m01: u64,
    /// `a` 1, `b` 0.
    pub m10: u64,
    /// Both 1.
    pub m11: u64,
}

impl AttributeCounts {
    pub fn of(a: &BinaryMask, b: &BinaryMask) -> Result<Self> {
        if a.width() != b.width() || a.height() != b.height() {
            return Err(Error::SizeMismatch(a.bits().len(), b.bits().len()));
        }
        let mut m = AttributeCounts::default();
        for (&x, &y) in a.bits().iter().zip(b.bits()) {
            match (x, y) {
                (false, false) => m.m00 += 1,
                (false, true) => m.m01 += 1,
                (true, false) => m.m10 += 1,
                (true, true) => m.m11 += 1,
            }
        }
        Ok(m)
    }

    /// `M11 / (M01 + M10 + M11)`, 1 when nothing is set in either.
    pub fn jaccard(&self) -> f64 {
        let d = self.m01 + self.m10 + self.m11;
        if d == 0 {
            1.0
        } else {
            self.m11 as f64 / d as f64
        }
    }

    /// `(M01 + M10) / (M01 + M10 + M11)`.
    pub fn jaccard_distance(&self) -> f64 {
        1.0 - self.jaccard()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Tanimoto coefficient `A·B / (|A|² + |B|² - A·B)`.
pub fn tanimoto(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch(a.len(), b.len()));
    }
    let ab = dot(a, b);
    let denom = dot(a, a) + dot(b, b) - ab;
    if denom == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(ab / denom)
}

/// Set form `Nc / (Na + Nb - Nc)`.
pub fn tanimoto_counts(na: u64, nb: u64, nc: u64) -> Result<f64> {
    let denom = (na + nb).checked_sub(nc).ok_or(Error::ZeroDenominator)?;
    if denom == 0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(nc as f64 / denom as f64)
}

/// Tanimoto of two masks viewed as 0/1 vectors. Two empty masks score 1,
/// matching [`jaccard`].
pub fn tanimoto_masks(a: &BinaryMask, b: &BinaryMask) -> Result<f64> {
    let m = AttributeCounts::of(a, b)?;
    match tanimoto_counts(m.m10 + m.m11, m.m01 + m.m11, m.m11) {
        Err(Error::ZeroDenominator) => Ok(1.0),
        other => other,
    }
}

/// Angle between two vectors, in `[0, π]`.
pub fn cosine_angle(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch(a.len(), b.len()));
    }
    let (na, nb) = (dot(a, a).sqrt(), dot(b, b).sqrt());
    if na == 0.0 || nb == 0.0 {
        return Err(Error::ZeroVector);
    }
    // 2·atan2(|u - v|, |u + v|) on the unit vectors equals arccos(u·v) but
    // stays exact at 0 and π, where arccos loses half its digits
    let (mut diff, mut sum) = (0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (u, v) = (x / na, y / nb);
        diff += (u - v) * (u - v);
        sum += (u + v) * (u + v);
    }
    Ok(2.0 * diff.sqrt().atan2(sum.sqrt()))
}

/// Paired predictions and true values.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueSeries {
    pub predicted: Vec<f64>,
    pub actual: Vec<f64>,
}

impl ValueSeries {
    pub fn new(predicted: Vec<f64>, actual: Vec<f64>) -> Result<Self> {
        if predicted.len() != actual.len() {
            return Err(Error::SizeMismatch(predicted.len(), actual.len()));
        }
        if predicted.is_empty() {
            return Err(Error::EmptySeries);
        }
        Ok(ValueSeries { predicted, actual })
    }
}

/// Mean absolute error.
pub fn mae(v: &ValueSeries) -> Result<f64> {
    if v.predicted.len() != v.actual.len() {
        return Err(Error::SizeMismatch(v.predicted.len(), v.actual.len()));
    }
    if v.predicted.is_empty() {
        return Err(Error::EmptySeries);
    }
    let sum: f64 = v
        .predicted
        .iter()
        .zip(&v.actual)
        .map(|(f, y)| (f - y).abs())
        .sum();
    Ok(sum / v.predicted.len() as f64)
}

/// Mean per-row gap between the rightmost set columns, over the rows where
/// both masks have foreground.
pub fn boundary_mae(pred: &BinaryMask, truth: &BinaryMask) -> Result<f64> {
    pred.same_shape(truth)?;
    let w = pred.width().max(1);
    let rightmost = |m: &BinaryMask| -> Vec<Option<usize>> {
        m.bits()
            .chunks_exact(w)
            .map(|row| row.iter().rposition(|&b| b))
            .collect()
    };
    let (p, t) = (rightmost(pred), rightmost(truth));
    let (f, y): (Vec<f64>, Vec<f64>) = p
        .iter()
        .zip(&t)
        .filter_map(|(a, b)| Some(((*a)? as f64, (*b)? as f64)))
        .unzip();
    if f.is_empty() {
        return Err(Error::NoOverlappingRows);
    }
    mae(&ValueSeries::new(f, y)?)
}

/// Fraction of pixels on which the masks disagree (MAE of the 0/1 vectors).
pub fn pixel_mae(pred: &BinaryMask, truth: &BinaryMask) -> Result<f64> {
    let m = AttributeCounts::of(pred, truth)?;
    let n = m.m00 + m.m01 + m.m10 + m.m11;
    if n == 0 {
        return Err(Error::EmptySeries);
    }
    Ok((m.m01 + m.m10) as f64 / n as f64)
}

/// Non-empty set of `(row, col)` points.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    points: Vec<(f64, f64)>,
}

impl PointSet {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(PointSet { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// Set pixels with at least one unset (or off-image) 8-neighbor.
    pub fn mask_boundary(mask: &BinaryMask) -> Result<Self> {
        let (w, h) = (mask.width() as isize, mask.height() as isize);
        let set = |r: isize, c: isize| {
            r >= 0 && c >= 0 && r < h && c < w && mask.get(r as usize, c as usize)
        };
        let points = mask
            .points()
            .filter(|&(r, c)| {
                let (r, c) = (r as isize, c as isize);
                (-1..=1).any(|dr| (-1..=1).any(|dc| !set(r + dr, c + dc)))
            })
            .map(|(r, c)| (r as f64, c as f64))
            .collect();
        PointSet::new(points)
    }
}

fn sq_dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)
}

/// `sup_{x in from} inf_{y in to} |x - y|`, squared. The inner loop stops as
/// soon as some `y` is closer than the running maximum, since that `x`
/// cannot raise it.
fn directed_sq(from: &[(f64, f64)], to: &[(f64, f64)]) -> f64 {
    let mut worst = 0.0f64;
    for &x in from {
        let mut best = f64::INFINITY;
        for &y in to {
            let d = sq_dist(x, y);
            if d < best {
                best = d;
                if best <= worst {
                    break;
                }
            }
        }
        worst = worst.max(best);
    }
    worst
}

/// Exact Euclidean Hausdorff distance.
pub fn hausdorff(x: &PointSet, y: &PointSet) -> f64 {
    directed_sq(&x.points, &y.points)
        .max(directed_sq(&y.points, &x.points))
        .sqrt()
}

/// Hausdorff distance between the outlines of two non-empty masks.
pub fn mask_hausdorff(a: &BinaryMask, b: &BinaryMask) -> Result<f64> {
    a.same_shape(b)?;
    Ok(hausdorff(
        &PointSet::mask_boundary(a)?,
        &PointSet::mask_boundary(b)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn seg(l: &[u32]) -> Segmentation {
        Segmentation::new(l.to_vec())
    }

    #[test]
    fn pri_endpoints() {
        let s = seg(&[0, 0, 1, 1, 2]);
        assert_eq!(pri(&s, &GroundTruthSet::single(s.clone())).unwrap(), 1.0);
        let one = seg(&[7; 6]);
        let singles =
            GroundTruthSet::new(vec![seg(&[0, 1, 2, 3, 4, 5]), seg(&[5, 4, 3, 2, 1, 0])]).unwrap();
        assert_eq!(pri(&one, &singles).unwrap(), 0.0);
    }

    #[test]
    fn pri_four_pixel_example() {
        // S = {ab|cd}, truth {abc|d}: pairs ab, ad, bd, cd... agree on
        // ab (together), ad, bd (apart); disagree on ac, bc, cd
        let s = seg(&[0, 0, 1, 1]);
        let t = GroundTruthSet::single(seg(&[0, 0, 0, 1]));
        assert_eq!(pri(&s, &t).unwrap(), 0.5);
    }

    #[test]
    fn pri_errors() {
        let t = GroundTruthSet::single(seg(&[0, 1, 1]));
        assert!(matches!(
            pri(&seg(&[0, 1]), &t),
            Err(Error::SizeMismatch(2, 3))
        ));
        let t = GroundTruthSet::single(seg(&[0]));
        assert!(matches!(pri(&seg(&[0]), &t), Err(Error::TooFewPixels(1))));
        assert!(GroundTruthSet::new(vec![]).is_err());
        assert!(GroundTruthSet::new(vec![seg(&[0]), seg(&[0, 0])]).is_err());
    }

    #[test]
    fn local_error_examples() {
        // R1 = {a,b,c,d}, R2 = {a,b}
        let s1 = seg(&[0, 0, 0, 0, 1]);
        let s2 = seg(&[0, 0, 1, 1, 1]);
        assert_eq!(local_error(&s1, &s2, 0).unwrap(), 0.5);
        assert_eq!(local_error(&s2, &s1, 0).unwrap(), 0.0);
        for i in 0..5 {
            assert_eq!(local_error(&s1, &s1, i).unwrap(), 0.0);
        }
        assert!(matches!(
            local_error(&s1, &s2, 5),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            local_error(&s1, &seg(&[0]), 0),
            Err(Error::SizeMismatch(..))
        ));
    }

    #[test]
    fn lce_examples() {
        let s = seg(&[0, 0, 1, 1, 2, 2]);
        assert_eq!(lce(&s, &s).unwrap(), 0.0);
        let finer = seg(&[0, 1, 2, 2, 3, 4]);
        assert_eq!(lce(&s, &finer).unwrap(), 0.0);
        assert_eq!(lce(&finer, &s).unwrap(), 0.0);

        // {ab|cd} vs {abc|d}, hand-enumerated per pixel:
        // a: e12 = |{a,b}\{a,b,c}|/2 = 0, e21 = 1/3 -> 0
        // b: same -> 0
        // c: e12 = |{c,d}\{a,b,c}|/2 = 1/2, e21 = |{a,b,c}\{c,d}|/3 = 2/3 -> 1/2
        // d: e12 = |{c,d}\{d}|/2 = 1/2, e21 = 0 -> 0
        let a = seg(&[0, 0, 1, 1]);
        let b = seg(&[0, 0, 0, 1]);
        let expected = (0.0 + 0.0 + 0.5 + 0.0) / 4.0;
        assert_eq!(lce(&a, &b).unwrap(), expected);
        let per_pixel: f64 = (0..4)
            .map(|i| {
                local_error(&a, &b, i)
                    .unwrap()
                    .min(local_error(&b, &a, i).unwrap())
            })
            .sum::<f64>()
            / 4.0;
        assert_eq!(per_pixel, expected);
    }

    fn row_mask(bits: &[u8]) -> BinaryMask {
        BinaryMask::new(bits.len(), 1, bits.iter().map(|&b| b == 1).collect()).unwrap()
    }

    #[test]
    fn jaccard_examples() {
        let a = row_mask(&[1, 1, 0, 0]);
        assert_eq!(jaccard(&a, &a).unwrap(), 1.0);
        assert_eq!(jaccard(&a, &row_mask(&[0, 0, 1, 1])).unwrap(), 0.0);
        let e = BinaryMask::empty(3, 3);
        assert_eq!(jaccard(&e, &e).unwrap(), 1.0);
        // |A| = 4, |B| = 6, |A ∩ B| = 2
        let a = row_mask(&[1, 1, 1, 1, 0, 0, 0, 0]);
        let b = row_mask(&[0, 0, 1, 1, 1, 1, 1, 1]);
        assert_eq!(jaccard(&a, &b).unwrap(), 0.25);
        assert_eq!(jaccard_distance(&a, &b).unwrap(), 0.75);
        let m = AttributeCounts::of(&a, &b).unwrap();
        assert_eq!((m.m00, m.m01, m.m10, m.m11), (0, 4, 2, 2));
        assert_eq!(m.jaccard(), 0.25);
        assert_eq!(m.jaccard_distance(), 0.75);
        assert!(jaccard(&a, &row_mask(&[1])).is_err());
    }

    #[test]
    fn tanimoto_examples() {
        let a = [1.0, 2.0, -3.0];
        assert_eq!(tanimoto(&a, &a).unwrap(), 1.0);
        assert_eq!(tanimoto(&[1.0, 0.0], &[0.0, 4.0]).unwrap(), 0.0);
        let va = [1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0];
        let vb = [0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0];
        assert_eq!(tanimoto(&va, &vb).unwrap(), 0.25);
        assert_eq!(tanimoto_counts(4, 6, 2).unwrap(), 0.25);
        assert!(matches!(
            tanimoto(&[0.0], &[0.0]),
            Err(Error::ZeroDenominator)
        ));
        assert!(matches!(
            tanimoto(&[0.0], &[0.0, 1.0]),
            Err(Error::SizeMismatch(1, 2))
        ));
    }

    #[test]
    fn cosine_examples() {
        let a = [1.0, 2.0, 3.0];
        assert_eq!(cosine_angle(&a, &a).unwrap(), 0.0);
        assert!((cosine_angle(&[1.0, 0.0], &[0.0, 2.0]).unwrap() - FRAC_PI_2).abs() < 1e-15);
        let neg: Vec<f64> = a.iter().map(|v| -v).collect();
        assert_eq!(cosine_angle(&a, &neg).unwrap(), PI);
        let (u, v) = ([0.3, -1.2, 2.5], [1.1, 0.4, -0.7]);
        let naive = (dot(&u, &v) / (dot(&u, &u).sqrt() * dot(&v, &v).sqrt())).acos();
        assert!((cosine_angle(&u, &v).unwrap() - naive).abs() < 1e-12);
        assert!(matches!(
            cosine_angle(&[0.0, 0.0], &a[..2]),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn mae_examples() {
        let same = ValueSeries::new(vec![1.0, 2.0], vec![1.0, 2.0]).unwrap();
        assert_eq!(mae(&same).unwrap(), 0.0);
        let v = ValueSeries::new(vec![1.0, 2.0, 3.0], vec![2.0, 2.0, 5.0]).unwrap();
        assert_eq!(mae(&v).unwrap(), 1.0);
        let scaled = ValueSeries::new(vec![-3.0, -6.0, -9.0], vec![-6.0, -6.0, -15.0]).unwrap();
        assert_eq!(mae(&scaled).unwrap(), 3.0);
        assert!(matches!(
            ValueSeries::new(vec![], vec![]),
            Err(Error::EmptySeries)
        ));
        assert!(matches!(
            ValueSeries::new(vec![1.0], vec![]),
            Err(Error::SizeMismatch(1, 0))
        ));
    }

    #[test]
    fn boundary_mae_examples() {
        let truth = BinaryMask::from_fn(20, 6, |_, c| c <= 10);
        assert_eq!(boundary_mae(&truth, &truth).unwrap(), 0.0);
        let pred = BinaryMask::from_fn(20, 6, |_, c| c <= 12);
        assert_eq!(boundary_mae(&pred, &truth).unwrap(), 2.0);
        let top = BinaryMask::from_fn(20, 6, |r, _| r < 3);
        let bottom = BinaryMask::from_fn(20, 6, |r, _| r >= 3);
        assert!(matches!(
            boundary_mae(&top, &bottom),
            Err(Error::NoOverlappingRows)
        ));
        assert_eq!(pixel_mae(&pred, &truth).unwrap(), 12.0 / 120.0);
    }

    #[test]
    fn hausdorff_examples() {
        let p = |v: &[(f64, f64)]| PointSet::new(v.to_vec()).unwrap();
        let x = p(&[(0.0, 0.0), (1.0, 0.0)]);
        assert_eq!(hausdorff(&x, &x), 0.0);
        assert_eq!(hausdorff(&p(&[(0.0, 0.0)]), &p(&[(3.0, 0.0)])), 3.0);
        let y = p(&[(0.0, 1.0)]);
        assert!((hausdorff(&x, &y) - 2f64.sqrt()).abs() < 1e-12);
        assert!(matches!(PointSet::new(vec![]), Err(Error::EmptySet)));
    }

    #[test]
    fn mask_boundary_of_square() {
        let m = BinaryMask::from_fn(6, 6, |r, c| (1..5).contains(&r) && (1..5).contains(&c));
        let b = PointSet::mask_boundary(&m).unwrap();
        assert_eq!(b.points().len(), 12);
        assert!(matches!(
            PointSet::mask_boundary(&BinaryMask::empty(3, 3)),
            Err(Error::EmptySet)
        ));
    }

    fn brute_hausdorff(x: &[(f64, f64)], y: &[(f64, f64)]) -> f64 {
        let directed = |a: &[(f64, f64)], b: &[(f64, f64)]| {
            a.iter()
                .map(|&p| {
                    b.iter()
                        .map(|&q| sq_dist(p, q).sqrt())
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0, f64::max)
        };
        directed(x, y).max(directed(y, x))
    }

    fn arb_points() -> impl Strategy<Value = Vec<(f64, f64)>> {
        proptest::collection::vec((-50.0f64..50.0, -50.0f64..50.0), 1..40)
    }

    proptest! {
        #[test]
        fn hausdorff_is_a_metric(x in arb_points(), y in arb_points(), z in arb_points()) {
            let (px, py, pz) = (PointSet::new(x.clone()).unwrap(), PointSet::new(y.clone()).unwrap(), PointSet::new(z).unwrap());
            let dxy = hausdorff(&px, &py);
            prop_assert_eq!(dxy, hausdorff(&py, &px));
            prop_assert!((dxy - brute_hausdorff(&x, &y)).abs() < 1e-9);
            prop_assert!(dxy <= hausdorff(&px, &pz) + hausdorff(&pz, &py) + 1e-9);
            prop_assert_eq!(hausdorff(&px, &px), 0.0);
        }

        #[test]
        fn tanimoto_matches_jaccard(bits in proptest::collection::vec((any::<bool>(), any::<bool>()), 1..80)) {
            let a = BinaryMask::new(bits.len(), 1, bits.iter().map(|p| p.0).collect()).unwrap();
            let b = BinaryMask::new(bits.len(), 1, bits.iter().map(|p| p.1).collect()).unwrap();
            let j = jaccard(&a, &b).unwrap();
            prop_assert!((0.0..=1.0).contains(&j));
            prop_assert_eq!(AttributeCounts::of(&a, &b).unwrap().jaccard(), j);
            let va: Vec<f64> = a.bits().iter().map(|&x| x as u8 as f64).collect();
            let vb: Vec<f64> = b.bits().iter().map(|&x| x as u8 as f64).collect();
            match tanimoto(&va, &vb) {
                Ok(t) => prop_assert!((t - j).abs() < 1e-12),
                Err(_) => prop_assert!(a.is_all_false() && b.is_all_false()),
            }
            prop_assert!((tanimoto_masks(&a, &b).unwrap() - j).abs() < 1e-12);
        }

        #[test]
        fn mae_is_homogeneous(f in proptest::collection::vec(-100.0f64..100.0, 1..20), k in -5.0f64..5.0) {
            let y: Vec<f64> = f.iter().map(|v| v * 0.5 + 1.0).collect();
            let base = mae(&ValueSeries::new(f.clone(), y.clone()).unwrap()).unwrap();
            let scaled = mae(&ValueSeries::new(
                f.iter().map(|v| v * k).collect(),
                y.iter().map(|v| v * k).collect(),
            ).unwrap()).unwrap();
            prop_assert!((scaled - k.abs() * base).abs() <= 1e-9 * (1.0 + base * k.abs()));
        }
    }
}
