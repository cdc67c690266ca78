//! Two-pass connected-component labeling and the CCL pectoral method.
//!
//! Pass one walks the raster, gives each foreground pixel the smallest label
//! among its already-visited neighbors and records label equivalences in a
//! union-find forest. Pass two replaces every provisional label with the
//! lowest label of its equivalence class, then compacts labels to `1..=n`.

use crate::error::{Error, Result};
use crate::imageio::{BinaryMask, GrayImage};
use crate::preprocess::{otsu_threshold_of, RoiWindow};

/// Which neighbors count as adjacent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Connectivity {
    /// N, S, E, W.
    Four,
    /// The four plus the diagonals.
    Eight,
}

/// Dense component labels, 0 for background.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelMap {
    width: usize,
    height: usize,
    labels: Vec<u32>,
    n_components: u32,
}

impl LabelMap {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn n_components(&self) -> u32 {
        self.n_components
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.labels[row * self.width + col]
    }

    /// Mask of the pixels carrying `label`.
    pub fn component_mask(&self, label: u32) -> BinaryMask {
        let bits = self.labels.iter().map(|&l| l == label && l != 0).collect();
        BinaryMask::new(self.width, self.height, bits).expect("label map shape")
    }
}

/// Disjoint-set forest where the representative of a class is always its
/// smallest member.
struct MinUnionFind {
    parent: Vec<u32>,
}

impl MinUnionFind {
    fn new() -> Self {
        // slot 0 is the background label
        MinUnionFind { parent: vec![0] }
    }

    fn make_set(&mut self) -> u32 {
        let id = self.parent.len() as u32;
        self.parent.push(id);
        id
    }

    fn find(&mut self, x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        // path compression
        let mut cur = x;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra < rb {
            self.parent[rb as usize] = ra;
        } else if rb < ra {
            self.parent[ra as usize] = rb;
        }
    }
}

pub fn label_components(mask: &BinaryMask, conn: Connectivity) -> LabelMap {
    let (w, h) = (mask.width(), mask.height());
    let bits = mask.bits();
    let mut labels = vec![0u32; w * h];
    let mut forest = MinUnionFind::new();

    for r in 0..h {
        for c in 0..w {
            let i = r * w + c;
            if !bits[i] {
                continue;
            }
            let mut neighbors = [0u32; 4];
            let mut n = 0;
            if c > 0 && labels[i - 1] != 0 {
                neighbors[n] = labels[i - 1];
                n += 1;
            }
            if r > 0 {
                let up = i - w;
                if labels[up] != 0 {
                    neighbors[n] = labels[up];
                    n += 1;
                }
                if conn == Connectivity::Eight {
                    if c > 0 && labels[up - 1] != 0 {
                        neighbors[n] = labels[up - 1];
                        n += 1;
                    }
                    if c + 1 < w && labels[up + 1] != 0 {
                        neighbors[n] = labels[up + 1];
                        n += 1;
                    }
                }
            }
            let neighbors = &neighbors[..n];
            labels[i] = match neighbors.iter().min() {
                None => forest.make_set(),
                Some(&smallest) => {
                    for &other in neighbors {
                        forest.union(smallest, other);
                    }
                    smallest
                }
            };
        }
    }

    // Roots are class minima and provisional labels grow in raster order,
    // so compacting in root order keeps first-appearance order.
    let mut dense = vec![0u32; forest.parent.len()];
    let mut next = 0u32;
    for l in 1..forest.parent.len() as u32 {
        let root = forest.find(l);
        if root == l {
            next += 1;
            dense[l as usize] = next;
        } else {
            dense[l as usize] = dense[root as usize];
        }
    }
    for l in labels.iter_mut() {
        *l = dense[*l as usize];
    }

    LabelMap {
        width: w,
        height: h,
        labels,
        n_components: next,
    }
}

/// `(label, pixel count)` for labels `1..=n`.
pub fn component_sizes(lm: &LabelMap) -> Vec<(u32, usize)> {
    let mut counts = vec![0usize; lm.n_components as usize + 1];
    for &l in &lm.labels {
        counts[l as usize] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(l, n)| (l as u32, n))
        .collect()
}

/// Largest component, ties going to the lower label. `None` when empty.
pub fn largest_component(mask: &BinaryMask, conn: Connectivity) -> Option<BinaryMask> {
    let lm = label_components(mask, conn);
    let best = component_sizes(&lm)
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))?;
    Some(lm.component_mask(best.0))
}

/// Fills every background region that cannot reach the image border.
pub fn fill_holes(mask: &BinaryMask) -> BinaryMask {
    let (w, h) = (mask.width(), mask.height());
    let bg = label_components(&mask.not(), Connectivity::Four);
    let mut open = vec![false; bg.n_components as usize + 1];
    for c in 0..w {
        open[bg.get(0, c) as usize] = true;
        open[bg.get(h - 1, c) as usize] = true;
    }
    for r in 0..h {
        open[bg.get(r, 0) as usize] = true;
        open[bg.get(r, w - 1) as usize] = true;
    }
    let bits = mask
        .bits()
        .iter()
        .zip(bg.labels())
        .map(|(&b, &l)| b || !open[l as usize])
        .collect();
    BinaryMask::new(w, h, bits).expect("same shape")
}

/// Breast pixel closest to the image origin; the pectoral apex in canonical pose.
pub fn breast_corner(breast: &BinaryMask) -> Option<(usize, usize)> {
    breast.points().min_by_key(|&(r, c)| r * r + c * c)
}

/// Keeps the component of `candidate` nearest the top-left breast corner.
///
/// The corner must lie in `roi`, and the chosen component must come within a
/// tenth of the window's shorter side (at least 2 px) of it.
pub fn corner_component(
    candidate: &BinaryMask,
    breast: &BinaryMask,
    roi: &RoiWindow,
) -> Result<BinaryMask> {
    let (cr, cc) = breast_corner(breast).ok_or(Error::NoCornerComponent)?;
    if !roi.contains(cr, cc) {
        return Err(Error::NoCornerComponent);
    }
    let lm = label_components(candidate, Connectivity::Eight);
    if lm.n_components == 0 {
        return Err(Error::NoCornerComponent);
    }
    let mut nearest = vec![usize::MAX; lm.n_components as usize + 1];
    for (r, c) in candidate.points() {
        let d = r.abs_diff(cr).pow(2) + c.abs_diff(cc).pow(2);
        let l = lm.get(r, c) as usize;
        nearest[l] = nearest[l].min(d);
    }
    let (label, d2) = nearest
        .iter()
        .enumerate()
        .skip(1)
        .min_by_key(|&(l, &d)| (d, l))
        .map(|(l, &d)| (l as u32, d))
        .expect("at least one component");
    let reach = (roi.rows().min(roi.cols()) as f64 * 0.1).max(2.0);
    if (d2 as f64).sqrt() > reach {
        return Err(Error::NoCornerComponent);
    }
    Ok(lm.component_mask(label))
}

/// Tuning for [`ccl_pectoral_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CclParams {
    /// Row-march cut: a drop of more than `delta_frac * maxval` below the
    /// running row mean ends the muscle on that row.
    pub delta_frac: f64,
}

impl Default for CclParams {
    fn default() -> Self {
        CclParams { delta_frac: 0.1 }
    }
}

/// Bright tissue inside `window ∩ breast` thresholded at its own Otsu level.
/// A uniform window counts as entirely bright.
pub(crate) fn bright_tissue(
    img: &GrayImage,
    breast: &BinaryMask,
    window: &RoiWindow,
) -> BinaryMask {
    let inside = window.mask(img.width(), img.height());
    let region = inside.and(breast).expect("image-shaped masks");
    let values = region.points().map(|(r, c)| img.get(r, c));
    let thr = otsu_threshold_of(values, img.maxval()).ok();
    BinaryMask::from_fn(img.width(), img.height(), |r, c| {
        region.get(r, c) && thr.is_none_or(|t| img.get(r, c) > t)
    })
}

/// Thresholded corner component before the row-march cut. This is also the
/// seed for the straight-line method.
pub fn ccl_candidate(img: &GrayImage, breast: &BinaryMask) -> Result<BinaryMask> {
    breast.same_shape(&BinaryMask::empty(img.width(), img.height()))?;
    let roi = RoiWindow::for_size(img.width(), img.height());
    let bright = bright_tissue(img, breast, &roi);
    corner_component(&bright, breast, &roi)
}

pub fn ccl_pectoral(img: &GrayImage, breast: &BinaryMask) -> Result<BinaryMask> {
    ccl_pectoral_with(img, breast, &CclParams::default())
}

pub fn ccl_pectoral_with(
    img: &GrayImage,
    breast: &BinaryMask,
    params: &CclParams,
) -> Result<BinaryMask> {
    let component = ccl_candidate(img, breast)?;
    let delta = params.delta_frac * img.maxval() as f64;
    let mut cut = BinaryMask::empty(img.width(), img.height());
    for r in 0..img.height() {
        let mut sum = 0.0;
        let mut n = 0usize;
        for c in 0..img.width() {
            if !component.get(r, c) {
                continue;
            }
            let v = img.get(r, c) as f64;
            if n > 0 && sum / n as f64 - v > delta {
                break;
            }
            sum += v;
            n += 1;
            cut.set(r, c, true);
        }
    }
    let cut = cut.and(breast)?;
    let roi = RoiWindow::for_size(img.width(), img.height());
    corner_component(&cut, breast, &roi)
}
