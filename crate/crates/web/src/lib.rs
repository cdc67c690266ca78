//! Browser bindings for the phantom explorer page in `www/`.
//!
//! Everything crosses the boundary as plain numbers, strings and byte
//! buffers so the page needs no bundler.

use pectoral::fuzzyseg::{intensify_value, s_membership, FuzzyOverrides, FuzzyParams};
use pectoral::harness::{generate_phantom, suppress_with, Phantom, PhantomSpec};
use pectoral::labeling::CclParams;
use pectoral::metrics::{
    boundary_mae, lce, mask_hausdorff, pri, tanimoto_masks, GroundTruthSet, Segmentation,
};
use pectoral::{BinaryMask, GrayImage, MethodId, MethodParams, Orientation};
use wasm_bindgen::prelude::*;

/// Phantom geometry chosen on the page.
#[wasm_bindgen]
#[derive(Clone, Copy, Debug)]
pub struct SceneParams {
    pub size: usize,
    pub right: bool,
    pub depth: f64,
    pub tri_width: f64,
    pub noise: f64,
    pub seed: u32,
}

#[wasm_bindgen]
impl SceneParams {
    #[wasm_bindgen(constructor)]
    pub fn new(
        size: usize,
        right: bool,
        depth: f64,
        tri_width: f64,
        noise: f64,
        seed: u32,
    ) -> SceneParams {
        SceneParams {
            size,
            right,
            depth,
            tri_width,
            noise,
            seed,
        }
    }
}

impl SceneParams {
    fn spec(&self) -> PhantomSpec {
        PhantomSpec {
            width: self.size,
            height: self.size,
            orientation: if self.right {
                Orientation::Right
            } else {
                Orientation::Left
            },
            triangle_depth: self.depth,
            triangle_width: self.tri_width,
            noise_sigma: self.noise,
            seed: self.seed as u64,
            ..Default::default()
        }
    }

    fn phantom(&self) -> Result<Phantom, String> {
        generate_phantom(&self.spec()).map_err(|e| e.to_string())
    }
}

fn gray_rgba(img: &GrayImage) -> Vec<u8> {
    let scale = 255.0 / img.maxval() as f64;
    img.data()
        .iter()
        .flat_map(|&v| {
            let g = (v as f64 * scale).round() as u8;
            [g, g, g, 255]
        })
        .collect()
}

/// Grayscale phantom as RGBA, ready for `ImageData`.
#[wasm_bindgen]
pub fn phantom_rgba(scene: &SceneParams) -> Vec<u8> {
    scene
        .phantom()
        .map(|p| gray_rgba(&p.image))
        .unwrap_or_default()
}

/// One method run on a phantom, with its scores against ground truth.
#[wasm_bindgen]
#[derive(Clone, Debug, Default)]
pub struct SegmentResult {
    rgba: Vec<u8>,
    error: Option<String>,
    pub tanimoto: f64,
    pub pri: f64,
    pub lce: f64,
    pub mae: f64,
    pub hausdorff: f64,
    pub right: bool,
}

#[wasm_bindgen]
impl SegmentResult {
    /// Suppressed image with the predicted muscle tinted red and the true
    /// outline in green.
    #[wasm_bindgen(getter)]
    pub fn rgba(&self) -> Vec<u8> {
        self.rgba.clone()
    }

    /// Failure message, empty on success.
    #[wasm_bindgen(getter)]
    pub fn error(&self) -> String {
        self.error.clone().unwrap_or_default()
    }
}

fn overlay(img: &GrayImage, pred: &BinaryMask, truth: &BinaryMask) -> Vec<u8> {
    let mut rgba = gray_rgba(img);
    let (w, h) = (img.width(), img.height());
    for r in 0..h {
        for c in 0..w {
            let px = &mut rgba[(r * w + c) * 4..][..4];
            if pred.get(r, c) {
                px[0] = px[0].saturating_add(150);
                px[1] /= 2;
                px[2] /= 2;
            }
            let edge = truth.get(r, c)
                && [(0isize, 1isize), (1, 0), (0, -1), (-1, 0)]
                    .iter()
                    .any(|(dr, dc)| {
                        let (rr, cc) = (r as isize + dr, c as isize + dc);
                        rr < 0
                            || cc < 0
                            || rr >= h as isize
                            || cc >= w as isize
                            || !truth.get(rr as usize, cc as usize)
                    });
            if edge {
                px.copy_from_slice(&[40, 230, 60, 255]);
            }
        }
    }
    rgba
}

/// Runs `method` on the phantom. A negative fuzzy value keeps the
/// data-driven default for that parameter.
#[wasm_bindgen]
pub fn segment(
    scene: &SceneParams,
    method: &str,
    delta_frac: f64,
    crossover: f64,
    bandwidth: f64,
) -> SegmentResult {
    let fail = |msg: String| SegmentResult {
        error: Some(msg),
        ..Default::default()
    };
    let phantom = match scene.phantom() {
        Ok(p) => p,
        Err(e) => return fail(e),
    };
    let method: MethodId = match method.parse() {
        Ok(m) => m,
        Err(e) => return fail(format!("{e}")),
    };
    let params = MethodParams {
        ccl: CclParams { delta_frac },
        fuzzy: FuzzyOverrides {
            crossover: (crossover >= 0.0).then_some(crossover),
            bandwidth: (bandwidth > 0.0).then_some(bandwidth),
            ..Default::default()
        },
    };
    let out = match suppress_with(&phantom.image, method, &params) {
        Ok(o) => o,
        Err(e) => return fail(e.to_string()),
    };
    let (pred, truth) = (&out.pectoral, &phantom.pectoral);
    let s = Segmentation::from_mask(pred);
    let gt = GroundTruthSet::single(Segmentation::from_mask(truth));
    SegmentResult {
        rgba: overlay(&out.image, pred, truth),
        error: None,
        tanimoto: tanimoto_masks(pred, truth).unwrap_or(f64::NAN),
        pri: pri(&s, &gt).unwrap_or(f64::NAN),
        lce: lce(&s, &gt.truths()[0]).unwrap_or(f64::NAN),
        mae: boundary_mae(pred, truth).unwrap_or(f64::NAN),
        hausdorff: mask_hausdorff(pred, truth).unwrap_or(f64::NAN),
        right: out.orientation == Orientation::Right,
    }
}

/// S-curve memberships for intensities `0..=255`, followed by the same
/// curve after intensification: 512 values.
#[wasm_bindgen]
pub fn membership_curves(crossover: f64, bandwidth: f64, exponent: f64) -> Vec<f64> {
    let Ok(p) = FuzzyParams::new(crossover, bandwidth.max(1e-6), exponent.max(1.0), 0.5) else {
        return Vec::new();
    };
    let base: Vec<f64> = (0..=255).map(|v| s_membership(v as f64, &p)).collect();
    let intensified: Vec<f64> = base
        .iter()
        .map(|&m| intensify_value(m, p.int_exponent))
        .collect();
    [base, intensified].concat()
}

/// Method identifiers in report order, comma-separated.
#[wasm_bindgen]
pub fn method_names() -> String {
    MethodId::ALL.map(MethodId::name).join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scene() -> SceneParams {
        SceneParams::new(128, false, 0.44, 0.4, 0.0, 1)
    }

    #[test]
    fn phantom_buffer_is_rgba() {
        assert_eq!(phantom_rgba(&scene()).len(), 128 * 128 * 4);
    }

    #[test]
    fn every_method_scores_well_on_clean_phantom() {
        for name in method_names().split(',') {
            let r = segment(&scene(), name, 0.1, -1.0, -1.0);
            assert_eq!(r.error(), "", "{name}");
            assert!(r.tanimoto > 0.8, "{name}: {}", r.tanimoto);
            assert_eq!(r.rgba().len(), 128 * 128 * 4);
        }
    }

    #[test]
    fn right_side_is_reported() {
        let s = SceneParams {
            right: true,
            ..scene()
        };
        assert!(segment(&s, "ccl", 0.1, -1.0, -1.0).right);
    }

    #[test]
    fn bad_method_is_an_error() {
        assert!(!segment(&scene(), "hough", 0.1, -1.0, -1.0)
            .error()
            .is_empty());
    }

    #[test]
    fn curves_cover_both_stages() {
        let c = membership_curves(128.0, 40.0, 2.0);
        assert_eq!(c.len(), 512);
        assert_eq!(c[128], 0.5);
        assert_eq!(c[256 + 128], 0.5);
        assert!(c[256 + 100] < c[100]);
    }
}
