//! Batch evaluation: every method on every image, one CSV row per pair.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use log::warn;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::harness::pipeline::suppress_with;
use crate::hybrid::{MethodId, MethodParams};
use crate::imageio::{load_mask, load_pgm, save_mask, BinaryMask};
use crate::metrics::{
    boundary_mae, lce, mask_hausdorff, pri, tanimoto_masks, GroundTruthSet, Segmentation,
};

pub const CSV_HEADER: &str = "image,method,pri,lce,tc,mae,hd";
pub const NOT_AVAILABLE: &str = "NA";

/// Scores of one method on one image; `None` prints as `NA`.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricReport {
    pub image_id: String,
    pub method: MethodId,
    pub pri: Option<f64>,
    pub lce: Option<f64>,
    pub tc: Option<f64>,
    pub mae: Option<f64>,
    pub hd: Option<f64>,
}

impl MetricReport {
    fn unavailable(image_id: &str, method: MethodId) -> Self {
        MetricReport {
            image_id: image_id.to_string(),
            method,
            pri: None,
            lce: None,
            tc: None,
            mae: None,
            hd: None,
        }
    }

    pub fn csv_row(&self) -> String {
        let mut row = format!("{},{}", self.image_id, self.method);
        for v in [self.pri, self.lce, self.tc, self.mae, self.hd] {
            match v {
                Some(x) => write!(row, ",{x:.6}").unwrap(),
                None => write!(row, ",{NOT_AVAILABLE}").unwrap(),
            }
        }
        row
    }
}

/// Scores a predicted pectoral mask against a ground-truth mask.
pub fn score(
    image_id: &str,
    method: MethodId,
    pred: &BinaryMask,
    truth: &BinaryMask,
) -> Result<MetricReport> {
    pred.same_shape(truth)?;
    let s = Segmentation::from_mask(pred);
    let gt = Segmentation::from_mask(truth);
    Ok(MetricReport {
        image_id: image_id.to_string(),
        method,
        pri: Some(pri(&s, &GroundTruthSet::single(gt.clone()))?),
        lce: Some(lce(&s, &gt)?),
        tc: Some(tanimoto_masks(pred, truth)?),
        mae: boundary_mae(pred, truth).ok(),
        hd: mask_hausdorff(pred, truth).ok(),
    })
}

pub fn render_csv(reports: &[MetricReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// Where batch outputs go.
#[derive(Clone, Debug)]
pub struct BatchConfig {
    pub input_dir: PathBuf,
    pub gt_dir: Option<PathBuf>,
    pub methods: Vec<MethodId>,
    pub out_csv: PathBuf,
    /// Predicted masks land here; defaults to `masks/` next to the CSV.
    pub mask_dir: Option<PathBuf>,
    pub params: MethodParams,
}

/// `*.pgm` files directly inside `dir`, excluding ground-truth companions,
/// in name order.
pub fn list_inputs(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e.eq_ignore_ascii_case("pgm")))
        .filter(|p| !stem(p).ends_with("_gt"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::NoInputs(dir.to_path_buf()));
    }
    Ok(files)
}

fn stem(p: &Path) -> String {
    p.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// File name for a predicted mask; `+` is not filename-friendly everywhere.
pub fn mask_file_name(image_id: &str, method: MethodId) -> String {
    format!("{image_id}_{}.pgm", method.name().replace('+', "-"))
}

fn unwritable(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::UnwritableOutput {
        path: path.to_path_buf(),
        source,
    }
}

fn evaluate_image(path: &Path, cfg: &BatchConfig, mask_dir: &Path) -> Option<Vec<MetricReport>> {
    let id = stem(path);
    let img = match load_pgm(path) {
        Ok(img) => img,
        Err(e) => {
            warn!("skipping {}: {e}", path.display());
            return None;
        }
    };
    let truth = cfg.gt_dir.as_ref().and_then(|dir| {
        let gt_path = dir.join(format!("{id}_gt.pgm"));
        match load_mask(&gt_path) {
            Ok(m) if m.width() == img.width() && m.height() == img.height() => Some(m),
            Ok(_) => {
                warn!(
                    "{}: ground truth size differs from image",
                    gt_path.display()
                );
                None
            }
            Err(e) => {
                warn!("{}: no usable ground truth: {e}", gt_path.display());
                None
            }
        }
    });

    let rows = cfg
        .methods
        .iter()
        .map(|&method| match suppress_with(&img, method, &cfg.params) {
            Ok(out) => {
                let mask_path = mask_dir.join(mask_file_name(&id, method));
                if let Err(e) = save_mask(&mask_path, &out.pectoral) {
                    warn!("{e}");
                }
                match &truth {
                    Some(t) => score(&id, method, &out.pectoral, t).unwrap_or_else(|e| {
                        warn!("{id} {method}: scoring failed: {e}");
                        MetricReport::unavailable(&id, method)
                    }),
                    None => MetricReport::unavailable(&id, method),
                }
            }
            Err(e) => {
                warn!("{id} {method}: {e}");
                MetricReport::unavailable(&id, method)
            }
        })
        .collect();
    Some(rows)
}

/// Runs every configured method over every input image and writes the CSV.
///
/// Unreadable images are logged and skipped. Rows are ordered by image name,
/// then by method in report order, so repeated runs write identical bytes.
pub fn evaluate_batch(cfg: &BatchConfig) -> Result<Vec<MetricReport>> {
    let inputs = list_inputs(&cfg.input_dir)?;
    let mask_dir = cfg.mask_dir.clone().unwrap_or_else(|| {
        cfg.out_csv
            .parent()
            .map(|p| p.join("masks"))
            .unwrap_or_else(|| PathBuf::from("masks"))
    });
    fs::create_dir_all(&mask_dir).map_err(unwritable(&mask_dir))?;

    let mut methods = cfg.methods.clone();
    methods.sort();
    methods.dedup();
    let cfg = BatchConfig {
        methods,
        ..cfg.clone()
    };

    let per_image: Vec<Option<Vec<MetricReport>>> = inputs
        .par_iter()
        .map(|p| evaluate_image(p, &cfg, &mask_dir))
        .collect();
    let mut reports: Vec<MetricReport> = per_image.into_iter().flatten().flatten().collect();
    reports.sort_by(|a, b| a.image_id.cmp(&b.image_id).then(a.method.cmp(&b.method)));

    if let Some(parent) = cfg.out_csv.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(unwritable(parent))?;
    }
    fs::write(&cfg.out_csv, render_csv(&reports)).map_err(unwritable(&cfg.out_csv))?;
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_row_format() {
        let r = MetricReport {
            image_id: "mdb006".into(),
            method: MethodId::CclFuzzy,
            pri: Some(0.72017),
            lce: Some(0.0),
            tc: Some(1.0),
            mae: None,
            hd: Some(2f64.sqrt()),
        };
        assert_eq!(
            r.csv_row(),
            "mdb006,ccl+fuzzy,0.720170,0.000000,1.000000,NA,1.414214"
        );
        assert_eq!(
            render_csv(&[MetricReport::unavailable("x", MethodId::Ccl)]),
            "image,method,pri,lce,tc,mae,hd\nx,ccl,NA,NA,NA,NA,NA\n"
        );
    }

    #[test]
    fn perfect_prediction_scores() {
        let m = BinaryMask::from_fn(20, 20, |r, c| r + c < 10);
        let r = score("a", MethodId::Line, &m, &m).unwrap();
        assert_eq!(
            (r.pri, r.lce, r.tc, r.mae, r.hd),
            (Some(1.0), Some(0.0), Some(1.0), Some(0.0), Some(0.0))
        );
    }

    #[test]
    fn empty_prediction_has_no_distance() {
        let truth = BinaryMask::from_fn(20, 20, |r, c| r + c < 10);
        let r = score("a", MethodId::Line, &BinaryMask::empty(20, 20), &truth).unwrap();
        assert_eq!(r.tc, Some(0.0));
        assert_eq!((r.mae, r.hd), (None, None));
    }

    #[test]
    fn mask_names() {
        assert_eq!(
            mask_file_name("mdb006", MethodId::FuzzyLine),
            "mdb006_fuzzy-line.pgm"
        );
    }
}
