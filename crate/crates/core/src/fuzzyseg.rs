//! Fuzzy pectoral segmentation: S-function fuzzification, contrast
//! intensification, threshold defuzzification.

use crate::error::{Error, Result};
use crate::imageio::{BinaryMask, GrayImage};
use crate::labeling::corner_component;
use crate::preprocess::RoiWindow;

/// Per-pixel membership degrees in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MembershipMap {
    width: usize,
    height: usize,
    mu: Vec<f64>,
}

impl MembershipMap {
    pub fn new(width: usize, height: usize, mu: Vec<f64>) -> Result<Self> {
        if mu.len() != width * height {
            return Err(Error::SizeMismatch(mu.len(), width * height));
        }
        if let Some(v) = mu.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidParams(format!(
                "membership {v} outside [0, 1]"
            )));
        }
        Ok(MembershipMap { width, height, mu })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.mu
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FuzzyParams {
    /// Intensity with membership 0.5.
    pub crossover: f64,
    /// Half-width of the S-curve transition.
    pub bandwidth: f64,
    pub int_exponent: f64,
    pub defuzz_threshold: f64,
}

impl FuzzyParams {
    pub fn new(
        crossover: f64,
        bandwidth: f64,
        int_exponent: f64,
        defuzz_threshold: f64,
    ) -> Result<Self> {
        let p = FuzzyParams {
            crossover,
            bandwidth,
            int_exponent,
            defuzz_threshold,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.bandwidth.is_finite() && self.bandwidth > 0.0) {
            return Err(Error::InvalidParams(format!(
                "bandwidth {} must be > 0",
                self.bandwidth
            )));
        }
        if !(self.int_exponent.is_finite() && self.int_exponent >= 1.0) {
            return Err(Error::InvalidParams(format!(
                "intensification exponent {} must be >= 1",
                self.int_exponent
            )));
        }
        if !(self.defuzz_threshold > 0.0 && self.defuzz_threshold < 1.0) {
            return Err(Error::InvalidParams(format!(
                "defuzzification threshold {} must lie in (0, 1)",
                self.defuzz_threshold
            )));
        }
        if !self.crossover.is_finite() {
            return Err(Error::InvalidParams("crossover must be finite".into()));
        }
        Ok(())
    }

    /// Lower foot, crossover and upper shoulder of the S-curve.
    pub fn knots(&self) -> (f64, f64, f64) {
        (
            self.crossover - self.bandwidth,
            self.crossover,
            self.crossover + self.bandwidth,
        )
    }
}

/// Optional per-field replacements for the data-driven defaults.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FuzzyOverrides {
    pub crossover: Option<f64>,
    pub bandwidth: Option<f64>,
    pub int_exponent: Option<f64>,
    pub defuzz_threshold: Option<f64>,
}

impl FuzzyOverrides {
    pub fn apply(&self, base: FuzzyParams) -> Result<FuzzyParams> {
        FuzzyParams::new(
            self.crossover.unwrap_or(base.crossover),
            self.bandwidth.unwrap_or(base.bandwidth),
            self.int_exponent.unwrap_or(base.int_exponent),
            self.defuzz_threshold.unwrap_or(base.defuzz_threshold),
        )
    }
}

/// Nearest-rank percentile of an ascending slice.
fn percentile(sorted: &[u16], pct: f64) -> f64 {
    let rank = (pct / 100.0 * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1] as f64
}

/// Crossover at the 75th percentile, bandwidth from the 55th..95th spread.
pub fn default_params_from(values: &[u16]) -> Result<FuzzyParams> {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    if sorted.first() == sorted.last() {
        return Err(Error::DegenerateHistogram);
    }
    let bandwidth = (percentile(&sorted, 95.0) - percentile(&sorted, 55.0)).max(1.0);
    FuzzyParams::new(percentile(&sorted, 75.0), bandwidth, 2.0, 0.5)
}

pub fn default_params(roi: &GrayImage) -> Result<FuzzyParams> {
    default_params_from(roi.data())
}

/// Zadeh's S-function through `(a, 0)`, `(b, 0.5)`, `(c, 1)`.
pub fn s_membership(v: f64, p: &FuzzyParams) -> f64 {
    let (a, b, c) = p.knots();
    let span = c - a;
    if v <= a {
        0.0
    } else if v <= b {
        2.0 * ((v - a) / span).powi(2)
    } else if v < c {
        1.0 - 2.0 * ((v - c) / span).powi(2)
    } else {
        1.0
    }
}

pub fn fuzzify(img: &GrayImage, p: &FuzzyParams) -> MembershipMap {
    // memberships only depend on intensity, so tabulate once
    let table: Vec<f64> = (0..=img.maxval())
        .map(|v| s_membership(v as f64, p))
        .collect();
    MembershipMap {
        width: img.width(),
        height: img.height(),
        mu: img.data().iter().map(|&v| table[v as usize]).collect(),
    }
}

/// Generalized INT operator; `exponent == 2` is the classic one.
pub fn intensify_value(mu: f64, exponent: f64) -> f64 {
    // 2^(e-1)·mu^e written as (2mu)^e / 2 keeps 0.5 an exact fixed point
    let out = if mu <= 0.5 {
        0.5 * (2.0 * mu).powf(exponent)
    } else {
        1.0 - 0.5 * (2.0 * (1.0 - mu)).powf(exponent)
    };
    out.clamp(0.0, 1.0)
}

pub fn intensify(m: &MembershipMap, exponent: f64) -> MembershipMap {
    MembershipMap {
        mu: m.mu.iter().map(|&v| intensify_value(v, exponent)).collect(),
        ..*m
    }
}

/// `mu >= thr` becomes foreground.
pub fn defuzzify(m: &MembershipMap, thr: f64) -> BinaryMask {
    let bits = m.mu.iter().map(|&v| v >= thr).collect();
    BinaryMask::new(m.width, m.height, bits).expect("membership map shape")
}

/// Runs fuzzify, intensify and defuzzify restricted to `window ∩ breast`.
pub(crate) fn fuzzy_window_mask(
    img: &GrayImage,
    breast: &BinaryMask,
    window: &RoiWindow,
    overrides: &FuzzyOverrides,
) -> Result<(BinaryMask, FuzzyParams)> {
    let region = window.mask(img.width(), img.height()).and(breast)?;
    let values: Vec<u16> = region.points().map(|(r, c)| img.get(r, c)).collect();
    let params = match default_params_from(&values) {
        Ok(p) => overrides.apply(p)?,
        Err(Error::DegenerateHistogram) if overrides.crossover.is_some() => {
            let v = values.first().copied().unwrap_or(0) as f64;
            overrides.apply(FuzzyParams::new(v, 1.0, 2.0, 0.5)?)?
        }
        Err(e) => return Err(e),
    };
    let mu = intensify(&fuzzify(img, &params), params.int_exponent);
    Ok((
        defuzzify(&mu, params.defuzz_threshold).and(&region)?,
        params,
    ))
}

pub fn fuzzy_pectoral(img: &GrayImage, breast: &BinaryMask) -> Result<BinaryMask> {
    fuzzy_pectoral_with(img, breast, &FuzzyOverrides::default())
}

pub fn fuzzy_pectoral_with(
    img: &GrayImage,
    breast: &BinaryMask,
    overrides: &FuzzyOverrides,
) -> Result<BinaryMask> {
    breast.same_shape(&BinaryMask::empty(img.width(), img.height()))?;
    let roi = RoiWindow::for_size(img.width(), img.height());
    let (mask, _) = fuzzy_window_mask(img, breast, &roi, overrides)?;
    corner_component(&mask, breast, &roi)
}
