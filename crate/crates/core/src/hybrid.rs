//! The six pectoral methods and the pairwise hybrids.
//!
//! A hybrid lets its first method localize the muscle and its second method
//! re-delineate it inside that territory. A failing first stage fails the
//! hybrid; there is no fallback to the second method alone.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fuzzyseg::{fuzzy_pectoral_with, fuzzy_window_mask, FuzzyOverrides};
use crate::imageio::{BinaryMask, GrayImage};
use crate::labeling::{ccl_candidate, ccl_pectoral_with, corner_component, CclParams};
use crate::lineseg::line_from_candidate;
use crate::preprocess::RoiWindow;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MethodId {
    Ccl,
    Fuzzy,
    Line,
    CclFuzzy,
    CclLine,
    FuzzyLine,
}

impl MethodId {
    /// Report order.
    pub const ALL: [MethodId; 6] = [
        MethodId::Ccl,
        MethodId::Fuzzy,
        MethodId::Line,
        MethodId::CclFuzzy,
        MethodId::CclLine,
        MethodId::FuzzyLine,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MethodId::Ccl => "ccl",
            MethodId::Fuzzy => "fuzzy",
            MethodId::Line => "line",
            MethodId::CclFuzzy => "ccl+fuzzy",
            MethodId::CclLine => "ccl+line",
            MethodId::FuzzyLine => "fuzzy+line",
        }
    }

    /// Parses `all` or a comma-separated list, deduplicated into report order.
    pub fn parse_list(s: &str) -> Result<Vec<MethodId>> {
        if s.trim() == "all" {
            return Ok(Self::ALL.to_vec());
        }
        let mut out = s
            .split(',')
            .map(|t| t.trim().parse())
            .collect::<Result<Vec<MethodId>>>()?;
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for MethodId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MethodId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MethodId::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownMethod(s.to_string()))
    }
}

/// Tuning knobs shared by every method.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MethodParams {
    pub ccl: CclParams,
    pub fuzzy: FuzzyOverrides,
}

/// Fuzzy re-delineation inside the CCL candidate's bounding box.
pub fn ccl_with_fuzzy(img: &GrayImage, breast: &BinaryMask) -> Result<BinaryMask> {
    ccl_with_fuzzy_with(img, breast, &MethodParams::default())
}

pub fn ccl_with_fuzzy_with(
    img: &GrayImage,
    breast: &BinaryMask,
    params: &MethodParams,
) -> Result<BinaryMask> {
    let candidate = ccl_pectoral_with(img, breast, &params.ccl)?;
    let window = RoiWindow::bounding(&candidate).ok_or(Error::NoCornerComponent)?;
    let (mask, _) = fuzzy_window_mask(img, breast, &window, &params.fuzzy)?;
    let roi = RoiWindow::for_size(img.width(), img.height());
    corner_component(&mask, breast, &roi)
}

/// Straight line fitted to the CCL mask's edge.
pub fn ccl_with_line(img: &GrayImage, breast: &BinaryMask) -> Result<BinaryMask> {
    ccl_with_line_with(img, breast, &MethodParams::default())
}

pub fn ccl_with_line_with(
    img: &GrayImage,
    breast: &BinaryMask,
    params: &MethodParams,
) -> Result<BinaryMask> {
    let candidate = ccl_pectoral_with(img, breast, &params.ccl)?;
    line_from_candidate(&candidate, breast)
}

/// Straight line fitted to the fuzzy mask's edge.
pub fn fuzzy_with_line(img: &GrayImage, breast: &BinaryMask) -> Result<BinaryMask> {
    fuzzy_with_line_with(img, breast, &MethodParams::default())
}

pub fn fuzzy_with_line_with(
    img: &GrayImage,
    breast: &BinaryMask,
    params: &MethodParams,
) -> Result<BinaryMask> {
    let candidate = fuzzy_pectoral_with(img, breast, &params.fuzzy)?;
    line_from_candidate(&candidate, breast)
}

/// Runs `method` on a canonical (pectoral top-left) image.
pub fn run_method(
    method: MethodId,
    img: &GrayImage,
    breast: &BinaryMask,
    params: &MethodParams,
) -> Result<BinaryMask> {
    match method {
        MethodId::Ccl => ccl_pectoral_with(img, breast, &params.ccl),
        MethodId::Fuzzy => fuzzy_pectoral_with(img, breast, &params.fuzzy),
        MethodId::Line => line_from_candidate(&ccl_candidate(img, breast)?, breast),
        MethodId::CclFuzzy => ccl_with_fuzzy_with(img, breast, params),
        MethodId::CclLine => ccl_with_line_with(img, breast, params),
        MethodId::FuzzyLine => fuzzy_with_line_with(img, breast, params),
    }
}
