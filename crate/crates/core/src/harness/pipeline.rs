use crate::error::{Error, Result};
use crate::hybrid::{run_method, MethodId, MethodParams};
use crate::imageio::{BinaryMask, GrayImage};
use crate::preprocess::{
    breast_region, canonicalize, canonicalize_mask, detect_orientation, smooth, Orientation,
};

/// Output of [`suppress`], in the input image's own orientation.
#[derive(Clone, Debug, PartialEq)]
pub struct Suppression {
    /// Input with the pectoral pixels zeroed.
    pub image: GrayImage,
    pub pectoral: BinaryMask,
    pub breast: BinaryMask,
    pub orientation: Orientation,
}

pub fn suppress(img: &GrayImage, method: MethodId) -> Result<Suppression> {
    suppress_with(img, method, &MethodParams::default())
}

/// Smooth, find the breast, canonicalize, segment, and map the muscle mask
/// back onto the original orientation. Errors carry the failing stage.
pub fn suppress_with(
    img: &GrayImage,
    method: MethodId,
    params: &MethodParams,
) -> Result<Suppression> {
    let smoothed = smooth(img);
    let breast = breast_region(&smoothed).map_err(Error::at("breast_region"))?;
    let orientation = detect_orientation(&breast).map_err(Error::at("orientation"))?;
    let canon = canonicalize(&smoothed, orientation);
    let canon_breast = canonicalize_mask(&breast, orientation);
    let mask =
        run_method(method, &canon, &canon_breast, params).map_err(Error::at(method.name()))?;
    let pectoral = canonicalize_mask(&mask, orientation);

    let data = img
        .data()
        .iter()
        .zip(pectoral.bits())
        .map(|(&v, &p)| if p { 0 } else { v })
        .collect();
    Ok(Suppression {
        image: img.with_data(data),
        pectoral,
        breast,
        orientation,
    })
}
