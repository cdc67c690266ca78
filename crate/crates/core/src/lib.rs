//! Pectoral muscle suppression for medio-lateral oblique mammograms.
//!
//! Six segmentation methods are provided: connected-component labeling,
//! fuzzy intensification, a straight-line boundary fit, and the three
//! pairwise hybrids. [`metrics`] scores the results with the probabilistic
//! Rand index, local consistency error, Tanimoto coefficient, mean absolute
//! error and Hausdorff distance.
//!
//! ```
//! use pectoral::harness::{generate_phantom, suppress, PhantomSpec};
//! use pectoral::{metrics, MethodId};
//!
//! let phantom = generate_phantom(&PhantomSpec { width: 128, height: 128, ..Default::default() })?;
//! let out = suppress(&phantom.image, MethodId::FuzzyLine)?;
//! let tc = metrics::tanimoto_masks(&out.pectoral, &phantom.pectoral)?;
//! assert!(tc > 0.8);
//! # Ok::<(), pectoral::Error>(())
//! ```

mod error;
pub mod fuzzyseg;
pub mod harness;
pub mod hybrid;
pub mod imageio;
pub mod labeling;
pub mod lineseg;
pub mod metrics;
pub mod preprocess;

pub use error::{Error, Result};
pub use hybrid::{MethodId, MethodParams};
pub use imageio::{BinaryMask, GrayImage};
pub use labeling::{Connectivity, LabelMap};
pub use preprocess::{Orientation, RoiWindow};
