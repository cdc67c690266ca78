//! Synthetic MLO phantoms with exact ground truth.
//!
//! The breast is a half-ellipse against the chest wall, the pectoral muscle a
//! right triangle in the top chest-wall corner, and a small bright label sits
//! in the far bottom corner so background clean-up has something to remove.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Uniform};

use crate::error::{Error, Result};
use crate::imageio::{BinaryMask, GrayImage};
use crate::preprocess::Orientation;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhantomSpec {
    pub width: usize,
    pub height: usize,
    pub orientation: Orientation,
    /// Triangle leg along the chest wall, as a fraction of the height.
    pub triangle_depth: f64,
    /// Triangle leg along the top edge, as a fraction of the width.
    pub triangle_width: f64,
    pub pectoral_level: u16,
    pub breast_level: u16,
    pub background_level: u16,
    pub noise_sigma: f64,
    pub seed: u64,
}

impl Default for PhantomSpec {
    fn default() -> Self {
        PhantomSpec {
            width: 512,
            height: 512,
            orientation: Orientation::Left,
            triangle_depth: 0.44,
            triangle_width: 0.4,
            pectoral_level: 220,
            breast_level: 120,
            background_level: 20,
            noise_sigma: 0.0,
            seed: 0,
        }
    }
}

/// Painted image plus the masks it was painted from.
#[derive(Clone, Debug, PartialEq)]
pub struct Phantom {
    pub image: GrayImage,
    pub pectoral: BinaryMask,
    pub breast: BinaryMask,
}

const MAXVAL: u16 = 255;

impl PhantomSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if self.width < 4 || self.height < 4 {
            return bad(format!("{}x{} is too small", self.width, self.height));
        }
        for (name, f) in [
            ("triangle_depth", self.triangle_depth),
            ("triangle_width", self.triangle_width),
        ] {
            if !(f > 0.0 && f < 1.0) {
                return bad(format!("{name} {f} outside (0, 1)"));
            }
        }
        if !(self.background_level < self.breast_level
            && self.breast_level < self.pectoral_level
            && self.pectoral_level <= MAXVAL)
        {
            return bad(format!(
                "levels must satisfy background {} < breast {} < pectoral {} <= {MAXVAL}",
                self.background_level, self.breast_level, self.pectoral_level
            ));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return bad(format!("noise_sigma {} must be >= 0", self.noise_sigma));
        }
        Ok(())
    }

    /// `count` specs with seeds `seed + i`, alternating Left/Right and with
    /// triangle legs drawn from a range that keeps the muscle inside the
    /// top-left quadrant and covering over a quarter of it.
    pub fn series(&self, count: usize, seed: u64) -> Vec<PhantomSpec> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let depth = Uniform::new(0.40, 0.47).expect("valid range");
        let width = Uniform::new(0.36, 0.44).expect("valid range");
        (0..count)
            .map(|i| PhantomSpec {
                orientation: if i % 2 == 0 {
                    Orientation::Left
                } else {
                    Orientation::Right
                },
                triangle_depth: depth.sample(&mut rng),
                triangle_width: width.sample(&mut rng),
                seed: seed.wrapping_add(i as u64),
                ..*self
            })
            .collect()
    }
}

fn in_breast(spec: &PhantomSpec, r: usize, c: usize) -> bool {
    let (h, w) = (spec.height as f64, spec.width as f64);
    let (y, x) = (r as f64 + 0.5, c as f64 + 0.5);
    let dy = (y - h / 2.0) / (0.6 * h);
    let dx = x / (0.85 * w);
    dy * dy + dx * dx <= 1.0
}

fn in_triangle(spec: &PhantomSpec, r: usize, c: usize) -> bool {
    let depth = spec.triangle_depth * spec.height as f64;
    let leg = spec.triangle_width * spec.width as f64;
    let (y, x) = (r as f64 + 0.5, c as f64 + 0.5);
    y < depth && x <= leg * (1.0 - y / depth)
}

fn in_label(spec: &PhantomSpec, r: usize, c: usize) -> bool {
    let (h, w) = (spec.height as f64, spec.width as f64);
    let (y, x) = (r as f64, c as f64);
    (0.9 * h..0.95 * h).contains(&y) && (0.85 * w..0.95 * w).contains(&x)
}

pub fn generate_phantom(spec: &PhantomSpec) -> Result<Phantom> {
    spec.validate()?;
    let (w, h) = (spec.width, spec.height);
    let breast = BinaryMask::from_fn(w, h, |r, c| in_breast(spec, r, c));
    let pectoral = BinaryMask::from_fn(w, h, |r, c| breast.get(r, c) && in_triangle(spec, r, c));

    let mut data = Vec::with_capacity(w * h);
    for r in 0..h {
        for c in 0..w {
            data.push(if pectoral.get(r, c) {
                spec.pectoral_level
            } else if breast.get(r, c) {
                spec.breast_level
            } else if in_label(spec, r, c) {
                spec.pectoral_level
            } else {
                spec.background_level
            });
        }
    }
    if spec.noise_sigma > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let normal = Normal::new(0.0, spec.noise_sigma).expect("sigma validated");
        for v in data.iter_mut() {
            let noisy = *v as f64 + normal.sample(&mut rng);
            *v = noisy.round().clamp(0.0, MAXVAL as f64) as u16;
        }
    }
    let image = GrayImage::new(w, h, MAXVAL, data)?;

    Ok(match spec.orientation {
        Orientation::Left => Phantom {
            image,
            pectoral,
            breast,
        },
        Orientation::Right => Phantom {
            image: image.mirror(),
            pectoral: pectoral.mirror(),
            breast: breast.mirror(),
        },
    })
}
