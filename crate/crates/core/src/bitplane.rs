//! Bit-plane decomposition and whole-plane scrambling.
//!
//! Plane `k` holds bit `k` of every pixel, with plane 0 the least significant.

use crate::error::{Error, Result};
use crate::GrayImage;

/// A bijection on the plane indices `0..8`.
///
/// Scrambling with `perm` puts input plane `perm[j]` at output position `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitPermutation([u8; 8]);

impl BitPermutation {
    pub const IDENTITY: Self = Self([0, 1, 2, 3, 4, 5, 6, 7]);

    pub fn new(perm: [u8; 8]) -> Result<Self> {
        let mut seen = 0u8;
        for &p in &perm {
            if p > 7 || seen & (1 << p) != 0 {
                return Err(Error::InvalidPermutation(perm));
            }
            seen |= 1 << p;
        }
        Ok(Self(perm))
    }

    pub fn as_array(&self) -> [u8; 8] {
        self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = [0u8; 8];
        for (j, &p) in self.0.iter().enumerate() {
            inv[p as usize] = j as u8;
        }
        Self(inv)
    }

    /// The permutation equivalent to scrambling by `self` and then by `then`.
    pub fn then(&self, then: &Self) -> Self {
        let mut out = [0u8; 8];
        for (j, slot) in out.iter_mut().enumerate() {
            *slot = self.0[then.0[j] as usize];
        }
        Self(out)
    }

    /// Applies the permutation to the bits of one byte.
    pub fn apply_byte(&self, byte: u8) -> u8 {
        self.0
            .iter()
            .enumerate()
            .fold(0u8, |acc, (j, &src)| acc | (((byte >> src) & 1) << j))
    }
}

impl Default for BitPermutation {
    fn default() -> Self {
        Self::IDENTITY
    }
}

/// Eight binary planes of a grayscale image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitPlanes {
    width: usize,
    height: usize,
    planes: [Vec<u8>; 8],
}

impl BitPlanes {
    pub fn new(width: usize, height: usize, planes: [Vec<u8>; 8]) -> Result<Self> {
        let n = width * height;
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage("bit planes must be non-empty".into()));
        }
        for (k, plane) in planes.iter().enumerate() {
            if plane.len() != n {
                return Err(Error::InvalidImage(format!(
                    "plane {k} has {} entries, expected {n}",
                    plane.len()
                )));
            }
            if plane.iter().any(|&b| b > 1) {
                return Err(Error::InvalidImage(format!("plane {k} is not binary")));
            }
        }
        Ok(Self {
            width,
            height,
            planes,
        })
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn plane(&self, k: usize) -> &[u8] {
        &self.planes[k]
    }

    pub fn planes(&self) -> &[Vec<u8>; 8] {
        &self.planes
    }
}

pub fn decompose(img: &GrayImage) -> BitPlanes {
    let planes: [Vec<u8>; 8] =
        std::array::from_fn(|k| img.pixels().iter().map(|&p| (p >> k) & 1).collect());
    BitPlanes {
        width: img.width(),
        height: img.height(),
        planes,
    }
}

pub fn scramble(bp: &BitPlanes, perm: &BitPermutation) -> BitPlanes {
    let planes = std::array::from_fn(|j| bp.planes[perm.0[j] as usize].clone());
    BitPlanes {
        width: bp.width,
        height: bp.height,
        planes,
    }
}

/// Like [`scramble`] but takes an unchecked array, as read from outside.
pub fn scramble_with(bp: &BitPlanes, perm: [u8; 8]) -> Result<BitPlanes> {
    Ok(scramble(bp, &BitPermutation::new(perm)?))
}

pub fn reassemble(bp: &BitPlanes) -> GrayImage {
    let n = bp.width * bp.height;
    let mut pixels = vec![0u8; n];
    for (k, plane) in bp.planes.iter().enumerate() {
        for (px, &bit) in pixels.iter_mut().zip(plane) {
            *px |= bit << k;
        }
    }
    GrayImage::new(bp.width, bp.height, pixels).expect("plane dimensions are validated")
}
