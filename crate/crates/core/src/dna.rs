//! DNA encoding of byte matrices and base-level XOR.
//!
//! A byte is split into four dibits; dibit `j` (bits `2j+1..2j`) goes to
//! plane `j`, so plane 3 carries the most significant pair. Each plane is
//! encoded under its own rule.

use std::fmt;

use crate::error::{Error, Result};
use crate::GrayImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    A,
    C,
    G,
    T,
}

impl Base {
    pub const ALL: [Base; 4] = [Base::A, Base::C, Base::G, Base::T];

    /// Position in the canonical `A, C, G, T` order.
    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<Base> {
        Self::ALL.get(code as usize).copied()
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Base::A => 'A',
            Base::C => 'C',
            Base::G => 'G',
            Base::T => 'T',
        };
        write!(f, "{c}")
    }
}

use Base::{A, C, G, T};

/// Encoding rules i..viii, indexed by dibit value 00, 01, 10, 11.
const RULES: [[Base; 4]; 8] = [
    [A, G, C, T],
    [C, A, T, G],
    [T, G, C, A],
    [A, C, G, T],
    [G, T, A, C],
    [C, T, A, G],
    [T, G, C, A],
    [G, A, T, C],
];

/// One of the eight dibit-to-base bijections, numbered 1 to 8.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DnaRule(u8);

impl DnaRule {
    pub fn new(index: u8) -> Result<Self> {
        if (1..=8).contains(&index) {
            Ok(Self(index))
        } else {
            Err(Error::InvalidRule(index))
        }
    }

    pub fn all() -> impl Iterator<Item = DnaRule> {
        (1..=8).map(DnaRule)
    }

    /// Rule `1 + floor(frac(k) * 8)` for a sub-key `k`.
    pub fn from_subkey(k: f64) -> Self {
        let k = k.abs();
        let frac = k - k.floor();
        let idx = ((frac * 8.0).floor() as u8).min(7);
        Self(idx + 1)
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn encode_dibit(self, dibit: u8) -> Base {
        RULES[self.0 as usize - 1][(dibit & 3) as usize]
    }

    pub fn decode_base(self, base: Base) -> u8 {
        let row = &RULES[self.0 as usize - 1];
        // Every rule is a bijection, so the base always occurs exactly once.
        row.iter().position(|&b| b == base).expect("rule is a bijection") as u8
    }
}

const fn xor_index(b: Base) -> usize {
    match b {
        A => 0,
        G => 1,
        T => 2,
        C => 3,
    }
}

/// Base XOR truth table; rows and columns in the order `A, G, T, C`.
const XOR_TABLE: [[Base; 4]; 4] = [
    [A, G, T, C],
    [G, A, C, T],
    [T, C, A, G],
    [C, T, G, A],
];

pub fn dna_xor(a: Base, b: Base) -> Base {
    XOR_TABLE[xor_index(a)][xor_index(b)]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DnaPlanes {
    width: usize,
    height: usize,
    planes: [Vec<Base>; 4],
}

impl DnaPlanes {
    pub fn new(width: usize, height: usize, planes: [Vec<Base>; 4]) -> Result<Self> {
        let n = width * height;
        if n == 0 || planes.iter().any(|p| p.len() != n) {
            return Err(Error::InvalidImage(format!(
                "DNA planes do not all hold {width}x{height} bases"
            )));
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

    pub fn plane(&self, j: usize) -> &[Base] {
        &self.planes[j]
    }
}

pub fn encode_bytes(width: usize, height: usize, bytes: &[u8], rules: &[DnaRule; 4]) -> Result<DnaPlanes> {
    let planes = std::array::from_fn(|j| {
        bytes
            .iter()
            .map(|&b| rules[j].encode_dibit(b >> (2 * j)))
            .collect()
    });
    DnaPlanes::new(width, height, planes)
}

pub fn encode(img: &GrayImage, rules: &[DnaRule; 4]) -> Result<DnaPlanes> {
    encode_bytes(img.width(), img.height(), img.pixels(), rules)
}

pub fn decode(planes: &DnaPlanes, rules: &[DnaRule; 4]) -> Result<GrayImage> {
    let n = planes.width * planes.height;
    let mut pixels = vec![0u8; n];
    for (j, plane) in planes.planes.iter().enumerate() {
        for (px, &base) in pixels.iter_mut().zip(plane) {
            *px |= rules[j].decode_base(base) << (2 * j);
        }
    }
    GrayImage::new(planes.width, planes.height, pixels)
}

pub fn xor_planes(a: &DnaPlanes, b: &DnaPlanes) -> Result<DnaPlanes> {
    if a.dimensions() != b.dimensions() {
        return Err(Error::DimensionMismatch {
            expected: a.dimensions(),
            actual: b.dimensions(),
        });
    }
    let planes = std::array::from_fn(|j| {
        a.planes[j]
            .iter()
            .zip(&b.planes[j])
            .map(|(&x, &y)| dna_xor(x, y))
            .collect()
    });
    DnaPlanes::new(a.width, a.height, planes)
}
