//! Chaos-based grayscale image encryption.
//!
//! The cipher runs three stages over an 8-bit image:
//!
//! 1. bit-plane scrambling keyed by a Henon map,
//! 2. XOR diffusion against a byte matrix drawn from a 3D quantum logistic
//!    map (certified equivalent to a Hadamard/CNOT circuit by [`qsim`]),
//! 3. DNA-encoded XOR confusion keyed by a hybrid logistic-sine map.
//!
//! [`analysis`] holds the statistical battery used to judge ciphertexts
//! (histogram chi-square, adjacent-pixel correlation, NPCR/UACI, entropy,
//! error metrics and the plaintext-attack simulations).

pub mod analysis;
pub mod bitplane;
pub mod chaos;
pub mod cipher;
pub mod dna;
mod error;
mod image;
pub mod qsim;

pub use error::{Error, Result};
pub use image::GrayImage;

pub use cipher::{decrypt, encrypt, CipherContext, KeySet};
