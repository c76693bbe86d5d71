//! Chaotic sequence generators and the key material derived from them.
//!
//! Three systems are used:
//!
//! * the Henon map, `x' = 1 - alpha*x^2 + y`, `y' = beta*x`, which yields the
//!   bit-plane permutation and the diffusion-key selector;
//! * the hybrid logistic-sine map, `x' = r*x*(1-x) + 4r*sin(pi*x/4)` taken
//!   modulo 1, which yields the confusion key stream;
//! * the dissipative 3D quantum logistic map, which yields the three
//!   diffusion key matrices.
//!
//! Every generator is a pure function of its parameters and iterates in
//! `f64`, so outputs are reproducible bit-for-bit on IEEE-754 platforms.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bitplane::BitPermutation;
use crate::error::{Error, Result};
use crate::GrayImage;

pub const DEFAULT_BURN_IN: usize = 1000;
pub const DEFAULT_EPS1: u64 = 104_729;
pub const DEFAULT_EPS2: u64 = 7_919;

pub const HENON_DEFAULT_ALPHA: f64 = 1.4;
pub const HENON_DEFAULT_BETA: f64 = 0.3;
pub const QLOG_DEFAULT_ETA: f64 = 4.0;
pub const QLOG_DEFAULT_GAMMA: f64 = 6.0;

/// Orbits whose magnitude exceeds this are reported as divergent.
pub const DIVERGENCE_BOUND: f64 = 1e6;
/// Largest imaginary part tolerated in the quantum logistic orbit.
pub const IMAGINARY_TOLERANCE: f64 = 1e-9;

fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

fn require_count(n: usize) -> Result<()> {
    if n == 0 {
        return Err(invalid("n", "sequence length must be at least 1"));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Henon
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HenonParams {
    pub x0: f64,
    pub y0: f64,
    pub alpha: f64,
    pub beta: f64,
    pub burn_in: usize,
}

impl HenonParams {
    pub fn new(x0: f64, y0: f64) -> Self {
        Self {
            x0,
            y0,
            alpha: HENON_DEFAULT_ALPHA,
            beta: HENON_DEFAULT_BETA,
            burn_in: DEFAULT_BURN_IN,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x0.is_finite() && self.y0.is_finite()) {
            return Err(invalid("henon seed", "seeds must be finite"));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.5) {
            return Err(invalid("alpha", format!("{} not in (0, 1.5]", self.alpha)));
        }
        if !(self.beta > 0.0 && self.beta <= 0.5) {
            return Err(invalid("beta", format!("{} not in (0, 0.5]", self.beta)));
        }
        Ok(())
    }
}

#[inline]
fn henon_step(x: f64, y: f64, alpha: f64, beta: f64) -> (f64, f64) {
    (1.0 - alpha * x * x + y, beta * x)
}

/// Runs the Henon map, discards `burn_in` iterates and returns the next `n`.
pub fn henon_sequence(p: &HenonParams, n: usize) -> Result<Vec<(f64, f64)>> {
    p.validate()?;
    require_count(n)?;
    let (mut x, mut y) = (p.x0, p.y0);
    let mut out = Vec::with_capacity(n);
    for i in 0..p.burn_in + n {
        (x, y) = henon_step(x, y, p.alpha, p.beta);
        if x.is_nan() || x.abs() > DIVERGENCE_BOUND {
            return Err(Error::Divergence {
                iteration: i + 1,
                magnitude: x.abs(),
            });
        }
        if i >= p.burn_in {
            out.push((x, y));
        }
    }
    Ok(out)
}

/// Stable argsort of eight values: `perm[j]` is the index of the `j`-th
/// smallest value, ties broken by index.
pub fn argsort8(values: &[f64; 8]) -> [u8; 8] {
    let mut idx: [u8; 8] = [0, 1, 2, 3, 4, 5, 6, 7];
    idx.sort_by(|&a, &b| values[a as usize].total_cmp(&values[b as usize]));
    idx
}

/// Maps a value onto a selector in `{0, 1, 2}` via `floor(frac(|v|) * 3)`.
pub fn selector_from_value(v: f64) -> usize {
    let v = v.abs();
    let frac = v - v.floor();
    ((frac * 3.0).floor() as usize).min(2)
}

/// Bit-plane scrambling key: argsort of the first eight post-burn-in x values.
pub fn derive_bitplane_key(p: &HenonParams) -> Result<BitPermutation> {
    let seq = henon_sequence(p, 8)?;
    let mut xs = [0.0; 8];
    for (slot, &(x, _)) in xs.iter_mut().zip(&seq) {
        *slot = x;
    }
    BitPermutation::new(argsort8(&xs))
}

/// Diffusion-key selector taken from the first post-burn-in y value.
pub fn derive_selector_key(p: &HenonParams) -> Result<usize> {
    // Same orbit window as the bit-plane key, so both come from one run.
    let seq = henon_sequence(p, 8)?;
    Ok(selector_from_value(seq[0].1))
}

// ---------------------------------------------------------------------------
// Hybrid logistic-sine
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HybridParams {
    pub x0: f64,
    pub r: f64,
    pub burn_in: usize,
}

impl HybridParams {
    pub const R_MIN: f64 = 0.6;
    pub const R_MAX: f64 = 1.2;

    pub fn validate(&self) -> Result<()> {
        if !(self.x0 > 0.0 && self.x0 < 1.0) {
            return Err(invalid("hybrid x0", format!("{} not in (0, 1)", self.x0)));
        }
        if !(self.r >= Self::R_MIN && self.r <= Self::R_MAX) {
            return Err(invalid("hybrid r", format!("{} not in [0.6, 1.2]", self.r)));
        }
        Ok(())
    }
}

/// One step of the hybrid map before reduction modulo 1.
#[inline]
pub fn hybrid_raw_step(x: f64, r: f64) -> f64 {
    r * x * (1.0 - x) + 4.0 * r * (PI * x / 4.0).sin()
}

#[inline]
fn hybrid_step(x: f64, r: f64) -> f64 {
    hybrid_raw_step(x, r).rem_euclid(1.0)
}

/// Hybrid logistic-sine orbit reduced to `[0, 1)`.
pub fn hybrid_sequence(p: &HybridParams, n: usize) -> Result<Vec<f64>> {
    p.validate()?;
    require_count(n)?;
    let mut x = p.x0;
    for _ in 0..p.burn_in {
        x = hybrid_step(x, p.r);
    }
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        x = hybrid_step(x, p.r);
        out.push(x);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// 3D quantum logistic
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumLogisticParams {
    pub x0: f64,
    pub y0: f64,
    pub z0: f64,
    pub eta: f64,
    pub gamma: f64,
    pub burn_in: usize,
}

impl QuantumLogisticParams {
    pub fn new(x0: f64, y0: f64, z0: f64) -> Self {
        Self {
            x0,
            y0,
            z0,
            eta: QLOG_DEFAULT_ETA,
            gamma: QLOG_DEFAULT_GAMMA,
            burn_in: DEFAULT_BURN_IN,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x0 > 0.0 && self.x0 <= 1.0) {
            return Err(invalid("qlog x0", format!("{} not in (0, 1]", self.x0)));
        }
        if !(self.y0 > 0.0 && self.y0 <= 0.1) {
            return Err(invalid("qlog y0", format!("{} not in (0, 0.1]", self.y0)));
        }
        if !(self.z0 > 0.0 && self.z0 <= 0.2) {
            return Err(invalid("qlog z0", format!("{} not in (0, 0.2]", self.z0)));
        }
        if !(self.eta > 0.0 && self.eta <= 4.0) {
            return Err(invalid("eta", format!("{} not in (0, 4]", self.eta)));
        }
        if !(self.gamma >= 6.0 && self.gamma.is_finite()) {
            return Err(invalid("gamma", format!("{} is below 6", self.gamma)));
        }
        Ok(())
    }
}

/// Complex state of the quantum logistic map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumLogisticState {
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
}

impl QuantumLogisticState {
    pub fn real(x: f64, y: f64, z: f64) -> Self {
        Self {
            x: Complex64::new(x, 0.0),
            y: Complex64::new(y, 0.0),
            z: Complex64::new(z, 0.0),
        }
    }

    /// Applies the map once without any reduction of `x`.
    pub fn step_raw(&self, eta: f64, gamma: f64) -> Self {
        let Self { x, y, z } = *self;
        let (xc, zc) = (x.conj(), z.conj());
        let e1 = (-gamma).exp();
        let e2 = (-2.0 * gamma).exp();
        let two = Complex64::new(2.0, 0.0);
        let one = Complex64::new(1.0, 0.0);

        let nx = (x - x.norm_sqr()) * eta - y * eta;
        let ny = -y * e2 + ((two - x - xc) * y - x * zc - xc * z) * (e1 * eta);
        let nz = -z * e2 + ((one - xc) * z * 2.0 - x * y * 2.0 - x) * (e1 * eta);
        Self {
            x: nx,
            y: ny,
            z: nz,
        }
    }

    /// Applies the map and folds the real part of `x` back into `[0, 1)`.
    ///
    /// Without the fold, `x` leaves `[0, 1]` as soon as `y > x(1 - x)` and
    /// the orbit runs off to minus infinity within a few hundred steps.
    pub fn step(&self, eta: f64, gamma: f64) -> Self {
        let mut next = self.step_raw(eta, gamma);
        next.x.re = next.x.re.rem_euclid(1.0);
        next
    }

    fn check(&self, iteration: usize) -> Result<()> {
        let magnitude = self.x.norm().max(self.y.norm()).max(self.z.norm());
        if magnitude.is_nan() || magnitude > DIVERGENCE_BOUND {
            return Err(Error::Divergence {
                iteration,
                magnitude,
            });
        }
        let imag = self.x.im.abs().max(self.y.im.abs()).max(self.z.im.abs());
        if imag >= IMAGINARY_TOLERANCE {
            return Err(Error::ImaginaryDrift {
                iteration,
                magnitude: imag,
            });
        }
        Ok(())
    }
}

/// Real parts of the quantum logistic orbit after `burn_in` iterations.
pub fn quantum_logistic_sequence(
    p: &QuantumLogisticParams,
    n: usize,
) -> Result<Vec<(f64, f64, f64)>> {
    p.validate()?;
    require_count(n)?;
    let mut s = QuantumLogisticState::real(p.x0, p.y0, p.z0);
    let mut out = Vec::with_capacity(n);
    for i in 0..p.burn_in + n {
        s = s.step(p.eta, p.gamma);
        s.check(i + 1)?;
        if i >= p.burn_in {
            out.push((s.x.re, s.y.re, s.z.re));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Key matrices
// ---------------------------------------------------------------------------

/// A `width x height` byte matrix derived from a chaotic sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyMatrix {
    width: usize,
    height: usize,
    bytes: Vec<u8>,
}

impl KeyMatrix {
    pub fn from_bytes(width: usize, height: usize, bytes: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 || bytes.len() != width * height {
            return Err(Error::InvalidImage(format!(
                "key matrix {width}x{height} cannot hold {} bytes",
                bytes.len()
            )));
        }
        Ok(Self {
            width,
            height,
            bytes,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.bytes[y * self.width + x]
    }

    pub fn to_image(&self) -> GrayImage {
        GrayImage::new(self.width, self.height, self.bytes.clone())
            .expect("key matrix dimensions are validated on construction")
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// `mod(floor(eps1 * x + eps2), 256)` for a single value.
#[inline]
pub fn key_byte(x: f64, eps1: u64, eps2: u64) -> u8 {
    (eps1 as f64 * x + eps2 as f64).floor().rem_euclid(256.0) as u8
}

/// Fills a `w x h` key matrix row-major from the first `w*h` sequence values.
pub fn derive_key_matrix(
    seq: &[f64],
    eps1: u64,
    eps2: u64,
    w: usize,
    h: usize,
) -> Result<KeyMatrix> {
    if !is_prime(eps1) {
        return Err(invalid("eps1", format!("{eps1} is not prime")));
    }
    if !is_prime(eps2) {
        return Err(invalid("eps2", format!("{eps2} is not prime")));
    }
    let needed = w
        .checked_mul(h)
        .filter(|&n| n > 0)
        .ok_or_else(|| invalid("dimensions", format!("{w}x{h}")))?;
    if seq.len() < needed {
        return Err(Error::InsufficientSequence {
            needed,
            available: seq.len(),
        });
    }
    if let Some(bad) = seq[..needed].iter().find(|v| !v.is_finite()) {
        return Err(invalid("sequence", format!("non-finite value {bad}")));
    }
    let bytes = seq[..needed]
        .iter()
        .map(|&x| key_byte(x, eps1, eps2))
        .collect();
    KeyMatrix::from_bytes(w, h, bytes)
}

// ---------------------------------------------------------------------------
// Plot data
// ---------------------------------------------------------------------------

/// Evenly spaced parameter sweep, `steps` samples from `start` to `end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamRange {
    pub start: f64,
    pub end: f64,
    pub steps: usize,
}

impl ParamRange {
    pub fn new(start: f64, end: f64, steps: usize) -> Result<Self> {
        if !(start.is_finite() && end.is_finite()) || start >= end || steps == 0 {
            return Err(Error::EmptyRange);
        }
        Ok(Self { start, end, steps })
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        let span = self.end - self.start;
        let denom = (self.steps.max(2) - 1) as f64;
        (0..self.steps).map(move |i| {
            if self.steps == 1 {
                self.start
            } else {
                self.start + span * i as f64 / denom
            }
        })
    }
}

/// `(alpha, x)` rows of a Henon bifurcation sweep at fixed `beta`.
pub fn henon_bifurcation(
    alphas: &ParamRange,
    beta: f64,
    samples: usize,
    burn_in: usize,
) -> Result<Vec<(f64, f64)>> {
    let mut rows = Vec::with_capacity(alphas.steps * samples);
    for alpha in alphas.values() {
        let p = HenonParams {
            x0: 0.1,
            y0: 0.1,
            alpha,
            beta,
            burn_in,
        };
        rows.extend(henon_sequence(&p, samples)?.into_iter().map(|(x, _)| (alpha, x)));
    }
    Ok(rows)
}

/// `(r, x)` rows of a hybrid logistic-sine bifurcation sweep.
pub fn hybrid_bifurcation(
    rs: &ParamRange,
    samples: usize,
    burn_in: usize,
) -> Result<Vec<(f64, f64)>> {
    let mut rows = Vec::with_capacity(rs.steps * samples);
    for r in rs.values() {
        let p = HybridParams {
            x0: 0.37,
            r,
            burn_in,
        };
        rows.extend(hybrid_sequence(&p, samples)?.into_iter().map(|x| (r, x)));
    }
    Ok(rows)
}
