//! Key material and the end-to-end encrypt/decrypt pipeline.
//!
//! Encryption, per pixel matrix:
//!
//! ```text
//! decompose -> scramble(bp_key) -> reassemble
//!   -> XOR with the selected quantum logistic key matrix
//!   -> DNA encode (data rules) -> DNA XOR with encoded hybrid key (key rules)
//!   -> DNA decode (output rules)
//! ```
//!
//! Decryption runs the same stages backwards. There is no chaining between
//! pixels, so a ciphertext byte only depends on the plaintext byte at the
//! same position.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::bitplane::{self, BitPermutation};
use crate::chaos::{
    self, is_prime, HenonParams, HybridParams, KeyMatrix, QuantumLogisticParams,
};
use crate::dna::{self, DnaRule};
use crate::error::{Error, Result};
use crate::qsim;
use crate::GrayImage;

pub const KEY_FORMAT_VERSION: u32 = 1;
pub const SUBKEY_COUNT: usize = 18;

/// Scale applied to `k2` to keep the Henon seed inside the attractor's basin.
pub const HENON_Y0_SCALE: f64 = 0.2;
pub const QLOG_Y0_SCALE: f64 = 0.1;
pub const QLOG_Z0_SCALE: f64 = 0.2;

/// Significand bits credited to each secret real parameter.
pub const BITS_PER_PARAMETER: u32 = 52;

/// The complete secret: 18 sub-keys, the shared seed `r` and map parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct KeySet {
    /// `k[0]` is k1, ..., `k[17]` is k18.
    pub k: [f64; SUBKEY_COUNT],
    pub r: f64,
    pub alpha: f64,
    pub beta: f64,
    pub eta: f64,
    pub gamma: f64,
    pub eps1: u64,
    pub eps2: u64,
    pub burn_in: usize,
}

fn range_err(field: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::KeyRange {
        field: field.into(),
        reason: reason.into(),
    }
}

fn open_unit(v: f64) -> bool {
    v > 0.0 && v < 1.0
}

impl KeySet {
    /// Key with the given sub-keys and shared seed and default map parameters.
    pub fn new(k: [f64; SUBKEY_COUNT], r: f64) -> Result<Self> {
        let key = Self {
            k,
            r,
            alpha: chaos::HENON_DEFAULT_ALPHA,
            beta: chaos::HENON_DEFAULT_BETA,
            eta: chaos::QLOG_DEFAULT_ETA,
            gamma: chaos::QLOG_DEFAULT_GAMMA,
            eps1: chaos::DEFAULT_EPS1,
            eps2: chaos::DEFAULT_EPS2,
            burn_in: chaos::DEFAULT_BURN_IN,
        };
        key.validate()?;
        Ok(key)
    }

    /// Sub-key by its 1-based name (`subkey(1)` is k1).
    pub fn subkey(&self, i: usize) -> f64 {
        self.k[i - 1]
    }

    pub fn validate(&self) -> Result<()> {
        for (i, &v) in self.k.iter().enumerate() {
            if !open_unit(v) {
                return Err(range_err(format!("k{}", i + 1), format!("{v} not in (0, 1)")));
            }
        }
        if !open_unit(self.r) {
            return Err(range_err("r", format!("{} not in (0, 1)", self.r)));
        }
        if !is_prime(self.eps1) {
            return Err(range_err("eps1", format!("{} is not prime", self.eps1)));
        }
        if !is_prime(self.eps2) {
            return Err(range_err("eps2", format!("{} is not prime", self.eps2)));
        }
        let remap = |e: Error, field: &str| match e {
            Error::InvalidParameter { reason, .. } => range_err(field, reason),
            other => other,
        };
        let h = self.henon_params();
        h.validate().map_err(|e| remap(e, "alpha/beta"))?;
        self.qlog_params()
            .validate()
            .map_err(|e| remap(e, "eta/gamma"))?;
        Ok(())
    }

    /// Henon seeds: `x0 = frac(k1 + r)`, `y0 = 0.2 * k2`.
    pub fn henon_params(&self) -> HenonParams {
        HenonParams {
            x0: (self.k[0] + self.r).rem_euclid(1.0),
            y0: HENON_Y0_SCALE * self.k[1],
            alpha: self.alpha,
            beta: self.beta,
            burn_in: self.burn_in,
        }
    }

    /// Quantum logistic seeds: `x0 = k3`, `y0 = 0.1 * k4`, `z0 = 0.2 * k5`.
    pub fn qlog_params(&self) -> QuantumLogisticParams {
        QuantumLogisticParams {
            x0: self.k[2],
            y0: QLOG_Y0_SCALE * self.k[3],
            z0: QLOG_Z0_SCALE * self.k[4],
            eta: self.eta,
            gamma: self.gamma,
            burn_in: self.burn_in,
        }
    }

    /// Hybrid map: `x0 = k10`, control `0.6 + 0.6 * r`.
    pub fn hybrid_params(&self) -> HybridParams {
        HybridParams {
            x0: self.k[9],
            r: HybridParams::R_MIN + (HybridParams::R_MAX - HybridParams::R_MIN) * self.r,
            burn_in: self.burn_in,
        }
    }

    fn rules(&self, first: usize) -> [DnaRule; 4] {
        std::array::from_fn(|j| DnaRule::from_subkey(self.k[first - 1 + j]))
    }

    /// Rules for encoding the diffused image (k6..k9).
    pub fn data_rules(&self) -> [DnaRule; 4] {
        self.rules(6)
    }

    /// Rules for encoding the hybrid key stream (k11..k14).
    pub fn key_rules(&self) -> [DnaRule; 4] {
        self.rules(11)
    }

    /// Rules for decoding the DNA XOR result (k15..k18).
    pub fn out_rules(&self) -> [DnaRule; 4] {
        self.rules(15)
    }

    /// Copy of this key whose quantum logistic `y0` is `y0`.
    pub fn with_qlog_y0(&self, y0: f64) -> Result<Self> {
        let mut key = self.clone();
        key.k[3] = y0 / QLOG_Y0_SCALE;
        key.validate()?;
        Ok(key)
    }

    /// The chaotic initial conditions and control parameters that make up
    /// the secret, in map order: Henon, hybrid, quantum logistic.
    pub fn secret_parameters(&self) -> Vec<(&'static str, f64)> {
        let h = self.henon_params();
        let y = self.hybrid_params();
        let q = self.qlog_params();
        vec![
            ("henon.x0", h.x0),
            ("henon.y0", h.y0),
            ("henon.alpha", h.alpha),
            ("henon.beta", h.beta),
            ("hybrid.x0", y.x0),
            ("hybrid.r", y.r),
            ("qlog.x0", q.x0),
            ("qlog.y0", q.y0),
            ("qlog.z0", q.z0),
            ("qlog.eta", q.eta),
            ("qlog.gamma", q.gamma),
        ]
    }

    /// `log2` of the key space, crediting 52 bits per secret parameter.
    pub fn key_space_bits(&self) -> u32 {
        BITS_PER_PARAMETER * self.secret_parameters().len() as u32
    }
}

fn unit_open_sample(rng: &mut ChaCha20Rng) -> f64 {
    loop {
        let v: f64 = rng.gen();
        if v > 0.0 {
            return v;
        }
    }
}

/// Deterministically expands a 32-byte seed into a key.
pub fn keygen(seed: [u8; 32]) -> KeySet {
    let mut rng = ChaCha20Rng::from_seed(seed);
    let k = std::array::from_fn(|_| unit_open_sample(&mut rng));
    let r = unit_open_sample(&mut rng);
    KeySet::new(k, r).expect("sampled values are inside (0, 1)")
}

/// Key from operating-system randomness.
pub fn keygen_random() -> KeySet {
    keygen(rand::random())
}

// ---------------------------------------------------------------------------
// Key text format
// ---------------------------------------------------------------------------

fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

/// Canonical text form: one `name = value` line per field.
pub fn serialize_key(key: &KeySet) -> String {
    let mut s = String::new();
    writeln!(s, "version = {KEY_FORMAT_VERSION}").unwrap();
    for (i, v) in key.k.iter().enumerate() {
        writeln!(s, "k{} = {}", i + 1, fmt_real(*v)).unwrap();
    }
    writeln!(s, "r = {}", fmt_real(key.r)).unwrap();
    writeln!(s, "eps1 = {}", key.eps1).unwrap();
    writeln!(s, "eps2 = {}", key.eps2).unwrap();
    writeln!(s, "alpha = {}", fmt_real(key.alpha)).unwrap();
    writeln!(s, "beta = {}", fmt_real(key.beta)).unwrap();
    writeln!(s, "eta = {}", fmt_real(key.eta)).unwrap();
    writeln!(s, "gamma = {}", fmt_real(key.gamma)).unwrap();
    writeln!(s, "burn_in = {}", key.burn_in).unwrap();
    s
}

fn field_names() -> Vec<String> {
    let mut names = vec!["version".to_string()];
    names.extend((1..=SUBKEY_COUNT).map(|i| format!("k{i}")));
    for n in ["r", "eps1", "eps2", "alpha", "beta", "eta", "gamma", "burn_in"] {
        names.push(n.to_string());
    }
    names
}

fn parse_err(field: &str, reason: impl Into<String>) -> Error {
    Error::KeyParse {
        field: field.to_string(),
        reason: reason.into(),
    }
}

pub fn parse_key(text: &str) -> Result<KeySet> {
    let known = field_names();
    let mut values: HashMap<String, String> = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (name, value) = line
            .split_once('=')
            .ok_or_else(|| parse_err(line, format!("line {} is not `name = value`", lineno + 1)))?;
        let (name, value) = (name.trim(), value.trim());
        if !known.iter().any(|k| k == name) {
            return Err(parse_err(name, "unknown field"));
        }
        if values.insert(name.to_string(), value.to_string()).is_some() {
            return Err(parse_err(name, "duplicate field"));
        }
    }

    let get = |name: &str| -> Result<&str> {
        values
            .get(name)
            .map(String::as_str)
            .ok_or_else(|| parse_err(name, "missing field"))
    };
    let real = |name: &str| -> Result<f64> {
        let v: f64 = get(name)?
            .parse()
            .map_err(|e| parse_err(name, format!("{e}")))?;
        if !v.is_finite() {
            return Err(parse_err(name, "not a finite number"));
        }
        Ok(v)
    };
    let int = |name: &str| -> Result<u64> {
        get(name)?
            .parse()
            .map_err(|e| parse_err(name, format!("{e}")))
    };

    let version = int("version")?;
    if version != KEY_FORMAT_VERSION as u64 {
        return Err(parse_err("version", format!("unsupported version {version}")));
    }
    let mut k = [0.0; SUBKEY_COUNT];
    for (i, slot) in k.iter_mut().enumerate() {
        *slot = real(&format!("k{}", i + 1))?;
    }
    let key = KeySet {
        k,
        r: real("r")?,
        eps1: int("eps1")?,
        eps2: int("eps2")?,
        alpha: real("alpha")?,
        beta: real("beta")?,
        eta: real("eta")?,
        gamma: real("gamma")?,
        burn_in: usize::try_from(int("burn_in")?)
            .map_err(|e| parse_err("burn_in", format!("{e}")))?,
    };
    key.validate()?;
    Ok(key)
}

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

/// Everything the pipeline needs for one key and one image size.
#[derive(Debug, Clone, PartialEq)]
pub struct CipherContext {
    pub width: usize,
    pub height: usize,
    pub bp_key: BitPermutation,
    pub selector: usize,
    /// `K_X`, `K_Y`, `K_Z` from the quantum logistic x, y and z orbits.
    pub key_matrices: [KeyMatrix; 3],
    pub hybrid_key: KeyMatrix,
    pub data_rules: [DnaRule; 4],
    pub key_rules: [DnaRule; 4],
    pub out_rules: [DnaRule; 4],
}

pub fn derive_context(key: &KeySet, w: usize, h: usize) -> Result<CipherContext> {
    key.validate()?;
    let n = w
        .checked_mul(h)
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::InvalidImage(format!("cannot key a {w}x{h} image")))?;

    let henon = key.henon_params();
    let bp_key = chaos::derive_bitplane_key(&henon)?;
    let selector = chaos::derive_selector_key(&henon)?;

    let orbit = chaos::quantum_logistic_sequence(&key.qlog_params(), n)?;
    let component = |f: fn(&(f64, f64, f64)) -> f64| -> Vec<f64> { orbit.iter().map(f).collect() };
    let xs = component(|t| t.0);
    let ys = component(|t| t.1);
    let zs = component(|t| t.2);
    let key_matrices = [
        chaos::derive_key_matrix(&xs, key.eps1, key.eps2, w, h)?,
        chaos::derive_key_matrix(&ys, key.eps1, key.eps2, w, h)?,
        chaos::derive_key_matrix(&zs, key.eps1, key.eps2, w, h)?,
    ];

    let hs = chaos::hybrid_sequence(&key.hybrid_params(), n)?;
    let hybrid_key = chaos::derive_key_matrix(&hs, key.eps1, key.eps2, w, h)?;

    Ok(CipherContext {
        width: w,
        height: h,
        bp_key,
        selector,
        key_matrices,
        hybrid_key,
        data_rules: key.data_rules(),
        key_rules: key.key_rules(),
        out_rules: key.out_rules(),
    })
}

impl CipherContext {
    /// The diffusion key `K_S` picked by the selector.
    pub fn selected_key(&self) -> &KeyMatrix {
        &self.key_matrices[self.selector]
    }

    fn check(&self, img: &GrayImage) -> Result<()> {
        if img.dimensions() != (self.width, self.height) {
            return Err(Error::DimensionMismatch {
                expected: (self.width, self.height),
                actual: img.dimensions(),
            });
        }
        Ok(())
    }

    fn hybrid_planes(&self) -> Result<dna::DnaPlanes> {
        dna::encode_bytes(self.width, self.height, self.hybrid_key.bytes(), &self.key_rules)
    }

    /// Stages before DNA confusion: scramble then XOR-diffuse.
    pub fn diffusion_stage(&self, img: &GrayImage) -> Result<GrayImage> {
        self.check(img)?;
        let scrambled = bitplane::reassemble(&bitplane::scramble(
            &bitplane::decompose(img),
            &self.bp_key,
        ));
        qsim::diffuse(&scrambled, self.selected_key())
    }

    pub fn encrypt(&self, img: &GrayImage) -> Result<GrayImage> {
        let diffused = self.diffusion_stage(img)?;
        let data = dna::encode(&diffused, &self.data_rules)?;
        let mixed = dna::xor_planes(&data, &self.hybrid_planes()?)?;
        dna::decode(&mixed, &self.out_rules)
    }

    pub fn decrypt(&self, cimg: &GrayImage) -> Result<GrayImage> {
        self.check(cimg)?;
        let mixed = dna::encode(cimg, &self.out_rules)?;
        let data = dna::xor_planes(&mixed, &self.hybrid_planes()?)?;
        let diffused = dna::decode(&data, &self.data_rules)?;
        let scrambled = qsim::diffuse(&diffused, self.selected_key())?;
        Ok(bitplane::reassemble(&bitplane::scramble(
            &bitplane::decompose(&scrambled),
            &self.bp_key.inverse(),
        )))
    }
}

pub fn encrypt(img: &GrayImage, key: &KeySet) -> Result<GrayImage> {
    derive_context(key, img.width(), img.height())?.encrypt(img)
}

pub fn decrypt(cimg: &GrayImage, key: &KeySet) -> Result<GrayImage> {
    derive_context(key, cimg.width(), cimg.height())?.decrypt(cimg)
}
