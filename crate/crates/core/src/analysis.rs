//! Security metrics for plaintext/ciphertext pairs and attack simulations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cipher::{self, KeySet};
use crate::error::{Error, Result};
use crate::GrayImage;

/// Critical value of chi-square with 255 degrees of freedom at 0.05.
pub const CHI_SQUARE_CRITICAL: f64 = 293.0;
/// Fraction of pixels on which the chosen-plaintext equality must fail.
pub const CP_VIOLATION_THRESHOLD: f64 = 0.99;
/// Entropy floor for ciphertexts of constant images.
pub const KP_ENTROPY_THRESHOLD: f64 = 7.9;
pub const KP_IMAGE_SIZE: usize = 256;

pub fn histogram(img: &GrayImage) -> [u64; 256] {
    let mut h = [0u64; 256];
    for &p in img.pixels() {
        h[p as usize] += 1;
    }
    h
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub critical_value: f64,
    pub pass: bool,
    /// Set when the image has fewer pixels than histogram bins.
    pub low_count_warning: bool,
}

pub fn chi_square(img: &GrayImage) -> ChiSquare {
    let n = img.len() as f64;
    let expected = n / 256.0;
    let statistic = histogram(img)
        .iter()
        .map(|&o| {
            let d = o as f64 - expected;
            d * d / expected
        })
        .sum::<f64>();
    ChiSquare {
        statistic,
        critical_value: CHI_SQUARE_CRITICAL,
        pass: statistic < CHI_SQUARE_CRITICAL,
        low_count_warning: img.len() < 256,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Horizontal,
    Vertical,
    Diagonal,
}

impl Direction {
    pub const ALL: [Direction; 3] = [Direction::Horizontal, Direction::Vertical, Direction::Diagonal];

    fn offset(self) -> (usize, usize) {
        match self {
            Direction::Horizontal => (1, 0),
            Direction::Vertical => (0, 1),
            Direction::Diagonal => (1, 1),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Direction::Horizontal => "horizontal",
            Direction::Vertical => "vertical",
            Direction::Diagonal => "diagonal",
        }
    }
}

/// How the covariance is normalised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// `cov / sqrt(D(x) D(y))`, the Pearson coefficient.
    #[default]
    Standard,
    /// `cov / (D(x) D(y))`, dividing by the product of the variances.
    ProductOfVariances,
}

/// Adjacent-pixel pairs along `dir`, every pair in the image.
pub fn adjacent_pairs(img: &GrayImage, dir: Direction) -> Vec<(u8, u8)> {
    let (dx, dy) = dir.offset();
    let (w, h) = img.dimensions();
    let mut pairs = Vec::with_capacity(w.saturating_sub(dx) * h.saturating_sub(dy));
    for y in 0..h.saturating_sub(dy) {
        for x in 0..w.saturating_sub(dx) {
            pairs.push((img.get(x, y), img.get(x + dx, y + dy)));
        }
    }
    pairs
}

pub fn correlation(img: &GrayImage, dir: Direction) -> Result<f64> {
    correlation_with(img, dir, Normalization::Standard)
}

pub fn correlation_with(img: &GrayImage, dir: Direction, norm: Normalization) -> Result<f64> {
    let pairs = adjacent_pairs(img, dir);
    if pairs.is_empty() {
        return Err(Error::InvalidImage(format!(
            "{}x{} image has no {} neighbours",
            img.width(),
            img.height(),
            dir.name()
        )));
    }
    let m = pairs.len() as f64;
    let mean_x = pairs.iter().map(|p| p.0 as f64).sum::<f64>() / m;
    let mean_y = pairs.iter().map(|p| p.1 as f64).sum::<f64>() / m;
    let (mut dxx, mut dyy, mut cov) = (0.0, 0.0, 0.0);
    for &(a, b) in &pairs {
        let (u, v) = (a as f64 - mean_x, b as f64 - mean_y);
        dxx += u * u;
        dyy += v * v;
        cov += u * v;
    }
    let (dxx, dyy, cov) = (dxx / m, dyy / m, cov / m);
    if dxx == 0.0 || dyy == 0.0 {
        return Err(Error::ZeroVariance(dir.name()));
    }
    Ok(match norm {
        Normalization::Standard => cov / (dxx * dyy).sqrt(),
        Normalization::ProductOfVariances => cov / (dxx * dyy),
    })
}

/// Percentage of positions where the two images differ.
pub fn npcr(c1: &GrayImage, c2: &GrayImage) -> Result<f64> {
    c1.ensure_same_dims(c2)?;
    let differ = c1
        .pixels()
        .iter()
        .zip(c2.pixels())
        .filter(|(a, b)| a != b)
        .count();
    Ok(100.0 * differ as f64 / c1.len() as f64)
}

/// Mean absolute intensity difference as a percentage of 255.
pub fn uaci(c1: &GrayImage, c2: &GrayImage) -> Result<f64> {
    c1.ensure_same_dims(c2)?;
    let total: u64 = c1
        .pixels()
        .iter()
        .zip(c2.pixels())
        .map(|(&a, &b)| a.abs_diff(b) as u64)
        .sum();
    Ok(100.0 * total as f64 / (255.0 * c1.len() as f64))
}

/// Shannon entropy in bits over the 256-bin histogram.
pub fn entropy(img: &GrayImage) -> f64 {
    let n = img.len() as f64;
    histogram(img)
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorMetrics {
    pub mae: f64,
    pub mse: f64,
    pub rmse: f64,
    /// `+inf` when the images are identical; serialised as the string `"inf"`.
    #[serde(with = "finite_or_inf")]
    pub psnr: f64,
}

pub fn error_metrics(plain: &GrayImage, cipher: &GrayImage) -> Result<ErrorMetrics> {
    plain.ensure_same_dims(cipher)?;
    let n = plain.len() as f64;
    let (mut abs, mut sq) = (0u64, 0u64);
    for (&a, &b) in plain.pixels().iter().zip(cipher.pixels()) {
        let d = a.abs_diff(b) as u64;
        abs += d;
        sq += d * d;
    }
    let mae = abs as f64 / n;
    let mse = sq as f64 / n;
    let psnr = if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (255.0f64 * 255.0 / mse).log10()
    };
    Ok(ErrorMetrics {
        mae,
        mse,
        rmse: mse.sqrt(),
        psnr,
    })
}

/// Fraction of bits that differ between two equally sized images.
pub fn bit_change_fraction(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    a.ensure_same_dims(b)?;
    let bits: u32 = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(x, y)| (x ^ y).count_ones())
        .sum();
    Ok(bits as f64 / (8.0 * a.len() as f64))
}

mod finite_or_inf {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() && *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) if t == "inf" => Ok(f64::INFINITY),
            Repr::Text(t) => Err(serde::de::Error::custom(format!("bad psnr `{t}`"))),
        }
    }
}

// ---------------------------------------------------------------------------
// Attack simulations
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KnownPlaintextReport {
    pub pass: bool,
    pub black_entropy: f64,
    pub white_entropy: f64,
    pub black_chi_square: f64,
    pub white_chi_square: f64,
}

/// Encrypts all-black and all-white images with `encrypt_fn` and checks the
/// ciphertexts look uniform.
pub fn kp_attack_test_with<F>(mut encrypt_fn: F) -> Result<KnownPlaintextReport>
where
    F: FnMut(&GrayImage) -> Result<GrayImage>,
{
    let black = encrypt_fn(&GrayImage::filled(KP_IMAGE_SIZE, KP_IMAGE_SIZE, 0)?)?;
    let white = encrypt_fn(&GrayImage::filled(KP_IMAGE_SIZE, KP_IMAGE_SIZE, 255)?)?;
    let (be, we) = (entropy(&black), entropy(&white));
    let (bc, wc) = (chi_square(&black), chi_square(&white));
    Ok(KnownPlaintextReport {
        pass: be > KP_ENTROPY_THRESHOLD && we > KP_ENTROPY_THRESHOLD && bc.pass && wc.pass,
        black_entropy: be,
        white_entropy: we,
        black_chi_square: bc.statistic,
        white_chi_square: wc.statistic,
    })
}

pub fn kp_attack_test(key: &KeySet) -> Result<KnownPlaintextReport> {
    let ctx = cipher::derive_context(key, KP_IMAGE_SIZE, KP_IMAGE_SIZE)?;
    kp_attack_test_with(|img| ctx.encrypt(img))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CpOutcome {
    /// The XOR relation fails on at least 99% of pixels.
    Resists,
    /// The XOR relation holds on more than 1% of pixels.
    Vulnerable,
    /// The two plaintexts are identical, so the relation holds trivially.
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChosenPlaintextReport {
    pub outcome: CpOutcome,
    /// Fraction of pixels where `m1 ^ m2 != c1 ^ c2`.
    pub violation_fraction: f64,
}

impl ChosenPlaintextReport {
    pub fn pass(&self) -> bool {
        self.outcome == CpOutcome::Resists
    }
}

pub fn cp_attack_test_with<F>(
    m1: &GrayImage,
    m2: &GrayImage,
    mut encrypt_fn: F,
) -> Result<ChosenPlaintextReport>
where
    F: FnMut(&GrayImage) -> Result<GrayImage>,
{
    m1.ensure_same_dims(m2)?;
    let c1 = encrypt_fn(m1)?;
    let c2 = encrypt_fn(m2)?;
    let violations = m1
        .pixels()
        .iter()
        .zip(m2.pixels())
        .zip(c1.pixels().iter().zip(c2.pixels()))
        .filter(|((a, b), (c, d))| (*a ^ *b) != (*c ^ *d))
        .count();
    let violation_fraction = violations as f64 / m1.len() as f64;
    let outcome = if m1 == m2 {
        CpOutcome::Degenerate
    } else if violation_fraction >= CP_VIOLATION_THRESHOLD {
        CpOutcome::Resists
    } else {
        CpOutcome::Vulnerable
    };
    Ok(ChosenPlaintextReport {
        outcome,
        violation_fraction,
    })
}

pub fn cp_attack_test(m1: &GrayImage, m2: &GrayImage, key: &KeySet) -> Result<ChosenPlaintextReport> {
    m1.ensure_same_dims(m2)?;
    let ctx = cipher::derive_context(key, m1.width(), m1.height())?;
    cp_attack_test_with(m1, m2, |img| ctx.encrypt(img))
}

/// Encrypts `img`, decrypts it with the correct key and with a key whose
/// quantum logistic `y0` is shifted by `perturbation`, and returns the NPCR
/// between the two decryptions.
pub fn key_sensitivity_test(img: &GrayImage, key: &KeySet, perturbation: f64) -> Result<f64> {
    let cipher_img = cipher::encrypt(img, key)?;
    let right = cipher::decrypt(&cipher_img, key)?;
    let wrong_key = key.with_qlog_y0(key.qlog_params().y0 + perturbation)?;
    let wrong = cipher::decrypt(&cipher_img, &wrong_key)?;
    npcr(&right, &wrong)
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Directional {
    pub horizontal: Option<f64>,
    pub vertical: Option<f64>,
    pub diagonal: Option<f64>,
}

impl Directional {
    /// Correlation in all three directions; `None` where undefined.
    pub fn of(img: &GrayImage) -> Self {
        let c = |d| correlation(img, d).ok();
        Self {
            horizontal: c(Direction::Horizontal),
            vertical: c(Direction::Vertical),
            diagonal: c(Direction::Diagonal),
        }
    }

    pub fn max_abs(&self) -> Option<f64> {
        [self.horizontal, self.vertical, self.diagonal]
            .into_iter()
            .collect::<Option<Vec<f64>>>()
            .map(|v| v.into_iter().map(f64::abs).fold(0.0, f64::max))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub plain: Directional,
    pub cipher: Directional,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DifferentialReport {
    /// Pixel `(x, y)` whose value was incremented in the second plaintext.
    pub changed_pixel: (usize, usize),
    /// Between the ciphertexts of the original and one-pixel-changed plaintexts.
    pub npcr: f64,
    pub uaci: f64,
    /// Between the plaintext and its ciphertext.
    pub plain_cipher_npcr: f64,
    pub plain_cipher_uaci: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub plain: f64,
    pub cipher: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KeySensitivityReport {
    pub perturbation: f64,
    pub npcr: f64,
    pub pass: bool,
}

pub const REPORT_SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SENSITIVITY_PERTURBATION: f64 = -0.045;
const CP_PARTNER_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub width: usize,
    pub height: usize,
    /// Histogram of the ciphertext.
    pub histogram: Vec<u64>,
    pub chi_square: ChiSquare,
    pub correlation: CorrelationReport,
    pub differential: DifferentialReport,
    pub entropy: EntropyReport,
    pub error_metrics: ErrorMetrics,
    pub known_plaintext: KnownPlaintextReport,
    pub chosen_plaintext: ChosenPlaintextReport,
    pub key_sensitivity: KeySensitivityReport,
}

/// Runs the whole battery. `cipher_img` is normally `encrypt(plain, key)`.
pub fn analyze(plain: &GrayImage, cipher_img: &GrayImage, key: &KeySet) -> Result<AnalysisReport> {
    plain.ensure_same_dims(cipher_img)?;
    let (w, h) = plain.dimensions();
    let ctx = cipher::derive_context(key, w, h)?;

    let changed_pixel = (w / 2, h / 2);
    let mut tweaked = plain.clone();
    let old = tweaked.get(changed_pixel.0, changed_pixel.1);
    tweaked.set(changed_pixel.0, changed_pixel.1, old.wrapping_add(1));
    let c_plain = ctx.encrypt(plain)?;
    let c_tweaked = ctx.encrypt(&tweaked)?;

    let differential = DifferentialReport {
        changed_pixel,
        npcr: npcr(&c_plain, &c_tweaked)?,
        uaci: uaci(&c_plain, &c_tweaked)?,
        plain_cipher_npcr: npcr(plain, cipher_img)?,
        plain_cipher_uaci: uaci(plain, cipher_img)?,
    };

    // Chosen-plaintext pair: the plaintext and a fixed pseudo-random image.
    // A complement would be a poor probe: 0xff is fixed by every bit-plane
    // permutation.
    let mut rng = ChaCha8Rng::seed_from_u64(CP_PARTNER_SEED);
    let partner = GrayImage::new(w, h, (0..w * h).map(|_| rng.gen()).collect())?;
    let chosen_plaintext = cp_attack_test_with(plain, &partner, |img| ctx.encrypt(img))?;

    let sens = key_sensitivity_test(plain, key, DEFAULT_SENSITIVITY_PERTURBATION)?;

    Ok(AnalysisReport {
        schema_version: REPORT_SCHEMA_VERSION,
        width: w,
        height: h,
        histogram: histogram(cipher_img).to_vec(),
        chi_square: chi_square(cipher_img),
        correlation: CorrelationReport {
            plain: Directional::of(plain),
            cipher: Directional::of(cipher_img),
        },
        differential,
        entropy: EntropyReport {
            plain: entropy(plain),
            cipher: entropy(cipher_img),
        },
        error_metrics: error_metrics(plain, cipher_img)?,
        known_plaintext: kp_attack_test(key)?,
        chosen_plaintext,
        key_sensitivity: KeySensitivityReport {
            perturbation: DEFAULT_SENSITIVITY_PERTURBATION,
            npcr: sens,
            pass: sens > 99.0,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{seq::SliceRandom, Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_image(rng: &mut ChaCha8Rng, w: usize, h: usize) -> GrayImage {
        GrayImage::new(w, h, (0..w * h).map(|_| rng.gen()).collect()).unwrap()
    }

    #[test]
    fn chi_square_uniform_and_constant() {
        let uniform = GrayImage::from_fn(256, 4, |x, _| x as u8).unwrap();
        let c = chi_square(&uniform);
        assert_eq!(c.statistic, 0.0);
        assert!(c.pass && !c.low_count_warning);

        // Constant 256x256: one bin holds 65536, expected 256 per bin.
        let constant = GrayImage::filled(256, 256, 9).unwrap();
        let expected = (65536.0f64 - 256.0).powi(2) / 256.0 + 255.0 * 256.0 * 256.0 / 256.0;
        assert_eq!(expected, 16_711_680.0);
        let c = chi_square(&constant);
        assert_eq!(c.statistic, expected);
        assert!(!c.pass);

        assert!(chi_square(&GrayImage::filled(8, 8, 0).unwrap()).low_count_warning);
    }

    #[test]
    fn chi_square_zero_iff_uniform() {
        let mut img = GrayImage::from_fn(256, 2, |x, _| x as u8).unwrap();
        img.set(0, 0, 1);
        assert!(chi_square(&img).statistic > 0.0);
    }

    #[test]
    fn correlation_examples() {
        let ramp = GrayImage::from_fn(64, 8, |x, _| x as u8).unwrap();
        assert!((correlation(&ramp, Direction::Horizontal).unwrap() - 1.0).abs() < 1e-12);
        // Identical rows: every vertical pair is (v, v).
        assert!((correlation(&ramp, Direction::Vertical).unwrap() - 1.0).abs() < 1e-12);
        let flat = GrayImage::filled(8, 8, 3).unwrap();
        assert_eq!(
            correlation(&flat, Direction::Diagonal),
            Err(Error::ZeroVariance("diagonal"))
        );
        let row = GrayImage::from_fn(8, 1, |x, _| x as u8).unwrap();
        assert!(matches!(correlation(&row, Direction::Vertical), Err(Error::InvalidImage(_))));
    }

    #[test]
    fn correlation_affine_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let img = GrayImage::new(16, 16, (0..256).map(|_| rng.gen_range(0..100)).collect()).unwrap();
        let moved = GrayImage::new(16, 16, img.pixels().iter().map(|&p| 2 * p + 17).collect()).unwrap();
        for d in Direction::ALL {
            let a = correlation(&img, d).unwrap();
            let b = correlation(&moved, d).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn product_normalisation_differs() {
        let ramp = GrayImage::from_fn(16, 16, |x, y| (x * 3 + y) as u8).unwrap();
        let std = correlation(&ramp, Direction::Horizontal).unwrap();
        let lit = correlation_with(&ramp, Direction::Horizontal, Normalization::ProductOfVariances).unwrap();
        assert!(std <= 1.0 && lit.abs() < std.abs());
    }

    #[test]
    fn npcr_uaci_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_image(&mut rng, 16, 16);
        assert_eq!(npcr(&a, &a).unwrap(), 0.0);
        assert_eq!(uaci(&a, &a).unwrap(), 0.0);
        let comp = GrayImage::new(16, 16, a.pixels().iter().map(|p| !p).collect()).unwrap();
        assert_eq!(npcr(&a, &comp).unwrap(), 100.0);
        let black = GrayImage::filled(4, 4, 0).unwrap();
        let white = GrayImage::filled(4, 4, 255).unwrap();
        assert_eq!(uaci(&black, &white).unwrap(), 100.0);
        let b = random_image(&mut rng, 16, 16);
        assert_eq!(npcr(&a, &b).unwrap(), npcr(&b, &a).unwrap());
        assert_eq!(uaci(&a, &b).unwrap(), uaci(&b, &a).unwrap());
        assert!(npcr(&a, &GrayImage::filled(4, 4, 0).unwrap()).is_err());
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&GrayImage::filled(10, 10, 7).unwrap()), 0.0);
        let uniform = GrayImage::from_fn(256, 3, |x, _| x as u8).unwrap();
        assert!((entropy(&uniform) - 8.0).abs() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let img = random_image(&mut rng, 20, 20);
        let mut px = img.pixels().to_vec();
        px.shuffle(&mut rng);
        let shuffled = GrayImage::new(20, 20, px).unwrap();
        assert!((entropy(&img) - entropy(&shuffled)).abs() < 1e-12);
    }

    #[test]
    fn error_metric_examples() {
        let a = GrayImage::filled(8, 8, 40).unwrap();
        let m = error_metrics(&a, &a).unwrap();
        assert_eq!((m.mae, m.rmse), (0.0, 0.0));
        assert!(m.psnr.is_infinite());

        let black = GrayImage::filled(8, 8, 0).unwrap();
        let white = GrayImage::filled(8, 8, 255).unwrap();
        let m = error_metrics(&black, &white).unwrap();
        assert_eq!(m.mae, 255.0);
        assert_eq!(m.rmse, 255.0);
        assert!(m.psnr.abs() < 1e-12);
    }

    #[test]
    fn psnr_sentinel_serialises() {
        let m = ErrorMetrics {
            mae: 0.0,
            mse: 0.0,
            rmse: 0.0,
            psnr: f64::INFINITY,
        };
        let json = serde_json::to_string(&m).unwrap();
        assert!(json.contains("\"psnr\":\"inf\""));
        let back: ErrorMetrics = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn kp_identity_cipher_fails() {
        let r = kp_attack_test_with(|img| Ok(img.clone())).unwrap();
        assert!(!r.pass);
        assert_eq!(r.black_entropy, 0.0);
        assert_eq!(r.white_entropy, 0.0);
    }

    #[test]
    fn cp_degenerate_and_xor_cipher() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m1 = random_image(&mut rng, 32, 32);
        let m2 = random_image(&mut rng, 32, 32);
        let mask: Vec<u8> = (0..1024).map(|_| rng.gen()).collect();
        let xor = |img: &GrayImage| {
            GrayImage::new(32, 32, img.pixels().iter().zip(&mask).map(|(a, b)| a ^ b).collect())
        };
        let same = cp_attack_test_with(&m1, &m1, xor).unwrap();
        assert_eq!(same.outcome, CpOutcome::Degenerate);
        let r = cp_attack_test_with(&m1, &m2, xor).unwrap();
        assert_eq!(r.outcome, CpOutcome::Vulnerable);
        assert_eq!(r.violation_fraction, 0.0);
        assert!(!r.pass());
    }

    #[test]
    fn key_sensitivity_zero_perturbation() {
        let key = cipher::keygen([3; 32]);
        let img = GrayImage::from_fn(32, 32, |x, y| (x * y) as u8).unwrap();
        assert_eq!(key_sensitivity_test(&img, &key, 0.0).unwrap(), 0.0);
    }
}
