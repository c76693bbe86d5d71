mod error;
mod pgm;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qmedshield::analysis::{self, AnalysisReport};
use qmedshield::chaos::{self, ParamRange, QuantumLogisticParams};
use qmedshield::cipher::{self, KeySet};
use qmedshield::GrayImage;
use sha2::{Digest, Sha256};

use crate::error::CliError;

const DEFAULT_MAX_DIM: usize = 4096;

#[derive(Parser)]
#[command(name = "qmedshield", version, about = "Chaos-based grayscale image cipher")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ImageFormat {
    Pgm,
    Png,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MapKind {
    Henon,
    Hybrid,
    Qlogistic,
}

#[derive(clap::Args)]
struct ImageOpts {
    /// Image format; inferred from the file extension when omitted.
    #[arg(long, value_enum)]
    format: Option<ImageFormat>,
    /// Largest accepted width or height.
    #[arg(long, default_value_t = DEFAULT_MAX_DIM)]
    max_dim: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a key file and print its fingerprint.
    Keygen {
        #[arg(long)]
        out: PathBuf,
        /// 32 bytes of hex for a reproducible key.
        #[arg(long)]
        seed: Option<String>,
    },
    Encrypt {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        image: ImageOpts,
    },
    Decrypt {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        image: ImageOpts,
    },
    /// Run the full analysis battery on a plaintext and its ciphertext.
    Analyze {
        /// Plaintext image.
        #[arg(long = "in")]
        input: PathBuf,
        /// Ciphertext image; computed from the plaintext when omitted.
        #[arg(long)]
        cipher: Option<PathBuf>,
        #[arg(long)]
        key: PathBuf,
        /// Where to write the JSON report.
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        image: ImageOpts,
    },
    /// Known- and chosen-plaintext attack simulations plus key sensitivity.
    AttackSim {
        #[arg(long)]
        key: PathBuf,
        /// Seed for the random chosen plaintexts.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Emit bifurcation or phase-portrait data as CSV.
    ChaosPlot {
        #[arg(long, value_enum)]
        map: MapKind,
        /// `start:end[:steps]`. For `qlogistic` this sweeps eta; without it a
        /// phase portrait is written instead.
        #[arg(long)]
        range: Option<String>,
        /// Iterates kept per parameter value (or phase points).
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = chaos::HENON_DEFAULT_BETA)]
        beta: f64,
        #[arg(long, default_value_t = chaos::DEFAULT_BURN_IN)]
        burn_in: usize,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Keygen { out, seed } => keygen(&out, seed.as_deref()),
        Command::Encrypt {
            input,
            key,
            out,
            image,
        } => {
            let key = read_key(&key)?;
            let img = read_image(&input, &image)?;
            write_image(&out, &cipher::encrypt(&img, &key)?, &image)
        }
        Command::Decrypt {
            input,
            key,
            out,
            image,
        } => {
            let key = read_key(&key)?;
            let img = read_image(&input, &image)?;
            write_image(&out, &cipher::decrypt(&img, &key)?, &image)?;
            eprintln!(
                "warning: ciphertexts are not authenticated; a wrong key yields noise, not an error, \
                 so the output could not be verified"
            );
            Ok(())
        }
        Command::Analyze {
            input,
            cipher: cipher_path,
            key,
            report,
            image,
        } => {
            let key = read_key(&key)?;
            let plain = read_image(&input, &image)?;
            let cimg = match cipher_path {
                Some(p) => read_image(&p, &image)?,
                None => cipher::encrypt(&plain, &key)?,
            };
            let r = analysis::analyze(&plain, &cimg, &key)?;
            print_summary(&r);
            if let Some(path) = report {
                write_json(&path, &r)?;
            }
            Ok(())
        }
        Command::AttackSim { key, seed, report } => attack_sim(&read_key(&key)?, seed, report.as_deref()),
        Command::ChaosPlot {
            map,
            range,
            samples,
            beta,
            burn_in,
            out,
        } => {
            let csv = chaos_plot(map, range.as_deref(), samples, beta, burn_in)?;
            match out {
                Some(p) => fs::write(&p, csv).map_err(|e| CliError::io(&p, e)),
                None => {
                    print!("{csv}");
                    Ok(())
                }
            }
        }
    }
}

fn fingerprint(key: &KeySet) -> String {
    hex::encode(Sha256::digest(cipher::serialize_key(key).as_bytes()))
}

fn keygen(out: &Path, seed: Option<&str>) -> Result<(), CliError> {
    let key = match seed {
        Some(s) => {
            let bytes = hex::decode(s).map_err(|e| CliError::Usage(format!("--seed: {e}")))?;
            let seed: [u8; 32] = bytes
                .try_into()
                .map_err(|b: Vec<u8>| CliError::Usage(format!("--seed must be 32 bytes of hex, got {}", b.len())))?;
            cipher::keygen(seed)
        }
        None => cipher::keygen_random(),
    };
    fs::write(out, cipher::serialize_key(&key)).map_err(|e| CliError::io(out, e))?;
    println!("fingerprint: sha256:{}", fingerprint(&key));
    Ok(())
}

fn read_key(path: &Path) -> Result<KeySet, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    cipher::parse_key(&text).map_err(|e| CliError::Key(e.to_string()))
}

fn format_for(path: &Path, opts: &ImageOpts) -> ImageFormat {
    opts.format.unwrap_or_else(|| {
        match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase) {
            Some(ext) if ext == "png" => ImageFormat::Png,
            _ => ImageFormat::Pgm,
        }
    })
}

fn read_image(path: &Path, opts: &ImageOpts) -> Result<GrayImage, CliError> {
    let data = fs::read(path).map_err(|e| CliError::io(path, e))?;
    match format_for(path, opts) {
        ImageFormat::Pgm => pgm::decode(&data, opts.max_dim),
        ImageFormat::Png => png_io::decode(&data, opts.max_dim),
    }
}

fn write_image(path: &Path, img: &GrayImage, opts: &ImageOpts) -> Result<(), CliError> {
    let data = match format_for(path, opts) {
        ImageFormat::Pgm => pgm::encode(img),
        ImageFormat::Png => png_io::encode(img)?,
    };
    fs::write(path, data).map_err(|e| CliError::io(path, e))
}

#[cfg(feature = "png")]
mod png_io {
    use qmedshield::GrayImage;

    use crate::error::CliError;

    fn fmt(e: impl std::fmt::Display) -> CliError {
        CliError::Format(format!("PNG: {e}"))
    }

    pub fn decode(data: &[u8], max_dim: usize) -> Result<GrayImage, CliError> {
        let mut reader = png::Decoder::new(std::io::Cursor::new(data)).read_info().map_err(fmt)?;
        let (color, depth) = reader.output_color_type();
        if color != png::ColorType::Grayscale || depth != png::BitDepth::Eight {
            return Err(fmt(format!("expected 8-bit grayscale, got {color:?} {depth:?}")));
        }
        let info = reader.info();
        crate::pgm::check_dims(info.width as usize, info.height as usize, max_dim)?;
        let size = reader.output_buffer_size().ok_or_else(|| fmt("image too large"))?;
        let mut buf = vec![0; size];
        let frame = reader.next_frame(&mut buf).map_err(fmt)?;
        let (w, h) = (frame.width as usize, frame.height as usize);
        let stride = frame.line_size;
        let pixels = (0..h).flat_map(|y| buf[y * stride..y * stride + w].to_vec()).collect();
        GrayImage::new(w, h, pixels).map_err(fmt)
    }

    pub fn encode(img: &GrayImage) -> Result<Vec<u8>, CliError> {
        let mut out = Vec::new();
        let mut enc = png::Encoder::new(&mut out, img.width() as u32, img.height() as u32);
        enc.set_color(png::ColorType::Grayscale);
        enc.set_depth(png::BitDepth::Eight);
        let mut writer = enc.write_header().map_err(fmt)?;
        writer.write_image_data(img.pixels()).map_err(fmt)?;
        writer.finish().map_err(fmt)?;
        Ok(out)
    }
}

#[cfg(not(feature = "png"))]
mod png_io {
    use qmedshield::GrayImage;

    use crate::error::CliError;

    fn unsupported() -> CliError {
        CliError::Format("PNG support is not compiled in (enable the `png` feature)".into())
    }

    pub fn decode(_: &[u8], _: usize) -> Result<GrayImage, CliError> {
        Err(unsupported())
    }

    pub fn encode(_: &GrayImage) -> Result<Vec<u8>, CliError> {
        Err(unsupported())
    }
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("report types serialise");
    fs::write(path, text + "\n").map_err(|e| CliError::io(path, e))
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".into(), |v| format!("{v:+.5}"))
}

fn print_summary(r: &AnalysisReport) {
    let corr = r.correlation.cipher.max_abs();
    let rows = [
        (
            "chi-square".to_string(),
            format!("{:.2} (critical {})", r.chi_square.statistic, r.chi_square.critical_value),
            r.chi_square.pass,
        ),
        (
            "correlation (cipher)".into(),
            format!(
                "h {} v {} d {}",
                opt(r.correlation.cipher.horizontal),
                opt(r.correlation.cipher.vertical),
                opt(r.correlation.cipher.diagonal)
            ),
            corr.is_some_and(|c| c < 0.05),
        ),
        (
            "one-pixel NPCR / UACI".into(),
            format!("{:.4}% / {:.4}%", r.differential.npcr, r.differential.uaci),
            r.differential.npcr > 99.0,
        ),
        ("entropy (cipher)".into(), format!("{:.5}", r.entropy.cipher), r.entropy.cipher > 7.99),
        (
            "MAE / PSNR".into(),
            format!("{:.3} / {:.3} dB", r.error_metrics.mae, r.error_metrics.psnr),
            (120.0..=135.0).contains(&r.error_metrics.mae) && (7.0..=9.0).contains(&r.error_metrics.psnr),
        ),
        (
            "known plaintext".into(),
            format!(
                "H {:.4}/{:.4}, chi2 {:.1}/{:.1}",
                r.known_plaintext.black_entropy,
                r.known_plaintext.white_entropy,
                r.known_plaintext.black_chi_square,
                r.known_plaintext.white_chi_square
            ),
            r.known_plaintext.pass,
        ),
        (
            "chosen plaintext".into(),
            format!("violations {:.4}", r.chosen_plaintext.violation_fraction),
            r.chosen_plaintext.pass(),
        ),
        (
            "key sensitivity".into(),
            format!("NPCR {:.4}%", r.key_sensitivity.npcr),
            r.key_sensitivity.pass,
        ),
    ];
    println!("{:<24} {:<44} result", "metric", "value");
    for (name, value, pass) in rows {
        println!("{name:<24} {value:<44} {}", verdict(pass));
    }
    if r.chi_square.low_count_warning {
        println!("note: fewer than 256 pixels; chi-square is unreliable");
    }
}

#[derive(serde::Serialize)]
struct AttackReport {
    known_plaintext: analysis::KnownPlaintextReport,
    chosen_plaintext: analysis::ChosenPlaintextReport,
    key_sensitivity_npcr: f64,
}

fn attack_sim(key: &KeySet, seed: u64, report: Option<&Path>) -> Result<(), CliError> {
    let n = analysis::KP_IMAGE_SIZE;
    // A small LCG keeps the chosen plaintexts reproducible from `seed`.
    let mut state = seed;
    let mut next = move || {
        state = state.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1_442_695_040_888_963_407);
        (state >> 56) as u8
    };
    let m1 = GrayImage::new(n, n, (0..n * n).map(|_| next()).collect())?;
    let m2 = GrayImage::new(n, n, (0..n * n).map(|_| next()).collect())?;

    let r = AttackReport {
        known_plaintext: analysis::kp_attack_test(key)?,
        chosen_plaintext: analysis::cp_attack_test(&m1, &m2, key)?,
        key_sensitivity_npcr: analysis::key_sensitivity_test(
            &m1,
            key,
            analysis::DEFAULT_SENSITIVITY_PERTURBATION,
        )?,
    };
    let kp = &r.known_plaintext;
    println!(
        "known plaintext   black H {:.4} chi2 {:.1}, white H {:.4} chi2 {:.1}  {}",
        kp.black_entropy,
        kp.black_chi_square,
        kp.white_entropy,
        kp.white_chi_square,
        verdict(kp.pass)
    );
    println!(
        "chosen plaintext  violation fraction {:.4}  {}",
        r.chosen_plaintext.violation_fraction,
        verdict(r.chosen_plaintext.pass())
    );
    println!(
        "key sensitivity   NPCR {:.4}%  {}",
        r.key_sensitivity_npcr,
        verdict(r.key_sensitivity_npcr > 99.0)
    );
    if let Some(path) = report {
        write_json(path, &r)?;
    }
    Ok(())
}

fn parse_range(s: &str) -> Result<ParamRange, CliError> {
    let bad = || CliError::Usage(format!("--range: expected start:end[:steps], got {s:?}"));
    let parts: Vec<&str> = s.split(':').collect();
    if !(2..=3).contains(&parts.len()) {
        return Err(bad());
    }
    let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let end: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let steps: usize = match parts.get(2) {
        Some(p) => p.trim().parse().map_err(|_| bad())?,
        None => 200,
    };
    Ok(ParamRange::new(start, end, steps)?)
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn chaos_plot(
    map: MapKind,
    range: Option<&str>,
    samples: Option<usize>,
    beta: f64,
    burn_in: usize,
) -> Result<String, CliError> {
    let range = range.map(parse_range).transpose()?;
    let mut csv = String::new();
    let mut rows = |header: &str, data: Vec<(f64, f64)>| {
        csv.push_str(header);
        csv.push('\n');
        for (p, x) in data {
            csv.push_str(&format!("{},{}\n", num(p), num(x)));
        }
    };
    match (map, range) {
        (MapKind::Henon, Some(r)) => rows(
            "alpha,x",
            chaos::henon_bifurcation(&r, beta, samples.unwrap_or(100), burn_in)?,
        ),
        (MapKind::Hybrid, Some(r)) => rows("r,x", chaos::hybrid_bifurcation(&r, samples.unwrap_or(100), burn_in)?),
        (MapKind::Qlogistic, Some(r)) => {
            let mut data = Vec::new();
            for eta in r.values() {
                let p = QuantumLogisticParams {
                    eta,
                    burn_in,
                    ..QuantumLogisticParams::new(0.5, 0.05, 0.02)
                };
                let seq = chaos::quantum_logistic_sequence(&p, samples.unwrap_or(100))?;
                data.extend(seq.into_iter().map(|(x, _, _)| (eta, x)));
            }
            rows("eta,x", data)
        }
        (MapKind::Qlogistic, None) => {
            let p = QuantumLogisticParams {
                burn_in,
                ..QuantumLogisticParams::new(0.5, 0.05, 0.02)
            };
            csv.push_str("x,y,z\n");
            for (x, y, z) in chaos::quantum_logistic_sequence(&p, samples.unwrap_or(5000))? {
                csv.push_str(&format!("{},{},{}\n", num(x), num(y), num(z)));
            }
        }
        (_, None) => return Err(CliError::Usage("--range is required for bifurcation sweeps".into())),
    }
    Ok(csv)
}
