use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const SEED: &str = "0707070707070707070707070707070707070707070707070707070707070707";

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmedshield"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn pgm(w: usize, h: usize) -> Vec<u8> {
    let mut data = format!("P5\n{w} {h}\n255\n").into_bytes();
    data.extend((0..w * h).map(|i| ((i % w) * 3 + (i / w) * 5) as u8));
    data
}

fn setup() -> (TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_path_buf();
    fs::write(path.join("plain.pgm"), pgm(40, 30)).unwrap();
    assert_eq!(code(&run(&path, &["keygen", "--out", "k.key", "--seed", SEED])), 0);
    (dir, path)
}

#[test]
fn keygen_seeded_is_reproducible_and_random_is_not() {
    let (_t, d) = setup();
    let a = run(&d, &["keygen", "--out", "a.key", "--seed", SEED]);
    assert_eq!(code(&a), 0);
    assert!(stdout(&a).starts_with("fingerprint: sha256:"));
    assert_eq!(fs::read(d.join("a.key")).unwrap(), fs::read(d.join("k.key")).unwrap());

    run(&d, &["keygen", "--out", "r1.key"]);
    run(&d, &["keygen", "--out", "r2.key"]);
    assert_ne!(fs::read(d.join("r1.key")).unwrap(), fs::read(d.join("r2.key")).unwrap());
}

#[test]
fn keygen_fingerprint_is_sha256_of_file() {
    use sha2::{Digest, Sha256};
    let (_t, d) = setup();
    let out = run(&d, &["keygen", "--out", "a.key", "--seed", SEED]);
    let digest = hex::encode(Sha256::digest(fs::read(d.join("a.key")).unwrap()));
    assert_eq!(stdout(&out).trim(), format!("fingerprint: sha256:{digest}"));
}

#[test]
fn keyfile_parses() {
    let (_t, d) = setup();
    let text = fs::read_to_string(d.join("k.key")).unwrap();
    qmedshield::cipher::parse_key(&text).unwrap();
}

#[test]
fn encrypt_decrypt_round_trip() {
    let (_t, d) = setup();
    assert_eq!(code(&run(&d, &["encrypt", "--in", "plain.pgm", "--key", "k.key", "--out", "c.pgm"])), 0);
    assert_ne!(fs::read(d.join("c.pgm")).unwrap(), fs::read(d.join("plain.pgm")).unwrap());
    let dec = run(&d, &["decrypt", "--in", "c.pgm", "--key", "k.key", "--out", "p.pgm"]);
    assert_eq!(code(&dec), 0);
    assert_eq!(fs::read(d.join("p.pgm")).unwrap(), fs::read(d.join("plain.pgm")).unwrap());
}

#[test]
fn wrong_key_writes_output_with_warning() {
    let (_t, d) = setup();
    run(&d, &["keygen", "--out", "other.key"]);
    run(&d, &["encrypt", "--in", "plain.pgm", "--key", "k.key", "--out", "c.pgm"]);
    let out = run(&d, &["decrypt", "--in", "c.pgm", "--key", "other.key", "--out", "p.pgm"]);
    assert_eq!(code(&out), 0);
    assert!(stderr(&out).contains("warning"));
    assert_ne!(fs::read(d.join("p.pgm")).unwrap(), fs::read(d.join("plain.pgm")).unwrap());
}

#[test]
fn exit_codes() {
    let (_t, d) = setup();
    assert_eq!(code(&run(&d, &["frobnicate"])), 2);
    assert_eq!(code(&run(&d, &["encrypt", "--in", "plain.pgm"])), 2);
    assert_eq!(code(&run(&d, &["--help"])), 0);

    let missing = run(&d, &["encrypt", "--in", "nope.pgm", "--key", "k.key", "--out", "c.pgm"]);
    assert_eq!(code(&missing), 3);

    fs::write(d.join("bad.key"), "version = 1\nk1 = 0.5\n").unwrap();
    let bad_key = run(&d, &["encrypt", "--in", "plain.pgm", "--key", "bad.key", "--out", "c.pgm"]);
    assert_eq!(code(&bad_key), 4);

    let mut sixteen = b"P5\n1 1\n65535\n".to_vec();
    sixteen.extend_from_slice(&[1, 2]);
    fs::write(d.join("wide.pgm"), sixteen).unwrap();
    let wide = run(&d, &["encrypt", "--in", "wide.pgm", "--key", "k.key", "--out", "c.pgm"]);
    assert_eq!(code(&wide), 5);
    assert!(stderr(&wide).contains("8-bit"));
}

#[test]
fn size_limit() {
    let (_t, d) = setup();
    let out = run(
        &d,
        &["encrypt", "--in", "plain.pgm", "--key", "k.key", "--out", "c.pgm", "--max-dim", "32"],
    );
    assert_eq!(code(&out), 5);
}

#[cfg(not(feature = "png"))]
#[test]
fn png_without_feature_is_format_error() {
    let (_t, d) = setup();
    let out = run(&d, &["encrypt", "--in", "plain.pgm", "--key", "k.key", "--out", "c.png"]);
    assert_eq!(code(&out), 5);
}

#[cfg(feature = "png")]
#[test]
fn png_round_trip() {
    let (_t, d) = setup();
    run(&d, &["encrypt", "--in", "plain.pgm", "--key", "k.key", "--out", "c.png"]);
    run(&d, &["decrypt", "--in", "c.png", "--key", "k.key", "--out", "p.pgm"]);
    assert_eq!(fs::read(d.join("p.pgm")).unwrap(), fs::read(d.join("plain.pgm")).unwrap());
}

#[test]
fn analyze_writes_report() {
    let (_t, d) = setup();
    let out = run(&d, &["analyze", "--in", "plain.pgm", "--key", "k.key", "--report", "r.json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("chi-square"));
    let v: serde_json::Value = serde_json::from_slice(&fs::read(d.join("r.json")).unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["width"], 40);
    assert_eq!(v["histogram"].as_array().unwrap().len(), 256);
    let chi = &v["chi_square"];
    assert_eq!(chi["pass"].as_bool().unwrap(), chi["statistic"].as_f64().unwrap() < 293.0);
    for field in ["correlation", "differential", "entropy", "error_metrics", "known_plaintext", "chosen_plaintext", "key_sensitivity"] {
        assert!(v.get(field).is_some(), "missing {field}");
    }
}

#[test]
fn analyze_accepts_explicit_cipher() {
    let (_t, d) = setup();
    run(&d, &["encrypt", "--in", "plain.pgm", "--key", "k.key", "--out", "c.pgm"]);
    let out = run(&d, &["analyze", "--in", "plain.pgm", "--cipher", "c.pgm", "--key", "k.key", "--report", "r.json"]);
    assert_eq!(code(&out), 0);
    fs::write(d.join("small.pgm"), pgm(4, 4)).unwrap();
    let mismatch = run(&d, &["analyze", "--in", "plain.pgm", "--cipher", "small.pgm", "--key", "k.key"]);
    assert_eq!(code(&mismatch), 5);
}

#[test]
fn attack_sim_runs() {
    let (_t, d) = setup();
    let out = run(&d, &["attack-sim", "--key", "k.key", "--seed", "3", "--report", "a.json"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("known plaintext"));
    let v: serde_json::Value = serde_json::from_slice(&fs::read(d.join("a.json")).unwrap()).unwrap();
    assert!(v["key_sensitivity_npcr"].as_f64().unwrap() > 99.0);
}

fn csv_rows(text: &str) -> (String, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn chaos_plot_henon() {
    let (_t, d) = setup();
    let out = run(&d, &["chaos-plot", "--map", "henon", "--range", "1.0:1.4:5", "--samples", "10", "--out", "h.csv"]);
    assert_eq!(code(&out), 0);
    let (header, rows) = csv_rows(&fs::read_to_string(d.join("h.csv")).unwrap());
    assert_eq!(header, "alpha,x");
    assert_eq!(rows.len(), 50);
    assert!(rows.iter().all(|r| (1.0..=1.4).contains(&r[0]) && r[1].abs() < 1.5));
    // 17 significant digits: 1 before the point, 16 after.
    let text = fs::read_to_string(d.join("h.csv")).unwrap();
    let first = text.lines().nth(1).unwrap().split(',').next().unwrap().to_string();
    let mantissa = first.split('e').next().unwrap().trim_start_matches('-');
    assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17);
}

#[test]
fn chaos_plot_hybrid_and_qlogistic() {
    let (_t, d) = setup();
    let out = run(&d, &["chaos-plot", "--map", "hybrid", "--range", "0.6:1.2:4", "--samples", "5"]);
    let (header, rows) = csv_rows(&stdout(&out));
    assert_eq!(header, "r,x");
    assert_eq!(rows.len(), 20);
    assert!(rows.iter().all(|r| (0.0..1.0).contains(&r[1])));

    let out = run(&d, &["chaos-plot", "--map", "qlogistic", "--samples", "200"]);
    let (header, rows) = csv_rows(&stdout(&out));
    assert_eq!(header, "x,y,z");
    assert_eq!(rows.len(), 200);
    assert!(rows.iter().all(|r| r.len() == 3 && r.iter().all(|v| v.is_finite())));
}

#[test]
fn chaos_plot_rejects_empty_range() {
    let (_t, d) = setup();
    assert_eq!(code(&run(&d, &["chaos-plot", "--map", "henon", "--range", "1.4:1.0"])), 2);
    assert_eq!(code(&run(&d, &["chaos-plot", "--map", "henon", "--range", "1.0:1.4:0"])), 2);
    assert_eq!(code(&run(&d, &["chaos-plot", "--map", "henon", "--range", "nonsense"])), 2);
}
