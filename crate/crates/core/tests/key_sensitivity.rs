use qmedshield::analysis::key_sensitivity_test;
use qmedshield::cipher::{keygen, KeySet};
use qmedshield::{decrypt, encrypt, GrayImage};

fn key() -> KeySet {
    let mut key = keygen([0; 32]);
    key.k[2] = 0.5;
    key.k[3] = 0.5;
    key.k[4] = 0.1;
    key
}

fn image() -> GrayImage {
    GrayImage::from_fn(128, 128, |x, y| ((x + 2 * y) as f64 / 3.0 + 20.0 * (x as f64 / 6.0).sin()) as u8).unwrap()
}

fn pearson(a: &GrayImage, b: &GrayImage) -> f64 {
    let n = a.len() as f64;
    let xs: Vec<f64> = a.pixels().iter().map(|&p| p as f64).collect();
    let ys: Vec<f64> = b.pixels().iter().map(|&p| p as f64).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let vx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let vy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

#[test]
fn wrong_y0_decrypts_to_noise() {
    let key = key();
    assert!((key.qlog_params().y0 - 0.05).abs() < 1e-15);
    let img = image();
    let wrong = decrypt(&encrypt(&img, &key).unwrap(), &key.with_qlog_y0(0.005).unwrap()).unwrap();
    let rho = pearson(&img, &wrong);
    assert!(rho.abs() < 0.05, "correlation with plaintext {rho}");
}

#[test]
fn tiny_perturbation_still_scrambles() {
    let npcr = key_sensitivity_test(&image(), &key(), 1e-12).unwrap();
    assert!(npcr > 99.0, "NPCR {npcr}");
}

#[test]
fn zero_perturbation_is_harmless() {
    assert_eq!(key_sensitivity_test(&image(), &key(), 0.0).unwrap(), 0.0);
}
