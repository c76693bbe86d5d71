//! Binary PGM (P5) with 8-bit samples.

use std::io::Write;

use qmedshield::GrayImage;

use crate::error::CliError;

fn skip_space_and_comments(data: &[u8], mut pos: usize) -> usize {
    loop {
        while pos < data.len() && data[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos < data.len() && data[pos] == b'#' {
            while pos < data.len() && data[pos] != b'\n' {
                pos += 1;
            }
        } else {
            return pos;
        }
    }
}

fn header_number(data: &[u8], pos: &mut usize, what: &str) -> Result<usize, CliError> {
    *pos = skip_space_and_comments(data, *pos);
    let start = *pos;
    while *pos < data.len() && data[*pos].is_ascii_digit() {
        *pos += 1;
    }
    std::str::from_utf8(&data[start..*pos])
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| CliError::Format(format!("PGM header: missing or bad {what}")))
}

pub fn decode(data: &[u8], max_dim: usize) -> Result<GrayImage, CliError> {
    if !data.starts_with(b"P5") {
        return Err(CliError::Format("not a binary PGM (expected P5 magic)".into()));
    }
    let mut pos = 2;
    let width = header_number(data, &mut pos, "width")?;
    let height = header_number(data, &mut pos, "height")?;
    let maxval = header_number(data, &mut pos, "maxval")?;
    if maxval > 255 {
        return Err(CliError::Format(format!("unsupported PGM maxval {maxval}: only 8-bit images are supported")));
    }
    if maxval != 255 {
        return Err(CliError::Format(format!("unsupported PGM maxval {maxval}: expected 255")));
    }
    check_dims(width, height, max_dim)?;
    // Exactly one whitespace byte separates the header from the raster.
    if pos >= data.len() || !data[pos].is_ascii_whitespace() {
        return Err(CliError::Format("PGM header not terminated by whitespace".into()));
    }
    pos += 1;
    let n = width * height;
    let raster = &data[pos..];
    if raster.len() < n {
        return Err(CliError::Format(format!("PGM raster truncated: {} of {n} bytes", raster.len())));
    }
    GrayImage::new(width, height, raster[..n].to_vec()).map_err(|e| CliError::Format(e.to_string()))
}

pub fn encode(img: &GrayImage) -> Vec<u8> {
    let mut out = Vec::with_capacity(img.len() + 20);
    write!(out, "P5\n{} {}\n255\n", img.width(), img.height()).expect("writing to a Vec cannot fail");
    out.extend_from_slice(img.pixels());
    out
}

pub fn check_dims(width: usize, height: usize, max_dim: usize) -> Result<(), CliError> {
    if width == 0 || height == 0 {
        return Err(CliError::Format(format!("image has zero size ({width}x{height})")));
    }
    if width > max_dim || height > max_dim {
        return Err(CliError::Format(format!(
            "image {width}x{height} exceeds the {max_dim}x{max_dim} limit"
        )));
    }
    Ok(())
}
