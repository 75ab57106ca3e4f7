//! Benchmark datasets: generated unit-interval draws and user-supplied files.
//!
//! Generated values come from xoshiro256++ seeded through SplitMix64
//! (`rand_xoshiro::Xoshiro256PlusPlus::seed_from_u64`). Each draw is
//! `(next_u64() >> 11) * 2^-53`; the binary32 variant narrows that draw with
//! round-to-nearest.

use std::fmt;
use std::fs;
use std::path::Path;

use rand::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};
use crate::fastpath::shortest;
use crate::ieee::{decode, DecodedFloat, FloatFormat, Width};
use crate::oracle::parse_exact;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Generated,
    File,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    pub name: String,
    pub format: FloatFormat,
    pub values: Vec<u64>,
    pub source: Source,
    /// NaN and infinity patterns dropped while loading.
    pub filtered: usize,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn decoded(&self) -> impl Iterator<Item = DecodedFloat> + '_ {
        self.values.iter().map(|&b| decode(b, self.format))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DatasetStats {
    pub count: usize,
    /// Values exactly representable as a signed 64-bit integer (zero included).
    pub integer_count: usize,
    pub mean_minimal_digits: f64,
}

impl fmt::Display for DatasetStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "count={} integers={} mean_digits={:.3}",
            self.count, self.integer_count, self.mean_minimal_digits
        )
    }
}

/// Default seed for generated datasets.
pub const DEFAULT_SEED: u64 = 0x5EED;

/// `n` uniform draws from `[0, 1)`.
pub fn generate_unit(n: usize, seed: u64, format: FloatFormat) -> Dataset {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let values = (0..n)
        .map(|_| {
            let v = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
            match format.width {
                Width::Binary64 => v.to_bits(),
                Width::Binary32 => (v as f32).to_bits() as u64,
            }
        })
        .collect();
    Dataset {
        name: "unit".into(),
        format,
        values,
        source: Source::Generated,
        filtered: 0,
    }
}

fn file_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn io_error(path: &Path, err: std::io::Error) -> Error {
    Error::Malformed {
        text: format!("{}: {err}", path.display()),
        reason: "unreadable file",
    }
}

fn is_finite_bits(bits: u64, format: FloatFormat) -> bool {
    decode(bits, format).is_finite()
}

/// Packed little-endian patterns (`.f32le` / `.f64le`).
pub fn load_raw(path: &Path, format: FloatFormat) -> Result<Dataset> {
    let bytes = fs::read(path).map_err(|e| io_error(path, e))?;
    let width = (format.total_bits() / 8) as usize;
    if bytes.len() % width != 0 {
        return Err(Error::Malformed {
            text: path.display().to_string(),
            reason: "length is not a multiple of the value width",
        });
    }
    let mut values = Vec::with_capacity(bytes.len() / width);
    let mut filtered = 0;
    for chunk in bytes.chunks_exact(width) {
        let bits = match format.width {
            Width::Binary32 => u32::from_le_bytes(chunk.try_into().unwrap()) as u64,
            Width::Binary64 => u64::from_le_bytes(chunk.try_into().unwrap()),
        };
        if is_finite_bits(bits, format) {
            values.push(bits);
        } else {
            filtered += 1;
        }
    }
    Ok(Dataset {
        name: file_name(path),
        format,
        values,
        source: Source::File,
        filtered,
    })
}

pub fn save_raw(ds: &Dataset, path: &Path) -> Result<()> {
    let mut bytes = Vec::with_capacity(ds.values.len() * 8);
    for &bits in &ds.values {
        match ds.format.width {
            Width::Binary32 => bytes.extend_from_slice(&(bits as u32).to_le_bytes()),
            Width::Binary64 => bytes.extend_from_slice(&bits.to_le_bytes()),
        }
    }
    fs::write(path, bytes).map_err(|e| io_error(path, e))
}

/// One decimal literal per line; blank lines and `#` comments are skipped.
///
/// Every malformed or overflowing line is reported, each with its line number.
pub fn load_text(path: &Path, format: FloatFormat) -> Result<Dataset> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    parse_text(&file_name(path), &text, format)
}

pub fn parse_text(name: &str, text: &str, format: FloatFormat) -> Result<Dataset> {
    let mut values = Vec::new();
    let mut problems = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match parse_exact(line, format) {
            Ok(bits) if is_finite_bits(bits, format) => values.push(bits),
            Ok(_) => problems.push(format!("line {}: {line:?} is not finite", idx + 1)),
            Err(_) => problems.push(format!("line {}: {line:?} is not a decimal literal", idx + 1)),
        }
    }
    if !problems.is_empty() {
        return Err(Error::Malformed {
            text: problems.join("\n"),
            reason: "bad lines in text dataset",
        });
    }
    Ok(Dataset {
        name: name.to_string(),
        format,
        values,
        source: Source::File,
        filtered: 0,
    })
}

/// Resolves a dataset argument: `unit`, `unit:N`, or a file path
/// (`.f32le`/`.f64le` raw, anything else text).
pub fn resolve(arg: &str, format: FloatFormat, seed: u64) -> Result<Dataset> {
    if arg == "unit" {
        return Ok(generate_unit(100_000, seed, format));
    }
    if let Some(n) = arg.strip_prefix("unit:") {
        let n = n.parse().map_err(|_| Error::UnknownName {
            kind: "dataset",
            name: arg.to_string(),
        })?;
        return Ok(generate_unit(n, seed, format));
    }
    let path = Path::new(arg);
    if !path.exists() {
        return Err(Error::UnknownName {
            kind: "dataset",
            name: arg.to_string(),
        });
    }
    match path.extension().and_then(|e| e.to_str()) {
        Some("f32le") => load_raw(path, FloatFormat::BINARY32),
        Some("f64le") => load_raw(path, FloatFormat::BINARY64),
        _ => load_text(path, format),
    }
}

fn is_i64_integer(d: &DecodedFloat) -> bool {
    if d.is_zero() {
        return true;
    }
    if d.p >= 0 {
        // m * 2^p < 2^63, or exactly -2^63
        let bits = 64 - d.m.leading_zeros() as i32 + d.p;
        bits <= 63 || (d.sign.is_negative() && d.m.is_power_of_two() && bits == 64)
    } else {
        d.m.trailing_zeros() as i32 >= -d.p
    }
}

/// Significant digits of the shortest round-tripping decimal; zero counts as one.
pub fn minimal_digits(d: &DecodedFloat) -> u32 {
    match shortest(d) {
        Ok(dec) => crate::exact::significant_digits(&dec),
        Err(_) => 0,
    }
}

pub fn stats(ds: &Dataset) -> DatasetStats {
    let mut integer_count = 0;
    let mut digits = 0u64;
    for d in ds.decoded() {
        integer_count += is_i64_integer(&d) as usize;
        digits += minimal_digits(&d) as u64;
    }
    let count = ds.len();
    DatasetStats {
        count,
        integer_count,
        mean_minimal_digits: if count == 0 { 0.0 } else { digits as f64 / count as f64 },
    }
}
