//! Benchmark and verification drivers shared by the command-line tool and the
//! Python bindings.

use std::fmt::{self, Write as _};
use std::hint::black_box;
use std::time::Instant;

use rand::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::datasets::Dataset;
use crate::dragon::{dragon2, dragon4, dragon4_fast_scaled, dragon4_fast_scaled_with_stats, dragon4_with_stats, Dragon2Params};
use crate::error::{Error, Result};
use crate::exact::{significant_digits, DecimalFP};
use crate::fastpath::{fast_shortest, global_cache, shortest};
use crate::ieee::{decode, DecodedFloat, FloatFormat, Width};
use crate::oracle::{minimal_and_closest, parse_number, shortest_string_oracle, to_bits, ParsedNumber};
use crate::render::{render_decoded_into, to_shortest_string_from, RenderPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Dragon2,
    Dragon4,
    Dragon4Fast,
    Fastpath,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Dragon2,
        Algorithm::Dragon4,
        Algorithm::Dragon4Fast,
        Algorithm::Fastpath,
    ];

    /// The exact converters.
    pub const EXACT: [Algorithm; 3] = [Algorithm::Dragon4, Algorithm::Dragon4Fast, Algorithm::Fastpath];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Dragon2 => "dragon2",
            Algorithm::Dragon4 => "dragon4",
            Algorithm::Dragon4Fast => "dragon4-fast",
            Algorithm::Fastpath => "fastpath",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == name)
            .ok_or_else(|| Error::UnknownName {
                kind: "algorithm",
                name: name.to_string(),
            })
    }

    /// Converts a finite value; zeros pass through with their sign.
    pub fn convert(self, d: &DecodedFloat) -> Result<DecimalFP> {
        if !d.is_finite() {
            return Err(Error::NotFinite(d.class));
        }
        if d.is_zero() {
            return Ok(DecimalFP::zero(d.sign));
        }
        match self {
            Algorithm::Dragon2 => Ok(dragon2(d, Dragon2Params::decimal_for(d))?.to_decimal(d.sign)),
            Algorithm::Dragon4 => dragon4(d),
            Algorithm::Dragon4Fast => dragon4_fast_scaled(d),
            Algorithm::Fastpath => shortest(d),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One benchmark row.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub algorithm: Algorithm,
    pub policy: RenderPolicy,
    pub dataset: String,
    pub count: usize,
    /// Median over the timed passes.
    pub ns_per_float: f64,
    /// `(max - min) / median` of the per-pass times, in percent.
    pub variability_pct: f64,
    pub mean_chars: f64,
    pub mean_sig_digits: f64,
    pub repeats: u32,
    /// Share of values the fast path handed to Dragon4.
    pub fallback_rate: Option<f64>,
    /// Mean scaling iterations for the Dragon4 variants.
    pub mean_scale_iterations: Option<f64>,
}

pub const CSV_HEADER: &str =
    "algorithm,policy,dataset,count,ns_per_float,variability_pct,mean_chars,mean_sig_digits,fallback_rate";

impl RunReport {
    pub fn csv_row(&self) -> String {
        let fallback = self.fallback_rate.map(|r| format!("{r:.6}")).unwrap_or_default();
        format!(
            "{},{},{},{},{:.3},{:.2},{:.4},{:.4},{}",
            self.algorithm,
            self.policy.name(),
            self.dataset,
            self.count,
            self.ns_per_float,
            self.variability_pct,
            self.mean_chars,
            self.mean_sig_digits,
            fallback
        )
    }
}

pub fn to_csv(reports: &[RunReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// Untimed pass: mean length, mean digits, and algorithm-specific counters.
fn describe(values: &[DecodedFloat], algorithm: Algorithm, policy: RenderPolicy) -> Result<(f64, f64, Option<f64>, Option<f64>)> {
    let mut buf = Vec::with_capacity(64);
    let (mut chars, mut digits, mut fallbacks, mut iterations) = (0usize, 0u64, 0usize, 0u64);
    for d in values {
        let dec = algorithm.convert(d)?;
        chars += render_decoded_into(d, &dec, policy, &mut buf);
        digits += significant_digits(&dec) as u64;
        if d.is_zero() {
            continue;
        }
        match algorithm {
            Algorithm::Fastpath => fallbacks += !fast_shortest(d, global_cache())?.certain as usize,
            Algorithm::Dragon4 => iterations += dragon4_with_stats(d)?.1.scale_iterations as u64,
            Algorithm::Dragon4Fast => iterations += dragon4_fast_scaled_with_stats(d)?.1.scale_iterations as u64,
            Algorithm::Dragon2 => {}
        }
    }
    let n = values.len().max(1) as f64;
    let fallback = (algorithm == Algorithm::Fastpath).then(|| fallbacks as f64 / n);
    let iters = matches!(algorithm, Algorithm::Dragon4 | Algorithm::Dragon4Fast).then(|| iterations as f64 / n);
    Ok((chars as f64 / n, digits as f64 / n, fallback, iters))
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

/// Times `repeats` full conversion-and-render passes over the dataset.
///
/// Runs on the calling thread. Output goes into one reused buffer.
pub fn bench(ds: &Dataset, algorithm: Algorithm, policy: RenderPolicy, repeats: u32) -> Result<RunReport> {
    let values: Vec<DecodedFloat> = ds.decoded().collect();
    let (mean_chars, mean_sig_digits, fallback_rate, mean_scale_iterations) = describe(&values, algorithm, policy)?;
    let repeats = repeats.max(1);
    let mut buf = Vec::with_capacity(64);
    let mut times = Vec::with_capacity(repeats as usize);
    for _ in 0..repeats {
        let start = Instant::now();
        let mut total = 0usize;
        for d in &values {
            let dec = algorithm.convert(d)?;
            total += render_decoded_into(d, &dec, policy, &mut buf);
        }
        black_box(total);
        times.push(start.elapsed().as_nanos() as f64);
    }
    times.sort_by(f64::total_cmp);
    let med = median(&times);
    let n = values.len().max(1) as f64;
    let variability_pct = if med > 0.0 {
        (times[times.len() - 1] - times[0]) / med * 100.0
    } else {
        0.0
    };
    Ok(RunReport {
        algorithm,
        policy,
        dataset: ds.name.clone(),
        count: values.len(),
        ns_per_float: (med / n).max(f64::MIN_POSITIVE),
        variability_pct,
        mean_chars,
        mean_sig_digits,
        repeats,
        fallback_rate,
        mean_scale_iterations,
    })
}

/// Which inputs `verify` covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    /// Every binary32 exponent with 4096 spread fractions, plus boundary patterns.
    Binary32Strata,
    Random { format: FloatFormat, count: usize, seed: u64 },
}

impl Scope {
    /// Parses `binary32 exhaustive-strata` or `<binary32|binary64> random <N> [seed=S]`.
    pub fn parse(text: &str, default_seed: u64) -> Result<Scope> {
        let bad = || Error::UnknownName {
            kind: "scope",
            name: text.to_string(),
        };
        let words: Vec<&str> = text.split_whitespace().collect();
        let format = match words.first().copied() {
            Some("binary32" | "f32") => FloatFormat::BINARY32,
            Some("binary64" | "f64") => FloatFormat::BINARY64,
            _ => return Err(bad()),
        };
        match &words[1..] {
            ["exhaustive-strata"] if format.width == Width::Binary32 => Ok(Scope::Binary32Strata),
            ["random", n, rest @ ..] if rest.len() <= 1 => {
                let count = n.parse().map_err(|_| bad())?;
                let seed = match rest.first() {
                    Some(s) => s.strip_prefix("seed=").and_then(|v| v.parse().ok()).ok_or_else(bad)?,
                    None => default_seed,
                };
                Ok(Scope::Random { format, count, seed })
            }
            _ => Err(bad()),
        }
    }

    pub fn format(&self) -> FloatFormat {
        match self {
            Scope::Binary32Strata => FloatFormat::BINARY32,
            Scope::Random { format, .. } => *format,
        }
    }

    /// The bit patterns under test.
    pub fn patterns(&self) -> Vec<u64> {
        match *self {
            Scope::Binary32Strata => binary32_strata(),
            Scope::Random { format, count, seed } => random_finite(format, count, seed),
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::Binary32Strata => f.write_str("binary32 exhaustive-strata"),
            Scope::Random { format, count, seed } => write!(f, "{} random {count} seed={seed}", format.name()),
        }
    }
}

/// Fractions per binary32 exponent in the stratified sweep.
pub const STRATA_FRACTIONS: u32 = 4096;

/// Every biased exponent (subnormals included) with evenly spread fractions,
/// each stratum offset differently, plus the edge fractions, in both signs at
/// the boundaries.
pub fn binary32_strata() -> Vec<u64> {
    let stride = (1u32 << 23) / STRATA_FRACTIONS;
    let mut out = Vec::with_capacity(255 * (STRATA_FRACTIONS as usize + 8));
    for exp in 0u32..255 {
        let offset = exp.wrapping_mul(2_654_435_761) % stride;
        for i in 0..STRATA_FRACTIONS {
            out.push(((exp << 23) | (i * stride + offset)) as u64);
        }
        for frac in [0, 1, 2, (1 << 22), (1 << 23) - 2, (1 << 23) - 1] {
            out.push(((exp << 23) | frac) as u64);
        }
    }
    let sign = 1u64 << 31;
    for b in [0x0000_0001u64, 0x0000_0002, 0x007F_FFFE, 0x007F_FFFF, 0x0080_0000, 0x0080_0001, 0x7F7F_FFFE, 0x7F7F_FFFF] {
        out.push(b | sign);
    }
    out.sort_unstable();
    out.dedup();
    out.retain(|&b| b != 0);
    out
}

/// `count` finite patterns drawn uniformly over the bit space.
pub fn random_finite(format: FloatFormat, count: usize, seed: u64) -> Vec<u64> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let mask = if format.width == Width::Binary32 { 0xFFFF_FFFF } else { u64::MAX };
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let bits = rng.next_u64() & mask;
        if decode(bits, format).is_finite() {
            out.push(bits);
        }
    }
    out
}

/// Checks to run per value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Checks {
    /// Every exact algorithm under every policy parses back to the input.
    pub round_trip: bool,
    /// Dragon4 Gay-scaled and the fast path equal Dragon4.
    pub equivalence: bool,
    /// Dragon4's digit count is minimal and its choice is the closest candidate.
    pub minimality: bool,
    /// The shortest string matches the enumeration oracle's length.
    pub strings: bool,
    /// Measure Dragon2's round-trip failures.
    pub dragon2: bool,
}

impl Checks {
    pub const ALL: Checks = Checks {
        round_trip: true,
        equivalence: true,
        minimality: true,
        strings: true,
        dragon2: true,
    };

    pub const NONE: Checks = Checks {
        round_trip: false,
        equivalence: false,
        minimality: false,
        strings: false,
        dragon2: false,
    };
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub bits: u64,
    pub format: FloatFormat,
    pub check: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hex = (self.format.total_bits() / 4) as usize;
        write!(f, "{} 0x{:0hex$X} [{}]: {}", self.format.name(), self.bits, self.check, self.detail)
    }
}

/// Violations kept verbatim; the rest are only counted.
const KEPT_VIOLATIONS: usize = 50;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifySummary {
    pub checked: usize,
    pub violation_count: usize,
    pub violations: Vec<Violation>,
    pub round_trip_checks: usize,
    pub minimality_checks: usize,
    /// Values with at least two minimal-length candidates.
    pub multi_candidate: usize,
    pub string_checks: usize,
    pub fast_fallbacks: usize,
    pub dragon2_checked: usize,
    pub dragon2_failures: usize,
}

impl VerifySummary {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    pub fn fallback_rate(&self) -> f64 {
        self.fast_fallbacks as f64 / self.checked.max(1) as f64
    }

    pub fn dragon2_failure_rate(&self) -> f64 {
        self.dragon2_failures as f64 / self.dragon2_checked.max(1) as f64
    }

    fn merge(&mut self, other: VerifySummary) {
        self.checked += other.checked;
        self.violation_count += other.violation_count;
        let room = KEPT_VIOLATIONS.saturating_sub(self.violations.len());
        self.violations.extend(other.violations.into_iter().take(room));
        self.round_trip_checks += other.round_trip_checks;
        self.minimality_checks += other.minimality_checks;
        self.multi_candidate += other.multi_candidate;
        self.string_checks += other.string_checks;
        self.fast_fallbacks += other.fast_fallbacks;
        self.dragon2_checked += other.dragon2_checked;
        self.dragon2_failures += other.dragon2_failures;
    }

    fn flag(&mut self, bits: u64, format: FloatFormat, check: &'static str, detail: String) {
        self.violation_count += 1;
        if self.violations.len() < KEPT_VIOLATIONS {
            self.violations.push(Violation { bits, format, check, detail });
        }
    }

    pub fn report(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "checked {} values, {} violations", self.checked, self.violation_count);
        let _ = writeln!(
            out,
            "round-trip strings {}, minimality {} ({} with several candidates), shortest strings {}",
            self.round_trip_checks, self.minimality_checks, self.multi_candidate, self.string_checks
        );
        let _ = writeln!(out, "fastpath fallback rate {:.6}", self.fallback_rate());
        if self.dragon2_checked > 0 {
            let _ = writeln!(
                out,
                "dragon2 round-trip failures {} of {} ({:.4}%)",
                self.dragon2_failures,
                self.dragon2_checked,
                100.0 * self.dragon2_failure_rate()
            );
        }
        for v in &self.violations {
            let _ = writeln!(out, "violation: {v}");
        }
        out
    }
}

/// Parses rendered text, reusing earlier results for the same decimal value.
struct ParseCache {
    seen: Vec<(ParsedNumber, u64)>,
}

impl ParseCache {
    fn bits(&mut self, text: &[u8], format: FloatFormat) -> Result<u64> {
        let text = std::str::from_utf8(text).expect("ascii");
        let parsed = parse_number(text)?.canonical();
        if let Some((_, bits)) = self.seen.iter().find(|(p, _)| *p == parsed) {
            return Ok(*bits);
        }
        let bits = to_bits(&parsed, format);
        self.seen.push((parsed, bits));
        Ok(bits)
    }
}

fn check_value(bits: u64, format: FloatFormat, checks: Checks, sum: &mut VerifySummary) {
    let d = decode(bits, format);
    sum.checked += 1;
    let describe = |dec: &DecimalFP| dec.to_string();
    let reference = match Algorithm::Dragon4.convert(&d) {
        Ok(dec) => dec,
        Err(e) => {
            sum.flag(bits, format, "dragon4", e.to_string());
            return;
        }
    };
    let mut decs = vec![(Algorithm::Dragon4, reference.clone())];
    if checks.round_trip || checks.equivalence {
        for algorithm in [Algorithm::Dragon4Fast, Algorithm::Fastpath] {
            match algorithm.convert(&d) {
                Ok(dec) => {
                    if checks.equivalence && dec != reference {
                        let detail = format!("{} gave {}, dragon4 gave {}", algorithm, describe(&dec), describe(&reference));
                        sum.flag(bits, format, "equivalence", detail);
                    }
                    decs.push((algorithm, dec));
                }
                Err(e) => sum.flag(bits, format, algorithm.name(), e.to_string()),
            }
        }
    }
    if !d.is_zero() && !fast_shortest(&d, global_cache()).map(|r| r.certain).unwrap_or(false) {
        sum.fast_fallbacks += 1;
    }

    let mut buf = Vec::with_capacity(64);
    let mut cache = ParseCache { seen: Vec::with_capacity(4) };
    if checks.round_trip {
        for (algorithm, dec) in &decs {
            for policy in RenderPolicy::ALL {
                render_decoded_into(&d, dec, policy, &mut buf);
                sum.round_trip_checks += 1;
                match cache.bits(&buf, format) {
                    Ok(back) if back == bits => {}
                    Ok(back) => {
                        let text = String::from_utf8_lossy(&buf);
                        let detail = format!("{algorithm}/{}: {text:?} reads back as 0x{back:X}", policy.name());
                        sum.flag(bits, format, "round-trip", detail);
                    }
                    Err(e) => sum.flag(bits, format, "round-trip", e.to_string()),
                }
            }
        }
    }
    if checks.minimality && !d.is_zero() {
        sum.minimality_checks += 1;
        match minimal_and_closest(&d) {
            Ok(oracle) => {
                sum.multi_candidate += (oracle.count >= 2) as usize;
                let got = significant_digits(&reference);
                let (count, closest) = (oracle.digits, oracle.closest);
                if got != count {
                    sum.flag(bits, format, "minimality", format!("dragon4 used {got} digits, {count} suffice"));
                } else if closest != reference {
                    let detail = format!("dragon4 gave {}, closest is {}", describe(&reference), describe(&closest));
                    sum.flag(bits, format, "correct-rounding", detail);
                }
            }
            Err(e) => sum.flag(bits, format, "minimality", e.to_string()),
        }
    }
    if checks.strings {
        sum.string_checks += 1;
        let fast = to_shortest_string_from(&d, &reference);
        let oracle = shortest_string_oracle(&d);
        match (fast, oracle) {
            (Ok(fast), Ok(oracle)) => {
                if fast.length != oracle.length {
                    let detail = format!("{:?} vs oracle {:?}", fast.text, oracle.text);
                    sum.flag(bits, format, "shortest-string", detail);
                } else if cache.bits(fast.text.as_bytes(), format).ok() != Some(bits) {
                    sum.flag(bits, format, "shortest-string", format!("{:?} does not read back", fast.text));
                }
            }
            (Err(e), _) | (_, Err(e)) => sum.flag(bits, format, "shortest-string", e.to_string()),
        }
    }
    if checks.dragon2 && !d.is_zero() {
        sum.dragon2_checked += 1;
        let ok = Algorithm::Dragon2.convert(&d).is_ok_and(|dec| {
            render_decoded_into(&d, &dec, RenderPolicy::MinimalLength, &mut buf);
            cache.bits(&buf, format).ok() == Some(bits)
        });
        sum.dragon2_failures += !ok as usize;
    }
}

/// Runs the checks over `patterns`, split across worker threads.
pub fn verify_patterns(patterns: &[u64], format: FloatFormat, checks: Checks, threads: usize) -> VerifySummary {
    let threads = threads.max(1).min(patterns.len().max(1));
    let chunk = patterns.len().div_ceil(threads).max(1);
    let mut total = VerifySummary::default();
    std::thread::scope(|s| {
        let handles: Vec<_> = patterns
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    let mut sum = VerifySummary::default();
                    for &bits in part {
                        check_value(bits, format, checks, &mut sum);
                    }
                    sum
                })
            })
            .collect();
        for h in handles {
            total.merge(h.join().expect("verify worker panicked"));
        }
    });
    total
}

pub fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

pub fn verify(scope: &Scope, checks: Checks) -> VerifySummary {
    verify_patterns(&scope.patterns(), scope.format(), checks, default_threads())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::generate_unit;

    #[test]
    fn names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(Algorithm::from_name(a.name()).unwrap(), a);
        }
        assert!(Algorithm::from_name("grisu").is_err());
    }

    #[test]
    fn scope_grammar() {
        assert_eq!(Scope::parse("binary32 exhaustive-strata", 0).unwrap(), Scope::Binary32Strata);
        assert_eq!(
            Scope::parse("binary64 random 1000000 seed=1", 9).unwrap(),
            Scope::Random { format: FloatFormat::BINARY64, count: 1_000_000, seed: 1 }
        );
        assert_eq!(
            Scope::parse("f32 random 5", 9).unwrap(),
            Scope::Random { format: FloatFormat::BINARY32, count: 5, seed: 9 }
        );
        for bad in ["", "binary64 exhaustive-strata", "binary16 random 3", "binary64 random x", "binary64 random 3 seed"] {
            assert!(Scope::parse(bad, 0).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn strata_cover_every_exponent() {
        let s = binary32_strata();
        assert!(s.len() >= 255 * STRATA_FRACTIONS as usize);
        for exp in 0..255u64 {
            assert!(s.iter().filter(|&&b| (b >> 23) & 0xFF == exp).count() >= STRATA_FRACTIONS as usize);
        }
        for b in [1u64, 0x007F_FFFF, 0x0080_0000, 0x7F7F_FFFF] {
            assert!(s.contains(&b));
        }
        assert!(s.iter().all(|&b| decode(b, FloatFormat::BINARY32).is_finite()));
    }

    #[test]
    fn empty_scope_passes() {
        let sum = verify(&Scope::Random { format: FloatFormat::BINARY64, count: 0, seed: 1 }, Checks::ALL);
        assert!(sum.passed());
        assert_eq!(sum.checked, 0);
    }

    #[test]
    fn small_verify_is_clean() {
        let scope = Scope::Random { format: FloatFormat::BINARY64, count: 300, seed: 4 };
        let sum = verify(&scope, Checks::ALL);
        assert!(sum.passed(), "{}", sum.report());
        assert_eq!(sum.round_trip_checks, 300 * 9);
    }

    #[test]
    fn bench_report_shape() {
        let ds = generate_unit(200, 1, FloatFormat::BINARY64);
        let r = bench(&ds, Algorithm::Fastpath, RenderPolicy::MinimalLength, 3).unwrap();
        assert!(r.ns_per_float > 0.0 && r.fallback_rate.is_some());
        let row = r.csv_row();
        assert_eq!(row.split(',').count(), CSV_HEADER.split(',').count());
        assert!(row.starts_with("fastpath,minimal,unit,200,"));
        let d4 = bench(&ds, Algorithm::Dragon4, RenderPolicy::CStyle, 1).unwrap();
        assert!(d4.fallback_rate.is_none() && d4.csv_row().ends_with(','));
        assert_eq!(d4.mean_sig_digits, r.mean_sig_digits);
    }

    #[test]
    fn violations_are_reported_with_bits() {
        let mut sum = VerifySummary::default();
        sum.flag(0x3F80_0000, FloatFormat::BINARY32, "round-trip", "x".into());
        assert!(sum.report().contains("0x3F800000"));
        assert!(!sum.passed());
    }
}
