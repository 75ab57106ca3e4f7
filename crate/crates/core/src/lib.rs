pub mod bignum;
pub mod datasets;
pub mod dragon;
pub mod error;
pub mod exact;
pub mod fastpath;
pub mod harness;
pub mod ieee;
pub mod oracle;
pub mod render;

pub use bignum::BigUint;
pub use dragon::{dragon2, dragon4, dragon4_fast_scaled, Dragon2Params, DigitString, Dragon4Stats};
pub use error::{Error, Result};
pub use exact::{significant_digits, to_exact_decimal, DecimalFP};
pub use fastpath::{build_cache, fast_shortest, shortest, DiyFp, FastResult, PowerOfTenCache};
pub use ieee::{boundaries, decode, encode, DecodedFloat, FloatClass, FloatFormat, RoundTripInterval, Sign, Width};
pub use render::{digits_to_chars, render, to_shortest_string, RenderPolicy, RenderedString};
pub use oracle::{minimal_digit_count, parse_exact, shortest_string_oracle, ParsedNumber};
pub use datasets::{generate_unit, load_raw, load_text, save_raw, stats, Dataset, DatasetStats};
pub use harness::{bench, verify, Algorithm, Checks, RunReport, Scope, VerifySummary};
