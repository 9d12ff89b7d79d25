//! Bit-stable text renderings of curves, comparison tables and reports.
//!
//! Floats are written in Rust's shortest round-trip form (at most 17
//! significant digits), so parsing an emitted value recovers the exact
//! `f64`.

use std::fmt::Write as _;

use serde::Serialize;

use super::config::RunConfig;
use crate::analytics::{ComplexityReport, CurvePoint};

pub const TOOL: &str = "recall";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const CURVE_HEADER: &str = "x,f";
pub const COMPARE_HEADER: &str = "m,N,delta,r_real,r_int,q_real,q_int,q_duality";

pub fn num(x: f64) -> String {
    format!("{x}")
}

/// `# recall <version> <resolved config>`
pub fn comment_line(config: &RunConfig) -> String {
    format!("# {TOOL} {VERSION} {}", config.describe())
}

pub fn curve_csv(config: &RunConfig, points: &[CurvePoint]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", comment_line(config));
    let _ = writeln!(out, "{CURVE_HEADER}");
    for p in points {
        let _ = writeln!(out, "{},{}", num(p.x), num(p.f));
    }
    out
}

pub fn compare_csv(config: &RunConfig, rows: &[ComplexityReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", comment_line(config));
    let _ = writeln!(out, "{COMPARE_HEADER}");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.m,
            r.n_states,
            num(r.delta),
            num(r.r_real),
            r.r_integer,
            num(r.q_real),
            r.q_integer,
            num(r.q_duality)
        );
    }
    out
}

#[derive(Serialize)]
struct Meta<'a> {
    tool: &'a str,
    version: &'a str,
    config: String,
    seed: u64,
}

#[derive(Serialize)]
struct Document<'a, T> {
    meta: Meta<'a>,
    #[serde(flatten)]
    body: &'a T,
}

/// Pretty JSON whose first member, `meta`, records the tool version, the
/// resolved configuration and the seed; the body's fields follow at the top
/// level.
pub fn json_document<T: Serialize>(config: &RunConfig, body: &T) -> serde_json::Result<String> {
    let doc = Document {
        meta: Meta {
            tool: TOOL,
            version: VERSION,
            config: config.describe(),
            seed: config.master_seed,
        },
        body,
    };
    let mut s = serde_json::to_string_pretty(&doc)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shortest_round_trip_numbers() {
        assert_eq!(num(1.0), "1");
        assert_eq!(num(0.01), "0.01");
        let x = 7.643856189774724f64;
        assert_eq!(num(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        let y = 0.1 + 0.2;
        assert_eq!(num(y).parse::<f64>().unwrap().to_bits(), y.to_bits());
    }
}
