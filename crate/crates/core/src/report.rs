//! Machine-readable check reports.
//!
//! Floats are written with 17 significant digits so that a report parses
//! back to the same bits; non-finite values become the strings `"NaN"`,
//! `"inf"` and `"-inf"`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "check_name,m,k,param,samples,seed,max_abs_error,tolerance,pass,wall_time_ms";

/// `{:.16e}` for finite values.
pub fn format_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

fn parse_f64(s: &str) -> Option<f64> {
    match s {
        "NaN" => Some(f64::NAN),
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        _ => s.parse().ok(),
    }
}

mod exact {
    use super::*;

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if x.is_finite() {
            RawValue::from_string(format_f64(*x))
                .map_err(serde::ser::Error::custom)?
                .serialize(s)
        } else {
            s.serialize_str(&format_f64(*x))
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum NumOrStr {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        match NumOrStr::deserialize(d)? {
            NumOrStr::Num(x) => Ok(x),
            NumOrStr::Str(s) => parse_f64(&s).ok_or_else(|| de::Error::custom(format!("not a number: {s}"))),
        }
    }
}

/// A float that serializes with 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Exact(#[serde(with = "exact")] pub f64);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_name: String,
    /// Plain-language statement of the property checked.
    pub claim: String,
    pub m: usize,
    pub k: usize,
    pub l: usize,
    /// Extra instance parameters, e.g. `t=0.2` or `i=1,c=0.6`.
    pub param: String,
    pub samples: usize,
    pub seed: u64,
    #[serde(with = "exact")]
    pub max_abs_error: f64,
    #[serde(with = "exact")]
    pub tolerance: f64,
    pub pass: bool,
    /// Not evaluated; listed so the report states what it leaves out.
    #[serde(default)]
    pub skipped: bool,
    /// Named auxiliary values (limits, constants, best values).
    #[serde(default)]
    pub values: BTreeMap<String, Exact>,
    #[serde(with = "exact")]
    pub wall_time_ms: f64,
}

/// Instance fields shared by the rows of one check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Instance {
    pub m: usize,
    pub k: usize,
    pub l: usize,
}

impl CheckReport {
    /// `pass` is set from `max_abs_error <= tolerance` (false for NaN).
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        check_name: &str,
        claim: &str,
        inst: Instance,
        param: impl Into<String>,
        samples: usize,
        seed: u64,
        max_abs_error: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            check_name: check_name.into(),
            claim: claim.into(),
            m: inst.m,
            k: inst.k,
            l: inst.l,
            param: param.into(),
            samples,
            seed,
            max_abs_error,
            tolerance,
            pass: max_abs_error <= tolerance,
            skipped: false,
            values: BTreeMap::new(),
            wall_time_ms: 0.0,
        }
    }

    pub fn with_value(mut self, key: &str, v: f64) -> Self {
        self.values.insert(key.into(), Exact(v));
        self
    }

    pub fn value(&self, key: &str) -> Option<f64> {
        self.values.get(key).map(|e| e.0)
    }

    pub fn timed(mut self, ms: f64) -> Self {
        self.wall_time_ms = ms;
        self
    }

    /// `pass` agrees with the error and tolerance.
    pub fn is_consistent(&self) -> bool {
        self.skipped || self.pass == (self.max_abs_error <= self.tolerance)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn to_csv(reports: &[CheckReport]) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for r in reports {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            csv_field(&r.check_name),
            r.m,
            r.k,
            csv_field(&r.param),
            r.samples,
            r.seed,
            format_f64(r.max_abs_error),
            format_f64(r.tolerance),
            r.pass,
            format_f64(r.wall_time_ms)
        );
    }
    out
}

pub fn to_json(reports: &[CheckReport]) -> Result<String> {
    let mut s = serde_json::to_string_pretty(reports)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json(s: &str) -> Result<Vec<CheckReport>> {
    Ok(serde_json::from_str(s)?)
}

pub fn emit_report(reports: &[CheckReport], format: Format) -> Result<String> {
    if reports.is_empty() {
        return Err(Error::Validation("no reports to emit".into()));
    }
    match format {
        Format::Json => to_json(reports),
        Format::Csv => Ok(to_csv(reports)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CheckReport {
        CheckReport::new(
            "demo",
            "demo claim",
            Instance { m: 1, k: 3, l: 3 },
            "t=0.1",
            10,
            42,
            1.0 / 3.0,
            0.5,
        )
        .with_value("limit", 0.1 + 0.2)
        .timed(1.25)
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_f64(1.0 / 3.0), "3.3333333333333331e-1");
        assert_eq!(format_f64(f64::INFINITY), "inf");
    }

    #[test]
    fn json_round_trip_is_exact() {
        let mut r = sample();
        r.max_abs_error = f64::NAN;
        r.pass = false;
        let back = from_json(&to_json(&[r.clone(), sample()]).unwrap()).unwrap();
        assert!(back[0].max_abs_error.is_nan());
        assert_eq!(back[1], sample());
        assert_eq!(back[1].value("limit"), Some(0.1 + 0.2));
    }

    #[test]
    fn csv_header_and_row() {
        let csv = emit_report(&[sample()], Format::Csv).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert_eq!(
            lines.next(),
            Some("demo,1,3,t=0.1,10,42,3.3333333333333331e-1,5.0000000000000000e-1,true,1.2500000000000000e0")
        );
    }

    #[test]
    fn pass_follows_tolerance() {
        assert!(sample().pass && sample().is_consistent());
        let r = CheckReport::new("x", "", Instance { m: 1, k: 1, l: 1 }, "", 0, 0, f64::NAN, 1.0);
        assert!(!r.pass);
        assert!(emit_report(&[], Format::Json).is_err());
    }
}
