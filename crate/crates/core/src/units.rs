//! Dimensioned scalar handling: possibly-infinite magnitudes and SI-suffixed
//! quantity parsing for the command line and design files.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A nonnegative magnitude that may be infinite.
///
/// Used for normal resistances (`R_N → ∞`), open-circuit output impedances and
/// the feasibility limit under ideal bias. The infinite case is an explicit
/// variant so every formula spells out its limit instead of relying on a
/// large sentinel value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    Infinite,
}

impl ExtReal {
    pub fn is_infinite(self) -> bool {
        matches!(self, ExtReal::Infinite)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(x) => Some(x),
            ExtReal::Infinite => None,
        }
    }

    /// `1/x`, with `1/∞ = 0`.
    pub fn recip(self) -> f64 {
        match self {
            ExtReal::Finite(x) => 1.0 / x,
            ExtReal::Infinite => 0.0,
        }
    }

    /// Lossy view as an `f64`, mapping the infinite variant to `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtReal::Finite(x) => x,
            ExtReal::Infinite => f64::INFINITY,
        }
    }

    /// Sum of two extended values.
    pub fn add(self, other: ExtReal) -> ExtReal {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::Finite(a + b),
            _ => ExtReal::Infinite,
        }
    }
}

impl From<f64> for ExtReal {
    fn from(x: f64) -> Self {
        if x.is_infinite() && x > 0.0 {
            ExtReal::Infinite
        } else {
            ExtReal::Finite(x)
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(x) => fmt::Display::fmt(x, f),
            ExtReal::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtReal::Finite(x) => s.serialize_f64(*x),
            ExtReal::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(i) => Ok(ExtReal::Finite(i as f64)),
            Raw::Num(x) if x.is_finite() => Ok(ExtReal::Finite(x)),
            Raw::Num(x) => Err(serde::de::Error::custom(format!(
                "non-finite number {x}; write \"inf\" for an infinite value"
            ))),
            Raw::Text(t) if t.trim() == "inf" => Ok(ExtReal::Infinite),
            Raw::Text(t) => Err(serde::de::Error::custom(format!(
                "expected a number or \"inf\", got {t:?}"
            ))),
        }
    }
}

/// Physical dimension a quantity string is expected to carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Ohm,
    Volt,
    Ampere,
    Siemens,
    Henry,
}

impl Unit {
    fn symbols(self) -> &'static [&'static str] {
        match self {
            Unit::Ohm => &["\u{3a9}", "\u{2126}", "ohms", "ohm", "Ohm"],
            Unit::Volt => &["V"],
            Unit::Ampere => &["A"],
            Unit::Siemens => &["S"],
            Unit::Henry => &["H"],
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Unit::Ohm => "Ω",
            Unit::Volt => "V",
            Unit::Ampere => "A",
            Unit::Siemens => "S",
            Unit::Henry => "H",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnitError {
    #[error("empty quantity")]
    Empty,
    #[error("cannot parse {input:?} as a quantity in {unit}")]
    Malformed { input: String, unit: Unit },
    #[error("{input:?}: infinite values are not allowed here")]
    InfiniteNotAllowed { input: String },
}

fn prefix_scale(p: &str) -> Option<f64> {
    Some(match p {
        "" => 1.0,
        "p" => 1e-12,
        "n" => 1e-9,
        "u" | "µ" | "μ" => 1e-6,
        "m" => 1e-3,
        "k" => 1e3,
        "M" => 1e6,
        "G" => 1e9,
        _ => return None,
    })
}

/// Parses a quantity such as `2`, `1.6k`, `1.6kΩ`, `20uV`, `10 µA` or `inf`
/// and returns the value in base SI units.
///
/// The unit symbol is optional; when present it must match `unit`. A bare SI
/// prefix without a symbol (`1.6k`) is accepted. Note that `m` alone is read as
/// milli, never as a unit.
pub fn parse_quantity(input: &str, unit: Unit) -> Result<ExtReal, UnitError> {
    let s = input.trim();
    if s.is_empty() {
        return Err(UnitError::Empty);
    }
    if s.eq_ignore_ascii_case("inf") {
        return Ok(ExtReal::Infinite);
    }
    let malformed = || UnitError::Malformed {
        input: input.to_string(),
        unit,
    };
    let split = s
        .char_indices()
        .find(|&(i, c)| {
            !(c.is_ascii_digit()
                || c == '.'
                || c == '+'
                || c == '-'
                || ((c == 'e' || c == 'E')
                    && s[i + 1..]
                        .chars()
                        .next()
                        .is_some_and(|n| n.is_ascii_digit() || n == '-' || n == '+')))
        })
        .map(|(i, _)| i)
        .unwrap_or(s.len());
    let (num, rest) = s.split_at(split);
    let value = f64::from_str(num).map_err(|_| malformed())?;
    let rest = rest.trim();
    let mut suffix = rest;
    for sym in unit.symbols() {
        if let Some(stripped) = rest.strip_suffix(sym) {
            suffix = stripped;
            break;
        }
    }
    let scale = prefix_scale(suffix).ok_or_else(malformed)?;
    let v = value * scale;
    if !v.is_finite() {
        return Err(malformed());
    }
    Ok(ExtReal::Finite(v))
}

/// Like [`parse_quantity`] but rejects `inf`.
pub fn parse_finite(input: &str, unit: Unit) -> Result<f64, UnitError> {
    match parse_quantity(input, unit)? {
        ExtReal::Finite(x) => Ok(x),
        ExtReal::Infinite => Err(UnitError::InfiniteNotAllowed {
            input: input.to_string(),
        }),
    }
}
