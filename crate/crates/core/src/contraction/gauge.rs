//! Contraction gauges and the two witness modes.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::metric::HalfInt;

/// `K(r) = a·r + b` rounded up, optionally infinite from `r0` on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ContractionGauge {
    Affine { a: u32, b: u32 },
    Partial { r0x2: u32, a: u32, b: u32 },
}

impl Default for ContractionGauge {
    /// `K(r) = 10r + 1`.
    fn default() -> Self {
        ContractionGauge::Affine { a: 10, b: 1 }
    }
}

fn check_affine(a: u32, b: u32) -> Result<()> {
    // ceil(a·r) + b >= 4r + 1 on all half-integers iff a >= 4 and b >= 1
    if a < 4 || b < 1 {
        return Err(Error::input(format!(
            "gauge {a}r+{b} violates K(r) >= 4r+1 (needs slope >= 4 and intercept >= 1)"
        )));
    }
    Ok(())
}

impl ContractionGauge {
    pub fn affine(a: u32, b: u32) -> Result<Self> {
        check_affine(a, b)?;
        Ok(ContractionGauge::Affine { a, b })
    }

    pub fn partial(r0x2: u32, a: u32, b: u32) -> Result<Self> {
        check_affine(a, b)?;
        Ok(ContractionGauge::Partial { r0x2, a, b })
    }

    pub fn is_full(&self) -> bool {
        matches!(self, ContractionGauge::Affine { .. })
    }

    pub fn slope(&self) -> u32 {
        match *self {
            ContractionGauge::Affine { a, .. } | ContractionGauge::Partial { a, .. } => a,
        }
    }

    pub fn intercept(&self) -> u32 {
        match *self {
            ContractionGauge::Affine { b, .. } | ContractionGauge::Partial { b, .. } => b,
        }
    }

    /// `K(r)`, `None` for infinity.
    pub fn eval(&self, r: HalfInt) -> Option<u32> {
        if let ContractionGauge::Partial { r0x2, .. } = *self {
            if r.doubled() >= r0x2 {
                return None;
            }
        }
        Some(self.intercept() + (self.slope() * r.doubled()).div_ceil(2))
    }

    /// Largest radius with `K(r) <= len`.
    pub fn max_radius(&self, len: u32) -> Option<HalfInt> {
        let (a, b) = (self.slope(), self.intercept());
        if len < b {
            return None;
        }
        let mut r2 = 2 * (len - b) / a;
        if let ContractionGauge::Partial { r0x2, .. } = *self {
            if r0x2 == 0 {
                return None;
            }
            r2 = r2.min(r0x2 - 1);
        }
        Some(HalfInt::from_doubled(r2))
    }

    /// Whether `K >= 10r + 1` everywhere, the hypothesis of the closest
    /// point estimate.
    pub fn dominates_default(&self) -> bool {
        self.slope() >= 10 && self.intercept() >= 1
    }

    /// `self <= other` pointwise.
    pub fn pointwise_le(&self, other: &ContractionGauge, up_to: HalfInt) -> bool {
        (0..=up_to.doubled()).all(|r2| {
            let r = HalfInt::from_doubled(r2);
            match (self.eval(r), other.eval(r)) {
                (_, None) => true,
                (None, Some(_)) => false,
                (Some(x), Some(y)) => x <= y,
            }
        })
    }
}

pub fn gauge_eval(k: &ContractionGauge, r: HalfInt) -> Option<u32> {
    k.eval(r)
}

impl fmt::Display for ContractionGauge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ContractionGauge::Affine { a, b } => write!(f, "affine:{a}:{b}"),
            ContractionGauge::Partial { r0x2, a, b } => write!(f, "partial:{r0x2}:{a}:{b}"),
        }
    }
}

impl FromStr for ContractionGauge {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| {
            t.parse::<u32>()
                .map_err(|_| Error::input(format!("bad number {t:?} in gauge {s:?}")))
        };
        match parts.as_slice() {
            ["affine", a, b] => ContractionGauge::affine(num(a)?, num(b)?),
            ["partial", r0, a, b] => ContractionGauge::partial(num(r0)?, num(a)?, num(b)?),
            _ => Err(Error::input(format!(
                "gauge {s:?} is not affine:A:B or partial:R0x2:A:B"
            ))),
        }
    }
}

impl Serialize for ContractionGauge {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Which property a witness subsegment must have: r-thin (the space
/// `X̂_K`) or r-quadrangle-contracting (the alternative space `X̃_K`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Thin,
    Quad,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Thin => "thin",
            Mode::Quad => "quad",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "thin" => Ok(Mode::Thin),
            "quad" => Ok(Mode::Quad),
            _ => Err(Error::input(format!("mode {s:?} is not thin or quad"))),
        }
    }
}

impl Serialize for Mode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
