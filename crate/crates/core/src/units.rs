//! Unit-suffixed quantity strings, e.g. `"500 km"`, `"7 km/s"`, `"20 deg"`,
//! `"28 GHz"`, `"1000 lambda"`, `"[-1, 0, 500] km"`.
//!
//! Everything is converted to SI (meters, m/s, radians, Hz, seconds). A
//! missing or unknown suffix is an error; bare numbers are never accepted for
//! dimensioned quantities.

use crate::error::{Error, Result};
use crate::geometry::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Length,
    Speed,
    Angle,
    Frequency,
    Time,
}

impl Dimension {
    fn name(self) -> &'static str {
        match self {
            Dimension::Length => "length",
            Dimension::Speed => "speed",
            Dimension::Angle => "angle",
            Dimension::Frequency => "frequency",
            Dimension::Time => "time",
        }
    }

    /// Canonical SI suffix used when writing quantities back out.
    pub fn si_suffix(self) -> &'static str {
        match self {
            Dimension::Length => "m",
            Dimension::Speed => "m/s",
            Dimension::Angle => "rad",
            Dimension::Frequency => "Hz",
            Dimension::Time => "s",
        }
    }
}

/// Scale factor to SI for `unit` in dimension `dim`. Lengths in `lambda`
/// need the wavelength, passed separately.
fn factor(dim: Dimension, unit: &str, lambda_m: Option<f64>) -> Result<f64> {
    let f = match (dim, unit) {
        (Dimension::Length, "m") => 1.0,
        (Dimension::Length, "km") => 1e3,
        (Dimension::Length, "cm") => 1e-2,
        (Dimension::Length, "mm") => 1e-3,
        (Dimension::Length, "lambda") => match lambda_m {
            Some(l) => l,
            None => return Err(Error::Unit("`lambda` needs a carrier frequency".into())),
        },
        (Dimension::Speed, "m/s") => 1.0,
        (Dimension::Speed, "km/s") => 1e3,
        (Dimension::Speed, "km/h") => 1.0 / 3.6,
        (Dimension::Angle, "rad") => 1.0,
        (Dimension::Angle, "deg") => std::f64::consts::PI / 180.0,
        (Dimension::Frequency, "Hz") => 1.0,
        (Dimension::Frequency, "kHz") => 1e3,
        (Dimension::Frequency, "MHz") => 1e6,
        (Dimension::Frequency, "GHz") => 1e9,
        (Dimension::Time, "s") => 1.0,
        (Dimension::Time, "ms") => 1e-3,
        (Dimension::Time, "us") | (Dimension::Time, "µs") => 1e-6,
        (Dimension::Time, "ns") => 1e-9,
        _ => {
            return Err(Error::Unit(format!(
                "unknown {} unit `{unit}`",
                dim.name()
            )))
        }
    };
    Ok(f)
}

fn split_unit(s: &str) -> Result<(&str, &str)> {
    let s = s.trim();
    let cut = s
        .rfind(|c: char| c.is_whitespace() || c == ']')
        .map(|i| i + s[i..].chars().next().map_or(1, char::len_utf8))
        .ok_or_else(|| Error::Unit(format!("missing unit in `{s}`")))?;
    let (num, unit) = s.split_at(cut);
    let unit = unit.trim();
    if unit.is_empty() {
        return Err(Error::Unit(format!("missing unit in `{s}`")));
    }
    Ok((num.trim(), unit))
}

fn parse_number(s: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::Unit(format!("`{s}` is not a number")))?;
    if !v.is_finite() {
        return Err(Error::Unit(format!("`{s}` is not finite")));
    }
    Ok(v)
}

/// Parse a scalar quantity such as `"7 km/s"` into SI.
pub fn parse_quantity(s: &str, dim: Dimension, lambda_m: Option<f64>) -> Result<f64> {
    let (num, unit) = split_unit(s)?;
    Ok(parse_number(num)? * factor(dim, unit, lambda_m)?)
}

/// Parse a vector quantity such as `"[-1, 0, 500] km"` into SI.
pub fn parse_vec3(s: &str, dim: Dimension) -> Result<Vec3> {
    let (body, unit) = split_unit(s)?;
    let f = factor(dim, unit, None)?;
    let inner = body
        .strip_prefix('[')
        .and_then(|b| b.strip_suffix(']'))
        .ok_or_else(|| Error::Unit(format!("expected `[x, y, z] unit`, got `{s}`")))?;
    let parts: Vec<&str> = inner.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::Unit(format!("expected 3 components in `{s}`")));
    }
    Ok(Vec3::new(
        parse_number(parts[0])? * f,
        parse_number(parts[1])? * f,
        parse_number(parts[2])? * f,
    ))
}

/// Write an SI value with its canonical suffix. `{}` on f64 is the shortest
/// representation that parses back to the same bits.
pub fn format_quantity(v: f64, dim: Dimension) -> String {
    format!("{v} {}", dim.si_suffix())
}

pub fn format_vec3(v: Vec3, dim: Dimension) -> String {
    format!("[{}, {}, {}] {}", v.x, v.y, v.z, dim.si_suffix())
}
