//! Text syntax for complex constants: `1.5`, `-2i`, `0.5+1e-3i`, `3-4i`, `i`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::C64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid complex literal `{0}`")]
pub struct ParseComplexError(pub String);

/// Parses a complex constant written as `re`, `imi`, or `re±imi`.
pub fn parse_complex(text: &str) -> Result<C64, ParseComplexError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || ParseComplexError(text.to_string());
    if s.is_empty() {
        return Err(err());
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return s.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|_| err());
    };
    // Split at the last sign that is not a leading sign or an exponent sign.
    let bytes = body.as_bytes();
    let mut split = None;
    for idx in (1..bytes.len()).rev() {
        if (bytes[idx] == b'+' || bytes[idx] == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
            split = Some(idx);
            break;
        }
    }
    let (re_part, im_part) = match split {
        Some(idx) => (&body[..idx], &body[idx..]),
        None => ("", body),
    };
    let re = if re_part.is_empty() { 0.0 } else { re_part.parse::<f64>().map_err(|_| err())? };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| err())?,
    };
    Ok(C64::new(re, im))
}

/// Formats a complex constant so that [`parse_complex`] reads it back exactly.
pub fn format_complex(z: C64) -> String {
    let mut out = String::new();
    if z.im == 0.0 {
        write!(out, "{:?}", z.re).unwrap();
        return out;
    }
    if z.re != 0.0 {
        write!(out, "{:?}", z.re).unwrap();
        if z.im >= 0.0 {
            out.push('+');
        }
    }
    write!(out, "{:?}i", z.im).unwrap();
    out
}

/// Splits `[a,b,c]` into its comma-separated items.
pub fn parse_list(text: &str) -> Option<Vec<&str>> {
    let inner = text.trim().strip_prefix('[')?.strip_suffix(']')?;
    if inner.trim().is_empty() {
        return Some(Vec::new());
    }
    Some(inner.split(',').map(str::trim).collect())
}

/// Serde adapter storing a complex number as its text literal.
pub mod serde_complex {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::C64;

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_complex(*z))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        let text = String::deserialize(d)?;
        super::parse_complex(&text).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a list of complex literals.
pub mod serde_complex_vec {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::C64;

    pub fn serialize<S: Serializer>(zs: &[C64], s: S) -> Result<S::Ok, S::Error> {
        let texts: Vec<String> = zs.iter().map(|z| super::format_complex(*z)).collect();
        texts.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<C64>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts.iter().map(|t| super::parse_complex(t).map_err(serde::de::Error::custom)).collect()
    }
}
