//! File formats for functions and spectra.
//!
//! JSON: `{"n": int, "values": [2^n reals]}`; a spectrum carries
//! `"repr": "spectrum"` and its coefficients under `"values"`.
//!
//! Binary: 4-byte magic (`CUBF` for functions, `CUBS` for spectra), `n` as a
//! little-endian `u32`, then `2^n` little-endian IEEE-754 doubles. Value index
//! `j` is the point whose coordinate `x_{i+1}` is bit `i` of `j`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cube::{CubeFunction, MAX_DIM};
use crate::error::{Error, Result};
use crate::spectral::Spectrum;

pub const FUNCTION_MAGIC: &[u8; 4] = b"CUBF";
pub const SPECTRUM_MAGIC: &[u8; 4] = b"CUBS";

#[derive(Serialize, Deserialize)]
struct Dense {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    repr: Option<String>,
    n: usize,
    values: Vec<f64>,
}

fn format_err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

pub fn function_to_json(f: &CubeFunction) -> String {
    serde_json::to_string(&Dense {
        repr: None,
        n: f.n(),
        values: f.values().to_vec(),
    })
    .expect("finite values serialize")
}

pub fn function_from_json(text: &str) -> Result<CubeFunction> {
    let d: Dense = serde_json::from_str(text)?;
    match d.repr.as_deref() {
        None | Some("function") => CubeFunction::new(d.n, d.values),
        Some(other) => Err(format_err(format!("expected a function, found repr \"{other}\""))),
    }
}

pub fn spectrum_to_json(s: &Spectrum) -> String {
    serde_json::to_string(&Dense {
        repr: Some("spectrum".into()),
        n: s.n(),
        values: s.coeffs().to_vec(),
    })
    .expect("finite values serialize")
}

pub fn spectrum_from_json(text: &str) -> Result<Spectrum> {
    let d: Dense = serde_json::from_str(text)?;
    if d.repr.as_deref() != Some("spectrum") {
        return Err(format_err("spectrum JSON needs \"repr\": \"spectrum\""));
    }
    Spectrum::new(d.n, d.values)
}

fn encode(magic: &[u8; 4], n: usize, values: &[f64]) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + 8 * values.len());
    out.extend_from_slice(magic);
    out.extend_from_slice(&(n as u32).to_le_bytes());
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

fn decode(magic: &[u8; 4], bytes: &[u8]) -> Result<(usize, Vec<f64>)> {
    if bytes.len() < 8 || &bytes[..4] != magic {
        return Err(format_err(format!(
            "missing {} header",
            String::from_utf8_lossy(magic)
        )));
    }
    let n = u32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes")) as usize;
    if n == 0 || n > MAX_DIM {
        return Err(format_err(format!("dimension {n} outside 1..={MAX_DIM}")));
    }
    let body = &bytes[8..];
    if body.len() != 8 << n {
        return Err(format_err(format!(
            "expected {} payload bytes for n = {n}, found {}",
            8usize << n,
            body.len()
        )));
    }
    let values = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    Ok((n, values))
}

pub fn function_to_bytes(f: &CubeFunction) -> Vec<u8> {
    encode(FUNCTION_MAGIC, f.n(), f.values())
}

pub fn function_from_bytes(bytes: &[u8]) -> Result<CubeFunction> {
    let (n, values) = decode(FUNCTION_MAGIC, bytes)?;
    CubeFunction::new(n, values)
}

pub fn spectrum_to_bytes(s: &Spectrum) -> Vec<u8> {
    encode(SPECTRUM_MAGIC, s.n(), s.coeffs())
}

pub fn spectrum_from_bytes(bytes: &[u8]) -> Result<Spectrum> {
    let (n, values) = decode(SPECTRUM_MAGIC, bytes)?;
    Spectrum::new(n, values)
}

/// Reads a function in either format, recognising the binary magic.
pub fn read_function(path: impl AsRef<Path>) -> Result<CubeFunction> {
    let bytes = fs::read(path)?;
    if bytes.starts_with(FUNCTION_MAGIC) {
        function_from_bytes(&bytes)
    } else {
        let text = std::str::from_utf8(&bytes).map_err(|e| format_err(e.to_string()))?;
        function_from_json(text)
    }
}

/// Writes binary when the extension is `.bin` or `.cubf`, JSON otherwise.
pub fn write_function(path: impl AsRef<Path>, f: &CubeFunction) -> Result<()> {
    let path = path.as_ref();
    let binary = matches!(
        path.extension().and_then(|e| e.to_str()),
        Some("bin") | Some("cubf")
    );
    if binary {
        fs::write(path, function_to_bytes(f))?;
    } else {
        fs::write(path, function_to_json(f))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_nonneg, seeded_rng};
    use crate::spectral::wht_forward;

    #[test]
    fn json_round_trip() {
        let f = random_nonneg(4, &mut seeded_rng(2)).unwrap();
        let text = function_to_json(&f);
        assert!(text.starts_with("{\"n\":4,\"values\":["));
        assert_eq!(function_from_json(&text).unwrap(), f);
        let s = wht_forward(&f);
        let st = spectrum_to_json(&s);
        assert!(st.contains("\"repr\":\"spectrum\""));
        assert_eq!(spectrum_from_json(&st).unwrap(), s);
        assert!(function_from_json(&st).is_err());
        assert!(spectrum_from_json(&text).is_err());
    }

    #[test]
    fn json_rejects_bad_length() {
        assert!(function_from_json(r#"{"n":2,"values":[1,2,3]}"#).is_err());
        assert!(function_from_json(r#"{"n":2}"#).is_err());
    }

    #[test]
    fn binary_round_trip() {
        let f = random_nonneg(3, &mut seeded_rng(5)).unwrap();
        let bytes = function_to_bytes(&f);
        assert_eq!(&bytes[..4], b"CUBF");
        assert_eq!(u32::from_le_bytes(bytes[4..8].try_into().unwrap()), 3);
        assert_eq!(bytes.len(), 8 + 8 * 8);
        assert_eq!(f64::from_le_bytes(bytes[8..16].try_into().unwrap()), f.get(0));
        assert_eq!(function_from_bytes(&bytes).unwrap(), f);
        assert!(function_from_bytes(&bytes[..20]).is_err());
        let s = wht_forward(&f);
        assert_eq!(spectrum_from_bytes(&spectrum_to_bytes(&s)).unwrap(), s);
        assert!(spectrum_from_bytes(&bytes).is_err());
    }
}
