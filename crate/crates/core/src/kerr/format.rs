//! Field file formats.
//!
//! Binary (little-endian throughout):
//!
//! | offset | size | content                          |
//! |--------|------|----------------------------------|
//! | 0      | 8    | magic `PLFIELD\0`                |
//! | 8      | 4    | format version, u32 (currently 1)|
//! | 12     | 24   | nx, ny, nz as u64                |
//! | 36     | 24   | dx, dy, dz as f64 (meters)       |
//! | 60     | 24   | origin x, y, z as f64 (meters)   |
//! | 84     | 8·n  | values as f64, x fastest         |
//!
//! Text: `#` starts a comment; the first four non-empty lines are
//!
//! ```text
//! polariton-field 1
//! dims nx ny nz
//! spacing dx dy dz
//! origin x y z
//! ```
//!
//! followed by nx·ny·nz whitespace-separated values, x fastest.

use super::ScalarField3D;
use std::io::{self, Write};
use std::path::Path;
use thiserror::Error;

pub const MAGIC: &[u8; 8] = b"PLFIELD\0";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 84;
const TEXT_TAG: &str = "polariton-field";

#[derive(Debug, Error)]
pub enum FieldFormatError {
    #[error("byte offset {offset}: {message}")]
    Binary { offset: usize, message: String },
    #[error("line {line}: {message}")]
    Text { line: usize, message: String },
    #[error("{0}")]
    Io(#[from] io::Error),
}

fn bin_err(offset: usize, message: impl Into<String>) -> FieldFormatError {
    FieldFormatError::Binary {
        offset,
        message: message.into(),
    }
}

fn text_err(line: usize, message: impl Into<String>) -> FieldFormatError {
    FieldFormatError::Text {
        line,
        message: message.into(),
    }
}

pub fn encode_binary(field: &ScalarField3D) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * field.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    for n in field.dims() {
        out.extend_from_slice(&(n as u64).to_le_bytes());
    }
    for x in field.spacing().into_iter().chain(field.origin()) {
        out.extend_from_slice(&x.to_le_bytes());
    }
    for v in field.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

fn read_u64(bytes: &[u8], at: usize) -> u64 {
    u64::from_le_bytes(bytes[at..at + 8].try_into().expect("8 bytes"))
}

fn read_f64(bytes: &[u8], at: usize) -> f64 {
    f64::from_le_bytes(bytes[at..at + 8].try_into().expect("8 bytes"))
}

pub fn decode_binary(bytes: &[u8]) -> Result<ScalarField3D, FieldFormatError> {
    if bytes.len() < HEADER_LEN {
        return Err(bin_err(bytes.len(), format!("truncated header ({HEADER_LEN} bytes needed)")));
    }
    if &bytes[..8] != MAGIC {
        return Err(bin_err(0, "bad magic; not a binary field file"));
    }
    let version = u32::from_le_bytes(bytes[8..12].try_into().expect("4 bytes"));
    if version != VERSION {
        return Err(bin_err(8, format!("unsupported version {version} (expected {VERSION})")));
    }
    let mut dims = [0usize; 3];
    for (a, d) in dims.iter_mut().enumerate() {
        let at = 12 + 8 * a;
        *d = usize::try_from(read_u64(bytes, at))
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| bin_err(at, "dimension must be a positive size"))?;
    }
    let spacing = [0, 1, 2].map(|a| read_f64(bytes, 36 + 8 * a));
    let origin = [0, 1, 2].map(|a| read_f64(bytes, 60 + 8 * a));
    for a in 0..3 {
        if !(spacing[a].is_finite() && spacing[a] > 0.0) {
            return Err(bin_err(36 + 8 * a, format!("spacing must be positive (got {})", spacing[a])));
        }
        if !origin[a].is_finite() {
            return Err(bin_err(60 + 8 * a, "origin must be finite"));
        }
    }
    let n = dims[0]
        .checked_mul(dims[1])
        .and_then(|n| n.checked_mul(dims[2]))
        .ok_or_else(|| bin_err(12, "grid size overflows"))?;
    let expected = n.checked_mul(8).and_then(|b| b.checked_add(HEADER_LEN));
    if expected != Some(bytes.len()) {
        return Err(bin_err(
            bytes.len().min(expected.unwrap_or(usize::MAX)),
            format!("payload holds {} bytes, dims {dims:?} need {}", bytes.len() - HEADER_LEN, n.saturating_mul(8)),
        ));
    }
    let mut values = Vec::with_capacity(n);
    for p in 0..n {
        let at = HEADER_LEN + 8 * p;
        let v = read_f64(bytes, at);
        if !v.is_finite() {
            return Err(bin_err(at, "non-finite value"));
        }
        values.push(v);
    }
    ScalarField3D::new(dims, spacing, origin, values).map_err(|e| bin_err(0, e.to_string()))
}

/// Values printed with Rust's shortest round-trip formatting.
pub fn encode_text(field: &ScalarField3D, mut out: impl Write) -> io::Result<()> {
    let [nx, ny, nz] = field.dims();
    let [dx, dy, dz] = field.spacing();
    let [ox, oy, oz] = field.origin();
    writeln!(out, "{TEXT_TAG} {VERSION}")?;
    writeln!(out, "dims {nx} {ny} {nz}")?;
    writeln!(out, "spacing {dx:?} {dy:?} {dz:?}")?;
    writeln!(out, "origin {ox:?} {oy:?} {oz:?}")?;
    for row in field.values().chunks(nx) {
        let line: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}

struct Tokens<'a> {
    inner: Box<dyn Iterator<Item = (usize, &'a str)> + 'a>,
    line: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        let inner = text.lines().enumerate().flat_map(|(i, line)| {
            let content = line.split('#').next().unwrap_or("");
            content.split_whitespace().map(move |t| (i + 1, t))
        });
        Self {
            inner: Box::new(inner),
            line: 1,
        }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str), FieldFormatError> {
        let tok = self
            .inner
            .next()
            .ok_or_else(|| text_err(self.line, format!("unexpected end of file, expected {what}")))?;
        self.line = tok.0;
        Ok(tok)
    }

    fn keyword(&mut self, key: &str) -> Result<(), FieldFormatError> {
        let (line, k) = self.next(key)?;
        if k != key {
            return Err(text_err(line, format!("expected `{key}`, found `{k}`")));
        }
        Ok(())
    }

    fn f64(&mut self, what: &str) -> Result<f64, FieldFormatError> {
        let (line, t) = self.next(what)?;
        t.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| text_err(line, format!("invalid {what} `{t}`")))
    }
}

pub fn decode_text(text: &str) -> Result<ScalarField3D, FieldFormatError> {
    let mut tok = Tokens::new(text);
    tok.keyword(TEXT_TAG)?;
    let (line, v) = tok.next("version")?;
    if v.parse::<u32>().ok() != Some(VERSION) {
        return Err(text_err(line, format!("unsupported version `{v}` (expected {VERSION})")));
    }
    tok.keyword("dims")?;
    let mut dims = [0usize; 3];
    for d in dims.iter_mut() {
        let (line, t) = tok.next("dimension")?;
        *d = t
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| text_err(line, format!("invalid dimension `{t}`")))?;
    }
    let header_line = tok.line;
    tok.keyword("spacing")?;
    let mut spacing = [0f64; 3];
    for s in spacing.iter_mut() {
        *s = tok.f64("spacing")?;
    }
    tok.keyword("origin")?;
    let mut origin = [0f64; 3];
    for o in origin.iter_mut() {
        *o = tok.f64("origin")?;
    }
    let n = dims[0]
        .checked_mul(dims[1])
        .and_then(|n| n.checked_mul(dims[2]))
        .ok_or_else(|| text_err(header_line, "grid size overflows"))?;
    let mut values = Vec::with_capacity(n.min(1 << 24));
    for _ in 0..n {
        values.push(tok.f64("value")?);
    }
    if let Ok((line, t)) = tok.next("end of file") {
        return Err(text_err(line, format!("trailing data `{t}` after {n} values")));
    }
    ScalarField3D::new(dims, spacing, origin, values).map_err(|e| text_err(1, e.to_string()))
}

pub fn write_binary(field: &ScalarField3D, path: &Path) -> io::Result<()> {
    std::fs::write(path, encode_binary(field))
}

pub fn write_text(field: &ScalarField3D, path: &Path) -> io::Result<()> {
    let mut w = io::BufWriter::new(std::fs::File::create(path)?);
    encode_text(field, &mut w)?;
    w.flush()
}

/// Reads either format; binary is recognised by its magic bytes.
pub fn read_field(path: &Path) -> Result<ScalarField3D, FieldFormatError> {
    let bytes = std::fs::read(path)?;
    if bytes.starts_with(MAGIC) {
        decode_binary(&bytes)
    } else {
        let text = std::str::from_utf8(&bytes).map_err(|e| bin_err(e.valid_up_to(), "neither a binary field nor UTF-8 text"))?;
        decode_text(text)
    }
}
