//! File ingestion and canonical output.
//!
//! Signals are read from one-number-per-line CSV, images from ASCII (`P2`) or
//! binary (`P5`, 8/16-bit big-endian) PGM. Every number this crate writes uses
//! 17 significant digits so that reading it back yields the same bits.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::signal::{GrayImage, Signal};

/// Formats a float with 17 significant digits in scientific notation.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// One CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Real(v) => fmt_f64(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => {
                if s.contains([',', '"', '\n']) {
                    format!("\"{}\"", s.replace('"', "\"\""))
                } else {
                    s.clone()
                }
            }
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Rows of cells with an optional `#`-prefixed header line.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Option<Vec<String>>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn with_header(header: &[&str]) -> Self {
        Table {
            header: Some(header.iter().map(|s| s.to_string()).collect()),
            rows: Vec::new(),
        }
    }

    pub fn single_column(values: &[f64]) -> Self {
        Table {
            header: None,
            rows: values.iter().map(|v| vec![Cell::Real(*v)]).collect(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        self.rows.push(row);
    }

    /// Canonical text: comma separated, `\n` line endings, 17 significant digits.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        if let Some(h) = &self.header {
            out.push_str("# ");
            out.push_str(&h.join(","));
            out.push('\n');
        }
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Writes `bytes` to `path` through a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or_else(|| Path::new("."));
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    let tmp = dir.join(format!(".{}.tmp-{}", name, std::process::id()));
    let res = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if res.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    res.map_err(|e| Error::io(path, e))
}

pub fn save_table_csv(table: &Table, path: &Path) -> Result<()> {
    write_atomic(path, table.to_csv_string().as_bytes())
}

pub fn save_signal_csv(signal: &Signal, path: &Path) -> Result<()> {
    save_table_csv(&Table::single_column(signal.samples()), path)
}

pub fn load_signal_csv(path: &Path) -> Result<Signal> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_signal_csv(&text, &path.display().to_string())
}

/// Parses one real number per line. A single leading line starting with `#`
/// is treated as a header; blank lines are skipped.
pub fn parse_signal_csv(text: &str, origin: &str) -> Result<Signal> {
    let mut samples = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if idx == 0 && line.starts_with('#') {
            continue;
        }
        let value: f64 = line.parse().map_err(|_| Error::Parse {
            path: origin.to_string(),
            position: format!("line {}", idx + 1),
            message: format!("'{line}' is not a real number"),
        })?;
        if !value.is_finite() {
            return Err(Error::Range(format!(
                "{origin}: line {}: non-finite value '{line}'",
                idx + 1
            )));
        }
        samples.push(value);
    }
    if samples.is_empty() {
        return Err(Error::Parse {
            path: origin.to_string(),
            position: "end of file".into(),
            message: "no samples".into(),
        });
    }
    Signal::new(samples)
}

pub fn load_image_pgm(path: &Path) -> Result<GrayImage> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_pgm(&bytes, &path.display().to_string())
}

struct PgmReader<'a> {
    bytes: &'a [u8],
    pos: usize,
    origin: &'a str,
}

impl<'a> PgmReader<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            path: self.origin.to_string(),
            position: format!("byte {}", self.pos),
            message: message.into(),
        }
    }

    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if b == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Result<&'a str> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len()
            && !self.bytes[self.pos].is_ascii_whitespace()
            && self.bytes[self.pos] != b'#'
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("unexpected end of data"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos]).map_err(|_| self.err("non-ASCII token"))
    }

    fn number(&mut self, what: &str) -> Result<u32> {
        self.skip_space_and_comments();
        let start = self.pos;
        let tok = self.token()?;
        tok.parse::<u32>().map_err(|_| {
            let mut e = self.err(format!("expected {what}, found '{tok}'"));
            if let Error::Parse { position, .. } = &mut e {
                *position = format!("byte {start}");
            }
            e
        })
    }
}

/// Parses a Netpbm graymap. The declared range is `(0, maxval)`.
pub fn parse_pgm(bytes: &[u8], origin: &str) -> Result<GrayImage> {
    let mut r = PgmReader {
        bytes,
        pos: 0,
        origin,
    };
    let magic = r.token()?;
    let binary = match magic {
        "P2" => false,
        "P5" => true,
        other => return Err(r.err(format!("unsupported magic '{other}', expected P2 or P5"))),
    };
    let width = r.number("width")? as usize;
    let height = r.number("height")? as usize;
    let maxval = r.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(r.err("image dimensions must be positive"));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(Error::Range(format!(
            "{origin}: maxval {maxval} outside [1, 65535]"
        )));
    }
    let count = width * height;
    let mut pixels = Vec::with_capacity(count);
    if binary {
        // exactly one whitespace byte separates the header from the raster
        if r.pos >= bytes.len() || !bytes[r.pos].is_ascii_whitespace() {
            return Err(r.err("missing whitespace after maxval"));
        }
        r.pos += 1;
        let bpp = if maxval < 256 { 1 } else { 2 };
        let need = count * bpp;
        if bytes.len() - r.pos < need {
            return Err(r.err(format!(
                "raster truncated: need {} bytes, have {}",
                need,
                bytes.len() - r.pos
            )));
        }
        for i in 0..count {
            let off = r.pos + i * bpp;
            let v = if bpp == 1 {
                bytes[off] as u32
            } else {
                u16::from_be_bytes([bytes[off], bytes[off + 1]]) as u32
            };
            if v > maxval {
                return Err(Error::Range(format!(
                    "{origin}: byte {off}: pixel value {v} exceeds maxval {maxval}"
                )));
            }
            pixels.push(v as f64);
        }
    } else {
        for _ in 0..count {
            r.skip_space_and_comments();
            let start = r.pos;
            let v = r.number("pixel value")?;
            if v > maxval {
                return Err(Error::Range(format!(
                    "{origin}: byte {start}: pixel value {v} exceeds maxval {maxval}"
                )));
            }
            pixels.push(v as f64);
        }
    }
    GrayImage::new(width, height, pixels, (0.0, maxval as f64))
}

/// `serde_json` formatter that writes every float with 17 significant digits.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sig17Formatter;

impl serde_json::ser::Formatter for Sig17Formatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Serializes `value` as JSON with 17-significant-digit floats and a trailing newline.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17Formatter);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::InvalidParameter(format!("JSON serialization failed: {e}")))?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

pub fn save_json<T: Serialize + ?Sized>(value: &T, path: &Path) -> Result<()> {
    write_atomic(path, to_json_string(value)?.as_bytes())
}
