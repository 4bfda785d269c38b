//! Plain-text code files.
//!
//! ```text
//! cdc q=2 v=4 k=2 d=4 count=2
//!
//! 1000
//! 0100
//!
//! 0010
//! 0001
//! # provenance lines
//! ```
//!
//! Symbols are single digits for `q <= 10` and whitespace-separated integers
//! otherwise. Files ending in `.gz` are gzip-compressed.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use flate2::read::GzDecoder;
use flate2::write::GzEncoder;
use flate2::Compression;
use thiserror::Error;

use crate::cdc::{Cdc, CdcError};
use crate::gf::Field;
use crate::linalg::{FqMatrix, Subspace};

#[derive(Debug, Error)]
pub enum CodeFileError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("header says count={header} but the file holds {distinct} distinct codewords ({blocks} blocks)")]
    CountMismatch {
        header: usize,
        distinct: usize,
        blocks: usize,
    },
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Cdc(#[from] CdcError),
}

fn perr<T>(line: usize, msg: impl Into<String>) -> Result<T, CodeFileError> {
    Err(CodeFileError::Parse {
        line,
        msg: msg.into(),
    })
}

/// A parsed file. `warnings` collects non-fatal findings such as duplicates.
#[derive(Debug, Clone)]
pub struct CodeFile {
    pub code: Cdc,
    pub warnings: Vec<String>,
}

/// Parses one row of symbols.
pub fn parse_row(
    field: &Field,
    text: &str,
    width: usize,
    line: usize,
) -> Result<Vec<u16>, CodeFileError> {
    let q = field.q();
    let symbols: Vec<u32> = if q <= 10 {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        t.chars()
            .map(|c| c.to_digit(10).ok_or(()))
            .collect::<Result<_, _>>()
            .or_else(|_| perr(line, format!("unexpected symbol in {text:?}")))?
    } else {
        text.split_whitespace()
            .map(|s| s.parse::<u32>())
            .collect::<Result<_, _>>()
            .or_else(|_| perr(line, format!("unexpected symbol in {text:?}")))?
    };
    if symbols.len() != width {
        return perr(
            line,
            format!("expected {width} symbols, found {}", symbols.len()),
        );
    }
    if let Some(s) = symbols.iter().find(|&&s| s >= q) {
        return perr(line, format!("symbol {s} is outside GF({q})"));
    }
    Ok(symbols.into_iter().map(|s| s as u16).collect())
}

pub fn format_row(field: &Field, row: &[u16]) -> String {
    if field.q() <= 10 {
        row.iter()
            .map(|x| char::from_digit(*x as u32, 10).expect("digit"))
            .collect()
    } else {
        row.iter().map(u16::to_string).collect::<Vec<_>>().join(" ")
    }
}

fn header_field(tokens: &[&str], key: &str) -> Option<usize> {
    tokens
        .iter()
        .find_map(|t| t.strip_prefix(key)?.strip_prefix('=')?.parse().ok())
}

pub fn parse(text: &str) -> Result<CodeFile, CodeFileError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (hline, header) = loop {
        match lines.next() {
            Some((_, l)) if l.is_empty() || l.starts_with('#') => continue,
            Some(x) => break x,
            None => return perr(1, "missing header"),
        }
    };
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.first() != Some(&"cdc") {
        return perr(hline, "header must start with `cdc`");
    }
    let get = |key: &str| {
        header_field(&tokens, key).ok_or_else(|| CodeFileError::Parse {
            line: hline,
            msg: format!("header lacks {key}=<n>"),
        })
    };
    let (q, v, k, d, count) = (get("q")?, get("v")?, get("k")?, get("d")?, get("count")?);
    let field = Field::new(q as u32).map_err(|e| CodeFileError::Parse {
        line: hline,
        msg: e.to_string(),
    })?;
    if k == 0 || k > v {
        return perr(hline, format!("need 1 ≤ k ≤ v (k={k}, v={v})"));
    }

    let mut words = Vec::new();
    let mut provenance = Vec::new();
    let mut block: Vec<Vec<u16>> = Vec::new();
    let mut block_start = 0;
    let finish = |block: &mut Vec<Vec<u16>>,
                  start: usize,
                  words: &mut Vec<Subspace>|
     -> Result<(), CodeFileError> {
        if block.is_empty() {
            return Ok(());
        }
        if block.len() != k {
            return perr(
                start,
                format!("codeword has {} rows, expected k={k}", block.len()),
            );
        }
        let data: Vec<u16> = block.drain(..).flatten().collect();
        let u = Subspace::from_rows(&FqMatrix::from_data(&field, k, v, data).expect("k x v"));
        if u.dim() != k {
            return perr(
                start,
                format!("codeword has rank {}, expected {k}", u.dim()),
            );
        }
        words.push(u);
        Ok(())
    };
    for (no, l) in lines {
        if let Some(c) = l.strip_prefix('#') {
            provenance.push(c.trim().to_string());
        } else if l.is_empty() {
            finish(&mut block, block_start, &mut words)?;
        } else {
            if block.is_empty() {
                block_start = no;
            }
            block.push(parse_row(&field, l, v, no)?);
        }
    }
    finish(&mut block, block_start, &mut words)?;

    let blocks = words.len();
    let mut code = Cdc::new(&field, v, k, d, words)?;
    code.provenance = provenance;
    let mut warnings = Vec::new();
    if code.duplicates_removed() > 0 {
        warnings.push(format!(
            "dedup: removed {} duplicate codewords",
            code.duplicates_removed()
        ));
    }
    if code.len() != count {
        return Err(CodeFileError::CountMismatch {
            header: count,
            distinct: code.len(),
            blocks,
        });
    }
    Ok(CodeFile { code, warnings })
}

pub fn serialize(code: &Cdc) -> String {
    let f = code.field();
    let mut out = format!(
        "cdc q={} v={} k={} d={} count={}\n",
        f.q(),
        code.v(),
        code.k(),
        code.claimed_d(),
        code.len()
    );
    for u in code.codewords() {
        out.push('\n');
        let b = u.basis();
        for r in 0..b.rows() {
            out.push_str(&format_row(f, b.row(r)));
            out.push('\n');
        }
    }
    if !code.provenance.is_empty() {
        out.push('\n');
        for p in &code.provenance {
            out.push_str("# ");
            out.push_str(p);
            out.push('\n');
        }
    }
    out
}

fn is_gz(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "gz")
}

pub fn read_text(path: &Path) -> Result<String, CodeFileError> {
    let raw = fs::read(path)?;
    if is_gz(path) {
        let mut s = String::new();
        GzDecoder::new(&raw[..]).read_to_string(&mut s)?;
        Ok(s)
    } else {
        String::from_utf8(raw).map_err(|e| CodeFileError::Parse {
            line: 0,
            msg: format!("not UTF-8: {e}"),
        })
    }
}

pub fn read(path: &Path) -> Result<CodeFile, CodeFileError> {
    parse(&read_text(path)?)
}

pub fn write(path: &Path, code: &Cdc) -> Result<(), CodeFileError> {
    let text = serialize(code);
    if is_gz(path) {
        let mut enc = GzEncoder::new(fs::File::create(path)?, Compression::default());
        enc.write_all(text.as_bytes())?;
        enc.finish()?;
    } else {
        fs::write(path, text)?;
    }
    Ok(())
}

/// A square matrix, one row per line; blank and `#` lines are skipped.
pub fn parse_matrix(field: &Field, text: &str) -> Result<FqMatrix, CodeFileError> {
    let mut rows: Vec<Vec<u16>> = Vec::new();
    let mut width = None;
    for (i, l) in text.lines().enumerate() {
        let l = l.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let w = *width.get_or_insert_with(|| {
            if field.q() <= 10 {
                l.chars().filter(|c| !c.is_whitespace()).count()
            } else {
                l.split_whitespace().count()
            }
        });
        rows.push(parse_row(field, l, w, i + 1)?);
    }
    let n = rows.len();
    if n == 0 || width != Some(n) {
        return perr(
            1,
            format!(
                "expected a square matrix, found {n} rows of width {}",
                width.unwrap_or(0)
            ),
        );
    }
    Ok(FqMatrix::from_data(field, n, n, rows.concat()).expect("n x n"))
}
