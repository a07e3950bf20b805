//! pencil and vector files: JSON with complex entries as [re, im] pairs

use std::fs;
use std::path::Path;

use pencil_backerr::linalg::{c, CMat, CVec, C64};
use pencil_backerr::{EigenPairQuery, ModelError, StructuredPencil};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: not valid JSON: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("{0}")]
    Field(String),
    #[error("invalid pencil: {0}")]
    Model(#[from] ModelError),
    #[error("cannot parse λ from {0:?}; expected i<real>, e.g. i0.25")]
    Lambda(String),
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

type Rows = Vec<Vec<[f64; 2]>>;

/// on-disk pencil; matrices are row-major lists of rows
#[derive(Debug, Clone, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct PencilFile {
    pub schema_version: u64,
    pub n: usize,
    pub m: usize,
    pub J: Rows,
    pub R: Rows,
    pub E: Rows,
    pub B: Rows,
    pub S: Rows,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VectorFile {
    pub schema_version: u64,
    pub x1: Vec<[f64; 2]>,
    pub x2: Vec<[f64; 2]>,
    pub x3: Vec<[f64; 2]>,
}

fn rows_of(a: &CMat) -> Rows {
    (0..a.nrows()).map(|i| (0..a.ncols()).map(|j| [a[(i, j)].re, a[(i, j)].im]).collect()).collect()
}

fn pairs_of(v: &CVec) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

impl PencilFile {
    pub fn from_pencil(p: &StructuredPencil, metadata: Option<Metadata>) -> Self {
        PencilFile {
            schema_version: SCHEMA_VERSION,
            n: p.n(),
            m: p.m(),
            J: rows_of(p.j()),
            R: rows_of(p.r()),
            E: rows_of(p.e()),
            B: rows_of(p.b()),
            S: rows_of(p.s()),
            metadata,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("finite entries serialize");
        s.push('\n');
        s
    }
}

impl VectorFile {
    pub fn from_query(q: &EigenPairQuery) -> Self {
        VectorFile { schema_version: SCHEMA_VERSION, x1: pairs_of(q.x1()), x2: pairs_of(q.x2()), x3: pairs_of(q.x3()) }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("finite entries serialize");
        s.push('\n');
        s
    }
}

fn field_err(msg: String) -> InputError {
    InputError::Field(msg)
}

fn entry(v: &Value, loc: &str) -> Result<C64, InputError> {
    let bad = || field_err(format!("{loc}: expected a [re, im] pair of finite numbers, got {v}"));
    let arr = v.as_array().ok_or_else(bad)?;
    if arr.len() != 2 {
        return Err(bad());
    }
    let re = arr[0].as_f64().ok_or_else(bad)?;
    let im = arr[1].as_f64().ok_or_else(bad)?;
    if !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(c(re, im))
}

fn matrix(doc: &Value, name: &str, nr: usize, nc: usize) -> Result<CMat, InputError> {
    let v = doc.get(name).ok_or_else(|| field_err(format!("missing field {name}")))?;
    let rows = v.as_array().ok_or_else(|| field_err(format!("{name}: expected a list of rows")))?;
    if rows.len() != nr {
        return Err(field_err(format!("{name}: expected {nr} rows, got {}", rows.len())));
    }
    let mut out = CMat::zeros(nr, nc);
    for (i, row) in rows.iter().enumerate() {
        let cols = row.as_array().ok_or_else(|| field_err(format!("{name} row {}: expected a list of entries", i + 1)))?;
        if cols.len() != nc {
            return Err(field_err(format!("{name} row {}: expected {nc} entries, got {}", i + 1, cols.len())));
        }
        for (j, z) in cols.iter().enumerate() {
            out[(i, j)] = entry(z, &format!("{name} row {}, column {}", i + 1, j + 1))?;
        }
    }
    Ok(out)
}

fn vector(doc: &Value, name: &str, len: usize) -> Result<CVec, InputError> {
    let v = doc.get(name).ok_or_else(|| field_err(format!("missing field {name}")))?;
    let items = v.as_array().ok_or_else(|| field_err(format!("{name}: expected a list of [re, im] pairs")))?;
    if items.len() != len {
        return Err(field_err(format!("{name}: expected {len} entries, got {}", items.len())));
    }
    let mut out = CVec::zeros(len);
    for (i, z) in items.iter().enumerate() {
        out[i] = entry(z, &format!("{name} entry {}", i + 1))?;
    }
    Ok(out)
}

fn dimension(doc: &Value, name: &str) -> Result<usize, InputError> {
    let v = doc.get(name).ok_or_else(|| field_err(format!("missing field {name}")))?;
    match v.as_u64() {
        Some(k) if k >= 1 => Ok(k as usize),
        _ => Err(field_err(format!("{name}: expected a positive integer, got {v}"))),
    }
}

fn check_schema(doc: &Value) -> Result<(), InputError> {
    match doc.get("schema_version").and_then(Value::as_u64) {
        Some(SCHEMA_VERSION) => Ok(()),
        Some(v) => Err(field_err(format!("schema_version {v} is not supported (expected {SCHEMA_VERSION})"))),
        None => Err(field_err("missing or non-integer schema_version".into())),
    }
}

fn parse_json(text: &str, path: &str) -> Result<Value, InputError> {
    serde_json::from_str(text).map_err(|source| InputError::Json { path: path.into(), source })
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|source| InputError::Io { path: path.display().to_string(), source })
}

pub fn parse_pencil(text: &str, origin: &str) -> Result<(StructuredPencil, Option<Metadata>), InputError> {
    let doc = parse_json(text, origin)?;
    check_schema(&doc)?;
    let n = dimension(&doc, "n")?;
    let m = dimension(&doc, "m")?;
    let j = matrix(&doc, "J", n, n)?;
    let r = matrix(&doc, "R", n, n)?;
    let e = matrix(&doc, "E", n, n)?;
    let b = matrix(&doc, "B", n, m)?;
    let s = matrix(&doc, "S", m, m)?;
    let metadata = match doc.get("metadata") {
        None | Some(Value::Null) => None,
        Some(v) => Some(serde_json::from_value(v.clone()).map_err(|e| field_err(format!("metadata: {e}")))?),
    };
    Ok((StructuredPencil::new(j, r, e, b, s)?, metadata))
}

pub fn read_pencil(path: &Path) -> Result<(StructuredPencil, Option<Metadata>), InputError> {
    parse_pencil(&read(path)?, &path.display().to_string())
}

pub fn write_pencil(path: &Path, p: &StructuredPencil, metadata: Option<Metadata>) -> Result<(), InputError> {
    fs::write(path, PencilFile::from_pencil(p, metadata).to_json()).map_err(|source| InputError::Io { path: path.display().to_string(), source })
}

/// (x1, x2, x3) for a pencil with dimensions (n, m)
pub fn parse_vectors(text: &str, origin: &str, n: usize, m: usize) -> Result<(CVec, CVec, CVec), InputError> {
    let doc = parse_json(text, origin)?;
    check_schema(&doc)?;
    Ok((vector(&doc, "x1", n)?, vector(&doc, "x2", n)?, vector(&doc, "x3", m)?))
}

pub fn read_vectors(path: &Path, n: usize, m: usize) -> Result<(CVec, CVec, CVec), InputError> {
    parse_vectors(&read(path)?, &path.display().to_string(), n, m)
}

/// accepts i<t>, -i<t>, <t>i and <a>±<b>i; validation of λ ∈ iR \ {0} happens later
pub fn parse_lambda(text: &str) -> Result<C64, InputError> {
    let s: String = text.chars().filter(|ch| !ch.is_whitespace()).collect();
    let err = || InputError::Lambda(text.to_string());
    let num = |t: &str| -> Result<f64, InputError> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => t.parse::<f64>().map_err(|_| err()),
        }
    };
    if let Some(rest) = s.strip_prefix("-i") {
        return Ok(c(0.0, -num(rest)?));
    }
    if let Some(rest) = s.strip_prefix("+i").or_else(|| s.strip_prefix('i')) {
        return Ok(c(0.0, num(rest)?));
    }
    if let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) {
        let bytes = body.as_bytes();
        let split = (1..bytes.len()).rev().find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        return match split {
            Some(k) => Ok(c(num(&body[..k]).map_err(|_| err())?, num(&body[k..])?)),
            None => Ok(c(0.0, num(body)?)),
        };
    }
    if s.is_empty() {
        return Err(err());
    }
    Ok(c(s.parse::<f64>().map_err(|_| err())?, 0.0))
}
