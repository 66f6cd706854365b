//! Line-based text formats.
//!
//! Complex files:
//!
//! ```text
//! # comment
//! dim 2
//! vertices 6
//! s 0 2 4 1
//! s 0 2 5 -1
//! ```
//!
//! Each `s` line lists the `n + 1` vertices of a maximal simplex followed by its
//! sign. The sign multiplies the orientation of the vertex tuple as written;
//! files written by this crate always use sorted tuples, so there the sign is
//! relative to sorted order.
//!
//! Subcomplex files use a `sub <k>` header followed by `s v0 ... vk <sign>` lines
//! whose labels refer to the parent complex.

use std::path::Path;

use super::{OrientedSubcomplex, SimplicialComplex};
use crate::error::{Error, Result};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Non-empty, non-comment lines with their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim();
        (!l.is_empty() && !l.starts_with('#')).then(|| (i + 1, l.split_whitespace().collect()))
    })
}

fn parse_usize(line: usize, tok: &str) -> Result<usize> {
    tok.parse().map_err(|_| parse_err(line, format!("expected a non-negative integer, got {tok:?}")))
}

fn parse_sign(line: usize, tok: &str) -> Result<i8> {
    match tok {
        "1" | "+1" => Ok(1),
        "-1" => Ok(-1),
        _ => Err(parse_err(line, format!("sign must be 1 or -1, got {tok:?}"))),
    }
}

fn parse_simplex_line(line: usize, toks: &[&str], k: usize) -> Result<(Vec<usize>, i8)> {
    if toks[0] != "s" {
        return Err(parse_err(line, format!("expected an `s` line, got {:?}", toks[0])));
    }
    if toks.len() != k + 3 {
        return Err(parse_err(line, format!("expected {} vertices and a sign", k + 1)));
    }
    let verts = toks[1..=k + 1].iter().map(|t| parse_usize(line, t)).collect::<Result<Vec<_>>>()?;
    Ok((verts, parse_sign(line, toks[k + 2])?))
}

pub fn parse_complex(text: &str) -> Result<SimplicialComplex> {
    let mut lines = content_lines(text);
    let (l1, t1) = lines.next().ok_or_else(|| parse_err(1, "missing `dim` header"))?;
    if t1.len() != 2 || t1[0] != "dim" {
        return Err(parse_err(l1, "expected `dim <n>`"));
    }
    let dim = parse_usize(l1, t1[1])?;
    let (l2, t2) = lines.next().ok_or_else(|| parse_err(l1 + 1, "missing `vertices` header"))?;
    if t2.len() != 2 || t2[0] != "vertices" {
        return Err(parse_err(l2, "expected `vertices <count>`"));
    }
    let count = parse_usize(l2, t2[1])?;
    let mut simplices = Vec::new();
    for (line, toks) in lines {
        simplices.push(parse_simplex_line(line, &toks, dim)?);
    }
    if simplices.is_empty() {
        return Err(Error::Validation("no maximal simplices".into()));
    }
    SimplicialComplex::new(count, simplices)
}

pub fn write_complex(k: &SimplicialComplex) -> String {
    let mut out = format!("dim {}\nvertices {}\n", k.dim(), k.vertex_count());
    for (s, sign) in k.maximal().iter().zip(k.signs()) {
        let verts: Vec<String> = s.iter().map(usize::to_string).collect();
        out.push_str(&format!("s {} {}\n", verts.join(" "), sign));
    }
    out
}

pub fn parse_subcomplex(parent: &SimplicialComplex, text: &str) -> Result<OrientedSubcomplex> {
    let mut lines = content_lines(text);
    let (l1, t1) = lines.next().ok_or_else(|| parse_err(1, "missing `sub` header"))?;
    if t1.len() != 2 || t1[0] != "sub" {
        return Err(parse_err(l1, "expected `sub <k>`"));
    }
    let k = parse_usize(l1, t1[1])?;
    let mut simplices = Vec::new();
    for (line, toks) in lines {
        simplices.push(parse_simplex_line(line, &toks, k)?);
    }
    OrientedSubcomplex::new(parent, k, simplices)
}

pub fn write_subcomplex(sub: &OrientedSubcomplex) -> String {
    let mut out = format!("sub {}\n", sub.dim());
    for (s, sign) in sub.simplices() {
        let verts: Vec<String> = s.iter().map(usize::to_string).collect();
        out.push_str(&format!("s {} {}\n", verts.join(" "), sign));
    }
    out
}

pub(crate) fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })
}

/// Loads and validates a complex file.
pub fn load_complex(path: impl AsRef<Path>) -> Result<SimplicialComplex> {
    parse_complex(&read_file(path.as_ref())?)
}

pub fn load_subcomplex(parent: &SimplicialComplex, path: impl AsRef<Path>) -> Result<OrientedSubcomplex> {
    parse_subcomplex(parent, &read_file(path.as_ref())?)
}

/// Writes through a temporary sibling file and renames, so readers never see a
/// partial file.
pub fn write_atomic(path: impl AsRef<Path>, contents: &str) -> Result<()> {
    let path = path.as_ref();
    let io = |e: std::io::Error| Error::Io { path: path.display().to_string(), message: e.to_string() };
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("out")
    ));
    std::fs::write(&tmp, contents).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)
}

pub fn save_complex(k: &SimplicialComplex, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path, &write_complex(k))
}
