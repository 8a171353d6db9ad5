//! The module file format.
//!
//! A module file is line-oriented UTF-8 text. Blank lines and lines starting
//! with `#` are ignored when reading; the canonical writer never emits them,
//! so `write(read(f)) == f` for canonical files and `read(write(m)) == m`
//! always.
//!
//! ```text
//! p 3
//! rank 2
//! ext 1
//! dim 3
//! gen
//! 0 1 0
//! 0 0 1
//! 0 0 0
//! gen
//! 0 0 0
//! 0 0 0
//! 0 0 0
//! ```
//!
//! `ext` is optional and defaults to 1; `rank`-many `gen` blocks follow, each
//! with `dim` rows of `dim` integers (field element codes, row-major).

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::rep::{GroupSpec, Module};

pub fn write_module(m: &Module) -> String {
    let mut out = String::new();
    out.push_str(&format!("p {}\n", m.group().p));
    out.push_str(&format!("rank {}\n", m.group().rank));
    out.push_str(&format!("ext {}\n", m.field().degree()));
    out.push_str(&format!("dim {}\n", m.dim()));
    for g in m.gens() {
        out.push_str("gen\n");
        for i in 0..m.dim() {
            let row: Vec<String> = (0..m.dim()).map(|j| g.get(i, j).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        for (idx, line) in self.inner.by_ref() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            return Some((idx + 1, t));
        }
        None
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn expect_kv(lines: &mut Lines, key: &str) -> Result<(usize, u64)> {
    let (ln, t) = lines
        .next_content()
        .ok_or_else(|| parse_err(0, format!("unexpected end of file, expected `{key}`")))?;
    let mut parts = t.split_whitespace();
    let k = parts.next().unwrap_or("");
    if k != key {
        return Err(parse_err(ln, format!("expected `{key}`, found `{k}`")));
    }
    let v = parts
        .next()
        .ok_or_else(|| parse_err(ln, format!("`{key}` needs a value")))?;
    if parts.next().is_some() {
        return Err(parse_err(ln, format!("trailing tokens after `{key}`")));
    }
    let value = v
        .parse::<u64>()
        .map_err(|_| parse_err(ln, format!("`{key}` value `{v}` is not a nonnegative integer")))?;
    Ok((ln, value))
}

/// Parses a module file; the result passes `validate`.
pub fn read_module(text: &str) -> Result<Module> {
    let mut lines = Lines { inner: text.lines().enumerate() };
    let (pl, p) = expect_kv(&mut lines, "p")?;
    let (_, rank) = expect_kv(&mut lines, "rank")?;
    if rank == 0 {
        return Err(parse_err(pl, "rank must be >= 1"));
    }
    // `ext` is optional: peek at the next content line
    let (next_ln, next) = lines
        .next_content()
        .ok_or_else(|| parse_err(0, "unexpected end of file, expected `ext` or `dim`"))?;
    let (ext, dim_line) = if next.starts_with("ext") {
        let v = next
            .split_whitespace()
            .nth(1)
            .ok_or_else(|| parse_err(next_ln, "`ext` needs a value"))?
            .parse::<u64>()
            .map_err(|_| parse_err(next_ln, "`ext` value is not an integer"))?;
        (v, None)
    } else {
        (1, Some((next_ln, next)))
    };
    let (dl, dim) = match dim_line {
        Some((ln, t)) => {
            let mut parts = t.split_whitespace();
            if parts.next() != Some("dim") {
                return Err(parse_err(ln, "expected `dim`"));
            }
            let v = parts
                .next()
                .ok_or_else(|| parse_err(ln, "`dim` needs a value"))?
                .parse::<u64>()
                .map_err(|_| parse_err(ln, "`dim` value is not an integer"))?;
            (ln, v)
        }
        None => expect_kv(&mut lines, "dim")?,
    };
    let field = if ext <= 1 {
        Field::prime(p).map_err(|e| parse_err(pl, e.to_string()))?
    } else {
        Field::extension(p, ext as u32).map_err(|e| parse_err(pl, e.to_string()))?
    };
    let group = GroupSpec::new(p, rank as usize).map_err(|e| parse_err(pl, e.to_string()))?;
    let dim = dim as usize;
    let mut gens = Vec::with_capacity(rank as usize);
    for gi in 0..rank {
        let (gl, t) = lines
            .next_content()
            .ok_or_else(|| parse_err(dl, format!("missing `gen` block {}", gi + 1)))?;
        if t != "gen" {
            return Err(parse_err(gl, format!("expected `gen`, found `{t}`")));
        }
        let mut rows = Vec::with_capacity(dim);
        for r in 0..dim {
            let (rl, t) = lines
                .next_content()
                .ok_or_else(|| parse_err(gl, format!("generator {} is missing row {}", gi + 1, r + 1)))?;
            let mut row = Vec::with_capacity(dim);
            for tok in t.split_whitespace() {
                let v = tok.parse::<u64>().map_err(|_| {
                    parse_err(rl, format!("entry `{tok}` is not a nonnegative integer"))
                })?;
                if !field.is_element(v) {
                    return Err(parse_err(rl, format!("entry {v} is not a {field} element code")));
                }
                row.push(v);
            }
            if row.len() != dim {
                return Err(parse_err(rl, format!("expected {dim} entries, found {}", row.len())));
            }
            rows.push(row);
        }
        let m = Matrix::from_rows(field.clone(), rows).map_err(|e| parse_err(gl, e.to_string()))?;
        gens.push(m);
    }
    if let Some((ln, t)) = lines.next_content() {
        return Err(parse_err(ln, format!("trailing content `{t}` after the last generator")));
    }
    let module = Module::new(group, field, gens).map_err(|e| parse_err(0, e.to_string()))?;
    if let Err(v) = module.validate() {
        return Err(parse_err(0, format!("module invariants violated: {v}")));
    }
    Ok(module)
}

pub fn read_module_file(path: &std::path::Path) -> Result<Module> {
    let text = std::fs::read_to_string(path)?;
    read_module(&text)
}

pub fn write_module_file(path: &std::path::Path, m: &Module) -> Result<()> {
    std::fs::write(path, write_module(m))?;
    Ok(())
}
