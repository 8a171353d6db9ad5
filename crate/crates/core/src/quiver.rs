//! Symbolic calculus on interlaced components: signatures (multisets of
//! shift-indexed formal symbols), the diamond propagation rule, the closed
//! signature formula, and the at-most-one-algebraic-position argument.
//!
//! The simulator is purely formal: symbols x^i and x^j are distinct for
//! i != j, mirroring components made of non-periodic modules. Real modules
//! enter only through `row0_from_summands`, which turns a decomposition of
//! a restriction into a seed signature.

use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Multiset of (symbol, shift) pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    counts: BTreeMap<(String, i64), u64>,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (String, i64)>) -> Signature {
        let mut s = Signature::new();
        for (sym, shift) in pairs {
            s.push(sym, shift, 1);
        }
        s
    }

    pub fn push(&mut self, sym: String, shift: i64, mult: u64) {
        if mult > 0 {
            *self.counts.entry((sym, shift)).or_insert(0) += mult;
        }
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Total size as a multiset.
    pub fn size(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(String, i64), &u64)> {
        self.counts.iter()
    }

    /// Heller shift: every superscript moves by `by`.
    pub fn shifted(&self, by: i64) -> Signature {
        let counts = self
            .counts
            .iter()
            .map(|((sym, sh), &c)| ((sym.clone(), sh + by), c))
            .collect();
        Signature { counts }
    }

    pub fn union(&self, other: &Signature) -> Signature {
        let mut out = self.clone();
        for ((sym, sh), &c) in &other.counts {
            *out.counts.entry((sym.clone(), *sh)).or_insert(0) += c;
        }
        out
    }

    /// Multiset difference; errors if any multiplicity would go negative.
    pub fn difference(&self, other: &Signature) -> Result<Signature> {
        let mut out = self.clone();
        for ((sym, sh), &c) in &other.counts {
            let have = out.counts.get_mut(&(sym.clone(), *sh));
            match have {
                Some(h) if *h >= c => {
                    *h -= c;
                    if *h == 0 {
                        out.counts.remove(&(sym.clone(), *sh));
                    }
                }
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "negative multiplicity for {sym}^{sh} in signature subtraction"
                    )))
                }
            }
        }
        Ok(out)
    }

    /// True when no symbol occurs at two distinct shifts.
    pub fn single_shift_per_symbol(&self) -> bool {
        let mut seen: BTreeMap<&str, i64> = BTreeMap::new();
        for ((sym, sh), _) in &self.counts {
            if let Some(&prev) = seen.get(sym.as_str()) {
                if prev != *sh {
                    return false;
                }
            } else {
                seen.insert(sym, *sh);
            }
        }
        true
    }

    /// True when every occurrence sits at exactly the given shift.
    pub fn all_at_shift(&self, shift: i64) -> bool {
        self.counts.keys().all(|(_, sh)| *sh == shift)
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for ((sym, sh), &c) in &self.counts {
            for _ in 0..c {
                if !first {
                    f.write_str(" ")?;
                }
                write!(f, "{sym}^{sh}")?;
                first = false;
            }
        }
        if first {
            f.write_str("(empty)")?;
        }
        Ok(())
    }
}

/// Parse "x,y^2,x^-1" (comma or whitespace separated; bare symbol = shift 0).
pub fn parse_signature(text: &str) -> Result<Signature> {
    let mut sig = Signature::new();
    for tok in text.split(|c: char| c == ',' || c.is_whitespace()) {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        let (sym, shift) = match tok.split_once('^') {
            Some((s, e)) => {
                let shift = e.parse::<i64>().map_err(|_| {
                    Error::InvalidArgument(format!("bad shift `{e}` in signature token `{tok}`"))
                })?;
                (s, shift)
            }
            None => (tok, 0),
        };
        if sym.is_empty() || !sym.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(Error::InvalidArgument(format!("bad symbol `{sym}`")));
        }
        sig.push(sym.to_string(), shift, 1);
    }
    Ok(sig)
}

/// Closed formula: the signature of (i, j) is the union of row0 shifted by
/// i+j, i+j-2, ..., i-j (j+1 terms).
pub fn signature_formula(i: i64, j: i64, row0: &Signature) -> Signature {
    assert!(j >= 0, "row index must be nonnegative");
    let mut out = Signature::new();
    let mut t = i + j;
    for _ in 0..=j {
        out = out.union(&row0.shifted(t));
        t -= 2;
    }
    out
}

/// Coordinatized interlaced component with computed signatures.
#[derive(Debug, Clone)]
pub struct InterlacedGrid {
    pub i_min: i64,
    pub i_max: i64,
    pub j_max: i64,
    pub row0: Signature,
    pub cells: BTreeMap<(i64, i64), Signature>,
}

impl InterlacedGrid {
    pub fn cell(&self, i: i64, j: i64) -> Option<&Signature> {
        self.cells.get(&(i, j))
    }
}

/// Builds the grid from the bottom row: row 1 is the union of the two
/// bottom neighbours, and each higher cell solves its diamond
/// (top = left + right - bottom).
pub fn propagate(row0: &Signature, i_min: i64, i_max: i64, j_max: i64) -> Result<InterlacedGrid> {
    if row0.is_empty() {
        return Err(Error::InvalidArgument("seed signature must be non-empty".into()));
    }
    if i_min > i_max || j_max < 0 {
        return Err(Error::InvalidArgument("empty grid range".into()));
    }
    // rows are computed over a trapezoid so every diamond is complete
    let mut prev_prev: BTreeMap<i64, Signature> = BTreeMap::new();
    let mut prev: BTreeMap<i64, Signature> = BTreeMap::new();
    let mut cells = BTreeMap::new();
    for j in 0..=j_max {
        let margin = j_max - j;
        let lo = i_min - margin;
        let hi = i_max + margin;
        let mut cur: BTreeMap<i64, Signature> = BTreeMap::new();
        for i in lo..=hi {
            let sig = match j {
                0 => row0.shifted(i),
                1 => prev[&(i - 1)].union(&prev[&(i + 1)]),
                _ => prev[&(i - 1)]
                    .union(&prev[&(i + 1)])
                    .difference(&prev_prev[&i])?,
            };
            cur.insert(i, sig);
        }
        for (&i, sig) in &cur {
            if i >= i_min && i <= i_max {
                cells.insert((i, j), sig.clone());
            }
        }
        prev_prev = std::mem::replace(&mut prev, cur);
    }
    Ok(InterlacedGrid { i_min, i_max, j_max, row0: row0.clone(), cells })
}

/// Builds the grid directly from the closed formula (used as the cross-check
/// target for `propagate`).
pub fn grid_from_formula(row0: &Signature, i_min: i64, i_max: i64, j_max: i64) -> InterlacedGrid {
    let mut cells = BTreeMap::new();
    for j in 0..=j_max {
        for i in i_min..=i_max {
            cells.insert((i, j), signature_formula(i, j, row0));
        }
    }
    InterlacedGrid { i_min, i_max, j_max, row0: row0.clone(), cells }
}

/// Verifies top + bottom = left + right at every interior diamond; reports
/// the first failure.
pub fn diamond_check(grid: &InterlacedGrid) -> std::result::Result<(), (i64, i64)> {
    for (&(i, j), sig) in &grid.cells {
        // diamond centered between rows: top (i, j+1), bottom (i, j-1),
        // left (i-1, j), right (i+1, j)
        if j == 0 {
            continue;
        }
        let (Some(top), Some(bottom), Some(left), Some(right)) = (
            grid.cell(i, j + 1),
            grid.cell(i, j - 1),
            grid.cell(i - 1, j),
            grid.cell(i + 1, j),
        ) else {
            continue;
        };
        let _ = sig;
        if top.union(bottom) != left.union(right) {
            return Err((i, j));
        }
    }
    Ok(())
}

/// Coordinates whose signature does not contain two distinct shifts of the
/// same symbol; with a designated algebraic shift, only cells whose entire
/// signature sits at that shift survive.
pub fn algebraic_positions(
    grid: &InterlacedGrid,
    designated_shift: Option<i64>,
) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for (&(i, j), sig) in &grid.cells {
        let keep = match designated_shift {
            None => sig.single_shift_per_symbol(),
            Some(s) => sig.all_at_shift(s),
        };
        if keep {
            out.push((i, j));
        }
    }
    out
}

// --- plain-text grid format -------------------------------------------------

/// One cell per line: `i j sym^shift sym^shift ...`.
pub fn write_grid(grid: &InterlacedGrid) -> String {
    let mut out = String::new();
    for (&(i, j), sig) in &grid.cells {
        let _ = write!(out, "{i} {j}");
        for ((sym, sh), &c) in sig.iter() {
            for _ in 0..c {
                let _ = write!(out, " {sym}^{sh}");
            }
        }
        out.push('\n');
    }
    out
}

pub fn read_grid(text: &str) -> Result<InterlacedGrid> {
    let mut cells = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let mut parts = t.split_whitespace();
        let i = parts
            .next()
            .and_then(|x| x.parse::<i64>().ok())
            .ok_or_else(|| Error::Parse { line: idx + 1, msg: "expected integer i".into() })?;
        let j = parts
            .next()
            .and_then(|x| x.parse::<i64>().ok())
            .ok_or_else(|| Error::Parse { line: idx + 1, msg: "expected integer j".into() })?;
        let rest: Vec<&str> = parts.collect();
        let sig = parse_signature(&rest.join(" "))
            .map_err(|e| Error::Parse { line: idx + 1, msg: e.to_string() })?;
        cells.insert((i, j), sig);
    }
    if cells.is_empty() {
        return Err(Error::InvalidArgument("grid file has no cells".into()));
    }
    let i_min = cells.keys().map(|&(i, _)| i).min().unwrap();
    let i_max = cells.keys().map(|&(i, _)| i).max().unwrap();
    let j_max = cells.keys().map(|&(_, j)| j).max().unwrap();
    let row0 = cells
        .get(&(0, 0))
        .cloned()
        .unwrap_or_else(|| cells.values().next().unwrap().clone());
    Ok(InterlacedGrid { i_min, i_max, j_max, row0, cells })
}

/// Bridge from real computations: a seed signature out of the non-periodic
/// summand classes of a restriction, one symbol per class label.
pub fn row0_from_summands(labels: &[(String, usize)]) -> Signature {
    let mut sig = Signature::new();
    for (label, mult) in labels {
        sig.push(label.clone(), 0, *mult as u64);
    }
    sig
}
