//! Budgeted tensor-closure search with machine-checkable outcomes.
//!
//! The worklist closes a set of indecomposable classes under tensor-and-
//! decompose (projectives stripped throughout). Exhaustion of the worklist
//! yields an `Algebraic` certificate: the finite multiplication table is a
//! witness that only finitely many summand types occur in tensor powers.
//! Any newly discovered class that is an omega-translate (nonzero shift) of
//! a non-periodic base with a tracked tensor-power pedigree yields a
//! `NonAlgebraic` certificate. Budgets trip to `Inconclusive`, a verdict and
//! not an error.

use super::registry::IsoClassRegistry;
use super::{periodicity, verify_periodicity, PeriodicityReport, PeriodicityVerdict};
use crate::config::{Budgets, RunConfig};
use crate::decomp::{decompose, is_absolutely_indecomposable, is_indecomposable, strip_projectives};
use crate::error::{Error, Result};
use crate::heller::omega_n;
use crate::hom::{is_isomorphic, iso_indec};
use crate::io;
use crate::rep::Module;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub seed: u64,
    pub budgets: Budgets,
    pub workers: usize,
}

impl ConfigEcho {
    pub fn from(cfg: &RunConfig) -> ConfigEcho {
        ConfigEcho { seed: cfg.seed, budgets: cfg.budgets.clone(), workers: cfg.workers }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassInfo {
    pub label: String,
    pub dim: usize,
    /// Embedded module file text; certificates outlive registries.
    pub module: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub left: String,
    pub right: String,
    pub free_rank: usize,
    /// Class multiplicities, sorted by label.
    pub summands: Vec<(String, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureCertificate {
    pub config: ConfigEcho,
    /// The module whose closure was computed, embedded.
    pub base: String,
    /// Labels of the classes of the projective-free core of the base.
    pub roots: Vec<String>,
    pub classes: Vec<ClassInfo>,
    pub table: Vec<TableEntry>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Base,
    Dual,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonAlgebraicCertificate {
    pub config: ConfigEcho,
    /// The indecomposable base whose translate was found, embedded.
    pub base: String,
    /// Tensor power in which the witness summand occurs (mod projectives).
    pub n: usize,
    /// Nonzero omega-shift of the matched translate.
    pub shift: i64,
    pub direction: Direction,
    /// The summand that matched omega^shift of the base (or its dual).
    pub witness_summand: String,
    pub nonperiodicity: PeriodicityReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureProgress {
    pub config: ConfigEcho,
    pub tripped: String,
    pub steps: usize,
    pub pending: usize,
    pub classes: Vec<ClassInfo>,
    pub table: Vec<TableEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClosureOutcome {
    Algebraic(ClosureCertificate),
    NonAlgebraic(NonAlgebraicCertificate),
    Inconclusive(ClosureProgress),
}

impl ClosureOutcome {
    pub fn verdict_str(&self) -> &'static str {
        match self {
            ClosureOutcome::Algebraic(_) => "algebraic",
            ClosureOutcome::NonAlgebraic(_) => "non-algebraic",
            ClosureOutcome::Inconclusive(_) => "inconclusive",
        }
    }
}

struct ClosureState {
    reg: IsoClassRegistry,
    /// pedigree[i] = Some((root_entry, n)): class i divides root^(x)n
    /// modulo projectives.
    pedigree: Vec<Option<(usize, usize)>>,
    table: BTreeMap<(String, String), TableEntry>,
    pending: BTreeSet<(String, String)>,
    steps: usize,
    omega_cache: HashMap<(usize, i64, bool), Module>,
    notes: Vec<String>,
}

impl ClosureState {
    fn class_infos(&self) -> Vec<ClassInfo> {
        self.reg
            .entries()
            .iter()
            .map(|e| ClassInfo {
                label: e.label.clone(),
                dim: e.module.dim(),
                module: io::write_module(&e.module),
            })
            .collect()
    }

    fn table_entries(&self) -> Vec<TableEntry> {
        self.table.values().cloned().collect()
    }

    fn inconclusive(&self, cfg: &RunConfig, why: String) -> ClosureOutcome {
        ClosureOutcome::Inconclusive(ClosureProgress {
            config: ConfigEcho::from(cfg),
            tripped: why,
            steps: self.steps,
            pending: self.pending.len(),
            classes: self.class_infos(),
            table: self.table_entries(),
        })
    }

    fn translate(&mut self, root: usize, shift: i64, dual: bool) -> Module {
        if let Some(m) = self.omega_cache.get(&(root, shift, dual)) {
            return m.clone();
        }
        let base = self.reg.entries()[root].module.clone();
        let base = if dual { base.dual() } else { base };
        let t = omega_n(&base, shift);
        self.omega_cache.insert((root, shift, dual), t.clone());
        t
    }
}

/// The tensor-closure search.
pub fn tensor_closure(m: &Module, cfg: &RunConfig) -> Result<ClosureOutcome> {
    if !m.field().is_prime_field() {
        return Err(Error::Unsupported("closure runs over prime-field module data".into()));
    }
    let mut state = ClosureState {
        reg: IsoClassRegistry::new(),
        pedigree: Vec::new(),
        table: BTreeMap::new(),
        pending: BTreeSet::new(),
        steps: 0,
        omega_cache: HashMap::new(),
        notes: Vec::new(),
    };
    if !is_indecomposable(m) && m.dim() > 0 {
        state.notes.push("input is not indecomposable; closure runs over its core classes".into());
    } else if m.dim() > 0 && !is_absolutely_indecomposable(m) {
        state.notes.push("input is indecomposable but not absolutely indecomposable".into());
    }
    let (core, stripped) = strip_projectives(m);
    if stripped > 0 {
        state.notes.push(format!("{stripped} projective summands stripped from the input"));
    }
    let mut roots = Vec::new();
    if core.dim() > 0 {
        let d = decompose(&core, cfg);
        for (summand, _mult) in &d.summands {
            let (idx, new) = state.reg.insert_or_lookup(summand, cfg);
            if new {
                state.pedigree.push(Some((idx, 1)));
            }
            if !roots.contains(&idx) {
                roots.push(idx);
            }
        }
        let labels: Vec<String> =
            state.reg.entries().iter().map(|e| e.label.clone()).collect();
        for (i, a) in labels.iter().enumerate() {
            for b in labels.iter().skip(i) {
                state.pending.insert((a.clone(), b.clone()));
            }
        }
    } else {
        state.notes.push("projective input: the closure is empty".into());
    }
    let root_labels: Vec<String> =
        roots.iter().map(|&i| state.reg.entries()[i].label.clone()).collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?;

    loop {
        if state.pending.is_empty() {
            return Ok(ClosureOutcome::Algebraic(ClosureCertificate {
                config: ConfigEcho::from(cfg),
                base: io::write_module(m),
                roots: root_labels,
                classes: state.class_infos(),
                table: state.table_entries(),
                notes: state.notes,
            }));
        }
        let batch: Vec<(String, String)> = state.pending.iter().cloned().collect();
        state.pending.clear();

        // pure per-pair work in parallel; integration is ordered and serial
        enum PairResult {
            TooBig(usize),
            Product { free_rank: usize, summands: Vec<(Module, usize)> },
        }
        let inputs: Vec<(Module, Module)> = batch
            .iter()
            .map(|(a, b)| {
                (
                    state.reg.get(a).expect("left class").module.clone(),
                    state.reg.get(b).expect("right class").module.clone(),
                )
            })
            .collect();
        let max_dim = cfg.budgets.max_dim;
        let results: Vec<PairResult> = pool.install(|| {
            use rayon::prelude::*;
            inputs
                .par_iter()
                .map(|(ma, mb)| {
                    let dprod = ma.dim() * mb.dim();
                    if dprod > max_dim {
                        return PairResult::TooBig(dprod);
                    }
                    let t = ma.tensor(mb).expect("classes share group and field");
                    let (core, free_rank) = strip_projectives(&t);
                    let d = decompose(&core, cfg);
                    PairResult::Product { free_rank, summands: d.summands }
                })
                .collect()
        });

        for (pair, result) in batch.into_iter().zip(results) {
            if state.steps >= cfg.budgets.max_steps {
                return Ok(state.inconclusive(cfg, format!("step budget {} exhausted", cfg.budgets.max_steps)));
            }
            state.steps += 1;
            let (free_rank, summands) = match result {
                PairResult::TooBig(d) => {
                    return Ok(state.inconclusive(
                        cfg,
                        format!("product {}*{} has dimension {d} > max_dim {}", pair.0, pair.1, cfg.budgets.max_dim),
                    ));
                }
                PairResult::Product { free_rank, summands } => (free_rank, summands),
            };
            let left_idx = state.reg.entries().iter().position(|e| e.label == pair.0).unwrap();
            let right_idx = state.reg.entries().iter().position(|e| e.label == pair.1).unwrap();
            let pair_pedigree = match (state.pedigree[left_idx], state.pedigree[right_idx]) {
                (Some((r1, n1)), Some((r2, n2))) if r1 == r2 => Some((r1, n1 + n2)),
                _ => None,
            };
            let mut entry_summands: Vec<(String, usize)> = Vec::new();
            for (summand, mult) in &summands {
                let (idx, new) = state.reg.insert_or_lookup(summand, cfg);
                let label = state.reg.entries()[idx].label.clone();
                entry_summands.push((label.clone(), *mult));
                if new {
                    state.pedigree.push(pair_pedigree);
                    if state.reg.len() > cfg.budgets.max_classes {
                        return Ok(state.inconclusive(
                            cfg,
                            format!("class budget {} exhausted", cfg.budgets.max_classes),
                        ));
                    }
                    for e in state.reg.entries() {
                        let (a, b) = if e.label <= label {
                            (e.label.clone(), label.clone())
                        } else {
                            (label.clone(), e.label.clone())
                        };
                        state.pending.insert((a, b));
                    }
                    // the non-algebraicity scan on the freshly found class
                    if m.group().rank == 2 {
                        if let Some((root, n)) = pair_pedigree {
                            if n >= 2 {
                                if let Some(cert) =
                                    scan_new_class(&mut state, root, idx, n, cfg)?
                                {
                                    return Ok(ClosureOutcome::NonAlgebraic(cert));
                                }
                            }
                        }
                    }
                }
            }
            entry_summands.sort();
            state.table.insert(
                pair.clone(),
                TableEntry { left: pair.0, right: pair.1, free_rank, summands: entry_summands },
            );
        }
    }
}

fn scan_new_class(
    state: &mut ClosureState,
    root: usize,
    class_idx: usize,
    n: usize,
    cfg: &RunConfig,
) -> Result<Option<NonAlgebraicCertificate>> {
    let found = state.reg.entries()[class_idx].module.clone();
    let window = cfg.budgets.omega_window;
    let mut matched: Option<(i64, Direction)> = None;
    'outer: for i in 1..=window {
        for shift in [i, -i] {
            for (dual, dir) in [(false, Direction::Base), (true, Direction::Dual)] {
                let t = state.translate(root, shift, dual);
                if t.dim() == found.dim() && iso_indec(&t, &found, cfg) {
                    matched = Some((shift, dir));
                    break 'outer;
                }
            }
        }
    }
    let Some((shift, direction)) = matched else {
        return Ok(None);
    };
    let base = state.reg.entries()[root].module.clone();
    let report = periodicity(&base, cfg)?;
    if report.verdict != PeriodicityVerdict::NonPeriodic {
        return Ok(None);
    }
    Ok(Some(NonAlgebraicCertificate {
        config: ConfigEcho::from(cfg),
        base: io::write_module(&base),
        n,
        shift,
        direction,
        witness_summand: io::write_module(&found),
        nonperiodicity: report,
    }))
}

/// The certificate scan as a standalone operation: does the found summand
/// of base^(x)n match a nonzero omega-translate of the base or its dual?
pub fn easynonalg_scan(
    base: &Module,
    found_summand: &Module,
    n: usize,
    omega_window: i64,
    cfg: &RunConfig,
) -> Result<Option<NonAlgebraicCertificate>> {
    if n < 2 {
        return Ok(None);
    }
    let mut matched = None;
    'outer: for i in 1..=omega_window {
        for shift in [i, -i] {
            for (dual, dir) in [(false, Direction::Base), (true, Direction::Dual)] {
                let b = if dual { base.dual() } else { base.clone() };
                let t = omega_n(&b, shift);
                if t.dim() == found_summand.dim() && is_isomorphic(&t, found_summand, cfg)? {
                    matched = Some((shift, dir));
                    break 'outer;
                }
            }
        }
    }
    let Some((shift, direction)) = matched else {
        return Ok(None);
    };
    let report = periodicity(base, cfg)?;
    if report.verdict != PeriodicityVerdict::NonPeriodic {
        return Ok(None);
    }
    Ok(Some(NonAlgebraicCertificate {
        config: ConfigEcho::from(cfg),
        base: io::write_module(base),
        n,
        shift,
        direction,
        witness_summand: io::write_module(found_summand),
        nonperiodicity: report,
    }))
}

// --- certificate verification ------------------------------------------------

/// Recompute every table entry and closure property of an `Algebraic`
/// certificate from its embedded modules alone.
pub fn verify_closure_certificate(cert: &ClosureCertificate, cfg: &RunConfig) -> Result<()> {
    let base = io::read_module(&cert.base)?;
    let mut modules: BTreeMap<&str, Module> = BTreeMap::new();
    for c in &cert.classes {
        let m = io::read_module(&c.module)?;
        if m.dim() != c.dim {
            return Err(Error::Certificate(format!("class {} has dim {} != {}", c.label, m.dim(), c.dim)));
        }
        if !is_indecomposable(&m) {
            return Err(Error::Certificate(format!("class {} is not indecomposable", c.label)));
        }
        if modules.insert(c.label.as_str(), m).is_some() {
            return Err(Error::Certificate(format!("duplicate label {}", c.label)));
        }
    }
    let labels: Vec<&str> = modules.keys().cloned().collect();
    for (i, a) in labels.iter().enumerate() {
        for b in labels.iter().skip(i + 1) {
            if is_isomorphic(&modules[a], &modules[b], cfg)? {
                return Err(Error::Certificate(format!("classes {a} and {b} are isomorphic")));
            }
        }
    }
    // roots reproduce the core of the base
    let (core, _) = strip_projectives(&base);
    let d = decompose(&core, cfg);
    for (summand, _) in &d.summands {
        let hit = cert.roots.iter().any(|r| {
            modules
                .get(r.as_str())
                .map(|m| m.dim() == summand.dim() && iso_indec(m, summand, cfg))
                .unwrap_or(false)
        });
        if !hit {
            return Err(Error::Certificate("a core class of the base is missing from the roots".into()));
        }
    }
    for r in &cert.roots {
        if !modules.contains_key(r.as_str()) {
            return Err(Error::Certificate(format!("root {r} is not among the classes")));
        }
    }
    // the table covers every unordered pair exactly once and is closed
    let mut seen = BTreeSet::new();
    for entry in &cert.table {
        if !modules.contains_key(entry.left.as_str()) || !modules.contains_key(entry.right.as_str()) {
            return Err(Error::Certificate(format!(
                "table entry {}*{} references an unknown class",
                entry.left, entry.right
            )));
        }
        if !seen.insert((entry.left.clone(), entry.right.clone())) {
            return Err(Error::Certificate(format!(
                "duplicate table entry {}*{}",
                entry.left, entry.right
            )));
        }
        for (l, _) in &entry.summands {
            if !modules.contains_key(l.as_str()) {
                return Err(Error::Certificate(format!(
                    "table entry {}*{} produces unknown class {l}: table is not closed",
                    entry.left, entry.right
                )));
            }
        }
    }
    for (i, a) in labels.iter().enumerate() {
        for b in labels.iter().skip(i) {
            if !seen.contains(&(a.to_string(), b.to_string()))
                && !seen.contains(&(b.to_string(), a.to_string()))
            {
                return Err(Error::Certificate(format!("missing table entry {a}*{b}")));
            }
        }
    }
    // recompute each entry: tensor, strip, decompose, compare multisets
    let p_pow = base.group().order();
    for entry in &cert.table {
        let ma = &modules[entry.left.as_str()];
        let mb = &modules[entry.right.as_str()];
        let t = ma.tensor(mb)?;
        let (core, free_rank) = strip_projectives(&t);
        if free_rank != entry.free_rank {
            return Err(Error::Certificate(format!(
                "table entry {}*{}: free rank {} does not reproduce (got {free_rank})",
                entry.left, entry.right, entry.free_rank
            )));
        }
        let d = decompose(&core, cfg);
        let mut expected: Vec<(String, usize)> = entry.summands.clone();
        for (summand, mult) in &d.summands {
            let pos = expected.iter().position(|(l, c)| {
                *c == *mult
                    && modules
                        .get(l.as_str())
                        .map(|m| m.dim() == summand.dim() && iso_indec(m, summand, cfg))
                        .unwrap_or(false)
            });
            match pos {
                Some(i) => {
                    expected.remove(i);
                }
                None => {
                    return Err(Error::Certificate(format!(
                        "table entry {}*{} does not reproduce: a computed summand of dim {} (multiplicity {}) is absent",
                        entry.left, entry.right, summand.dim(), mult
                    )))
                }
            }
        }
        if !expected.is_empty() {
            return Err(Error::Certificate(format!(
                "table entry {}*{} does not reproduce: listed summands {:?} were not found",
                entry.left, entry.right, expected
            )));
        }
        // dimension balance
        let total: usize = entry
            .summands
            .iter()
            .map(|(l, c)| modules[l.as_str()].dim() * c)
            .sum::<usize>()
            + entry.free_rank * p_pow;
        if total != ma.dim() * mb.dim() {
            return Err(Error::Certificate(format!(
                "table entry {}*{}: dimensions do not balance",
                entry.left, entry.right
            )));
        }
    }
    Ok(())
}

/// Re-derive a `NonAlgebraic` certificate from its embedded modules: the
/// witness must reappear as a summand of the n-th tensor power (modulo
/// projectives), match the claimed translate, and the base must re-verify
/// as non-periodic.
pub fn verify_nonalgebraic_certificate(
    cert: &NonAlgebraicCertificate,
    cfg: &RunConfig,
) -> Result<()> {
    let base = io::read_module(&cert.base)?;
    let witness = io::read_module(&cert.witness_summand)?;
    if cert.n < 2 {
        return Err(Error::Certificate("tensor power must be at least 2".into()));
    }
    if cert.shift == 0 {
        return Err(Error::Certificate("shift must be nonzero".into()));
    }
    // witness | base^(x)n modulo projectives
    let (mut power, _) = strip_projectives(&base);
    for _ in 1..cert.n {
        let t = power.tensor(&base)?;
        power = strip_projectives(&t).0;
    }
    let d = decompose(&power, cfg);
    let found = d
        .summands
        .iter()
        .any(|(s, _)| s.dim() == witness.dim() && iso_indec(s, &witness, cfg));
    if !found {
        return Err(Error::Certificate(format!(
            "witness is not a summand of the {}th tensor power modulo projectives",
            cert.n
        )));
    }
    // witness = omega^shift(base or dual)
    let b = match cert.direction {
        Direction::Base => base.clone(),
        Direction::Dual => base.dual(),
    };
    let translate = omega_n(&b, cert.shift);
    if !is_isomorphic(&translate, &witness, cfg)? {
        return Err(Error::Certificate(format!(
            "witness does not match omega^{} of the claimed direction",
            cert.shift
        )));
    }
    // non-periodicity of the base re-verifies
    if cert.nonperiodicity.verdict != PeriodicityVerdict::NonPeriodic {
        return Err(Error::Certificate("embedded periodicity report is not NonPeriodic".into()));
    }
    verify_periodicity(&base, &cert.nonperiodicity, cfg)?;
    Ok(())
}
