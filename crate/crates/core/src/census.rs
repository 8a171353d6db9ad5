//! Exhaustive census of rank-2 modules of small dimension up to isomorphism:
//! enumerate commuting pairs of nilpotent matrices with A^p = 0, bucket by
//! conjugation-invariant fingerprints, and separate classes by exact
//! isomorphism tests. Orbit sizes fall out of the assignment, giving the
//! mass-formula cross-check sum(orbit sizes) = number of pairs.

use crate::algcheck::{periodicity, PeriodicityVerdict};
use crate::config::RunConfig;
use crate::decomp::{is_absolutely_indecomposable, is_indecomposable};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::hom::is_isomorphic;
use crate::matrix::Matrix;
use crate::rep::{GroupSpec, Module};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Guard on the number of candidate pairs the exhaustive enumeration will
/// visit before flagging a partial result.
const CANDIDATE_BUDGET: u64 = 8_000_000;

#[derive(Debug, Clone)]
pub struct CensusClass {
    pub module: Module,
    pub orbit_size: u64,
    pub indecomposable: bool,
    pub abs_indec: bool,
    pub periodicity: Option<PeriodicityVerdict>,
}

#[derive(Debug, Clone)]
pub struct CensusResult {
    pub p: u64,
    pub dim: usize,
    /// Classes of all modules of this dimension (decomposables included).
    pub total_classes: usize,
    pub pair_count: u64,
    /// The classes listed (all, or only indecomposables when filtered).
    pub classes: Vec<CensusClass>,
    pub indecomposable_count: usize,
    pub abs_indec_count: usize,
    /// Indecomposable classes counted after merging generator-swapped pairs.
    pub swap_merged_indec_count: usize,
    pub partial: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CensusIndexEntry {
    pub label: String,
    pub file: String,
    pub dim: usize,
    pub orbit_size: u64,
    pub indecomposable: bool,
    pub abs_indec: bool,
    pub periodicity: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CensusIndex {
    pub p: u64,
    pub dim: usize,
    pub total_classes: usize,
    pub pair_count: u64,
    pub indecomposable_count: usize,
    pub abs_indec_count: usize,
    pub swap_merged_indec_count: usize,
    pub partial: bool,
    pub entries: Vec<CensusIndexEntry>,
}

/// All d x d matrices over GF(p) with A^p = 0, in code order.
fn nilpotent_matrices(field: &Field, d: usize) -> Vec<Matrix> {
    let p = field.p();
    let cells = d * d;
    let total = (p as u128).pow(cells as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut digits = code;
        let mut data = vec![0u64; cells];
        for x in data.iter_mut() {
            *x = (digits % p as u128) as u64;
            digits /= p as u128;
        }
        let m = Matrix::new(field.clone(), d, d, data).unwrap();
        if m.pow(p as usize).is_zero() {
            out.push(m);
        }
    }
    out
}

/// Conjugation-invariant fingerprint: ranks of all words in (A, B) of
/// length <= d, the radical dimension and the socle dimension.
fn fingerprint(m: &Module, d: usize) -> Vec<u8> {
    let mut out = Vec::new();
    let mut layer: Vec<Matrix> = vec![Matrix::identity(m.field().clone(), d)];
    for _ in 0..d {
        let mut next = Vec::with_capacity(layer.len() * 2);
        for w in &layer {
            for g in m.gens() {
                let prod = w.mul(g);
                out.push(prod.rank() as u8);
                next.push(prod);
            }
        }
        layer = next;
    }
    out.push(crate::hom::radical_basis(m).cols() as u8);
    let stacked = m.gen(0).vstack(m.gen(1));
    out.push(stacked.nullspace().cols() as u8);
    out
}

/// Exhaustive census for p in {2, 3, 5} and d <= 4 (budget-guarded).
pub fn enumerate_modules(
    p: u64,
    d: usize,
    indecomposable_only: bool,
    cfg: &RunConfig,
) -> Result<CensusResult> {
    if ![2, 3, 5].contains(&p) {
        return Err(Error::Unsupported(format!("census supports p in {{2, 3, 5}}, got {p}")));
    }
    if d == 0 || d > 4 {
        return Err(Error::Unsupported("census supports dimensions 1..=4".into()));
    }
    let field = Field::prime(p)?;
    let group = GroupSpec::new(p, 2)?;
    let nilpotents = nilpotent_matrices(&field, d);

    // candidate pairs per first generator, through its commutant
    let mut partial = false;
    let mut visited: u64 = 0;
    let mut pairs: Vec<(usize, Matrix)> = Vec::new(); // (index of A, B)
    'outer: for (ai, a) in nilpotents.iter().enumerate() {
        // commutant of A as a nullspace over the d*d entries of B
        let mut sys = Matrix::zeros(field.clone(), d * d, d * d);
        for bi in 0..d {
            for bj in 0..d {
                let v = bi * d + bj;
                for r in 0..d {
                    let cur = sys.get(r * d + bj, v);
                    sys.set(r * d + bj, v, field.add(cur, a.get(r, bi)));
                }
                for c in 0..d {
                    let cur = sys.get(bi * d + c, v);
                    sys.set(bi * d + c, v, field.sub(cur, a.get(bj, c)));
                }
            }
        }
        let null = sys.nullspace();
        let cdim = null.cols();
        let combos = (p as u128).pow(cdim as u32);
        for code in 0..combos {
            visited += 1;
            if visited > CANDIDATE_BUDGET {
                partial = true;
                break 'outer;
            }
            let mut digits = code;
            let mut data = vec![0u64; d * d];
            for k in 0..cdim {
                let c = (digits % p as u128) as u64;
                digits /= p as u128;
                if c != 0 {
                    for v in 0..d * d {
                        data[v] = field.add(data[v], field.mul(c, null.get(v, k)));
                    }
                }
            }
            let b = Matrix::new(field.clone(), d, d, data).unwrap();
            if b.pow(p as usize).is_zero() {
                pairs.push((ai, b));
            }
        }
    }
    let pair_count = pairs.len() as u64;

    // fingerprint in parallel (order-preserving), classify serially
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?;
    let keyed: Vec<(Vec<u8>, Module)> = pool.install(|| {
        use rayon::prelude::*;
        pairs
            .par_iter()
            .map(|(ai, b)| {
                let m = Module::new(group, field.clone(), vec![nilpotents[*ai].clone(), b.clone()])
                    .expect("commuting nilpotent pair");
                (fingerprint(&m, d), m)
            })
            .collect()
    });

    let mut buckets: BTreeMap<Vec<u8>, Vec<usize>> = BTreeMap::new();
    let mut classes: Vec<CensusClass> = Vec::new();
    for (key, m) in keyed {
        let bucket = buckets.entry(key).or_default();
        let mut hit = None;
        for &ci in bucket.iter() {
            if is_isomorphic(&classes[ci].module, &m, cfg)? {
                hit = Some(ci);
                break;
            }
        }
        match hit {
            Some(ci) => classes[ci].orbit_size += 1,
            None => {
                bucket.push(classes.len());
                classes.push(CensusClass {
                    module: m,
                    orbit_size: 1,
                    indecomposable: false,
                    abs_indec: false,
                    periodicity: None,
                });
            }
        }
    }
    let total_classes = classes.len();

    // flags per class
    for c in classes.iter_mut() {
        c.indecomposable = is_indecomposable(&c.module);
        if c.indecomposable {
            c.abs_indec = is_absolutely_indecomposable(&c.module);
            c.periodicity = Some(periodicity(&c.module, cfg)?.verdict);
        }
    }
    let indecomposable_count = classes.iter().filter(|c| c.indecomposable).count();
    let abs_indec_count = classes.iter().filter(|c| c.abs_indec).count();

    // canonical representatives for the indecomposables (exhaustive search
    // is affordable up to d = 3; at d = 4 the discovered form is kept)
    if d <= 3 {
        for c in classes.iter_mut() {
            if c.indecomposable {
                c.module = canonical_representative(&c.module)?;
            }
        }
    }

    // swap-merged count among the indecomposables
    let indec: Vec<&CensusClass> = classes.iter().filter(|c| c.indecomposable).collect();
    let mut merged = 0usize;
    let mut seen = vec![false; indec.len()];
    for i in 0..indec.len() {
        if seen[i] {
            continue;
        }
        merged += 1;
        seen[i] = true;
        let swapped = swap_generators(&indec[i].module);
        for j in (i + 1)..indec.len() {
            if !seen[j]
                && indec[j].module.dim() == swapped.dim()
                && is_isomorphic(&indec[j].module, &swapped, cfg)?
            {
                seen[j] = true;
            }
        }
    }

    let listed: Vec<CensusClass> = if indecomposable_only {
        classes.into_iter().filter(|c| c.indecomposable).collect()
    } else {
        classes
    };
    Ok(CensusResult {
        p,
        dim: d,
        total_classes,
        pair_count,
        classes: listed,
        indecomposable_count,
        abs_indec_count,
        swap_merged_indec_count: merged,
        partial,
    })
}

pub fn swap_generators(m: &Module) -> Module {
    let mut gens: Vec<Matrix> = m.gens().to_vec();
    gens.reverse();
    Module::new(m.group(), m.field().clone(), gens).expect("swap preserves shape")
}

/// Lexicographically least generator tuple in the simultaneous-conjugation
/// orbit, by exhaustive search over the general linear group (dim <= 4).
pub fn canonical_representative(m: &Module) -> Result<Module> {
    let d = m.dim();
    if d == 0 {
        return Ok(m.clone());
    }
    if d > 4 {
        return Err(Error::Unsupported(
            "canonical forms are exhaustive only up to dimension 4; use registry labels instead"
                .into(),
        ));
    }
    let field = m.field().clone();
    let p = field.p();
    let cells = d * d;
    let total = (p as u128).pow(cells as u32);
    let mut best: Option<Vec<u64>> = None;
    let mut best_gens: Option<Vec<Matrix>> = None;
    for code in 0..total {
        let mut digits = code;
        let mut data = vec![0u64; cells];
        for x in data.iter_mut() {
            *x = (digits % p as u128) as u64;
            digits /= p as u128;
        }
        let pmat = Matrix::new(field.clone(), d, d, data).unwrap();
        let Some(pinv) = pmat.inverse() else { continue };
        let gens: Vec<Matrix> = m.gens().iter().map(|a| pinv.mul(a).mul(&pmat)).collect();
        let mut key = Vec::with_capacity(m.group().rank * cells);
        for g in &gens {
            key.extend_from_slice(g.data());
        }
        if best.as_ref().map(|b| key < *b).unwrap_or(true) {
            best = Some(key);
            best_gens = Some(gens);
        }
    }
    Module::new(m.group(), field, best_gens.expect("orbit is nonempty"))
}

/// Writes one module file per class plus an `index.json`.
pub fn save_census(result: &CensusResult, dir: &std::path::Path) -> Result<CensusIndex> {
    std::fs::create_dir_all(dir)?;
    let mut entries = Vec::new();
    for (i, c) in result.classes.iter().enumerate() {
        let label = format!("d{}_{:03}", result.dim, i);
        let file = format!("{label}.mod");
        crate::io::write_module_file(&dir.join(&file), &c.module)?;
        entries.push(CensusIndexEntry {
            label,
            file,
            dim: c.module.dim(),
            orbit_size: c.orbit_size,
            indecomposable: c.indecomposable,
            abs_indec: c.abs_indec,
            periodicity: c.periodicity.as_ref().map(|v| v.to_string()),
        });
    }
    let index = CensusIndex {
        p: result.p,
        dim: result.dim,
        total_classes: result.total_classes,
        pair_count: result.pair_count,
        indecomposable_count: result.indecomposable_count,
        abs_indec_count: result.abs_indec_count,
        swap_merged_indec_count: result.swap_merged_indec_count,
        partial: result.partial,
        entries,
    };
    let json =
        serde_json::to_string_pretty(&index).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    std::fs::write(dir.join("index.json"), json)?;
    Ok(index)
}
