//! Census cross-checks against independent oracles.
//!
//! For d <= 2 the oracle is a full orbit partition: enumerate every valid
//! pair and close each under explicit conjugation by all of GL_d. For d = 3
//! the oracle is the mass formula: the orbit sizes recorded by the census
//! must sum to the total number of pairs, and each must equal
//! |GL_d| / |Aut(M)| with the automorphism count obtained by enumerating
//! the units of the endomorphism ring.

use modrep::census::{enumerate_modules, swap_generators};
use modrep::config::RunConfig;
use modrep::field::Field;
use modrep::hom::end_algebra;
use modrep::matrix::Matrix;
use modrep::rep::{GroupSpec, Module};
use std::collections::BTreeSet;

fn all_matrices(field: &Field, d: usize) -> Vec<Matrix> {
    let p = field.p();
    let cells = d * d;
    let total = (p as u128).pow(cells as u32);
    let mut out = Vec::with_capacity(total as usize);
    for code in 0..total {
        let mut digits = code;
        let mut data = vec![0u64; cells];
        for x in data.iter_mut() {
            *x = (digits % p as u128) as u64;
            digits /= p as u128;
        }
        out.push(Matrix::new(field.clone(), d, d, data).unwrap());
    }
    out
}

fn valid_pairs(field: &Field, d: usize) -> Vec<(Matrix, Matrix)> {
    let p = field.p() as usize;
    let nil: Vec<Matrix> = all_matrices(field, d)
        .into_iter()
        .filter(|m| m.pow(p).is_zero())
        .collect();
    let mut out = Vec::new();
    for a in &nil {
        for b in &nil {
            if a.mul(b) == b.mul(a) {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

fn gl(field: &Field, d: usize) -> Vec<Matrix> {
    all_matrices(field, d).into_iter().filter(|m| m.is_invertible()).collect()
}

/// Orbit partition of the valid pairs under simultaneous conjugation.
fn orbit_count_oracle(p: u64, d: usize) -> (usize, u64) {
    let field = Field::prime(p).unwrap();
    let pairs = valid_pairs(&field, d);
    let group = gl(&field, d);
    let key = |a: &Matrix, b: &Matrix| {
        let mut k = a.data().to_vec();
        k.extend_from_slice(b.data());
        k
    };
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut orbits = 0usize;
    for (a, b) in &pairs {
        if seen.contains(&key(a, b)) {
            continue;
        }
        orbits += 1;
        for g in &group {
            let gi = g.inverse().unwrap();
            let ca = gi.mul(a).mul(g);
            let cb = gi.mul(b).mul(g);
            seen.insert(key(&ca, &cb));
        }
    }
    (orbits, pairs.len() as u64)
}

fn gl_order(p: u64, d: usize) -> u64 {
    let q = |k: u32| p.pow(k);
    let mut order = 1u64;
    for i in 0..d as u32 {
        order *= q(d as u32) - q(i);
    }
    order
}

/// |Aut(M)| by enumerating the units of End(M).
fn aut_order(m: &Module) -> u64 {
    let end = end_algebra(m).unwrap().basis;
    let p = m.field().p();
    let k = end.len();
    assert!(k <= 10, "unit enumeration is for small endomorphism rings");
    let total = (p as u128).pow(k as u32);
    let mut count = 0u64;
    for code in 1..total {
        let mut digits = code;
        let mut x = Matrix::zeros(m.field().clone(), m.dim(), m.dim());
        for b in &end {
            let c = (digits % p as u128) as u64;
            digits /= p as u128;
            if c != 0 {
                x = x.add(&b.scale(c));
            }
        }
        if x.is_invertible() {
            count += 1;
        }
    }
    count
}

#[test]
fn census_d1_and_d2_match_orbit_oracle() {
    let cfg = RunConfig::default();
    for (p, d) in [(3u64, 1usize), (2, 2), (3, 2)] {
        let (orbits, npairs) = orbit_count_oracle(p, d);
        let census = enumerate_modules(p, d, false, &cfg).unwrap();
        assert_eq!(census.total_classes, orbits, "class count p={p} d={d}");
        assert_eq!(census.pair_count, npairs, "pair count p={p} d={d}");
        assert_eq!(census.classes.iter().map(|c| c.orbit_size).sum::<u64>(), npairs);
    }
}

#[test]
fn census_d3_mass_formula() {
    let cfg = RunConfig::default();
    let census = enumerate_modules(3, 3, false, &cfg).unwrap();
    assert!(!census.partial);
    // every pair lands in exactly one class
    assert_eq!(
        census.classes.iter().map(|c| c.orbit_size).sum::<u64>(),
        census.pair_count
    );
    // and each orbit size is |GL_3| / |Aut(M)|
    let gl3 = gl_order(3, 3);
    assert_eq!(gl3, 11232);
    for c in &census.classes {
        let aut = aut_order(&c.module);
        assert_eq!(gl3 % aut, 0, "automorphism count divides the group order");
        assert_eq!(
            c.orbit_size,
            gl3 / aut,
            "orbit-stabilizer mismatch for a class of dim {}",
            c.module.dim()
        );
    }
    // census output is reported for the record
    eprintln!(
        "census p=3 d=3: {} classes total, {} indecomposable, {} absolutely indecomposable, {} after swap-merge, {} pairs",
        census.total_classes,
        census.indecomposable_count,
        census.abs_indec_count,
        census.swap_merged_indec_count,
        census.pair_count
    );
}

#[test]
fn census_representatives_are_valid_and_distinct() {
    let cfg = RunConfig::default();
    let census = enumerate_modules(3, 3, true, &cfg).unwrap();
    for c in &census.classes {
        assert!(c.module.validate().is_ok());
        assert!(c.indecomposable);
    }
    for i in 0..census.classes.len() {
        for j in (i + 1)..census.classes.len() {
            assert!(
                !modrep::hom::is_isomorphic(
                    &census.classes[i].module,
                    &census.classes[j].module,
                    &cfg
                )
                .unwrap(),
                "representatives {i} and {j} are isomorphic"
            );
        }
    }
}

#[test]
fn census_counts_are_seed_and_worker_invariant() {
    let a = enumerate_modules(3, 3, true, &RunConfig::default()).unwrap();
    let mut cfg2 = RunConfig::with_seed(777);
    cfg2.workers = 4;
    let b = enumerate_modules(3, 3, true, &cfg2).unwrap();
    assert_eq!(a.indecomposable_count, b.indecomposable_count);
    assert_eq!(a.total_classes, b.total_classes);
    assert_eq!(a.pair_count, b.pair_count);
    assert_eq!(a.abs_indec_count, b.abs_indec_count);
    assert_eq!(a.swap_merged_indec_count, b.swap_merged_indec_count);
    // identical seed: identical representatives in identical order
    let c = enumerate_modules(3, 3, true, &RunConfig::default()).unwrap();
    let reps_a: Vec<_> = a.classes.iter().map(|x| x.module.clone()).collect();
    let reps_c: Vec<_> = c.classes.iter().map(|x| x.module.clone()).collect();
    assert_eq!(reps_a, reps_c);
}

#[test]
fn swap_merge_counts_generator_exchange() {
    let cfg = RunConfig::default();
    let census = enumerate_modules(3, 2, true, &cfg).unwrap();
    // dim 2: classes (N, tN) for t in {0,1,2} plus (0, N); swapping merges
    // (N,0) with (0,N) and fixes the others (t=2 pairs with itself: the
    // pair (2N, N) is conjugate to (N, 2N))
    assert_eq!(census.indecomposable_count, 4);
    assert_eq!(census.swap_merged_indec_count, 3);
    // sanity: swapping is an involution up to isomorphism
    for c in &census.classes {
        let s = swap_generators(&swap_generators(&c.module));
        assert!(modrep::hom::is_isomorphic(&s, &c.module, &cfg).unwrap());
    }
}
