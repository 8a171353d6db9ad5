//! Seeded generators of random modules and matrices, shared by the test
//! suites. Sampling is over strictly upper-triangular commuting nilpotent
//! pairs (every commuting nilpotent pair is conjugate to one), optionally
//! followed by a random change of basis.

use crate::config::RunConfig;
use crate::decomp::is_absolutely_indecomposable;
use crate::field::Field;
use crate::matrix::Matrix;
use crate::rep::{GroupSpec, Module};
use rand_chacha::ChaCha12Rng;
use rand_core::RngCore;

pub fn random_invertible(field: &Field, n: usize, rng: &mut ChaCha12Rng) -> Matrix {
    loop {
        let m = Matrix::random(field.clone(), n, n, rng);
        if m.is_invertible() {
            return m;
        }
    }
}

fn random_strict_upper(field: &Field, n: usize, rng: &mut ChaCha12Rng) -> Matrix {
    let mut m = Matrix::zeros(field.clone(), n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            m.set(i, j, field.random_element(rng));
        }
    }
    m
}

/// A random rank-2 module of the given dimension: first generator a random
/// strictly upper-triangular nilpotent with A^p = 0, second a random element
/// of its commutant with the same constraints, then a random base change.
pub fn random_module(p: u64, dim: usize, rng: &mut ChaCha12Rng) -> Module {
    let field = Field::prime(p).unwrap();
    let group = GroupSpec::new(p, 2).unwrap();
    if dim == 0 {
        return Module::zero(group, field).unwrap();
    }
    loop {
        let a = random_strict_upper(&field, dim, rng);
        if !a.pow(p as usize).is_zero() {
            continue;
        }
        // solve for strictly upper-triangular B with AB = BA
        let strict: Vec<(usize, usize)> = (0..dim)
            .flat_map(|i| ((i + 1)..dim).map(move |j| (i, j)))
            .collect();
        let vars = strict.len();
        // commutator condition as a linear system over the strict entries
        let mut sys = Matrix::zeros(field.clone(), dim * dim, vars);
        for (v, &(bi, bj)) in strict.iter().enumerate() {
            // d(AB - BA) / d b_{bi,bj}
            for r in 0..dim {
                // (A E_{bi,bj})[r][bj] = A[r][bi]
                let cur = sys.get(r * dim + bj, v);
                sys.set(r * dim + bj, v, field.add(cur, a.get(r, bi)));
            }
            for c in 0..dim {
                // (E_{bi,bj} A)[bi][c] = A[bj][c]
                let cur = sys.get(bi * dim + c, v);
                sys.set(bi * dim + c, v, field.sub(cur, a.get(bj, c)));
            }
        }
        let null = sys.nullspace();
        if null.cols() == 0 {
            continue;
        }
        // random element of the commutant
        let mut coords = vec![0u64; null.cols()];
        for c in coords.iter_mut() {
            *c = field.random_element(rng);
        }
        let mut b = Matrix::zeros(field.clone(), dim, dim);
        for (v, &(bi, bj)) in strict.iter().enumerate() {
            let mut acc = 0u64;
            for (k, &co) in coords.iter().enumerate() {
                acc = field.add(acc, field.mul(co, null.get(v, k)));
            }
            b.set(bi, bj, acc);
        }
        if !b.pow(p as usize).is_zero() {
            continue;
        }
        let m = Module::new(group, field.clone(), vec![a, b]).unwrap();
        debug_assert!(m.validate().is_ok());
        let basis = random_invertible(&field, dim, rng);
        return m.conjugate(&basis).unwrap();
    }
}

/// A random absolutely indecomposable module with dimension in the range.
pub fn random_abs_indec(
    p: u64,
    dims: std::ops::RangeInclusive<usize>,
    rng: &mut ChaCha12Rng,
) -> Module {
    let lo = *dims.start();
    let hi = *dims.end();
    loop {
        let dim = lo + (rng.next_u64() as usize) % (hi - lo + 1);
        let m = random_module(p, dim, rng);
        if is_absolutely_indecomposable(&m) {
            return m;
        }
    }
}

/// Seeded batch for the property suites.
pub fn sample_modules(cfg: &RunConfig, tag: u64, count: usize, p: u64, max_dim: usize) -> Vec<Module> {
    let mut rng = cfg.rng(tag);
    (0..count)
        .map(|_| {
            let dim = 1 + (rng.next_u64() as usize) % max_dim;
            random_module(p, dim, &mut rng)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_modules_are_valid() {
        let cfg = RunConfig::default();
        let mut rng = cfg.rng(42);
        for _ in 0..10 {
            let m = random_module(3, 4, &mut rng);
            assert!(m.validate().is_ok());
            assert_eq!(m.dim(), 4);
        }
    }

    #[test]
    fn abs_indec_sampler_delivers() {
        let cfg = RunConfig::default();
        let mut rng = cfg.rng(43);
        let m = random_abs_indec(3, 2..=4, &mut rng);
        assert!(is_absolutely_indecomposable(&m));
    }
}
