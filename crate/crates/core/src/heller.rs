//! Syzygy machinery: radicals of modules, minimal projective covers, the
//! Heller operator and its translates. Omega^{-1} goes through duality
//! (the group algebra is self-injective), and every translate is projective-
//! stripped so dimensions stay minimal.

use crate::decomp::strip_projectives;
use crate::error::{Error, Result};
use crate::hom::{presentation, radical_basis};
use crate::matrix::Matrix;
use crate::rep::Module;

/// Basis of J(KG)·M = sum_i im(A_i) as columns.
pub fn radical_submodule(m: &Module) -> Matrix {
    radical_basis(m)
}

pub struct CoverData {
    pub module: Module,
    /// Number of free summands of the minimal projective cover.
    pub cover_rank: usize,
    /// Surjection (regular)^cover_rank -> module; column (j, a) is group
    /// element a applied to the lift of top-basis vector j.
    pub cover_map: Matrix,
    /// The Heller translate: the kernel with its induced action.
    pub kernel: Module,
    /// Columns embed the kernel into (regular)^cover_rank.
    pub kernel_inclusion: Matrix,
}

pub fn projective_cover(m: &Module) -> Result<CoverData> {
    if m.dim() == 0 {
        return Err(Error::InvalidArgument("projective cover needs dim >= 1".into()));
    }
    let f = m.field().clone();
    let p = m.group().p;
    let rank = m.group().rank;
    let q = m.group().order();
    let pres = presentation(m);
    let g = pres.top_rank;
    debug_assert_eq!(g, m.dim() - radical_submodule(m).cols());
    let cover_map = pres.eval.clone();
    let kernel_inclusion = pres.relations.clone();

    // minimality: the kernel lies inside rad((regular)^g), i.e. every block
    // has augmentation zero in the group-element basis
    for c in 0..kernel_inclusion.cols() {
        let col = kernel_inclusion.column(c);
        for j in 0..g {
            let mut aug = 0u64;
            for a in 0..q {
                aug = f.add(aug, col[j * q + a]);
            }
            assert_eq!(aug, 0, "cover is not minimal: kernel escapes the radical");
        }
    }

    // induced action on the kernel: restrict the blockwise regular action
    let kernel = kernel_module(p, rank, g, &kernel_inclusion, m)?;
    Ok(CoverData {
        module: m.clone(),
        cover_rank: g,
        cover_map,
        kernel,
        kernel_inclusion,
    })
}

fn kernel_module(
    p: u64,
    rank: usize,
    g: usize,
    basis: &Matrix,
    m: &Module,
) -> Result<Module> {
    let f = m.field().clone();
    let q = (p as usize).pow(rank as u32);
    let kdim = basis.cols();
    let mut gens = Vec::with_capacity(rank);
    for i in 0..rank {
        // (P_i - I) applied to each kernel basis column, blockwise
        let step = (p as usize).pow(i as u32);
        let mut cols: Vec<Vec<u64>> = Vec::with_capacity(kdim);
        for c in 0..kdim {
            let v = basis.column(c);
            let mut out = vec![0u64; v.len()];
            for b in 0..g {
                let base = b * q;
                for a in 0..q {
                    let digit = (a / step) % p as usize;
                    let target = if digit + 1 == p as usize { a - digit * step } else { a + step };
                    out[base + target] = f.add(out[base + target], v[base + a]);
                }
                for a in 0..q {
                    out[base + a] = f.sub(out[base + a], v[base + a]);
                }
            }
            cols.push(out);
        }
        let img = Matrix::from_cols(f.clone(), basis.rows(), cols)?;
        let act = basis
            .solve(&img)?
            .ok_or_else(|| Error::InvalidModule("kernel is not invariant".into()))?;
        gens.push(act);
    }
    Module::new(m.group(), f, gens)
}

/// Heller operator: kernel of the minimal projective cover of the
/// projective-free core.
pub fn omega(m: &Module) -> Module {
    let (core, _) = strip_projectives(m);
    if core.dim() == 0 {
        return Module::zero(m.group(), m.field().clone()).expect("zero module");
    }
    projective_cover(&core).expect("core has positive dimension").kernel
}

/// Omega^{-1} = dual . omega . dual.
pub fn omega_inverse(m: &Module) -> Module {
    omega(&m.dual()).dual()
}

/// Iterated translate; n = 0 returns the projective-free core.
pub fn omega_n(m: &Module, n: i64) -> Module {
    let (mut cur, _) = strip_projectives(m);
    if n >= 0 {
        for _ in 0..n {
            cur = omega(&cur);
        }
    } else {
        for _ in 0..(-n) {
            cur = omega_inverse(&cur);
        }
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RunConfig;
    use crate::field::Field;
    use crate::hom::is_isomorphic;
    use crate::rep::GroupSpec;

    fn g32() -> GroupSpec {
        GroupSpec::new(3, 2).unwrap()
    }

    fn gf3() -> Field {
        Field::prime(3).unwrap()
    }

    #[test]
    fn radical_examples() {
        let k = Module::trivial(g32(), gf3()).unwrap();
        assert_eq!(radical_submodule(&k).cols(), 0);

        let reg = Module::regular(g32(), gf3()).unwrap();
        assert_eq!(radical_submodule(&reg).cols(), 8);

        let j = Matrix::jordan_nilpotent(gf3(), 3);
        let z = Matrix::zeros(gf3(), 3, 3);
        let m = Module::new(g32(), gf3(), vec![j, z]).unwrap();
        assert_eq!(radical_submodule(&m).cols(), 2);
    }

    #[test]
    fn cover_examples() {
        let reg = Module::regular(g32(), gf3()).unwrap();
        let c = projective_cover(&reg).unwrap();
        assert_eq!(c.cover_rank, 1);
        assert_eq!(c.kernel.dim(), 0);

        let k = Module::trivial(g32(), gf3()).unwrap();
        let c = projective_cover(&k).unwrap();
        assert_eq!(c.cover_rank, 1);
        assert_eq!(c.kernel.dim(), 8);
        // exactness bookkeeping and the zero composite
        assert!(c.cover_map.mul(&c.kernel_inclusion).is_zero());
        assert_eq!(c.cover_map.rank(), 1);

        let kk = k.direct_sum(&k).unwrap();
        assert_eq!(projective_cover(&kk).unwrap().cover_rank, 2);
    }

    #[test]
    fn omega_dimension_ladder() {
        let k = Module::trivial(g32(), gf3()).unwrap();
        let dims: Vec<usize> = (0..=4).map(|n| omega_n(&k, n).dim()).collect();
        assert_eq!(dims, vec![1, 8, 10, 17, 19]);
    }

    #[test]
    fn omega_of_projective_vanishes() {
        let reg = Module::regular(g32(), gf3()).unwrap();
        assert_eq!(omega(&reg).dim(), 0);
    }

    #[test]
    fn omega_inverse_inverts() {
        let cfg = RunConfig::default();
        let k = Module::trivial(g32(), gf3()).unwrap();
        let om = omega(&k);
        let back = omega_inverse(&om);
        assert_eq!(back.dim(), 1);
        assert!(is_isomorphic(&back, &k, &cfg).unwrap());
        // and the other composition order
        let fwd = omega(&omega_inverse(&k));
        assert!(is_isomorphic(&fwd, &k, &cfg).unwrap());
    }

    #[test]
    fn omega_has_no_free_summand() {
        let k = Module::trivial(g32(), gf3()).unwrap();
        for n in 1..=3 {
            let om = omega_n(&k, n);
            let (_, free) = strip_projectives(&om);
            assert_eq!(free, 0);
        }
    }
}
