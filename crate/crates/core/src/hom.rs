//! Module homomorphisms, computed from a presentation of the source.
//!
//! A homomorphism is determined by the images of generators of the source
//! modulo its radical; the linear constraints come from the relations of the
//! minimal free presentation. This keeps the solve at `top * dim(target)`
//! unknowns instead of `dim(source) * dim(target)`.

use crate::config::{fnv1a, RunConfig, ISO_RANDOM_DRAWS};
use crate::decomp;
use crate::error::Result;
use crate::field::Field;
use crate::matrix::Matrix;
use crate::rep::Module;
use rand_core::RngCore;

/// Minimal free presentation data for a module.
pub struct Presentation {
    /// Number of module generators (dimension of the top).
    pub top_rank: usize,
    /// Coordinate indices whose basis vectors lift a basis of the top.
    pub generator_cols: Vec<usize>,
    /// Evaluation map from the free module of rank `top_rank`:
    /// column `j*q + a` is the group element `a` applied to generator `j`.
    pub eval: Matrix,
    /// k-basis of the kernel of `eval` (the relation module).
    pub relations: Matrix,
    /// Columns of `relations` combinations that generate the relation
    /// module over the group algebra.
    pub relation_generators: Matrix,
}

/// Basis of the radical subspace `sum_i im(A_i)` as columns.
pub fn radical_basis(m: &Module) -> Matrix {
    if m.dim() == 0 || m.group().rank == 0 {
        return Matrix::zeros(m.field().clone(), m.dim(), 0);
    }
    let mut stacked = m.gens()[0].clone();
    for a in &m.gens()[1..] {
        stacked = stacked.hstack(a);
    }
    stacked.column_space_basis()
}

/// Vectors e_c whose images form a basis of m / rad(m). Returns the chosen
/// coordinate indices.
pub fn top_generator_cols(m: &Module) -> Vec<usize> {
    let rad = radical_basis(m);
    let n = m.dim();
    let combined = rad.hstack(&Matrix::identity(m.field().clone(), n));
    let piv = combined.rref().pivots;
    piv.into_iter().filter(|&c| c >= rad.cols()).map(|c| c - rad.cols()).collect()
}

pub fn presentation(m: &Module) -> Presentation {
    let n = m.dim();
    let q = m.group().order();
    let f = m.field().clone();
    let gen_cols = top_generator_cols(m);
    let g = gen_cols.len();
    let mut cols: Vec<Vec<u64>> = Vec::with_capacity(g * q);
    for &c in &gen_cols {
        let mut v = vec![0u64; n];
        v[c] = 1;
        cols.extend(m.group_orbit_columns(&v));
    }
    let eval = Matrix::from_cols(f.clone(), n, cols).expect("orbit columns have height n");
    let relations = eval.nullspace();
    let relation_generators = relation_module_generators(m, g, &relations);
    Presentation { top_rank: g, generator_cols: gen_cols, eval, relations, relation_generators }
}

/// Apply the regular action of generator i, `(P_i - I)`, blockwise to a
/// stacked vector in (group algebra)^g written in the group-element basis.
fn regular_rad_apply(p: u64, rank: usize, g_blocks: usize, i: usize, v: &[u64], field: &Field) -> Vec<u64> {
    let q = (p as usize).pow(rank as u32);
    let step = (p as usize).pow(i as u32);
    let mut out = vec![0u64; v.len()];
    for b in 0..g_blocks {
        let base = b * q;
        for a in 0..q {
            let digit = (a / step) % p as usize;
            let target = if digit + 1 == p as usize { a - digit * step } else { a + step };
            // (P_i v)[target] = v[a]
            out[base + target] = field.add(out[base + target], v[base + a]);
        }
        for a in 0..q {
            out[base + a] = field.sub(out[base + a], v[base + a]);
        }
    }
    out
}

/// Selects relation columns that generate the relation module over the
/// group algebra (images spanning relations / rad * relations suffice).
fn relation_module_generators(m: &Module, g: usize, relations: &Matrix) -> Matrix {
    let k = relations.cols();
    if k == 0 {
        return relations.clone();
    }
    let f = m.field().clone();
    let p = m.group().p;
    let rank = m.group().rank;
    let mut rad_cols: Vec<Vec<u64>> = Vec::new();
    for i in 0..rank {
        for c in 0..k {
            rad_cols.push(regular_rad_apply(p, rank, g, i, &relations.column(c), &f));
        }
    }
    let rad = Matrix::from_cols(f.clone(), relations.rows(), rad_cols).unwrap();
    let rad_basis = rad.column_space_basis();
    let combined = rad_basis.hstack(relations);
    let piv = combined.rref().pivots;
    let chosen: Vec<usize> = piv
        .into_iter()
        .filter(|&c| c >= rad_basis.cols())
        .map(|c| c - rad_basis.cols())
        .collect();
    relations.select_columns(&chosen)
}

/// Basis of `{phi : phi A_i = B_i phi for all i}` between two modules.
#[derive(Debug, Clone)]
pub struct HomSpace {
    pub source_dim: usize,
    pub target_dim: usize,
    pub basis: Vec<Matrix>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn hom_space(m: &Module, n: &Module) -> Result<HomSpace> {
    m.compatible(n)?;
    let f = m.field().clone();
    let (nm, nn) = (m.dim(), n.dim());
    if nm == 0 || nn == 0 {
        return Ok(HomSpace { source_dim: nm, target_dim: nn, basis: vec![] });
    }
    let q = m.group().order();
    let pres = presentation(m);
    let g = pres.top_rank;
    let gmats = n.group_element_matrices();

    // Unknowns: the images of the g generators stacked into a g*nn vector.
    // One block row per relation generator.
    let t = pres.relation_generators.cols();
    let mut sys = Matrix::zeros(f.clone(), t * nn, g * nn);
    for rel in 0..t {
        let rho = pres.relation_generators.column(rel);
        for j in 0..g {
            // R = sum_a rho[j*q + a] * (group element a on n)
            let mut r = Matrix::zeros(f.clone(), nn, nn);
            for a in 0..q {
                let c = rho[j * q + a];
                if c != 0 {
                    r = r.add(&gmats[a].scale(c));
                }
            }
            for row in 0..nn {
                for col in 0..nn {
                    sys.set(rel * nn + row, j * nn + col, r.get(row, col));
                }
            }
        }
    }
    let sols = sys.nullspace();

    // Materialize each solution as a target_dim x source_dim matrix:
    // phi = W * C where C right-inverts the evaluation map and the columns
    // of W are the group orbit of each generator image.
    let c = pres
        .eval
        .solve(&Matrix::identity(f.clone(), nm))?
        .expect("evaluation map is surjective");
    let mut basis = Vec::with_capacity(sols.cols());
    for s in 0..sols.cols() {
        let w = sols.column(s);
        let mut wcols: Vec<Vec<u64>> = Vec::with_capacity(g * q);
        for j in 0..g {
            let nj = &w[j * nn..(j + 1) * nn];
            wcols.extend(n.group_orbit_columns(nj));
        }
        let wmat = Matrix::from_cols(f.clone(), nn, wcols).unwrap();
        basis.push(wmat.mul(&c));
    }
    Ok(HomSpace { source_dim: nm, target_dim: nn, basis })
}

pub fn end_algebra(m: &Module) -> Result<HomSpace> {
    hom_space(m, m)
}

fn random_combination(basis: &[Matrix], field: &Field, rng: &mut impl RngCore) -> Matrix {
    let mut acc = Matrix::zeros(field.clone(), basis[0].rows(), basis[0].cols());
    for b in basis {
        let c = field.random_element(rng);
        if c != 0 {
            acc = acc.add(&b.scale(c));
        }
    }
    acc
}

/// Cheap isomorphism screens: equal dims, per-generator ranks, radical and
/// socle-element ranks.
fn quick_profile(m: &Module) -> Vec<usize> {
    let mut v = vec![m.dim()];
    v.extend(m.gens().iter().map(|a| a.rank()));
    v.push(radical_basis(m).cols());
    v.push(m.socle_element().rank());
    v
}

/// Searches for an explicit isomorphism matrix. `None` means the modules
/// are not isomorphic (the deterministic fallback is exact).
pub fn find_isomorphism(m: &Module, n: &Module, cfg: &RunConfig) -> Result<Option<Matrix>> {
    m.compatible(n)?;
    if m.dim() != n.dim() {
        return Ok(None);
    }
    if m.dim() == 0 {
        return Ok(Some(Matrix::zeros(m.field().clone(), 0, 0)));
    }
    if quick_profile(m) != quick_profile(n) {
        return Ok(None);
    }
    let h_mn = hom_space(m, n)?;
    if h_mn.dim() == 0 {
        return Ok(None);
    }
    // seeded random search for an invertible homomorphism
    let tag = fnv1a(
        m.content_tag()
            .to_le_bytes()
            .into_iter()
            .chain(n.content_tag().to_le_bytes()),
    );
    let mut rng = cfg.rng(tag);
    for _ in 0..ISO_RANDOM_DRAWS {
        let phi = random_combination(&h_mn.basis, m.field(), &mut rng);
        if phi.is_invertible() {
            return Ok(Some(phi));
        }
    }
    // deterministic: for indecomposables, m = n iff some composite g . f
    // avoids the radical of End(m); otherwise compare decompositions
    if decomp::is_indecomposable(m) && decomp::is_indecomposable(n) {
        let h_nm = hom_space(n, m)?;
        let end_m = end_algebra(m)?;
        let rad = decomp::radical_of(&end_m.basis, m.field());
        let rad_rows: Vec<Vec<u64>> = rad.iter().map(|r| r.data().to_vec()).collect();
        let solver = crate::matrix::SpanSolver::from_vectors(m.field().clone(), &rad_rows);
        for f in &h_mn.basis {
            for g in &h_nm.basis {
                let prod = g.mul(f);
                if !solver.contains(prod.data()) {
                    // g f lies outside the radical of the local ring End(m),
                    // hence is invertible, hence f is injective and so bijective
                    return Ok(Some(f.clone()));
                }
            }
        }
        return Ok(None);
    }
    // decomposable: compare Krull-Schmidt multisets
    let dm = decomp::decompose(m, cfg);
    let dn = decomp::decompose(n, cfg);
    if decomp::same_multiset(&dm.summands, &dn.summands, cfg) {
        // rebuild an explicit iso from the two witnesses is possible but not
        // needed by callers; signal with the identity-free marker below
        let pm = dm.witness;
        let pn = dn.witness;
        // match blocks pairwise to build a genuine isomorphism
        if let Some(perm) = decomp::block_matching(&dm.blocks, &dn.blocks, cfg) {
            let f = m.field().clone();
            let nn = m.dim();
            let mut offs_m = vec![0usize; dm.blocks.len()];
            let mut acc = 0;
            for (i, b) in dm.blocks.iter().enumerate() {
                offs_m[i] = acc;
                acc += b.dim();
            }
            let mut offs_n = vec![0usize; dn.blocks.len()];
            acc = 0;
            for (i, b) in dn.blocks.iter().enumerate() {
                offs_n[i] = acc;
                acc += b.dim();
            }
            let mut block_map = Matrix::zeros(f, nn, nn);
            for (bi, (bj, iso)) in perm.into_iter().enumerate() {
                for r in 0..dn.blocks[bj].dim() {
                    for c in 0..dm.blocks[bi].dim() {
                        block_map.set(offs_n[bj] + r, offs_m[bi] + c, iso.get(r, c));
                    }
                }
            }
            let phi = pn.mul(&block_map).mul(&pm.inverse().expect("witness invertible"));
            return Ok(Some(phi));
        }
    }
    Ok(None)
}

/// True iff the modules are isomorphic. Exact: a randomized search is
/// followed by a deterministic criterion.
pub fn is_isomorphic(m: &Module, n: &Module, cfg: &RunConfig) -> Result<bool> {
    Ok(find_isomorphism(m, n, cfg)?.is_some())
}

/// Isomorphism test for modules already certified indecomposable.
pub(crate) fn iso_indec(m: &Module, n: &Module, cfg: &RunConfig) -> bool {
    if m.dim() != n.dim() || quick_profile(m) != quick_profile(n) {
        return false;
    }
    let h_mn = hom_space(m, n).expect("compatible modules");
    if h_mn.dim() == 0 {
        return false;
    }
    let tag = fnv1a(
        m.content_tag()
            .to_le_bytes()
            .into_iter()
            .chain(n.content_tag().to_le_bytes()),
    );
    let mut rng = cfg.rng(tag);
    for _ in 0..ISO_RANDOM_DRAWS {
        let phi = random_combination(&h_mn.basis, m.field(), &mut rng);
        if phi.is_invertible() {
            return true;
        }
    }
    let h_nm = hom_space(n, m).expect("compatible modules");
    let end_m = end_algebra(m).expect("end algebra");
    let rad = decomp::radical_of(&end_m.basis, m.field());
    let rad_rows: Vec<Vec<u64>> = rad.iter().map(|r| r.data().to_vec()).collect();
    let solver = crate::matrix::SpanSolver::from_vectors(m.field().clone(), &rad_rows);
    for f in &h_mn.basis {
        for g in &h_nm.basis {
            if !solver.contains(g.mul(f).data()) {
                return true;
            }
        }
    }
    false
}
