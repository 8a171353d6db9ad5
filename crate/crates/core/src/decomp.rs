//! Krull–Schmidt machinery: splitting modules into indecomposables,
//! certifying (absolute) indecomposability through the endomorphism ring,
//! Jacobson radicals of matrix algebras in characteristic p, and fast
//! stripping of free summands.
//!
//! Free summands split off through the socle element s = prod A_i^(p-1):
//! the free rank of M equals rank(s|M), and the complement of the free part
//! is cut out by the functionals dual to a basis of s*M composed with all
//! monomials in the generators.

use crate::config::{mix, RunConfig, FITTING_ATTEMPTS};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::hom::{self};
use crate::matrix::{Matrix, SpanSolver};
use crate::rep::Module;
use rand_core::RngCore;

// --- Jacobson radical -----------------------------------------------------

/// Radical of a matrix algebra over GF(p) by the iterated trace-form method:
/// R_0 = A, R_{i+1} = {x in R_i : e_{p^i}(char poly of xy) = 0 for all y in
/// R_i}, stopping once p^i exceeds the ambient matrix size. Over the prime
/// field each step is a linear system.
pub(crate) fn radical_of(basis: &[Matrix], field: &Field) -> Vec<Matrix> {
    if basis.is_empty() {
        return vec![];
    }
    assert!(
        field.is_prime_field(),
        "radical computation is implemented over prime fields (module data is GF(p))"
    );
    let n = basis[0].rows() as u64;
    let p = field.p();
    let mut cur: Vec<Matrix> = basis.to_vec();
    let mut pe = 1u64; // p^i
    while pe <= n {
        if cur.is_empty() {
            return cur;
        }
        let k = cur.len();
        // T[t][s] = tau(cur_s * cur_t), tau = elementary symmetric e_{pe}
        let mut t_mat = Matrix::zeros(field.clone(), k, k);
        for s in 0..k {
            for t in 0..k {
                let prod = cur[s].mul(&cur[t]);
                t_mat.set(t, s, sym_coeff(&prod, pe));
            }
        }
        let null = t_mat.nullspace();
        let mut next = Vec::with_capacity(null.cols());
        for c in 0..null.cols() {
            let v = null.column(c);
            let mut acc = Matrix::zeros(field.clone(), basis[0].rows(), basis[0].cols());
            for (s, &coef) in v.iter().enumerate() {
                if coef != 0 {
                    acc = acc.add(&cur[s].scale(coef));
                }
            }
            next.push(acc);
        }
        cur = next;
        pe *= p;
    }
    cur
}

/// e_j of the eigenvalues, read off the characteristic polynomial:
/// char(t) = sum_j (-1)^j e_j t^(n-j).
fn sym_coeff(m: &Matrix, j: u64) -> u64 {
    let n = m.rows() as u64;
    if j > n {
        return 0;
    }
    let cp = m.char_poly();
    let f = m.field();
    let c = cp[(n - j) as usize];
    if j % 2 == 0 {
        c
    } else {
        f.neg(c)
    }
}

/// Brute-force radical for tiny algebras: the span of all elements whose
/// two-sided ideal closure is nil ("nil" checked by powering the span).
pub fn radical_brute(basis: &[Matrix], field: &Field) -> Vec<Matrix> {
    assert!(basis.len() <= 10, "brute-force radical is for tiny algebras");
    if basis.is_empty() {
        return vec![];
    }
    let p = field.p();
    let k = basis.len();
    let n = basis[0].rows();
    let count = (p as u128).pow(k as u32) as u64;
    let mut members: Vec<Vec<u64>> = Vec::new();
    for code in 1..count {
        let mut digits = code;
        let mut x = Matrix::zeros(field.clone(), n, n);
        for b in basis {
            let d = digits % p;
            digits /= p;
            if d != 0 {
                x = x.add(&b.scale(d));
            }
        }
        if ideal_is_nil(&x, basis, field) {
            members.push(x.data().to_vec());
        }
    }
    let mut solver = SpanSolver::new(field.clone(), n * n);
    let mut out = Vec::new();
    for v in members {
        if solver.insert(&v) {
            out.push(Matrix::new(field.clone(), n, n, v).unwrap());
        }
    }
    out
}

fn ideal_is_nil(x: &Matrix, basis: &[Matrix], field: &Field) -> bool {
    let n = x.rows();
    // two-sided ideal closure of x inside the algebra
    let mut solver = SpanSolver::new(field.clone(), n * n);
    let mut ideal: Vec<Matrix> = Vec::new();
    let mut queue = vec![x.clone()];
    while let Some(m) = queue.pop() {
        if !solver.insert(m.data()) {
            continue;
        }
        for b in basis {
            queue.push(b.mul(&m));
            queue.push(m.mul(b));
        }
        ideal.push(m);
    }
    // nil ideal <=> powers of its span vanish
    let mut layer = ideal.clone();
    for _ in 0..=n {
        if layer.iter().all(|m| m.is_zero()) {
            return true;
        }
        let mut next_solver = SpanSolver::new(field.clone(), n * n);
        let mut next = Vec::new();
        for a in &layer {
            for b in &ideal {
                let prod = a.mul(b);
                if next_solver.insert(prod.data()) {
                    next.push(prod);
                }
            }
        }
        layer = next;
    }
    layer.iter().all(|m| m.is_zero())
}

/// A matrix algebra with its radical and semisimple quotient dimension.
#[derive(Debug, Clone)]
pub struct AlgebraRadical {
    pub algebra: Vec<Matrix>,
    pub radical_basis: Vec<Matrix>,
    pub semisimple_dim: usize,
}

/// Exact Jacobson radical of a matrix algebra given by a linearly
/// independent, multiplicatively closed basis (both conditions verified).
pub fn algebra_radical(basis: &[Matrix]) -> Result<AlgebraRadical> {
    if basis.is_empty() {
        return Ok(AlgebraRadical { algebra: vec![], radical_basis: vec![], semisimple_dim: 0 });
    }
    let field = basis[0].field().clone();
    let n = basis[0].rows();
    for b in basis {
        if b.rows() != n || b.cols() != n || b.field() != &field {
            return Err(Error::InvalidArgument("algebra basis matrices must be square, same size and field".into()));
        }
    }
    let mut solver = SpanSolver::new(field.clone(), n * n);
    for b in basis {
        if !solver.insert(b.data()) {
            return Err(Error::InvalidArgument("algebra basis is linearly dependent".into()));
        }
    }
    for a in basis {
        for b in basis {
            if !solver.contains(a.mul(b).data()) {
                return Err(Error::InvalidArgument("basis is not multiplicatively closed".into()));
            }
        }
    }
    let rad = if basis.len() <= 6 {
        // cheap enough to take the provably-correct search directly
        let brute = radical_brute(basis, &field);
        debug_assert_eq!(brute.len(), radical_of(basis, &field).len());
        brute
    } else {
        radical_of(basis, &field)
    };
    // verify: an ideal whose powers vanish
    let rad_solver =
        SpanSolver::from_vectors(field.clone(), &rad.iter().map(|m| m.data().to_vec()).collect::<Vec<_>>());
    for r in &rad {
        for b in basis {
            assert!(
                rad_solver.contains(b.mul(r).data()) && rad_solver.contains(r.mul(b).data()),
                "radical is not an ideal"
            );
        }
    }
    let mut layer = rad.clone();
    let mut vanished = layer.is_empty();
    for _ in 0..=basis.len() {
        if layer.iter().all(|m| m.is_zero()) {
            vanished = true;
            break;
        }
        let mut next_solver = SpanSolver::new(field.clone(), n * n);
        let mut next = Vec::new();
        for a in &layer {
            for b in &rad {
                let prod = a.mul(b);
                if next_solver.insert(prod.data()) {
                    next.push(prod);
                }
            }
        }
        layer = next;
    }
    assert!(vanished || layer.iter().all(|m| m.is_zero()), "radical is not nilpotent");
    Ok(AlgebraRadical {
        algebra: basis.to_vec(),
        radical_basis: rad.clone(),
        semisimple_dim: basis.len() - rad.len(),
    })
}

// --- semisimple quotient --------------------------------------------------

/// The quotient of an endomorphism algebra by its radical, with enough
/// structure to test locality and to construct idempotents.
pub(crate) struct QuotientAlgebra {
    field: Field,
    /// Complement representatives of the quotient basis.
    comp: Vec<Matrix>,
    full: SpanSolver,
    rad_dim: usize,
    pub t: usize,
    one: Vec<u64>,
}

impl QuotientAlgebra {
    pub fn new(basis: &[Matrix], rad: &[Matrix], field: &Field) -> QuotientAlgebra {
        let n = basis[0].rows();
        let mut full = SpanSolver::new(field.clone(), n * n);
        for r in rad {
            let fresh = full.insert(r.data());
            debug_assert!(fresh);
        }
        let mut comp = Vec::new();
        for b in basis {
            if full.insert(b.data()) {
                comp.push(b.clone());
            }
        }
        let one_mat = Matrix::identity(field.clone(), n);
        let one_full = full.express(one_mat.data()).expect("identity lies in End");
        let t = comp.len();
        let one = one_full[rad.len()..].to_vec();
        QuotientAlgebra { field: field.clone(), comp, full, rad_dim: rad.len(), t, one }
    }

    fn coords(&self, m: &Matrix) -> Vec<u64> {
        let c = self.full.express(m.data()).expect("element outside the algebra");
        c[self.rad_dim..].to_vec()
    }

    fn representative(&self, x: &[u64]) -> Matrix {
        let n = self.comp[0].rows();
        let mut acc = Matrix::zeros(self.field.clone(), n, n);
        for (j, &c) in x.iter().enumerate() {
            if c != 0 {
                acc = acc.add(&self.comp[j].scale(c));
            }
        }
        acc
    }

    pub fn mul(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        self.coords(&self.representative(x).mul(&self.representative(y)))
    }

    pub fn is_commutative(&self) -> bool {
        for i in 0..self.t {
            for j in (i + 1)..self.t {
                let a = self.comp[i].mul(&self.comp[j]);
                let b = self.comp[j].mul(&self.comp[i]);
                if self.coords(&a) != self.coords(&b) {
                    return false;
                }
            }
        }
        true
    }

    /// Matrix of x -> x^p on the quotient (linear over GF(p) once the
    /// quotient is commutative; the caller checks commutativity first).
    fn frobenius(&self) -> Matrix {
        let p = self.field.p() as usize;
        let mut cols = Vec::with_capacity(self.t);
        for j in 0..self.t {
            cols.push(self.coords(&self.comp[j].pow(p)));
        }
        Matrix::from_cols(self.field.clone(), self.t, cols).unwrap()
    }

    fn frobenius_fixed_dim(&self) -> usize {
        let f = self.frobenius();
        f.sub(&Matrix::identity(self.field.clone(), self.t)).nullspace().cols()
    }

    /// Local <=> the quotient is a division algebra <=> (Wedderburn over a
    /// finite field) a field <=> commutative with Frobenius fixed space of
    /// dimension 1.
    pub fn is_local(&self) -> bool {
        if self.t == 1 {
            return true;
        }
        self.is_commutative() && self.frobenius_fixed_dim() == 1
    }

    fn minpoly(&self, x: &[u64]) -> Vec<u64> {
        let mut solver = SpanSolver::new(self.field.clone(), self.t);
        let mut powers: Vec<Vec<u64>> = vec![self.one.clone()];
        solver.insert(&self.one);
        let mut cur = x.to_vec();
        loop {
            if !solver.insert(&cur) {
                let coords = solver.express(&cur).unwrap();
                // x^k = sum coords_i x^i  =>  minpoly = t^k - sum coords_i t^i
                let k = powers.len();
                let mut mp = vec![0u64; k + 1];
                mp[k] = 1;
                for (i, &c) in coords.iter().enumerate() {
                    mp[i] = self.field.neg(c);
                }
                return mp;
            }
            powers.push(cur.clone());
            cur = self.mul(&cur, x);
        }
    }

    fn eval_poly(&self, poly: &[u64], x: &[u64]) -> Vec<u64> {
        let mut acc = vec![0u64; self.t];
        for &c in poly.iter().rev() {
            acc = self.mul(&acc, x);
            if c != 0 {
                for (a, o) in acc.iter_mut().zip(&self.one) {
                    *a = self.field.add(*a, self.field.mul(c, *o));
                }
            }
        }
        acc
    }

    /// A nontrivial idempotent of the (semisimple, non-division) quotient,
    /// found deterministically.
    pub fn find_idempotent(&self) -> Vec<u64> {
        assert!(!self.is_local());
        if self.is_commutative() {
            // a Frobenius-fixed non-scalar has squarefree split minimal
            // polynomial; project onto one eigenvalue
            let fix = self
                .frobenius()
                .sub(&Matrix::identity(self.field.clone(), self.t))
                .nullspace();
            let scalar_line = SpanSolver::from_vectors(self.field.clone(), &[self.one.clone()]);
            let w = (0..fix.cols())
                .map(|c| fix.column(c))
                .find(|v| !scalar_line.contains(v))
                .expect("fixed space exceeds the scalars");
            let mp = self.minpoly(&w);
            let roots: Vec<u64> =
                (0..self.field.p()).filter(|&c| eval_scalar(&mp, c, &self.field) == 0).collect();
            assert!(roots.len() >= 2, "fixed non-scalar must have split reducible minpoly");
            let c0 = roots[0];
            let mut e = self.one.clone();
            for &c in &roots[1..] {
                // e *= (w - c) / (c0 - c)
                let mut shifted = w.clone();
                for (s, o) in shifted.iter_mut().zip(&self.one) {
                    *s = self.field.sub(*s, self.field.mul(c, *o));
                }
                let scale = self.field.inv(self.field.sub(c0, c)).unwrap();
                shifted = shifted.iter().map(|&v| self.field.mul(v, scale)).collect();
                e = self.mul(&e, &shifted);
            }
            debug_assert_eq!(self.mul(&e, &e), e);
            assert!(e.iter().any(|&x| x != 0) && e != self.one);
            return e;
        }
        // noncommutative: scan for a zero divisor z, then solve for the left
        // identity of the proper right ideal z * Q
        let p = self.field.p();
        let total = (p as u128).pow(self.t as u32);
        for code in 1..total {
            let mut digits = code;
            let mut z = vec![0u64; self.t];
            for zi in z.iter_mut() {
                *zi = (digits % p as u128) as u64;
                digits /= p as u128;
            }
            let mut cols = Vec::with_capacity(self.t);
            for j in 0..self.t {
                let mut unit = vec![0u64; self.t];
                unit[j] = 1;
                cols.push(self.mul(&z, &unit));
            }
            let l = Matrix::from_cols(self.field.clone(), self.t, cols).unwrap();
            if l.rank() == self.t {
                continue;
            }
            let w = l.column_space_basis();
            let s = w.cols();
            if s == 0 {
                continue;
            }
            // e = W alpha with e * w_i = w_i for all i
            let mut sys = Matrix::zeros(self.field.clone(), s * self.t, s);
            let mut rhs = Matrix::zeros(self.field.clone(), s * self.t, 1);
            for i in 0..s {
                let wi = w.column(i);
                for kcol in 0..s {
                    let prod = self.mul(&w.column(kcol), &wi);
                    for r in 0..self.t {
                        sys.set(i * self.t + r, kcol, prod[r]);
                    }
                }
                for r in 0..self.t {
                    rhs.set(i * self.t + r, 0, wi[r]);
                }
            }
            if let Ok(Some(alpha)) = sys.solve(&rhs) {
                let mut e = vec![0u64; self.t];
                for kcol in 0..s {
                    let c = alpha.get(kcol, 0);
                    if c != 0 {
                        let col = w.column(kcol);
                        for (ei, &wv) in e.iter_mut().zip(&col) {
                            *ei = self.field.add(*ei, self.field.mul(c, wv));
                        }
                    }
                }
                if e.iter().any(|&x| x != 0) && e != self.one && self.mul(&e, &e) == e {
                    return e;
                }
            }
        }
        unreachable!("a non-division semisimple algebra contains a nontrivial idempotent")
    }

    /// Lift a quotient idempotent to a genuine idempotent endomorphism by
    /// iterated p-th powers (the radical is nilpotent).
    pub fn lift_idempotent(&self, e: &[u64]) -> Matrix {
        let p = self.field.p() as usize;
        let mut a = self.representative(e);
        for _ in 0..64 {
            if a.mul(&a) == a {
                return a;
            }
            a = a.pow(p);
        }
        unreachable!("idempotent lifting stabilizes within log_p of the nilpotency class")
    }
}

fn eval_scalar(poly: &[u64], x: u64, field: &Field) -> u64 {
    let mut acc = 0u64;
    for &c in poly.iter().rev() {
        acc = field.add(field.mul(acc, x), c);
    }
    acc
}

// --- indecomposability ----------------------------------------------------

fn end_quotient(m: &Module) -> QuotientAlgebra {
    let end = hom::end_algebra(m).expect("module is self-compatible");
    let rad = radical_of(&end.basis, m.field());
    QuotientAlgebra::new(&end.basis, &rad, m.field())
}

/// Indecomposable <=> End(m) is local. Deterministic.
pub fn is_indecomposable(m: &Module) -> bool {
    if m.dim() == 0 {
        return false;
    }
    if m.dim() == 1 {
        return true;
    }
    end_quotient(m).is_local()
}

/// Absolutely indecomposable <=> End(m)/rad has dimension 1.
pub fn is_absolutely_indecomposable(m: &Module) -> bool {
    if m.dim() == 0 {
        return false;
    }
    if m.dim() == 1 {
        return true;
    }
    end_quotient(m).t == 1
}

// --- free part ------------------------------------------------------------

pub(crate) struct StripData {
    pub free_rank: usize,
    /// n x (free_rank * |G|) columns: the group orbits of the chosen free
    /// generators, blockwise bases of the free summands.
    pub free_cols: Matrix,
    /// n x c invariant complement basis.
    pub core_basis: Matrix,
    pub core: Module,
}

fn row_apply(v: &[u64], m: &Matrix, field: &Field) -> Vec<u64> {
    let mut out = vec![0u64; m.cols()];
    for (j, o) in out.iter_mut().enumerate() {
        let mut acc = 0u64;
        for (k, &x) in v.iter().enumerate() {
            acc = field.add(acc, field.mul(x, m.get(k, j)));
        }
        *o = acc;
    }
    out
}

/// Row orbit of a functional under all monomials in the generators
/// (exponent-indexed like the group elements).
fn row_monomial_orbit(m: &Module, row: &[u64]) -> Vec<Vec<u64>> {
    let q = m.group().order();
    let p = m.group().p as usize;
    let mut out: Vec<Vec<u64>> = Vec::with_capacity(q);
    out.push(row.to_vec());
    for idx in 1..q {
        let mut rem = idx;
        let mut i = 0;
        while rem % p == 0 {
            rem /= p;
            i += 1;
        }
        let step = p.pow(i as u32);
        let prev = &out[idx - step];
        out.push(row_apply(prev, m.gen(i), m.field()));
    }
    out
}

pub(crate) fn strip_free_part(m: &Module) -> StripData {
    let n = m.dim();
    let f = m.field().clone();
    let q = m.group().order();
    let s = m.socle_element();
    let piv = s.rref().pivots;
    let free_rank = piv.len();
    if free_rank == 0 {
        return StripData {
            free_rank: 0,
            free_cols: Matrix::zeros(f.clone(), n, 0),
            core_basis: Matrix::identity(f, n),
            core: m.clone(),
        };
    }
    // free generators m_j = e_{c_j}: s m_j form a basis of im(s)
    let mut free_cols: Vec<Vec<u64>> = Vec::with_capacity(free_rank * q);
    for &c in &piv {
        let mut v = vec![0u64; n];
        v[c] = 1;
        free_cols.extend(m.group_orbit_columns(&v));
    }
    let free_cols = Matrix::from_cols(f.clone(), n, free_cols).unwrap();

    // functionals dual to the basis s m_j of im(s)
    let b = s.select_columns(&piv); // n x f, full column rank
    let dt = b
        .transpose()
        .solve(&Matrix::identity(f.clone(), free_rank))
        .unwrap()
        .expect("dual functionals exist");
    // rows f_i composed with every monomial cut out the complement
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(free_rank * q);
    for i in 0..free_rank {
        rows.extend(row_monomial_orbit(m, &dt.column(i)));
    }
    let t = Matrix::from_rows(f.clone(), rows).unwrap();
    let core_basis = t.nullspace();
    assert_eq!(
        core_basis.cols(),
        n - free_rank * q,
        "free-part splitting produced a complement of the wrong dimension"
    );
    let core = m
        .on_invariant_basis(&core_basis)
        .expect("complement of the free part is invariant");
    StripData { free_rank, free_cols, core_basis, core }
}

/// Split off every free (= projective) summand; returns the projective-free
/// core and the number of copies of the regular module removed.
pub fn strip_projectives(m: &Module) -> (Module, usize) {
    let s = strip_free_part(m);
    (s.core, s.free_rank)
}

// --- Fitting splits and full decomposition ---------------------------------

/// Kernel/image split along an endomorphism: returns the modules carried by
/// ker(theta^n) and im(theta^n). Errors unless theta intertwines every
/// generator.
pub fn fitting_split(m: &Module, theta: &Matrix) -> Result<(Module, Module)> {
    if theta.rows() != m.dim() || theta.cols() != m.dim() {
        return Err(Error::DimensionMismatch("endomorphism of the wrong shape".into()));
    }
    for (i, a) in m.gens().iter().enumerate() {
        if theta.mul(a) != a.mul(theta) {
            return Err(Error::InvalidArgument(format!(
                "matrix does not commute with generator {i}: not an endomorphism"
            )));
        }
    }
    let stable = theta.pow(m.dim().max(1));
    let ker = stable.nullspace();
    let img = stable.column_space_basis();
    let km = m.on_invariant_basis(&ker)?;
    let im = m.on_invariant_basis(&img)?;
    Ok((km, im))
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    /// Indecomposable diagonal blocks, in witness order.
    pub blocks: Vec<Module>,
    /// Base change: witness^{-1} * A_i * witness is block diagonal with the
    /// blocks above.
    pub witness: Matrix,
    /// Iso-classes with multiplicities (blocks grouped by isomorphism).
    pub summands: Vec<(Module, usize)>,
}

impl Decomposition {
    pub fn total_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.dim()).sum()
    }
}

pub fn decompose(m: &Module, cfg: &RunConfig) -> Decomposition {
    let f = m.field().clone();
    let n = m.dim();
    if n == 0 {
        return Decomposition {
            blocks: vec![],
            witness: Matrix::identity(f, 0),
            summands: vec![],
        };
    }
    let strip = strip_free_part(m);
    let (core_blocks, core_witness) = ks_rec(&strip.core, cfg, mix(m.content_tag(), 0xD7C0));
    let witness = strip.free_cols.hstack(&strip.core_basis.mul(&core_witness));
    debug_assert!(witness.is_invertible());
    let mut blocks: Vec<Module> = Vec::new();
    if strip.free_rank > 0 {
        let reg = Module::regular(m.group(), f).expect("regular module");
        blocks.extend(std::iter::repeat_with(|| reg.clone()).take(strip.free_rank));
    }
    blocks.extend(core_blocks);
    let summands = group_blocks(&blocks, cfg);
    Decomposition { blocks, witness, summands }
}

fn group_blocks(blocks: &[Module], cfg: &RunConfig) -> Vec<(Module, usize)> {
    let mut summands: Vec<(Module, usize)> = Vec::new();
    for b in blocks {
        if let Some(entry) = summands
            .iter_mut()
            .find(|(rep, _)| rep.dim() == b.dim() && hom::iso_indec(rep, b, cfg))
        {
            entry.1 += 1;
        } else {
            summands.push((b.clone(), 1));
        }
    }
    summands.sort_by_key(|(m, _)| m.dim());
    summands
}

fn ks_rec(m: &Module, cfg: &RunConfig, path: u64) -> (Vec<Module>, Matrix) {
    let f = m.field().clone();
    let n = m.dim();
    if n == 0 {
        return (vec![], Matrix::identity(f, 0));
    }
    let end = hom::end_algebra(m).expect("module is self-compatible").basis;
    if end.len() == 1 {
        return (vec![m.clone()], Matrix::identity(f, n));
    }
    let mut quotient = None;
    if end.len() <= 64 {
        let rad = radical_of(&end, &f);
        let q = QuotientAlgebra::new(&end, &rad, &f);
        if q.is_local() {
            return (vec![m.clone()], Matrix::identity(f, n));
        }
        quotient = Some(q);
    }
    let mut rng = cfg.rng(mix(path, m.content_tag()));
    for _ in 0..FITTING_ATTEMPTS {
        let theta = random_endo(&end, &f, &mut rng);
        let stable = theta.pow(n);
        let ker = stable.nullspace();
        if ker.cols() > 0 && ker.cols() < n {
            let img = stable.column_space_basis();
            return split_along(m, &ker, &img, cfg, path);
        }
    }
    // certified fallback: construct an idempotent in End/rad and lift it
    let q = quotient.unwrap_or_else(|| {
        let rad = radical_of(&end, &f);
        QuotientAlgebra::new(&end, &rad, &f)
    });
    if q.is_local() {
        return (vec![m.clone()], Matrix::identity(f, n));
    }
    let e = q.find_idempotent();
    let theta = q.lift_idempotent(&e);
    let ker = theta.nullspace();
    let img = theta.column_space_basis();
    assert!(ker.cols() > 0 && img.cols() > 0, "lifted idempotent must be proper");
    split_along(m, &ker, &img, cfg, path)
}

fn random_endo(basis: &[Matrix], field: &Field, rng: &mut impl RngCore) -> Matrix {
    let mut acc = Matrix::zeros(field.clone(), basis[0].rows(), basis[0].cols());
    for b in basis {
        let c = field.random_element(rng);
        if c != 0 {
            acc = acc.add(&b.scale(c));
        }
    }
    acc
}

fn split_along(
    m: &Module,
    ker: &Matrix,
    img: &Matrix,
    cfg: &RunConfig,
    path: u64,
) -> (Vec<Module>, Matrix) {
    let f = m.field().clone();
    let n = m.dim();
    let m1 = m.on_invariant_basis(ker).expect("kernel is invariant");
    let m2 = m.on_invariant_basis(img).expect("image is invariant");
    let (b1, w1) = ks_rec(&m1, cfg, mix(path, 1));
    let (b2, w2) = ks_rec(&m2, cfg, mix(path, 2));
    let s = ker.hstack(img);
    debug_assert!(s.is_invertible(), "Fitting parts do not span");
    // witness = S * blockdiag(w1, w2)
    let mut block = Matrix::zeros(f, n, n);
    for i in 0..w1.rows() {
        for j in 0..w1.cols() {
            block.set(i, j, w1.get(i, j));
        }
    }
    for i in 0..w2.rows() {
        for j in 0..w2.cols() {
            block.set(w1.rows() + i, w1.cols() + j, w2.get(i, j));
        }
    }
    let witness = s.mul(&block);
    let mut blocks = b1;
    blocks.extend(b2);
    (blocks, witness)
}

/// Compare two grouped decompositions as iso-multisets.
pub(crate) fn same_multiset(
    a: &[(Module, usize)],
    b: &[(Module, usize)],
    cfg: &RunConfig,
) -> bool {
    if a.iter().map(|x| x.1).sum::<usize>() != b.iter().map(|x| x.1).sum::<usize>() {
        return false;
    }
    let mut used = vec![false; b.len()];
    for (ma, mult_a) in a {
        let mut found = false;
        for (i, (mb, mult_b)) in b.iter().enumerate() {
            if !used[i] && mult_a == mult_b && ma.dim() == mb.dim() && hom::iso_indec(ma, mb, cfg)
            {
                used[i] = true;
                found = true;
                break;
            }
        }
        if !found {
            return false;
        }
    }
    used.iter().all(|&u| u)
}

/// Bijective matching of two block lists with explicit isomorphisms:
/// `result[i] = (j, phi)` with `phi` an isomorphism blocks_a[i] -> blocks_b[j].
pub(crate) fn block_matching(
    a: &[Module],
    b: &[Module],
    cfg: &RunConfig,
) -> Option<Vec<(usize, Matrix)>> {
    if a.len() != b.len() {
        return None;
    }
    let mut used = vec![false; b.len()];
    let mut out = Vec::with_capacity(a.len());
    for ma in a {
        let mut hit = None;
        for (j, mb) in b.iter().enumerate() {
            if used[j] || ma.dim() != mb.dim() {
                continue;
            }
            if let Ok(Some(phi)) = hom::find_isomorphism(ma, mb, cfg) {
                hit = Some((j, phi));
                break;
            }
        }
        let (j, phi) = hit?;
        used[j] = true;
        out.push((j, phi));
    }
    Some(out)
}
