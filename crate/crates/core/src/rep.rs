//! Modules over K[E] for E elementary abelian, stored in A-form: the group
//! generator g_i acts as I + A_i with A_i nilpotent and the A_i commuting.
//! The trivial module is literally zero and all invariants are rank checks.

use crate::config::fnv1a;
use crate::error::{Error, Result};
use crate::field::{is_prime, Field};
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    pub p: u64,
    pub rank: usize,
}

impl GroupSpec {
    pub fn new(p: u64, rank: usize) -> Result<GroupSpec> {
        if !is_prime(p) {
            return Err(Error::GroupMismatch(format!("{p} is not prime")));
        }
        if rank == 0 {
            return Err(Error::GroupMismatch("rank must be >= 1".into()));
        }
        Ok(GroupSpec { p, rank })
    }

    /// Order of the group, p^rank.
    pub fn order(&self) -> usize {
        (self.p as usize).pow(self.rank as u32)
    }
}

/// A subgroup given by independent exponent vectors for the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupSpec {
    pub group: GroupSpec,
    pub basis: Vec<Vec<u64>>,
}

impl SubgroupSpec {
    pub fn new(group: GroupSpec, basis: Vec<Vec<u64>>) -> Result<SubgroupSpec> {
        if basis.is_empty() || basis.len() > group.rank {
            return Err(Error::InvalidArgument(format!(
                "subgroup basis must have 1..={} vectors",
                group.rank
            )));
        }
        if basis.iter().any(|v| v.len() != group.rank) {
            return Err(Error::InvalidArgument("basis vector of wrong length".into()));
        }
        let f = Field::prime(group.p)?;
        let rows: Vec<Vec<u64>> = basis.iter().map(|v| v.iter().map(|&x| x % group.p).collect()).collect();
        let m = Matrix::from_rows(f, rows.clone())?;
        if m.rank() != basis.len() {
            return Err(Error::InvalidArgument("subgroup basis vectors are dependent".into()));
        }
        Ok(SubgroupSpec { group, basis: rows })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

/// First violated module invariant, reported rather than raised.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    WrongGeneratorCount { expected: usize, got: usize },
    WrongShape { gen: usize },
    CharacteristicMismatch { field_p: u64, group_p: u64 },
    NotNilpotent { gen: usize },
    NotCommuting { i: usize, j: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::WrongGeneratorCount { expected, got } => {
                write!(f, "expected {expected} generators, got {got}")
            }
            Violation::WrongShape { gen } => write!(f, "generator {gen} is not dim x dim"),
            Violation::CharacteristicMismatch { field_p, group_p } => {
                write!(f, "field characteristic {field_p} != group characteristic {group_p}")
            }
            Violation::NotNilpotent { gen } => write!(f, "A^p != 0 for generator {gen}"),
            Violation::NotCommuting { i, j } => {
                write!(f, "commutator nonzero for generators {i}, {j}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Module {
    group: GroupSpec,
    field: Field,
    dim: usize,
    gens: Vec<Matrix>,
}

impl Module {
    /// Builds a module after shape checks only; call `validate` for the
    /// full nilpotency/commutativity audit.
    pub fn new(group: GroupSpec, field: Field, gens: Vec<Matrix>) -> Result<Module> {
        if field.p() != group.p {
            return Err(Error::FieldMismatch(format!(
                "field characteristic {} != group characteristic {}",
                field.p(),
                group.p
            )));
        }
        if gens.len() != group.rank {
            return Err(Error::InvalidModule(format!(
                "expected {} generators, got {}",
                group.rank,
                gens.len()
            )));
        }
        let dim = gens.first().map(|g| g.rows()).unwrap_or(0);
        for g in &gens {
            if g.rows() != dim || g.cols() != dim {
                return Err(Error::InvalidModule("generator is not dim x dim".into()));
            }
            if g.field() != &field {
                return Err(Error::FieldMismatch("generator over wrong field".into()));
            }
        }
        Ok(Module { group, field, dim, gens })
    }

    pub fn trivial(group: GroupSpec, field: Field) -> Result<Module> {
        let gens = (0..group.rank).map(|_| Matrix::zeros(field.clone(), 1, 1)).collect();
        Module::new(group, field, gens)
    }

    pub fn zero(group: GroupSpec, field: Field) -> Result<Module> {
        let gens = (0..group.rank).map(|_| Matrix::zeros(field.clone(), 0, 0)).collect();
        Module::new(group, field, gens)
    }

    /// The group algebra acting on itself; basis indexed by exponent
    /// vectors, generator i permuting exponents by +e_i.
    pub fn regular(group: GroupSpec, field: Field) -> Result<Module> {
        let q = group.order();
        let p = group.p as usize;
        let mut gens = Vec::with_capacity(group.rank);
        for i in 0..group.rank {
            let step = p.pow(i as u32);
            let mut perm = Matrix::zeros(field.clone(), q, q);
            for idx in 0..q {
                let digit = (idx / step) % p;
                let target = if digit + 1 == p { idx - digit * step } else { idx + step };
                perm.set(target, idx, 1);
            }
            let a = perm.sub(&Matrix::identity(field.clone(), q));
            gens.push(a);
        }
        Module::new(group, field, gens)
    }

    pub fn group(&self) -> GroupSpec {
        self.group
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gens(&self) -> &[Matrix] {
        &self.gens
    }

    pub fn gen(&self, i: usize) -> &Matrix {
        &self.gens[i]
    }

    /// I + A_i, the action of the group generator itself.
    pub fn unit(&self, i: usize) -> Matrix {
        self.gens[i].add(&Matrix::identity(self.field.clone(), self.dim))
    }

    /// Checks every module invariant, reporting the first violation.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        if self.gens.len() != self.group.rank {
            return Err(Violation::WrongGeneratorCount {
                expected: self.group.rank,
                got: self.gens.len(),
            });
        }
        if self.field.p() != self.group.p {
            return Err(Violation::CharacteristicMismatch {
                field_p: self.field.p(),
                group_p: self.group.p,
            });
        }
        for (i, g) in self.gens.iter().enumerate() {
            if g.rows() != self.dim || g.cols() != self.dim {
                return Err(Violation::WrongShape { gen: i });
            }
        }
        for (i, g) in self.gens.iter().enumerate() {
            if !g.pow(self.group.p as usize).is_zero() {
                return Err(Violation::NotNilpotent { gen: i });
            }
        }
        for i in 0..self.gens.len() {
            for j in (i + 1)..self.gens.len() {
                let ab = self.gens[i].mul(&self.gens[j]);
                let ba = self.gens[j].mul(&self.gens[i]);
                if ab != ba {
                    return Err(Violation::NotCommuting { i, j });
                }
            }
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &Module) -> Result<Module> {
        self.compatible(other)?;
        let n = self.dim + other.dim;
        let mut gens = Vec::with_capacity(self.group.rank);
        for i in 0..self.group.rank {
            let mut g = Matrix::zeros(self.field.clone(), n, n);
            for r in 0..self.dim {
                for c in 0..self.dim {
                    g.set(r, c, self.gens[i].get(r, c));
                }
            }
            for r in 0..other.dim {
                for c in 0..other.dim {
                    g.set(self.dim + r, self.dim + c, other.gens[i].get(r, c));
                }
            }
            gens.push(g);
        }
        Module::new(self.group, self.field.clone(), gens)
    }

    /// Tensor product over the group algebra: since
    /// (I+A) (x) (I+B) = I + A(x)I + I(x)B + A(x)B, generator i of the
    /// result is `A_i (x) I + I (x) B_i + A_i (x) B_i`.
    pub fn tensor(&self, other: &Module) -> Result<Module> {
        self.compatible(other)?;
        let ia = Matrix::identity(self.field.clone(), self.dim);
        let ib = Matrix::identity(self.field.clone(), other.dim);
        let mut gens = Vec::with_capacity(self.group.rank);
        for i in 0..self.group.rank {
            let a = &self.gens[i];
            let b = &other.gens[i];
            let g = a.kron(&ib).add(&ia.kron(b)).add(&a.kron(b));
            gens.push(g);
        }
        Module::new(self.group, self.field.clone(), gens)
    }

    /// Contragredient dual: generator i acts as ((I+A_i)^{-1})^T - I,
    /// with (I+A)^{-1} = sum_{j<p} (-A)^j.
    pub fn dual(&self) -> Module {
        let id = Matrix::identity(self.field.clone(), self.dim);
        let gens = self
            .gens
            .iter()
            .map(|a| {
                let neg_a = a.neg();
                let mut inv = Matrix::identity(self.field.clone(), self.dim);
                let mut pw = Matrix::identity(self.field.clone(), self.dim);
                for _ in 1..self.group.p {
                    pw = pw.mul(&neg_a);
                    inv = inv.add(&pw);
                }
                inv.transpose().sub(&id)
            })
            .collect();
        Module::new(self.group, self.field.clone(), gens).expect("dual preserves shape")
    }

    /// Restriction to the subgroup spanned by `h.basis`: the generator for
    /// basis vector b acts as `prod_i (I+A_i)^{b_i} - I`.
    pub fn restrict(&self, h: &SubgroupSpec) -> Result<Module> {
        if h.group != self.group {
            return Err(Error::GroupMismatch("subgroup of a different group".into()));
        }
        let id = Matrix::identity(self.field.clone(), self.dim);
        let mut gens = Vec::with_capacity(h.rank());
        for b in &h.basis {
            let mut u = Matrix::identity(self.field.clone(), self.dim);
            for (i, &e) in b.iter().enumerate() {
                if e > 0 {
                    u = u.mul(&self.unit(i).pow(e as usize));
                }
            }
            gens.push(u.sub(&id));
        }
        let sub = GroupSpec::new(self.group.p, h.rank())?;
        Module::new(sub, self.field.clone(), gens)
    }

    /// Change of basis: new basis is the columns of `basis`, so generators
    /// become `basis^{-1} A basis`.
    pub fn conjugate(&self, basis: &Matrix) -> Result<Module> {
        let inv = basis
            .inverse()
            .ok_or_else(|| Error::InvalidArgument("conjugating matrix is singular".into()))?;
        let gens = self.gens.iter().map(|a| inv.mul(a).mul(basis)).collect();
        Module::new(self.group, self.field.clone(), gens)
    }

    /// Submodule carried by the columns of `basis` (must be invariant);
    /// returns the module induced on that basis.
    pub fn on_invariant_basis(&self, basis: &Matrix) -> Result<Module> {
        let mut gens = Vec::with_capacity(self.group.rank);
        for a in &self.gens {
            let img = a.mul(basis);
            let sol = basis
                .solve(&img)?
                .ok_or_else(|| Error::InvalidArgument("basis does not span an invariant subspace".into()))?;
            gens.push(sol);
        }
        Module::new(self.group, self.field.clone(), gens)
    }

    /// Socle generator of the group algebra acting on the module:
    /// `s = prod_i A_i^(p-1)`. Its rank equals the free rank of the module.
    pub fn socle_element(&self) -> Matrix {
        let mut s = Matrix::identity(self.field.clone(), self.dim);
        for a in &self.gens {
            s = s.mul(&a.pow(self.group.p as usize - 1));
        }
        s
    }

    /// Action matrices of all p^rank group elements, indexed by exponent
    /// vectors packed little-endian (digit i stride p^i).
    pub fn group_element_matrices(&self) -> Vec<Matrix> {
        let q = self.group.order();
        let p = self.group.p as usize;
        let units: Vec<Matrix> = (0..self.group.rank).map(|i| self.unit(i)).collect();
        let mut out: Vec<Matrix> = Vec::with_capacity(q);
        out.push(Matrix::identity(self.field.clone(), self.dim));
        for idx in 1..q {
            let mut rem = idx;
            let mut i = 0;
            while rem % p == 0 {
                rem /= p;
                i += 1;
            }
            let step = p.pow(i as u32);
            let prev = &out[idx - step];
            out.push(units[i].mul(prev));
        }
        out
    }

    /// The orbit of a vector under all group elements, in exponent-index
    /// order; cheaper than materializing the group element matrices.
    pub fn group_orbit_columns(&self, v: &[u64]) -> Vec<Vec<u64>> {
        let q = self.group.order();
        let p = self.group.p as usize;
        let mut out: Vec<Vec<u64>> = Vec::with_capacity(q);
        out.push(v.to_vec());
        for idx in 1..q {
            let mut rem = idx;
            let mut i = 0;
            while rem % p == 0 {
                rem /= p;
                i += 1;
            }
            let step = p.pow(i as u32);
            let prev = &out[idx - step];
            // (I + A_i) w = w + A_i w
            let aw = apply(&self.gens[i], prev, &self.field);
            let w = prev
                .iter()
                .zip(&aw)
                .map(|(&x, &y)| self.field.add(x, y))
                .collect();
            out.push(w);
        }
        out
    }

    /// Stable content digest; mixes in everything that defines the module.
    pub fn content_tag(&self) -> u64 {
        let mut bytes: Vec<u8> = Vec::new();
        for v in [self.group.p, self.group.rank as u64, self.field.p(), self.field.degree() as u64, self.dim as u64] {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
        for g in &self.gens {
            for &x in g.data() {
                bytes.extend_from_slice(&x.to_le_bytes());
            }
        }
        fnv1a(bytes)
    }

    pub fn compatible(&self, other: &Module) -> Result<()> {
        if self.group != other.group {
            return Err(Error::GroupMismatch(format!(
                "groups differ: C_{}^{} vs C_{}^{}",
                self.group.p, self.group.rank, other.group.p, other.group.rank
            )));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!("{} vs {}", self.field, other.field)));
        }
        Ok(())
    }
}

/// Matrix-vector product.
pub fn apply(m: &Matrix, v: &[u64], field: &Field) -> Vec<u64> {
    debug_assert_eq!(m.cols(), v.len());
    let mut out = vec![0u64; m.rows()];
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0u64;
        for (j, &x) in v.iter().enumerate() {
            acc = field.add(acc, field.mul(m.get(i, j), x));
        }
        *o = acc;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g32() -> GroupSpec {
        GroupSpec::new(3, 2).unwrap()
    }

    fn gf3() -> Field {
        Field::prime(3).unwrap()
    }

    /// The module with x acting as the 3x3 shift and y as zero.
    fn mj0() -> Module {
        let j = Matrix::jordan_nilpotent(gf3(), 3);
        let z = Matrix::zeros(gf3(), 3, 3);
        Module::new(g32(), gf3(), vec![j, z]).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(Module::trivial(g32(), gf3()).unwrap().validate().is_ok());

        // J and E_12 do not commute
        let j = Matrix::jordan_nilpotent(gf3(), 3);
        let mut e12 = Matrix::zeros(gf3(), 3, 3);
        e12.set(0, 1, 1);
        let m = Module::new(g32(), gf3(), vec![j, e12]).unwrap();
        assert_eq!(m.validate(), Err(Violation::NotCommuting { i: 0, j: 1 }));

        let id = Matrix::identity(gf3(), 3);
        let z = Matrix::zeros(gf3(), 3, 3);
        let m = Module::new(g32(), gf3(), vec![id, z]).unwrap();
        assert_eq!(m.validate(), Err(Violation::NotNilpotent { gen: 0 }));
    }

    #[test]
    fn standard_modules() {
        assert_eq!(Module::trivial(g32(), gf3()).unwrap().dim(), 1);
        let reg = Module::regular(g32(), gf3()).unwrap();
        assert_eq!(reg.dim(), 9);
        assert!(reg.validate().is_ok());
        let reg22 = Module::regular(GroupSpec::new(2, 2).unwrap(), Field::prime(2).unwrap()).unwrap();
        assert_eq!(reg22.dim(), 4);
        assert!(reg22.validate().is_ok());
        // each unit of the regular module is a permutation matrix
        for i in 0..2 {
            let u = reg22.unit(i);
            for j in 0..4 {
                assert_eq!(u.column(j).iter().filter(|&&x| x != 0).count(), 1);
            }
        }
    }

    #[test]
    fn sum_and_tensor_dims() {
        let k = Module::trivial(g32(), gf3()).unwrap();
        let kk = k.direct_sum(&k).unwrap();
        assert_eq!(kk.dim(), 2);
        assert!(kk.gens()[0].is_zero());

        let m = mj0();
        let reg = Module::regular(g32(), gf3()).unwrap();
        assert_eq!(m.direct_sum(&reg).unwrap().dim(), 12);

        let t = m.tensor(&m).unwrap();
        assert_eq!(t.dim(), 9);
        assert!(t.validate().is_ok());
    }

    #[test]
    fn dual_basics() {
        let k = Module::trivial(g32(), gf3()).unwrap();
        assert_eq!(k.dual(), k);
        let m = mj0();
        let d = m.dual();
        assert_eq!(d.dim(), m.dim());
        assert!(d.validate().is_ok());
        // double dual is entrywise equal here since transposition is an involution
        assert_eq!(m.dual().dual(), m);
    }

    #[test]
    fn restrict_examples() {
        let m = mj0();
        // full standard basis: entrywise the same module
        let full = SubgroupSpec::new(g32(), vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(m.restrict(&full).unwrap().gens(), m.gens());

        // restrict to the second generator: y acts as zero, so trivial^3
        let h = SubgroupSpec::new(g32(), vec![vec![0, 1]]).unwrap();
        let r = m.restrict(&h).unwrap();
        assert_eq!(r.group().rank, 1);
        assert!(r.gens()[0].is_zero());

        // regular module restricted to a line is free over the cyclic subgroup
        let reg = Module::regular(g32(), gf3()).unwrap();
        let line = SubgroupSpec::new(g32(), vec![vec![1, 0]]).unwrap();
        let rr = reg.restrict(&line).unwrap();
        assert_eq!(rr.gens()[0].pow(2).rank(), 3); // rank (u-1)^2 = 9/3: free of rank 3

        // dependent basis rejected
        assert!(SubgroupSpec::new(g32(), vec![vec![1, 1], vec![2, 2]]).is_err());
    }

    #[test]
    fn socle_element_detects_free_rank() {
        let reg = Module::regular(g32(), gf3()).unwrap();
        assert_eq!(reg.socle_element().rank(), 1);
        let k = Module::trivial(g32(), gf3()).unwrap();
        assert_eq!(k.socle_element().rank(), 0);
    }

    #[test]
    fn group_elements_are_consistent() {
        let reg = Module::regular(g32(), gf3()).unwrap();
        let els = reg.group_element_matrices();
        assert_eq!(els.len(), 9);
        // element with exponents (1,1) = u0 * u1
        assert_eq!(els[4], reg.unit(0).mul(&reg.unit(1)));
        // orbit columns agree with matrix action on a basis vector
        let mut v = vec![0u64; 9];
        v[3] = 1;
        let orbit = reg.group_orbit_columns(&v);
        for (idx, g) in els.iter().enumerate() {
            assert_eq!(orbit[idx], g.column(3));
        }
    }
}
