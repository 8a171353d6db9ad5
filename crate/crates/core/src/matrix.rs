//! Dense exact matrices over a finite field, with plain row-reduction
//! ("first nonzero" partial pivoting — over a field nothing more is needed).

use crate::error::{Error, Result};
use crate::field::Field;
use rand_core::RngCore;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u64>, // row-major, entries reduced
}

/// Result of a reduced-row-echelon computation.
#[derive(Debug, Clone)]
pub struct Rref {
    pub mat: Matrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl Matrix {
    pub fn new(field: Field, rows: usize, cols: usize, data: Vec<u64>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "matrix data length {} != {rows}x{cols}",
                data.len()
            )));
        }
        if data.iter().any(|&x| !field.is_element(x)) {
            return Err(Error::InvalidArgument("matrix entry outside the field".into()));
        }
        Ok(Matrix { field, rows, cols, data })
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<u64>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Matrix::new(field, r, c, rows.into_iter().flatten().collect())
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_cols(field: Field, rows: usize, cols: Vec<Vec<u64>>) -> Result<Matrix> {
        let c = cols.len();
        let mut m = Matrix::zeros(field, rows, c);
        for (j, col) in cols.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch("column of wrong height".into()));
            }
            for (i, &x) in col.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    pub fn random(field: Field, rows: usize, cols: usize, rng: &mut impl RngCore) -> Matrix {
        let data = (0..rows * cols).map(|_| field.random_element(rng)).collect();
        Matrix { field, rows, cols, data }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        debug_assert!(self.field.is_element(v));
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        assert_eq!(self.field, other.field);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.field.add(a, b))
            .collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        assert_eq!(self.field, other.field);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.field.sub(a, b))
            .collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Matrix {
        let data = self.data.iter().map(|&a| self.field.neg(a)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: u64) -> Matrix {
        let data = self.data.iter().map(|&a| self.field.mul(a, c)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        assert_eq!(self.field, other.field);
        let mut out = Matrix::zeros(self.field.clone(), self.rows, other.cols);
        if self.field.is_prime_field() {
            let p = self.field.p();
            // deferred reduction: sums of cols products of residues < p fit u64
            let safe = (p - 1) * (p - 1) * (self.cols.max(1) as u64) < (1u64 << 63);
            for i in 0..self.rows {
                for j in 0..other.cols {
                    let mut acc: u64 = 0;
                    for k in 0..self.cols {
                        let prod = self.data[i * self.cols + k] * other.data[k * other.cols + j];
                        acc = if safe { acc + prod } else { (acc + prod % p) % p };
                    }
                    out.data[i * other.cols + j] = acc % p;
                }
            }
        } else {
            for i in 0..self.rows {
                for j in 0..other.cols {
                    let mut acc = 0u64;
                    for k in 0..self.cols {
                        acc = self.field.add(
                            acc,
                            self.field.mul(self.get(i, k), other.get(k, j)),
                        );
                    }
                    out.set(i, j, acc);
                }
            }
        }
        out
    }

    pub fn pow(&self, mut n: usize) -> Matrix {
        assert!(self.is_square());
        let mut acc = Matrix::identity(self.field.clone(), self.rows);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.field.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Kronecker product in the standard row-major block layout:
    /// `(a (x) b)[(i*bR + k), (j*bC + l)] = a[i][j] * b[k][l]`.
    pub fn kron(&self, b: &Matrix) -> Matrix {
        assert_eq!(self.field, b.field);
        let rows = self.rows * b.rows;
        let cols = self.cols * b.cols;
        let mut out = Matrix::zeros(self.field.clone(), rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a_ij = self.get(i, j);
                if a_ij == 0 {
                    continue;
                }
                for k in 0..b.rows {
                    for l in 0..b.cols {
                        let v = self.field.mul(a_ij, b.get(k, l));
                        out.set(i * b.rows + k, j * b.cols + l, v);
                    }
                }
            }
        }
        out
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.field, other.field);
        let mut out = Matrix::zeros(self.field.clone(), self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        assert_eq!(self.field, other.field);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field.clone(), self.rows, idx.len());
        for (jj, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                out.set(i, jj, self.get(i, j));
            }
        }
        out
    }

    pub fn rref(&self) -> Rref {
        let f = self.field.clone();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // first nonzero entry in column c at or below row r
            let mut pr = None;
            for i in r..m.rows {
                if m.get(i, c) != 0 {
                    pr = Some(i);
                    break;
                }
            }
            let Some(pr) = pr else { continue };
            if pr != r {
                for j in 0..m.cols {
                    let a = m.get(r, j);
                    let b = m.get(pr, j);
                    m.set(r, j, b);
                    m.set(pr, j, a);
                }
            }
            let inv = f.inv(m.get(r, c)).expect("pivot nonzero");
            if inv != 1 {
                for j in c..m.cols {
                    let v = f.mul(m.get(r, j), inv);
                    m.set(r, j, v);
                }
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { mat: m, rank: r, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Columns form a basis of the right kernel. The convention is the usual
    /// one: each basis vector sets one free variable to 1 and the rest to 0.
    pub fn nullspace(&self) -> Matrix {
        let Rref { mat: r, pivots, rank } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(self.field.clone(), self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, 1);
            for (row, &pc) in pivots.iter().enumerate().take(rank) {
                out.set(pc, k, self.field.neg(r.get(row, fc)));
            }
        }
        out
    }

    /// One exact solution of `self * X = rhs` with free variables set to 0,
    /// or `None` if inconsistent. Errors only on a row-count mismatch.
    pub fn solve(&self, rhs: &Matrix) -> Result<Option<Matrix>> {
        if rhs.rows != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "system has {} rows, right-hand side has {}",
                self.rows, rhs.rows
            )));
        }
        if self.field != rhs.field {
            return Err(Error::FieldMismatch("system and rhs over different fields".into()));
        }
        let aug = self.hstack(rhs);
        let Rref { mat: r, pivots, rank } = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return Ok(None);
        }
        let mut x = Matrix::zeros(self.field.clone(), self.cols, rhs.cols);
        for (row, &pc) in pivots.iter().enumerate().take(rank) {
            for j in 0..rhs.cols {
                x.set(pc, j, r.get(row, self.cols + j));
            }
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let aug = self.hstack(&Matrix::identity(self.field.clone(), self.rows));
        let Rref { mat: r, rank, pivots } = aug.rref();
        if rank < self.rows || pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut out = Matrix::zeros(self.field.clone(), self.rows, self.rows);
        for i in 0..self.rows {
            for j in 0..self.rows {
                out.set(i, j, r.get(i, self.cols + j));
            }
        }
        Some(out)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// A basis of the column space: the pivot columns of `self`.
    pub fn column_space_basis(&self) -> Matrix {
        let piv = self.rref().pivots;
        self.select_columns(&piv)
    }

    /// Embed entrywise into an extension of the same characteristic.
    /// The base field must be the prime field; rank is preserved.
    pub fn extend_scalars(&self, target: &Field) -> Result<Matrix> {
        if !self.field.is_prime_field() {
            return Err(Error::Unsupported(
                "extend_scalars starts from a prime-field matrix".into(),
            ));
        }
        if target.p() != self.field.p() {
            return Err(Error::FieldMismatch(format!(
                "characteristic {} != {}",
                self.field.p(),
                target.p()
            )));
        }
        let data = self.data.iter().map(|&x| target.embed(x)).collect();
        Ok(Matrix { field: target.clone(), rows: self.rows, cols: self.cols, data })
    }

    /// Nilpotent single Jordan block of size n: ones on the superdiagonal,
    /// so J e_{i+1} = e_i.
    pub fn jordan_nilpotent(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n.saturating_sub(1) {
            m.set(i, i + 1, 1);
        }
        m
    }
}

impl Matrix {
    pub fn det(&self) -> u64 {
        assert!(self.is_square());
        let f = self.field.clone();
        let n = self.rows;
        let mut m = self.clone();
        let mut det = 1u64;
        for c in 0..n {
            let mut pr = None;
            for i in c..n {
                if m.get(i, c) != 0 {
                    pr = Some(i);
                    break;
                }
            }
            let Some(pr) = pr else { return 0 };
            if pr != c {
                for j in 0..n {
                    let a = m.get(c, j);
                    let b = m.get(pr, j);
                    m.set(c, j, b);
                    m.set(pr, j, a);
                }
                det = f.neg(det);
            }
            let pivot = m.get(c, c);
            det = f.mul(det, pivot);
            let inv = f.inv(pivot).unwrap();
            for i in (c + 1)..n {
                let factor = f.mul(m.get(i, c), inv);
                if factor == 0 {
                    continue;
                }
                for j in c..n {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// Monic characteristic polynomial det(tI - M), coefficients c_0..c_n
    /// little-endian, computed via a Hessenberg reduction.
    pub fn char_poly(&self) -> Vec<u64> {
        assert!(self.is_square());
        let f = self.field.clone();
        let n = self.rows;
        if n == 0 {
            return vec![1];
        }
        let mut h = self.clone();
        // similarity reduction to upper Hessenberg form
        for j in 0..n.saturating_sub(2) {
            let mut pr = None;
            for i in (j + 1)..n {
                if h.get(i, j) != 0 {
                    pr = Some(i);
                    break;
                }
            }
            let Some(pr) = pr else { continue };
            if pr != j + 1 {
                for c in 0..n {
                    let a = h.get(j + 1, c);
                    let b = h.get(pr, c);
                    h.set(j + 1, c, b);
                    h.set(pr, c, a);
                }
                for r in 0..n {
                    let a = h.get(r, j + 1);
                    let b = h.get(r, pr);
                    h.set(r, j + 1, b);
                    h.set(r, pr, a);
                }
            }
            let inv = f.inv(h.get(j + 1, j)).unwrap();
            for i in (j + 2)..n {
                let factor = f.mul(h.get(i, j), inv);
                if factor == 0 {
                    continue;
                }
                for c in 0..n {
                    let v = f.sub(h.get(i, c), f.mul(factor, h.get(j + 1, c)));
                    h.set(i, c, v);
                }
                for r in 0..n {
                    let v = f.add(h.get(r, j + 1), f.mul(factor, h.get(r, i)));
                    h.set(r, j + 1, v);
                }
            }
        }
        // leading-principal-minor recurrence for Hessenberg matrices
        let mut polys: Vec<Vec<u64>> = vec![vec![1]];
        for k in 1..=n {
            // (t - h[k-1][k-1]) * p_{k-1}
            let prev = &polys[k - 1];
            let mut cur = vec![0u64; prev.len() + 1];
            for (i, &c) in prev.iter().enumerate() {
                cur[i + 1] = f.add(cur[i + 1], c);
                cur[i] = f.sub(cur[i], f.mul(h.get(k - 1, k - 1), c));
            }
            let mut subprod = 1u64;
            for m in 1..k {
                subprod = f.mul(subprod, h.get(k - m, k - m - 1));
                if subprod == 0 {
                    break;
                }
                let coef = f.mul(h.get(k - 1 - m, k - 1), subprod);
                if coef == 0 {
                    continue;
                }
                for (i, &c) in polys[k - 1 - m].iter().enumerate() {
                    cur[i] = f.sub(cur[i], f.mul(coef, c));
                }
            }
            polys.push(cur);
        }
        polys.pop().unwrap()
    }
}

/// Incremental row-span with coordinate recovery: tracks a reduced basis of
/// the span of the inserted vectors and can express members in terms of the
/// original (independent) insertions.
#[derive(Debug, Clone)]
pub struct SpanSolver {
    field: Field,
    n: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    /// rows[i] = sum_j mix[i][j] * original_j (indices over independent
    /// insertions only).
    mix: Vec<Vec<u64>>,
    inserted: usize,
}

impl SpanSolver {
    pub fn new(field: Field, n: usize) -> SpanSolver {
        SpanSolver { field, n, rows: vec![], pivots: vec![], mix: vec![], inserted: 0 }
    }

    pub fn from_vectors(field: Field, vectors: &[Vec<u64>]) -> SpanSolver {
        let n = vectors.first().map(|v| v.len()).unwrap_or(0);
        let mut s = SpanSolver::new(field, n);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Adds a vector; returns true if it enlarged the span.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.n);
        let f = self.field.clone();
        let mut res = v.to_vec();
        let mut alpha = vec![0u64; self.rows.len()];
        for (i, row) in self.rows.iter().enumerate() {
            let c = res[self.pivots[i]];
            if c != 0 {
                for (r, x) in res.iter_mut().zip(row) {
                    *r = f.sub(*r, f.mul(c, *x));
                }
                alpha[i] = c;
            }
        }
        let Some(pivot) = res.iter().position(|&x| x != 0) else {
            return false;
        };
        self.inserted += 1;
        let inv = f.inv(res[pivot]).unwrap();
        for r in res.iter_mut() {
            *r = f.mul(*r, inv);
        }
        // combination of the new rref row in terms of originals
        let mut mixrow = vec![0u64; self.inserted];
        mixrow[self.inserted - 1] = inv;
        for (i, &a) in alpha.iter().enumerate() {
            if a != 0 {
                let c = f.mul(a, inv);
                for (j, &mj) in self.mix[i].iter().enumerate() {
                    mixrow[j] = f.sub(mixrow[j], f.mul(c, mj));
                }
            }
        }
        // back-eliminate the new pivot from existing rows
        for i in 0..self.rows.len() {
            let c = self.rows[i][pivot];
            if c != 0 {
                for k in 0..self.n {
                    let v2 = f.sub(self.rows[i][k], f.mul(c, res[k]));
                    self.rows[i][k] = v2;
                }
                self.mix[i].resize(self.inserted, 0);
                for j in 0..self.inserted {
                    let v2 = f.sub(self.mix[i][j], f.mul(c, mixrow[j]));
                    self.mix[i][j] = v2;
                }
            }
        }
        self.rows.push(res);
        self.pivots.push(pivot);
        self.mix.push(mixrow);
        true
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.n);
        let f = &self.field;
        let mut res = v.to_vec();
        for (i, row) in self.rows.iter().enumerate() {
            let c = res[self.pivots[i]];
            if c != 0 {
                for (r, x) in res.iter_mut().zip(row) {
                    *r = f.sub(*r, f.mul(c, *x));
                }
            }
        }
        res.iter().all(|&x| x == 0)
    }

    /// Coordinates of `v` with respect to the original independent
    /// insertions, or `None` when `v` is outside the span.
    pub fn express(&self, v: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(v.len(), self.n);
        let f = &self.field;
        let mut res = v.to_vec();
        let mut alpha = vec![0u64; self.rows.len()];
        for (i, row) in self.rows.iter().enumerate() {
            let c = res[self.pivots[i]];
            if c != 0 {
                for (r, x) in res.iter_mut().zip(row) {
                    *r = f.sub(*r, f.mul(c, *x));
                }
                alpha[i] = c;
            }
        }
        if res.iter().any(|&x| x != 0) {
            return None;
        }
        let mut coords = vec![0u64; self.inserted];
        for (i, &a) in alpha.iter().enumerate() {
            if a != 0 {
                for (j, &mj) in self.mix[i].iter().enumerate() {
                    coords[j] = f.add(coords[j], f.mul(a, mj));
                }
            }
        }
        Some(coords)
    }
}

impl std::fmt::Display for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::zeros(gf(3), 3, 3).rank(), 0);
        assert_eq!(Matrix::identity(gf(5), 4).rank(), 4);
        assert_eq!(Matrix::jordan_nilpotent(gf(3), 3).rank(), 2);
    }

    #[test]
    fn nullspace_examples() {
        assert_eq!(Matrix::identity(gf(3), 2).nullspace().cols(), 0);
        let z = Matrix::zeros(gf(3), 2, 2).nullspace();
        assert_eq!(z.cols(), 2);
        assert_eq!(z.rank(), 2);
        // kernel of the 3x3 shift is spanned by e1 = image of J^2
        let j = Matrix::jordan_nilpotent(gf(3), 3);
        let ns = j.nullspace();
        assert_eq!(ns.cols(), 1);
        assert!(j.mul(&ns).is_zero());
        let j2 = j.pow(2);
        // the single kernel column is proportional to J^2 e_3 = e_1
        assert_eq!(ns.column(0), j2.column(2));
    }

    #[test]
    fn kron_examples() {
        let i2 = Matrix::identity(gf(3), 2);
        let i3 = Matrix::identity(gf(3), 3);
        assert_eq!(i2.kron(&i3), Matrix::identity(gf(3), 6));

        let j2 = Matrix::jordan_nilpotent(gf(2), 2);
        let k = j2.kron(&j2);
        // single nonzero entry at row 0, column 3
        let mut expected = Matrix::zeros(gf(2), 4, 4);
        expected.set(0, 3, 1);
        assert_eq!(k, expected);
    }

    #[test]
    fn solve_examples() {
        let f = gf(3);
        let id = Matrix::identity(f.clone(), 3);
        let rhs = Matrix::from_cols(f.clone(), 3, vec![vec![1, 2, 0]]).unwrap();
        assert_eq!(id.solve(&rhs).unwrap().unwrap(), rhs);

        let zero = Matrix::zeros(f.clone(), 2, 2);
        let one = Matrix::from_cols(f.clone(), 2, vec![vec![1, 0]]).unwrap();
        assert!(zero.solve(&one).unwrap().is_none());

        // J x = e1 has particular solution x = e2 under the free-vars-zero rule
        let j = Matrix::jordan_nilpotent(f.clone(), 3);
        let e1 = Matrix::from_cols(f.clone(), 3, vec![vec![1, 0, 0]]).unwrap();
        let x = j.solve(&e1).unwrap().unwrap();
        assert_eq!(x.column(0), vec![0, 1, 0]);

        let bad = Matrix::zeros(f, 3, 3).solve(&Matrix::zeros(gf(3), 2, 1));
        assert!(bad.is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let f = gf(5);
        let m = Matrix::from_rows(f.clone(), vec![vec![1, 2, 0], vec![0, 1, 3], vec![4, 0, 2]])
            .unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(f.clone(), 3));
        // singular: the third row is the sum of the first two
        let s = Matrix::from_rows(f, vec![vec![1, 2, 0], vec![0, 1, 3], vec![1, 3, 3]]).unwrap();
        assert!(s.inverse().is_none());
    }

    #[test]
    fn extend_scalars_preserves_rank_and_identity() {
        let f3 = gf(3);
        let f27 = Field::extension(3, 3).unwrap();
        let id = Matrix::identity(f3.clone(), 4);
        let lifted = id.extend_scalars(&f27).unwrap();
        assert_eq!(lifted, Matrix::identity(f27.clone(), 4));
        let j = Matrix::jordan_nilpotent(f3, 3);
        let jl = j.extend_scalars(&f27).unwrap();
        assert_eq!(jl.nullspace().cols(), 1);
        let f9 = Field::extension(3, 2).unwrap();
        assert!(j.extend_scalars(&f9).is_ok());
        assert!(j.extend_scalars(&Field::prime(5).unwrap()).is_err());
    }

    #[test]
    fn char_poly_matches_pointwise_determinants() {
        use rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(11);
        let f = gf(5);
        for n in 1..=4 {
            for _ in 0..10 {
                let m = Matrix::random(f.clone(), n, n, &mut rng);
                let cp = m.char_poly();
                assert_eq!(cp.len(), n + 1);
                assert_eq!(*cp.last().unwrap(), 1);
                for c in 0..5u64 {
                    // evaluate char poly at c and compare with det(cI - M)
                    let mut val = 0u64;
                    for &coef in cp.iter().rev() {
                        val = f.add(f.mul(val, c), coef);
                    }
                    let ci = Matrix::identity(f.clone(), n).scale(c).sub(&m);
                    assert_eq!(val, ci.det());
                }
            }
        }
    }

    #[test]
    fn char_poly_of_nilpotent_block() {
        let j = Matrix::jordan_nilpotent(gf(3), 4);
        assert_eq!(j.char_poly(), vec![0, 0, 0, 0, 1]);
    }

    #[test]
    fn span_solver_expresses_members() {
        let f = gf(3);
        let mut s = SpanSolver::new(f.clone(), 3);
        assert!(s.insert(&[1, 2, 0]));
        assert!(s.insert(&[0, 1, 1]));
        assert!(!s.insert(&[1, 0, 1])); // = v1 - 2 v2
        assert_eq!(s.dim(), 2);
        let coords = s.express(&[1, 0, 1]).unwrap();
        // check: coords[0]*v1 + coords[1]*v2 = target
        let v = [
            f.add(f.mul(coords[0], 1), f.mul(coords[1], 0)),
            f.add(f.mul(coords[0], 2), f.mul(coords[1], 1)),
            f.add(f.mul(coords[0], 0), f.mul(coords[1], 1)),
        ];
        assert_eq!(v, [1, 0, 1]);
        assert!(!s.contains(&[0, 0, 1]));
        assert!(s.express(&[0, 0, 1]).is_none());
    }

    #[test]
    fn rank_nullity_balances() {
        use rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        for p in [2u64, 3, 5] {
            let f = gf(p);
            for _ in 0..20 {
                let m = Matrix::random(f.clone(), 4, 6, &mut rng);
                assert_eq!(m.rank() + m.nullspace().cols(), m.cols());
                assert!(m.mul(&m.nullspace()).is_zero());
            }
        }
    }
}
