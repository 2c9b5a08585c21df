//! Dense exact matrices and the handful of row-reduction routines the rest of
//! the crate is built on.

use std::fmt;

use crate::field::Field;

/// Row-major dense matrix over an exact field.
#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.field.format_elem(self.get(r, c)))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Self {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix data length");
        Self {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    /// Builds a matrix from column vectors of common length `rows`.
    pub fn from_columns(field: &F, rows: usize, columns: &[Vec<F::Elem>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, x) in col.iter().enumerate() {
                m.set(r, c, x.clone());
            }
        }
        m
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn data(&self) -> &[F::Elem] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let x = self.get(r, c);
                    if r == c {
                        self.field.is_one(x)
                    } else {
                        self.field.is_zero(x)
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols,
            other.rows,
            "shape mismatch in product {:?} x {:?}",
            self.shape(),
            other.shape()
        );
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if f.is_zero(a) {
                    continue;
                }
                let orow = other.row(k);
                let base = r * other.cols;
                for (c, b) in orow.iter().enumerate() {
                    if !f.is_zero(b) {
                        let cur = &out.data[base + c];
                        out.data[base + c] = f.add(cur, &f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(self.cols, v.len());
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                let mut acc = f.zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !f.is_zero(a) && !f.is_zero(b) {
                        acc = f.add(&acc, &f.mul(a, b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape());
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f.add(a, b))
            .collect();
        Self::from_rows(f, self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape());
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f.sub(a, b))
            .collect();
        Self::from_rows(f, self.rows, self.cols, data)
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        let f = &self.field;
        let data = self.data.iter().map(|a| f.mul(a, s)).collect();
        Self::from_rows(f, self.rows, self.cols, data)
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        let data = self.data.iter().map(|a| f.neg(a)).collect();
        Self::from_rows(f, self.rows, self.cols, data)
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut out = Self::zeros(&self.field, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        out
    }

    /// `[self ; other]`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Self::from_rows(&self.field, self.rows + other.rows, self.cols, data)
    }

    pub fn hstack_all(field: &F, rows: usize, parts: &[Self]) -> Self {
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Self::zeros(field, rows, cols);
        let mut off = 0;
        for p in parts {
            assert_eq!(p.rows, rows);
            out.paste(0, off, p);
            off += p.cols;
        }
        out
    }

    pub fn vstack_all(field: &F, cols: usize, parts: &[Self]) -> Self {
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut out = Self::zeros(field, rows, cols);
        let mut off = 0;
        for p in parts {
            assert_eq!(p.cols, cols);
            out.paste(off, 0, p);
            off += p.rows;
        }
        out
    }

    pub fn block_diag(field: &F, parts: &[Self]) -> Self {
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Self::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for p in parts {
            out.paste(r0, c0, p);
            r0 += p.rows;
            c0 += p.cols;
        }
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &Self) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c).clone());
            }
        }
    }

    /// Adds `block` onto the entries starting at `(r0, c0)`.
    pub fn add_block(&mut self, r0: usize, c0: usize, block: &Self) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                let v = self.field.add(self.get(r0 + r, c0 + c), block.get(r, c));
                self.set(r0 + r, c0 + c, v);
            }
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(&self.field, self.rows, cols.len());
        for (j, &c) in cols.iter().enumerate() {
            for r in 0..self.rows {
                out.set(r, j, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend(self.row(r).iter().cloned());
        }
        Self::from_rows(&self.field, rows.len(), self.cols, data)
    }

    pub fn column_range(&self, start: usize, end: usize) -> Self {
        let idx: Vec<usize> = (start..end).collect();
        self.select_columns(&idx)
    }

    pub fn row_range(&self, start: usize, end: usize) -> Self {
        let idx: Vec<usize> = (start..end).collect();
        self.select_rows(&idx)
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut pr = 0;
        for c in 0..cols {
            if pr == rows {
                break;
            }
            let Some(sel) = (pr..rows).find(|&r| !f.is_zero(self.get(r, c))) else {
                continue;
            };
            if sel != pr {
                for k in 0..cols {
                    self.data.swap(sel * cols + k, pr * cols + k);
                }
            }
            let inv = f.inv(self.get(pr, c));
            if !f.is_one(&inv) {
                for k in c..cols {
                    let v = f.mul(self.get(pr, k), &inv);
                    self.set(pr, k, v);
                }
            }
            let pivot_row: Vec<F::Elem> = self.row(pr)[c..].to_vec();
            for r in 0..rows {
                if r == pr {
                    continue;
                }
                let factor = self.get(r, c).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                let base = r * cols;
                for (off, pv) in pivot_row.iter().enumerate() {
                    if f.is_zero(pv) {
                        continue;
                    }
                    let k = base + c + off;
                    self.data[k] = f.sub(&self.data[k], &f.mul(&factor, pv));
                }
            }
            pivots.push(c);
            pr += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Columns form a basis of the null space `{x : self * x = 0}`.
    pub fn kernel(&self) -> Self {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Self::zeros(f, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            out.set(fc, j, f.one());
            for (i, &pc) in pivots.iter().enumerate() {
                out.set(pc, j, f.neg(r.get(i, fc)));
            }
        }
        out
    }

    /// A basis of the column space, taken from the original columns.
    pub fn column_basis(&self) -> Self {
        let (_, pivots) = self.rref();
        self.select_columns(&pivots)
    }

    /// Solves `self * X = rhs`, returning one solution if the system is consistent.
    pub fn solve(&self, rhs: &Self) -> Option<Self> {
        assert_eq!(self.rows, rhs.rows);
        let f = &self.field;
        let aug = self.hstack(rhs);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Self::zeros(f, self.cols, rhs.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, r.get(i, self.cols + j).clone());
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let id = Self::identity(&self.field, self.rows);
        let aug = self.hstack(&id);
        let (r, pivots) = aug.rref();
        if pivots.len() < self.rows || pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        Some(r.column_range(self.cols, 2 * self.cols))
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Flattens row-major into a single vector.
    pub fn to_vec(&self) -> Vec<F::Elem> {
        self.data.clone()
    }
}

/// A subspace of `F^n` presented by a full-column-rank basis, with the data
/// needed to take coordinates and to project onto a fixed complement.
#[derive(Clone, Debug)]
pub struct Subspace<F: Field> {
    basis: Matrix<F>,
    /// `[basis | complement]^{-1}`; its first rows give coordinates in the
    /// basis, its last rows project onto the complement.
    inverse: Matrix<F>,
    complement: Matrix<F>,
}

impl<F: Field> Subspace<F> {
    /// Builds a subspace from spanning columns (need not be independent).
    pub fn span(spanning: &Matrix<F>) -> Self {
        let basis = spanning.column_basis();
        Self::from_basis(basis)
    }

    /// `basis` must have independent columns.
    pub fn from_basis(basis: Matrix<F>) -> Self {
        let f = basis.field().clone();
        let n = basis.rows();
        let (_, piv) = basis.transpose().rref();
        let free: Vec<usize> = (0..n).filter(|c| !piv.contains(c)).collect();
        let mut complement = Matrix::zeros(&f, n, free.len());
        for (j, &r) in free.iter().enumerate() {
            complement.set(r, j, f.one());
        }
        let full = basis.hstack(&complement);
        let inverse = full
            .inverse()
            .expect("basis plus standard complement is invertible");
        Self {
            basis,
            inverse,
            complement,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }

    pub fn complement(&self) -> &Matrix<F> {
        &self.complement
    }

    /// Coordinates of columns of `v` in the basis; `None` if some column is
    /// outside the subspace.
    pub fn coordinates(&self, v: &Matrix<F>) -> Option<Matrix<F>> {
        let all = self.inverse.mul(v);
        let k = self.dim();
        let rest = all.row_range(k, all.rows());
        if !rest.is_zero() {
            return None;
        }
        Some(all.row_range(0, k))
    }

    /// Matrix of the projection `F^n -> F^n / U` in complement coordinates.
    pub fn quotient_projection(&self) -> Matrix<F> {
        self.inverse.row_range(self.dim(), self.ambient_dim())
    }

    pub fn contains(&self, v: &Matrix<F>) -> bool {
        self.coordinates(v).is_some()
    }
}

/// Incrementally maintained row-echelon basis for span-membership queries.
#[derive(Clone, Debug)]
pub struct EchelonSpan<F: Field> {
    field: F,
    len: usize,
    rows: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
}

impl<F: Field> EchelonSpan<F> {
    pub fn new(field: &F, len: usize) -> Self {
        Self {
            field: field.clone(),
            len,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.len
    }

    fn reduce(&self, v: &mut [F::Elem]) {
        let f = &self.field;
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p].clone();
            if f.is_zero(&c) {
                continue;
            }
            for k in p..self.len {
                if !f.is_zero(&row[k]) {
                    v[k] = f.sub(&v[k], &f.mul(&c, &row[k]));
                }
            }
        }
    }

    /// Adds `v` to the span; returns `true` if the dimension grew.
    pub fn insert(&mut self, mut v: Vec<F::Elem>) -> bool {
        assert_eq!(v.len(), self.len);
        self.reduce(&mut v);
        let f = self.field.clone();
        let Some(p) = v.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&v[p]);
        for x in v.iter_mut().skip(p) {
            *x = f.mul(x, &inv);
        }
        // Keep the basis fully reduced on existing pivots.
        for row in self.rows.iter_mut() {
            let c = row[p].clone();
            if f.is_zero(&c) {
                continue;
            }
            for k in p..self.len {
                if !f.is_zero(&v[k]) {
                    row[k] = f.sub(&row[k], &f.mul(&c, &v[k]));
                }
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(pos, p);
        self.rows.insert(pos, v);
        true
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| self.field.is_zero(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn f7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    fn m(rows: usize, cols: usize, v: &[i64]) -> Matrix<PrimeField> {
        let f = f7();
        Matrix::from_rows(&f, rows, cols, v.iter().map(|&x| f.from_i64(x)).collect())
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(2, 3, &[1, 2, 3, 2, 4, 6]);
        assert_eq!(a.rank(), 1);
        let k = a.kernel();
        assert_eq!(k.cols(), 2);
        assert!(a.mul(&k).is_zero());
    }

    #[test]
    fn solve_and_inverse() {
        let a = m(2, 2, &[1, 1, 0, 1]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        let b = m(2, 1, &[3, 1]);
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul(&x), b);
        let singular = m(2, 2, &[1, 1, 1, 1]);
        assert!(singular.inverse().is_none());
        assert!(singular.solve(&m(2, 1, &[1, 0])).is_none());
    }

    #[test]
    fn subspace_projection() {
        let u = m(3, 1, &[1, 1, 0]);
        let s = Subspace::from_basis(u.clone());
        let pi = s.quotient_projection();
        assert_eq!(pi.rows(), 2);
        assert!(pi.mul(&u).is_zero());
        assert!(pi.mul(s.complement()).is_identity());
        assert_eq!(s.coordinates(&m(3, 1, &[2, 2, 0])).unwrap(), m(1, 1, &[2]));
        assert!(s.coordinates(&m(3, 1, &[1, 0, 0])).is_none());
    }

    #[test]
    fn echelon_span_membership() {
        let f = f7();
        let mut s = EchelonSpan::new(&f, 3);
        assert!(s.insert(vec![1, 2, 0]));
        assert!(s.insert(vec![0, 1, 1]));
        assert!(!s.insert(vec![1, 3, 1]));
        assert!(s.contains(&[2, 4, 0]));
        assert!(!s.contains(&[0, 0, 1]));
        assert_eq!(s.dim(), 2);
    }
}
