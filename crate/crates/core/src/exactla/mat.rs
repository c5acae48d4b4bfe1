//! Dense exact matrices and row reduction.

use std::fmt;

use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// A dense row-major matrix over a single exact field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Output of [`rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: Mat,
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
}

/// Output of [`solve_affine`]: `particular` is a column, `homogeneous` holds
/// kernel basis vectors as columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Mat,
    pub homogeneous: Mat,
}

impl Mat {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Mat {
        Mat { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from rows, rejecting ragged input and mixed fields.
    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Mat> {
        let cols = rows.first().map_or(0, Vec::len);
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            for s in row {
                if s.field() != field {
                    return Err(Error::MixedField(field, s.field()));
                }
                data.push(s);
            }
        }
        Ok(Mat { field, rows: nrows, cols, data })
    }

    /// Builds a `rows x cols` matrix from a flat row-major vector.
    pub fn from_flat(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Mat> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(s) = data.iter().find(|s| s.field() != field) {
            return Err(Error::MixedField(field, s.field()));
        }
        Ok(Mat { field, rows, cols, data })
    }

    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Mat {
        let r = rows
            .iter()
            .map(|row| row.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Mat::from_rows(field, r).expect("consistent integer rows")
    }

    /// A single column.
    pub fn column(field: Field, entries: Vec<Scalar>) -> Mat {
        let n = entries.len();
        Mat::from_flat(field, n, 1, entries).expect("column entries share the field")
    }

    /// Matrix whose columns are the given vectors (all of length `len`).
    pub fn from_columns(field: Field, len: usize, columns: &[Vec<Scalar>]) -> Mat {
        let mut m = Mat::zeros(field, len, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), len, "column length");
            for (i, s) in c.iter().enumerate() {
                m.set(i, j, s.clone());
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
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
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn into_entries(self) -> Vec<Scalar> {
        self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        assert_eq!(self.field, other.field, "matrix product field");
        let mut out = Mat::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] += &(a * b);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!(self.shape(), other.shape(), "matrix sum shape");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Mat { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!(self.shape(), other.shape(), "matrix difference shape");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Mat { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        let data = self.data.iter().map(|a| a * s).collect();
        Mat { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn add_assign_scaled(&mut self, other: &Mat, s: &Scalar) {
        assert_eq!(self.shape(), other.shape(), "matrix axpy shape");
        if s.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a += &(b * s);
            }
        }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows, "hstack rows");
        let mut out = Mat::zeros(self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// `self` on top of `other`.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols, "vstack cols");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Mat { field: self.field, rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Block-diagonal sum.
    pub fn block_diag(&self, other: &Mat) -> Mat {
        let mut out = Mat::zeros(self.field, self.rows + other.rows, self.cols + other.cols);
        out.paste(0, 0, self);
        out.paste(self.rows, self.cols, other);
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(r, c)`.
    pub fn paste(&mut self, r: usize, c: usize, block: &Mat) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r + i, c + j, block.get(i, j).clone());
            }
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Mat {
        let mut out = Mat::zeros(self.field, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rref(&self) -> Rref {
        rref(self)
    }

    pub fn rank(&self) -> usize {
        rref(self).rank
    }

    pub fn kernel_basis(&self) -> Mat {
        kernel_basis(self)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Mat::identity(self.field, n));
        let r = rref(&aug);
        if r.pivot_cols.iter().copied().take(n).ne(0..n) || r.rank < n {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Some(r.reduced.submatrix(&rows, &cols))
    }

    pub fn determinant(&self) -> Scalar {
        assert!(self.is_square(), "determinant of non-square matrix");
        let mut a = self.clone();
        let n = self.rows;
        let mut det = self.field.one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| !a.get(i, col).is_zero()) else {
                return self.field.zero();
            };
            if p != col {
                a.swap_rows(p, col);
                det = -det;
            }
            let pivot = a.get(col, col).clone();
            det = &det * &pivot;
            let inv = pivot.inv();
            for i in col + 1..n {
                let f = a.get(i, col) * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = a.get(i, j) - &(&f * a.get(col, j));
                    a.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn is_nilpotent(&self) -> bool {
        assert!(self.is_square());
        let mut p = self.clone();
        for _ in 0..self.rows {
            p = p.mul(self);
        }
        p.is_zero()
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Fully reduced row-echelon form with leading ones.
pub fn rref(m: &Mat) -> Rref {
    let mut a = m.clone();
    let (r, c) = m.shape();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..c {
        if row == r {
            break;
        }
        let Some(p) = (row..r).find(|&i| !a.get(i, col).is_zero()) else {
            continue;
        };
        a.swap_rows(p, row);
        let inv = a.get(row, col).inv();
        for j in col..c {
            if !a.get(row, j).is_zero() {
                let v = a.get(row, j) * &inv;
                a.set(row, j, v);
            }
        }
        let pivot_row: Vec<(usize, Scalar)> = (col..c)
            .filter(|&j| !a.get(row, j).is_zero())
            .map(|j| (j, a.get(row, j).clone()))
            .collect();
        for i in 0..r {
            if i == row || a.get(i, col).is_zero() {
                continue;
            }
            let f = a.get(i, col).clone();
            for (j, pv) in &pivot_row {
                let v = a.get(i, *j) - &(&f * pv);
                a.set(i, *j, v);
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    Rref { reduced: a, rank: pivot_cols.len(), pivot_cols }
}

/// Columns form a basis of the null space of `m`.
pub fn kernel_basis(m: &Mat) -> Mat {
    let r = rref(m);
    kernel_from_rref(&r, m.cols(), m.field())
}

fn kernel_from_rref(r: &Rref, ncols: usize, field: Field) -> Mat {
    let mut is_pivot = vec![false; ncols];
    for &p in &r.pivot_cols {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..ncols).filter(|&j| !is_pivot[j]).collect();
    let mut k = Mat::zeros(field, ncols, free.len());
    for (b, &f) in free.iter().enumerate() {
        k.set(f, b, field.one());
        for (i, &p) in r.pivot_cols.iter().enumerate() {
            let v = r.reduced.get(i, f);
            if !v.is_zero() {
                k.set(p, b, -v);
            }
        }
    }
    k
}

/// Solves `a x = b` for a column `b`. Returns `None` when inconsistent.
pub fn solve_affine(a: &Mat, b: &Mat) -> Result<Option<AffineSolution>> {
    if a.rows() != b.rows() || b.cols() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "system {}x{} with right-hand side {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    if a.field() != b.field() {
        return Err(Error::MixedField(a.field(), b.field()));
    }
    let n = a.cols();
    let r = rref(&a.hstack(b));
    if r.pivot_cols.last() == Some(&n) {
        return Ok(None);
    }
    let field = a.field();
    let mut x = vec![field.zero(); n];
    for (i, &p) in r.pivot_cols.iter().enumerate() {
        x[p] = r.reduced.get(i, n).clone();
    }
    // The pivots of [a|b] restricted to a's columns are those of a.
    let core = Rref {
        reduced: r.reduced.submatrix(&(0..r.rank).collect::<Vec<_>>(), &(0..n).collect::<Vec<_>>()),
        rank: r.rank,
        pivot_cols: r.pivot_cols.clone(),
    };
    Ok(Some(AffineSolution {
        particular: Mat::column(field, x),
        homogeneous: kernel_from_rref(&core, n, field),
    }))
}

/// `a x = b` prepared for many right-hand sides: row-reduces `[a | I]` once.
#[derive(Clone, Debug)]
pub struct PreparedSystem {
    reduced: Mat,
    transform: Mat,
    pivot_cols: Vec<usize>,
    cols: usize,
}

impl PreparedSystem {
    pub fn new(a: &Mat) -> PreparedSystem {
        let (m, n) = a.shape();
        let r = rref(&a.hstack(&Mat::identity(a.field(), m)));
        let pivot_cols: Vec<usize> = r.pivot_cols.iter().copied().filter(|&c| c < n).collect();
        let all_rows: Vec<usize> = (0..m).collect();
        let reduced = r.reduced.submatrix(&all_rows, &(0..n).collect::<Vec<_>>());
        let transform = r.reduced.submatrix(&all_rows, &(n..n + m).collect::<Vec<_>>());
        PreparedSystem { reduced, transform, pivot_cols, cols: n }
    }

    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }

    /// A particular solution with free variables set to zero, or `None` when
    /// the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        let eb = self.transform.mul_vec(b);
        if eb[self.rank()..].iter().any(|s| !s.is_zero()) {
            return None;
        }
        let mut x = vec![self.reduced.field().zero(); self.cols];
        for (i, &p) in self.pivot_cols.iter().enumerate() {
            x[p] = eb[i].clone();
        }
        Some(x)
    }
}

/// A linear subspace of `field^n`, stored as the RREF of a spanning set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace { field, ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn span(field: Field, ambient: usize, vectors: &[Vec<Scalar>]) -> Subspace {
        if vectors.is_empty() || ambient == 0 {
            return Subspace::zero(field, ambient);
        }
        let m = Mat::from_rows(field, vectors.to_vec()).expect("spanning vectors share the field");
        assert_eq!(m.cols(), ambient, "spanning vector length");
        let r = rref(&m);
        let basis = (0..r.rank).map(|i| r.reduced.row(i).to_vec()).collect();
        Subspace { field, ambient, basis, pivots: r.pivot_cols }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// The canonical (RREF) basis.
    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Indices of standard basis vectors completing this subspace to the ambient space.
    pub fn complement_indices(&self) -> Vec<usize> {
        (0..self.ambient).filter(|j| !self.pivots.contains(j)).collect()
    }

    /// Residue of `v` modulo the subspace, supported on non-pivot columns.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut v = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (j, r) in row.iter().enumerate() {
                if !r.is_zero() {
                    v[j] -= &(&f * r);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Coordinates in the canonical basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    pub fn field(&self) -> Field {
        self.field
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[&[i64]]) -> Mat {
        Mat::from_i64(Field::Q, rows)
    }

    #[test]
    fn rref_identity_and_zero() {
        let r = rref(&Mat::identity(Field::Q, 2));
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivot_cols, vec![0, 1]);
        let r = rref(&Mat::zeros(Field::Q, 2, 3));
        assert_eq!(r.rank, 0);
        assert!(r.pivot_cols.is_empty());
    }

    #[test]
    fn rref_rank_one() {
        let r = rref(&q(&[&[1, 2], &[2, 4]]));
        assert_eq!(r.rank, 1);
        assert_eq!(r.reduced, q(&[&[1, 2], &[0, 0]]));
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&q(&[&[1, 1]]));
        assert_eq!(k, q(&[&[-1], &[1]]));
        assert_eq!(kernel_basis(&Mat::identity(Field::Q, 3)).cols(), 0);
        assert_eq!(kernel_basis(&Mat::zeros(Field::Q, 2, 3)).cols(), 3);
    }

    #[test]
    fn affine_examples() {
        let b = q(&[&[5], &[-2]]);
        let s = solve_affine(&Mat::identity(Field::Q, 2), &b).unwrap().unwrap();
        assert_eq!(s.particular, b);
        assert_eq!(s.homogeneous.cols(), 0);

        let s = solve_affine(&q(&[&[1, 1]]), &q(&[&[2]])).unwrap().unwrap();
        assert_eq!(s.particular, q(&[&[2], &[0]]));
        assert_eq!(s.homogeneous, q(&[&[-1], &[1]]));

        assert!(solve_affine(&q(&[&[0]]), &q(&[&[1]])).unwrap().is_none());
        assert!(solve_affine(&q(&[&[0]]), &q(&[&[1], &[1]])).is_err());
    }

    #[test]
    fn mixed_field_rejected() {
        let err = Mat::from_rows(Field::Q, vec![vec![Field::Fp(7).one()]]);
        assert!(matches!(err, Err(Error::MixedField(..))));
    }

    #[test]
    fn inverse_and_determinant() {
        let m = q(&[&[2, 1], &[1, 1]]);
        assert_eq!(m.inverse().unwrap(), q(&[&[1, -1], &[-1, 2]]));
        assert_eq!(m.determinant(), Field::Q.one());
        assert!(q(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn subspace_reduce_and_coordinates() {
        let f = Field::Q;
        assert_eq!(Subspace::span(f, 3, &[]).dim(), 0);
        let rows = vec![vec![f.one(), f.one(), f.zero()]];
        let s = Subspace::span(f, 3, &rows);
        assert!(s.contains(&[f.from_i64(3), f.from_i64(3), f.zero()]));
        assert!(!s.contains(&[f.one(), f.zero(), f.zero()]));
        assert_eq!(s.coordinates(&[f.from_i64(3), f.from_i64(3), f.zero()]), Some(vec![f.from_i64(3)]));
        assert_eq!(s.complement_indices(), vec![1, 2]);
    }

    #[test]
    fn prepared_system_matches_solve_affine() {
        let f = Field::Q;
        let a = q(&[&[1, 1, 0], &[0, 1, 1], &[1, 2, 1]]);
        let prep = PreparedSystem::new(&a);
        assert_eq!(prep.rank(), 2);
        let b = vec![f.from_i64(1), f.from_i64(2), f.from_i64(3)];
        let x = prep.solve(&b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        assert!(prep.solve(&[f.from_i64(1), f.from_i64(2), f.from_i64(4)]).is_none());
        assert!(solve_affine(&a, &Mat::column(f, vec![f.from_i64(1), f.from_i64(2), f.from_i64(4)])).unwrap().is_none());
    }
}
