//! Dense row-major matrices over a table field.

use serde::{Deserialize, Serialize};

use crate::field::{FieldSpec, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        Self::scalar(n, Scalar::ONE)
    }

    pub fn scalar(n: usize, c: Scalar) -> Matrix {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn from_rows(rows: &[&[u16]]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let data = rows
            .iter()
            .flat_map(|row| {
                assert_eq!(row.len(), c, "ragged rows");
                row.iter().map(|&x| Scalar(x))
            })
            .collect();
        Matrix { rows: r, cols: c, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Scalar>) -> Matrix {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, f: &FieldSpec, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions");
        let mut out = Matrix::zeros(self.rows, other.cols);
        mul_into(f, &self.data, &other.data, self.rows, self.cols, other.cols, &mut out.data);
        out
    }

    pub fn add(&self, f: &FieldSpec, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, f: &FieldSpec, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, f: &FieldSpec, c: Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(c, a)).collect(),
        }
    }

    pub fn trace(&self, f: &FieldSpec) -> Scalar {
        assert!(self.is_square());
        (0..self.rows).fold(Scalar::ZERO, |acc, i| f.add(acc, self.get(i, i)))
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn rank(&self, f: &FieldSpec) -> usize {
        let mut m = self.clone();
        rref(f, &mut m).len()
    }

    pub fn is_invertible(&self, f: &FieldSpec) -> bool {
        self.is_square() && self.rank(f) == self.rows
    }

    pub fn inverse(&self, f: &FieldSpec) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, Scalar::ONE);
        }
        let pivots = rref(f, &mut aug);
        if pivots.len() < n || pivots.iter().any(|&p| p >= n) {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, aug.get(r, n + c));
            }
        }
        Some(inv)
    }

    pub fn pow(&self, f: &FieldSpec, e: u32) -> Matrix {
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(f, self);
        }
        acc
    }

    pub fn is_nilpotent(&self, f: &FieldSpec) -> bool {
        self.pow(f, self.rows as u32).is_zero()
    }

    /// Block-diagonal sum `[[self, 0], [0, other]]`.
    pub fn block_diag(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                out.set(self.rows + r, self.cols + c, other.get(r, c));
            }
        }
        out
    }

    /// Basis of the null space `{x : self · x = 0}` as column vectors.
    pub fn nullspace(&self, f: &FieldSpec) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = rref(f, &mut m);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut x = vec![Scalar::ZERO; self.cols];
                x[fc] = Scalar::ONE;
                for (row, &pc) in pivots.iter().enumerate() {
                    x[pc] = f.neg(m.get(row, fc));
                }
                x
            })
            .collect()
    }

    /// Basis of the column space, as the pivot columns of the original matrix.
    pub fn column_basis(&self, f: &FieldSpec) -> Matrix {
        let mut m = self.clone();
        let pivots = rref(f, &mut m);
        let mut out = Matrix::zeros(self.rows, pivots.len());
        for (j, &pc) in pivots.iter().enumerate() {
            for r in 0..self.rows {
                out.set(r, j, self.get(r, pc));
            }
        }
        out
    }

    /// Solves `self · X = rhs` for a matrix `self` with independent columns.
    pub fn solve_left(&self, f: &FieldSpec, rhs: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, rhs.rows);
        let n = self.cols;
        let mut aug = Matrix::zeros(self.rows, n + rhs.cols);
        for r in 0..self.rows {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            for c in 0..rhs.cols {
                aug.set(r, n + c, rhs.get(r, c));
            }
        }
        let pivots = rref(f, &mut aug);
        if pivots.iter().any(|&p| p >= n) || pivots.len() < n {
            return None;
        }
        let mut x = Matrix::zeros(n, rhs.cols);
        for (row, &pc) in pivots.iter().enumerate() {
            for c in 0..rhs.cols {
                x.set(pc, c, aug.get(row, n + c));
            }
        }
        Some(x)
    }

    pub fn indices(&self) -> Vec<u16> {
        self.data.iter().map(|s| s.0).collect()
    }
}

/// Row-reduces in place; returns pivot columns in row order.
pub fn rref(f: &FieldSpec, m: &mut Matrix) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(pr) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
            continue;
        };
        if pr != row {
            for c in 0..m.cols {
                m.data.swap(pr * m.cols + c, row * m.cols + c);
            }
        }
        let inv = f.inv_nonzero(m.get(row, col));
        for c in 0..m.cols {
            let v = f.mul(inv, m.get(row, c));
            m.set(row, c, v);
        }
        for r in 0..m.rows {
            if r == row {
                continue;
            }
            let factor = m.get(r, col);
            if factor.is_zero() {
                continue;
            }
            for c in 0..m.cols {
                let v = f.sub(m.get(r, c), f.mul(factor, m.get(row, c)));
                m.set(r, c, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Rank of a list of coordinate vectors.
pub fn vector_rank(f: &FieldSpec, vectors: &[Vec<Scalar>], len: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let data = vectors.iter().flat_map(|v| v.iter().copied()).collect();
    Matrix::from_vec(vectors.len(), len, data).rank(f)
}

/// `out = a (n×k) · b (k×m)`, raw slices.
#[inline]
pub fn mul_into(f: &FieldSpec, a: &[Scalar], b: &[Scalar], n: usize, k: usize, m: usize, out: &mut [Scalar]) {
    for i in 0..n {
        for j in 0..m {
            let mut acc = Scalar::ZERO;
            for t in 0..k {
                let x = a[i * k + t];
                if x.is_zero() {
                    continue;
                }
                acc = f.add(acc, f.mul(x, b[t * m + j]));
            }
            out[i * m + j] = acc;
        }
    }
}

/// All invertible `n × n` matrices, in increasing entry order.
pub fn general_linear_group(f: &FieldSpec, n: usize) -> Vec<Matrix> {
    if n == 0 {
        return vec![Matrix::zeros(0, 0)];
    }
    let q = f.order() as u64;
    let total = q.pow((n * n) as u32);
    (0..total)
        .filter_map(|idx| {
            let mut data = vec![Scalar::ZERO; n * n];
            let mut rest = idx;
            for slot in data.iter_mut().rev() {
                *slot = Scalar((rest % q) as u16);
                rest /= q;
            }
            let m = Matrix::from_vec(n, n, data);
            m.is_invertible(f).then_some(m)
        })
        .collect()
}
