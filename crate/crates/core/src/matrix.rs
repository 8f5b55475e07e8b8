//! Dense integer matrices and the two canonical-form reductions used by
//! [`Lattice`](crate::Lattice): Hermite (row style, upper triangular) and
//! Smith (with the column transform kept for character enumeration).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from its rows. All rows must have the same length.
    pub fn from_rows<R, T>(rows: R) -> Result<Self>
    where
        R: IntoIterator,
        R::Item: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let rows: Vec<Vec<BigInt>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(Into::into).collect())
            .collect();
        let cols = rows.first().map_or(0, Vec::len);
        for r in &rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn diagonal<T: Into<BigInt>>(entries: impl IntoIterator<Item = T>) -> Self {
        let entries: Vec<BigInt> = entries.into_iter().map(Into::into).collect();
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.into_iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, coeffs: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(coeffs.len(), self.rows);
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, e) in out.iter_mut().zip(self.row(i)) {
                *o += c * e;
            }
        }
        out
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let r = other.left_mul_vec(self.row(i));
            out.data[i * other.cols..(i + 1) * other.cols].clone_from_slice(&r);
        }
        Ok(out)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.row_vecs();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "({})", row.join(","))?;
        }
        f.write_str("]")
    }
}

fn sub_scaled(target: &mut [BigInt], src: &[BigInt], q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for (t, s) in target.iter_mut().zip(src) {
        *t -= q * s;
    }
}

/// Row-style Hermite normal form of the lattice spanned by `rows` inside
/// `Z^n`. Returns `None` when the rows do not span a full-rank lattice.
///
/// The result is `n` rows, upper triangular, with positive diagonal and every
/// entry above a pivot reduced into `[0, pivot)`.
pub(crate) fn hnf_rows(mut rows: Vec<Vec<BigInt>>, n: usize) -> Option<Vec<Vec<BigInt>>> {
    if rows.len() < n {
        return None;
    }
    for col in 0..n {
        loop {
            // smallest nonzero entry at or below the pivot position
            let best = (col..rows.len())
                .filter(|&r| !rows[r][col].is_zero())
                .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()))?;
            rows.swap(col, best);
            let mut clean = true;
            let (head, tail) = rows.split_at_mut(col + 1);
            let pivot = &head[col];
            for r in tail.iter_mut() {
                if r[col].is_zero() {
                    continue;
                }
                let q = r[col].div_floor(&pivot[col]);
                sub_scaled(r, pivot, &q);
                if !r[col].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if rows[col][col].is_negative() {
            for e in rows[col].iter_mut() {
                *e = -std::mem::take(e);
            }
        }
        let (head, tail) = rows.split_at_mut(col);
        let pivot = &tail[0];
        for r in head.iter_mut() {
            let q = r[col].div_floor(&pivot[col]);
            sub_scaled(r, pivot, &q);
        }
    }
    rows.truncate(n);
    Some(rows)
}

/// Smith reduction of a square nonsingular matrix `a`.
///
/// Returns the invariant factors `s_1 | s_2 | ... | s_n` together with a
/// unimodular `v` such that `u * a * v = diag(s)` for some unimodular `u`.
pub(crate) fn smith_with_column_transform(a: &IntMatrix) -> (Vec<BigInt>, IntMatrix) {
    assert!(a.is_square());
    let n = a.rows();
    let mut m = a.row_vecs();
    let mut v = IntMatrix::identity(n).row_vecs();

    let col_sub = |m: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, q: &BigInt| {
        for row in m.iter_mut() {
            let s = row[src].clone();
            row[dst] -= q * s;
        }
    };
    let col_swap = |m: &mut Vec<Vec<BigInt>>, a: usize, b: usize| {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    };

    for t in 0..n {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if m[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                panic!("smith reduction on a singular matrix");
            };
            m.swap(t, bi);
            col_swap(&mut m, t, bj);
            col_swap(&mut v, t, bj);

            let mut done = true;
            for i in t + 1..n {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = &m[i][t] / &m[t][t];
                let (head, tail) = m.split_at_mut(i);
                sub_scaled(&mut tail[0], &head[t], &q);
                if !m[i][t].is_zero() {
                    done = false;
                }
            }
            for j in t + 1..n {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = &m[t][j] / &m[t][t];
                col_sub(&mut m, j, t, &q);
                col_sub(&mut v, j, t, &q);
                if !m[t][j].is_zero() {
                    done = false;
                }
            }
            if !done {
                continue;
            }
            // pivot must divide the remaining block
            let offender =
                (t + 1..n).find(|&i| (t + 1..n).any(|j| !(&m[i][j] % &m[t][t]).is_zero()));
            match offender {
                Some(i) => {
                    let (head, tail) = m.split_at_mut(i);
                    for (x, y) in head[t].iter_mut().zip(&tail[0]) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        if m[t][t].is_negative() {
            for e in m[t].iter_mut() {
                *e = -std::mem::take(e);
            }
        }
    }
    let diag = (0..n).map(|i| m[i][i].clone()).collect();
    (diag, IntMatrix::from_rows(v).expect("square transform"))
}
