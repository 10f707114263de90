//! Dense integer matrices with exact arithmetic: Smith and Hermite normal
//! forms, integer kernels and cokernel invariant factors.
//!
//! Everything here works over `BigInt`, so there are no overflow semantics
//! to worry about. Pivots are always chosen by smallest nonzero absolute
//! value to bound coefficient growth.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        IntMat { rows: nrows, cols: ncols, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        IntMat::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
        )
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        let mut m = IntMat::zeros(n, n);
        for (i, d) in entries.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows)
            .all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[a] += q * row[b]
    fn add_row_multiple(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(a, j) + q * self.get(b, j);
            self.set(a, j, v);
        }
    }

    /// col[a] += q * col[b]
    fn add_col_multiple(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, a) + q * self.get(i, b);
            self.set(i, a, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "{:?}", self.row(i))?;
        }
        Ok(())
    }
}

pub struct Snf {
    pub u: IntMat,
    pub d: IntMat,
    pub v: IntMat,
}

/// Smith normal form: U * M * V = D with D diagonal, nonnegative, and each
/// diagonal entry dividing the next; U and V unimodular.
pub fn smith_normal_form(m: &IntMat) -> Snf {
    let mut d = m.clone();
    let mut u = IntMat::identity(m.nrows());
    let mut v = IntMat::identity(m.ncols());
    let n = m.nrows().min(m.ncols());

    for t in 0..n {
        'pivot: loop {
            // smallest nonzero |entry| in the remaining submatrix
            let mut best: Option<(usize, usize)> = None;
            for i in t..d.nrows() {
                for j in t..d.ncols() {
                    if !d.get(i, j).is_zero()
                        && best.map_or(true, |(bi, bj)| {
                            d.get(i, j).abs() < d.get(bi, bj).abs()
                        })
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finalize(u, d, v);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut dirty = false;
            for i in t + 1..d.nrows() {
                if !d.get(i, t).is_zero() {
                    let q = -(d.get(i, t) / d.get(t, t));
                    d.add_row_multiple(i, t, &q);
                    u.add_row_multiple(i, t, &q);
                    if !d.get(i, t).is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..d.ncols() {
                if !d.get(t, j).is_zero() {
                    let q = -(d.get(t, j) / d.get(t, t));
                    d.add_col_multiple(j, t, &q);
                    v.add_col_multiple(j, t, &q);
                    if !d.get(t, j).is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue 'pivot;
            }
            // pivot must divide every entry of the remaining submatrix,
            // otherwise fold the offending row in and restart
            for i in t + 1..d.nrows() {
                for j in t + 1..d.ncols() {
                    if !(d.get(i, j) % d.get(t, t)).is_zero() {
                        d.add_row_multiple(t, i, &BigInt::one());
                        u.add_row_multiple(t, i, &BigInt::one());
                        continue 'pivot;
                    }
                }
            }
            break;
        }
    }
    finalize(u, d, v)
}

fn finalize(mut u: IntMat, mut d: IntMat, v: IntMat) -> Snf {
    let n = d.nrows().min(d.ncols());
    for t in 0..n {
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    debug_assert!(d.is_diagonal());
    Snf { u, d, v }
}

/// Diagonal of the Smith form, nonzero entries only.
pub fn elementary_divisors(m: &IntMat) -> Vec<BigInt> {
    let snf = smith_normal_form(m);
    let n = m.nrows().min(m.ncols());
    (0..n)
        .map(|t| snf.d.get(t, t).clone())
        .filter(|x| !x.is_zero())
        .collect()
}

/// Invariant factors (all >= 2) of the torsion part of Z^rows / im(M),
/// where the image is spanned by the columns of M.
pub fn cokernel_torsion(m: &IntMat) -> Vec<BigInt> {
    elementary_divisors(m)
        .into_iter()
        .filter(|d| *d > BigInt::one())
        .collect()
}

/// Rank of the free part of Z^rows / im(M).
pub fn cokernel_free_rank(m: &IntMat) -> usize {
    m.nrows() - elementary_divisors(m).len()
}

/// Basis of the integer kernel {x : M x = 0}, as rows.
pub fn integer_kernel(m: &IntMat) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    let n = m.nrows().min(m.ncols());
    let mut basis = Vec::new();
    for j in 0..m.ncols() {
        let zero_pivot = j >= n || snf.d.get(j, j).is_zero();
        if zero_pivot {
            basis.push((0..m.ncols()).map(|i| snf.v.get(i, j).clone()).collect());
        }
    }
    basis
}

/// Hermite normal form of the row lattice: returns a canonical basis of the
/// lattice spanned by the given rows (zero rows dropped). Two generating
/// sets span the same lattice iff their HNFs coincide.
pub fn hnf_row_basis(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let cols = rows[0].len();
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let mut pivot_row = 0usize;
    for col in 0..cols {
        // gcd-out the column below pivot_row
        loop {
            let mut best: Option<usize> = None;
            for i in pivot_row..m.len() {
                if !m[i][col].is_zero()
                    && best.map_or(true, |b| m[i][col].abs() < m[b][col].abs())
                {
                    best = Some(i);
                }
            }
            let Some(bi) = best else { break };
            m.swap(pivot_row, bi);
            let mut dirty = false;
            for i in pivot_row + 1..m.len() {
                if !m[i][col].is_zero() {
                    let q = &m[i][col] / &m[pivot_row][col];
                    for j in 0..cols {
                        let v = &m[i][j] - &q * &m[pivot_row][j];
                        m[i][j] = v;
                    }
                    if !m[i][col].is_zero() {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }
        if pivot_row < m.len() && !m[pivot_row][col].is_zero() {
            if m[pivot_row][col].is_negative() {
                for j in 0..cols {
                    m[pivot_row][j] = -&m[pivot_row][j];
                }
            }
            // reduce entries above the pivot into [0, pivot)
            for i in 0..pivot_row {
                let q = m[i][col].div_floor(&m[pivot_row][col]);
                if !q.is_zero() {
                    for j in 0..cols {
                        let v = &m[i][j] - &q * &m[pivot_row][j];
                        m[i][j] = v;
                    }
                }
            }
            pivot_row += 1;
        }
    }
    m.truncate(pivot_row);
    m
}

/// Determinant via fraction-free Gaussian elimination (Bareiss).
pub fn determinant(m: &IntMat) -> BigInt {
    assert_eq!(m.nrows(), m.ncols(), "determinant of non-square matrix");
    let n = m.nrows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_rows();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Rank over Q by fraction-free Gaussian elimination.
pub fn row_rank(m: &IntMat) -> usize {
    let mut a = m.to_rows();
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(rank, p);
        for i in rank + 1..rows {
            if !a[i][c].is_zero() {
                let (pc, ic) = (a[rank][c].clone(), a[i][c].clone());
                for j in c..cols {
                    let v = &a[i][j] * &pc - &a[rank][j] * &ic;
                    a[i][j] = v;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}
