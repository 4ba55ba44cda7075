//! Exact integer linear algebra.
//!
//! Everything here works over arbitrary-precision integers. The normal forms
//! are deterministic: pivots are chosen by smallest absolute value with ties
//! broken by lowest `(row, col)`, so equal inputs always give equal outputs.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::BigIntStr;

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn diagonal<T: Into<BigInt> + Clone>(diag: &[T]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone().into();
        }
        m
    }

    /// Builds a matrix from row-major entries; fails if the length is wrong.
    pub fn from_vec(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(IntegerMatrix { rows, cols, entries })
    }

    /// Builds a matrix from nested rows. An empty outer slice gives a 0x0 matrix.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Shape("ragged rows".into()));
            }
            entries.extend(row.iter().cloned().map(Into::into));
        }
        Ok(IntegerMatrix { rows: r, cols: c, entries })
    }

    /// Convenience constructor for literals in code and tests; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let owned: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        Self::from_rows(&owned).expect("ragged literal matrix")
    }

    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
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

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn add(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        IntegerMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn sub(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        IntegerMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn scale(&self, k: &BigInt) -> IntegerMatrix {
        let entries = self.entries.iter().map(|a| a * k).collect();
        IntegerMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn neg(&self) -> IntegerMatrix {
        self.scale(&BigInt::from(-1))
    }

    /// Entrywise reduction into `[0, m)`.
    pub fn reduce_mod(&self, m: &BigInt) -> IntegerMatrix {
        let entries = self.entries.iter().map(|a| a.mod_floor(m)).collect();
        IntegerMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn block_diagonal(a: &IntegerMatrix, b: &IntegerMatrix) -> IntegerMatrix {
        let mut m = Self::zeros(a.rows + b.rows, a.cols + b.cols);
        m.set_block(0, 0, a);
        m.set_block(a.rows, a.cols, b);
        m
    }

    /// `[[a, b], [c, d]]` as one matrix.
    pub fn block2x2(a: &IntegerMatrix, b: &IntegerMatrix, c: &IntegerMatrix, d: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let mut m = Self::zeros(a.rows + c.rows, a.cols + b.cols);
        m.set_block(0, 0, a);
        m.set_block(0, a.cols, b);
        m.set_block(a.rows, 0, c);
        m.set_block(a.rows, a.cols, d);
        m
    }

    pub fn hstack(a: &IntegerMatrix, b: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(a.rows, b.rows);
        let mut m = Self::zeros(a.rows, a.cols + b.cols);
        m.set_block(0, 0, a);
        m.set_block(0, a.cols, b);
        m
    }

    pub fn kronecker(a: &IntegerMatrix, b: &IntegerMatrix) -> IntegerMatrix {
        let mut m = Self::zeros(a.rows * b.rows, a.cols * b.cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                let x = &a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                for k in 0..b.rows {
                    for l in 0..b.cols {
                        m[(i * b.rows + k, j * b.cols + l)] = x * &b[(k, l)];
                    }
                }
            }
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &IntegerMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)].clone();
            }
        }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, i) in rows.clone().enumerate() {
            for (b, j) in cols.clone().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, cols.len());
        for (b, &j) in cols.iter().enumerate() {
            for i in 0..self.rows {
                m[(i, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.entries.iter().map(|x| x.abs()).max().unwrap_or_default()
    }

    fn into_row_vecs(self) -> Vec<Vec<BigInt>> {
        let cols = self.cols;
        if cols == 0 {
            return vec![Vec::new(); self.rows];
        }
        self.entries.chunks(cols).map(|c| c.to_vec()).collect()
    }

    fn from_row_vecs(rows: usize, cols: usize, data: Vec<Vec<BigInt>>) -> Self {
        let entries = data.into_iter().flatten().collect();
        IntegerMatrix { rows, cols, entries }
    }
}

impl std::ops::Index<(usize, usize)> for IntegerMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<BigIntStr>>,
}

impl Serialize for IntegerMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: (0..self.rows).map(|i| self.row(i).iter().cloned().map(BigIntStr).collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntegerMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        if raw.entries.len() != raw.rows || raw.entries.iter().any(|r| r.len() != raw.cols) {
            return Err(serde::de::Error::custom(format!(
                "matrix entries do not match declared shape {}x{}",
                raw.rows, raw.cols
            )));
        }
        let entries = raw.entries.into_iter().flatten().map(|b| b.0).collect();
        Ok(IntegerMatrix { rows: raw.rows, cols: raw.cols, entries })
    }
}

/// `A = U · S · V` with `U`, `V` unimodular and `S` in Smith form.
///
/// `u_inv` and `v_inv` are carried along so callers can move between the
/// original coordinates and the diagonal ones without another inversion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntegerMatrix,
    pub s: IntegerMatrix,
    pub v: IntegerMatrix,
    pub u_inv: IntegerMatrix,
    pub v_inv: IntegerMatrix,
}

impl SmithDecomposition {
    /// Diagonal entries `d_1 | d_2 | ...` (length `min(rows, cols)`), zeros last.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols())).map(|i| self.s[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}

/// `row[dst] += k * row[src]`
fn add_row_multiple(m: &mut [Vec<BigInt>], dst: usize, src: usize, k: &BigInt) {
    if k.is_zero() {
        return;
    }
    let (d, s) = if dst < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in d.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x += k * y;
        }
    }
}

/// `col[dst] += k * col[src]`
fn add_col_multiple(m: &mut [Vec<BigInt>], dst: usize, src: usize, k: &BigInt) {
    if k.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        if !row[src].is_zero() {
            let t = k * &row[src];
            row[dst] += t;
        }
    }
}

fn negate_row(m: &mut [Vec<BigInt>], i: usize) {
    for x in m[i].iter_mut() {
        *x = -std::mem::take(x);
    }
}

fn negate_col(m: &mut [Vec<BigInt>], j: usize) {
    for row in m.iter_mut() {
        row[j] = -std::mem::take(&mut row[j]);
    }
}

/// Row operations applied to the working matrix are mirrored here: the
/// accumulated transform `P` receives the same row op and `P^{-1}` the
/// inverse column op, so `P^{-1} · P = I` is maintained throughout.
struct RowTracker {
    p: Vec<Vec<BigInt>>,
    p_inv: Vec<Vec<BigInt>>,
}

impl RowTracker {
    fn new(n: usize) -> Self {
        let id = IntegerMatrix::identity(n).into_row_vecs();
        RowTracker { p: id.clone(), p_inv: id }
    }
    fn swap(&mut self, a: usize, b: usize) {
        self.p.swap(a, b);
        swap_cols(&mut self.p_inv, a, b);
    }
    fn add(&mut self, dst: usize, src: usize, k: &BigInt) {
        add_row_multiple(&mut self.p, dst, src, k);
        add_col_multiple(&mut self.p_inv, src, dst, &-k);
    }
    fn negate(&mut self, i: usize) {
        negate_row(&mut self.p, i);
        negate_col(&mut self.p_inv, i);
    }
}

/// Column-side counterpart of [`RowTracker`]: `Q` gets the column op,
/// `Q^{-1}` the inverse row op.
struct ColTracker {
    q: Vec<Vec<BigInt>>,
    q_inv: Vec<Vec<BigInt>>,
}

impl ColTracker {
    fn new(n: usize) -> Self {
        let id = IntegerMatrix::identity(n).into_row_vecs();
        ColTracker { q: id.clone(), q_inv: id }
    }
    fn swap(&mut self, a: usize, b: usize) {
        swap_cols(&mut self.q, a, b);
        self.q_inv.swap(a, b);
    }
    fn add(&mut self, dst: usize, src: usize, k: &BigInt) {
        add_col_multiple(&mut self.q, dst, src, k);
        add_row_multiple(&mut self.q_inv, src, dst, &-k);
    }
}

/// Smallest nonzero `|a_ij|` over `i, j >= t`, ties to lowest `(row, col)`.
fn find_pivot(a: &[Vec<BigInt>], t: usize, cols: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().take(cols).skip(t) {
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                best = Some((i, j, ax));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Computes `A = U · S · V` with `S` diagonal, nonnegative and with each
/// diagonal entry dividing the next.
pub fn smith_normal_form(a: &IntegerMatrix) -> SmithDecomposition {
    let (rows, cols) = (a.rows, a.cols);
    let mut m = a.clone().into_row_vecs();
    let mut rt = RowTracker::new(rows);
    let mut ct = ColTracker::new(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = find_pivot(&m, t, cols) else { break };
        m.swap(t, pi);
        rt.swap(t, pi);
        swap_cols(&mut m, t, pj);
        ct.swap(t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].div_floor(&m[t][t]);
                add_row_multiple(&mut m, i, t, &-&q);
                rt.add(i, t, &-&q);
                dirty |= !m[i][t].is_zero();
            }
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].div_floor(&m[t][t]);
                add_col_multiple(&mut m, j, t, &-&q);
                ct.add(j, t, &-&q);
                dirty |= !m[t][j].is_zero();
            }
            if dirty {
                // a remainder smaller than the pivot survived; move it up
                let (pi, pj) = find_pivot_in_cross(&m, t, rows, cols);
                m.swap(t, pi);
                rt.swap(t, pi);
                swap_cols(&mut m, t, pj);
                ct.swap(t, pj);
                continue;
            }
            // row and column t are clear; enforce divisibility on the rest
            let p = m[t][t].clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !m[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    add_row_multiple(&mut m, t, i, &BigInt::one());
                    rt.add(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if m[t][t].is_negative() {
            negate_row(&mut m, t);
            rt.negate(t);
        }
        t += 1;
    }

    let p = IntegerMatrix::from_row_vecs(rows, rows, rt.p);
    let p_inv = IntegerMatrix::from_row_vecs(rows, rows, rt.p_inv);
    let q = IntegerMatrix::from_row_vecs(cols, cols, ct.q);
    let q_inv = IntegerMatrix::from_row_vecs(cols, cols, ct.q_inv);
    let s = IntegerMatrix::from_row_vecs(rows, cols, m);
    // P·A·Q = S  =>  A = P^{-1}·S·Q^{-1}
    SmithDecomposition { u: p_inv, s, v: q_inv, u_inv: p, v_inv: q }
}

/// Smallest nonzero entry in row `t` or column `t` (the pivot included).
fn find_pivot_in_cross(m: &[Vec<BigInt>], t: usize, rows: usize, cols: usize) -> (usize, usize) {
    let mut best = (t, t, m[t][t].abs());
    for (i, row) in m.iter().enumerate().take(rows).skip(t + 1) {
        let x = row[t].abs();
        if !x.is_zero() && x < best.2 {
            best = (i, t, x);
        }
    }
    for (j, entry) in m[t].iter().enumerate().take(cols).skip(t + 1) {
        let x = entry.abs();
        if !x.is_zero() && x < best.2 {
            best = (t, j, x);
        }
    }
    (best.0, best.1)
}

/// Row-style Hermite normal form: returns `(H, U)` with `U · A = H`, `U`
/// unimodular, pivots positive and the entries above each pivot in `[0, pivot)`.
pub fn hermite_normal_form(a: &IntegerMatrix) -> (IntegerMatrix, IntegerMatrix) {
    let (h, u, _) = hermite_with_pivots(a);
    (h, u)
}

/// As [`hermite_normal_form`], also returning the pivot column of each nonzero row.
pub fn hermite_with_pivots(a: &IntegerMatrix) -> (IntegerMatrix, IntegerMatrix, Vec<usize>) {
    let (rows, cols) = (a.rows, a.cols);
    let mut m = a.clone().into_row_vecs();
    let mut u = IntegerMatrix::identity(rows).into_row_vecs();
    let mut pivots = Vec::new();
    let mut r = 0;
    for j in 0..cols {
        if r == rows {
            break;
        }
        loop {
            // smallest |m[i][j]| for i >= r
            let mut best: Option<(usize, BigInt)> = None;
            for (i, row) in m.iter().enumerate().skip(r) {
                if !row[j].is_zero() {
                    let ax = row[j].abs();
                    if best.as_ref().is_none_or(|(_, b)| ax < *b) {
                        best = Some((i, ax));
                    }
                }
            }
            let Some((pi, _)) = best else { break };
            m.swap(r, pi);
            u.swap(r, pi);
            let mut done = true;
            for i in r + 1..rows {
                if m[i][j].is_zero() {
                    continue;
                }
                let q = m[i][j].div_floor(&m[r][j]);
                add_row_multiple(&mut m, i, r, &-&q);
                add_row_multiple(&mut u, i, r, &-&q);
                done &= m[i][j].is_zero();
            }
            if done {
                break;
            }
        }
        if m[r][j].is_zero() {
            continue;
        }
        if m[r][j].is_negative() {
            negate_row(&mut m, r);
            negate_row(&mut u, r);
        }
        for i in 0..r {
            let q = m[i][j].div_floor(&m[r][j]);
            add_row_multiple(&mut m, i, r, &-&q);
            add_row_multiple(&mut u, i, r, &-&q);
        }
        pivots.push(j);
        r += 1;
    }
    (IntegerMatrix::from_row_vecs(rows, cols, m), IntegerMatrix::from_row_vecs(rows, rows, u), pivots)
}

/// A primitive basis of `{x : A·x = 0}`, returned as the columns of a
/// `cols(A) × nullity` matrix. The basis is put in Hermite form so the
/// output does not depend on elimination order.
pub fn integer_kernel(a: &IntegerMatrix) -> IntegerMatrix {
    let n = a.cols;
    let (_, u, pivots) = hermite_with_pivots(&a.transpose());
    let rank = pivots.len();
    let kernel_rows = u.submatrix(rank..n, 0..n);
    let (h, _) = hermite_normal_form(&kernel_rows);
    h.transpose()
}

pub fn rank(a: &IntegerMatrix) -> usize {
    hermite_with_pivots(a).2.len()
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(a: &IntegerMatrix) -> Result<BigInt> {
    if !a.is_square() {
        return Err(Error::NonSquare { rows: a.rows, cols: a.cols });
    }
    let n = a.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m = a.clone().into_row_vecs();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    Ok(sign * &m[n - 1][n - 1])
}

/// Finds one integer `x` with `A·x = b`, or `None` if there is none.
///
/// Uses the Hermite form of `Aᵀ`; free coordinates are set to zero so the
/// answer is deterministic.
pub fn solve(a: &IntegerMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows, b.len());
    let (h, u, pivots) = hermite_with_pivots(&a.transpose());
    // U·Aᵀ = H  =>  A·Uᵀ = Hᵀ ; solve Hᵀ·y = b then x = Uᵀ·y
    let mut y = vec![BigInt::zero(); a.cols];
    for (i, &p) in pivots.iter().enumerate() {
        let mut rhs = b[p].clone();
        for (k, yk) in y.iter().enumerate().take(i) {
            rhs -= yk * &h[(k, p)];
        }
        let (q, r) = rhs.div_rem(&h[(i, p)]);
        if !r.is_zero() {
            return None;
        }
        y[i] = q;
    }
    let x = u.transpose().mul_vec(&y);
    if a.mul_vec(&x) != b {
        return None;
    }
    Some(x)
}

/// Basis (as columns) of the subgroup of `Z^n` spanned by the columns of `gens`.
pub fn column_span_basis(gens: &IntegerMatrix) -> IntegerMatrix {
    let (h, _, pivots) = hermite_with_pivots(&gens.transpose());
    h.submatrix(0..pivots.len(), 0..gens.rows).transpose()
}

/// Canonical (Hermite) description of a column span; equal spans give equal output.
pub fn canonical_span(gens: &IntegerMatrix) -> IntegerMatrix {
    column_span_basis(gens)
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(a: &IntegerMatrix) -> Result<IntegerMatrix> {
    if !a.is_square() {
        return Err(Error::NonSquare { rows: a.rows, cols: a.cols });
    }
    let snf = smith_normal_form(a);
    if snf.diagonal().iter().any(|d| !d.is_one()) {
        return Err(Error::NotUnimodular);
    }
    // A = U·I·V  =>  A^{-1} = V^{-1}·U^{-1}
    Ok(snf.v_inv.mul(&snf.u_inv))
}

/// A random `n × n` unimodular matrix with entries bounded by `max_entry`,
/// built from `steps` elementary row moves (moves that would exceed the
/// bound are skipped).
pub fn random_unimodular<R: Rng>(n: usize, max_entry: i64, steps: usize, rng: &mut R) -> IntegerMatrix {
    if n == 0 {
        return IntegerMatrix::zeros(0, 0);
    }
    let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        match rng.gen_range(0..6) {
            0 => m[i].iter_mut().for_each(|x| *x = -*x),
            1 if n > 1 => m.swap(i, rng.gen_range(0..n)),
            _ if n > 1 => {
                let j = (i + rng.gen_range(1..n)) % n;
                let s = if rng.gen_bool(0.5) { 1 } else { -1 };
                let row: Vec<i64> = m[i].iter().zip(&m[j]).map(|(a, b)| a + s * b).collect();
                if row.iter().all(|x| x.abs() <= max_entry) {
                    m[i] = row;
                }
            }
            _ => {}
        }
    }
    let rows: Vec<&[i64]> = m.iter().map(Vec::as_slice).collect();
    IntegerMatrix::from_i64(&rows)
}
