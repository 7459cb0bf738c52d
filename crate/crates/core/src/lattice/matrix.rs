//! Dense arbitrary-precision integer vectors and matrices.
//!
//! Matrices follow the column convention used throughout the crate: a basis
//! matrix stores its basis vectors as columns and a map acts on column
//! vectors by left multiplication.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// An element of ℤᴺ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVector(Vec<BigInt>);

impl IntVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        IntVector(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        IntVector(vec![BigInt::zero(); dim])
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        IntVector(entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// The `index`-th standard basis vector (0-based).
    pub fn unit(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[index] = BigInt::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// 1-based position of the last nonzero coordinate, 0 for the zero vector.
    pub fn last_nonzero(&self) -> usize {
        self.0
            .iter()
            .rposition(|x| !x.is_zero())
            .map_or(0, |i| i + 1)
    }

    pub fn add(&self, other: &IntVector) -> IntVector {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        IntVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &IntVector) -> IntVector {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        IntVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> IntVector {
        IntVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: &BigInt) -> IntVector {
        IntVector(self.0.iter().map(|a| a * k).collect())
    }

    pub fn dot(&self, other: &IntVector) -> BigInt {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Entries converted to `i64`, if they all fit.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.0.iter().map(ToPrimitive::to_i64).collect()
    }
}

impl Index<usize> for IntVector {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl IndexMut<usize> for IntVector {
    fn index_mut(&mut self, i: usize) -> &mut BigInt {
        &mut self.0[i]
    }
}

impl From<Vec<BigInt>> for IntVector {
    fn from(v: Vec<BigInt>) -> Self {
        IntVector(v)
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

/// Dense row-major matrix of big integers. Either dimension may be zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
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

    /// Builds a matrix from rows of machine integers.
    pub fn from_rows_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(x);
            }
        }
        m
    }

    /// Builds an `dim × columns.len()` matrix whose columns are the given vectors.
    pub fn from_columns(dim: usize, columns: &[IntVector]) -> Self {
        let mut m = Self::zeros(dim, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.dim(), dim, "column dimension mismatch");
            for i in 0..dim {
                m[(i, j)] = col[i].clone();
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

    pub fn column(&self, j: usize) -> IntVector {
        IntVector((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn columns(&self) -> Vec<IntVector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row(&self, i: usize) -> IntVector {
        IntVector(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    /// Keeps the columns in `range`.
    pub fn column_range(&self, range: std::ops::Range<usize>) -> IntMatrix {
        let mut m = Self::zeros(self.rows, range.len());
        for i in 0..self.rows {
            for (jj, j) in range.clone().enumerate() {
                m[(i, jj)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Keeps the rows in `range`.
    pub fn row_range(&self, range: std::ops::Range<usize>) -> IntMatrix {
        let cols = self.cols;
        IntMatrix {
            rows: range.len(),
            cols,
            data: self.data[range.start * cols..range.end * cols].to_vec(),
        }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hconcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "row count mismatch");
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        m[(i, j)] += a * b;
                    }
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &IntVector) -> IntVector {
        assert_eq!(self.cols, v.dim(), "dimension mismatch");
        IntVector(
            (0..self.rows)
                .map(|i| {
                    (0..self.cols)
                        .filter(|&j| !v[j].is_zero())
                        .map(|j| &self[(i, j)] * &v[j])
                        .sum()
                })
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    pub fn rank(&self) -> usize {
        hnf(self).rank()
    }

    /// Exact inverse of a unimodular matrix; `None` if `|det| != 1`.
    pub fn inverse_unimodular(&self) -> Option<IntMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let Hnf { h, u, .. } = hnf(self);
        (h == IntMatrix::identity(self.rows)).then_some(u)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `col[dst] -= k * col[src]`
    fn col_submul(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let t = &self[(i, src)] * k;
            self[(i, dst)] -= t;
        }
    }

    /// `row[dst] -= k * row[src]`
    fn row_submul(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = &self[(src, j)] * k;
            self[(dst, j)] -= t;
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let v = -&self[(i, c)];
            self[(i, c)] = v;
        }
    }

    /// Replaces columns `(c1, c2)` by `(s·c1 + t·c2, x·c1 + y·c2)`.
    fn combine_cols(&mut self, c1: usize, c2: usize, [s, t, x, y]: &[BigInt; 4]) {
        for i in 0..self.rows {
            let a = &self[(i, c1)];
            let b = &self[(i, c2)];
            let n1 = s * a + t * b;
            let n2 = x * a + y * b;
            self[(i, c1)] = n1;
            self[(i, c2)] = n2;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    /// Row-major, one bracketed row per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}", self.row(i))?;
        }
        Ok(())
    }
}

/// Returns `(g, s, t)` with `g = gcd(a, b) >= 0` and `s·a + t·b = g`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let nr = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, nr);
        let ns = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, ns);
        let nt = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, nt);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Column Hermite normal form of a matrix.
#[derive(Clone, Debug)]
pub struct Hnf {
    /// Canonical HNF with zero columns trimmed: `rows × rank`.
    pub h: IntMatrix,
    /// Unimodular `cols × cols` transform with `m·u = [h | 0]`.
    pub u: IntMatrix,
    /// Row index of the pivot of each column of `h`.
    pub pivot_rows: Vec<usize>,
}

impl Hnf {
    pub fn rank(&self) -> usize {
        self.h.cols()
    }

    /// Columns of `u` spanning the integer kernel of the input.
    pub fn kernel(&self) -> IntMatrix {
        self.u.column_range(self.rank()..self.u.cols())
    }
}

/// Column-style Hermite normal form.
///
/// The result is lower-triangular echelon: each column's first nonzero entry
/// (its pivot) is positive and sits strictly below the previous column's
/// pivot, and every entry left of a pivot in the pivot's row lies in
/// `[0, pivot)`. Two matrices with the same column lattice produce the same
/// `h`.
pub fn hnf(m: &IntMatrix) -> Hnf {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut u = IntMatrix::identity(cols);
    let mut pivot_rows = Vec::new();
    let mut pc = 0;
    for row in 0..rows {
        if pc == cols {
            break;
        }
        for j in pc + 1..cols {
            if a[(row, j)].is_zero() {
                continue;
            }
            if a[(row, pc)].is_zero() {
                a.swap_cols(pc, j);
                u.swap_cols(pc, j);
                continue;
            }
            let (q, r) = a[(row, j)].div_rem(&a[(row, pc)]);
            if r.is_zero() {
                a.col_submul(j, pc, &q);
                u.col_submul(j, pc, &q);
                continue;
            }
            let (g, s, t) = ext_gcd(&a[(row, pc)], &a[(row, j)]);
            let x = -(&a[(row, j)] / &g);
            let y = &a[(row, pc)] / &g;
            let coeffs = [s, t, x, y];
            a.combine_cols(pc, j, &coeffs);
            u.combine_cols(pc, j, &coeffs);
        }
        if a[(row, pc)].is_zero() {
            continue;
        }
        if a[(row, pc)].is_negative() {
            a.negate_col(pc);
            u.negate_col(pc);
        }
        let pivot = a[(row, pc)].clone();
        for k in 0..pc {
            let q = a[(row, k)].div_floor(&pivot);
            a.col_submul(k, pc, &q);
            u.col_submul(k, pc, &q);
        }
        pivot_rows.push(row);
        pc += 1;
    }
    Hnf {
        h: a.column_range(0..pc),
        u,
        pivot_rows,
    }
}

/// Basis (as columns) of the integer kernel `{x ∈ ℤ^cols : m·x = 0}`.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    hnf(m).kernel()
}

/// Elementary divisors `d_1 | d_2 | … | d_r` of `m`, all positive.
///
/// The zero matrix has no elementary divisors.
pub fn snf_invariants(m: &IntMatrix) -> Vec<BigInt> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut out = Vec::new();
    for t in 0..rows.min(cols) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let block = (t..rows).flat_map(|i| (t..cols).map(move |j| (i, j)));
        let Some((pi, pj)) = min_abs_entry(&a, block) else {
            break;
        };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        loop {
            let p = a[(t, t)].clone();
            for i in t + 1..rows {
                let q = a[(i, t)].div_floor(&p);
                a.row_submul(i, t, &q);
            }
            for j in t + 1..cols {
                let q = a[(t, j)].div_floor(&p);
                a.col_submul(j, t, &q);
            }
            let cross = (t + 1..rows)
                .map(|i| (i, t))
                .chain((t + 1..cols).map(|j| (t, j)));
            if let Some((i, j)) = min_abs_entry(&a, cross) {
                a.swap_rows(t, i);
                a.swap_cols(t, j);
                continue;
            }
            // Row and column cleared; enforce divisibility of the rest.
            let p = a[(t, t)].clone();
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !a[(i, j)].is_multiple_of(&p));
            match bad {
                Some((i, _)) => {
                    let minus_one = -BigInt::one();
                    a.row_submul(t, i, &minus_one);
                }
                None => break,
            }
        }
        out.push(a[(t, t)].abs());
    }
    out
}

fn min_abs_entry(
    a: &IntMatrix,
    cells: impl Iterator<Item = (usize, usize)>,
) -> Option<(usize, usize)> {
    cells
        .filter(|&(i, j)| !a[(i, j)].is_zero())
        .min_by(|&x, &y| a[x].abs().cmp(&a[y].abs()))
}
