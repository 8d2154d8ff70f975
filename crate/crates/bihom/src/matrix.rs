//! Dense rational matrices and integer-preserving Gaussian elimination.
//!
//! Elimination is fraction-free: rows are cleared of denominators once, then
//! combined by cross-multiplication and re-divided by their content, so no
//! rational division happens during the forward pass. Pivoting is
//! deterministic: columns are scanned left to right and the first remaining
//! row (in input order) with a nonzero entry in the current column becomes
//! the pivot. Ranks, nullspace bases and solutions are therefore exactly
//! reproducible.

use crate::scalar::{one, zero, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense row-major matrix over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Rat) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.get(i, j).is_one()
                    } else {
                        self.get(i, j).is_zero()
                    }
                })
            })
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
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
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Matrix power with non-negative exponent; `pow(0)` is the identity.
    pub fn pow(&self, e: usize) -> Matrix {
        assert_eq!(self.rows, self.cols, "power of a non-square matrix");
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn kronecker(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for p in 0..other.rows {
                    for q in 0..other.cols {
                        let b = other.get(p, q);
                        if b.is_zero() {
                            continue;
                        }
                        out.set(i * other.rows + p, j * other.cols + q, a * b);
                    }
                }
            }
        }
        out
    }

    pub fn commutes_with(&self, other: &Matrix) -> bool {
        self.mul(other) == other.mul(self)
    }

    /// Applies the matrix to a coordinate vector.
    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![zero(); self.rows];
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o = &*o + &(a * x);
                }
            }
        }
        out
    }

    /// Nonzero entries of column `j` as `(row, value)` pairs.
    pub fn col_support(&self, j: usize) -> Vec<(usize, Rat)> {
        (0..self.rows)
            .filter(|&i| !self.get(i, j).is_zero())
            .map(|i| (i, self.get(i, j).clone()))
            .collect()
    }

    pub fn rank(&self) -> usize {
        eliminate(self.sparse_rows(), self.cols, 0).pivots.len()
    }

    pub fn nullspace(&self) -> Nullspace {
        nullspace_sparse(self.sparse_rows(), self.cols)
    }

    /// Solves `self * x = rhs` exactly; free variables are set to zero.
    /// Returns `None` when the system is inconsistent.
    pub fn solve(&self, rhs: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(rhs.len(), self.rows);
        let mut sols = solve_sparse(self.sparse_rows(), self.cols, &[rhs.to_vec()]);
        sols.pop().unwrap()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let rhs: Vec<Vec<Rat>> = (0..n)
            .map(|j| {
                let mut e = vec![zero(); n];
                e[j] = one();
                e
            })
            .collect();
        let sols = solve_sparse(self.sparse_rows(), n, &rhs);
        if self.rank() != n {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for (j, sol) in sols.into_iter().enumerate() {
            for (i, v) in sol?.into_iter().enumerate() {
                inv.set(i, j, v);
            }
        }
        Some(inv)
    }

    fn sparse_rows(&self) -> Vec<SparseRow> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(j, v)| (j, v.clone()))
                    .collect()
            })
            .collect()
    }
}

/// A sparse row: sorted `(column, value)` pairs with nonzero values.
pub type SparseRow = Vec<(usize, Rat)>;

/// Nullspace basis in free-column echelon form: `basis[k]` has a `1` at
/// `free_cols[k]` and zeros at every other free column, so coordinates of a
/// vector in the span can be read off its free-column entries.
#[derive(Clone, Debug)]
pub struct Nullspace {
    pub basis: Vec<Vec<Rat>>,
    pub free_cols: Vec<usize>,
}

type IntRow = Vec<(usize, BigInt)>;

struct Echelon {
    /// Pivot rows in increasing pivot-column order, integer entries.
    rows: Vec<IntRow>,
    /// `pivots[k]` is the pivot column of `rows[k]`.
    pivots: Vec<usize>,
}

fn clear_denominators(row: &SparseRow) -> IntRow {
    if row.is_empty() {
        return Vec::new();
    }
    let mut lcm = BigInt::one();
    for (_, v) in row {
        lcm = lcm.lcm(v.denom());
    }
    let mut out: IntRow = row
        .iter()
        .map(|(j, v)| (*j, v.numer() * (&lcm / v.denom())))
        .collect();
    normalize_content(&mut out);
    out
}

/// Divides a row by the gcd of its entries and makes the leading entry positive.
fn normalize_content(row: &mut IntRow) {
    row.retain(|(_, v)| !v.is_zero());
    if row.is_empty() {
        return;
    }
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if row[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// `a*ca - b*cb` on sorted sparse rows, content-normalized.
fn combine(ca: &BigInt, a: &IntRow, cb: &BigInt, b: &IntRow) -> IntRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some((ja, va)), Some((jb, vb))) if ja == jb => {
                let v = va * ca - vb * cb;
                if !v.is_zero() {
                    out.push((*ja, v));
                }
                i += 1;
                j += 1;
            }
            (Some((ja, va)), Some((jb, _))) if ja < jb => {
                out.push((*ja, va * ca));
                i += 1;
            }
            (Some(_), Some((jb, vb))) => {
                out.push((*jb, -(vb * cb)));
                j += 1;
            }
            (Some((ja, va)), None) => {
                out.push((*ja, va * ca));
                i += 1;
            }
            (None, Some((jb, vb))) => {
                out.push((*jb, -(vb * cb)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    normalize_content(&mut out);
    out
}

/// Forward elimination. Columns `cols..cols + aug` are carried along as
/// augmented data and never pivoted on.
fn eliminate(rows: Vec<SparseRow>, cols: usize, aug: usize) -> Echelon {
    let _ = aug;
    let mut work: Vec<IntRow> = rows
        .iter()
        .map(clear_denominators)
        .filter(|r| !r.is_empty())
        .collect();
    let mut ech = Echelon {
        rows: Vec::new(),
        pivots: Vec::new(),
    };
    for c in 0..cols {
        let Some(pos) = work.iter().position(|r| r.first().map(|e| e.0) == Some(c)) else {
            continue;
        };
        let pivot = work.remove(pos);
        let p = pivot[0].1.clone();
        for row in work.iter_mut() {
            if row.first().map(|e| e.0) == Some(c) {
                let e = row[0].1.clone();
                *row = combine(&p, row, &e, &pivot);
            }
        }
        work.retain(|r| !r.is_empty());
        ech.rows.push(pivot);
        ech.pivots.push(c);
        if work.is_empty() {
            break;
        }
    }
    // Rows left over carry no pivot in 0..cols; keep them so solvers can
    // detect inconsistent augmented columns.
    for row in work {
        ech.rows.push(row);
        ech.pivots.push(usize::MAX);
    }
    ech
}

/// Rank of a sparse system over columns `0..cols`.
pub fn rank_sparse(rows: Vec<SparseRow>, cols: usize) -> usize {
    eliminate(rows, cols, 0).pivots.iter().filter(|&&p| p != usize::MAX).count()
}

/// Exact nullspace basis of the linear system given by sparse rows.
pub fn nullspace_sparse(rows: Vec<SparseRow>, cols: usize) -> Nullspace {
    let ech = eliminate(rows, cols, 0);
    let pivot_cols: Vec<usize> = ech
        .pivots
        .iter()
        .copied()
        .filter(|&p| p != usize::MAX)
        .collect();
    let is_pivot = {
        let mut flags = vec![false; cols];
        for &c in &pivot_cols {
            flags[c] = true;
        }
        flags
    };
    let free_cols: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
    let mut basis = Vec::with_capacity(free_cols.len());
    for &f in &free_cols {
        let mut v = vec![zero(); cols];
        v[f] = one();
        for (row, &c) in ech.rows.iter().zip(&ech.pivots).rev() {
            if c == usize::MAX {
                continue;
            }
            let mut s = zero();
            for (j, a) in row.iter().skip(1) {
                if !v[*j].is_zero() {
                    s += Rat::from_integer(a.clone()) * &v[*j];
                }
            }
            if s.is_zero() {
                v[c] = zero();
            } else {
                v[c] = -s / Rat::from_integer(row[0].1.clone());
            }
        }
        basis.push(v);
    }
    Nullspace { basis, free_cols }
}

/// Solves the sparse system for several right-hand sides at once.
/// Each returned entry is `None` when that right-hand side is inconsistent,
/// otherwise the unique solution with all free variables set to zero.
pub fn solve_sparse(
    rows: Vec<SparseRow>,
    cols: usize,
    rhs: &[Vec<Rat>],
) -> Vec<Option<Vec<Rat>>> {
    let k = rhs.len();
    let augmented: Vec<SparseRow> = rows
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            for (t, r) in rhs.iter().enumerate() {
                if !r[i].is_zero() {
                    row.push((cols + t, r[i].clone()));
                }
            }
            row
        })
        .collect();
    let ech = eliminate(augmented, cols, k);
    let mut out = Vec::with_capacity(k);
    for t in 0..k {
        let rhs_col = cols + t;
        // A pivot-free leftover row with a nonzero entry in this rhs column
        // certifies inconsistency.
        let inconsistent = ech
            .rows
            .iter()
            .zip(&ech.pivots)
            .any(|(row, &p)| p == usize::MAX && row.iter().any(|(j, _)| *j == rhs_col));
        if inconsistent {
            out.push(None);
            continue;
        }
        let mut x = vec![zero(); cols];
        for (row, &c) in ech.rows.iter().zip(&ech.pivots).rev() {
            if c == usize::MAX {
                continue;
            }
            let mut s = zero();
            for (j, a) in row.iter().skip(1) {
                if *j < cols {
                    if !x[*j].is_zero() {
                        s += Rat::from_integer(a.clone()) * &x[*j];
                    }
                } else if *j == rhs_col {
                    s -= Rat::from_integer(a.clone());
                }
            }
            if s.is_zero() {
                x[c] = zero();
            } else {
                x[c] = -s / Rat::from_integer(row[0].1.clone());
            }
        }
        out.push(Some(x));
    }
    out
}
