//! Dense matrices over `Q(zeta_N)` with exact elimination.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use super::{lcm, CycNumber};
use crate::error::{Error, Result};

/// A dense row-major matrix whose entries all live in `Q(zeta_N)` for one `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    order: u32,
    entries: Vec<CycNumber>,
}

impl ExactMatrix {
    /// Builds a matrix from row-major entries, lifting them to a common order.
    pub fn new(rows: usize, cols: usize, entries: Vec<CycNumber>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(
                "matrix must have positive size".into(),
            ));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        let order = entries.iter().map(CycNumber::order).fold(1, lcm);
        let entries = entries.into_iter().map(|e| e.lift(order)).collect();
        Ok(ExactMatrix {
            rows,
            cols,
            order,
            entries,
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        order: u32,
        mut f: impl FnMut(usize, usize) -> CycNumber,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j).lift(order));
            }
        }
        ExactMatrix {
            rows,
            cols,
            order,
            entries,
        }
    }

    /// Integer matrix over `Q(zeta_order)`.
    pub fn from_ints(rows: &[&[i64]], order: u32) -> Self {
        let cols = rows[0].len();
        Self::from_fn(rows.len(), cols, order, |i, j| {
            CycNumber::from_int(rows[i][j], order)
        })
    }

    pub fn zeros(rows: usize, cols: usize, order: u32) -> Self {
        Self::from_fn(rows, cols, order, |_, _| CycNumber::zero(order))
    }

    pub fn identity(n: usize, order: u32) -> Self {
        Self::scalar(n, &CycNumber::one(order))
    }

    pub fn scalar(n: usize, c: &CycNumber) -> Self {
        let order = c.order();
        Self::from_fn(n, n, order, |i, j| {
            if i == j {
                c.clone()
            } else {
                CycNumber::zero(order)
            }
        })
    }

    pub fn diagonal(diag: &[CycNumber]) -> Self {
        let order = diag.iter().map(CycNumber::order).fold(1, lcm);
        Self::from_fn(diag.len(), diag.len(), order, |i, j| {
            if i == j {
                diag[i].clone()
            } else {
                CycNumber::zero(order)
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[CycNumber] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &CycNumber {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycNumber) {
        let m = lcm(self.order, v.order());
        if m != self.order {
            *self = self.lift(m);
        }
        self.entries[i * self.cols + j] = v.lift(m);
    }

    pub fn row(&self, i: usize) -> &[CycNumber] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<CycNumber> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn lift(&self, order: u32) -> Self {
        if order == self.order {
            return self.clone();
        }
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            order,
            entries: self.entries.iter().map(|e| e.lift(order)).collect(),
        }
    }

    fn lifted_pair(&self, other: &Self) -> (Self, Self) {
        let m = lcm(self.order, other.order);
        (self.lift(m), other.lift(m))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.order, |i, j| {
            self.get(j, i).clone()
        })
    }

    pub fn scale(&self, c: &CycNumber) -> Self {
        let m = lcm(self.order, c.order());
        let c = c.lift(m);
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            order: m,
            entries: self.entries.iter().map(|e| &e.lift(m) * &c).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(CycNumber::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    /// `self - c I`.
    pub fn sub_scalar(&self, c: &CycNumber) -> Self {
        assert!(self.is_square());
        let m = lcm(self.order, c.order());
        let c = c.lift(m);
        let mut out = self.lift(m);
        for i in 0..self.rows {
            let k = i * self.cols + i;
            out.entries[k] = &out.entries[k] - &c;
        }
        out
    }

    pub fn mul_vec(&self, v: &[CycNumber]) -> Vec<CycNumber> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = CycNumber::zero(self.order);
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, e: u64) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(self.rows, self.order);
        let mut sq = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        acc
    }

    /// Places `blocks[i][j]` (all `n x n`) into an `(rn) x (rn)` matrix.
    pub fn from_blocks(blocks: &[Vec<ExactMatrix>]) -> Self {
        let n = blocks[0][0].rows;
        let r = blocks.len();
        let order = blocks.iter().flatten().map(|b| b.order).fold(1, lcm);
        Self::from_fn(r * n, blocks[0].len() * n, order, |i, j| {
            blocks[i / n][j / n].get(i % n, j % n).clone()
        })
    }

    /// Rank and a kernel basis in reduced echelon form.
    ///
    /// Forward elimination is fraction-free (Bareiss): each update
    /// `a_ij <- (p a_ij - a_ik a_kj) / p_prev` divides by the previous pivot.
    /// Pivots are the first nonzero entry of the column scanning rows
    /// top-to-bottom. A final pass scales pivots to one and clears above them.
    pub fn rank_kernel(&self) -> (usize, Vec<Vec<CycNumber>>) {
        let (rref, pivots) = self.rref();
        let rank = pivots.len();
        let mut kernel = Vec::with_capacity(self.cols - rank);
        let mut is_pivot = vec![None; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(r);
        }
        for free in (0..self.cols).filter(|&c| is_pivot[c].is_none()) {
            let mut v = vec![CycNumber::zero(self.order); self.cols];
            v[free] = CycNumber::one(self.order);
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -&rref[r][free];
            }
            kernel.push(v);
        }
        (rank, kernel)
    }

    pub fn rank(&self) -> usize {
        self.rref_rows(false).1.len()
    }

    /// Reduced row echelon form (nonzero rows) and pivot columns.
    pub fn rref(&self) -> (Vec<Vec<CycNumber>>, Vec<usize>) {
        self.rref_rows(true)
    }

    fn rref_rows(&self, reduce: bool) -> (Vec<Vec<CycNumber>>, Vec<usize>) {
        let mut a: Vec<Vec<CycNumber>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let pivots = bareiss_forward(&mut a, self.cols, self.order);
        a.truncate(pivots.len());
        if reduce {
            back_substitute(&mut a, &pivots);
        }
        (a, pivots)
    }

    pub fn kernel(&self) -> Vec<Vec<CycNumber>> {
        self.rank_kernel().1
    }

    /// Exact inverse via Gauss-Jordan on `[self | I]`.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "inverse of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut a: Vec<Vec<CycNumber>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend((0..n).map(|j| {
                    if i == j {
                        CycNumber::one(self.order)
                    } else {
                        CycNumber::zero(self.order)
                    }
                }));
                row
            })
            .collect();
        let pivots = bareiss_forward(&mut a, n, self.order);
        if pivots.len() < n {
            return Err(Error::SingularMatrix);
        }
        back_substitute(&mut a, &pivots);
        Ok(Self::from_fn(n, n, self.order, |i, j| a[i][n + j].clone()))
    }

    /// Determinant, read off the last Bareiss pivot.
    pub fn det(&self) -> CycNumber {
        assert!(self.is_square());
        let mut a: Vec<Vec<CycNumber>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let n = self.rows;
        let mut sign = false;
        let mut prev = CycNumber::one(self.order);
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return CycNumber::zero(self.order);
            };
            if p != k {
                a.swap(p, k);
                sign = !sign;
            }
            let prev_inv = prev.inv().unwrap();
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &(&(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j])) * &prev_inv;
                    a[i][j] = v;
                }
                a[i][k] = CycNumber::zero(self.order);
            }
            prev = a[k][k].clone();
        }
        if sign {
            -prev
        } else {
            prev
        }
    }

    pub fn trace(&self) -> CycNumber {
        let mut acc = CycNumber::zero(self.order);
        for i in 0..self.rows.min(self.cols) {
            acc = &acc + self.get(i, i);
        }
        acc
    }
}

/// Fraction-free forward elimination in place. Returns pivot columns; rows
/// `0..pivots.len()` hold the echelon form, the rest are zero.
fn bareiss_forward(a: &mut [Vec<CycNumber>], cols: usize, order: u32) -> Vec<usize> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut prev_inv = CycNumber::one(order);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let piv = &pivot_row[c];
        for row in bottom.iter_mut() {
            let f = std::mem::replace(&mut row[c], CycNumber::zero(order));
            for j in c + 1..row.len() {
                let scaled = piv * &row[j];
                let v = if f.is_zero() || pivot_row[j].is_zero() {
                    scaled
                } else {
                    &scaled - &(&f * &pivot_row[j])
                };
                row[j] = if prev_inv.is_one() { v } else { &v * &prev_inv };
            }
        }
        prev_inv = piv.inv().expect("pivot is nonzero");
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Scales pivots to one and clears the entries above them.
fn back_substitute(a: &mut [Vec<CycNumber>], pivots: &[usize]) {
    for (r, &c) in pivots.iter().enumerate().rev() {
        let inv = a[r][c].inv().expect("pivot is nonzero");
        if !inv.is_one() {
            for x in a[r].iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
        }
        let (above, rest) = a.split_at_mut(r);
        let pivot_row = &rest[0];
        for row in above.iter_mut() {
            let f = row[c].clone();
            if f.is_zero() {
                continue;
            }
            for (x, p) in row.iter_mut().zip(pivot_row) {
                if !p.is_zero() {
                    *x = &*x - &(&f * p);
                }
            }
        }
    }
}

impl Mul<&ExactMatrix> for &ExactMatrix {
    type Output = ExactMatrix;
    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        if self.order != rhs.order {
            let (a, b) = self.lifted_pair(rhs);
            return &a * &b;
        }
        let mut entries = vec![CycNumber::zero(self.order); self.rows * rhs.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let e = &mut entries[i * rhs.cols + j];
                        *e = &*e + &(a * b);
                    }
                }
            }
        }
        ExactMatrix {
            rows: self.rows,
            cols: rhs.cols,
            order: self.order,
            entries,
        }
    }
}

impl Add<&ExactMatrix> for &ExactMatrix {
    type Output = ExactMatrix;
    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let (a, b) = self.lifted_pair(rhs);
        let entries = a
            .entries
            .iter()
            .zip(&b.entries)
            .map(|(x, y)| x + y)
            .collect();
        ExactMatrix { entries, ..a }
    }
}

impl Sub<&ExactMatrix> for &ExactMatrix {
    type Output = ExactMatrix;
    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let (a, b) = self.lifted_pair(rhs);
        let entries = a
            .entries
            .iter()
            .zip(&b.entries)
            .map(|(x, y)| x - y)
            .collect();
        ExactMatrix { entries, ..a }
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Incrementally maintained basis of a subspace of `K^dim`, kept in reduced
/// echelon form with unit pivots.
#[derive(Clone, Debug)]
pub struct SpanBuilder {
    dim: usize,
    order: u32,
    rows: Vec<Vec<CycNumber>>,
    pivots: Vec<usize>,
}

impl SpanBuilder {
    pub fn new(dim: usize, order: u32) -> Self {
        SpanBuilder {
            dim,
            order,
            rows: vec![],
            pivots: vec![],
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[Vec<CycNumber>] {
        &self.rows
    }

    /// Reduces `v` against the current basis.
    pub fn reduce(&self, v: &[CycNumber]) -> Vec<CycNumber> {
        let mut v: Vec<CycNumber> = v
            .iter()
            .map(|x| x.lift(lcm(x.order(), self.order)))
            .collect();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let f = v[p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = &*x - &(&f * r);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[CycNumber]) -> bool {
        self.reduce(v).iter().all(CycNumber::is_zero)
    }

    /// Adds `v`; returns `true` if the span grew.
    pub fn insert(&mut self, v: &[CycNumber]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let order = v[p].order();
        if order != self.order {
            self.order = lcm(order, self.order);
        }
        let inv = v[p].inv().unwrap();
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for row in self.rows.iter_mut() {
            let f = row[p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, r) in row.iter_mut().zip(&v) {
                if !r.is_zero() {
                    *x = &*x - &(&f * r);
                }
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(pos, v);
        self.pivots.insert(pos, p);
        true
    }
}
