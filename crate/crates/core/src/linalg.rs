//! Exact linear algebra over a prime field `F_p`.
//!
//! Dense [`Matrix`] values carry the row-reduction services (RREF, kernels,
//! quotients). Module actions are stored as column-oriented [`SparseMatrix`]
//! values, because the generator actions on free modules are 0/1 selection
//! matrices and every derived computation applies them to many vectors.
//!
//! Every [`Subspace`] is kept in reduced row echelon form with ascending
//! pivots, so two equal subspaces compare equal structurally.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("field must be prime (got {0}; primes below 2^31 are supported)")]
    NotPrime(u64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("field mismatch: F_{0} vs F_{1}")]
    FieldMismatch(u32, u32),
    #[error("closure needs at least one seed subspace to fix the ambient dimension")]
    NoSeeds,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The prime field `F_p` with `p < 2^31`, so that products of two canonical
/// representatives fit in a `u64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeField {
    p: u32,
}

impl TryFrom<u64> for PrimeField {
    type Error = LinalgError;

    fn try_from(p: u64) -> Result<Self, Self::Error> {
        PrimeField::new(p)
    }
}

impl From<PrimeField> for u64 {
    fn from(f: PrimeField) -> u64 {
        f.p as u64
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, LinalgError> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(LinalgError::NotPrime(p));
        }
        Ok(PrimeField { p: p as u32 })
    }

    #[inline]
    pub fn modulus(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        if s >= self.p as u64 {
            (s - self.p as u64) as u32
        } else {
            s as u32
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(self, mut a: u32, mut e: u64) -> u32 {
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero in {self}");
        self.pow(a, self.p as u64 - 2)
    }

    /// `y += c * x`, skipping zero entries of `x`.
    #[inline]
    pub fn axpy(self, y: &mut [u32], c: u32, x: &[u32]) {
        debug_assert_eq!(y.len(), x.len());
        if c == 0 {
            return;
        }
        let p = self.p as u64;
        let c = c as u64;
        for (a, &b) in y.iter_mut().zip(x) {
            if b != 0 {
                *a = ((*a as u64 + c * b as u64) % p) as u32;
            }
        }
    }

    pub fn scale(self, v: &mut [u32], c: u32) {
        for a in v.iter_mut() {
            *a = self.mul(*a, c);
        }
    }
}

/// Anything that acts linearly on coordinate vectors.
pub trait LinearMap {
    fn field(&self) -> PrimeField;
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    fn apply(&self, x: &[u32]) -> Vec<u32>;
}

impl<T: LinearMap + ?Sized> LinearMap for &T {
    fn field(&self) -> PrimeField {
        (**self).field()
    }
    fn nrows(&self) -> usize {
        (**self).nrows()
    }
    fn ncols(&self) -> usize {
        (**self).ncols()
    }
    fn apply(&self, x: &[u32]) -> Vec<u32> {
        (**self).apply(x)
    }
}

/// Dense row-major matrix over `F_p`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<{}>{}x{}", self.field, self.rows, self.cols)?;
        f.debug_list().entries((0..self.rows).map(|r| self.row(r))).finish()
    }
}

impl Matrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from signed integer rows, reducing each entry mod p.
    /// Panics on ragged input.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r.iter().map(|&x| field.reduce(x)));
        }
        Matrix {
            field,
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Builds a matrix from already-reduced row vectors of length `cols`.
    pub fn from_row_vecs(field: PrimeField, cols: usize, rows: Vec<Vec<u32>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        Matrix {
            field,
            rows: n,
            cols,
            data,
        }
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(field: PrimeField, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x;
            }
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, x: u32) {
        self.data[r * self.cols + c] = x;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [u32] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    /// `self * rhs`. Panics on shape mismatch.
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a != 0 {
                    self.field.axpy(out_row, a, rhs.row(k));
                }
            }
        }
        out
    }

    /// Rows of `self` restricted to the given row indices, in that order.
    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let rows = idx.iter().map(|&r| self.row(r).to_vec()).collect();
        Matrix::from_row_vecs(self.field, self.cols, rows)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut lead = 0usize;
        for c in 0..self.cols {
            if lead == self.rows {
                break;
            }
            let Some(pr) = (lead..self.rows).find(|&r| self.get(r, c) != 0) else {
                continue;
            };
            if pr != lead {
                for k in 0..self.cols {
                    self.data.swap(pr * self.cols + k, lead * self.cols + k);
                }
            }
            let inv = f.inv(self.get(lead, c));
            f.scale(self.row_mut(lead), inv);
            let pivot_row = self.row(lead).to_vec();
            for r in 0..self.rows {
                if r != lead {
                    let x = self.get(r, c);
                    if x != 0 {
                        f.axpy(self.row_mut(r), f.neg(x), &pivot_row);
                    }
                }
            }
            pivots.push(c);
            lead += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut b = SpanBuilder::new(self.field, self.cols);
        for r in 0..self.rows {
            b.insert(self.row(r).to_vec());
        }
        b.rank()
    }

    /// Null space `{v : self * v = 0}` in canonical RREF basis.
    pub fn kernel_basis(&self) -> Subspace {
        let f = self.field;
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut vecs = Vec::with_capacity(self.cols - pivots.len());
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (j, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(r.get(j, free));
            }
            vecs.push(v);
        }
        Subspace::span(f, self.cols, vecs)
    }

    /// Column space as a subspace of `F_p^rows`.
    pub fn image(&self) -> Subspace {
        let t = self.transpose();
        Subspace::span(self.field, self.rows, t.to_rows())
    }
}

impl LinearMap for Matrix {
    fn field(&self) -> PrimeField {
        self.field
    }
    fn nrows(&self) -> usize {
        self.rows
    }
    fn ncols(&self) -> usize {
        self.cols
    }
    fn apply(&self, x: &[u32]) -> Vec<u32> {
        assert_eq!(x.len(), self.cols);
        let p = self.field.p as u64;
        (0..self.rows)
            .map(|r| {
                let mut acc = 0u64;
                for (&a, &b) in self.row(r).iter().zip(x) {
                    if a != 0 && b != 0 {
                        acc = (acc + a as u64 * b as u64) % p;
                    }
                }
                acc as u32
            })
            .collect()
    }
}

/// Column-oriented sparse matrix: `columns[j]` lists the nonzero entries of
/// the image of the `j`-th basis vector as `(row, value)` pairs, ascending by
/// row.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparseMatrix {
    field: PrimeField,
    rows: usize,
    columns: Vec<Vec<(usize, u32)>>,
}

impl SparseMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        SparseMatrix {
            field,
            rows,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        SparseMatrix {
            field,
            rows: n,
            columns: (0..n).map(|j| vec![(j, 1)]).collect(),
        }
    }

    /// The 0/1 matrix sending basis vector `j` to basis vector `targets[j]`.
    pub fn selection(field: PrimeField, rows: usize, targets: &[usize]) -> Self {
        SparseMatrix {
            field,
            rows,
            columns: targets
                .iter()
                .map(|&t| {
                    assert!(t < rows);
                    vec![(t, 1)]
                })
                .collect(),
        }
    }

    pub fn from_dense_columns(field: PrimeField, rows: usize, columns: Vec<Vec<u32>>) -> Self {
        let columns = columns
            .into_iter()
            .map(|c| {
                assert_eq!(c.len(), rows);
                c.into_iter().enumerate().filter(|&(_, x)| x != 0).collect()
            })
            .collect();
        SparseMatrix {
            field,
            rows,
            columns,
        }
    }

    pub fn from_dense(m: &Matrix) -> Self {
        let mut columns = vec![Vec::new(); m.cols()];
        for r in 0..m.rows() {
            for (c, &x) in m.row(r).iter().enumerate() {
                if x != 0 {
                    columns[c].push((r, x));
                }
            }
        }
        SparseMatrix {
            field: m.field(),
            rows: m.rows(),
            columns,
        }
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.rows, self.columns.len());
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, x) in col {
                m.set(r, c, x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[(usize, u32)] {
        &self.columns[j]
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// `out += self * x`, touching only nonzero entries of `x`.
    pub fn apply_add(&self, x: &[u32], out: &mut [u32]) {
        assert_eq!(x.len(), self.cols());
        assert_eq!(out.len(), self.rows);
        let f = self.field;
        for (j, &xj) in x.iter().enumerate() {
            if xj == 0 {
                continue;
            }
            for &(r, a) in &self.columns[j] {
                out[r] = f.add(out[r], f.mul(a, xj));
            }
        }
    }

    /// `self * rhs` (apply `rhs` first).
    pub fn compose(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols(), rhs.rows, "sparse product shape mismatch");
        let f = self.field;
        let mut acc = vec![0u32; self.rows];
        let columns = rhs
            .columns
            .iter()
            .map(|col| {
                for &(k, b) in col {
                    for &(r, a) in &self.columns[k] {
                        acc[r] = f.add(acc[r], f.mul(a, b));
                    }
                }
                let mut out: Vec<(usize, u32)> = Vec::new();
                for (r, x) in acc.iter_mut().enumerate() {
                    if *x != 0 {
                        out.push((r, *x));
                        *x = 0;
                    }
                }
                out
            })
            .collect();
        SparseMatrix {
            field: f,
            rows: self.rows,
            columns,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols()
            && self
                .columns
                .iter()
                .enumerate()
                .all(|(j, c)| c.as_slice() == [(j, 1)])
    }

    /// Block-diagonal sum.
    pub fn block_diag(field: PrimeField, blocks: &[&SparseMatrix]) -> SparseMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut columns = Vec::new();
        let mut offset = 0;
        for b in blocks {
            for col in &b.columns {
                columns.push(col.iter().map(|&(r, x)| (r + offset, x)).collect());
            }
            offset += b.rows;
        }
        SparseMatrix {
            field,
            rows,
            columns,
        }
    }
}

impl LinearMap for SparseMatrix {
    fn field(&self) -> PrimeField {
        self.field
    }
    fn nrows(&self) -> usize {
        self.rows
    }
    fn ncols(&self) -> usize {
        self.columns.len()
    }
    fn apply(&self, x: &[u32]) -> Vec<u32> {
        let mut out = vec![0; self.rows];
        self.apply_add(x, &mut out);
        out
    }
}

/// Incrementally maintained fully reduced row basis.
#[derive(Clone, Debug)]
pub struct SpanBuilder {
    field: PrimeField,
    dim: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl SpanBuilder {
    pub fn new(field: PrimeField, dim: usize) -> Self {
        SpanBuilder {
            field,
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_subspace(s: &Subspace) -> Self {
        SpanBuilder {
            field: s.field,
            dim: s.ambient_dim,
            rows: s.basis.to_rows(),
            pivots: s.pivots.clone(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    /// Reduces `v` modulo the current span in place.
    pub fn reduce(&self, v: &mut [u32]) {
        let f = self.field;
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let x = v[c];
            if x != 0 {
                f.axpy(v, f.neg(x), row);
            }
        }
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<u32>) -> bool {
        assert_eq!(v.len(), self.dim, "vector length does not match span dimension");
        if self.is_full() {
            return false;
        }
        self.reduce(&mut v);
        let Some(c) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let f = self.field;
        let inv = f.inv(v[c]);
        f.scale(&mut v, inv);
        for row in &mut self.rows {
            let x = row[c];
            if x != 0 {
                f.axpy(row, f.neg(x), &v);
            }
        }
        self.rows.push(v);
        self.pivots.push(c);
        true
    }

    pub fn finish(self) -> Subspace {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&k| self.pivots[k]);
        let pivots = order.iter().map(|&k| self.pivots[k]).collect();
        let mut rows: Vec<Option<Vec<u32>>> = self.rows.into_iter().map(Some).collect();
        let rows = order.iter().map(|&k| rows[k].take().unwrap()).collect();
        Subspace {
            field: self.field,
            ambient_dim: self.dim,
            basis: Matrix::from_row_vecs(self.field, self.dim, rows),
            pivots,
        }
    }
}

/// A subspace of `F_p^d`, stored as an RREF basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: PrimeField,
    ambient_dim: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: PrimeField, dim: usize) -> Self {
        Subspace {
            field,
            ambient_dim: dim,
            basis: Matrix::zeros(field, 0, dim),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: PrimeField, dim: usize) -> Self {
        Subspace {
            field,
            ambient_dim: dim,
            basis: Matrix::identity(field, dim),
            pivots: (0..dim).collect(),
        }
    }

    pub fn span<I: IntoIterator<Item = Vec<u32>>>(field: PrimeField, dim: usize, vectors: I) -> Self {
        let mut b = SpanBuilder::new(field, dim);
        for v in vectors {
            b.insert(v);
        }
        b.finish()
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_zero(&self) -> bool {
        self.pivots.is_empty()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vector(&self, k: usize) -> &[u32] {
        self.basis.row(k)
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn reduce(&self, v: &mut [u32]) {
        let f = self.field;
        for (k, &c) in self.pivots.iter().enumerate() {
            let x = v[c];
            if x != 0 {
                f.axpy(v, f.neg(x), self.basis.row(k));
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Coordinates of `v` in the RREF basis; `None` when `v` is outside.
    pub fn coordinates(&self, v: &[u32]) -> Option<Vec<u32>> {
        self.contains(v)
            .then(|| self.pivots.iter().map(|&c| v[c]).collect())
    }

    /// Coordinates of a vector already known to lie in the subspace.
    pub fn coordinates_unchecked(&self, v: &[u32]) -> Vec<u32> {
        self.pivots.iter().map(|&c| v[c]).collect()
    }

    /// Linear combination of basis vectors.
    pub fn combine(&self, coeffs: &[u32]) -> Vec<u32> {
        assert_eq!(coeffs.len(), self.dim());
        let mut v = vec![0; self.ambient_dim];
        for (k, &c) in coeffs.iter().enumerate() {
            self.field.axpy(&mut v, c, self.basis.row(k));
        }
        v
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut b = SpanBuilder::from_subspace(self);
        for r in 0..other.dim() {
            b.insert(other.basis.row(r).to_vec());
        }
        b.finish()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        (0..self.dim()).all(|r| other.contains(self.basis.row(r)))
    }

    /// Non-pivot coordinates, ascending.
    pub fn complement(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient_dim];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient_dim).filter(|&c| !is_pivot[c]).collect()
    }

    /// Image of `v` in the quotient by this subspace, in complement
    /// coordinates.
    pub fn project(&self, v: &[u32]) -> Vec<u32> {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        self.complement().into_iter().map(|c| w[c]).collect()
    }

    pub fn quotient_data(&self) -> QuotientData {
        let f = self.field;
        let complement = self.complement();
        let mut proj = Matrix::zeros(f, complement.len(), self.ambient_dim);
        for (k, &c) in complement.iter().enumerate() {
            proj.set(k, c, 1);
            for (j, &p) in self.pivots.iter().enumerate() {
                proj.set(k, p, f.neg(self.basis.get(j, c)));
            }
        }
        QuotientData { proj, complement }
    }
}

/// Canonical projection onto the quotient by a subspace, realized on the
/// non-pivot coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientData {
    pub proj: Matrix,
    pub complement: Vec<usize>,
}

impl QuotientData {
    /// The vector of the ambient space whose complement coordinates are `q`
    /// and whose pivot coordinates vanish.
    pub fn lift(&self, q: &[u32]) -> Vec<u32> {
        let mut v = vec![0; self.proj.cols()];
        for (&c, &x) in self.complement.iter().zip(q) {
            v[c] = x;
        }
        v
    }
}

/// The smallest subspace containing every seed and invariant under every map.
///
/// Maps are applied breadth-first in the order supplied, starting from the
/// seed basis vectors, until no new direction appears.
pub fn sum_and_close<M: LinearMap>(seeds: &[Subspace], maps: &[M]) -> Result<Subspace, LinalgError> {
    let Some(first) = seeds.first() else {
        return Err(LinalgError::NoSeeds);
    };
    let field = first.field;
    let dim = first.ambient_dim;
    for s in seeds {
        if s.ambient_dim != dim {
            return Err(LinalgError::DimensionMismatch {
                expected: dim,
                found: s.ambient_dim,
            });
        }
        if s.field != field {
            return Err(LinalgError::FieldMismatch(field.p, s.field.p));
        }
    }
    for m in maps {
        if m.nrows() != dim || m.ncols() != dim {
            return Err(LinalgError::DimensionMismatch {
                expected: dim,
                found: if m.nrows() != dim { m.nrows() } else { m.ncols() },
            });
        }
    }
    let mut span = SpanBuilder::new(field, dim);
    let mut queue = VecDeque::new();
    for s in seeds {
        for r in 0..s.dim() {
            let v = s.basis_vector(r).to_vec();
            if span.insert(v.clone()) {
                queue.push_back(v);
            }
        }
    }
    close_queue(&mut span, &mut queue, maps);
    Ok(span.finish())
}

/// Continues a breadth-first closure: every vector in `queue` is pushed
/// through every map and new directions are queued in turn.
pub(crate) fn close_queue<M: LinearMap>(span: &mut SpanBuilder, queue: &mut VecDeque<Vec<u32>>, maps: &[M]) {
    while let Some(v) = queue.pop_front() {
        if span.is_full() {
            break;
        }
        for m in maps {
            let w = m.apply(&v);
            if span.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
}
