//! Exact rational linear algebra.
//!
//! Everything here works over arbitrary-precision rationals, so results are
//! exact and bit-for-bit reproducible. Subspaces are always stored by their
//! reduced row echelon basis, which makes equality of subspaces a plain
//! comparison of canonical forms.
//!
//! Elimination runs on sparse rows internally: the matrices produced by the
//! cobar and comodule computations are large but very sparse, and fill-in
//! stays confined to the connected blocks of the matrix.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Sorted `(column, value)` pairs with no stored zeros.
pub type SparseRow = Vec<(usize, Rational)>;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Formats a rational as `p` or `p/q`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p`, `-p` or `p/q` exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    match text.split_once('/') {
        None => text.parse::<BigInt>().map(Rational::from_integer).map_err(|_| bad()),
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {text:?}")));
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Rational::one();
        }
        m
    }

    /// Builds a matrix from explicit rows; every row must have `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(Self {
            rows: n,
            cols,
            entries,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged integer matrix");
                r.iter().map(|&x| rat(x)).collect()
            })
            .collect();
        Self::from_rows(cols, data).expect("checked shape")
    }

    pub(crate) fn from_sparse_rows(cols: usize, rows: &[SparseRow]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            for (c, v) in row {
                m.entries[r * cols + c] = v.clone();
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

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rational) {
        self.entries[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.entries[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let slot = &mut out.entries[r * other.cols + c];
                        *slot += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let nz: Vec<usize> = (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = Rational::zero();
                for &c in &nz {
                    let a = self.get(r, c);
                    if !a.is_zero() {
                        acc += a * &v[c];
                    }
                }
                acc
            })
            .collect())
    }

    /// Kronecker product `self ⊗ other`; row `(i, k)` maps to `i * other.rows + k`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.entries[(i * other.rows + k) * cols + j * other.cols + l] = a * b;
                        }
                    }
                }
            }
        }
        out
    }

    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    pub(crate) fn sparse_rows(&self) -> Vec<SparseRow> {
        (0..self.rows).map(|r| to_sparse(self.row(r))).collect()
    }

    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new(self.cols);
        for row in self.sparse_rows() {
            ech.insert(row);
        }
        ech.rank()
    }

    /// Inverse of a square matrix, or `None` when it is singular.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut ech = Echelon::new(2 * n);
        for (r, mut row) in self.sparse_rows().into_iter().enumerate() {
            row.push((n + r, Rational::one()));
            ech.insert(row);
        }
        let reduced = ech.into_rref();
        if reduced.len() != n || reduced.iter().enumerate().any(|(i, r)| r[0].0 != i) {
            return None;
        }
        let right: Vec<SparseRow> = reduced
            .into_iter()
            .map(|r| r.into_iter().filter(|(c, _)| *c >= n).map(|(c, v)| (c - n, v)).collect())
            .collect();
        Some(Matrix::from_sparse_rows(n, &right))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(format_rational).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

pub(crate) fn to_sparse(v: &[Rational]) -> SparseRow {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub(crate) fn to_dense(len: usize, row: &SparseRow) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); len];
    for (c, x) in row {
        v[*c] = x.clone();
    }
    v
}

/// `row - factor * other`, both sorted.
fn axpy(row: &SparseRow, factor: &Rational, other: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < other.len() {
        let take_left = j >= other.len() || (i < row.len() && row[i].0 < other[j].0);
        let take_right = i >= row.len() || (j < other.len() && other[j].0 < row[i].0);
        if take_left {
            out.push(row[i].clone());
            i += 1;
        } else if take_right {
            out.push((other[j].0, -(factor * &other[j].1)));
            j += 1;
        } else {
            let v = &row[i].1 - factor * &other[j].1;
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incremental Gauss-Jordan elimination on sparse rows.
pub(crate) struct Echelon {
    cols: usize,
    pivots: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub(crate) fn new(cols: usize) -> Self {
        Self {
            cols,
            pivots: BTreeMap::new(),
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against every stored pivot, scanning columns left to right.
    pub(crate) fn reduce(&self, mut row: SparseRow) -> SparseRow {
        let mut pos = 0;
        while pos < row.len() {
            let col = row[pos].0;
            match self.pivots.get(&col) {
                Some(pivot) => {
                    let factor = row[pos].1.clone();
                    row = axpy(&row, &factor, pivot);
                    // entries before `pos` are untouched: the pivot row starts at `col`
                }
                None => pos += 1,
            }
        }
        row
    }

    /// Adds a row; returns false when it was already in the span.
    pub(crate) fn insert(&mut self, row: SparseRow) -> bool {
        debug_assert!(row.iter().all(|(c, _)| *c < self.cols));
        let row = self.reduce(row);
        let Some((lead, lead_val)) = row.first().cloned() else {
            return false;
        };
        let inv = lead_val.recip();
        let row: SparseRow = row.into_iter().map(|(c, v)| (c, v * &inv)).collect();
        self.pivots.insert(lead, row);
        true
    }

    /// Finishes back-substitution and returns the reduced rows by pivot column.
    pub(crate) fn into_rref(self) -> Vec<SparseRow> {
        let mut rows: Vec<(usize, SparseRow)> = self.pivots.into_iter().collect();
        for k in (0..rows.len()).rev() {
            let (pcol, prow) = (rows[k].0, rows[k].1.clone());
            for (_, row) in rows.iter_mut().take(k) {
                if let Ok(pos) = row.binary_search_by_key(&pcol, |(c, _)| *c) {
                    let factor = row[pos].1.clone();
                    *row = axpy(row, &factor, &prow);
                }
            }
        }
        rows.into_iter().map(|(_, r)| r).collect()
    }
}

fn rref_sparse(cols: usize, rows: impl IntoIterator<Item = SparseRow>) -> Vec<SparseRow> {
    let mut ech = Echelon::new(cols);
    for row in rows {
        ech.insert(row);
    }
    ech.into_rref()
}

/// Kernel of the map whose matrix has the given sparse rows.
pub(crate) fn kernel_sparse(cols: usize, rows: impl IntoIterator<Item = SparseRow>) -> Subspace {
    let rref = rref_sparse(cols, rows);
    let pivot_cols: Vec<usize> = rref.iter().map(|r| r[0].0).collect();
    let mut is_pivot = vec![false; cols];
    for &p in &pivot_cols {
        is_pivot[p] = true;
    }
    // column -> list of (pivot column, entry) over rref rows
    let mut by_free: BTreeMap<usize, Vec<(usize, Rational)>> = BTreeMap::new();
    for row in &rref {
        let p = row[0].0;
        for (c, v) in &row[1..] {
            by_free.entry(*c).or_default().push((p, v.clone()));
        }
    }
    let basis = (0..cols).filter(|&c| !is_pivot[c]).map(|f| {
        let mut v: SparseRow = by_free
            .remove(&f)
            .unwrap_or_default()
            .into_iter()
            .map(|(p, x)| (p, -x))
            .collect();
        v.push((f, Rational::one()));
        v.sort_by_key(|(c, _)| *c);
        v
    });
    Subspace::from_sparse_spanning(cols, basis)
}

/// Reduced row echelon form; zero rows are dropped and the row count is kept
/// by padding with zero rows at the bottom.
pub fn rref(m: &Matrix) -> Matrix {
    let reduced = rref_sparse(m.cols, m.sparse_rows());
    let mut out = Matrix::from_sparse_rows(m.cols, &reduced);
    let pad = m.rows - reduced.len();
    out.rows += pad;
    out.entries.extend(std::iter::repeat_with(Rational::zero).take(pad * m.cols));
    out
}

/// Right null space `{v : m v = 0}`.
pub fn kernel(m: &Matrix) -> Subspace {
    kernel_sparse(m.cols, m.sparse_rows())
}

/// Column space of `m`.
pub fn image(m: &Matrix) -> Subspace {
    Subspace::from_sparse_spanning(m.rows, m.transpose().sparse_rows())
}

/// Solves `m x = rhs`. Returns a particular solution together with the kernel,
/// or `None` when the system is inconsistent.
pub fn solve(m: &Matrix, rhs: &[Rational]) -> Result<Option<(Vec<Rational>, Subspace)>> {
    if rhs.len() != m.rows {
        return Err(Error::DimensionMismatch {
            expected: m.rows,
            found: rhs.len(),
        });
    }
    let rows = (0..m.rows).map(|r| {
        let mut row = to_sparse(m.row(r));
        if !rhs[r].is_zero() {
            row.push((m.cols, rhs[r].clone()));
        }
        row
    });
    Ok(solve_sparse(m.cols, rows))
}

/// Sparse variant of [`solve`]: the right-hand side lives in column `cols`.
pub(crate) fn solve_sparse(
    cols: usize,
    augmented: impl IntoIterator<Item = SparseRow>,
) -> Option<(Vec<Rational>, Subspace)> {
    let rows: Vec<SparseRow> = augmented.into_iter().collect();
    let reduced = rref_sparse(cols + 1, rows.iter().cloned());
    let mut x = vec![Rational::zero(); cols];
    for row in &reduced {
        let lead = row[0].0;
        if lead == cols {
            return None;
        }
        if let Some((c, v)) = row.last() {
            if *c == cols {
                x[lead] = v.clone();
            }
        }
    }
    let homogeneous = rows.into_iter().map(|mut r| {
        if r.last().is_some_and(|(c, _)| *c == cols) {
            r.pop();
        }
        r
    });
    Some((x, kernel_sparse(cols, homogeneous)))
}

/// A linear subspace of `k^n`, stored by its canonical (reduced echelon) basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Matrix::zeros(0, ambient_dim),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Matrix::identity(ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Span of the given vectors.
    pub fn span(ambient_dim: usize, vectors: &[Vec<Rational>]) -> Result<Self> {
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: v.len(),
                });
            }
        }
        Ok(Self::from_sparse_spanning(
            ambient_dim,
            vectors.iter().map(|v| to_sparse(v)),
        ))
    }

    /// Row space of `m`.
    pub fn row_space(m: &Matrix) -> Self {
        Self::from_sparse_spanning(m.cols, m.sparse_rows())
    }

    pub(crate) fn from_sparse_spanning(
        ambient_dim: usize,
        rows: impl IntoIterator<Item = SparseRow>,
    ) -> Self {
        let reduced = rref_sparse(ambient_dim, rows);
        let pivots = reduced.iter().map(|r| r[0].0).collect();
        Self {
            ambient_dim,
            basis: Matrix::from_sparse_rows(ambient_dim, &reduced),
            pivots,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vector(&self, i: usize) -> &[Rational] {
        self.basis.row(i)
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub(crate) fn sparse_basis(&self) -> Vec<SparseRow> {
        self.basis.sparse_rows()
    }

    fn check_ambient(&self, n: usize) -> Result<()> {
        if n != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: n,
            });
        }
        Ok(())
    }

    /// Coordinates of `v` in the canonical basis, or `None` when `v` lies
    /// outside the subspace.
    pub fn membership(&self, v: &[Rational]) -> Result<Option<Vec<Rational>>> {
        self.check_ambient(v.len())?;
        Ok(self.coordinates_sparse(&to_sparse(v)))
    }

    /// In an echelon basis the coordinates are read off at the pivots and
    /// then verified by recombination.
    pub(crate) fn coordinates_sparse(&self, v: &SparseRow) -> Option<Vec<Rational>> {
        let coords: Vec<Rational> = self
            .pivots
            .iter()
            .map(|p| {
                v.binary_search_by_key(p, |(c, _)| *c)
                    .map_or_else(|_| Rational::zero(), |i| v[i].1.clone())
            })
            .collect();
        let mut rest = v.clone();
        for (i, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                rest = axpy(&rest, c, &to_sparse(self.basis.row(i)));
            }
        }
        rest.is_empty().then_some(coords)
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool> {
        Ok(self.membership(v)?.is_some())
    }

    /// Linear combination of the basis with the given coordinates.
    pub fn combine(&self, coords: &[Rational]) -> Result<Vec<Rational>> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: coords.len(),
            });
        }
        self.basis.transpose().mul_vec(coords)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        other.check_ambient(self.ambient_dim)?;
        Ok(self
            .sparse_basis()
            .iter()
            .all(|row| other.coordinates_sparse(row).is_some()))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other.ambient_dim)?;
        Ok(Self::from_sparse_spanning(
            self.ambient_dim,
            self.sparse_basis().into_iter().chain(other.sparse_basis()),
        ))
    }

    /// `self ∩ other`, from the kernel of `[A; -B]^T`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other.ambient_dim)?;
        let (a, b) = (self.dim(), other.dim());
        if a == 0 || b == 0 {
            return Ok(Subspace::zero(self.ambient_dim));
        }
        // one equation per ambient coordinate, unknowns (x, y)
        let mut eqs: Vec<SparseRow> = vec![Vec::new(); self.ambient_dim];
        for i in 0..a {
            for (c, v) in to_sparse(self.basis.row(i)) {
                eqs[c].push((i, v));
            }
        }
        for j in 0..b {
            for (c, v) in to_sparse(other.basis.row(j)) {
                eqs[c].push((a + j, -v));
            }
        }
        let ker = kernel_sparse(a + b, eqs);
        let vectors = (0..ker.dim()).map(|k| {
            let coeffs = &ker.basis.row(k)[..a];
            let mut acc = SparseRow::new();
            for (i, c) in coeffs.iter().enumerate() {
                if !c.is_zero() {
                    acc = axpy(&acc, &-c, &to_sparse(self.basis.row(i)));
                }
            }
            acc
        });
        Ok(Self::from_sparse_spanning(self.ambient_dim, vectors))
    }

    /// Linear functionals vanishing on the subspace, as a subspace of the dual.
    pub fn annihilator(&self) -> Subspace {
        kernel_sparse(self.ambient_dim, self.sparse_basis())
    }

    /// Image of the subspace under `m`.
    pub fn map(&self, m: &Matrix) -> Result<Subspace> {
        if m.cols() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: m.cols(),
            });
        }
        let images: Result<Vec<Vec<Rational>>> =
            (0..self.dim()).map(|i| m.mul_vec(self.basis.row(i))).collect();
        Subspace::span(m.rows(), &images?)
    }

    /// Canonical complement of `sub` inside `self`: basis rows of `self`
    /// reduced modulo `sub`, brought to echelon form.
    pub fn complement_of(&self, sub: &Subspace) -> Result<Subspace> {
        sub.check_ambient(self.ambient_dim)?;
        let mut ech = Echelon::new(self.ambient_dim);
        for row in sub.sparse_basis() {
            ech.insert(row);
        }
        let reduced = self.sparse_basis().into_iter().map(|r| ech.reduce(r));
        let comp = Self::from_sparse_spanning(self.ambient_dim, reduced);
        if comp.dim() + sub.dim() != self.dim() {
            return Err(Error::Consistency(
                "complement requested for a non-nested pair of subspaces".into(),
            ));
        }
        Ok(comp)
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace(dim {} in {}) {:?}",
            self.dim(),
            self.ambient_dim,
            self.basis
        )
    }
}

/// A quotient `Z / B` with canonical representatives for the classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    pub numerator: Subspace,
    pub denominator: Subspace,
    pub representatives: Subspace,
}

impl Quotient {
    pub fn new(numerator: Subspace, denominator: Subspace) -> Result<Self> {
        let representatives = numerator.complement_of(&denominator)?;
        Ok(Self {
            numerator,
            denominator,
            representatives,
        })
    }

    pub fn dim(&self) -> usize {
        self.representatives.dim()
    }

    /// Coordinates of the class of `v`; `None` when `v` is not in the numerator.
    pub fn class_coordinates(&self, v: &[Rational]) -> Result<Option<Vec<Rational>>> {
        self.numerator.check_ambient(v.len())?;
        Ok(self.class_coordinates_sparse(&to_sparse(v)))
    }

    pub(crate) fn class_coordinates_sparse(&self, v: &SparseRow) -> Option<Vec<Rational>> {
        // reduce modulo the denominator's echelon basis
        let mut rest = v.clone();
        for (i, p) in self.denominator.pivots.iter().enumerate() {
            if let Ok(pos) = rest.binary_search_by_key(p, |(c, _)| *c) {
                let f = rest[pos].1.clone();
                rest = axpy(&rest, &f, &to_sparse(self.denominator.basis.row(i)));
            }
        }
        self.representatives.coordinates_sparse(&rest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_i64(rows)
    }

    #[test]
    fn inverse_cases() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(inv, m(&[&[1, -1], &[-1, 2]]));
        assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(2));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).inverse(), None);
        assert_eq!(Matrix::zeros(2, 3).inverse(), None);
    }

    #[test]
    fn rref_identity_and_rank_one() {
        assert_eq!(rref(&Matrix::identity(2)), Matrix::identity(2));
        assert_eq!(rref(&m(&[&[2, 4], &[1, 2]])), m(&[&[1, 2], &[0, 0]]));
    }

    #[test]
    fn kernel_basic_cases() {
        assert_eq!(kernel(&Matrix::zeros(3, 3)), Subspace::full(3));
        assert_eq!(kernel(&Matrix::identity(3)).dim(), 0);
        let k = kernel(&m(&[&[1, 1]]));
        assert_eq!(k.dim(), 1);
        assert_eq!(k.basis(), &m(&[&[1, -1]]));
    }

    #[test]
    fn image_basic_cases() {
        assert_eq!(image(&Matrix::identity(4)), Subspace::full(4));
        assert_eq!(image(&Matrix::zeros(3, 2)).dim(), 0);
        let outer = m(&[&[2], &[-1], &[3]]).mul(&m(&[&[1, 5, -2]])).unwrap();
        assert_eq!(image(&outer).dim(), 1);
    }

    #[test]
    fn intersect_cases() {
        let a = Subspace::span(4, &[vec![rat(1), rat(0), rat(0), rat(0)], vec![rat(0), rat(1), rat(0), rat(0)]]).unwrap();
        let b = Subspace::span(4, &[vec![rat(0), rat(0), rat(1), rat(0)], vec![rat(0), rat(0), rat(0), rat(1)]]).unwrap();
        assert_eq!(a.intersect(&a).unwrap(), a);
        assert_eq!(a.intersect(&b).unwrap().dim(), 0);
        assert!(matches!(
            a.intersect(&Subspace::full(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn membership_cases() {
        let s = Subspace::span(3, &[vec![rat(1), rat(2), rat(3)], vec![rat(0), rat(1), rat(1)]]).unwrap();
        assert_eq!(s.membership(&[rat(0), rat(0), rat(0)]).unwrap(), Some(vec![rat(0), rat(0)]));
        let row = s.basis_vector(1).to_vec();
        assert_eq!(s.membership(&row).unwrap(), Some(vec![rat(0), rat(1)]));
        assert!(s.membership(&[rat(1)]).is_err());
    }

    #[test]
    fn solve_reports_inconsistency() {
        let a = m(&[&[1, 1], &[2, 2]]);
        assert!(solve(&a, &[rat(1), rat(3)]).unwrap().is_none());
        let (x, ker) = solve(&a, &[rat(1), rat(2)]).unwrap().unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), vec![rat(1), rat(2)]);
        assert_eq!(ker.dim(), 1);
    }

    #[test]
    fn quotient_representatives() {
        let z = Subspace::full(3);
        let b = Subspace::span(3, &[vec![rat(1), rat(1), rat(0)]]).unwrap();
        let q = Quotient::new(z, b).unwrap();
        assert_eq!(q.dim(), 2);
        // (1,1,0) is a boundary
        assert_eq!(
            q.class_coordinates(&[rat(2), rat(2), rat(0)]).unwrap(),
            Some(vec![rat(0), rat(0)])
        );
        let c = q.class_coordinates(&[rat(0), rat(1), rat(5)]).unwrap().unwrap();
        let c2 = q.class_coordinates(&[rat(-1), rat(0), rat(5)]).unwrap().unwrap();
        assert_eq!(c, c2);
    }

    #[test]
    fn rational_text_round_trip() {
        for s in ["0", "-3", "7/2", "-1/3"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational("4/6").unwrap(), ratio(2, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
