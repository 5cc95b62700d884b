//! Exact linear algebra over Z2: bit-packed matrices and graded chain complexes.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

const W: usize = 64;

/// Dense Z2 matrix with bit-packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Z2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl fmt::Debug for Z2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Z2Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: String = (0..self.cols).map(|c| if self.get(r, c) { '1' } else { '0' }).collect();
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

impl Z2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(W);
        Self {
            rows,
            cols,
            stride,
            bits: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Build from rows of 0/1 entries.
    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, v & 1 == 1);
            }
        }
        m
    }

    /// The handleslide map h_{k,l}: e_k -> e_k + e_l, other basis vectors fixed.
    pub fn handleslide(n: usize, k: usize, l: usize) -> Self {
        assert!(k < n && l < n && k != l);
        let mut m = Self::identity(n);
        m.set(l, k, true);
        m
    }

    /// Permutation matrix exchanging e_k and e_{k+1}.
    pub fn transposition(n: usize, k: usize) -> Self {
        let mut m = Self::identity(n);
        m.set(k, k, false);
        m.set(k + 1, k + 1, false);
        m.set(k, k + 1, true);
        m.set(k + 1, k, true);
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        self.bits[r * self.stride + c / W] >> (c % W) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.bits[r * self.stride + c / W];
        let mask = 1u64 << (c % W);
        if v {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        self.bits[r * self.stride + c / W] ^= 1u64 << (c % W);
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.bits[r * self.stride..(r + 1) * self.stride]
    }

    /// rows[dst] ^= rows[src]
    fn xor_row(&mut self, dst: usize, src: usize) {
        debug_assert_ne!(dst, src);
        for w in 0..self.stride {
            let v = self.bits[src * self.stride + w];
            self.bits[dst * self.stride + w] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for w in 0..self.stride {
                self.bits.swap(a * self.stride + w, b * self.stride + w);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    for w in 0..out.stride {
                        out.bits[r * out.stride + w] ^= rhs.bits[k * rhs.stride + w];
                    }
                }
            }
        }
        out
    }

    /// Row-reduce in place; returns pivot columns. Pivot row is always the
    /// lowest-index eligible row.
    fn eliminate(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else {
                continue;
            };
            self.swap_rows(r, p);
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    self.xor_row(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate().len()
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                if self.get(r, c) {
                    aug.set(r, c, true);
                }
            }
            aug.set(r, n + r, true);
        }
        let piv = aug.eliminate();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                if aug.get(r, n + c) {
                    inv.set(r, c, true);
                }
            }
        }
        Some(inv)
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                if self.get(r, c) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Indices of the nonzero entries in row `r`.
    pub fn row_support(&self, r: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, &word) in self.row(r).iter().enumerate() {
            let mut x = word;
            while x != 0 {
                let b = x.trailing_zeros() as usize;
                out.push(w * W + b);
                x &= x - 1;
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisElement {
    pub label: String,
    pub degree: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Z2Error {
    #[error("matrix shape {rows}x{cols} does not match basis of size {n}")]
    Shape { rows: usize, cols: usize, n: usize },
    #[error("d^2 is nonzero")]
    DSquaredNonzero,
    #[error("change of basis is singular")]
    Singular,
    #[error("change of basis does not preserve degree")]
    NotGraded,
}

/// Z2 chain complex on an ordered graded basis, `d[j][i] = <d e_i, e_j>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChainComplexZ2 {
    basis: Vec<BasisElement>,
    d: Z2Matrix,
}

impl ChainComplexZ2 {
    pub fn new(basis: Vec<BasisElement>, d: Z2Matrix) -> Result<Self, Z2Error> {
        let n = basis.len();
        if d.rows() != n || d.cols() != n {
            return Err(Z2Error::Shape {
                rows: d.rows(),
                cols: d.cols(),
                n,
            });
        }
        Ok(Self { basis, d })
    }

    pub fn empty() -> Self {
        Self {
            basis: Vec::new(),
            d: Z2Matrix::zeros(0, 0),
        }
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.basis.iter().map(|b| b.degree).collect()
    }

    pub fn matrix(&self) -> &Z2Matrix {
        &self.d
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `<d e_i, e_j>`.
    pub fn coeff(&self, i: usize, j: usize) -> bool {
        self.d.get(j, i)
    }

    /// Indices j with `<d e_i, e_j> = 1`.
    pub fn image_of(&self, i: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&j| self.coeff(i, j)).collect()
    }

    pub fn d_squared_is_zero(&self) -> bool {
        self.d.mul(&self.d).is_zero()
    }

    pub fn has_degree_minus_one(&self) -> bool {
        (0..self.dim())
            .all(|i| (0..self.dim()).all(|j| !self.coeff(i, j) || self.basis[i].degree == self.basis[j].degree + 1))
    }

    /// `<d e_i, e_j> = 1` only when `j > i`.
    pub fn is_strictly_lower_triangular(&self) -> bool {
        (0..self.dim()).all(|i| (0..=i).all(|j| !self.coeff(i, j)))
    }

    fn degree_classes(&self) -> BTreeMap<i64, Vec<usize>> {
        let mut m: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, b) in self.basis.iter().enumerate() {
            m.entry(b.degree).or_default().push(i);
        }
        m
    }

    /// For each degree k present, the rank of d restricted to the degree-k part.
    pub fn ranks_by_degree(&self) -> BTreeMap<i64, usize> {
        let all: Vec<usize> = (0..self.dim()).collect();
        self.degree_classes()
            .into_iter()
            .map(|(k, cols)| (k, self.d.select(&all, &cols).rank()))
            .collect()
    }

    pub fn homology_dims(&self) -> Result<BTreeMap<i64, usize>, Z2Error> {
        if !self.d_squared_is_zero() {
            return Err(Z2Error::DSquaredNonzero);
        }
        let classes = self.degree_classes();
        let ranks = self.ranks_by_degree();
        Ok(classes
            .iter()
            .map(|(&k, cols)| {
                let into = ranks.get(&(k + 1)).copied().unwrap_or(0);
                (k, cols.len() - ranks[&k] - into)
            })
            .collect())
    }

    pub fn is_acyclic(&self) -> bool {
        self.homology_dims()
            .map(|h| h.values().all(|&v| v == 0))
            .unwrap_or(false)
    }

    /// The complex with differential `h d h^{-1}` on the same graded basis.
    pub fn conjugate(&self, h: &Z2Matrix) -> Result<Self, Z2Error> {
        if h.rows() != self.dim() || h.cols() != self.dim() {
            return Err(Z2Error::Shape {
                rows: h.rows(),
                cols: h.cols(),
                n: self.dim(),
            });
        }
        for r in 0..h.rows() {
            for c in h.row_support(r) {
                if self.basis[r].degree != self.basis[c].degree {
                    return Err(Z2Error::NotGraded);
                }
            }
        }
        let inv = h.inverse().ok_or(Z2Error::Singular)?;
        Ok(Self {
            basis: self.basis.clone(),
            d: h.mul(&self.d).mul(&inv),
        })
    }

    /// Conjugate by an involution without inverting (h_{k,l} and transpositions).
    pub(crate) fn conjugate_involution(&self, h: &Z2Matrix) -> Self {
        Self {
            basis: self.basis.clone(),
            d: h.mul(&self.d).mul(h),
        }
    }

    pub(crate) fn with_basis(&self, basis: Vec<BasisElement>) -> Self {
        assert_eq!(basis.len(), self.dim());
        Self {
            basis,
            d: self.d.clone(),
        }
    }
}
