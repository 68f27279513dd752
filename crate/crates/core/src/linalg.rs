//! Exact linear algebra over the rationals.
//!
//! Provides dense rational matrices with fraction-free rank computation, and a
//! `Subspace` type kept in a canonical reduced-echelon basis so that value
//! equality coincides with equality of spans.  All operations are exact; no
//! floating point enters this module.

use std::collections::BTreeSet;
use std::fmt;

use num::bigint::BigInt;
use num::{Integer, One, Zero};

use crate::rat::Rat;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("subspace is not contained in the requested ambient space")]
    NotContained,
    #[error("singular system")]
    Singular,
}

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(n: usize, cols: &[Vec<Rat>]) -> Self {
        assert!(cols.iter().all(|x| x.len() == n), "ragged columns");
        let mut m = Self::zeros(n, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    /// Test helper: integer entries, row major.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| crate::rat::rat_i(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<Rat> {
        (0..self.cols).map(|c| self.get(r, c).clone()).collect()
    }

    pub fn col(&self, c: usize) -> Vec<Rat> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(c, r, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let add = a * rhs.get(k, c);
                    let cur = out.get(r, c) + add;
                    out.set(r, c, cur);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "mul_vec shape mismatch");
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) * &v[c]).sum())
            .collect()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows, "hstack shape mismatch");
        let mut m = Self::zeros(self.rows, self.cols + rhs.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
            for c in 0..rhs.cols {
                m.set(r, self.cols + c, rhs.get(r, c).clone());
            }
        }
        m
    }

    /// Exact rank via fraction-free (Bareiss) Gaussian elimination.
    ///
    /// Rows are first scaled to integers; row scaling does not change rank, and
    /// the Bareiss recurrence keeps all intermediate values integral.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let mut m: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|r| {
                let mut lcm = BigInt::one();
                for c in 0..self.cols {
                    lcm = lcm.lcm(self.get(r, c).denom());
                }
                (0..self.cols)
                    .map(|c| {
                        let v = self.get(r, c);
                        v.numer() * (&lcm / v.denom())
                    })
                    .collect()
            })
            .collect();
        let mut rank = 0usize;
        let mut prev = BigInt::one();
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            for r in rank + 1..self.rows {
                for c in col + 1..self.cols {
                    let num = &m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c];
                    m[r][c] = num / &prev;
                }
                m[r][col] = BigInt::zero();
            }
            prev = m[rank][col].clone();
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    /// Reduced row echelon form; returns the transformed matrix and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0usize;
        for col in 0..m.cols {
            let Some(p) = (lead..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            for c in 0..m.cols {
                let tmp = m.get(p, c).clone();
                m.set(p, c, m.get(lead, c).clone());
                m.set(lead, c, tmp);
            }
            let inv = m.get(lead, col).clone().recip();
            for c in 0..m.cols {
                let v = m.get(lead, c) * &inv;
                m.set(lead, c, v);
            }
            for r in 0..m.rows {
                if r != lead && !m.get(r, col).is_zero() {
                    let f = m.get(r, col).clone();
                    for c in 0..m.cols {
                        let v = m.get(r, c) - &(m.get(lead, c) * &f);
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            lead += 1;
            if lead == m.rows {
                break;
            }
        }
        (m, pivots)
    }

    /// Basis of the right kernel, returned as columns (possibly zero of them).
    pub fn kernel(&self) -> Self {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Self::zeros(self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            out.set(fc, j, Rat::one());
            for (pi, &pc) in pivots.iter().enumerate() {
                out.set(pc, j, -r.get(pi, fc).clone());
            }
        }
        out
    }

    /// Solves `self * X = rhs` exactly, free variables set to zero.
    /// Returns `None` when the system is inconsistent.
    pub fn solve(&self, rhs: &Self) -> Option<Self> {
        assert_eq!(self.rows, rhs.rows, "solve shape mismatch");
        let aug = self.hstack(rhs);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Self::zeros(self.cols, rhs.cols);
        for (pi, &pc) in pivots.iter().enumerate() {
            for c in 0..rhs.cols {
                x.set(pc, c, r.get(pi, self.cols + c).clone());
            }
        }
        Some(x)
    }

    /// Inverse of a square nonsingular matrix.
    pub fn inverse(&self) -> Result<Self, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let inv = self.solve(&Self::identity(self.rows)).ok_or(LinalgError::Singular)?;
        if self.matmul(&inv) != Self::identity(self.rows) {
            return Err(LinalgError::Singular);
        }
        Ok(inv)
    }
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    assert_eq!(a.len(), b.len(), "dot shape mismatch");
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Linear subspace of `Q^n`, stored with a canonical reduced-echelon basis so
/// that `==` means equality of spans.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Subspace {
    ambient: usize,
    /// `ambient x dim` matrix with independent columns in canonical form.
    basis: RationalMatrix,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self { ambient, basis: RationalMatrix::zeros(ambient, 0) }
    }

    pub fn full(ambient: usize) -> Self {
        Self::from_spanning(&RationalMatrix::identity(ambient))
    }

    /// Span of the columns of `m` (dependent or zero columns are fine).
    pub fn from_spanning(m: &RationalMatrix) -> Self {
        let (r, pivots) = m.transpose().rref();
        let mut cols = Vec::new();
        for i in 0..pivots.len() {
            cols.push(r.row(i));
        }
        Self { ambient: m.rows(), basis: RationalMatrix::from_cols(m.rows(), &cols) }
    }

    pub fn span(ambient: usize, vectors: &[Vec<Rat>]) -> Self {
        Self::from_spanning(&RationalMatrix::from_cols(ambient, vectors))
    }

    /// Coordinate subspace spanned by the standard basis vectors at `indices`
    /// (0-based).
    pub fn coordinate(ambient: usize, indices: &[usize]) -> Self {
        let set: BTreeSet<usize> = indices.iter().copied().collect();
        assert!(set.iter().all(|&i| i < ambient), "coordinate index out of range");
        let cols: Vec<Vec<Rat>> = set
            .iter()
            .map(|&i| {
                let mut v = vec![Rat::zero(); ambient];
                v[i] = Rat::one();
                v
            })
            .collect();
        Self::span(ambient, &cols)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &RationalMatrix {
        &self.basis
    }

    pub fn is_zero_space(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Returns the sorted standard-basis indices when this is a coordinate
    /// subspace.
    pub fn coordinate_indices(&self) -> Option<Vec<usize>> {
        let mut idx = Vec::with_capacity(self.dim());
        for c in 0..self.basis.cols() {
            let col = self.basis.col(c);
            let mut nz = col.iter().enumerate().filter(|(_, v)| !v.is_zero());
            let (i, v) = nz.next()?;
            if nz.next().is_some() || !v.is_one() {
                return None;
            }
            idx.push(i);
        }
        idx.sort_unstable();
        Some(idx)
    }

    pub fn contains_vec(&self, v: &[Rat]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector/ambient mismatch");
        if v.iter().all(|x| x.is_zero()) {
            return true;
        }
        let aug = self.basis.hstack(&RationalMatrix::from_cols(self.ambient, &[v.to_vec()]));
        aug.rank() == self.dim()
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        assert_eq!(self.ambient, other.ambient);
        (0..self.dim()).all(|c| other.contains_vec(&self.basis.col(c)))
    }

    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.ambient, other.ambient);
        Self::from_spanning(&self.basis.hstack(&other.basis))
    }

    pub fn intersect(&self, other: &Self) -> Self {
        assert_eq!(self.ambient, other.ambient);
        if self.is_zero_space() || other.is_zero_space() {
            return Self::zero(self.ambient);
        }
        // Null space of [B_self | -B_other]: the left block of each kernel
        // vector maps to a point of the intersection.
        let mut neg = other.basis.clone();
        for r in 0..neg.rows() {
            for c in 0..neg.cols() {
                let v = -neg.get(r, c).clone();
                neg.set(r, c, v);
            }
        }
        let ker = self.basis.hstack(&neg).kernel();
        let cols: Vec<Vec<Rat>> = (0..ker.cols())
            .map(|j| {
                let coefs: Vec<Rat> = (0..self.dim()).map(|i| ker.get(i, j).clone()).collect();
                self.basis.mul_vec_cols(&coefs)
            })
            .collect();
        Self::span(self.ambient, &cols)
    }

    /// Image of this subspace under the linear map `m` (columns act on `R^ambient`).
    pub fn image_under(&self, m: &RationalMatrix) -> Self {
        assert_eq!(m.cols(), self.ambient, "map/ambient mismatch");
        Self::from_spanning(&m.matmul(&self.basis))
    }

    /// Orthogonal complement within `ambient_sub` (which must contain `self`),
    /// with respect to the standard inner product.
    pub fn complement_in(&self, ambient_sub: &Self) -> Result<Self, LinalgError> {
        if self.ambient != ambient_sub.ambient {
            return Err(LinalgError::DimensionMismatch("ambient mismatch".into()));
        }
        if !self.is_subspace_of(ambient_sub) {
            return Err(LinalgError::NotContained);
        }
        // w = C z with B^T C z = 0.
        let bt_c = self.basis.transpose().matmul(&ambient_sub.basis);
        let ker = bt_c.kernel();
        let cols: Vec<Vec<Rat>> = (0..ker.cols())
            .map(|j| ambient_sub.basis.mul_vec_cols(&ker.col(j)))
            .collect();
        Ok(Self::span(self.ambient, &cols))
    }

    /// Orthogonal complement in the full ambient space.
    pub fn orth_complement(&self) -> Self {
        self.complement_in(&Self::full(self.ambient)).expect("full space contains everything")
    }

    /// Matrix of the orthogonal projection onto this subspace: `B (B^T B)^{-1} B^T`.
    pub fn orthogonal_projection(&self) -> RationalMatrix {
        if self.is_zero_space() {
            return RationalMatrix::zeros(self.ambient, self.ambient);
        }
        let bt = self.basis.transpose();
        let gram = bt.matmul(&self.basis);
        let x = gram.solve(&bt).expect("Gram matrix of independent columns is invertible");
        self.basis.matmul(&x)
    }

    /// Exact Gram-Schmidt without normalization: pairwise-orthogonal rational
    /// basis columns together with their squared lengths.
    pub fn orthogonal_basis(&self) -> (RationalMatrix, Vec<Rat>) {
        let mut cols: Vec<Vec<Rat>> = (0..self.dim()).map(|c| self.basis.col(c)).collect();
        let mut norms2 = Vec::with_capacity(cols.len());
        for i in 0..cols.len() {
            for j in 0..i {
                let prev = cols[j].clone();
                let coef = dot(&cols[i], &prev) / &norms2[j];
                for (a, b) in cols[i].iter_mut().zip(&prev) {
                    *a -= &coef * b;
                }
            }
            norms2.push(dot(&cols[i], &cols[i]));
        }
        (RationalMatrix::from_cols(self.ambient, &cols), norms2)
    }

    /// Human-readable label used in constraint tags and reports.
    pub fn label(&self) -> String {
        if self.is_zero_space() {
            return "0".to_string();
        }
        if self.is_full() {
            return format!("R^{}", self.ambient);
        }
        if let Some(idx) = self.coordinate_indices() {
            let parts: Vec<String> = idx.iter().map(|i| format!("e{}", i + 1)).collect();
            return format!("<{}>", parts.join(","));
        }
        let cols: Vec<String> = (0..self.dim())
            .map(|c| {
                let entries: Vec<String> =
                    self.basis.col(c).iter().map(|v| v.to_string()).collect();
                format!("({})", entries.join(","))
            })
            .collect();
        format!("span{{{}}}", cols.join(","))
    }
}

impl RationalMatrix {
    /// `self * coefs` treating `coefs` as a column of mixing coefficients.
    fn mul_vec_cols(&self, coefs: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols(), coefs.len());
        (0..self.rows())
            .map(|r| (0..self.cols()).map(|c| self.get(r, c) * &coefs[c]).sum())
            .collect()
    }
}

/// Coordinate subspace given by a set of standard-basis indices (0-based).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CoordinateSubspace {
    pub ambient: usize,
    pub indices: BTreeSet<usize>,
}

impl CoordinateSubspace {
    pub fn new(ambient: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self, LinalgError> {
        let indices: BTreeSet<usize> = indices.into_iter().collect();
        if indices.iter().any(|&i| i >= ambient) {
            return Err(LinalgError::DimensionMismatch("coordinate index out of range".into()));
        }
        Ok(Self { ambient, indices })
    }

    pub fn to_subspace(&self) -> Subspace {
        let idx: Vec<usize> = self.indices.iter().copied().collect();
        Subspace::coordinate(self.ambient, &idx)
    }

    pub fn complement(&self) -> Self {
        let indices = (0..self.ambient).filter(|i| !self.indices.contains(i)).collect();
        Self { ambient: self.ambient, indices }
    }
}

/// All `2^n` coordinate subspaces of `R^n`, ordered by index set.
pub fn all_coordinate_subspaces(n: usize) -> Vec<CoordinateSubspace> {
    assert!(n <= 16, "coordinate family too large");
    let mut out = Vec::with_capacity(1 << n);
    for mask in 0u32..(1u32 << n) {
        let indices = (0..n).filter(|i| mask & (1 << i) != 0);
        out.push(CoordinateSubspace::new(n, indices).unwrap());
    }
    out
}

/// `dim L(V)` for a linear map `l` and subspace `v`.
pub fn dim_image(l: &RationalMatrix, v: &Subspace) -> usize {
    l.matmul(v.basis()).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_i};

    #[test]
    fn rank_hand_eliminated_cases() {
        // Oracle values worked out by hand elimination.
        let m = RationalMatrix::from_int_rows(&[&[1, 2, 3], &[2, 4, 6], &[1, 1, 1]]);
        assert_eq!(m.rank(), 2);
        let m = RationalMatrix::from_int_rows(&[&[0, 0], &[0, 0]]);
        assert_eq!(m.rank(), 0);
        let m = RationalMatrix::from_rows(vec![
            vec![rat(1, 2), rat(1, 3)],
            vec![rat(1, 4), rat(1, 5)],
        ]);
        assert_eq!(m.rank(), 2);
        let m = RationalMatrix::from_rows(vec![
            vec![rat(1, 2), rat(1, 4)],
            vec![rat(2, 3), rat(1, 3)],
        ]);
        assert_eq!(m.rank(), 1);
        assert_eq!(RationalMatrix::identity(4).rank(), 4);
    }

    #[test]
    fn projection_onto_diagonal_line() {
        let v = Subspace::span(2, &[vec![rat_i(1), rat_i(1)]]);
        let p = v.orthogonal_projection();
        let expect = RationalMatrix::from_rows(vec![
            vec![rat(1, 2), rat(1, 2)],
            vec![rat(1, 2), rat(1, 2)],
        ]);
        assert_eq!(p, expect);
        assert_eq!(p.matmul(&p), p);
        assert_eq!(p.transpose(), p);
    }

    #[test]
    fn projection_trivial_cases() {
        assert_eq!(Subspace::zero(3).orthogonal_projection(), RationalMatrix::zeros(3, 3));
        assert_eq!(Subspace::full(3).orthogonal_projection(), RationalMatrix::identity(3));
    }

    #[test]
    fn dim_image_examples() {
        // Projection of the plane onto <e2> kills e1.
        let l = Subspace::coordinate(2, &[1]).orthogonal_projection();
        assert_eq!(dim_image(&l, &Subspace::coordinate(2, &[0])), 0);
        assert_eq!(dim_image(&l, &Subspace::coordinate(2, &[1])), 1);
        assert_eq!(dim_image(&l, &Subspace::full(2)), 1);
        // Identity map preserves dimension.
        let id = RationalMatrix::identity(3);
        let v = Subspace::span(3, &[vec![rat_i(1), rat_i(2), rat_i(3)]]);
        assert_eq!(dim_image(&id, &v), 1);
    }

    #[test]
    fn complement_in_codomain() {
        // <e1+e2> inside R^2 has complement <e1-e2>.
        let v = Subspace::span(2, &[vec![rat_i(1), rat_i(1)]]);
        let c = v.orth_complement();
        assert_eq!(c, Subspace::span(2, &[vec![rat_i(1), rat_i(-1)]]));
        // Complement inside a smaller ambient subspace.
        let amb = Subspace::coordinate(3, &[0, 1]);
        let v = Subspace::coordinate(3, &[0]);
        assert_eq!(v.complement_in(&amb).unwrap(), Subspace::coordinate(3, &[1]));
        // Not contained -> error.
        let w = Subspace::coordinate(3, &[2]);
        assert_eq!(w.complement_in(&amb), Err(LinalgError::NotContained));
    }

    #[test]
    fn sum_and_intersection() {
        let a = Subspace::span(3, &[vec![rat_i(1), rat_i(0), rat_i(0)], vec![rat_i(0), rat_i(1), rat_i(0)]]);
        let b = Subspace::span(3, &[vec![rat_i(0), rat_i(1), rat_i(0)], vec![rat_i(0), rat_i(0), rat_i(1)]]);
        assert_eq!(a.sum(&b), Subspace::full(3));
        assert_eq!(a.intersect(&b), Subspace::coordinate(3, &[1]));
        // Skew example: two distinct lines in the plane meet only at 0.
        let l1 = Subspace::span(2, &[vec![rat_i(1), rat_i(1)]]);
        let l2 = Subspace::span(2, &[vec![rat_i(1), rat_i(-1)]]);
        assert_eq!(l1.intersect(&l2), Subspace::zero(2));
        assert_eq!(l1.sum(&l2), Subspace::full(2));
    }

    #[test]
    fn canonical_form_makes_equality_span_equality() {
        let a = Subspace::span(2, &[vec![rat_i(2), rat_i(2)], vec![rat_i(3), rat_i(3)]]);
        let b = Subspace::span(2, &[vec![rat_i(-1), rat_i(-1)]]);
        assert_eq!(a, b);
        assert_eq!(a.dim(), 1);
    }

    #[test]
    fn labels() {
        assert_eq!(Subspace::zero(2).label(), "0");
        assert_eq!(Subspace::full(2).label(), "R^2");
        assert_eq!(Subspace::coordinate(3, &[0, 2]).label(), "<e1,e3>");
        let skew = Subspace::span(2, &[vec![rat_i(1), rat_i(1)]]);
        assert_eq!(skew.label(), "span{(1,1)}");
    }

    #[test]
    fn kernel_and_solve() {
        let m = RationalMatrix::from_int_rows(&[&[1, 1, 0], &[0, 0, 1]]);
        let k = m.kernel();
        assert_eq!(k.cols(), 1);
        assert!(m.matmul(&k).is_zero());
        let rhs = RationalMatrix::from_int_rows(&[&[3], &[4]]);
        let x = m.solve(&rhs).unwrap();
        assert_eq!(m.matmul(&x), rhs);
        // Inconsistent system.
        let bad = RationalMatrix::from_int_rows(&[&[1, 1], &[1, 1]]);
        let rhs = RationalMatrix::from_int_rows(&[&[1], &[2]]);
        assert!(bad.solve(&rhs).is_none());
    }

    #[test]
    fn orthogonal_basis_skew_line_norms() {
        let v = Subspace::span(2, &[vec![rat_i(1), rat_i(1)]]);
        let (b, n2) = v.orthogonal_basis();
        assert_eq!(b.cols(), 1);
        assert_eq!(n2, vec![rat_i(2)]);
    }
}
