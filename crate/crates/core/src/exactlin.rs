//! Dense exact linear algebra over arbitrary-precision rationals.
//!
//! Elimination runs fraction-free (Bareiss) on integer rows obtained by clearing
//! denominators row by row; reduced row-echelon forms are derived from that
//! integer echelon form. Subspaces are stored by their reduced row-echelon basis,
//! so equal subspaces compare equal.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::integer::Integer;
use num::{BigInt, BigRational, One, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar used throughout the crate.
pub type Q = BigRational;

/// Shorthand for an integer-valued rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Shorthand for `num/den`.
pub fn qf(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QMatrix{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Q>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "QMatrix::from_vec",
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(QMatrix { rows, cols, data })
    }

    /// Builds a matrix from rows; `cols` is needed for the zero-row case.
    pub fn from_rows(rows: &[Vec<Q>], cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    context: "QMatrix::from_rows",
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r.iter().cloned());
        }
        Ok(QMatrix { rows: rows.len(), cols, data })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<Q>], rows: usize) -> Result<Self> {
        Ok(Self::from_rows(cols, rows)?.transpose())
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged integer matrix");
                r.iter().map(|&x| q(x))
            })
            .collect();
        QMatrix { rows: rows.len(), cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn rows_vec(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn scale(&self, s: &Q) -> Self {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn mul_vec(&self, v: &[Q]) -> Result<Vec<Q>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { context: "QMatrix::mul_vec", expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    pub fn try_mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { context: "QMatrix::mul", expected: self.cols, found: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Bilinear pairing `uᵀ M v`.
    pub fn bilinear(&self, u: &[Q], v: &[Q]) -> Q {
        let mv = self.mul_vec(v).expect("bilinear: dimension mismatch");
        dot(u, &mv)
    }

    /// Block-diagonal sum `diag(self, other)`.
    pub fn direct_sum(&self, other: &QMatrix) -> QMatrix {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }

    pub fn determinant(&self) -> Result<Q> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { context: "determinant", expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Q::one());
        }
        let (ints, scales) = integer_rows(&self.rows_vec(), n);
        let ech = bareiss(ints, n);
        if ech.pivots.len() < n {
            return Ok(Q::zero());
        }
        // Last Bareiss pivot is the determinant of the row-scaled, row-permuted matrix.
        let mut det = Q::from_integer(ech.rows[n - 1][n - 1].clone());
        if ech.swaps % 2 == 1 {
            det = -det;
        }
        for s in scales {
            det /= Q::from_integer(s);
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<QMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { context: "inverse", expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let mut aug = Vec::with_capacity(n);
        for i in 0..n {
            let mut r = self.row(i).to_vec();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            aug.push(r);
        }
        let (r, pivots) = rref_rows(&aug, 2 * n);
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular("inverse"));
        }
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, r[i][n + j].clone());
            }
        }
        Ok(out)
    }
}

impl Mul for &QMatrix {
    type Output = QMatrix;
    fn mul(self, rhs: &QMatrix) -> QMatrix {
        self.try_mul(rhs).expect("matrix product: dimension mismatch")
    }
}

impl Add for &QMatrix {
    type Output = QMatrix;
    fn add(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum: dimension mismatch");
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &QMatrix {
    type Output = QMatrix;
    fn sub(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference: dimension mismatch");
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &QMatrix {
    type Output = QMatrix;
    fn neg(self) -> QMatrix {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }
}

pub fn dot(u: &[Q], v: &[Q]) -> Q {
    debug_assert_eq!(u.len(), v.len());
    let mut acc = Q::zero();
    for (a, b) in u.iter().zip(v) {
        if !a.is_zero() && !b.is_zero() {
            acc += a * b;
        }
    }
    acc
}

pub fn vec_add(u: &[Q], v: &[Q]) -> Vec<Q> {
    u.iter().zip(v).map(|(a, b)| a + b).collect()
}

pub fn vec_sub(u: &[Q], v: &[Q]) -> Vec<Q> {
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

pub fn vec_scale(u: &[Q], s: &Q) -> Vec<Q> {
    u.iter().map(|a| a * s).collect()
}

pub fn unit_vector(n: usize, i: usize) -> Vec<Q> {
    (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Scales a nonzero vector so its first nonzero entry is 1.
pub fn normalize_leading(v: &[Q]) -> Vec<Q> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(lead) => {
            let inv = lead.recip();
            vec_scale(v, &inv)
        }
        None => v.to_vec(),
    }
}

// ---------------------------------------------------------------------------
// Fraction-free elimination

struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    swaps: usize,
}

/// Clears denominators row by row. Returns integer rows and the per-row factor used.
fn integer_rows(rows: &[Vec<Q>], cols: usize) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let mut out = Vec::with_capacity(rows.len());
    let mut scales = Vec::with_capacity(rows.len());
    for r in rows {
        debug_assert_eq!(r.len(), cols);
        let l = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        out.push(r.iter().map(|x| x.numer() * (&l / x.denom())).collect());
        scales.push(l);
    }
    (out, scales)
}

/// Bareiss elimination to row-echelon form with exact integer divisions.
fn bareiss(mut a: Vec<Vec<BigInt>>, cols: usize) -> Echelon {
    let m = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    let mut swaps = 0;
    for c in 0..cols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else { continue };
        if p != r {
            a.swap(p, r);
            swaps += 1;
        }
        let (top, rest) = a.split_at_mut(r + 1);
        let prow = &top[r];
        let piv = &prow[c];
        for row in rest.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..cols {
                let num = piv * &row[j] - &lead * &prow[j];
                debug_assert!((&num % &prev).is_zero(), "Bareiss division not exact");
                row[j] = num / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = piv.clone();
        pivots.push(c);
        r += 1;
    }
    Echelon { rows: a, pivots, swaps }
}

/// Reduced row-echelon form of the given rows. Returns the nonzero rows and pivot columns.
pub fn rref_rows(rows: &[Vec<Q>], cols: usize) -> (Vec<Vec<Q>>, Vec<usize>) {
    let (ints, _) = integer_rows(rows, cols);
    let ech = bareiss(ints, cols);
    let rank = ech.pivots.len();
    let mut r: Vec<Vec<Q>> = ech.rows.into_iter().take(rank).map(|row| row.into_iter().map(Q::from_integer).collect()).collect();
    for i in (0..rank).rev() {
        let pc = ech.pivots[i];
        let inv = r[i][pc].recip();
        for x in r[i].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        for k in 0..i {
            let f = r[k][pc].clone();
            if f.is_zero() {
                continue;
            }
            for j in pc..cols {
                if !r[i][j].is_zero() {
                    let d = &f * &r[i][j];
                    r[k][j] -= d;
                }
            }
        }
    }
    (r, ech.pivots)
}

pub fn rank(m: &QMatrix) -> usize {
    let (ints, _) = integer_rows(&m.rows_vec(), m.cols);
    bareiss(ints, m.cols).pivots.len()
}

/// Canonical basis of `{v : Mv = 0}`.
pub fn kernel_basis(m: &QMatrix) -> Subspace {
    let n = m.cols;
    let (r, pivots) = rref_rows(&m.rows_vec(), n);
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut vecs = Vec::new();
    for f in (0..n).filter(|&j| !is_pivot[j]) {
        let mut v = vec![Q::zero(); n];
        v[f] = Q::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -r[i][f].clone();
        }
        vecs.push(v);
    }
    Subspace::span(n, &vecs)
}

/// Solves `Mx = v`. The returned solution has zero coordinates on every free column.
/// `Ok(None)` means the system is inconsistent.
pub fn solve_linear(m: &QMatrix, v: &[Q]) -> Result<Option<Vec<Q>>> {
    if v.len() != m.rows {
        return Err(Error::DimensionMismatch { context: "solve_linear", expected: m.rows, found: v.len() });
    }
    let n = m.cols;
    let aug: Vec<Vec<Q>> = (0..m.rows)
        .map(|i| {
            let mut r = m.row(i).to_vec();
            r.push(v[i].clone());
            r
        })
        .collect();
    let (r, pivots) = rref_rows(&aug, n + 1);
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut x = vec![Q::zero(); n];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = r[i][n].clone();
    }
    Ok(Some(x))
}

// ---------------------------------------------------------------------------
// Subspaces

/// Linear subspace of `Q^ambient`, stored by its reduced row-echelon basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Q>>,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .basis
            .iter()
            .map(|v| format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "Subspace[{}]{{{}}}", self.ambient, rows.join(", "))
    }
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        let vecs: Vec<Vec<Q>> = (0..ambient).map(|i| unit_vector(ambient, i)).collect();
        Self::span(ambient, &vecs)
    }

    pub fn span(ambient: usize, vectors: &[Vec<Q>]) -> Self {
        let (basis, pivots) = rref_rows(vectors, ambient);
        Subspace { ambient, basis, pivots }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        debug_assert_eq!(v.len(), self.ambient);
        // Reduce v against the RREF basis.
        let mut w = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if !w[p].is_zero() {
                let f = w[p].clone();
                for (x, y) in w.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        is_zero_vec(&w)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vecs = self.basis.clone();
        vecs.extend(other.basis.iter().cloned());
        Self::span(self.ambient, &vecs)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // Solve Σ a_i u_i = Σ b_j w_j.
        let (d1, d2) = (self.dim(), other.dim());
        if d1 == 0 || d2 == 0 {
            return Subspace::zero(self.ambient);
        }
        let mut m = QMatrix::zeros(self.ambient, d1 + d2);
        for (i, u) in self.basis.iter().enumerate() {
            for r in 0..self.ambient {
                m.set(r, i, u[r].clone());
            }
        }
        for (j, w) in other.basis.iter().enumerate() {
            for r in 0..self.ambient {
                m.set(r, d1 + j, -w[r].clone());
            }
        }
        let ker = kernel_basis(&m);
        let vecs: Vec<Vec<Q>> = ker
            .basis
            .iter()
            .map(|c| {
                let mut v = vec![Q::zero(); self.ambient];
                for (i, u) in self.basis.iter().enumerate() {
                    if !c[i].is_zero() {
                        v = vec_add(&v, &vec_scale(u, &c[i]));
                    }
                }
                v
            })
            .collect();
        Self::span(self.ambient, &vecs)
    }

    /// Greedy completion: candidates are scanned in order and kept when they are
    /// independent of `self` plus the already chosen ones.
    pub fn complement_from(&self, candidates: &[Vec<Q>]) -> Vec<Vec<Q>> {
        let mut acc = self.clone();
        let mut chosen = Vec::new();
        for c in candidates {
            if !acc.contains(c) {
                acc = acc.sum(&Subspace::span(self.ambient, std::slice::from_ref(c)));
                chosen.push(c.clone());
            }
        }
        chosen
    }

    /// Complement chosen greedily from the standard basis in index order.
    pub fn standard_complement(&self) -> Vec<Vec<Q>> {
        let cands: Vec<Vec<Q>> = (0..self.ambient).map(|i| unit_vector(self.ambient, i)).collect();
        self.complement_from(&cands)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&QMatrix::identity(3)), 3);
        assert_eq!(rank(&QMatrix::zeros(2, 5)), 0);
        assert_eq!(rank(&QMatrix::from_i64(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&QMatrix::identity(3)).is_zero());
        assert_eq!(kernel_basis(&QMatrix::zeros(2, 3)), Subspace::full(3));
        let k = kernel_basis(&QMatrix::from_i64(&[&[1, 1, 0]]));
        assert_eq!(k.dim(), 2);
        assert_eq!(k.basis(), &[vec![q(1), q(-1), q(0)], vec![q(0), q(0), q(1)]]);
    }

    #[test]
    fn solve_examples() {
        let x = solve_linear(&QMatrix::identity(2), &[q(1), q(2)]).unwrap();
        assert_eq!(x, Some(vec![q(1), q(2)]));
        let x = solve_linear(&QMatrix::from_i64(&[&[1, 1]]), &[q(2)]).unwrap();
        assert_eq!(x, Some(vec![q(2), q(0)]));
        let x = solve_linear(&QMatrix::from_i64(&[&[1], &[1]]), &[q(1), q(2)]).unwrap();
        assert_eq!(x, None);
        assert!(solve_linear(&QMatrix::identity(2), &[q(1)]).is_err());
    }

    #[test]
    fn determinant_and_inverse() {
        let m = QMatrix::from_i64(&[&[0, 2, 1], &[1, 0, 0], &[3, 1, 5]]);
        // Cofactor expansion along the second row: -1 * (2*5 - 1*1) = -9.
        assert_eq!(m.determinant().unwrap(), q(-9));
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, QMatrix::identity(3));
        let sing = QMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(sing.determinant().unwrap(), q(0));
        assert!(sing.inverse().is_err());
        let frac = QMatrix::from_vec(2, 2, vec![qf(1, 2), qf(1, 3), qf(1, 4), qf(1, 5)]).unwrap();
        assert_eq!(frac.determinant().unwrap(), qf(1, 10) - qf(1, 12));
    }

    #[test]
    fn subspace_operations() {
        let a = Subspace::span(3, &[vec![q(1), q(1), q(0)], vec![q(0), q(0), q(1)]]);
        let b = Subspace::span(3, &[vec![q(1), q(0), q(0)], vec![q(0), q(1), q(0)]]);
        let i = a.intersection(&b);
        assert_eq!(i, Subspace::span(3, &[vec![q(2), q(2), q(0)]]));
        assert_eq!(a.sum(&b), Subspace::full(3));
        assert!(i.is_subspace_of(&a) && i.is_subspace_of(&b));
        let comp = a.standard_complement();
        assert_eq!(comp, vec![unit_vector(3, 0)]);
    }

    #[test]
    fn canonical_representation() {
        let a = Subspace::span(3, &[vec![q(2), q(4), q(6)], vec![q(1), q(0), q(1)]]);
        let b = Subspace::span(3, &[vec![q(3), q(2), q(5)], vec![q(-1), q(-2), q(-3)]]);
        assert_eq!(a, b);
    }
}
