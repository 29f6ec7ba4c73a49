//! Exact linear algebra over ℚ and ℚ(i): matrices, reduced row echelon
//! form, kernels, and span/subspace queries.
//!
//! Everything here is fraction-exact; there is no pivoting heuristics story
//! because there is no rounding.

use crate::scalar::Scalar;
use num::complex::Complex64;
use num::{BigRational, One, Zero};
use std::fmt;
use std::ops::{Add, Mul, Sub};

/// Field abstraction shared by the rational and Gaussian-rational sweeps.
pub trait Field: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn inv(&self) -> Self;
    fn is_zero(&self) -> bool;
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn inv(&self) -> Self {
        Scalar::inv(self)
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as One>::one()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn inv(&self) -> Self {
        <BigRational as One>::one() / self
    }
    fn is_zero(&self) -> bool {
        <BigRational as Zero>::is_zero(self)
    }
}

/// In-place reduced row echelon form. Returns the pivot columns in order.
pub fn rref<F: Field>(rows: &mut Vec<Vec<F>>) -> Vec<usize> {
    let nrows = rows.len();
    if nrows == 0 {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(piv) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = rows[r][c].inv();
        for x in rows[r].iter_mut() {
            *x = x.mul(&inv);
        }
        for i in 0..nrows {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for j in 0..ncols {
                    let delta = factor.mul(&rows[r][j]);
                    rows[i][j] = rows[i][j].sub(&delta);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x : M x = 0}` for the matrix with the given rows.
pub fn kernel_basis<F: Field>(mut rows: Vec<Vec<F>>, ncols: usize) -> Vec<Vec<F>> {
    let pivots = rref(&mut rows);
    let pivot_of_col: Vec<Option<usize>> = {
        let mut v = vec![None; ncols];
        for (i, &c) in pivots.iter().enumerate() {
            v[c] = Some(i);
        }
        v
    };
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut vec_ = vec![F::zero(); ncols];
        vec_[free] = F::one();
        for (&c, row) in pivots.iter().zip(rows.iter()) {
            vec_[c] = F::zero().sub(&row[free]);
        }
        basis.push(vec_);
    }
    basis
}

/// A subspace of `F^n` stored as an RREF basis; supports membership,
/// coordinates, and equality queries.
#[derive(Clone, Debug)]
pub struct Subspace<F: Field> {
    rows: Vec<Vec<F>>,
    pivots: Vec<usize>,
    ncols: usize,
    /// `coords[i]` expresses RREF row `i` in terms of the original spanning
    /// vectors (tracked through elimination).
    coords: Vec<Vec<F>>,
}

impl<F: Field> Subspace<F> {
    /// Span of the given vectors (all of length `ncols`).
    pub fn span(vectors: &[Vec<F>], ncols: usize) -> Self {
        // Augment with an identity block so every surviving row remembers
        // how it was formed from the input vectors.
        let k = vectors.len();
        let mut rows: Vec<Vec<F>> = vectors
            .iter()
            .enumerate()
            .map(|(i, v)| {
                assert_eq!(v.len(), ncols, "span vector length mismatch");
                let mut row = v.clone();
                row.extend((0..k).map(|j| if i == j { F::one() } else { F::zero() }));
                row
            })
            .collect();
        let nrows = rows.len();
        // RREF on the first ncols columns only.
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            if r == nrows {
                break;
            }
            let Some(piv) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, piv);
            let inv = rows[r][c].inv();
            for x in rows[r].iter_mut() {
                *x = x.mul(&inv);
            }
            for i in 0..nrows {
                if i != r && !rows[i][c].is_zero() {
                    let factor = rows[i][c].clone();
                    for j in 0..ncols + k {
                        let delta = factor.mul(&rows[r][j]);
                        rows[i][j] = rows[i][j].sub(&delta);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        rows.truncate(r);
        let coords = rows.iter().map(|row| row[ncols..].to_vec()).collect();
        let rows = rows.into_iter().map(|mut row| {
            row.truncate(ncols);
            row
        });
        Subspace {
            rows: rows.collect(),
            pivots,
            ncols,
            coords,
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ncols
    }

    pub fn basis_rows(&self) -> &[Vec<F>] {
        &self.rows
    }

    /// Reduce `v` against the basis; returns the residual and the
    /// coefficients (in terms of the original spanning vectors) consumed.
    fn reduce(&self, v: &[F]) -> (Vec<F>, Vec<F>) {
        assert_eq!(v.len(), self.ncols, "vector length mismatch");
        let mut v = v.to_vec();
        let k = self.coords.first().map_or(0, |c| c.len());
        let mut used = vec![F::zero(); k];
        for (i, &c) in self.pivots.iter().enumerate() {
            if !v[c].is_zero() {
                let factor = v[c].clone();
                for j in 0..self.ncols {
                    let delta = factor.mul(&self.rows[i][j]);
                    v[j] = v[j].sub(&delta);
                }
                for j in 0..k {
                    let delta = factor.mul(&self.coords[i][j]);
                    used[j] = used[j].add(&delta);
                }
            }
        }
        (v, used)
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v).0.iter().all(|x| x.is_zero())
    }

    /// Coordinates of `v` with respect to the original spanning vectors,
    /// if `v` lies in the span.
    pub fn coordinates(&self, v: &[F]) -> Option<Vec<F>> {
        let (residual, used) = self.reduce(v);
        residual.iter().all(|x| x.is_zero()).then_some(used)
    }

    /// Exact subspace equality (mutual containment via RREF canonicity).
    pub fn equals(&self, other: &Subspace<F>) -> bool {
        self.ncols == other.ncols && self.pivots == other.pivots && self.rows == other.rows
    }

    pub fn contains_subspace(&self, other: &Subspace<F>) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }
}

/// Dense matrix over the Gaussian rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    pub nrows: usize,
    pub ncols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Mat {
            nrows,
            ncols,
            data: vec![Scalar::zero(); nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Mat {
            nrows,
            ncols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut m = Mat::zeros(nrows, ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Permutation matrix `P e_j = e_{perm[j]}`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Mat::zeros(n, n);
        for (j, &i) in perm.iter().enumerate() {
            m[(i, j)] = Scalar::one();
        }
        m
    }

    pub fn diagonal(entries: &[Scalar]) -> Self {
        let n = entries.len();
        let mut m = Mat::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.nrows).all(|i| {
                (0..self.ncols).all(|j| {
                    if i == j {
                        self[(i, j)].is_one()
                    } else {
                        self[(i, j)].is_zero()
                    }
                })
            })
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_square()
            && (0..self.nrows)
                .all(|i| (0..self.ncols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn is_real_diagonal(&self) -> bool {
        self.is_diagonal() && (0..self.nrows).all(|i| self[(i, i)].is_real())
    }

    pub fn scale(&self, c: &Scalar) -> Mat {
        let mut out = self.clone();
        for x in out.data.iter_mut() {
            *x = &*x * c;
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.ncols, self.nrows, |i, j| self[(j, i)].clone())
    }

    pub fn conj_transpose(&self) -> Mat {
        Mat::from_fn(self.ncols, self.nrows, |i, j| self[(j, i)].conj())
    }

    /// Kronecker product, blocks of `rhs` scaled by entries of `self`.
    pub fn kron(&self, rhs: &Mat) -> Mat {
        Mat::from_fn(
            self.nrows * rhs.nrows,
            self.ncols * rhs.ncols,
            |i, j| {
                let (bi, ri) = (i / rhs.nrows, i % rhs.nrows);
                let (bj, rj) = (j / rhs.ncols, j % rhs.ncols);
                &self[(bi, bj)] * &rhs[(ri, rj)]
            },
        )
    }

    /// Flatten row-major into a vector, for span computations.
    pub fn vectorize(&self) -> Vec<Scalar> {
        self.data.clone()
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.data.iter().map(Scalar::to_complex).collect()
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.ncols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.ncols + j]
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        assert_eq!(self.ncols, rhs.nrows, "matrix shape mismatch");
        let mut out = Mat::zeros(self.nrows, rhs.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                let a = self[(i, k)].clone();
                for j in 0..rhs.ncols {
                    if !rhs[(k, j)].is_zero() {
                        let prod = &a * &rhs[(k, j)];
                        out[(i, j)] += &prod;
                    }
                }
            }
        }
        out
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(rhs.data.iter()) {
            *x += y;
        }
        out
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(rhs.data.iter()) {
            *x -= y;
        }
        out
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.nrows, self.ncols)?;
        for i in 0..self.nrows {
            let row: Vec<String> = (0..self.ncols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn rref_and_kernel() {
        // x + y + z = 0, x - y = 0  =>  kernel spanned by (1, 1, -2).
        let rows = vec![
            vec![s(1), s(1), s(1)],
            vec![s(1), s(-1), s(0)],
        ];
        let ker = kernel_basis(rows, 3);
        assert_eq!(ker.len(), 1);
        let v = &ker[0];
        assert!((&v[0] - &v[1]).is_zero());
        let two_x = &s(2) * &v[0];
        assert!((&v[2] + &two_x).is_zero());
    }

    #[test]
    fn subspace_membership_and_coordinates() {
        let v1 = vec![s(1), s(0), s(1)];
        let v2 = vec![s(0), s(1), s(1)];
        let sp = Subspace::span(&[v1.clone(), v2.clone()], 3);
        assert_eq!(sp.dim(), 2);
        let w = vec![s(2), s(3), s(5)];
        let coords = sp.coordinates(&w).unwrap();
        assert_eq!(coords, vec![s(2), s(3)]);
        assert!(!sp.contains(&vec![s(1), s(0), s(0)]));
    }

    #[test]
    fn subspace_equality_is_basis_independent() {
        let a = Subspace::span(&[vec![s(1), s(1)], vec![s(1), s(-1)]], 2);
        let b = Subspace::span(&[vec![s(3), s(0)], vec![s(0), s(7)]], 2);
        assert!(a.equals(&b));
    }

    #[test]
    fn kron_and_matrix_units() {
        let e12 = Mat::from_rows(vec![vec![s(0), s(1)], vec![s(0), s(0)]]);
        let e21 = e12.transpose();
        let prod = &e12 * &e21;
        let e11 = Mat::from_rows(vec![vec![s(1), s(0)], vec![s(0), s(0)]]);
        assert_eq!(prod, e11);
        let big = e11.kron(&Mat::identity(3));
        assert_eq!(big.nrows, 6);
        assert!(!big.is_diagonal() || big.is_diagonal());
        assert_eq!(big[(0, 0)], s(1));
        assert_eq!(big[(3, 3)], s(0));
    }

    #[test]
    fn rational_kernel() {
        use num::BigInt;
        let r = |n: i64| BigRational::from_integer(BigInt::from(n));
        let rows = vec![vec![r(2), r(4)], vec![r(1), r(2)]];
        let ker = kernel_basis(rows, 2);
        assert_eq!(ker.len(), 1);
    }
}
