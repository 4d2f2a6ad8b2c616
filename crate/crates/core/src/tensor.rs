//! Small dense tensors (rank ≤ 4, dimension ≤ [`MAX_DIM`]).

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::math;

/// Largest supported dimension.
pub const MAX_DIM: usize = 8;

/// Eigenvalues with `|λ| ≤` this count as zero in [`SquareMatrix::signature`].
pub const DEFAULT_ZERO_TOL: f64 = 1e-9;

/// Symmetry tolerance accepted by the eigen solver.
pub const SYMMETRY_TOL: f64 = 1e-10;

const JACOBI_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

fn check_dim(dim: usize) {
    assert!(
        (1..=MAX_DIM).contains(&dim),
        "tensor dimension {dim} outside 1..={MAX_DIM}"
    );
}

/// Counts of positive, negative and (numerically) zero eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    pub plus: usize,
    pub minus: usize,
    pub zero: usize,
}

impl Signature {
    pub const fn new(plus: usize, minus: usize, zero: usize) -> Self {
        Signature { plus, minus, zero }
    }

    pub fn dim(&self) -> usize {
        self.plus + self.minus + self.zero
    }

    /// One eigenvalue of one sign and all the others of the opposite sign.
    pub fn is_normal_hyperbolic(&self) -> bool {
        self.zero == 0 && self.dim() >= 2 && (self.plus == 1 || self.minus == 1)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.plus, self.minus, self.zero)
    }
}

/// Dense square matrix, `m[(i, j)]` is row `i`, column `j`.
#[derive(Clone, PartialEq)]
pub struct SquareMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for row in self.data.chunks(self.dim) {
            list.entry(&row);
        }
        list.finish()
    }
}

impl SquareMatrix {
    pub fn zeros(dim: usize) -> Self {
        check_dim(dim);
        SquareMatrix {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn diag(values: &[f64]) -> Self {
        Self::from_fn(values.len(), |i, j| if i == j { values[i] } else { 0.0 })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        check_dim(dim);
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        SquareMatrix { dim, data }
    }

    /// Builds from row-major entries; `entries.len()` must be a square.
    pub fn from_row_slice(dim: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        check_dim(dim);
        Ok(SquareMatrix {
            dim,
            data: entries.to_vec(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &SquareMatrix) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        Self::from_fn(n, |i, j| (0..n).map(|k| self[(i, k)] * other[(k, j)]).sum())
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `Pᵀ M P`.
    pub fn congruence(&self, p: &SquareMatrix) -> Self {
        p.transpose().matmul(self).matmul(p)
    }

    pub fn scale(&self, s: f64) -> Self {
        SquareMatrix {
            dim: self.dim,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add(&self, other: &SquareMatrix) -> Self {
        assert_eq!(self.dim, other.dim);
        SquareMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &SquareMatrix) -> Self {
        assert_eq!(self.dim, other.dim);
        SquareMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(math::abs(*v)))
    }

    pub fn frobenius(&self) -> f64 {
        math::sqrt(self.data.iter().map(|v| v * v).sum())
    }

    pub fn max_abs_diff(&self, other: &SquareMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max(math::abs(a - b)))
    }

    /// Largest `|M_ij - M_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                worst = worst.max(math::abs(self[(i, j)] - self[(j, i)]));
            }
        }
        worst
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.asymmetry() <= tol
    }

    pub fn symmetric_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| 0.5 * (self[(i, j)] + self[(j, i)]))
    }

    /// Determinant by LU decomposition with partial pivoting. Singular input
    /// returns `0.0`.
    pub fn determinant(&self) -> f64 {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| {
                    math::abs(a[r * n + col])
                        .partial_cmp(&math::abs(a[s * n + col]))
                        .unwrap_or(core::cmp::Ordering::Equal)
                })
                .unwrap_or(col);
            let p = a[pivot * n + col];
            if p == 0.0 {
                return 0.0;
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(col * n + k, pivot * n + k);
                }
                det = -det;
            }
            det *= p;
            for r in col + 1..n {
                let factor = a[r * n + col] / p;
                if factor != 0.0 {
                    for k in col..n {
                        a[r * n + k] -= factor * a[col * n + k];
                    }
                }
            }
        }
        det
    }

    /// Gauss-Jordan inverse. Fails with [`Error::SingularMatrix`] when
    /// `|det| ≤ tol`.
    pub fn inverse(&self, tol: f64) -> Result<Self> {
        let det = self.determinant();
        if !(math::abs(det) > tol) {
            return Err(Error::SingularMatrix { det, tol });
        }
        let n = self.dim;
        let mut a = self.data.clone();
        let mut inv = Self::identity(n).data;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| {
                    math::abs(a[r * n + col])
                        .partial_cmp(&math::abs(a[s * n + col]))
                        .unwrap_or(core::cmp::Ordering::Equal)
                })
                .unwrap_or(col);
            if pivot != col {
                for k in 0..n {
                    a.swap(col * n + k, pivot * n + k);
                    inv.swap(col * n + k, pivot * n + k);
                }
            }
            let p = a[col * n + col];
            for k in 0..n {
                a[col * n + k] /= p;
                inv[col * n + k] /= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[r * n + col];
                if factor != 0.0 {
                    for k in 0..n {
                        a[r * n + k] -= factor * a[col * n + k];
                        inv[r * n + k] -= factor * inv[col * n + k];
                    }
                }
            }
        }
        Ok(SquareMatrix { dim: n, data: inv })
    }

    /// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted
    /// ascending.
    pub fn symmetric_eigenvalues(&self) -> Result<Vec<f64>> {
        let asym = self.asymmetry();
        if asym > SYMMETRY_TOL {
            return Err(Error::NotSymmetric(asym));
        }
        let n = self.dim;
        let mut a = self.symmetric_part();
        let scale = a.frobenius().max(f64::MIN_POSITIVE);
        for _ in 0..JACOBI_MAX_SWEEPS {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[(i, j)] * a[(i, j)])
                .sum();
            if math::sqrt(off) <= JACOBI_TOL * scale {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[(p, q)];
                    if apq == 0.0 {
                        continue;
                    }
                    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                    let sgn = if theta >= 0.0 { 1.0 } else { -1.0 };
                    let t = sgn / (math::abs(theta) + math::hypot(theta, 1.0));
                    let c = 1.0 / math::hypot(t, 1.0);
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
        eig.sort_by(|x, y| x.partial_cmp(y).unwrap_or(core::cmp::Ordering::Equal));
        Ok(eig)
    }

    /// Sign counts of the eigenvalues of a symmetric matrix.
    pub fn signature(&self, tol: f64) -> Result<Signature> {
        let eig = self.symmetric_eigenvalues()?;
        let mut sig = Signature::new(0, 0, 0);
        for l in eig {
            if math::abs(l) <= tol {
                sig.zero += 1;
            } else if l > 0.0 {
                sig.plus += 1;
            } else {
                sig.minus += 1;
            }
        }
        Ok(sig)
    }
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for SquareMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Free-function form of [`SquareMatrix::determinant`].
pub fn determinant(m: &SquareMatrix) -> f64 {
    m.determinant()
}

/// Free-function form of [`SquareMatrix::inverse`].
pub fn inverse(m: &SquareMatrix, tol: f64) -> Result<SquareMatrix> {
    m.inverse(tol)
}

/// Free-function form of [`SquareMatrix::signature`].
pub fn eigen_signature(m: &SquareMatrix, tol: f64) -> Result<Signature> {
    m.signature(tol)
}

macro_rules! dense_tensor {
    ($name:ident, $rank:literal, ($($idx:ident),+)) => {
        #[derive(Clone, PartialEq, Debug)]
        pub struct $name {
            dim: usize,
            data: Vec<f64>,
        }

        impl $name {
            pub fn zeros(dim: usize) -> Self {
                check_dim(dim);
                $name { dim, data: vec![0.0; dim.pow($rank)] }
            }

            pub fn from_fn(dim: usize, mut f: impl FnMut($(dense_tensor!(@ty $idx)),+) -> f64) -> Self {
                let mut t = Self::zeros(dim);
                let mut pos = 0;
                dense_tensor!(@loop dim, pos, t, f, [$($idx),+], []);
                t
            }

            pub fn dim(&self) -> usize {
                self.dim
            }

            pub fn as_slice(&self) -> &[f64] {
                &self.data
            }

            pub fn as_mut_slice(&mut self) -> &mut [f64] {
                &mut self.data
            }

            pub fn scale(&self, s: f64) -> Self {
                $name { dim: self.dim, data: self.data.iter().map(|v| v * s).collect() }
            }

            pub fn add(&self, other: &Self) -> Self {
                assert_eq!(self.dim, other.dim);
                $name {
                    dim: self.dim,
                    data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
                }
            }

            pub fn sub(&self, other: &Self) -> Self {
                assert_eq!(self.dim, other.dim);
                $name {
                    dim: self.dim,
                    data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
                }
            }

            pub fn max_abs(&self) -> f64 {
                self.data.iter().fold(0.0, |m, v| m.max(math::abs(*v)))
            }

            pub fn max_abs_diff(&self, other: &Self) -> f64 {
                assert_eq!(self.dim, other.dim);
                self.data
                    .iter()
                    .zip(&other.data)
                    .fold(0.0, |m, (a, b)| m.max(math::abs(a - b)))
            }

            pub fn is_finite(&self) -> bool {
                self.data.iter().all(|v| v.is_finite())
            }

            #[inline]
            fn offset(&self, idx: [usize; $rank]) -> usize {
                idx.iter().fold(0, |acc, &i| acc * self.dim + i)
            }
        }

        impl Index<($(dense_tensor!(@ty $idx)),+)> for $name {
            type Output = f64;
            #[inline]
            fn index(&self, ($($idx),+): ($(dense_tensor!(@ty $idx)),+)) -> &f64 {
                &self.data[self.offset([$($idx),+])]
            }
        }

        impl IndexMut<($(dense_tensor!(@ty $idx)),+)> for $name {
            #[inline]
            fn index_mut(&mut self, ($($idx),+): ($(dense_tensor!(@ty $idx)),+)) -> &mut f64 {
                let o = self.offset([$($idx),+]);
                &mut self.data[o]
            }
        }
    };
    (@ty $idx:ident) => { usize };
    (@loop $dim:ident, $pos:ident, $t:ident, $f:ident, [], [$($done:ident),+]) => {
        $t.data[$pos] = $f($($done),+);
        $pos += 1;
    };
    (@loop $dim:ident, $pos:ident, $t:ident, $f:ident, [$head:ident $(, $rest:ident)*], [$($done:ident),*]) => {
        for $head in 0..$dim {
            dense_tensor!(@loop $dim, $pos, $t, $f, [$($rest),*], [$($done,)* $head]);
        }
    };
}

dense_tensor!(Tensor3, 3, (i, j, k));
dense_tensor!(Tensor4, 4, (i, j, k, l));

impl Tensor3 {
    /// Largest `|T_ijk + T_ikj|`.
    pub fn last_pair_asymmetry(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    worst = worst.max(math::abs(self[(i, j, k)] + self[(i, k, j)]));
                }
            }
        }
        worst
    }

    /// `½ (T_ijk - T_ikj)`.
    pub fn antisymmetrize_last_pair(&self) -> Self {
        Tensor3::from_fn(self.dim, |i, j, k| 0.5 * (self[(i, j, k)] - self[(i, k, j)]))
    }

    /// Full contraction `Σ T_ijk U_ijk`.
    pub fn contract_all(&self, other: &Tensor3) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }
}
