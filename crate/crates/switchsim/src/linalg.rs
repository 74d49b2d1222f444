//! Dense complex linear algebra over small tensor-product spaces.
//!
//! [`CMatrix`] is the universal carrier for states, operators and Choi
//! matrices in this crate. Every matrix carries an explicit factor shape for
//! its rows and columns, so partial traces and factor permutations never have
//! to guess how a Hilbert space splits into subsystems. All dimensions in
//! this crate are at most 64, so dense storage is used throughout.

use crate::{Error, Result};
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

/// Dense complex matrix in row-major storage with tensor-factor bookkeeping.
///
/// Invariant: `product(row_shape) == rows` and `product(col_shape) == cols`.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    row_shape: Vec<usize>,
    col_shape: Vec<usize>,
    data: Vec<Complex64>,
}

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

impl CMatrix {
    pub fn zeros(row_shape: &[usize], col_shape: &[usize]) -> Self {
        let rows: usize = row_shape.iter().product();
        let cols: usize = col_shape.iter().product();
        CMatrix {
            row_shape: row_shape.to_vec(),
            col_shape: col_shape.to_vec(),
            data: vec![ZERO; rows * cols],
        }
    }

    /// Identity operator with the given factor shape on both sides.
    pub fn identity(shape: &[usize]) -> Self {
        let mut m = CMatrix::zeros(shape, shape);
        let n = m.rows();
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_rows(row_shape: &[usize], col_shape: &[usize], entries: &[Complex64]) -> Self {
        let rows: usize = row_shape.iter().product();
        let cols: usize = col_shape.iter().product();
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        CMatrix {
            row_shape: row_shape.to_vec(),
            col_shape: col_shape.to_vec(),
            data: entries.to_vec(),
        }
    }

    /// Column vector on the given factor shape.
    pub fn col_vector(shape: &[usize], entries: &[Complex64]) -> Self {
        CMatrix::from_rows(shape, &[1], entries)
    }

    /// Computational basis column vector `|index>` on a space of dimension
    /// `product(shape)`.
    pub fn basis_ket(shape: &[usize], index: usize) -> Self {
        let mut v = CMatrix::zeros(shape, &[1]);
        v.data[index] = ONE;
        v
    }

    pub fn rows(&self) -> usize {
        self.row_shape.iter().product()
    }

    pub fn cols(&self) -> usize {
        self.col_shape.iter().product()
    }

    pub fn row_shape(&self) -> &[usize] {
        &self.row_shape
    }

    pub fn col_shape(&self) -> &[usize] {
        &self.col_shape
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        let cols = self.cols();
        self.data[i * cols + j] = v;
    }

    /// Replaces the factor shapes without touching the entries.
    pub fn with_shape(mut self, row_shape: &[usize], col_shape: &[usize]) -> Self {
        assert_eq!(
            row_shape.iter().product::<usize>(),
            self.rows(),
            "row shape product mismatch"
        );
        assert_eq!(
            col_shape.iter().product::<usize>(),
            self.cols(),
            "col shape product mismatch"
        );
        self.row_shape = row_shape.to_vec();
        self.col_shape = col_shape.to_vec();
        self
    }

    pub fn dagger(&self) -> CMatrix {
        let (r, c_) = (self.rows(), self.cols());
        let mut out = CMatrix::zeros(&self.col_shape, &self.row_shape);
        for i in 0..r {
            for j in 0..c_ {
                out.data[j * r + i] = self.data[i * c_ + j].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> CMatrix {
        let (r, c_) = (self.rows(), self.cols());
        let mut out = CMatrix::zeros(&self.col_shape, &self.row_shape);
        for i in 0..r {
            for j in 0..c_ {
                out.data[j * r + i] = self.data[i * c_ + j];
            }
        }
        out
    }

    pub fn conj(&self) -> CMatrix {
        let mut out = self.clone();
        for v in &mut out.data {
            *v = v.conj();
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> CMatrix {
        let mut out = self.clone();
        for v in &mut out.data {
            *v *= s;
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of non-square matrix");
        let n = self.rows();
        (0..n).map(|i| self.data[i * n + i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.rows(), other.rows());
        assert_eq!(self.cols(), other.cols());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.max_abs_diff(&self.dagger()) <= tol
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> CMatrix {
        self.add_ref(&self.dagger()).scale(cr(0.5))
    }

    fn add_ref(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.rows(), other.rows());
        assert_eq!(self.cols(), other.cols());
        let mut out = self.clone();
        for (v, w) in out.data.iter_mut().zip(&other.data) {
            *v += w;
        }
        out
    }

    fn sub_ref(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.rows(), other.rows());
        assert_eq!(self.cols(), other.cols());
        let mut out = self.clone();
        for (v, w) in out.data.iter_mut().zip(&other.data) {
            *v -= w;
        }
        out
    }

    fn mul_ref(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(
            self.cols(),
            other.rows(),
            "matmul dimension mismatch {}x{} * {}x{}",
            self.rows(),
            self.cols(),
            other.rows(),
            other.cols()
        );
        let (r, k, c_) = (self.rows(), self.cols(), other.cols());
        let mut out = CMatrix::zeros(&self.row_shape, &other.col_shape);
        for i in 0..r {
            for l in 0..k {
                let a = self.data[i * k + l];
                if a == ZERO {
                    continue;
                }
                for j in 0..c_ {
                    out.data[i * c_ + j] += a * other.data[l * c_ + j];
                }
            }
        }
        out
    }

    /// Inner product `<self|other>` for column vectors.
    pub fn inner(&self, other: &CMatrix) -> Complex64 {
        assert_eq!(self.cols(), 1);
        assert_eq!(other.cols(), 1);
        assert_eq!(self.rows(), other.rows());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Outer product `|self><other|` for column vectors.
    pub fn outer(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols(), 1);
        assert_eq!(other.cols(), 1);
        let mut out = CMatrix::zeros(&self.row_shape, &other.row_shape);
        let c_ = other.rows();
        for i in 0..self.rows() {
            for j in 0..c_ {
                out.data[i * c_ + j] = self.data[i] * other.data[j].conj();
            }
        }
        out
    }

    /// Kronecker product with concatenated factor shapes.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let mut row_shape = self.row_shape.clone();
        row_shape.extend_from_slice(&other.row_shape);
        let mut col_shape = self.col_shape.clone();
        col_shape.extend_from_slice(&other.col_shape);
        let (ra, ca) = (self.rows(), self.cols());
        let (rb, cb) = (other.rows(), other.cols());
        let mut out = CMatrix::zeros(&row_shape, &col_shape);
        let cols = ca * cb;
        for ia in 0..ra {
            for ja in 0..ca {
                let a = self.data[ia * ca + ja];
                if a == ZERO {
                    continue;
                }
                for ib in 0..rb {
                    for jb in 0..cb {
                        out.data[(ia * rb + ib) * cols + (ja * cb + jb)] =
                            a * other.data[ib * cb + jb];
                    }
                }
            }
        }
        out
    }

    /// Partial trace over the named factors (0-based indices into the shared
    /// row/col factor shape). Remaining factors keep their relative order.
    pub fn partial_trace(&self, traced_factors: &[usize]) -> Result<CMatrix> {
        if !self.is_square() || self.row_shape != self.col_shape {
            return Err(Error::NotSquare {
                rows: self.rows(),
                cols: self.cols(),
            });
        }
        let nf = self.row_shape.len();
        for &t in traced_factors {
            if t >= nf {
                return Err(Error::FactorOutOfRange {
                    index: t,
                    n_factors: nf,
                });
            }
        }
        let traced: Vec<bool> = (0..nf).map(|f| traced_factors.contains(&f)).collect();
        let kept: Vec<usize> = (0..nf).filter(|f| !traced[*f]).collect();
        let kept_shape: Vec<usize> = kept.iter().map(|&f| self.row_shape[f]).collect();
        let kept_shape = if kept_shape.is_empty() {
            vec![1]
        } else {
            kept_shape
        };
        let mut out = CMatrix::zeros(&kept_shape, &kept_shape);

        // strides of each factor in the flat index
        let mut strides = vec![1usize; nf];
        for f in (0..nf.saturating_sub(1)).rev() {
            strides[f] = strides[f + 1] * self.row_shape[f + 1];
        }
        let kept_dim: usize = kept_shape.iter().product();
        let traced_dims: Vec<usize> = (0..nf)
            .filter(|f| traced[*f])
            .map(|f| self.row_shape[f])
            .collect();
        let traced_idx: Vec<usize> = (0..nf).filter(|f| traced[*f]).collect();
        let traced_total: usize = traced_dims.iter().product();

        // map a kept linear index to its contribution in the flat index
        let flat_of = |factors: &[usize], linear: usize, shape_src: &CMatrix| -> usize {
            let mut rem = linear;
            let mut flat = 0;
            for (pos, &f) in factors.iter().enumerate().rev() {
                let d = shape_src.row_shape[f];
                flat += (rem % d) * strides[f];
                rem /= d;
                let _ = pos;
            }
            flat
        };

        let n = self.rows();
        for kr in 0..kept_dim {
            let base_r = flat_of(&kept, kr, self);
            for kc in 0..kept_dim {
                let base_c = flat_of(&kept, kc, self);
                let mut sum = ZERO;
                for t in 0..traced_total {
                    let off = flat_of(&traced_idx, t, self);
                    sum += self.data[(base_r + off) * n + (base_c + off)];
                }
                out.data[kr * kept_dim + kc] = sum;
            }
        }
        Ok(out)
    }

    /// Reorders the tensor factors of a square operator. `perm[k]` names the
    /// old factor that lands at position `k`.
    pub fn permute_factors(&self, perm: &[usize]) -> CMatrix {
        assert!(self.is_square() && self.row_shape == self.col_shape);
        let nf = self.row_shape.len();
        assert_eq!(perm.len(), nf);
        let new_shape: Vec<usize> = perm.iter().map(|&f| self.row_shape[f]).collect();
        let mut strides = vec![1usize; nf];
        for f in (0..nf.saturating_sub(1)).rev() {
            strides[f] = strides[f + 1] * self.row_shape[f + 1];
        }
        let n = self.rows();
        let mut out = CMatrix::zeros(&new_shape, &new_shape);
        // decompose new linear index into old flat index
        let old_flat = |linear: usize| -> usize {
            let mut rem = linear;
            let mut flat = 0;
            for k in (0..nf).rev() {
                let d = new_shape[k];
                flat += (rem % d) * strides[perm[k]];
                rem /= d;
            }
            flat
        };
        for i in 0..n {
            let oi = old_flat(i);
            for j in 0..n {
                out.data[i * n + j] = self.data[oi * n + old_flat(j)];
            }
        }
        out
    }

    /// Permutes the factors of a column vector.
    pub fn permute_vector_factors(&self, perm: &[usize]) -> CMatrix {
        assert_eq!(self.cols(), 1);
        let nf = self.row_shape.len();
        assert_eq!(perm.len(), nf);
        let new_shape: Vec<usize> = perm.iter().map(|&f| self.row_shape[f]).collect();
        let mut strides = vec![1usize; nf];
        for f in (0..nf.saturating_sub(1)).rev() {
            strides[f] = strides[f + 1] * self.row_shape[f + 1];
        }
        let mut out = CMatrix::zeros(&new_shape, &[1]);
        let n = self.rows();
        for i in 0..n {
            let mut rem = i;
            let mut flat = 0;
            for k in (0..nf).rev() {
                let d = new_shape[k];
                flat += (rem % d) * strides[perm[k]];
                rem /= d;
            }
            out.data[i] = self.data[flat];
        }
        out
    }

    fn to_na(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows(), self.cols(), |i, j| self.get(i, j))
    }


    /// Eigendecomposition of a Hermitian matrix. Returns eigenvalues in
    /// ascending order and the matrix whose columns are the eigenvectors.
    pub fn hermitian_eigen(&self) -> (Vec<f64>, CMatrix) {
        assert!(
            self.is_hermitian(1e-9),
            "hermitian_eigen on a non-Hermitian matrix"
        );
        let eig = SymmetricEigen::new(self.hermitian_part().to_na());
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let vals: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let n = self.rows();
        let mut vecs = CMatrix::zeros(&self.row_shape, &self.row_shape);
        for (jnew, &jold) in order.iter().enumerate() {
            for i in 0..n {
                vecs.data[i * n + jnew] = eig.eigenvectors[(i, jold)];
            }
        }
        (vals, vecs)
    }

    /// Thin singular value decomposition `M ≈ U diag(s) V†` with singular
    /// values in descending order. Computed from the Hermitian embedding
    /// `[[0, M], [M†, 0]]`, whose positive eigenpairs are the singular
    /// triplets; singular values below `1e-13 · max(1, s_max)` are omitted.
    pub fn svd(&self) -> (CMatrix, Vec<f64>, CMatrix) {
        let (m, n) = (self.rows(), self.cols());
        let mut emb = CMatrix::zeros(&[m + n], &[m + n]);
        for i in 0..m {
            for j in 0..n {
                let v = self.get(i, j);
                emb.data[i * (m + n) + (m + j)] = v;
                emb.data[(m + j) * (m + n) + i] = v.conj();
            }
        }
        let (vals, vecs) = emb.hermitian_eigen();
        let smax = vals.last().map(|v| v.abs()).unwrap_or(0.0);
        let cutoff = 1e-13 * smax.max(1.0);
        // eigenvalues ascending: positive ones from the top are the singular
        // values in descending order
        let mut s = Vec::new();
        let mut cols_u: Vec<Vec<Complex64>> = Vec::new();
        let mut rows_vt: Vec<Vec<Complex64>> = Vec::new();
        let root2 = 2f64.sqrt();
        for idx in (0..vals.len()).rev() {
            let sigma = vals[idx];
            if sigma <= cutoff {
                break;
            }
            s.push(sigma);
            let mut u = Vec::with_capacity(m);
            for i in 0..m {
                u.push(vecs.get(i, idx) * root2);
            }
            let mut vt = Vec::with_capacity(n);
            for j in 0..n {
                vt.push(vecs.get(m + j, idx).conj() * root2);
            }
            cols_u.push(u);
            rows_vt.push(vt);
        }
        let k = s.len();
        let mut um = CMatrix::zeros(&[m], &[k.max(1)]);
        let mut vtm = CMatrix::zeros(&[k.max(1)], &[n]);
        for (c_idx, u) in cols_u.iter().enumerate() {
            for i in 0..m {
                um.data[i * k + c_idx] = u[i];
            }
        }
        for (r_idx, vt) in rows_vt.iter().enumerate() {
            for j in 0..n {
                vtm.data[r_idx * n + j] = vt[j];
            }
        }
        (um, s, vtm)
    }

    /// Sum of singular values.
    pub fn trace_norm(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows(),
                cols: self.cols(),
            });
        }
        if self.is_hermitian(1e-11) {
            let (vals, _) = self.hermitian_eigen();
            return Ok(vals.iter().map(|v| v.abs()).sum());
        }
        let svd = self.to_na().svd(false, false);
        Ok(svd.singular_values.iter().sum())
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> f64 {
        let svd = self.to_na().svd(false, false);
        svd.singular_values.iter().cloned().fold(0.0, f64::max)
    }

    /// Hermitian PSD square root. Eigenvalues in `[-1e-10, 0)` are clamped to
    /// zero; anything lower is rejected as non-PSD.
    pub fn sqrt_psd(&self) -> Result<CMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows(),
                cols: self.cols(),
            });
        }
        let (vals, vecs) = self.hermitian_eigen();
        if let Some(&min) = vals.first() {
            if min < -1e-10 {
                return Err(Error::NotPsd { min_eig: min });
            }
        }
        let n = self.rows();
        let mut out = CMatrix::zeros(&self.row_shape, &self.row_shape);
        for k in 0..n {
            let s = vals[k].max(0.0).sqrt();
            if s == 0.0 {
                continue;
            }
            for i in 0..n {
                let vi = vecs.data[i * n + k];
                for j in 0..n {
                    out.data[i * n + j] += cr(s) * vi * vecs.data[j * n + k].conj();
                }
            }
        }
        Ok(out)
    }

    /// Column `j` as a vector with the row factor shape.
    pub fn column(&self, j: usize) -> CMatrix {
        let mut v = CMatrix::zeros(&self.row_shape, &[1]);
        for i in 0..self.rows() {
            v.data[i] = self.get(i, j);
        }
        v
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        self.add_ref(rhs)
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        self.sub_ref(rhs)
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.mul_ref(rhs)
    }
}

/// Pauli X on one qubit.
pub fn pauli_x() -> CMatrix {
    CMatrix::from_rows(&[2], &[2], &[ZERO, ONE, ONE, ZERO])
}

/// Pauli Y on one qubit.
pub fn pauli_y() -> CMatrix {
    CMatrix::from_rows(&[2], &[2], &[ZERO, -I, I, ZERO])
}

/// Pauli Z on one qubit.
pub fn pauli_z() -> CMatrix {
    CMatrix::from_rows(&[2], &[2], &[ONE, ZERO, ZERO, -ONE])
}

pub fn ket0() -> CMatrix {
    CMatrix::basis_ket(&[2], 0)
}

pub fn ket1() -> CMatrix {
    CMatrix::basis_ket(&[2], 1)
}

/// `(|0> + |1>)/sqrt(2)`.
pub fn ket_plus() -> CMatrix {
    CMatrix::col_vector(&[2], &[cr(1.0 / 2f64.sqrt()), cr(1.0 / 2f64.sqrt())])
}

/// `(|0> - |1>)/sqrt(2)`.
pub fn ket_minus() -> CMatrix {
    CMatrix::col_vector(&[2], &[cr(1.0 / 2f64.sqrt()), cr(-1.0 / 2f64.sqrt())])
}

/// Unnormalized maximally entangled vector `|I>> = sum_n |n>|n>` on d x d.
pub fn max_entangled(d: usize) -> CMatrix {
    let mut v = CMatrix::zeros(&[d, d], &[1]);
    for n in 0..d {
        v.data[n * d + n] = ONE;
    }
    v
}

/// Double ket `|M>> = (M ⊗ I)|I>>` in the computational basis.
pub fn double_ket(m: &CMatrix) -> CMatrix {
    assert!(m.is_square());
    let d = m.rows();
    let mut v = CMatrix::zeros(&[d, d], &[1]);
    for i in 0..d {
        for n in 0..d {
            v.data[i * d + n] = m.get(i, n);
        }
    }
    v
}

/// Pure state on the Bloch sphere: `cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`.
pub fn bloch_ket(theta: f64, phi: f64) -> CMatrix {
    CMatrix::col_vector(
        &[2],
        &[
            cr((theta / 2.0).cos()),
            Complex64::from_polar((theta / 2.0).sin(), phi),
        ],
    )
}
