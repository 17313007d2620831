//! Dense complex linear algebra on square matrices.
//!
//! Everything here operates on [`ComplexMatrix`], a row-major dense square
//! matrix of `Complex64` entries. Eigenvalues come from a Householder
//! Hessenberg reduction followed by shifted QR iteration, singular values
//! from the Hermitian eigenproblem of the Gram matrix A*A, and linear
//! solves from LU with partial pivoting.

mod det;
mod eigen;
mod schatten;
mod solve;

pub use det::{det_regularized, det_regularized_log};
pub use eigen::{eigenvalues, eigenvalues_raw, hermitian_eigenvalues};
pub use schatten::{det_bound_check, schatten_norm, singular_values, DetBoundCheck};
pub use solve::{inverse, lu_solve, resolvent_apply, resolvent_residual};

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix entries must be finite (found non-finite entry at ({row},{col}))")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix dimension must be positive")]
    EmptyMatrix,
    #[error(
        "QR iteration failed to converge after {iterations} iterations \
         (active block {lo}..={hi}, last subdiagonal magnitude {residual:.3e})"
    )]
    NonConvergence {
        iterations: usize,
        lo: usize,
        hi: usize,
        residual: f64,
    },
    #[error("shift {shift} is within tolerance of the spectrum (pivot magnitude {pivot:.3e})")]
    SingularShift { shift: Complex64, pivot: f64 },
    #[error("invalid Schatten order p = {0}; p must be positive and finite")]
    InvalidOrder(f64),
    #[error("regularization order n must be >= 1")]
    InvalidRegularization,
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// Dense square matrix of complex scalars, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major data, checking shape and finiteness.
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(LinalgError::EmptyMatrix);
        }
        if data.len() != dim * dim {
            return Err(LinalgError::DimensionMismatch(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        let m = Self { dim, data };
        m.check_finite()?;
        Ok(m)
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    fn check_finite(&self) -> Result<()> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                if !self[(i, j)].is_finite() {
                    return Err(LinalgError::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.is_finite())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self[(i, k)];
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += aik * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Shifted copy: self + c*I.
    pub fn add_scalar_diag(&self, c: Complex64) -> Self {
        let mut m = self.clone();
        for i in 0..self.dim {
            m[(i, i)] += c;
        }
        m
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest singular value (operator 2-norm).
    pub fn operator_norm(&self) -> Result<f64> {
        let sv = singular_values(self)?;
        Ok(sv.first().copied().unwrap_or(0.0))
    }

    /// Hermiticity defect max_ij |a_ij - conj(a_ji)|.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Hermitian part (A + A*)/2.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} vs {}",
                self.dim, other.dim
            )));
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Eigenvalues clustered into (value, algebraic multiplicity) pairs.
#[derive(Debug, Clone)]
pub struct Spectrum {
    items: Vec<(Complex64, usize)>,
    cluster_tol: f64,
}

impl Spectrum {
    /// Greedy clustering of raw eigenvalues at `cluster_tol`, followed by a
    /// merge pass so that distinct representatives stay separated by more
    /// than the tolerance.
    pub fn from_raw(mut raw: Vec<Complex64>, cluster_tol: f64) -> Self {
        raw.sort_by(|a, b| {
            a.re.partial_cmp(&b.re)
                .unwrap()
                .then(a.im.partial_cmp(&b.im).unwrap())
        });
        // (sum, count) accumulators; representative is the running mean.
        let mut clusters: Vec<(Complex64, usize)> = Vec::new();
        'outer: for z in raw {
            for (sum, count) in clusters.iter_mut() {
                let mean = *sum / *count as f64;
                if (z - mean).norm() <= cluster_tol {
                    *sum += z;
                    *count += 1;
                    continue 'outer;
                }
            }
            clusters.push((z, 1));
        }
        // Merge until all representatives are pairwise separated.
        loop {
            let mut merged = false;
            'merge: for i in 0..clusters.len() {
                for j in (i + 1)..clusters.len() {
                    let mi = clusters[i].0 / clusters[i].1 as f64;
                    let mj = clusters[j].0 / clusters[j].1 as f64;
                    if (mi - mj).norm() <= cluster_tol {
                        let (sj, cj) = clusters.remove(j);
                        clusters[i].0 += sj;
                        clusters[i].1 += cj;
                        merged = true;
                        break 'merge;
                    }
                }
            }
            if !merged {
                break;
            }
        }
        let mut items: Vec<(Complex64, usize)> = clusters
            .into_iter()
            .map(|(sum, count)| (sum / count as f64, count))
            .collect();
        items.sort_by(|a, b| {
            a.0.re
                .partial_cmp(&b.0.re)
                .unwrap()
                .then(a.0.im.partial_cmp(&b.0.im).unwrap())
        });
        Self { items, cluster_tol }
    }

    pub fn items(&self) -> &[(Complex64, usize)] {
        &self.items
    }

    pub fn cluster_tol(&self) -> f64 {
        self.cluster_tol
    }

    /// Sum of algebraic multiplicities.
    pub fn total_multiplicity(&self) -> usize {
        self.items.iter().map(|(_, m)| m).sum()
    }

    pub fn values(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.items.iter().map(|(z, _)| *z)
    }
}

/// Schatten order p together with the smallest integer regularization
/// order ceil(p) = min { n in N : n >= p }.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchattenOrder {
    p: f64,
    ceil_p: u32,
}

impl SchattenOrder {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0) || !p.is_finite() {
            return Err(LinalgError::InvalidOrder(p));
        }
        let ceil_p = p.ceil() as u32;
        debug_assert!(f64::from(ceil_p) - 1.0 < p && p <= f64::from(ceil_p));
        Ok(Self { p, ceil_p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn ceil_p(&self) -> u32 {
        self.ceil_p
    }
}

/// The constant Gamma_p of the determinant inequality
/// |det_ceil(p)(I - C)| <= exp(Gamma_p ||C||_p^p).
///
/// Gamma_p = 1/p for p <= 1 and Gamma_2 = 1/2 are exact; elsewhere the
/// explicit upper bound e(2 + log p) is used, giving a valid (possibly
/// loose) instance of the inequality.
#[derive(Debug, Clone, Copy)]
pub struct GammaConstant {
    pub p: f64,
    pub gamma: f64,
}

impl GammaConstant {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0) || !p.is_finite() {
            return Err(LinalgError::InvalidOrder(p));
        }
        let gamma = if p <= 1.0 {
            1.0 / p
        } else if p == 2.0 {
            0.5
        } else {
            std::f64::consts::E * (2.0 + p.ln())
        };
        Ok(Self { p, gamma })
    }
}

/// Default clustering tolerance 1e-8 * (1 + ||A||_F).
pub fn default_cluster_tol(a: &ComplexMatrix) -> f64 {
    1e-8 * (1.0 + a.frobenius_norm())
}
