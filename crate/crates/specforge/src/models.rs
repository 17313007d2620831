//! Construction of finite-dimensional test operators: Dirichlet
//! finite-difference Laplacians, diagonal complex potentials, numerical-range
//! margins, and seeded abstract diagonal-plus-dense models.

use crate::linalg::{
    hermitian_eigenvalues, lu_solve, ComplexMatrix, LinalgError, SchattenOrder,
};
use crate::perturbation::{ModelTriple, PerturbationError};
use crate::rng::SplitMix64;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard cap on surrogate matrix dimension.
pub const MAX_DIM: usize = 4096;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("grid must have d in 1..=3, n >= 2 and h > 0 (got d={d}, n={n}, h={h})")]
    BadGrid { d: u32, n: usize, h: f64 },
    #[error("grid dimension {0} exceeds the cap {MAX_DIM}")]
    DimensionOverflow(usize),
    #[error("potential value at grid point {0} is not finite")]
    NonFinitePotential(usize),
    #[error("custom potential table has {got} values, grid has {expected} points")]
    TableSizeMismatch { got: usize, expected: usize },
    #[error("linear algebra failure: {0}")]
    Linalg(#[from] LinalgError),
    #[error("model assembly failure: {0}")]
    Perturbation(#[from] PerturbationError),
    #[error("model dimension must be >= 1")]
    EmptyModel,
}

pub type Result<T> = std::result::Result<T, ModelError>;

/// Uniform grid on the box [-L, L]^d with L = n h / 2 and cell-centered
/// points x_i = -L + (i + 1/2) h per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub d: u32,
    pub n: usize,
    pub h: f64,
}

impl GridSpec {
    pub fn new(d: u32, n: usize, h: f64) -> Result<Self> {
        let spec = Self { d, n, h };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.d) || self.n < 2 || !(self.h > 0.0) {
            return Err(ModelError::BadGrid {
                d: self.d,
                n: self.n,
                h: self.h,
            });
        }
        if self.dim() > MAX_DIM {
            return Err(ModelError::DimensionOverflow(self.dim()));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n.pow(self.d)
    }

    /// Box half-width.
    pub fn half_width(&self) -> f64 {
        self.n as f64 * self.h / 2.0
    }

    /// Coordinates of the flattened grid point `idx` (row-major over axes).
    pub fn point(&self, idx: usize) -> Vec<f64> {
        let l = self.half_width();
        let mut rest = idx;
        let mut coords = vec![0.0; self.d as usize];
        for axis in (0..self.d as usize).rev() {
            let i = rest % self.n;
            rest /= self.n;
            coords[axis] = -l + (i as f64 + 0.5) * self.h;
        }
        coords
    }
}

/// Complex potential on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    /// V(x) = (amp_re + i amp_im) exp(-|x|^2 / width^2).
    GaussianComplex {
        amp_re: f64,
        amp_im: f64,
        width: f64,
    },
    /// V(x) = (amp_re + i amp_im) exp(-decay |x|^exponent); exponent < 1/2
    /// realizes the slow super-exponential decay regime.
    PavlovDecay {
        amp_re: f64,
        amp_im: f64,
        decay: f64,
        exponent: f64,
    },
    /// Explicit per-grid-point values (re, im), row-major.
    CustomTable { values: Vec<(f64, f64)> },
}

impl PotentialSpec {
    pub fn eval(&self, x: &[f64], idx: usize) -> Complex64 {
        let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        match self {
            Self::GaussianComplex {
                amp_re,
                amp_im,
                width,
            } => Complex64::new(*amp_re, *amp_im) * (-(r / width).powi(2)).exp(),
            Self::PavlovDecay {
                amp_re,
                amp_im,
                decay,
                exponent,
            } => Complex64::new(*amp_re, *amp_im) * (-decay * r.powf(*exponent)).exp(),
            Self::CustomTable { values } => {
                let (re, im) = values[idx];
                Complex64::new(re, im)
            }
        }
    }

    /// Scales the amplitude by a real factor t (V -> tV).
    pub fn scaled(&self, t: f64) -> Self {
        match self {
            Self::GaussianComplex {
                amp_re,
                amp_im,
                width,
            } => Self::GaussianComplex {
                amp_re: amp_re * t,
                amp_im: amp_im * t,
                width: *width,
            },
            Self::PavlovDecay {
                amp_re,
                amp_im,
                decay,
                exponent,
            } => Self::PavlovDecay {
                amp_re: amp_re * t,
                amp_im: amp_im * t,
                decay: *decay,
                exponent: *exponent,
            },
            Self::CustomTable { values } => Self::CustomTable {
                values: values.iter().map(|(re, im)| (re * t, im * t)).collect(),
            },
        }
    }
}

/// Dirichlet finite-difference Laplacian: tridiagonal (2, -1)/h^2 in 1D,
/// Kronecker sums in higher dimension. Real symmetric with nonnegative
/// spectrum 2(1 - cos(k pi / (n+1)))/h^2 per axis.
pub fn build_laplacian(g: &GridSpec) -> Result<ComplexMatrix> {
    g.validate()?;
    let n = g.n;
    let dim = g.dim();
    let inv_h2 = 1.0 / (g.h * g.h);
    let mut m = ComplexMatrix::zeros(dim);
    // Decode the flattened index per axis; neighbors differ by one step of
    // the axis stride.
    let d = g.d as usize;
    let mut strides = vec![1usize; d];
    for axis in (0..d.saturating_sub(1)).rev() {
        strides[axis] = strides[axis + 1] * n;
    }
    for idx in 0..dim {
        m[(idx, idx)] = Complex64::new(2.0 * d as f64 * inv_h2, 0.0);
        for &stride in &strides {
            let pos = idx / stride % n;
            if pos + 1 < n {
                let j = idx + stride;
                m[(idx, j)] = Complex64::new(-inv_h2, 0.0);
                m[(j, idx)] = Complex64::new(-inv_h2, 0.0);
            }
        }
    }
    Ok(m)
}

/// Diagonal potential matrix together with the grid L^p norm
/// (sum |V(x_i)|^p h^d)^(1/p).
pub fn build_potential(
    g: &GridSpec,
    v: &PotentialSpec,
    p: f64,
) -> Result<(ComplexMatrix, f64)> {
    g.validate()?;
    let dim = g.dim();
    if let PotentialSpec::CustomTable { values } = v {
        if values.len() != dim {
            return Err(ModelError::TableSizeMismatch {
                got: values.len(),
                expected: dim,
            });
        }
    }
    let cell = g.h.powi(g.d as i32);
    let mut diag = Vec::with_capacity(dim);
    let mut norm_p = 0.0;
    for idx in 0..dim {
        let x = g.point(idx);
        let val = v.eval(&x, idx);
        if !val.is_finite() {
            return Err(ModelError::NonFinitePotential(idx));
        }
        norm_p += val.norm().powf(p) * cell;
        diag.push(val);
    }
    Ok((ComplexMatrix::diagonal(&diag), norm_p.powf(1.0 / p)))
}

/// The numerical-range margin: omega0 = max(0, -lambda_min((H+H*)/2)),
/// with a witness vector attaining the minimal Rayleigh quotient.
#[derive(Debug, Clone)]
pub struct Omega0Result {
    pub omega0: f64,
    pub witness: Vec<Complex64>,
}

pub fn compute_omega0(h: &ComplexMatrix) -> Result<Omega0Result> {
    let sym = h.hermitian_part();
    let eigs = hermitian_eigenvalues(&sym)?;
    let lambda_min = *eigs.first().ok_or(ModelError::EmptyModel)?;
    let witness = inverse_iteration(&sym, lambda_min)?;
    Ok(Omega0Result {
        omega0: (-lambda_min).max(0.0),
        witness,
    })
}

/// A few steps of shifted inverse iteration to recover the eigenvector of
/// the Hermitian matrix `sym` at the computed eigenvalue `target`.
fn inverse_iteration(sym: &ComplexMatrix, target: f64) -> Result<Vec<Complex64>> {
    let n = sym.dim();
    let scale = 1.0 + sym.frobenius_norm();
    let shift = Complex64::new(target + 1e-10 * scale, 0.0);
    let shifted = sym.add_scalar_diag(-shift);
    let mut rng = SplitMix64::new(0x5EED);
    let mut v: Vec<Complex64> = (0..n).map(|_| rng.complex_uniform(-1.0, 1.0)).collect();
    normalize(&mut v);
    for _ in 0..3 {
        // Solve (S - shift) w = v; iterate amplifies the target component.
        let rhs = ComplexMatrix::from_fn(n, |i, j| if j == 0 { v[i] } else { Complex64::new(0.0, 0.0) });
        let solved = match lu_solve(&shifted, &rhs) {
            Ok(x) => x,
            // Shift fell on the spectrum to machine precision; the current
            // iterate is already an excellent eigenvector.
            Err(LinalgError::SingularShift { .. }) => break,
            Err(e) => return Err(ModelError::Linalg(e)),
        };
        for (i, slot) in v.iter_mut().enumerate() {
            *slot = solved[(i, 0)];
        }
        normalize(&mut v);
    }
    Ok(v)
}

fn normalize(v: &mut [Complex64]) {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for z in v.iter_mut() {
            *z /= norm;
        }
    }
}

/// Rayleigh quotient Re<Hf, f> / <f, f>.
pub fn rayleigh_re(h: &ComplexMatrix, f: &[Complex64]) -> f64 {
    let hf = h.apply(f);
    let num: Complex64 = f
        .iter()
        .zip(&hf)
        .map(|(fi, hfi)| fi.conj() * hfi)
        .sum();
    let den: f64 = f.iter().map(|z| z.norm_sqr()).sum();
    num.re / den
}

/// Deterministic abstract model from a seed: H0 diagonal with entries
/// uniform in [0, 10], M dense complex scaled to operator norm
/// `spectral_radius_m`, a = 1.5 sqrt(omega0 + 1) and p = 2.
///
/// Draw order (for cross-language reproduction): H0 diagonal entries first,
/// then M row-major with the real part before the imaginary part.
pub fn build_abstract_model(seed: u64, dim: usize, spectral_radius_m: f64) -> Result<ModelTriple> {
    if dim == 0 {
        return Err(ModelError::EmptyModel);
    }
    let mut rng = SplitMix64::new(seed);
    let diag: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.uniform(0.0, 10.0), 0.0))
        .collect();
    let h0 = ComplexMatrix::diagonal(&diag);
    let mut m = ComplexMatrix::from_fn(dim, |_, _| Complex64::new(0.0, 0.0));
    for i in 0..dim {
        for j in 0..dim {
            m[(i, j)] = rng.complex_uniform(-1.0, 1.0);
        }
    }
    let op_norm = m.operator_norm()?;
    if op_norm > 0.0 && spectral_radius_m > 0.0 {
        m = m.scale(Complex64::new(spectral_radius_m / op_norm, 0.0));
    } else {
        m = ComplexMatrix::zeros(dim);
    }
    let h = h0.add(&m)?;
    let omega0 = compute_omega0(&h)?.omega0;
    let a = 1.5 * (omega0 + 1.0).sqrt();
    Ok(ModelTriple::new(
        h0,
        m,
        a,
        omega0,
        SchattenOrder::new(2.0).map_err(ModelError::Linalg)?,
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(1, 2, 0.5).is_ok());
        assert!(GridSpec::new(0, 4, 0.5).is_err());
        assert!(GridSpec::new(4, 4, 0.5).is_err());
        assert!(GridSpec::new(1, 1, 0.5).is_err());
        assert!(GridSpec::new(1, 4, 0.0).is_err());
        // 17^3 = 4913 > 4096.
        assert!(GridSpec::new(3, 17, 0.5).is_err());
        assert!(GridSpec::new(3, 16, 0.5).is_ok());
    }

    /// Known 1D spectrum: 2 - 2 cos(k pi / (n+1)) for h = 1.
    #[test]
    fn laplacian_1d_spectrum() {
        let g = GridSpec::new(1, 3, 1.0).unwrap();
        let lap = build_laplacian(&g).unwrap();
        assert!(lap.hermitian_defect() == 0.0);
        let ev = hermitian_eigenvalues(&lap).unwrap();
        let expect = [2.0 - 2f64.sqrt(), 2.0, 2.0 + 2f64.sqrt()];
        for (got, want) in ev.iter().zip(expect) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    /// 2D spectrum is the set of pairwise sums of 1D eigenvalues.
    #[test]
    fn laplacian_2d_kronecker_sum() {
        let g1 = GridSpec::new(1, 2, 1.0).unwrap();
        let e1 = hermitian_eigenvalues(&build_laplacian(&g1).unwrap()).unwrap();
        let g2 = GridSpec::new(2, 2, 1.0).unwrap();
        let lap2 = build_laplacian(&g2).unwrap();
        assert_eq!(lap2.dim(), 4);
        let mut expect: Vec<f64> = e1
            .iter()
            .flat_map(|a| e1.iter().map(move |b| a + b))
            .collect();
        expect.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let got = hermitian_eigenvalues(&lap2).unwrap();
        for (g, w) in got.iter().zip(expect) {
            assert!((g - w).abs() < 1e-12);
        }
    }

    #[test]
    fn laplacian_nonnegative_spectrum() {
        for (d, n) in [(1u32, 9usize), (2, 5), (3, 3)] {
            let g = GridSpec::new(d, n, 0.7).unwrap();
            let lap = build_laplacian(&g).unwrap();
            let ev = hermitian_eigenvalues(&lap).unwrap();
            assert!(ev[0] >= -1e-10, "min eig {}", ev[0]);
        }
    }

    #[test]
    fn zero_potential() {
        let g = GridSpec::new(1, 4, 1.0).unwrap();
        let v = PotentialSpec::CustomTable {
            values: vec![(0.0, 0.0); 4],
        };
        let (m, norm) = build_potential(&g, &v, 2.0).unwrap();
        assert_eq!(norm, 0.0);
        assert_eq!(m.max_abs(), 0.0);
    }

    /// Constant potential on n points in 1D with h = 1: norm |c| n^(1/p).
    #[test]
    fn constant_potential_norm() {
        let g = GridSpec::new(1, 5, 1.0).unwrap();
        let v = PotentialSpec::CustomTable {
            values: vec![(0.3, -0.4); 5],
        };
        for p in [1.0, 2.0, 3.0] {
            let (_, norm) = build_potential(&g, &v, p).unwrap();
            let expect = 0.5 * 5f64.powf(1.0 / p);
            assert!((norm - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn table_size_checked() {
        let g = GridSpec::new(1, 4, 1.0).unwrap();
        let v = PotentialSpec::CustomTable {
            values: vec![(1.0, 0.0); 3],
        };
        assert!(matches!(
            build_potential(&g, &v, 2.0),
            Err(ModelError::TableSizeMismatch { .. })
        ));
    }

    /// Oracle: continuum integral of |V|^p for a 1D Gaussian by quadrature
    /// (trapezoid on a fine reference grid), compared to the coarse grid sum.
    #[test]
    fn gaussian_norm_close_to_continuum() {
        let g = GridSpec::new(1, 64, 0.25).unwrap();
        let v = PotentialSpec::GaussianComplex {
            amp_re: 1.0,
            amp_im: 0.5,
            width: 2.0,
        };
        let p = 2.0;
        let (_, grid_norm) = build_potential(&g, &v, p).unwrap();
        // Fine trapezoid over the same box.
        let l = g.half_width();
        let fine = 1 << 16;
        let dx = 2.0 * l / fine as f64;
        let amp = c(1.0, 0.5).norm();
        let mut acc = 0.0;
        for i in 0..=fine {
            let x: f64 = -l + i as f64 * dx;
            let val = (amp * (-(x / 2.0).powi(2)).exp()).powf(p);
            let w = if i == 0 || i == fine { 0.5 } else { 1.0 };
            acc += w * val * dx;
        }
        let continuum = acc.powf(1.0 / p);
        assert!(
            (grid_norm - continuum).abs() < 5e-3 * continuum,
            "{grid_norm} vs {continuum}"
        );
    }

    #[test]
    fn pavlov_tail_ordering() {
        let slow = PotentialSpec::PavlovDecay {
            amp_re: 1.0,
            amp_im: 0.0,
            decay: 1.0,
            exponent: 0.4,
        };
        let fast = PotentialSpec::PavlovDecay {
            amp_re: 1.0,
            amp_im: 0.0,
            decay: 1.0,
            exponent: 1.0,
        };
        for x in [1.5f64, 3.0, 6.0, 10.0] {
            let rs = slow.eval(&[x], 0).norm();
            let rf = fast.eval(&[x], 0).norm();
            assert!(rs >= rf, "slow decay should dominate at |x| = {x}");
        }
    }

    #[test]
    fn omega0_scalar_and_psd() {
        let h = ComplexMatrix::diagonal(&[c(-2.0, 0.0)]);
        let r = compute_omega0(&h).unwrap();
        assert!((r.omega0 - 2.0).abs() < 1e-12);
        let h = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(3.0, 5.0)]);
        // Hermitian part diag(1, 3) is PSD.
        let r = compute_omega0(&h).unwrap();
        assert_eq!(r.omega0, 0.0);
    }

    #[test]
    fn omega0_certifies_random_rayleigh_quotients() {
        let mut rng = SplitMix64::new(2024);
        let dim = 6;
        let h = ComplexMatrix::from_fn(dim, |_, _| {
            let re = rng.uniform(-1.0, 1.0);
            let im = rng.uniform(-1.0, 1.0);
            c(re, im)
        });
        let r = compute_omega0(&h).unwrap();
        // Witness achieves the minimum.
        let w_quot = rayleigh_re(&h, &r.witness);
        assert!(w_quot + r.omega0 >= -1e-9, "witness quotient {w_quot}");
        assert!(w_quot + r.omega0 <= 1e-6 * (1.0 + h.frobenius_norm()));
        for _ in 0..200 {
            let f: Vec<Complex64> = (0..dim).map(|_| rng.complex_uniform(-1.0, 1.0)).collect();
            assert!(rayleigh_re(&h, &f) >= -r.omega0 - 1e-10);
        }
    }

    #[test]
    fn abstract_model_deterministic() {
        let m1 = build_abstract_model(99, 8, 0.5).unwrap();
        let m2 = build_abstract_model(99, 8, 0.5).unwrap();
        assert_eq!(m1.h0(), m2.h0());
        assert_eq!(m1.m(), m2.m());
        assert_eq!(m1.a(), m2.a());
        assert_eq!(m1.omega0(), m2.omega0());
    }

    #[test]
    fn abstract_model_zero_scale() {
        let m = build_abstract_model(7, 5, 0.0).unwrap();
        assert_eq!(m.m().max_abs(), 0.0);
        assert_eq!(m.omega0(), 0.0);
        assert_eq!(m.h(), m.h0());
    }

    #[test]
    fn abstract_model_invariants_sweep() {
        for seed in 0..12 {
            let dim = 3 + (seed as usize % 6);
            let model = build_abstract_model(seed, dim, 0.4).unwrap();
            // ModelTriple::new validated the invariants; spot-check H = H0+M.
            let sum = model.h0().add(model.m()).unwrap();
            assert_eq!(&sum, model.h());
            assert!(model.a() * model.a() > model.omega0());
            let op = model.m().operator_norm().unwrap();
            assert!((op - 0.4).abs() < 1e-10);
        }
    }
}
