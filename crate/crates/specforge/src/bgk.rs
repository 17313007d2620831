//! Zero sums and growth envelopes for holomorphic functions in the unit
//! disk, in the form used to transfer determinant bounds into eigenvalue
//! sums: a function with h(0) = 1 whose log-modulus is controlled by
//! boundary weights (1-|z|)^{-alpha} prod |z - xi_j|^{-beta_j} has zeros
//! summable against (1-|z|)^{alpha+1+tau} prod |z - xi_j|^{(beta_j-1+tau)_+}.
//!
//! Blaschke products supply oracles with exactly known zeros.

use crate::functionals::ExponentProfile;
use crate::halfline::{dist_halfline, phi_inv, MapParameter, SlitPoint};
use crate::perturbation::{GrowthEnvelope, ModelTriple, PerturbationError};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BgkError {
    #[error("boundary point {0} is not unimodular within 1e-12")]
    NotUnimodular(Complex64),
    #[error("boundary points must be pairwise distinct")]
    DuplicateBoundaryPoint,
    #[error("exponents must be nonnegative and tau positive")]
    BadExponents,
    #[error("zero {0} is not strictly inside the unit disk")]
    ZeroOutsideDisk(Complex64),
    #[error("h(0) = {0} is not 1 within 1e-8; normalize the function first")]
    NotNormalized(Complex64),
    #[error("model evaluation: {0}")]
    Perturbation(#[from] PerturbationError),
    #[error("halfline geometry: {0}")]
    Halfline(#[from] crate::halfline::HalflineError),
}

pub type Result<T> = std::result::Result<T, BgkError>;

/// Boundary growth data: exponent alpha at generic boundary points, and
/// (xi_j, beta_j) pairs for the distinguished points, plus the tau of the
/// zero sum.
#[derive(Debug, Clone)]
pub struct BoundaryData {
    pub alpha: f64,
    pub points: Vec<(Complex64, f64)>,
    pub tau: f64,
}

impl BoundaryData {
    pub fn new(alpha: f64, points: Vec<(Complex64, f64)>, tau: f64) -> Result<Self> {
        if !(alpha >= 0.0) || !(tau > 0.0) || points.iter().any(|(_, b)| !(*b >= 0.0)) {
            return Err(BgkError::BadExponents);
        }
        for (xi, _) in &points {
            if (xi.norm() - 1.0).abs() > 1e-12 {
                return Err(BgkError::NotUnimodular(*xi));
            }
        }
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                if (points[i].0 - points[j].0).norm() == 0.0 {
                    return Err(BgkError::DuplicateBoundaryPoint);
                }
            }
        }
        Ok(Self { alpha, points, tau })
    }
}

/// Zeros strictly inside the unit disk, with multiplicities.
#[derive(Debug, Clone)]
pub struct ZeroSet {
    zeros: Vec<(Complex64, usize)>,
}

impl ZeroSet {
    pub fn new(zeros: Vec<(Complex64, usize)>) -> Result<Self> {
        for (z, _) in &zeros {
            if z.norm() >= 1.0 {
                return Err(BgkError::ZeroOutsideDisk(*z));
            }
        }
        Ok(Self { zeros })
    }

    pub fn zeros(&self) -> &[(Complex64, usize)] {
        &self.zeros
    }

    /// Same zeros with doubled multiplicities (the zero set of h^2).
    pub fn doubled(&self) -> Self {
        Self {
            zeros: self.zeros.iter().map(|&(z, m)| (z, 2 * m)).collect(),
        }
    }
}

/// Sum over zeros of mult (1-|z|)^{alpha+1+tau} prod_j |z - xi_j|^{(beta_j-1+tau)_+}.
pub fn zero_sum(zs: &ZeroSet, bd: &BoundaryData) -> f64 {
    zs.zeros
        .iter()
        .map(|&(z, mult)| {
            let mut term = (1.0 - z.norm()).powf(bd.alpha + 1.0 + bd.tau);
            for &(xi, beta) in &bd.points {
                term *= (z - xi).norm().powf((beta - 1.0 + bd.tau).max(0.0));
            }
            mult as f64 * term
        })
        .sum()
}

/// 64 radii, 1 - r geometric from 1 down to 1e-4.
pub fn default_radii() -> Vec<f64> {
    (0..64)
        .map(|k| 1.0 - 1e-4f64.powf(k as f64 / 63.0))
        .collect()
}

/// 256 equally spaced angles.
pub fn default_angles() -> Vec<f64> {
    (0..256)
        .map(|j| 2.0 * std::f64::consts::PI * j as f64 / 256.0)
        .collect()
}

/// Growth-envelope estimate: sup over the polar lattice of
/// log|h(z)| (1-|z|)^alpha prod_j |z - xi_j|^{beta_j}, floored at 0.
///
/// Requires h(0) = 1 within 1e-8. Samples where |h| < 1e-300 are skipped:
/// log of an exact zero is -inf and never attains a supremum floored at 0.
pub fn growth_k<F: Fn(Complex64) -> Complex64>(
    h: &F,
    bd: &BoundaryData,
    radii: &[f64],
    angles: &[f64],
) -> Result<f64> {
    let at_origin = h(Complex64::new(0.0, 0.0));
    if (at_origin - Complex64::new(1.0, 0.0)).norm() > 1e-8 {
        return Err(BgkError::NotNormalized(at_origin));
    }
    let mut sup = 0.0f64;
    for &r in radii {
        for &theta in angles {
            let z = Complex64::from_polar(r, theta);
            let hv = h(z).norm();
            if hv < 1e-300 {
                continue;
            }
            let mut weight = (1.0 - r).powf(bd.alpha);
            for &(xi, beta) in &bd.points {
                weight *= (z - xi).norm().powf(beta);
            }
            sup = sup.max(hv.ln() * weight);
        }
    }
    Ok(sup)
}

/// Finite Blaschke product with prescribed zeros, normalized so h(0) = 1
/// when no zero sits at the origin.
#[derive(Debug, Clone)]
pub struct BlaschkeProduct {
    zeros: Vec<(Complex64, usize)>,
    /// Multiplicity of the origin as a zero; positive means h(0) = 1 is
    /// unattainable and no normalization is applied.
    pub origin_multiplicity: usize,
    /// Product of |z_k|^{m_k} over the non-origin zeros: the value of the
    /// normalized non-origin part at 0.
    pub origin_scale: f64,
}

impl BlaschkeProduct {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for &(zk, mult) in &self.zeros {
            let factor = if zk.norm() == 0.0 {
                z
            } else {
                // (|zk|/zk) (zk - z) / (1 - conj(zk) z): value |zk| at 0.
                (zk.norm() / zk.norm_sqr()) * zk.conj() * (zk - z)
                    / (Complex64::new(1.0, 0.0) - zk.conj() * z)
            };
            for _ in 0..mult {
                acc *= factor;
            }
        }
        if self.origin_multiplicity == 0 {
            acc / self.origin_scale
        } else {
            acc
        }
    }
}

/// Oracle with exactly known zeros. With no zero at the origin the result
/// satisfies h(0) = 1 exactly; otherwise the unnormalized product is
/// returned and `origin_scale` reports the leading coefficient scale.
pub fn blaschke_oracle(zs: &ZeroSet) -> BlaschkeProduct {
    let origin_multiplicity = zs
        .zeros
        .iter()
        .filter(|(z, _)| z.norm() == 0.0)
        .map(|(_, m)| m)
        .sum();
    let origin_scale = zs
        .zeros
        .iter()
        .filter(|(z, _)| z.norm() > 0.0)
        .map(|(z, m)| z.norm().powi(*m as i32))
        .product();
    BlaschkeProduct {
        zeros: zs.zeros.clone(),
        origin_multiplicity,
        origin_scale,
    }
}

/// Both sides of the exponent identity (rho_+ - 1 + tau)_+ = (rho - 1 + tau)_+,
/// valid for 0 < tau < 1.
pub fn sc3_exponent_identity(rho: f64, tau: f64) -> (f64, f64) {
    let lhs = (rho.max(0.0) - 1.0 + tau).max(0.0);
    let rhs = (rho - 1.0 + tau).max(0.0);
    (lhs, rhs)
}

/// Result of transferring the disk-side zero sum back to the eigenvalues:
/// the disk sum over z_k = phi_a^{-1}(lambda_k) dominates the lambda-side
/// quantity assembled from the explicit distortion constants.
#[derive(Debug, Clone)]
pub struct TransferReport {
    /// sum of mult (1-|z_k|)^{2 eta1} |z_k+1|^{2 eta2} |z_k-1|^{2 eta0}.
    pub disk_sum: f64,
    /// The explicit-constant lower bound of the disk sum in terms of the
    /// eigenvalues: (a/2)^{2 eta1} 2^{eta0+eta2} a^{2 eta0} times the
    /// weighted eigenvalue sum.
    pub lambda_side: f64,
    /// disk_sum / (K1 a^{alpha+rho}), the empirical constant of the zero-sum
    /// bound; recorded, not asserted.
    pub envelope_ratio: f64,
    /// Eigenvalues skipped because they sit on [0, inf).
    pub excluded: usize,
    pub pass: bool,
}

pub fn sc3_to_sc4_transfer(
    model: &ModelTriple,
    prof: &ExponentProfile,
    env: &GrowthEnvelope,
) -> Result<TransferReport> {
    let a = MapParameter::new(model.a())?;
    let a2 = model.a() * model.a();
    let spectrum = model.spectrum()?;
    let mut disk_sum = 0.0;
    let mut lambda_side = 0.0;
    let mut excluded = 0;
    let explicit = (model.a() / 2.0).powf(2.0 * prof.eta1)
        * 2f64.powf(prof.eta0 + prof.eta2)
        * model.a().powf(2.0 * prof.eta0);
    for &(lambda, mult) in spectrum.items() {
        if dist_halfline(lambda) <= 1e-10 {
            excluded += 1;
            continue;
        }
        let z = phi_inv(a, SlitPoint::new(lambda)?);
        let m = mult as f64;
        disk_sum += m
            * (1.0 - z.norm()).powf(2.0 * prof.eta1)
            * (z + 1.0).norm().powf(2.0 * prof.eta2)
            * (z - 1.0).norm().powf(2.0 * prof.eta0);
        let abs_l = lambda.norm();
        lambda_side += m * explicit * dist_halfline(lambda).powf(2.0 * prof.eta1)
            / (abs_l.powf(prof.eta1 - prof.eta2)
                * (abs_l + a2).powf(2.0 * prof.eta1 + prof.eta2 + prof.eta0));
    }
    let reference = env.k * model.a().powf(prof.alpha + prof.rho);
    let envelope_ratio = if reference > 0.0 {
        disk_sum / reference
    } else {
        0.0
    };
    Ok(TransferReport {
        disk_sum,
        lambda_side,
        envelope_ratio,
        excluded,
        pass: lambda_side <= disk_sum * (1.0 + 1e-9) + 1e-300,
    })
}
