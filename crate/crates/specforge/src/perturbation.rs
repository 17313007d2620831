//! The perturbation determinant construction: the operator-valued function
//! F(lambda) = (lambda + a^2) [a^2+H]^{-1} M [lambda-H0]^{-1}, the
//! determinant f(lambda) = det_ceil(p)(I - F(lambda)) whose zeros are the
//! eigenvalues of H off [0, inf), its disk transfer h(z) = f(phi_a(z)), and
//! the explicit growth bounds they satisfy.

use crate::halfline::{dist_halfline, phi, MapParameter};
use crate::linalg::{
    self, det_regularized_log, eigenvalues, hermitian_eigenvalues, resolvent_apply,
    schatten_norm, ComplexMatrix, GammaConstant, LinalgError, SchattenOrder, Spectrum,
};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PerturbationError {
    #[error("linear algebra failure: {0}")]
    Linalg(#[from] LinalgError),
    #[error("H0 is not selfadjoint nonnegative (defect {defect:.3e}, min eigenvalue {min_eig:.3e})")]
    BadH0 { defect: f64, min_eig: f64 },
    #[error("H must equal H0 + M entrywise")]
    InconsistentSum,
    #[error("omega0 = {omega0} does not certify the numerical range (requires >= {required:.6e})")]
    BadOmega0 { omega0: f64, required: f64 },
    #[error("need a^2 > omega0, got a = {a}, omega0 = {omega0}")]
    BadShift { a: f64, omega0: f64 },
    #[error("lambda = {0} is within tolerance of sigma(H0)")]
    OnSpectrum(Complex64),
    #[error("point {0} is not in the open unit disk")]
    OutsideDisk(Complex64),
    #[error("halfline geometry: {0}")]
    Halfline(#[from] crate::halfline::HalflineError),
    #[error("empty sample grid")]
    EmptyGrid,
    #[error("growth envelope kind mismatch: expected {expected:?}")]
    KindMismatch { expected: EnvelopeKind },
}

pub type Result<T> = std::result::Result<T, PerturbationError>;

/// One experiment instance: H0 selfadjoint nonnegative, M the perturbation,
/// H = H0 + M, the map parameter a with a^2 > omega0, and the Schatten order.
#[derive(Debug, Clone)]
pub struct ModelTriple {
    h0: ComplexMatrix,
    m: ComplexMatrix,
    h: ComplexMatrix,
    a: f64,
    omega0: f64,
    p: SchattenOrder,
    /// Spectrum of H0, cached at construction; consulted on every
    /// resolvent-domain check.
    h0_eigs: Vec<f64>,
    h0_tol: f64,
}

impl ModelTriple {
    /// Validates all hypotheses: H0 = H0* within 1e-12, min eig H0 >= -1e-10,
    /// H = H0 + M entrywise, omega0 certifies Re N(H) >= -omega0 up to 1e-10,
    /// and a^2 > omega0.
    pub fn new(
        h0: ComplexMatrix,
        m: ComplexMatrix,
        a: f64,
        omega0: f64,
        p: SchattenOrder,
    ) -> Result<Self> {
        let defect = h0.hermitian_defect();
        let h0_eigs = hermitian_eigenvalues(&h0)?;
        let min_eig = *h0_eigs.first().ok_or(LinalgError::EmptyMatrix)?;
        if defect > 1e-12 || min_eig < -1e-10 {
            return Err(PerturbationError::BadH0 { defect, min_eig });
        }
        let h = h0.add(&m)?;
        let sym_min = *hermitian_eigenvalues(&h.hermitian_part())?
            .first()
            .ok_or(LinalgError::EmptyMatrix)?;
        let required = (-sym_min).max(0.0) - 1e-10;
        if omega0 < required {
            return Err(PerturbationError::BadOmega0 { omega0, required });
        }
        if !(a * a > omega0) {
            return Err(PerturbationError::BadShift { a, omega0 });
        }
        let h0_tol = linalg::default_cluster_tol(&h0);
        Ok(Self {
            h0,
            m,
            h,
            a,
            omega0,
            p,
            h0_eigs,
            h0_tol,
        })
    }

    pub fn h0(&self) -> &ComplexMatrix {
        &self.h0
    }

    pub fn m(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn h(&self) -> &ComplexMatrix {
        &self.h
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn p(&self) -> SchattenOrder {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.h0.dim()
    }

    /// Spectrum of H at the default clustering tolerance.
    pub fn spectrum(&self) -> Result<Spectrum> {
        Ok(eigenvalues(&self.h, linalg::default_cluster_tol(&self.h))?)
    }

    fn check_off_h0_spectrum(&self, lambda: Complex64) -> Result<()> {
        if self
            .h0_eigs
            .iter()
            .any(|&e| (lambda - Complex64::new(e, 0.0)).norm() <= self.h0_tol)
        {
            return Err(PerturbationError::OnSpectrum(lambda));
        }
        Ok(())
    }
}

/// F(lambda) = (lambda + a^2) [a^2 + H]^{-1} M [lambda - H0]^{-1}.
///
/// Defined for lambda off sigma(H0); on the finite surrogate this includes
/// points of (0, inf) between the eigenvalues of H0.
pub fn big_f(model: &ModelTriple, lambda: Complex64) -> Result<ComplexMatrix> {
    model.check_off_h0_spectrum(lambda)?;
    let a2 = model.a * model.a;
    // [a^2 + H]^{-1} = (-a^2 I - H)^{-1} * (-1) = resolvent of H at -a^2, negated.
    let r_h = resolvent_apply(&model.h, Complex64::new(-a2, 0.0))?
        .scale(Complex64::new(-1.0, 0.0));
    let r_h0 = resolvent_apply(&model.h0, lambda)?;
    let prod = r_h.matmul(&model.m)?.matmul(&r_h0)?;
    Ok(prod.scale(lambda + a2))
}

/// f(lambda) = det_ceil(p)(I - F(lambda)).
pub fn little_f(model: &ModelTriple, lambda: Complex64) -> Result<Complex64> {
    let (log_mag, phase) = little_f_log(model, lambda)?;
    if log_mag == f64::NEG_INFINITY {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(Complex64::from_polar(log_mag.exp(), phase))
}

/// (log|f|, arg f); log|f| = -inf marks an exact zero.
pub fn little_f_log(model: &ModelTriple, lambda: Complex64) -> Result<(f64, f64)> {
    let f_mat = big_f(model, lambda)?;
    Ok(det_regularized_log(&f_mat, model.p.ceil_p())?)
}

/// The alternative route to f(lambda): the ceil(p)-regularized perturbation
/// determinant of [a^2+H]^{-1} with respect to [a^2+H0]^{-1},
/// det(I - [(lambda+a^2)^{-1} - R0]^{-1} (R - R0)).
pub fn little_f_alt(model: &ModelTriple, lambda: Complex64) -> Result<Complex64> {
    model.check_off_h0_spectrum(lambda)?;
    let a2 = Complex64::new(model.a * model.a, 0.0);
    let r_h = resolvent_apply(&model.h, -a2)?.scale(Complex64::new(-1.0, 0.0));
    let r_h0 = resolvent_apply(&model.h0, -a2)?.scale(Complex64::new(-1.0, 0.0));
    let scalar = (lambda + a2).finv();
    let shifted = r_h0.scale(Complex64::new(-1.0, 0.0)).add_scalar_diag(scalar);
    let lead = linalg::inverse(&shifted)?;
    let c = lead.matmul(&r_h.sub(&r_h0)?)?;
    let (log_mag, phase) = det_regularized_log(&c, model.p.ceil_p())?;
    if log_mag == f64::NEG_INFINITY {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(Complex64::from_polar(log_mag.exp(), phase))
}

/// h(z) = f(phi_a(z)) on the open unit disk; h(0) = 1.
pub fn little_h(model: &ModelTriple, z: Complex64) -> Result<Complex64> {
    let (log_mag, phase) = little_h_log(model, z)?;
    if log_mag == f64::NEG_INFINITY {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(Complex64::from_polar(log_mag.exp(), phase))
}

pub fn little_h_log(model: &ModelTriple, z: Complex64) -> Result<(f64, f64)> {
    let a = MapParameter::new(model.a)?;
    let lambda = phi(a, z).map_err(|_| PerturbationError::OutsideDisk(z))?;
    little_f_log(model, lambda)
}

/// Outcome of checking that f vanishes exactly on the discrete spectrum.
#[derive(Debug, Clone)]
pub struct ZeroCorrespondence {
    /// max |f(lambda_k)| over discrete eigenvalues of H.
    pub max_abs_at_eigs: f64,
    /// min |f| over the probe circles around each eigenvalue.
    pub min_abs_on_probes: f64,
    /// Eigenvalues within 1e-10 of [0, inf), excluded from the check.
    pub excluded: Vec<Complex64>,
    pub pass: bool,
}

/// Evaluates |f| at every eigenvalue of H at distance > 1e-10 from
/// [0, inf), and on probe circles of radius half the gap to the nearest
/// other eigenvalue. Passes when the values at eigenvalues stay below
/// 1e-7 * (1 + probe scale) and below everything seen on the probes.
pub fn zero_correspondence(model: &ModelTriple) -> Result<ZeroCorrespondence> {
    let spectrum = model.spectrum()?;
    let mut discrete = Vec::new();
    let mut excluded = Vec::new();
    for &(z, _) in spectrum.items() {
        if dist_halfline(z) > 1e-10 {
            discrete.push(z);
        } else {
            excluded.push(z);
        }
    }
    let mut max_at_eigs = 0.0f64;
    let mut min_probe = f64::INFINITY;
    for (idx, &lk) in discrete.iter().enumerate() {
        max_at_eigs = max_at_eigs.max(little_f(model, lk)?.norm());
        // Probe circle: radius half the gap to the nearest distinct eigenvalue.
        let gap = spectrum
            .values()
            .filter(|&other| (other - lk).norm() > 0.0)
            .map(|other| (other - lk).norm())
            .fold(f64::INFINITY, f64::min);
        let radius = if gap.is_finite() { 0.5 * gap } else { 0.5 };
        for j in 0..8 {
            let angle = 2.0 * std::f64::consts::PI * (j as f64 + 0.5 * (idx as f64 % 2.0)) / 8.0;
            let probe = lk + Complex64::from_polar(radius, angle);
            if dist_halfline(probe) <= 1e-10 {
                continue;
            }
            // Skip probes that collide with sigma(H0).
            match little_f(model, probe) {
                Ok(v) => min_probe = min_probe.min(v.norm()),
                Err(PerturbationError::OnSpectrum(_)) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    let probe_scale = if min_probe.is_finite() { min_probe } else { 0.0 };
    let threshold = 1e-7 * (1.0 + probe_scale);
    let pass = max_at_eigs < threshold
        && (discrete.is_empty() || !min_probe.is_finite() || max_at_eigs < min_probe);
    Ok(ZeroCorrespondence {
        max_abs_at_eigs: max_at_eigs,
        min_abs_on_probes: min_probe,
        excluded,
        pass,
    })
}

/// Which Schatten quantity the envelope normalizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvelopeKind {
    /// T = M [mu^2 - H0]^{-1}, weight |mu + i|^delta.
    K0Form,
    /// T = [a^2+H]^{-1} M [mu^2 - H0]^{-1}, weight |mu + i a|^delta.
    K1Form,
}

/// Grid supremum K of ||T(mu)||_p^p |Im mu|^alpha |mu|^nu / |mu + ic|^delta.
#[derive(Debug, Clone)]
pub struct GrowthEnvelope {
    pub k: f64,
    pub alpha: f64,
    pub delta: f64,
    pub nu: f64,
    pub kind: EnvelopeKind,
}

pub fn estimate_k(
    model: &ModelTriple,
    alpha: f64,
    delta: f64,
    nu: f64,
    grid: &[Complex64],
    kind: EnvelopeKind,
) -> Result<GrowthEnvelope> {
    if grid.is_empty() {
        return Err(PerturbationError::EmptyGrid);
    }
    let c = match kind {
        EnvelopeKind::K0Form => 1.0,
        EnvelopeKind::K1Form => model.a,
    };
    let p = model.p.p();
    let a2 = model.a * model.a;
    let r_h = match kind {
        EnvelopeKind::K1Form => Some(
            resolvent_apply(&model.h, Complex64::new(-a2, 0.0))?
                .scale(Complex64::new(-1.0, 0.0)),
        ),
        EnvelopeKind::K0Form => None,
    };
    let mut k = 0.0f64;
    for &mu in grid {
        let t = normalized_schatten(model, mu, alpha, delta, nu, c, r_h.as_ref(), p)?;
        k = k.max(t);
    }
    Ok(GrowthEnvelope {
        k,
        alpha,
        delta,
        nu,
        kind,
    })
}

#[allow(clippy::too_many_arguments)]
fn normalized_schatten(
    model: &ModelTriple,
    mu: Complex64,
    alpha: f64,
    delta: f64,
    nu: f64,
    c: f64,
    r_h: Option<&ComplexMatrix>,
    p: f64,
) -> Result<f64> {
    let r0 = resolvent_apply(&model.h0, mu * mu)?;
    let t = match r_h {
        Some(r) => r.matmul(&model.m)?.matmul(&r0)?,
        None => model.m.matmul(&r0)?,
    };
    let norm_p = schatten_norm(&t, p)?;
    let weight = mu.im.abs().powf(alpha) * mu.norm().powf(nu)
        / (mu + Complex64::new(0.0, c)).norm().powf(delta);
    Ok(norm_p.powf(p) * weight)
}

/// Worst slack of a pointwise log-bound over a grid.
#[derive(Debug, Clone, Copy)]
pub struct BoundCheck {
    /// max over the grid of (lhs - rhs); nonpositive means the bound holds.
    pub worst_slack: f64,
    pub pass: bool,
}

/// Checks log|f(mu^2)| <= Gamma_p K1 |mu - ia|^p |mu + ia|^{delta+p}
/// / (|Im mu|^alpha |mu|^nu) at every grid point, with 1e-9 absolute slack.
pub fn lemma_bound_check(
    model: &ModelTriple,
    env: &GrowthEnvelope,
    grid: &[Complex64],
) -> Result<BoundCheck> {
    if env.kind != EnvelopeKind::K1Form {
        return Err(PerturbationError::KindMismatch {
            expected: EnvelopeKind::K1Form,
        });
    }
    if grid.is_empty() {
        return Err(PerturbationError::EmptyGrid);
    }
    let gamma = GammaConstant::new(model.p.p())
        .map_err(PerturbationError::Linalg)?
        .gamma;
    let p = model.p.p();
    let ia = Complex64::new(0.0, model.a);
    let mut worst = f64::NEG_INFINITY;
    for &mu in grid {
        let (log_f, _) = little_f_log(model, mu * mu)?;
        let rhs = gamma * env.k * (mu - ia).norm().powf(p) * (mu + ia).norm().powf(env.delta + p)
            / (mu.im.abs().powf(env.alpha) * mu.norm().powf(env.nu));
        let slack = if log_f == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            log_f - rhs
        };
        worst = worst.max(slack);
    }
    Ok(BoundCheck {
        worst_slack: worst,
        pass: worst <= 1e-9,
    })
}

/// Checks log|h(z)| <= Gamma_p 2^{delta+2p} K1 a^{alpha+rho} |z|^p
/// / ((1-|z|)^alpha |z+1|^nu |z-1|^rho), rho = delta + 2(p-alpha) - nu,
/// the constant traced explicitly through the proof.
pub fn lemma_bh_check(
    model: &ModelTriple,
    env: &GrowthEnvelope,
    disk_grid: &[Complex64],
) -> Result<BoundCheck> {
    if env.kind != EnvelopeKind::K1Form {
        return Err(PerturbationError::KindMismatch {
            expected: EnvelopeKind::K1Form,
        });
    }
    if disk_grid.is_empty() {
        return Err(PerturbationError::EmptyGrid);
    }
    let gamma = GammaConstant::new(model.p.p())
        .map_err(PerturbationError::Linalg)?
        .gamma;
    let p = model.p.p();
    let rho = env.delta + 2.0 * (p - env.alpha) - env.nu;
    let constant = gamma * 2f64.powf(env.delta + 2.0 * p) * env.k * model.a.powf(env.alpha + rho);
    let mut worst = f64::NEG_INFINITY;
    for &z in disk_grid {
        let (log_h, _) = little_h_log(model, z)?;
        let rhs = constant * z.norm().powf(p)
            / ((1.0 - z.norm()).powf(env.alpha)
                * (z + 1.0).norm().powf(env.nu)
                * (z - 1.0).norm().powf(rho));
        let slack = if log_h == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            log_h - rhs
        };
        worst = worst.max(slack);
    }
    Ok(BoundCheck {
        worst_slack: worst,
        pass: worst <= 1e-9,
    })
}

/// Map a mu-grid in the upper half-plane to the disk, z = (mu-ia)/(mu+ia).
pub fn disk_image_of_mu_grid(a: f64, grid: &[Complex64]) -> Vec<Complex64> {
    let ia = Complex64::new(0.0, a);
    grid.iter().map(|&mu| (mu - ia) / (mu + ia)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// The 1x1 model H0 = [0], M = [m], a = 1.
    fn scalar_model(m: Complex64, p: f64) -> ModelTriple {
        let h0 = ComplexMatrix::zeros(1);
        let mm = ComplexMatrix::diagonal(&[m]);
        let omega0 = (-m.re).max(0.0);
        let a = (1.5f64 * (omega0 + 1.0)).sqrt();
        ModelTriple::new(h0, mm, a, omega0, SchattenOrder::new(p).unwrap()).unwrap()
    }

    #[test]
    fn model_validation_rejects_bad_inputs() {
        let h0 = ComplexMatrix::diagonal(&[c(1.0, 0.5)]); // not selfadjoint
        let m = ComplexMatrix::zeros(1);
        assert!(matches!(
            ModelTriple::new(h0, m.clone(), 1.0, 0.0, SchattenOrder::new(2.0).unwrap()),
            Err(PerturbationError::BadH0 { .. })
        ));
        let h0 = ComplexMatrix::diagonal(&[c(-1.0, 0.0)]); // negative spectrum
        assert!(matches!(
            ModelTriple::new(h0, m.clone(), 1.0, 0.0, SchattenOrder::new(2.0).unwrap()),
            Err(PerturbationError::BadH0 { .. })
        ));
        let h0 = ComplexMatrix::zeros(1);
        // omega0 too small for M = [-2]: symmetric part is -2.
        let m2 = ComplexMatrix::diagonal(&[c(-2.0, 0.0)]);
        assert!(matches!(
            ModelTriple::new(h0.clone(), m2.clone(), 3.0, 0.5, SchattenOrder::new(2.0).unwrap()),
            Err(PerturbationError::BadOmega0 { .. })
        ));
        // a^2 <= omega0.
        assert!(matches!(
            ModelTriple::new(h0, m2, 1.0, 2.0, SchattenOrder::new(2.0).unwrap()),
            Err(PerturbationError::BadShift { .. })
        ));
    }

    #[test]
    fn big_f_zero_perturbation() {
        let model = scalar_model(c(0.0, 0.0), 2.0);
        let f = big_f(&model, c(-2.0, 1.0)).unwrap();
        assert_eq!(f[(0, 0)], c(0.0, 0.0));
    }

    #[test]
    fn big_f_vanishes_at_minus_a_squared() {
        let model = scalar_model(c(0.4, 0.3), 2.0);
        let a2 = model.a() * model.a();
        let f = big_f(&model, c(-a2, 0.0)).unwrap();
        assert_eq!(f[(0, 0)].norm(), 0.0);
        // And f(-a^2) = 1 exactly.
        let v = little_f(&model, c(-a2, 0.0)).unwrap();
        assert_eq!(v, c(1.0, 0.0));
    }

    /// Closed form: H0 = [0], M = [m], a = 1 gives
    /// F(lambda) = m (lambda+1) / ((1+m) lambda).
    #[test]
    fn scalar_closed_form() {
        let m = c(2.0, 0.0);
        let h0 = ComplexMatrix::zeros(1);
        let mm = ComplexMatrix::diagonal(&[m]);
        let model =
            ModelTriple::new(h0, mm, 1.0, 0.0, SchattenOrder::new(1.0).unwrap()).unwrap();
        for lam in [c(-2.0, 0.5), c(0.5, 1.0), c(-4.0, 0.0)] {
            let f = big_f(&model, lam).unwrap();
            let expect = m * (lam + 1.0) / ((1.0 + m) * lam);
            assert!((f[(0, 0)] - expect).norm() < 1e-13 * (1.0 + expect.norm()));
        }
        // f(2) = 0 because F(2) = 1 (lambda = 2 is the eigenvalue of H = [2]).
        let v = little_f(&model, c(2.0, 0.0)).unwrap();
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn little_f_is_one_for_zero_m() {
        let model = scalar_model(c(0.0, 0.0), 2.0);
        for lam in [c(-1.0, 0.0), c(0.5, 2.0), c(-3.0, -1.0)] {
            let v = little_f(&model, lam).unwrap();
            assert_eq!(v, c(1.0, 0.0));
        }
        // And h = 1 on the disk.
        for z in [c(0.0, 0.0), c(0.3, 0.4), c(-0.7, 0.1)] {
            assert_eq!(little_h(&model, z).unwrap(), c(1.0, 0.0));
        }
    }

    #[test]
    fn h_at_origin_is_one() {
        let model = scalar_model(c(0.2, 0.7), 2.0);
        let v = little_h(&model, c(0.0, 0.0)).unwrap();
        assert_eq!(v, c(1.0, 0.0));
    }

    /// h vanishes at the disk image of an eigenvalue (scalar model with
    /// eigenvalue off the half-line).
    #[test]
    fn h_vanishes_at_eigenvalue_image() {
        use crate::halfline::{phi_inv, MapParameter, SlitPoint};
        let m = c(-2.0, 0.0); // H = [-2], eigenvalue -2 off the slit
        let h0 = ComplexMatrix::zeros(1);
        let mm = ComplexMatrix::diagonal(&[m]);
        let model =
            ModelTriple::new(h0, mm, 2.0, 2.0, SchattenOrder::new(1.0).unwrap()).unwrap();
        let z0 = phi_inv(
            MapParameter::new(2.0).unwrap(),
            SlitPoint::new(c(-2.0, 0.0)).unwrap(),
        );
        let v = little_h(&model, z0).unwrap();
        assert!(v.norm() < 1e-12, "|h(z0)| = {}", v.norm());
    }

    #[test]
    fn zero_correspondence_scalar() {
        let m = c(-2.0, 0.0);
        let h0 = ComplexMatrix::zeros(1);
        let mm = ComplexMatrix::diagonal(&[m]);
        let model =
            ModelTriple::new(h0, mm, 2.0, 2.0, SchattenOrder::new(1.0).unwrap()).unwrap();
        let zc = zero_correspondence(&model).unwrap();
        assert!(zc.pass, "{zc:?}");
        assert!(zc.max_abs_at_eigs < 1e-10);
    }

    #[test]
    fn zero_correspondence_vacuous_for_m_zero() {
        let model = scalar_model(c(0.0, 0.0), 2.0);
        let zc = zero_correspondence(&model).unwrap();
        assert!(zc.pass);
        assert_eq!(zc.max_abs_at_eigs, 0.0);
        assert_eq!(zc.excluded.len(), 1); // the eigenvalue 0 sits on the slit
    }

    #[test]
    fn estimate_k_zero_m() {
        let model = scalar_model(c(0.0, 0.0), 2.0);
        let grid = [c(0.5, 0.5), c(-1.0, 2.0)];
        let env = estimate_k(&model, 0.0, 0.0, 0.0, &grid, EnvelopeKind::K1Form).unwrap();
        assert_eq!(env.k, 0.0);
        assert!(estimate_k(&model, 0.0, 0.0, 0.0, &[], EnvelopeKind::K1Form).is_err());
    }

    /// Scalar closed form: alpha = delta = nu = 0, p = 1, K1 form gives
    /// K = sup |m| / (|a^2 + m| |mu|^2) with a = 1.
    #[test]
    fn estimate_k_scalar_closed_form() {
        let m = c(0.3, 0.4);
        let h0 = ComplexMatrix::zeros(1);
        let mm = ComplexMatrix::diagonal(&[m]);
        let model =
            ModelTriple::new(h0, mm, 1.0, 0.0, SchattenOrder::new(1.0).unwrap()).unwrap();
        let grid = [c(0.5, 0.5), c(-1.0, 2.0), c(0.1, 0.9)];
        let env = estimate_k(&model, 0.0, 0.0, 0.0, &grid, EnvelopeKind::K1Form).unwrap();
        let expect = grid
            .iter()
            .map(|mu| m.norm() / ((Complex64::new(1.0, 0.0) + m).norm() * mu.norm_sqr()))
            .fold(0.0f64, f64::max);
        assert!((env.k - expect).abs() < 1e-12 * (1.0 + expect));
    }

    #[test]
    fn k0_scaling_homogeneity() {
        let m = c(0.3, 0.4);
        let h0 = ComplexMatrix::diagonal(&[c(1.0, 0.0)]);
        let mm = ComplexMatrix::diagonal(&[m]);
        let p = 2.0;
        let build = |scale: f64| {
            let ms = mm.scale(c(scale, 0.0));
            let h = h0.add(&ms).unwrap();
            let sym_min = hermitian_eigenvalues(&h.hermitian_part()).unwrap()[0];
            let omega0 = (-sym_min).max(0.0);
            let a = (1.5 * (omega0 + 1.0)).sqrt();
            ModelTriple::new(h0.clone(), ms, a, omega0, SchattenOrder::new(p).unwrap()).unwrap()
        };
        let grid = [c(0.5, 0.5), c(-1.0, 2.0)];
        let k1 = estimate_k(&build(1.0), 0.3, 0.2, 0.1, &grid, EnvelopeKind::K0Form)
            .unwrap()
            .k;
        let k3 = estimate_k(&build(3.0), 0.3, 0.2, 0.1, &grid, EnvelopeKind::K0Form)
            .unwrap()
            .k;
        assert!((k3 - 3f64.powf(p) * k1).abs() <= 1e-10 * (1.0 + k3));
    }

    #[test]
    fn k_monotone_in_grid() {
        let model = scalar_model(c(0.2, 0.5), 2.0);
        let small = [c(0.5, 0.5), c(-1.0, 2.0)];
        let large = [c(0.5, 0.5), c(-1.0, 2.0), c(0.05, 0.2)];
        let k_small = estimate_k(&model, 0.0, 0.0, 0.0, &small, EnvelopeKind::K1Form)
            .unwrap()
            .k;
        let k_large = estimate_k(&model, 0.0, 0.0, 0.0, &large, EnvelopeKind::K1Form)
            .unwrap()
            .k;
        assert!(k_large >= k_small);
    }

    #[test]
    fn bound_checks_trivial_for_zero_m() {
        let model = scalar_model(c(0.0, 0.0), 2.0);
        let grid = [c(0.5, 0.5), c(-0.2, 1.5)];
        let env = estimate_k(&model, 0.0, 0.0, 0.0, &grid, EnvelopeKind::K1Form).unwrap();
        let chk = lemma_bound_check(&model, &env, &grid).unwrap();
        assert!(chk.pass);
        let dz = disk_image_of_mu_grid(model.a(), &grid);
        let chk = lemma_bh_check(&model, &env, &dz).unwrap();
        assert!(chk.pass);
    }

    /// 100-point grid on the scalar model, p = 2, Gamma_2 = 1/2.
    #[test]
    fn bound_check_scalar_sweep() {
        let model = scalar_model(c(0.2, 0.6), 2.0);
        let mut grid = Vec::new();
        for i in 0..10 {
            for j in 1..=10 {
                grid.push(c(
                    -2.0 + 4.0 * (i as f64) / 9.0,
                    0.05 + 2.0 * (j as f64) / 10.0,
                ));
            }
        }
        let env = estimate_k(&model, 1.0, 0.5, 0.5, &grid, EnvelopeKind::K1Form).unwrap();
        let chk = lemma_bound_check(&model, &env, &grid).unwrap();
        assert!(chk.pass, "worst slack {}", chk.worst_slack);
        let dz = disk_image_of_mu_grid(model.a(), &grid);
        let chk = lemma_bh_check(&model, &env, &dz).unwrap();
        assert!(chk.pass, "worst slack {}", chk.worst_slack);
    }

    /// Identity (a12): the product form of I - F equals the direct form.
    #[test]
    fn a12_identity_scalar() {
        let m = c(0.3, 0.2);
        let model = scalar_model(m, 2.0);
        let a2 = model.a() * model.a();
        for lam in [c(-2.0, 0.3), c(1.5, 1.0)] {
            let r_h = resolvent_apply(model.h(), c(-a2, 0.0))
                .unwrap()
                .scale(c(-1.0, 0.0));
            let r_h0 = resolvent_apply(model.h0(), c(-a2, 0.0))
                .unwrap()
                .scale(c(-1.0, 0.0));
            let id = ComplexMatrix::identity(model.dim());
            let left = id.sub(&r_h.scale(lam + a2)).unwrap();
            let right_inner = id.sub(&r_h0.scale(lam + a2)).unwrap();
            let product = left.matmul(&linalg::inverse(&right_inner).unwrap()).unwrap();
            let direct = id.sub(&big_f(&model, lam).unwrap()).unwrap();
            let defect = product.sub(&direct).unwrap().max_abs();
            assert!(defect < 1e-10, "defect {defect}");
        }
    }

    /// Resolvent identity (e1) on the scalar model.
    #[test]
    fn resolvent_identity_scalar() {
        let model = scalar_model(c(0.4, -0.3), 2.0);
        let a2 = model.a() * model.a();
        let r_h = resolvent_apply(model.h(), c(-a2, 0.0))
            .unwrap()
            .scale(c(-1.0, 0.0));
        let r_h0 = resolvent_apply(model.h0(), c(-a2, 0.0))
            .unwrap()
            .scale(c(-1.0, 0.0));
        let lhs = r_h0.sub(&r_h).unwrap();
        let rhs = r_h.matmul(model.m()).unwrap().matmul(&r_h0).unwrap();
        assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn alt_representation_agrees() {
        let model = scalar_model(c(0.25, 0.45), 2.0);
        for lam in [c(-2.0, 0.4), c(0.7, 1.3), c(-5.0, -2.0)] {
            let direct = little_f(&model, lam).unwrap();
            let alt = little_f_alt(&model, lam).unwrap();
            assert!(
                (direct - alt).norm() <= 1e-9 * (1.0 + direct.norm()),
                "{direct} vs {alt}"
            );
        }
    }
}
