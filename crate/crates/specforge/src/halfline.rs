//! Geometry of the slit plane C \ [0, inf): distance to the half-line, the
//! upper-half-plane square root, and the conformal map
//! phi_a(z) = -a^2 ((z+1)/(z-1))^2 from the unit disk onto the slit plane,
//! together with the explicit distortion inequalities it satisfies.

use num_complex::Complex64;
use thiserror::Error;

/// Points closer to [0, inf) than this are rejected as on-slit; the
/// distortion quantities blow up there.
pub const SLIT_TOL: f64 = 1e-14;

#[derive(Debug, Error)]
pub enum HalflineError {
    #[error("point {0} lies on (or within {SLIT_TOL} of) the half-line [0, inf)")]
    OnSlit(Complex64),
    #[error("map parameter a must be positive, got {0}")]
    BadParameter(f64),
    #[error("point {0} is not in the open unit disk")]
    OutsideDisk(Complex64),
    #[error("mu must be nonzero with Im(mu) > 0, got {0}")]
    NotUpperHalfPlane(Complex64),
}

pub type Result<T> = std::result::Result<T, HalflineError>;

/// A point of C \ [0, inf), validated at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlitPoint(Complex64);

impl SlitPoint {
    pub fn new(lambda: Complex64) -> Result<Self> {
        if dist_halfline(lambda) <= SLIT_TOL {
            return Err(HalflineError::OnSlit(lambda));
        }
        Ok(Self(lambda))
    }

    pub fn get(self) -> Complex64 {
        self.0
    }
}

/// The parameter a > 0 of the conformal map phi_a.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapParameter(f64);

impl MapParameter {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(HalflineError::BadParameter(a));
        }
        Ok(Self(a))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// dist(lambda, [0, inf)): |Im lambda| when Re lambda > 0, else |lambda|.
pub fn dist_halfline(lambda: Complex64) -> f64 {
    if lambda.re > 0.0 {
        lambda.im.abs()
    } else {
        lambda.norm()
    }
}

/// The square root mu of lambda with Im(mu) > 0: principal branch, negated
/// when the principal root falls in the closed lower half-plane. On the
/// negative real axis the result is i*sqrt(|lambda|).
pub fn sqrt_upper(lambda: SlitPoint) -> Complex64 {
    let mu = lambda.get().sqrt();
    if mu.im > 0.0 {
        mu
    } else {
        -mu
    }
}

/// phi_a(z) = -a^2 ((z+1)/(z-1))^2, for z in the open unit disk.
pub fn phi(a: MapParameter, z: Complex64) -> Result<Complex64> {
    if z.norm() >= 1.0 {
        return Err(HalflineError::OutsideDisk(z));
    }
    let ratio = (z + 1.0) / (z - 1.0);
    Ok(-ratio * ratio * a.get() * a.get())
}

/// Inverse of phi_a: z = (mu - ia)/(mu + ia) with mu = sqrt_upper(lambda).
///
/// Forced algebra from the substitution mu = ia (1+z)/(1-z): solving for z
/// gives mu - ia = z (mu + ia). |z| < 1 because Im(mu) > 0 puts mu strictly
/// closer to ia than to -ia.
pub fn phi_inv(a: MapParameter, lambda: SlitPoint) -> Complex64 {
    let mu = sqrt_upper(lambda);
    let ia = Complex64::new(0.0, a.get());
    (mu - ia) / (mu + ia)
}

/// Two-sided distortion of the squaring map: for Im(mu) > 0,
/// |mu| |Im mu| <= dist(mu^2, [0, inf)) <= 2 |mu| |Im mu|.
#[derive(Debug, Clone, Copy)]
pub struct SqCheck {
    pub lower: f64,
    pub mid: f64,
    pub upper: f64,
    pub pass: bool,
}

pub fn lemma_sq_check(mu: Complex64) -> Result<SqCheck> {
    if !(mu.im > 0.0) || mu.norm() == 0.0 {
        return Err(HalflineError::NotUpperHalfPlane(mu));
    }
    let lower = mu.norm() * mu.im.abs();
    let mid = dist_halfline(mu * mu);
    let upper = 2.0 * lower;
    let pass = lower <= mid * (1.0 + 1e-12) && mid <= upper * (1.0 + 1e-12);
    Ok(SqCheck {
        lower,
        mid,
        upper,
        pass,
    })
}

/// One double inequality lower <= value <= upper, with its verdict.
#[derive(Debug, Clone, Copy)]
pub struct DoubleBound {
    pub lower: f64,
    pub value: f64,
    pub upper: f64,
    pub pass: bool,
}

impl DoubleBound {
    fn check(lower: f64, value: f64, upper: f64, rel_slack: f64) -> Self {
        let pass = lower <= value * (1.0 + rel_slack) && value <= upper * (1.0 + rel_slack);
        Self {
            lower,
            value,
            upper,
            pass,
        }
    }
}

/// The three distortion inequalities of the disk coordinate z = phi_a^{-1}(lambda):
///
/// (a/2) d / (|l|^(1/2) (|l|+a^2)) <= 1-|z| <= 4a d / (|l|^(1/2) (|l|+a^2)),
/// sqrt(2) a / (|l|+a^2)^(1/2)     <= |z-1| <= 2a / (|l|+a^2)^(1/2),
/// sqrt(2) |l|^(1/2) / (|l|+a^2)^(1/2) <= |z+1| <= 2 |l|^(1/2) / (|l|+a^2)^(1/2),
///
/// where d = dist(lambda, [0, inf)).
pub fn lemma_ese2_check(a: MapParameter, lambda: SlitPoint) -> [DoubleBound; 3] {
    let z = phi_inv(a, lambda);
    let l = lambda.get();
    let av = a.get();
    let dist = dist_halfline(l);
    let abs_l = l.norm();
    let denom = abs_l + av * av;

    let first = DoubleBound::check(
        0.5 * av * dist / (abs_l.sqrt() * denom),
        1.0 - z.norm(),
        4.0 * av * dist / (abs_l.sqrt() * denom),
        1e-10,
    );
    let second = DoubleBound::check(
        2f64.sqrt() * av / denom.sqrt(),
        (z - 1.0).norm(),
        2.0 * av / denom.sqrt(),
        1e-10,
    );
    let third = DoubleBound::check(
        2f64.sqrt() * abs_l.sqrt() / denom.sqrt(),
        (z + 1.0).norm(),
        2.0 * abs_l.sqrt() / denom.sqrt(),
        1e-10,
    );
    [first, second, third]
}
