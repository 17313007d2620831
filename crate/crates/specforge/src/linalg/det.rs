//! Regularized determinants det_n(I - C).

use super::{default_cluster_tol, eigenvalues_raw, ComplexMatrix, LinalgError, Result};
use num_complex::Complex64;

/// det_n(I - C) = prod over sigma(C) of (1 - lambda) exp(sum_{j<n} lambda^j / j).
///
/// Accumulates in log-magnitude + phase so products at dim ~ 10^3 cannot
/// overflow before the final exponential. Returns exactly zero when some
/// eigenvalue of C equals 1 within the default clustering tolerance.
pub fn det_regularized(c: &ComplexMatrix, n: u32) -> Result<Complex64> {
    let (log_mag, phase) = det_regularized_log(c, n)?;
    if log_mag == f64::NEG_INFINITY {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(Complex64::from_polar(log_mag.exp(), phase))
}

/// Log form of `det_regularized`: (log|det|, arg det), with
/// log|det| = -inf signalling an exact zero.
pub fn det_regularized_log(c: &ComplexMatrix, n: u32) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(LinalgError::InvalidRegularization);
    }
    let eigs = eigenvalues_raw(c)?;
    let tol = default_cluster_tol(c);
    let one = Complex64::new(1.0, 0.0);
    if eigs.iter().any(|l| (l - one).norm() <= tol) {
        return Ok((f64::NEG_INFINITY, 0.0));
    }
    let mut log_mag = 0.0;
    let mut phase = 0.0;
    for l in eigs {
        let factor = one - l;
        log_mag += factor.norm().ln();
        phase += factor.arg();
        let mut pw = one;
        for j in 1..n {
            pw *= l;
            log_mag += pw.re / f64::from(j);
            phase += pw.im / f64::from(j);
        }
    }
    Ok((log_mag, phase))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn det_of_identity_is_one() {
        // det_n(I) corresponds to C = 0.
        let z = ComplexMatrix::zeros(4);
        for n in [1u32, 2, 3] {
            let d = det_regularized(&z, n).unwrap();
            assert_eq!(d, c(1.0, 0.0));
        }
    }

    #[test]
    fn det1_of_diagonal() {
        let a = ComplexMatrix::diagonal(&[c(0.5, 0.0), c(0.0, 0.0)]);
        let d = det_regularized(&a, 1).unwrap();
        assert!((d - c(0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn det2_vanishes_on_unit_eigenvalue() {
        let a = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(0.0, 0.0)]);
        let d = det_regularized(&a, 2).unwrap();
        assert_eq!(d, c(0.0, 0.0));
    }

    /// Oracle: cofactor expansion of det(I - C) for dim <= 4.
    fn cofactor_det(m: &[Vec<Complex64>]) -> Complex64 {
        let n = m.len();
        if n == 1 {
            return m[0][0];
        }
        let mut acc = c(0.0, 0.0);
        for j in 0..n {
            let minor: Vec<Vec<Complex64>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(k, _)| *k != j)
                        .map(|(_, v)| *v)
                        .collect()
                })
                .collect();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            acc += m[0][j] * sign * cofactor_det(&minor);
        }
        acc
    }

    #[test]
    fn det1_matches_cofactor_oracle() {
        let mut state = 5u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for dim in [2usize, 3, 4] {
            let a = ComplexMatrix::from_fn(dim, |_, _| c(next(), next()));
            let i_minus_a: Vec<Vec<Complex64>> = (0..dim)
                .map(|i| {
                    (0..dim)
                        .map(|j| if i == j { c(1.0, 0.0) - a[(i, j)] } else { -a[(i, j)] })
                        .collect()
                })
                .collect();
            let oracle = cofactor_det(&i_minus_a);
            let d = det_regularized(&a, 1).unwrap();
            assert!(
                (d - oracle).norm() <= 1e-9 * (1.0 + oracle.norm()),
                "dim {dim}: {d} vs {oracle}"
            );
        }
    }
}
