//! Singular values, Schatten norms, and the regularized-determinant bound.

use super::{
    det_regularized, hermitian_eigenvalues, ComplexMatrix, GammaConstant, Result, SchattenOrder,
};

/// Singular values of `a`: square roots of the eigenvalues of A*A,
/// sorted nonincreasing. Tiny negative Gram eigenvalues are clamped to zero.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let gram = a.adjoint().matmul(a)?;
    let ev = hermitian_eigenvalues(&gram)?;
    let sv: Vec<f64> = ev.into_iter().rev().map(|x| x.max(0.0).sqrt()).collect();
    Ok(sv)
}

/// Schatten norm ||A||_{S_p} = (sum_n mu_n(A)^p)^{1/p}.
pub fn schatten_norm(a: &ComplexMatrix, p: f64) -> Result<f64> {
    let order = SchattenOrder::new(p)?;
    let sv = singular_values(a)?;
    Ok(sv
        .iter()
        .map(|s| s.powf(order.p()))
        .sum::<f64>()
        .powf(1.0 / order.p()))
}

/// Result of checking |det_ceil(p)(I - C)| <= exp(Gamma_p ||C||_p^p).
#[derive(Debug, Clone, Copy)]
pub struct DetBoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

pub fn det_bound_check(c: &ComplexMatrix, p: f64) -> Result<DetBoundCheck> {
    let order = SchattenOrder::new(p)?;
    let gamma = GammaConstant::new(p)?;
    let lhs = det_regularized(c, order.ceil_p())?.norm();
    let norm_p = schatten_norm(c, p)?;
    let rhs = (gamma.gamma * norm_p.powf(p)).exp();
    Ok(DetBoundCheck {
        lhs,
        rhs,
        pass: lhs <= rhs * (1.0 + 1e-10),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_singular_values() {
        let a = ComplexMatrix::diagonal(&[c(3.0, 0.0), c(0.0, 4.0)]);
        let sv = singular_values(&a).unwrap();
        assert!((sv[0] - 4.0).abs() < 1e-12);
        assert!((sv[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rank_one_singular_values() {
        let a = ComplexMatrix::new(2, vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        let sv = singular_values(&a).unwrap();
        assert!((sv[0] - 2f64.sqrt()).abs() < 1e-12);
        assert!(sv[1].abs() < 1e-8);
    }

    /// Oracle: eigenvalues of the 2x2 Gram matrix by the quadratic formula.
    #[test]
    fn random_2x2_vs_gram_oracle() {
        let mut state = 0xABCDu64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for _ in 0..20 {
            let a = ComplexMatrix::from_fn(2, |_, _| c(next(), next()));
            // Gram = A* A = [[g11, g12], [conj(g12), g22]] with real diagonal.
            let g = a.adjoint().matmul(&a).unwrap();
            let g11 = g[(0, 0)].re;
            let g22 = g[(1, 1)].re;
            let g12 = g[(0, 1)];
            let tr = g11 + g22;
            let det = g11 * g22 - g12.norm_sqr();
            let disc = ((tr * tr / 4.0 - det).max(0.0)).sqrt();
            let mut expect = [(tr / 2.0 + disc).max(0.0).sqrt(), (tr / 2.0 - disc).max(0.0).sqrt()];
            expect.sort_by(|x, y| y.partial_cmp(x).unwrap());
            let sv = singular_values(&a).unwrap();
            assert!((sv[0] - expect[0]).abs() < 1e-11 * (1.0 + expect[0]));
            assert!((sv[1] - expect[1]).abs() < 1e-11 * (1.0 + expect[0]));
        }
    }

    #[test]
    fn schatten_one_of_diagonal() {
        let a = ComplexMatrix::diagonal(&[c(3.0, 0.0), c(0.0, 4.0)]);
        assert!((schatten_norm(&a, 1.0).unwrap() - 7.0).abs() < 1e-12);
    }

    /// Oracle: entrywise Frobenius sum.
    #[test]
    fn schatten_two_is_frobenius() {
        let a = ComplexMatrix::new(2, vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        assert!((schatten_norm(&a, 2.0).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        let mut state = 11u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for dim in [3usize, 5, 8] {
            let a = ComplexMatrix::from_fn(dim, |_, _| c(next(), next()));
            let fro = a.frobenius_norm();
            let s2 = schatten_norm(&a, 2.0).unwrap();
            assert!((s2 - fro).abs() <= 1e-12 * fro.max(1.0), "{s2} vs {fro}");
        }
    }

    #[test]
    fn det_bound_zero_matrix() {
        let a = ComplexMatrix::zeros(3);
        let chk = det_bound_check(&a, 2.0).unwrap();
        assert!((chk.lhs - 1.0).abs() < 1e-15);
        assert!((chk.rhs - 1.0).abs() < 1e-15);
        assert!(chk.pass);
    }

    /// Closed-form 1x1 evaluation: C = diag(0.5), p = 2.
    #[test]
    fn det_bound_scalar_closed_form() {
        let a = ComplexMatrix::diagonal(&[c(0.5, 0.0)]);
        let chk = det_bound_check(&a, 2.0).unwrap();
        let lhs_expect = 0.5 * 0.5f64.exp();
        let rhs_expect = 0.125f64.exp();
        assert!((chk.lhs - lhs_expect).abs() < 1e-12);
        assert!((chk.rhs - rhs_expect).abs() < 1e-12);
        assert!(chk.pass);
    }
}
