//! Linear solves by LU factorization with partial pivoting.

use super::{ComplexMatrix, LinalgError, Result};
use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

struct LuFactors {
    lu: ComplexMatrix,
    perm: Vec<usize>,
    min_pivot: f64,
}

fn lu_factor(a: &ComplexMatrix) -> LuFactors {
    let n = a.dim();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut min_pivot = f64::INFINITY;
    for k in 0..n {
        // Partial pivot on column k.
        let mut best = k;
        let mut best_mag = lu[(k, k)].norm();
        for i in k + 1..n {
            let mag = lu[(i, k)].norm();
            if mag > best_mag {
                best_mag = mag;
                best = i;
            }
        }
        if best != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(best, j)];
                lu[(best, j)] = tmp;
            }
            perm.swap(k, best);
        }
        let pivot = lu[(k, k)];
        min_pivot = min_pivot.min(pivot.norm());
        if pivot == ZERO {
            continue; // exactly singular; remaining column is zero
        }
        for i in k + 1..n {
            let factor = lu[(i, k)] / pivot;
            lu[(i, k)] = factor;
            if factor == ZERO {
                continue;
            }
            for j in k + 1..n {
                let upd = factor * lu[(k, j)];
                lu[(i, j)] -= upd;
            }
        }
    }
    LuFactors { lu, perm, min_pivot }
}

fn lu_solve_factored(f: &LuFactors, rhs: &ComplexMatrix) -> ComplexMatrix {
    let n = f.lu.dim();
    let mut x = ComplexMatrix::from_fn(n, |i, j| rhs[(f.perm[i], j)]);
    // Forward substitution with unit lower triangle.
    for j in 0..n {
        for i in 1..n {
            let mut s = x[(i, j)];
            for k in 0..i {
                s -= f.lu[(i, k)] * x[(k, j)];
            }
            x[(i, j)] = s;
        }
        // Back substitution.
        for i in (0..n).rev() {
            let mut s = x[(i, j)];
            for k in i + 1..n {
                s -= f.lu[(i, k)] * x[(k, j)];
            }
            x[(i, j)] = s / f.lu[(i, i)];
        }
    }
    x
}

/// Solves A X = B.
pub fn lu_solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.dim() != b.dim() {
        return Err(LinalgError::DimensionMismatch(format!(
            "{} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    let f = lu_factor(a);
    let threshold = f64::EPSILON * a.dim() as f64 * a.max_abs();
    if f.min_pivot <= threshold {
        return Err(LinalgError::SingularShift {
            shift: ZERO,
            pivot: f.min_pivot,
        });
    }
    Ok(lu_solve_factored(&f, b))
}

/// A^{-1} via LU.
pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    lu_solve(a, &ComplexMatrix::identity(a.dim()))
}

/// (lambda I - A)^{-1}. Fails with a singular-shift error when the shifted
/// matrix is singular to working precision (pivot below eps * dim * scale).
pub fn resolvent_apply(a: &ComplexMatrix, lambda: Complex64) -> Result<ComplexMatrix> {
    let shifted = a.scale(Complex64::new(-1.0, 0.0)).add_scalar_diag(lambda);
    let f = lu_factor(&shifted);
    let threshold = f64::EPSILON * a.dim() as f64 * shifted.max_abs();
    if f.min_pivot <= threshold {
        return Err(LinalgError::SingularShift {
            shift: lambda,
            pivot: f.min_pivot,
        });
    }
    Ok(lu_solve_factored(&f, &ComplexMatrix::identity(a.dim())))
}

/// Frobenius residual ||(lambda I - A) X - I||_F, for reporting.
pub fn resolvent_residual(a: &ComplexMatrix, lambda: Complex64, x: &ComplexMatrix) -> f64 {
    let shifted = a.scale(Complex64::new(-1.0, 0.0)).add_scalar_diag(lambda);
    let prod = shifted.matmul(x).expect("dims checked");
    prod.sub(&ComplexMatrix::identity(a.dim()))
        .expect("dims checked")
        .frobenius_norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn resolvent_of_zero_matrix() {
        let a = ComplexMatrix::zeros(3);
        let r = resolvent_apply(&a, c(2.0, 0.0)).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { c(0.5, 0.0) } else { c(0.0, 0.0) };
                assert!((r[(i, j)] - expect).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn resolvent_of_scalar() {
        let a = ComplexMatrix::diagonal(&[c(1.0, 0.0)]);
        let r = resolvent_apply(&a, c(3.0, 0.0)).unwrap();
        assert!((r[(0, 0)] - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn singular_shift_detected() {
        let a = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(2.0, 0.0)]);
        assert!(matches!(
            resolvent_apply(&a, c(2.0, 0.0)),
            Err(LinalgError::SingularShift { .. })
        ));
    }

    /// Oracle: the defining residual (lambda - A) X = I.
    #[test]
    fn random_resolvent_residual() {
        let mut state = 99u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let a = ComplexMatrix::from_fn(4, |_, _| c(next(), next()));
        let lambda = c(3.0, 2.0);
        let x = resolvent_apply(&a, lambda).unwrap();
        let res = resolvent_residual(&a, lambda, &x);
        assert!(res <= 1e-9 * 4.0, "residual {res}");
    }

    #[test]
    fn lu_inverse_roundtrip() {
        let a = ComplexMatrix::new(
            2,
            vec![c(1.0, 1.0), c(2.0, 0.0), c(0.0, 1.0), c(1.0, -1.0)],
        )
        .unwrap();
        let inv = inverse(&a).unwrap();
        let prod = a.matmul(&inv).unwrap();
        let defect = prod
            .sub(&ComplexMatrix::identity(2))
            .unwrap()
            .frobenius_norm();
        assert!(defect < 1e-14);
    }
}
