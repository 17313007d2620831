//! Complex dense eigensolver: Householder reduction to upper Hessenberg
//! form, then implicit single-shift QR iteration with Wilkinson shifts.
//!
//! Eigenvalues only (no Schur vectors); deflated blocks of size one and two
//! are resolved in closed form. The iteration budget is 100 * dim QR steps,
//! after which a `NonConvergence` error carries residual diagnostics.

use super::{ComplexMatrix, LinalgError, Result, Spectrum};
use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// All eigenvalues of `a`, unclustered, in deflation order.
pub fn eigenvalues_raw(a: &ComplexMatrix) -> Result<Vec<Complex64>> {
    if a.dim() == 0 {
        return Err(LinalgError::EmptyMatrix);
    }
    if !a.is_finite() {
        return Err(LinalgError::NonFinite { row: 0, col: 0 });
    }
    let n = a.dim();
    let mut h = a.clone();
    hessenberg_in_place(&mut h);
    qr_eigenvalues(&mut h)
        .map(|mut eigs| {
            debug_assert_eq!(eigs.len(), n);
            // Deflation order is implementation detail; fix a canonical order.
            eigs.sort_by(|x, y| {
                x.re.partial_cmp(&y.re)
                    .unwrap()
                    .then(x.im.partial_cmp(&y.im).unwrap())
            });
            eigs
        })
}

/// Eigenvalues clustered into (value, algebraic multiplicity) pairs.
pub fn eigenvalues(a: &ComplexMatrix, cluster_tol: f64) -> Result<Spectrum> {
    let raw = eigenvalues_raw(a)?;
    Ok(Spectrum::from_raw(raw, cluster_tol))
}

/// Real eigenvalues of a (numerically) Hermitian matrix, sorted ascending.
///
/// Runs the general complex solver and discards the O(eps)-level imaginary
/// parts; adequate at desk scale.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let raw = eigenvalues_raw(a)?;
    let mut ev: Vec<f64> = raw.into_iter().map(|z| z.re).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(ev)
}

/// In-place unitary reduction to upper Hessenberg form.
fn hessenberg_in_place(h: &mut ComplexMatrix) {
    let n = h.dim();
    if n < 3 {
        return;
    }
    let mut v = vec![ZERO; n];
    for k in 0..n - 2 {
        // Column piece x = H[k+1.., k]; reflect it onto a multiple of e1.
        let mut norm_sq = 0.0;
        for i in k + 1..n {
            norm_sq += h[(i, k)].norm_sqr();
        }
        let norm = norm_sq.sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = h[(k + 1, k)];
        let beta = if alpha == ZERO {
            Complex64::new(-norm, 0.0)
        } else {
            -(alpha / alpha.norm()) * norm
        };
        let m = n - k - 1;
        v[0] = alpha - beta;
        for i in 1..m {
            v[i] = h[(k + 1 + i, k)];
        }
        let vnorm_sq: f64 = v[..m].iter().map(|z| z.norm_sqr()).sum();
        if vnorm_sq == 0.0 {
            continue;
        }
        let scale = 2.0 / vnorm_sq;
        // Left: rows k+1..n over columns k..n.
        for j in k..n {
            let mut s = ZERO;
            for i in 0..m {
                s += v[i].conj() * h[(k + 1 + i, j)];
            }
            s *= scale;
            for i in 0..m {
                let upd = s * v[i];
                h[(k + 1 + i, j)] -= upd;
            }
        }
        // Right: columns k+1..n over all rows.
        for i in 0..n {
            let mut s = ZERO;
            for l in 0..m {
                s += h[(i, k + 1 + l)] * v[l];
            }
            s *= scale;
            for l in 0..m {
                let upd = s * v[l].conj();
                h[(i, k + 1 + l)] -= upd;
            }
        }
        // The reflection maps the column onto beta * e1 exactly.
        h[(k + 1, k)] = beta;
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
}

/// |re| + |im|, the cheap magnitude used for deflation thresholds.
#[inline]
fn cabs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Complex Givens rotation G = [[c, s], [-conj(s), c]] with c real,
/// such that G [x, y]^T = [r, 0]^T.
#[inline]
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64, Complex64) {
    let xn = x.norm();
    let yn = y.norm();
    if yn == 0.0 {
        return (1.0, ZERO, x);
    }
    if xn == 0.0 {
        return (0.0, Complex64::new(1.0, 0.0), y);
    }
    let d = xn.hypot(yn);
    let c = xn / d;
    let phase = x / xn;
    let s = phase * y.conj() / d;
    let r = phase * d;
    (c, s, r)
}

/// Eigenvalues of [[a, b], [c, d]].
fn eig_2x2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let mid = (a + d) * 0.5;
    let off = (a - d) * 0.5;
    let disc = (off * off + b * c).sqrt();
    (mid + disc, mid - disc)
}

/// Implicit single-shift QR sweep on the active block [lo..=hi].
fn qr_step(h: &mut ComplexMatrix, lo: usize, hi: usize, shift: Complex64) {
    let mut x = h[(lo, lo)] - shift;
    let mut y = h[(lo + 1, lo)];
    for k in lo..hi {
        let (c, s, r) = givens(x, y);
        if k > lo {
            h[(k, k - 1)] = r;
            h[(k + 1, k - 1)] = ZERO;
        }
        // Left rotation on rows k, k+1.
        for j in k..=hi {
            let t1 = h[(k, j)];
            let t2 = h[(k + 1, j)];
            h[(k, j)] = c * t1 + s * t2;
            h[(k + 1, j)] = -s.conj() * t1 + c * t2;
        }
        // Right rotation on columns k, k+1; the bulge lives at row k+2.
        let last_row = usize::min(k + 2, hi);
        for i in lo..=last_row {
            let t1 = h[(i, k)];
            let t2 = h[(i, k + 1)];
            h[(i, k)] = c * t1 + s.conj() * t2;
            h[(i, k + 1)] = -s * t1 + c * t2;
        }
        if k + 1 < hi {
            x = h[(k + 1, k)];
            y = h[(k + 2, k)];
        }
    }
}

fn qr_eigenvalues(h: &mut ComplexMatrix) -> Result<Vec<Complex64>> {
    let n = h.dim();
    let max_total = 100 * n;
    let floor = f64::MIN_POSITIVE * (n as f64 / f64::EPSILON);
    let mut eigs = Vec::with_capacity(n);
    let mut hi = n - 1;
    let mut total = 0usize;
    let mut since_deflation = 0usize;

    loop {
        // Scan for a negligible subdiagonal bounding the active block.
        let mut lo = hi;
        while lo > 0 {
            let w = cabs1(h[(lo, lo - 1)]);
            let tol = (f64::EPSILON * (cabs1(h[(lo - 1, lo - 1)]) + cabs1(h[(lo, lo)]))).max(floor);
            if w <= tol {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }

        if lo == hi {
            eigs.push(h[(hi, hi)]);
            since_deflation = 0;
            if hi == 0 {
                break;
            }
            hi -= 1;
            continue;
        }
        if lo + 1 == hi {
            let (e1, e2) = eig_2x2(h[(lo, lo)], h[(lo, hi)], h[(hi, lo)], h[(hi, hi)]);
            eigs.push(e1);
            eigs.push(e2);
            since_deflation = 0;
            if lo == 0 {
                break;
            }
            hi = lo - 1;
            continue;
        }

        if total >= max_total {
            return Err(LinalgError::NonConvergence {
                iterations: total,
                lo,
                hi,
                residual: h[(hi, hi - 1)].norm(),
            });
        }
        total += 1;
        since_deflation += 1;

        let shift = if since_deflation.is_multiple_of(10) {
            // Exceptional shift to break rare cycles.
            h[(hi, hi)] + Complex64::new(0.75 * cabs1(h[(hi, hi - 1)]), 0.0)
        } else {
            // Wilkinson: eigenvalue of the trailing 2x2 closest to H[hi,hi].
            let (e1, e2) = eig_2x2(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            );
            if (e1 - h[(hi, hi)]).norm() <= (e2 - h[(hi, hi)]).norm() {
                e1
            } else {
                e2
            }
        };
        qr_step(h, lo, hi, shift);
    }
    Ok(eigs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::default_cluster_tol;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn nilpotent_jordan_block() {
        let a = ComplexMatrix::new(2, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        let s = eigenvalues(&a, default_cluster_tol(&a)).unwrap();
        assert_eq!(s.items().len(), 1);
        assert_eq!(s.items()[0].1, 2);
        assert!(s.items()[0].0.norm() < 1e-12);
    }

    #[test]
    fn diagonal_matrix() {
        let a = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(0.0, 2.0)]);
        let s = eigenvalues(&a, default_cluster_tol(&a)).unwrap();
        let items = s.items();
        assert_eq!(items.len(), 2);
        assert!((items[0].0 - c(0.0, 2.0)).norm() < 1e-14);
        assert!((items[1].0 - c(1.0, 0.0)).norm() < 1e-14);
    }

    /// Oracle: roots of z^2 - 3z + 2 by the quadratic formula.
    #[test]
    fn companion_matrix_of_quadratic() {
        // z^2 - 3z + 2; companion with last column of negated coefficients.
        let a = ComplexMatrix::new(2, vec![c(0.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0), c(3.0, 0.0)])
            .unwrap();
        let disc = (3.0f64 * 3.0 - 4.0 * 2.0).sqrt();
        let r1 = (3.0 - disc) / 2.0;
        let r2 = (3.0 + disc) / 2.0;
        let s = eigenvalues(&a, default_cluster_tol(&a)).unwrap();
        let items = s.items();
        assert_eq!(items.len(), 2);
        assert!((items[0].0 - c(r1, 0.0)).norm() < 1e-10);
        assert!((items[1].0 - c(r2, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn multiplicities_sum_to_dim() {
        // Deterministic pseudo-random 12x12.
        let mut state = 0x9E3779B97F4A7C15u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let a = ComplexMatrix::from_fn(12, |_, _| c(next(), next()));
        let s = eigenvalues(&a, default_cluster_tol(&a)).unwrap();
        assert_eq!(s.total_multiplicity(), 12);
    }

    #[test]
    fn trace_matches_eigenvalue_sum() {
        let mut state = 7u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let a = ComplexMatrix::from_fn(15, |_, _| c(next(), next()));
        let eigs = eigenvalues_raw(&a).unwrap();
        let sum: Complex64 = eigs.iter().sum();
        let trace: Complex64 = (0..15).map(|i| a[(i, i)]).sum();
        assert!((sum - trace).norm() < 1e-11 * (1.0 + trace.norm()));
    }

    #[test]
    fn hermitian_spectrum_is_real_and_sorted() {
        let a = ComplexMatrix::new(
            3,
            vec![
                c(2.0, 0.0),
                c(1.0, 1.0),
                c(0.0, -2.0),
                c(1.0, -1.0),
                c(-1.0, 0.0),
                c(0.5, 0.0),
                c(0.0, 2.0),
                c(0.5, 0.0),
                c(3.0, 0.0),
            ],
        )
        .unwrap();
        assert!(a.hermitian_defect() < 1e-15);
        let ev = hermitian_eigenvalues(&a).unwrap();
        assert!(ev.windows(2).all(|w| w[0] <= w[1]));
        let sum: f64 = ev.iter().sum();
        assert!((sum - 4.0).abs() < 1e-12);
    }

    #[test]
    fn zero_matrix_immediate() {
        let a = ComplexMatrix::zeros(5);
        let eigs = eigenvalues_raw(&a).unwrap();
        assert!(eigs.iter().all(|z| z.norm() == 0.0));
    }
}
