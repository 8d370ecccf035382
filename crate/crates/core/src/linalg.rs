//! Dense linear algebra used by the grid solvers.
//!
//! Symmetric eigenproblems and LU solves are delegated to `nalgebra`. The
//! general real eigenproblem (needed for the nonsymmetric finite-difference
//! operators) is solved here: power-of-two balancing, Householder reduction to
//! upper Hessenberg form, then the Francis double-shift QR iteration.
//!
//! All tolerances are taken relative to the max-row-sum norm.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

/// Row-major dense real matrix.
pub type DenseMatrix = DMatrix<f64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: matrix has {expected} rows, vector has {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not symmetric: max |A_ij - A_ji| = {asymmetry:e} exceeds {tolerance:e}")]
    NotSymmetric { asymmetry: f64, tolerance: f64 },
    #[error("QR iteration did not converge after {iterations} iterations (active block size {active})")]
    NoConvergence { iterations: usize, active: usize },
    #[error("matrix is singular to working precision (pivot {pivot:e})")]
    Singular { pivot: f64 },
}

/// Max-row-sum norm, ‖A‖_∞.
pub fn norm_inf(a: &DenseMatrix) -> f64 {
    a.row_iter()
        .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn check_square(a: &DenseMatrix) -> Result<(), LinalgError> {
    if a.nrows() != a.ncols() {
        return Err(LinalgError::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    Ok(())
}

fn check_finite(a: &DenseMatrix) -> Result<(), LinalgError> {
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            if !a[(i, j)].is_finite() {
                return Err(LinalgError::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// Largest |A_ij − A_ji|.
pub fn max_asymmetry(a: &DenseMatrix) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((a[(i, j)] - a[(j, i)]).abs());
        }
    }
    worst
}

/// Eigen-decomposition of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `i` is the unit eigenvector for `eigenvalues[i]`.
    pub eigenvectors: DenseMatrix,
    /// max_i ‖A v_i − λ_i v_i‖₂.
    pub max_residual: f64,
}

/// Symmetric eigensolve with ascending eigenvalues and orthonormal vectors.
pub fn eig_symmetric(a: &DenseMatrix) -> Result<SymmetricEigen, LinalgError> {
    check_square(a)?;
    check_finite(a)?;
    let norm = norm_inf(a);
    let tolerance = 1e-12 * norm;
    let asymmetry = max_asymmetry(a);
    if asymmetry > tolerance {
        return Err(LinalgError::NotSymmetric {
            asymmetry,
            tolerance,
        });
    }
    let n = a.nrows();
    if n == 0 {
        return Ok(SymmetricEigen {
            eigenvalues: Vec::new(),
            eigenvectors: DenseMatrix::zeros(0, 0),
            max_residual: 0.0,
        });
    }

    let eig = nalgebra::SymmetricEigen::try_new(a.clone(), f64::EPSILON, 0).ok_or(
        LinalgError::NoConvergence {
            iterations: 0,
            active: n,
        },
    )?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = DenseMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }

    let residuals = a * &eigenvectors - &eigenvectors * DenseMatrix::from_diagonal(&DVector::from_vec(eigenvalues.clone()));
    let max_residual = residuals
        .column_iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max);

    Ok(SymmetricEigen {
        eigenvalues,
        eigenvectors,
        max_residual,
    })
}

/// Solves `A x = b` by LU with partial pivoting.
pub fn solve_linear(a: &DenseMatrix, b: &DVector<f64>) -> Result<DVector<f64>, LinalgError> {
    check_square(a)?;
    check_finite(a)?;
    if b.len() != a.nrows() {
        return Err(LinalgError::DimensionMismatch {
            expected: a.nrows(),
            found: b.len(),
        });
    }
    let norm = norm_inf(a);
    let lu = a.clone().lu();
    let u = lu.u();
    let pivot = u.diagonal().iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
    if !(pivot > 1e-14 * norm) {
        return Err(LinalgError::Singular { pivot });
    }
    lu.solve(b).ok_or(LinalgError::Singular { pivot })
}

/// Determinant by LU, used as an independent check of eigenvalue products.
pub fn determinant(a: &DenseMatrix) -> Result<f64, LinalgError> {
    check_square(a)?;
    Ok(a.clone().lu().determinant())
}

/// Scales rows and columns by powers of two so that each row and column
/// have comparable norms. Returns the balanced matrix and the scale vector
/// `d` such that the result equals `D⁻¹ A D`.
pub fn balance(a: &DenseMatrix) -> (DenseMatrix, Vec<f64>) {
    const RADIX: f64 = 2.0;
    let n = a.nrows();
    let mut b = a.clone();
    let mut scale = vec![1.0; n];
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += b[(j, i)].abs();
                    r += b[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= sqrdx;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= sqrdx;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let inv = 1.0 / f;
                for j in 0..n {
                    b[(i, j)] *= inv;
                }
                for j in 0..n {
                    b[(j, i)] *= f;
                }
                scale[i] *= f;
            }
        }
    }
    (b, scale)
}

/// All eigenvalues of a real square matrix, in no particular order.
pub fn eig_general(a: &DenseMatrix) -> Result<Vec<Complex64>, LinalgError> {
    check_square(a)?;
    check_finite(a)?;
    let n = a.nrows();
    match n {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![Complex64::new(a[(0, 0)], 0.0)]),
        _ => {}
    }
    let (balanced, _) = balance(a);
    let mut h = balanced.hessenberg().h();
    for j in 0..n {
        for i in (j + 2)..n {
            h[(i, j)] = 0.0;
        }
    }
    hessenberg_qr(&mut h)
}

/// Francis double-shift QR on an upper Hessenberg matrix (destroyed).
fn hessenberg_qr(a: &mut DenseMatrix) -> Result<Vec<Complex64>, LinalgError> {
    const MAX_ITS: usize = 60;
    let n = a.nrows();
    let mut wr = vec![0.0; n];
    let mut wi = vec![0.0; n];

    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[(i, j)].abs();
        }
    }

    // `nn` is the last row of the active block, `l` its first.
    let mut nn = n as isize - 1;
    let mut t = 0.0;
    while nn >= 0 {
        let mut its = 0;
        loop {
            let nu = nn as usize;
            let mut l = nu;
            while l >= 1 {
                let mut s = a[(l - 1, l - 1)].abs() + a[(l, l)].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[(l, l - 1)].abs() <= f64::EPSILON * s {
                    a[(l, l - 1)] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[(nu, nu)];
            if l == nu {
                wr[nu] = x + t;
                wi[nu] = 0.0;
                nn -= 1;
                break;
            }
            let mut y = a[(nu - 1, nu - 1)];
            let mut w = a[(nu, nu - 1)] * a[(nu - 1, nu)];
            if l == nu - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let mut z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    z = p + z.copysign(p);
                    wr[nu - 1] = x + z;
                    wr[nu] = x + z;
                    if z != 0.0 {
                        wr[nu] = x - w / z;
                    }
                    wi[nu - 1] = 0.0;
                    wi[nu] = 0.0;
                } else {
                    wr[nu - 1] = x + p;
                    wr[nu] = x + p;
                    wi[nu - 1] = -z;
                    wi[nu] = z;
                }
                nn -= 2;
                break;
            }

            if its == MAX_ITS {
                return Err(LinalgError::NoConvergence {
                    iterations: its,
                    active: nu + 1,
                });
            }
            if its > 0 && its % 10 == 0 {
                // exceptional shift
                t += x;
                for i in 0..=nu {
                    a[(i, i)] -= x;
                }
                let s = a[(nu, nu - 1)].abs() + a[(nu - 1, nu - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;

            let mut m = nu - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = a[(m, m)];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a[(m + 1, m)] + a[(m, m + 1)];
                q = a[(m + 1, m + 1)] - z - rr - ss;
                r = a[(m + 2, m + 1)];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[(m, m - 1)].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[(m - 1, m - 1)].abs() + z.abs() + a[(m + 1, m + 1)].abs());
                if u <= f64::EPSILON * v {
                    break;
                }
                m -= 1;
            }
            for i in (m + 2)..=nu {
                a[(i, i - 2)] = 0.0;
                if i != m + 2 {
                    a[(i, i - 3)] = 0.0;
                }
            }

            let mut k = m;
            while k < nu {
                if k != m {
                    p = a[(k, k - 1)];
                    q = a[(k + 1, k - 1)];
                    r = if k != nu - 1 { a[(k + 2, k - 1)] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = (p * p + q * q + r * r).sqrt().copysign(p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            a[(k, k - 1)] = -a[(k, k - 1)];
                        }
                    } else {
                        a[(k, k - 1)] = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    let z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nu {
                        let mut pj = a[(k, j)] + q * a[(k + 1, j)];
                        if k != nu - 1 {
                            pj += r * a[(k + 2, j)];
                            a[(k + 2, j)] -= pj * z;
                        }
                        a[(k + 1, j)] -= pj * y;
                        a[(k, j)] -= pj * x;
                    }
                    let mmin = nu.min(k + 3);
                    for i in l..=mmin {
                        let mut pi = x * a[(i, k)] + y * a[(i, k + 1)];
                        if k != nu - 1 {
                            pi += z * a[(i, k + 2)];
                            a[(i, k + 2)] -= pi * r;
                        }
                        a[(i, k + 1)] -= pi * q;
                        a[(i, k)] -= pi;
                    }
                }
                k += 1;
            }
            if l >= nu - 1 {
                break;
            }
        }
    }

    Ok(wr
        .into_iter()
        .zip(wi)
        .map(|(re, im)| Complex64::new(re, im))
        .collect())
}

/// Recovers a unit eigenvector for a real eigenvalue estimate by inverse
/// iteration, returning the vector and ‖(A − λI)v‖₂.
pub fn real_eigenvector(a: &DenseMatrix, lambda: f64) -> Result<(DVector<f64>, f64), LinalgError> {
    check_square(a)?;
    let n = a.nrows();
    let norm = norm_inf(a).max(f64::MIN_POSITIVE);
    let mut shifted = a.clone();
    // Perturb the shift slightly so the LU factor stays nonsingular.
    let shift = lambda + 1e-12 * norm;
    for i in 0..n {
        shifted[(i, i)] -= shift;
    }
    let lu = shifted.lu();
    let mut v = DVector::from_fn(n, |i, _| 1.0 + 0.1 * ((i * 7919 % 97) as f64) / 97.0);
    v /= v.norm();
    for _ in 0..4 {
        let next = lu.solve(&v).ok_or(LinalgError::Singular { pivot: 0.0 })?;
        let nrm = next.norm();
        if !nrm.is_finite() || nrm == 0.0 {
            return Err(LinalgError::Singular { pivot: 0.0 });
        }
        v = next / nrm;
    }
    let mut residual = a * &v;
    residual.axpy(-lambda, &v, 1.0);
    Ok((v, residual.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_real(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn identity_eigenvalues() {
        let eig = eig_symmetric(&DenseMatrix::identity(5, 5)).unwrap();
        assert!(eig.eigenvalues.iter().all(|&v| (v - 1.0).abs() < 1e-15));
    }

    #[test]
    fn diagonal_sorted() {
        let a = DenseMatrix::from_diagonal(&DVector::from_vec(vec![3.0, 1.0, 2.0]));
        let eig = eig_symmetric(&a).unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn rejects_asymmetric() {
        let a = DenseMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(eig_symmetric(&a), Err(LinalgError::NotSymmetric { .. })));
    }

    #[test]
    fn rejects_non_finite() {
        let a = DenseMatrix::from_row_slice(2, 2, &[1.0, f64::NAN, f64::NAN, 1.0]);
        assert!(matches!(eig_general(&a), Err(LinalgError::NonFinite { .. })));
    }

    #[test]
    fn companion_cubic() {
        // s^3 - 6 s^2 + 11 s - 6
        let a = DenseMatrix::from_row_slice(3, 3, &[6.0, -11.0, 6.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        let ev = sorted_real(eig_general(&a).unwrap());
        for (got, want) in ev.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got.re - want).abs() < 1e-12, "{got}");
            assert!(got.im.abs() < 1e-12);
        }
    }

    #[test]
    fn rotation_has_imaginary_pair() {
        let a = DenseMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let ev = sorted_real(eig_general(&a).unwrap());
        assert!((ev[0] - Complex64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((ev[1] - Complex64::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn solve_small_systems() {
        let x = solve_linear(&DenseMatrix::identity(3, 3), &DVector::from_vec(vec![1.0, -2.0, 3.0])).unwrap();
        assert_eq!(x.as_slice(), &[1.0, -2.0, 3.0]);
        let a = DenseMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 4.0]);
        let x = solve_linear(&a, &DVector::from_vec(vec![2.0, 4.0])).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn singular_system_is_rejected() {
        let a = DenseMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        let err = solve_linear(&a, &DVector::from_vec(vec![1.0, 1.0])).unwrap_err();
        assert!(matches!(err, LinalgError::Singular { .. }));
    }

    #[test]
    fn balancing_is_a_similarity() {
        let a = DenseMatrix::from_row_slice(3, 3, &[1.0, 1e6, 0.0, 1e-6, 2.0, 1e4, 0.0, 1e-4, 3.0]);
        let (b, d) = balance(&a);
        for i in 0..3 {
            for j in 0..3 {
                let expected = a[(i, j)] * d[j] / d[i];
                assert!((b[(i, j)] - expected).abs() <= 1e-15 * expected.abs().max(1.0));
            }
        }
        assert!(norm_inf(&b) < norm_inf(&a));
    }
}
