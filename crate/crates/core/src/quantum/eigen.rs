//! Dense Hermitian eigensolver: cyclic Jacobi on the real-symmetric
//! embedding `[[A, -B], [B, A]]` of `M = A + iB`. Every eigenvalue of `M`
//! appears twice in the embedding.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 60;

/// Largest entry of `M - M†`.
pub fn hermitian_defect(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn check(m: &DMatrix<Complex64>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::Domain(format!("matrix is {}×{}, not square", m.nrows(), m.ncols())));
    }
    let scale = m.iter().fold(1.0_f64, |a, z| a.max(z.norm()));
    let d = hermitian_defect(m);
    if d > 1e-10 * scale {
        return Err(Error::NotHermitian(d));
    }
    Ok(())
}

fn embed(m: &DMatrix<Complex64>) -> DMatrix<f64> {
    let n = m.nrows();
    let mut s = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            // symmetrize so rounding in the input cannot break symmetry
            let z = 0.5 * (m[(i, j)] + m[(j, i)].conj());
            s[(i, j)] = z.re;
            s[(i + n, j + n)] = z.re;
            s[(i + n, j)] = z.im;
            s[(i, j + n)] = -z.im;
        }
    }
    s
}

/// Cyclic Jacobi on a symmetric matrix; returns eigenvalues (unsorted) and,
/// if requested, eigenvectors as columns.
fn jacobi(mut a: DMatrix<f64>, want_vectors: bool) -> Result<(Vec<f64>, Option<DMatrix<f64>>)> {
    let n = a.nrows();
    let mut v = want_vectors.then(|| DMatrix::<f64>::identity(n, n));
    let norm2: f64 = a.iter().map(|x| x * x).sum();
    let target = (f64::EPSILON * f64::EPSILON) * norm2.max(f64::MIN_POSITIVE);
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += 2.0 * a[(p, q)] * a[(p, q)];
            }
        }
        if off <= target {
            let vals = (0..n).map(|i| a[(i, i)]).collect();
            return Ok((vals, v));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                if apq.abs() < 1e-300 {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[(r, p)];
                    let arq = a[(r, q)];
                    let np = c * arp - s * arq;
                    let nq = s * arp + c * arq;
                    a[(r, p)] = np;
                    a[(p, r)] = np;
                    a[(r, q)] = nq;
                    a[(q, r)] = nq;
                }
                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                if let Some(v) = v.as_mut() {
                    for r in 0..n {
                        let vp = v[(r, p)];
                        let vq = v[(r, q)];
                        v[(r, p)] = c * vp - s * vq;
                        v[(r, q)] = s * vp + c * vq;
                    }
                }
            }
        }
    }
    Err(Error::Numerical(format!(
        "Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps on a {n}×{n} matrix"
    )))
}

/// Sorted (ascending) spectrum of a Hermitian matrix.
pub fn herm_eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    check(m)?;
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let (mut vals, _) = jacobi(embed(m), false)?;
    vals.sort_by(f64::total_cmp);
    Ok(vals.into_iter().step_by(2).collect())
}

/// Sorted spectrum with one unit eigenvector per eigenvalue. Within a
/// degenerate eigenspace the returned vectors need not be orthogonal.
pub fn herm_eigen(m: &DMatrix<Complex64>) -> Result<(Vec<f64>, Vec<DVector<Complex64>>)> {
    check(m)?;
    let n = m.nrows();
    let (vals, vecs) = jacobi(embed(m), true)?;
    let vecs = vecs.expect("vectors requested");
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let mut out_vals = Vec::with_capacity(n);
    let mut out_vecs = Vec::with_capacity(n);
    for &idx in order.iter().step_by(2) {
        let v = DVector::from_fn(n, |i, _| Complex64::new(vecs[(i, idx)], vecs[(i + n, idx)]));
        let norm = v.norm();
        out_vals.push(vals[idx]);
        out_vecs.push(v / Complex64::from(norm));
    }
    Ok((out_vals, out_vecs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, seed: u64) -> DMatrix<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = DMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        for i in 0..n {
            m[(i, i)].im = 0.0;
            for j in 0..i {
                m[(i, j)] = m[(j, i)].conj();
            }
        }
        m
    }

    #[test]
    fn trivial_spectra() {
        let id = DMatrix::<Complex64>::identity(4, 4);
        assert_eq!(herm_eigenvalues(&id).unwrap(), vec![1.0; 4]);
        let d = DMatrix::from_diagonal(&DVector::from_vec(
            [-0.5, 0.5, 0.5, 0.5].map(Complex64::from).to_vec(),
        ));
        assert_eq!(herm_eigenvalues(&d).unwrap(), vec![-0.5, 0.5, 0.5, 0.5]);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = DMatrix::<Complex64>::identity(3, 3);
        m[(0, 1)] = Complex64::new(0.0, 1.0);
        assert!(matches!(herm_eigenvalues(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn matches_bisection_oracle() {
        for seed in 0..5 {
            let m = random_hermitian(8, seed);
            let got = herm_eigenvalues(&m).unwrap();
            let want = oracles::eigenvalues_bisection(&m);
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).abs() < 1e-10, "{g} vs {w}");
            }
        }
    }

    #[test]
    fn backward_error() {
        let m = random_hermitian(12, 42);
        let norm = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let (vals, vecs) = herm_eigen(&m).unwrap();
        for (l, v) in vals.iter().zip(&vecs) {
            let r = &m * v - v * Complex64::from(*l);
            assert!(r.norm() <= 1e-10 * norm);
        }
    }

    #[test]
    fn degenerate_spectrum() {
        // U diag(1,1,2,2) U† for a random unitary-ish rotation
        let m = random_hermitian(4, 3);
        let (_, vecs) = herm_eigen(&m).unwrap();
        let u = DMatrix::from_columns(&vecs);
        let d = DMatrix::from_diagonal(&DVector::from_vec(
            [1.0, 1.0, 2.0, 2.0].map(Complex64::from).to_vec(),
        ));
        let a = &u * d * u.adjoint();
        let vals = herm_eigenvalues(&a).unwrap();
        for (g, w) in vals.iter().zip([1.0, 1.0, 2.0, 2.0]) {
            assert!((g - w).abs() < 1e-12);
        }
    }
}
