//! Closed-form spectral oracle for constant-coefficient tridiagonal matrices.
//!
//! `tridiag(c, d, c)` of order `n` has eigenvalues `d + 2c·cos(kπ/(n+1))`
//! and eigenvectors `q_k(j) = √(2/(n+1)) sin(jkπ/(n+1))`. The eigenvector
//! matrix is a scaled type-I discrete sine transform, applied here in
//! `O(n log n)` through a complex FFT of the odd extension.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::Result;

/// Unnormalized DST-I: `y_k = Σ_{j=1}^{n} x_j sin(π j k/(n+1))`, `k = 1..n`.
pub fn dst1(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let len = 2 * (n + 1);
    let fft = FftPlanner::<f64>::new().plan_fft_forward(len);
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    for (j, &xj) in x.iter().enumerate() {
        buf[j + 1] = Complex64::new(xj, 0.0);
        buf[len - j - 1] = Complex64::new(-xj, 0.0);
    }
    fft.process(&mut buf);
    (1..=n).map(|k| -0.5 * buf[k].im).collect()
}

/// `λ_k = diag + 2·off·cos(kπ/(n+1))`, written so that eigenvalues near
/// `diag ∓ 2|off|` keep full relative accuracy.
pub fn toeplitz_tridiag_eigenvalue(diag: f64, off: f64, n: usize, k: usize) -> f64 {
    let half = std::f64::consts::PI * k as f64 / (2.0 * (n as f64 + 1.0));
    if off <= 0.0 {
        (diag + 2.0 * off) - 4.0 * off * half.sin().powi(2)
    } else {
        (diag - 2.0 * off) + 4.0 * off * half.cos().powi(2)
    }
}

/// `f(T) v` for `T = tridiag(off, diag, off)`.
///
/// Row `k−1` of the spectrum corresponds to `λ_k = diag + 2·off·cos(kπ/(n+1))`.
pub fn toeplitz_tridiag_funv<F>(diag: f64, off: f64, f: F, v: &DMatrix<f64>) -> Result<DMatrix<f64>>
where
    F: Fn(f64) -> Result<f64>,
{
    let n = v.nrows();
    let scale = 2.0 / (n as f64 + 1.0);
    let weights: Vec<f64> =
        (1..=n).map(|k| f(toeplitz_tridiag_eigenvalue(diag, off, n, k)).map(|fk| fk * scale)).collect::<Result<_>>()?;
    let mut out = DMatrix::zeros(n, v.ncols());
    for c in 0..v.ncols() {
        let mut coeff = dst1(v.column(c).as_slice());
        coeff.iter_mut().zip(&weights).for_each(|(x, w)| *x *= w);
        out.set_column(c, &nalgebra::DVector::from_vec(dst1(&coeff)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalue_forms_agree() {
        for (d, e) in [(2.0, -1.0), (2.0, 1.0), (3.5, -0.25), (1.0, 0.0)] {
            for k in 1..=9 {
                let naive = d + 2.0 * e * (std::f64::consts::PI * k as f64 / 10.0).cos();
                assert!((toeplitz_tridiag_eigenvalue(d, e, 9, k) - naive).abs() < 1e-14);
            }
        }
        // Smallest Laplacian eigenvalue 4 sin²(π/(2(n+1))) without cancellation.
        let n = 100_000;
        let want = 4.0 * (std::f64::consts::PI / (2.0 * (n as f64 + 1.0))).sin().powi(2);
        assert_eq!(toeplitz_tridiag_eigenvalue(2.0, -1.0, n, 1), want);
        assert!(toeplitz_tridiag_eigenvalue(2.0, 1.0, n, n) > 0.0);
    }

    #[test]
    fn dst_matches_direct_sum() {
        let x = [0.3, -1.0, 2.5, 0.0, 4.0, -0.75, 1.25];
        let n = x.len();
        let y = dst1(&x);
        for k in 1..=n {
            let direct: f64 =
                (1..=n).map(|j| x[j - 1] * (std::f64::consts::PI * (j * k) as f64 / (n as f64 + 1.0)).sin()).sum();
            assert!((y[k - 1] - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn dst_is_an_involution_up_to_scale() {
        let x: Vec<f64> = (0..33).map(|i| ((i * 13) % 7) as f64 - 3.0).collect();
        let back = dst1(&dst1(&x));
        let s = 2.0 / 34.0;
        for (a, b) in back.iter().zip(&x) {
            assert!((a * s - b).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_function_reproduces_product() {
        let n = 25;
        let v = DMatrix::from_fn(n, 1, |i, _| (i as f64).sin());
        let y = toeplitz_tridiag_funv(2.0, -1.0, Ok, &v).unwrap();
        for i in 0..n {
            let mut s = 2.0 * v[i];
            if i > 0 {
                s -= v[i - 1];
            }
            if i + 1 < n {
                s -= v[i + 1];
            }
            assert!((y[i] - s).abs() < 1e-12);
        }
    }
}
