//! Real symmetric operators: dense, diagonal and tridiagonal storage.
//!
//! Every operator supplies products, shifted solves `(A − σI)⁻¹`, a
//! spectral interval and, below the dense limit, a full eigendecomposition
//! used as ground truth.

mod io;
mod sine;
pub(crate) mod tridiag;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::functions::StieltjesFunction;
use tridiag::TridiagLu;

pub use io::{read_dense_matrix, read_diagonal, read_matrix_market, read_operator};
pub use sine::{dst1, toeplitz_tridiag_eigenvalue, toeplitz_tridiag_funv};

/// `n × s` block of real vectors.
pub type BlockVector = DMatrix<f64>;

/// Order above which dense oracles refuse to run.
pub const DEFAULT_DENSE_LIMIT: usize = 4000;

/// Closed interval `[a, b]` with `0 < a ≤ b` enclosing a spectrum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralInterval {
    a: f64,
    b: f64,
}

impl SpectralInterval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a > 0.0 && a <= b && b.is_finite() {
            Ok(Self { a, b })
        } else {
            Err(Error::InvalidInterval { a, b })
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Condition number `κ = b/a`.
    pub fn kappa(&self) -> f64 {
        self.b / self.a
    }

    /// `ρ_{[a,b]} = exp(−π²/log(4κ))`.
    pub fn rho(&self) -> f64 {
        crate::poles::rate_rho(self.a, self.b)
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.a && x <= self.b
    }
}

/// How to obtain a spectral interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IntervalMode {
    /// Gershgorin discs; a non-positive lower end is replaced by `floor` when given.
    Gershgorin { floor: Option<f64> },
    /// Exact extreme eigenvalues: closed forms for diagonal and
    /// constant-coefficient tridiagonal operators, a dense eigendecomposition otherwise.
    ExactSmall { dense_limit: usize },
    /// Taken verbatim.
    User(f64, f64),
}

/// Storage layout of an operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    Dense,
    Diagonal,
    Tridiagonal,
}

/// Real symmetric matrix in one of three storage layouts.
#[derive(Clone, Debug)]
pub enum HermitianOperator {
    Dense(DMatrix<f64>),
    Diagonal(Vec<f64>),
    /// Main diagonal `d` (length n) and off-diagonal `e` (length n − 1).
    Tridiagonal {
        d: Vec<f64>,
        e: Vec<f64>,
    },
}

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: DVector<f64>,
    pub vectors: DMatrix<f64>,
}

impl HermitianOperator {
    /// Dense operator. Asymmetry beyond rounding is rejected; the rest is symmetrized.
    pub fn dense(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
        }
        if m.is_empty() {
            return Err(Error::InvalidParameter("operator of order 0".into()));
        }
        let scale = m.amax().max(f64::MIN_POSITIVE);
        let skew = (&m - m.transpose()).amax();
        if skew > 1e-12 * scale {
            return Err(Error::InvalidParameter(format!("matrix is not symmetric (skew {skew:e})")));
        }
        Ok(Self::Dense((&m + m.transpose()) * 0.5))
    }

    pub fn diagonal(d: Vec<f64>) -> Result<Self> {
        if d.is_empty() {
            return Err(Error::InvalidParameter("operator of order 0".into()));
        }
        Ok(Self::Diagonal(d))
    }

    pub fn tridiagonal(d: Vec<f64>, e: Vec<f64>) -> Result<Self> {
        if d.is_empty() {
            return Err(Error::InvalidParameter("operator of order 0".into()));
        }
        if e.len() + 1 != d.len() {
            return Err(Error::DimensionMismatch { expected: d.len() - 1, found: e.len() });
        }
        Ok(Self::Tridiagonal { d, e })
    }

    /// `scale · tridiag(−1, 2, −1)` of order `n`.
    pub fn laplacian_1d(n: usize, scale: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("operator of order 0".into()));
        }
        Self::tridiagonal(vec![2.0 * scale; n], vec![-scale; n - 1])
    }

    pub fn kind(&self) -> OperatorKind {
        match self {
            Self::Dense(_) => OperatorKind::Dense,
            Self::Diagonal(_) => OperatorKind::Diagonal,
            Self::Tridiagonal { .. } => OperatorKind::Tridiagonal,
        }
    }

    pub fn order(&self) -> usize {
        match self {
            Self::Dense(m) => m.nrows(),
            Self::Diagonal(d) => d.len(),
            Self::Tridiagonal { d, .. } => d.len(),
        }
    }

    /// `−A` in the same layout.
    pub fn negated(&self) -> Self {
        match self {
            Self::Dense(m) => Self::Dense(-m),
            Self::Diagonal(d) => Self::Diagonal(d.iter().map(|x| -x).collect()),
            Self::Tridiagonal { d, e } => {
                Self::Tridiagonal { d: d.iter().map(|x| -x).collect(), e: e.iter().map(|x| -x).collect() }
            }
        }
    }

    /// `c · A` in the same layout.
    pub fn scaled(&self, c: f64) -> Self {
        match self {
            Self::Dense(m) => Self::Dense(m * c),
            Self::Diagonal(d) => Self::Diagonal(d.iter().map(|x| c * x).collect()),
            Self::Tridiagonal { d, e } => {
                Self::Tridiagonal { d: d.iter().map(|x| c * x).collect(), e: e.iter().map(|x| c * x).collect() }
            }
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        match self {
            Self::Dense(m) => m.clone(),
            Self::Diagonal(d) => DMatrix::from_diagonal(&DVector::from_column_slice(d)),
            Self::Tridiagonal { d, e } => {
                let n = d.len();
                let mut m = DMatrix::zeros(n, n);
                for i in 0..n {
                    m[(i, i)] = d[i];
                }
                for i in 0..n - 1 {
                    m[(i, i + 1)] = e[i];
                    m[(i + 1, i)] = e[i];
                }
                m
            }
        }
    }

    /// Upper bound on `‖A‖₂` (the row-sum norm, or the Gershgorin radius for banded layouts).
    pub fn norm_inf(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        match self {
            Self::Dense(m) => m.row_iter().map(|r| r.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max),
            _ => lo.abs().max(hi.abs()),
        }
    }

    /// Union of the Gershgorin discs as `(lo, hi)`.
    pub fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut visit = |c: f64, r: f64| {
            lo = lo.min(c - r);
            hi = hi.max(c + r);
        };
        match self {
            Self::Dense(m) => {
                for (i, row) in m.row_iter().enumerate() {
                    let r: f64 = row.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| x.abs()).sum();
                    visit(m[(i, i)], r);
                }
            }
            Self::Diagonal(d) => d.iter().for_each(|&x| visit(x, 0.0)),
            Self::Tridiagonal { d, e } => {
                for i in 0..d.len() {
                    let mut r = 0.0;
                    if i > 0 {
                        r += e[i - 1].abs();
                    }
                    if i < e.len() {
                        r += e[i].abs();
                    }
                    visit(d[i], r);
                }
            }
        }
        (lo, hi)
    }

    fn check_rows(&self, rows: usize) -> Result<()> {
        if rows == self.order() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.order(), found: rows })
        }
    }

    /// `y = A x` for a single column.
    pub fn apply_column(&self, x: &[f64], y: &mut [f64]) {
        match self {
            Self::Dense(m) => {
                for (i, yi) in y.iter_mut().enumerate() {
                    *yi = m.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
                }
            }
            Self::Diagonal(d) => {
                for i in 0..d.len() {
                    y[i] = d[i] * x[i];
                }
            }
            Self::Tridiagonal { d, e } => {
                let n = d.len();
                for i in 0..n {
                    let mut s = d[i] * x[i];
                    if i > 0 {
                        s += e[i - 1] * x[i - 1];
                    }
                    if i + 1 < n {
                        s += e[i] * x[i + 1];
                    }
                    y[i] = s;
                }
            }
        }
    }

    /// `A · x`.
    pub fn matvec(&self, x: &BlockVector) -> Result<BlockVector> {
        self.check_rows(x.nrows())?;
        if let Self::Dense(m) = self {
            return Ok(m * x);
        }
        let mut y = DMatrix::zeros(x.nrows(), x.ncols());
        for j in 0..x.ncols() {
            let src = x.column(j);
            let mut dst = y.column_mut(j);
            self.apply_column(src.as_slice(), dst.as_mut_slice());
        }
        Ok(y)
    }

    fn pivot_tolerance(&self, sigma_modulus: f64) -> f64 {
        (self.norm_inf() + sigma_modulus) * self.order() as f64 * f64::EPSILON
    }

    /// Solves `(A − σI) y = rhs`. An infinite `σ` returns `rhs` unchanged.
    pub fn shifted_solve(&self, sigma: f64, rhs: &BlockVector) -> Result<BlockVector> {
        self.check_rows(rhs.nrows())?;
        if sigma.is_infinite() {
            return Ok(rhs.clone());
        }
        if sigma.is_nan() {
            return Err(Error::InvalidParameter("shift is NaN".into()));
        }
        let tol = self.pivot_tolerance(sigma.abs());
        let singular = |pivot: f64| Error::SingularShift { shift: format!("{sigma}"), pivot };
        match self {
            Self::Diagonal(d) => {
                let mut y = rhs.clone();
                for (i, &di) in d.iter().enumerate() {
                    let p = di - sigma;
                    if p.abs() <= tol {
                        return Err(singular(p.abs()));
                    }
                    y.row_mut(i).unscale_mut(p);
                }
                Ok(y)
            }
            Self::Tridiagonal { d, e } => {
                let shifted: Vec<f64> = d.iter().map(|x| x - sigma).collect();
                let lu = TridiagLu::new(e.clone(), shifted, e.clone(), tol).map_err(|p| singular(p.0))?;
                let mut y = rhs.clone();
                for j in 0..y.ncols() {
                    lu.solve_in_place(y.column_mut(j).as_mut_slice());
                }
                Ok(y)
            }
            Self::Dense(m) => {
                let n = m.nrows();
                let shifted = m - DMatrix::identity(n, n) * sigma;
                if let Some(ch) = shifted.clone().cholesky() {
                    return Ok(ch.solve(rhs));
                }
                if let Some(ch) = (-&shifted).cholesky() {
                    return Ok(-ch.solve(rhs));
                }
                let lu = shifted.lu();
                let pivot = lu.u().diagonal().iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
                if pivot <= tol {
                    return Err(singular(pivot));
                }
                lu.solve(rhs).ok_or_else(|| singular(0.0))
            }
        }
    }

    /// Solves `(A − σI) y = rhs` for complex `σ` and right-hand side.
    pub fn shifted_solve_complex(&self, sigma: Complex64, rhs: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
        self.check_rows(rhs.nrows())?;
        if !sigma.re.is_finite() || !sigma.im.is_finite() {
            return Ok(rhs.clone());
        }
        let tol = self.pivot_tolerance(sigma.norm());
        let singular = |pivot: f64| Error::SingularShift { shift: format!("{sigma}"), pivot };
        match self {
            Self::Diagonal(d) => {
                let mut y = rhs.clone();
                for (i, &di) in d.iter().enumerate() {
                    let p = Complex64::new(di, 0.0) - sigma;
                    if p.norm() <= tol {
                        return Err(singular(p.norm()));
                    }
                    y.row_mut(i).iter_mut().for_each(|x| *x /= p);
                }
                Ok(y)
            }
            Self::Tridiagonal { d, e } => {
                let shifted: Vec<Complex64> = d.iter().map(|&x| Complex64::new(x, 0.0) - sigma).collect();
                let off: Vec<Complex64> = e.iter().map(|&x| Complex64::new(x, 0.0)).collect();
                let lu = TridiagLu::new(off.clone(), shifted, off, tol).map_err(|p| singular(p.0))?;
                let mut y = rhs.clone();
                for j in 0..y.ncols() {
                    lu.solve_in_place(y.column_mut(j).as_mut_slice());
                }
                Ok(y)
            }
            Self::Dense(m) => {
                let n = m.nrows();
                let shifted = m.map(|x| Complex64::new(x, 0.0)) - DMatrix::identity(n, n) * sigma;
                let lu = shifted.lu();
                let pivot = lu.u().diagonal().iter().map(|x| x.norm()).fold(f64::INFINITY, f64::min);
                if pivot <= tol {
                    return Err(singular(pivot));
                }
                lu.solve(rhs).ok_or_else(|| singular(0.0))
            }
        }
    }

    /// An interval enclosing the spectrum.
    pub fn spectral_interval(&self, mode: IntervalMode) -> Result<SpectralInterval> {
        match mode {
            IntervalMode::User(a, b) => SpectralInterval::new(a, b),
            IntervalMode::ExactSmall { dense_limit } => {
                let (lo, hi) = match self {
                    Self::Diagonal(d) => extremes(d),
                    Self::Tridiagonal { d, e } if is_constant(d) && is_constant(e) && d.len() > 1 => {
                        let n = d.len();
                        let l1 = toeplitz_tridiag_eigenvalue(d[0], e[0], n, 1);
                        let ln = toeplitz_tridiag_eigenvalue(d[0], e[0], n, n);
                        (l1.min(ln), l1.max(ln))
                    }
                    _ => {
                        let eig = self.dense_eig(dense_limit)?;
                        (eig.values[0], eig.values[eig.values.len() - 1])
                    }
                };
                if lo <= 0.0 {
                    return Err(Error::NonPositiveLowerBound { lower: lo });
                }
                SpectralInterval::new(lo, hi)
            }
            IntervalMode::Gershgorin { floor } => {
                let (lo, hi) = match self {
                    Self::Diagonal(d) => extremes(d),
                    _ => self.gershgorin(),
                };
                let a = match floor {
                    Some(fl) if fl > 0.0 => lo.max(fl),
                    Some(fl) => return Err(Error::InvalidParameter(format!("floor {fl} must be positive"))),
                    None if lo > 0.0 => lo,
                    None => return Err(Error::NonPositiveLowerBound { lower: lo }),
                };
                SpectralInterval::new(a, hi.max(a))
            }
        }
    }

    /// `A = Q Λ Qᵀ` with ascending eigenvalues.
    pub fn dense_eig(&self, dense_limit: usize) -> Result<Eigen> {
        let n = self.order();
        if let Self::Diagonal(d) = self {
            let mut idx: Vec<usize> = (0..n).collect();
            idx.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
            let values = DVector::from_iterator(n, idx.iter().map(|&i| d[i]));
            let mut vectors = DMatrix::zeros(n, n);
            for (col, &i) in idx.iter().enumerate() {
                vectors[(i, col)] = 1.0;
            }
            return Ok(Eigen { values, vectors });
        }
        if n > dense_limit {
            return Err(Error::DenseLimit { n, limit: dense_limit });
        }
        symmetric_eigen(self.to_dense())
    }

    /// `f(A) v` from the exact spectral decomposition.
    ///
    /// Diagonal operators and constant-coefficient tridiagonal operators use
    /// closed forms at any order; everything else needs `n ≤ dense_limit`.
    pub fn oracle_funv(&self, f: &StieltjesFunction, v: &BlockVector, dense_limit: usize) -> Result<BlockVector> {
        self.oracle_apply(|z| f.eval(z), v, dense_limit)
    }

    /// [`HermitianOperator::oracle_funv`] for an arbitrary scalar map.
    pub fn oracle_apply<F>(&self, f: F, v: &BlockVector, dense_limit: usize) -> Result<BlockVector>
    where
        F: Fn(f64) -> Result<f64>,
    {
        self.check_rows(v.nrows())?;
        match self {
            Self::Diagonal(d) => {
                let mut y = v.clone();
                for (i, &di) in d.iter().enumerate() {
                    let fi = f(di)?;
                    y.row_mut(i).scale_mut(fi);
                }
                Ok(y)
            }
            Self::Tridiagonal { d, e } if is_constant(d) && is_constant(e) && d.len() > 1 => {
                toeplitz_tridiag_funv(d[0], e[0], f, v)
            }
            _ => {
                let eig = self.dense_eig(dense_limit)?;
                funv_from_eigen(&eig, f, v)
            }
        }
    }
}

fn extremes(d: &[f64]) -> (f64, f64) {
    d.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

fn is_constant(x: &[f64]) -> bool {
    x.iter().all(|&y| y == x[0])
}

/// Symmetric eigendecomposition with ascending eigenvalues.
pub fn symmetric_eigen(m: DMatrix<f64>) -> Result<Eigen> {
    let n = m.nrows();
    let eig = nalgebra::SymmetricEigen::try_new(m, f64::EPSILON, 0).ok_or(Error::EigenNoConvergence)?;
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = DVector::from_iterator(n, idx.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &i) in idx.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    Ok(Eigen { values, vectors })
}

/// `Q f(Λ) Qᵀ v`.
pub fn funv_from_eigen<F>(eig: &Eigen, f: F, v: &DMatrix<f64>) -> Result<DMatrix<f64>>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut coeffs = eig.vectors.tr_mul(v);
    for (i, &lam) in eig.values.iter().enumerate() {
        let fl = f(lam)?;
        coeffs.row_mut(i).scale_mut(fl);
    }
    Ok(&eig.vectors * coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn col(v: &[f64]) -> BlockVector {
        DMatrix::from_column_slice(v.len(), 1, v)
    }

    #[test]
    fn matvec_examples() {
        let id = HermitianOperator::diagonal(vec![1.0; 4]).unwrap();
        let x = col(&[1.0, -2.0, 3.0, 0.5]);
        assert_eq!(id.matvec(&x).unwrap(), x);
        let t = HermitianOperator::laplacian_1d(3, 1.0).unwrap();
        assert_eq!(t.matvec(&col(&[1.0, 1.0, 1.0])).unwrap(), col(&[1.0, 0.0, 1.0]));
        let d = HermitianOperator::diagonal(vec![2.0, 3.0]).unwrap();
        assert_eq!(d.matvec(&col(&[1.0, 1.0])).unwrap(), col(&[2.0, 3.0]));
        assert!(matches!(d.matvec(&col(&[1.0])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn shifted_solve_examples() {
        let d = HermitianOperator::diagonal(vec![2.0]).unwrap();
        assert_eq!(d.shifted_solve(0.0, &col(&[1.0])).unwrap()[0], 0.5);
        let t = HermitianOperator::laplacian_1d(2, 1.0).unwrap();
        let y = t.shifted_solve(0.0, &col(&[1.0, 0.0])).unwrap();
        assert!((y[0] - 2.0 / 3.0).abs() < 1e-15 && (y[1] - 1.0 / 3.0).abs() < 1e-15);
        let dense = HermitianOperator::dense(t.to_dense()).unwrap();
        let y = dense.shifted_solve(0.0, &col(&[1.0, 0.0])).unwrap();
        assert!((y[0] - 2.0 / 3.0).abs() < 1e-15 && (y[1] - 1.0 / 3.0).abs() < 1e-15);
        let r = col(&[3.0, 4.0]);
        assert_eq!(t.shifted_solve(f64::INFINITY, &r).unwrap(), r);
    }

    #[test]
    fn singular_shift_names_sigma() {
        let t = HermitianOperator::laplacian_1d(2, 1.0).unwrap();
        for op in [t.clone(), HermitianOperator::dense(t.to_dense()).unwrap()] {
            match op.shifted_solve(1.0, &col(&[1.0, 0.0])) {
                Err(Error::SingularShift { shift, .. }) => assert_eq!(shift, "1"),
                other => panic!("expected singular shift, got {other:?}"),
            }
        }
        let d = HermitianOperator::diagonal(vec![1.0, 3.0]).unwrap();
        assert!(d.shifted_solve(3.0, &col(&[1.0, 1.0])).is_err());
    }

    #[test]
    fn indefinite_dense_shift_uses_lu() {
        let t = HermitianOperator::dense(HermitianOperator::laplacian_1d(5, 1.0).unwrap().to_dense()).unwrap();
        let r = col(&[1.0, 2.0, 3.0, 4.0, 5.0]);
        let y = t.shifted_solve(1.5, &r).unwrap();
        let back = t.matvec(&y).unwrap() - &y * 1.5;
        assert!((back - r).norm() < 1e-12);
    }

    #[test]
    fn complex_shift_all_kinds() {
        let t = HermitianOperator::laplacian_1d(6, 1.0).unwrap();
        let sigma = Complex64::new(0.5, 0.25);
        let r = DMatrix::from_fn(6, 2, |i, j| Complex64::new(i as f64 + 1.0, j as f64 - 0.5));
        for op in [
            t.clone(),
            HermitianOperator::dense(t.to_dense()).unwrap(),
            HermitianOperator::diagonal(vec![0.3, 1.0, 2.0, 3.0, 4.0, 5.0]).unwrap(),
        ] {
            let y = op.shifted_solve_complex(sigma, &r).unwrap();
            let a = op.to_dense().map(|x| Complex64::new(x, 0.0));
            let back = &a * &y - &y * sigma;
            assert!((back - &r).norm() < 1e-12);
        }
    }

    #[test]
    fn spectral_interval_modes() {
        let d = HermitianOperator::diagonal(vec![1.0, 4.0]).unwrap();
        let i = d.spectral_interval(IntervalMode::ExactSmall { dense_limit: 10 }).unwrap();
        assert_eq!((i.a(), i.b()), (1.0, 4.0));
        let t = HermitianOperator::laplacian_1d(50, 1.0).unwrap();
        assert!(matches!(
            t.spectral_interval(IntervalMode::Gershgorin { floor: None }),
            Err(Error::NonPositiveLowerBound { .. })
        ));
        let floor = 2.0 - 2.0 * (PI / 51.0).cos();
        let i = t.spectral_interval(IntervalMode::Gershgorin { floor: Some(floor) }).unwrap();
        assert_eq!((i.a(), i.b()), (floor, 4.0));
        let i = t.spectral_interval(IntervalMode::User(1e-3, 10.0)).unwrap();
        assert_eq!((i.a(), i.b()), (1e-3, 10.0));
        assert!(t.spectral_interval(IntervalMode::User(0.0, 1.0)).is_err());
        let big = HermitianOperator::laplacian_1d(100_000, 1.0).unwrap();
        let i = big.spectral_interval(IntervalMode::ExactSmall { dense_limit: 10 }).unwrap();
        assert!((i.a() / (PI / 100_001.0).powi(2) - 1.0).abs() < 1e-9);
        let small = HermitianOperator::laplacian_1d(40, 3.0).unwrap();
        let exact = small.dense_eig(100).unwrap();
        let i = small.spectral_interval(IntervalMode::ExactSmall { dense_limit: 10 }).unwrap();
        assert!((i.a() - exact.values[0]).abs() < 1e-13 && (i.b() - exact.values[39]).abs() < 1e-13);
    }

    #[test]
    fn dense_eig_examples() {
        let d = HermitianOperator::diagonal(vec![3.0, 1.0]).unwrap();
        let e = d.dense_eig(10).unwrap();
        assert_eq!(e.values.as_slice(), &[1.0, 3.0]);
        assert_eq!(e.vectors, DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
        let one = HermitianOperator::dense(DMatrix::from_element(1, 1, 5.0)).unwrap();
        let e = one.dense_eig(10).unwrap();
        assert_eq!(e.values[0], 5.0);
        assert_eq!(e.vectors[(0, 0)].abs(), 1.0);

        let n = 40;
        let t = HermitianOperator::laplacian_1d(n, 1.0).unwrap();
        let e = t.dense_eig(100).unwrap();
        for k in 1..=n {
            let exact = 2.0 - 2.0 * (k as f64 * PI / (n as f64 + 1.0)).cos();
            assert!((e.values[k - 1] - exact).abs() < 1e-13);
        }
        let qtq = e.vectors.tr_mul(&e.vectors) - DMatrix::identity(n, n);
        assert!(qtq.norm() <= n as f64 * 1e-13);
        let a = t.to_dense();
        let res = &a * &e.vectors - &e.vectors * DMatrix::from_diagonal(&e.values);
        assert!(res.norm() <= 4.0 * n as f64 * 1e-13);
        assert!(matches!(t.dense_eig(10), Err(Error::DenseLimit { .. })));
    }

    #[test]
    fn oracle_examples() {
        let t = HermitianOperator::dense(HermitianOperator::laplacian_1d(7, 1.0).unwrap().to_dense()).unwrap();
        let v = DMatrix::from_fn(7, 2, |i, j| (i * 3 + j) as f64 - 4.0);
        let ident = StieltjesFunction::custom("z", crate::functions::FunctionClass::Laplace, 0.0, |z| z);
        let y = t.oracle_funv(&ident, &v, 100).unwrap();
        assert!((y - t.matvec(&v).unwrap()).norm() < 1e-12);

        let d = HermitianOperator::diagonal(vec![2.0, 4.0]).unwrap();
        let y = d.oracle_funv(&StieltjesFunction::inverse(), &col(&[1.0, 1.0]), 10).unwrap();
        assert_eq!(y.as_slice(), &[0.5, 0.25]);
        let d = HermitianOperator::diagonal(vec![4.0]).unwrap();
        let y = d.oracle_funv(&StieltjesFunction::power(-0.5).unwrap(), &col(&[2.0]), 10).unwrap();
        assert_eq!(y[0], 1.0);
    }

    #[test]
    fn oracle_reports_undefined_eigenvalue() {
        let d = HermitianOperator::diagonal(vec![-1.0, 2.0]).unwrap();
        match d.oracle_funv(&StieltjesFunction::power(-0.5).unwrap(), &col(&[1.0, 1.0]), 10) {
            Err(Error::FunctionUndefined { at, .. }) => assert_eq!(at, -1.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn toeplitz_oracle_matches_dense() {
        let n = 60;
        let t = HermitianOperator::laplacian_1d(n, 3.0).unwrap();
        let dense = HermitianOperator::dense(t.to_dense()).unwrap();
        let f = StieltjesFunction::power(-0.5).unwrap();
        let v = DMatrix::from_fn(n, 2, |i, j| ((i * 7 + j * 3) % 11) as f64 - 5.0);
        let a = t.oracle_funv(&f, &v, 0).unwrap();
        let b = dense.oracle_funv(&f, &v, 100).unwrap();
        assert!((a - &b).norm() < 1e-12 * b.norm());
    }

    #[test]
    fn asymmetric_dense_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(HermitianOperator::dense(m).is_err());
    }
}
