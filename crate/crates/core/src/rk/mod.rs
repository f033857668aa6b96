//! Block rational Arnoldi and Galerkin evaluation of `f(A) v`.
//!
//! The basis `U` of `RK_ℓ(A, v, Ψ)` grows one pole at a time. Each step
//! applies `(A − ξI)⁻¹` (or `A` for `ξ = ∞`) to the last accepted block,
//! orthogonalizes with classical Gram–Schmidt run twice, and drops columns
//! that fall below the deflation tolerance. The projected matrix
//! `A_ℓ = UᵀAU` and `v_ℓ = Uᵀv` grow along with the basis, so any prefix of
//! the pole sequence can be evaluated without rebuilding.

pub mod driver;

use nalgebra::{DMatrix, DMatrixView, DVector};

use crate::error::{Error, Result};
use crate::functions::StieltjesFunction;
use crate::operators::{funv_from_eigen, symmetric_eigen, BlockVector, HermitianOperator};
use crate::poles::PoleSequence;

pub use driver::{funv_driver, DriverConfig, DriverResult, Strategy, TraceRow};

/// Columns whose norm drops below this fraction of their norm before
/// orthogonalization are considered linearly dependent.
pub const DEFLATION_TOL: f64 = 1e-12;

/// Orthonormal rational Krylov basis with its projections.
#[derive(Clone, Debug)]
pub struct RkDecomposition {
    n: usize,
    basis: Vec<f64>,
    dim: usize,
    projected: DMatrix<f64>,
    v: BlockVector,
    v_proj: DMatrix<f64>,
    poles: Vec<f64>,
    dims: Vec<usize>,
    last_block: (usize, usize),
    radius: f64,
    flagged: Option<usize>,
}

impl RkDecomposition {
    /// Starts from an orthonormal basis of `span(v)`.
    pub fn new(op: &HermitianOperator, v: &BlockVector) -> Result<Self> {
        let n = op.order();
        if v.nrows() != n {
            return Err(Error::DimensionMismatch { expected: n, found: v.nrows() });
        }
        if v.ncols() == 0 || v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("starting block must be non-empty and finite".into()));
        }
        let mut d = Self {
            n,
            basis: Vec::new(),
            dim: 0,
            projected: DMatrix::zeros(0, 0),
            v: v.clone(),
            v_proj: DMatrix::zeros(0, v.ncols()),
            poles: Vec::new(),
            dims: Vec::new(),
            last_block: (0, 0),
            radius: op.norm_inf(),
            flagged: None,
        };
        let vnorm = v.norm();
        for j in 0..v.ncols() {
            d.append_column(op, v.column(j).iter().copied().collect(), vnorm)?;
        }
        if d.dim == 0 {
            return Err(Error::InvalidParameter("starting block is zero".into()));
        }
        d.last_block = (0, d.dim);
        d.dims.push(d.dim);
        Ok(d)
    }

    /// Orthogonalizes `w` against the basis (twice) and appends it unless it deflates.
    fn append_column(&mut self, op: &HermitianOperator, mut w: Vec<f64>, reference: f64) -> Result<bool> {
        let norm0 = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm0.is_finite() {
            return Err(Error::InvalidParameter("non-finite Krylov direction".into()));
        }
        if norm0 == 0.0 {
            return Ok(false);
        }
        for _ in 0..2 {
            if self.dim == 0 {
                break;
            }
            let u = self.basis();
            let wv = DVector::from_column_slice(&w);
            let h = u.tr_mul(&wv);
            let corr = u * h;
            w.iter_mut().zip(corr.iter()).for_each(|(x, c)| *x -= c);
        }
        let nrm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nrm <= DEFLATION_TOL * norm0.max(reference * f64::EPSILON) {
            return Ok(false);
        }
        w.iter_mut().for_each(|x| *x /= nrm);

        let mut aw = vec![0.0; self.n];
        op.apply_column(&w, &mut aw);
        let awv = DVector::from_column_slice(&aw);
        let coupling = if self.dim > 0 { self.basis().tr_mul(&awv) } else { DVector::zeros(0) };
        let diag: f64 = w.iter().zip(&aw).map(|(a, b)| a * b).sum();
        let wv = DVector::from_column_slice(&w);
        let vrow = self.v.tr_mul(&wv);

        let m = self.dim;
        let mut p = std::mem::replace(&mut self.projected, DMatrix::zeros(0, 0)).resize(m + 1, m + 1, 0.0);
        for i in 0..m {
            p[(i, m)] = coupling[i];
            p[(m, i)] = coupling[i];
        }
        p[(m, m)] = diag;
        self.projected = p;
        let mut vp = std::mem::replace(&mut self.v_proj, DMatrix::zeros(0, 0)).resize_vertically(m + 1, 0.0);
        vp.row_mut(m).copy_from(&vrow.transpose());
        self.v_proj = vp;
        self.basis.extend_from_slice(&w);
        self.dim += 1;
        Ok(true)
    }

    /// One rational Arnoldi step with pole `xi`.
    fn step(&mut self, op: &HermitianOperator, xi: f64) -> Result<()> {
        let (start, len) = self.last_block;
        let block = DMatrix::from_column_slice(self.n, len, &self.basis[start * self.n..(start + len) * self.n]);
        let w = if xi.is_infinite() {
            op.matvec(&block)?
        } else if xi.abs() > self.radius {
            // (A − ξI)⁻¹A q = q + ξ(A − ξI)⁻¹q spans the same new direction
            // without the cancellation that (A − ξI)⁻¹q ≈ −q/ξ suffers.
            op.shifted_solve(xi, &op.matvec(&block)?)?
        } else {
            op.shifted_solve(xi, &block)?
        };
        let before = self.dim;
        for j in 0..w.ncols() {
            self.append_column(op, w.column(j).iter().copied().collect(), 0.0)?;
        }
        self.poles.push(xi);
        self.dims.push(self.dim);
        if self.dim == before {
            self.flagged = Some(self.poles.len());
        } else {
            self.last_block = (before, self.dim - before);
        }
        Ok(())
    }

    /// Continues the recurrence with more poles. Stops early, flagging the
    /// decomposition, when a step deflates completely (an invariant subspace).
    pub fn extend(&mut self, op: &HermitianOperator, poles: &[f64]) -> Result<()> {
        if op.order() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: op.order() });
        }
        for &xi in poles {
            if let Some(step) = self.flagged {
                return Err(Error::Deflated { step });
            }
            if xi.is_nan() {
                return Err(Error::InvalidParameter("pole is NaN".into()));
            }
            self.step(op, xi)?;
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Current basis dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of poles consumed.
    pub fn steps(&self) -> usize {
        self.poles.len()
    }

    /// Basis dimension after `j` poles, `j = 0..=steps`.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn block_width(&self) -> usize {
        self.v.ncols()
    }

    pub fn poles(&self) -> &[f64] {
        &self.poles
    }

    /// Step at which the space became invariant, if it did.
    pub fn flagged(&self) -> Option<usize> {
        self.flagged
    }

    pub fn basis(&self) -> DMatrixView<'_, f64> {
        DMatrixView::from_slice(&self.basis, self.n, self.dim)
    }

    /// `A_ℓ = UᵀAU`.
    pub fn projected(&self) -> &DMatrix<f64> {
        &self.projected
    }

    /// `v_ℓ = Uᵀv`.
    pub fn projected_rhs(&self) -> &DMatrix<f64> {
        &self.v_proj
    }

    /// `‖UᵀU − I‖₂`.
    pub fn orthogonality_defect(&self) -> f64 {
        let u = self.basis();
        let g = u.tr_mul(&u) - DMatrix::identity(self.dim, self.dim);
        crate::linalg::norm2(&g)
    }

    /// `U_j f(A_j) v_j` using only the first `steps` poles.
    pub fn funv_steps<F>(&self, steps: usize, f: F) -> Result<BlockVector>
    where
        F: Fn(f64) -> Result<f64>,
    {
        let steps = steps.min(self.steps());
        let m = self.dims[steps];
        let a = self.projected.view((0, 0), (m, m)).into_owned();
        let eig = symmetric_eigen(a)?;
        let y = funv_from_eigen(&eig, f, &self.v_proj.rows(0, m).into_owned())?;
        Ok(DMatrixView::from_slice(&self.basis, self.n, m) * y)
    }

    /// `U f(A_ℓ) v_ℓ` for an arbitrary scalar map.
    pub fn funv_with<F>(&self, f: F) -> Result<BlockVector>
    where
        F: Fn(f64) -> Result<f64>,
    {
        self.funv_steps(self.steps(), f)
    }

    /// Ritz values, ascending.
    pub fn ritz_values(&self) -> Result<Vec<f64>> {
        Ok(symmetric_eigen(self.projected.clone())?.values.iter().copied().collect())
    }
}

/// Builds `RK_ℓ(A, v, Ψ)` for all poles in `poles`.
pub fn rk_build(op: &HermitianOperator, v: &BlockVector, poles: &PoleSequence) -> Result<RkDecomposition> {
    if poles.is_empty() {
        return Err(Error::InvalidParameter("at least one pole is required".into()));
    }
    let mut d = RkDecomposition::new(op, v)?;
    for &xi in poles.poles() {
        if d.flagged().is_some() {
            break;
        }
        d.extend(op, &[xi])?;
    }
    Ok(d)
}

/// Continues `decomp` with `more`; equivalent to building with the concatenated poles.
pub fn rk_extend(mut decomp: RkDecomposition, op: &HermitianOperator, more: &PoleSequence) -> Result<RkDecomposition> {
    if let Some(step) = decomp.flagged() {
        return Err(Error::Deflated { step });
    }
    decomp.extend(op, more.poles())?;
    Ok(decomp)
}

/// Galerkin approximation `U f(A_ℓ) v_ℓ`.
pub fn rk_funv(decomp: &RkDecomposition, f: &StieltjesFunction) -> Result<BlockVector> {
    decomp.funv_with(|z| f.eval(z))
}

/// Largest relative error `‖r(A)v − U r(A_ℓ) v_ℓ‖/‖r(A)v‖` over rational
/// functions that the space reproduces exactly: `1/(z − ξ_j)` for each finite
/// pole, products of consecutive pairs, `z/(z − ξ_j)` and monomials `z^k`
/// when infinite poles are present.
pub fn exactness_check(
    op: &HermitianOperator,
    v: &BlockVector,
    poles: &PoleSequence,
    dense_limit: usize,
) -> Result<f64> {
    let decomp = rk_build(op, v, poles)?;
    let finite: Vec<f64> = poles.poles().iter().copied().filter(|p| p.is_finite()).collect();
    let infinite = poles.len() - finite.len();
    let mut family: Vec<Box<dyn Fn(f64) -> f64>> = Vec::new();
    for &p in &finite {
        family.push(Box::new(move |z| 1.0 / (z - p)));
        if infinite > 0 {
            family.push(Box::new(move |z| z / (z - p)));
        }
    }
    for w in finite.windows(2) {
        let (p, q) = (w[0], w[1]);
        family.push(Box::new(move |z| 1.0 / ((z - p) * (z - q))));
    }
    for k in 1..=infinite {
        family.push(Box::new(move |z| z.powi(k as i32)));
    }
    let mut worst = 0.0f64;
    for r in &family {
        let exact = op.oracle_apply(|z| Ok(r(z)), v, dense_limit)?;
        let approx = decomp.funv_with(|z| Ok(r(z)))?;
        let scale = crate::linalg::norm2(&exact);
        if scale > 0.0 {
            worst = worst.max(crate::linalg::norm2(&(approx - &exact)) / scale);
        }
    }
    Ok(worst)
}
