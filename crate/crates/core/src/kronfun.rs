//! `f(I ⊗ A − Bᵀ ⊗ I) vec(F)` for low-rank `F = U_F V_Fᵀ`.
//!
//! Two rational Krylov bases, one for `A` with poles `Ψ` and one for `B` with
//! poles `Ξ`, give `X_ℓ = U Y Vᵀ` where `Y` evaluates `f` on the projected
//! Kronecker sum by diagonalizing both projections. `B` is negative definite
//! and is stored as the SPD operator `−B`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::functions::StieltjesFunction;
use crate::linalg::{norm2, singular_values};
use crate::operators::{symmetric_eigen, HermitianOperator, SpectralInterval};
use crate::poles::bounds::{kron_cauchy_bound, kron_laplace_bound, singular_value_bound, GammaChoice};
use crate::poles::{
    cauchy_kron_poles, eds_poles, extended_poles, polynomial_poles, zolotarev_poles, EdsVariant, PoleSequence,
};
use crate::rk::{RkDecomposition, TraceRow};

/// Largest order for which the dense reference solution is formed.
pub const KRON_ORACLE_LIMIT: usize = 1500;

/// `A`, `−B`, the factors of `F` and the function to apply.
#[derive(Clone, Debug)]
pub struct KroneckerProblem {
    a: HermitianOperator,
    bneg: HermitianOperator,
    uf: DMatrix<f64>,
    vf: DMatrix<f64>,
    f: StieltjesFunction,
}

impl KroneckerProblem {
    pub fn new(
        a: HermitianOperator,
        bneg: HermitianOperator,
        uf: DMatrix<f64>,
        vf: DMatrix<f64>,
        f: StieltjesFunction,
    ) -> Result<Self> {
        if uf.nrows() != a.order() {
            return Err(Error::DimensionMismatch { expected: a.order(), found: uf.nrows() });
        }
        if vf.nrows() != bneg.order() {
            return Err(Error::DimensionMismatch { expected: bneg.order(), found: vf.nrows() });
        }
        if uf.ncols() == 0 || uf.ncols() != vf.ncols() {
            return Err(Error::InvalidParameter(format!(
                "factors must share a positive column count, got {} and {}",
                uf.ncols(),
                vf.ncols()
            )));
        }
        Ok(Self { a, bneg, uf, vf, f })
    }

    pub fn a(&self) -> &HermitianOperator {
        &self.a
    }

    /// The SPD operator `−B`.
    pub fn bneg(&self) -> &HermitianOperator {
        &self.bneg
    }

    pub fn uf(&self) -> &DMatrix<f64> {
        &self.uf
    }

    pub fn vf(&self) -> &DMatrix<f64> {
        &self.vf
    }

    pub fn function(&self) -> &StieltjesFunction {
        &self.f
    }

    pub fn rank(&self) -> usize {
        self.uf.ncols()
    }

    /// `F = U_F V_Fᵀ`.
    pub fn rhs(&self) -> DMatrix<f64> {
        &self.uf * self.vf.transpose()
    }

    /// `‖F‖₂` from the thin factors.
    pub fn rhs_norm(&self) -> f64 {
        thin_product_norm(&self.uf, &self.vf)
    }
}

/// `X_ℓ = U Y Vᵀ` with orthonormal `U`, `V`.
#[derive(Clone, Debug)]
pub struct KroneckerResult {
    pub u: DMatrix<f64>,
    pub y: DMatrix<f64>,
    pub v: DMatrix<f64>,
}

impl KroneckerResult {
    pub fn to_dense(&self) -> DMatrix<f64> {
        &self.u * &self.y * self.v.transpose()
    }

    /// Upper bound on the rank of `X_ℓ`.
    pub fn rank_bound(&self) -> usize {
        self.y.nrows().min(self.y.ncols())
    }
}

/// `‖L Rᵀ‖₂` via thin QR of both factors.
fn thin_product_norm(l: &DMatrix<f64>, r: &DMatrix<f64>) -> f64 {
    let rl = l.clone().qr().r();
    let rr = r.clone().qr().r();
    norm2(&(rl * rr.transpose()))
}

/// `Y = Q_A [f∘D ∘ (Q_Aᵀ F_W Q_B)] Q_Bᵀ` with `D_ij = λ_i(A_U) − λ_j(B_V)`.
pub fn funm_diag(
    f: &StieltjesFunction,
    a_u: &DMatrix<f64>,
    b_v: &DMatrix<f64>,
    f_w: &DMatrix<f64>,
) -> Result<DMatrix<f64>> {
    funm_diag_with(|z| f.eval(z), a_u, b_v, f_w)
}

/// [`funm_diag`] for an arbitrary scalar map.
pub fn funm_diag_with<F>(f: F, a_u: &DMatrix<f64>, b_v: &DMatrix<f64>, f_w: &DMatrix<f64>) -> Result<DMatrix<f64>>
where
    F: Fn(f64) -> Result<f64>,
{
    if f_w.nrows() != a_u.nrows() || f_w.ncols() != b_v.nrows() {
        return Err(Error::DimensionMismatch { expected: a_u.nrows() * b_v.nrows(), found: f_w.len() });
    }
    let ea = symmetric_eigen(a_u.clone())?;
    let eb = symmetric_eigen(b_v.clone())?;
    let mut c = ea.vectors.tr_mul(f_w) * &eb.vectors;
    for j in 0..c.ncols() {
        for i in 0..c.nrows() {
            c[(i, j)] *= f(ea.values[i] - eb.values[j])?;
        }
    }
    Ok(&ea.vectors * c * eb.vectors.transpose())
}

/// Both Krylov bases, grown to some number of poles. Prefixes give `X_ℓ`
/// for every smaller `ℓ`.
#[derive(Clone, Debug)]
pub struct KroneckerBases {
    a_side: RkDecomposition,
    b_side: RkDecomposition,
}

impl KroneckerBases {
    /// Builds `RK_ℓ(A, U_F, Ψ)` and `RK_ℓ(B, V_F, Ξ)` concurrently.
    pub fn build(prob: &KroneckerProblem, psi: &PoleSequence, xi: &PoleSequence, ell: usize) -> Result<Self> {
        if psi.len() < ell || xi.len() < ell {
            return Err(Error::InvalidParameter(format!(
                "need {ell} poles per side, got {} and {}",
                psi.len(),
                xi.len()
            )));
        }
        // (B − ξI)⁻¹ = −(−B + ξI)⁻¹: on −B the pole is −ξ.
        let xi_neg = xi.prefix(ell).negated();
        let psi = psi.prefix(ell);
        let grow = |op: &HermitianOperator, v: &DMatrix<f64>, poles: &PoleSequence| -> Result<RkDecomposition> {
            let mut d = RkDecomposition::new(op, v)?;
            for &p in poles.poles() {
                if d.flagged().is_some() {
                    break;
                }
                d.extend(op, &[p])?;
            }
            Ok(d)
        };
        let (a_side, b_side) = rayon::join(|| grow(&prob.a, &prob.uf, &psi), || grow(&prob.bneg, &prob.vf, &xi_neg));
        Ok(Self { a_side: a_side?, b_side: b_side? })
    }

    /// Poles consumed on each side (equal unless one side became invariant).
    pub fn steps(&self) -> usize {
        self.a_side.steps().max(self.b_side.steps())
    }

    pub fn a_side(&self) -> &RkDecomposition {
        &self.a_side
    }

    pub fn b_side(&self) -> &RkDecomposition {
        &self.b_side
    }

    /// `X_ℓ` from the first `ell` poles on each side.
    pub fn result_at(&self, ell: usize, f: &StieltjesFunction) -> Result<KroneckerResult> {
        let ma = self.a_side.dims()[ell.min(self.a_side.steps())];
        let mb = self.b_side.dims()[ell.min(self.b_side.steps())];
        let a_u = self.a_side.projected().view((0, 0), (ma, ma)).into_owned();
        let b_v = -self.b_side.projected().view((0, 0), (mb, mb)).into_owned();
        let f_w = self.a_side.projected_rhs().rows(0, ma) * self.b_side.projected_rhs().rows(0, mb).transpose();
        let y = funm_diag(f, &a_u, &b_v, &f_w)?;
        Ok(KroneckerResult {
            u: self.a_side.basis().columns(0, ma).into_owned(),
            y,
            v: self.b_side.basis().columns(0, mb).into_owned(),
        })
    }
}

/// `X_ℓ ≈ vec⁻¹(f(I ⊗ A − Bᵀ ⊗ I) vec(U_F V_Fᵀ))` with poles `Ψ` on `A` and `Ξ` on `B`.
pub fn kron_fun(prob: &KroneckerProblem, psi: &PoleSequence, xi: &PoleSequence, ell: usize) -> Result<KroneckerResult> {
    KroneckerBases::build(prob, psi, xi, ell)?.result_at(ell, &prob.f)
}

/// `‖A X_ℓ − X_ℓ B − F‖₂` from thin factors; meaningful for `f(z) = 1/z`.
pub fn sylvester_residual(prob: &KroneckerProblem, result: &KroneckerResult) -> Result<f64> {
    let au = prob.a.matvec(&result.u)?;
    let bnv = prob.bneg.matvec(&result.v)?;
    let (n, m) = (result.u.nrows(), result.v.nrows());
    let (kb, k) = (result.y.ncols(), prob.rank());
    // A U Y Vᵀ + U Y (−B V)ᵀ − U_F V_Fᵀ = L Rᵀ.
    let mut l = DMatrix::zeros(n, 2 * kb + k);
    l.columns_mut(0, kb).copy_from(&(au * &result.y));
    l.columns_mut(kb, kb).copy_from(&(&result.u * &result.y));
    l.columns_mut(2 * kb, k).copy_from(&(-&prob.uf));
    let mut r = DMatrix::zeros(m, 2 * kb + k);
    r.columns_mut(0, kb).copy_from(&result.v);
    r.columns_mut(kb, kb).copy_from(&bnv);
    r.columns_mut(2 * kb, k).copy_from(&prob.vf);
    Ok(thin_product_norm(&l, &r))
}

/// Reference `X` by diagonalizing `A` and `B` at full size.
pub fn kron_oracle(prob: &KroneckerProblem, dense_limit: usize) -> Result<DMatrix<f64>> {
    kron_oracle_with(prob, |z| prob.f.eval(z), dense_limit)
}

pub fn kron_oracle_with<F>(prob: &KroneckerProblem, f: F, dense_limit: usize) -> Result<DMatrix<f64>>
where
    F: Fn(f64) -> Result<f64>,
{
    let limit = dense_limit.min(KRON_ORACLE_LIMIT);
    let ea = prob.a.dense_eig(limit)?;
    let eb = prob.bneg.dense_eig(limit)?;
    let mut c = ea.vectors.tr_mul(&prob.uf) * prob.vf.tr_mul(&eb.vectors);
    for j in 0..c.ncols() {
        for i in 0..c.nrows() {
            // λ_i(A) − λ_j(B) with λ_j(B) = −λ_j(−B).
            c[(i, j)] *= f(ea.values[i] + eb.values[j])?;
        }
    }
    Ok(&ea.vectors * c * eb.vectors.transpose())
}

/// Pole strategies for the Kronecker problem. `Ξ = −Ψ` throughout.
#[derive(Clone, Debug, PartialEq)]
pub enum KronStrategy {
    /// Zolotarev poles of `[a, b]` on the `A` side.
    Laplace,
    /// Möbius-mapped Zolotarev poles for Cauchy–Stieltjes functions.
    CauchyKron,
    /// Nested equidistributed poles, tracking `Laplace` or `CauchyKron` by function class.
    Eds,
    Extended,
    Polynomial,
    Custom(PoleSequence),
}

impl KronStrategy {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "laplace" | "zolotarev" => Self::Laplace,
            "cauchy-kron" | "cauchy" => Self::CauchyKron,
            "eds" => Self::Eds,
            "extended" => Self::Extended,
            "polynomial" => Self::Polynomial,
            other => return Err(Error::InvalidParameter(format!("unknown Kronecker pole strategy `{other}`"))),
        })
    }

    /// `(Ψ, Ξ)` of length `len`.
    pub fn poles(
        &self,
        f: &StieltjesFunction,
        interval: SpectralInterval,
        len: usize,
    ) -> Result<(PoleSequence, PoleSequence)> {
        let psi = match self {
            Self::Laplace => zolotarev_poles(interval, len)?,
            Self::CauchyKron => return cauchy_kron_poles(interval, len),
            Self::Eds if f.class().is_cauchy() => eds_poles(interval, len, EdsVariant::CauchyKron)?,
            Self::Eds => eds_poles(interval, len, EdsVariant::Laplace)?,
            Self::Extended => extended_poles(len)?,
            Self::Polynomial => polynomial_poles(len)?,
            Self::Custom(seq) => {
                if seq.len() < len {
                    return Err(Error::InvalidParameter(format!(
                        "custom pole file has {} poles, {len} needed",
                        seq.len()
                    )));
                }
                seq.prefix(len)
            }
        };
        let xi = psi.negated();
        Ok((psi, xi))
    }

    /// Whether the poles for `ℓ + 1` extend those for `ℓ`.
    pub fn is_nested(&self) -> bool {
        !matches!(self, Self::Laplace | Self::CauchyKron)
    }
}

impl std::fmt::Display for KronStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Laplace => "laplace",
            Self::CauchyKron => "cauchy-kron",
            Self::Eds => "eds",
            Self::Extended => "extended",
            Self::Polynomial => "polynomial",
            Self::Custom(_) => "custom",
        })
    }
}

/// The Kronecker error bound proven for the pole set of `strategy`, or `NaN`.
pub fn kron_bound(
    f: &StieltjesFunction,
    strategy: &KronStrategy,
    interval: &SpectralInterval,
    fnorm: f64,
    ell: usize,
    gamma: GammaChoice,
) -> f64 {
    let b = match strategy {
        KronStrategy::CauchyKron if f.class().is_cauchy() => kron_cauchy_bound(f, interval, fnorm, ell),
        KronStrategy::Laplace => kron_laplace_bound(f, interval, fnorm, ell, gamma),
        _ => return f64::NAN,
    };
    b.unwrap_or(f64::NAN)
}

/// Settings for [`kron_trace`].
#[derive(Clone, Debug)]
pub struct KronTraceConfig {
    pub interval: SpectralInterval,
    pub strategy: KronStrategy,
    pub max_ell: usize,
    pub gamma: GammaChoice,
    /// Dense `X`, enabling the true-error column.
    pub reference: Option<DMatrix<f64>>,
}

/// `‖X − X'‖₂` for two factored iterates.
fn iterate_distance(x: &KroneckerResult, other: &KroneckerResult) -> f64 {
    let (p, q) = (x.y.ncols(), other.y.ncols());
    let mut l = DMatrix::zeros(x.u.nrows(), p + q);
    l.columns_mut(0, p).copy_from(&(&x.u * &x.y));
    l.columns_mut(p, q).copy_from(&(-(&other.u * &other.y)));
    let mut r = DMatrix::zeros(x.v.nrows(), p + q);
    r.columns_mut(0, p).copy_from(&x.v);
    r.columns_mut(p, q).copy_from(&other.v);
    thin_product_norm(&l, &r)
}

/// `X_ℓ` for `ℓ = 1..=max_ell` with the lag-2 estimator
/// `‖X_ℓ − X_{ℓ−2}‖₂/‖X_ℓ‖₂` and the bound. Nested strategies share one pair
/// of bases; the others rebuild for every `ℓ`.
pub fn kron_trace(prob: &KroneckerProblem, cfg: &KronTraceConfig) -> Result<(KroneckerResult, Vec<TraceRow>)> {
    if cfg.max_ell == 0 {
        return Err(Error::InvalidParameter("need at least one pole".into()));
    }
    let nested = cfg.strategy.is_nested();
    let shared = if nested {
        let (psi, xi) = cfg.strategy.poles(&prob.f, cfg.interval, cfg.max_ell)?;
        Some(KroneckerBases::build(prob, &psi, &xi, cfg.max_ell)?)
    } else {
        None
    };
    let fnorm = prob.rhs_norm();
    let mut rows = Vec::with_capacity(cfg.max_ell);
    let mut history: Vec<KroneckerResult> = Vec::new();
    for ell in 1..=cfg.max_ell {
        let res = match &shared {
            Some(b) => b.result_at(ell, &prob.f)?,
            None => {
                let (psi, xi) = cfg.strategy.poles(&prob.f, cfg.interval, ell)?;
                kron_fun(prob, &psi, &xi, ell)?
            }
        };
        let xnorm = norm2(&res.y);
        let est = if history.len() >= 2 {
            let old = &history[history.len() - 2];
            iterate_distance(&res, old) / xnorm
        } else {
            f64::INFINITY
        };
        let true_error = cfg.reference.as_ref().map_or(f64::NAN, |x| norm2(&(x - res.to_dense())));
        rows.push(TraceRow {
            ell,
            est_error: est,
            true_error,
            bound: kron_bound(&prob.f, &cfg.strategy, &cfg.interval, fnorm, ell, cfg.gamma),
            dim: res.y.nrows(),
        });
        history.push(res);
    }
    Ok((history.pop().expect("max_ell ≥ 1"), rows))
}

/// One row of the singular-value report.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SvdRow {
    /// 1-based index `j`.
    pub index: usize,
    pub sigma: f64,
    /// Bound for `σ_j`, present at `j = 1 + ℓk`.
    pub bound: Option<f64>,
    pub violated: bool,
}

#[derive(Clone, Debug)]
pub struct SingularDecayReport {
    pub rows: Vec<SvdRow>,
    /// `n · ε · σ₁`: computed singular values below this are rounding noise
    /// and never count as violations.
    pub floor: f64,
    pub violations: usize,
}

/// Singular values of `x` next to the class-appropriate decay bound at
/// indices `1 + ℓk`.
pub fn singular_decay_report(
    prob: &KroneckerProblem,
    x: &DMatrix<f64>,
    interval: &SpectralInterval,
    gamma: GammaChoice,
) -> SingularDecayReport {
    let s = singular_values(x);
    let k = prob.rank();
    let fnorm = prob.rhs_norm();
    let floor = x.nrows().max(x.ncols()) as f64 * f64::EPSILON * s.first().copied().unwrap_or(0.0);
    let mut violations = 0;
    let rows = s
        .iter()
        .enumerate()
        .map(|(i, &sigma)| {
            let j = i + 1;
            let bound = if j > 1 && (j - 1) % k == 0 {
                let b = singular_value_bound(&prob.f, interval, fnorm, (j - 1) / k, gamma).unwrap_or(f64::NAN);
                b.is_finite().then_some(b)
            } else {
                None
            };
            let violated = bound.is_some_and(|b| sigma > b && sigma > floor);
            violations += violated as usize;
            SvdRow { index: j, sigma, bound, violated }
        })
        .collect();
    SingularDecayReport { rows, floor, violations }
}
