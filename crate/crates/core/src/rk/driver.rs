//! Tolerance-driven evaluation of `f(A) v` with a chosen pole strategy.
//!
//! Nested strategies (EDS, extended, polynomial, custom) grow one basis
//! incrementally. The fixed-length optimal sets (Zolotarev, Cauchy) are not
//! nested, so they are regenerated and rebuilt at every checkpoint
//! `ℓ ∈ {s, 2s, 3s, …}` with stride `s`.

use std::fmt;

use crate::error::{Error, Result};
use crate::functions::StieltjesFunction;
use crate::linalg::norm2;
use crate::operators::{BlockVector, HermitianOperator, SpectralInterval};
use crate::poles::bounds::{cauchy_1d_bound, laplace_1d_bound, GammaChoice};
use crate::poles::{
    cauchy_poles, eds_poles, extended_poles, polynomial_poles, zolotarev_poles, EdsVariant, PoleSequence,
};

use super::{rk_build, RkDecomposition};

/// Pole strategy for [`funv_driver`].
#[derive(Clone, Debug, PartialEq)]
pub enum Strategy {
    Zolotarev,
    Cauchy,
    EdsLaplace,
    EdsCauchy,
    Extended,
    Polynomial,
    Custom(PoleSequence),
}

impl Strategy {
    /// Whether the poles for `ℓ + 1` extend those for `ℓ`.
    pub fn is_nested(&self) -> bool {
        !matches!(self, Self::Zolotarev | Self::Cauchy)
    }

    /// Parses `zolotarev`, `cauchy`, `eds-laplace`, `eds-cauchy`, `eds`
    /// (picked by function class), `extended`, `polynomial`. Pole files are
    /// handled by the caller.
    pub fn parse(name: &str, f: &StieltjesFunction) -> Result<Self> {
        Ok(match name {
            "zolotarev" | "laplace" => Self::Zolotarev,
            "cauchy" => Self::Cauchy,
            "eds-laplace" => Self::EdsLaplace,
            "eds-cauchy" => Self::EdsCauchy,
            "eds" if f.class().is_cauchy() => Self::EdsCauchy,
            "eds" => Self::EdsLaplace,
            "extended" => Self::Extended,
            "polynomial" => Self::Polynomial,
            other => return Err(Error::InvalidParameter(format!("unknown pole strategy `{other}`"))),
        })
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Zolotarev => "zolotarev",
            Self::Cauchy => "cauchy",
            Self::EdsLaplace => "eds-laplace",
            Self::EdsCauchy => "eds-cauchy",
            Self::Extended => "extended",
            Self::Polynomial => "polynomial",
            Self::Custom(_) => "custom",
        })
    }
}

/// Settings for [`funv_driver`].
#[derive(Clone, Debug)]
pub struct DriverConfig {
    /// Spectral interval `[a, b]` of the operator.
    pub interval: SpectralInterval,
    /// Relative target for the lag-2 estimator. `0` sweeps to `maxiter`.
    pub tol: f64,
    pub maxiter: usize,
    /// Checkpoint stride for non-nested strategies.
    pub stride: usize,
    /// Shift `η < a` applied to Laplace-type poles and bounds, for functions
    /// with `f(0⁺) = ∞`: poles of `[a − η, b − η]` moved by `+η`.
    pub shift: f64,
    pub gamma: GammaChoice,
    /// Exact `f(A)v`, enabling the true-error column.
    pub reference: Option<BlockVector>,
}

impl DriverConfig {
    pub fn new(interval: SpectralInterval) -> Self {
        Self { interval, tol: 1e-8, maxiter: 50, stride: 4, shift: 0.0, gamma: GammaChoice::Proven, reference: None }
    }
}

/// One row of the convergence trace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceRow {
    pub ell: usize,
    /// `‖x_ℓ − x_{ℓ'}‖₂/‖x_ℓ‖₂` against the iterate two checkpoints back; `∞` before that exists.
    pub est_error: f64,
    /// `‖f(A)v − x_ℓ‖₂`, `NaN` without a reference.
    pub true_error: f64,
    /// A-priori bound of the pole set, `NaN` where none is proven.
    pub bound: f64,
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct DriverResult {
    pub x: BlockVector,
    pub trace: Vec<TraceRow>,
    pub converged: bool,
    /// `ℓ` of the returned iterate.
    pub ell: usize,
}

fn shifted_interval(interval: &SpectralInterval, eta: f64) -> Result<SpectralInterval> {
    if eta == 0.0 {
        return Ok(*interval);
    }
    if !(eta < interval.a()) {
        return Err(Error::InvalidParameter(format!("pole shift {eta} must be below a = {}", interval.a())));
    }
    SpectralInterval::new(interval.a() - eta, interval.b() - eta)
}

/// The a-priori bound proven for the pole set of `strategy`, or `NaN`.
///
/// Only the fixed-length optimal sets carry a bound: Zolotarev poles with the
/// Laplace-type bound, Cauchy poles with the Cauchy-type bound (which also
/// needs a Cauchy–Stieltjes `f`).
pub fn driver_bound(f: &StieltjesFunction, strategy: &Strategy, cfg: &DriverConfig, vnorm: f64, ell: usize) -> f64 {
    let value = match strategy {
        Strategy::Cauchy if f.class().is_cauchy() => cauchy_1d_bound(f, &cfg.interval, vnorm, ell),
        Strategy::Zolotarev => shifted_interval(&cfg.interval, cfg.shift).and_then(|iv| {
            let g = f.clone().with_shift(f.shift() + cfg.shift);
            laplace_1d_bound(&g, &iv, vnorm, ell, cfg.gamma)
        }),
        _ => return f64::NAN,
    };
    value.unwrap_or(f64::NAN)
}

/// Poles of a fixed-length strategy for a given `ℓ`.
pub fn strategy_poles(strategy: &Strategy, cfg: &DriverConfig, ell: usize) -> Result<PoleSequence> {
    let laplace_iv = shifted_interval(&cfg.interval, cfg.shift)?;
    match strategy {
        Strategy::Zolotarev => Ok(zolotarev_poles(laplace_iv, ell)?.shifted(cfg.shift)),
        Strategy::Cauchy => cauchy_poles(cfg.interval, ell),
        Strategy::EdsLaplace => Ok(eds_poles(laplace_iv, ell, EdsVariant::Laplace)?.shifted(cfg.shift)),
        Strategy::EdsCauchy => eds_poles(cfg.interval, ell, EdsVariant::Cauchy),
        Strategy::Extended => extended_poles(ell),
        Strategy::Polynomial => polynomial_poles(ell),
        Strategy::Custom(seq) => {
            if seq.len() < ell {
                return Err(Error::InvalidParameter(format!("custom pole file has {} poles, {ell} needed", seq.len())));
            }
            Ok(seq.prefix(ell))
        }
    }
}

/// Runs the rational Krylov iteration until the lag-2 estimator drops below
/// `cfg.tol` or `cfg.maxiter` poles are used. Non-convergence is reported via
/// `converged = false` together with the last iterate.
pub fn funv_driver(
    op: &HermitianOperator,
    v: &BlockVector,
    f: &StieltjesFunction,
    strategy: &Strategy,
    cfg: &DriverConfig,
) -> Result<DriverResult> {
    if cfg.maxiter == 0 {
        return Err(Error::InvalidParameter("maxiter must be positive".into()));
    }
    if !(cfg.tol >= 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance {} must be non-negative", cfg.tol)));
    }
    let maxiter = match strategy {
        Strategy::Custom(seq) => cfg.maxiter.min(seq.len()),
        _ => cfg.maxiter,
    };
    if maxiter == 0 {
        return Err(Error::InvalidParameter("custom pole sequence is empty".into()));
    }
    let checkpoints: Vec<usize> = if strategy.is_nested() {
        (1..=maxiter).collect()
    } else {
        let s = cfg.stride.max(1);
        let mut c: Vec<usize> = (s..=maxiter).step_by(s).collect();
        if c.last() != Some(&maxiter) {
            c.push(maxiter);
        }
        c
    };
    let vnorm = norm2(v);
    let eval = |z: f64| f.eval(z);

    let (all, mut nested) = if strategy.is_nested() {
        (Some(strategy_poles(strategy, cfg, maxiter)?), Some(RkDecomposition::new(op, v)?))
    } else {
        (None, None)
    };

    // The two most recent iterates, oldest first.
    let mut history: Vec<BlockVector> = Vec::with_capacity(3);
    let mut trace = Vec::new();
    let mut converged = false;
    let mut ell_done = 0;
    for &ell in &checkpoints {
        let (x, dim, exhausted) = match (&mut nested, &all) {
            (Some(d), Some(all)) => {
                while d.steps() < ell && d.flagged().is_none() {
                    d.extend(op, &all.poles()[d.steps()..d.steps() + 1])?;
                }
                let steps = ell.min(d.steps());
                (d.funv_steps(steps, eval)?, d.dims()[steps], d.flagged().is_some())
            }
            _ => {
                let d = rk_build(op, v, &strategy_poles(strategy, cfg, ell)?)?;
                (d.funv_with(eval)?, d.dim(), d.flagged().is_some())
            }
        };
        let est = if history.len() == 2 { norm2(&(&x - &history[0])) / norm2(&x) } else { f64::INFINITY };
        let true_error = cfg.reference.as_ref().map_or(f64::NAN, |r| norm2(&(r - &x)));
        trace.push(TraceRow {
            ell,
            est_error: est,
            true_error,
            bound: driver_bound(f, strategy, cfg, vnorm, ell),
            dim,
        });
        if history.len() == 2 {
            history.remove(0);
        }
        history.push(x);
        ell_done = ell;
        if est <= cfg.tol || exhausted {
            converged = true;
            break;
        }
    }
    let x = history.pop().expect("at least one checkpoint");
    Ok(DriverResult { x, trace, converged, ell: ell_done })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::IntervalMode;
    use nalgebra::DMatrix;

    fn setup(n: usize) -> (HermitianOperator, BlockVector, SpectralInterval) {
        let op = HermitianOperator::laplacian_1d(n, 1.0).unwrap();
        let v = DMatrix::from_fn(n, 1, |i, _| ((i * 7919) % 101) as f64 / 101.0 - 0.5);
        let iv = op.spectral_interval(IntervalMode::ExactSmall { dense_limit: 4000 }).unwrap();
        (op, v, iv)
    }

    #[test]
    fn inverse_converges_to_solve() {
        let (op, v, iv) = setup(300);
        let f = StieltjesFunction::inverse();
        let exact = op.shifted_solve(0.0, &v).unwrap();
        let mut cfg = DriverConfig::new(iv);
        cfg.tol = 1e-10;
        cfg.maxiter = 40;
        cfg.reference = Some(exact.clone());
        let r = funv_driver(&op, &v, &f, &Strategy::EdsCauchy, &cfg).unwrap();
        assert!(r.converged);
        assert!(norm2(&(&r.x - &exact)) <= 1e-8 * norm2(&exact));
        // log-bound step count: ρ_{[a,4b]}^ℓ ≤ 1e-10.
        let rho = crate::poles::rate_rho(iv.a(), 4.0 * iv.b());
        assert!(r.ell as f64 <= (1e-10f64).ln() / rho.ln() + 3.0);
    }

    #[test]
    fn infinite_tolerance_stops_after_first_step() {
        let (op, v, iv) = setup(50);
        let mut cfg = DriverConfig::new(iv);
        cfg.tol = f64::INFINITY;
        let f = StieltjesFunction::phi(1).unwrap();
        for s in [Strategy::EdsLaplace, Strategy::Zolotarev] {
            let r = funv_driver(&op, &v, &f, &s, &cfg).unwrap();
            assert_eq!(r.trace.len(), 1);
            assert!(r.converged);
        }
    }

    #[test]
    fn maxiter_without_convergence_is_flagged() {
        let (op, v, iv) = setup(400);
        let mut cfg = DriverConfig::new(iv);
        cfg.tol = 1e-14;
        cfg.maxiter = 3;
        let r = funv_driver(&op, &v, &StieltjesFunction::power(-0.5).unwrap(), &Strategy::Extended, &cfg).unwrap();
        assert!(!r.converged);
        assert_eq!(r.ell, 3);
        assert_eq!(r.trace.len(), 3);
    }

    #[test]
    fn fixed_sets_use_checkpoints() {
        let (op, v, iv) = setup(100);
        let mut cfg = DriverConfig::new(iv);
        cfg.tol = 0.0;
        cfg.maxiter = 10;
        let r = funv_driver(&op, &v, &StieltjesFunction::inverse(), &Strategy::Cauchy, &cfg).unwrap();
        let ells: Vec<usize> = r.trace.iter().map(|t| t.ell).collect();
        assert_eq!(ells, vec![4, 8, 10]);
        assert!(r.trace.iter().all(|t| t.bound.is_finite()));
    }

    #[test]
    fn phi1_error_stays_below_bound() {
        let n = 400;
        let h = 1.0 / (n as f64 + 1.0);
        let op = HermitianOperator::laplacian_1d(n, 1e-3 / (h * h)).unwrap();
        let iv = op.spectral_interval(IntervalMode::ExactSmall { dense_limit: 4000 }).unwrap();
        let v = DMatrix::from_fn(n, 1, |i, _| (i as f64 * 0.37).cos() / (n as f64).sqrt());
        let f = StieltjesFunction::phi(1).unwrap();
        let mut cfg = DriverConfig::new(iv);
        cfg.tol = 0.0;
        cfg.maxiter = 12;
        cfg.stride = 1;
        cfg.reference = Some(op.oracle_funv(&f, &v, 4000).unwrap());
        let r = funv_driver(&op, &v, &f, &Strategy::Zolotarev, &cfg).unwrap();
        for t in &r.trace {
            assert!(t.true_error <= t.bound, "ell={} err={} bound={}", t.ell, t.true_error, t.bound);
        }
    }

    #[test]
    fn shifted_bound_is_finite_for_singular_anchor() {
        let iv = SpectralInterval::new(1.0, 100.0).unwrap();
        let f = StieltjesFunction::power(-0.5).unwrap();
        let mut cfg = DriverConfig::new(iv);
        assert!(driver_bound(&f, &Strategy::Zolotarev, &cfg, 1.0, 3).is_nan());
        cfg.shift = 0.5;
        let b = driver_bound(&f, &Strategy::Zolotarev, &cfg, 1.0, 3);
        assert!(b.is_finite());
        assert!(driver_bound(&StieltjesFunction::phi(1).unwrap(), &Strategy::Cauchy, &cfg, 1.0, 3).is_nan());
        let p = strategy_poles(&Strategy::Zolotarev, &cfg, 1).unwrap();
        assert!((p.poles()[0] - (0.5 - (0.5f64 * 99.5).sqrt())).abs() < 1e-12);
    }

    #[test]
    fn parse_strategies() {
        let f = StieltjesFunction::power(-0.5).unwrap();
        assert_eq!(Strategy::parse("eds", &f).unwrap(), Strategy::EdsCauchy);
        assert_eq!(Strategy::parse("eds", &StieltjesFunction::phi(1).unwrap()).unwrap(), Strategy::EdsLaplace);
        assert!(Strategy::parse("nope", &f).is_err());
        assert_eq!(Strategy::Extended.to_string(), "extended");
    }
}
