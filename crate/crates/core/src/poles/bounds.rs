//! Convergence rates and the a-priori error bounds built on them.
//!
//! Every bound returns `f64`; anchors that are infinite make the bound
//! unusable and are reported as [`Error::InfiniteAnchor`].

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::functions::{Anchor, StieltjesFunction};
use crate::operators::SpectralInterval;

/// `ρ_{[α,β]} = exp(−π² / log(4β/α))`.
pub fn rate_rho(alpha: f64, beta: f64) -> f64 {
    (-PI * PI / (4.0 * beta / alpha).ln()).exp()
}

/// `γ_{ℓ,κ} = 2.23 + (2/π) log(4ℓ √(κ/π))`.
pub fn gamma_const(len: usize, kappa: f64) -> f64 {
    2.23 + 2.0 / PI * (4.0 * len as f64 * (kappa / PI).sqrt()).ln()
}

/// Which `γ` to put in the Laplace-type bounds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GammaChoice {
    /// The proven constant `γ_{ℓ,κ}`.
    #[default]
    Proven,
    /// `γ = 1`, observed experimentally but not proven. For plots only.
    Conjectured,
}

impl GammaChoice {
    pub fn value(self, len: usize, kappa: f64) -> f64 {
        match self {
            Self::Proven => gamma_const(len, kappa),
            Self::Conjectured => 1.0,
        }
    }
}

fn finite_anchor(f: &StieltjesFunction, which: Anchor, interval: &SpectralInterval) -> Result<f64> {
    let v = f.bound_anchor(which, interval);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::InfiniteAnchor { label: f.label().to_string() })
    }
}

/// `8 γ_{ℓ,κ} f(0⁺) ‖v‖ ρ_{[a,b]}^{ℓ/2}` for `Ψ_ℓ^{[a,b]}` poles.
pub fn laplace_1d_bound(
    f: &StieltjesFunction,
    interval: &SpectralInterval,
    vnorm: f64,
    len: usize,
    gamma: GammaChoice,
) -> Result<f64> {
    let f0 = finite_anchor(f, Anchor::ZeroPlus, interval)?;
    let rho = interval.rho();
    Ok(8.0 * gamma.value(len, interval.kappa()) * f0 * vnorm * rho.powf(len as f64 / 2.0))
}

/// `8 f(a) ‖v‖ ρ_{[a,4b]}^ℓ` for `Ψ_{C,ℓ}` poles.
pub fn cauchy_1d_bound(f: &StieltjesFunction, interval: &SpectralInterval, vnorm: f64, len: usize) -> Result<f64> {
    let fa = finite_anchor(f, Anchor::AtA, interval)?;
    let rho = rate_rho(interval.a(), 4.0 * interval.b());
    Ok(8.0 * fa * vnorm * rho.powi(len as i32))
}

/// `16 γ_{ℓ,κ} f(0⁺) ρ_{[a,b]}^{ℓ/2} ‖F‖` for the Kronecker-structured Laplace case.
pub fn kron_laplace_bound(
    f: &StieltjesFunction,
    interval: &SpectralInterval,
    fnorm: f64,
    len: usize,
    gamma: GammaChoice,
) -> Result<f64> {
    Ok(2.0 * laplace_1d_bound(f, interval, fnorm, len, gamma)?)
}

/// `4 f(2a) (1 + κ) ‖F‖ ρ_{[a,2b]}^ℓ` for the Kronecker-structured Cauchy case.
pub fn kron_cauchy_bound(f: &StieltjesFunction, interval: &SpectralInterval, fnorm: f64, len: usize) -> Result<f64> {
    let f2a = finite_anchor(f, Anchor::AtTwoA, interval)?;
    let rho = rate_rho(interval.a(), 2.0 * interval.b());
    Ok(4.0 * f2a * (1.0 + interval.kappa()) * fnorm * rho.powi(len as i32))
}

/// `(1 + κ) · 4ρ_{[a,b]}^ℓ · ‖F‖` for the Sylvester residual with Zolotarev poles.
pub fn sylvester_residual_bound(interval: &SpectralInterval, fnorm: f64, len: usize) -> f64 {
    (1.0 + interval.kappa()) * 4.0 * interval.rho().powi(len as i32) * fnorm
}

/// Bound on `σ_{1+ℓk}(X)`: `4 f(2a) ρ_{[a,2b]}^ℓ ‖F‖` for Cauchy–Stieltjes
/// functions, `16 γ_{ℓ,κ} f(0⁺) ρ_{[a,b]}^{ℓ/2} ‖F‖` otherwise.
pub fn singular_value_bound(
    f: &StieltjesFunction,
    interval: &SpectralInterval,
    fnorm: f64,
    len: usize,
    gamma: GammaChoice,
) -> Result<f64> {
    if f.class().is_cauchy() {
        let f2a = finite_anchor(f, Anchor::AtTwoA, interval)?;
        Ok(4.0 * f2a * rate_rho(interval.a(), 2.0 * interval.b()).powi(len as i32) * fnorm)
    } else {
        kron_laplace_bound(f, interval, fnorm, len, gamma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_values() {
        // Reference values from 30-digit arithmetic.
        assert!((rate_rho(1.0, 4.0) - 0.028_447_149_09).abs() < 1e-11);
        assert!((rate_rho(1.0, 1.0) - 0.000_809_240_29).abs() < 1e-11);
        assert!((rate_rho(1.0, 16.0) - 0.093_187_822_95).abs() < 1e-11);
    }

    #[test]
    fn rate_scale_invariance() {
        for c in [1e-6, 0.3, 7.0, 1e8] {
            assert!((rate_rho(2.0, 9.0) - rate_rho(2.0 * c, 9.0 * c)).abs() <= 1e-15);
        }
    }

    #[test]
    fn gamma_values() {
        assert!((gamma_const(1, PI) - 3.112_542_400_61).abs() < 1e-10);
        assert!((gamma_const(50, 1e9) - 11.835_055_146_061_96).abs() < 1e-12);
        assert!(gamma_const(2, 10.0) > gamma_const(1, 10.0));
        assert!(gamma_const(3, 100.0) > gamma_const(3, 10.0));
        assert_eq!(GammaChoice::Conjectured.value(7, 1e4), 1.0);
    }

    #[test]
    fn bounds_need_finite_anchor() {
        let i = SpectralInterval::new(1.0, 100.0).unwrap();
        let p = StieltjesFunction::power(-0.5).unwrap();
        assert!(matches!(laplace_1d_bound(&p, &i, 1.0, 3, GammaChoice::Proven), Err(Error::InfiniteAnchor { .. })));
        let shifted = p.clone().with_shift(0.5);
        let b = laplace_1d_bound(&shifted, &i, 1.0, 3, GammaChoice::Proven).unwrap();
        assert!(b.is_finite() && b > 0.0);
        let c = cauchy_1d_bound(&p, &i, 2.0, 1).unwrap();
        assert!((c - 8.0 * 2.0 * rate_rho(1.0, 400.0)).abs() < 1e-14);
    }

    #[test]
    fn laplace_bound_decreases() {
        let i = SpectralInterval::new(1e-2, 1e4).unwrap();
        let f = StieltjesFunction::phi(1).unwrap();
        let vals: Vec<f64> = (1..30).map(|l| laplace_1d_bound(&f, &i, 1.0, l, GammaChoice::Proven).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
        let at1 = 8.0 * gamma_const(1, 1e6) * i.rho().sqrt();
        assert!((vals[0] - at1).abs() < 1e-14 * at1);
    }
}
