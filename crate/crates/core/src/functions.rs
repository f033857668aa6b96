//! Catalog of completely monotonic scalar functions.
//!
//! Every function carries its class tag: Laplace–Stieltjes (completely
//! monotonic on `(0, ∞)`) or Cauchy–Stieltjes (a subclass). The tag selects
//! the pole strategy and the a-priori error bound downstream. An optional
//! shift `η` turns `f` into `z ↦ f(z + η)`; pole generators and bound anchors
//! read the shifted function, never the unshifted one.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::operators::SpectralInterval;

/// Stieltjes class of a scalar function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FunctionClass {
    /// `f(z) = ∫₀^∞ e^{−tz} μ(t) dt`
    Laplace,
    /// `f(z) = ∫₀^∞ μ(t)/(t + z) dt`; also Laplace–Stieltjes.
    Cauchy,
}

impl FunctionClass {
    /// Cauchy–Stieltjes functions are Laplace–Stieltjes as well.
    pub fn is_laplace(self) -> bool {
        true
    }

    pub fn is_cauchy(self) -> bool {
        self == FunctionClass::Cauchy
    }
}

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Kernel {
    Phi(u32),
    Power(f64),
    Inverse,
    Log1pOverZ,
    OneMinusExpSqrtOverZ,
    LambertWScaled,
    RationalNegPoles(Vec<(f64, f64)>),
    Custom { f: ScalarFn, at_zero: f64 },
}

/// An evaluable scalar function with its class tag and shift.
#[derive(Clone)]
pub struct StieltjesFunction {
    kernel: Kernel,
    class: FunctionClass,
    shift: f64,
    label: String,
}

impl fmt::Debug for StieltjesFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StieltjesFunction")
            .field("label", &self.label)
            .field("class", &self.class)
            .field("shift", &self.shift)
            .finish()
    }
}

/// Which bound anchor to read off a function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Anchor {
    /// `lim_{z→0⁺} f(z)`
    ZeroPlus,
    /// `f(a)`
    AtA,
    /// `f(2a)`
    AtTwoA,
}

impl StieltjesFunction {
    /// `φ_j(z) = ∫₀^∞ e^{−tz} max(1 − t, 0)^{j−1}/(j−1)! dt`; `φ₁(z) = (1 − e^{−z})/z`.
    pub fn phi(j: u32) -> Result<Self> {
        if j == 0 {
            return Err(Error::InvalidParameter("phi_j requires j >= 1".into()));
        }
        Ok(Self::new(Kernel::Phi(j), FunctionClass::Laplace, format!("phi{j}")))
    }

    /// `z^exponent` with `−1 < exponent < 0`.
    pub fn power(exponent: f64) -> Result<Self> {
        if !(exponent > -1.0 && exponent < 0.0) {
            return Err(Error::InvalidParameter(format!("power exponent must lie in (-1, 0), got {exponent}")));
        }
        Ok(Self::new(Kernel::Power(exponent), FunctionClass::Cauchy, format!("power({exponent})")))
    }

    /// `z^{−1}` (Cauchy–Stieltjes with a point mass at `t = 0`).
    pub fn inverse() -> Self {
        Self::new(Kernel::Inverse, FunctionClass::Cauchy, "inverse".into())
    }

    /// `log(1 + z)/z`
    pub fn log1p_over_z() -> Self {
        Self::new(Kernel::Log1pOverZ, FunctionClass::Cauchy, "log1p_over_z".into())
    }

    /// `(1 − e^{−√z})/z`
    pub fn one_minus_exp_sqrt_over_z() -> Self {
        Self::new(Kernel::OneMinusExpSqrtOverZ, FunctionClass::Cauchy, "one_minus_exp_sqrt_over_z".into())
    }

    /// `z^{−3/2} W(z)` with `W` the principal Lambert function.
    pub fn lambertw_scaled() -> Self {
        Self::new(Kernel::LambertWScaled, FunctionClass::Laplace, "lambertw_scaled".into())
    }

    /// `Σ_j α_j / (z − β_j)` with `α_j > 0`, `β_j < 0`; pairs are `(α_j, β_j)`.
    pub fn rational_negpoles(terms: Vec<(f64, f64)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidParameter("rational function needs at least one term".into()));
        }
        if let Some(&(alpha, beta)) = terms.iter().find(|(al, be)| !(*al > 0.0 && *be < 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "rational term requires alpha > 0 and beta < 0, got ({alpha}, {beta})"
            )));
        }
        Ok(Self::new(Kernel::RationalNegPoles(terms), FunctionClass::Cauchy, "rational_negpoles".into()))
    }

    /// Arbitrary scalar map, for test families and polynomial checks.
    ///
    /// The caller vouches for the class tag; `at_zero` is reported as `f(0⁺)`.
    pub fn custom<F>(label: impl Into<String>, class: FunctionClass, at_zero: f64, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::new(Kernel::Custom { f: Arc::new(f), at_zero }, class, label.into())
    }

    fn new(kernel: Kernel, class: FunctionClass, label: String) -> Self {
        Self { kernel, class, shift: 0.0, label }
    }

    /// Returns the function `z ↦ f(z + η)`.
    pub fn with_shift(mut self, eta: f64) -> Self {
        self.shift = eta;
        self
    }

    pub fn class(&self) -> FunctionClass {
        self.class
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    fn is_custom(&self) -> bool {
        matches!(self.kernel, Kernel::Custom { .. })
    }

    /// `f(z + η)`.
    ///
    /// Catalog functions require `z + η > 0`. Custom functions accept any
    /// argument at which they return a finite value.
    pub fn eval(&self, z: f64) -> Result<f64> {
        let x = z + self.shift;
        let undefined = || Error::FunctionUndefined { label: self.label.clone(), at: z };
        if !self.is_custom() && !(x > 0.0) {
            return Err(undefined());
        }
        let value = match &self.kernel {
            Kernel::Phi(j) => phi_kernel(*j, x),
            Kernel::Power(p) => x.powf(*p),
            Kernel::Inverse => 1.0 / x,
            Kernel::Log1pOverZ => x.ln_1p() / x,
            Kernel::OneMinusExpSqrtOverZ => -(-x.sqrt()).exp_m1() / x,
            Kernel::LambertWScaled => lambert_w(x) / (x * x.sqrt()),
            Kernel::RationalNegPoles(terms) => terms.iter().map(|(al, be)| al / (x - be)).sum(),
            Kernel::Custom { f, .. } => f(x),
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(undefined())
        }
    }

    /// `lim_{z→0⁺} f(z + η)`, possibly `+∞`.
    pub fn at_zero_plus(&self) -> f64 {
        if self.shift != 0.0 && !self.is_custom() {
            return self.eval(0.0).unwrap_or(f64::INFINITY);
        }
        match &self.kernel {
            Kernel::Phi(j) => 1.0 / factorial(*j),
            Kernel::Log1pOverZ => 1.0,
            Kernel::Power(_) | Kernel::Inverse | Kernel::OneMinusExpSqrtOverZ | Kernel::LambertWScaled => f64::INFINITY,
            Kernel::RationalNegPoles(terms) => terms.iter().map(|(al, be)| al / -be).sum(),
            Kernel::Custom { at_zero, .. } => *at_zero,
        }
    }

    /// Bound anchor `f(0⁺)`, `f(a)` or `f(2a)` for the given interval.
    ///
    /// `+∞` signals that the bound is unusable without a positive shift.
    pub fn bound_anchor(&self, which: Anchor, interval: &SpectralInterval) -> f64 {
        match which {
            Anchor::ZeroPlus => self.at_zero_plus(),
            Anchor::AtA => self.eval(interval.a()).unwrap_or(f64::INFINITY),
            Anchor::AtTwoA => self.eval(2.0 * interval.a()).unwrap_or(f64::INFINITY),
        }
    }

    /// Parses the command-line form, e.g. `power:-0.5`, `phi:1`, `lambertw`,
    /// `inverse`, `log1p`, `expsqrt`, `rational:1,-2;0.5,-3`. A trailing
    /// `@eta` applies a shift.
    pub fn parse(spec: &str) -> Result<Self> {
        let (body, shift) = match spec.split_once('@') {
            Some((body, eta)) => (body, Some(parse_f64(eta)?)),
            None => (spec, None),
        };
        let (name, args) = body.split_once(':').unwrap_or((body, ""));
        let f = match name.trim() {
            "phi" => {
                let j = if args.is_empty() { 1 } else { args.trim().parse().map_err(|_| bad_spec(spec))? };
                Self::phi(j)?
            }
            "power" => Self::power(parse_f64(args)?)?,
            "inverse" => Self::inverse(),
            "log1p" | "log1p_over_z" => Self::log1p_over_z(),
            "expsqrt" | "one_minus_exp_sqrt_over_z" => Self::one_minus_exp_sqrt_over_z(),
            "lambertw" | "lambertw_scaled" => Self::lambertw_scaled(),
            "rational" => {
                let terms = args
                    .split(';')
                    .map(|pair| {
                        let (al, be) = pair.split_once(',').ok_or_else(|| bad_spec(spec))?;
                        Ok((parse_f64(al)?, parse_f64(be)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::rational_negpoles(terms)?
            }
            _ => return Err(bad_spec(spec)),
        };
        Ok(match shift {
            Some(eta) => f.with_shift(eta),
            None => f,
        })
    }
}

fn bad_spec(spec: &str) -> Error {
    Error::InvalidParameter(format!("unknown function specification '{spec}'"))
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::InvalidParameter(format!("cannot parse number '{s}'")))
}

fn factorial(j: u32) -> f64 {
    (1..=j).map(f64::from).product()
}

/// `φ_j(x)` for `x > 0`: power series near the origin, the upward
/// recurrence `φ_j = (1/(j−1)! − φ_{j−1})/x` from `φ₀ = e^{−x}` elsewhere.
fn phi_kernel(j: u32, x: f64) -> f64 {
    if j == 1 {
        return -(-x).exp_m1() / x;
    }
    if x <= 1.0 + f64::from(j) {
        phi_series(j, x)
    } else {
        phi_recurrence(j, x)
    }
}

/// `Σ_k (−x)^k/(k + j)!`
fn phi_series(j: u32, x: f64) -> f64 {
    let mut term = 1.0 / factorial(j);
    let mut sum = term;
    for k in 1..200 {
        term *= -x / f64::from(j + k);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// `φ_i = (1/(i−1)! − φ_{i−1})/x` from `φ_0 = e^{−x}`.
fn phi_recurrence(j: u32, x: f64) -> f64 {
    let mut value = (-x).exp();
    let mut inv_fact = 1.0;
    for i in 1..=j {
        value = (inv_fact - value) / x;
        inv_fact /= f64::from(i);
    }
    value
}

/// Principal branch of the Lambert W function on `[0, ∞)`.
///
/// Winitzki's approximation seeds a Halley iteration on `w − x e^{−w} = 0`,
/// which never forms `e^w` and so cannot overflow.
pub fn lambert_w(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return f64::INFINITY;
    }
    let l = x.ln_1p();
    let mut w = l * (1.0 - l.ln_1p() / (2.0 + l));
    for _ in 0..50 {
        let xe = x * (-w).exp();
        let f = w - xe;
        let fp = 1.0 + xe;
        let fpp = -xe;
        let step = 2.0 * f * fp / (2.0 * fp * fp - f * fpp);
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * w.abs() {
            break;
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate;
    use std::f64::consts::{E, PI};

    fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        let (l, h) = (lo.ln(), hi.ln());
        (0..n).map(|i| (l + (h - l) * i as f64 / (n - 1) as f64).exp()).collect()
    }

    fn catalog() -> Vec<StieltjesFunction> {
        vec![
            StieltjesFunction::phi(1).unwrap(),
            StieltjesFunction::phi(2).unwrap(),
            StieltjesFunction::power(-0.2).unwrap(),
            StieltjesFunction::power(-0.5).unwrap(),
            StieltjesFunction::power(-0.8).unwrap(),
            StieltjesFunction::inverse(),
            StieltjesFunction::log1p_over_z(),
            StieltjesFunction::one_minus_exp_sqrt_over_z(),
            StieltjesFunction::lambertw_scaled(),
            StieltjesFunction::rational_negpoles(vec![(1.0, -0.5), (2.0, -7.0)]).unwrap(),
        ]
    }

    #[test]
    fn removable_singularities() {
        let phi1 = StieltjesFunction::phi(1).unwrap();
        assert!((phi1.eval(1e-300).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(phi1.at_zero_plus(), 1.0);
        let lg = StieltjesFunction::log1p_over_z();
        assert!((lg.eval(1e-200).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(lg.at_zero_plus(), 1.0);
        assert_eq!(StieltjesFunction::phi(2).unwrap().at_zero_plus(), 0.5);
    }

    #[test]
    fn catalog_values() {
        let phi1 = StieltjesFunction::phi(1).unwrap();
        assert!((phi1.eval(1.0).unwrap() - 0.632_120_558_828_557_7).abs() < 1e-15);
        let p = StieltjesFunction::power(-0.5).unwrap();
        assert!((p.eval(4.0).unwrap() - 0.5).abs() < 1e-16);
        assert_eq!(StieltjesFunction::power(-0.2).unwrap().eval(1.0).unwrap(), 1.0);
        let g = StieltjesFunction::one_minus_exp_sqrt_over_z();
        assert!((g.eval(4.0).unwrap() - 0.216_166_179_190_846_8).abs() < 1e-15);
    }

    #[test]
    fn class_tags() {
        use FunctionClass::*;
        let tags: Vec<_> = catalog().iter().map(|f| f.class()).collect();
        assert_eq!(tags, vec![Laplace, Laplace, Cauchy, Cauchy, Cauchy, Cauchy, Cauchy, Cauchy, Laplace, Cauchy]);
        assert!(Cauchy.is_laplace() && Cauchy.is_cauchy() && !Laplace.is_cauchy());
    }

    #[test]
    fn parameter_validation() {
        assert!(StieltjesFunction::phi(0).is_err());
        assert!(StieltjesFunction::power(-1.0).is_err());
        assert!(StieltjesFunction::power(0.0).is_err());
        assert!(StieltjesFunction::power(0.3).is_err());
        assert!(StieltjesFunction::rational_negpoles(vec![(1.0, 0.5)]).is_err());
        assert!(StieltjesFunction::rational_negpoles(vec![(-1.0, -0.5)]).is_err());
        assert!(StieltjesFunction::phi(1).unwrap().eval(0.0).is_err());
        assert!(StieltjesFunction::power(-0.5).unwrap().eval(-1.0).is_err());
    }

    #[test]
    fn shift_and_anchors() {
        let f = StieltjesFunction::power(-0.5).unwrap();
        let interval = SpectralInterval::new(2.0, 10.0).unwrap();
        assert_eq!(f.bound_anchor(Anchor::ZeroPlus, &interval), f64::INFINITY);
        assert!((f.bound_anchor(Anchor::AtTwoA, &interval) - 0.5).abs() < 1e-16);
        assert!((f.bound_anchor(Anchor::AtA, &interval) - 0.5f64.sqrt()).abs() < 1e-16);
        let shifted = f.clone().with_shift(1.0);
        assert!((shifted.eval(3.0).unwrap() - 0.5).abs() < 1e-16);
        assert_eq!(shifted.at_zero_plus(), 1.0);
        assert!(f.with_shift(1.0).eval(-0.5).is_ok());
    }

    #[test]
    fn complete_monotonicity_sampled() {
        let grid = log_grid(1e-3, 1e3, 400);
        for f in catalog() {
            let vals: Vec<f64> = grid.iter().map(|&z| f.eval(z).unwrap()).collect();
            assert!(vals.iter().all(|&v| v >= 0.0), "{}", f.label());
            for i in 0..grid.len() - 1 {
                let d1 = (vals[i + 1] - vals[i]) / (grid[i + 1] - grid[i]);
                assert!(d1 <= 0.0, "{} first difference at {}", f.label(), grid[i]);
            }
            for i in 1..grid.len() - 1 {
                let left = (vals[i] - vals[i - 1]) / (grid[i] - grid[i - 1]);
                let right = (vals[i + 1] - vals[i]) / (grid[i + 1] - grid[i]);
                // Tolerance for rounding where the function is flat.
                assert!(right - left >= -1e-12 * left.abs(), "{} second difference at {}", f.label(), grid[i]);
            }
        }
    }

    #[test]
    fn phi_matches_laplace_integral() {
        for j in 1..=2u32 {
            let f = StieltjesFunction::phi(j).unwrap();
            let fact = factorial(j - 1);
            for &z in &[0.1, 1.0, 10.0] {
                let q =
                    integrate(|t: f64| (-t * z).exp() * (1.0 - t).powi(j as i32 - 1) / fact, 0.0, 1.0, 1e-14).unwrap();
                assert!((f.eval(z).unwrap() - q).abs() < 1e-8, "phi{j}({z})");
            }
        }
    }

    #[test]
    fn phi_series_and_recurrence_agree_at_switch() {
        for j in 2..=4u32 {
            let x = 1.0 + f64::from(j);
            let below = phi_series(j, x);
            let above = phi_recurrence(j, x);
            assert!((below - above).abs() < 1e-12 * below, "j={j}");
        }
    }

    #[test]
    fn power_matches_cauchy_integral() {
        for &alpha in &[0.2, 0.5, 0.8] {
            let f = StieltjesFunction::power(-alpha).unwrap();
            for &z in &[0.5, 2.0] {
                // t = u^{1/(1−α)} removes the endpoint singularity of t^{−α}.
                let p = 1.0 / (1.0 - alpha);
                let head = integrate(
                    |u: f64| {
                        let t = u.powf(p);
                        p * u.powf(p - 1.0) * t.powf(-alpha) / (t + z)
                    },
                    0.0,
                    1.0,
                    1e-12,
                )
                .unwrap();
                // t = w^{−1/α} on the tail.
                let q = 1.0 / alpha;
                let tail = integrate(|w: f64| q / (1.0 + z * w.powf(q)), 0.0, 1.0, 1e-12).unwrap();
                let quad = (alpha * PI).sin() / PI * (head + tail);
                assert!((f.eval(z).unwrap() - quad).abs() < 1e-6, "alpha={alpha} z={z}");
            }
        }
    }

    fn bisect_lambert(x: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, x.max(1.0));
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid * mid.exp() < x {
                lo = mid
            } else {
                hi = mid
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn lambert_values() {
        assert_eq!(lambert_w(0.0), 0.0);
        assert!((lambert_w(E) - 1.0).abs() < 1e-15);
        let w1 = lambert_w(1.0);
        assert!((w1 - 0.567_143_290_409_783_8).abs() < 1e-15);
        assert!((w1 - bisect_lambert(1.0)).abs() < 1e-14);
    }

    #[test]
    fn lambert_identity_on_log_grid() {
        for x in log_grid(1e-12, 1e12, 300) {
            let w = lambert_w(x);
            assert!((w * w.exp() - x).abs() <= 1e-13 * x, "x={x}");
        }
    }

    #[test]
    fn parse_specs() {
        let f = StieltjesFunction::parse("power:-0.5").unwrap();
        assert_eq!(f.class(), FunctionClass::Cauchy);
        assert!((f.eval(4.0).unwrap() - 0.5).abs() < 1e-16);
        assert_eq!(StieltjesFunction::parse("phi:1").unwrap().label(), "phi1");
        assert_eq!(StieltjesFunction::parse("lambertw").unwrap().class(), FunctionClass::Laplace);
        let r = StieltjesFunction::parse("rational:1,-2;0.5,-3").unwrap();
        assert!((r.eval(1.0).unwrap() - (1.0 / 3.0 + 0.125)).abs() < 1e-15);
        let s = StieltjesFunction::parse("power:-0.5@0.25").unwrap();
        assert_eq!(s.shift(), 0.25);
        assert!(StieltjesFunction::parse("exp").is_err());
        assert!(StieltjesFunction::parse("power:abc").is_err());
    }
}
