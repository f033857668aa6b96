//! Pole selection: Zolotarev sets, Möbius-mapped sets for Cauchy–Stieltjes
//! functions, equidistributed nested sequences, extended Krylov, and the
//! rate constants that enter every a-priori bound.
//!
//! Poles are extended reals stored as `f64`; `±∞` means "no pole", i.e. a
//! polynomial Krylov step.

pub mod bounds;
pub mod eds;
pub mod elliptic;
pub mod mobius;
pub mod zolotarev;

use std::fmt;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::operators::SpectralInterval;

pub use bounds::{gamma_const, rate_rho};
pub use eds::{eds_poles, EdsState, EdsVariant};
pub use mobius::MobiusMap;
pub use zolotarev::{as_rational, zolotarev_poles, zolotarev_ratio, EvalSet, RationalFunctionFactored};

/// Where a pole sequence came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Zolotarev,
    Cauchy,
    CauchyKron,
    EdsLaplace,
    EdsCauchy,
    Extended,
    Polynomial,
    Custom,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Zolotarev => "zolotarev",
            Self::Cauchy => "cauchy",
            Self::CauchyKron => "cauchy-kron",
            Self::EdsLaplace => "eds-laplace",
            Self::EdsCauchy => "eds-cauchy",
            Self::Extended => "extended",
            Self::Polynomial => "polynomial",
            Self::Custom => "custom",
        };
        f.write_str(s)
    }
}

/// Ordered extended-real poles with their provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct PoleSequence {
    poles: Vec<f64>,
    provenance: Provenance,
    interval: Option<SpectralInterval>,
}

impl PoleSequence {
    pub fn new(poles: Vec<f64>, provenance: Provenance, interval: Option<SpectralInterval>) -> Self {
        Self { poles, provenance, interval }
    }

    pub fn custom(poles: Vec<f64>) -> Self {
        Self::new(poles, Provenance::Custom, None)
    }

    pub fn poles(&self) -> &[f64] {
        &self.poles
    }

    pub fn len(&self) -> usize {
        self.poles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poles.is_empty()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Interval the sequence was generated for, if any.
    pub fn interval(&self) -> Option<SpectralInterval> {
        self.interval
    }

    /// Elementwise negation; `∞` stays `∞`.
    pub fn negated(&self) -> Self {
        let poles = self.poles.iter().map(|&p| if p.is_infinite() { p } else { -p }).collect();
        Self { poles, ..self.clone() }
    }

    /// Elementwise `p + η`; `∞` stays `∞`.
    pub fn shifted(&self, eta: f64) -> Self {
        let poles = self.poles.iter().map(|&p| if p.is_infinite() { p } else { p + eta }).collect();
        Self { poles, ..self.clone() }
    }

    /// The first `len` poles.
    pub fn prefix(&self, len: usize) -> Self {
        Self { poles: self.poles[..len.min(self.poles.len())].to_vec(), ..self.clone() }
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.poles
    }
}

/// `(∞, 0, ∞, 0, …)` of length `len`.
pub fn extended_poles(len: usize) -> Result<PoleSequence> {
    if len == 0 {
        return Err(Error::InvalidParameter("extended Krylov needs at least one pole".into()));
    }
    let poles = (0..len).map(|j| if j % 2 == 0 { f64::INFINITY } else { 0.0 }).collect();
    Ok(PoleSequence::new(poles, Provenance::Extended, None))
}

/// `len` infinite poles.
pub fn polynomial_poles(len: usize) -> Result<PoleSequence> {
    if len == 0 {
        return Err(Error::InvalidParameter("polynomial Krylov needs at least one step".into()));
    }
    Ok(PoleSequence::new(vec![f64::INFINITY; len], Provenance::Polynomial, None))
}

/// `Ψ_{C,ℓ} = T_C⁻¹(Ψ_ℓ^{[â,1]})`: poles for Cauchy–Stieltjes functions.
pub fn cauchy_poles(interval: SpectralInterval, len: usize) -> Result<PoleSequence> {
    let map = MobiusMap::cauchy(interval)?;
    let base = zolotarev_poles(SpectralInterval::new(map.endpoint(), 1.0)?, len)?;
    let poles = base.poles().iter().map(|&p| map.inverse(p)).collect();
    Ok(PoleSequence::new(poles, Provenance::Cauchy, Some(interval)))
}

/// `(Ψ, Ξ)` with `Ψ = T⁻¹(Ψ_ℓ^{[ã,1]})` and `Ξ = −Ψ`, for Kronecker-structured
/// Cauchy–Stieltjes problems. `Ψ` drives the `A` side and `Ξ` the `Bᵀ` side.
pub fn cauchy_kron_poles(interval: SpectralInterval, len: usize) -> Result<(PoleSequence, PoleSequence)> {
    let map = MobiusMap::kron(interval)?;
    let base = zolotarev_poles(SpectralInterval::new(map.endpoint(), 1.0)?, len)?;
    let poles = base.poles().iter().map(|&p| map.inverse(p)).collect();
    let psi = PoleSequence::new(poles, Provenance::CauchyKron, Some(interval));
    let xi = psi.negated();
    Ok((psi, xi))
}

/// One pole per line with 17 significant digits; `inf` for infinite poles.
pub fn format_poles(poles: &[f64]) -> String {
    let mut out = String::new();
    for &p in poles {
        if p.is_infinite() {
            out.push_str("inf\n");
        } else {
            out.push_str(&format!("{p:.16e}\n"));
        }
    }
    out
}

/// Parses the format written by [`format_poles`]. Blank lines and `#`
/// comments are skipped; `inf`, `+inf`, `-inf` and `Infinity` all mean `∞`.
pub fn parse_poles(text: &str) -> Result<Vec<f64>> {
    let mut poles = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let p: f64 = t
            .parse()
            .map_err(|_| Error::Parse { line: i + 1, msg: format!("expected a real pole or `inf`, got {t:?}") })?;
        if p.is_nan() {
            return Err(Error::Parse { line: i + 1, msg: "NaN is not a pole".into() });
        }
        poles.push(if p.is_infinite() { f64::INFINITY } else { p });
    }
    Ok(poles)
}

pub fn read_pole_file(path: impl AsRef<Path>) -> Result<PoleSequence> {
    Ok(PoleSequence::custom(parse_poles(&fs::read_to_string(path)?)?))
}
