//! Equidistributed nested pole sequences.
//!
//! On the normalized interval `[â, 1]` the points `σ̃_j = √t_j` solve
//! `g(t_j) = s_j`, where `s_j = frac(j·ζ)` and
//!
//! ```text
//! g(t) = (1/2M) ∫_{â²}^{t} dy / √((y − â²) y (1 − y)),   M = K(k),  k' = â.
//! ```
//!
//! `g` is evaluated through Carlson's `R_F` and inverted by a safeguarded
//! Newton iteration.

use super::elliptic::{carlson_rf, elliptic_k_comp};
use super::mobius::MobiusMap;
use super::{PoleSequence, Provenance};
use crate::error::{Error, Result};
use crate::operators::SpectralInterval;

/// Default irrational seed `ζ = 1/√2`.
pub const DEFAULT_ZETA: f64 = std::f64::consts::FRAC_1_SQRT_2;

const NEWTON_MAX_ITER: usize = 100;

/// Generator state for the sequence on `[â, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct EdsState {
    lower: f64,
    zeta: f64,
    k_big: f64,
    emitted: Vec<f64>,
    next: usize,
}

impl EdsState {
    /// Sequence on `[lower, 1]` with `0 < lower < 1` and irrational seed `zeta`.
    pub fn new(lower: f64, zeta: f64) -> Result<Self> {
        if !(lower > 0.0 && lower < 1.0) {
            return Err(Error::InvalidParameter(format!("normalized lower endpoint must lie in (0, 1), got {lower}")));
        }
        if !(zeta > 0.0 && zeta.is_finite()) {
            return Err(Error::InvalidParameter(format!("seed must be positive, got {zeta}")));
        }
        Ok(Self { lower, zeta, k_big: elliptic_k_comp(lower), emitted: Vec::new(), next: 0 })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    /// Normalization constant `M = K(k)` with `k' = â`.
    pub fn normalization(&self) -> f64 {
        self.k_big
    }

    /// Points `σ̃_0, …` produced so far.
    pub fn emitted(&self) -> &[f64] {
        &self.emitted
    }

    /// Index of the next point.
    pub fn index(&self) -> usize {
        self.next
    }

    /// `s_j = frac(j·ζ)`.
    pub fn s(&self, j: usize) -> f64 {
        let x = j as f64 * self.zeta;
        x - x.floor()
    }

    /// `g(t)` for `t ∈ [â², 1]`.
    pub fn g(&self, t: f64) -> f64 {
        let a2 = self.lower * self.lower;
        if t <= a2 {
            return 0.0;
        }
        let t = t.min(1.0);
        let span = (1.0 - self.lower) * (1.0 + self.lower);
        // ∫_t^1 dy/√((y − a²) y (1 − y)) = 2 √((1 − t)/(1 − a²)) R_F((t − a²)/(1 − a²), t, 1).
        let tail = ((1.0 - t) / span).sqrt() * carlson_rf((t - a2) / span, t, 1.0);
        (1.0 - tail / self.k_big).max(0.0)
    }

    /// `g′(t) = 1 / (2M √((t − â²) t (1 − t)))`.
    pub fn g_prime(&self, t: f64) -> f64 {
        let a2 = self.lower * self.lower;
        1.0 / (2.0 * self.k_big * ((t - a2) * t * (1.0 - t)).sqrt())
    }

    /// Solves `g(t) = s` for `t ∈ [â², 1]`.
    pub fn solve(&self, s: f64) -> Result<f64> {
        let a2 = self.lower * self.lower;
        if s <= 0.0 {
            return Ok(a2);
        }
        if s >= 1.0 {
            return Ok(1.0);
        }
        // Line through (ln â², 0) and (ln â, g(â)) in the variable ln t.
        let (tau1, tau2) = (a2.ln(), self.lower.ln());
        let g_mid = self.g(self.lower);
        let (mut lo, mut hi) = (a2, 1.0);
        let mut t = (tau1 + s * (tau2 - tau1) / g_mid).exp();
        if !(t > lo && t < hi) {
            t = 0.5 * (lo + hi);
        }
        for _ in 0..NEWTON_MAX_ITER {
            let r = self.g(t) - s;
            if r.abs() <= 4.0 * f64::EPSILON {
                return Ok(t);
            }
            if r > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let step = r / self.g_prime(t);
            let mut cand = t - step;
            if !(cand > lo && cand < hi) {
                cand = 0.5 * (lo + hi);
            }
            if (cand - t).abs() <= 2.0 * f64::EPSILON * t {
                return Ok(cand);
            }
            t = cand;
        }
        // Plain bisection on the last bracket.
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let r = self.g(mid) - s;
            if r.abs() <= 4.0 * f64::EPSILON || hi - lo <= 2.0 * f64::EPSILON * mid {
                return Ok(mid);
            }
            if r > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Err(Error::InvalidParameter(format!("EDS inversion failed for s = {s}")))
    }
}

/// Emits the next `σ̃_j = √t_j` and the advanced state.
pub fn eds_next(state: &EdsState) -> Result<(f64, EdsState)> {
    let t = state.solve(state.s(state.next))?;
    let sigma = t.sqrt().clamp(state.lower, 1.0);
    let mut next = state.clone();
    next.emitted.push(sigma);
    next.next += 1;
    Ok((sigma, next))
}

/// Which pole set the sequence tracks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdsVariant {
    /// `Ψ_ℓ^{[a,b]}`: scale `[a/b, 1]` back by `−b`.
    Laplace,
    /// `Ψ_{C,ℓ}^{[a,b]}`: run on `[â, 1]` and map `−σ̃` through `T_C⁻¹`.
    Cauchy,
    /// A-side poles for Kronecker sums: run on `[ã, 1]` and map `−σ̃` through `T⁻¹`.
    CauchyKron,
}

/// First `len` poles of the equidistributed sequence for `interval`.
pub fn eds_poles(interval: SpectralInterval, len: usize, variant: EdsVariant) -> Result<PoleSequence> {
    eds_poles_with_seed(interval, len, variant, DEFAULT_ZETA)
}

pub fn eds_poles_with_seed(
    interval: SpectralInterval,
    len: usize,
    variant: EdsVariant,
    zeta: f64,
) -> Result<PoleSequence> {
    if len == 0 {
        return Err(Error::InvalidParameter("EDS pole count must be at least 1".into()));
    }
    let (a, b) = (interval.a(), interval.b());
    let provenance = match variant {
        EdsVariant::Laplace => Provenance::EdsLaplace,
        EdsVariant::Cauchy | EdsVariant::CauchyKron => Provenance::EdsCauchy,
    };
    if a == b {
        if variant != EdsVariant::Laplace {
            return Err(Error::InvalidInterval { a, b });
        }
        return Ok(PoleSequence::new(vec![-a; len], provenance, Some(interval)));
    }
    // `ceiling` is the right end of the image of `[−1, −lower]`; the inverse
    // map can overshoot it by a rounding error.
    let (lower, map, ceiling) = match variant {
        EdsVariant::Laplace => (a / b, None, -a),
        EdsVariant::Cauchy => {
            let map = MobiusMap::cauchy(interval)?;
            (map.endpoint(), Some(map), 0.0)
        }
        EdsVariant::CauchyKron => {
            let map = MobiusMap::kron(interval)?;
            (map.endpoint(), Some(map), -a)
        }
    };
    let mut state = EdsState::new(lower, zeta)?;
    let mut poles = Vec::with_capacity(len);
    for _ in 0..len {
        let (sigma, next) = eds_next(&state)?;
        state = next;
        poles.push(match &map {
            None => -b * sigma,
            Some(m) => m.inverse(-sigma).min(ceiling),
        });
    }
    Ok(PoleSequence::new(poles, provenance, Some(interval)))
}
