//! Zolotarev's third problem on `[−b,−a] ∪ [a,b]`.
//!
//! The optimal rational function is `r(z) = p(z)/p(−z)` with
//! `p(z) = ∏ (z − σ_j)` and
//!
//! ```text
//! σ_j = −b · dn((2j − 1) K(μ) / (2ℓ), μ),   μ = √(1 − (a/b)²),
//! ```
//!
//! the classical optimal ADI parameters. `zolotarev_ratio` evaluates the
//! witness ratio `max_{I₁}|r| / min_{I₂}|r|` of any given factored `r` on
//! intervals or half-lines.

use num_complex::Complex64;

use super::elliptic::{elliptic_k_comp, jacobi_dn_comp};
use super::{PoleSequence, Provenance};
use crate::error::{Error, Result};
use crate::operators::SpectralInterval;

/// The `ℓ` Zolotarev poles for `[a, b]`, largest magnitude first.
pub fn zolotarev_poles(interval: SpectralInterval, len: usize) -> Result<PoleSequence> {
    if len == 0 {
        return Err(Error::InvalidParameter("Zolotarev pole count must be at least 1".into()));
    }
    let (a, b) = (interval.a(), interval.b());
    let kp = a / b;
    let k_big = elliptic_k_comp(kp);
    let poles = (1..=len).map(|j| -b * jacobi_dn_comp((2 * j - 1) as f64 * k_big / (2 * len) as f64, kp)).collect();
    Ok(PoleSequence::new(poles, Provenance::Zolotarev, Some(interval)))
}

/// `r(z) = ∏ (z − zeros_j) / ∏ (z − poles_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunctionFactored {
    zeros: Vec<f64>,
    poles: Vec<f64>,
}

impl RationalFunctionFactored {
    pub fn new(zeros: Vec<f64>, poles: Vec<f64>) -> Result<Self> {
        if zeros.iter().chain(&poles).any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("zeros and poles must be finite".into()));
        }
        Ok(Self { zeros, poles })
    }

    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    pub fn poles(&self) -> &[f64] {
        &self.poles
    }

    /// `r(z)`, evaluated as a product of factor ratios.
    pub fn eval(&self, z: f64) -> f64 {
        if z.is_infinite() {
            return self.at_infinity();
        }
        let mut acc = 1.0;
        let (mut i, mut j) = (0, 0);
        while i < self.zeros.len() || j < self.poles.len() {
            if i < self.zeros.len() {
                acc *= z - self.zeros[i];
                i += 1;
            }
            if j < self.poles.len() {
                acc /= z - self.poles[j];
                j += 1;
            }
        }
        acc
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let num: Complex64 = self.zeros.iter().map(|&x| z - x).product();
        let den: Complex64 = self.poles.iter().map(|&x| z - x).product();
        num / den
    }

    /// `lim_{|z|→∞} |r(z)|`.
    fn at_infinity(&self) -> f64 {
        use std::cmp::Ordering::*;
        match self.zeros.len().cmp(&self.poles.len()) {
            Equal => 1.0,
            Less => 0.0,
            Greater => f64::INFINITY,
        }
    }
}

/// Reflected form `p(z)/p(−z)`: zeros are the negated poles.
pub fn as_rational(poles: &PoleSequence) -> Result<RationalFunctionFactored> {
    if poles.poles().iter().any(|p| p.is_infinite()) {
        return Err(Error::InvalidParameter("as_rational needs finite poles".into()));
    }
    RationalFunctionFactored::new(poles.poles().iter().map(|p| -p).collect(), poles.poles().to_vec())
}

/// A closed real interval; either end may be infinite (half-line).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalSet {
    pub lo: f64,
    pub hi: f64,
}

impl EvalSet {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi || (lo.is_infinite() && hi.is_infinite()) {
            return Err(Error::InvalidParameter(format!("invalid evaluation set [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidParameter("interval ends must be finite".into()));
        }
        Self::new(lo, hi)
    }

    fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    /// Sample points: Chebyshev nodes (ends included), geometric nodes when
    /// the set avoids zero, and reciprocal-mapped nodes for half-lines.
    fn grid(&self, size: usize, scale: f64) -> Vec<f64> {
        let size = size.max(2);
        let mut pts = Vec::with_capacity(3 * size);
        let nodes =
            |m: usize| (0..m).map(move |k| 0.5 - 0.5 * (std::f64::consts::PI * k as f64 / (m - 1) as f64).cos());
        let geometric = |from: f64, to: f64, m: usize| {
            let (lf, lt) = (from.ln(), to.ln());
            (0..m).map(move |k| (lf + (lt - lf) * k as f64 / (m - 1) as f64).exp())
        };
        if self.lo.is_finite() && self.hi.is_finite() {
            pts.extend(nodes(size).map(|t| self.lo + (self.hi - self.lo) * t));
            if self.lo > 0.0 {
                pts.extend(geometric(self.lo, self.hi, size));
            } else if self.hi < 0.0 {
                pts.extend(geometric(-self.hi, -self.lo, size).map(|x| -x));
            }
        } else {
            // Half-line anchored at `c`, heading towards `dir·∞`.
            let (c, dir) = if self.lo.is_infinite() { (self.hi, -1.0) } else { (self.lo, 1.0) };
            pts.push(c);
            let s = scale.max(c.abs()).max(f64::MIN_POSITIVE);
            pts.extend(nodes(size).skip(1).map(|t| c + dir * s * (1.0 / t - 1.0)));
            let start = if c * dir > 0.0 { c.abs() } else { s * 1e-16 };
            pts.extend(geometric(start, s * 1e16, size).map(|x| if c * dir > 0.0 { dir * x } else { c + dir * x }));
            pts.push(dir * f64::INFINITY);
        }
        pts.retain(|x| x.is_infinite() || self.contains(*x));
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }
}

const REFINE_ROUNDS: usize = 6;
const REFINE_POINTS: usize = 32;

/// Extreme of `|r|` over `set`: `max` when `maximize`, otherwise `min`.
fn extreme(r: &RationalFunctionFactored, set: EvalSet, size: usize, scale: f64, maximize: bool) -> f64 {
    let better = |x: f64, y: f64| if maximize { x > y } else { x < y };
    let mut grid = set.grid(size, scale);
    let mut best = if maximize { f64::NEG_INFINITY } else { f64::INFINITY };
    for _ in 0..=REFINE_ROUNDS {
        let values: Vec<f64> = grid.iter().map(|&z| r.eval(z).abs()).collect();
        let mut at = 0;
        for (i, &v) in values.iter().enumerate() {
            if better(v, values[at]) {
                at = i;
            }
        }
        if better(values[at], best) {
            best = values[at];
        }
        let lo = grid[at.saturating_sub(1)];
        let hi = grid[(at + 1).min(grid.len() - 1)];
        if !lo.is_finite() || !hi.is_finite() || hi <= lo {
            break;
        }
        grid = (0..=REFINE_POINTS).map(|k| lo + (hi - lo) * k as f64 / REFINE_POINTS as f64).collect();
    }
    best
}

/// Witness ratio `max_{I₁}|r| / min_{I₂}|r|` on sampled grids with local refinement.
pub fn zolotarev_ratio(r: &RationalFunctionFactored, i1: EvalSet, i2: EvalSet, gridsize: usize) -> Result<f64> {
    // Poles inside `I₂` only make |r| large there; inside `I₁` the maximum is infinite.
    for &p in r.poles() {
        if i1.contains(p) {
            return Err(Error::PoleInDomain { pole: p, lo: i1.lo, hi: i1.hi });
        }
    }
    let scale = r
        .zeros()
        .iter()
        .chain(r.poles())
        .chain([i1.lo, i1.hi, i2.lo, i2.hi].iter().filter(|x| x.is_finite()))
        .fold(1.0f64, |m, x| m.max(x.abs()));
    let num = extreme(r, i1, gridsize, scale, true);
    let den = extreme(r, i2, gridsize, scale, false);
    Ok(num / den)
}
