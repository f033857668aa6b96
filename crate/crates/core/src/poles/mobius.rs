//! Möbius maps `z ↦ (αz + β)/(γz + δ)` that send the pole and spectral
//! sets of the Cauchy–Stieltjes problems onto symmetric Zolotarev domains.

use crate::error::{Error, Result};
use crate::operators::SpectralInterval;

/// An invertible Möbius transformation together with the derived `Δ` and
/// the image endpoint (`â` or `ã`) of the symmetric target domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MobiusMap {
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
    root: f64,
    endpoint: f64,
}

impl MobiusMap {
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        if alpha * delta - beta * gamma == 0.0 {
            return Err(Error::InvalidParameter("Möbius map is singular (αδ = βγ)".into()));
        }
        Ok(Self { alpha, beta, gamma, delta, root: f64::NAN, endpoint: f64::NAN })
    }

    /// `(Δ + z − b)/(Δ − z + b)` with the given `Δ`.
    fn centred(b: f64, root: f64) -> Self {
        let endpoint_num = b - root;
        let endpoint_den = b + root;
        Self { alpha: 1.0, beta: root - b, gamma: -1.0, delta: root + b, root, endpoint: endpoint_num / endpoint_den }
    }

    /// `T_C` with `Δ = √(b² − ab)`: maps `[−∞, 0] ∪ [a, b]` onto `[−1, −â] ∪ [â, 1]`.
    pub fn cauchy(interval: SpectralInterval) -> Result<Self> {
        let (a, b) = (interval.a(), interval.b());
        if a >= b {
            return Err(Error::InvalidInterval { a, b });
        }
        let root = b * (1.0 - a / b).sqrt();
        let mut map = Self::centred(b, root);
        // â = (b − Δ)/(b + Δ) loses digits when Δ ≈ b; use (a·b)/(b + Δ)².
        map.endpoint = a * b / ((b + root) * (b + root));
        Ok(map)
    }

    /// `T` with `Δ = √(b² − a²)`: maps `[−∞, −a] ∪ [a, b]` onto `[−1, −ã] ∪ [ã, 1]`.
    pub fn kron(interval: SpectralInterval) -> Result<Self> {
        let (a, b) = (interval.a(), interval.b());
        if a >= b {
            return Err(Error::InvalidInterval { a, b });
        }
        let root = ((b - a) * (b + a)).sqrt();
        let mut map = Self::centred(b, root);
        // ã = (Δ + a − b)/(Δ − a + b) = a/(b + Δ) since Δ² = b² − a².
        map.endpoint = a / (b + root);
        Ok(map)
    }

    pub fn coefficients(&self) -> (f64, f64, f64, f64) {
        (self.alpha, self.beta, self.gamma, self.delta)
    }

    /// `Δ` (NaN for maps built with [`MobiusMap::new`]).
    pub fn root(&self) -> f64 {
        self.root
    }

    /// `â` or `ã` (NaN for maps built with [`MobiusMap::new`]).
    pub fn endpoint(&self) -> f64 {
        self.endpoint
    }

    pub fn apply(&self, z: f64) -> f64 {
        if z.is_infinite() {
            return if self.gamma == 0.0 { z * self.alpha.signum() } else { self.alpha / self.gamma };
        }
        let den = self.gamma * z + self.delta;
        if den == 0.0 {
            return f64::INFINITY;
        }
        (self.alpha * z + self.beta) / den
    }

    /// `(δw − β)/(−γw + α)`.
    pub fn inverse(&self, w: f64) -> f64 {
        if w.is_infinite() {
            return if self.gamma == 0.0 { w * self.delta.signum() } else { -self.delta / self.gamma };
        }
        let den = -self.gamma * w + self.alpha;
        if den == 0.0 {
            return f64::INFINITY;
        }
        (self.delta * w - self.beta) / den
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: f64, b: f64) -> SpectralInterval {
        SpectralInterval::new(a, b).unwrap()
    }

    #[test]
    fn cauchy_map_examples() {
        let t = MobiusMap::cauchy(iv(1.0, 4.0)).unwrap();
        assert!((t.root() - 12f64.sqrt()).abs() < 1e-15);
        assert!((t.endpoint() - (7.0 - 4.0 * 3f64.sqrt())).abs() < 1e-15);
        assert!((t.endpoint() - 0.071_796_769_724_490_96).abs() < 1e-15);
        assert!((1.0 / t.endpoint() - 13.928_203_230_275_51).abs() < 1e-12);
        assert_eq!(t.apply(4.0), 1.0);
        assert!((t.apply(f64::NEG_INFINITY) + 1.0).abs() < 1e-15);
        assert!((t.apply(0.0) + t.apply(1.0)).abs() < 1e-15);
        assert!((t.apply(1.0) - t.endpoint()).abs() < 1e-15);
    }

    #[test]
    fn kron_map_examples() {
        let t = MobiusMap::kron(iv(1.0, 4.0)).unwrap();
        assert!((t.root() - 15f64.sqrt()).abs() < 1e-15);
        assert!((t.endpoint() - 0.127_016_653_792_583_1).abs() < 1e-15);
        assert!(1.0 / t.endpoint() <= 8.0);
        assert_eq!(t.apply(4.0), 1.0);
        assert!((t.apply(-1.0) + t.endpoint()).abs() < 1e-15);
        assert!((t.apply(f64::NEG_INFINITY) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn endpoint_guarantees() {
        for (a, b) in [(1.0, 1.5), (1.0, 4.0), (1e-3, 10.0), (1.0, 1e9)] {
            let c = MobiusMap::cauchy(iv(a, b)).unwrap();
            let k = MobiusMap::kron(iv(a, b)).unwrap();
            assert!(1.0 / c.endpoint() <= 4.0 * b / a * (1.0 + 1e-14));
            assert!(1.0 / k.endpoint() <= 2.0 * b / a * (1.0 + 1e-14));
            assert!(c.endpoint() > 0.0 && c.endpoint() < 1.0);
            assert!(k.endpoint() > 0.0 && k.endpoint() < 1.0);
        }
    }

    #[test]
    fn inverse_composition() {
        let t = MobiusMap::kron(iv(0.3, 7.0)).unwrap();
        for z in [-5.0, -0.7, 0.0, 0.4, 3.3] {
            assert!((t.apply(t.inverse(z)) - z).abs() < 1e-12);
            assert!((t.inverse(t.apply(z)) - z).abs() < 1e-12 * (1.0 + z.abs()));
        }
        assert!(MobiusMap::new(1.0, 2.0, 2.0, 4.0).is_err());
        let m = MobiusMap::new(2.0, 1.0, 0.5, 3.0).unwrap();
        assert!((m.inverse(m.apply(1.7)) - 1.7).abs() < 1e-14);
    }

    #[test]
    fn degenerate_interval_rejected() {
        assert!(MobiusMap::cauchy(iv(2.0, 2.0)).is_err());
    }
}
