//! Complete elliptic integrals, Jacobi elliptic functions and Carlson's
//! symmetric integral R_F.
//!
//! Everything is parameterised by the modulus `k` (integrals use `k²`).
//! Internally the complementary modulus `k' = √(1 − k²)` is carried
//! explicitly: the pole generators know `k' = a/b` exactly, and recovering it
//! from `k` would lose most of its digits when `k` is close to one.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

const AGM_MAX_ITER: usize = 64;

/// Modulus closer to one than this is reported as near-singular by
/// [`elliptic_k_flagged`].
pub const NEAR_SINGULAR_GAP: f64 = 1e-10;

fn check_modulus(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::InvalidParameter(format!("elliptic modulus must lie in [0, 1), got {k}")));
    }
    Ok(((1.0 - k) * (1.0 + k)).sqrt())
}

/// Arithmetic-geometric mean of two non-negative numbers.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..AGM_MAX_ITER {
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
        if (a - b).abs() <= 4.0 * f64::EPSILON * a {
            break;
        }
    }
    0.5 * (a + b)
}

/// Complete elliptic integral of the first kind `K(k)`.
///
/// ```text
/// K(k) = ∫₀^{π/2} dθ / √(1 − k² sin²θ) = π / (2·AGM(1, k'))
/// ```
pub fn elliptic_k(k: f64) -> Result<f64> {
    let kp = check_modulus(k)?;
    Ok(elliptic_k_comp(kp))
}

/// Same as [`elliptic_k`], also returning `true` when `1 − k` is below
/// [`NEAR_SINGULAR_GAP`] (the logarithmic singularity at `k = 1` is close).
pub fn elliptic_k_flagged(k: f64) -> Result<(f64, bool)> {
    let value = elliptic_k(k)?;
    Ok((value, 1.0 - k < NEAR_SINGULAR_GAP))
}

/// `K` as a function of the complementary modulus `k' ∈ (0, 1]`.
pub fn elliptic_k_comp(kp: f64) -> f64 {
    debug_assert!(kp > 0.0 && kp <= 1.0);
    FRAC_PI_2 / agm(1.0, kp)
}

/// Jacobi elliptic function `dn(u, k)`.
pub fn jacobi_dn(u: f64, k: f64) -> Result<f64> {
    let kp = check_modulus(k)?;
    Ok(jacobi_dn_comp(u, kp))
}

/// `dn(u, k)` with the modulus given through `k' = √(1 − k²)`.
///
/// The argument is reduced to `[0, K/2]` using evenness, the period `2K` and
/// the reflection `dn(u) · dn(K − u) = k'`, so values near `u = K` keep full
/// relative accuracy even when `k'` is tiny.
pub fn jacobi_dn_comp(u: f64, kp: f64) -> f64 {
    if kp >= 1.0 {
        return 1.0;
    }
    let big_k = elliptic_k_comp(kp);
    let period = 2.0 * big_k;
    let mut r = u.abs() % period;
    if r > big_k {
        r = period - r;
    }
    if r > 0.5 * big_k {
        kp / sncndn_agm(big_k - r, kp).2
    } else {
        sncndn_agm(r, kp).2
    }
}

/// `(sn, cn, dn)` by the descending AGM (Gauss transformation) scheme.
pub fn jacobi_sncndn(u: f64, k: f64) -> Result<(f64, f64, f64)> {
    let kp = check_modulus(k)?;
    Ok(sncndn_agm(u, kp))
}

fn sncndn_agm(u: f64, kp: f64) -> (f64, f64, f64) {
    if kp >= 1.0 {
        return (u.sin(), u.cos(), 1.0);
    }
    let k = ((1.0 - kp) * (1.0 + kp)).sqrt();
    let mut a = vec![1.0];
    let mut c = vec![k];
    let mut b = kp;
    while c.last().unwrap().abs() > f64::EPSILON * a.last().unwrap() && a.len() < AGM_MAX_ITER {
        let an = *a.last().unwrap();
        c.push(0.5 * (an - b));
        a.push(0.5 * (an + b));
        b = (an * b).sqrt();
    }
    let n = a.len() - 1;
    let mut phi = (1u64 << n) as f64 * a[n] * u;
    let mut prev = phi;
    for i in (1..=n).rev() {
        prev = phi;
        let s = (c[i] / a[i]) * phi.sin();
        phi = 0.5 * (phi + s.clamp(-1.0, 1.0).asin());
    }
    let sn = phi.sin();
    let cn = phi.cos();
    let dn = if n == 0 { 1.0 } else { cn / (prev - phi).cos() };
    (sn, cn, dn)
}

/// Carlson's symmetric elliptic integral
/// `R_F(x, y, z) = ½ ∫₀^∞ dt / √((t+x)(t+y)(t+z))`.
///
/// At most one argument may be zero.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> f64 {
    debug_assert!(x >= 0.0 && y >= 0.0 && z >= 0.0);
    let (x0, y0) = (x, y);
    let (mut x, mut y, mut z) = (x, y, z);
    let a0 = (x + y + z) / 3.0;
    let q = (3.0 * f64::EPSILON).powf(-1.0 / 6.0) * (a0 - x).abs().max((a0 - y).abs()).max((a0 - z).abs());
    let mut a = a0;
    let mut scale = 1.0;
    for _ in 0..200 {
        if q * scale < a.abs() {
            break;
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sx * sz + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        a = 0.25 * (a + lambda);
        scale *= 0.25;
    }
    let big_x = (a0 - x0) * scale / a;
    let big_y = (a0 - y0) * scale / a;
    let big_z = -big_x - big_y;
    let e2 = big_x * big_y - big_z * big_z;
    let e3 = big_x * big_y * big_z;
    (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / a.sqrt()
}

/// Incomplete elliptic integral of the first kind `F(φ, k)` for
/// `φ ∈ [0, π/2]`, with the modulus given through `k'`.
pub fn elliptic_f_comp(phi: f64, kp: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    let k2 = (1.0 - kp) * (1.0 + kp);
    s * carlson_rf(c * c, 1.0 - k2 * s * s, 1.0)
}
