//! Tridiagonal LU with partial pivoting (the `gttrf`/`gttrs` scheme),
//! generic over real and complex scalars.

use nalgebra::ComplexField;

pub(crate) struct TridiagLu<T> {
    dl: Vec<T>,
    d: Vec<T>,
    du: Vec<T>,
    du2: Vec<T>,
    swapped: Vec<bool>,
}

/// Smallest pivot modulus encountered, reported on failure.
pub(crate) struct SmallPivot(pub f64);

impl<T> TridiagLu<T>
where
    T: ComplexField<RealField = f64> + Copy,
{
    /// Factorizes the matrix with sub-diagonal `dl`, diagonal `d`, super-diagonal `du`.
    /// Pivots with modulus at most `tol` are rejected.
    pub fn new(mut dl: Vec<T>, mut d: Vec<T>, mut du: Vec<T>, tol: f64) -> Result<Self, SmallPivot> {
        let n = d.len();
        let mut du2 = vec![T::zero(); n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].modulus() >= dl[i].modulus() {
                if d[i].modulus() <= tol {
                    return Err(SmallPivot(d[i].modulus()));
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = true;
            }
        }
        let worst = d.iter().map(|p| p.modulus()).fold(f64::INFINITY, f64::min);
        if worst <= tol {
            return Err(SmallPivot(worst));
        }
        Ok(Self { dl, d, du, du2, swapped })
    }

    /// Overwrites `b` with the solution.
    pub fn solve_in_place(&self, b: &mut [T]) {
        let n = self.d.len();
        if n == 0 {
            return;
        }
        for i in 0..n - 1 {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                let bi = b[i];
                b[i + 1] -= self.dl[i] * bi;
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}
