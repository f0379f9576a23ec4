use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::char_poly_from_roots;
use crate::error::{ensure, Error, Result};
use crate::scalar::{min_pairwise_distance, Real};
use crate::symfunc::{schur_hook, Hook, SymTable};

/// Node separation below which the Vandermonde route refuses to run.
pub const NEAR_SINGULAR_DISTANCE: f64 = 1e-12;

/// How the interpolation coefficients were computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InterpMethod {
    /// Newton divided differences followed by conversion to the monomial basis.
    Vandermonde,
    /// Companion-transpose recurrence started from `ψ_{n-1}(z) = z^{n-1}`.
    Recurrence,
    /// Closed form through hook Schur polynomials.
    Schur,
}

/// Coefficients `ψ_t[0..n]` (degree 0 first) of the degree `< n` polynomial
/// interpolating `z^t` on the roots.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterpCoeffs<T: Real> {
    pub psi: Vec<Complex<T>>,
    pub t: usize,
    pub method: InterpMethod,
}

impl<T: Real> InterpCoeffs<T> {
    /// Evaluates `ψ_t(z)`.
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.psi.iter().rev().fold(Complex::zero(), |acc, &c| acc * z + c)
    }

    /// `Σ_k w_k |ψ_t[k]|`.
    pub fn weighted_l1(&self, weights: &[T]) -> T {
        self.psi
            .iter()
            .zip(weights)
            .fold(T::zero(), |acc, (c, &w)| acc + w * c.norm())
    }

    pub fn l1(&self) -> T {
        self.psi.iter().fold(T::zero(), |acc, c| acc + c.norm())
    }

    pub fn l2(&self) -> T {
        self.psi.iter().fold(T::zero(), |acc, c| acc + c.norm_sqr()).sqrt()
    }
}

/// Interpolation coefficients of `z^t` on `roots` by the requested route.
pub fn interp_coeffs<T: Real>(
    roots: &[Complex<T>],
    t: usize,
    method: InterpMethod,
) -> Result<InterpCoeffs<T>> {
    let n = roots.len();
    ensure(n >= 1, || "need at least one node".into())?;
    ensure(t >= n, || format!("t = {t} must be at least n = {n}"))?;
    let psi = match method {
        InterpMethod::Vandermonde => vandermonde_route(roots, t)?,
        InterpMethod::Recurrence => recurrence_route(roots, t)?,
        InterpMethod::Schur => schur_route(roots, t)?,
    };
    Ok(InterpCoeffs { psi, t, method })
}

/// Vandermonde route on simple grids, Schur route otherwise.
pub fn interp_coeffs_auto<T: Real>(roots: &[Complex<T>], t: usize) -> Result<InterpCoeffs<T>> {
    if min_pairwise_distance(roots) < T::lit(NEAR_SINGULAR_DISTANCE) {
        interp_coeffs(roots, t, InterpMethod::Schur)
    } else {
        interp_coeffs(roots, t, InterpMethod::Vandermonde)
    }
}

fn vandermonde_route<T: Real>(z: &[Complex<T>], t: usize) -> Result<Vec<Complex<T>>> {
    let dist = min_pairwise_distance(z);
    if dist < T::lit(NEAR_SINGULAR_DISTANCE) {
        return Err(Error::NearSingularGrid { distance: dist.to_f64_lossy() });
    }
    let n = z.len();
    let mut c: Vec<Complex<T>> = z.iter().map(|zj| zj.powu(t as u32)).collect();
    for k in 1..n {
        for j in (k..n).rev() {
            c[j] = (c[j] - c[j - 1]) / (z[j] - z[j - k]);
        }
    }
    // Newton form -> monomial basis.
    for k in (0..n.saturating_sub(1)).rev() {
        for j in k..n - 1 {
            let next = c[j + 1];
            c[j] -= z[k] * next;
        }
    }
    Ok(c)
}

fn recurrence_route<T: Real>(z: &[Complex<T>], t: usize) -> Result<Vec<Complex<T>>> {
    let n = z.len();
    let spec = char_poly_from_roots(z)?;
    let f = spec.coeffs();
    let mut psi = vec![Complex::zero(); n];
    psi[n - 1] = Complex::one();
    for _ in (n - 1)..t {
        psi = companion_transpose_step(&psi, f);
    }
    Ok(psi)
}

/// One application of the transposed companion matrix:
/// `ψ_{s+1}(z) = z ψ_s(z) - ψ_s[n-1] f(z)`.
pub fn companion_transpose_step<T: Real>(psi: &[Complex<T>], f: &[Complex<T>]) -> Vec<Complex<T>> {
    let n = psi.len();
    let top = psi[n - 1];
    (0..n)
        .map(|j| {
            let shifted = if j == 0 { Complex::zero() } else { psi[j - 1] };
            shifted - top * f[j]
        })
        .collect()
}

fn schur_route<T: Real>(z: &[Complex<T>], t: usize) -> Result<Vec<Complex<T>>> {
    let n = z.len();
    let table = SymTable::build(z, t)?;
    (0..n)
        .map(|k| {
            let s = schur_hook(Hook::new(t - n, n - k - 1), &table)?;
            Ok(if (n - k + 1) % 2 == 0 { s } else { -s })
        })
        .collect()
}

/// Worst interpolation residual `|ψ_t(z_j) - z_j^t| / max(1, |z_j|^t)` over
/// the nodes.
pub fn interpolation_residual<T: Real>(coeffs: &InterpCoeffs<T>, roots: &[Complex<T>]) -> T {
    roots
        .iter()
        .map(|&z| {
            let target = z.powu(coeffs.t as u32);
            (coeffs.eval(z) - target).norm() / target.norm().max(T::one())
        })
        .fold(T::zero(), T::max)
}
