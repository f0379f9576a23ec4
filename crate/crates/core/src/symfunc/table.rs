use num_complex::Complex;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{ensure, Error, Result};
use crate::scalar::Real;

/// Elementary, complete homogeneous, and power-sum values at one point.
///
/// `e[d] = e_d(z)` for `0 <= d <= n`, `h[d] = h_d(z)` for `0 <= d <= D`,
/// `p[i-1] = p_i(z)` for `1 <= i <= max(n, D)`. Out-of-range degrees follow
/// the conventions `e_d = 0` for `d > n` and `e_d = h_d = 0` for `d < 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymTable<T: Real> {
    point: Vec<Complex<T>>,
    e: Vec<Complex<T>>,
    h: Vec<Complex<T>>,
    p: Vec<Complex<T>>,
}

impl<T: Real> SymTable<T> {
    /// Builds the table by expanding `∏(1 + z_j x)` for `e` and the
    /// one-variable-at-a-time recurrence `h_d(z_1..z_j) = h_d(z_1..z_{j-1}) +
    /// z_j h_{d-1}(z_1..z_j)` for `h`. No divisions are involved, so
    /// integer-valued points give exact integer tables.
    ///
    /// Exact conjugate pairs `(a, ā)` enter together through the real
    /// quadratic `1 + 2Re(a) x + |a|^2 x^2`, so a self-conjugate point gives
    /// tables with imaginary parts exactly zero.
    pub fn build(point: &[Complex<T>], max_h_degree: usize) -> Result<Self> {
        ensure(!point.is_empty(), || "symmetric-function table needs at least one variable".into())?;
        let n = point.len();
        let mut e = vec![Complex::zero(); n + 1];
        e[0] = Complex::one();
        let mut h = vec![Complex::zero(); max_h_degree + 1];
        h[0] = Complex::one();
        let mut used = 0;
        for factor in factors(point) {
            match factor {
                Factor::Linear(z) => {
                    used += 1;
                    for d in (1..=used).rev() {
                        let prev = e[d - 1];
                        e[d] += z * prev;
                    }
                    for d in 1..=max_h_degree {
                        let prev = h[d - 1];
                        h[d] += z * prev;
                    }
                }
                Factor::Quadratic(sum, prod) => {
                    used += 2;
                    for d in (1..=used).rev() {
                        let mut add = sum * e[d - 1];
                        if d >= 2 {
                            add += prod * e[d - 2];
                        }
                        e[d] += add;
                    }
                    for d in 1..=max_h_degree {
                        let mut add = sum * h[d - 1];
                        if d >= 2 {
                            add -= prod * h[d - 2];
                        }
                        h[d] += add;
                    }
                }
            }
        }
        let p = power_sums(point, n.max(max_h_degree));
        Ok(Self { point: point.to_vec(), e, h, p })
    }

    /// Builds `e` and `h` from power sums through Newton's identities
    /// `d e_d = Σ (-1)^{i-1} p_i e_{d-i}` and `d h_d = Σ p_i h_{d-i}`.
    pub fn build_newton(point: &[Complex<T>], max_h_degree: usize) -> Result<Self> {
        ensure(!point.is_empty(), || "symmetric-function table needs at least one variable".into())?;
        let n = point.len();
        let p = power_sums(point, n.max(max_h_degree));
        let mut e = vec![Complex::zero(); n + 1];
        e[0] = Complex::one();
        for d in 1..=n {
            let mut acc = Complex::zero();
            for i in 1..=d {
                let term = p[i - 1] * e[d - i];
                if i % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            e[d] = acc / T::from_usize_lossy(d);
        }
        let mut h = vec![Complex::zero(); max_h_degree + 1];
        h[0] = Complex::one();
        for d in 1..=max_h_degree {
            let mut acc = Complex::zero();
            for i in 1..=d {
                acc += p[i - 1] * h[d - i];
            }
            h[d] = acc / T::from_usize_lossy(d);
        }
        Ok(Self { point: point.to_vec(), e, h, p })
    }

    /// Convenience constructor for a real point.
    pub fn build_real(point: &[T], max_h_degree: usize) -> Result<Self> {
        Self::build(&crate::scalar::to_complex(point), max_h_degree)
    }

    pub fn point(&self) -> &[Complex<T>] {
        &self.point
    }

    /// Number of variables `n`.
    pub fn n_vars(&self) -> usize {
        self.point.len()
    }

    /// Largest degree `D` for which `h_D` is stored.
    pub fn max_h_degree(&self) -> usize {
        self.h.len() - 1
    }

    pub fn e_values(&self) -> &[Complex<T>] {
        &self.e
    }

    pub fn h_values(&self) -> &[Complex<T>] {
        &self.h
    }

    /// `p_1, p_2, ...`.
    pub fn power_sums(&self) -> &[Complex<T>] {
        &self.p
    }

    /// `e_d(z)`; zero for `d < 0` or `d > n`.
    pub fn e(&self, d: isize) -> Complex<T> {
        if d < 0 {
            Complex::zero()
        } else {
            self.e.get(d as usize).copied().unwrap_or_else(Complex::zero)
        }
    }

    /// `h_d(z)`; zero for `d < 0`, an error past the stored degree.
    pub fn h(&self, d: isize) -> Result<Complex<T>> {
        if d < 0 {
            return Ok(Complex::zero());
        }
        let d = d as usize;
        self.h.get(d).copied().ok_or(Error::TableTooShort {
            needed: d,
            available: self.max_h_degree(),
        })
    }

    pub(crate) fn h_unchecked(&self, d: usize) -> Complex<T> {
        self.h[d]
    }

    /// Largest relative residual of Newton's identities over the stored `e`
    /// and `h` values. Each residual is scaled by the sum of magnitudes of the
    /// terms it combines.
    pub fn newton_residual(&self) -> T {
        let mut worst = T::zero();
        for d in 1..self.e.len() {
            let mut acc = self.e[d] * T::from_usize_lossy(d);
            let mut scale = acc.norm();
            for i in 1..=d {
                let term = self.p[i - 1] * self.e[d - i];
                scale += term.norm();
                if i % 2 == 1 {
                    acc -= term;
                } else {
                    acc += term;
                }
            }
            worst = worst.max(acc.norm() / scale.max(T::min_positive_value()));
        }
        for d in 1..self.h.len() {
            let mut acc = self.h[d] * T::from_usize_lossy(d);
            let mut scale = acc.norm();
            for i in 1..=d {
                let term = self.p[i - 1] * self.h[d - i];
                scale += term.norm();
                acc -= term;
            }
            worst = worst.max(acc.norm() / scale.max(T::min_positive_value()));
        }
        worst
    }
}

enum Factor<T> {
    Linear(Complex<T>),
    /// `(sum, product)` of an exact conjugate pair.
    Quadratic(Complex<T>, Complex<T>),
}

fn factors<T: Real>(point: &[Complex<T>]) -> Vec<Factor<T>> {
    let mut taken = vec![false; point.len()];
    let mut out = Vec::with_capacity(point.len());
    for i in 0..point.len() {
        if taken[i] {
            continue;
        }
        taken[i] = true;
        let a = point[i];
        let partner = if a.im != T::zero() {
            (i + 1..point.len()).find(|&j| !taken[j] && point[j] == a.conj())
        } else {
            None
        };
        match partner {
            Some(j) => {
                taken[j] = true;
                let b = point[j];
                out.push(Factor::Quadratic(a + b, a * b));
            }
            None => out.push(Factor::Linear(a)),
        }
    }
    out
}

fn power_sums<T: Real>(point: &[Complex<T>], max_degree: usize) -> Vec<Complex<T>> {
    let mut p = vec![Complex::zero(); max_degree];
    for &z in point {
        let mut zk = Complex::one();
        for slot in p.iter_mut() {
            zk *= z;
            *slot += zk;
        }
    }
    p
}
