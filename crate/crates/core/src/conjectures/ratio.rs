use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::amplitude::char_poly_from_roots;
use crate::error::{ensure, Error, Result};
use crate::scalar::{binomial, binomial_exact, Real};
use crate::symfunc::{schur_hook, Hook, SymTable};

/// Denominators `|e_{n-k}|` below this are treated as singular.
pub const SINGULAR_DENOMINATOR: f64 = 1e-12;

fn check_indices(t: usize, n: usize, k: usize) -> Result<()> {
    ensure(n >= 1, || "need at least one node".into())?;
    ensure(k < n, || format!("k = {k} must be below n = {n}"))?;
    ensure(t >= n, || format!("t = {t} must be at least n = {n}"))
}

/// `Q_{t,n,k}(ζ) = Σ_{d=0}^{t-n} (-1)^d C(t,n+d) s_(d|n-k-1)(ζ) / (C(t,n) e_{n-k}(ζ))`.
///
/// The `d = 0` term is `e_{n-k}/e_{n-k}` and is taken to be exactly 1.
pub fn q_eval<T: Real>(t: usize, n: usize, k: usize, zeta: &[Complex<T>]) -> Result<Complex<T>> {
    check_indices(t, n, k)?;
    ensure(zeta.len() == n, || format!("{} points for n = {n}", zeta.len()))?;
    let table = SymTable::build(zeta, t)?;
    let denom = table.e((n - k) as isize);
    if denom.norm() < T::lit(SINGULAR_DENOMINATOR) {
        return Err(Error::SingularDenominator { magnitude: denom.norm().to_f64_lossy() });
    }
    let scale = binomial::<T>(t, n);
    let mut sum = Complex::<T>::zero();
    for d in (1..=t - n).rev() {
        let s = schur_hook(Hook::new(d, n - k - 1), &table)?;
        let term = s * (binomial::<T>(t, n + d) / scale);
        sum = if d % 2 == 0 { sum + term } else { sum - term };
    }
    Ok(Complex::<T>::one() + sum / denom)
}

/// `(1/k!) d^k/dz^k [z^t - ψ_t(z | nodes)]` through the Schur sum
/// `(-1)^{n-k} Σ_d C(t,n+d) z^{t-n-d} s_(d|n-k-1)(nodes - z 1_n)`.
///
/// The sum alternates and its terms outgrow the result by roughly `3^t`, so
/// it is evaluated exactly in rational arithmetic on the binary input values
/// and rounded once. [`residual_taylor`] gives the same quantity in floating
/// point without cancellation.
pub fn error_derivative<T: Real>(
    t: usize,
    n: usize,
    k: usize,
    z: Complex<T>,
    nodes: &[Complex<T>],
) -> Result<Complex<T>> {
    check_indices(t, n, k)?;
    ensure(nodes.len() == n, || format!("{} nodes for n = {n}", nodes.len()))?;
    let z = ExactC::from_complex(z)?;
    let shifted = nodes
        .iter()
        .map(|&x| ExactC::from_complex(x).map(|x| x.sub(&z)))
        .collect::<Result<Vec<_>>>()?;
    let top = t - n;
    let mut e = vec![ExactC::zero(); n + 1];
    e[0] = ExactC::one();
    for (j, x) in shifted.iter().enumerate() {
        for d in (1..=j + 1).rev() {
            e[d] = e[d].add(&x.mul(&e[d - 1]));
        }
    }
    let mut h = vec![ExactC::zero(); top + 1];
    h[0] = ExactC::one();
    for x in &shifted {
        for d in 1..=top {
            h[d] = h[d].add(&x.mul(&h[d - 1]));
        }
    }
    let b = n - k - 1;
    let mut z_pow = vec![ExactC::one(); top + 1];
    for i in 1..=top {
        z_pow[i] = z_pow[i - 1].mul(&z);
    }
    let mut sum = ExactC::zero();
    for d in 0..=top {
        // s_(d|b) = Σ_j (-1)^j h_{d-j} e_{b+j+1}
        let mut s = ExactC::zero();
        for j in 0..=d.min(n - b - 1) {
            let term = h[d - j].mul(&e[b + j + 1]);
            s = if j % 2 == 0 { s.add(&term) } else { s.sub(&term) };
        }
        let c = BigRational::from_integer(BigInt::from(binomial_exact(t as u64, (n + d) as u64)));
        sum = sum.add(&s.mul(&z_pow[top - d]).scale(&c));
    }
    let v = sum.to_complex::<T>();
    Ok(if (n - k) % 2 == 0 { v } else { -v })
}

#[derive(Clone)]
struct ExactC {
    re: BigRational,
    im: BigRational,
}

impl ExactC {
    fn zero() -> Self {
        Self { re: BigRational::zero(), im: BigRational::zero() }
    }

    fn one() -> Self {
        Self { re: BigRational::one(), im: BigRational::zero() }
    }

    fn from_complex<T: Real>(z: Complex<T>) -> Result<Self> {
        let conv = |x: T| {
            BigRational::from_float(x.to_f64_lossy())
                .ok_or_else(|| Error::Precondition(format!("non-finite input {}", x.to_f64_lossy())))
        };
        Ok(Self { re: conv(z.re)?, im: conv(z.im)? })
    }

    fn add(&self, o: &Self) -> Self {
        Self { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    fn sub(&self, o: &Self) -> Self {
        Self { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    fn mul(&self, o: &Self) -> Self {
        Self {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn scale(&self, c: &BigRational) -> Self {
        Self { re: &self.re * c, im: &self.im * c }
    }

    fn to_complex<T: Real>(&self) -> Complex<T> {
        let f = |x: &BigRational| T::lit(x.to_f64().unwrap_or(f64::NAN));
        Complex::new(f(&self.re), f(&self.im))
    }
}

/// `p^{(r)}(z) / r!` for `r = 0..=k`, coefficients listed from degree 0.
pub fn taylor_coeffs<T: Real>(coeffs: &[Complex<T>], z: Complex<T>, k: usize) -> Vec<Complex<T>> {
    // Repeated synthetic division by (x - z).
    let mut work = coeffs.to_vec();
    let mut out = Vec::with_capacity(k + 1);
    for _ in 0..=k {
        if work.is_empty() {
            out.push(Complex::zero());
            continue;
        }
        let mut acc = Complex::zero();
        let mut quotient = vec![Complex::zero(); work.len() - 1];
        for i in (0..work.len()).rev() {
            acc = acc * z + work[i];
            if i > 0 {
                quotient[i - 1] = acc;
            }
        }
        out.push(acc);
        work = quotient;
    }
    out
}

/// Taylor data of the interpolation residuals `R_m(x) = x^m - ψ_m(x | nodes)`
/// at a fixed point `z`, stepped through `m = n, n+1, ...`.
///
/// Uses `R_m(x) = f(x) h_{m-n}(nodes, x)` with `f` the node polynomial and
/// `h_j(nodes, x) = h_j(nodes) + x h_{j-1}(nodes, x)`, so no alternating sums
/// appear.
pub struct ResidualWalker<T: Real> {
    f_taylor: Vec<Complex<T>>,
    h_nodes: Vec<Complex<T>>,
    /// Taylor coefficients at `z` of `h_j(nodes, x)` for the current `j`.
    g_taylor: Vec<Complex<T>>,
    z: Complex<T>,
    j: usize,
    n: usize,
}

impl<T: Real> ResidualWalker<T> {
    pub fn new(nodes: &[Complex<T>], k: usize, z: Complex<T>, m_max: usize) -> Result<Self> {
        let n = nodes.len();
        ensure(n >= 1 && m_max >= n, || format!("need 1 <= n <= m_max, got n = {n}, m_max = {m_max}"))?;
        let spec = char_poly_from_roots(nodes)?;
        let table = SymTable::build(nodes, m_max - n)?;
        let mut g_taylor = vec![Complex::zero(); k + 1];
        g_taylor[0] = Complex::one();
        Ok(Self {
            f_taylor: taylor_coeffs(spec.coeffs(), z, k),
            h_nodes: table.h_values().to_vec(),
            g_taylor,
            z,
            j: 0,
            n,
        })
    }

    /// Current `m`.
    pub fn m(&self) -> usize {
        self.n + self.j
    }

    /// `R_m^{(k)}(z) / k!` at the current `m`.
    pub fn value(&self) -> Complex<T> {
        let k = self.f_taylor.len() - 1;
        (0..=k).fold(Complex::zero(), |acc, i| acc + self.f_taylor[i] * self.g_taylor[k - i])
    }

    /// `f^{(k)}(z) / k!`.
    pub fn node_poly_derivative(&self) -> Complex<T> {
        *self.f_taylor.last().expect("k + 1 coefficients")
    }

    /// Moves to `m + 1`. Fails past the `m_max` given at construction.
    pub fn advance(&mut self) -> Result<()> {
        let next = self.j + 1;
        let h = *self.h_nodes.get(next).ok_or(Error::TableTooShort {
            needed: next,
            available: self.h_nodes.len().saturating_sub(1),
        })?;
        for r in (0..self.g_taylor.len()).rev() {
            let lower = if r == 0 { h } else { self.g_taylor[r - 1] };
            self.g_taylor[r] = self.z * self.g_taylor[r] + lower;
        }
        self.j = next;
        Ok(())
    }
}

/// `R_t^{(k)}(z) / k!` by [`ResidualWalker`].
pub fn residual_taylor<T: Real>(
    t: usize,
    k: usize,
    z: Complex<T>,
    nodes: &[Complex<T>],
) -> Result<Complex<T>> {
    check_indices(t, nodes.len(), k)?;
    let mut walker = ResidualWalker::new(nodes, k, z, t)?;
    while walker.m() < t {
        walker.advance()?;
    }
    Ok(walker.value())
}

/// `Q_{t,n,k}(ζ)` as the residual ratio at `z = 1` for nodes `1_n - ζ`.
pub fn q_via_residual<T: Real>(t: usize, n: usize, k: usize, zeta: &[Complex<T>]) -> Result<Complex<T>> {
    check_indices(t, n, k)?;
    ensure(zeta.len() == n, || format!("{} points for n = {n}", zeta.len()))?;
    let nodes: Vec<Complex<T>> = zeta.iter().map(|&x| Complex::<T>::one() - x).collect();
    let mut walker = ResidualWalker::new(&nodes, k, Complex::one(), t)?;
    let denom = walker.node_poly_derivative();
    if denom.norm() < T::lit(SINGULAR_DENOMINATOR) {
        return Err(Error::SingularDenominator { magnitude: denom.norm().to_f64_lossy() });
    }
    while walker.m() < t {
        walker.advance()?;
    }
    Ok(walker.value() / (denom * binomial::<T>(t, n)))
}

/// `s_(t-n|n-k-1)(z) / (C(t,n) e_{n-k}(z))`, the quantity bounded by one in
/// the `z = 0` form of the pointwise conjecture.
pub fn schur_elementary_ratio<T: Real>(
    t: usize,
    n: usize,
    k: usize,
    nodes: &[Complex<T>],
) -> Result<Complex<T>> {
    check_indices(t, n, k)?;
    ensure(nodes.len() == n, || format!("{} nodes for n = {n}", nodes.len()))?;
    let table = SymTable::build(nodes, t)?;
    let denom = table.e((n - k) as isize);
    if denom.norm() < T::lit(SINGULAR_DENOMINATOR) {
        return Err(Error::SingularDenominator { magnitude: denom.norm().to_f64_lossy() });
    }
    let s = schur_hook(Hook::new(t - n, n - k - 1), &table)?;
    Ok(s / (denom * binomial::<T>(t, n)))
}

/// `X = e_1(ζ) - e_{n-k+1}(ζ)/e_{n-k}(ζ)` and whether `0 <= X <= 2n+2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = ""))]
pub struct SpecialCaseVerdict<T: Real> {
    pub value: Complex<T>,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

/// The `t = n + 1` case of the pointwise bound, valid when `n - k` is even.
pub fn special_case_np1<T: Real>(n: usize, k: usize, zeta: &[Complex<T>]) -> Result<SpecialCaseVerdict<T>> {
    check_indices(n + 1, n, k)?;
    ensure((n - k) % 2 == 0, || format!("n - k = {} must be even", n - k))?;
    ensure(zeta.len() == n, || format!("{} points for n = {n}", zeta.len()))?;
    let table = SymTable::build(zeta, 0)?;
    let denom = table.e((n - k) as isize);
    if denom.norm() < T::lit(SINGULAR_DENOMINATOR) {
        return Err(Error::SingularDenominator { magnitude: denom.norm().to_f64_lossy() });
    }
    let value = table.e(1) - table.e((n - k + 1) as isize) / denom;
    let slack = T::lit(1e-12) * (T::one() + value.norm());
    Ok(SpecialCaseVerdict {
        value,
        lower_ok: value.re >= -slack,
        upper_ok: value.re <= T::from_usize_lossy(2 * n + 2) + slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplitude::{interp_coeffs, InterpMethod};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn q_examples() {
        let one = [c(1.0, 0.0), c(1.0, 0.0)];
        assert_eq!(q_eval(2, 2, 0, &one).unwrap(), c(1.0, 0.0));
        assert!((q_eval(3, 2, 0, &one).unwrap() - c(1.0 / 3.0, 0.0)).norm() < 1e-15);
        let two = [c(2.0, 0.0), c(2.0, 0.0)];
        assert!((q_eval(3, 2, 0, &two).unwrap() - c(-1.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!(matches!(
            q_eval(3, 2, 0, &[c(0.0, 0.0), c(1.0, 0.0)]),
            Err(Error::SingularDenominator { .. })
        ));
    }

    #[test]
    fn q_routes_agree() {
        let zeta = [c(1.3, 0.4), c(1.3, -0.4), c(0.6, 0.0), c(0.6, 0.0)];
        for t in 4..12 {
            for k in 0..4 {
                let a = q_eval(t, 4, k, &zeta).unwrap();
                let b = q_via_residual(t, 4, k, &zeta).unwrap();
                assert!((a - b).norm() < 1e-10 * a.norm().max(1.0), "t={t} k={k} {a} {b}");
            }
        }
    }

    #[test]
    fn error_derivative_examples() {
        let (a, z) = (c(0.3, 0.0), c(-0.7, 0.2));
        let v = error_derivative(2, 1, 0, z, &[a]).unwrap();
        assert!((v - (z - a) * (z + a)).norm() < 1e-15);
        let nodes = [c(0.2, 0.5), c(0.2, -0.5), c(-0.4, 0.0)];
        let z = c(0.35, 0.0);
        for k in 0..3 {
            let f = char_poly_from_roots(&nodes).unwrap();
            let expect = taylor_coeffs(f.coeffs(), z, k)[k];
            assert!((error_derivative(3, 3, k, z, &nodes).unwrap() - expect).norm() < 1e-14);
        }
        for &x in &nodes {
            assert!(error_derivative(7, 3, 0, x, &nodes).unwrap().norm() < 1e-13);
        }
    }

    #[test]
    fn residual_routes_agree() {
        let nodes = [c(0.2, 0.5), c(0.2, -0.5), c(-0.4, 0.1), c(-0.4, -0.1)];
        for t in 4..20 {
            let psi = interp_coeffs(&nodes, t, InterpMethod::Recurrence).unwrap().psi;
            let mut poly: Vec<Complex<f64>> = vec![c(0.0, 0.0); t + 1];
            poly[t] = c(1.0, 0.0);
            for (i, p) in psi.iter().enumerate() {
                poly[i] -= p;
            }
            for k in 0..4 {
                for &z in &[c(-1.0, 0.0), c(0.1, 0.0), c(0.9, 0.0)] {
                    let direct = taylor_coeffs(&poly, z, k)[k];
                    let walked = residual_taylor(t, k, z, &nodes).unwrap();
                    let schur = error_derivative(t, 4, k, z, &nodes).unwrap();
                    let scale = direct.norm().max(1.0);
                    assert!((direct - walked).norm() < 1e-11 * scale);
                    assert!((direct - schur).norm() < 1e-9 * scale);
                }
            }
        }
    }

    #[test]
    fn taylor_of_cubic() {
        // p(x) = 1 + 2x + 3x^2 + 4x^3 at z = 2.
        let p = [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)];
        let t = taylor_coeffs(&p, c(2.0, 0.0), 4);
        let expect = [49.0, 62.0, 27.0, 4.0, 0.0];
        for (a, b) in t.iter().zip(expect) {
            assert_eq!(a.re, b);
        }
    }

    #[test]
    fn z0_ratio_at_ones() {
        for n in 2..6 {
            for k in 0..n {
                for t in n..n + 6 {
                    let r = schur_elementary_ratio(t, n, k, &vec![c(1.0, 0.0); n]).unwrap();
                    let expect = (n - k) as f64 / (t - k) as f64;
                    assert!((r.re - expect).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn special_case_examples() {
        let v = special_case_np1(2, 0, &[c(2.0, 0.0), c(2.0, 0.0)]).unwrap();
        assert_eq!(v.value, c(4.0, 0.0));
        assert!(v.lower_ok && v.upper_ok);
        let v = special_case_np1(2, 0, &[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(v.value, c(2.0, 0.0));
        assert!(special_case_np1(3, 0, &[c(1.0, 0.0); 3]).is_err());
    }
}
