use num_complex::Complex;
use serde::Serialize;

use super::{interp_coeffs, InterpMethod, RecurrenceSpec};
use crate::error::{ensure, Result};
use crate::scalar::{binomial, Real};
use crate::symfunc::{schur_hook, Hook, SymTable};

/// Largest order accepted without an explicit range override.
pub const MAX_SAFE_ORDER: usize = 16;
/// Largest time accepted without an explicit range override.
pub const MAX_SAFE_TIME: usize = 64;

/// Time, root radii and initial-value bounds of a polydisc amplitude problem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmplitudeQuery<T: Real> {
    pub t: usize,
    pub radii: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> AmplitudeQuery<T> {
    pub fn new(t: usize, radii: Vec<T>, weights: Vec<T>) -> Result<Self> {
        let n = radii.len();
        ensure(n >= 1, || "need at least one radius".into())?;
        ensure(weights.len() == n, || {
            format!("{} weights for {} radii", weights.len(), n)
        })?;
        ensure(t >= n, || format!("t = {t} must be at least n = {n}"))?;
        ensure(radii.iter().chain(&weights).all(|&x| x >= T::zero() && x.is_finite()), || {
            "radii and weights must be finite and nonnegative".into()
        })?;
        Ok(Self { t, radii, weights })
    }

    pub fn order(&self) -> usize {
        self.radii.len()
    }

    /// Whether `n` and `t` lie inside the default double-precision range.
    pub fn in_safe_range(&self) -> bool {
        self.order() <= MAX_SAFE_ORDER && self.t <= MAX_SAFE_TIME
    }
}

/// `[s_(t-n|n-1)(r), s_(t-n|n-2)(r), ..., s_(t-n|0)(r)]`, the weight of each
/// initial value in the worst-case amplitude.
pub fn hook_profile<T: Real>(radii: &[T], t: usize) -> Result<Vec<T>> {
    let n = radii.len();
    ensure(n >= 1 && t >= n, || format!("need 1 <= n <= t, got n = {n}, t = {t}"))?;
    let table = SymTable::build_real(radii, t)?;
    (1..=n)
        .map(|k| schur_hook(Hook::new(t - n, n - k), &table).map(|s| s.re))
        .collect()
}

/// `M_t(f | D_n(w)) = Σ_k w_k |ψ_t[k-1]|` for one recurrence, using the Schur
/// route so that repeated roots are handled.
pub fn amplitude_at<T: Real>(spec: &RecurrenceSpec<T>, weights: &[T], t: usize) -> Result<T> {
    let n = spec.order();
    ensure(weights.len() == n, || format!("{} weights for order {n}", weights.len()))?;
    let coeffs = interp_coeffs(spec.roots(), t, InterpMethod::Schur)?;
    Ok(coeffs.weighted_l1(weights))
}

/// Supremum of `|x_t|` over roots in `D_n(r)` and initial values in
/// `D_n(w)`: `Σ_k w_k s_(t-n|n-k)(r)`.
pub fn max_amplitude_polydisc<T: Real>(query: &AmplitudeQuery<T>) -> Result<T> {
    let profile = hook_profile(&query.radii, query.t)?;
    Ok(profile
        .iter()
        .zip(&query.weights)
        .fold(T::zero(), |acc, (&s, &w)| acc + w * s))
}

/// Roots `e^{iθ} r_k` sharing one phase.
pub fn cophase_roots<T: Real>(radii: &[T], theta: T) -> Vec<Complex<T>> {
    let phase = Complex::from_polar(T::one(), theta);
    radii.iter().map(|&r| phase * r).collect()
}

/// `C(t,n) r^{t-n} Σ_{k=1}^n C(n,k) k/(t-n+k) r^k`: the worst amplitude for
/// the `n`-fold root of modulus `r` with unit initial bounds.
pub fn repeated_root_closed_form<T: Real>(n: usize, r: T, t: usize) -> Result<T> {
    ensure(n >= 1 && t >= n, || format!("need 1 <= n <= t, got n = {n}, t = {t}"))?;
    ensure(r >= T::zero(), || "radius must be nonnegative".into())?;
    let mut sum = T::zero();
    for k in 1..=n {
        let kk = T::from_usize_lossy(k);
        sum += binomial::<T>(n, k) * kk / T::from_usize_lossy(t - n + k) * r.powi(k as i32);
    }
    Ok(binomial::<T>(t, n) * r.powi((t - n) as i32) * sum)
}

/// `C(t,n) ∫_0^r n u^{t-n} (1+u)^{n-1} du` by adaptive Simpson quadrature.
pub fn repeated_root_integral<T: Real>(n: usize, r: T, t: usize) -> Result<T> {
    ensure(n >= 1 && t >= n, || format!("need 1 <= n <= t, got n = {n}, t = {t}"))?;
    let nn = T::from_usize_lossy(n);
    let integrand = |u: T| nn * u.powi((t - n) as i32) * (T::one() + u).powi(n as i32 - 1);
    let scale = (integrand(r).abs() * r.abs()).max(T::min_positive_value());
    let integral = adaptive_simpson(&integrand, T::zero(), r, scale * T::lit(1e-14), 60);
    Ok(binomial::<T>(t, n) * integral)
}

fn adaptive_simpson<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T, tol: T, depth: usize) -> T {
    let two = T::lit(2.0);
    let six = T::lit(6.0);
    let simpson = |a: T, fa: T, b: T, fb: T| {
        let m = (a + b) / two;
        let fm = f(m);
        (m, fm, (b - a) / six * (fa + T::lit(4.0) * fm + fb))
    };

    #[allow(clippy::too_many_arguments)]
    fn rec<T: Real, F: Fn(T) -> T>(
        f: &F,
        simpson: &dyn Fn(T, T, T, T) -> (T, T, T),
        a: T,
        fa: T,
        b: T,
        fb: T,
        m: T,
        fm: T,
        whole: T,
        tol: T,
        depth: usize,
    ) -> T {
        let (lm, flm, left) = simpson(a, fa, m, fm);
        let (rm, frm, right) = simpson(m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= T::lit(15.0) * tol {
            return left + right + delta / T::lit(15.0);
        }
        let half = tol / T::lit(2.0);
        rec(f, simpson, a, fa, m, fm, lm, flm, left, half, depth - 1)
            + rec(f, simpson, m, fm, b, fb, rm, frm, right, half, depth - 1)
    }

    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(a, fa, b, fb);
    rec(f, &simpson, a, fa, b, fb, m, fm, whole, tol, depth)
}

/// The extremal initial values `x_{k-1} = -w_k e^{i(π-θ)(n-k+1)}`.
pub fn optimal_initialization<T: Real>(weights: &[T], theta: T) -> Vec<Complex<T>> {
    let n = weights.len();
    weights
        .iter()
        .enumerate()
        .map(|(idx, &w)| {
            // e^{i(π-θ)m} = (-1)^m e^{-iθm}, which stays exact at θ = 0.
            let m = n - idx;
            let sign = if m % 2 == 0 { -w } else { w };
            Complex::from_polar(sign, -theta * T::from_usize_lossy(m))
        })
        .collect()
}

/// Finite-horizon peak amplitude.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeakAmplitude<T: Real> {
    pub value: T,
    pub argmax_t: usize,
    /// Some radius exceeds one, so amplitudes grow without bound in `t`.
    pub unbounded: bool,
    /// The maximum sits at the horizon, so the true supremum may be larger.
    pub growth_detected: bool,
}

/// `max_{n <= t <= t_max} M_t(D_n(r) | D_n(w))`, by a plain scan over `t`.
pub fn peak_amplitude<T: Real>(radii: &[T], weights: &[T], t_max: usize) -> Result<PeakAmplitude<T>> {
    let n = radii.len();
    ensure(t_max >= n, || format!("t_max = {t_max} must be at least n = {n}"))?;
    let mut best = (T::neg_infinity(), n);
    for t in n..=t_max {
        let q = AmplitudeQuery::new(t, radii.to_vec(), weights.to_vec())?;
        let v = max_amplitude_polydisc(&q)?;
        if v > best.0 {
            best = (v, t);
        }
    }
    let unbounded = radii.iter().any(|&r| r > T::one());
    Ok(PeakAmplitude {
        value: best.0,
        argmax_t: best.1,
        unbounded,
        growth_detected: best.1 == t_max && t_max > n,
    })
}

/// `((3n-1)/2 · r)^{t-n} [(1+r)^n - 1]`, obtained by inducting on the
/// companion recurrence with the triangle inequality.
pub fn crude_bound<T: Real>(n: usize, r: T, t: usize) -> T {
    let factor = T::from_usize_lossy(3 * n - 1) / T::lit(2.0) * r;
    factor.powi((t - n) as i32) * ((T::one() + r).powi(n as i32) - T::one())
}

/// `C(t,n) r^{t-n} [(1+r)^n - 1]`.
pub fn refined_bound<T: Real>(n: usize, r: T, t: usize) -> T {
    binomial::<T>(t, n) * r.powi((t - n) as i32) * ((T::one() + r).powi(n as i32) - T::one())
}

/// `√n [2^n C(t,n) + 1]`, bounding `‖ψ_t‖_1` for grids in the closed unit
/// polydisc.
pub fn fourier_bound<T: Real>(n: usize, t: usize) -> T {
    T::from_usize_lossy(n).sqrt() * (T::lit(2.0).powi(n as i32) * binomial::<T>(t, n) + T::one())
}

/// Values of the exact worst amplitude and its bounds at `r · 1_n` with
/// unit initial bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundChain<T: Real> {
    pub exact: T,
    pub refined: T,
    pub crude: T,
}

impl<T: Real> BoundChain<T> {
    pub fn compute(n: usize, r: T, t: usize) -> Result<Self> {
        let q = AmplitudeQuery::new(t, vec![r; n], vec![T::one(); n])?;
        Ok(Self {
            exact: max_amplitude_polydisc(&q)?,
            refined: refined_bound(n, r, t),
            crude: crude_bound(n, r, t),
        })
    }
}

/// `Σ_k s_(t-n|k-1)(r 1_n)` from the all-ones hook-content values scaled by
/// `r^{t-n+k}`.
pub fn hook_content_amplitude<T: Real>(n: usize, r: T, t: usize) -> T {
    use crate::symfunc::schur_hook_ones;
    use num_traits::ToPrimitive;
    (1..=n).fold(T::zero(), |acc, k| {
        let count = schur_hook_ones(Hook::new(t - n, k - 1), n);
        let count = T::from_f64(count.to_f64().unwrap_or(f64::INFINITY)).expect("finite");
        acc + count * r.powi((t - n + k) as i32)
    })
}

/// `|x_t|` reached by simulating the cophase recurrence from the extremal
/// initialization.
pub fn simulated_extremal_amplitude<T: Real>(query: &AmplitudeQuery<T>, theta: T) -> Result<T> {
    let roots = cophase_roots(&query.radii, theta);
    let spec = super::char_poly_from_roots(&roots)?;
    let init = optimal_initialization(&query.weights, theta);
    let traj = super::simulate(&spec, &init, query.t)?;
    Ok(traj[query.t].norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::to_complex;

    fn q(t: usize, r: &[f64], w: &[f64]) -> AmplitudeQuery<f64> {
        AmplitudeQuery::new(t, r.to_vec(), w.to_vec()).unwrap()
    }

    #[test]
    fn instantaneous_amplitude_is_product_minus_one() {
        let (r1, r2) = (0.7, 1.9);
        let v = max_amplitude_polydisc(&q(2, &[r1, r2], &[1.0, 1.0])).unwrap();
        assert!((v - (r1 * r2 + r1 + r2)).abs() < 1e-14);
    }

    #[test]
    fn double_unit_root_at_t3() {
        assert_eq!(max_amplitude_polydisc(&q(3, &[1.0, 1.0], &[1.0, 1.0])).unwrap(), 5.0);
        assert_eq!(repeated_root_closed_form(2, 1.0, 3).unwrap(), 5.0);
    }

    #[test]
    fn first_order_is_power() {
        for t in 1..10 {
            let v = max_amplitude_polydisc(&q(t, &[0.8], &[1.0])).unwrap();
            assert!((v - 0.8f64.powi(t as i32)).abs() < 1e-15);
        }
        assert!((repeated_root_closed_form(1, 0.3f64, 2).unwrap() - 0.09).abs() < 1e-15);
    }

    #[test]
    fn closed_form_at_t_equals_n() {
        for n in 1..8 {
            let r = 0.6f64;
            let v = repeated_root_closed_form(n, r, n).unwrap();
            assert!((v - ((1.0 + r).powi(n as i32) - 1.0)).abs() < 1e-13);
        }
    }

    #[test]
    fn amplitude_at_examples() {
        let spec = super::super::char_poly_from_roots(&to_complex(&[1.0, 1.0])).unwrap();
        assert_eq!(amplitude_at(&spec, &[1.0, 1.0], 3).unwrap(), 5.0);
        let roots = vec![Complex::new(0.3, 0.4), Complex::new(-0.5, 0.1), Complex::new(0.0, -0.9)];
        let spec = super::super::char_poly_from_roots(&roots).unwrap();
        let w = [0.5, 2.0, 1.0];
        let expect: f64 = spec.coeffs()[..3].iter().zip(&w).map(|(f, w)| w * f.norm()).sum();
        assert!((amplitude_at(&spec, &w, 3).unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn optimal_init_examples() {
        let x = optimal_initialization(&[1.0, 1.0], 0.0);
        assert!((x[0] - Complex::new(-1.0, 0.0)).norm() < 1e-15);
        assert!((x[1] - Complex::new(1.0, 0.0)).norm() < 1e-15);
        let x = optimal_initialization(&[1.0], 0.0);
        assert!((x[0] - Complex::new(1.0, 0.0)).norm() < 1e-15);
        let x = optimal_initialization(&[1.0, 1.0], std::f64::consts::PI);
        assert!((x[0] - Complex::new(-1.0, 0.0)).norm() < 1e-15);
        assert!((x[1] - Complex::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn peak_examples() {
        let p = peak_amplitude(&[0.5], &[1.0], 10).unwrap();
        assert_eq!((p.value, p.argmax_t, p.unbounded), (0.5, 1, false));
        let p = peak_amplitude(&[1.0, 1.0], &[1.0, 1.0], 6).unwrap();
        assert_eq!(p.argmax_t, 6);
        assert!(p.growth_detected && !p.unbounded);
        assert!(peak_amplitude(&[1.5, 0.2], &[1.0, 1.0], 4).unwrap().unbounded);
    }

    #[test]
    fn bound_examples() {
        assert_eq!(crude_bound(2, 1.0, 3), 7.5);
        assert_eq!(refined_bound(2, 1.0, 3), 9.0);
        assert!((fourier_bound::<f64>(2, 3) - 2f64.sqrt() * 13.0).abs() < 1e-12);
        assert!((fourier_bound::<f64>(2, 3) - 18.3848).abs() < 1e-4);
    }

    #[test]
    fn quadrature_matches_closed_form() {
        for &r in &[0.25f64, 1.0, 2.0] {
            let a = repeated_root_closed_form(5, r, 17).unwrap();
            let b = repeated_root_integral(5, r, 17).unwrap();
            assert!((a - b).abs() <= 1e-10 * a, "{a} {b}");
        }
    }

    #[test]
    fn query_validation() {
        assert!(AmplitudeQuery::new(1, vec![1.0, 1.0], vec![1.0, 1.0]).is_err());
        assert!(AmplitudeQuery::new(3, vec![1.0, -1.0], vec![1.0, 1.0]).is_err());
        assert!(AmplitudeQuery::new(3, vec![1.0], vec![1.0, 1.0]).is_err());
        assert!(AmplitudeQuery::new(3, Vec::<f64>::new(), vec![]).is_err());
    }
}
