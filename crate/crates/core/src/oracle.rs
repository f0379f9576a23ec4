//! Brute-force checks of the cophase-optimality theorem and of the
//! agreement between interpolation routes.

use num_complex::Complex;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::amplitude::{interp_coeffs, max_amplitude_polydisc, AmplitudeQuery, InterpMethod, NEAR_SINGULAR_DISTANCE};
use crate::error::{ensure, Error, Result};
use crate::scalar::{min_pairwise_distance, Real};

/// Largest order the exhaustive search accepts.
pub const MAX_BRUTE_ORDER: usize = 4;
/// Largest time the exhaustive search accepts.
pub const MAX_BRUTE_TIME: usize = 12;
const MAX_GRID_CELLS: u64 = 1 << 32;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = ""))]
pub struct OracleConfig<T: Real> {
    /// Number of equispaced phases per root, starting at 0.
    pub phase_grid: usize,
    /// Number of radial steps per root; the radii visited are
    /// `r_j · i / radial_grid` for `i = 0..=radial_grid`.
    pub radial_grid: usize,
    pub random_trials: usize,
    pub seed: u64,
    pub tolerance: T,
}

impl<T: Real> Default for OracleConfig<T> {
    fn default() -> Self {
        Self { phase_grid: 64, radial_grid: 2, random_trials: 10_000, seed: 0, tolerance: T::lit(1e-9) }
    }
}

impl<T: Real> OracleConfig<T> {
    pub fn validate(&self) -> Result<()> {
        ensure(self.phase_grid >= 1 && self.radial_grid >= 1, || {
            "grid resolutions must be at least 1".into()
        })?;
        ensure(self.tolerance > T::zero(), || "tolerance must be positive".into())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = ""))]
pub struct OracleResult<T: Real> {
    pub brute_max: T,
    pub closed_form: T,
    /// `closed_form - brute_max`.
    pub gap: T,
    pub argmax_roots: Vec<Complex<T>>,
    /// Largest circular distance between the phases of the nonzero argmax roots.
    pub cophase_distance: T,
}

/// Outcome of [`verify_cophase`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = ""))]
pub struct CophaseVerdict<T: Real> {
    pub holds: bool,
    pub grid_slack: T,
    #[serde(flatten)]
    pub result: OracleResult<T>,
}

/// `Σ_k w_k |ψ_t[k-1]|` for small root sets, the supremum over initial
/// values in `D_n(w)`.
fn objective<T: Real>(roots: &[Complex<T>], weights: &[T], t: usize) -> T {
    let n = roots.len();
    let mut f = [Complex::<T>::zero(); MAX_BRUTE_ORDER + 1];
    f[0] = Complex::new(T::one(), T::zero());
    // Build the monic polynomial with f[j] the coefficient of z^j as the
    // loop proceeds, then shift into place.
    let mut poly = [Complex::<T>::zero(); MAX_BRUTE_ORDER + 1];
    poly[0] = Complex::new(T::one(), T::zero());
    for (deg, &z) in roots.iter().enumerate() {
        for j in (1..=deg + 1).rev() {
            poly[j] = poly[j - 1] - z * poly[j];
        }
        poly[0] = -z * poly[0];
    }
    f[..=n].copy_from_slice(&poly[..=n]);

    let mut psi = [Complex::<T>::zero(); MAX_BRUTE_ORDER];
    psi[n - 1] = Complex::new(T::one(), T::zero());
    for _ in (n - 1)..t {
        let top = psi[n - 1];
        for j in (1..n).rev() {
            psi[j] = psi[j - 1] - top * f[j];
        }
        psi[0] = -top * f[0];
    }
    psi[..n].iter().zip(weights).fold(T::zero(), |acc, (c, &w)| acc + w * c.norm())
}

fn check_caps<T: Real>(t: usize, radii: &[T], weights: &[T]) -> Result<()> {
    let n = radii.len();
    if n > MAX_BRUTE_ORDER || t > MAX_BRUTE_TIME {
        return Err(Error::CapExceeded(format!(
            "brute force needs n <= {MAX_BRUTE_ORDER} and t <= {MAX_BRUTE_TIME}, got n = {n}, t = {t}"
        )));
    }
    AmplitudeQuery::new(t, radii.to_vec(), weights.to_vec()).map(|_| ())
}

struct Grid<'a, T: Real> {
    radii: &'a [T],
    phase: usize,
    radial: usize,
}

impl<T: Real> Grid<'_, T> {
    /// Cells per root other than the first, whose phase is pinned at 0 since
    /// the objective is invariant under a common rotation of all roots.
    fn cells(&self) -> Result<u64> {
        let per_root = (self.phase as u64) * (self.radial as u64 + 1);
        let mut total = self.radial as u64 + 1;
        for _ in 1..self.radii.len() {
            total = total
                .checked_mul(per_root)
                .filter(|&c| c <= MAX_GRID_CELLS)
                .ok_or_else(|| Error::CapExceeded("phase/radial grid too large".into()))?;
        }
        Ok(total)
    }

    /// Decodes a cell index. Phase digits are most significant, so index
    /// order is lexicographic order of the phase vector.
    fn roots(&self, mut idx: u64, out: &mut [Complex<T>]) {
        let n = self.radii.len();
        let rad_base = self.radial as u64 + 1;
        let phase_base = self.phase as u64;
        let mut radial_digits = [0u64; MAX_BRUTE_ORDER];
        for d in radial_digits[..n].iter_mut().rev() {
            *d = idx % rad_base;
            idx /= rad_base;
        }
        let mut phase_digits = [0u64; MAX_BRUTE_ORDER];
        for d in phase_digits[1..n].iter_mut().rev() {
            *d = idx % phase_base;
            idx /= phase_base;
        }
        let step = T::TAU() / T::from_usize_lossy(self.phase);
        for j in 0..n {
            let rho = self.radii[j] * T::from_u64(radial_digits[j]).unwrap()
                / T::from_usize_lossy(self.radial);
            let theta = step * T::from_u64(phase_digits[j]).unwrap();
            out[j] = Complex::from_polar(rho, theta);
        }
    }
}

fn better<T: Real>(a: (T, u64), b: (T, u64)) -> (T, u64) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

fn random_roots<T: Real>(rng: &mut ChaCha8Rng, radii: &[T]) -> Vec<Complex<T>> {
    radii
        .iter()
        .map(|&r| {
            let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let rho = if rng.gen_bool(0.5) { 1.0 } else { rng.gen::<f64>().sqrt() };
            Complex::from_polar(r * T::lit(rho), T::lit(theta))
        })
        .collect()
}

/// Largest circular distance between phases of roots with nonzero modulus.
pub fn cophase_distance<T: Real>(roots: &[Complex<T>]) -> T {
    let scale = roots.iter().fold(T::zero(), |m, z| m.max(z.norm()));
    let phases: Vec<T> = roots
        .iter()
        .filter(|z| z.norm() > scale * T::lit(1e-12))
        .map(|z| z.arg())
        .collect();
    let mut worst = T::zero();
    for (i, &a) in phases.iter().enumerate() {
        for &b in &phases[i + 1..] {
            let d = (a - b).abs() % T::TAU();
            worst = worst.max(d.min(T::TAU() - d));
        }
    }
    worst
}

/// Maximizes `Σ_k w_k |ψ_t[k-1]|` over roots on a phase × radius grid plus
/// seeded random samples. The sup over initial values is taken exactly.
pub fn brute_force_max<T: Real>(
    t: usize,
    radii: &[T],
    weights: &[T],
    config: &OracleConfig<T>,
) -> Result<OracleResult<T>> {
    check_caps(t, radii, weights)?;
    config.validate()?;
    let n = radii.len();
    let grid = Grid { radii, phase: config.phase_grid, radial: config.radial_grid };
    let cells = grid.cells()?;

    let seed_cell = (T::neg_infinity(), u64::MAX);
    let best = (0..cells)
        .into_par_iter()
        .fold(
            || (seed_cell, [Complex::<T>::zero(); MAX_BRUTE_ORDER]),
            |(acc, mut buf), idx| {
                grid.roots(idx, &mut buf[..n]);
                let v = objective(&buf[..n], weights, t);
                (better(acc, (v, idx)), buf)
            },
        )
        .map(|(acc, _)| acc)
        .reduce(|| seed_cell, better);

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let samples: Vec<Vec<Complex<T>>> =
        (0..config.random_trials).map(|_| random_roots(&mut rng, radii)).collect();
    let sampled = samples
        .par_iter()
        .enumerate()
        .map(|(i, z)| (objective(z, weights, t), cells + i as u64))
        .reduce(|| seed_cell, better);
    let (brute_max, idx) = better(best, sampled);

    let argmax_roots = if idx < cells {
        let mut buf = vec![Complex::zero(); n];
        grid.roots(idx, &mut buf);
        buf
    } else {
        samples[(idx - cells) as usize].clone()
    };
    let closed_form =
        max_amplitude_polydisc(&AmplitudeQuery::new(t, radii.to_vec(), weights.to_vec())?)?;
    Ok(OracleResult {
        brute_max,
        closed_form,
        gap: closed_form - brute_max,
        cophase_distance: cophase_distance(&argmax_roots),
        argmax_roots,
    })
}

/// How far the grid optimum may fall short of the true maximum: for each
/// coordinate, the objective drop when moving that coordinate of the
/// cophase maximizer by half a grid step.
pub fn grid_slack<T: Real>(t: usize, radii: &[T], weights: &[T], config: &OracleConfig<T>) -> T {
    let n = radii.len();
    let base: Vec<Complex<T>> = radii.iter().map(|&r| Complex::new(r, T::zero())).collect();
    let f0 = objective(&base, weights, t);
    let half_phase = T::PI() / T::from_usize_lossy(config.phase_grid);
    let two = T::lit(2.0);
    let mut slack = T::zero();
    let mut probe = base.clone();
    for j in 0..n {
        let mut worst = T::zero();
        for sign in [T::one(), -T::one()] {
            probe[j] = base[j] * Complex::from_polar(T::one(), sign * half_phase);
            worst = worst.max((f0 - objective(&probe, weights, t)).abs());
        }
        let half_rad = radii[j] / (two * T::from_usize_lossy(config.radial_grid));
        probe[j] = Complex::new(radii[j] - half_rad, T::zero());
        worst = worst.max((f0 - objective(&probe, weights, t)).abs());
        probe[j] = base[j];
        slack += worst;
    }
    slack.max(config.tolerance)
}

/// Checks that the closed form bounds the brute-force maximum and that the
/// brute-force maximum comes within grid resolution of it.
pub fn verify_cophase<T: Real>(
    t: usize,
    radii: &[T],
    weights: &[T],
    config: &OracleConfig<T>,
) -> Result<CophaseVerdict<T>> {
    let result = brute_force_max(t, radii, weights, config)?;
    let slack = grid_slack(t, radii, weights, config);
    let holds = result.gap >= -config.tolerance && result.gap <= slack;
    Ok(CophaseVerdict { holds, grid_slack: slack, result })
}

/// Largest deviation between the interpolation routes, relative to
/// `max(1, ‖ψ_t‖_∞)`. The Vandermonde route is left out on near-singular grids.
pub fn cross_check_interp<T: Real>(roots: &[Complex<T>], t: usize) -> Result<T> {
    let mut routes = vec![InterpMethod::Recurrence, InterpMethod::Schur];
    if min_pairwise_distance(roots) >= T::lit(NEAR_SINGULAR_DISTANCE) {
        routes.push(InterpMethod::Vandermonde);
    }
    let all = routes
        .into_iter()
        .map(|m| interp_coeffs(roots, t, m))
        .collect::<Result<Vec<_>>>()?;
    let scale = all
        .iter()
        .flat_map(|c| c.psi.iter())
        .fold(T::one(), |m, c| m.max(c.norm()));
    let mut worst = T::zero();
    for (i, a) in all.iter().enumerate() {
        for b in &all[i + 1..] {
            for (x, y) in a.psi.iter().zip(&b.psi) {
                worst = worst.max((x - y).norm() / scale);
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplitude::interp_coeffs;

    fn cfg(m: usize) -> OracleConfig<f64> {
        OracleConfig { phase_grid: m, radial_grid: 2, random_trials: 200, seed: 7, tolerance: 1e-9 }
    }

    #[test]
    fn objective_matches_interp() {
        let roots = vec![Complex::new(0.3, 0.4), Complex::new(-0.5, 0.1), Complex::new(0.0, -0.9)];
        let w = [1.0f64, 0.5, 2.0];
        for t in 3..10 {
            let expect = interp_coeffs(&roots, t, InterpMethod::Schur).unwrap().weighted_l1(&w);
            assert!((objective(&roots, &w, t) - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn spec_examples() {
        let r = brute_force_max(2, &[1.0, 1.0], &[1.0, 1.0], &cfg(64)).unwrap();
        assert!((r.brute_max - 3.0).abs() < 1e-12 && r.gap.abs() <= 1e-6);
        let r = brute_force_max(3, &[1.0, 1.0], &[1.0, 1.0], &cfg(64)).unwrap();
        assert!((r.brute_max - 5.0).abs() < 1e-12);
        assert!(r.cophase_distance < 1e-12);
        let grid_only = OracleConfig { random_trials: 0, ..cfg(8) };
        let r = brute_force_max(2, &[0.5], &[1.0], &grid_only).unwrap();
        assert_eq!(r.brute_max, 0.25);
        assert_eq!(r.argmax_roots, vec![Complex::new(0.5, 0.0)]);
    }

    #[test]
    fn verify_examples() {
        assert!(verify_cophase(4, &[1.0, 0.7], &[1.0, 1.0], &cfg(96)).unwrap().holds);
        assert!(verify_cophase(2, &[1.0, 1.0], &[0.0, 1.0], &cfg(32)).unwrap().holds);
        assert!(verify_cophase(5, &[0.9], &[2.0], &cfg(4)).unwrap().holds);
    }

    #[test]
    fn caps_enforced() {
        let c = cfg(4);
        assert!(matches!(
            brute_force_max(6, &[1.0; 5], &[1.0; 5], &c),
            Err(Error::CapExceeded(_))
        ));
        assert!(matches!(brute_force_max(13, &[1.0; 2], &[1.0; 2], &c), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn deterministic() {
        let c = cfg(16);
        let a = brute_force_max(5, &[0.8, 0.6, 0.9], &[1.0, 0.3, 0.7], &c).unwrap();
        let b = brute_force_max(5, &[0.8, 0.6, 0.9], &[1.0, 0.3, 0.7], &c).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn cross_check_examples() {
        let roots = vec![Complex::new(0.3, 0.0), Complex::new(0.0, -0.5)];
        assert!(cross_check_interp(&roots, 7).unwrap() <= 1e-7);
        assert!(cross_check_interp(&[Complex::new(0.4, 0.2)], 9).unwrap() <= 1e-15);
        let near = vec![Complex::new(0.5, 0.0), Complex::new(0.5 + 1e-14, 0.0)];
        assert!(cross_check_interp(&near, 6).unwrap() <= 1e-9);
    }

    #[test]
    fn cophase_distance_wraps() {
        let z = vec![Complex::from_polar(1.0, 3.1), Complex::from_polar(1.0, -3.1)];
        assert!((cophase_distance(&z) - (std::f64::consts::TAU - 6.2f64)).abs() < 1e-12);
        let z = vec![Complex::new(0.0, 0.0), Complex::new(0.0, 1.0)];
        assert_eq!(cophase_distance(&z), 0.0);
    }
}
