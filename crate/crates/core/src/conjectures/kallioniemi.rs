use std::io::Write;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{imag_ratio, ResidualWalker, SelfConjugateGrid};
use crate::error::{ensure, Result};
use crate::scalar::{binomial, Real};

/// Equispaced points on `[-1, 1]` used by default.
pub const DEFAULT_Z_POINTS: usize = 2001;
/// Relative tolerance of the membership test.
pub const MEMBERSHIP_RTOL: f64 = 1e-9;
/// Absolute floor of the membership test, for points near zeros.
pub const MEMBERSHIP_ATOL: f64 = 1e-12;

/// Default largest monomial degree `4n + 40`.
pub fn default_m_max(n: usize) -> usize {
    4 * n + 40
}

/// `points` equispaced values covering `[-1, 1]` with both endpoints.
pub fn unit_interval_grid<T: Real>(points: usize) -> Vec<T> {
    if points == 1 {
        return vec![T::zero()];
    }
    let last = T::from_usize_lossy(points - 1);
    (0..points)
        .map(|i| T::from_usize_lossy(2 * i) / last - T::one())
        .collect()
}

/// Pointwise comparison, over `z` in `[-1, 1]`, of the worst normalized
/// monomial `((m-n)!/m!) x^m` against the `m = n` term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = ""))]
pub struct KallioniemiEstimate<T: Real> {
    pub grid: SelfConjugateGrid<T>,
    pub k: usize,
    pub z_samples: Vec<T>,
    pub membership: Vec<bool>,
    /// `sup_m ((m-n)!/m!) |R_m^{(k)}(z)|` per sample.
    pub sup_values: Vec<T>,
    /// `|f^{(k)}(z)| / n!` per sample.
    pub monomial_values: Vec<T>,
    /// Largest `m` considered.
    pub m_truncation: usize,
    /// Degree at which the supremum was reached, per sample.
    pub argmax_m: Vec<usize>,
    /// Samples whose running supremum still grew in the last quarter of the
    /// `m` range.
    pub late_growth: usize,
    pub max_imag: T,
}

impl<T: Real> KallioniemiEstimate<T> {
    pub fn member_fraction(&self) -> f64 {
        let hits = self.membership.iter().filter(|&&b| b).count();
        hits as f64 / self.membership.len().max(1) as f64
    }

    pub fn all_members(&self) -> bool {
        self.membership.iter().all(|&b| b)
    }

    /// CSV with columns `z,member,sup,monomial,argmax_m`.
    pub fn write_membership_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["z", "member", "sup", "monomial", "argmax_m"])?;
        for i in 0..self.z_samples.len() {
            w.write_record([
                self.z_samples[i].to_string(),
                self.membership[i].to_string(),
                self.sup_values[i].to_string(),
                self.monomial_values[i].to_string(),
                self.argmax_m[i].to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

struct PointSweep<T> {
    sup: T,
    base: T,
    argmax: usize,
    late_growth: bool,
    max_imag: T,
}

fn sweep<T: Real>(nodes: &[Complex<T>], k: usize, z: T, m_max: usize) -> Result<PointSweep<T>> {
    let n = nodes.len();
    let mut walker = ResidualWalker::new(nodes, k, Complex::new(z, T::zero()), m_max)?;
    // ((m-n)!/m!) k!, starting at m = n.
    let mut factor = (1..=k).fold(T::one(), |acc, i| acc * T::from_usize_lossy(i))
        / (1..=n).fold(T::one(), |acc, i| acc * T::from_usize_lossy(i));
    let late_start = m_max - (m_max - n) / 4;
    let first = walker.value();
    let base = factor * first.norm();
    let mut out = PointSweep { sup: base, base, argmax: n, late_growth: false, max_imag: imag_ratio(first) };
    while walker.m() < m_max {
        walker.advance()?;
        let m = walker.m();
        factor = factor * T::from_usize_lossy(m - n) / T::from_usize_lossy(m);
        let v = walker.value();
        out.max_imag = out.max_imag.max(imag_ratio(v));
        let scaled = factor * v.norm();
        if scaled > out.sup {
            if m > late_start && m > n {
                out.late_growth = true;
            }
            out.sup = scaled;
            out.argmax = m;
        }
    }
    Ok(out)
}

/// Estimates the set of `z` in `[-1, 1]` where the degree-`n` monomial is the
/// worst case for the `k`-th derivative of the interpolation error.
pub fn kallioniemi_estimate<T: Real>(
    grid: &SelfConjugateGrid<T>,
    k: usize,
    z_points: usize,
    m_max: usize,
) -> Result<KallioniemiEstimate<T>> {
    let n = grid.len();
    ensure(n >= 1, || "grid needs at least one node".into())?;
    ensure(k < n, || format!("k = {k} must be below n = {n}"))?;
    ensure(m_max >= n, || format!("m_max = {m_max} must be at least n = {n}"))?;
    ensure(z_points >= 1, || "need at least one z sample".into())?;
    let z_samples = unit_interval_grid::<T>(z_points);
    let sweeps = z_samples
        .par_iter()
        .map(|&z| sweep(&grid.nodes, k, z, m_max))
        .collect::<Result<Vec<_>>>()?;
    let rtol = T::lit(MEMBERSHIP_RTOL);
    let atol = T::lit(MEMBERSHIP_ATOL);
    Ok(KallioniemiEstimate {
        grid: grid.clone(),
        k,
        membership: sweeps.iter().map(|s| s.sup <= s.base * (T::one() + rtol) + atol).collect(),
        sup_values: sweeps.iter().map(|s| s.sup).collect(),
        monomial_values: sweeps.iter().map(|s| s.base).collect(),
        argmax_m: sweeps.iter().map(|s| s.argmax).collect(),
        late_growth: sweeps.iter().filter(|s| s.late_growth).count(),
        max_imag: sweeps.iter().fold(T::zero(), |m, s| m.max(s.max_imag)),
        m_truncation: m_max,
        z_samples,
    })
}

/// Both sides of the uniform conjecture on one grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = ""))]
pub struct UniformReport<T: Real> {
    /// `max_t C(t,n)^{-1} max_z |R_t^{(k)}(z)/k!|`.
    pub sup_over_t: T,
    /// `max_z |e_{n-k}(nodes - z 1_n)|`.
    pub rhs: T,
    /// Smallest `t` attaining `sup_over_t`.
    pub attained_at_t: usize,
    /// Left-hand side for each `t = n..=t_max`.
    pub lhs_per_t: Vec<T>,
    pub max_imag: T,
}

impl<T: Real> UniformReport<T> {
    /// `sup_over_t / rhs`, the quantity conjectured to equal one.
    pub fn ratio(&self) -> T {
        if self.rhs > T::zero() {
            self.sup_over_t / self.rhs
        } else {
            T::one()
        }
    }
}

pub fn scan_uniform<T: Real>(
    grid: &SelfConjugateGrid<T>,
    k: usize,
    t_max: usize,
    z_points: usize,
) -> Result<UniformReport<T>> {
    let n = grid.len();
    ensure(n >= 1 && k < n, || format!("need 0 <= k < n, got k = {k}, n = {n}"))?;
    ensure(t_max >= n, || format!("t_max = {t_max} must be at least n = {n}"))?;
    let z_samples = unit_interval_grid::<T>(z_points.max(1));
    let per_z = z_samples
        .par_iter()
        .map(|&z| {
            let mut walker = ResidualWalker::new(&grid.nodes, k, Complex::new(z, T::zero()), t_max)?;
            let mut values = vec![walker.value()];
            while walker.m() < t_max {
                walker.advance()?;
                values.push(walker.value());
            }
            Ok(values)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut lhs_per_t = vec![T::zero(); t_max - n + 1];
    let mut max_imag = T::zero();
    for values in &per_z {
        for (j, v) in values.iter().enumerate() {
            lhs_per_t[j] = lhs_per_t[j].max(v.norm());
            max_imag = max_imag.max(imag_ratio(*v));
        }
    }
    let rhs = lhs_per_t[0];
    for (j, slot) in lhs_per_t.iter_mut().enumerate() {
        *slot = *slot / binomial::<T>(n + j, n);
    }
    let mut attained = 0;
    for (j, &v) in lhs_per_t.iter().enumerate() {
        if v > lhs_per_t[attained] {
            attained = j;
        }
    }
    Ok(UniformReport {
        sup_over_t: lhs_per_t[attained],
        rhs,
        attained_at_t: n + attained,
        lhs_per_t,
        max_imag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjectures::{sample_self_conjugate, trial_rng, Region};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn interval_grid_endpoints() {
        let g = unit_interval_grid::<f64>(2001);
        assert_eq!((g[0], g[1000], g[1500], g[2000]), (-1.0, 0.0, 0.5, 1.0));
    }

    #[test]
    fn cauchy_case_is_full_membership() {
        for trial in 0..5 {
            let mut rng = trial_rng(17, trial);
            let grid = sample_self_conjugate::<f64, _>(4, Region::UnitDisc, 0.2, &mut rng).unwrap();
            let est = kallioniemi_estimate(&grid, 0, 201, default_m_max(4)).unwrap();
            assert!(est.all_members());
            assert!(est.max_imag <= 1e-10);
        }
    }

    #[test]
    fn zero_at_real_node() {
        let grid = SelfConjugateGrid::new(vec![c(0.5, 0.0), c(0.5, 0.0)]).unwrap();
        let est = kallioniemi_estimate(&grid, 0, 2001, 20).unwrap();
        assert_eq!(est.sup_values[1500], 0.0);
        assert!(est.membership[1500]);
    }

    #[test]
    fn uniform_example() {
        let grid = SelfConjugateGrid::new(vec![c(0.0, 0.5), c(0.0, -0.5)]).unwrap();
        let rep = scan_uniform(&grid, 1, 40, 2001).unwrap();
        assert!((rep.rhs - 2.0).abs() < 1e-14);
        assert_eq!(rep.lhs_per_t[0], rep.rhs);
        assert!(rep.sup_over_t <= 2.0 + 1e-6);
    }

    #[test]
    fn uniform_zero_nodes() {
        let grid = SelfConjugateGrid::new(vec![c(0.0, 0.0); 2]).unwrap();
        let rep = scan_uniform(&grid, 0, 12, 101).unwrap();
        assert_eq!(rep.attained_at_t, 2);
        assert!((rep.sup_over_t - rep.rhs).abs() < 1e-15);
    }

    #[test]
    fn membership_csv_header() {
        let grid = SelfConjugateGrid::new(vec![c(0.1, 0.2), c(0.1, -0.2)]).unwrap();
        let est = kallioniemi_estimate(&grid, 1, 3, 12).unwrap();
        let mut buf = Vec::new();
        est.write_membership_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("z,member,sup,monomial,argmax_m\n-1,"));
        assert_eq!(text.lines().count(), 4);
    }
}
