use std::io::Write;
use std::path::Path;

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    q_eval, q_via_residual, sample_self_conjugate, schur_elementary_ratio, special_case_np1, Region,
    SelfConjugateGrid, DEFAULT_P_REAL,
};
use crate::error::{ensure, Error, Result};
use crate::scalar::Real;

/// Values above `1 + COUNTEREXAMPLE_MARGIN` are recorded as potential
/// counterexamples.
pub const COUNTEREXAMPLE_MARGIN: f64 = 1e-7;
/// Largest tolerated `|Im v| / max(1, |v|)` for quantities that are real on
/// self-conjugate grids.
pub const REALNESS_TOLERANCE: f64 = 1e-10;

/// Independent generator for one trial, so results do not depend on how
/// trials are split across threads.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Which form of the pointwise conjecture to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointwiseBranch {
    /// `|Q_{t,n,k}(z + 1_n)| <= 1` for nodes `z` in the unit disc.
    Z1,
    /// `|s_(t-n|n-k-1)(z)| <= C(t,n) |e_{n-k}(z)|` on the right half-disc.
    Z0,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub n: usize,
    pub t_min: usize,
    pub t_max: usize,
    pub k_values: Vec<usize>,
    pub region: Region,
    pub trials: u64,
    pub seed: u64,
    pub p_real: f64,
}

impl ScanConfig {
    /// All `k < n`, `t` from `n` to `t_max`, unit-disc nodes.
    pub fn new(n: usize, t_max: usize, trials: u64, seed: u64) -> Self {
        Self {
            n,
            t_min: n,
            t_max,
            k_values: (0..n).collect(),
            region: Region::UnitDisc,
            trials,
            seed,
            p_real: DEFAULT_P_REAL,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.n >= 2 && self.n % 2 == 0, || format!("n = {} must be even and positive", self.n))?;
        ensure(self.t_min >= self.n && self.t_max >= self.t_min, || {
            format!("need n <= t_min <= t_max, got {}..={}", self.t_min, self.t_max)
        })?;
        ensure(!self.k_values.is_empty() && self.k_values.iter().all(|&k| k < self.n), || {
            format!("k values must lie in 0..{}", self.n)
        })
    }
}

/// Largest `|Q|` seen for one `(t, k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = ""))]
pub struct QReport<T: Real> {
    pub branch: PointwiseBranch,
    pub t: usize,
    pub n: usize,
    pub k: usize,
    pub samples: u64,
    pub max_abs_q: T,
    pub worst_grid: Option<SelfConjugateGrid<T>>,
    pub worst_trial: Option<u64>,
    pub singular_skipped: u64,
    pub counterexamples: u64,
    pub max_imag: T,
    pub seed: u64,
}

/// Full record of a sample exceeding the conjectured bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = ""))]
pub struct CounterexampleRecord<T: Real> {
    pub conjecture: String,
    pub t: usize,
    pub n: usize,
    pub k: usize,
    pub value: T,
    pub grid: SelfConjugateGrid<T>,
    pub seed: u64,
    pub trial: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = ""))]
pub struct PointwiseScan<T: Real> {
    pub reports: Vec<QReport<T>>,
    pub counterexamples: Vec<CounterexampleRecord<T>>,
}

impl<T: Real> PointwiseScan<T> {
    pub fn max_abs_q(&self) -> T {
        self.reports.iter().fold(T::zero(), |m, r| m.max(r.max_abs_q))
    }

    pub fn max_imag(&self) -> T {
        self.reports.iter().fold(T::zero(), |m, r| m.max(r.max_imag))
    }
}

/// Relative imaginary part of a quantity that should be real.
pub fn imag_ratio<T: Real>(v: Complex<T>) -> T {
    v.im.abs() / v.norm().max(T::one())
}

enum Eval<T> {
    Value(Complex<T>),
    Singular,
}

fn evaluate<T: Real>(branch: PointwiseBranch, t: usize, n: usize, k: usize, grid: &SelfConjugateGrid<T>) -> Result<Eval<T>> {
    let r = match branch {
        PointwiseBranch::Z1 => q_eval(t, n, k, &grid.shifted(T::one())),
        PointwiseBranch::Z0 => schur_elementary_ratio(t, n, k, &grid.nodes),
    };
    match r {
        Ok(v) => Ok(Eval::Value(v)),
        Err(Error::SingularDenominator { .. }) => Ok(Eval::Singular),
        Err(e) => Err(e),
    }
}

fn branch_name(branch: PointwiseBranch) -> &'static str {
    match branch {
        PointwiseBranch::Z1 => "pointwise-z1",
        PointwiseBranch::Z0 => "pointwise-z0",
    }
}

/// Samples self-conjugate grids and records the largest `|Q|` per `(t, k)`.
/// The `Z0` branch always samples from the right half-disc.
pub fn scan_pointwise<T: Real>(config: &ScanConfig, branch: PointwiseBranch) -> Result<PointwiseScan<T>> {
    config.validate()?;
    let region = match branch {
        PointwiseBranch::Z1 => config.region,
        PointwiseBranch::Z0 => Region::RightHalfDisc,
    };
    let n = config.n;
    let cells: Vec<(usize, usize)> = (config.t_min..=config.t_max)
        .flat_map(|t| config.k_values.iter().map(move |&k| (t, k)))
        .collect();

    let per_trial = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(config.seed, trial);
            let grid: SelfConjugateGrid<T> = sample_self_conjugate(n, region, config.p_real, &mut rng)?;
            let values = cells
                .iter()
                .map(|&(t, k)| evaluate(branch, t, n, k, &grid))
                .collect::<Result<Vec<_>>>()?;
            Ok((grid, values))
        })
        .collect::<Result<Vec<_>>>()?;

    let threshold = T::one() + T::lit(COUNTEREXAMPLE_MARGIN);
    let mut counterexamples = Vec::new();
    let mut reports: Vec<QReport<T>> = cells
        .iter()
        .map(|&(t, k)| QReport {
            branch,
            t,
            n,
            k,
            samples: 0,
            max_abs_q: T::zero(),
            worst_grid: None,
            worst_trial: None,
            singular_skipped: 0,
            counterexamples: 0,
            max_imag: T::zero(),
            seed: config.seed,
        })
        .collect();
    for (trial, (grid, values)) in per_trial.iter().enumerate() {
        for (report, value) in reports.iter_mut().zip(values) {
            let v = match value {
                Eval::Value(v) => *v,
                Eval::Singular => {
                    report.singular_skipped += 1;
                    continue;
                }
            };
            report.samples += 1;
            report.max_imag = report.max_imag.max(imag_ratio(v));
            let abs = v.norm();
            if report.worst_trial.is_none() || abs > report.max_abs_q {
                report.max_abs_q = abs;
                report.worst_grid = Some(grid.clone());
                report.worst_trial = Some(trial as u64);
            }
            if abs > threshold {
                report.counterexamples += 1;
                counterexamples.push(CounterexampleRecord {
                    conjecture: branch_name(branch).into(),
                    t: report.t,
                    n,
                    k: report.k,
                    value: abs,
                    grid: grid.clone(),
                    seed: config.seed,
                    trial: trial as u64,
                });
            }
        }
    }
    Ok(PointwiseScan { reports, counterexamples })
}

/// Largest `|Q_{n,n,k} - 1|` over sampled grids, with `Q` evaluated through
/// the residual route so that the check does not reduce to `x / x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = ""))]
pub struct IdentityReport<T: Real> {
    pub n: usize,
    pub samples: u64,
    pub singular_skipped: u64,
    pub max_deviation: T,
    pub seed: u64,
}

pub fn scan_t_equals_n<T: Real>(config: &ScanConfig) -> Result<IdentityReport<T>> {
    config.validate()?;
    let n = config.n;
    let results = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(config.seed, trial);
            let grid: SelfConjugateGrid<T> = sample_self_conjugate(n, config.region, config.p_real, &mut rng)?;
            let zeta = grid.shifted(T::one());
            let mut out = Vec::new();
            for &k in &config.k_values {
                out.push(match q_via_residual(n, n, k, &zeta) {
                    Ok(q) => Some((q - T::one()).norm()),
                    Err(Error::SingularDenominator { .. }) => None,
                    Err(e) => return Err(e),
                });
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = IdentityReport { n, samples: 0, singular_skipped: 0, max_deviation: T::zero(), seed: config.seed };
    for v in results.into_iter().flatten() {
        match v {
            Some(d) => {
                report.samples += 1;
                report.max_deviation = report.max_deviation.max(d);
            }
            None => report.singular_skipped += 1,
        }
    }
    Ok(report)
}

/// Outcome of checking `0 <= e_1 - e_{n-k+1}/e_{n-k} <= 2n+2` on sampled grids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = ""))]
pub struct SpecialCaseReport<T: Real> {
    pub n: usize,
    pub k_values: Vec<usize>,
    pub samples: u64,
    pub singular_skipped: u64,
    pub lower_violations: u64,
    pub upper_violations: u64,
    pub min_value: T,
    pub max_value: T,
    pub max_imag: T,
    pub seed: u64,
    pub violations: Vec<CounterexampleRecord<T>>,
}

impl<T: Real> SpecialCaseReport<T> {
    pub fn holds(&self) -> bool {
        self.lower_violations == 0 && self.upper_violations == 0
    }
}

/// Runs [`special_case_np1`] for every configured `k` with `n - k` even.
pub fn scan_special_np1<T: Real>(config: &ScanConfig) -> Result<SpecialCaseReport<T>> {
    config.validate()?;
    let n = config.n;
    let ks: Vec<usize> = config.k_values.iter().copied().filter(|k| (n - k) % 2 == 0).collect();
    ensure(!ks.is_empty(), || "no k with n - k even".into())?;
    let results = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(config.seed, trial);
            let grid: SelfConjugateGrid<T> = sample_self_conjugate(n, config.region, config.p_real, &mut rng)?;
            let zeta = grid.shifted(T::one());
            let verdicts = ks
                .iter()
                .map(|&k| match special_case_np1(n, k, &zeta) {
                    Ok(v) => Ok(Some(v)),
                    Err(Error::SingularDenominator { .. }) => Ok(None),
                    Err(e) => Err(e),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((grid, verdicts))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = SpecialCaseReport {
        n,
        k_values: ks.clone(),
        samples: 0,
        singular_skipped: 0,
        lower_violations: 0,
        upper_violations: 0,
        min_value: T::infinity(),
        max_value: T::neg_infinity(),
        max_imag: T::zero(),
        seed: config.seed,
        violations: Vec::new(),
    };
    for (trial, (grid, verdicts)) in results.into_iter().enumerate() {
        for (&k, v) in ks.iter().zip(verdicts) {
            let Some(v) = v else {
                report.singular_skipped += 1;
                continue;
            };
            report.samples += 1;
            report.min_value = report.min_value.min(v.value.re);
            report.max_value = report.max_value.max(v.value.re);
            report.max_imag = report.max_imag.max(imag_ratio(v.value));
            report.lower_violations += u64::from(!v.lower_ok);
            report.upper_violations += u64::from(!v.upper_ok);
            if !(v.lower_ok && v.upper_ok) {
                report.violations.push(CounterexampleRecord {
                    conjecture: "special-np1".into(),
                    t: n + 1,
                    n,
                    k,
                    value: v.value.re,
                    grid: grid.clone(),
                    seed: config.seed,
                    trial: trial as u64,
                });
            }
        }
    }
    Ok(report)
}

/// Appends one JSON object per line.
pub fn append_ndjson<S: Serialize>(path: &Path, records: &[S]) -> std::io::Result<()> {
    let mut file = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
    for r in records {
        serde_json::to_writer(&mut file, r)?;
        file.write_all(b"\n")?;
    }
    file.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_equals_n_is_one() {
        let mut cfg = ScanConfig::new(4, 4, 300, 11);
        cfg.region = Region::UnitDisc;
        let scan: PointwiseScan<f64> = scan_pointwise(&cfg, PointwiseBranch::Z1).unwrap();
        for r in &scan.reports {
            assert_eq!(r.max_abs_q, 1.0);
        }
        let id: IdentityReport<f64> = scan_t_equals_n(&cfg).unwrap();
        assert!(id.max_deviation < 1e-12, "{}", id.max_deviation);
    }

    #[test]
    fn scan_is_deterministic() {
        let cfg = ScanConfig::new(2, 5, 200, 5);
        let a: PointwiseScan<f64> = scan_pointwise(&cfg, PointwiseBranch::Z1).unwrap();
        let b: PointwiseScan<f64> = scan_pointwise(&cfg, PointwiseBranch::Z1).unwrap();
        assert_eq!(a, b);
        assert!(a.max_imag() <= 1e-10);
    }

    #[test]
    fn z0_branch_bounded_on_small_sample() {
        let cfg = ScanConfig::new(2, 6, 300, 9);
        let scan: PointwiseScan<f64> = scan_pointwise(&cfg, PointwiseBranch::Z0).unwrap();
        for r in &scan.reports {
            if let Some(g) = &r.worst_grid {
                assert!(g.nodes.iter().all(|z| z.re >= 0.0));
            }
        }
    }

    #[test]
    fn special_case_holds() {
        let cfg = ScanConfig::new(4, 5, 500, 1);
        let rep: SpecialCaseReport<f64> = scan_special_np1(&cfg).unwrap();
        assert!(rep.holds());
        assert_eq!(rep.k_values, vec![0, 2]);
    }

    #[test]
    fn ndjson_appends_lines() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("log.ndjson");
        append_ndjson(&path, &[1, 2]).unwrap();
        append_ndjson(&path, &[3]).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "1\n2\n3\n");
    }

    #[test]
    fn odd_n_rejected() {
        let cfg = ScanConfig::new(3, 5, 10, 0);
        assert!(scan_pointwise::<f64>(&cfg, PointwiseBranch::Z1).is_err());
    }
}
