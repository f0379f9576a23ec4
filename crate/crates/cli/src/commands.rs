use hookamp::amplitude::{
    char_poly_from_roots, cophase_roots, fourier_bound, hook_profile, max_amplitude_polydisc,
    optimal_initialization, peak_amplitude, simulate, AmplitudeQuery, BoundChain, PeakAmplitude,
    RecurrenceSpec, MAX_SAFE_ORDER, MAX_SAFE_TIME,
};
use hookamp::conjectures::{
    append_ndjson, default_m_max, kallioniemi_estimate, sample_self_conjugate, scan_pointwise,
    scan_special_np1, scan_t_equals_n, scan_uniform, trial_rng, CounterexampleRecord,
    KallioniemiEstimate, PointwiseBranch, Region, ScanConfig, SelfConjugateGrid,
    COUNTEREXAMPLE_MARGIN, REALNESS_TOLERANCE,
};
use hookamp::oracle::{verify_cophase, OracleConfig};
use hookamp::reinhardt::{dominated_vertex_filter, DomainSpec};
use num_complex::Complex;
use serde::Serialize;

use crate::args::{
    ComputeArgs, Conjecture, Format, PolydiscArgs, ReinhardtArgs, RegionArg, ScanArgs, VerifyArgs,
};
use crate::report::{
    effective_seed, envelope, CliError, Outcome, EXIT_COUNTEREXAMPLE, EXIT_INTERNAL, EXIT_OK,
};

fn json_only(format: Format, command: &str) -> Result<(), CliError> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(CliError::precondition(format!("{command} has no CSV output"))),
    }
}

#[derive(Debug, Serialize)]
struct PolydiscConfig {
    n: usize,
    t: usize,
    radii: Vec<f64>,
    weights: Vec<f64>,
}

impl PolydiscConfig {
    fn from_args(a: &PolydiscArgs) -> Result<Self, CliError> {
        let n = a.n.unwrap_or(a.radii.len());
        if a.radii.len() != n {
            return Err(CliError::precondition(format!("--n {n} but {} radii", a.radii.len())));
        }
        let weights = if a.weights.is_empty() { vec![1.0; n] } else { a.weights.clone() };
        if weights.len() != n {
            return Err(CliError::precondition(format!("--n {n} but {} weights", weights.len())));
        }
        AmplitudeQuery::new(a.t, a.radii.clone(), weights.clone())?;
        Ok(Self { n, t: a.t, radii: a.radii.clone(), weights })
    }

    fn query(&self) -> AmplitudeQuery<f64> {
        AmplitudeQuery { t: self.t, radii: self.radii.clone(), weights: self.weights.clone() }
    }
}

fn range_guard(n: usize, t: usize, unsafe_range: bool) -> Result<(), CliError> {
    if !unsafe_range && (n > MAX_SAFE_ORDER || t > MAX_SAFE_TIME) {
        return Err(CliError::precondition(format!(
            "n = {n}, t = {t} outside the checked range n <= {MAX_SAFE_ORDER}, t <= {MAX_SAFE_TIME}; \
             pass --unsafe-range to proceed"
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct ComputeConfig {
    #[serde(flatten)]
    polydisc: PolydiscConfig,
    t_max: Option<usize>,
    theta: f64,
}

#[derive(Serialize)]
struct BoundReport {
    /// Common radius at which the chain is evaluated (the largest radius).
    radius: f64,
    #[serde(flatten)]
    chain: BoundChain<f64>,
    /// Only meaningful for radii in the closed unit disc.
    fourier: Option<f64>,
}

#[derive(Serialize)]
struct ComputeResult {
    value: f64,
    hook_profile: Vec<f64>,
    extremal_roots: Vec<Complex<f64>>,
    extremal_initialization: Vec<Complex<f64>>,
    simulated_abs_x_t: f64,
    bounds: BoundReport,
    peak: Option<PeakAmplitude<f64>>,
}

const ATTAINMENT_RTOL: f64 = 1e-8;

pub fn compute(a: &ComputeArgs, format: Format) -> Result<Outcome, CliError> {
    let polydisc = PolydiscConfig::from_args(&a.polydisc)?;
    let (n, t) = (polydisc.n, polydisc.t);
    range_guard(n, a.t_max.unwrap_or(t).max(t), a.unsafe_range)?;
    let query = polydisc.query();
    let value = max_amplitude_polydisc(&query)?;
    let roots = cophase_roots(&query.radii, a.theta);
    let init = optimal_initialization(&query.weights, a.theta);
    let spec = char_poly_from_roots(&roots)?;
    let horizon = a.t_max.unwrap_or(t).max(t);
    let trajectory = simulate(&spec, &init, horizon)?;

    if format == Format::Csv {
        let mut buf = Vec::new();
        RecurrenceSpec::write_trajectory_csv(&trajectory, &mut buf)
            .map_err(|e| CliError::internal(e.to_string()))?;
        let text = String::from_utf8(buf).map_err(|e| CliError::internal(e.to_string()))?;
        return Ok(Outcome { text, code: EXIT_OK, notes: vec![] });
    }

    let simulated = trajectory[t].norm();
    let r_max = query.radii.iter().copied().fold(0.0, f64::max);
    let result = ComputeResult {
        value,
        hook_profile: hook_profile(&query.radii, t)?,
        extremal_roots: roots,
        extremal_initialization: init,
        simulated_abs_x_t: simulated,
        bounds: BoundReport {
            radius: r_max,
            chain: BoundChain::compute(n, r_max, t)?,
            fourier: (r_max <= 1.0).then(|| fourier_bound(n, t)),
        },
        peak: a.t_max.map(|tm| peak_amplitude(&query.radii, &query.weights, tm)).transpose()?,
    };
    let mut notes = vec![];
    let mut code = EXIT_OK;
    if (simulated - value).abs() > ATTAINMENT_RTOL * value.max(1.0) {
        code = EXIT_INTERNAL;
        notes.push(format!("simulated |x_t| = {simulated} differs from the closed form {value}"));
    }
    let config = ComputeConfig { polydisc, t_max: a.t_max, theta: a.theta };
    Ok(Outcome { text: envelope("compute", &config, None, &result)?, code, notes })
}

#[derive(Serialize)]
struct VerifyConfig {
    #[serde(flatten)]
    polydisc: PolydiscConfig,
    oracle: OracleConfig<f64>,
}

pub fn verify(a: &VerifyArgs, format: Format) -> Result<Outcome, CliError> {
    json_only(format, "verify")?;
    let polydisc = PolydiscConfig::from_args(&a.polydisc)?;
    let oracle = OracleConfig {
        phase_grid: a.phase_grid,
        radial_grid: a.radial_grid,
        random_trials: a.trials,
        seed: effective_seed(a.seed)?,
        tolerance: a.tolerance,
    };
    let verdict = verify_cophase(polydisc.t, &polydisc.radii, &polydisc.weights, &oracle)?;
    let (code, notes) = if verdict.holds {
        (EXIT_OK, vec![])
    } else {
        (EXIT_INTERNAL, vec![format!("closed form and brute force disagree: gap {}", verdict.result.gap)])
    };
    let seed = oracle.seed;
    let config = VerifyConfig { polydisc, oracle };
    Ok(Outcome { text: envelope("verify", &config, Some(seed), &verdict)?, code, notes })
}

#[derive(Serialize)]
struct ReinhardtConfig {
    domain: DomainSpec<f64>,
    filter: bool,
}

#[derive(Serialize)]
struct ReinhardtResult {
    vertices_in: usize,
    vertices_used: usize,
    #[serde(flatten)]
    solution: hookamp::reinhardt::ReinhardtSolution<f64>,
}

pub fn reinhardt(a: &ReinhardtArgs, format: Format) -> Result<Outcome, CliError> {
    json_only(format, "reinhardt")?;
    let domain = DomainSpec::<f64>::load(&a.domain)?;
    let mut working = domain.clone();
    if a.filter {
        working.vertices = dominated_vertex_filter(&domain.vertices);
    }
    let solution = working.solve()?;
    let result = ReinhardtResult {
        vertices_in: domain.vertices.len(),
        vertices_used: working.vertices.len(),
        solution,
    };
    let config = ReinhardtConfig { domain, filter: a.filter };
    Ok(Outcome { text: envelope("reinhardt", &config, None, &result)?, code: EXIT_OK, notes: vec![] })
}

fn region(r: RegionArg) -> Region {
    match r {
        RegionArg::UnitDisc => Region::UnitDisc,
        RegionArg::RightHalfDisc => Region::RightHalfDisc,
        RegionArg::UnitCircle => Region::UnitCircle,
    }
}

fn parse_node(s: &str) -> Result<Complex<f64>, CliError> {
    let bad = || CliError::precondition(format!("cannot parse node {s:?}; expected re or re:im"));
    let mut parts = s.trim().splitn(2, ':');
    let re: f64 = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    let im: f64 = match parts.next() {
        Some(p) => p.trim().parse().map_err(|_| bad())?,
        None => 0.0,
    };
    Ok(Complex::new(re, im))
}

#[derive(Debug, Serialize)]
struct ScanRunConfig {
    conjecture: String,
    n: usize,
    t_max: usize,
    k_values: Vec<usize>,
    trials: u64,
    seed: u64,
    region: Region,
    p_real: f64,
    nodes: Vec<Complex<f64>>,
    z_points: usize,
    m_max: usize,
}

fn conjecture_name(c: Conjecture) -> &'static str {
    match c {
        Conjecture::PointwiseZ1 => "pointwise-z1",
        Conjecture::PointwiseZ0 => "pointwise-z0",
        Conjecture::TEqualsN => "t-equals-n",
        Conjecture::SpecialNp1 => "special-np1",
        Conjecture::Kallioniemi => "kallioniemi",
        Conjecture::Uniform => "uniform",
    }
}

impl ScanRunConfig {
    fn from_args(a: &ScanArgs) -> Result<Self, CliError> {
        let n = a.n;
        if n == 0 {
            return Err(CliError::precondition("--n must be positive"));
        }
        let k_values: Vec<usize> = match a.k {
            Some(k) if k >= n => return Err(CliError::precondition(format!("--k {k} must be below n = {n}"))),
            Some(k) => vec![k],
            None if a.conjecture == Conjecture::SpecialNp1 => (0..n).filter(|k| (n - k) % 2 == 0).collect(),
            None => (0..n).collect(),
        };
        let t_max = match a.conjecture {
            Conjecture::TEqualsN => n,
            Conjecture::SpecialNp1 => n + 1,
            Conjecture::Uniform => a.t_max,
            Conjecture::Kallioniemi => a.m_max.unwrap_or_else(|| default_m_max(n)),
            _ => a.t.unwrap_or(n + 6),
        };
        if t_max < n {
            return Err(CliError::precondition(format!("largest t = {t_max} below n = {n}")));
        }
        let nodes = a.nodes.iter().map(|s| parse_node(s)).collect::<Result<Vec<_>, _>>()?;
        if !nodes.is_empty() && nodes.len() != n {
            return Err(CliError::precondition(format!("--n {n} but {} nodes", nodes.len())));
        }
        Ok(Self {
            conjecture: conjecture_name(a.conjecture).into(),
            n,
            t_max,
            k_values,
            trials: a.trials,
            seed: effective_seed(a.seed)?,
            region: region(a.region),
            p_real: a.p_real,
            nodes,
            z_points: a.z_points,
            m_max: a.m_max.unwrap_or_else(|| default_m_max(n)),
        })
    }

    fn scan_config(&self) -> ScanConfig {
        ScanConfig {
            n: self.n,
            t_min: self.n,
            t_max: self.t_max,
            k_values: self.k_values.clone(),
            region: self.region,
            trials: self.trials,
            seed: self.seed,
            p_real: self.p_real,
        }
    }

    /// The explicit grid, or `trials` sampled ones.
    fn grids(&self) -> Result<Vec<SelfConjugateGrid<f64>>, CliError> {
        if !self.nodes.is_empty() {
            return Ok(vec![SelfConjugateGrid::new(self.nodes.clone())?]);
        }
        (0..self.trials)
            .map(|trial| {
                let mut rng = trial_rng(self.seed, trial);
                Ok(sample_self_conjugate(self.n, self.region, self.p_real, &mut rng)?)
            })
            .collect()
    }
}

fn log_records(path: Option<&std::path::Path>, records: &[CounterexampleRecord<f64>]) -> Result<(), CliError> {
    match path {
        Some(p) if !records.is_empty() => Ok(append_ndjson(p, records)?),
        _ => Ok(()),
    }
}

fn realness_note(max_imag: f64, notes: &mut Vec<String>, code: &mut u8) {
    if max_imag > REALNESS_TOLERANCE {
        notes.push(format!("imaginary part {max_imag:e} exceeds {REALNESS_TOLERANCE:e} on a self-conjugate grid"));
        *code = EXIT_INTERNAL;
    }
}

#[derive(Serialize)]
struct KallioniemiSummary {
    k: usize,
    grids: usize,
    grids_fully_member: usize,
    min_member_fraction: f64,
    mean_member_fraction: f64,
    late_growth_points: usize,
    max_imag: f64,
}

#[derive(Serialize)]
struct KallioniemiResult {
    summaries: Vec<KallioniemiSummary>,
    /// Full estimates, included when a single grid is scanned.
    estimates: Vec<KallioniemiEstimate<f64>>,
}

#[derive(Serialize)]
struct UniformEntry {
    k: usize,
    grids: usize,
    max_ratio: f64,
    worst_grid: Option<SelfConjugateGrid<f64>>,
    worst_report: Option<hookamp::conjectures::UniformReport<f64>>,
    counterexamples: usize,
}

#[derive(Serialize)]
struct UniformResult {
    entries: Vec<UniformEntry>,
    counterexamples: Vec<CounterexampleRecord<f64>>,
}

pub fn scan(a: &ScanArgs, format: Format) -> Result<Outcome, CliError> {
    let config = ScanRunConfig::from_args(a)?;
    if format == Format::Csv && a.conjecture != Conjecture::Kallioniemi {
        return Err(CliError::precondition("CSV output is only available for the kallioniemi scan"));
    }
    let mut notes = Vec::new();
    let mut code = EXIT_OK;
    let name = config.conjecture.clone();
    let seed = Some(config.seed);
    let text = match a.conjecture {
        Conjecture::PointwiseZ1 | Conjecture::PointwiseZ0 => {
            let branch = if a.conjecture == Conjecture::PointwiseZ1 { PointwiseBranch::Z1 } else { PointwiseBranch::Z0 };
            let scan = scan_pointwise::<f64>(&config.scan_config(), branch)?;
            log_records(a.log.as_deref(), &scan.counterexamples)?;
            realness_note(scan.max_imag(), &mut notes, &mut code);
            if !scan.counterexamples.is_empty() {
                notes.push(format!("{} potential counterexamples recorded", scan.counterexamples.len()));
                code = EXIT_COUNTEREXAMPLE;
            }
            #[derive(Serialize)]
            struct Out<'a> {
                max_abs_q: f64,
                #[serde(flatten)]
                scan: &'a hookamp::conjectures::PointwiseScan<f64>,
            }
            envelope(&name, &config, seed, &Out { max_abs_q: scan.max_abs_q(), scan: &scan })?
        }
        Conjecture::TEqualsN => {
            let cfg = config.scan_config();
            let scan = scan_pointwise::<f64>(&cfg, PointwiseBranch::Z1)?;
            let identity = scan_t_equals_n::<f64>(&cfg)?;
            let max_abs_q = scan.max_abs_q();
            if (max_abs_q - 1.0).abs() > 1e-12 || identity.max_deviation > 1e-9 {
                code = EXIT_INTERNAL;
                notes.push(format!(
                    "Q at t = n deviates from 1: max |Q| = {max_abs_q}, residual route deviation {}",
                    identity.max_deviation
                ));
            }
            #[derive(Serialize)]
            struct Out<'a> {
                max_abs_q: f64,
                identity: &'a hookamp::conjectures::IdentityReport<f64>,
                reports: &'a [hookamp::conjectures::QReport<f64>],
            }
            envelope(&name, &config, seed, &Out { max_abs_q, identity: &identity, reports: &scan.reports })?
        }
        Conjecture::SpecialNp1 => {
            let rep = scan_special_np1::<f64>(&config.scan_config())?;
            log_records(a.log.as_deref(), &rep.violations)?;
            realness_note(rep.max_imag, &mut notes, &mut code);
            if !rep.holds() {
                code = EXIT_INTERNAL;
                notes.push("the proved t = n + 1 inequality failed; this indicates a numerical bug".into());
            }
            #[derive(Serialize)]
            struct Out<'a> {
                lower_ok: bool,
                upper_ok: bool,
                #[serde(flatten)]
                report: &'a hookamp::conjectures::SpecialCaseReport<f64>,
            }
            envelope(
                &name,
                &config,
                seed,
                &Out { lower_ok: rep.lower_violations == 0, upper_ok: rep.upper_violations == 0, report: &rep },
            )?
        }
        Conjecture::Kallioniemi => {
            let grids = config.grids()?;
            let mut summaries = Vec::new();
            let mut estimates = Vec::new();
            let mut first: Option<KallioniemiEstimate<f64>> = None;
            for &k in &config.k_values {
                let ests = grids
                    .iter()
                    .map(|g| kallioniemi_estimate(g, k, config.z_points, config.m_max))
                    .collect::<Result<Vec<_>, _>>()?;
                let fractions: Vec<f64> = ests.iter().map(|e| e.member_fraction()).collect();
                let summary = KallioniemiSummary {
                    k,
                    grids: ests.len(),
                    grids_fully_member: ests.iter().filter(|e| e.all_members()).count(),
                    min_member_fraction: fractions.iter().copied().fold(1.0, f64::min),
                    mean_member_fraction: fractions.iter().sum::<f64>() / fractions.len().max(1) as f64,
                    late_growth_points: ests.iter().map(|e| e.late_growth).sum(),
                    max_imag: ests.iter().map(|e| e.max_imag).fold(0.0, f64::max),
                };
                realness_note(summary.max_imag, &mut notes, &mut code);
                if k == 0 && summary.grids_fully_member != summary.grids {
                    code = EXIT_INTERNAL;
                    notes.push("k = 0 membership failed; the monomial bound is a theorem there".into());
                }
                if summary.late_growth_points > 0 {
                    notes.push(format!(
                        "k = {k}: supremum still growing near m_max = {} at {} points; consider raising --m-max",
                        config.m_max, summary.late_growth_points
                    ));
                }
                summaries.push(summary);
                if first.is_none() {
                    first = ests.first().cloned();
                }
                if grids.len() == 1 {
                    estimates.extend(ests);
                }
            }
            if format == Format::Csv {
                let est = first.ok_or_else(|| CliError::precondition("no grid to tabulate"))?;
                let mut buf = Vec::new();
                est.write_membership_csv(&mut buf).map_err(|e| CliError::internal(e.to_string()))?;
                String::from_utf8(buf).map_err(|e| CliError::internal(e.to_string()))?
            } else {
                envelope(&name, &config, seed, &KallioniemiResult { summaries, estimates })?
            }
        }
        Conjecture::Uniform => {
            let grids = config.grids()?;
            let threshold = 1.0 + COUNTEREXAMPLE_MARGIN;
            let mut entries = Vec::new();
            let mut records = Vec::new();
            for &k in &config.k_values {
                let mut entry =
                    UniformEntry { k, grids: grids.len(), max_ratio: 0.0, worst_grid: None, worst_report: None, counterexamples: 0 };
                for (trial, g) in grids.iter().enumerate() {
                    let rep = scan_uniform(g, k, config.t_max, config.z_points)?;
                    realness_note(rep.max_imag, &mut notes, &mut code);
                    let ratio = rep.ratio();
                    if ratio > threshold {
                        entry.counterexamples += 1;
                        records.push(CounterexampleRecord {
                            conjecture: "uniform".into(),
                            t: rep.attained_at_t,
                            n: config.n,
                            k,
                            value: ratio,
                            grid: g.clone(),
                            seed: config.seed,
                            trial: trial as u64,
                        });
                    }
                    if entry.worst_grid.is_none() || ratio > entry.max_ratio {
                        entry.max_ratio = ratio;
                        entry.worst_grid = Some(g.clone());
                        entry.worst_report = Some(rep);
                    }
                }
                entries.push(entry);
            }
            log_records(a.log.as_deref(), &records)?;
            if !records.is_empty() {
                code = code.max(EXIT_COUNTEREXAMPLE);
                notes.push(format!("{} potential counterexamples recorded", records.len()));
            }
            envelope(&name, &config, seed, &UniformResult { entries, counterexamples: records })?
        }
    };
    Ok(Outcome { text, code, notes })
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn check(name: &'static str, passed: bool, detail: impl Into<String>) -> Check {
    Check { name, passed, detail: detail.into() }
}

pub fn selftest(format: Format) -> Result<Outcome, CliError> {
    use hookamp::amplitude::{repeated_root_closed_form, repeated_root_integral};
    use hookamp::conjectures::{q_eval, special_case_np1};
    use hookamp::oracle::cross_check_interp;
    use hookamp::reinhardt::{vertex_method, LogAffineRootDomain, StandardOracle};
    use hookamp::symfunc::{schur_hook_ones, schur_via_kostka, Hook};

    json_only(format, "selftest")?;
    let mut checks = Vec::new();

    let q3 = AmplitudeQuery::new(3, vec![1.0, 1.0], vec![1.0, 1.0])?;
    let v = max_amplitude_polydisc(&q3)?;
    checks.push(check("double unit root at t = 3 gives 5", v == 5.0, format!("{v}")));
    let q2 = AmplitudeQuery::new(2, vec![1.0, 1.0], vec![1.0, 1.0])?;
    let v = max_amplitude_polydisc(&q2)?;
    checks.push(check("instantaneous amplitude gives 3", v == 3.0, format!("{v}")));

    let a = repeated_root_closed_form(6, 0.5f64, 25)?;
    let b = repeated_root_integral(6, 0.5, 25)?;
    checks.push(check("binomial sum matches quadrature", (a - b).abs() <= 1e-8 * a, format!("{a} vs {b}")));

    let oracle = OracleConfig { phase_grid: 48, radial_grid: 2, random_trials: 500, seed: 1, tolerance: 1e-9 };
    let verdict = verify_cophase(4, &[1.0, 0.7], &[1.0, 1.0], &oracle)?;
    checks.push(check("cophase roots beat the brute-force grid", verdict.holds, format!("gap {}", verdict.result.gap)));

    let roots = [Complex::new(0.3, 0.0), Complex::new(0.0, -0.5), Complex::new(-0.6, 0.2)];
    let dev = cross_check_interp(&roots, 17)?;
    checks.push(check("interpolation routes agree", dev <= 1e-7, format!("{dev:e}")));

    let zeta = [Complex::new(1.2, 0.3), Complex::new(1.2, -0.3)];
    let q = q_eval(2, 2, 1, &zeta)?;
    checks.push(check("Q equals 1 at t = n", (q - 1.0).norm() <= 1e-12, format!("{q}")));
    let sc = special_case_np1(2, 0, &[Complex::new(2.0, 0.0), Complex::new(2.0, 0.0)])?;
    checks.push(check("t = n + 1 inequality at (2, 2)", sc.lower_ok && sc.upper_ok, format!("{}", sc.value)));

    let radii = [0.9f64, 1.1, 0.5];
    let sol = vertex_method(&LogAffineRootDomain::polydisc(&radii), &StandardOracle::polydisc(vec![1.0; 3])?, 8)?;
    let expect = max_amplitude_polydisc(&AmplitudeQuery::new(8, radii.to_vec(), vec![1.0; 3])?)?;
    checks.push(check("vertex method on a polydisc", (sol.value - expect).abs() <= 1e-10 * expect, format!("{}", sol.value)));

    let hook = Hook::new(2, 1);
    let exact = schur_hook_ones(hook, 3);
    let kostka = schur_via_kostka(&hook.to_partition(), &[Complex::new(1.0, 0.0); 3])?;
    checks.push(check("hook-content count matches tableaux", exact.to_string() == format!("{}", kostka.re), format!("{exact}")));

    let all = checks.iter().all(|c| c.passed);
    let code = if all { EXIT_OK } else { EXIT_INTERNAL };
    #[derive(Serialize)]
    struct Out<'a> {
        passed: bool,
        checks: &'a [Check],
    }
    let text = envelope("selftest", &serde_json::json!({}), None, &Out { passed: all, checks: &checks })?;
    Ok(Outcome { text, code, notes: vec![] })
}
