//! Worst-case amplitudes over Reinhardt domains whose log-orthant part is a
//! polytope given by (a superset of) its vertices.

use std::path::Path;
use std::sync::Mutex;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::amplitude::hook_profile;
use crate::error::{ensure, Error, Result};
use crate::scalar::{binomial_exact, Real};

/// `F_t(r | w) = Σ_k w_k s_(t-n|n-k)(r)`. Same value as
/// [`crate::amplitude::max_amplitude_polydisc`].
pub fn f_t<T: Real>(radii: &[T], weights: &[T], t: usize) -> Result<T> {
    ensure(weights.len() == radii.len(), || {
        format!("{} weights for {} radii", weights.len(), radii.len())
    })?;
    let profile = hook_profile(radii, t)?;
    Ok(dot(&profile, weights))
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

/// Root domain whose orthant part has `log(Z_+) = Conv(vertices)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = ""))]
pub struct LogAffineRootDomain<T: Real> {
    pub vertices: Vec<Vec<T>>,
    #[serde(default)]
    pub label: String,
}

impl<T: Real> LogAffineRootDomain<T> {
    pub fn new(vertices: Vec<Vec<T>>, label: impl Into<String>) -> Result<Self> {
        let d = Self { vertices, label: label.into() };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        let first = self.vertices.first().ok_or(Error::EmptyVertexList)?;
        let n = first.len();
        ensure(n >= 1, || "vertices must have positive dimension".into())?;
        ensure(self.vertices.iter().all(|v| v.len() == n), || {
            "vertices differ in dimension".into()
        })?;
        ensure(self.vertices.iter().flatten().all(|x| x.is_finite()), || {
            "vertex coordinates must be finite".into()
        })
    }

    pub fn dim(&self) -> usize {
        self.vertices.first().map_or(0, Vec::len)
    }

    /// The polydisc `D_n(r)`: the single vertex `log r`.
    pub fn polydisc(radii: &[T]) -> Self {
        Self { vertices: vec![radii.iter().map(|r| r.ln()).collect()], label: "polydisc".into() }
    }

    /// `{r >= 1_n : Π r_k <= q}`: the origin and `log(q) e_i`.
    pub fn bounded_product(n: usize, q: T) -> Self {
        let mut vertices = vec![vec![T::zero(); n]];
        for i in 0..n {
            let mut v = vec![T::zero(); n];
            v[i] = q.ln();
            vertices.push(v);
        }
        Self { vertices, label: "bounded-product".into() }
    }

    /// `{p 1_n + (1-p) x : ‖x‖_∞ <= 1}`: all `2^n` cube corners.
    pub fn shifted_cube(n: usize, p: T) -> Self {
        let vertices = (0..1usize << n)
            .map(|mask| {
                (0..n)
                    .map(|i| {
                        let s = if mask >> i & 1 == 1 { T::one() } else { -T::one() };
                        p + (T::one() - p) * s
                    })
                    .collect()
            })
            .collect();
        Self { vertices, label: "shifted-cube".into() }
    }
}

/// Linear maximization over the orthant part `S_+` of the initial-value domain.
pub trait InitDomainOracle<T: Real> {
    fn dim(&self) -> usize;

    /// `argmax_{w ∈ S_+} c·w` and its value.
    fn maximize(&self, c: &[T]) -> Result<(Vec<T>, T)>;
}

/// `S_+ = Π [0, bounds_k]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = ""))]
pub struct PolydiscOracle<T: Real> {
    pub bounds: Vec<T>,
}

impl<T: Real> InitDomainOracle<T> for PolydiscOracle<T> {
    fn dim(&self) -> usize {
        self.bounds.len()
    }

    fn maximize(&self, c: &[T]) -> Result<(Vec<T>, T)> {
        check_direction(self.dim(), c)?;
        Ok((self.bounds.clone(), dot(c, &self.bounds)))
    }
}

/// `S_+ = {w >= 0 : Σ a_k w_k <= 1}` with `a > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = ""))]
pub struct WeightedL1Oracle<T: Real> {
    pub a: Vec<T>,
}

impl<T: Real> InitDomainOracle<T> for WeightedL1Oracle<T> {
    fn dim(&self) -> usize {
        self.a.len()
    }

    fn maximize(&self, c: &[T]) -> Result<(Vec<T>, T)> {
        check_direction(self.dim(), c)?;
        let n = self.dim();
        let mut best: Option<(usize, T)> = None;
        for k in 0..n {
            let ratio = c[k] / self.a[k];
            if ratio > T::zero() && best.map_or(true, |(_, b)| ratio > b) {
                best = Some((k, ratio));
            }
        }
        let mut w = vec![T::zero(); n];
        match best {
            Some((k, ratio)) => {
                w[k] = T::one() / self.a[k];
                Ok((w, ratio))
            }
            None => Ok((w, T::zero())),
        }
    }
}

/// `S_+` given as an explicit finite set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = ""))]
pub struct PointSetOracle<T: Real> {
    pub points: Vec<Vec<T>>,
}

impl<T: Real> InitDomainOracle<T> for PointSetOracle<T> {
    fn dim(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    fn maximize(&self, c: &[T]) -> Result<(Vec<T>, T)> {
        check_direction(self.dim(), c)?;
        let mut best: Option<(usize, T)> = None;
        for (i, p) in self.points.iter().enumerate() {
            let v = dot(c, p);
            if best.map_or(true, |(_, b)| v > b) {
                best = Some((i, v));
            }
        }
        let (i, v) = best.ok_or_else(|| Error::Precondition("empty point set".into()))?;
        Ok((self.points[i].clone(), v))
    }
}

fn check_direction<T: Real>(dim: usize, c: &[T]) -> Result<()> {
    ensure(c.len() == dim, || format!("direction has length {}, oracle dimension {dim}", c.len()))
}

/// The built-in initial-value domains, as read from domain files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", bound(deserialize = ""))]
pub enum StandardOracle<T: Real> {
    Polydisc(PolydiscOracle<T>),
    L1(WeightedL1Oracle<T>),
    Points(PointSetOracle<T>),
}

impl<T: Real> StandardOracle<T> {
    pub fn polydisc(bounds: Vec<T>) -> Result<Self> {
        ensure(bounds.iter().all(|&b| b >= T::zero() && b.is_finite()), || {
            "polydisc bounds must be finite and nonnegative".into()
        })?;
        Ok(Self::Polydisc(PolydiscOracle { bounds }))
    }

    pub fn l1(a: Vec<T>) -> Result<Self> {
        ensure(a.iter().all(|&x| x > T::zero() && x.is_finite()), || {
            "l1 weights must be finite and positive".into()
        })?;
        Ok(Self::L1(WeightedL1Oracle { a }))
    }

    pub fn points(points: Vec<Vec<T>>) -> Result<Self> {
        ensure(!points.is_empty(), || "point set must be nonempty".into())?;
        let n = points[0].len();
        ensure(points.iter().all(|p| p.len() == n), || "points differ in dimension".into())?;
        ensure(points.iter().flatten().all(|&x| x >= T::zero() && x.is_finite()), || {
            "points must be finite and nonnegative".into()
        })?;
        Ok(Self::Points(PointSetOracle { points }))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Polydisc(o) => Self::polydisc(o.bounds.clone()).map(|_| ()),
            Self::L1(o) => Self::l1(o.a.clone()).map(|_| ()),
            Self::Points(o) => Self::points(o.points.clone()).map(|_| ()),
        }
    }
}

impl<T: Real> InitDomainOracle<T> for StandardOracle<T> {
    fn dim(&self) -> usize {
        match self {
            Self::Polydisc(o) => o.dim(),
            Self::L1(o) => o.dim(),
            Self::Points(o) => o.dim(),
        }
    }

    fn maximize(&self, c: &[T]) -> Result<(Vec<T>, T)> {
        match self {
            Self::Polydisc(o) => o.maximize(c),
            Self::L1(o) => o.maximize(c),
            Self::Points(o) => o.maximize(c),
        }
    }
}

/// Makes any oracle safe to share across threads by serializing calls.
pub struct Serialized<O>(Mutex<O>);

impl<O> Serialized<O> {
    pub fn new(oracle: O) -> Self {
        Self(Mutex::new(oracle))
    }
}

impl<T: Real, O: InitDomainOracle<T>> InitDomainOracle<T> for Serialized<O> {
    fn dim(&self) -> usize {
        self.0.lock().unwrap_or_else(|e| e.into_inner()).dim()
    }

    fn maximize(&self, c: &[T]) -> Result<(Vec<T>, T)> {
        self.0.lock().unwrap_or_else(|e| e.into_inner()).maximize(c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = ""))]
pub struct ReinhardtSolution<T: Real> {
    pub r_star: Vec<T>,
    pub w_star: Vec<T>,
    pub value: T,
    pub argmax_vertex_index: usize,
    /// `F_t(exp(v) | S_+)` for every input vertex, in input order.
    pub vertex_values: Vec<T>,
}

/// Evaluates `F_t(exp(v) | S_+)` at every vertex, keeps the best one
/// (smallest index on ties) and re-solves the initial-value problem there.
pub fn vertex_method<T: Real, O: InitDomainOracle<T> + Sync>(
    domain: &LogAffineRootDomain<T>,
    init_oracle: &O,
    t: usize,
) -> Result<ReinhardtSolution<T>> {
    domain.validate()?;
    let n = domain.dim();
    ensure(init_oracle.dim() == n, || {
        format!("oracle dimension {} differs from vertex dimension {n}", init_oracle.dim())
    })?;
    ensure(t >= n, || format!("t = {t} must be at least n = {n}"))?;
    let vertex_values = domain
        .vertices
        .par_iter()
        .map(|v| {
            let r: Vec<T> = v.iter().map(|x| x.exp()).collect();
            let c = hook_profile(&r, t)?;
            init_oracle.maximize(&c).map(|(_, value)| value)
        })
        .collect::<Result<Vec<T>>>()?;
    let mut best = 0;
    for (i, &v) in vertex_values.iter().enumerate() {
        if v > vertex_values[best] {
            best = i;
        }
    }
    let r_star: Vec<T> = domain.vertices[best].iter().map(|x| x.exp()).collect();
    let (w_star, _) = init_oracle.maximize(&hook_profile(&r_star, t)?)?;
    let value = f_t(&r_star, &w_star, t)?;
    Ok(ReinhardtSolution { r_star, w_star, value, argmax_vertex_index: best, vertex_values })
}

/// Drops every vertex dominated componentwise by another one. Of several
/// equal vertices the first is kept.
pub fn dominated_vertex_filter<T: Real>(vertices: &[Vec<T>]) -> Vec<Vec<T>> {
    let dominates = |a: &[T], b: &[T]| a.iter().zip(b).all(|(x, y)| x >= y);
    vertices
        .iter()
        .enumerate()
        .filter(|&(i, v)| {
            !vertices.iter().enumerate().any(|(j, u)| {
                j != i && dominates(u, v) && (u != v || j < i)
            })
        })
        .map(|(_, v)| v.clone())
        .collect()
}

/// Contents of a domain file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = ""))]
pub struct DomainSpec<T: Real> {
    pub n: usize,
    pub t: usize,
    pub vertices: Vec<Vec<T>>,
    pub init_oracle: StandardOracle<T>,
    #[serde(default)]
    pub label: String,
}

impl<T: Real> DomainSpec<T> {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text)
            .map_err(|e| Error::Precondition(format!("invalid domain file: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Precondition(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.domain()?;
        self.init_oracle.validate()?;
        ensure(self.vertices[0].len() == self.n, || {
            format!("vertices have dimension {}, expected n = {}", self.vertices[0].len(), self.n)
        })
    }

    pub fn domain(&self) -> Result<LogAffineRootDomain<T>> {
        LogAffineRootDomain::new(self.vertices.clone(), self.label.clone())
    }

    pub fn solve(&self) -> Result<ReinhardtSolution<T>> {
        self.validate()?;
        vertex_method(&self.domain()?, &self.init_oracle, self.t)
    }
}

/// `e_d(q, 1_n) = C(n,d) + q C(n,d-1)`.
pub fn e_q_ones_closed(q: u64, n: usize, d: usize) -> BigUint {
    let (n, d) = (n as u64, d as u64);
    let tail = if d == 0 { BigUint::from(0u32) } else { binomial_exact(n, d - 1) };
    binomial_exact(n, d) + BigUint::from(q) * tail
}

/// `h_d(q, 1_n) = Σ_{k=0}^d q^{d-k} C(n+k-1, k)`.
pub fn h_q_ones_closed(q: u64, n: usize, d: usize) -> BigUint {
    (0..=d as u64).fold(BigUint::from(0u32), |acc, k| {
        let count = if n == 0 {
            BigUint::from(u32::from(k == 0))
        } else {
            binomial_exact(n as u64 + k - 1, k)
        };
        acc + BigUint::from(q).pow((d as u64 - k) as u32) * count
    })
}
