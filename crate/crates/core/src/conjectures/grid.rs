use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::scalar::Real;

/// Tolerance used when matching a node with its conjugate.
pub const CONJUGATION_TOLERANCE: f64 = 1e-12;

/// Nodes closed under conjugation, with every real node repeated an even
/// number of times. Such grids have real characteristic polynomials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = ""))]
pub struct SelfConjugateGrid<T: Real> {
    pub nodes: Vec<Complex<T>>,
}

impl<T: Real> SelfConjugateGrid<T> {
    pub fn new(nodes: Vec<Complex<T>>) -> Result<Self> {
        if !is_self_conjugate(&nodes) {
            return Err(Error::NotSelfConjugate);
        }
        Ok(Self { nodes })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes shifted by `c`.
    pub fn shifted(&self, c: T) -> Vec<Complex<T>> {
        self.nodes.iter().map(|z| z + c).collect()
    }

    pub fn in_closed_unit_disc(&self) -> bool {
        self.nodes.iter().all(|z| z.norm() <= T::one() + T::lit(CONJUGATION_TOLERANCE))
    }
}

/// Multiset check: every node is paired with a distinct node equal to its
/// conjugate. Real nodes therefore pair with an equal real node.
pub fn is_self_conjugate<T: Real>(nodes: &[Complex<T>]) -> bool {
    let tol = T::lit(CONJUGATION_TOLERANCE);
    let mut used = vec![false; nodes.len()];
    for i in 0..nodes.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let target = nodes[i].conj();
        match (i + 1..nodes.len()).find(|&j| !used[j] && (nodes[j] - target).norm() <= tol) {
            Some(j) => used[j] = true,
            None => return false,
        }
    }
    true
}

/// Where sampled nodes live.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    UnitDisc,
    RightHalfDisc,
    UnitCircle,
}

impl std::str::FromStr for Region {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit_disc" => Ok(Self::UnitDisc),
            "right_half_disc" => Ok(Self::RightHalfDisc),
            "unit_circle" => Ok(Self::UnitCircle),
            other => Err(Error::Precondition(format!("unknown region {other:?}"))),
        }
    }
}

/// Probability that a sampled pair is a doubled real point.
pub const DEFAULT_P_REAL: f64 = 0.2;

/// Draws `n/2` points from `region` and emits each together with its
/// conjugate; with probability `p_real` the point is real and doubled.
pub fn sample_self_conjugate<T: Real, R: Rng + ?Sized>(
    n: usize,
    region: Region,
    p_real: f64,
    rng: &mut R,
) -> Result<SelfConjugateGrid<T>> {
    ensure(n % 2 == 0, || format!("self-conjugate sampling needs even n, got {n}"))?;
    ensure((0.0..=1.0).contains(&p_real), || format!("p_real = {p_real} outside [0, 1]"))?;
    use std::f64::consts::{FRAC_PI_2, PI};
    let mut nodes = Vec::with_capacity(n);
    for _ in 0..n / 2 {
        let z = if rng.gen_bool(p_real) {
            let x: f64 = match region {
                Region::UnitDisc => rng.gen_range(-1.0..=1.0),
                Region::RightHalfDisc => rng.gen_range(0.0..=1.0),
                Region::UnitCircle => {
                    if rng.gen_bool(0.5) {
                        1.0
                    } else {
                        -1.0
                    }
                }
            };
            Complex::new(x, 0.0)
        } else {
            let (rho, theta): (f64, f64) = match region {
                Region::UnitDisc => (rng.gen::<f64>().sqrt(), rng.gen_range(-PI..PI)),
                Region::RightHalfDisc => (rng.gen::<f64>().sqrt(), rng.gen_range(-FRAC_PI_2..=FRAC_PI_2)),
                Region::UnitCircle => (1.0, rng.gen_range(-PI..PI)),
            };
            Complex::from_polar(rho, theta)
        };
        let z = Complex::new(T::lit(z.re), T::lit(z.im));
        nodes.push(z);
        nodes.push(z.conj());
    }
    Ok(SelfConjugateGrid { nodes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn membership_examples() {
        assert!(is_self_conjugate(&[c(0.0, 1.0), c(0.0, -1.0)]));
        assert!(!is_self_conjugate(&[c(0.0, 1.0), c(0.0, 1.0)]));
        assert!(is_self_conjugate(&[c(0.5, 0.0), c(0.5, 0.0)]));
        assert!(!is_self_conjugate(&[c(0.5, 0.0)]));
        assert!(is_self_conjugate(&[c(0.2, 0.3), c(0.2, 0.3), c(0.2, -0.3), c(0.2, -0.3)]));
        assert!(!is_self_conjugate(&[c(0.2, 0.3), c(0.2, 0.3), c(0.2, -0.3), c(0.5, 0.0)]));
        assert!(is_self_conjugate::<f64>(&[]));
    }

    #[test]
    fn sampler_respects_region() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let g: SelfConjugateGrid<f64> =
                sample_self_conjugate(6, Region::RightHalfDisc, 0.3, &mut rng).unwrap();
            assert!(is_self_conjugate(&g.nodes));
            assert!(g.nodes.iter().all(|z| z.re >= 0.0 && z.norm() <= 1.0 + 1e-15));
            let g: SelfConjugateGrid<f64> =
                sample_self_conjugate(4, Region::UnitCircle, 0.3, &mut rng).unwrap();
            assert!(g.nodes.iter().all(|z| (z.norm() - 1.0).abs() < 1e-14));
        }
        let g: SelfConjugateGrid<f64> = sample_self_conjugate(2, Region::UnitDisc, 1.0, &mut rng).unwrap();
        assert_eq!(g.nodes[0], g.nodes[1]);
        assert_eq!(g.nodes[0].im, 0.0);
        assert!(sample_self_conjugate::<f64, _>(3, Region::UnitDisc, 0.2, &mut rng).is_err());
    }

    #[test]
    fn region_parsing() {
        assert_eq!("right_half_disc".parse::<Region>().unwrap(), Region::RightHalfDisc);
        assert!("half".parse::<Region>().is_err());
    }
}
