use std::io::Write;

use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{ensure, Result};
use crate::scalar::Real;
use crate::symfunc::SymTable;

/// A homogeneous linear recurrence given by its characteristic roots.
///
/// `coeffs[j]` is the coefficient of `z^j` in `∏(z - z_k)`; `coeffs[n] = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecurrenceSpec<T: Real> {
    roots: Vec<Complex<T>>,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> RecurrenceSpec<T> {
    pub fn roots(&self) -> &[Complex<T>] {
        &self.roots
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// Order `n` of the recurrence.
    pub fn order(&self) -> usize {
        self.roots.len()
    }

    /// Characteristic polynomial at `z` (Horner).
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.coeffs.iter().rev().fold(Complex::zero(), |acc, &c| acc * z + c)
    }

    /// Writes `x_0..=x_T` as CSV with columns `t,re,im,abs`.
    pub fn write_trajectory_csv<W: Write>(trajectory: &[Complex<T>], out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "re", "im", "abs"])?;
        for (t, x) in trajectory.iter().enumerate() {
            w.write_record(&[
                t.to_string(),
                x.re.to_string(),
                x.im.to_string(),
                x.norm().to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Monic characteristic coefficients from the roots:
/// `f_j = (-1)^{n-j} e_{n-j}(z)`.
pub fn char_poly_from_roots<T: Real>(roots: &[Complex<T>]) -> Result<RecurrenceSpec<T>> {
    let table = SymTable::build(roots, 0)?;
    let n = roots.len();
    let coeffs = (0..=n)
        .map(|j| {
            let e = table.e((n - j) as isize);
            if (n - j) % 2 == 0 {
                e
            } else {
                -e
            }
        })
        .collect();
    Ok(RecurrenceSpec { roots: roots.to_vec(), coeffs })
}

/// Runs `x_{t+n} = -Σ_{j<n} f_j x_{t+j}` from `init = x_0..x_{n-1}` and
/// returns `x_0..=x_horizon`.
pub fn simulate<T: Real>(
    spec: &RecurrenceSpec<T>,
    init: &[Complex<T>],
    horizon: usize,
) -> Result<Vec<Complex<T>>> {
    let n = spec.order();
    ensure(init.len() == n, || format!("need {n} initial values, got {}", init.len()))?;
    ensure(horizon + 1 >= n, || format!("horizon {horizon} shorter than the initial window {n}"))?;
    let mut x = init.to_vec();
    x.reserve(horizon + 1 - n);
    for t in 0..(horizon + 1 - n) {
        let next = spec.coeffs[..n]
            .iter()
            .zip(&x[t..t + n])
            .fold(Complex::zero(), |acc, (&f, &xv)| acc - f * xv);
        x.push(next);
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::to_complex;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn coefficient_examples() {
        let s = char_poly_from_roots(&to_complex(&[1.0, 1.0])).unwrap();
        assert_eq!(s.coeffs(), &to_complex(&[1.0, -2.0, 1.0])[..]);
        let a = c(0.3, -0.4);
        let s = char_poly_from_roots(&[a]).unwrap();
        assert_eq!(s.coeffs(), &[-a, c(1.0, 0.0)]);
        let s = char_poly_from_roots(&[c(0.0, 1.0), c(0.0, -1.0)]).unwrap();
        assert_eq!(s.coeffs(), &to_complex(&[1.0, 0.0, 1.0])[..]);
    }

    #[test]
    fn roots_annihilate_polynomial() {
        let roots = vec![c(0.5, 0.1), c(-0.3, 0.8), c(0.9, 0.0), c(-0.2, -0.6)];
        let s = char_poly_from_roots(&roots).unwrap();
        for &z in &roots {
            assert!(s.eval(z).norm() < 1e-14);
        }
    }

    #[test]
    fn geometric_trajectory() {
        let s = char_poly_from_roots(&to_complex(&[0.5])).unwrap();
        let x = simulate(&s, &to_complex(&[1.0]), 3).unwrap();
        assert_eq!(x, to_complex(&[1.0, 0.5, 0.25, 0.125]));
    }

    #[test]
    fn double_unit_root_gives_linear_growth() {
        let s = char_poly_from_roots(&to_complex(&[1.0, 1.0])).unwrap();
        let x = simulate(&s, &to_complex(&[0.0, 1.0]), 3).unwrap();
        assert_eq!(x, to_complex(&[0.0, 1.0, 2.0, 3.0]));
    }

    #[test]
    fn zero_init_stays_zero() {
        let s = char_poly_from_roots(&[c(0.9, 0.2), c(-0.5, 0.5), c(0.1, 0.0)]).unwrap();
        let x = simulate(&s, &[Complex::zero(); 3], 20).unwrap();
        assert!(x.iter().all(|v| v.is_zero()));
    }

    #[test]
    fn bad_init_length() {
        let s = char_poly_from_roots(&to_complex(&[0.5, 0.5])).unwrap();
        assert!(simulate(&s, &to_complex(&[1.0]), 5).is_err());
        assert!(simulate(&s, &to_complex(&[1.0, 1.0]), 0).is_err());
    }

    #[test]
    fn trajectory_csv() {
        let traj = to_complex(&[1.0, -0.5]);
        let mut buf = Vec::new();
        RecurrenceSpec::write_trajectory_csv(&traj, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "t,re,im,abs\n0,1,0,1\n1,-0.5,0,0.5\n");
    }
}
