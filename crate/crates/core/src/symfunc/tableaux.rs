use num_complex::Complex;
use num_traits::{One, Zero};

use super::{partitions_of, Partition};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest diagram size accepted by the tableau enumerators.
pub const KOSTKA_SIZE_CAP: usize = 14;

/// A semistandard Young tableau: rows weakly increase, columns strictly
/// increase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ssyt {
    shape: Partition,
    rows: Vec<Vec<usize>>,
}

impl Ssyt {
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let shape = Partition::new(rows.iter().map(Vec::len).collect())?;
        let t = Self { shape, rows };
        if t.is_semistandard() {
            Ok(t)
        } else {
            Err(Error::Precondition(format!("{:?} is not semistandard", t.rows)))
        }
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// Multiplicities of `1, 2, ..., max` among the entries.
    pub fn content(&self) -> Vec<usize> {
        let max = self.rows.iter().flatten().copied().max().unwrap_or(0);
        let mut out = vec![0; max];
        for &v in self.rows.iter().flatten() {
            out[v - 1] += 1;
        }
        out
    }

    fn is_semistandard(&self) -> bool {
        let positive = self.rows.iter().flatten().all(|&v| v >= 1);
        let rows_ok = self.rows.iter().all(|r| r.windows(2).all(|w| w[0] <= w[1]));
        let cols_ok = self
            .rows
            .windows(2)
            .all(|pair| pair[1].iter().zip(&pair[0]).all(|(below, above)| below > above));
        positive && rows_ok && cols_ok
    }
}

fn check_cap(size: usize) -> Result<()> {
    if size > KOSTKA_SIZE_CAP {
        Err(Error::SizeCapExceeded { size, cap: KOSTKA_SIZE_CAP })
    } else {
        Ok(())
    }
}

/// Every SSYT of shape `shape` with entries in `1..=max_entry`.
pub fn enumerate_ssyt(shape: &Partition, max_entry: usize) -> Result<Vec<Ssyt>> {
    check_cap(shape.size())?;
    let cells: Vec<(usize, usize)> = shape.cells().map(|(r, c)| (r - 1, c - 1)).collect();
    let mut rows: Vec<Vec<usize>> = shape.parts().iter().map(|&p| vec![0; p]).collect();
    let mut out = Vec::new();

    fn rec(
        idx: usize,
        cells: &[(usize, usize)],
        rows: &mut Vec<Vec<usize>>,
        max_entry: usize,
        shape: &Partition,
        out: &mut Vec<Ssyt>,
    ) {
        if idx == cells.len() {
            out.push(Ssyt { shape: shape.clone(), rows: rows.clone() });
            return;
        }
        let (r, c) = cells[idx];
        let lo_left = if c > 0 { rows[r][c - 1] } else { 1 };
        let lo_above = if r > 0 { rows[r - 1][c] + 1 } else { 1 };
        for v in lo_left.max(lo_above)..=max_entry {
            rows[r][c] = v;
            rec(idx + 1, cells, rows, max_entry, shape, out);
        }
        rows[r][c] = 0;
    }

    rec(0, &cells, &mut rows, max_entry, shape, &mut out);
    Ok(out)
}

/// Kostka number `K_{λμ}`: the number of SSYTs of shape `λ` and type `μ`.
///
/// Counted by adding one horizontal strip of size `μ_i` per value `i`.
pub fn kostka(lam: &Partition, mu: &Partition) -> Result<u64> {
    check_cap(lam.size())?;
    check_cap(mu.size())?;
    if lam.size() != mu.size() {
        return Ok(0);
    }
    let target: Vec<usize> = lam.parts().to_vec();
    let mut current = vec![0usize; target.len()];

    fn add_strip(
        row: usize,
        remaining: usize,
        before: &[usize],
        current: &mut Vec<usize>,
        target: &[usize],
        mu: &[usize],
        step: usize,
    ) -> u64 {
        if row == target.len() {
            return if remaining == 0 { count(step + 1, current, target, mu) } else { 0 };
        }
        // Horizontal strip: the new row length may not exceed the old length
        // of the row above.
        let cap = if row == 0 { target[0] } else { target[row].min(before[row - 1]) };
        let base = before[row];
        let mut total = 0;
        let max_add = cap.saturating_sub(base).min(remaining);
        for add in 0..=max_add {
            current[row] = base + add;
            total += add_strip(row + 1, remaining - add, before, current, target, mu, step);
        }
        current[row] = base;
        total
    }

    fn count(step: usize, current: &mut Vec<usize>, target: &[usize], mu: &[usize]) -> u64 {
        if step == mu.len() {
            return u64::from(current.as_slice() == target);
        }
        let before = current.clone();
        add_strip(0, mu[step], &before, current, target, mu, step)
    }

    Ok(count(0, &mut current, &target, mu.parts()))
}

/// Calls `visit` on every distinct permutation of `items` (sorted first).
fn for_each_distinct_permutation(items: &mut [usize], mut visit: impl FnMut(&[usize])) {
    items.sort_unstable();
    loop {
        visit(items);
        // next lexicographic permutation
        let Some(i) = (1..items.len()).rev().find(|&i| items[i - 1] < items[i]) else {
            return;
        };
        let j = (i..items.len()).rev().find(|&j| items[j] > items[i - 1]).expect("pivot");
        items.swap(i - 1, j);
        items[i..].reverse();
    }
}

/// Monomial symmetric polynomial `m_μ` at a point: the sum of the distinct
/// monomials `∏ z_i^{α_i}` over distinct rearrangements `α` of `μ` padded
/// with zeros. Two rearrangements that differ only by swapping equal
/// exponents are the same monomial and are counted once.
pub fn monomial_sym<T: Real>(mu: &Partition, point: &[Complex<T>]) -> Complex<T> {
    let n = point.len();
    if mu.len() > n {
        return Complex::zero();
    }
    let mut exps = mu.parts().to_vec();
    exps.resize(n, 0);
    let mut acc = Complex::zero();
    for_each_distinct_permutation(&mut exps, |alpha| {
        let mut term = Complex::one();
        for (&z, &a) in point.iter().zip(alpha) {
            if a > 0 {
                term *= z.powu(a as u32);
            }
        }
        acc += term;
    });
    acc
}

/// `s_λ = Σ_μ K_{λμ} m_μ` evaluated at a point. Independent of the
/// bilinear hook route; intended as a check.
pub fn schur_via_kostka<T: Real>(lam: &Partition, point: &[Complex<T>]) -> Result<Complex<T>> {
    check_cap(lam.size())?;
    let mut acc = Complex::zero();
    for mu in partitions_of(lam.size()) {
        if mu.len() > point.len() {
            continue;
        }
        let k = kostka(lam, &mu)?;
        if k > 0 {
            acc += monomial_sym(&mu, point) * T::from_u64(k).expect("count fits");
        }
    }
    Ok(acc)
}
