use num_bigint::{BigInt, BigUint};
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Hook, Partition, SymTable};
use crate::error::{Error, Result};
use crate::scalar::{binomial_exact, Real};

fn check_degree<T: Real>(hook: Hook, table: &SymTable<T>) -> Result<()> {
    let needed = hook.degree();
    if table.max_h_degree() < needed {
        return Err(Error::TableTooShort {
            needed,
            available: table.max_h_degree(),
        });
    }
    Ok(())
}

/// Hook Schur polynomial `s_(a|b)` at the table's point, through the
/// bilinear expansion `Σ_j (-1)^j h_{a-j} e_{b+j+1}`.
///
/// Terms with `b + j + 1 > n` vanish, so at most `n - b` products are summed.
pub fn schur_hook<T: Real>(hook: Hook, table: &SymTable<T>) -> Result<Complex<T>> {
    check_degree(hook, table)?;
    let n = table.n_vars();
    if hook.b >= n {
        return Ok(Complex::zero());
    }
    let jmax = hook.a.min(n - hook.b - 1);
    let mut acc = Complex::zero();
    for j in 0..=jmax {
        let term = table.h_unchecked(hook.a - j) * table.e((hook.b + j + 1) as isize);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// The dual bilinear expansion `Σ_k (-1)^k h_{a+k+1} e_{b-k}`.
pub fn schur_hook_dual<T: Real>(hook: Hook, table: &SymTable<T>) -> Result<Complex<T>> {
    check_degree(hook, table)?;
    let mut acc = Complex::zero();
    for k in 0..=hook.b {
        let term = table.h_unchecked(hook.a + k + 1) * table.e((hook.b - k) as isize);
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// `s_(a|b)(1_n) = C(n+a, a+b+1) C(a+b, b)`, exactly. Zero when `b >= n`.
pub fn schur_hook_ones(hook: Hook, n: usize) -> BigUint {
    let (a, b, n) = (hook.a as u64, hook.b as u64, n as u64);
    binomial_exact(n + a, a + b + 1) * binomial_exact(a + b, b)
}

/// `s_λ(1_n)` from the hook-content product over cells, in exact rationals.
///
/// Cells with content `n + col - row = 0` make the product vanish, which is
/// how `ℓ(λ) > n` yields zero.
pub fn schur_ones_general(lam: &Partition, n: usize) -> Result<BigUint> {
    let conj = lam.conjugate();
    let mut acc = BigRational::one();
    for (row, col) in lam.cells() {
        let content = n as i64 + col as i64 - row as i64;
        if content == 0 {
            return Ok(BigUint::zero());
        }
        let arm = lam.part(row) - col;
        let leg = conj.part(col) - row;
        let hook_len = (arm + leg + 1) as i64;
        acc *= BigRational::new(BigInt::from(content), BigInt::from(hook_len));
    }
    if !acc.is_integer() || acc.is_negative() {
        return Err(Error::Internal(format!(
            "hook-content product for {lam} at n = {n} is {acc}, not a nonnegative integer"
        )));
    }
    Ok(acc.to_integer().to_biguint().expect("checked nonnegative"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::to_complex;

    fn table(pt: &[f64], d: usize) -> SymTable<f64> {
        SymTable::build_real(pt, d).unwrap()
    }

    #[test]
    fn hook_21_at_ones() {
        let t = table(&[1.0, 1.0], 3);
        assert_eq!(schur_hook(Hook::new(1, 1), &t).unwrap().re, 2.0);
        assert_eq!(schur_hook_dual(Hook::new(1, 1), &t).unwrap().re, 2.0);
    }

    #[test]
    fn hook_21_is_xy_times_sum() {
        let (x, y) = (0.3, -1.7);
        let t = table(&[x, y], 3);
        let s = schur_hook(Hook::new(1, 1), &t).unwrap().re;
        assert!((s - x * y * (x + y)).abs() < 1e-14);
    }

    #[test]
    fn column_and_row_hooks() {
        let mut pt = to_complex(&[0.4, -0.2, 0.9]);
        pt.push(Complex::new(0.1, 0.5));
        let t = SymTable::build(&pt, 8).unwrap();
        for b in 0..4 {
            let s = schur_hook(Hook::new(0, b), &t).unwrap();
            assert!((s - t.e(b as isize + 1)).norm() < 1e-14);
        }
        for a in 0..7 {
            let s = schur_hook(Hook::new(a, 0), &t).unwrap();
            assert!((s - t.h(a as isize + 1).unwrap()).norm() < 1e-13);
        }
    }

    #[test]
    fn too_short_table_is_an_error() {
        let t = table(&[1.0, 2.0], 2);
        assert_eq!(
            schur_hook(Hook::new(1, 1), &t),
            Err(Error::TableTooShort { needed: 3, available: 2 })
        );
    }

    #[test]
    fn leg_past_variable_count_vanishes() {
        let t = table(&[1.0, 2.0], 5);
        assert_eq!(schur_hook(Hook::new(1, 2), &t).unwrap(), Complex::zero());
        assert_eq!(schur_hook_dual(Hook::new(1, 2), &t).unwrap(), Complex::zero());
    }

    #[test]
    fn hook_content_examples() {
        assert_eq!(schur_hook_ones(Hook::new(1, 1), 2), BigUint::from(2u32));
        assert_eq!(schur_hook_ones(Hook::new(1, 0), 2), BigUint::from(3u32));
        for b in 1..8 {
            assert_eq!(schur_hook_ones(Hook::new(0, b - 1), b), BigUint::one());
        }
        assert_eq!(schur_hook_ones(Hook::new(2, 3), 3), BigUint::zero());
    }

    #[test]
    fn general_hook_content_examples() {
        let p21 = Partition::new(vec![2, 1]).unwrap();
        assert_eq!(schur_ones_general(&p21, 3).unwrap(), BigUint::from(8u32));
        assert_eq!(schur_ones_general(&p21, 2).unwrap(), BigUint::from(2u32));
        let p1 = Partition::new(vec![1]).unwrap();
        assert_eq!(schur_ones_general(&p1, 5).unwrap(), BigUint::from(5u32));
        let p111 = Partition::new(vec![1, 1, 1]).unwrap();
        assert_eq!(schur_ones_general(&p111, 2).unwrap(), BigUint::zero());
    }

    #[test]
    fn general_formula_matches_hook_formula() {
        for a in 0..7 {
            for b in 0..7 {
                for n in 1..10 {
                    let h = Hook::new(a, b);
                    assert_eq!(
                        schur_ones_general(&h.to_partition(), n).unwrap(),
                        schur_hook_ones(h, n),
                        "{h} n={n}"
                    );
                }
            }
        }
    }
}
