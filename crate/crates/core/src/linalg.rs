//! Small dense matrices over a commutative ring.

use std::collections::HashMap;
use std::ops::{Add, Mul, Neg};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::{Field, Scalar};

pub type Matrix<T> = Vec<Vec<T>>;

/// Division-free determinant by cofactor expansion along rows, memoized on
/// the set of remaining columns (`O(n 2^n)` ring operations).
pub fn determinant_with<T>(a: &[Vec<T>], zero: T, one: T, is_zero: impl Fn(&T) -> bool) -> T
where
    T: Clone + Add<Output = T> + Mul<Output = T> + Neg<Output = T>,
{
    let n = a.len();
    assert!(n < 64, "matrix too large");
    assert!(a.iter().all(|r| r.len() == n), "matrix must be square");
    let mut memo: HashMap<u64, T> = HashMap::new();
    minor(a, 0, (1u64 << n) - 1, &zero, &one, &is_zero, &mut memo)
}

fn minor<T>(
    a: &[Vec<T>],
    row: usize,
    cols: u64,
    zero: &T,
    one: &T,
    is_zero: &impl Fn(&T) -> bool,
    memo: &mut HashMap<u64, T>,
) -> T
where
    T: Clone + Add<Output = T> + Mul<Output = T> + Neg<Output = T>,
{
    if row == a.len() {
        return one.clone();
    }
    if let Some(v) = memo.get(&cols) {
        return v.clone();
    }
    let mut acc = zero.clone();
    let mut sign_positive = true;
    for c in 0..a.len() {
        if cols & (1 << c) == 0 {
            continue;
        }
        let entry = &a[row][c];
        if !is_zero(entry) {
            let sub = minor(a, row + 1, cols & !(1 << c), zero, one, is_zero, memo);
            let term = entry.clone() * sub;
            acc = if sign_positive { acc + term } else { acc + (-term) };
        }
        sign_positive = !sign_positive;
    }
    memo.insert(cols, acc.clone());
    acc
}

pub fn determinant<C: Scalar>(a: &[Vec<C>]) -> C {
    determinant_with(a, C::zero(), C::one(), C::is_zero)
}

pub fn polynomial_determinant<C: Scalar>(a: &[Vec<Polynomial<C>>], num_vars: usize) -> Polynomial<C> {
    determinant_with(a, Polynomial::zero(num_vars), Polynomial::one(num_vars), Polynomial::is_zero)
}

pub fn identity<C: Scalar>(n: usize) -> Matrix<C> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { C::one() } else { C::zero() }).collect())
        .collect()
}

pub fn mat_mul<C: Scalar>(a: &[Vec<C>], b: &[Vec<C>]) -> Matrix<C> {
    let n = a.len();
    let k = b.len();
    let p = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| {
            (0..p)
                .map(|j| (0..k).fold(C::zero(), |acc, t| acc + a[i][t].clone() * b[t][j].clone()))
                .collect()
        })
        .collect()
}

/// Gauss-Jordan inverse over a field.
pub fn inverse<C: Field>(a: &[Vec<C>]) -> Result<Matrix<C>> {
    let n = a.len();
    let mut work: Matrix<C> = a.to_vec();
    let mut inv = identity::<C>(n);
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !work[r][col].is_zero())
            .ok_or_else(|| Error::NotInvertible("singular matrix".into()))?;
        work.swap(col, pivot);
        inv.swap(col, pivot);
        let scale = work[col][col].checked_inverse()?;
        for j in 0..n {
            work[col][j] = work[col][j].clone() * scale.clone();
            inv[col][j] = inv[col][j].clone() * scale.clone();
        }
        for r in 0..n {
            if r == col || work[r][col].is_zero() {
                continue;
            }
            let f = work[r][col].clone();
            for j in 0..n {
                work[r][j] = work[r][j].clone() - f.clone() * work[col][j].clone();
                inv[r][j] = inv[r][j].clone() - f.clone() * inv[col][j].clone();
            }
        }
    }
    Ok(inv)
}

/// `(A v)_i = sum_j A_ij v_j` for a vector of polynomials.
pub fn apply_to_polynomials<C: Scalar>(a: &[Vec<C>], v: &[Polynomial<C>]) -> Vec<Polynomial<C>> {
    let num_vars = v.first().map_or(0, Polynomial::num_vars);
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Polynomial::zero(num_vars), |acc, (c, p)| &acc + &p.scale(c))
        })
        .collect()
}
