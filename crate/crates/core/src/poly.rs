//! Sparse multivariate polynomials over a [`Scalar`].
//!
//! Variables are anonymous slots `0..num_vars`; names are attached only when
//! rendering or parsing (see [`crate::naming`]). Terms are kept in a
//! `BTreeMap` keyed by [`ExponentVector`], whose ordering is graded: lower
//! total degree first, and within one degree the monomial with the larger
//! exponent on the earlier variable first. Iteration order is therefore the
//! canonical display order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::scalar::{falling_factorial, Scalar};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(exponents: Vec<u32>) -> Self {
        ExponentVector(exponents)
    }

    pub fn zeros(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    /// The exponent vector of the single variable `var`.
    pub fn unit(n: usize, var: usize) -> Self {
        let mut e = vec![0; n];
        e[var] = 1;
        ExponentVector(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn weighted_degree(&self, weights: &[u32]) -> u32 {
        self.0.iter().zip(weights).map(|(e, w)| e * w).sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn plus(&self, other: &Self) -> Self {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(v: Vec<u32>) -> Self {
        ExponentVector(v)
    }
}

impl std::ops::Index<usize> for ExponentVector {
    type Output = u32;

    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All exponent vectors in `n` variables of total degree exactly `d`, in
/// canonical order.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<ExponentVector> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<ExponentVector>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(ExponentVector(prefix.clone()));
            prefix.pop();
            return;
        }
        for k in (0..=d).rev() {
            prefix.push(k);
            rec(n, d - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, d, &mut Vec::new(), &mut out);
    }
    out
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial<C> {
    num_vars: usize,
    terms: BTreeMap<ExponentVector, C>,
}

impl<C: Scalar> Polynomial<C> {
    pub fn zero(num_vars: usize) -> Self {
        Polynomial {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, C::one())
    }

    pub fn constant(num_vars: usize, c: C) -> Self {
        Self::monomial(num_vars, ExponentVector::zeros(num_vars), c)
    }

    /// The variable in slot `var`.
    pub fn var(num_vars: usize, var: usize) -> Self {
        assert!(var < num_vars, "variable slot {var} out of range for {num_vars} variables");
        Self::monomial(num_vars, ExponentVector::unit(num_vars, var), C::one())
    }

    pub fn monomial(num_vars: usize, exponents: ExponentVector, c: C) -> Self {
        assert_eq!(exponents.len(), num_vars, "exponent vector length");
        let mut p = Self::zero(num_vars);
        p.add_term(exponents, c);
        p
    }

    /// Sums the given terms; repeated exponents accumulate.
    pub fn from_terms<I>(num_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ExponentVector, C)>,
    {
        let mut p = Self::zero(num_vars);
        for (e, c) in terms {
            if e.len() != num_vars {
                return Err(Error::DimensionMismatch {
                    expected: num_vars,
                    found: e.len(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn add_term(&mut self, exponents: ExponentVector, c: C) {
        debug_assert_eq!(exponents.len(), self.num_vars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exponents) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &C)> + '_ {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (ExponentVector, C)> {
        self.terms.into_iter()
    }

    pub fn coefficient_of(&self, e: &ExponentVector) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coefficient_of(&ExponentVector::zeros(self.num_vars))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(ExponentVector::is_constant)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(ExponentVector::total_degree).max()
    }

    pub fn weighted_degree(&self, weights: &[u32]) -> Option<u32> {
        self.terms.keys().map(|e| e.weighted_degree(weights)).max()
    }

    /// Every term has weighted degree exactly `degree` (vacuously true for 0).
    pub fn is_weighted_homogeneous(&self, weights: &[u32], degree: u32) -> bool {
        self.terms.keys().all(|e| e.weighted_degree(weights) == degree)
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.keys().any(|e| e[var] > 0)
    }

    /// Degree in slot `var`, 0 for polynomials not involving it.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.num_vars != other.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: other.num_vars,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Self::zero(self.num_vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.plus(e2), c1.clone() * c2.clone());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.num_vars);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, v)| (e.clone(), v.clone() * c.clone()))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        Polynomial {
            num_vars: self.num_vars,
            terms,
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.num_vars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative in a single slot.
    pub fn derivative(&self, var: usize) -> Self {
        self.derivative_n(var, 1)
    }

    fn derivative_n(&self, var: usize, k: u32) -> Self {
        let mut out = Self::zero(self.num_vars);
        for (e, c) in &self.terms {
            if e[var] < k {
                continue;
            }
            let factor = falling_factorial(e[var] as u64, k as u64);
            let mut ne = e.clone();
            ne.0[var] -= k;
            out.add_term(ne, c.clone() * C::from_integer(factor));
        }
        out
    }

    /// Iterated partial derivative `prod_i d^{order_i}/dx_i^{order_i}`.
    pub fn partial_derivative(&self, order: &ExponentVector) -> Result<Self> {
        if order.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: order.len(),
            });
        }
        let mut out = Self::zero(self.num_vars);
        'terms: for (e, c) in &self.terms {
            let mut factor = BigInt::one();
            let mut ne = e.clone();
            for (i, &k) in order.as_slice().iter().enumerate() {
                if e[i] < k {
                    continue 'terms;
                }
                factor *= falling_factorial(e[i] as u64, k as u64);
                ne.0[i] -= k;
            }
            out.add_term(ne, c.clone() * C::from_integer(factor));
        }
        Ok(out)
    }

    /// Composition `p(images[0], ..., images[n-1])`.
    pub fn substitute(&self, images: &[Polynomial<C>]) -> Result<Self> {
        if images.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: images.len(),
            });
        }
        let Some(first) = images.first() else {
            // No variables: p is a constant and keeps its (empty) ambient ring.
            return Ok(self.clone());
        };
        let target = first.num_vars;
        if let Some(bad) = images.iter().find(|q| q.num_vars != target) {
            return Err(Error::DimensionMismatch {
                expected: target,
                found: bad.num_vars,
            });
        }
        let mut powers: Vec<Vec<Polynomial<C>>> = images
            .iter()
            .map(|_| vec![Polynomial::one(target)])
            .collect();
        for e in self.terms.keys() {
            for (i, &k) in e.as_slice().iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
            }
        }
        let mut out = Polynomial::zero(target);
        for (e, c) in &self.terms {
            let mut term = Polynomial::constant(target, c.clone());
            for (i, &k) in e.as_slice().iter().enumerate() {
                if k > 0 {
                    term = &term * &powers[i][k as usize];
                }
            }
            for (te, tc) in term.terms {
                out.add_term(te, tc);
            }
        }
        Ok(out)
    }

    /// Drops every term whose (weighted) total degree exceeds `bound`.
    pub fn truncate_total_degree(&self, bound: u32, weights: Option<&[u32]>) -> Self {
        let keep = |e: &ExponentVector| match weights {
            Some(w) => e.weighted_degree(w) <= bound,
            None => e.total_degree() <= bound,
        };
        Polynomial {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// The terms of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        Polynomial {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.total_degree() == d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Keeps the terms supported on the slots listed in `keep` (all other
    /// exponents zero) and renumbers: old slot `keep[k]` becomes slot `k`.
    pub fn restrict(&self, keep: &[usize]) -> Self {
        let mut out = Polynomial::zero(keep.len());
        for (e, c) in &self.terms {
            let others_zero = (0..self.num_vars)
                .filter(|v| !keep.contains(v))
                .all(|v| e[v] == 0);
            if others_zero {
                let ne = ExponentVector(keep.iter().map(|&v| e[v]).collect());
                out.add_term(ne, c.clone());
            }
        }
        out
    }

    /// Moves old slot `i` to new slot `placement[i]` inside a ring of
    /// `num_vars` variables.
    pub fn embed(&self, num_vars: usize, placement: &[usize]) -> Self {
        assert_eq!(placement.len(), self.num_vars);
        let mut out = Polynomial::zero(num_vars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; num_vars];
            for (i, &slot) in placement.iter().enumerate() {
                ne[slot] += e[i];
            }
            out.add_term(ExponentVector(ne), c.clone());
        }
        out
    }

    pub fn map_coefficients<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Polynomial<D> {
        let mut out = Polynomial::zero(self.num_vars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }
}

impl<C: Scalar> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = crate::naming::VarNames::indexed("x", self.num_vars);
        f.write_str(&crate::naming::render_plain(self, &names))
    }
}

fn assert_same<C>(a: &Polynomial<C>, b: &Polynomial<C>) {
    assert_eq!(
        a.num_vars, b.num_vars,
        "polynomial variable-count mismatch"
    );
}

impl<C: Scalar> Add for &Polynomial<C> {
    type Output = Polynomial<C>;

    fn add(self, rhs: Self) -> Polynomial<C> {
        assert_same(self, rhs);
        self.try_add(rhs).unwrap()
    }
}

impl<C: Scalar> Sub for &Polynomial<C> {
    type Output = Polynomial<C>;

    fn sub(self, rhs: Self) -> Polynomial<C> {
        assert_same(self, rhs);
        self.try_sub(rhs).unwrap()
    }
}

impl<C: Scalar> Mul for &Polynomial<C> {
    type Output = Polynomial<C>;

    fn mul(self, rhs: Self) -> Polynomial<C> {
        assert_same(self, rhs);
        self.try_mul(rhs).unwrap()
    }
}

impl<C: Scalar> Add for Polynomial<C> {
    type Output = Polynomial<C>;

    fn add(self, rhs: Self) -> Polynomial<C> {
        &self + &rhs
    }
}

impl<C: Scalar> Sub for Polynomial<C> {
    type Output = Polynomial<C>;

    fn sub(self, rhs: Self) -> Polynomial<C> {
        &self - &rhs
    }
}

impl<C: Scalar> Mul for Polynomial<C> {
    type Output = Polynomial<C>;

    fn mul(self, rhs: Self) -> Polynomial<C> {
        &self * &rhs
    }
}

impl<C: Scalar> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;

    fn neg(self) -> Polynomial<C> {
        Polynomial {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }
}

impl<C: Scalar> Neg for Polynomial<C> {
    type Output = Polynomial<C>;

    fn neg(self) -> Polynomial<C> {
        -&self
    }
}
