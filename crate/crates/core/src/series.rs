//! The group of automorphisms of `k[[x_1..x_m]]/(x)^{N+1}`.
//!
//! An element is an `m`-tuple of polynomials without constant term and of
//! total degree at most `N`. It is invertible iff its linear part is. The
//! group law is substitution followed by truncation.

use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::poly::{monomials_of_degree, ExponentVector, Polynomial};
use crate::random::random_integer;
use crate::scalar::{Coefficient, Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeriesMap<C> {
    order: usize,
    components: Vec<Polynomial<C>>,
}

/// Degree-one coefficients: entry `(i, j)` is the coefficient of `x_j` in
/// component `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearPart<C> {
    pub matrix: Matrix<C>,
}

impl<C: Scalar> LinearPart<C> {
    pub fn determinant(&self) -> C {
        linalg::determinant(&self.matrix)
    }
}

impl<C: Scalar> std::fmt::Display for LinearPart<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<String> = self
            .matrix
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|c| c.to_string()).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

impl<C: Scalar> TruncatedSeriesMap<C> {
    /// Validates the components: `m >= 1` polynomials in `m` variables, no
    /// constant term, total degree at most `order`.
    pub fn new(order: usize, components: Vec<Polynomial<C>>) -> Result<Self> {
        let m = components.len();
        if m == 0 {
            return Err(Error::Validation("a series map needs at least one component".into()));
        }
        if order == 0 {
            return Err(Error::OutOfRange { what: "N", value: 0, min: 1, max: usize::MAX });
        }
        for (k, p) in components.iter().enumerate() {
            if p.num_vars() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: p.num_vars(),
                });
            }
            if !p.constant_term().is_zero() {
                return Err(Error::Validation(format!(
                    "component {} has nonzero constant term",
                    k + 1
                )));
            }
            if p.total_degree().unwrap_or(0) as usize > order {
                return Err(Error::Validation(format!(
                    "component {} has degree above the truncation order {order}",
                    k + 1
                )));
            }
        }
        Ok(TruncatedSeriesMap { order, components })
    }

    /// Like [`TruncatedSeriesMap::new`] but drops terms above `order` first.
    pub fn truncating(order: usize, components: Vec<Polynomial<C>>) -> Result<Self> {
        let comps = components
            .iter()
            .map(|p| p.truncate_total_degree(order as u32, None))
            .collect();
        Self::new(order, comps)
    }

    pub fn identity(m: usize, order: usize) -> Self {
        let components = (0..m).map(|i| Polynomial::var(m, i)).collect();
        TruncatedSeriesMap { order, components }
    }

    pub fn m(&self) -> usize {
        self.components.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn components(&self) -> &[Polynomial<C>] {
        &self.components
    }

    pub fn into_components(self) -> Vec<Polynomial<C>> {
        self.components
    }

    /// Coefficient `a^r_n` of `x^n` in component `r` (0-based).
    pub fn coefficient(&self, r: usize, multi_index: &ExponentVector) -> C {
        self.components[r].coefficient_of(multi_index)
    }

    pub fn linear_part(&self) -> LinearPart<C> {
        let m = self.m();
        let matrix = self
            .components
            .iter()
            .map(|p| {
                (0..m)
                    .map(|j| p.coefficient_of(&ExponentVector::unit(m, j)))
                    .collect()
            })
            .collect();
        LinearPart { matrix }
    }

    pub fn linear_part_string(&self) -> String {
        self.linear_part().to_string()
    }

    /// Whether the linear part has nonzero determinant. Over a field this is
    /// exactly invertibility; over a general ring the determinant must be a
    /// unit, which is not checked here.
    pub fn is_automorphism(&self) -> bool {
        !self.linear_part().determinant().is_zero()
    }

    pub fn is_linear(&self) -> bool {
        self.components
            .iter()
            .all(|p| p.terms().all(|(e, _)| e.total_degree() == 1))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.m() != other.m() {
            return Err(Error::DimensionMismatch {
                expected: self.m(),
                found: other.m(),
            });
        }
        if self.order != other.order {
            return Err(Error::DimensionMismatch {
                expected: self.order,
                found: other.order,
            });
        }
        Ok(())
    }

    /// `phi(psi(x))` modulo `(x)^{N+1}`.
    pub fn compose(&self, psi: &Self) -> Result<Self> {
        self.check_compatible(psi)?;
        let components = self
            .components
            .iter()
            .map(|p| Ok(p.substitute(&psi.components)?.truncate_total_degree(self.order as u32, None)))
            .collect::<Result<Vec<_>>>()?;
        Ok(TruncatedSeriesMap {
            order: self.order,
            components,
        })
    }

    /// The image under `Aut(k[[x]]/(x)^{N+1}) -> Aut(k[[x]]/(x)^{n+1})`.
    pub fn truncate_to(&self, order: usize) -> Result<Self> {
        if order == 0 || order > self.order {
            return Err(Error::OutOfRange {
                what: "truncation order",
                value: order,
                min: 1,
                max: self.order,
            });
        }
        Self::truncating(order, self.components.clone())
    }

    pub fn map_coefficients<D: Scalar>(&self, f: impl Fn(&C) -> D) -> TruncatedSeriesMap<D> {
        TruncatedSeriesMap {
            order: self.order,
            components: self.components.iter().map(|p| p.map_coefficients(&f)).collect(),
        }
    }
}

impl<C: Field> TruncatedSeriesMap<C> {
    /// Group inverse. The linear part is inverted first; then for
    /// `d = 2..=N` the degree-`d` part is fixed by
    /// `psi_d = -A^{-1} [H(psi_{<d})]_d`, where `phi = A x + H`.
    pub fn invert(&self) -> Result<Self> {
        let m = self.m();
        let lin = self.linear_part();
        let a_inv = linalg::inverse(&lin.matrix).map_err(|_| {
            Error::NotInvertible(format!("singular linear part {lin}"))
        })?;
        let coords: Vec<Polynomial<C>> = (0..m).map(|i| Polynomial::var(m, i)).collect();
        let mut psi = linalg::apply_to_polynomials(&a_inv, &coords);
        let higher: Vec<Polynomial<C>> = self
            .components
            .iter()
            .map(|p| p - &p.homogeneous_part(1))
            .collect();
        for d in 2..=self.order as u32 {
            let part: Vec<Polynomial<C>> = higher
                .iter()
                .map(|h| Ok(h.substitute(&psi)?.homogeneous_part(d)))
                .collect::<Result<_>>()?;
            let correction = linalg::apply_to_polynomials(&a_inv, &part);
            for (p, c) in psi.iter_mut().zip(&correction) {
                *p = &*p - c;
            }
        }
        TruncatedSeriesMap::new(self.order, psi)
    }
}

/// Random element with integer coefficients in `[-coeff_bound, coeff_bound]`
/// on every monomial of degree `1..=N`; the linear part is resampled until
/// its determinant is nonzero.
pub fn random_automorphism(m: usize, order: usize, seed: u64, coeff_bound: i64) -> TruncatedSeriesMap<Coefficient> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_automorphism_with(&mut rng, m, order, coeff_bound)
}

pub fn random_automorphism_with<R: Rng + ?Sized>(
    rng: &mut R,
    m: usize,
    order: usize,
    coeff_bound: i64,
) -> TruncatedSeriesMap<Coefficient> {
    assert!(m >= 1 && order >= 1);
    let bound = coeff_bound.max(1);
    let linear = loop {
        let candidate: Matrix<Coefficient> = (0..m)
            .map(|_| (0..m).map(|_| random_integer(rng, bound)).collect())
            .collect();
        if !linalg::determinant(&candidate).is_zero() {
            break candidate;
        }
    };
    let components = (0..m)
        .map(|r| {
            let mut p = Polynomial::zero(m);
            for (j, c) in linear[r].iter().enumerate() {
                p.add_term(ExponentVector::unit(m, j), c.clone());
            }
            for d in 2..=order as u32 {
                for e in monomials_of_degree(m, d) {
                    p.add_term(e, random_integer(rng, bound));
                }
            }
            p
        })
        .collect();
    TruncatedSeriesMap { order, components }
}
