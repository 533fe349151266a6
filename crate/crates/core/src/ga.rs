//! Polynomial endomorphisms and automorphisms of affine `n`-space.
//!
//! A [`PolyEndo`] is an `n`-tuple of polynomials in `n` variables. The group
//! law is substitution: `f.compose(g)` has components `f_i(g_1, ..., g_n)`.


use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::poly::{ExponentVector, Polynomial};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyEndo<C> {
    components: Vec<Polynomial<C>>,
}

impl<C: Scalar> PolyEndo<C> {
    pub fn new(components: Vec<Polynomial<C>>) -> Result<Self> {
        let n = components.len();
        if n == 0 {
            return Err(Error::Validation("an endomorphism needs at least one component".into()));
        }
        if let Some(p) = components.iter().find(|p| p.num_vars() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.num_vars(),
            });
        }
        Ok(PolyEndo { components })
    }

    pub fn identity(n: usize) -> Self {
        PolyEndo {
            components: (0..n).map(|i| Polynomial::var(n, i)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial<C>] {
        &self.components
    }

    pub fn into_components(self) -> Vec<Polynomial<C>> {
        self.components
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n())
    }

    /// `f(g(y))`: component `i` is `f_i(g_1, ..., g_n)`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if self.n() != g.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: g.n(),
            });
        }
        let components = self
            .components
            .iter()
            .map(|p| p.substitute(&g.components))
            .collect::<Result<_>>()?;
        Ok(PolyEndo { components })
    }

    /// Entry `(i, j)` is `df_i / dy_j`.
    pub fn jacobian_matrix(&self) -> Matrix<Polynomial<C>> {
        self.components
            .iter()
            .map(|p| (0..self.n()).map(|j| p.derivative(j)).collect())
            .collect()
    }

    pub fn jacobian_determinant(&self) -> Polynomial<C> {
        linalg::polynomial_determinant(&self.jacobian_matrix(), self.n())
    }

    /// Component `i` involves only `y_1..y_i`.
    pub fn is_triangular(&self) -> bool {
        self.components
            .iter()
            .enumerate()
            .all(|(i, p)| (i + 1..self.n()).all(|v| !p.uses_var(v)))
    }

    /// Exactly one component differs from the identity, and it has the form
    /// `y_i + psi` with `psi` free of `y_i`.
    pub fn is_elementary(&self) -> bool {
        let n = self.n();
        let differing: Vec<usize> = (0..n)
            .filter(|&i| self.components[i] != Polynomial::var(n, i))
            .collect();
        match differing.as_slice() {
            [i] => {
                let psi = &self.components[*i] - &Polynomial::var(n, *i);
                !psi.uses_var(*i)
            }
            _ => false,
        }
    }

    /// Every component is a linear form.
    pub fn is_linear(&self) -> bool {
        self.components
            .iter()
            .all(|p| p.terms().all(|(e, _)| e.total_degree() == 1))
    }

    /// With the variables split into consecutive blocks of size `block`, the
    /// components of block `s` involve only variables of blocks `<= s`.
    pub fn is_block_triangular(&self, block: usize) -> Result<bool> {
        let n = self.n();
        if block == 0 || !n.is_multiple_of(block) {
            return Err(Error::Validation(format!(
                "block size {block} does not divide {n}"
            )));
        }
        Ok(self.components.iter().enumerate().all(|(i, p)| {
            let limit = (i / block + 1) * block;
            (limit..n).all(|v| !p.uses_var(v))
        }))
    }

    pub fn map_coefficients<D: Scalar>(&self, f: impl Fn(&C) -> D) -> PolyEndo<D> {
        PolyEndo {
            components: self.components.iter().map(|p| p.map_coefficients(&f)).collect(),
        }
    }
}

/// An endomorphism together with an optional inverse. When present the
/// inverse has been checked by composition on both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyAutomorphism<C> {
    forward: PolyEndo<C>,
    inverse: Option<PolyEndo<C>>,
}

impl<C: Scalar> PolyAutomorphism<C> {
    /// Wraps a map without a known inverse.
    pub fn from_endo(forward: PolyEndo<C>) -> Self {
        PolyAutomorphism {
            forward,
            inverse: None,
        }
    }

    pub fn with_inverse(forward: PolyEndo<C>, inverse: PolyEndo<C>) -> Result<Self> {
        if !forward.compose(&inverse)?.is_identity() || !inverse.compose(&forward)?.is_identity() {
            return Err(Error::NotInvertible(
                "supplied inverse does not compose to the identity".into(),
            ));
        }
        Ok(PolyAutomorphism {
            forward,
            inverse: Some(inverse),
        })
    }

    pub fn identity(n: usize) -> Self {
        PolyAutomorphism {
            forward: PolyEndo::identity(n),
            inverse: Some(PolyEndo::identity(n)),
        }
    }

    pub fn forward(&self) -> &PolyEndo<C> {
        &self.forward
    }

    pub fn inverse(&self) -> Option<&PolyEndo<C>> {
        self.inverse.as_ref()
    }

    pub fn n(&self) -> usize {
        self.forward.n()
    }

    /// `(f o g)^{-1} = g^{-1} o f^{-1}` when both inverses are known.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        let forward = self.forward.compose(&g.forward)?;
        let inverse = match (&g.inverse, &self.inverse) {
            (Some(gi), Some(fi)) => Some(gi.compose(fi)?),
            _ => None,
        };
        Ok(PolyAutomorphism { forward, inverse })
    }
}

/// Inverts a block triangular map whose block `s` has the shape
/// `A_s y_s + R_s(y_1, ..., y_{s-1})` with `A_s` an invertible constant
/// matrix. Blocks are solved in order,
/// `g_s = A_s^{-1} (z_s - R_s(g_1, ..., g_{s-1}))`, and the result is checked
/// by composition on both sides.
pub fn invert_block_triangular<C: Field>(f: &PolyEndo<C>, block: usize) -> Result<PolyAutomorphism<C>> {
    if !f.is_block_triangular(block)? {
        return Err(Error::NotInvertible("map is not block triangular".into()));
    }
    let n = f.n();
    let blocks = n / block;
    let mut inverse: Vec<Polynomial<C>> = (0..n).map(|i| Polynomial::var(n, i)).collect();
    for s in 0..blocks {
        let range = s * block..(s + 1) * block;
        let mut diag: Matrix<C> = vec![vec![C::zero(); block]; block];
        let mut rest: Vec<Polynomial<C>> = Vec::with_capacity(block);
        for (row, i) in range.clone().enumerate() {
            let mut r = Polynomial::zero(n);
            for (e, c) in f.components()[i].terms() {
                let in_block: Vec<usize> = range.clone().filter(|&v| e[v] > 0).collect();
                match in_block.as_slice() {
                    [] => r.add_term(e.clone(), c.clone()),
                    [v] if e[*v] == 1 && e.total_degree() == 1 => {
                        diag[row][*v - s * block] = c.clone();
                    }
                    _ => {
                        return Err(Error::NotInvertible(format!(
                            "component {} is not affine in its own block",
                            i + 1
                        )))
                    }
                }
            }
            rest.push(r);
        }
        let diag_inv = linalg::inverse(&diag)
            .map_err(|_| Error::NotInvertible(format!("diagonal block {} is singular", s + 1)))?;
        let rhs: Vec<Polynomial<C>> = range
            .clone()
            .zip(&rest)
            .map(|(i, r)| Ok(&Polynomial::var(n, i) - &r.substitute(&inverse)?))
            .collect::<Result<_>>()?;
        let solved = linalg::apply_to_polynomials(&diag_inv, &rhs);
        for (i, g) in range.zip(solved) {
            inverse[i] = g;
        }
    }
    let inverse = PolyEndo::new(inverse)?;
    PolyAutomorphism::with_inverse(f.clone(), inverse)
}

/// Whether the Jacobian determinant is a nonzero constant.
pub fn has_constant_jacobian<C: Scalar>(f: &PolyEndo<C>) -> bool {
    let det = f.jacobian_determinant();
    !det.is_zero() && det.is_constant()
}

/// The constant value of a polynomial known to be constant.
pub fn constant_value<C: Scalar>(p: &Polynomial<C>) -> Option<C> {
    if p.is_constant() {
        Some(p.coefficient_of(&ExponentVector::zeros(p.num_vars())))
    } else {
        None
    }
}
