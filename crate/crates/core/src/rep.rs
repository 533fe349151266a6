//! The injective homomorphism from the truncated automorphism group
//! `Aut(k[[x_1..x_m]]/(x)^{N+1})` into `GA_{N*m}(k)`.
//!
//! `alpha(phi)` sends the jet coordinate `y_rs` to the reduction at the
//! origin of `d^s phi_r`, which in closed form is
//!
//! ```text
//! sum_l  (prod_k |l_k|!) / (prod_ij l_ij!) * a^r_{|l|} * prod y_ij^{l_ij}
//! ```
//!
//! with `l` ranging over the weight matrices of order `s` and `a^r_n` the
//! coefficient of `x^n` in `phi_r`. Jet coordinates use the order-major
//! layout of [`DifferentialContext::jet_slot`], so the image is block
//! triangular with `m x m` blocks.


use crate::error::{Error, Result};
use crate::ga::{invert_block_triangular, PolyAutomorphism, PolyEndo};
use crate::kaehler::{enumerate_weight_matrices, higher_differential, reduce_at_origin, DifferentialContext};
use crate::linalg::{self, Matrix};
use crate::poly::{ExponentVector, Polynomial};
use crate::scalar::{multinomial_weight_int, Field, Scalar};
use crate::series::TruncatedSeriesMap;

/// How many routes `alpha` takes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum AlphaMode {
    /// Closed coefficient formula only.
    #[default]
    Fast,
    /// Closed formula and reduction of `d^s phi_r`; disagreement is an error.
    Verify,
}

/// Image of a series map: a polynomial map of the `N*m` jet coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaImage<C> {
    base: PolyAutomorphism<C>,
    source_m: usize,
    source_order: usize,
}

impl<C: Scalar> AlphaImage<C> {
    /// Wraps a map of `N*m` jet coordinates, checking that each component
    /// `y_rs` is weighted homogeneous of degree `s` (which also forces block
    /// triangularity).
    pub fn from_endo(map: PolyEndo<C>, m: usize, order: usize) -> Result<Self> {
        let ctx = DifferentialContext::new(m, order)?;
        if map.n() != ctx.num_jet_vars() {
            return Err(Error::Structure(format!(
                "expected {} jet components, found {}",
                ctx.num_jet_vars(),
                map.n()
            )));
        }
        let weights = ctx.jet_weights();
        for s in 1..=order {
            for r in 0..m {
                let p = &map.components()[ctx.jet_slot(r, s)];
                if !p.is_weighted_homogeneous(&weights, s as u32) {
                    return Err(Error::Structure(format!(
                        "component for y{}_{} is not of weighted degree {s}",
                        r + 1,
                        s
                    )));
                }
            }
        }
        Ok(AlphaImage {
            base: PolyAutomorphism::from_endo(map),
            source_m: m,
            source_order: order,
        })
    }

    pub fn base(&self) -> &PolyAutomorphism<C> {
        &self.base
    }

    pub fn map(&self) -> &PolyEndo<C> {
        self.base.forward()
    }

    pub fn m(&self) -> usize {
        self.source_m
    }

    pub fn order(&self) -> usize {
        self.source_order
    }

    /// `deg y_ij = j`.
    pub fn weights(&self) -> Vec<u32> {
        DifferentialContext::new(self.source_m, self.source_order)
            .expect("validated at construction")
            .jet_weights()
    }

    /// Image of `y_rs` (`r` 0-based, `s` 1-based).
    pub fn component(&self, r: usize, s: usize) -> &Polynomial<C> {
        &self.map().components()[(s - 1) * self.source_m + r]
    }

    /// Each `y_rs` goes to a weighted homogeneous polynomial of degree `s`.
    pub fn is_homogeneous(&self) -> bool {
        let w = self.weights();
        (1..=self.source_order).all(|s| {
            (0..self.source_m).all(|r| self.component(r, s).is_weighted_homogeneous(&w, s as u32))
        })
    }
}

fn alpha_component<C: Scalar>(
    phi: &TruncatedSeriesMap<C>,
    r: usize,
    s: usize,
    ctx: &DifferentialContext,
) -> Polynomial<C> {
    let m = ctx.m();
    let mut out = Polynomial::zero(ctx.num_jet_vars());
    for l in enumerate_weight_matrices(m, s) {
        let a = phi.coefficient(r, &l.row_sums());
        if a.is_zero() {
            continue;
        }
        let mut exps = vec![0u32; ctx.num_jet_vars()];
        for i in 0..m {
            for j in 1..=s {
                exps[ctx.jet_slot(i, j)] = l.get(i, j);
            }
        }
        let w = C::from_integer(multinomial_weight_int(&l));
        out.add_term(ExponentVector::new(exps), w * a);
    }
    out
}

/// The image map via the closed coefficient formula, without the
/// automorphism precondition.
pub fn alpha_map<C: Scalar>(phi: &TruncatedSeriesMap<C>) -> Result<PolyEndo<C>> {
    let ctx = DifferentialContext::new(phi.m(), phi.order())?;
    let mut comps = Vec::with_capacity(ctx.num_jet_vars());
    for s in 1..=phi.order() {
        for r in 0..phi.m() {
            comps.push(alpha_component(phi, r, s, &ctx));
        }
    }
    PolyEndo::new(comps)
}

/// The image map as the reduction at the origin of `d^s phi_r`.
pub fn alpha_via_differentials<C: Scalar>(phi: &TruncatedSeriesMap<C>) -> Result<PolyEndo<C>> {
    let ctx = DifferentialContext::new(phi.m(), phi.order())?;
    let mut comps = Vec::with_capacity(ctx.num_jet_vars());
    for s in 1..=phi.order() {
        for r in 0..phi.m() {
            let d = higher_differential(&phi.components()[r], s, &ctx)?;
            comps.push(reduce_at_origin(&d, &ctx)?);
        }
    }
    PolyEndo::new(comps)
}

pub fn alpha<C: Scalar>(phi: &TruncatedSeriesMap<C>) -> Result<AlphaImage<C>> {
    alpha_with_mode(phi, AlphaMode::Fast)
}

pub fn alpha_with_mode<C: Scalar>(phi: &TruncatedSeriesMap<C>, mode: AlphaMode) -> Result<AlphaImage<C>> {
    if !phi.is_automorphism() {
        return Err(Error::NotAutomorphism(format!(
            "linear part {} has zero determinant",
            phi.linear_part_string()
        )));
    }
    let map = alpha_map(phi)?;
    if mode == AlphaMode::Verify {
        let other = alpha_via_differentials(phi)?;
        if let Some(k) = (0..map.n()).find(|&k| map.components()[k] != other.components()[k]) {
            return Err(Error::Inconsistent(format!(
                "coefficient formula and reduced differential disagree on component {}",
                k + 1
            )));
        }
    }
    Ok(AlphaImage {
        base: PolyAutomorphism::from_endo(map),
        source_m: phi.m(),
        source_order: phi.order(),
    })
}

/// `alpha(phi)` together with its inverse `alpha(phi^{-1})`, checked by
/// composition.
pub fn alpha_automorphism<C: Field>(phi: &TruncatedSeriesMap<C>) -> Result<AlphaImage<C>> {
    let image = alpha(phi)?;
    let inverse = alpha_map(&phi.invert()?)?;
    Ok(AlphaImage {
        base: PolyAutomorphism::with_inverse(image.map().clone(), inverse)?,
        ..image
    })
}

/// Reads the series back from its image: `a^r_n` with `|n| = s` is the
/// coefficient of `prod_i y_i1^{n_i}` in the image of `y_rs`, whose weight
/// matrix has prefactor 1.
pub fn recover_series<C: Scalar>(image: &AlphaImage<C>) -> Result<TruncatedSeriesMap<C>> {
    let (m, order) = (image.m(), image.order());
    if !image.is_homogeneous() {
        return Err(Error::Structure("image is not weighted homogeneous".into()));
    }
    let ctx = DifferentialContext::new(m, order)?;
    let mut components = vec![Polynomial::zero(m); m];
    for (r, comp) in components.iter_mut().enumerate() {
        for s in 1..=order {
            let source = image.component(r, s);
            for (e, c) in source.terms() {
                let first_order_only = e
                    .as_slice()
                    .iter()
                    .enumerate()
                    .all(|(slot, &k)| k == 0 || slot < m);
                if first_order_only {
                    let n: Vec<u32> = (0..m).map(|i| e[ctx.jet_slot(i, 1)]).collect();
                    comp.add_term(ExponentVector::new(n), c.clone());
                }
            }
        }
    }
    TruncatedSeriesMap::new(order, components)
}

/// `x_i -> phi_i`, `y_ij -> d^j phi_i` on the `m + N*m` coordinates of the
/// differential context; no reduction at the origin.
pub fn embed_endo<C: Scalar>(phi: &PolyEndo<C>, order: usize) -> Result<PolyEndo<C>> {
    let m = phi.n();
    let ctx = DifferentialContext::new(m, order)?;
    let mut comps = vec![Polynomial::zero(ctx.num_vars()); ctx.num_vars()];
    for i in 0..m {
        let f = &phi.components()[i];
        comps[ctx.x_slot(i)] = ctx.embed_base(f)?;
        for j in 1..=order {
            comps[ctx.y_slot(i, j)] = higher_differential(f, j, &ctx)?;
        }
    }
    PolyEndo::new(comps)
}

/// Lifts a polynomial automorphism of `k[x_1..x_m]` to one of the
/// `m + N*m` coordinates. Without a supplied inverse the map must be
/// triangular or affine so that an inverse can be computed and checked;
/// anything else is rejected.
pub fn embed_ga<C: Field>(phi: &PolyAutomorphism<C>, order: usize) -> Result<PolyAutomorphism<C>> {
    let inverse = match phi.inverse() {
        Some(inv) => inv.clone(),
        None => invert_block_triangular(phi.forward(), 1)
            .or_else(|_| invert_block_triangular(phi.forward(), phi.n()))
            .map_err(|e| Error::NotAutomorphism(format!("cannot verify invertibility: {e}")))?
            .inverse()
            .cloned()
            .expect("block triangular inversion returns an inverse"),
    };
    let forward = embed_endo(phi.forward(), order)?;
    let lifted_inverse = embed_endo(&inverse, order)?;
    PolyAutomorphism::with_inverse(forward, lifted_inverse)
}

/// Generator `x_{i0} -> x_{i0} + psi`, all other coordinates fixed, with
/// `psi` free of `x_{i0}` and without constant term (`i0` 0-based).
pub fn formal_elementary<C: Scalar>(
    m: usize,
    order: usize,
    i0: usize,
    psi: &Polynomial<C>,
) -> Result<TruncatedSeriesMap<C>> {
    if i0 >= m {
        return Err(Error::OutOfRange { what: "i0", value: i0, min: 0, max: m - 1 });
    }
    if psi.num_vars() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: psi.num_vars(),
        });
    }
    if psi.uses_var(i0) {
        return Err(Error::InvalidGenerator(format!("psi depends on x{}", i0 + 1)));
    }
    if !psi.constant_term().is_zero() {
        return Err(Error::InvalidGenerator("psi has a constant term".into()));
    }
    if psi.total_degree().unwrap_or(0) as usize > order {
        return Err(Error::InvalidGenerator(format!("psi has degree above {order}")));
    }
    let mut comps: Vec<Polynomial<C>> = (0..m).map(|i| Polynomial::var(m, i)).collect();
    comps[i0] = &comps[i0] + psi;
    TruncatedSeriesMap::new(order, comps)
}

/// Validated constructor for the formal triangular group: component `i`
/// involves only `x_1..x_i`.
pub fn formal_triangular<C: Scalar>(order: usize, components: Vec<Polynomial<C>>) -> Result<TruncatedSeriesMap<C>> {
    let map = TruncatedSeriesMap::new(order, components)?;
    for (i, p) in map.components().iter().enumerate() {
        if let Some(v) = (i + 1..map.m()).find(|&v| p.uses_var(v)) {
            return Err(Error::InvalidGenerator(format!(
                "component {} depends on x{}",
                i + 1,
                v + 1
            )));
        }
    }
    if !map.is_automorphism() {
        return Err(Error::NotAutomorphism("a diagonal linear coefficient is zero".into()));
    }
    Ok(map)
}

/// `x -> A x` as an element of the truncated group.
pub fn linear_embed<C: Scalar>(matrix: &Matrix<C>, order: usize) -> Result<TruncatedSeriesMap<C>> {
    let m = matrix.len();
    if matrix.iter().any(|r| r.len() != m) {
        return Err(Error::Validation("matrix must be square".into()));
    }
    if linalg::determinant(matrix).is_zero() {
        return Err(Error::NotAutomorphism("singular matrix".into()));
    }
    let comps = matrix
        .iter()
        .map(|row| {
            let mut p = Polynomial::zero(m);
            for (j, c) in row.iter().enumerate() {
                p.add_term(ExponentVector::unit(m, j), c.clone());
            }
            p
        })
        .collect();
    TruncatedSeriesMap::new(order, comps)
}
