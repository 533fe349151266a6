//! Higher differentials `d^n` on `k[x_1..x_m]`.
//!
//! The truncated differential algebra of order `N` over `k[x_1..x_m]` is the
//! polynomial ring in `x_i` and `y_ij = d^j x_i` (`1 <= j <= N`). For
//! `n <= N`,
//!
//! ```text
//! d^n f = sum_l  1/prod(l_ij!) * d^{|l_1|}..d^{|l_m|} f / dx_1..dx_m * prod y_ij^{l_ij}
//! ```
//!
//! where `l` runs over `m x n` nonnegative integer matrices with
//! `sum_ij j*l_ij = n` and `|l_i| = sum_j l_ij`. The slot layout of the
//! `(x, y)` ring is fixed by [`DifferentialContext`]: `x_i` first, then the
//! `y` block in order-major layout.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{ExponentVector, Polynomial};
use crate::scalar::{factorial_int, falling_factorial, Scalar};

/// An `m x n` matrix `l_ij` of nonnegative integers with weighted total
/// `sum_ij j * l_ij = n`. Row `i` is a variable, column `j` (1-based) a
/// differential order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightMatrix {
    m: usize,
    n: usize,
    entries: Vec<u32>,
}

impl WeightMatrix {
    /// Builds a matrix from rows, inferring `n` from the row length.
    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if m == 0 || n == 0 {
            return Err(Error::Validation("weight matrix must be nonempty".into()));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: r.len(),
            });
        }
        let w = WeightMatrix {
            m,
            n,
            entries: rows.concat(),
        };
        if w.weighted_total() != n as u64 {
            return Err(Error::Validation(format!(
                "weighted total {} differs from order {n}",
                w.weighted_total()
            )));
        }
        Ok(w)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `l_ij`, `i` 0-based, `j` 1-based.
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.n + (j - 1)]
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// `|l_i|`
    pub fn row_sum(&self, i: usize) -> u64 {
        self.entries[i * self.n..(i + 1) * self.n]
            .iter()
            .map(|&e| e as u64)
            .sum()
    }

    /// `||l||`
    pub fn norm(&self) -> u64 {
        self.entries.iter().map(|&e| e as u64).sum()
    }

    pub fn weighted_total(&self) -> u64 {
        (0..self.m)
            .flat_map(|i| (1..=self.n).map(move |j| (i, j)))
            .map(|(i, j)| j as u64 * self.get(i, j) as u64)
            .sum()
    }

    /// `(|l_1|, ..., |l_m|)`, the derivative order per variable.
    pub fn row_sums(&self) -> ExponentVector {
        ExponentVector::new((0..self.m).map(|i| self.row_sum(i) as u32).collect())
    }

    /// `prod_ij l_ij!`
    pub fn factorial_product(&self) -> BigInt {
        self.entries
            .iter()
            .fold(BigInt::one(), |acc, &e| acc * factorial_int(e as u64))
    }
}

/// All weight matrices of size `m x n` with weighted total `n`, each once.
///
/// Orders are visited from `n` down to `1`; for each order the column total
/// is chosen largest first and then split over the rows, first row largest
/// first. For `m = 1` these are the partitions of `n`.
pub fn enumerate_weight_matrices(m: usize, n: usize) -> Vec<WeightMatrix> {
    let mut out = Vec::new();
    if m == 0 || n == 0 {
        return out;
    }
    let mut columns: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
    descend(m, n, n, n, &mut columns, &mut out);
    out
}

fn descend(
    m: usize,
    n: usize,
    order: usize,
    remaining: usize,
    columns: &mut Vec<Vec<u32>>,
    out: &mut Vec<WeightMatrix>,
) {
    if order == 0 {
        if remaining == 0 {
            let mut entries = vec![0u32; m * n];
            for (j, col) in columns.iter().enumerate().skip(1) {
                for (i, &v) in col.iter().enumerate() {
                    entries[i * n + (j - 1)] = v;
                }
            }
            out.push(WeightMatrix { m, n, entries });
        }
        return;
    }
    let max_total = if order == 1 { remaining } else { remaining / order };
    let min_total = if order == 1 { remaining } else { 0 };
    for total in (min_total..=max_total).rev() {
        for split in compositions(total as u32, m) {
            columns[order] = split;
            descend(m, n, order - 1, remaining - total * order, columns, out);
        }
    }
    columns[order].clear();
}

/// Weak compositions of `total` into `parts` parts, first part largest first.
fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Slot layout of the ring `k[x_1..x_m, y_ij]`: `x_i` at `i`, `y_ij` at
/// `m + (j-1)*m + i` (`i` 0-based, `j` 1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DifferentialContext {
    m: usize,
    order: usize,
}

impl DifferentialContext {
    pub fn new(m: usize, order: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::OutOfRange { what: "m", value: m, min: 1, max: usize::MAX });
        }
        if order == 0 {
            return Err(Error::OutOfRange { what: "N", value: order, min: 1, max: usize::MAX });
        }
        Ok(DifferentialContext { m, order })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn num_vars(&self) -> usize {
        self.m + self.order * self.m
    }

    pub fn num_jet_vars(&self) -> usize {
        self.order * self.m
    }

    pub fn x_slot(&self, i: usize) -> usize {
        i
    }

    pub fn y_slot(&self, i: usize, j: usize) -> usize {
        self.m + self.jet_slot(i, j)
    }

    /// Slot of `y_ij` in the ring of jet variables alone.
    pub fn jet_slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.m && (1..=self.order).contains(&j));
        (j - 1) * self.m + i
    }

    /// Weights `deg x_i = 0`, `deg y_ij = j` on the full ring.
    pub fn weights(&self) -> Vec<u32> {
        let mut w = vec![0; self.m];
        w.extend(self.jet_weights());
        w
    }

    /// Weights `deg y_ij = j` on the ring of jet variables.
    pub fn jet_weights(&self) -> Vec<u32> {
        (1..=self.order)
            .flat_map(|j| std::iter::repeat_n(j as u32, self.m))
            .collect()
    }

    /// Includes `k[x]` into `k[x, y]`.
    pub fn embed_base<C: Scalar>(&self, f: &Polynomial<C>) -> Result<Polynomial<C>> {
        self.check_base(f)?;
        let placement: Vec<usize> = (0..self.m).collect();
        Ok(f.embed(self.num_vars(), &placement))
    }

    fn check_base<C: Scalar>(&self, f: &Polynomial<C>) -> Result<()> {
        if f.num_vars() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: f.num_vars(),
            });
        }
        Ok(())
    }

    fn check_order(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.order {
            return Err(Error::OutOfRange {
                what: "differential order",
                value: n,
                min: 1,
                max: self.order,
            });
        }
        Ok(())
    }
}

/// `d^n f` as a polynomial in the `(x, y)` ring of `ctx`.
pub fn higher_differential<C: Scalar>(
    f: &Polynomial<C>,
    n: usize,
    ctx: &DifferentialContext,
) -> Result<Polynomial<C>> {
    ctx.check_base(f)?;
    ctx.check_order(n)?;
    let m = ctx.m();
    let mut out = Polynomial::zero(ctx.num_vars());
    for l in enumerate_weight_matrices(m, n) {
        let order = l.row_sums();
        let denom = l.factorial_product();
        // (1 / prod l_ij!) * d^{|l|} f, term by term; the quotient is an
        // integer multiple of each coefficient.
        for (e, c) in f.terms() {
            if (0..m).any(|i| e[i] < order[i]) {
                continue;
            }
            let numer = (0..m).fold(BigInt::one(), |acc, i| {
                acc * falling_factorial(e[i] as u64, order[i] as u64)
            });
            let (factor, rem) = numer.div_rem(&denom);
            debug_assert!(rem.is_zero());
            let mut exps = vec![0u32; ctx.num_vars()];
            for i in 0..m {
                exps[ctx.x_slot(i)] = e[i] - order[i];
                for j in 1..=n {
                    exps[ctx.y_slot(i, j)] = l.get(i, j);
                }
            }
            out.add_term(ExponentVector::new(exps), c.clone() * C::from_integer(factor));
        }
    }
    Ok(out)
}

/// `f + d^1 f + ... + d^N f`.
pub fn universal_derivation<C: Scalar>(
    f: &Polynomial<C>,
    ctx: &DifferentialContext,
) -> Result<Polynomial<C>> {
    let mut total = ctx.embed_base(f)?;
    for n in 1..=ctx.order() {
        total = &total + &higher_differential(f, n, ctx)?;
    }
    Ok(total)
}

/// Independent route to `d^n f`: the coefficient of `t^n` in
/// `f(x_i + sum_j y_ij t^j)`, computed by plain substitution and expansion
/// in a ring with one extra slot for `t`.
pub fn taylor_oracle<C: Scalar>(
    f: &Polynomial<C>,
    n: usize,
    ctx: &DifferentialContext,
) -> Result<Polynomial<C>> {
    ctx.check_base(f)?;
    ctx.check_order(n)?;
    let width = ctx.num_vars() + 1;
    let t_slot = ctx.num_vars();
    let t = Polynomial::<C>::var(width, t_slot);
    let images: Vec<Polynomial<C>> = (0..ctx.m())
        .map(|i| {
            let mut img = Polynomial::var(width, ctx.x_slot(i));
            for j in 1..=ctx.order() {
                let y = Polynomial::var(width, ctx.y_slot(i, j));
                img = &img + &(&y * &t.pow(j as u32));
            }
            img
        })
        .collect();
    let expanded = f.substitute(&images)?;
    let mut out = Polynomial::zero(ctx.num_vars());
    for (e, c) in expanded.terms() {
        if e[t_slot] as usize == n {
            out.add_term(ExponentVector::new(e.as_slice()[..t_slot].to_vec()), c.clone());
        }
    }
    Ok(out)
}

/// Sets every `x_i` to zero; the result lives in the ring of the `N*m` jet
/// variables (order-major).
pub fn reduce_at_origin<C: Scalar>(
    p: &Polynomial<C>,
    ctx: &DifferentialContext,
) -> Result<Polynomial<C>> {
    if p.num_vars() != ctx.num_vars() {
        return Err(Error::DimensionMismatch {
            expected: ctx.num_vars(),
            found: p.num_vars(),
        });
    }
    let keep: Vec<usize> = (ctx.m()..ctx.num_vars()).collect();
    Ok(p.restrict(&keep))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::naming::{render_plain, JetStyle, VarNames};
    use crate::parser::parse_polynomial;
    use crate::random::random_polynomial;
    use crate::scalar::Coefficient;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type P = Polynomial<Coefficient>;

    fn ctx(m: usize, n: usize) -> DifferentialContext {
        DifferentialContext::new(m, n).unwrap()
    }

    fn base(text: &str, m: usize) -> P {
        parse_polynomial(text, &VarNames::coordinates(m)).unwrap()
    }

    fn full(text: &str, c: &DifferentialContext) -> P {
        parse_polynomial(text, &VarNames::for_context(c, JetStyle::Y)).unwrap()
    }

    #[test]
    fn weight_matrices_m1_n3() {
        let ls = enumerate_weight_matrices(1, 3);
        let rows: Vec<&[u32]> = ls.iter().map(|l| l.entries()).collect();
        assert_eq!(rows, [&[0, 0, 1][..], &[1, 1, 0], &[3, 0, 0]]);
    }

    #[test]
    fn weight_matrix_counts() {
        assert_eq!(enumerate_weight_matrices(2, 2).len(), 5);
        assert_eq!(enumerate_weight_matrices(1, 1).len(), 1);
        // m = 1 gives the partition numbers
        let partitions = [1, 2, 3, 5, 7, 11, 15, 22];
        for (k, &p) in partitions.iter().enumerate() {
            assert_eq!(enumerate_weight_matrices(1, k + 1).len(), p);
        }
    }

    #[test]
    fn weight_matrices_are_distinct_and_valid() {
        for m in 1..=3 {
            for n in 1..=5 {
                let ls = enumerate_weight_matrices(m, n);
                let set: std::collections::HashSet<_> = ls.iter().cloned().collect();
                assert_eq!(set.len(), ls.len());
                assert!(ls.iter().all(|l| l.weighted_total() == n as u64));
                // brute force count over all matrices with entries <= n
                let cells = m * n;
                let mut count = 0usize;
                let mut idx = vec![0u32; cells];
                loop {
                    let total: usize = idx
                        .iter()
                        .enumerate()
                        .map(|(k, &v)| (k % n + 1) * v as usize)
                        .sum();
                    if total == n {
                        count += 1;
                    }
                    let mut pos = 0;
                    loop {
                        if pos == cells {
                            break;
                        }
                        idx[pos] += 1;
                        if idx[pos] as usize > n / (pos % n + 1) {
                            idx[pos] = 0;
                            pos += 1;
                        } else {
                            break;
                        }
                    }
                    if pos == cells {
                        break;
                    }
                }
                assert_eq!(count, ls.len(), "m={m} n={n}");
            }
        }
    }

    #[test]
    fn weight_matrix_validation() {
        assert!(WeightMatrix::from_rows(&[vec![1, 0, 0]]).is_err());
        assert!(WeightMatrix::from_rows(&[vec![1], vec![0, 1]]).is_err());
        let l = WeightMatrix::from_rows(&[vec![1, 1, 0]]).unwrap();
        assert_eq!((l.norm(), l.row_sum(0)), (2, 2));
    }

    #[test]
    fn classical_differential() {
        let c = ctx(2, 1);
        let f = base("x1^2*x2 + 3*x2", 2);
        let d1 = higher_differential(&f, 1, &c).unwrap();
        assert_eq!(d1, full("2*x1*x2*y1_1 + x1^2*y2_1 + 3*y2_1", &c));
    }

    #[test]
    fn cubic_square_example() {
        let c = ctx(1, 3);
        let f = base("x^2", 1);
        let d3 = higher_differential(&f, 3, &c).unwrap();
        assert_eq!(d3, full("2*x*y3 + 2*y1*y2", &c));
        assert_eq!(d3, taylor_oracle(&f, 3, &c).unwrap());
        let names = VarNames::for_context(&c, JetStyle::D);
        assert_eq!(render_plain(&d3, &names), "2*x*d3x + 2*d1x*d2x");
    }

    #[test]
    fn oracle_examples() {
        let c = ctx(1, 3);
        assert_eq!(
            taylor_oracle(&base("x^2", 1), 2, &c).unwrap(),
            full("2*x*y2 + y1^2", &c)
        );
        for n in 1..=3 {
            assert_eq!(
                taylor_oracle(&base("x", 1), n, &c).unwrap(),
                full(&format!("y{n}"), &c)
            );
        }
        assert_eq!(
            taylor_oracle(&base("x^3", 1), 1, &c).unwrap(),
            full("3*x^2*y1", &c)
        );
    }

    #[test]
    fn constants_have_no_differentials() {
        let c = ctx(2, 3);
        let f = base("7/3", 2);
        for n in 1..=3 {
            assert!(higher_differential(&f, n, &c).unwrap().is_zero());
        }
        assert_eq!(universal_derivation(&f, &c).unwrap(), full("7/3", &c));
    }

    #[test]
    fn universal_derivation_examples() {
        let c = ctx(1, 2);
        assert_eq!(
            universal_derivation(&base("x", 1), &c).unwrap(),
            full("x + y1 + y2", &c)
        );
        let u = universal_derivation(&base("x^2", 1), &c).unwrap();
        assert_eq!(u, full("x^2 + 2*x*y1 + 2*x*y2 + y1^2", &c));
        assert_eq!(reduce_at_origin(&u, &c).unwrap().to_string(), "x1^2");
    }

    #[test]
    fn reduction_at_origin() {
        let c = ctx(1, 2);
        let p = full("2*x*y2 + y1^2", &c);
        let r = reduce_at_origin(&p, &c).unwrap();
        let yn = VarNames::jets(1, 2, JetStyle::Y, false);
        assert_eq!(render_plain(&r, &yn), "y1^2");
        let p = full("y2 + 3*y1^2", &c);
        assert_eq!(render_plain(&reduce_at_origin(&p, &c).unwrap(), &yn), "y2 + 3*y1^2");
    }

    #[test]
    fn order_and_dimension_errors() {
        let c = ctx(2, 2);
        let f = base("x1", 2);
        assert!(matches!(
            higher_differential(&f, 3, &c),
            Err(Error::OutOfRange { .. })
        ));
        assert!(higher_differential(&f, 0, &c).is_err());
        assert!(taylor_oracle(&f, 3, &c).is_err());
        assert!(higher_differential(&base("x", 1), 1, &c).is_err());
        assert!(DifferentialContext::new(0, 1).is_err());
    }

    fn rand_f(seed: u64, m: usize) -> P {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_polynomial(&mut rng, m, 4, 9, 6)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn differential_matches_oracle(seed in any::<u64>(), m in 1usize..=3, order in 1usize..=3) {
            let c = ctx(m, order);
            let f = rand_f(seed, m);
            for n in 1..=order {
                prop_assert_eq!(higher_differential(&f, n, &c)?, taylor_oracle(&f, n, &c)?);
            }
        }

        #[test]
        fn differentials_are_weighted_homogeneous(seed in any::<u64>(), m in 1usize..=3) {
            let c = ctx(m, 4);
            let f = rand_f(seed, m);
            let w = c.weights();
            for n in 1..=4 {
                prop_assert!(higher_differential(&f, n, &c)?.is_weighted_homogeneous(&w, n as u32));
            }
        }

        #[test]
        fn differentials_are_linear(seed in any::<u64>(), a in -5i64..5, b in -5i64..5) {
            let c = ctx(2, 3);
            let (f, g) = (rand_f(seed, 2), rand_f(seed.wrapping_add(1), 2));
            let (a, b) = (Coefficient::from_i64(a), Coefficient::from_i64(b));
            let comb = &f.scale(&a) + &g.scale(&b);
            for n in 1..=3 {
                let lhs = higher_differential(&comb, n, &c)?;
                let rhs = &higher_differential(&f, n, &c)?.scale(&a)
                    + &higher_differential(&g, n, &c)?.scale(&b);
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn higher_leibniz(seed in any::<u64>(), m in 1usize..=2) {
            let c = ctx(m, 3);
            let (f, g) = (rand_f(seed, m), rand_f(seed.wrapping_add(9), m));
            let d = |p: &P, k: usize| if k == 0 { c.embed_base(p) } else { higher_differential(p, k, &c) };
            for n in 1..=3 {
                let lhs = higher_differential(&(&f * &g), n, &c)?;
                let mut rhs = P::zero(c.num_vars());
                for i in 0..=n {
                    rhs = &rhs + &(&d(&f, i)? * &d(&g, n - i)?);
                }
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn chain_rule_functoriality(seed in any::<u64>()) {
            // x_i -> phi_i, y_ij -> d^j phi_i carries d^n f to d^n (f o phi)
            let (m, order) = (2, 3);
            let c = ctx(m, order);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_polynomial(&mut rng, m, 3, 5, 4);
            let phi: Vec<P> = (0..m)
                .map(|_| crate::random::random_polynomial_in_degrees(&mut rng, m, 1, 2, 4, 3))
                .collect();
            let mut images = vec![P::zero(c.num_vars()); c.num_vars()];
            for i in 0..m {
                images[c.x_slot(i)] = c.embed_base(&phi[i])?;
                for j in 1..=order {
                    images[c.y_slot(i, j)] = higher_differential(&phi[i], j, &c)?;
                }
            }
            let composed = f.substitute(&phi)?;
            for n in 1..=order {
                let lhs = higher_differential(&f, n, &c)?.substitute(&images)?;
                prop_assert_eq!(lhs, higher_differential(&composed, n, &c)?);
            }
        }
    }
}
