//! Symbolic coefficients: polynomials over the rationals in named
//! indeterminates such as `a^1_{1,0}`. Running the representation over this
//! ring reproduces the universal formulas with opaque series coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::poly::{monomials_of_degree, Polynomial};
use crate::scalar::{factorial_int, Scalar};
use crate::series::TruncatedSeriesMap;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    plain: String,
    latex: String,
}

impl Label {
    pub fn new(plain: impl Into<String>, latex: impl Into<String>) -> Self {
        Label {
            plain: plain.into(),
            latex: latex.into(),
        }
    }

    /// Label of the series coefficient `a^r_n` of `x^n` in component `r`
    /// (1-based). With a single component the upper index is dropped and the
    /// label is `a{n}`.
    pub fn series_coefficient(component: Option<usize>, multi_index: &[u32]) -> Self {
        let sep = if multi_index.iter().any(|&k| k > 9) { "," } else { "" };
        let idx: Vec<String> = multi_index.iter().map(u32::to_string).collect();
        let latex_idx = idx.join(",");
        match component {
            None => Label::new(format!("a{}", idx.join(sep)), format!("a_{{{latex_idx}}}")),
            Some(r) => Label::new(
                format!("a{r}_{}", idx.join(sep)),
                format!("a^{{{r}}}_{{{latex_idx}}}"),
            ),
        }
    }

    pub fn plain(&self) -> &str {
        &self.plain
    }
}

type SymMonomial = Vec<(Label, u32)>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Symbolic {
    terms: BTreeMap<SymMonomial, BigRational>,
}

impl Symbolic {
    pub fn indeterminate(label: Label) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![(label, 1)], BigRational::one());
        Symbolic { terms }
    }

    pub fn constant(c: BigRational) -> Self {
        let mut s = Symbolic::default();
        s.add_term(Vec::new(), c);
        s
    }

    fn add_term(&mut self, mono: SymMonomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(mono).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Substitutes a value for every indeterminate; `None` if some label has
    /// no value.
    pub fn evaluate(&self, value: impl Fn(&Label) -> Option<BigRational>) -> Option<BigRational> {
        let mut total = BigRational::zero();
        for (mono, c) in &self.terms {
            let mut term = c.clone();
            for (l, k) in mono {
                term *= num_traits::pow(value(l)?, *k as usize);
            }
            total += term;
        }
        Some(total)
    }
}

fn mul_monomials(a: &SymMonomial, b: &SymMonomial) -> SymMonomial {
    let mut merged: BTreeMap<Label, u32> = BTreeMap::new();
    for (l, k) in a.iter().chain(b) {
        *merged.entry(l.clone()).or_insert(0) += k;
    }
    merged.into_iter().collect()
}

fn render(s: &Symbolic, latex: bool) -> String {
    if s.terms.is_empty() {
        return "0".into();
    }
    let mut parts: Vec<String> = Vec::new();
    for (mono, c) in &s.terms {
        let factors: Vec<String> = mono
            .iter()
            .map(|(l, k)| {
                let name = if latex { &l.latex } else { &l.plain };
                match (k, latex) {
                    (1, _) => name.clone(),
                    (_, false) => format!("{name}^{k}"),
                    (_, true) => format!("{{{name}}}^{{{k}}}"),
                }
            })
            .collect();
        let joined = factors.join(if latex { " " } else { "*" });
        let coeff = if latex { c.to_latex() } else { c.to_string() };
        let term = if mono.is_empty() {
            coeff
        } else if c.is_one() {
            joined
        } else if (-c.clone()).is_one() {
            format!("-{joined}")
        } else if latex {
            format!("{coeff} {joined}")
        } else {
            format!("{coeff}*{joined}")
        };
        parts.push(term);
    }
    let mut out = String::new();
    for (k, t) in parts.into_iter().enumerate() {
        match (k, t.strip_prefix('-')) {
            (0, _) => out.push_str(&t),
            (_, Some(rest)) => {
                out.push_str(" - ");
                out.push_str(rest);
            }
            (_, None) => {
                out.push_str(" + ");
                out.push_str(&t);
            }
        }
    }
    out
}

impl fmt::Display for Symbolic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self, false))
    }
}

impl Add for Symbolic {
    type Output = Symbolic;

    fn add(mut self, rhs: Symbolic) -> Symbolic {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Sub for Symbolic {
    type Output = Symbolic;

    fn sub(self, rhs: Symbolic) -> Symbolic {
        self + (-rhs)
    }
}

impl Neg for Symbolic {
    type Output = Symbolic;

    fn neg(self) -> Symbolic {
        Symbolic {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Mul for Symbolic {
    type Output = Symbolic;

    fn mul(self, rhs: Symbolic) -> Symbolic {
        let mut out = Symbolic::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(mul_monomials(ma, mb), ca * cb);
            }
        }
        out
    }
}

impl Zero for Symbolic {
    fn zero() -> Self {
        Symbolic::default()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Symbolic {
    fn one() -> Self {
        Symbolic::constant(BigRational::one())
    }
}

impl Scalar for Symbolic {
    fn from_integer(n: BigInt) -> Self {
        Symbolic::constant(BigRational::from_integer(n))
    }

    fn needs_parens(&self) -> bool {
        self.terms.len() > 1
    }

    fn to_latex(&self) -> String {
        render(self, true)
    }
}

/// Series map whose coefficient of `x^n` in component `r` is the
/// indeterminate `a^r_n`, for all `1 <= |n| <= N`. With `m = 1` the labels
/// are `a1, a2, ...`.
pub fn generic_series_map(m: usize, order: usize) -> Result<TruncatedSeriesMap<Symbolic>> {
    let components = (0..m)
        .map(|r| {
            let mut p = Polynomial::zero(m);
            for d in 1..=order as u32 {
                for e in monomials_of_degree(m, d) {
                    let component = if m == 1 { None } else { Some(r + 1) };
                    let label = Label::series_coefficient(component, e.as_slice());
                    p.add_term(e, Symbolic::indeterminate(label));
                }
            }
            p
        })
        .collect();
    TruncatedSeriesMap::new(order, components)
}

/// Label `f_{x1x1x2}` for the partial derivative of `f` at the origin.
pub fn derivative_label(multi_index: &[u32]) -> Label {
    let m = multi_index.len();
    let (mut plain, mut latex) = (String::new(), String::new());
    for (i, &k) in multi_index.iter().enumerate() {
        for _ in 0..k {
            if m == 1 {
                plain.push('x');
                latex.push('x');
            } else {
                plain.push_str(&format!("x{}", i + 1));
                latex.push_str(&format!("x_{{{}}}", i + 1));
            }
        }
    }
    if plain.is_empty() {
        Label::new("f", "f")
    } else {
        Label::new(format!("f_{plain}"), format!("f_{{{latex}}}"))
    }
}

/// Taylor polynomial `sum_{|n| <= degree} f_n / n! x^n` of a generic `f`,
/// with `f_n` the indeterminate derivative labels of [`derivative_label`].
/// Differentials of it at the origin display the prefactors of the
/// universal formula.
pub fn generic_taylor_polynomial(m: usize, degree: u32) -> Polynomial<Symbolic> {
    let mut p = Polynomial::zero(m);
    for d in 0..=degree {
        for e in monomials_of_degree(m, d) {
            let denom = e.as_slice().iter().fold(BigInt::one(), |acc, &k| acc * factorial_int(k as u64));
            let c = Symbolic::constant(BigRational::new(BigInt::one(), denom))
                * Symbolic::indeterminate(derivative_label(e.as_slice()));
            p.add_term(e, c);
        }
    }
    p
}
