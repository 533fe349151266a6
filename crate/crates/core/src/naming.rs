//! Variable naming contexts. Polynomials only know slot numbers; a
//! [`VarNames`] maps slots to display names (plain and LaTeX) and resolves
//! identifiers, including aliases, when parsing.

use std::collections::HashMap;


use crate::kaehler::DifferentialContext;
use crate::poly::{ExponentVector, Polynomial};
use crate::scalar::Scalar;

/// How the jet coordinates `d^j x_i` are displayed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum JetStyle {
    /// `y1_2` (or `y2` when there is a single base variable)
    #[default]
    Y,
    /// `d2x1` (or `d2x`)
    D,
}

#[derive(Clone, Debug)]
pub struct VarNames {
    plain: Vec<String>,
    latex: Vec<String>,
    lookup: HashMap<String, usize>,
}

impl VarNames {
    fn from_parts(plain: Vec<String>, latex: Vec<String>) -> Self {
        let lookup = plain.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        VarNames { plain, latex, lookup }
    }

    fn alias(&mut self, name: String, slot: usize) {
        self.lookup.entry(name).or_insert(slot);
    }

    /// `prefix1, ..., prefixN`.
    pub fn indexed(prefix: &str, n: usize) -> Self {
        let plain = (1..=n).map(|i| format!("{prefix}{i}")).collect();
        let latex = (1..=n).map(|i| format!("{prefix}_{{{i}}}")).collect();
        Self::from_parts(plain, latex)
    }

    /// Coordinates `x1..xm`; a single coordinate is shown as `x` and also
    /// accepts `x1`.
    pub fn coordinates(m: usize) -> Self {
        if m == 1 {
            let mut names = Self::from_parts(vec!["x".into()], vec!["x".into()]);
            names.alias("x1".into(), 0);
            names
        } else {
            Self::indexed("x", m)
        }
    }

    /// Names for the `N*m` jet coordinates `y_ij = d^j x_i` in order-major
    /// layout, optionally preceded by the `m` base coordinates.
    pub fn jets(m: usize, order: usize, style: JetStyle, with_base: bool) -> Self {
        let mut plain = Vec::new();
        let mut latex = Vec::new();
        if with_base {
            let base = Self::coordinates(m);
            plain.extend(base.plain.iter().cloned());
            latex.extend(base.latex.iter().cloned());
        }
        let offset = plain.len();
        for j in 1..=order {
            for i in 1..=m {
                let (p, l) = match (style, m) {
                    (JetStyle::Y, 1) => (format!("y{j}"), format!("y_{{{j}}}")),
                    (JetStyle::Y, _) => (format!("y{i}_{j}"), format!("y_{{{i},{j}}}")),
                    (JetStyle::D, 1) => (format!("d{j}x"), format!("d^{{{j}}}x")),
                    (JetStyle::D, _) => (format!("d{j}x{i}"), format!("d^{{{j}}}x_{{{i}}}")),
                };
                plain.push(p);
                latex.push(l);
            }
        }
        let mut names = Self::from_parts(plain, latex);
        if with_base && m == 1 {
            names.alias("x1".into(), 0);
        }
        for j in 1..=order {
            for i in 1..=m {
                let slot = offset + (j - 1) * m + (i - 1);
                names.alias(format!("y{i}_{j}"), slot);
                names.alias(format!("d{j}x{i}"), slot);
                if m == 1 {
                    names.alias(format!("y{j}"), slot);
                    names.alias(format!("d{j}x"), slot);
                }
            }
        }
        names
    }

    /// Names matching a [`DifferentialContext`] layout.
    pub fn for_context(ctx: &DifferentialContext, style: JetStyle) -> Self {
        Self::jets(ctx.m(), ctx.order(), style, true)
    }

    pub fn len(&self) -> usize {
        self.plain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plain.is_empty()
    }

    pub fn name(&self, slot: usize) -> &str {
        &self.plain[slot]
    }

    pub fn latex_name(&self, slot: usize) -> &str {
        &self.latex[slot]
    }

    pub fn resolve(&self, ident: &str) -> Option<usize> {
        self.lookup.get(ident).copied()
    }
}

fn monomial_plain(e: &ExponentVector, names: &VarNames) -> String {
    let factors: Vec<String> = e
        .as_slice()
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| match k {
            1 => names.name(i).to_string(),
            _ => format!("{}^{k}", names.name(i)),
        })
        .collect();
    factors.join("*")
}

fn monomial_latex(e: &ExponentVector, names: &VarNames) -> String {
    let factors: Vec<String> = e
        .as_slice()
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| match k {
            1 => names.latex_name(i).to_string(),
            _ => format!("{}^{{{k}}}", names.latex_name(i)),
        })
        .collect();
    factors.join(" ")
}

fn join_terms(terms: Vec<String>) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, t) in terms.into_iter().enumerate() {
        if k == 0 {
            out.push_str(&t);
        } else if let Some(rest) = t.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&t);
        }
    }
    out
}

/// Canonical plain rendering, e.g. `2*x1^2*x2 + 1/2*x3`. Parsing the result
/// with the same names gives back the polynomial.
pub fn render_plain<C: Scalar>(p: &Polynomial<C>, names: &VarNames) -> String {
    assert_eq!(names.len(), p.num_vars(), "naming context does not match ring");
    let terms = p
        .terms()
        .map(|(e, c)| {
            if e.is_constant() {
                return c.to_string();
            }
            let mono = monomial_plain(e, names);
            if c.is_one() {
                mono
            } else if (-c.clone()).is_one() {
                format!("-{mono}")
            } else if c.needs_parens() {
                format!("({c})*{mono}")
            } else {
                format!("{c}*{mono}")
            }
        })
        .collect();
    join_terms(terms)
}

pub fn render_latex<C: Scalar>(p: &Polynomial<C>, names: &VarNames) -> String {
    assert_eq!(names.len(), p.num_vars(), "naming context does not match ring");
    let terms = p
        .terms()
        .map(|(e, c)| {
            if e.is_constant() {
                return c.to_latex();
            }
            let mono = monomial_latex(e, names);
            if c.is_one() {
                mono
            } else if (-c.clone()).is_one() {
                format!("-{mono}")
            } else if c.needs_parens() {
                format!("\\left({}\\right) {mono}", c.to_latex())
            } else {
                format!("{} {mono}", c.to_latex())
            }
        })
        .collect();
    join_terms(terms)
}
