//! JSON records for series maps and polynomial maps.
//!
//! Coefficients are stored as `"p/q"` strings so that values survive a round
//! trip exactly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ga::{PolyAutomorphism, PolyEndo};
use crate::poly::{ExponentVector, Polynomial};
use crate::scalar::{parse_coefficient, Coefficient};
use crate::series::TruncatedSeriesMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub exp: Vec<u32>,
    pub c: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapRecord {
    SeriesMap {
        m: usize,
        #[serde(rename = "N")]
        order: usize,
        components: Vec<Vec<TermRecord>>,
    },
    PolyEndo {
        #[serde(rename = "m", alias = "n")]
        n: usize,
        components: Vec<Vec<TermRecord>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        inverse: Option<Vec<Vec<TermRecord>>>,
    },
}

pub fn polynomial_to_terms(p: &Polynomial<Coefficient>) -> Vec<TermRecord> {
    p.terms()
        .map(|(e, c)| TermRecord {
            exp: e.as_slice().to_vec(),
            c: c.to_string(),
        })
        .collect()
}

pub fn polynomial_from_terms(num_vars: usize, terms: &[TermRecord]) -> Result<Polynomial<Coefficient>> {
    let mut p = Polynomial::zero(num_vars);
    for t in terms {
        if t.exp.len() != num_vars {
            return Err(Error::Serialization(format!(
                "exponent vector of length {} in a polynomial of {num_vars} variables",
                t.exp.len()
            )));
        }
        let c = parse_coefficient(&t.c).map_err(|e| Error::Serialization(e.to_string()))?;
        p.add_term(ExponentVector::new(t.exp.clone()), c);
    }
    Ok(p)
}

fn components_from(n: usize, comps: &[Vec<TermRecord>]) -> Result<Vec<Polynomial<Coefficient>>> {
    if comps.len() != n {
        return Err(Error::Serialization(format!("expected {n} components, found {}", comps.len())));
    }
    comps.iter().map(|c| polynomial_from_terms(n, c)).collect()
}

impl MapRecord {
    pub fn from_series(phi: &TruncatedSeriesMap<Coefficient>) -> Self {
        MapRecord::SeriesMap {
            m: phi.m(),
            order: phi.order(),
            components: phi.components().iter().map(polynomial_to_terms).collect(),
        }
    }

    pub fn from_endo(f: &PolyEndo<Coefficient>) -> Self {
        MapRecord::PolyEndo {
            n: f.n(),
            components: f.components().iter().map(polynomial_to_terms).collect(),
            inverse: None,
        }
    }

    pub fn from_automorphism(f: &PolyAutomorphism<Coefficient>) -> Self {
        MapRecord::PolyEndo {
            n: f.n(),
            components: f.forward().components().iter().map(polynomial_to_terms).collect(),
            inverse: f
                .inverse()
                .map(|g| g.components().iter().map(polynomial_to_terms).collect()),
        }
    }

    pub fn to_series(&self) -> Result<TruncatedSeriesMap<Coefficient>> {
        match self {
            MapRecord::SeriesMap { m, order, components } => {
                TruncatedSeriesMap::new(*order, components_from(*m, components)?)
            }
            MapRecord::PolyEndo { .. } => Err(Error::Serialization("expected a series_map record".into())),
        }
    }

    /// Verifies a stored inverse when present.
    pub fn to_automorphism(&self) -> Result<PolyAutomorphism<Coefficient>> {
        match self {
            MapRecord::PolyEndo { n, components, inverse } => {
                let forward = PolyEndo::new(components_from(*n, components)?)?;
                match inverse {
                    Some(inv) => PolyAutomorphism::with_inverse(forward, PolyEndo::new(components_from(*n, inv)?)?),
                    None => Ok(PolyAutomorphism::from_endo(forward)),
                }
            }
            MapRecord::SeriesMap { .. } => Err(Error::Serialization("expected a poly_endo record".into())),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("records always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))
    }
}
