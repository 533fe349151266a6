//! Deterministic random generators for property tests and the verification
//! harness. All draws go through a caller-owned RNG.

use rand::Rng;

use crate::poly::{ExponentVector, Polynomial};
use crate::scalar::{Coefficient, Scalar};

pub fn random_integer<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Coefficient {
    Coefficient::from_i64(rng.gen_range(-bound..=bound))
}

fn random_exponent<R: Rng + ?Sized>(rng: &mut R, n: usize, min_deg: u32, max_deg: u32) -> ExponentVector {
    let d = rng.gen_range(min_deg..=max_deg);
    let mut e = vec![0u32; n];
    for _ in 0..d {
        e[rng.gen_range(0..n)] += 1;
    }
    ExponentVector::new(e)
}

/// Up to `max_terms` random terms of total degree `<= max_deg` with integer
/// coefficients in `[-coeff_bound, coeff_bound]`.
pub fn random_polynomial<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    max_deg: u32,
    coeff_bound: i64,
    max_terms: usize,
) -> Polynomial<Coefficient> {
    let mut p = Polynomial::zero(n);
    let count = rng.gen_range(1..=max_terms.max(1));
    for _ in 0..count {
        let e = random_exponent(rng, n, 0, max_deg);
        p.add_term(e, random_integer(rng, coeff_bound));
    }
    p
}

/// Like [`random_polynomial`] but every term has degree in `min_deg..=max_deg`.
pub fn random_polynomial_in_degrees<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    min_deg: u32,
    max_deg: u32,
    coeff_bound: i64,
    max_terms: usize,
) -> Polynomial<Coefficient> {
    let mut p = Polynomial::zero(n);
    let count = rng.gen_range(1..=max_terms.max(1));
    for _ in 0..count {
        let e = random_exponent(rng, n, min_deg, max_deg);
        p.add_term(e, random_integer(rng, coeff_bound));
    }
    p
}
