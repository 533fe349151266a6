//! Self-verification over a grid of `(m, N)` values.
//!
//! Each grid point runs six suites on freshly drawn random inputs. Trials
//! are seeded from `(seed, m, N, trial)` so a report is reproducible and
//! independent of evaluation order.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ga::{has_constant_jacobian, PolyEndo};
use crate::kaehler::{higher_differential, taylor_oracle, DifferentialContext};
use crate::naming::{render_plain, VarNames};
use crate::poly::Polynomial;
use crate::random::random_polynomial;
use crate::rep::{alpha_map, recover_series, AlphaImage};
use crate::scalar::Coefficient;
use crate::series::{random_automorphism_with, TruncatedSeriesMap};

type Map = TruncatedSeriesMap<Coefficient>;
type Endo = PolyEndo<Coefficient>;

pub const DEFAULT_GRID: [(usize, usize); 3] = [(1, 4), (2, 3), (3, 2)];
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TRIALS: usize = 100;

#[derive(Clone, Debug)]
pub struct HarnessConfig {
    pub grid: Vec<(usize, usize)>,
    pub seed: u64,
    pub trials: usize,
    /// Coefficient range of random series maps.
    pub coeff_bound: i64,
    /// Test hook: perturbs every computed alpha image so the harness can be
    /// checked for catching a broken implementation.
    pub corrupt_alpha: bool,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            grid: DEFAULT_GRID.to_vec(),
            seed: DEFAULT_SEED,
            trials: DEFAULT_TRIALS,
            coeff_bound: 3,
            corrupt_alpha: false,
        }
    }
}

impl HarnessConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Validation("trials must be at least 1".into()));
        }
        if self.grid.is_empty() {
            return Err(Error::Validation("empty (m, N) grid".into()));
        }
        if let Some(&(m, n)) = self.grid.iter().find(|&&(m, n)| m == 0 || n == 0) {
            return Err(Error::Validation(format!("invalid grid point m={m}, N={n}")));
        }
        if self.coeff_bound < 1 {
            return Err(Error::Validation("coefficient bound must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Homomorphism,
    InverseLaw,
    RoundTrip,
    BlockTriangular,
    OracleEquivalence,
    Leibniz,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Homomorphism,
        Suite::InverseLaw,
        Suite::RoundTrip,
        Suite::BlockTriangular,
        Suite::OracleEquivalence,
        Suite::Leibniz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Homomorphism => "homomorphism",
            Suite::InverseLaw => "inverse law",
            Suite::RoundTrip => "round trip",
            Suite::BlockTriangular => "block triangularity",
            Suite::OracleEquivalence => "oracle equivalence",
            Suite::Leibniz => "leibniz",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub m: usize,
    pub order: usize,
    pub suite: Suite,
    pub passed: usize,
    pub failed: usize,
    /// Trial index and description of the first failure.
    pub first_counterexample: Option<(usize, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub seed: u64,
    pub trials: usize,
    pub results: Vec<SuiteResult>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.failed == 0)
    }

    pub fn first_failure(&self) -> Option<&SuiteResult> {
        self.results.iter().find(|r| r.failed > 0)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed {} trials {}", self.seed, self.trials)?;
        for r in &self.results {
            let status = if r.failed == 0 { "PASS" } else { "FAIL" };
            writeln!(
                f,
                "{status} m={} N={} {}: {} passed, {} failed",
                r.m,
                r.order,
                r.suite.name(),
                r.passed,
                r.failed
            )?;
            if let Some((trial, text)) = &r.first_counterexample {
                writeln!(f, "  first counterexample (trial {trial}): {text}")?;
            }
        }
        write!(f, "{}", if self.all_passed() { "all suites passed" } else { "verification FAILED" })
    }
}

fn trial_rng(seed: u64, m: usize, order: usize, trial: usize) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(m as u64).to_le_bytes());
    key[16..24].copy_from_slice(&(order as u64).to_le_bytes());
    key[24..].copy_from_slice(&(trial as u64).to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

fn describe(phi: &Map) -> String {
    let names = VarNames::coordinates(phi.m());
    let parts: Vec<String> = phi.components().iter().map(|p| render_plain(p, &names)).collect();
    format!("({})", parts.join(", "))
}

struct Subject {
    m: usize,
    order: usize,
    corrupt: bool,
}

impl Subject {
    fn alpha(&self, phi: &Map) -> Result<Endo> {
        let map = alpha_map(phi)?;
        if !self.corrupt {
            return Ok(map);
        }
        // add y_11^N to the image of y_mN: still weighted homogeneous
        let mut comps = map.into_components();
        let n = comps.len();
        let bump = Polynomial::var(n, 0).pow(self.order as u32);
        comps[n - 1] = &comps[n - 1] + &bump;
        PolyEndo::new(comps)
    }

    fn run(&self, suite: Suite, rng: &mut ChaCha8Rng, bound: i64) -> Result<Option<String>> {
        let (m, order) = (self.m, self.order);
        let draw = |rng: &mut ChaCha8Rng| random_automorphism_with(rng, m, order, bound);
        let fail = |what: &str, phi: &Map| Ok(Some(format!("{what} for phi = {}", describe(phi))));
        match suite {
            Suite::Homomorphism => {
                let (phi, psi) = (draw(rng), draw(rng));
                let lhs = self.alpha(&phi.compose(&psi)?)?;
                let rhs = self.alpha(&phi)?.compose(&self.alpha(&psi)?)?;
                if lhs != rhs {
                    return Ok(Some(format!(
                        "alpha(phi o psi) != alpha(phi) o alpha(psi) for phi = {}, psi = {}",
                        describe(&phi),
                        describe(&psi)
                    )));
                }
                if !self.alpha(&Map::identity(m, order))?.is_identity() {
                    return Ok(Some("alpha(id) is not the identity".into()));
                }
                Ok(None)
            }
            Suite::InverseLaw => {
                let phi = draw(rng);
                let a = self.alpha(&phi)?;
                let b = self.alpha(&phi.invert()?)?;
                if !a.compose(&b)?.is_identity() || !b.compose(&a)?.is_identity() {
                    return fail("alpha(phi^-1) is not inverse to alpha(phi)", &phi);
                }
                Ok(None)
            }
            Suite::RoundTrip => {
                let phi = draw(rng);
                let recovered = AlphaImage::from_endo(self.alpha(&phi)?, m, order).and_then(|a| recover_series(&a));
                match recovered {
                    Ok(back) if back == phi => Ok(None),
                    Ok(back) => Ok(Some(format!(
                        "recovered {} from phi = {}",
                        describe(&back),
                        describe(&phi)
                    ))),
                    Err(e) => fail(&format!("recovery failed ({e})"), &phi),
                }
            }
            Suite::BlockTriangular => {
                let phi = draw(rng);
                let a = self.alpha(&phi)?;
                if !a.is_block_triangular(m)? {
                    return fail("image not block triangular", &phi);
                }
                if !has_constant_jacobian(&a) {
                    return fail("image has non-constant or zero Jacobian", &phi);
                }
                Ok(None)
            }
            Suite::OracleEquivalence => {
                let ctx = DifferentialContext::new(m, order)?;
                let f = random_polynomial(rng, m, 4, 9, 6);
                for n in 1..=order {
                    if higher_differential(&f, n, &ctx)? != taylor_oracle(&f, n, &ctx)? {
                        let names = VarNames::coordinates(m);
                        return Ok(Some(format!("d^{n} f differs from oracle for f = {}", render_plain(&f, &names))));
                    }
                }
                Ok(None)
            }
            Suite::Leibniz => {
                let ctx = DifferentialContext::new(m, order)?;
                let f = random_polynomial(rng, m, 3, 9, 4);
                let g = random_polynomial(rng, m, 3, 9, 4);
                let d = |p: &Polynomial<Coefficient>, k: usize| {
                    if k == 0 {
                        ctx.embed_base(p)
                    } else {
                        higher_differential(p, k, &ctx)
                    }
                };
                for n in 1..=order {
                    let lhs = d(&(&f * &g), n)?;
                    let mut rhs = Polynomial::zero(ctx.num_vars());
                    for i in 0..=n {
                        rhs = &rhs + &(&d(&f, i)? * &d(&g, n - i)?);
                    }
                    if lhs != rhs {
                        let names = VarNames::coordinates(m);
                        return Ok(Some(format!(
                            "d^{n}(fg) mismatch for f = {}, g = {}",
                            render_plain(&f, &names),
                            render_plain(&g, &names)
                        )));
                    }
                }
                Ok(None)
            }
        }
    }
}

/// Runs every suite on every grid point. Errors raised inside a trial count
/// as failures; only an invalid configuration is returned as `Err`.
pub fn run(config: &HarnessConfig) -> Result<Report> {
    config.validate()?;
    let mut results = Vec::new();
    for &(m, order) in &config.grid {
        let subject = Subject { m, order, corrupt: config.corrupt_alpha };
        for (k, &suite) in Suite::ALL.iter().enumerate() {
            let mut result = SuiteResult {
                m,
                order,
                suite,
                passed: 0,
                failed: 0,
                first_counterexample: None,
            };
            for trial in 0..config.trials {
                let mut rng = trial_rng(config.seed ^ ((k as u64) << 56), m, order, trial);
                let outcome = match subject.run(suite, &mut rng, config.coeff_bound) {
                    Ok(o) => o,
                    Err(e) => Some(format!("error: {e}")),
                };
                match outcome {
                    None => result.passed += 1,
                    Some(text) => {
                        result.failed += 1;
                        result.first_counterexample.get_or_insert((trial, text));
                    }
                }
            }
            results.push(result);
        }
    }
    Ok(Report {
        seed: config.seed,
        trials: config.trials,
        results,
    })
}
