//! Sathe–Selberg main terms and exact `σ_j(x)` counts.
//!
//! `G(z) = Γ(z+1)^{-1} ∏_p (1 - z/p)^{-1} (1 - 1/p)^z` is evaluated in log
//! space. The `p`-term of `log G` is `f(z/p) - z f(1/p)` with
//! `f(t) = -ln(1 - t) - t = Σ_{m≥2} t^m/m`, so the first-order parts cancel
//! before any rounding happens.

use std::sync::OnceLock;

use statrs::function::gamma::ln_gamma;

use crate::logs::log2;
use crate::sieve::{big_omega_histogram, primes_up_to, OmegaSieve, SieveConfig};
use crate::sum::CompensatedSum;
use crate::{Error, Result};

/// Truncation bound used when a tolerance is requested without one.
pub const G_TRUNCATION_BUDGET: u64 = 2_000_000_000;

/// Tolerance of the shared evaluator behind [`h_main_term`].
pub const DEFAULT_G_TOLERANCE: f64 = 1e-8;

const G_Z_MAX: f64 = 1.5;

/// Upper bound for `Σ_{p>P} 1/p²` from `π(t) < 1.25506 t / ln t`.
fn prime_square_tail(p_max: f64) -> f64 {
    2.0 * 1.25506 / (p_max * p_max.ln())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GEvaluation {
    pub z: f64,
    pub value: f64,
    /// Largest prime in the truncated product.
    pub truncation: u64,
    /// Bound on `|G(z) - value|`.
    pub tail_bound: f64,
}

/// `-ln(1 - t) - t`, accurate for small `t`.
fn second_order_log(t: f64) -> f64 {
    if t < 1e-3 {
        // t^2/2 + t^3/3 + ... ; eight terms reach below 1e-24 relative
        let mut term = t * t;
        let mut acc = 0.0;
        for m in 2..10 {
            acc += term / m as f64;
            term *= t;
        }
        acc
    } else {
        -(-t).ln_1p() - t
    }
}

/// Truncated products of `G` over a fixed list of primes.
#[derive(Debug, Clone)]
pub struct GEvaluator {
    primes: Vec<u64>,
}

impl GEvaluator {
    /// Uses every prime `≤ p_max`.
    pub fn with_truncation(p_max: u64) -> Result<Self> {
        if p_max < 2 {
            return Err(Error::Domain(
                "truncation must include at least p = 2".into(),
            ));
        }
        if p_max > G_TRUNCATION_BUDGET {
            return Err(Error::RangeTooLarge {
                what: "G truncation",
                requested: p_max,
                limit: G_TRUNCATION_BUDGET,
            });
        }
        Ok(Self {
            primes: primes_up_to(p_max)?,
        })
    }

    /// Chooses the truncation so every `z ∈ [0, 3/2]` meets `tolerance`.
    pub fn with_tolerance(tolerance: f64) -> Result<Self> {
        let p = truncation_for(G_Z_MAX, tolerance)?;
        Self::with_truncation(p)
    }

    pub fn truncation(&self) -> u64 {
        *self.primes.last().expect("at least one prime")
    }

    pub fn eval(&self, z: f64) -> Result<GEvaluation> {
        check_z(z)?;
        let mut log_product = CompensatedSum::new();
        // larger primes first: smallest terms accumulate before the big ones
        for &p in self.primes.iter().rev() {
            let pf = p as f64;
            log_product.add(second_order_log(z / pf) - z * second_order_log(1.0 / pf));
        }
        let log_g = log_product.value() - ln_gamma(z + 1.0);
        let value = log_g.exp();
        let truncation = self.truncation();
        let log_tail = log_tail_bound(z, truncation as f64);
        Ok(GEvaluation {
            z,
            value,
            truncation,
            tail_bound: value * log_tail.exp_m1(),
        })
    }
}

fn check_z(z: f64) -> Result<()> {
    if !(0.0..=G_Z_MAX).contains(&z) {
        return Err(Error::Domain(format!(
            "G(z) requires 0 <= z <= 3/2, got {z}"
        )));
    }
    Ok(())
}

/// Bound on the omitted part of `log G` when the product stops at `P`.
///
/// Each omitted term is at most `(z² + z) / (2p² (1 - w/p))` with `w = max(z, 1)`.
fn log_tail_bound(z: f64, p_max: f64) -> f64 {
    let w = z.max(1.0);
    0.5 * (z * z + z) / (1.0 - w / p_max) * prime_square_tail(p_max)
}

fn truncation_for(z: f64, tolerance: f64) -> Result<u64> {
    if !(tolerance > 0.0) {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    check_z(z)?;
    // G ≤ 2 on [0, 3/2] comfortably; solve the tail bound for P by doubling.
    let mut p = 1000u64;
    loop {
        let b = log_tail_bound(z, p as f64);
        if 2.0 * b.exp_m1() < tolerance {
            return Ok(p);
        }
        if p > G_TRUNCATION_BUDGET / 2 {
            return Err(Error::ToleranceUnachievable {
                tolerance,
                budget: G_TRUNCATION_BUDGET,
            });
        }
        p *= 2;
    }
}

/// `G(z)` within `tolerance`.
pub fn evaluate_g(z: f64, tolerance: f64) -> Result<GEvaluation> {
    let p = truncation_for(z, tolerance)?;
    let mut p_try = p;
    loop {
        let eval = GEvaluator::with_truncation(p_try)?.eval(z)?;
        if eval.tail_bound < tolerance {
            return Ok(eval);
        }
        if p_try > G_TRUNCATION_BUDGET / 2 {
            return Err(Error::ToleranceUnachievable {
                tolerance,
                budget: G_TRUNCATION_BUDGET,
            });
        }
        p_try *= 2;
    }
}

fn default_evaluator() -> Result<&'static GEvaluator> {
    static EVALUATOR: OnceLock<GEvaluator> = OnceLock::new();
    if let Some(e) = EVALUATOR.get() {
        return Ok(e);
    }
    let e = GEvaluator::with_tolerance(DEFAULT_G_TOLERANCE)?;
    Ok(EVALUATOR.get_or_init(|| e))
}

/// Largest `j` for which the main term is defined at `x`: `⌊(3/2) log_2 x⌋`.
pub fn max_j(x: f64) -> u32 {
    (1.5 * log2(x)).floor() as u32
}

/// `H_j(x) = G((j-1)/log log x) · x/log x · (log log x)^{j-1}/(j-1)!`.
pub fn h_main_term(j: u32, x: f64) -> Result<f64> {
    h_main_term_with(default_evaluator()?, j, x)
}

pub fn h_main_term_with(g: &GEvaluator, j: u32, x: f64) -> Result<f64> {
    if !(x >= 16.0) {
        return Err(Error::Domain(format!("H_j(x) requires x >= 16, got {x}")));
    }
    let jmax = max_j(x);
    if j < 1 || j > jmax {
        return Err(Error::Domain(format!(
            "H_j(x) requires 1 <= j <= floor(1.5 log_2 x) = {jmax}, got j = {j}"
        )));
    }
    let ll = x.ln().ln();
    let z = (j - 1) as f64 / ll;
    let gz = g.eval(z)?.value;
    let k = (j - 1) as f64;
    let log_rest = x.ln() - x.ln().ln() + k * ll.ln() - ln_gamma(k + 1.0);
    Ok(gz * log_rest.exp())
}

/// `σ_j(x) = #{n ≤ x : Ω(n) = j}`.
pub fn sigma_exact(j: u32, x: u64) -> Result<u64> {
    let counts = sigma_counts(x)?;
    Ok(counts.get(j as usize).copied().unwrap_or(0))
}

/// `σ_j(x)` for every `j`, from one streaming pass.
pub fn sigma_counts(x: u64) -> Result<Vec<u64>> {
    sigma_counts_with(x, SieveConfig::default())
}

pub fn sigma_counts_with(x: u64, config: SieveConfig) -> Result<Vec<u64>> {
    if x < 1 {
        return Err(Error::Domain("sigma requires x >= 1".into()));
    }
    let sieve = OmegaSieve::with_config(x, config)?;
    big_omega_histogram(&sieve, x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaRow {
    pub j: u32,
    pub x: u64,
    pub sigma_exact: u64,
    pub h_main_term: f64,
    pub ratio: f64,
}

/// Rows `j = 1..=j_max` of exact counts against main terms.
pub fn sigma_table(x: u64, j_max: u32) -> Result<Vec<SigmaRow>> {
    sigma_table_with(x, j_max, SieveConfig::default())
}

pub fn sigma_table_with(x: u64, j_max: u32, config: SieveConfig) -> Result<Vec<SigmaRow>> {
    let xf = x as f64;
    if x < 16 {
        return Err(Error::Domain(format!(
            "sigma_table requires x >= 16, got {x}"
        )));
    }
    let limit = max_j(xf);
    if j_max < 1 || j_max > limit {
        return Err(Error::Domain(format!(
            "jmax must lie in [1, {limit}] at x = {x}, got {j_max}"
        )));
    }
    let counts = sigma_counts_with(x, config)?;
    let g = default_evaluator()?;
    (1..=j_max)
        .map(|j| {
            let sigma = counts.get(j as usize).copied().unwrap_or(0);
            let h = h_main_term_with(g, j, xf)?;
            Ok(SigmaRow {
                j,
                x,
                sigma_exact: sigma,
                h_main_term: h,
                ratio: sigma as f64 / h,
            })
        })
        .collect()
}
