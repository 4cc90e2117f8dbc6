//! Slowly varying functions `L` and the integral `∫_2^∞ dt / (t log t · L(t))`.
//!
//! Quadrature runs in `u = ln ln t`, where the integrand becomes `du / L`.
//! The built-in families also have a closed-form tail: for
//! `L = log_2 ⋯ log_{ℓ-3} · (log_{ℓ-2})^{1+ε}` the integrand is the derivative
//! of `-1/(ε (log_{ℓ-2} t)^ε)` once no iterated log is clamped.

use std::fmt;
use std::path::Path;

use crate::logs::{iterated_log, iterated_log_from_loglog, log1};
use crate::{Error, Result};

/// Absolute tolerance of the adaptive Simpson rule.
pub const QUADRATURE_TOLERANCE: f64 = 1e-9;

const QUADRATURE_BUDGET: usize = 1 << 20;

/// Piecewise-linear `L` through sorted `(x, L(x))` nodes, constant outside them.
#[derive(Debug, Clone, PartialEq)]
pub struct LTable {
    points: Vec<(f64, f64)>,
}

impl LTable {
    /// Accepts weakly increasing, positive tables with strictly increasing nodes.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("L table is empty".into()));
        }
        for &(x, y) in &points {
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::InvalidInput("L table entries must be finite".into()));
            }
            if y <= 0.0 {
                return Err(Error::InvalidInput(format!("L({x}) = {y} is not positive")));
            }
        }
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::InvalidInput(format!(
                    "L table nodes must be strictly increasing ({} then {})",
                    w[0].0, w[1].0
                )));
            }
            if w[1].1 < w[0].1 {
                return Err(Error::InvalidInput(format!(
                    "L must be nondecreasing: L({}) = {} > L({}) = {}",
                    w[0].0, w[0].1, w[1].0, w[1].1
                )));
            }
        }
        Ok(Self { points })
    }

    /// Parses `x,L` lines. A non-numeric first line is taken as a header;
    /// blank lines and `#` comments are skipped.
    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut points = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split(',').map(str::trim);
            let (a, b) = match (fields.next(), fields.next(), fields.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "line {}: expected two comma-separated fields",
                        lineno + 1
                    )))
                }
            };
            match (a.parse::<f64>(), b.parse::<f64>()) {
                (Ok(x), Ok(y)) => points.push((x, y)),
                _ if points.is_empty() && lineno == 0 => continue,
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "line {}: cannot parse '{line}' as numbers",
                        lineno + 1
                    )))
                }
            }
        }
        Self::new(points)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        Self::parse_csv(&text)
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn eval(&self, x: f64) -> f64 {
        let pts = &self.points;
        let first = pts[0];
        let last = pts[pts.len() - 1];
        if x <= first.0 {
            return first.1;
        }
        if x >= last.0 {
            return last.1;
        }
        let i = pts.partition_point(|p| p.0 <= x);
        let (x0, y0) = pts[i - 1];
        let (x1, y1) = pts[i];
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LSpec {
    /// `L(x) = (log_1 x)^ε`.
    PowerOfLog {
        epsilon: f64,
    },
    /// `ℓ = 3` is `(log_1 x)^ε`; `ℓ ≥ 4` is `log_2 x ⋯ log_{ℓ-3} x · (log_{ℓ-2} x)^{1+ε}`.
    IteratedLogProduct {
        ell: u32,
        epsilon: f64,
    },
    CustomTable(LTable),
}

impl fmt::Display for LSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LSpec::PowerOfLog { epsilon } => write!(f, "power-of-log(epsilon={epsilon})"),
            LSpec::IteratedLogProduct { ell, epsilon } => {
                write!(f, "iterated-log-product(ell={ell},epsilon={epsilon})")
            }
            LSpec::CustomTable(t) => write!(f, "custom-table({} nodes)", t.points.len()),
        }
    }
}

impl LSpec {
    pub fn power_of_log(epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(LSpec::PowerOfLog { epsilon })
    }

    pub fn iterated_log_product(ell: u32, epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        if ell < 3 {
            return Err(Error::InvalidInput(format!(
                "ell must be at least 3, got {ell}"
            )));
        }
        Ok(LSpec::IteratedLogProduct { ell, epsilon })
    }

    pub fn custom(table: LTable) -> Self {
        LSpec::CustomTable(table)
    }

    /// Constant `L ≡ 1`, which violates the integral condition.
    pub fn constant_one() -> Self {
        LSpec::CustomTable(LTable {
            points: vec![(2.0, 1.0)],
        })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            LSpec::PowerOfLog { epsilon } => check_epsilon(*epsilon),
            LSpec::IteratedLogProduct { ell, epsilon } => {
                Self::iterated_log_product(*ell, *epsilon).map(|_| ())
            }
            LSpec::CustomTable(t) => LTable::new(t.points.clone()).map(|_| ()),
        }
    }

    /// `L` through `u = ln ln t`; defined for every `t > 1`.
    fn eval_loglog(&self, u: f64) -> f64 {
        match self {
            LSpec::PowerOfLog { epsilon } | LSpec::IteratedLogProduct { ell: 3, epsilon } => {
                (epsilon * u.max(0.0)).exp()
            }
            LSpec::IteratedLogProduct { ell, epsilon } => {
                let mut acc = 1.0;
                for m in 2..ell - 2 {
                    acc *= iterated_log_from_loglog(m, u);
                }
                acc * iterated_log_from_loglog(ell - 2, u).powf(1.0 + epsilon)
            }
            LSpec::CustomTable(t) => t.eval(u.exp().exp()),
        }
    }

    fn eval_unchecked(&self, x: f64) -> f64 {
        match self {
            LSpec::PowerOfLog { epsilon } | LSpec::IteratedLogProduct { ell: 3, epsilon } => {
                log1(x).powf(*epsilon)
            }
            LSpec::IteratedLogProduct { ell, epsilon } => {
                let mut acc = 1.0;
                for m in 2..ell - 2 {
                    acc *= iterated_log(m, x);
                }
                acc * iterated_log(ell - 2, x).powf(1.0 + epsilon)
            }
            LSpec::CustomTable(t) => t.eval(x),
        }
    }

    /// `u = ln ln t` beyond which the closed-form tail is exact.
    fn closed_form_start(&self) -> Option<f64> {
        match self {
            LSpec::PowerOfLog { .. } | LSpec::IteratedLogProduct { ell: 3, .. } => Some(0.0),
            LSpec::IteratedLogProduct { ell, .. } => {
                // log_{ℓ-2} t = ln of log_{ℓ-3} t unclamped once u ≥ exp^{(ℓ-4)}(1)
                let mut u = 1.0f64;
                for _ in 4..*ell {
                    u = u.exp();
                }
                u.is_finite().then_some(u)
            }
            LSpec::CustomTable(_) => None,
        }
    }

    fn epsilon(&self) -> Option<f64> {
        match self {
            LSpec::PowerOfLog { epsilon } | LSpec::IteratedLogProduct { epsilon, .. } => {
                Some(*epsilon)
            }
            LSpec::CustomTable(_) => None,
        }
    }

    /// Outermost iterated log carrying the exponent: `log_1` for `ℓ = 3`.
    fn tail_log_order(&self) -> u32 {
        match self {
            LSpec::IteratedLogProduct { ell, .. } if *ell >= 4 => ell - 2,
            _ => 1,
        }
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    Ok(())
}

/// `L(x)` for `x ≥ 2`.
pub fn l_eval(spec: &LSpec, x: f64) -> Result<f64> {
    if !(x >= 2.0) {
        return Err(Error::Domain(format!("L(x) requires x >= 2, got {x}")));
    }
    Ok(spec.eval_unchecked(x))
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    budget: &mut usize,
) -> Result<f64> {
    if *budget == 0 {
        return Err(Error::QuadratureFailure {
            budget: QUADRATURE_BUDGET,
        });
    }
    *budget -= 1;
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    Ok(
        adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, budget)?
            + adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, budget)?,
    )
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if b <= a {
        return Ok(0.0);
    }
    let mut budget = QUADRATURE_BUDGET;
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(a, b, fa, fm, fb);
    adaptive(&f, a, b, fa, fm, fb, whole, tol, 48, &mut budget)
}

/// Kinks of the clamped logs inside `(a, b)` in the `u` variable.
fn breakpoints(spec: &LSpec, a: f64, b: f64) -> Vec<f64> {
    let mut pts = vec![a];
    let mut kinks = vec![0.0f64];
    let mut k = 1.0f64;
    for _ in 0..4 {
        kinks.push(k);
        k = k.exp();
    }
    if let LSpec::CustomTable(t) = spec {
        kinks.extend(
            t.points
                .iter()
                .filter(|p| p.0 > 1.0 && p.0.ln() > 0.0)
                .map(|p| p.0.ln().ln()),
        );
    }
    kinks.sort_by(f64::total_cmp);
    pts.extend(kinks.into_iter().filter(|&k| k > a && k < b));
    pts.push(b);
    pts
}

/// `∫ du / L(u)` over `[u_a, u_b]`, i.e. `∫ dt/(t log t L(t))` between the
/// corresponding `t`.
pub fn integral_loglog(spec: &LSpec, u_a: f64, u_b: f64) -> Result<f64> {
    if u_b <= u_a {
        return Ok(0.0);
    }
    let pts = breakpoints(spec, u_a, u_b);
    let pieces = (pts.len() - 1) as f64;
    let mut total = 0.0;
    for w in pts.windows(2) {
        total += integrate(
            |u| 1.0 / spec.eval_loglog(u),
            w[0],
            w[1],
            QUADRATURE_TOLERANCE / pieces,
        )?;
    }
    Ok(total)
}

/// Partial integral `∫_2^T dt / (t · log t · L(t))` for `T ≥ 4`.
pub fn check_integral(spec: &LSpec, t_upper: f64) -> Result<f64> {
    if !(t_upper >= 4.0) {
        return Err(Error::Domain(format!(
            "the partial integral needs T >= 4, got {t_upper}"
        )));
    }
    integral_loglog(spec, 2f64.ln().ln(), t_upper.ln().ln())
}

/// `∫_T^∞ dt / (t log t L(t))`, infinite when it diverges or cannot be
/// represented. Closed form past the last clamped log, quadrature before it.
pub fn integral_tail(spec: &LSpec, t_lower: f64) -> Result<f64> {
    if !(t_lower > 1.0) {
        return Err(Error::Domain(format!(
            "tail integral needs T > 1, got {t_lower}"
        )));
    }
    integral_tail_loglog(spec, t_lower.ln().ln())
}

pub fn integral_tail_loglog(spec: &LSpec, u: f64) -> Result<f64> {
    let (Some(start), Some(eps)) = (spec.closed_form_start(), spec.epsilon()) else {
        return Ok(f64::INFINITY);
    };
    let from = u.max(start);
    let closed = 1.0 / (eps * iterated_log_from_loglog(spec.tail_log_order(), from).powf(eps));
    let head = integral_loglog(spec, u, start)?;
    Ok(head + closed)
}

/// `L(2x)/L(x)` on each grid point.
pub fn check_slow_variation(spec: &LSpec, grid: &[f64]) -> Result<Vec<f64>> {
    grid.iter()
        .map(|&x| Ok(l_eval(spec, 2.0 * x)? / l_eval(spec, x)?))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubpolynomialScan {
    pub max: f64,
    pub argmax: f64,
}

/// Maximum of `L(x)/x^probe` over the grid.
pub fn check_subpolynomial(
    spec: &LSpec,
    epsilon_probe: f64,
    grid: &[f64],
) -> Result<SubpolynomialScan> {
    if !(epsilon_probe > 0.0) {
        return Err(Error::Domain("probe exponent must be positive".into()));
    }
    if grid.is_empty() {
        return Err(Error::InvalidInput("empty grid".into()));
    }
    let mut best = SubpolynomialScan {
        max: f64::NEG_INFINITY,
        argmax: f64::NAN,
    };
    for &x in grid {
        let v = l_eval(spec, x)? / x.powf(epsilon_probe);
        if v > best.max {
            best = SubpolynomialScan { max: v, argmax: x };
        }
    }
    Ok(best)
}

/// Geometric grid of `n` points from `a` to `b` inclusive.
pub fn geometric_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && a > 0.0 && b > a);
    let r = (b / a).ln() / (n - 1) as f64;
    (0..n).map(|i| a * (r * i as f64).exp()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegralVerdict {
    LooksConvergent,
    LooksDivergent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceReport {
    pub verdict: IntegralVerdict,
    /// Increments of the partial integral over successive squarings of `T`.
    pub increments: Vec<f64>,
}

/// Heuristic divergence check: squares `T` (doubles `log T`) starting at
/// `T = 10^3` and flags divergence when ten consecutive increments fail to
/// shrink by at least 1%. Advisory only.
pub fn divergence_check(spec: &LSpec) -> Result<DivergenceReport> {
    const STEPS: usize = 10;
    let mut u = 1000f64.ln().ln();
    let step = std::f64::consts::LN_2;
    let mut increments = Vec::with_capacity(STEPS + 1);
    for _ in 0..=STEPS {
        increments.push(integral_loglog(spec, u, u + step)?);
        u += step;
    }
    let non_shrinking = increments.windows(2).all(|w| w[1] >= 0.99 * w[0]);
    Ok(DivergenceReport {
        verdict: if non_shrinking {
            IntegralVerdict::LooksDivergent
        } else {
            IntegralVerdict::LooksConvergent
        },
        increments,
    })
}
