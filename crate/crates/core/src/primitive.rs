//! Primitivity (divisibility antichain) checks and Erdős sums `Σ 1/(n log n)`.
//!
//! Both verifiers report the same witness when a set is not primitive: the
//! smallest element `m` dividing another element, paired with the smallest
//! such multiple `n`.

use crate::sum::CompensatedSum;
use crate::{Error, Result};

/// Sets smaller than this go to the pairwise verifier.
pub const PAIRWISE_LIMIT: usize = 10_000;

/// Largest `x` the dense verifier will allocate a bitmap for.
pub const DENSE_LIMIT: u64 = 1 << 34;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimitivityResult {
    pub primitive: bool,
    /// `(m, n)` with `m | n`, `m ≠ n`, both in the set.
    pub witness: Option<(u64, u64)>,
}

impl PrimitivityResult {
    fn primitive() -> Self {
        Self {
            primitive: true,
            witness: None,
        }
    }

    fn witness(m: u64, n: u64) -> Self {
        debug_assert!(m != n && n.is_multiple_of(m));
        Self {
            primitive: false,
            witness: Some((m, n)),
        }
    }
}

fn sorted_unique(set: &[u64]) -> Result<Vec<u64>> {
    if set.contains(&0) {
        return Err(Error::InvalidInput("0 is not a positive integer".into()));
    }
    let mut v = set.to_vec();
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

/// Sorted scan: a multiple of `m` other than `m` is at least `2m`, so each
/// `m` only tests the elements from `2m` upward.
pub fn is_primitive_pairwise(set: &[u64]) -> Result<PrimitivityResult> {
    let v = sorted_unique(set)?;
    for (i, &m) in v.iter().enumerate() {
        let from = i + 1 + v[i + 1..].partition_point(|&n| n < m.saturating_mul(2));
        if let Some(&n) = v[from..].iter().find(|&&n| n % m == 0) {
            return Ok(PrimitivityResult::witness(m, n));
        }
    }
    Ok(PrimitivityResult::primitive())
}

struct Bitmap {
    words: Vec<u64>,
}

impl Bitmap {
    fn new(bits: u64) -> Self {
        Self {
            words: vec![0; (bits / 64 + 1) as usize],
        }
    }

    #[inline]
    fn set(&mut self, i: u64) {
        self.words[(i / 64) as usize] |= 1 << (i % 64);
    }

    #[inline]
    fn get(&self, i: u64) -> bool {
        self.words[(i / 64) as usize] >> (i % 64) & 1 == 1
    }
}

/// Presence bitmap over `[1, x]`, then every multiple of every element.
pub fn is_primitive_dense(set: &[u64], x: u64) -> Result<PrimitivityResult> {
    if x > DENSE_LIMIT {
        return Err(Error::RangeTooLarge {
            what: "dense primitivity bitmap",
            requested: x,
            limit: DENSE_LIMIT,
        });
    }
    let v = sorted_unique(set)?;
    if let Some(&big) = v.last().filter(|&&n| n > x) {
        return Err(Error::InvalidInput(format!(
            "element {big} exceeds x = {x}"
        )));
    }
    let mut present = Bitmap::new(x);
    for &n in &v {
        present.set(n);
    }
    let max = v.last().copied().unwrap_or(0);
    for &m in &v {
        let mut n = 2 * m;
        while n <= max {
            if present.get(n) {
                return Ok(PrimitivityResult::witness(m, n));
            }
            n += m;
        }
    }
    Ok(PrimitivityResult::primitive())
}

/// Pairwise below [`PAIRWISE_LIMIT`] elements, dense above.
pub fn is_primitive(set: &[u64]) -> Result<PrimitivityResult> {
    if set.len() < PAIRWISE_LIMIT {
        is_primitive_pairwise(set)
    } else {
        let x = set.iter().copied().max().unwrap_or(1);
        is_primitive_dense(set, x)
    }
}

/// `Σ_{n ∈ set, n > 1} 1/(n log n)`, compensated.
pub fn erdos_sum(set: &[u64]) -> f64 {
    set.iter()
        .filter(|&&n| n > 1)
        .map(|&n| {
            let nf = n as f64;
            1.0 / (nf * nf.ln())
        })
        .collect::<CompensatedSum>()
        .value()
}

/// Upper bound for `Σ_{p > x} 1/(p log p)`, `x ≥ 100`.
///
/// Partial summation against `θ` gives
/// `Σ_{p>x} = -θ(x)/(x log² x) + ∫_x^∞ θ(t) (log t + 2)/(t² log³ t) dt`;
/// with `θ(t) < 1.01624 t` everywhere and `θ(x) > x (1 - 1/log x)` for
/// `x ≥ 41` this is at most
/// `1.01624 / log x + (0.01624 + 1/log x) / log² x`.
pub fn prime_erdos_tail_bound(x: f64) -> Result<f64> {
    if !(x >= 100.0) {
        return Err(Error::Domain(format!(
            "tail bound requires x >= 100, got {x}"
        )));
    }
    const THETA_UPPER: f64 = 1.01624;
    let l = x.ln();
    Ok(THETA_UPPER / l + (THETA_UPPER - 1.0 + 1.0 / l) / (l * l))
}

/// `[Σ_{p ≤ x}, Σ_{p ≤ x} + tail bound]` for the Erdős sum of the primes.
pub fn prime_erdos_bracket(primes_to_x: &[u64], x: f64) -> Result<(f64, f64)> {
    let partial = erdos_sum(primes_to_x);
    Ok((partial, partial + prime_erdos_tail_bound(x)?))
}

/// Parses newline-delimited decimal integers; blank lines and `#` comments
/// are ignored.
pub fn parse_set(text: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let n: u64 = line.parse().map_err(|_| {
            Error::InvalidInput(format!("line {}: '{line}' is not an integer", i + 1))
        })?;
        if n == 0 {
            return Err(Error::InvalidInput(format!(
                "line {}: 0 is not positive",
                i + 1
            )));
        }
        out.push(n);
    }
    Ok(out)
}
