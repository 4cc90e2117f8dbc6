//! Prime sequences `p_1 < p_2 < ⋯` with `Σ 1/p_k < 1/2`, certified.
//!
//! The intermediate sequence is `q_k = ` the `k`-th prime for `k < y₀` and
//! the `⌊k L(k)⌋`-th prime for `k ≥ y₀`, where `y₀` is the least integer
//! `≥ 2` with `L(y₀) ≥ 1`. The final sequence drops the first `k₀` terms.
//!
//! The tail beyond the last computed index `N ≥ y₀` is bounded with Rosser's
//! `p_n > n log n`. For `k > N` we have `n_k = ⌊k L(k)⌋ ≥ k` and
//! `n_k ≥ k L(k) - 1 ≥ k L(k) (1 - 1/N)`, hence
//! `1/q_k < N/(N-1) · 1/(k log k L(k))`, and the sum over `k > N` is at most
//! `N/(N-1) · ∫_N^∞ dt / (t log t L(t))`.

use std::fmt::Write as _;
use std::io::{self, Write};

use crate::logs::{log2, log3};
use crate::numfmt::fmt_sig;
use crate::sieve::{PrimeTable, SieveConfig};
use crate::slow_vary::{integral_tail, l_eval, LSpec, QUADRATURE_TOLERANCE};
use crate::sum::CompensatedSum;
use crate::{Error, Result};

pub const DEFAULT_TERMS: usize = 10_000;

/// Floating-point slack subtracted from 1/2 before a certificate is accepted.
const CERTIFICATE_MARGIN: f64 = 1e-12;

const Y0_SCAN_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SequenceBudget {
    /// Largest number of dropped leading terms to consider.
    pub max_k0: u64,
    /// Largest prime index `⌊k L(k)⌋` the construction may sieve for.
    pub max_prime_index: u64,
}

impl Default for SequenceBudget {
    fn default() -> Self {
        Self {
            max_k0: 1_000_000,
            max_prime_index: 20_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrimeSequence {
    spec: LSpec,
    y0: u64,
    k0: u64,
    primes: Vec<u64>,
    prefix_reciprocal_sum: f64,
    tail_bound: f64,
}

impl PrimeSequence {
    pub fn spec(&self) -> &LSpec {
        &self.spec
    }

    pub fn y0(&self) -> u64 {
        self.y0
    }

    pub fn k0(&self) -> u64 {
        self.k0
    }

    /// `p_1, …, p_K`.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// `p_k`, 1-indexed.
    pub fn p(&self, k: usize) -> Result<u64> {
        if k == 0 || k > self.primes.len() {
            return Err(Error::IndexOutOfRange {
                index: k,
                len: self.primes.len(),
            });
        }
        Ok(self.primes[k - 1])
    }

    /// `Σ_{k ≤ K} 1/p_k`.
    pub fn prefix_reciprocal_sum(&self) -> f64 {
        self.prefix_reciprocal_sum
    }

    /// Upper bound for `Σ_{k > K} 1/p_k`.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// `k,p_k` rows after a `#` line recording the construction.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{}", self.csv_comment())?;
        writeln!(w, "k,p_k")?;
        for (i, p) in self.primes.iter().enumerate() {
            writeln!(w, "{},{}", i + 1, p)?;
        }
        Ok(())
    }

    pub fn csv_comment(&self) -> String {
        let mut s = String::new();
        let _ = write!(
            s,
            "# lspec={} y0={} k0={} prefix_sum={} tail_bound={}",
            self.spec,
            self.y0,
            self.k0,
            fmt_sig(self.prefix_reciprocal_sum),
            fmt_sig(self.tail_bound)
        );
        s
    }
}

/// Least integer `y₀ ≥ 2` with `L(y₀) ≥ 1`.
pub fn find_y0(spec: &LSpec) -> Result<u64> {
    (2..=Y0_SCAN_LIMIT)
        .find(|&y| l_eval(spec, y as f64).is_ok_and(|v| v >= 1.0))
        .ok_or_else(|| Error::Domain(format!("L stays below 1 on [2, {Y0_SCAN_LIMIT}]")))
}

/// Index of `q_k` in the sequence of all primes.
pub fn q_prime_index(spec: &LSpec, y0: u64, k: u64) -> Result<u64> {
    if k == 0 {
        return Err(Error::Domain("q_k is defined for k >= 1".into()));
    }
    if k < y0 {
        return Ok(k);
    }
    let kf = k as f64;
    Ok((kf * l_eval(spec, kf)?).floor() as u64)
}

/// `q_k` for a single `k`.
pub fn build_q(spec: &LSpec, k: u64) -> Result<u64> {
    let y0 = find_y0(spec)?;
    let index = q_prime_index(spec, y0, k)?;
    PrimeTable::new(SieveConfig::default()).nth(index)
}

struct QBuilder<'a> {
    spec: &'a LSpec,
    y0: u64,
    budget: SequenceBudget,
    table: PrimeTable,
    indices: Vec<u64>,
    q: Vec<u64>,
}

impl QBuilder<'_> {
    fn extend_to(&mut self, n: u64) -> Result<()> {
        let start = self.indices.len() as u64 + 1;
        let mut new_indices = Vec::new();
        let mut prev = self.indices.last().copied().unwrap_or(0);
        for k in start..=n {
            let idx = q_prime_index(self.spec, self.y0, k)?;
            if idx <= prev {
                return Err(Error::FatalInvariant(format!(
                    "prime index sequence not increasing at k = {k}: {prev} then {idx}"
                )));
            }
            if idx > self.budget.max_prime_index {
                return Err(Error::CertificateFailure(format!(
                    "q_{k} needs prime index {idx} beyond the budget {}",
                    self.budget.max_prime_index
                )));
            }
            new_indices.push(idx);
            prev = idx;
        }
        if let Some(&last) = new_indices.last() {
            self.table.ensure_count(last)?;
        }
        let primes = self.table.as_slice();
        for idx in new_indices {
            self.q.push(primes[(idx - 1) as usize]);
            self.indices.push(idx);
        }
        Ok(())
    }
}

/// Builds a certified sequence with the default budget.
pub fn build_sequence(spec: &LSpec, terms: usize) -> Result<PrimeSequence> {
    build_sequence_with(spec, terms, SequenceBudget::default())
}

/// Least `k₀` such that `Σ_{k₀<k≤N} 1/q_k + tail(N) < 1/2`, with `N ≥ k₀ + K`.
pub fn build_sequence_with(
    spec: &LSpec,
    terms: usize,
    budget: SequenceBudget,
) -> Result<PrimeSequence> {
    if terms == 0 {
        return Err(Error::Domain("the sequence needs at least one term".into()));
    }
    spec.validate()?;
    let y0 = find_y0(spec)?;
    let mut builder = QBuilder {
        spec,
        y0,
        budget,
        table: PrimeTable::new(SieveConfig::default()),
        indices: Vec::new(),
        q: Vec::new(),
    };
    let mut n = (terms as u64).max(y0).max(2);
    loop {
        let nf = n as f64;
        // quadrature tolerance covers the numerically integrated head, if any
        let tail = nf / (nf - 1.0) * (integral_tail(spec, nf)? + QUADRATURE_TOLERANCE);
        if !tail.is_finite() {
            return Err(Error::CertificateFailure(format!(
                "the integral of 1/(t log t L(t)) does not converge for {spec}"
            )));
        }
        let target = 0.5 - CERTIFICATE_MARGIN;
        if tail >= target {
            n = n.checked_mul(2).ok_or_else(|| {
                Error::CertificateFailure("index overflow while growing N".into())
            })?;
            let idx = q_prime_index(spec, y0, n)?;
            if idx > budget.max_prime_index {
                return Err(Error::CertificateFailure(format!(
                    "tail bound {tail:.6} still >= 1/2; growing N to {n} needs prime index \
                     {idx} beyond the budget {}",
                    budget.max_prime_index
                )));
            }
            continue;
        }
        builder.extend_to(n)?;
        // suffix[k0] = Σ_{k0 < k ≤ n} 1/q_k
        let mut suffix = vec![0.0f64; n as usize + 1];
        let mut acc = CompensatedSum::new();
        for k in (1..=n as usize).rev() {
            acc.add(1.0 / builder.q[k - 1] as f64);
            suffix[k - 1] = acc.value();
        }
        let k0 = suffix
            .iter()
            .position(|&s| s + tail < target)
            .expect("suffix[n] = 0 satisfies the bound") as u64;
        if k0 > budget.max_k0 {
            return Err(Error::CertificateFailure(format!(
                "least certified k0 = {k0} exceeds the budget {}",
                budget.max_k0
            )));
        }
        if k0 + terms as u64 > n {
            n = k0 + terms as u64;
            continue;
        }
        let start = k0 as usize;
        let end = start + terms;
        let primes = builder.q[start..end].to_vec();
        let prefix: CompensatedSum = primes.iter().map(|&p| 1.0 / p as f64).collect();
        let mut rest: CompensatedSum = builder.q[end..n as usize]
            .iter()
            .map(|&p| 1.0 / p as f64)
            .collect();
        rest.add(tail);
        let seq = PrimeSequence {
            spec: spec.clone(),
            y0,
            k0,
            primes,
            prefix_reciprocal_sum: prefix.value(),
            tail_bound: rest.value(),
        };
        if !(seq.prefix_reciprocal_sum + seq.tail_bound < 0.5) {
            return Err(Error::FatalInvariant(format!(
                "certificate arithmetic inconsistent: {} + {} >= 1/2",
                seq.prefix_reciprocal_sum, seq.tail_bound
            )));
        }
        return Ok(seq);
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexedPrime {
    pub index: usize,
    pub prime: u64,
    /// `c log_2 x · log_3 x · L(log_2 x)`.
    pub predicted: f64,
    pub ratio: f64,
}

/// `p_{⌊c log_2 x⌋}` against its predicted size.
pub fn p_index_at(seq: &PrimeSequence, c: f64, x: f64) -> Result<IndexedPrime> {
    if !(c > 0.0) || !(x > 1.0) {
        return Err(Error::Domain(format!(
            "need c > 0 and x > 1, got c={c}, x={x}"
        )));
    }
    let ll = log2(x);
    let index = (c * ll).floor() as usize;
    let prime = seq.p(index)?;
    let predicted = c * ll * log3(x) * l_eval(&seq.spec, ll.max(2.0))?;
    Ok(IndexedPrime {
        index,
        prime,
        predicted,
        ratio: prime as f64 / predicted,
    })
}

/// `p_k / (k log k · L(k))`.
pub fn asymptotic_ratio(seq: &PrimeSequence, k: usize) -> Result<f64> {
    let p = seq.p(k)?;
    let kf = k as f64;
    if k < 2 {
        return Err(Error::Domain("the ratio needs k >= 2".into()));
    }
    Ok(p as f64 / (kf * kf.ln() * l_eval(&seq.spec, kf)?))
}
