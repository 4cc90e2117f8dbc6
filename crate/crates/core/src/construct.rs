//! The primitive set `S = ⋃_k S_k` over `[1, x]`.
//!
//! `S_k = {n : Ω(n) = k, p_k | n, gcd(p_1 ⋯ p_{k-1}, n) = 1}`. The gcd
//! condition is checked as `p_j ∤ n` for each `j < k`.
//!
//! Candidates for `S_k` are exactly the multiples of `p_k`, so a segment scan
//! walks those multiples for each `k` and reads `Ω` from the sieve table.
//! Every `n` has a single `Ω(n)`, so no integer is visited for two `k`.

use std::collections::BTreeMap;

use crate::logs::{log2, log3};
use crate::primitive::{is_primitive_dense, PrimitivityResult};
use crate::sieve::{factorize, is_prime, OmegaSieve, OmegaTable, SieveConfig};
use crate::slow_vary::{l_eval, LSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SMembership {
    pub n: u64,
    pub k: usize,
    /// `p_k | n`.
    pub divisible_by_pk: bool,
    /// `gcd(p_1 ⋯ p_{k-1}, n) = 1`.
    pub coprime_to_earlier: bool,
}

/// Checks that the prefix is a strictly increasing list of primes.
pub fn validate_prefix(primes: &[u64]) -> Result<()> {
    if primes.is_empty() {
        return Err(Error::InvalidInput("empty prime prefix".into()));
    }
    if let Some(&p) = primes.iter().find(|&&p| !is_prime(p)) {
        return Err(Error::InvalidInput(format!(
            "{p} in the prefix is not prime"
        )));
    }
    if primes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput(
            "prime prefix must be strictly increasing".into(),
        ));
    }
    Ok(())
}

fn coprime_to_earlier(n: u64, earlier: &[u64]) -> bool {
    earlier.iter().all(|&p| !n.is_multiple_of(p))
}

/// `Some` exactly when `n ∈ S_{Ω(n)}`.
pub fn member(n: u64, primes: &[u64]) -> Result<Option<SMembership>> {
    if n == 0 {
        return Err(Error::Domain("membership is defined for n >= 1".into()));
    }
    if n == 1 {
        return Ok(None);
    }
    let k = factorize(n).len();
    if k > primes.len() {
        return Err(Error::PrefixExhausted {
            needed: k,
            available: primes.len(),
        });
    }
    let m = SMembership {
        n,
        k,
        divisible_by_pk: n.is_multiple_of(primes[k - 1]),
        coprime_to_earlier: coprime_to_earlier(n, &primes[..k - 1]),
    };
    Ok((m.divisible_by_pk && m.coprime_to_earlier).then_some(m))
}

/// Largest `k` whose `S_k` can meet `[1, x]`, or an error when the prefix is
/// too short to decide.
fn covered_k(x: u64, primes: &[u64]) -> Result<usize> {
    let max_omega = (63 - x.max(1).leading_zeros()) as usize;
    if primes.len() >= max_omega {
        return Ok(max_omega);
    }
    // p_{K+1} > p_K > x rules out every larger k
    if primes.last().is_some_and(|&p| p > x) {
        return Ok(primes.len());
    }
    Err(Error::PrefixExhausted {
        needed: max_omega,
        available: primes.len(),
    })
}

fn scan_segment<F: FnMut(u64, usize)>(
    table: &OmegaTable,
    primes: &[u64],
    k_max: usize,
    mut visit: F,
) {
    let seg = table.segment();
    let (lo, hi) = (seg.lo(), seg.hi());
    let omega = table.big_omega_slice();
    for k in 1..=k_max.min(primes.len()) {
        let pk = primes[k - 1];
        if pk > hi {
            break;
        }
        let earlier = &primes[..k - 1];
        let mut n = lo.div_ceil(pk) * pk;
        while n <= hi {
            if omega[(n - lo) as usize] as usize == k && coprime_to_earlier(n, earlier) {
                visit(n, k);
            }
            n += pk;
        }
    }
}

/// Streams `S ∩ [1, x]` by segment, in ascending order.
pub struct SEnumerator<'a> {
    primes: &'a [u64],
    k_max: usize,
    x: u64,
    sieve: OmegaSieve,
}

impl<'a> SEnumerator<'a> {
    pub fn new(x: u64, primes: &'a [u64]) -> Result<Self> {
        Self::with_config(x, primes, SieveConfig::default())
    }

    pub fn with_config(x: u64, primes: &'a [u64], config: SieveConfig) -> Result<Self> {
        validate_prefix(primes)?;
        let k_max = covered_k(x, primes)?;
        Ok(Self {
            primes,
            k_max,
            x,
            sieve: OmegaSieve::with_config(x.max(1), config)?,
        })
    }

    /// Uses only `S_1, …, S_K` for a prefix of length `K`, whatever `x` is.
    /// The result is a subset of `S` for any extension of the prefix.
    pub fn truncated(x: u64, primes: &'a [u64]) -> Result<Self> {
        validate_prefix(primes)?;
        Ok(Self {
            primes,
            k_max: primes.len(),
            x,
            sieve: OmegaSieve::new(x.max(1))?,
        })
    }

    pub fn members(&self) -> Result<Vec<u64>> {
        let parts = self.sieve.map_segments(1, self.x, |table| {
            let mut found = Vec::new();
            scan_segment(table, self.primes, self.k_max, |n, _| found.push(n));
            found.sort_unstable();
            found
        })?;
        Ok(parts.into_iter().flatten().collect())
    }

    /// `S_k(x)` indexed by `k` (entry 0 is always 0).
    pub fn counts(&self) -> Result<Vec<u64>> {
        let k_max = self.k_max;
        let parts = self.sieve.map_segments(1, self.x, |table| {
            let mut counts = vec![0u64; k_max + 1];
            scan_segment(table, self.primes, k_max, |_, k| counts[k] += 1);
            counts
        })?;
        let mut total = vec![0u64; k_max + 1];
        for part in parts {
            for (t, c) in total.iter_mut().zip(part) {
                *t += c;
            }
        }
        Ok(total)
    }
}

/// `S ∩ [1, x]` in increasing order.
pub fn enumerate_s(x: u64, primes: &[u64]) -> Result<Vec<u64>> {
    SEnumerator::new(x, primes)?.members()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountReport {
    pub x: u64,
    pub total: u64,
    /// `S_k(x)` for every `k ≥ 1` with a nonzero count.
    pub per_k: BTreeMap<usize, u64>,
    /// `⌊½ log_2 x⌋`.
    pub b: usize,
    /// `⌊(3/2) log_2 x⌋`.
    pub b_prime: usize,
    /// `x / (log_2 x · log_3 x · L(log_2 x))`.
    pub predicted: f64,
    /// `x / p_{B'}`, present when `B ≥ 1`.
    pub window_low: Option<f64>,
    /// `x / p_B`, present when `B ≥ 1`.
    pub window_high: Option<f64>,
    /// `S_k(x) p_k (k-2)! log x / (x (log_2 x)^{k-2})` for `2 ≤ k ≤ B'`.
    pub lemma23_ratios: BTreeMap<usize, f64>,
}

/// Exact counts of `S ∩ [1, x]` with the predicted size and the diagnostic
/// ratios. `L` is evaluated at `max(2, log_2 x)`.
pub fn count_report(x: u64, primes: &[u64], spec: &LSpec) -> Result<CountReport> {
    count_report_with(x, primes, spec, SieveConfig::default())
}

pub fn count_report_with(
    x: u64,
    primes: &[u64],
    spec: &LSpec,
    config: SieveConfig,
) -> Result<CountReport> {
    if x < 16 {
        return Err(Error::Domain(format!(
            "count_report requires x >= 16, got {x}"
        )));
    }
    let counts = SEnumerator::with_config(x, primes, config)?.counts()?;
    let xf = x as f64;
    let l2 = log2(xf);
    let b = (0.5 * l2).floor() as usize;
    let b_prime = (1.5 * l2).floor() as usize;
    if b_prime > primes.len() {
        return Err(Error::PrefixExhausted {
            needed: b_prime,
            available: primes.len(),
        });
    }
    let predicted = xf / (l2 * log3(xf) * l_eval(spec, l2.max(2.0))?);
    let (window_low, window_high) = if b >= 1 {
        (
            Some(xf / primes[b_prime - 1] as f64),
            Some(xf / primes[b - 1] as f64),
        )
    } else {
        (None, None)
    };
    let mut lemma23_ratios = BTreeMap::new();
    let mut factorial = 1.0f64; // (k-2)!
    for k in 2..=b_prime {
        if k > 2 {
            factorial *= (k - 2) as f64;
        }
        let sk = counts.get(k).copied().unwrap_or(0) as f64;
        let ratio = sk * primes[k - 1] as f64 * factorial * xf.ln() / (xf * l2.powi(k as i32 - 2));
        lemma23_ratios.insert(k, ratio);
    }
    let per_k: BTreeMap<usize, u64> = counts
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, &c)| c > 0)
        .map(|(k, &c)| (k, c))
        .collect();
    Ok(CountReport {
        x,
        total: per_k.values().sum(),
        per_k,
        b,
        b_prime,
        predicted,
        window_low,
        window_high,
        lemma23_ratios,
    })
}

/// Runs the dense verifier on a list of integers `≤ x`; a witness is fatal.
pub fn certify_primitive(list: &[u64], x: u64) -> Result<PrimitivityResult> {
    let result = is_primitive_dense(list, x)?;
    if let Some((m, n)) = result.witness {
        return Err(Error::FatalInvariant(format!(
            "constructed set is not primitive: {m} divides {n}"
        )));
    }
    Ok(result)
}

/// Enumerates `S ∩ [1, x]` and proves it primitive.
pub fn primitivity_certificate(x: u64, primes: &[u64]) -> Result<PrimitivityResult> {
    let members = enumerate_s(x, primes)?;
    certify_primitive(&members, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::primes_up_to;

    #[test]
    fn membership_examples() {
        let prefix = [2u64, 3, 5];
        let m = member(2, &prefix).unwrap().unwrap();
        assert_eq!(m.k, 1);
        let m = member(15, &prefix).unwrap().unwrap();
        assert_eq!(m.k, 2);
        assert!(m.divisible_by_pk && m.coprime_to_earlier);
        assert_eq!(member(10, &prefix).unwrap(), None);
        assert_eq!(member(1, &prefix).unwrap(), None);
        assert_eq!(member(3, &prefix).unwrap(), None);
        assert!(matches!(
            member(16, &prefix),
            Err(Error::PrefixExhausted {
                needed: 4,
                available: 3
            })
        ));
    }

    #[test]
    fn enumerate_small_example() {
        let primes = primes_up_to(100).unwrap();
        assert_eq!(enumerate_s(25, &primes).unwrap(), vec![2, 9, 15, 21]);
    }

    #[test]
    fn below_first_prime_is_empty() {
        let prefix = [101u64, 103, 107, 109, 113, 127];
        assert!(enumerate_s(100, &prefix).unwrap().is_empty());
    }

    #[test]
    fn exhausted_prefix_aborts() {
        let prefix = [2u64, 3, 5];
        assert!(matches!(
            enumerate_s(1000, &prefix),
            Err(Error::PrefixExhausted { .. })
        ));
    }

    #[test]
    fn prefix_validation() {
        assert!(enumerate_s(100, &[2, 4, 5]).is_err());
        assert!(enumerate_s(100, &[3, 2]).is_err());
        assert!(enumerate_s(100, &[]).is_err());
    }

    #[test]
    fn streamed_matches_member_filter() {
        let primes = primes_up_to(200).unwrap();
        let x = 20_000;
        let streamed = SEnumerator::with_config(x, &primes, SieveConfig::with_segment_size(1000))
            .unwrap()
            .members()
            .unwrap();
        let filtered: Vec<u64> = (1..=x)
            .filter(|&n| member(n, &primes).unwrap().is_some())
            .collect();
        assert_eq!(streamed, filtered);
    }

    #[test]
    fn injected_square_is_caught() {
        let primes = primes_up_to(100).unwrap();
        let mut members = enumerate_s(1000, &primes).unwrap();
        members.push(primes[0] * primes[0]);
        members.sort_unstable();
        match certify_primitive(&members, 1000) {
            Err(Error::FatalInvariant(msg)) => assert!(msg.contains("2 divides 4")),
            other => panic!("expected a fatal witness, got {other:?}"),
        }
    }

    #[test]
    fn report_is_consistent() {
        let primes = primes_up_to(1000).unwrap();
        let spec = LSpec::power_of_log(1.0).unwrap();
        let r = count_report(10_000, &primes, &spec).unwrap();
        assert_eq!(r.total, r.per_k.values().sum::<u64>());
        assert_eq!(r.b, 1);
        assert_eq!(r.b_prime, 3);
        assert!(r.window_low.unwrap() <= r.window_high.unwrap());
        let tiny = count_report(16, &primes, &spec).unwrap();
        assert_eq!(tiny.b, 0);
        assert!(tiny.window_low.is_none());
    }
}
