//! Segmented sieves: primes, `Ω(n)`, `ω(n)`, and 64-bit factorization.
//!
//! The Ω-sieve never stores smallest prime factors. For every prime `p ≤ √hi`
//! and every power `p^a ≤ hi` it increments `Ω` on the multiples of `p^a`
//! inside the segment (and `ω` only for `a = 1`), while accumulating the
//! product of the prime powers it found. Any integer left with a cofactor
//! after that has exactly one prime factor above `√hi`.

use std::io::{self, Read, Write};

use rayon::prelude::*;

use crate::{Error, Result};

/// Default number of entries per sieve segment.
pub const DEFAULT_SEGMENT_SIZE: usize = 1 << 22;

/// Largest prime bound `primes_up_to` accepts by default.
pub const DEFAULT_MAX_LIMIT: u64 = 10_000_000_000;

/// Upper end of the integer domain.
pub const MAX_INTEGER: u64 = i64::MAX as u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveConfig {
    pub segment_size: usize,
    pub max_limit: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        Self {
            segment_size: DEFAULT_SEGMENT_SIZE,
            max_limit: DEFAULT_MAX_LIMIT,
        }
    }
}

impl SieveConfig {
    pub fn with_segment_size(segment_size: usize) -> Self {
        Self {
            segment_size: segment_size.max(1),
            ..Self::default()
        }
    }
}

/// Inclusive integer range `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Segment {
    lo: u64,
    hi: u64,
}

impl Segment {
    pub fn new(lo: u64, hi: u64) -> Result<Self> {
        if lo == 0 {
            return Err(Error::InvalidSegment {
                lo,
                hi,
                reason: "lo must be at least 1",
            });
        }
        if hi < lo {
            return Err(Error::InvalidSegment {
                lo,
                hi,
                reason: "hi must be at least lo",
            });
        }
        if hi > MAX_INTEGER {
            return Err(Error::InvalidSegment {
                lo,
                hi,
                reason: "hi exceeds 2^63 - 1",
            });
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, n: u64) -> bool {
        self.lo <= n && n <= self.hi
    }
}

/// Splits `[lo, hi]` into consecutive segments of at most `size` entries.
pub fn segments(lo: u64, hi: u64, size: usize) -> impl Iterator<Item = Segment> {
    let size = size.max(1) as u64;
    let count = if hi < lo { 0 } else { (hi - lo) / size + 1 };
    (0..count).map(move |i| {
        let s = lo + i * size;
        let e = (s + size - 1).min(hi);
        Segment { lo: s, hi: e }
    })
}

fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|v| v > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|v| v <= n) {
        r += 1;
    }
    r
}

/// Plain sieve of Eratosthenes, odd-only, for the base primes.
fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    // index i represents 2i + 1
    let half = (limit - 1) / 2 + 1;
    let mut composite = vec![false; half];
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= limit {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = p * p / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut primes = vec![2u64];
    primes.extend(
        (1..half)
            .filter(|&i| !composite[i])
            .map(|i| (2 * i + 1) as u64),
    );
    primes
}

/// All primes `≤ x` in increasing order.
pub fn primes_up_to(x: u64) -> Result<Vec<u64>> {
    primes_up_to_with(x, &SieveConfig::default())
}

pub fn primes_up_to_with(x: u64, config: &SieveConfig) -> Result<Vec<u64>> {
    if x > config.max_limit {
        return Err(Error::RangeTooLarge {
            what: "prime sieve bound",
            requested: x,
            limit: config.max_limit,
        });
    }
    if x < 2 {
        return Ok(Vec::new());
    }
    let root = isqrt(x);
    let base = small_primes(root);
    if x <= root.max(1 << 16) {
        return Ok(small_primes(x));
    }
    let mut primes = base.clone();
    let seg = config.segment_size.max(1 << 10) as u64;
    // odd-only segments over (root, x]
    let mut lo = root + 1;
    if lo.is_multiple_of(2) {
        lo += 1;
    }
    let mut marks = vec![false; (seg / 2 + 1) as usize];
    while lo <= x {
        let hi = (lo + seg - 1).min(x);
        // entries represent lo, lo + 2, ...
        let n_odd = ((hi - lo) / 2 + 1) as usize;
        let marks = &mut marks[..n_odd];
        marks.fill(false);
        for &p in &base[1..] {
            if p * p > hi {
                break;
            }
            let mut start = lo.div_ceil(p) * p;
            start = start.max(p * p);
            if start % 2 == 0 {
                start += p;
            }
            let mut j = ((start - lo) / 2) as usize;
            let step = p as usize;
            while j < n_odd {
                marks[j] = true;
                j += step;
            }
        }
        primes.extend(
            marks
                .iter()
                .enumerate()
                .filter(|(_, &m)| !m)
                .map(|(i, _)| lo + 2 * i as u64),
        );
        lo = hi + 2;
        if hi.is_multiple_of(2) {
            lo = hi + 1;
        }
    }
    Ok(primes)
}

/// Rosser's upper estimate `p_n < n (ln n + ln ln n)` for `n ≥ 6`.
fn nth_prime_upper_bound(n: u64) -> u64 {
    if n < 6 {
        return 13;
    }
    let nf = n as f64;
    (nf * (nf.ln() + nf.ln().ln())).ceil() as u64 + 1
}

/// Increasing table of the first primes, extendable on demand.
#[derive(Debug, Clone, Default)]
pub struct PrimeTable {
    primes: Vec<u64>,
    bound: u64,
    config: SieveConfig,
}

impl PrimeTable {
    pub fn new(config: SieveConfig) -> Self {
        Self {
            primes: Vec::new(),
            bound: 0,
            config,
        }
    }

    /// Makes sure at least `count` primes are stored.
    pub fn ensure_count(&mut self, count: u64) -> Result<()> {
        if (self.primes.len() as u64) >= count {
            return Ok(());
        }
        let mut bound = nth_prime_upper_bound(count).max(self.bound * 2);
        loop {
            if bound > self.config.max_limit {
                return Err(Error::RangeTooLarge {
                    what: "nth_prime sieve bound",
                    requested: bound,
                    limit: self.config.max_limit,
                });
            }
            self.primes = primes_up_to_with(bound, &self.config)?;
            self.bound = bound;
            if self.primes.len() as u64 >= count {
                return Ok(());
            }
            bound = bound.saturating_mul(2);
        }
    }

    /// The `n`-th prime, 1-indexed.
    pub fn nth(&mut self, n: u64) -> Result<u64> {
        if n == 0 {
            return Err(Error::Domain("nth_prime index must be at least 1".into()));
        }
        self.ensure_count(n)?;
        Ok(self.primes[(n - 1) as usize])
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.primes
    }
}

/// The `n`-th prime (`nth_prime(1) = 2`).
pub fn nth_prime(n: u64) -> Result<u64> {
    PrimeTable::new(SieveConfig::default()).nth(n)
}

/// Exact `Ω(n)` and `ω(n)` over one segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaTable {
    segment: Segment,
    big_omega: Vec<u8>,
    little_omega: Vec<u8>,
}

impl OmegaTable {
    pub fn segment(&self) -> Segment {
        self.segment
    }

    pub fn big_omega(&self, n: u64) -> u8 {
        self.big_omega[(n - self.segment.lo) as usize]
    }

    pub fn little_omega(&self, n: u64) -> u8 {
        self.little_omega[(n - self.segment.lo) as usize]
    }

    /// `Ω` values indexed by `n - lo`.
    pub fn big_omega_slice(&self) -> &[u8] {
        &self.big_omega
    }

    pub fn little_omega_slice(&self) -> &[u8] {
        &self.little_omega
    }

    /// Writes the `OMT1` dump: magic, `lo`, `hi` (u64 LE), Ω bytes, ω bytes.
    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(b"OMT1")?;
        w.write_all(&self.segment.lo.to_le_bytes())?;
        w.write_all(&self.segment.hi.to_le_bytes())?;
        w.write_all(&self.big_omega)?;
        w.write_all(&self.little_omega)?;
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> io::Result<Self> {
        let bad = |msg: &str| io::Error::new(io::ErrorKind::InvalidData, msg.to_string());
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != b"OMT1" {
            return Err(bad("bad magic, expected OMT1"));
        }
        let mut word = [0u8; 8];
        r.read_exact(&mut word)?;
        let lo = u64::from_le_bytes(word);
        r.read_exact(&mut word)?;
        let hi = u64::from_le_bytes(word);
        let segment = Segment::new(lo, hi).map_err(|e| bad(&e.to_string()))?;
        let mut big_omega = vec![0u8; segment.len()];
        r.read_exact(&mut big_omega)?;
        let mut little_omega = vec![0u8; segment.len()];
        r.read_exact(&mut little_omega)?;
        Ok(Self {
            segment,
            big_omega,
            little_omega,
        })
    }
}

/// Ω-sieve able to tabulate any segment with `hi ≤ limit`.
#[derive(Debug, Clone)]
pub struct OmegaSieve {
    base_primes: Vec<u64>,
    limit: u64,
    config: SieveConfig,
}

impl OmegaSieve {
    pub fn new(limit: u64) -> Result<Self> {
        Self::with_config(limit, SieveConfig::default())
    }

    pub fn with_config(limit: u64, config: SieveConfig) -> Result<Self> {
        if limit > MAX_INTEGER {
            return Err(Error::RangeTooLarge {
                what: "omega sieve limit",
                requested: limit,
                limit: MAX_INTEGER,
            });
        }
        let root = isqrt(limit);
        let base_primes = primes_up_to_with(root, &config)?;
        Ok(Self {
            base_primes,
            limit,
            config,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn config(&self) -> &SieveConfig {
        &self.config
    }

    pub fn table(&self, segment: Segment) -> Result<OmegaTable> {
        if segment.hi > self.limit {
            return Err(Error::RangeTooLarge {
                what: "segment hi",
                requested: segment.hi,
                limit: self.limit,
            });
        }
        if segment.len() > self.config.segment_size {
            return Err(Error::InvalidSegment {
                lo: segment.lo,
                hi: segment.hi,
                reason: "segment longer than the configured segment size",
            });
        }
        Ok(self.sieve_segment(segment))
    }

    fn sieve_segment(&self, segment: Segment) -> OmegaTable {
        let Segment { lo, hi } = segment;
        let len = segment.len();
        let mut big = vec![0u8; len];
        let mut little = vec![0u8; len];
        let mut found = vec![1u64; len];
        for &p in &self.base_primes {
            if p * p > hi {
                break;
            }
            let mut pk = p;
            let mut first_power = true;
            loop {
                let start = lo.div_ceil(pk) * pk;
                if start <= hi {
                    let mut i = (start - lo) as usize;
                    let step = pk as usize;
                    if first_power {
                        while i < len {
                            big[i] += 1;
                            little[i] += 1;
                            found[i] *= p;
                            i += step;
                        }
                    } else {
                        while i < len {
                            big[i] += 1;
                            found[i] *= p;
                            i += step;
                        }
                    }
                }
                first_power = false;
                match pk.checked_mul(p) {
                    Some(next) if next <= hi => pk = next,
                    _ => break,
                }
            }
        }
        // A cofactor left over is a single prime above √hi.
        for (i, &f) in found.iter().enumerate() {
            if f != lo + i as u64 {
                big[i] += 1;
                little[i] += 1;
            }
        }
        OmegaTable {
            segment,
            big_omega: big,
            little_omega: little,
        }
    }

    /// Segments covering `[lo, hi]` at the configured size.
    pub fn segments(&self, lo: u64, hi: u64) -> Vec<Segment> {
        segments(lo, hi, self.config.segment_size).collect()
    }

    /// Sieves every segment of `[lo, hi]` and maps it through `f`.
    ///
    /// Segments run in parallel; results come back in segment order.
    pub fn map_segments<R, F>(&self, lo: u64, hi: u64, f: F) -> Result<Vec<R>>
    where
        R: Send,
        F: Fn(&OmegaTable) -> R + Sync,
    {
        if hi > self.limit {
            return Err(Error::RangeTooLarge {
                what: "sieve range",
                requested: hi,
                limit: self.limit,
            });
        }
        let segs = self.segments(lo.max(1), hi);
        Ok(segs
            .into_par_iter()
            .map(|seg| f(&self.sieve_segment(seg)))
            .collect())
    }
}

/// Tabulates `Ω` and `ω` on a single segment.
pub fn omega_table(segment: Segment) -> Result<OmegaTable> {
    OmegaSieve::with_config(
        segment.hi(),
        SieveConfig {
            segment_size: segment.len().max(DEFAULT_SEGMENT_SIZE),
            ..SieveConfig::default()
        },
    )?
    .table(segment)
}

/// `#{n ≤ x : Ω(n) = j}` for every `j`, indexed by `j`.
pub fn big_omega_histogram(sieve: &OmegaSieve, x: u64) -> Result<Vec<u64>> {
    let parts = sieve.map_segments(1, x, |table| {
        let mut counts = [0u64; 64];
        for &w in table.big_omega_slice() {
            counts[w as usize] += 1;
        }
        counts
    })?;
    let mut total = [0u64; 64];
    for part in parts {
        for (t, c) in total.iter_mut().zip(part.iter()) {
            *t += c;
        }
    }
    let len = total.iter().rposition(|&c| c > 0).map_or(0, |i| i + 1);
    Ok(total[..len].to_vec())
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let d0 = n - 1;
    let s = d0.trailing_zeros();
    let d = d0 >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Pollard–Brent rho; `n` must be odd and composite.
fn find_factor(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |v: u64| (mul_mod(v, v, n) + c) % n;
        let (mut x, mut y, mut ys) = (2u64, 2u64, 2u64);
        let mut q = 1u64;
        let mut g = 1u64;
        let mut r = 1u64;
        let m = 128u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// Prime factors of `n` with multiplicity, ascending. Empty for `n = 1`.
pub fn factorize(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    let mut m = n;
    for p in [2u64, 3, 5] {
        while m.is_multiple_of(p) {
            out.push(p);
            m /= p;
        }
    }
    // wheel mod 30 up to a small bound
    const STEPS: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut d = 7u64;
    let mut i = 0;
    while d <= 1000 && d * d <= m {
        while m.is_multiple_of(d) {
            out.push(d);
            m /= d;
        }
        d += STEPS[i];
        i = (i + 1) % 8;
    }
    if m > 1 {
        let mut stack = vec![m];
        while let Some(v) = stack.pop() {
            if v == 1 {
                continue;
            }
            if is_prime(v) {
                out.push(v);
                continue;
            }
            let f = find_factor(v);
            stack.push(f);
            stack.push(v / f);
        }
    }
    out.sort_unstable();
    out
}

/// `Ω(n)` by factorization.
pub fn big_omega(n: u64) -> u32 {
    factorize(n).len() as u32
}

/// `ω(n)` by factorization.
pub fn little_omega(n: u64) -> u32 {
    let f = factorize(n);
    let mut count = 0;
    let mut prev = 0;
    for p in f {
        if p != prev {
            count += 1;
            prev = p;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division_is_prime(n: u64) -> bool {
        n >= 2
            && (2..)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn primes_small() {
        assert_eq!(primes_up_to(10).unwrap(), vec![2, 3, 5, 7]);
        assert_eq!(primes_up_to(2).unwrap(), vec![2]);
        assert!(primes_up_to(1).unwrap().is_empty());
        assert_eq!(primes_up_to(100).unwrap().len(), 25);
    }

    #[test]
    fn segmented_primes_match_trial_division() {
        let config = SieveConfig::with_segment_size(1 << 10);
        let primes = primes_up_to_with(300_000, &config).unwrap();
        let oracle: Vec<u64> = (2..=300_000)
            .filter(|&n| trial_division_is_prime(n))
            .collect();
        assert_eq!(primes, oracle);
    }

    #[test]
    fn range_budget_enforced() {
        let config = SieveConfig {
            max_limit: 1000,
            ..SieveConfig::default()
        };
        assert!(matches!(
            primes_up_to_with(1001, &config),
            Err(Error::RangeTooLarge { .. })
        ));
    }

    #[test]
    fn nth_prime_values() {
        assert_eq!(nth_prime(1).unwrap(), 2);
        assert_eq!(nth_prime(25).unwrap(), 97);
        let oracle = (2u64..)
            .filter(|&n| trial_division_is_prime(n))
            .nth(999)
            .unwrap();
        assert_eq!(nth_prime(1000).unwrap(), oracle);
        assert!(nth_prime(0).is_err());
    }

    #[test]
    fn omega_examples() {
        let t = omega_table(Segment::new(1, 1 << 20).unwrap()).unwrap();
        assert_eq!(t.big_omega(1), 0);
        assert_eq!(t.little_omega(1), 0);
        assert_eq!(t.big_omega(12), 3);
        assert_eq!(t.little_omega(12), 2);
        assert_eq!(t.big_omega(1 << 20), 20);
        assert_eq!(t.little_omega(1 << 20), 1);
    }

    #[test]
    fn segment_validation() {
        assert!(Segment::new(0, 5).is_err());
        assert!(Segment::new(5, 4).is_err());
        let sieve = OmegaSieve::with_config(1000, SieveConfig::with_segment_size(10)).unwrap();
        assert!(sieve.table(Segment::new(1, 11).unwrap()).is_err());
        assert!(sieve.table(Segment::new(995, 1004).unwrap()).is_err());
    }

    #[test]
    fn factorize_examples() {
        assert!(factorize(1).is_empty());
        assert_eq!(factorize(60), vec![2, 2, 3, 5]);
        assert_eq!(factorize(999_999_000_001), vec![999_999_000_001]);
        let n = 1_000_003u64 * 1_000_033;
        assert_eq!(factorize(n), vec![1_000_003, 1_000_033]);
        assert_eq!(
            factorize(MAX_INTEGER),
            vec![7, 7, 73, 127, 337, 92737, 649657]
        );
    }

    #[test]
    fn miller_rabin_against_trial_division() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime(n), trial_division_is_prime(n), "n = {n}");
        }
    }

    #[test]
    fn histogram_partitions_range() {
        let sieve = OmegaSieve::with_config(10_000, SieveConfig::with_segment_size(777)).unwrap();
        let h = big_omega_histogram(&sieve, 10_000).unwrap();
        assert_eq!(h.iter().sum::<u64>(), 10_000);
        assert_eq!(h[0], 1);
        assert_eq!(h[1], 1229);
    }

    #[test]
    fn dump_rejects_bad_magic() {
        let bytes = b"OMT2\0\0\0\0\0\0\0\0\0\0\0\0\0\0\0\0";
        assert!(OmegaTable::read_from(&bytes[..]).is_err());
    }
}
