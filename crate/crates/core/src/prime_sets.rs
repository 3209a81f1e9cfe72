//! `S_p(X) = {⌊X/p⌋ : p prime ≤ X}` and the exponents of `X!`.
//!
//! `|S_p(X)|` equals the number of distinct exponents `v_p(X!)` in the prime
//! factorization of `X!`. Primes with `p² ≤ X` give pairwise distinct
//! quotients and pairwise distinct valuations; primes with `p² > X` have
//! `v_p(X!) = ⌊X/p⌋` outright.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::exact_arith::isqrt_u64;
use crate::primality;

const SEGMENT_LEN: usize = 1 << 16;

/// All primes up to `limit`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

/// `v_p(X!)` for every prime `p ≤ X`, and how many distinct values occur.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationProfile {
    pub x: u64,
    /// `(p, v_p(X!))` in increasing `p`.
    pub exponents: Vec<(u64, u64)>,
    pub distinct_count: usize,
}

fn simple_sieve(limit: usize) -> Vec<u64> {
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

fn segmented_sieve(limit: u64) -> Vec<u64> {
    let base = simple_sieve(isqrt_u64(limit) as usize);
    let estimate = (limit as f64 / (limit as f64).ln().max(1.0) * 1.2) as usize + 16;
    let mut primes = Vec::with_capacity(estimate);
    let mut segment = vec![true; SEGMENT_LEN];
    let mut low = 0u64;
    while low <= limit {
        let high = (low + SEGMENT_LEN as u64 - 1).min(limit);
        let len = (high - low + 1) as usize;
        segment[..len].fill(true);
        for &p in &base {
            if p * p > high {
                break;
            }
            let start = (p * p).max(low.div_ceil(p) * p);
            let mut m = start;
            while m <= high {
                segment[(m - low) as usize] = false;
                m += p;
            }
        }
        primes.extend((0..len).filter(|&i| segment[i] && low + i as u64 >= 2).map(|i| low + i as u64));
        match high.checked_add(1) {
            Some(next) => low = next,
            None => break,
        }
    }
    primes
}

impl PrimeTable {
    pub const CACHE_MAGIC: [u8; 8] = *b"FSKSIEVE";

    /// Segmented Eratosthenes up to `limit`.
    pub fn sieve(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::XTooSmall { got: limit, min: 2 });
        }
        Ok(Self { limit, primes: segmented_sieve(limit) })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Primes `≤ x` (clamped to the table).
    pub fn primes_up_to(&self, x: u64) -> &[u64] {
        &self.primes[..self.pi(x)]
    }

    /// `π(x)` for `x ≤ limit`.
    pub fn pi(&self, x: u64) -> usize {
        self.primes.partition_point(|&p| p <= x)
    }

    pub fn is_prime(&self, n: u64) -> bool {
        if n <= self.limit {
            self.primes.binary_search(&n).is_ok()
        } else {
            primality::is_prime(n)
        }
    }

    fn require_covers(&self, x: u64) -> Result<()> {
        if x < 2 {
            return Err(Error::XTooSmall { got: x, min: 2 });
        }
        if x > self.limit {
            return Err(Error::InvalidSpec(format!("prime table up to {} cannot serve X = {x}", self.limit)));
        }
        Ok(())
    }

    /// Sorted elements of `S_p(X)`.
    pub fn enumerate_s_p(&self, x: u64) -> Result<Vec<u64>> {
        self.require_covers(x)?;
        // ⌊X/p⌋ is non-increasing in p, so equal values are adjacent.
        let mut values: Vec<u64> = self.primes_up_to(x).iter().rev().map(|&p| x / p).collect();
        values.dedup();
        Ok(values)
    }

    /// `v_p(X!)` for all `p ≤ X`; primes with `p² > X` take `⌊X/p⌋` directly.
    pub fn distinct_factorial_exponents(&self, x: u64) -> Result<ValuationProfile> {
        self.require_covers(x)?;
        let exponents: Vec<(u64, u64)> = self
            .primes_up_to(x)
            .iter()
            .map(|&p| {
                let v = if p.checked_mul(p).is_some_and(|sq| sq <= x) { valuation_sum(x, p) } else { x / p };
                (p, v)
            })
            .collect();
        let mut values: Vec<u64> = exponents.iter().map(|&(_, v)| v).collect();
        values.sort_unstable();
        values.dedup();
        Ok(ValuationProfile { x, distinct_count: values.len(), exponents })
    }

    /// `|S_p(X)| / (X / ln X)^{1/2}`.
    pub fn growth_ratio(&self, x: u64) -> Result<f64> {
        if x < 3 {
            return Err(Error::XTooSmall { got: x, min: 3 });
        }
        let size = self.enumerate_s_p(x)?.len() as f64;
        let xf = x as f64;
        Ok(size / (xf / xf.ln()).sqrt())
    }

    /// Writes the table as a bit-packed sieve: the 8-byte magic, the limit as
    /// little-endian `u64`, then bit `n % 8` of byte `n / 8` set iff `n` is
    /// prime, for `0 ≤ n ≤ limit`.
    pub fn write_cache(&self, path: &Path) -> Result<()> {
        let mut bits = vec![0u8; (self.limit / 8) as usize + 1];
        for &p in &self.primes {
            bits[(p / 8) as usize] |= 1 << (p % 8);
        }
        let mut file = fs::File::create(path)?;
        file.write_all(&Self::CACHE_MAGIC)?;
        file.write_all(&self.limit.to_le_bytes())?;
        file.write_all(&bits)?;
        Ok(())
    }

    /// Reads a cache written by [`PrimeTable::write_cache`], truncated to
    /// `limit`. `Ok(None)` when the file covers less than `limit`.
    pub fn read_cache(path: &Path, limit: u64) -> Result<Option<Self>> {
        let corrupt = |reason: &str| Error::SieveCache { path: path.to_path_buf(), reason: reason.to_string() };
        let bytes = fs::read(path)?;
        if bytes.len() < 16 || bytes[..8] != Self::CACHE_MAGIC {
            return Err(corrupt("missing FSKSIEVE header"));
        }
        let stored = u64::from_le_bytes(bytes[8..16].try_into().expect("8 bytes"));
        if stored < limit {
            return Ok(None);
        }
        let bits = &bytes[16..];
        if (bits.len() as u64) < stored / 8 + 1 {
            return Err(corrupt("truncated bit array"));
        }
        let primes = (0..=limit).filter(|&n| bits[(n / 8) as usize] & (1 << (n % 8)) != 0).collect();
        Ok(Some(Self { limit, primes }))
    }

    /// Reads the cache at `path`, rebuilding and rewriting it when it is
    /// absent, unreadable or too small.
    pub fn load_or_build(path: &Path, limit: u64) -> Result<Self> {
        if path.exists() {
            match Self::read_cache(path, limit) {
                Ok(Some(table)) => return Ok(table),
                Ok(None) => log::info!("sieve cache {} is below {limit}; regenerating", path.display()),
                Err(e) => log::warn!("ignoring sieve cache: {e}"),
            }
        }
        let table = Self::sieve(limit)?;
        if let Err(e) = table.write_cache(path) {
            log::warn!("could not write sieve cache {}: {e}", path.display());
        }
        Ok(table)
    }
}

fn valuation_sum(x: u64, p: u64) -> u64 {
    let mut q = x;
    let mut total = 0;
    while q >= p {
        q /= p;
        total += q;
    }
    total
}

/// `v_p(X!) = Σ_{k≥1} ⌊X/pᵏ⌋`.
pub fn legendre_valuation(x: u64, p: u64) -> Result<u64> {
    if !primality::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p > x {
        return Err(Error::PrimeExceedsX { p, x });
    }
    Ok(valuation_sum(x, p))
}

pub fn sieve(limit: u64) -> Result<PrimeTable> {
    PrimeTable::sieve(limit)
}

pub fn enumerate_s_p(x: u64) -> Result<Vec<u64>> {
    PrimeTable::sieve(x)?.enumerate_s_p(x)
}

pub fn distinct_factorial_exponents(x: u64) -> Result<ValuationProfile> {
    PrimeTable::sieve(x)?.distinct_factorial_exponents(x)
}

pub fn growth_ratio(x: u64) -> Result<f64> {
    if x < 3 {
        return Err(Error::XTooSmall { got: x, min: 3 });
    }
    PrimeTable::sieve(x)?.growth_ratio(x)
}
