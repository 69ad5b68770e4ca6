//! Prime tables.

use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// All primes up to `limit`, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn new(limit: u64) -> Self {
        let primes = if limit < 2 {
            Vec::new()
        } else {
            primal::Sieve::new(limit as usize).primes_from(0).take_while(|&p| p as u64 <= limit).map(|p| p as u64).collect()
        };
        Self { limit, primes }
    }

    /// Rebuilds a table from stored parts.
    ///
    /// Checks ordering, bounds and primality of the endpoints; completeness is
    /// vouched for by the digest of the stored entry.
    pub fn from_parts(limit: u64, primes: Vec<u64>) -> Result<Self> {
        let corrupt = || Error::Cache(format!("prime list for limit {limit} is corrupt"));
        if primes.windows(2).any(|w| w[0] >= w[1]) || primes.last().is_some_and(|&p| p > limit) {
            return Err(corrupt());
        }
        if (limit >= 2) != (primes.first() == Some(&2)) || primes.last().is_some_and(|&p| !is_prime_trial(p)) {
            return Err(corrupt());
        }
        Ok(Self { limit, primes })
    }

    /// A process-wide table covering at least `limit`, built on first use.
    ///
    /// The largest table requested so far is kept and handed out to every
    /// caller asking for a smaller limit.
    pub fn shared(limit: u64) -> Arc<PrimeTable> {
        static SHARED: Mutex<Option<Arc<PrimeTable>>> = Mutex::new(None);
        let mut guard = SHARED.lock().unwrap_or_else(|e| e.into_inner());
        match guard.as_ref() {
            Some(t) if t.limit >= limit => t.clone(),
            _ => {
                let t = Arc::new(PrimeTable::new(limit));
                *guard = Some(t.clone());
                t
            }
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Primes `<= x`.
    pub fn up_to(&self, x: f64) -> Result<&[u64]> {
        if x > self.limit as f64 + 0.5 {
            return Err(Error::PrimeTableTooSmall { limit: self.limit, needed: x });
        }
        let end = self.primes.partition_point(|&p| (p as f64) <= x);
        Ok(&self.primes[..end])
    }

    /// Primes in `(lo, hi]`.
    pub fn between(&self, lo: f64, hi: f64) -> Result<&[u64]> {
        let upper = self.up_to(hi)?;
        let start = upper.partition_point(|&p| (p as f64) <= lo);
        Ok(&upper[start..])
    }

    pub fn is_prime(&self, n: u64) -> bool {
        self.primes.binary_search(&n).is_ok()
    }
}

fn is_prime_trial(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Calls `f(p, k, p^k)` for every prime power `p^k <= y`, primes ascending.
pub fn for_each_prime_power(table: &PrimeTable, y: f64, mut f: impl FnMut(u64, u32, f64)) -> Result<()> {
    for &p in table.up_to(y)? {
        let pf = p as f64;
        let mut pk = pf;
        let mut k = 1;
        while pk <= y {
            f(p, k, pk);
            pk *= pf;
            k += 1;
        }
    }
    Ok(())
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Prime factorisation as `(p, e)` pairs by trial division.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_table() {
        let t = PrimeTable::new(30);
        assert_eq!(t.primes(), &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(t.up_to(10.0).unwrap(), &[2, 3, 5, 7]);
        assert_eq!(t.between(7.0, 13.0).unwrap(), &[11, 13]);
        assert!(t.up_to(31.0).is_err());
        assert!(PrimeTable::new(1).primes().is_empty());
    }

    #[test]
    fn prime_count_at_ten_to_six() {
        assert_eq!(PrimeTable::new(1_000_000).primes().len(), 78_498);
    }

    #[test]
    fn prime_powers_up_to_ten() {
        let t = PrimeTable::new(100);
        let mut seen = Vec::new();
        for_each_prime_power(&t, 10.0, |p, k, _| seen.push((p, k))).unwrap();
        assert_eq!(seen, vec![(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1)]);
    }

    #[test]
    fn factorization() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(13), vec![(13, 1)]);
        assert!(factorize(1).is_empty());
    }
}
