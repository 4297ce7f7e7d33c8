//! Prime sieve with a least-prime-factor map.
//!
//! Built once per run and shared read-only across workers; all downstream
//! factorizations (Hecke multiplicativity, squarefree tests, divisor counts)
//! go through the lpf map.

use crate::error::Error;
use crate::Result;

/// Sieve of Eratosthenes up to `limit` with least prime factors.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    lpf: Vec<u32>,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn new(limit: u64) -> Self {
        assert!(limit >= 2, "prime table limit must be at least 2");
        let n = limit as usize;
        let mut lpf = vec![0u32; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if lpf[i] == 0 {
                primes.push(i as u64);
                let mut j = i;
                while j <= n {
                    if lpf[j] == 0 {
                        lpf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        Self { limit, lpf, primes }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Primes in `[lo, hi]` as a subslice.
    pub fn primes_in(&self, lo: u64, hi: u64) -> &[u64] {
        let start = self.primes.partition_point(|&p| p < lo);
        let end = self.primes.partition_point(|&p| p <= hi.min(self.limit));
        &self.primes[start..end]
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && n <= self.limit && self.lpf[n as usize] as u64 == n
    }

    /// Least prime factor of n (2 ≤ n ≤ limit).
    pub fn lpf(&self, n: u64) -> u64 {
        self.lpf[n as usize] as u64
    }

    fn check_range(&self, n: u64) -> Result<()> {
        if n > self.limit {
            return Err(Error::InvalidArgument(format!(
                "{n} exceeds prime table limit {}",
                self.limit
            )));
        }
        Ok(())
    }

    /// Prime factorization of n ≤ limit as (p, multiplicity) pairs, ascending.
    pub fn factor(&self, mut n: u64) -> Result<Vec<(u64, u32)>> {
        self.check_range(n)?;
        let mut out = Vec::new();
        while n > 1 {
            let p = self.lpf[n as usize] as u64;
            let mut e = 0u32;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        Ok(out)
    }

    pub fn is_squarefree(&self, n: u64) -> Result<bool> {
        Ok(self.factor(n)?.iter().all(|&(_, e)| e == 1))
    }

    /// Number of divisors d₂(n), by exact factorization.
    pub fn divisor_count(&self, n: u64) -> Result<u64> {
        Ok(self
            .factor(n)?
            .iter()
            .map(|&(_, e)| (e + 1) as u64)
            .product())
    }

    /// Euler φ(n).
    pub fn euler_phi(&self, n: u64) -> Result<u64> {
        let mut phi = 1u64;
        for (p, e) in self.factor(n)? {
            phi *= (p - 1) * p.pow(e - 1);
        }
        Ok(phi)
    }
}
