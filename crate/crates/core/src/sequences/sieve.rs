//! Segmented sieves that stream the terms of each sequence kind in order.

use super::SequenceSpec;

const SEGMENT_LEN: u64 = 1 << 16;

/// What the sieve needs to know about each integer of a segment.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Classify {
    Primality,
    Factors,
}

/// Primes up to `limit` by a plain sieve of Eratosthenes.
pub(crate) fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for n in 2..=limit {
        if !composite[n] {
            primes.push(n as u64);
            let mut m = n.saturating_mul(n);
            while m <= limit {
                composite[m] = true;
                m += n;
            }
        }
    }
    primes
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Streams the terms of a sieved sequence (`Primes`, `KAlmostSquarefree`,
/// `KDistinctFactors`, `NonPrimes`) segment by segment with no upper limit
/// other than `u64::MAX`.
pub(crate) struct SievedTerms {
    spec: SequenceSpec,
    classify: Classify,
    lo: u64,
    base: Vec<u64>,
    base_limit: u64,
    buffer: Vec<u64>,
    cursor: usize,
    exhausted: bool,
}

impl SievedTerms {
    pub(crate) fn new(spec: SequenceSpec) -> Self {
        let classify = match spec {
            SequenceSpec::Primes | SequenceSpec::NonPrimes => Classify::Primality,
            _ => Classify::Factors,
        };
        Self {
            spec,
            classify,
            lo: 1,
            base: Vec::new(),
            base_limit: 1,
            buffer: Vec::new(),
            cursor: 0,
            exhausted: false,
        }
    }

    fn ensure_base(&mut self, hi: u64) {
        let need = isqrt(hi) + 1;
        if need > self.base_limit {
            let limit = need.max(self.base_limit * 2).max(1 << 12);
            self.base = small_primes(limit);
            self.base_limit = limit;
        }
    }

    fn fill(&mut self) {
        self.buffer.clear();
        self.cursor = 0;
        while self.buffer.is_empty() {
            if self.exhausted {
                return;
            }
            let lo = self.lo;
            let hi = match lo.checked_add(SEGMENT_LEN) {
                Some(hi) => hi,
                None => {
                    self.exhausted = true;
                    u64::MAX
                }
            };
            self.ensure_base(hi);
            match self.classify {
                Classify::Primality => self.sieve_primality(lo, hi),
                Classify::Factors => self.sieve_factors(lo, hi),
            }
            self.lo = hi;
        }
    }

    fn sieve_primality(&mut self, lo: u64, hi: u64) {
        let len = (hi - lo) as usize;
        let mut composite = vec![false; len];
        for &p in &self.base {
            let sq = p * p;
            if sq >= hi {
                break;
            }
            let start = sq.max(lo.div_ceil(p) * p);
            let mut m = (start - lo) as usize;
            while m < len {
                composite[m] = true;
                m += p as usize;
            }
        }
        let want_primes = self.spec == SequenceSpec::Primes;
        for (i, &c) in composite.iter().enumerate() {
            let n = lo + i as u64;
            let prime = n >= 2 && !c;
            if prime == want_primes {
                self.buffer.push(n);
            }
        }
    }

    fn sieve_factors(&mut self, lo: u64, hi: u64) {
        let len = (hi - lo) as usize;
        let mut rest: Vec<u64> = (lo..hi).collect();
        let mut omega = vec![0u32; len];
        let mut squarefree = vec![true; len];
        for &p in &self.base {
            if p * p >= hi {
                break;
            }
            let start = lo.div_ceil(p) * p;
            let mut m = (start - lo) as usize;
            while m < len {
                let r = &mut rest[m];
                *r /= p;
                if *r % p == 0 {
                    squarefree[m] = false;
                    while *r % p == 0 {
                        *r /= p;
                    }
                }
                omega[m] += 1;
                m += p as usize;
            }
        }
        let (k, need_squarefree) = match self.spec {
            SequenceSpec::KAlmostSquarefree(k) => (k, true),
            SequenceSpec::KDistinctFactors(k) => (k, false),
            _ => unreachable!("factor sieve only serves factor-count kinds"),
        };
        for i in 0..len {
            let w = omega[i] + u32::from(rest[i] > 1);
            if w == k && (squarefree[i] || !need_squarefree) {
                self.buffer.push(lo + i as u64);
            }
        }
    }
}

impl Iterator for SievedTerms {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.cursor >= self.buffer.len() {
            self.fill();
        }
        let v = self.buffer.get(self.cursor).copied();
        self.cursor += 1;
        v
    }
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes_to_30() {
        assert_eq!(small_primes(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(small_primes(1).is_empty());
    }

    #[test]
    fn miller_rabin_agrees_with_sieve() {
        let primes = small_primes(20_000);
        let from_mr: Vec<u64> = (0..=20_000).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, from_mr);
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn primes_cross_segment_boundaries() {
        let streamed: Vec<u64> = SievedTerms::new(SequenceSpec::Primes)
            .take_while(|&p| p < 3 * SEGMENT_LEN)
            .collect();
        assert_eq!(streamed, small_primes(3 * SEGMENT_LEN));
    }

    #[test]
    fn isqrt_exact_squares() {
        assert_eq!(isqrt(0), 0);
        assert_eq!(isqrt(15), 3);
        assert_eq!(isqrt(16), 4);
        assert_eq!(isqrt(u64::MAX), 4_294_967_295);
    }
}
