//! Small integer helpers.

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes `p` with `lo <= p < hi`.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo..hi).filter(|&n| is_prime(n)).collect()
}

/// `(+-p - 1) / 6` for a prime `p >= 5`: `(p - 1)/6` when `p = 1 (mod 6)`,
/// `(-p - 1)/6` when `p = -1 (mod 6)`.
pub fn signed_sixth(p: u64) -> i64 {
    let p = p as i64;
    if p % 6 == 1 {
        (p - 1) / 6
    } else {
        (-p - 1) / 6
    }
}
