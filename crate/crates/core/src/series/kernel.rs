//! Coefficient kernels shared by the exact and modular series back ends.
//!
//! Every routine here works on plain coefficient slices. Products are written
//! in gather form (`out[n] = sum_k s[k] * d[n - k]` over the nonzero entries of
//! the sparser operand) so a single reduction per output index suffices in the
//! modular kernel, and series such as `(q^k; q^k)_inf` with `O(sqrt N)` support
//! cost `O(N sqrt N)` instead of `O(N^2)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub(crate) trait Kernel {
    type Elem: Clone + PartialEq;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, x: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Sum of `s * d[base - k]` over the sparse terms `(k, s)` with `k <= base`.
    fn gather(&self, sparse: &[(usize, Self::Elem)], dense: &[Self::Elem], base: usize) -> Self::Elem;
    fn unit_inverse(&self, x: &Self::Elem) -> Option<Self::Elem>;
}

pub(crate) struct ExactKernel;

impl Kernel for ExactKernel {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }

    fn one(&self) -> BigInt {
        BigInt::one()
    }

    fn is_zero(&self, x: &BigInt) -> bool {
        x.is_zero()
    }

    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }

    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }

    fn gather(&self, sparse: &[(usize, BigInt)], dense: &[BigInt], base: usize) -> BigInt {
        let one = BigInt::one();
        let minus_one = -BigInt::one();
        let mut acc = BigInt::zero();
        for (k, s) in sparse {
            if *k > base {
                break;
            }
            let d = &dense[base - k];
            if d.is_zero() {
                continue;
            }
            // eta and theta coefficients are almost always +-1
            if *s == one {
                acc += d;
            } else if *s == minus_one {
                acc -= d;
            } else {
                acc += s * d;
            }
        }
        acc
    }

    fn unit_inverse(&self, x: &BigInt) -> Option<BigInt> {
        if x.abs().is_one() {
            Some(x.clone())
        } else {
            None
        }
    }
}

pub(crate) struct ModKernel {
    pub(crate) m: u64,
}

impl Kernel for ModKernel {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.m
    }

    fn is_zero(&self, x: &u64) -> bool {
        *x == 0
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.m - b
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.m
    }

    fn gather(&self, sparse: &[(usize, u64)], dense: &[u64], base: usize) -> u64 {
        // operands are < 2^31, so every product is < 2^62 and a u128 sum
        // cannot overflow for any realistic support size
        let mut acc: u128 = 0;
        for (k, s) in sparse {
            if *k > base {
                break;
            }
            acc += u128::from(s * dense[base - k]);
        }
        (acc % u128::from(self.m)) as u64
    }

    fn unit_inverse(&self, x: &u64) -> Option<u64> {
        let m = self.m as i64;
        let eg = (*x as i64).extended_gcd(&m);
        if eg.gcd != 1 {
            return None;
        }
        Some(eg.x.rem_euclid(m) as u64)
    }
}

pub(crate) fn nonzero_terms<K: Kernel>(k: &K, coeffs: &[K::Elem]) -> Vec<(usize, K::Elem)> {
    coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !k.is_zero(c))
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

/// Truncated Cauchy product to `order` (inclusive).
pub(crate) fn mul<K: Kernel>(k: &K, a: &[K::Elem], b: &[K::Elem], order: usize) -> Vec<K::Elem> {
    let a = &a[..=order];
    let b = &b[..=order];
    let sa = nonzero_terms(k, a);
    let sb_len = b.iter().filter(|c| !k.is_zero(c)).count();
    let (sparse, dense) = if sa.len() <= sb_len {
        (sa, b)
    } else {
        (nonzero_terms(k, b), a)
    };
    (0..=order).map(|n| k.gather(&sparse, dense, n)).collect()
}

/// Solves `den * x = num` to `order`; `None` when the constant of `den` is not a unit.
pub(crate) fn divide<K: Kernel>(
    k: &K,
    num: &[K::Elem],
    den: &[K::Elem],
    order: usize,
) -> Option<Vec<K::Elem>> {
    let inv0 = k.unit_inverse(&den[0])?;
    let tail: Vec<(usize, K::Elem)> = nonzero_terms(k, &den[..=order])
        .into_iter()
        .filter(|(i, _)| *i > 0)
        .collect();
    let mut out: Vec<K::Elem> = Vec::with_capacity(order + 1);
    for n in 0..=order {
        // out holds indices 0..n and every tail index is >= 1
        let acc = k.gather(&tail, &out, n);
        let r = k.sub(&num[n], &acc);
        out.push(k.mul(&inv0, &r));
    }
    Some(out)
}

pub(crate) fn pow<K: Kernel>(k: &K, a: &[K::Elem], e: u64, order: usize) -> Vec<K::Elem> {
    let mut result = one_series(k, order);
    if e == 0 {
        return result;
    }
    let mut base: Vec<K::Elem> = a[..=order].to_vec();
    let mut e = e;
    loop {
        if e & 1 == 1 {
            result = mul(k, &result, &base, order);
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = mul(k, &base, &base, order);
    }
    result
}

pub(crate) fn one_series<K: Kernel>(k: &K, order: usize) -> Vec<K::Elem> {
    let mut v = vec![k.zero(); order + 1];
    v[0] = k.one();
    v
}
