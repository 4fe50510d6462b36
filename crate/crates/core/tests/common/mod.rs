#![allow(dead_code)]

use num_bigint::BigInt;
use proptest::prelude::*;
use qdissect::{Modulus, Ring, Series};

pub const MODULI: [u64; 9] = [2, 3, 4, 5, 7, 9, 11, 27, 1_000_003];

pub fn modulus() -> impl Strategy<Value = Modulus> {
    proptest::sample::select(MODULI.to_vec()).prop_map(|m| Modulus::new(m).unwrap())
}

/// Exact series of order 0..=16 with small coefficients.
pub fn exact_series() -> impl Strategy<Value = Series> {
    proptest::collection::vec(-60i64..60, 1..18).prop_map(|c| Series::from_ints(Ring::Exact, &c))
}

/// Exact series with constant term +-1 (a unit in every ring).
pub fn unit_series() -> impl Strategy<Value = Series> {
    (proptest::bool::ANY, proptest::collection::vec(-60i64..60, 0..17)).prop_map(|(neg, tail)| {
        let mut c = vec![if neg { -1 } else { 1 }];
        c.extend(tail);
        Series::from_ints(Ring::Exact, &c)
    })
}

/// Three exact series sharing one order.
pub fn same_order_triple() -> impl Strategy<Value = (Series, Series, Series)> {
    (1usize..16).prop_flat_map(|n| {
        let v = || proptest::collection::vec(-60i64..60, n + 1).prop_map(|c| Series::from_ints(Ring::Exact, &c));
        (v(), v(), v())
    })
}

pub fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
