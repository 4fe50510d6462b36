//! Brute-force colored partition counters.
//!
//! These never touch the series engine: each (part size, color) pair is an
//! unbounded knapsack generator applied to a rolling count array, so the
//! counts serve as an independent check on the eta-quotient expansions.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Partitions where `colors_all_parts` colors may use any part size and, for
/// each `(t, count)`, `count` further colors may only use multiples of `t`.
///
/// The generating function is `prod_k (1-q^k)^{-colors} prod_{(t,c)} prod_k (1-q^{tk})^{-c}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredPartitionSpec {
    pub colors_all_parts: u32,
    pub colors_multiples: Vec<(u32, u32)>,
}

impl ColoredPartitionSpec {
    /// Ordinary partitions `p(n)`.
    pub fn ordinary() -> Self {
        ColoredPartitionSpec { colors_all_parts: 1, colors_multiples: Vec::new() }
    }

    /// 2-color partition triples `p_{3,3}(n)`: three free colors and three
    /// colors restricted to multiples of 3.
    pub fn p33() -> Self {
        ColoredPartitionSpec { colors_all_parts: 3, colors_multiples: vec![(3, 3)] }
    }

    /// Cubic partitions `a(n)`: one free color, one restricted to even parts.
    pub fn cubic() -> Self {
        ColoredPartitionSpec { colors_all_parts: 1, colors_multiples: vec![(2, 1)] }
    }
}

/// Counts `c(0..=n_max)` by dynamic programming.
///
/// # Panics
/// If some multiple constraint `t` is zero.
pub fn count_dp(spec: &ColoredPartitionSpec, n_max: usize) -> Vec<BigInt> {
    assert!(spec.colors_multiples.iter().all(|&(t, _)| t >= 1), "multiple constraint must be positive");
    let mut counts = vec![BigInt::zero(); n_max + 1];
    counts[0] = BigInt::one();
    for part in 1..=n_max {
        let mut copies = spec.colors_all_parts;
        for &(t, c) in &spec.colors_multiples {
            if part % t as usize == 0 {
                copies += c;
            }
        }
        for _ in 0..copies {
            for n in part..=n_max {
                let prev = counts[n - part].clone();
                counts[n] += prev;
            }
        }
    }
    counts
}

/// `p_{3,3}(n) = sum_k p_3(n - 3k) p_3(k)`, where `p_3` counts 3-colored
/// partitions, splitting each triple into its free and its restricted part.
pub fn convolution_oracle(n_max: usize) -> Vec<BigInt> {
    let p3 = count_dp(&ColoredPartitionSpec { colors_all_parts: 3, colors_multiples: Vec::new() }, n_max);
    (0..=n_max)
        .map(|n| (0..=n / 3).map(|k| &p3[n - 3 * k] * &p3[k]).sum())
        .collect()
}
