//! Congruence claims `c(a n + b) = 0 (mod m)`, their checkers, the
//! quadratic-residue criterion behind the prime family, and an empirical
//! scanner over arbitrary eta-quotient generating functions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{is_prime, signed_sixth};
use crate::etalang::EtaExpr;
use crate::series::{Modulus, Ring, Series, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CongruenceError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("{0} is below the supported range (need a prime p >= 5)")]
    PrimeTooSmall(u64),
    #[error("Legendre condition violated: (-3/{p}) = {symbol}, expected -1")]
    LegendreCondition { p: u64, symbol: i8 },
    #[error("alpha must be at least 1")]
    ZeroAlpha,
    #[error("progression parameters overflow for p = {p}, alpha = {alpha}")]
    Overflow { p: u64, alpha: u32 },
    #[error("invalid progression {0:?} (expected e.g. \"12n+6,9\")")]
    BadProgression(String),
    #[error("progression step must be positive")]
    ZeroStep,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Legendre symbol `(a/p)` by Euler's criterion.
pub fn legendre(a: i64, p: u64) -> Result<i8, CongruenceError> {
    if p == 2 || !is_prime(p) {
        return Err(CongruenceError::NotOddPrime(p));
    }
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return Ok(0);
    }
    Ok(if pow_mod(r, (p - 1) / 2, p) == 1 { 1 } else { -1 })
}

fn pow_mod(base: u64, mut e: u64, m: u64) -> u64 {
    let m = u128::from(m);
    let mut b = u128::from(base) % m;
    let mut acc = 1u128 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc as u64
}

/// Solutions of `2(6k+1)^2 + 6(6m+1)^2 = 0 (mod p)` over `|k|, |m| <= (p-1)/2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticReport {
    pub p: u64,
    pub legendre_minus3: i8,
    /// `k = m = (+-p - 1)/6`.
    pub trivial: i64,
    pub solutions: Vec<(i64, i64)>,
}

impl QuadraticReport {
    pub fn only_trivial(&self) -> bool {
        self.solutions == [(self.trivial, self.trivial)]
    }

    /// When `(-3/p) = -1` the trivial pair must be the only solution.
    pub fn consistent(&self) -> bool {
        self.legendre_minus3 != -1 || self.only_trivial()
    }
}

pub fn quadratic_criterion(p: u64) -> Result<QuadraticReport, CongruenceError> {
    if p < 5 {
        return Err(CongruenceError::PrimeTooSmall(p));
    }
    let symbol = legendre(-3, p)?;
    let half = ((p - 1) / 2) as i64;
    let pi = p as i64;
    let mut solutions = Vec::new();
    for k in -half..=half {
        for m in -half..=half {
            let u = 6 * k + 1;
            let v = 6 * m + 1;
            if (2 * u * u + 6 * v * v).rem_euclid(pi) == 0 {
                solutions.push((k, m));
            }
        }
    }
    Ok(QuadraticReport { p, legendre_minus3: symbol, trivial: signed_sixth(p), solutions })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum ClaimStatus {
    Unchecked,
    VerifiedUpTo { bound: u64 },
    RefutedAt { n: u64 },
}

/// Where a claim came from. Scanner output is always `Empirical`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimOrigin {
    Stated(String),
    Empirical,
}

/// `c(a n + b) = 0 (mod m)` for all `n >= 0`, where `c` are the coefficients
/// of `gf`.
///
/// `b < a` always; `start` is the first argument actually covered
/// (`start = b (mod a)`, `start >= b`) so that progressions with an offset
/// beyond one period stay exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceClaim {
    pub gf: EtaExpr,
    pub a: u64,
    pub b: u64,
    pub start: u64,
    pub m: Modulus,
    pub status: ClaimStatus,
    /// Number of progression terms examined by the last check.
    pub terms_checked: u64,
    pub origin: ClaimOrigin,
}

impl CongruenceClaim {
    /// # Panics
    /// If `a == 0` or `b >= a`.
    pub fn new(gf: EtaExpr, a: u64, b: u64, m: Modulus) -> Self {
        assert!(a >= 1 && b < a, "need 0 <= b < a");
        CongruenceClaim::with_start(gf, a, b, m)
    }

    /// Claim over the arguments `start, start + a, start + 2a, ...`.
    ///
    /// # Panics
    /// If `a == 0`.
    pub fn with_start(gf: EtaExpr, a: u64, start: u64, m: Modulus) -> Self {
        assert!(a >= 1, "progression step must be positive");
        CongruenceClaim {
            gf,
            a,
            b: start % a,
            start,
            m,
            status: ClaimStatus::Unchecked,
            terms_checked: 0,
            origin: ClaimOrigin::Empirical,
        }
    }

    pub fn stated(mut self, source: impl Into<String>) -> Self {
        self.origin = ClaimOrigin::Stated(source.into());
        self
    }

    /// Arguments of the progression up to `bound`.
    pub fn arguments(&self, bound: u64) -> impl Iterator<Item = u64> {
        let a = self.a;
        (self.start..=bound).step_by(a as usize)
    }

    /// Checks against precomputed coefficients of `gf` mod `m`.
    ///
    /// # Panics
    /// If `series` is not over `Z/m` or is shorter than `bound`.
    pub fn check_against(&self, series: &Series, bound: u64) -> CongruenceClaim {
        assert_eq!(series.ring(), Ring::Modular(self.m), "series ring must match the claim modulus");
        assert!(series.order() as u64 >= bound, "series too short for the bound");
        let mut out = self.clone();
        out.terms_checked = 0;
        out.status = ClaimStatus::VerifiedUpTo { bound };
        for n in self.arguments(bound) {
            out.terms_checked += 1;
            if !series.is_zero_at(n as usize) {
                out.status = ClaimStatus::RefutedAt { n };
                break;
            }
        }
        out
    }

    pub fn is_verified(&self) -> bool {
        matches!(self.status, ClaimStatus::VerifiedUpTo { .. })
    }

    /// `"(12n+6) mod 2"`.
    pub fn label(&self) -> String {
        format!("({}n+{}) mod {}", self.a, self.start, self.m)
    }

    /// Whether `other` (a congruence on a coarser progression with a modulus
    /// divisible by ours) already implies this claim.
    pub fn implied_by(&self, other: &CongruenceClaim) -> bool {
        other != self
            && self.gf == other.gf
            && self.a.is_multiple_of(other.a)
            && self.start >= other.start
            && self.start % other.a == other.b
            && other.m.get().is_multiple_of(self.m.get())
            && (other.a, other.m) != (self.a, self.m)
    }
}

impl fmt::Display for CongruenceClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            ClaimStatus::Unchecked => "unchecked".to_string(),
            ClaimStatus::VerifiedUpTo { bound } => format!("verified up to {bound}"),
            ClaimStatus::RefutedAt { n } => format!("refuted at n = {n}"),
        };
        write!(f, "c({}n+{}) = 0 mod {}: {status}", self.a, self.start, self.m)
    }
}

/// Coefficients of each `(gf, m)` pair, computed once and in parallel.
fn modular_table(keys: BTreeSet<(String, Modulus)>, exprs: &BTreeMap<String, EtaExpr>, bound: u64) -> BTreeMap<(String, Modulus), Series> {
    let keys: Vec<_> = keys.into_iter().collect();
    keys.into_par_iter()
        .map(|(g, m)| {
            let s = exprs[&g].eval(bound as usize, Ring::Modular(m));
            ((g, m), s)
        })
        .collect()
}

/// Checks every claim up to `bound`, sharing the generating-function
/// expansion between claims with the same `(gf, m)`. Output order matches
/// the input.
pub fn check_claims(claims: &[CongruenceClaim], bound: u64) -> Vec<CongruenceClaim> {
    let exprs: BTreeMap<String, EtaExpr> = claims.iter().map(|c| (c.gf.to_string(), c.gf.clone())).collect();
    let keys = claims.iter().map(|c| (c.gf.to_string(), c.m)).collect();
    let table = modular_table(keys, &exprs, bound);
    claims
        .par_iter()
        .map(|c| c.check_against(&table[&(c.gf.to_string(), c.m)], bound))
        .collect()
}

pub fn check_claim(claim: &CongruenceClaim, bound: u64) -> CongruenceClaim {
    check_claims(std::slice::from_ref(claim), bound).remove(0)
}

/// Recomputes the coefficients exactly up to `min(bound, 500)` and confirms
/// they vanish mod `m` on the progression.
pub fn exact_cross_check(claim: &CongruenceClaim, bound: u64) -> bool {
    let n = bound.min(500);
    let exact = claim.gf.eval(n as usize, Ring::Exact);
    let m = num_bigint::BigInt::from(claim.m.get());
    claim.arguments(n).all(|k| (exact.coeff(k as usize) % &m) == num_bigint::BigInt::from(0))
}

/// Parses `"12n+6,9"` or `"121n + 39, 61"` into the step and its offsets.
pub fn parse_progression(text: &str) -> Result<(u64, Vec<u64>), CongruenceError> {
    let bad = || CongruenceError::BadProgression(text.to_string());
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let (step, rest) = compact.split_once('n').ok_or_else(bad)?;
    let a: u64 = step.parse().map_err(|_| bad())?;
    if a == 0 {
        return Err(CongruenceError::ZeroStep);
    }
    let rest = if rest.is_empty() { "0" } else { rest.strip_prefix('+').ok_or_else(bad)? };
    let offsets = rest
        .split(',')
        .map(|b| b.parse::<u64>().map_err(|_| bad()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((a, offsets))
}

/// Expands a progression shorthand into one claim per offset.
pub fn claims_from_progression(gf: &EtaExpr, text: &str, m: Modulus) -> Result<Vec<CongruenceClaim>, CongruenceError> {
    let (a, offsets) = parse_progression(text)?;
    Ok(offsets.into_iter().map(|b| CongruenceClaim::with_start(gf.clone(), a, b, m)).collect())
}

fn stated(table: &[(&str, u64)], source: &str) -> Vec<CongruenceClaim> {
    let gf = EtaExpr::p33();
    table
        .iter()
        .flat_map(|&(prog, m)| {
            let m = Modulus::new(m).expect("static modulus");
            claims_from_progression(&gf, prog, m).expect("static progression")
        })
        .map(|c| c.stated(source))
        .collect()
}

/// The eight claims `(12n+6,9) mod 2`, `(6n+4) mod 4`, `(3n+1) mod 3`,
/// `(3n+2) mod 9`, `(9n+5,8) mod 27`, `(5n+3) mod 5` for `p_{3,3}`.
pub fn theorem1_claims() -> Vec<CongruenceClaim> {
    stated(
        &[("12n+6,9", 2), ("6n+4", 4), ("3n+1", 3), ("3n+2", 9), ("9n+5,8", 27), ("5n+3", 5)],
        "p33 congruences (elementary)",
    )
}

pub fn theorem1_suite(bound: u64) -> Vec<CongruenceClaim> {
    check_claims(&theorem1_claims(), bound)
}

/// The mod-7 and mod-11 classes, verified empirically only.
pub fn theorem3_claims() -> Vec<CongruenceClaim> {
    stated(
        &[("21n+7,10,16,18", 7), ("121n+39,61,72,94,105,116", 11)],
        "p33 congruences (modular-forms method)",
    )
}

pub fn theorem3_suite(bound: u64) -> Vec<CongruenceClaim> {
    check_claims(&theorem3_claims(), bound)
}

/// One member of the family
/// `p_{3,3}(9 p^{2 alpha} n + (p^{2 alpha - 1}(3p + 18j) + 1)/2) = 0 (mod 27)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeFamilyClaim {
    pub p: u64,
    pub alpha: u32,
    pub j: u64,
    /// `9 p^{2 alpha}`.
    pub a: u64,
    /// First argument, `(p^{2 alpha - 1}(3p + 18j) + 1)/2`; may exceed `a`.
    pub b: u64,
}

impl PrimeFamilyClaim {
    pub fn to_claim(&self) -> CongruenceClaim {
        CongruenceClaim::with_start(EtaExpr::p33(), self.a, self.b, Modulus::new(27).expect("27 is valid"))
            .stated(format!("prime family p = {}, alpha = {}, j = {}", self.p, self.alpha, self.j))
    }
}

pub fn theorem2_claims(p: u64, alpha: u32) -> Result<Vec<PrimeFamilyClaim>, CongruenceError> {
    let symbol = legendre(-3, p)?;
    if symbol != -1 {
        return Err(CongruenceError::LegendreCondition { p, symbol });
    }
    if alpha == 0 {
        return Err(CongruenceError::ZeroAlpha);
    }
    let overflow = || CongruenceError::Overflow { p, alpha };
    let p_odd = p.checked_pow(2 * alpha - 1).ok_or_else(overflow)?;
    let a = p_odd.checked_mul(p).and_then(|x| x.checked_mul(9)).ok_or_else(overflow)?;
    (1..p)
        .map(|j| {
            let numerator = p_odd
                .checked_mul(3 * p + 18 * j)
                .and_then(|x| x.checked_add(1))
                .ok_or_else(overflow)?;
            // p odd makes p^(2 alpha - 1)(3p + 18j) odd
            debug_assert_eq!(numerator % 2, 0);
            Ok(PrimeFamilyClaim { p, alpha, j, a, b: numerator / 2 })
        })
        .collect()
}

/// Every `(a, b, m)` with `a <= a_max`, `b < a`, `m` in `moduli` whose
/// progression vanishes mod `m` at every argument `<= bound`, provided at
/// least `min_hits` arguments were tested. Sorted by `(m, a, b)`.
pub fn scan(gf: &EtaExpr, a_max: u64, moduli: &[Modulus], bound: u64, min_hits: u64) -> Vec<CongruenceClaim> {
    let distinct: BTreeSet<Modulus> = moduli.iter().copied().collect();
    let series: Vec<(Modulus, Series)> = distinct
        .into_iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|m| (m, gf.eval(bound as usize, Ring::Modular(m))))
        .collect();
    let mut found = Vec::new();
    for (m, s) in &series {
        for a in 1..=a_max {
            for b in 0..a.min(bound + 1) {
                let terms = (bound - b) / a + 1;
                if terms < min_hits {
                    continue;
                }
                let claim = CongruenceClaim::new(gf.clone(), a, b, *m).check_against(s, bound);
                if claim.is_verified() {
                    found.push(claim);
                }
            }
        }
    }
    found.sort_by_key(|c| (c.m, c.a, c.b));
    found
}

/// Drops claims implied by another claim in the same list.
pub fn primitive_claims(claims: &[CongruenceClaim]) -> Vec<CongruenceClaim> {
    claims
        .iter()
        .filter(|c| !claims.iter().any(|o| c.implied_by(o)))
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(x: u64) -> Modulus {
        Modulus::new(x).unwrap()
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(-3, 5).unwrap(), -1);
        assert_eq!(legendre(-3, 7).unwrap(), 1);
        assert_eq!(legendre(14, 7).unwrap(), 0);
        assert_eq!(legendre(0, 11).unwrap(), 0);
        assert!(matches!(legendre(1, 2), Err(CongruenceError::NotOddPrime(2))));
        assert!(matches!(legendre(1, 15), Err(CongruenceError::NotOddPrime(15))));
    }

    #[test]
    fn legendre_matches_square_enumeration() {
        for p in crate::arith::primes_in(3, 120) {
            let squares: BTreeSet<u64> = (1..p).map(|x| x * x % p).collect();
            for a in -20i64..20 {
                let r = a.rem_euclid(p as i64) as u64;
                let expected = if r == 0 {
                    0
                } else if squares.contains(&r) {
                    1
                } else {
                    -1
                };
                assert_eq!(legendre(a, p).unwrap(), expected, "({a}/{p})");
            }
        }
    }

    #[test]
    fn quadratic_criterion_examples() {
        let r5 = quadratic_criterion(5).unwrap();
        assert_eq!(r5.solutions, vec![(-1, -1)]);
        assert!(r5.only_trivial());
        let r11 = quadratic_criterion(11).unwrap();
        assert_eq!(r11.solutions, vec![(-2, -2)]);
        let r13 = quadratic_criterion(13).unwrap();
        assert_eq!(r13.legendre_minus3, 1);
        assert!(r13.solutions.len() > 1);
        assert!(r13.consistent());
        assert!(quadratic_criterion(3).is_err());
    }

    #[test]
    fn theorem2_instances() {
        let c = theorem2_claims(5, 1).unwrap();
        assert_eq!(c.iter().map(|x| (x.a, x.b)).collect::<Vec<_>>(), vec![(225, 83), (225, 128), (225, 173), (225, 218)]);
        let c = theorem2_claims(5, 2).unwrap();
        assert_eq!(c.iter().map(|x| x.b).collect::<Vec<_>>(), vec![2063, 3188, 4313, 5438]);
        assert!(c.iter().all(|x| x.a == 5625));
        let c = theorem2_claims(11, 1).unwrap();
        assert_eq!(c.len(), 10);
        assert!(c.iter().all(|x| x.a == 1089 && x.b == 182 + 99 * x.j));
    }

    #[test]
    fn theorem2_offset_beyond_one_period() {
        let last = theorem2_claims(11, 1).unwrap().pop().unwrap();
        assert_eq!(last.b, 1172);
        let claim = last.to_claim();
        assert_eq!((claim.a, claim.b, claim.start), (1089, 83, 1172));
        assert_eq!(claim.arguments(3500).collect::<Vec<_>>(), vec![1172, 2261, 3350]);
    }

    #[test]
    fn theorem2_rejects_wrong_primes() {
        assert_eq!(theorem2_claims(7, 1), Err(CongruenceError::LegendreCondition { p: 7, symbol: 1 }));
        assert_eq!(theorem2_claims(3, 1), Err(CongruenceError::LegendreCondition { p: 3, symbol: 0 }));
        assert!(matches!(theorem2_claims(9, 1), Err(CongruenceError::NotOddPrime(9))));
        assert_eq!(theorem2_claims(5, 0), Err(CongruenceError::ZeroAlpha));
        assert!(matches!(theorem2_claims(89, 10), Err(CongruenceError::Overflow { .. })));
    }

    #[test]
    fn theorem2_numerator_is_even() {
        for p in crate::arith::primes_in(3, 100) {
            if legendre(-3, p).unwrap() != -1 {
                continue;
            }
            for alpha in 1..=2 {
                for c in theorem2_claims(p, alpha).unwrap() {
                    let num = c.p.pow(2 * alpha - 1) * (3 * c.p + 18 * c.j) + 1;
                    assert_eq!(num % 2, 0);
                    assert_eq!(c.b * 2, num);
                }
            }
        }
    }

    #[test]
    fn check_claim_verdicts() {
        let gf = EtaExpr::p33();
        let ok = check_claim(&CongruenceClaim::new(gf.clone(), 3, 1, m(3)), 2000);
        assert_eq!(ok.status, ClaimStatus::VerifiedUpTo { bound: 2000 });
        assert_eq!(ok.terms_checked, 667);
        let bad = check_claim(&CongruenceClaim::new(gf, 5, 1, m(5)), 2000);
        assert_eq!(bad.status, ClaimStatus::RefutedAt { n: 1 });
    }

    #[test]
    fn progression_shorthand() {
        assert_eq!(parse_progression("12n+6,9").unwrap(), (12, vec![6, 9]));
        assert_eq!(parse_progression("121n + 39, 61, 72").unwrap(), (121, vec![39, 61, 72]));
        assert_eq!(parse_progression("5n").unwrap(), (5, vec![0]));
        assert!(parse_progression("12+6").is_err());
        assert!(parse_progression("12n-6").is_err());
        assert_eq!(parse_progression("0n+1"), Err(CongruenceError::ZeroStep));
        let claims = claims_from_progression(&EtaExpr::p33(), "12n+6,9", m(2)).unwrap();
        assert_eq!(claims.iter().map(|c| (c.a, c.b, c.m.get())).collect::<Vec<_>>(), vec![(12, 6, 2), (12, 9, 2)]);
    }

    #[test]
    fn theorem1_has_eight_claims() {
        let got: Vec<_> = theorem1_claims().iter().map(|c| (c.a, c.b, c.m.get())).collect();
        assert_eq!(
            got,
            vec![(12, 6, 2), (12, 9, 2), (6, 4, 4), (3, 1, 3), (3, 2, 9), (9, 5, 27), (9, 8, 27), (5, 3, 5)]
        );
    }

    #[test]
    fn scan_finds_ramanujan_mod5() {
        let gf = crate::etalang::parse("f1^-1").unwrap();
        let found = scan(&gf, 5, &[m(5)], 2000, 50);
        assert!(found.iter().any(|c| (c.a, c.b) == (5, 4)));
        assert!(found.iter().all(|c| c.origin == ClaimOrigin::Empirical));
    }

    #[test]
    fn primitive_filter() {
        let gf = EtaExpr::p33();
        let base = CongruenceClaim::new(gf.clone(), 3, 1, m(3));
        let finer = CongruenceClaim::new(gf.clone(), 6, 4, m(3));
        let other = CongruenceClaim::new(gf, 6, 3, m(3));
        assert!(finer.implied_by(&base));
        assert!(!other.implied_by(&base));
        let kept = primitive_claims(&[base.clone(), finer, other.clone()]);
        assert_eq!(kept, vec![base, other]);
    }

    #[test]
    fn exact_cross_check_agrees() {
        let c = CongruenceClaim::new(EtaExpr::p33(), 3, 2, m(9));
        assert!(exact_cross_check(&c, 10_000));
        let c = CongruenceClaim::new(EtaExpr::p33(), 3, 2, m(27));
        assert!(!exact_cross_check(&c, 10_000));
    }
}
