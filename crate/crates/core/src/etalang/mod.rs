//! Eta-quotient and theta expressions.
//!
//! An [`EtaExpr`] is a finite sum of monomials
//! `c * q^s * prod f_k^{e_k} * prod f(-q^A, -q^B)` where
//! `f_k = (q^k; q^k)_inf` and `f(a, b)` is the two-variable theta function.
//! Every factor has constant term 1, so negative eta exponents always
//! evaluate to genuine power series.

mod catalog;
mod parse;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg};
use std::str::FromStr;

use num_bigint::BigInt;

use crate::series::{Ring, Series};

pub use catalog::{Catalog, CatalogError, IdentityRecord, SideExpr, DEFAULT_CATALOG};
pub use parse::{parse, parse_side, ParseError, ParseErrorKind};

/// `coeff * q^qshift * prod f_k^{e_k} * prod theta(A, B)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EtaMonomial {
    pub coeff: i64,
    pub qshift: usize,
    /// `k -> e_k`; never stores a zero exponent.
    etas: BTreeMap<u64, i64>,
    /// Normalized pairs with `A <= B`, sorted.
    thetas: Vec<(u64, u64)>,
}

impl EtaMonomial {
    pub fn constant(coeff: i64) -> Self {
        EtaMonomial { coeff, qshift: 0, etas: BTreeMap::new(), thetas: Vec::new() }
    }

    pub fn q_power(s: usize) -> Self {
        EtaMonomial { qshift: s, ..EtaMonomial::constant(1) }
    }

    /// `f_k^e`.
    ///
    /// # Panics
    /// If `k == 0`.
    pub fn eta(k: u64, e: i64) -> Self {
        assert!(k >= 1, "eta index must be positive");
        let mut m = EtaMonomial::constant(1);
        if e != 0 {
            m.etas.insert(k, e);
        }
        m
    }

    /// `f(-q^A, -q^B)`.
    ///
    /// # Panics
    /// If `a` or `b` is zero.
    pub fn theta(a: u64, b: u64) -> Self {
        assert!(a >= 1 && b >= 1, "theta parameters must be positive");
        EtaMonomial { thetas: vec![(a.min(b), a.max(b))], ..EtaMonomial::constant(1) }
    }

    pub fn with_coeff(mut self, coeff: i64) -> Self {
        self.coeff = coeff;
        self
    }

    pub fn with_shift(mut self, s: usize) -> Self {
        self.qshift = s;
        self
    }

    pub fn etas(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.etas.iter().map(|(&k, &e)| (k, e))
    }

    pub fn thetas(&self) -> &[(u64, u64)] {
        &self.thetas
    }

    /// Merges two monomials: coefficients multiply, shifts and exponents add.
    pub fn merge(&self, other: &EtaMonomial) -> Option<EtaMonomial> {
        let mut etas = self.etas.clone();
        for (&k, &e) in &other.etas {
            let entry = etas.entry(k).or_insert(0);
            *entry = entry.checked_add(e)?;
            if *entry == 0 {
                etas.remove(&k);
            }
        }
        let mut thetas = self.thetas.clone();
        thetas.extend_from_slice(&other.thetas);
        thetas.sort_unstable();
        Some(EtaMonomial {
            coeff: self.coeff.checked_mul(other.coeff)?,
            qshift: self.qshift.checked_add(other.qshift)?,
            etas,
            thetas,
        })
    }

    /// Reciprocal of a pure eta quotient with coefficient `+-1`.
    pub fn reciprocal(&self) -> Option<EtaMonomial> {
        if self.qshift != 0 || !self.thetas.is_empty() || self.coeff.abs() != 1 {
            return None;
        }
        Some(EtaMonomial {
            coeff: self.coeff,
            qshift: 0,
            etas: self.etas.iter().map(|(&k, &e)| (k, -e)).collect(),
            thetas: Vec::new(),
        })
    }

    /// `q -> q^t`.
    pub fn inflate(&self, t: u64) -> EtaMonomial {
        EtaMonomial {
            coeff: self.coeff,
            qshift: self.qshift * t as usize,
            etas: self.etas.iter().map(|(&k, &e)| (k * t, e)).collect(),
            thetas: self.thetas.iter().map(|&(a, b)| (a * t, b * t)).collect(),
        }
    }

    fn structure_key(&self) -> (usize, Vec<(u64, i64)>, Vec<(u64, u64)>) {
        (self.qshift, self.etas().collect(), self.thetas.clone())
    }

    fn same_structure(&self, other: &EtaMonomial) -> bool {
        self.qshift == other.qshift && self.etas == other.etas && self.thetas == other.thetas
    }

    /// Renders the monomial with a nonnegative coefficient; the sign is
    /// handled by the enclosing sum.
    fn render_unsigned(&self) -> String {
        let mut parts = Vec::new();
        let c = self.coeff.unsigned_abs();
        let has_factors = self.qshift > 0 || !self.etas.is_empty() || !self.thetas.is_empty();
        if c != 1 || !has_factors {
            parts.push(c.to_string());
        }
        match self.qshift {
            0 => {}
            1 => parts.push("q".to_string()),
            s => parts.push(format!("q^{s}")),
        }
        for (k, e) in self.etas() {
            if e == 1 {
                parts.push(format!("f{k}"));
            } else {
                parts.push(format!("f{k}^{e}"));
            }
        }
        for (a, b) in &self.thetas {
            parts.push(format!("theta({a},{b})"));
        }
        parts.join("*")
    }
}

/// A normalized sum of [`EtaMonomial`]s. The empty sum is the zero expression.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct EtaExpr {
    terms: Vec<EtaMonomial>,
}

impl EtaExpr {
    pub fn zero() -> Self {
        EtaExpr::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = EtaMonomial>) -> Self {
        let mut terms: Vec<EtaMonomial> = terms.into_iter().collect();
        terms.sort_by_key(|t| t.structure_key());
        let mut merged: Vec<EtaMonomial> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.same_structure(&t) => last.coeff += t.coeff,
                _ => merged.push(t),
            }
        }
        merged.retain(|t| t.coeff != 0);
        EtaExpr { terms: merged }
    }

    pub fn terms(&self) -> &[EtaMonomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The single monomial of a one-term expression.
    pub fn as_monomial(&self) -> Option<&EtaMonomial> {
        match self.terms.as_slice() {
            [m] => Some(m),
            _ => None,
        }
    }

    /// Product of two sums, or `None` on coefficient overflow.
    pub fn checked_mul(&self, other: &EtaExpr) -> Option<EtaExpr> {
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                out.push(a.merge(b)?);
            }
        }
        Some(EtaExpr::from_terms(out))
    }

    pub fn checked_pow(&self, e: u32) -> Option<EtaExpr> {
        let mut acc = EtaExpr::from(EtaMonomial::constant(1));
        for _ in 0..e {
            acc = acc.checked_mul(self)?;
        }
        Some(acc)
    }

    /// `q -> q^t` applied to every term.
    pub fn inflate(&self, t: u64) -> EtaExpr {
        EtaExpr::from_terms(self.terms.iter().map(|m| m.inflate(t)))
    }

    pub fn eval(&self, order: usize, ring: Ring) -> Series {
        Evaluator::new(ring, order).eval(self)
    }

    /// The generating function `1 / (f_1^3 f_3^3)` of 2-color partition triples.
    pub fn p33() -> EtaExpr {
        EtaExpr::from(EtaMonomial::eta(1, -3).merge(&EtaMonomial::eta(3, -3)).expect("small exponents"))
    }
}

impl From<EtaMonomial> for EtaExpr {
    fn from(m: EtaMonomial) -> Self {
        EtaExpr::from_terms([m])
    }
}

impl Add for EtaExpr {
    type Output = EtaExpr;

    fn add(self, rhs: EtaExpr) -> EtaExpr {
        EtaExpr::from_terms(self.terms.into_iter().chain(rhs.terms))
    }
}

impl Neg for EtaExpr {
    type Output = EtaExpr;

    fn neg(self) -> EtaExpr {
        EtaExpr::from_terms(self.terms.into_iter().map(|t| {
            let c = t.coeff;
            t.with_coeff(-c)
        }))
    }
}

impl Mul for &EtaExpr {
    type Output = EtaExpr;

    /// # Panics
    /// On `i64` coefficient overflow; use [`EtaExpr::checked_mul`] to avoid it.
    fn mul(self, rhs: &EtaExpr) -> EtaExpr {
        self.checked_mul(rhs).expect("coefficient overflow in eta expression product")
    }
}

impl fmt::Display for EtaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let body = t.render_unsigned();
            match (i, t.coeff < 0) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for EtaExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// Expansion of `f_k = (q^k; q^k)_inf` to `order`, via Euler's pentagonal
/// number theorem: `sum_j (-1)^j q^{k j(3j-1)/2}`.
///
/// # Panics
/// If `k == 0`.
pub fn eta_series(k: u64, order: usize, ring: Ring) -> Series {
    assert!(k >= 1, "eta index must be positive");
    let k = k as u128;
    let order_u = order as u128;
    let mut coeffs = vec![0i64; order + 1];
    coeffs[0] = 1;
    for j in 1u128.. {
        let sign = if j % 2 == 1 { -1 } else { 1 };
        let lo = k * j * (3 * j - 1) / 2;
        let hi = k * j * (3 * j + 1) / 2;
        if lo > order_u {
            break;
        }
        coeffs[lo as usize] += sign;
        if hi <= order_u {
            coeffs[hi as usize] += sign;
        }
    }
    Series::from_ints(ring, &coeffs)
}

/// Expansion of `f(-q^A, -q^B) = sum_{n in Z} (-1)^n q^{A n(n+1)/2 + B n(n-1)/2}`.
///
/// # Panics
/// If `a` or `b` is zero.
pub fn theta_series(a: u64, b: u64, order: usize, ring: Ring) -> Series {
    assert!(a >= 1 && b >= 1, "theta parameters must be positive");
    let (a, b) = (a as u128, b as u128);
    let order_u = order as u128;
    let mut coeffs = vec![0i64; order + 1];
    coeffs[0] = 1;
    // both exponents grow monotonically in |n|, so stop once each passes N
    for n in 1u128.. {
        let sign = if n % 2 == 1 { -1 } else { 1 };
        let pos = a * n * (n + 1) / 2 + b * n * (n - 1) / 2;
        let neg = a * n * (n - 1) / 2 + b * n * (n + 1) / 2;
        if pos > order_u && neg > order_u {
            break;
        }
        if pos <= order_u {
            coeffs[pos as usize] += sign;
        }
        if neg <= order_u {
            coeffs[neg as usize] += sign;
        }
    }
    Series::from_ints(ring, &coeffs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Factor {
    Eta(u64),
    Theta(u64, u64),
}

/// Evaluates expressions at a fixed ring and order, memoizing the eta and
/// theta expansions it has already built. Owned by a single worker.
pub struct Evaluator {
    ring: Ring,
    order: usize,
    cache: HashMap<Factor, Series>,
}

impl Evaluator {
    pub fn new(ring: Ring, order: usize) -> Self {
        Evaluator { ring, order, cache: HashMap::new() }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn order(&self) -> usize {
        self.order
    }

    fn factor(&mut self, f: Factor) -> &Series {
        let (ring, order) = (self.ring, self.order);
        self.cache.entry(f).or_insert_with(|| match f {
            Factor::Eta(k) => eta_series(k, order, ring),
            Factor::Theta(a, b) => theta_series(a, b, order, ring),
        })
    }

    pub fn eval(&mut self, expr: &EtaExpr) -> Series {
        let mut acc = Series::zero(self.ring, self.order);
        for t in &expr.terms {
            let term = self.eval_monomial(t);
            acc = acc.add(&term).expect("all terms share the evaluator ring");
        }
        acc
    }

    /// Positive powers are applied by repeated multiplication and negative
    /// ones by repeated division, so each step costs `O(N * support)` on the
    /// sparse eta/theta expansions instead of a dense product.
    pub fn eval_monomial(&mut self, m: &EtaMonomial) -> Series {
        if m.qshift > self.order {
            return Series::zero(self.ring, self.order);
        }
        let mut acc = Series::one(self.ring, self.order);
        for (k, e) in m.etas() {
            let base = self.factor(Factor::Eta(k)).clone();
            acc = apply_power(acc, &base, e);
        }
        for &(a, b) in m.thetas() {
            let base = self.factor(Factor::Theta(a, b)).clone();
            acc = apply_power(acc, &base, 1);
        }
        acc.shift(m.qshift).scale(&BigInt::from(m.coeff))
    }
}

fn apply_power(mut acc: Series, base: &Series, e: i64) -> Series {
    for _ in 0..e.unsigned_abs() {
        acc = if e > 0 {
            acc.mul(base).expect("same ring")
        } else {
            acc.div(base).expect("eta and theta series have constant term 1")
        };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Modulus;
    use num_traits::ToPrimitive;

    fn ints(s: &Series) -> Vec<i64> {
        s.coeffs().iter().map(|c| c.to_i64().unwrap()).collect()
    }

    /// prod_{j=1}^{N} (1 - q^{kj}) multiplied out term by term.
    fn eta_by_product(k: usize, order: usize) -> Vec<i64> {
        let mut c = vec![0i64; order + 1];
        c[0] = 1;
        let mut j = k;
        while j <= order {
            for n in (j..=order).rev() {
                c[n] -= c[n - j];
            }
            j += k;
        }
        c
    }

    #[test]
    fn eta_series_matches_direct_product() {
        assert_eq!(ints(&eta_series(1, 8, Ring::Exact)), vec![1, -1, -1, 0, 0, 1, 0, 1, 0]);
        assert_eq!(ints(&eta_series(3, 8, Ring::Exact)), vec![1, 0, 0, -1, 0, 0, -1, 0, 0]);
        for k in 1..=12 {
            assert_eq!(ints(&eta_series(k, 300, Ring::Exact)), eta_by_product(k as usize, 300), "k = {k}");
        }
    }

    #[test]
    fn eta_series_is_inflated_f1() {
        let f1 = eta_series(1, 500, Ring::Exact);
        for k in 1..=12 {
            assert_eq!(eta_series(k, 500, Ring::Exact), f1.inflate(k as usize));
        }
    }

    #[test]
    fn theta_one_two_is_euler_product() {
        assert_eq!(theta_series(1, 2, 400, Ring::Exact), eta_series(1, 400, Ring::Exact));
        assert_eq!(theta_series(2, 1, 400, Ring::Exact), eta_series(1, 400, Ring::Exact));
    }

    #[test]
    fn theta_first_terms() {
        let t = ints(&theta_series(5, 10, 30, Ring::Exact));
        assert_eq!(t[0], 1);
        assert_eq!(t[5], -1);
        assert_eq!(t[10], -1);
        assert_eq!(t[1..5], [0; 4]);
        for (a, b) in [(1, 1), (3, 7), (4, 11), (20, 5)] {
            assert_eq!(theta_series(a, b, 200, Ring::Exact), theta_series(b, a, 200, Ring::Exact));
        }
    }

    #[test]
    fn theta_one_one_has_double_coefficients() {
        // f(-q,-q) = sum (-1)^n q^{n^2}
        let t = ints(&theta_series(1, 1, 16, Ring::Exact));
        assert_eq!(t, vec![1, -2, 0, 0, 2, 0, 0, 0, 0, -2, 0, 0, 0, 0, 0, 0, 2]);
    }

    #[test]
    fn normalization_merges_and_drops() {
        let a = EtaExpr::from(EtaMonomial::eta(2, 1).with_coeff(3));
        let b = EtaExpr::from(EtaMonomial::eta(2, 1).with_coeff(-3));
        assert!((a.clone() + b).is_zero());
        let c = EtaExpr::from(EtaMonomial::eta(2, 1).with_coeff(2));
        assert_eq!((a + c).terms()[0].coeff, 5);
        assert_eq!(EtaExpr::zero().to_string(), "0");
    }

    #[test]
    fn render_forms() {
        assert_eq!(EtaExpr::p33().to_string(), "f1^-3*f3^-3");
        let m = EtaMonomial::eta(9, 3).with_coeff(-3).with_shift(1);
        assert_eq!(EtaExpr::from(m).to_string(), "-3*q*f9^3");
        assert_eq!(EtaExpr::from(EtaMonomial::theta(10, 5)).to_string(), "theta(5,10)");
        assert_eq!(EtaExpr::from(EtaMonomial::constant(7)).to_string(), "7");
    }

    #[test]
    fn p33_low_coefficients() {
        assert_eq!(ints(&EtaExpr::p33().eval(5, Ring::Exact)), vec![1, 3, 9, 25, 60, 135]);
    }

    #[test]
    fn evaluation_is_multiplicative() {
        let e1 = parse("f1^2*f4^-1 + 3*q*f2").unwrap();
        let e2 = parse("f3^-1 - q^2*theta(2,3)").unwrap();
        let lhs = (&e1 * &e2).eval(150, Ring::Exact);
        let rhs = e1.eval(150, Ring::Exact).mul(&e2.eval(150, Ring::Exact)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn modular_evaluation_matches_reduced_exact() {
        let m = Modulus::new(27).unwrap();
        let e = EtaExpr::p33();
        assert_eq!(e.eval(300, Ring::Modular(m)), e.eval(300, Ring::Exact).reduce_mod(m));
    }

    #[test]
    fn shift_beyond_order_is_zero() {
        let e = EtaExpr::from(EtaMonomial::q_power(10));
        assert!(e.eval(5, Ring::Exact).is_zero());
    }
}
