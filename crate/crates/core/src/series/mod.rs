//! Truncated formal power series over `Z` or `Z/mZ`.
//!
//! A [`Series`] carries its coefficient ring and its truncation order `N`:
//! coefficients are known for exponents `0..=N`. Binary operations return the
//! minimum of the input orders, so precision is tracked rather than assumed.

mod kernel;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use kernel::{ExactKernel, Kernel, ModKernel};

/// Largest modulus supported by the word-sized modular kernel.
pub const MAX_MODULUS: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch { left: Ring, right: Ring },
    #[error("constant term {value} is not a unit in {ring}")]
    NonUnitConstant { value: String, ring: Ring },
    #[error("modulus {0} out of range (expected 2 <= m <= 2^31)")]
    InvalidModulus(u64),
    #[error("residue {residue} must be smaller than the step {step}")]
    ResidueOutOfRange { residue: usize, step: usize },
    #[error("step must be positive")]
    ZeroStep,
    #[error("interleave needs at least one part")]
    EmptyInterleave,
    #[error("extraction q^({step}n+{residue}) needs order >= {residue}, series has order {order}")]
    OrderTooSmall { step: usize, residue: usize, order: usize },
}

/// A validated modulus `2 <= m <= 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(m: u64) -> Result<Self, SeriesError> {
        if (2..=MAX_MODULUS).contains(&m) {
            Ok(Modulus(m))
        } else {
            Err(SeriesError::InvalidModulus(m))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// Canonical representative of `x` in `[0, m)`.
    pub fn reduce(self, x: &BigInt) -> u64 {
        let m = BigInt::from(self.0);
        let r = ((x % &m) + &m) % &m;
        r.to_u64().expect("residue fits in u64")
    }

    pub fn reduce_i64(self, x: i64) -> u64 {
        x.rem_euclid(self.0 as i64) as u64
    }
}

impl TryFrom<u64> for Modulus {
    type Error = SeriesError;

    fn try_from(m: u64) -> Result<Self, Self::Error> {
        Modulus::new(m)
    }
}

impl From<Modulus> for u64 {
    fn from(m: Modulus) -> u64 {
        m.0
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Coefficient ring of a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ring {
    /// Arbitrary-precision integers.
    Exact,
    Modular(Modulus),
}

impl Ring {
    pub fn modular(m: u64) -> Result<Self, SeriesError> {
        Modulus::new(m).map(Ring::Modular)
    }

    pub fn modulus(self) -> Option<Modulus> {
        match self {
            Ring::Exact => None,
            Ring::Modular(m) => Some(m),
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Exact => write!(f, "Z"),
            Ring::Modular(m) => write!(f, "Z/{m}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    Exact(Vec<BigInt>),
    Modular(Modulus, Vec<u64>),
}

/// Truncated power series `sum_{n=0}^{N} c_n q^n`.
///
/// Equality via `==` is structural (same ring, same order, same coefficients).
/// Use [`Series::first_difference`] for the up-to-common-order comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    repr: Repr,
}

/// First index where two series disagree, with both values rendered.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub index: usize,
    pub left: String,
    pub right: String,
}

impl Series {
    pub fn zero(ring: Ring, order: usize) -> Self {
        match ring {
            Ring::Exact => Series::from_repr(Repr::Exact(vec![BigInt::zero(); order + 1])),
            Ring::Modular(m) => Series::from_repr(Repr::Modular(m, vec![0; order + 1])),
        }
    }

    pub fn one(ring: Ring, order: usize) -> Self {
        Series::monomial(ring, order, 0, 1)
    }

    /// `c * q^s` truncated at `order` (zero when `s > order`).
    pub fn monomial(ring: Ring, order: usize, s: usize, c: i64) -> Self {
        let mut out = Series::zero(ring, order);
        if s <= order {
            match &mut out.repr {
                Repr::Exact(v) => v[s] = BigInt::from(c),
                Repr::Modular(m, v) => v[s] = m.reduce_i64(c),
            }
        }
        out
    }

    /// Builds a series from integer coefficients; the order is `coeffs.len() - 1`.
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn from_ints(ring: Ring, coeffs: &[i64]) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        match ring {
            Ring::Exact => Series::from_repr(Repr::Exact(coeffs.iter().map(|&c| BigInt::from(c)).collect())),
            Ring::Modular(m) => {
                Series::from_repr(Repr::Modular(m, coeffs.iter().map(|&c| m.reduce_i64(c)).collect()))
            }
        }
    }

    /// # Panics
    /// If `coeffs` is empty.
    pub fn from_bigints(ring: Ring, coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        match ring {
            Ring::Exact => Series::from_repr(Repr::Exact(coeffs)),
            Ring::Modular(m) => Series::from_repr(Repr::Modular(m, coeffs.iter().map(|c| m.reduce(c)).collect())),
        }
    }

    fn from_repr(repr: Repr) -> Self {
        Series { repr }
    }

    pub fn ring(&self) -> Ring {
        match &self.repr {
            Repr::Exact(_) => Ring::Exact,
            Repr::Modular(m, _) => Ring::Modular(*m),
        }
    }

    pub fn order(&self) -> usize {
        match &self.repr {
            Repr::Exact(v) => v.len() - 1,
            Repr::Modular(_, v) => v.len() - 1,
        }
    }

    /// Coefficient of `q^n` as an integer (canonical representative when modular).
    ///
    /// # Panics
    /// If `n` exceeds the order.
    pub fn coeff(&self, n: usize) -> BigInt {
        match &self.repr {
            Repr::Exact(v) => v[n].clone(),
            Repr::Modular(_, v) => BigInt::from(v[n]),
        }
    }

    pub fn is_zero_at(&self, n: usize) -> bool {
        match &self.repr {
            Repr::Exact(v) => v[n].is_zero(),
            Repr::Modular(_, v) => v[n] == 0,
        }
    }

    pub fn coeffs(&self) -> Vec<BigInt> {
        (0..=self.order()).map(|n| self.coeff(n)).collect()
    }

    /// Number of nonzero coefficients.
    pub fn support_len(&self) -> usize {
        (0..=self.order()).filter(|&n| !self.is_zero_at(n)).count()
    }

    pub fn is_zero(&self) -> bool {
        self.support_len() == 0
    }

    /// Restricts to a smaller order; a larger `order` is clamped to the current one.
    pub fn truncate(&self, order: usize) -> Series {
        let order = order.min(self.order());
        match &self.repr {
            Repr::Exact(v) => Series::from_repr(Repr::Exact(v[..=order].to_vec())),
            Repr::Modular(m, v) => Series::from_repr(Repr::Modular(*m, v[..=order].to_vec())),
        }
    }

    fn check_ring(&self, other: &Series) -> Result<(), SeriesError> {
        if self.ring() == other.ring() {
            Ok(())
        } else {
            Err(SeriesError::RingMismatch { left: self.ring(), right: other.ring() })
        }
    }

    pub fn add(&self, other: &Series) -> Result<Series, SeriesError> {
        self.check_ring(other)?;
        let order = self.order().min(other.order());
        Ok(match (&self.repr, &other.repr) {
            (Repr::Exact(a), Repr::Exact(b)) => {
                Series::from_repr(Repr::Exact((0..=order).map(|n| &a[n] + &b[n]).collect()))
            }
            (Repr::Modular(m, a), Repr::Modular(_, b)) => {
                let k = ModKernel { m: m.get() };
                Series::from_repr(Repr::Modular(*m, (0..=order).map(|n| k.add(&a[n], &b[n])).collect()))
            }
            _ => unreachable!("rings checked above"),
        })
    }

    pub fn sub(&self, other: &Series) -> Result<Series, SeriesError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Series {
        match &self.repr {
            Repr::Exact(v) => Series::from_repr(Repr::Exact(v.iter().map(|c| -c).collect())),
            Repr::Modular(m, v) => {
                let k = ModKernel { m: m.get() };
                Series::from_repr(Repr::Modular(*m, v.iter().map(|c| k.sub(&0, c)).collect()))
            }
        }
    }

    pub fn scale(&self, c: &BigInt) -> Series {
        match &self.repr {
            Repr::Exact(v) => Series::from_repr(Repr::Exact(v.iter().map(|x| x * c).collect())),
            Repr::Modular(m, v) => {
                let k = ModKernel { m: m.get() };
                let c = m.reduce(c);
                Series::from_repr(Repr::Modular(*m, v.iter().map(|x| k.mul(x, &c)).collect()))
            }
        }
    }

    pub fn mul(&self, other: &Series) -> Result<Series, SeriesError> {
        self.check_ring(other)?;
        let order = self.order().min(other.order());
        Ok(match (&self.repr, &other.repr) {
            (Repr::Exact(a), Repr::Exact(b)) => Series::from_repr(Repr::Exact(kernel::mul(&ExactKernel, a, b, order))),
            (Repr::Modular(m, a), Repr::Modular(_, b)) => {
                Series::from_repr(Repr::Modular(*m, kernel::mul(&ModKernel { m: m.get() }, a, b, order)))
            }
            _ => unreachable!("rings checked above"),
        })
    }

    fn non_unit(&self) -> SeriesError {
        SeriesError::NonUnitConstant { value: self.coeff(0).to_string(), ring: self.ring() }
    }

    /// `self / den`, solved by the convolution recurrence in
    /// `O(N * support(den))`. The constant term of `den` must be a unit.
    pub fn div(&self, den: &Series) -> Result<Series, SeriesError> {
        self.check_ring(den)?;
        let order = self.order().min(den.order());
        let out = match (&self.repr, &den.repr) {
            (Repr::Exact(a), Repr::Exact(b)) => kernel::divide(&ExactKernel, a, b, order).map(Repr::Exact),
            (Repr::Modular(m, a), Repr::Modular(_, b)) => {
                kernel::divide(&ModKernel { m: m.get() }, a, b, order).map(|v| Repr::Modular(*m, v))
            }
            _ => unreachable!("rings checked above"),
        };
        out.map(Series::from_repr).ok_or_else(|| den.non_unit())
    }

    pub fn inverse(&self) -> Result<Series, SeriesError> {
        Series::one(self.ring(), self.order()).div(self)
    }

    /// Integer power by repeated squaring; negative exponents invert the result.
    pub fn pow(&self, e: i64) -> Result<Series, SeriesError> {
        if e < 0 && !self.has_unit_constant() {
            return Err(self.non_unit());
        }
        let order = self.order();
        let mag = e.unsigned_abs();
        let p = match &self.repr {
            Repr::Exact(a) => Series::from_repr(Repr::Exact(kernel::pow(&ExactKernel, a, mag, order))),
            Repr::Modular(m, a) => {
                Series::from_repr(Repr::Modular(*m, kernel::pow(&ModKernel { m: m.get() }, a, mag, order)))
            }
        };
        if e < 0 {
            p.inverse()
        } else {
            Ok(p)
        }
    }

    pub fn has_unit_constant(&self) -> bool {
        match &self.repr {
            Repr::Exact(v) => ExactKernel.unit_inverse(&v[0]).is_some(),
            Repr::Modular(m, v) => ModKernel { m: m.get() }.unit_inverse(&v[0]).is_some(),
        }
    }

    /// Substitutes `q -> q^t` at fixed order.
    ///
    /// # Panics
    /// If `t == 0`.
    pub fn inflate(&self, t: usize) -> Series {
        assert!(t >= 1, "inflation factor must be positive");
        let order = self.order();
        let mut out = Series::zero(self.ring(), order);
        for (i, n) in (0..=order).step_by(t).enumerate() {
            out.set(n, self, i);
        }
        out
    }

    /// Multiplies by `q^s`, keeping the order.
    pub fn shift(&self, s: usize) -> Series {
        let order = self.order();
        let mut out = Series::zero(self.ring(), order);
        for n in s..=order {
            out.set(n, self, n - s);
        }
        out
    }

    fn set(&mut self, n: usize, src: &Series, i: usize) {
        match (&mut self.repr, &src.repr) {
            (Repr::Exact(dst), Repr::Exact(v)) => dst[n] = v[i].clone(),
            (Repr::Modular(_, dst), Repr::Modular(_, v)) => dst[n] = v[i],
            _ => unreachable!("set is only used between series of one ring"),
        }
    }

    /// `result[n] = self[step * n + residue]`.
    pub fn extract(&self, step: usize, residue: usize) -> Result<Series, SeriesError> {
        if step == 0 {
            return Err(SeriesError::ZeroStep);
        }
        if residue >= step {
            return Err(SeriesError::ResidueOutOfRange { residue, step });
        }
        if residue > self.order() {
            return Err(SeriesError::OrderTooSmall { step, residue, order: self.order() });
        }
        let order = (self.order() - residue) / step;
        let mut out = Series::zero(self.ring(), order);
        for n in 0..=order {
            out.set(n, self, step * n + residue);
        }
        Ok(out)
    }

    /// Inverse of [`Series::extract`]: `result[m n + r] = parts[r][n]`.
    ///
    /// The result order is the largest `M` such that every index `<= M` is
    /// covered by some part.
    pub fn interleave(parts: &[Series]) -> Result<Series, SeriesError> {
        let first = parts.first().ok_or(SeriesError::EmptyInterleave)?;
        for p in parts {
            first.check_ring(p)?;
        }
        let m = parts.len();
        let order = parts
            .iter()
            .enumerate()
            .map(|(r, p)| m * (p.order() + 1) + r - 1)
            .min()
            .expect("parts is nonempty");
        let mut out = Series::zero(first.ring(), order);
        for n in 0..=order {
            out.set(n, &parts[n % m], n / m);
        }
        Ok(out)
    }

    /// Reduces an exact series modulo `m`. A modular series is reduced
    /// further, which is only meaningful when `m` divides its modulus.
    pub fn reduce_mod(&self, m: Modulus) -> Series {
        match &self.repr {
            Repr::Exact(v) => Series::from_repr(Repr::Modular(m, v.iter().map(|c| m.reduce(c)).collect())),
            Repr::Modular(_, v) => Series::from_repr(Repr::Modular(m, v.iter().map(|c| c % m.get()).collect())),
        }
    }

    /// Compares coefficient-wise up to the smaller order.
    pub fn first_difference(&self, other: &Series) -> Result<Option<Mismatch>, SeriesError> {
        self.check_ring(other)?;
        let order = self.order().min(other.order());
        Ok((0..=order).find(|&n| self.coeff(n) != other.coeff(n)).map(|n| Mismatch {
            index: n,
            left: self.coeff(n).to_string(),
            right: other.coeff(n).to_string(),
        }))
    }

    pub fn agrees_with(&self, other: &Series) -> Result<bool, SeriesError> {
        Ok(self.first_difference(other)?.is_none())
    }

    /// Coefficients rendered as signed integers (exact) or canonical
    /// representatives (modular).
    pub fn render_coeffs(&self) -> Vec<String> {
        (0..=self.order()).map(|n| self.coeff(n).to_string()).collect()
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] + O(q^{}) over {}", self.render_coeffs().join(", "), self.order() + 1, self.ring())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(coeffs: &[i64]) -> Series {
        Series::from_ints(Ring::Exact, coeffs)
    }

    fn ints(s: &Series) -> Vec<i64> {
        s.coeffs().iter().map(|c| c.to_i64().unwrap()).collect()
    }

    #[test]
    fn add_truncates_to_min_order() {
        assert_eq!(ints(&z(&[1, 2]).add(&z(&[3, 4, 5])).unwrap()), vec![4, 6]);
        let s = z(&[1, -2, 3]);
        assert_eq!(s.add(&Series::zero(Ring::Exact, 2)).unwrap(), s);
    }

    #[test]
    fn modular_add_wraps() {
        let r = Ring::modular(5).unwrap();
        let s = Series::from_ints(r, &[4]).add(&Series::from_ints(r, &[3])).unwrap();
        assert_eq!(ints(&s), vec![2]);
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let a = z(&[1]);
        let b = Series::from_ints(Ring::modular(3).unwrap(), &[1]);
        assert!(matches!(a.add(&b), Err(SeriesError::RingMismatch { .. })));
        assert!(matches!(a.mul(&b), Err(SeriesError::RingMismatch { .. })));
    }

    #[test]
    fn mul_small_cases() {
        assert_eq!(ints(&z(&[1, 1, 0]).mul(&z(&[1, -1, 0])).unwrap()), vec![1, 0, -1]);
        let s = z(&[2, -1, 7, 3]);
        assert_eq!(s.mul(&Series::one(Ring::Exact, 3)).unwrap(), s);
    }

    #[test]
    fn inverse_of_one_minus_q_is_geometric() {
        let inv = z(&[1, -1, 0, 0, 0, 0]).inverse().unwrap();
        assert_eq!(ints(&inv), vec![1; 6]);
        assert_eq!(inv.inverse().unwrap(), z(&[1, -1, 0, 0, 0, 0]));
    }

    #[test]
    fn inverse_rejects_non_units() {
        assert!(matches!(z(&[2, 1]).inverse(), Err(SeriesError::NonUnitConstant { .. })));
        assert!(matches!(z(&[0, 1]).pow(-1), Err(SeriesError::NonUnitConstant { .. })));
        let r = Ring::modular(9).unwrap();
        assert!(Series::from_ints(r, &[3, 1]).inverse().is_err());
        // 2 is a unit mod 9
        let s = Series::from_ints(r, &[2, 1, 4]);
        assert!(s.mul(&s.inverse().unwrap()).unwrap().agrees_with(&Series::one(r, 2)).unwrap());
    }

    #[test]
    fn pow_edge_cases() {
        let s = z(&[1, 3, -2, 5]);
        assert_eq!(s.pow(0).unwrap(), Series::one(Ring::Exact, 3));
        assert_eq!(s.pow(1).unwrap(), s);
        // (q;q)_inf^3 = sum (-1)^n (2n+1) q^{n(n+1)/2} (Jacobi)
        let euler = z(&[1, -1, -1, 0, 0, 1, 0, 1]);
        assert_eq!(ints(&euler.pow(3).unwrap()), vec![1, -3, 0, 5, 0, 0, -7, 0]);
    }

    #[test]
    fn inflate_and_shift() {
        assert_eq!(z(&[1, 2, 3]).inflate(1), z(&[1, 2, 3]));
        assert_eq!(ints(&z(&[1, 2, 0, 0, 0, 0, 0]).inflate(3)), vec![1, 0, 0, 2, 0, 0, 0]);
        let s = z(&[5, 6, 7]);
        assert_eq!(s.shift(0), s);
        assert_eq!(ints(&z(&[1, 1, 0, 0]).shift(2)), vec![0, 0, 1, 1]);
        let one = Series::one(Ring::Exact, 7);
        assert_eq!(ints(&one.inverse().unwrap().shift(5)), vec![0, 0, 0, 0, 0, 1, 0, 0]);
    }

    #[test]
    fn extract_reindexes() {
        let s = z(&[10, 11, 12, 13, 14, 15, 16]);
        assert_eq!(s.extract(1, 0).unwrap(), s);
        assert_eq!(ints(&s.extract(2, 1).unwrap()), vec![11, 13, 15]);
        assert_eq!(s.extract(3, 2).unwrap().order(), 1);
        assert!(matches!(s.extract(3, 3), Err(SeriesError::ResidueOutOfRange { .. })));
        assert!(matches!(s.extract(0, 0), Err(SeriesError::ZeroStep)));
    }

    #[test]
    fn interleave_cases() {
        let s = z(&[4, 5, 6]);
        assert_eq!(Series::interleave(std::slice::from_ref(&s)).unwrap(), s);
        assert_eq!(ints(&Series::interleave(&[z(&[1, 1]), z(&[2, 2])]).unwrap()), vec![1, 2, 1, 2]);
        assert!(matches!(Series::interleave(&[]), Err(SeriesError::EmptyInterleave)));
        let long = z(&[0, 1, 2, 3, 4, 5, 6, 7]);
        let parts: Vec<_> = (0..3).map(|r| long.extract(3, r).unwrap()).collect();
        assert_eq!(Series::interleave(&parts).unwrap(), long);
    }

    #[test]
    fn reduce_mod_is_canonical() {
        let m = Modulus::new(27).unwrap();
        assert_eq!(ints(&z(&[9, -9, 27]).reduce_mod(m)), vec![9, 18, 0]);
        assert_eq!(z(&[9, -9]).reduce_mod(m).render_coeffs(), vec!["9", "18"]);
        assert_eq!(z(&[-4]).render_coeffs(), vec!["-4"]);
    }

    #[test]
    fn modulus_bounds() {
        assert!(Modulus::new(1).is_err());
        assert!(Modulus::new(2).is_ok());
        assert!(Modulus::new(MAX_MODULUS).is_ok());
        assert!(Modulus::new(MAX_MODULUS + 1).is_err());
    }

    #[test]
    fn first_difference_reports_values() {
        let d = z(&[1, 2, 3]).first_difference(&z(&[1, 2, 4, 9])).unwrap().unwrap();
        assert_eq!(d, Mismatch { index: 2, left: "3".into(), right: "4".into() });
        assert!(z(&[1, 2]).first_difference(&z(&[1, 2, 4])).unwrap().is_none());
    }
}
