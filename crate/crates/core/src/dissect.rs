//! Identity verification, the `p`-dissection of `f(-q) = (q;q)_inf`, and
//! residue-support analysis.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{is_prime, signed_sixth};
use crate::etalang::{eta_series, Catalog, EtaExpr, EtaMonomial, IdentityRecord};
use crate::series::{Mismatch, Ring, Series, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DissectError {
    #[error("p = {0} must be a prime >= 5")]
    BadPrime(u64),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Outcome of comparing two series to a fixed order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Verdict {
    Equal,
    Mismatch(Mismatch),
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Verdict::Equal)
    }

    fn from_diff(diff: Option<Mismatch>) -> Self {
        diff.map_or(Verdict::Equal, Verdict::Mismatch)
    }
}

/// Structured record for one verified identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub name: String,
    pub order: usize,
    pub ring: String,
    pub verdict: Verdict,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.verdict.is_equal()
    }
}

/// Evaluates both sides in the record's ring to `order` and compares them.
pub fn verify_identity(rec: &IdentityRecord, order: usize) -> Result<IdentityReport, SeriesError> {
    let ring = rec.ring();
    let lhs = rec.lhs.eval(order, ring)?;
    let rhs = rec.rhs.eval(order, ring)?;
    Ok(IdentityReport {
        name: rec.name.clone(),
        order,
        ring: ring.to_string(),
        verdict: Verdict::from_diff(lhs.first_difference(&rhs)?),
    })
}

/// Verifies every record (or just `only`), in parallel, sorted by name.
pub fn verify_catalog(
    catalog: &Catalog,
    order: usize,
    only: Option<&str>,
) -> Result<Vec<IdentityReport>, SeriesError> {
    let selected: Vec<&IdentityRecord> =
        catalog.records().iter().filter(|r| only.is_none_or(|n| r.name == n)).collect();
    let mut reports = selected
        .par_iter()
        .map(|r| verify_identity(r, order))
        .collect::<Result<Vec<_>, _>>()?;
    reports.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(reports)
}

/// Residues `r mod m` that carry at least one nonzero coefficient.
///
/// # Panics
/// If `m == 0`.
pub fn residue_support(s: &Series, m: usize) -> BTreeSet<usize> {
    assert!(m >= 1, "residue modulus must be positive");
    (0..=s.order()).filter(|&n| !s.is_zero_at(n)).map(|n| n % m).collect()
}

/// One non-principal summand `(-1)^k q^{(3k^2+k)/2} f(-q^A, -q^B)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PSummand {
    pub k: i64,
    pub exponent: u64,
    pub theta_a: u64,
    pub theta_b: u64,
}

impl PSummand {
    pub fn sign(&self) -> i64 {
        if self.k.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }
}

/// The `p`-dissection
/// `f(-q) = s q^{(p^2-1)/24} f(-q^{p^2}) + sum_k (-1)^k q^{(3k^2+k)/2} f(-q^{A_k}, -q^{B_k})`
/// with `A_k = (3p^2 + (6k+1)p)/2`, `B_k = (3p^2 - (6k+1)p)/2`, `|k| <= (p-1)/2`
/// and `k != (+-p - 1)/6`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PDissection {
    pub p: u64,
    pub principal_exponent: u64,
    pub principal_sign: i64,
    pub excluded_k: i64,
    pub summands: Vec<PSummand>,
}

impl PDissection {
    /// The whole right-hand side as an expression.
    pub fn to_expr(&self) -> EtaExpr {
        let principal = EtaMonomial::eta(self.p * self.p, 1)
            .with_coeff(self.principal_sign)
            .with_shift(self.principal_exponent as usize);
        let rest = self.summands.iter().map(|s| {
            EtaMonomial::theta(s.theta_a, s.theta_b).with_coeff(s.sign()).with_shift(s.exponent as usize)
        });
        EtaExpr::from_terms(std::iter::once(principal).chain(rest))
    }

    pub fn principal_residue(&self) -> u64 {
        self.principal_exponent % self.p
    }

    /// Summand exponents reduced mod `p`, in summand order.
    pub fn summand_residues(&self) -> Vec<u64> {
        self.summands.iter().map(|s| s.exponent % self.p).collect()
    }

    /// No summand exponent is congruent to the principal exponent mod `p`.
    pub fn side_claim_holds(&self) -> bool {
        let r = self.principal_residue();
        self.summand_residues().iter().all(|&x| x != r)
    }
}

pub fn build_pdissection(p: u64) -> Result<PDissection, DissectError> {
    if p < 5 || !is_prime(p) {
        return Err(DissectError::BadPrime(p));
    }
    let excluded_k = signed_sixth(p);
    let half = ((p - 1) / 2) as i64;
    let pi = p as i64;
    let summands = (-half..=half)
        .filter(|&k| k != excluded_k)
        .map(|k| {
            let t = (6 * k + 1) * pi;
            PSummand {
                k,
                exponent: ((3 * k * k + k) / 2) as u64,
                theta_a: ((3 * pi * pi + t) / 2) as u64,
                theta_b: ((3 * pi * pi - t) / 2) as u64,
            }
        })
        .collect();
    Ok(PDissection {
        p,
        principal_exponent: (p * p - 1) / 24,
        principal_sign: if excluded_k.rem_euclid(2) == 0 { 1 } else { -1 },
        excluded_k,
        summands,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PDissectionReport {
    pub p: u64,
    pub order: usize,
    pub dissection: PDissection,
    /// The full dissection against `f(-q)`.
    pub verdict: Verdict,
    pub side_claim_holds: bool,
    /// `sum_n f(-q)[p n + r] q^n` against `s q^{(e - r)/p} f(-q^p)` for the
    /// principal residue `r = e mod p`.
    pub principal_extraction: Verdict,
}

impl PDissectionReport {
    pub fn passed(&self) -> bool {
        self.verdict.is_equal() && self.side_claim_holds && self.principal_extraction.is_equal()
    }
}

pub fn verify_pdissection(p: u64, order: usize) -> Result<PDissectionReport, DissectError> {
    let d = build_pdissection(p)?;
    let euler = eta_series(1, order, Ring::Exact);
    let rhs = d.to_expr().eval(order, Ring::Exact);
    let verdict = Verdict::from_diff(euler.first_difference(&rhs)?);

    let r = d.principal_residue();
    let principal_extraction = if (r as usize) <= order {
        let extracted = euler.extract(p as usize, r as usize)?;
        let shift = ((d.principal_exponent - r) / p) as usize;
        let expected = EtaExpr::from(EtaMonomial::eta(p, 1).with_coeff(d.principal_sign).with_shift(shift))
            .eval(extracted.order(), Ring::Exact);
        Verdict::from_diff(extracted.first_difference(&expected)?)
    } else {
        Verdict::Equal
    };

    Ok(PDissectionReport {
        p,
        order,
        side_claim_holds: d.side_claim_holds(),
        dissection: d,
        verdict,
        principal_extraction,
    })
}
