//! Identity catalogs.
//!
//! One identity per line, fields separated by `|`:
//!
//! ```text
//! name | lhs | rhs | modulus | source
//! ```
//!
//! The modulus field may be left empty (or the field omitted entirely) for
//! an exact identity. Blank lines and lines starting with `#` are ignored.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::{parse_side, EtaExpr, Evaluator, ParseError};
use crate::series::{Modulus, Ring, Series, SeriesError};

/// The catalog shipped with the crate.
pub const DEFAULT_CATALOG: &str = include_str!("../../catalog/default.qcat");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("line {line}: expected 4 or 5 '|'-separated fields, found {found}")]
    FieldCount { line: usize, found: usize },
    #[error("line {line}: empty identity name")]
    EmptyName { line: usize },
    #[error("line {line}: duplicate identity name {name:?}")]
    DuplicateName { line: usize, name: String },
    #[error("line {line}, {side}: {source}")]
    Expression { line: usize, side: &'static str, source: ParseError },
    #[error("line {line}: invalid modulus {text:?}")]
    Modulus { line: usize, text: String },
}

/// One side of an identity: an expression, optionally followed by the
/// extraction `sum_n c(m n + r) q^n` of its coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SideExpr {
    expr: EtaExpr,
    extraction: Option<(usize, usize)>,
}

impl SideExpr {
    pub fn plain(expr: EtaExpr) -> Self {
        SideExpr { expr, extraction: None }
    }

    /// # Panics
    /// If `residue >= step`.
    pub fn extracted(expr: EtaExpr, step: usize, residue: usize) -> Self {
        assert!(residue < step, "extraction residue must be below the step");
        SideExpr { expr, extraction: Some((step, residue)) }
    }

    pub fn expr(&self) -> &EtaExpr {
        &self.expr
    }

    pub fn extraction(&self) -> Option<(usize, usize)> {
        self.extraction
    }

    /// Order the inner expression must be evaluated to for a result of `order`.
    pub fn inner_order(&self, order: usize) -> usize {
        match self.extraction {
            None => order,
            Some((m, r)) => m * order + r,
        }
    }

    pub fn eval(&self, order: usize, ring: Ring) -> Result<Series, SeriesError> {
        let inner = self.inner_order(order);
        self.eval_with(&mut Evaluator::new(ring, inner))
    }

    /// Evaluates with a caller-owned evaluator, whose order must equal
    /// `inner_order` of the wanted result order.
    pub fn eval_with(&self, ev: &mut Evaluator) -> Result<Series, SeriesError> {
        let s = ev.eval(&self.expr);
        match self.extraction {
            None => Ok(s),
            Some((m, r)) => s.extract(m, r),
        }
    }
}

impl fmt::Display for SideExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.extraction {
            None => write!(f, "{}", self.expr),
            Some((m, r)) => write!(f, "extract({}, {m}, {r})", self.expr),
        }
    }
}

/// A named identity `lhs = rhs`, exact or modulo `modulus`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityRecord {
    pub name: String,
    pub lhs: SideExpr,
    pub rhs: SideExpr,
    pub modulus: Option<Modulus>,
    pub source: String,
}

impl IdentityRecord {
    pub fn ring(&self) -> Ring {
        self.modulus.map_or(Ring::Exact, Ring::Modular)
    }

    pub fn swapped(&self) -> IdentityRecord {
        IdentityRecord { lhs: self.rhs.clone(), rhs: self.lhs.clone(), ..self.clone() }
    }

    pub fn render(&self) -> String {
        let modulus = self.modulus.map(|m| m.to_string()).unwrap_or_default();
        format!("{} | {} | {} | {} | {}", self.name, self.lhs, self.rhs, modulus, self.source)
    }
}

/// An ordered collection of identities with unique names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    records: Vec<IdentityRecord>,
}

impl Catalog {
    pub fn parse(text: &str) -> Result<Catalog, CatalogError> {
        let mut records = Vec::new();
        let mut names = BTreeSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split('|').map(str::trim).collect();
            let (name, lhs, rhs, modulus, source) = match fields[..] {
                [n, l, r, m, s] => (n, l, r, m, s),
                [n, l, r, s] => (n, l, r, "", s),
                _ => return Err(CatalogError::FieldCount { line, found: fields.len() }),
            };
            if name.is_empty() {
                return Err(CatalogError::EmptyName { line });
            }
            if !names.insert(name.to_string()) {
                return Err(CatalogError::DuplicateName { line, name: name.to_string() });
            }
            let lhs = parse_side(lhs).map_err(|source| CatalogError::Expression { line, side: "lhs", source })?;
            let rhs = parse_side(rhs).map_err(|source| CatalogError::Expression { line, side: "rhs", source })?;
            let modulus = if modulus.is_empty() {
                None
            } else {
                let m = modulus
                    .parse::<u64>()
                    .ok()
                    .and_then(|m| Modulus::new(m).ok())
                    .ok_or_else(|| CatalogError::Modulus { line, text: modulus.to_string() })?;
                Some(m)
            };
            records.push(IdentityRecord { name: name.to_string(), lhs, rhs, modulus, source: source.to_string() });
        }
        Ok(Catalog { records })
    }

    pub fn builtin() -> Catalog {
        Catalog::parse(DEFAULT_CATALOG).expect("shipped catalog parses")
    }

    pub fn records(&self) -> &[IdentityRecord] {
        &self.records
    }

    pub fn get(&self, name: &str) -> Option<&IdentityRecord> {
        self.records.iter().find(|r| r.name == name)
    }

    pub fn render(&self) -> String {
        self.records.iter().map(|r| r.render() + "\n").collect()
    }
}
