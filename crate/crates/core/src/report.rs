//! Run reports emitted by the CLI, as JSON or as plain text.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::congruence::{exact_cross_check, ClaimOrigin, ClaimStatus, CongruenceClaim, QuadraticReport};
use crate::dissect::{IdentityReport, PDissectionReport, Verdict};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Serialized form of a checked claim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimRecord {
    pub name: String,
    pub gf: String,
    pub a: u64,
    pub b: u64,
    pub start: u64,
    pub m: u64,
    pub status: ClaimStatus,
    pub terms_checked: u64,
    pub origin: ClaimOrigin,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_cross_check: Option<bool>,
}

impl ClaimRecord {
    pub fn from_claim(c: &CongruenceClaim, exact_bound: Option<u64>) -> Self {
        ClaimRecord {
            name: c.label(),
            gf: c.gf.to_string(),
            a: c.a,
            b: c.b,
            start: c.start,
            m: c.m.get(),
            status: c.status,
            terms_checked: c.terms_checked,
            origin: c.origin.clone(),
            exact_cross_check: exact_bound.map(|n| exact_cross_check(c, n)),
        }
    }

    pub fn passed(&self) -> bool {
        matches!(self.status, ClaimStatus::VerifiedUpTo { .. }) && self.exact_cross_check != Some(false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleComparison {
    pub upto: u64,
    pub values: Vec<String>,
    /// First `n` where the DP and the convolution oracle disagree.
    pub convolution_mismatch: Option<u64>,
    /// First `n` where the DP and the series expansion disagree.
    pub series_mismatch: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Item {
    Coefficients { gf: String, ring: String, values: Vec<String> },
    Identity(IdentityReport),
    PDissection(PDissectionReport),
    Claim(ClaimRecord),
    Quadratic(QuadraticReport),
    Oracle(OracleComparison),
}

impl Item {
    pub fn passed(&self) -> bool {
        match self {
            Item::Coefficients { .. } => true,
            Item::Identity(r) => r.passed(),
            Item::PDissection(r) => r.passed(),
            Item::Claim(c) => c.passed(),
            Item::Quadratic(q) => q.consistent(),
            Item::Oracle(o) => o.convolution_mismatch.is_none() && o.series_mismatch.is_none(),
        }
    }

    fn render(&self, out: &mut String) {
        let mark = if self.passed() { "ok  " } else { "FAIL" };
        match self {
            Item::Coefficients { values, .. } => {
                let _ = writeln!(out, "{}", values.join(" "));
            }
            Item::Identity(r) => {
                let _ = writeln!(out, "{mark} {} [{} to order {}] {}", r.name, r.ring, r.order, verdict_text(&r.verdict));
            }
            Item::PDissection(r) => {
                let _ = writeln!(
                    out,
                    "{mark} p = {}: {} summands, principal q^{} (sign {:+}), dissection {}, side claim {}, principal extraction {}",
                    r.p,
                    r.dissection.summands.len(),
                    r.dissection.principal_exponent,
                    r.dissection.principal_sign,
                    verdict_text(&r.verdict),
                    if r.side_claim_holds { "holds" } else { "FAILS" },
                    verdict_text(&r.principal_extraction),
                );
            }
            Item::Claim(c) => {
                let status = match c.status {
                    ClaimStatus::Unchecked => "unchecked".to_string(),
                    ClaimStatus::VerifiedUpTo { bound } => format!("verified to {bound} ({} terms)", c.terms_checked),
                    ClaimStatus::RefutedAt { n } => format!("refuted at argument {n}"),
                };
                let exact = match c.exact_cross_check {
                    None => String::new(),
                    Some(true) => ", exact cross-check ok".to_string(),
                    Some(false) => ", exact cross-check FAILED".to_string(),
                };
                let _ = writeln!(out, "{mark} {} {status}{exact}", c.name);
            }
            Item::Quadratic(q) => {
                let sols: Vec<String> = q.solutions.iter().map(|(k, m)| format!("({k},{m})")).collect();
                let _ = writeln!(
                    out,
                    "{mark} p = {} (-3/p) = {:+}: {} solution(s) {}",
                    q.p,
                    q.legendre_minus3,
                    q.solutions.len(),
                    sols.join(" ")
                );
            }
            Item::Oracle(o) => {
                let _ = writeln!(out, "{}", o.values.join(" "));
                let _ = writeln!(
                    out,
                    "{mark} dp vs convolution: {}, dp vs series: {}",
                    mismatch_text(o.convolution_mismatch),
                    mismatch_text(o.series_mismatch)
                );
            }
        }
    }
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Equal => "equal".to_string(),
        Verdict::Mismatch(m) => format!("MISMATCH at q^{}: {} vs {}", m.index, m.left, m.right),
    }
}

fn mismatch_text(m: Option<u64>) -> String {
    m.map_or("agree".to_string(), |n| format!("differ at n = {n}"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub version: String,
    pub ring: String,
    pub order: u64,
    pub items: Vec<Item>,
    pub duration_ms: u64,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(Item::passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let bare = self.items.iter().all(|i| matches!(i, Item::Coefficients { .. }));
        if !bare {
            let _ = writeln!(out, "# {} (qdissect {}, {}, order {})", self.command, self.version, self.ring, self.order);
        }
        for item in &self.items {
            item.render(&mut out);
        }
        if !bare {
            let failed = self.items.iter().filter(|i| !i.passed()).count();
            let _ = writeln!(out, "# {} item(s), {failed} failed, {} ms", self.items.len(), self.duration_ms);
        }
        out
    }
}
