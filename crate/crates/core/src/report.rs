//! JSON report shapes shared by the CLI and the FFI surface. Rationals are
//! serialized as {num, den} strings so no consumer ever rounds them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;

use crate::bounds::{BoundReport, TotalBoundReport};
use crate::families::{FamilyClassification, MatchingFamily, SearchResult, VerifyOutcome};

#[derive(Debug, Clone, Serialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

impl From<&BigRational> for RationalJson {
    fn from(r: &BigRational) -> Self {
        Self {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}

/// Truncated decimal rendering with a fixed number of fractional digits.
pub fn decimal_string(r: &BigRational, digits: u32) -> String {
    let sign = if r.is_negative() { "-" } else { "" };
    let abs = r.abs();
    let scale = BigInt::from(10u8).pow(digits);
    let scaled = (abs * BigRational::from_integer(scale.clone())).floor();
    let scaled = scaled.to_integer();
    let whole = &scaled / &scale;
    let frac = &scaled % &scale;
    format!("{sign}{whole}.{frac:0>width$}", width = digits as usize)
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReportJson {
    pub n: u32,
    pub p: u64,
    pub q: u64,
    pub x: u64,
    pub kappa_p: u64,
    pub kappa_q: u64,
    pub delta: RationalJson,
    pub psi_upper: RationalJson,
    pub expanding_lower: RationalJson,
    pub family_bound: RationalJson,
    pub total_bound: RationalJson,
    pub baseline_dvir: String,
    /// family_bound / m^(0.625 n + 0.125), truncated to twelve decimal
    /// digits (computed from a 64-fractional-bit fixed point).
    pub ratio_to_target: String,
}

pub fn bound_report_json(report: &BoundReport, total: &TotalBoundReport) -> BoundReportJson {
    BoundReportJson {
        n: report.n,
        p: report.p,
        q: report.q,
        x: report.x,
        kappa_p: report.kappa_p,
        kappa_q: report.kappa_q,
        delta: (&report.delta).into(),
        psi_upper: (&report.psi_upper).into(),
        expanding_lower: (&report.expanding_lower).into(),
        family_bound: (&report.family_bound).into(),
        total_bound: (&total.total).into(),
        baseline_dvir: total.baseline_dvir.to_string(),
        ratio_to_target: decimal_string(&total.ratio_to_target, 12),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassLineJson {
    pub s: u64,
    pub t: u64,
    pub count: u64,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReportJson {
    pub ok: bool,
    pub k: usize,
    pub m: u64,
    pub n: u32,
    pub violations: Vec<crate::families::Violation>,
    pub classes: Vec<ClassLineJson>,
    pub lemma_violations: Vec<(u64, u64)>,
}

pub fn verify_report_json(
    fam: &MatchingFamily,
    outcome: &VerifyOutcome,
    classes: &FamilyClassification,
) -> VerifyReportJson {
    VerifyReportJson {
        ok: outcome.ok,
        k: fam.len(),
        m: fam.modulus().value(),
        n: fam.dimension(),
        violations: outcome.violations.clone(),
        classes: classes
            .members
            .iter()
            .map(|(&(s, t), members)| ClassLineJson {
                s,
                t,
                count: members.len() as u64,
                members: members.clone(),
            })
            .collect(),
        lemma_violations: classes.lemma_violations.clone(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchReportJson {
    pub m: u64,
    pub n: u32,
    pub k_max: usize,
    pub witness: serde_json::Value,
    pub stats: crate::families::SearchStats,
    pub conventions: Vec<String>,
}

pub fn search_report_json(m: u64, n: u32, result: &SearchResult) -> SearchReportJson {
    SearchReportJson {
        m,
        n,
        k_max: result.k_max,
        witness: result.witness.to_json(),
        stats: result.stats.clone(),
        conventions: result.conventions.clone(),
    }
}
