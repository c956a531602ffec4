//! JSON report records. Every float is finite: non-finite residuals are
//! written as `f64::MAX` and the owning verdict is a failure.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catalog::Row;
use crate::factory::CaseTag;

pub const SCHEMA: &str = "polyharmonia/1";

/// `[re, im]`.
pub type Pair = [f64; 2];

pub fn finite(x: f64) -> f64 {
    if x.is_finite() {
        x
    } else {
        f64::MAX
    }
}

pub fn pair(z: Complex64) -> Pair {
    [finite(z.re), finite(z.im)]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    /// Fail dominates inconclusive, which dominates pass.
    pub fn combine<I: IntoIterator<Item = Verdict>>(verdicts: I) -> Verdict {
        verdicts
            .into_iter()
            .fold(Verdict::Pass, |acc, v| match (acc, v) {
                (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
                (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
                _ => Verdict::Pass,
            })
    }

    /// Process exit code for a campaign whose overall verdict is `self`.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 2,
            Verdict::Inconclusive => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyRecord {
    pub group: String,
    pub row: Row,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub a: Vec<Pair>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub v: Vec<Pair>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub u: Vec<Pair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mat_a: Option<Vec<Vec<Pair>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mat_b: Option<Vec<Vec<Pair>>>,
    pub lambda: Pair,
    pub mu: Pair,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisRecord {
    pub group: String,
    pub dim: usize,
    pub gram_residual: f64,
    /// Worst membership residual of `exp(0.1 X_i)` over the basis.
    pub max_exp_membership: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenRecord {
    pub family: FamilyRecord,
    pub samples: usize,
    pub tol: f64,
    pub max_e_tau: f64,
    pub max_e_kappa: f64,
    pub condition_residual: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicRecord {
    pub family: FamilyRecord,
    pub r: usize,
    pub case: CaseTag,
    pub c1: Pair,
    pub c2: Pair,
    pub samples: usize,
    pub accepted: usize,
    /// Largest `|τʳ Φ_r|` over accepted points.
    pub max_zero_residual: f64,
    /// Largest `|τ^{r-1} Φ_r|` over accepted points.
    pub max_lower: f64,
    /// Largest `ε·Σ|term|` of the τʳ tuple sums; residuals below it are
    /// rounding noise.
    pub max_rounding_floor: f64,
    /// Share of accepted points with `|τ^{r-1} Φ_r| > tol_nonzero`.
    pub properness_fraction: f64,
    pub tol_zero: f64,
    pub tol_nonzero: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OdeRecord {
    pub lambda: Pair,
    pub mu: Pair,
    pub case: CaseTag,
    pub r: usize,
    pub c1: Pair,
    pub c2: Pair,
    pub centers: usize,
    pub max_zero_residual: f64,
    pub properness_fraction: f64,
    pub verdict: Verdict,
}
