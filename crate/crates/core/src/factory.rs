//! Proper r-harmonic functions `Φ_r = f_r ∘ φ` built from an eigenfunction φ.
//!
//! With `τ(φ) = λφ` and `κ(φ, φ) = μφ²` the chain rule gives
//! `τ(f ∘ φ) = (L f) ∘ φ` for the Euler-type operator `L = μz²d² + λz d`, so
//! `Φ_r` is r-harmonic exactly when `Lʳ f_r = 0`. The solutions are
//!
//! | case            | `f_r(z)`                                          |
//! |-----------------|---------------------------------------------------|
//! | μ = 0, λ ≠ 0    | `c₁ log(z)^{r-1}`                                 |
//! | μ ≠ 0, λ = μ    | `c₁ log(z)^{2r-1} + c₂ log(z)^{2r-2}`             |
//! | μ ≠ 0, λ ≠ μ    | `c₁ z^{1-λ/μ} log(z)^{r-1} + c₂ log(z)^{r-1}`     |
//!
//! with the principal logarithm, so `Φ_r` lives on the open set where φ
//! avoids `(-∞, 0]`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::calculus::{
    iterated_laplacian, iterated_laplacian_terms, ScalarField, DEFAULT_MAX_ORDER,
};
use crate::catalog::{make_eigenfunction, EigenFamily, Eigenfunction, Sampling};
use crate::error::{Error, Result};
use crate::groups::{algebra_basis, random_point, AlgebraBasis, CMatrix};
use crate::report::{finite, pair, HarmonicRecord, Verdict};
use crate::taylor::{JetMatrix, JetScalar};

/// Tolerance for the `μ = 0` and `λ = μ` dispatch tests.
pub const CASE_TOL: f64 = 1e-12;
/// Points whose φ-value is this close to the cut are treated as outside W.
pub const DEFAULT_MARGIN: f64 = 1e-6;
/// Resampling attempts per sample point before giving up on it.
pub const MAX_RETRIES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    MuZero,
    LambdaEqMu,
    Generic,
}

/// Which solution branch applies to `(λ, μ)`.
pub fn classify(lambda: Complex64, mu: Complex64) -> Result<CaseTag> {
    let mu_zero = mu.norm() <= CASE_TOL;
    if mu_zero && lambda.norm() <= CASE_TOL {
        return Err(Error::UnsupportedCase("λ = μ = 0".into()));
    }
    Ok(if mu_zero {
        CaseTag::MuZero
    } else if (lambda - mu).norm() <= CASE_TOL {
        CaseTag::LambdaEqMu
    } else {
        CaseTag::Generic
    })
}

/// A holomorphic solution `f_r` on the slit plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolomorphicCase {
    pub case: CaseTag,
    pub r: usize,
    pub c1: Complex64,
    pub c2: Complex64,
    pub lambda: Complex64,
    pub mu: Complex64,
}

impl HolomorphicCase {
    pub fn new(
        lambda: Complex64,
        mu: Complex64,
        r: usize,
        c1: Complex64,
        c2: Complex64,
    ) -> Result<Self> {
        let case = classify(lambda, mu)?;
        let zero = Complex64::new(0.0, 0.0);
        if r == 0 {
            return Err(Error::UnsupportedOrder {
                order: 0,
                ceiling: 0,
            });
        }
        if c1 == zero && c2 == zero {
            return Err(Error::InadmissibleConstants("(c1, c2) = (0, 0)".into()));
        }
        // c2 does not enter the μ = 0 branch, so c1 carries the whole function
        if case == CaseTag::MuZero && c1 == zero {
            return Err(Error::InadmissibleConstants(
                "c1 = 0 makes the μ = 0 solution vanish".into(),
            ));
        }
        Ok(Self {
            case,
            r,
            c1,
            c2,
            lambda,
            mu,
        })
    }

    /// `1 - λ/μ`, the nonzero indicial root in the generic case.
    pub fn exponent(&self) -> Option<Complex64> {
        (self.case == CaseTag::Generic).then(|| Complex64::new(1.0, 0.0) - self.lambda / self.mu)
    }

    /// `f_r` applied to a jet whose value lies off `(-∞, 0]`.
    pub fn eval_jet(&self, z: &JetScalar) -> Result<JetScalar> {
        let log = z.ln()?;
        let r = self.r as u32;
        Ok(match self.case {
            CaseTag::MuZero => log.powi(r - 1).scale(self.c1),
            CaseTag::LambdaEqMu => {
                let low = log.powi(2 * r - 2);
                &(&low * &log).scale(self.c1) + &low.scale(self.c2)
            }
            CaseTag::Generic => {
                let alpha = self.exponent().expect("generic");
                let lp = log.powi(r - 1);
                let power = log.scale(alpha).exp();
                &(&power * &lp).scale(self.c1) + &lp.scale(self.c2)
            }
        })
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.eval_jet(&JetScalar::constant(z, 0))?.value())
    }
}

/// Distance from `z` to the ray `(-∞, 0]`.
pub fn distance_to_cut(z: Complex64) -> f64 {
    if z.re <= 0.0 {
        z.im.abs()
    } else {
        z.norm()
    }
}

/// Whether `p` lies in W with at least `margin` to spare.
pub fn in_domain(phi: &dyn ScalarField, p: &CMatrix, margin: f64) -> Result<bool> {
    Ok(distance_to_cut(phi.value_at(p)?) > margin)
}

/// `Φ_r = f_r ∘ φ` for a catalog family.
#[derive(Debug, Clone)]
pub struct HarmonicCandidate {
    pub family: EigenFamily,
    pub holo: HolomorphicCase,
}

pub fn build_candidate(
    family: &EigenFamily,
    r: usize,
    c1: Complex64,
    c2: Complex64,
) -> Result<HarmonicCandidate> {
    let holo = HolomorphicCase::new(family.lambda, family.mu, r, c1, c2)?;
    Ok(HarmonicCandidate {
        family: family.clone(),
        holo,
    })
}

/// Jet-evaluable `f_r ∘ φ`; evaluation fails off W.
#[derive(Debug, Clone)]
pub struct CandidateField {
    phi: Eigenfunction,
    holo: HolomorphicCase,
}

impl ScalarField for CandidateField {
    fn eval(&self, x: &JetMatrix) -> Result<JetScalar> {
        self.holo.eval_jet(&self.phi.eval(x)?)
    }

    fn describe(&self) -> String {
        format!(
            "{:?} r={} f_r of {}",
            self.holo.case,
            self.holo.r,
            self.phi.describe()
        )
    }
}

impl HarmonicCandidate {
    pub fn field(&self) -> Result<CandidateField> {
        Ok(CandidateField {
            phi: make_eigenfunction(&self.family)?,
            holo: self.holo,
        })
    }

    pub fn in_domain(&self, p: &CMatrix, margin: f64) -> Result<bool> {
        in_domain(&make_eigenfunction(&self.family)?, p, margin)
    }
}

/// Thresholds of a polyharmonicity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicCheck {
    pub r: usize,
    pub tol_zero: f64,
    pub tol_nonzero: f64,
    pub margin: f64,
}

impl HarmonicCheck {
    /// Default thresholds: `tol_zero` = 1e-8, 1e-7, 1e-6, 1e-5 for r = 1..4.
    pub fn for_order(r: usize) -> Self {
        Self {
            r,
            tol_zero: default_tol_zero(r),
            tol_nonzero: 1e-6,
            margin: DEFAULT_MARGIN,
        }
    }
}

pub fn default_tol_zero(r: usize) -> f64 {
    10f64.powi(-(9 - r as i32))
}

/// Aggregates of a polyharmonicity sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicStats {
    pub requested: usize,
    pub accepted: usize,
    pub max_zero: f64,
    pub max_lower: f64,
    pub max_rounding_floor: f64,
    pub properness_fraction: f64,
    pub verdict: Verdict,
}

/// Checks `τʳ F = 0` and `τ^{r-1} F ≢ 0` for an arbitrary field at sampled
/// points of the domain cut out by `domain` (points with
/// `dist(domain(p), (-∞,0]) ≤ margin` and points where evaluation hits a
/// domain error are resampled, up to [`MAX_RETRIES`] times each).
pub fn check_polyharmonic(
    field: &dyn ScalarField,
    domain: &dyn ScalarField,
    basis: &AlgebraBasis,
    sampling: &Sampling,
    check: &HarmonicCheck,
) -> Result<HarmonicStats> {
    let per_point: Vec<Result<Option<(f64, f64, f64)>>> = (0..sampling.samples)
        .into_par_iter()
        .map(|k| {
            for retry in 0..=MAX_RETRIES {
                let p = random_point(basis, sampling.point_seed(k, retry), sampling.scale);
                if !in_domain(domain, &p, check.margin)? {
                    continue;
                }
                let top = iterated_laplacian_terms(field, basis, &p, check.r, DEFAULT_MAX_ORDER);
                let lower = iterated_laplacian(field, basis, &p, check.r - 1);
                match (top, lower) {
                    (Ok(a), Ok(b)) => {
                        return Ok(Some((a.value.norm(), b.norm(), a.rounding_floor())))
                    }
                    (Err(e), _) | (_, Err(e)) if e.is_domain() => continue,
                    (Err(e), _) | (_, Err(e)) => return Err(e),
                }
            }
            Ok(None)
        })
        .collect();
    let mut values = Vec::with_capacity(sampling.samples);
    for v in per_point {
        if let Some(pair) = v? {
            values.push(pair);
        }
    }
    let accepted = values.len();
    if 2 * accepted < sampling.samples {
        return Err(Error::InconclusiveDomain {
            accepted,
            requested: sampling.samples,
        });
    }
    let nan_max = |acc: f64, x: f64| {
        if x.is_nan() {
            f64::INFINITY
        } else {
            acc.max(x)
        }
    };
    let max_zero = values.iter().map(|v| v.0).fold(0.0, nan_max);
    let max_lower = values.iter().map(|v| v.1).fold(0.0, nan_max);
    let max_floor = values.iter().map(|v| v.2).fold(0.0, nan_max);
    let proper = values.iter().filter(|v| v.1 > check.tol_nonzero).count();
    let properness_fraction = if accepted == 0 {
        0.0
    } else {
        proper as f64 / accepted as f64
    };
    let verdict = if max_zero <= check.tol_zero * (1.0 + max_lower) && properness_fraction >= 0.9 {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(HarmonicStats {
        requested: sampling.samples,
        accepted,
        max_zero,
        max_lower,
        max_rounding_floor: max_floor,
        properness_fraction,
        verdict,
    })
}

/// Certifies that a candidate is proper r-harmonic on its domain.
pub fn verify_harmonic(
    cand: &HarmonicCandidate,
    sampling: &Sampling,
    check: &HarmonicCheck,
) -> Result<HarmonicRecord> {
    if check.r != cand.holo.r {
        return Err(Error::Config(format!(
            "check order {} differs from candidate order {}",
            check.r, cand.holo.r
        )));
    }
    let basis = algebra_basis(&cand.family.spec);
    let phi = make_eigenfunction(&cand.family)?;
    let field = cand.field()?;
    let stats = check_polyharmonic(&field, &phi, &basis, sampling, check)?;
    Ok(HarmonicRecord {
        family: cand.family.record(),
        r: check.r,
        case: cand.holo.case,
        c1: pair(cand.holo.c1),
        c2: pair(cand.holo.c2),
        samples: stats.requested,
        accepted: stats.accepted,
        max_zero_residual: finite(stats.max_zero),
        max_lower: finite(stats.max_lower),
        max_rounding_floor: finite(stats.max_rounding_floor),
        properness_fraction: stats.properness_fraction,
        tol_zero: check.tol_zero,
        tol_nonzero: check.tol_nonzero,
        verdict: stats.verdict,
    })
}
