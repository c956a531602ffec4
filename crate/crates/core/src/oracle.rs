//! Independent cross-checks that share no code path with the jet/group engine
//! beyond the group exponential:
//!
//! * univariate Taylor series at a center `z₀`, used to apply the Euler-type
//!   operator `L = μz²d² + λz d` to the closed-form solutions `f_r`;
//! * a central-difference Laplacian with one Richardson step.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus::ScalarField;
use crate::error::{Error, Result};
use crate::factory::{CaseTag, HolomorphicCase};
use crate::groups::{expm, AlgebraBasis, CMatrix};
use crate::report::{finite, pair, OdeRecord, Verdict};
use crate::taylor::on_branch_cut;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Taylor coefficients of a function in `h = z - center`, truncated at `order`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorSeries {
    pub center: Complex64,
    pub coeffs: Vec<Complex64>,
}

impl TaylorSeries {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn constant(center: Complex64, value: Complex64, order: usize) -> Self {
        let mut coeffs = vec![ZERO; order + 1];
        coeffs[0] = value;
        Self { center, coeffs }
    }

    /// The identity function `z = center + h`.
    pub fn identity(center: Complex64, order: usize) -> Self {
        let mut s = Self::constant(center, center, order);
        if order >= 1 {
            s.coeffs[1] = Complex64::new(1.0, 0.0);
        }
        s
    }

    fn check_center(center: Complex64) -> Result<()> {
        if on_branch_cut(center) {
            Err(Error::BranchCut(center))
        } else {
            Ok(())
        }
    }

    /// `log z = log z₀ + Σ_{k≥1} (-1)^{k+1} (h/z₀)^k / k`.
    pub fn log(center: Complex64, order: usize) -> Result<Self> {
        Self::check_center(center)?;
        let inv = center.inv();
        let mut coeffs = Vec::with_capacity(order + 1);
        coeffs.push(center.ln());
        let mut p = Complex64::new(1.0, 0.0);
        for k in 1..=order {
            p *= inv;
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            coeffs.push(p * sign / k as f64);
        }
        Ok(Self { center, coeffs })
    }

    /// `z^α = z₀^α Σ_k binom(α, k) (h/z₀)^k` on the principal branch.
    pub fn pow(center: Complex64, alpha: Complex64, order: usize) -> Result<Self> {
        Self::check_center(center)?;
        let inv = center.inv();
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut c = (alpha * center.ln()).exp();
        for k in 0..=order {
            coeffs.push(c);
            c *= (alpha - k as f64) / (k as f64 + 1.0) * inv;
        }
        Ok(Self { center, coeffs })
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        let mut coeffs = vec![ZERO; n];
        for i in 0..n {
            for j in 0..n - i {
                coeffs[i + j] += self.coeffs[i] * other.coeffs[j];
            }
        }
        Self {
            center: self.center,
            coeffs,
        }
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut out = Self::constant(self.center, Complex64::new(1.0, 0.0), self.order());
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        Self {
            center: self.center,
            coeffs: (0..n).map(|k| self.coeffs[k] + other.coeffs[k]).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            center: self.center,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }
}

/// `μ z² f'' + λ z f'` about the same center, two orders shorter.
pub fn ode_apply(f: &TaylorSeries, lambda: Complex64, mu: Complex64) -> Result<TaylorSeries> {
    let order = f.order();
    if order < 2 {
        return Err(Error::InsufficientOrder { order, needed: 2 });
    }
    let z0 = f.center;
    let c = &f.coeffs;
    let out_len = order - 1;
    let d1 = |k: usize| c[k + 1] * (k + 1) as f64;
    let d2 = |k: usize| c[k + 2] * ((k + 2) * (k + 1)) as f64;
    let coeffs = (0..out_len)
        .map(|k| {
            // z f' = (z₀ + h) f',  z² f'' = (z₀² + 2z₀h + h²) f''
            let mut zf1 = z0 * d1(k);
            let mut zzf2 = z0 * z0 * d2(k);
            if k >= 1 {
                zf1 += d1(k - 1);
                zzf2 += z0 * d2(k - 1) * 2.0;
            }
            if k >= 2 {
                zzf2 += d2(k - 2);
            }
            mu * zzf2 + lambda * zf1
        })
        .collect();
    Ok(TaylorSeries { center: z0, coeffs })
}

/// Closed-form series of `f_r` at `center`.
pub fn solution_series(
    holo: &HolomorphicCase,
    center: Complex64,
    order: usize,
) -> Result<TaylorSeries> {
    let log = TaylorSeries::log(center, order)?;
    let r = holo.r as u32;
    Ok(match holo.case {
        CaseTag::MuZero => log.powi(r - 1).scale(holo.c1),
        CaseTag::LambdaEqMu => log
            .powi(2 * r - 1)
            .scale(holo.c1)
            .add(&log.powi(2 * r - 2).scale(holo.c2)),
        CaseTag::Generic => {
            let alpha = Complex64::new(1.0, 0.0) - holo.lambda / holo.mu;
            let lp = log.powi(r - 1);
            TaylorSeries::pow(center, alpha, order)?
                .mul(&lp)
                .scale(holo.c1)
                .add(&lp.scale(holo.c2))
        }
    })
}

/// `(|Lʳ f_r (center)|, |L^{r-1} f_r (center)|)`.
pub fn ode_cascade_residual(
    holo: &HolomorphicCase,
    center: Complex64,
    order: usize,
) -> Result<(f64, f64)> {
    let needed = 2 * holo.r;
    if order < needed {
        return Err(Error::InsufficientOrder { order, needed });
    }
    let mut series = solution_series(holo, center, order)?;
    let mut lower = series.coeffs[0];
    for _ in 0..holo.r {
        lower = series.coeffs[0];
        series = ode_apply(&series, holo.lambda, holo.mu)?;
    }
    Ok((series.coeffs[0].norm(), lower.norm()))
}

/// Default expansion order: two guard coefficients past `2r`.
pub fn default_order(r: usize) -> usize {
    2 * r + 2
}

/// Uniform draw from `{0.5 ≤ |z| ≤ 2, Re z > 0}`.
pub fn random_center(rng: &mut ChaCha8Rng) -> Complex64 {
    let radius = rng.random_range(0.25f64..4.0).sqrt();
    let angle = rng.random_range(-FRAC_PI_2..FRAC_PI_2);
    Complex64::from_polar(radius, angle)
}

/// Runs the ODE oracle at `centers` random centers: pass iff every `Lʳ f_r`
/// residual is at most `tol_zero` and `|L^{r-1} f_r| > tol_nonzero` at ≥ 90%.
pub fn ode_sweep(
    holo: &HolomorphicCase,
    centers: usize,
    seed: u64,
    tol_zero: f64,
    tol_nonzero: f64,
) -> Result<OdeRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = default_order(holo.r);
    let mut max_zero: f64 = 0.0;
    let mut proper = 0;
    for _ in 0..centers {
        let z = random_center(&mut rng);
        let (zero, lower) = ode_cascade_residual(holo, z, order)?;
        max_zero = if zero.is_nan() {
            f64::INFINITY
        } else {
            max_zero.max(zero)
        };
        if lower > tol_nonzero {
            proper += 1;
        }
    }
    let fraction = if centers == 0 {
        0.0
    } else {
        proper as f64 / centers as f64
    };
    let verdict = if max_zero <= tol_zero && fraction >= 0.9 {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(OdeRecord {
        lambda: pair(holo.lambda),
        mu: pair(holo.mu),
        case: holo.case,
        r: holo.r,
        c1: pair(holo.c1),
        c2: pair(holo.c2),
        centers,
        max_zero_residual: finite(max_zero),
        properness_fraction: fraction,
        verdict,
    })
}

/// Step for [`fd_laplacian`], near `ε^{1/6}` where rounding and the `h⁴`
/// truncation balance.
pub const DEFAULT_FD_STEP: f64 = 2.5e-3;

/// Central second differences along each frame direction, combined with one
/// Richardson step over `(h, h/2)`.
pub fn fd_laplacian(
    f: &dyn ScalarField,
    basis: &AlgebraBasis,
    p: &CMatrix,
    h: f64,
) -> Result<Complex64> {
    let center = f.value_at(p)?;
    let second_difference = |step: f64| -> Result<Complex64> {
        let mut acc = ZERO;
        for x in &basis.basis {
            let fwd = f.value_at(&(p * expm(&x.scale(step))))?;
            let bwd = f.value_at(&(p * expm(&x.scale(-step))))?;
            acc += (fwd - center * 2.0 + bwd) / (step * step);
        }
        Ok(acc)
    };
    let coarse = second_difference(h)?;
    let fine = second_difference(h / 2.0)?;
    Ok((fine * 4.0 - coarse) / 3.0)
}
