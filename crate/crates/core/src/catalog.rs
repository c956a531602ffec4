//! Eigenfunctions of τ and κ on the classical groups.
//!
//! Every catalog function is a linear functional `φ(x) = Σ C_ij x_ij` of the
//! matrix entries; the rows differ only in how `C` is assembled from the
//! parameters `a, v, u, A, B` (vectors are row vectors, so `aᵗv` has entries
//! `a_i v_j`).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::calculus::{conformality, laplacian, ScalarField};
use crate::error::{Error, Result};
use crate::groups::{algebra_basis, random_point, CMatrix, Family, GroupSpec};
use crate::report::{pair, EigenRecord, FamilyRecord, Verdict};
use crate::seeds;
use crate::taylor::{JetMatrix, JetScalar};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Which variant of a group's eigenfunction is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Row {
    /// The only variant for single-row groups.
    Main,
    /// `v` (and `u`) supported on the first `p` coordinates.
    P1,
    /// `v` (and `u`) supported on the last `q` coordinates.
    Q2,
    /// SL(2n,ℝ)-symplectic top blocks `x + iy`.
    XY,
    /// Bottom blocks `z + iw`.
    ZW,
    /// SO*(2n) `z` block.
    Z,
    /// SO*(2n) `w` block.
    W,
}

impl Row {
    pub fn as_str(self) -> &'static str {
        match self {
            Row::Main => "main",
            Row::P1 => "p1",
            Row::Q2 => "q2",
            Row::XY => "xy",
            Row::ZW => "zw",
            Row::Z => "z",
            Row::W => "w",
        }
    }
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Row {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "main" => Row::Main,
            "p1" => Row::P1,
            "q2" => Row::Q2,
            "xy" => Row::XY,
            "zw" => Row::ZW,
            "z" => Row::Z,
            "w" => Row::W,
            other => {
                return Err(Error::InvalidRow {
                    group: "?".into(),
                    row: other.into(),
                })
            }
        })
    }
}

/// Rows defined for a family, whether or not the sizes admit parameters.
pub fn rows_of(family: Family) -> &'static [Row] {
    match family {
        Family::SOO | Family::SUU | Family::Spp => &[Row::P1, Row::Q2],
        Family::SpR => &[Row::XY, Row::ZW],
        Family::SOstar => &[Row::Z, Row::W],
        _ => &[Row::Main],
    }
}

/// Rows of `spec` for which [`gen_params`] can produce parameters.
pub fn feasible_rows(spec: &GroupSpec) -> Vec<Row> {
    rows_of(spec.family)
        .iter()
        .copied()
        .filter(|&row| isotropic_support(spec, row).is_none_or(|k| k >= 2))
        .collect()
}

fn check_row(spec: &GroupSpec, row: Row) -> Result<()> {
    if rows_of(spec.family).contains(&row) {
        Ok(())
    } else {
        Err(Error::InvalidRow {
            group: spec.to_string(),
            row: row.to_string(),
        })
    }
}

/// The `(λ, μ)` pair with `τ(φ) = λφ` and `κ(φ, φ) = μφ²`, in closed form.
///
/// `u:n` is included for the unitary reduction check: `(-n, -1)`.
pub fn eigen_constants(spec: &GroupSpec, row: Row) -> Result<(Complex64, Complex64)> {
    check_row(spec, row)?;
    let n = spec.n() as f64;
    let (p, q) = spec.pq().map_or((0.0, 0.0), |(p, q)| (p as f64, q as f64));
    let (lambda, mu) = match (spec.family, row) {
        (Family::SLR, _) => ((n - 1.0) / n, -1.0 / n),
        (Family::SO, _) => (-(n - 1.0) / 2.0, -0.5),
        (Family::SU, _) => (-(n * n - 1.0) / n, -(n - 1.0) / n),
        (Family::U, _) => (-n, -1.0),
        (Family::Sp, _) => (-(2.0 * n + 1.0) / 2.0, -0.5),
        (Family::SOO, Row::P1) => ((q - p + 1.0) / 2.0, -0.5),
        (Family::SOO, _) => ((p - q + 1.0) / 2.0, -0.5),
        (Family::SUU, Row::P1) => ((q * q - p * p + 1.0) / (p + q), -(p + q - 1.0) / (p + q)),
        (Family::SUU, _) => ((p * p - q * q + 1.0) / (p + q), -(p + q - 1.0) / (p + q)),
        (Family::Spp, Row::P1) => (-(2.0 * (p - q) + 1.0) / 2.0, -0.5),
        (Family::Spp, _) => (-(2.0 * (q - p) + 1.0) / 2.0, -0.5),
        (Family::SpR, _) => (0.5, -0.5),
        (Family::SOstar, _) => (-0.5, -0.5),
        (Family::SUstar, _) => (-(2.0 * n + 1.0) / (2.0 * n), -1.0 / (2.0 * n)),
    };
    Ok((Complex64::new(lambda, 0.0), Complex64::new(mu, 0.0)))
}

/// Parameters of a catalog row. Unused slots are empty.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Params {
    pub a: Vec<Complex64>,
    pub v: Vec<Complex64>,
    pub u: Vec<Complex64>,
    pub mat_a: Option<CMatrix>,
    pub mat_b: Option<CMatrix>,
}

/// One catalog row instantiated with concrete parameters.
#[derive(Debug, Clone)]
pub struct EigenFamily {
    pub spec: GroupSpec,
    pub row: Row,
    pub params: Params,
    pub lambda: Complex64,
    pub mu: Complex64,
}

impl EigenFamily {
    /// Builds a family from explicit parameters with the catalog constants.
    pub fn new(spec: GroupSpec, row: Row, params: Params) -> Result<Self> {
        let (lambda, mu) = eigen_constants(&spec, row)?;
        let fam = Self {
            spec,
            row,
            params,
            lambda,
            mu,
        };
        fam.coefficient_matrix()?;
        Ok(fam)
    }

    /// Seeded random instance satisfying the row's conditions.
    pub fn generate(spec: GroupSpec, row: Row, seed: u64) -> Result<Self> {
        let params = gen_params(&spec, row, seed)?;
        Self::new(spec, row, params)
    }

    /// Largest residual of the row's side conditions (isotropy, `AAᵗ = 0`,
    /// `ABᵗ = BAᵗ`, support).
    pub fn condition_residual(&self) -> f64 {
        let p = &self.params;
        let iso = |v: &[Complex64]| v.iter().map(|x| x * x).sum::<Complex64>().norm();
        let support = |v: &[Complex64]| -> f64 {
            match support_range(&self.spec, self.row) {
                Some((lo, hi)) => v
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i < lo || *i >= hi)
                    .map(|(_, x)| x.norm())
                    .fold(0.0, f64::max),
                None => 0.0,
            }
        };
        match self.spec.family {
            Family::SLR => p
                .mat_a
                .as_ref()
                .map_or(f64::INFINITY, |a| (a * a.transpose()).norm()),
            Family::SO | Family::SOO => iso(&p.v) + support(&p.v),
            Family::SUU => support(&p.v),
            Family::Spp => support(&p.v) + support(&p.u),
            Family::SUstar => match (&p.mat_a, &p.mat_b) {
                (Some(a), Some(b)) => (a * b.transpose() - b * a.transpose()).norm(),
                _ => f64::INFINITY,
            },
            _ => 0.0,
        }
    }

    /// `C` with `φ(x) = Σ C_ij x_ij` on the ambient matrices.
    pub fn coefficient_matrix(&self) -> Result<CMatrix> {
        let n = self.spec.n();
        let size = self.spec.ambient_size();
        let p = &self.params;
        let bad = |what: &str| Error::UnsupportedParameters(format!("{} needs {what}", self.spec));
        let need_vec = |v: &[Complex64], name: &str| {
            if v.len() == n {
                Ok(())
            } else {
                Err(bad(&format!("{name} of length {n}")))
            }
        };
        let outer = |a: &[Complex64], v: &[Complex64]| CMatrix::from_fn(n, n, |i, j| a[i] * v[j]);
        let mut c = CMatrix::zeros(size, size);
        match self.spec.family {
            Family::SLR => {
                let a = p.mat_a.as_ref().ok_or_else(|| bad("matrix A"))?;
                if a.shape() != (n, n) {
                    return Err(bad("an n x n matrix A"));
                }
                c.copy_from(a);
            }
            Family::SO | Family::SU | Family::U | Family::SOO | Family::SUU => {
                need_vec(&p.a, "a")?;
                need_vec(&p.v, "v")?;
                c.copy_from(&outer(&p.a, &p.v));
            }
            Family::Sp | Family::Spp => {
                need_vec(&p.a, "a")?;
                need_vec(&p.v, "v")?;
                need_vec(&p.u, "u")?;
                c.view_mut((0, 0), (n, n)).copy_from(&outer(&p.a, &p.v));
                c.view_mut((0, n), (n, n)).copy_from(&outer(&p.a, &p.u));
            }
            Family::SpR => {
                need_vec(&p.a, "a")?;
                need_vec(&p.v, "v")?;
                let av = outer(&p.a, &p.v);
                let top = if self.row == Row::XY { 0 } else { n };
                c.view_mut((top, 0), (n, n)).copy_from(&av);
                c.view_mut((top, n), (n, n)).copy_from(&(&av * I));
            }
            Family::SOstar => {
                need_vec(&p.a, "a")?;
                need_vec(&p.v, "v")?;
                let col = if self.row == Row::Z { 0 } else { n };
                c.view_mut((0, col), (n, n)).copy_from(&outer(&p.a, &p.v));
            }
            Family::SUstar => {
                let a = p.mat_a.as_ref().ok_or_else(|| bad("matrix A"))?;
                let b = p.mat_b.as_ref().ok_or_else(|| bad("matrix B"))?;
                if a.shape() != (n, n) || b.shape() != (n, n) {
                    return Err(bad("n x n matrices A and B"));
                }
                c.view_mut((0, 0), (n, n)).copy_from(a);
                c.view_mut((0, n), (n, n)).copy_from(b);
            }
        }
        Ok(c)
    }

    pub fn record(&self) -> FamilyRecord {
        let vec = |v: &[Complex64]| v.iter().map(|&z| pair(z)).collect::<Vec<_>>();
        let mat = |m: &Option<CMatrix>| {
            m.as_ref().map(|m| {
                (0..m.nrows())
                    .map(|i| (0..m.ncols()).map(|j| pair(m[(i, j)])).collect())
                    .collect()
            })
        };
        FamilyRecord {
            group: self.spec.to_string(),
            row: self.row,
            a: vec(&self.params.a),
            v: vec(&self.params.v),
            u: vec(&self.params.u),
            mat_a: mat(&self.params.mat_a),
            mat_b: mat(&self.params.mat_b),
            lambda: pair(self.lambda),
            mu: pair(self.mu),
        }
    }
}

/// A catalog eigenfunction as a jet-evaluable field.
#[derive(Debug, Clone)]
pub struct Eigenfunction {
    coeffs: Vec<(usize, usize, Complex64)>,
    name: String,
}

impl Eigenfunction {
    /// `Σ C_ij x_ij` for an arbitrary coefficient matrix.
    pub fn from_coefficients(c: &CMatrix, name: impl Into<String>) -> Self {
        let mut coeffs = Vec::new();
        for i in 0..c.nrows() {
            for j in 0..c.ncols() {
                if c[(i, j)] != Complex64::new(0.0, 0.0) {
                    coeffs.push((i, j, c[(i, j)]));
                }
            }
        }
        Self {
            coeffs,
            name: name.into(),
        }
    }
}

impl ScalarField for Eigenfunction {
    fn eval(&self, x: &JetMatrix) -> Result<JetScalar> {
        let mut acc = JetScalar::zero(x.num_vars());
        for &(i, j, c) in &self.coeffs {
            acc = &acc + &x.get(i, j).scale(c);
        }
        Ok(acc)
    }

    fn describe(&self) -> String {
        self.name.clone()
    }
}

pub fn make_eigenfunction(family: &EigenFamily) -> Result<Eigenfunction> {
    let form = match family.spec.family {
        Family::SLR => "trace(A x^t)",
        Family::SO | Family::SOO => "trace(a^t v x^t)",
        Family::SU | Family::SUU | Family::U => "trace(a^t v z^t)",
        Family::Sp | Family::Spp => "trace(a^t v z^t + a^t u w^t)",
        Family::SpR if family.row == Row::XY => "trace(a^t v (x+iy)^t)",
        Family::SpR => "trace(a^t v (z+iw)^t)",
        Family::SOstar if family.row == Row::Z => "trace(a^t v z^t)",
        Family::SOstar => "trace(a^t v w^t)",
        Family::SUstar => "trace(A z^t + B w^t)",
    };
    Ok(Eigenfunction::from_coefficients(
        &family.coefficient_matrix()?,
        format!("{form} on {} [{}]", family.spec, family.row),
    ))
}

// ----------------------------------------------------------------------------
// parameter generation

/// Coordinate range the row's vectors live on, for support-restricted rows.
fn support_range(spec: &GroupSpec, row: Row) -> Option<(usize, usize)> {
    let (p, q) = spec.pq()?;
    match row {
        Row::P1 => Some((0, p)),
        Row::Q2 => Some((p, p + q)),
        _ => None,
    }
}

/// Dimension in which an isotropic vector is needed, if the row needs one.
fn isotropic_support(spec: &GroupSpec, row: Row) -> Option<usize> {
    match spec.family {
        Family::SO | Family::SLR => Some(spec.n()),
        Family::SOO => support_range(spec, row).map(|(lo, hi)| hi - lo),
        _ => None,
    }
}

fn normal_vec(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| StandardNormal.sample(rng)).collect()
}

fn unit_complex(rng: &mut ChaCha8Rng, len: usize) -> Vec<Complex64> {
    let re = normal_vec(rng, len);
    let im = normal_vec(rng, len);
    let v: Vec<Complex64> = re
        .iter()
        .zip(&im)
        .map(|(&a, &b)| Complex64::new(a, b))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Unit isotropic vector `u₁ + i u₂` with real `u₁ ⊥ u₂`, `|u₁| = |u₂|`.
fn isotropic(rng: &mut ChaCha8Rng, len: usize) -> Result<Vec<Complex64>> {
    if len < 2 {
        return Err(Error::UnsupportedParameters(format!(
            "no nonzero isotropic vector in C^{len}"
        )));
    }
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let u1 = normal_vec(rng, len);
    let mut u2 = normal_vec(rng, len);
    let proj = dot(&u2, &u1) / dot(&u1, &u1);
    u2.iter_mut().zip(&u1).for_each(|(y, x)| *y -= proj * x);
    let (n1, n2) = (dot(&u1, &u1).sqrt(), dot(&u2, &u2).sqrt());
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Ok(u1
        .iter()
        .zip(&u2)
        .map(|(x, y)| Complex64::new(s * x / n1, s * y / n2))
        .collect())
}

fn embed(v: Vec<Complex64>, n: usize, lo: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    out[lo..lo + v.len()].copy_from_slice(&v);
    out
}

/// Deterministic seeded parameters satisfying the row's conditions; vectors
/// are unit-normalized.
pub fn gen_params(spec: &GroupSpec, row: Row, seed: u64) -> Result<Params> {
    check_row(spec, row)?;
    let n = spec.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outer = |a: &[Complex64], v: &[Complex64]| CMatrix::from_fn(n, n, |i, j| a[i] * v[j]);
    let supported = |rng: &mut ChaCha8Rng| -> Vec<Complex64> {
        match support_range(spec, row) {
            Some((lo, hi)) => embed(unit_complex(rng, hi - lo), n, lo),
            None => unit_complex(rng, n),
        }
    };
    let params = match spec.family {
        Family::SLR => {
            let a = unit_complex(&mut rng, n);
            let v = isotropic(&mut rng, n)?;
            Params {
                mat_a: Some(outer(&a, &v)),
                ..Params::default()
            }
        }
        Family::SO => Params {
            a: unit_complex(&mut rng, n),
            v: isotropic(&mut rng, n)?,
            ..Params::default()
        },
        Family::SOO => {
            let (lo, hi) = support_range(spec, row).expect("indefinite");
            let a = unit_complex(&mut rng, n);
            Params {
                a,
                v: embed(isotropic(&mut rng, hi - lo)?, n, lo),
                ..Params::default()
            }
        }
        Family::SU | Family::U | Family::SUU | Family::SpR | Family::SOstar => {
            let a = unit_complex(&mut rng, n);
            Params {
                a,
                v: supported(&mut rng),
                ..Params::default()
            }
        }
        Family::Sp | Family::Spp => {
            let a = unit_complex(&mut rng, n);
            let v = supported(&mut rng);
            let u = supported(&mut rng);
            Params {
                a,
                v,
                u,
                ..Params::default()
            }
        }
        Family::SUstar => {
            // rank one with a shared left factor: ABᵗ = (v·u) aᵗa = BAᵗ
            let a = unit_complex(&mut rng, n);
            let v = unit_complex(&mut rng, n);
            let u = unit_complex(&mut rng, n);
            Params {
                mat_a: Some(outer(&a, &v)),
                mat_b: Some(outer(&a, &u)),
                ..Params::default()
            }
        }
    };
    Ok(params)
}

// ----------------------------------------------------------------------------
// verification

/// How sample points are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sampling {
    pub samples: usize,
    pub seed: u64,
    pub scale: f64,
}

impl Sampling {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self {
            samples,
            seed,
            scale: crate::groups::DEFAULT_SCALE,
        }
    }

    /// Seed of sample `k`, attempt `retry`.
    pub fn point_seed(&self, k: usize, retry: usize) -> u64 {
        seeds::derive(self.seed, &[k as u64, retry as u64])
    }
}

/// Per-point eigen residuals `(e_τ, e_κ)`.
pub fn eigen_residuals(
    family: &EigenFamily,
    phi: &dyn ScalarField,
    basis: &crate::groups::AlgebraBasis,
    p: &CMatrix,
) -> Result<(f64, f64)> {
    let v = phi.value_at(p)?;
    let tau = laplacian(phi, basis, p)?;
    let kappa = conformality(phi, phi, basis, p)?;
    let e_tau = (tau - family.lambda * v).norm() / (1.0 + v.norm());
    let e_kappa = (kappa - family.mu * v * v).norm() / (1.0 + v.norm_sqr());
    Ok((e_tau, e_kappa))
}

/// Checks `τ(φ) = λφ` and `κ(φ, φ) = μφ²` at seeded random points.
pub fn verify_eigen(family: &EigenFamily, sampling: &Sampling, tol: f64) -> Result<EigenRecord> {
    let phi = make_eigenfunction(family)?;
    let basis = algebra_basis(&family.spec);
    let residuals: Vec<Result<(f64, f64)>> = (0..sampling.samples)
        .into_par_iter()
        .map(|k| {
            let p = random_point(&basis, sampling.point_seed(k, 0), sampling.scale);
            eigen_residuals(family, &phi, &basis, &p)
        })
        .collect();
    let mut max_tau: f64 = 0.0;
    let mut max_kappa: f64 = 0.0;
    for r in residuals {
        let (t, k) = r?;
        max_tau = max_tau.max(nan_to_inf(t));
        max_kappa = max_kappa.max(nan_to_inf(k));
    }
    let verdict = if max_tau <= tol && max_kappa <= tol {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(EigenRecord {
        family: family.record(),
        samples: sampling.samples,
        tol,
        max_e_tau: crate::report::finite(max_tau),
        max_e_kappa: crate::report::finite(max_kappa),
        condition_residual: crate::report::finite(family.condition_residual()),
        verdict,
    })
}

fn nan_to_inf(x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else {
        x
    }
}

/// Largest `|κ(φ_a, φ_b) − μ φ_a φ_b| / (1 + |φ_a φ_b|)` over the sample, for
/// two instances of the same row. Exploratory only: the catalog does not claim
/// distinct parameter choices form an eigenfamily.
pub fn pairwise_conformality_residual(
    a: &EigenFamily,
    b: &EigenFamily,
    sampling: &Sampling,
) -> Result<f64> {
    if a.spec != b.spec {
        return Err(Error::Config("families live on different groups".into()));
    }
    let (fa, fb) = (make_eigenfunction(a)?, make_eigenfunction(b)?);
    let basis = algebra_basis(&a.spec);
    let mut worst: f64 = 0.0;
    for k in 0..sampling.samples {
        let p = random_point(&basis, sampling.point_seed(k, 0), sampling.scale);
        let prod = fa.value_at(&p)? * fb.value_at(&p)?;
        let kappa = conformality(&fa, &fb, &basis, &p)?;
        worst = worst.max((kappa - a.mu * prod).norm() / (1.0 + prod.norm()));
    }
    Ok(worst)
}
