//! Classical matrix Lie groups: specs, orthonormal algebra bases, membership
//! residuals, seeded sampling and jet-valued curves `t ↦ p·exp(tX)`.
//!
//! Every group is stored as complex matrices. Real groups (SO, SL(n,ℝ),
//! Sp(n,ℝ), SO(p,q)) carry zero imaginary parts; quaternionic groups
//! (Sp(n), Sp(p,q), SU*(2n)) and SO*(2n) use the 2n×2n complex representation
//! `z + jw ↦ [[z, w], [-w̄, z̄]]`. The metric is `Re trace(X Y*)` throughout.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::taylor::JetMatrix;

pub type CMatrix = DMatrix<Complex64>;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    SO,
    SU,
    Sp,
    SLR,
    SpR,
    SOO,
    SUU,
    Spp,
    SOstar,
    SUstar,
    /// The full unitary group; only used to check the SU(n) reduction.
    U,
}

impl Family {
    pub fn is_indefinite(self) -> bool {
        matches!(self, Family::SOO | Family::SUU | Family::Spp)
    }

    fn tag(self) -> &'static str {
        match self {
            Family::SO => "so",
            Family::SU => "su",
            Family::Sp => "sp",
            Family::SLR => "slr",
            Family::SpR => "spr",
            Family::SOO => "soo",
            Family::SUU => "suu",
            Family::Spp => "spp",
            Family::SOstar => "sostar",
            Family::SUstar => "sustar",
            Family::U => "u",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Size {
    N(usize),
    PQ(usize, usize),
}

/// A classical group with its size parameters. For `sp`, `spp`, `sostar` and
/// `sustar` the size counts quaternionic dimension, so `sostar:2` is SO*(4).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupSpec {
    pub family: Family,
    pub size: Size,
}

impl GroupSpec {
    pub fn new(family: Family, n: usize) -> Result<Self> {
        let spec = Self {
            family,
            size: Size::N(n),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn indefinite(family: Family, p: usize, q: usize) -> Result<Self> {
        let spec = Self {
            family,
            size: Size::PQ(p, q),
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        let ok = match (self.family.is_indefinite(), self.size) {
            (false, Size::N(n)) => n >= 1,
            (true, Size::PQ(p, q)) => p >= 1 && q >= 1,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidGroup(format!("{self}")))
        }
    }

    /// `n` for definite families, `p + q` for indefinite ones.
    pub fn n(&self) -> usize {
        match self.size {
            Size::N(n) => n,
            Size::PQ(p, q) => p + q,
        }
    }

    pub fn pq(&self) -> Option<(usize, usize)> {
        match self.size {
            Size::PQ(p, q) => Some((p, q)),
            Size::N(_) => None,
        }
    }

    /// Side length of the matrices representing the group.
    pub fn ambient_size(&self) -> usize {
        match self.family {
            Family::Sp | Family::Spp | Family::SOstar | Family::SUstar | Family::SpR => {
                2 * self.n()
            }
            _ => self.n(),
        }
    }

    pub fn is_real(&self) -> bool {
        matches!(
            self.family,
            Family::SO | Family::SLR | Family::SpR | Family::SOO
        )
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.size {
            Size::N(n) => write!(f, "{}:{}", self.family.tag(), n),
            Size::PQ(p, q) => write!(f, "{}:{},{}", self.family.tag(), p, q),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidGroup(s.to_string());
        let (tag, rest) = s.trim().split_once(':').ok_or_else(bad)?;
        let family = match tag.to_ascii_lowercase().as_str() {
            "so" => Family::SO,
            "su" => Family::SU,
            "sp" => Family::Sp,
            "slr" => Family::SLR,
            "spr" => Family::SpR,
            "soo" => Family::SOO,
            "suu" => Family::SUU,
            "spp" => Family::Spp,
            "sostar" => Family::SOstar,
            "sustar" => Family::SUstar,
            "u" => Family::U,
            _ => return Err(bad()),
        };
        let nums = rest
            .split(',')
            .map(|x| x.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        let spec = match (family.is_indefinite(), nums.as_slice()) {
            (false, &[n]) => GroupSpec::new(family, n),
            (true, &[p, q]) => GroupSpec::indefinite(family, p, q),
            _ => Err(bad()),
        };
        spec.map_err(|_| bad())
    }
}

// ----------------------------------------------------------------------------
// matrix helpers

pub(crate) fn unit(n: usize, i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    m[(i, j)] = ONE;
    m
}

/// `J_n = [[0, I_n], [-I_n, 0]]`.
pub fn j_matrix(n: usize) -> CMatrix {
    let mut m = CMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        m[(i, n + i)] = ONE;
        m[(n + i, i)] = -ONE;
    }
    m
}

/// `I_{p,q} = diag(-I_p, I_q)`.
pub fn ipq_matrix(p: usize, q: usize) -> CMatrix {
    CMatrix::from_fn(p + q, p + q, |i, j| match (i == j, i < p) {
        (true, true) => -ONE,
        (true, false) => ONE,
        _ => Complex64::new(0.0, 0.0),
    })
}

/// Complex representation `[[z, w], [-w̄, z̄]]` of the quaternionic matrix `z + jw`.
pub fn quaternionic(z: &CMatrix, w: &CMatrix) -> CMatrix {
    let n = z.nrows();
    let mut m = CMatrix::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(z);
    m.view_mut((0, n), (n, n)).copy_from(w);
    m.view_mut((n, 0), (n, n))
        .copy_from(&(-w.map(|c| c.conj())));
    m.view_mut((n, n), (n, n)).copy_from(&z.map(|c| c.conj()));
    m
}

fn block_diag(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (n, m) = (a.nrows(), b.nrows());
    let mut out = CMatrix::zeros(n + m, n + m);
    out.view_mut((0, 0), (n, n)).copy_from(a);
    out.view_mut((n, n), (m, m)).copy_from(b);
    out
}

/// The canonical inner product `Re trace(X Y*)`.
pub fn inner(x: &CMatrix, y: &CMatrix) -> f64 {
    x.iter().zip(y.iter()).map(|(a, b)| (a * b.conj()).re).sum()
}

fn conj(m: &CMatrix) -> CMatrix {
    m.map(|c| c.conj())
}

fn imag_norm(m: &CMatrix) -> f64 {
    m.iter().map(|c| c.im * c.im).sum::<f64>().sqrt()
}

/// Matrix exponential by scaling and squaring of the truncated Taylor series.
pub fn expm(x: &CMatrix) -> CMatrix {
    const TOL: f64 = 1e-14;
    let n = x.nrows();
    let norm = x.norm();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = x.scale(0.5f64.powi(squarings));
    let mut sum = CMatrix::identity(n, n);
    let mut term = CMatrix::identity(n, n);
    for k in 1..64 {
        term = &term * &scaled / Complex64::new(k as f64, 0.0);
        sum += &term;
        if term.norm() <= TOL * sum.norm() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

// ----------------------------------------------------------------------------
// Lie algebra bases

/// An orthonormal basis of a group's Lie algebra under `Re trace(X Y*)`.
#[derive(Debug, Clone)]
pub struct AlgebraBasis {
    pub spec: GroupSpec,
    pub basis: Vec<CMatrix>,
}

impl AlgebraBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Largest entry of `Gram - Id`.
    pub fn gram_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, x) in self.basis.iter().enumerate() {
            for (j, y) in self.basis.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((inner(x, y) - target).abs());
            }
        }
        worst
    }

    /// Linear combination `Σ c_i X_i`.
    pub fn combine(&self, coeffs: &[f64]) -> CMatrix {
        let n = self.spec.ambient_size();
        self.basis
            .iter()
            .zip(coeffs)
            .fold(CMatrix::zeros(n, n), |acc, (x, &c)| acc + x.scale(c))
    }
}

/// `E_ij - E_ji` and `i(E_ij + E_ji)` for `i < j`: off-diagonal part of u(n).
fn skew_hermitian_offdiag(n: usize, out: &mut Vec<CMatrix>) {
    for i in 0..n {
        for j in i + 1..n {
            out.push(unit(n, i, j) - unit(n, j, i));
            out.push((unit(n, i, j) + unit(n, j, i)) * I);
        }
    }
}

/// Successive differences `E_ll - E_{l+1,l+1}` (traceless diagonal).
fn traceless_diagonal(n: usize, factor: Complex64, out: &mut Vec<CMatrix>) {
    for l in 0..n.saturating_sub(1) {
        out.push((unit(n, l, l) - unit(n, l + 1, l + 1)) * factor);
    }
}

fn unitary_algebra(n: usize) -> Vec<CMatrix> {
    let mut out = Vec::new();
    skew_hermitian_offdiag(n, &mut out);
    out.extend((0..n).map(|l| unit(n, l, l) * I));
    out
}

/// Generators of u(p,q): `X I_{p,q} + I_{p,q} X* = 0`.
fn indefinite_unitary_algebra(p: usize, q: usize, traceless: bool) -> Vec<CMatrix> {
    let n = p + q;
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (e, et) = (unit(n, i, j), unit(n, j, i));
            if (i < p) == (j < p) {
                out.push(&e - &et);
                out.push((&e + &et) * I);
            } else {
                out.push(&e + &et);
                out.push((&e - &et) * I);
            }
        }
    }
    if traceless {
        traceless_diagonal(n, I, &mut out);
    } else {
        out.extend((0..n).map(|l| unit(n, l, l) * I));
    }
    out
}

fn generators(spec: &GroupSpec) -> Vec<CMatrix> {
    let n = spec.n();
    let zero = CMatrix::zeros(n, n);
    let mut out = Vec::new();
    match spec.family {
        Family::SO => {
            for i in 0..n {
                for j in i + 1..n {
                    out.push(unit(n, i, j) - unit(n, j, i));
                }
            }
        }
        Family::SU => {
            skew_hermitian_offdiag(n, &mut out);
            traceless_diagonal(n, I, &mut out);
        }
        Family::U => out = unitary_algebra(n),
        Family::SLR => {
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        out.push(unit(n, i, j));
                    }
                }
            }
            traceless_diagonal(n, ONE, &mut out);
        }
        Family::Sp => {
            for z in unitary_algebra(n) {
                out.push(quaternionic(&z, &zero));
            }
            for i in 0..n {
                for j in i..n {
                    let s = unit(n, i, j) + unit(n, j, i);
                    out.push(quaternionic(&zero, &s));
                    out.push(quaternionic(&zero, &(s * I)));
                }
            }
        }
        Family::SpR => {
            let m = 2 * n;
            for i in 0..n {
                for j in 0..n {
                    out.push(unit(m, i, j) - unit(m, n + j, n + i));
                }
            }
            for i in 0..n {
                for j in i..n {
                    out.push(unit(m, i, n + j) + unit(m, j, n + i));
                    out.push(unit(m, n + i, j) + unit(m, n + j, i));
                }
            }
        }
        Family::SOO => {
            let (p, _) = spec.pq().expect("indefinite");
            for i in 0..n {
                for j in i + 1..n {
                    if (i < p) == (j < p) {
                        out.push(unit(n, i, j) - unit(n, j, i));
                    } else {
                        out.push(unit(n, i, j) + unit(n, j, i));
                    }
                }
            }
        }
        Family::SUU => {
            let (p, q) = spec.pq().expect("indefinite");
            out = indefinite_unitary_algebra(p, q, true);
        }
        Family::Spp => {
            let (p, q) = spec.pq().expect("indefinite");
            for z in indefinite_unitary_algebra(p, q, false) {
                out.push(quaternionic(&z, &zero));
            }
            // W I_{p,q} = I_{p,q} W^t: symmetric inside blocks, skew across them
            for i in 0..n {
                for j in i..n {
                    let w = if (i < p) == (j < p) {
                        unit(n, i, j) + unit(n, j, i)
                    } else {
                        unit(n, i, j) - unit(n, j, i)
                    };
                    out.push(quaternionic(&zero, &w));
                    out.push(quaternionic(&zero, &(w * I)));
                }
            }
        }
        Family::SOstar => {
            for z in unitary_algebra(n) {
                out.push(quaternionic(&z, &zero));
            }
            for i in 0..n {
                for j in i + 1..n {
                    let w = unit(n, i, j) - unit(n, j, i);
                    out.push(quaternionic(&zero, &w));
                    out.push(quaternionic(&zero, &(w * I)));
                }
            }
        }
        Family::SUstar => {
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        out.push(quaternionic(&unit(n, i, j), &zero));
                    }
                    out.push(quaternionic(&(unit(n, i, j) * I), &zero));
                    out.push(quaternionic(&zero, &unit(n, i, j)));
                    out.push(quaternionic(&zero, &(unit(n, i, j) * I)));
                }
            }
            let mut diag = Vec::new();
            traceless_diagonal(n, ONE, &mut diag);
            out.extend(diag.iter().map(|d| quaternionic(d, &zero)));
        }
    }
    out
}

/// Modified Gram–Schmidt under `Re trace(X Y*)`, run twice per vector;
/// dependent inputs are dropped.
fn orthonormalize(gens: Vec<CMatrix>) -> Vec<CMatrix> {
    let mut basis: Vec<CMatrix> = Vec::with_capacity(gens.len());
    for mut x in gens {
        let before = inner(&x, &x).sqrt();
        for _ in 0..2 {
            for b in &basis {
                let c = inner(&x, b);
                x -= b.scale(c);
            }
        }
        let norm = inner(&x, &x).sqrt();
        if norm > 1e-10 * before.max(1.0) {
            basis.push(x.unscale(norm));
        }
    }
    basis
}

pub fn algebra_basis(spec: &GroupSpec) -> AlgebraBasis {
    AlgebraBasis {
        spec: *spec,
        basis: orthonormalize(generators(spec)),
    }
}

pub fn group_dim(spec: &GroupSpec) -> usize {
    algebra_basis(spec).dim()
}

// ----------------------------------------------------------------------------
// membership

/// Sum of the Frobenius residuals of every defining equation of the group
/// (plus `|det - 1|` and realness where they apply). Zero iff `m` is in the group.
pub fn membership_residual(spec: &GroupSpec, m: &CMatrix) -> Result<f64> {
    let size = spec.ambient_size();
    if m.shape() != (size, size) {
        return Err(Error::SizeMismatch {
            expected: format!("{size}x{size}"),
            found: format!("{}x{}", m.nrows(), m.ncols()),
        });
    }
    let n = spec.n();
    let id = CMatrix::identity(size, size);
    let adj = m.adjoint();
    let tr = m.transpose();
    let det_res = (m.clone().determinant() - ONE).norm();
    let preserves = |form: &CMatrix, other: &CMatrix| (m * form * other - form).norm();
    let quaternionic_res = || {
        let j = j_matrix(n);
        (m * &j - &j * conj(m)).norm()
    };
    let res = match spec.family {
        Family::SO => preserves(&id, &tr) + det_res,
        Family::SU => preserves(&id, &adj) + det_res,
        Family::U => preserves(&id, &adj),
        Family::Sp => preserves(&id, &adj) + quaternionic_res() + det_res,
        Family::SLR => det_res,
        Family::SpR => preserves(&j_matrix(n), &tr) + det_res,
        Family::SOO => {
            let (p, q) = spec.pq().expect("indefinite");
            preserves(&ipq_matrix(p, q), &tr) + det_res
        }
        Family::SUU => {
            let (p, q) = spec.pq().expect("indefinite");
            preserves(&ipq_matrix(p, q), &adj) + det_res
        }
        Family::Spp => {
            let (p, q) = spec.pq().expect("indefinite");
            let ipq = ipq_matrix(p, q);
            preserves(&block_diag(&ipq, &ipq), &adj) + quaternionic_res() + det_res
        }
        Family::SOstar => {
            let inn = ipq_matrix(n, n);
            let k = &inn * j_matrix(n);
            preserves(&inn, &adj) + preserves(&k, &tr) + det_res
        }
        Family::SUstar => quaternionic_res() + det_res,
    };
    Ok(if spec.is_real() {
        res + imag_norm(m)
    } else {
        res
    })
}

// ----------------------------------------------------------------------------
// sampling and curves

pub const DEFAULT_SCALE: f64 = 0.3;

/// `exp(Σ c_i X_i)` with `c_i ~ N(0, scale²)` drawn from a ChaCha stream seeded by `seed`.
pub fn random_point(basis: &AlgebraBasis, seed: u64, scale: f64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, scale).expect("positive scale");
    let coeffs: Vec<f64> = (0..basis.dim()).map(|_| normal.sample(&mut rng)).collect();
    expm(&basis.combine(&coeffs))
}

/// Jet of `p·exp(t_k X)` in `num_vars` variables, exact to second order in `t_k`.
pub fn curve(p: &CMatrix, x: &CMatrix, k: usize, num_vars: usize) -> Result<JetMatrix> {
    if p.ncols() != x.nrows() || x.nrows() != x.ncols() {
        return Err(Error::SizeMismatch {
            expected: format!("{}x{}", p.ncols(), p.ncols()),
            found: format!("{}x{}", x.nrows(), x.ncols()),
        });
    }
    JetMatrix::constant(p, num_vars).right_mul_exp(x, k)
}

impl JetMatrix {
    /// `self · exp(t_k X)` truncated at degree 2 in `t_k`.
    pub fn right_mul_exp(&self, x: &CMatrix, k: usize) -> Result<JetMatrix> {
        let x2 = x * x * Complex64::new(0.5, 0.0);
        self.right_mul_quadratic(x, &x2, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn spec(s: &str) -> GroupSpec {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in [
            "so:4", "su:3", "sp:2", "slr:3", "spr:2", "soo:2,2", "suu:1,2", "spp:1,1", "sostar:2",
            "sustar:2", "u:3",
        ] {
            assert_eq!(spec(s).to_string(), s);
        }
        for bad in ["so", "so:0", "soo:2", "su:1,2", "foo:3", "soo:0,2", "so:x"] {
            assert!(bad.parse::<GroupSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn so3_basis() {
        let b = algebra_basis(&spec("so:3"));
        assert_eq!(b.dim(), 3);
        assert!(b.gram_residual() < 1e-12);
        let x = &b.basis[0];
        assert_abs_diff_eq!(x[(0, 1)].re, 1.0 / 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(x[(1, 0)].re, -1.0 / 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn dimensions() {
        let cases = [
            ("so:4", 6),
            ("su:2", 3),
            ("su:3", 8),
            ("sp:2", 10),
            ("slr:3", 8),
            ("spr:2", 10),
            ("soo:2,2", 6),
            ("suu:1,2", 8),
            ("spp:1,1", 10),
            ("sostar:2", 6),
            ("sustar:2", 15),
            ("u:3", 9),
        ];
        for (s, d) in cases {
            assert_eq!(group_dim(&spec(s)), d, "{s}");
        }
    }

    #[test]
    fn membership_examples() {
        let so3 = spec("so:3");
        let id = CMatrix::identity(3, 3);
        assert_eq!(membership_residual(&so3, &id).unwrap(), 0.0);
        let two = id.scale(2.0);
        let r = membership_residual(&so3, &two).unwrap();
        assert_abs_diff_eq!(r, 3.0 * 3f64.sqrt() + 7.0, epsilon = 1e-12);
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![I, -I]));
        assert!(membership_residual(&spec("su:2"), &d).unwrap() < 1e-15);
        assert!(membership_residual(&so3, &CMatrix::identity(2, 2)).is_err());
    }

    #[test]
    fn realness_counts_for_real_groups() {
        let m = CMatrix::identity(2, 2) * Complex64::new(0.0, 1.0);
        // i·I is in U(2) but not in SL(2, R)
        assert!(membership_residual(&spec("u:2"), &m).unwrap() < 1e-15);
        assert!(membership_residual(&spec("slr:2"), &m).unwrap() > 1.0);
    }

    #[test]
    fn sampling_is_deterministic_and_in_group() {
        for s in ["so:3", "slr:3", "sustar:2", "spp:1,1", "sostar:2"] {
            let g = spec(s);
            let b = algebra_basis(&g);
            let p = random_point(&b, 42, DEFAULT_SCALE);
            let q = random_point(&b, 42, DEFAULT_SCALE);
            assert_eq!(p, q);
            assert!(membership_residual(&g, &p).unwrap() <= 1e-10, "{s}");
        }
        let b = algebra_basis(&spec("slr:3"));
        let p = random_point(&b, 7, 0.3);
        assert!((p.determinant() - ONE).norm() <= 1e-10);
    }

    #[test]
    fn expm_of_rotation() {
        let mut x = CMatrix::zeros(2, 2);
        x[(0, 1)] = Complex64::new(-3.0, 0.0);
        x[(1, 0)] = Complex64::new(3.0, 0.0);
        let e = expm(&x);
        assert_abs_diff_eq!(e[(0, 0)].re, 3f64.cos(), epsilon = 1e-13);
        assert_abs_diff_eq!(e[(1, 0)].re, 3f64.sin(), epsilon = 1e-13);
    }

    #[test]
    fn curve_examples() {
        let b = algebra_basis(&spec("so:2"));
        let id = CMatrix::identity(2, 2);
        let c = curve(&id, &b.basis[0], 0, 1).unwrap();
        let e = c.get(0, 0);
        assert_abs_diff_eq!(e.coeffs()[0].re, 1.0);
        assert_abs_diff_eq!(e.coeffs()[1].norm(), 0.0);
        assert_abs_diff_eq!(e.coeffs()[2].re, -0.25, epsilon = 1e-15);

        let g = spec("su:3");
        let basis = algebra_basis(&g);
        let p = random_point(&basis, 3, 0.3);
        let c = curve(&p, &basis.basis[2], 1, 2).unwrap();
        assert!((c.value() - &p).norm() == 0.0);
        assert!(curve(&p, &CMatrix::zeros(2, 2), 0, 1).is_err());
    }
}
