//! Truncated multivariate Taylor arithmetic ("jets") over complex scalars.
//!
//! A [`JetScalar`] in `d` variables stores the coefficients of `t^α` for every
//! multi-index `α ∈ {0,1,2}^d`, densely, in base-3 order: the coefficient of
//! `t_0^{α_0} ⋯ t_{d-1}^{α_{d-1}}` lives at index `Σ α_k 3^k`. Any product term
//! in which some variable reaches degree 3 is dropped, so each variable is
//! nilpotent of order 3 and all second-order directional derivatives are exact.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest number of jet variables supported by the dense representation.
pub const MAX_VARS: usize = 6;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `(i, j, k)` triples with `coeff[k] += a[i] * b[j]`, precomputed per arity.
fn mul_table(num_vars: usize) -> &'static [(u32, u32, u32)] {
    static TABLES: OnceLock<Vec<Vec<(u32, u32, u32)>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| {
        (0..=MAX_VARS)
            .map(|d| {
                let len = 3usize.pow(d as u32);
                let mut table = Vec::new();
                for i in 0..len {
                    for j in 0..len {
                        if let Some(k) = add_multi_index(i, j, d) {
                            table.push((i as u32, j as u32, k as u32));
                        }
                    }
                }
                table
            })
            .collect()
    });
    &tables[num_vars]
}

/// Digit-wise sum of two base-3 multi-indices, `None` if any slot exceeds 2.
fn add_multi_index(mut i: usize, mut j: usize, num_vars: usize) -> Option<usize> {
    let mut k = 0;
    let mut place = 1;
    for _ in 0..num_vars {
        let s = i % 3 + j % 3;
        if s > 2 {
            return None;
        }
        k += s * place;
        place *= 3;
        i /= 3;
        j /= 3;
    }
    Some(k)
}

fn total_degree(mut i: usize, num_vars: usize) -> usize {
    let mut deg = 0;
    for _ in 0..num_vars {
        deg += i % 3;
        i /= 3;
    }
    deg
}

/// Holomorphic functions that can be lifted to jets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Holo {
    /// Principal logarithm, cut along `(-∞, 0]`.
    Log,
    /// `z^α = exp(α log z)` on the principal branch.
    Pow(Complex64),
    Exp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// A complex scalar carrying its truncated Taylor expansion in `num_vars`
/// curve parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct JetScalar {
    num_vars: usize,
    coeffs: Vec<Complex64>,
}

/// True when `z` lies on the principal branch cut `(-∞, 0]`.
pub fn on_branch_cut(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0
}

impl JetScalar {
    pub fn constant(value: Complex64, num_vars: usize) -> Self {
        assert!(num_vars <= MAX_VARS, "at most {MAX_VARS} jet variables");
        let mut coeffs = vec![ZERO; 3usize.pow(num_vars as u32)];
        coeffs[0] = value;
        Self { num_vars, coeffs }
    }

    pub fn zero(num_vars: usize) -> Self {
        Self::constant(ZERO, num_vars)
    }

    /// `base + t_k`.
    pub fn variable(k: usize, base: Complex64, num_vars: usize) -> Result<Self> {
        if num_vars > MAX_VARS {
            return Err(Error::TooManyVariables(num_vars));
        }
        if k >= num_vars {
            return Err(Error::IndexOutOfRange {
                index: k,
                len: num_vars,
            });
        }
        let mut jet = Self::constant(base, num_vars);
        jet.coeffs[3usize.pow(k as u32)] = ONE;
        Ok(jet)
    }

    /// Builds a jet from dense base-3 ordered coefficients.
    pub fn from_coeffs(num_vars: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if num_vars > MAX_VARS {
            return Err(Error::TooManyVariables(num_vars));
        }
        let expected = 3usize.pow(num_vars as u32);
        if coeffs.len() != expected {
            return Err(Error::SizeMismatch {
                expected: format!("{expected} coefficients"),
                found: format!("{}", coeffs.len()),
            });
        }
        Ok(Self { num_vars, coeffs })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Value at `t = 0`.
    pub fn value(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// Coefficient of `t^α`; exponents above 2 read as zero.
    pub fn coeff(&self, alpha: &[u8]) -> Complex64 {
        assert_eq!(alpha.len(), self.num_vars);
        if alpha.iter().any(|&a| a > 2) {
            return ZERO;
        }
        let idx = alpha
            .iter()
            .rev()
            .fold(0usize, |acc, &a| acc * 3 + a as usize);
        self.coeffs[idx]
    }

    /// Coefficient of `t_0² t_1² ⋯ t_{d-1}²`.
    pub fn top_coeff(&self) -> Complex64 {
        self.coeffs[self.coeffs.len() - 1]
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            num_vars: self.num_vars,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.num_vars != other.num_vars {
            return Err(Error::VariableMismatch(self.num_vars, other.num_vars));
        }
        Ok(())
    }

    fn add_assign_scaled(&mut self, other: &Self, s: Complex64) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b * s;
        }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = vec![ZERO; self.coeffs.len()];
        for &(i, j, k) in mul_table(self.num_vars) {
            out[k as usize] += self.coeffs[i as usize] * other.coeffs[j as usize];
        }
        Self {
            num_vars: self.num_vars,
            coeffs: out,
        }
    }

    /// `self * other` accumulated into `acc`.
    pub(crate) fn mul_acc(acc: &mut Self, a: &Self, b: &Self) {
        for &(i, j, k) in mul_table(a.num_vars) {
            let (x, y) = (a.coeffs[i as usize], b.coeffs[j as usize]);
            if x != ZERO && y != ZERO {
                acc.coeffs[k as usize] += x * y;
            }
        }
    }

    pub fn arith(&self, other: &Self, op: ArithOp) -> Result<Self> {
        self.check_same(other)?;
        Ok(match op {
            ArithOp::Add => self.zip_with(other, |a, b| a + b),
            ArithOp::Sub => self.zip_with(other, |a, b| a - b),
            ArithOp::Mul => self.mul_unchecked(other),
            ArithOp::Div => self.mul_unchecked(&other.recip()?),
        })
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        Self {
            num_vars: self.num_vars,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// Highest total degree carried by a jet in this many variables.
    fn max_degree(&self) -> usize {
        2 * self.num_vars
    }

    /// Splits off the value: `self = v + n` with `n` nilpotent.
    fn split(&self) -> (Complex64, Self) {
        let mut nil = self.clone();
        nil.coeffs[0] = ZERO;
        (self.coeffs[0], nil)
    }

    /// `Σ_k series[k] · n^k` with `n` nilpotent.
    fn compose_series(nil: &Self, series: &[Complex64]) -> Self {
        let mut out = Self::constant(series[0], nil.num_vars);
        let mut power = Self::constant(ONE, nil.num_vars);
        for &c in &series[1..] {
            power = power.mul_unchecked(nil);
            out.add_assign_scaled(&power, c);
        }
        out
    }

    pub fn recip(&self) -> Result<Self> {
        let (v, nil) = self.split();
        if v == ZERO {
            return Err(Error::SingularPoint);
        }
        // 1/(v + n) = Σ (-1)^k n^k / v^{k+1}
        let inv = v.inv();
        let mut series = Vec::with_capacity(self.max_degree() + 1);
        let mut c = inv;
        for _ in 0..=self.max_degree() {
            series.push(c);
            c *= -inv;
        }
        Ok(Self::compose_series(&nil, &series))
    }

    pub fn holo(&self, f: Holo) -> Result<Self> {
        match f {
            Holo::Exp => Ok(self.exp()),
            Holo::Log => self.ln(),
            Holo::Pow(alpha) => self.powc(alpha),
        }
    }

    pub fn exp(&self) -> Self {
        let (v, nil) = self.split();
        let ev = v.exp();
        let mut series = Vec::with_capacity(self.max_degree() + 1);
        let mut c = ev;
        for k in 0..=self.max_degree() {
            if k > 0 {
                c /= k as f64;
            }
            series.push(c);
        }
        Self::compose_series(&nil, &series)
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Result<Self> {
        let (v, nil) = self.split();
        if on_branch_cut(v) {
            return Err(Error::BranchCut(v));
        }
        // log(v + n) = log v + Σ_{k≥1} (-1)^{k+1} (n/v)^k / k
        let inv = v.inv();
        let mut series = Vec::with_capacity(self.max_degree() + 1);
        series.push(v.ln());
        let mut p = ONE;
        for k in 1..=self.max_degree() {
            p *= inv;
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            series.push(p * (sign / k as f64));
        }
        Ok(Self::compose_series(&nil, &series))
    }

    /// `self^α = exp(α log self)`.
    pub fn powc(&self, alpha: Complex64) -> Result<Self> {
        if alpha == ZERO {
            return Ok(Self::constant(ONE, self.num_vars));
        }
        Ok(self.ln()?.scale(alpha).exp())
    }

    /// Integer power by repeated multiplication; defined everywhere.
    pub fn powi(&self, n: u32) -> Self {
        let mut out = Self::constant(ONE, self.num_vars);
        for _ in 0..n {
            out = out.mul_unchecked(self);
        }
        out
    }

    /// `d/dt_k` at `t_k = 0`, as a jet in the remaining variables.
    pub fn first_derivative(&self, k: usize) -> Result<Self> {
        self.slot_slice(k, 1, 1.0)
    }

    /// `d²/dt_k²` at `t_k = 0`, as a jet in the remaining variables.
    pub fn second_derivative(&self, k: usize) -> Result<Self> {
        self.slot_slice(k, 2, 2.0)
    }

    fn slot_slice(&self, k: usize, exponent: usize, factor: f64) -> Result<Self> {
        if k >= self.num_vars {
            return Err(Error::IndexOutOfRange {
                index: k,
                len: self.num_vars,
            });
        }
        let d = self.num_vars - 1;
        let low = 3usize.pow(k as u32);
        let mut coeffs = vec![ZERO; 3usize.pow(d as u32)];
        for (idx, c) in coeffs.iter_mut().enumerate() {
            let (lo, hi) = (idx % low, idx / low);
            let src = lo + low * (exponent + 3 * hi);
            *c = self.coeffs[src] * factor;
        }
        Ok(Self {
            num_vars: d,
            coeffs,
        })
    }

    /// Largest coefficient modulus among terms of the given total degree.
    pub fn degree_norm(&self, degree: usize) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(i, _)| total_degree(*i, self.num_vars) == degree)
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max)
    }
}

impl Add for &JetScalar {
    type Output = JetScalar;
    fn add(self, rhs: &JetScalar) -> JetScalar {
        assert_eq!(self.num_vars, rhs.num_vars);
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &JetScalar {
    type Output = JetScalar;
    fn sub(self, rhs: &JetScalar) -> JetScalar {
        assert_eq!(self.num_vars, rhs.num_vars);
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for &JetScalar {
    type Output = JetScalar;
    fn mul(self, rhs: &JetScalar) -> JetScalar {
        assert_eq!(self.num_vars, rhs.num_vars);
        self.mul_unchecked(rhs)
    }
}

impl Neg for &JetScalar {
    type Output = JetScalar;
    fn neg(self) -> JetScalar {
        self.scale(-ONE)
    }
}

/// Convenience free-function form of [`JetScalar::variable`].
pub fn jet_variable(k: usize, base: Complex64, num_vars: usize) -> Result<JetScalar> {
    JetScalar::variable(k, base, num_vars)
}

/// A matrix whose entries are jets over a shared set of variables.
#[derive(Debug, Clone, PartialEq)]
pub struct JetMatrix {
    rows: usize,
    cols: usize,
    num_vars: usize,
    entries: Vec<JetScalar>,
}

impl JetMatrix {
    /// Lifts a plain complex matrix to constant jets.
    pub fn constant(m: &nalgebra::DMatrix<Complex64>, num_vars: usize) -> Self {
        let (rows, cols) = m.shape();
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(JetScalar::constant(m[(i, j)], num_vars));
            }
        }
        Self {
            rows,
            cols,
            num_vars,
            entries,
        }
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<JetScalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::SizeMismatch {
                expected: format!("{} entries", rows * cols),
                found: entries.len().to_string(),
            });
        }
        let num_vars = entries.first().map_or(0, JetScalar::num_vars);
        if let Some(bad) = entries.iter().find(|e| e.num_vars != num_vars) {
            return Err(Error::VariableMismatch(num_vars, bad.num_vars));
        }
        Ok(Self {
            rows,
            cols,
            num_vars,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Entry `(i, j)`, zero-based.
    pub fn get(&self, i: usize, j: usize) -> &JetScalar {
        &self.entries[i * self.cols + j]
    }

    /// Matrix of values at `t = 0`.
    pub fn value(&self) -> nalgebra::DMatrix<Complex64> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).value())
    }

    pub fn matmul(&self, rhs: &JetMatrix) -> Result<JetMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::SizeMismatch {
                expected: format!("{} rows", self.cols),
                found: rhs.rows.to_string(),
            });
        }
        if self.num_vars != rhs.num_vars {
            return Err(Error::VariableMismatch(self.num_vars, rhs.num_vars));
        }
        let mut entries = Vec::with_capacity(self.rows * rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = JetScalar::zero(self.num_vars);
                for k in 0..self.cols {
                    JetScalar::mul_acc(&mut acc, self.get(i, k), rhs.get(k, j));
                }
                entries.push(acc);
            }
        }
        Ok(JetMatrix {
            rows: self.rows,
            cols: rhs.cols,
            num_vars: self.num_vars,
            entries,
        })
    }

    /// `self · (I + t_k X + t_k² X2)` in the truncated ring, for constant `X`, `X2`.
    pub fn right_mul_quadratic(
        &self,
        x: &nalgebra::DMatrix<Complex64>,
        x2: &nalgebra::DMatrix<Complex64>,
        k: usize,
    ) -> Result<JetMatrix> {
        if k >= self.num_vars {
            return Err(Error::IndexOutOfRange {
                index: k,
                len: self.num_vars,
            });
        }
        if x.shape() != (self.cols, self.cols) || x2.shape() != x.shape() {
            return Err(Error::SizeMismatch {
                expected: format!("{0}x{0}", self.cols),
                found: format!("{}x{}", x.nrows(), x.ncols()),
            });
        }
        let stride = 3usize.pow(k as u32);
        let len = 3usize.pow(self.num_vars as u32);
        let mut entries = self.entries.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let out = &mut entries[i * self.cols + j].coeffs;
                for idx in 0..len {
                    let slot = (idx / stride) % 3;
                    if slot == 0 {
                        continue;
                    }
                    let mut acc = ZERO;
                    for l in 0..self.cols {
                        let a = &self.get(i, l).coeffs;
                        acc += a[idx - stride] * x[(l, j)];
                        if slot == 2 {
                            acc += a[idx - 2 * stride] * x2[(l, j)];
                        }
                    }
                    out[idx] += acc;
                }
            }
        }
        Ok(JetMatrix {
            rows: self.rows,
            cols: self.cols,
            num_vars: self.num_vars,
            entries,
        })
    }
}
