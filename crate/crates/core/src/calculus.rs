//! Tension field τ, conformality operator κ and iterated τʳ at points of a
//! matrix group, evaluated along an orthonormal left-invariant frame.
//!
//! All catalog groups are unimodular, so for an orthonormal frame `{X_i}` the
//! Laplace–Beltrami operator is `τ(f)(p) = Σ_i d²/dt² f(p·exp(tX_i))|₀` and
//! `κ(f, g)(p) = Σ_i (d/dt f)(d/dt g)` along the same curves.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::groups::{AlgebraBasis, CMatrix};
use crate::taylor::{JetMatrix, JetScalar};

/// Highest order of τʳ accepted by [`iterated_laplacian`].
pub const DEFAULT_MAX_ORDER: usize = 4;

/// A complex-valued function on a matrix group that can be evaluated on jets.
pub trait ScalarField: Send + Sync {
    fn eval(&self, x: &JetMatrix) -> Result<JetScalar>;

    fn describe(&self) -> String;

    fn value_at(&self, p: &CMatrix) -> Result<Complex64> {
        Ok(self.eval(&JetMatrix::constant(p, 0))?.value())
    }
}

impl<T: ScalarField + ?Sized> ScalarField for Arc<T> {
    fn eval(&self, x: &JetMatrix) -> Result<JetScalar> {
        (**self).eval(x)
    }
    fn describe(&self) -> String {
        (**self).describe()
    }
}

impl<T: ScalarField + ?Sized> ScalarField for &T {
    fn eval(&self, x: &JetMatrix) -> Result<JetScalar> {
        (**self).eval(x)
    }
    fn describe(&self) -> String {
        (**self).describe()
    }
}

/// Wraps a closure as a field.
pub struct FnField<F> {
    name: String,
    f: F,
}

impl<F> FnField<F>
where
    F: Fn(&JetMatrix) -> Result<JetScalar> + Send + Sync,
{
    pub fn new(name: impl Into<String>, f: F) -> Self {
        Self {
            name: name.into(),
            f,
        }
    }
}

impl<F> ScalarField for FnField<F>
where
    F: Fn(&JetMatrix) -> Result<JetScalar> + Send + Sync,
{
    fn eval(&self, x: &JetMatrix) -> Result<JetScalar> {
        (self.f)(x)
    }
    fn describe(&self) -> String {
        self.name.clone()
    }
}

impl<F> fmt::Debug for FnField<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnField").field("name", &self.name).finish()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ConstantField(pub Complex64);

impl ScalarField for ConstantField {
    fn eval(&self, x: &JetMatrix) -> Result<JetScalar> {
        Ok(JetScalar::constant(self.0, x.num_vars()))
    }
    fn describe(&self) -> String {
        format!("constant {}", self.0)
    }
}

/// Pointwise product `f·g`.
pub struct ProductField<F, G>(pub F, pub G);

impl<F: ScalarField, G: ScalarField> ScalarField for ProductField<F, G> {
    fn eval(&self, x: &JetMatrix) -> Result<JetScalar> {
        Ok(&self.0.eval(x)? * &self.1.eval(x)?)
    }
    fn describe(&self) -> String {
        format!("({}) * ({})", self.0.describe(), self.1.describe())
    }
}

/// `a·f + b·g`.
pub struct LinearCombination<F, G> {
    pub a: Complex64,
    pub f: F,
    pub b: Complex64,
    pub g: G,
}

impl<F: ScalarField, G: ScalarField> ScalarField for LinearCombination<F, G> {
    fn eval(&self, x: &JetMatrix) -> Result<JetScalar> {
        let (f, g) = (self.f.eval(x)?, self.g.eval(x)?);
        Ok(&f.scale(self.a) + &g.scale(self.b))
    }
    fn describe(&self) -> String {
        format!(
            "{}*({}) + {}*({})",
            self.a,
            self.f.describe(),
            self.b,
            self.g.describe()
        )
    }
}

fn along(f: &dyn ScalarField, p: &CMatrix, x: &CMatrix) -> Result<JetScalar> {
    f.eval(&JetMatrix::constant(p, 1).right_mul_exp(x, 0)?)
}

/// `d/dt f(p·exp(tX))` at `t = 0`.
pub fn directional_first(f: &dyn ScalarField, p: &CMatrix, x: &CMatrix) -> Result<Complex64> {
    Ok(along(f, p, x)?.first_derivative(0)?.value())
}

/// `d²/dt² f(p·exp(tX))` at `t = 0`.
pub fn directional_second(f: &dyn ScalarField, p: &CMatrix, x: &CMatrix) -> Result<Complex64> {
    Ok(along(f, p, x)?.second_derivative(0)?.value())
}

/// τ(f)(p).
pub fn laplacian(f: &dyn ScalarField, basis: &AlgebraBasis, p: &CMatrix) -> Result<Complex64> {
    basis
        .basis
        .iter()
        .map(|x| directional_second(f, p, x))
        .sum()
}

/// κ(f, g)(p), the complex-bilinear pairing of the gradients.
pub fn conformality(
    f: &dyn ScalarField,
    g: &dyn ScalarField,
    basis: &AlgebraBasis,
    p: &CMatrix,
) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for x in &basis.basis {
        let df = along(f, p, x)?.first_derivative(0)?.value();
        let dg = along(g, p, x)?.first_derivative(0)?.value();
        acc += df * dg;
    }
    Ok(acc)
}

/// τʳ(f)(p) with the default order ceiling.
pub fn iterated_laplacian(
    f: &dyn ScalarField,
    basis: &AlgebraBasis,
    p: &CMatrix,
    r: usize,
) -> Result<Complex64> {
    iterated_laplacian_with_ceiling(f, basis, p, r, DEFAULT_MAX_ORDER)
}

/// τʳ(f)(p) as `Σ_{i_1…i_r} ∂²_{t_1}⋯∂²_{t_r} f(p·exp(t_1 X_{i_1})⋯exp(t_r X_{i_r}))`,
/// one r-variable jet per index tuple. `r = 0` returns `f(p)`.
///
/// The outermost index is spread over the rayon pool; partial sums are added
/// in index order so the result does not depend on scheduling.
pub fn iterated_laplacian_with_ceiling(
    f: &dyn ScalarField,
    basis: &AlgebraBasis,
    p: &CMatrix,
    r: usize,
    ceiling: usize,
) -> Result<Complex64> {
    Ok(iterated_laplacian_terms(f, basis, p, r, ceiling)?.value)
}

/// τʳ(f)(p) together with the size of the terms that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TupleSum {
    pub value: Complex64,
    /// `Σ |term|` over index tuples.
    pub magnitude: f64,
}

impl TupleSum {
    /// `ε · Σ |term|`: the size of the rounding error to expect in `value`.
    /// Residuals at this level are indistinguishable from zero in double
    /// precision.
    pub fn rounding_floor(&self) -> f64 {
        f64::EPSILON * self.magnitude
    }
}

/// Like [`iterated_laplacian_with_ceiling`], also reporting `Σ |term|`.
pub fn iterated_laplacian_terms(
    f: &dyn ScalarField,
    basis: &AlgebraBasis,
    p: &CMatrix,
    r: usize,
    ceiling: usize,
) -> Result<TupleSum> {
    if r > ceiling {
        return Err(Error::UnsupportedOrder { order: r, ceiling });
    }
    if r == 0 {
        let value = f.value_at(p)?;
        return Ok(TupleSum {
            value,
            magnitude: value.norm(),
        });
    }
    let half = Complex64::new(0.5, 0.0);
    let frame: Vec<(CMatrix, CMatrix)> = basis
        .basis
        .iter()
        .map(|x| (x.clone(), x * x * half))
        .collect();
    let start = JetMatrix::constant(p, r);
    let partials: Vec<Result<TupleSum>> = frame
        .par_iter()
        .map(|(x, x2)| {
            let next = start.right_mul_quadratic(x, x2, 0)?;
            tuple_sum(f, &frame, &next, 1, r)
        })
        .collect();
    let mut total = TupleSum {
        value: Complex64::new(0.0, 0.0),
        magnitude: 0.0,
    };
    for part in partials {
        let part = part?;
        total.value += part.value;
        total.magnitude += part.magnitude;
    }
    Ok(total)
}

fn tuple_sum(
    f: &dyn ScalarField,
    frame: &[(CMatrix, CMatrix)],
    prefix: &JetMatrix,
    level: usize,
    r: usize,
) -> Result<TupleSum> {
    if level == r {
        // ∂²_{t_1}⋯∂²_{t_r} at 0 is 2^r times the t_1²⋯t_r² coefficient
        let value = f.eval(prefix)?.top_coeff() * 2f64.powi(r as i32);
        return Ok(TupleSum {
            value,
            magnitude: value.norm(),
        });
    }
    let mut acc = TupleSum {
        value: Complex64::new(0.0, 0.0),
        magnitude: 0.0,
    };
    for (x, x2) in frame {
        let next = prefix.right_mul_quadratic(x, x2, level)?;
        let part = tuple_sum(f, frame, &next, level + 1, r)?;
        acc.value += part.value;
        acc.magnitude += part.magnitude;
    }
    Ok(acc)
}
