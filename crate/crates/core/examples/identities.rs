//! Two structural identities: the product rule
//! `τ(φψ) = τ(φ)ψ + 2κ(φ, ψ) + φτ(ψ)` and the split of the U(n) Laplacian
//! into its SU(n) part plus the central direction `(i/√n)I`.

use num_complex::Complex64;
use polyharmonia::calculus::{
    conformality, directional_second, laplacian, ProductField, ScalarField,
};
use polyharmonia::catalog::{make_eigenfunction, EigenFamily, Row};
use polyharmonia::groups::{algebra_basis, random_point, CMatrix, GroupSpec};

fn main() -> polyharmonia::Result<()> {
    let spec: GroupSpec = "sp:2".parse()?;
    let phi = make_eigenfunction(&EigenFamily::generate(spec, Row::Main, 1)?)?;
    let psi = make_eigenfunction(&EigenFamily::generate(spec, Row::Main, 2)?)?;
    let basis = algebra_basis(&spec);
    let p = random_point(&basis, 3, 0.3);
    let lhs = laplacian(&ProductField(&phi, &psi), &basis, &p)?;
    let rhs = laplacian(&phi, &basis, &p)? * psi.value_at(&p)?
        + conformality(&phi, &psi, &basis, &p)? * 2.0
        + phi.value_at(&p)? * laplacian(&psi, &basis, &p)?;
    println!(
        "product rule on {spec}: |lhs - rhs| = {:.1e}",
        (lhs - rhs).norm()
    );

    for n in [2usize, 3] {
        let u: GroupSpec = format!("u:{n}").parse()?;
        let su: GroupSpec = format!("su:{n}").parse()?;
        let phi = make_eigenfunction(&EigenFamily::generate(u, Row::Main, 5)?)?;
        let (ub, sb) = (algebra_basis(&u), algebra_basis(&su));
        let q = random_point(&sb, 6, 0.3);
        let x = CMatrix::identity(n, n) * Complex64::new(0.0, 1.0 / (n as f64).sqrt());
        let gap = laplacian(&phi, &sb, &q)?
            - (laplacian(&phi, &ub, &q)? - directional_second(&phi, &q, &x)?);
        let v = phi.value_at(&q)?;
        println!(
            "n={n}: tau_U(phi) + n phi = {:.1e}, tau_SU - (tau_U - X^2) = {:.1e}",
            (laplacian(&phi, &ub, &q)? + v * n as f64).norm(),
            gap.norm()
        );
    }
    Ok(())
}
