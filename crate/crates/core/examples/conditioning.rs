//! How far `τ³ Φ` can be trusted in double precision. The tuple sum adds
//! terms of size about `|F⁽⁶⁾(φ)|·(|∇φ|/|φ|)⁶` that cancel to zero, so the
//! rounding floor `ε·Σ|term|` grows quickly as `φ(p)` approaches 0. The `w`
//! block of SO*(4) is small near the identity, which makes this row the
//! worst case.

use num_complex::Complex64;
use polyharmonia::calculus::{iterated_laplacian_terms, ScalarField, DEFAULT_MAX_ORDER};
use polyharmonia::catalog::{make_eigenfunction, EigenFamily, Row};
use polyharmonia::factory::build_candidate;
use polyharmonia::groups::{algebra_basis, random_point, GroupSpec};

fn main() -> polyharmonia::Result<()> {
    let spec: GroupSpec = "sostar:2".parse()?;
    let family = EigenFamily::generate(spec, Row::W, 1)?;
    let phi = make_eigenfunction(&family)?;
    let field = build_candidate(
        &family,
        3,
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
    )?
    .field()?;
    let basis = algebra_basis(&spec);
    let mut rows = Vec::new();
    for seed in 0..24 {
        let p = random_point(&basis, seed, 0.3);
        let v = phi.value_at(&p)?;
        let sum = iterated_laplacian_terms(&field, &basis, &p, 3, DEFAULT_MAX_ORDER)?;
        rows.push((v.norm(), sum.value.norm(), sum.rounding_floor()));
    }
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    println!("{:>8} {:>10} {:>10}", "|phi|", "|tau^3|", "floor");
    for (phi, tau, floor) in rows {
        println!("{phi:>8.3} {tau:>10.1e} {floor:>10.1e}");
    }
    Ok(())
}
