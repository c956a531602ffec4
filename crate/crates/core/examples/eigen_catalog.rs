//! Every catalog row: the closed-form `(λ, μ)` and the worst residuals of
//! `τ(φ) = λφ`, `κ(φ, φ) = μφ²` over 20 random points.

use polyharmonia::catalog::{feasible_rows, verify_eigen, EigenFamily, Sampling};
use polyharmonia::groups::GroupSpec;

fn main() -> polyharmonia::Result<()> {
    let groups = [
        "so:4", "su:3", "sp:2", "slr:3", "spr:2", "soo:2,2", "soo:3,1", "suu:1,2", "spp:1,1",
        "sostar:2", "sustar:2",
    ];
    for g in groups {
        let spec: GroupSpec = g.parse()?;
        for row in feasible_rows(&spec) {
            let family = EigenFamily::generate(spec, row, 1)?;
            let rec = verify_eigen(&family, &Sampling::new(20, 2), 1e-8)?;
            println!(
                "{:<10} {:<4} lambda={:<8.4} mu={:<8.4} e_tau={:.1e} e_kappa={:.1e} {:?}",
                spec.to_string(),
                row.as_str(),
                family.lambda.re,
                family.mu.re,
                rec.max_e_tau,
                rec.max_e_kappa,
                rec.verdict
            );
        }
    }
    Ok(())
}
