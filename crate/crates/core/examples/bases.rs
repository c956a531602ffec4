//! Orthonormal Lie-algebra bases for every supported group, with a sampled
//! point's distance from the group.

use polyharmonia::groups::{
    algebra_basis, membership_residual, random_point, GroupSpec, DEFAULT_SCALE,
};

fn main() -> polyharmonia::Result<()> {
    let groups = [
        "so:4", "su:3", "sp:2", "slr:3", "spr:2", "soo:2,2", "soo:3,1", "suu:1,2", "spp:1,1",
        "sostar:2", "sustar:2", "u:3",
    ];
    println!(
        "{:<10} {:>4} {:>6} {:>10} {:>10}",
        "group", "dim", "size", "gram", "sample"
    );
    for g in groups {
        let spec: GroupSpec = g.parse()?;
        let basis = algebra_basis(&spec);
        let p = random_point(&basis, 42, DEFAULT_SCALE);
        println!(
            "{:<10} {:>4} {:>6} {:>10.1e} {:>10.1e}",
            spec.to_string(),
            basis.dim(),
            spec.ambient_size(),
            basis.gram_residual(),
            membership_residual(&spec, &p)?
        );
    }
    Ok(())
}
