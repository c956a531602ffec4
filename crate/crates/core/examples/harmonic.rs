//! Proper r-harmonic functions `f_r ∘ φ` on SU(3): `τʳ` vanishes while
//! `τ^{r-1}` does not.

use num_complex::Complex64;
use polyharmonia::catalog::{EigenFamily, Row, Sampling};
use polyharmonia::factory::{build_candidate, verify_harmonic, HarmonicCheck};
use polyharmonia::groups::GroupSpec;

fn main() -> polyharmonia::Result<()> {
    let spec: GroupSpec = "su:3".parse()?;
    let family = EigenFamily::generate(spec, Row::Main, 3)?;
    let one = Complex64::new(1.0, 0.0);
    for r in 1..=3 {
        let cand = build_candidate(&family, r, one, Complex64::new(0.5, -1.0))?;
        let rec = verify_harmonic(&cand, &Sampling::new(10, 4), &HarmonicCheck::for_order(r))?;
        println!(
            "r={r} {:?} exponent={:?}: max|tau^r|={:.1e} max|tau^(r-1)|={:.1e} proper={:.0}% {:?}",
            rec.case,
            cand.holo.exponent().map(|a| a.re),
            rec.max_zero_residual,
            rec.max_lower,
            100.0 * rec.properness_fraction,
            rec.verdict
        );
    }
    Ok(())
}
