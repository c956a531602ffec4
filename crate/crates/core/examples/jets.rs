//! Exact derivatives from truncated jets: the second mixed derivative of
//! `log(s·t + 2)` and the principal power `z^(-3)` near the branch cut.

use num_complex::Complex64;
use polyharmonia::taylor::{on_branch_cut, Holo, JetScalar};

fn main() -> polyharmonia::Result<()> {
    let c = |re, im| Complex64::new(re, im);

    let s = JetScalar::variable(0, c(1.0, 0.0), 2)?;
    let t = JetScalar::variable(1, c(0.5, 0.0), 2)?;
    let f = (&(&s * &t) + &JetScalar::constant(c(2.0, 0.0), 2)).ln()?;
    println!("f         = {}", f.value());
    println!("df/ds     = {}", f.coeff(&[1, 0]));
    println!("d2f/dsdt  = {}", f.coeff(&[1, 1]));
    // closed form: 1/(st+2) - st/(st+2)^2 at (1, 1/2)
    let u = 2.5;
    println!("expected  = {}", 1.0 / u - 0.5 / (u * u));

    for z in [c(-1.0, 1e-3), c(-1.0, -1e-3), c(-1.0, 0.0)] {
        let jet = JetScalar::variable(0, z, 1)?;
        match jet.holo(Holo::Pow(c(-3.0, 0.0))) {
            Ok(p) => println!(
                "z = {z}: z^-3 = {:.6}, derivative {:.6}",
                p.value(),
                p.coeff(&[1])
            ),
            Err(e) => println!("z = {z}: {e} (on cut: {})", on_branch_cut(z)),
        }
    }
    Ok(())
}
