//! The univariate ODE `L = μz²d² + λz d` applied to the closed-form
//! solutions, independently of the group machinery.

use num_complex::Complex64;
use polyharmonia::factory::HolomorphicCase;
use polyharmonia::oracle::{default_order, ode_cascade_residual, ode_sweep};

fn main() -> polyharmonia::Result<()> {
    let c = |re| Complex64::new(re, 0.0);
    let pairs = [
        (c(-8.0 / 3.0), c(-2.0 / 3.0)),
        (c(-0.5), c(-0.5)),
        (c(1.0), c(0.0)),
    ];
    let z = Complex64::new(0.8, 0.6);
    for (lambda, mu) in pairs {
        for r in 1..=3 {
            let holo = HolomorphicCase::new(lambda, mu, r, c(1.0), c(1.0))?;
            let (zero, lower) = ode_cascade_residual(&holo, z, default_order(r))?;
            let sweep = ode_sweep(&holo, 100, 9, 1e-9, 1e-6)?;
            println!(
                "lambda={:<7.3} mu={:<7.3} r={r} {:?}: |L^r f|={zero:.1e} |L^(r-1) f|={lower:.1e} sweep {:?}",
                lambda.re, mu.re, holo.case, sweep.verdict
            );
        }
    }
    Ok(())
}
