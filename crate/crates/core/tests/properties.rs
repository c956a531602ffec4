use num_complex::Complex64;
use proptest::prelude::*;

use polyharmonia::calculus::{conformality, laplacian, LinearCombination, ScalarField};
use polyharmonia::catalog::{make_eigenfunction, EigenFamily, Row};
use polyharmonia::groups::{algebra_basis, membership_residual, random_point, GroupSpec};
use polyharmonia::oracle::{ode_apply, TaylorSeries};
use polyharmonia::taylor::{ArithOp, JetScalar};

fn complex() -> impl Strategy<Value = Complex64> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn jet(vars: usize) -> impl Strategy<Value = JetScalar> {
    prop::collection::vec(complex(), 3usize.pow(vars as u32))
        .prop_map(move |c| JetScalar::from_coeffs(vars, c).unwrap())
}

fn close(a: &JetScalar, b: &JetScalar, tol: f64) -> bool {
    let scale = 1.0 + a.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    a.coeffs()
        .iter()
        .zip(b.coeffs())
        .all(|(x, y)| (x - y).norm() <= tol * scale)
}

const GROUPS: &[&str] = &["so:4", "su:3", "slr:3", "sp:2", "soo:2,2", "sostar:2"];

fn family(g: usize, seed: u64) -> EigenFamily {
    let spec: GroupSpec = GROUPS[g].parse().unwrap();
    let row = polyharmonia::catalog::feasible_rows(&spec)[0];
    EigenFamily::generate(spec, row, seed).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jet_ring_laws(a in jet(2), b in jet(2), c in jet(2)) {
        let ab = a.arith(&b, ArithOp::Mul).unwrap();
        let ba = b.arith(&a, ArithOp::Mul).unwrap();
        prop_assert!(close(&ab, &ba, 1e-14));
        let left = ab.arith(&c, ArithOp::Mul).unwrap();
        let right = a.arith(&b.arith(&c, ArithOp::Mul).unwrap(), ArithOp::Mul).unwrap();
        prop_assert!(close(&left, &right, 1e-12));
        let dist = a.arith(&b.arith(&c, ArithOp::Add).unwrap(), ArithOp::Mul).unwrap();
        let expanded = &ab + &a.arith(&c, ArithOp::Mul).unwrap();
        prop_assert!(close(&dist, &expanded, 1e-12));
    }

    #[test]
    fn division_inverts_multiplication(a in jet(2), b in jet(2)) {
        prop_assume!(b.value().norm() > 0.5);
        let q = a.arith(&b, ArithOp::Div).unwrap();
        let back = q.arith(&b, ArithOp::Mul).unwrap();
        prop_assert!(close(&back, &a, 1e-10));
    }

    #[test]
    fn log_inverts_exp(a in jet(3)) {
        // keep the imaginary part of the value inside (-π, π]
        prop_assume!(a.value().im.abs() < 3.0);
        let round = a.exp().ln().unwrap();
        prop_assert!(close(&round, &a, 1e-10));
    }

    #[test]
    fn polynomials_are_reproduced(coeffs in prop::collection::vec(complex(), 9), x in complex(), y in complex()) {
        // p(s, t) = Σ c_{ij} s^i t^j with i, j ≤ 2, expanded at (x, y)
        let s = JetScalar::variable(0, x, 2).unwrap();
        let t = JetScalar::variable(1, y, 2).unwrap();
        let shifted_s = &s - &JetScalar::constant(x, 2);
        let shifted_t = &t - &JetScalar::constant(y, 2);
        let mut p = JetScalar::zero(2);
        for i in 0..3 {
            for j in 0..3 {
                let term = &shifted_s.powi(i) * &shifted_t.powi(j);
                p = &p + &term.scale(coeffs[i as usize + 3 * j as usize]);
            }
        }
        for (got, want) in p.coeffs().iter().zip(&coeffs) {
            prop_assert!((got - want).norm() <= 1e-14 * (1.0 + want.norm()));
        }
    }

    #[test]
    fn ode_operator_is_linear(
        center in (0.5f64..2.0, -1.0f64..1.0),
        a in complex(), b in complex(), lambda in complex(), mu in complex(),
        f in prop::collection::vec(complex(), 6),
        g in prop::collection::vec(complex(), 6),
    ) {
        let z0 = Complex64::new(center.0, center.1);
        let fs = TaylorSeries { center: z0, coeffs: f };
        let gs = TaylorSeries { center: z0, coeffs: g };
        let combo = fs.scale(a).add(&gs.scale(b));
        let lhs = ode_apply(&combo, lambda, mu).unwrap();
        let rhs = ode_apply(&fs, lambda, mu).unwrap().scale(a)
            .add(&ode_apply(&gs, lambda, mu).unwrap().scale(b));
        for (x, y) in lhs.coeffs.iter().zip(&rhs.coeffs) {
            prop_assert!((x - y).norm() <= 1e-12 * (1.0 + x.norm()));
        }
    }

    #[test]
    fn conformality_is_symmetric_and_bilinear(
        g in 0..GROUPS.len(), seed in any::<u64>(), point in any::<u64>(),
        a in complex(), b in complex(),
    ) {
        let phi = make_eigenfunction(&family(g, seed)).unwrap();
        let psi = make_eigenfunction(&family(g, seed ^ 1)).unwrap();
        let chi = make_eigenfunction(&family(g, seed ^ 2)).unwrap();
        let basis = algebra_basis(&family(g, seed).spec);
        let p = random_point(&basis, point, 0.3);
        let k = |f: &dyn ScalarField, h: &dyn ScalarField| conformality(f, h, &basis, &p).unwrap();
        prop_assert_eq!(k(&phi, &psi), k(&psi, &phi));
        let combo = LinearCombination { a, f: &psi, b, g: &chi };
        let lhs = k(&phi, &combo);
        let rhs = a * k(&phi, &psi) + b * k(&phi, &chi);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
    }

    #[test]
    fn laplacian_is_linear(
        g in 0..GROUPS.len(), seed in any::<u64>(), point in any::<u64>(),
        a in complex(), b in complex(),
    ) {
        let phi = make_eigenfunction(&family(g, seed)).unwrap();
        let psi = make_eigenfunction(&family(g, seed ^ 1)).unwrap();
        let basis = algebra_basis(&family(g, seed).spec);
        let p = random_point(&basis, point, 0.3);
        let combo = LinearCombination { a, f: &phi, b, g: &psi };
        let lhs = laplacian(&combo, &basis, &p).unwrap();
        let rhs = a * laplacian(&phi, &basis, &p).unwrap() + b * laplacian(&psi, &basis, &p).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
    }

    #[test]
    fn sampled_points_lie_on_the_group(g in 0..GROUPS.len(), seed in any::<u64>()) {
        let spec: GroupSpec = GROUPS[g].parse().unwrap();
        let basis = algebra_basis(&spec);
        let p = random_point(&basis, seed, 0.3);
        prop_assert!(membership_residual(&spec, &p).unwrap() <= 1e-10);
        prop_assert_eq!(p, random_point(&basis, seed, 0.3));
    }

    #[test]
    fn eigen_parameters_are_deterministic(seed in any::<u64>()) {
        let spec: GroupSpec = "sostar:2".parse().unwrap();
        let a = EigenFamily::generate(spec, Row::W, seed).unwrap();
        let b = EigenFamily::generate(spec, Row::W, seed).unwrap();
        prop_assert_eq!(&a.params, &b.params);
        prop_assert!(a.condition_residual() <= 1e-12);
    }
}
