//! End-to-end acceptance suite. Prints one line per criterion and exits
//! nonzero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex64;

use polyharmonia::calculus::{
    conformality, directional_second, laplacian, ProductField, ScalarField,
};
use polyharmonia::campaign::{self, normalized_json, CampaignConfig, DEFAULT_HARMONIC_GROUPS};
use polyharmonia::catalog::Sampling;
use polyharmonia::catalog::{feasible_rows, make_eigenfunction, EigenFamily, Row};
use polyharmonia::factory::{check_polyharmonic, HarmonicCheck};
use polyharmonia::groups::{
    algebra_basis, membership_residual, random_point, CMatrix, Family, GroupSpec,
};
use polyharmonia::oracle::{fd_laplacian, DEFAULT_FD_STEP};
use polyharmonia::report::Verdict;
use polyharmonia::seeds;

const BASIS_GROUPS: &[&str] = &[
    "so:4", "su:3", "sp:2", "slr:3", "spr:2", "soo:2,2", "soo:3,1", "suu:1,2", "spp:1,1",
    "sostar:2", "sustar:2", "u:3",
];

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, budget_secs: u64) -> bool {
    elapsed < Duration::from_secs(budget_secs)
}

fn spec(s: &str) -> GroupSpec {
    s.parse().expect("group spec")
}

// ---------------------------------------------------------------------------
// constraint-rank oracle

fn jn(n: usize) -> CMatrix {
    let mut m = CMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        m[(i, n + i)] = ONE;
        m[(n + i, i)] = -ONE;
    }
    m
}

fn ipq(p: usize, q: usize) -> CMatrix {
    CMatrix::from_fn(p + q, p + q, |i, j| {
        if i != j {
            ZERO
        } else if i < p {
            -ONE
        } else {
            ONE
        }
    })
}

fn diag2(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let mut m = CMatrix::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(a);
    m.view_mut((n, n), (n, n)).copy_from(a);
    m
}

fn conj(x: &CMatrix) -> CMatrix {
    x.map(|c| c.conj())
}

/// Tangent-space equations at the identity, flattened to real components.
fn linear_constraints(g: &GroupSpec, x: &CMatrix) -> Vec<f64> {
    let n = g.n();
    let mut eqs: Vec<CMatrix> = Vec::new();
    let hermitian = |f: &CMatrix| x * f + f * x.adjoint();
    let bilinear = |f: &CMatrix| x * f + f * x.transpose();
    let quaternionic = || x * jn(n) - jn(n) * conj(x);
    let trace = CMatrix::from_element(1, 1, x.trace());
    let real = x.map(|c| Complex64::new(c.im, 0.0));
    let id = CMatrix::identity(x.nrows(), x.nrows());
    match g.family {
        Family::SO => eqs.extend([bilinear(&id), real]),
        Family::SU => eqs.extend([hermitian(&id), trace]),
        Family::U => eqs.push(hermitian(&id)),
        Family::Sp => eqs.extend([hermitian(&id), quaternionic()]),
        Family::SLR => eqs.extend([trace, real]),
        Family::SpR => eqs.extend([bilinear(&jn(n)), real]),
        Family::SOO => {
            let (p, q) = g.pq().unwrap();
            eqs.extend([bilinear(&ipq(p, q)), real]);
        }
        Family::SUU => {
            let (p, q) = g.pq().unwrap();
            eqs.extend([hermitian(&ipq(p, q)), trace]);
        }
        Family::Spp => {
            let (p, q) = g.pq().unwrap();
            eqs.extend([hermitian(&diag2(&ipq(p, q))), quaternionic()]);
        }
        Family::SOstar => {
            let k = ipq(n, n) * jn(n);
            eqs.extend([hermitian(&ipq(n, n)), bilinear(&k)]);
        }
        Family::SUstar => eqs.extend([quaternionic(), trace]),
    }
    eqs.iter()
        .flat_map(|m| m.iter().flat_map(|c| [c.re, c.im]).collect::<Vec<_>>())
        .collect()
}

/// `2N² − rank` of the linearized constraints.
fn constraint_rank_dim(g: &GroupSpec) -> usize {
    let size = g.ambient_size();
    let mut columns = Vec::new();
    for k in 0..size * size {
        for unit in [ONE, Complex64::new(0.0, 1.0)] {
            let mut e = CMatrix::zeros(size, size);
            e[(k / size, k % size)] = unit;
            columns.push(linear_constraints(g, &e));
        }
    }
    let rows = columns[0].len();
    let m = DMatrix::from_fn(rows, columns.len(), |i, j| columns[j][i]);
    2 * size * size - m.rank(1e-9)
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let mut bad = Vec::new();
    for g in BASIS_GROUPS.iter().map(|s| spec(s)) {
        let basis = algebra_basis(&g);
        let oracle = constraint_rank_dim(&g);
        let tangent = basis
            .basis
            .iter()
            .map(|x| {
                linear_constraints(&g, x)
                    .iter()
                    .fold(0.0f64, |a, v| a.max(v.abs()))
            })
            .fold(0.0, f64::max);
        let membership = basis
            .basis
            .iter()
            .map(|x| membership_residual(&g, &polyharmonia::groups::expm(&x.scale(0.1))).unwrap())
            .fold(0.0, f64::max);
        let gram = basis.gram_residual();
        if gram > 1e-12 || basis.dim() != oracle || membership > 1e-8 || tangent > 1e-12 {
            bad.push(format!(
                "{g}: dim {} vs rank oracle {oracle}, gram {gram:.1e}, exp membership {membership:.1e}",
                basis.dim()
            ));
        }
    }
    let elapsed = t.elapsed();
    let pass = bad.is_empty() && within(elapsed, 5);
    outcome(
        pass,
        format!(
            "12 groups, {:.2}s {}",
            elapsed.as_secs_f64(),
            bad.join("; ")
        ),
    )
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let report = campaign::run_eigen(&CampaignConfig::default()).expect("eigen campaign");
    let elapsed = t.elapsed();
    let worst_tau = report.eigen.iter().map(|e| e.max_e_tau).fold(0.0, f64::max);
    let worst_kappa = report
        .eigen
        .iter()
        .map(|e| e.max_e_kappa)
        .fold(0.0, f64::max);
    // both rows of every two-row family are present
    let expected: usize = CampaignConfig::default()
        .specs()
        .unwrap()
        .iter()
        .map(|s| feasible_rows(s).len())
        .sum();
    let pass = report.overall == Verdict::Pass
        && report.eigen.len() == expected
        && report.eigen.iter().all(|e| e.samples == 20)
        && within(elapsed, 30);
    outcome(
        pass,
        format!(
            "{} rows, max e_tau {worst_tau:.1e}, max e_kappa {worst_kappa:.1e}, {:.2}s",
            report.eigen.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_3() -> Outcome {
    let groups: Vec<GroupSpec> = campaign::DEFAULT_GROUPS.iter().map(|s| spec(s)).collect();
    let mut worst: f64 = 0.0;
    for k in 0..50u64 {
        let g = groups[k as usize % groups.len()];
        let rows = feasible_rows(&g);
        let row = rows[(k as usize / groups.len()) % rows.len()];
        let s1 = seeds::derive(7, &[seeds::label("product"), k, 1]);
        let s2 = seeds::derive(7, &[seeds::label("product"), k, 2]);
        let phi = make_eigenfunction(&EigenFamily::generate(g, row, s1).unwrap()).unwrap();
        let psi = make_eigenfunction(&EigenFamily::generate(g, row, s2).unwrap()).unwrap();
        let basis = algebra_basis(&g);
        let p = random_point(
            &basis,
            seeds::derive(7, &[seeds::label("product"), k, 3]),
            0.3,
        );
        let prod = ProductField(&phi, &psi);
        let lhs = laplacian(&prod, &basis, &p).unwrap();
        let (a, b) = (phi.value_at(&p).unwrap(), psi.value_at(&p).unwrap());
        let rhs = laplacian(&phi, &basis, &p).unwrap() * b
            + conformality(&phi, &psi, &basis, &p).unwrap() * 2.0
            + a * laplacian(&psi, &basis, &p).unwrap();
        worst = worst.max((lhs - rhs).norm() / (1.0 + (a * b).norm()));
    }
    outcome(
        worst <= 1e-9,
        format!("50 instances, max scaled residual {worst:.1e}"),
    )
}

fn criterion_4() -> Outcome {
    let mut worst_u: f64 = 0.0;
    let mut worst_su: f64 = 0.0;
    for n in [2usize, 3] {
        let u = spec(&format!("u:{n}"));
        let su = spec(&format!("su:{n}"));
        let fam = EigenFamily::generate(u, Row::Main, seeds::derive(11, &[n as u64])).unwrap();
        let phi = make_eigenfunction(&fam).unwrap();
        let ubasis = algebra_basis(&u);
        let subasis = algebra_basis(&su);
        let central =
            CMatrix::identity(n, n).scale(1.0 / (n as f64).sqrt()) * Complex64::new(0.0, 1.0);
        for k in 0..20u64 {
            let p = random_point(&ubasis, seeds::derive(11, &[n as u64, k, 0]), 0.3);
            let v = phi.value_at(&p).unwrap();
            let tau = laplacian(&phi, &ubasis, &p).unwrap();
            let kappa = conformality(&phi, &phi, &ubasis, &p).unwrap();
            worst_u = worst_u
                .max((tau + v * n as f64).norm())
                .max((kappa + v * v).norm());
            let q = random_point(&subasis, seeds::derive(11, &[n as u64, k, 1]), 0.3);
            let tau_su = laplacian(&phi, &subasis, &q).unwrap();
            let tau_u = laplacian(&phi, &ubasis, &q).unwrap();
            let x2 = directional_second(&phi, &q, &central).unwrap();
            worst_su = worst_su.max((tau_su - (tau_u - x2)).norm());
        }
    }
    outcome(
        worst_u <= 1e-9 && worst_su <= 1e-9,
        format!("U(n) eigen residual {worst_u:.1e}, SU(n) reduction residual {worst_su:.1e}"),
    )
}

fn criterion_5() -> Outcome {
    let t = Instant::now();
    let config = CampaignConfig {
        groups: DEFAULT_HARMONIC_GROUPS
            .iter()
            .map(|s| s.to_string())
            .collect(),
        ..CampaignConfig::default()
    };
    let report = campaign::run_harmonic(&config).expect("harmonic campaign");
    let elapsed = t.elapsed();
    let failing: Vec<String> = report
        .harmonic
        .iter()
        .filter(|h| h.verdict != Verdict::Pass)
        .map(|h| {
            format!(
                "{} {} r={} |tau^r| {:.1e} (rounding floor {:.1e}, allowed {:.1e})",
                h.family.group,
                h.family.row,
                h.r,
                h.max_zero_residual,
                h.max_rounding_floor,
                h.tol_zero * (1.0 + h.max_lower)
            )
        })
        .collect();
    let pass = report.overall == Verdict::Pass && within(elapsed, 600);
    outcome(
        pass,
        format!(
            "{} cases, {} failing, {:.1}s {}",
            report.harmonic.len(),
            failing.len(),
            elapsed.as_secs_f64(),
            failing.join("; ")
        ),
    )
}

fn criterion_6() -> Outcome {
    let t = Instant::now();
    let config = CampaignConfig {
        groups: DEFAULT_HARMONIC_GROUPS
            .iter()
            .map(|s| s.to_string())
            .collect(),
        ..CampaignConfig::default()
    };
    let report = campaign::run_ode(&config).expect("ode campaign");
    let elapsed = t.elapsed();
    let worst = report
        .ode
        .iter()
        .map(|o| o.max_zero_residual)
        .fold(0.0, f64::max);
    let has_mu_zero = report
        .ode
        .iter()
        .any(|o| o.lambda == [1.0, 0.0] && o.mu == [0.0, 0.0]);
    let pass = report.overall == Verdict::Pass
        && has_mu_zero
        && report.ode.iter().all(|o| o.centers == 100)
        && within(elapsed, 5);
    outcome(
        pass,
        format!(
            "{} sweeps, max residual {worst:.1e}, {:.2}s",
            report.ode.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_7() -> Outcome {
    let groups = [
        "so:4", "su:3", "slr:3", "sp:2", "spr:2", "soo:3,1", "suu:1,2", "spp:1,1", "sostar:2",
        "sustar:2",
    ];
    let mut worst: f64 = 0.0;
    for (k, g) in groups.iter().enumerate() {
        let g = spec(g);
        let row = feasible_rows(&g)[0];
        let fam = EigenFamily::generate(g, row, seeds::derive(13, &[k as u64])).unwrap();
        let phi = make_eigenfunction(&fam).unwrap();
        let square = ProductField(&phi, &phi);
        let basis = algebra_basis(&g);
        let p = random_point(&basis, seeds::derive(13, &[k as u64, 1]), 0.3);
        let fields: [&dyn ScalarField; 2] = [&phi, &square];
        for f in fields {
            let jet = laplacian(f, &basis, &p).unwrap();
            let fd = fd_laplacian(f, &basis, &p, DEFAULT_FD_STEP).unwrap();
            worst = worst.max((jet - fd).norm());
        }
    }
    outcome(
        worst <= 1e-5,
        format!("10 instances (phi and phi^2), max |jet - fd| {worst:.1e}"),
    )
}

fn criterion_8() -> Outcome {
    let config = CampaignConfig::default();
    let a = campaign::run_eigen(&config).expect("first run");
    let b = campaign::run_eigen(&config).expect("second run");
    let lib_same = normalized_json(&a) == normalized_json(&b);

    let dir = tempfile::tempdir().expect("temp dir");
    let run = |name: &str| {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_polyharmonia"))
            .args(["verify-eigen", "--seed", "42", "--out"])
            .arg(&path)
            .output()
            .expect("cli");
        assert!(status.status.success(), "verify-eigen failed");
        let mut v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        v["environment"]["timestamp"] = serde_json::Value::from(0);
        serde_json::to_string_pretty(&v).unwrap()
    };
    let cli_same = run("a.json") == run("b.json");
    outcome(
        lib_same && cli_same,
        format!("library reports identical: {lib_same}, CLI reports identical: {cli_same}"),
    )
}

fn criterion_9() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_polyharmonia"))
        .args([
            "verify-eigen",
            "--groups",
            "so:4,su:3",
            "--lambda-shift",
            "0.1",
        ])
        .output()
        .expect("cli");
    let shifted_exit = out.status.code();

    let g = spec("su:3");
    let fam = EigenFamily::generate(g, Row::Main, 5).unwrap();
    let phi = make_eigenfunction(&fam).unwrap();
    let basis = algebra_basis(&g);
    let stats = check_polyharmonic(
        &phi,
        &phi,
        &basis,
        &Sampling::new(20, 5),
        &HarmonicCheck::for_order(1),
    )
    .unwrap();
    let pass = shifted_exit == Some(2) && stats.verdict == Verdict::Fail;
    outcome(
        pass,
        format!(
            "perturbed-lambda exit {shifted_exit:?}, phi as 1-harmonic: {:?} (|tau phi| up to {:.1e})",
            stats.verdict, stats.max_zero
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("basis suite", criterion_1),
        ("eigenfunction suite", criterion_2),
        ("product rule", criterion_3),
        ("unitary reduction", criterion_4),
        ("theorem suite", criterion_5),
        ("ODE oracle suite", criterion_6),
        ("finite-difference agreement", criterion_7),
        ("determinism", criterion_8),
        ("negative controls", criterion_9),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failures += 1;
        }
        println!(
            "criterion {} {name}: {} ({})",
            k + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail.trim_end()
        );
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criterion(s) failed");
        ExitCode::FAILURE
    }
}
