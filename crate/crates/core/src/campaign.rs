//! Verification campaigns and their JSON reports.
//!
//! A campaign walks groups × rows × orders × constants, derives every case's
//! random stream from the campaign seed and the case coordinates, and collects
//! one record per case. Identical configs give byte-identical reports apart
//! from `environment.timestamp`.

use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catalog::{eigen_constants, feasible_rows, verify_eigen, EigenFamily, Row, Sampling};
use crate::error::{Error, Result};
use crate::factory::{
    build_candidate, default_tol_zero, verify_harmonic, HarmonicCheck, HolomorphicCase,
};
use crate::groups::{algebra_basis, expm, membership_residual, GroupSpec};
use crate::oracle::ode_sweep;
use crate::report::{
    finite, pair, BasisRecord, EigenRecord, HarmonicRecord, OdeRecord, Pair, Verdict, SCHEMA,
};
use crate::seeds;

/// Groups covered by a full campaign.
pub const DEFAULT_GROUPS: &[&str] = &[
    "so:4", "su:3", "sp:2", "slr:3", "spr:2", "soo:2,2", "soo:3,1", "suu:1,2", "spp:1,1",
    "sostar:2", "sustar:2",
];

/// Groups whose rows exercise the solution branches in harmonic campaigns.
pub const DEFAULT_HARMONIC_GROUPS: &[&str] = &[
    "su:3", "slr:3", "sp:2", "spr:2", "suu:1,2", "sustar:2", "sostar:2", "spp:1,1", "soo:3,1",
];

/// Environment variable capping worker threads (0 or unset = automatic).
pub const THREADS_ENV: &str = "POLYHARMONIA_THREADS";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub eigen: f64,
    /// `tol_zero` for r = 1, 2, 3, 4.
    pub zero: [f64; 4],
    pub nonzero: f64,
    pub margin: f64,
    /// Threshold on `|Lʳ f_r|` in the ODE sweep.
    pub ode_zero: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eigen: 1e-8,
            zero: [1, 2, 3, 4].map(default_tol_zero),
            nonzero: 1e-6,
            margin: 1e-6,
            ode_zero: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub groups: Vec<String>,
    /// Row tags, or empty for every feasible row.
    pub rows: Vec<String>,
    pub orders: Vec<usize>,
    pub samples: usize,
    /// Random centers per ODE sweep.
    pub centers: usize,
    pub seed: u64,
    pub scale: f64,
    pub tolerances: Tolerances,
    /// `(c1, c2)` pairs as `[[re, im], [re, im]]`.
    pub constants: Vec<[Pair; 2]>,
    /// Added to every λ in eigen checks; nonzero only for negative controls.
    pub lambda_shift: f64,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            groups: DEFAULT_GROUPS.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            orders: vec![1, 2, 3],
            samples: 20,
            centers: 100,
            seed: 42,
            scale: crate::groups::DEFAULT_SCALE,
            tolerances: Tolerances::default(),
            constants: vec![
                [[1.0, 0.0], [1.0, 0.0]],
                [[1.0, 0.0], [0.0, 0.0]],
                [[0.0, 0.0], [1.0, 0.0]],
            ],
            lambda_shift: 0.0,
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Config("samples must be at least 1".into()));
        }
        if self.orders.iter().any(|r| !(1..=4).contains(r)) {
            return Err(Error::Config("orders must lie in 1..=4".into()));
        }
        let t = &self.tolerances;
        let all = [t.eigen, t.nonzero, t.margin, t.ode_zero]
            .into_iter()
            .chain(t.zero);
        if all.into_iter().any(|x| !(x > 0.0 && x.is_finite())) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::Config("scale must be positive".into()));
        }
        let specs = self.specs()?;
        // every requested row must be defined for at least one selected group
        for tag in &self.rows {
            let row: Row = tag.parse()?;
            if !specs
                .iter()
                .any(|s| crate::catalog::rows_of(s.family).contains(&row))
            {
                return Err(Error::InvalidRow {
                    group: self.groups.join(" "),
                    row: row.to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn specs(&self) -> Result<Vec<GroupSpec>> {
        self.groups.iter().map(|g| g.parse()).collect()
    }

    /// Selected rows of `spec` that admit parameters.
    fn rows_for(&self, spec: &GroupSpec) -> Result<Vec<Row>> {
        let feasible = feasible_rows(spec);
        if self.rows.is_empty() {
            return Ok(feasible);
        }
        let wanted = self
            .rows
            .iter()
            .map(|r| r.parse::<Row>())
            .collect::<Result<Vec<_>>>()?;
        Ok(feasible
            .into_iter()
            .filter(|r| wanted.contains(r))
            .collect())
    }

    fn constants(&self) -> Vec<(Complex64, Complex64)> {
        self.constants
            .iter()
            .map(|[a, b]| (Complex64::new(a[0], a[1]), Complex64::new(b[0], b[1])))
            .collect()
    }

    fn sampling(&self, seed: u64) -> Sampling {
        Sampling {
            samples: self.samples,
            seed,
            scale: self.scale,
        }
    }
}

/// Parameters of a (group, row) are shared by every campaign touching it.
pub fn params_seed(seed: u64, spec: &GroupSpec, row: Row) -> u64 {
    seeds::derive(
        seed,
        &[
            seeds::label("params"),
            seeds::label(&spec.to_string()),
            seeds::label(row.as_str()),
        ],
    )
}

fn family(config: &CampaignConfig, spec: &GroupSpec, row: Row) -> Result<EigenFamily> {
    EigenFamily::generate(*spec, row, params_seed(config.seed, spec, row))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub version: String,
    /// Seconds since the Unix epoch; the only field allowed to differ between
    /// reruns of the same config.
    pub timestamp: u64,
}

impl Environment {
    fn now() -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub config: CampaignConfig,
    pub environment: Environment,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub basis: Vec<BasisRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub eigen: Vec<EigenRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub harmonic: Vec<HarmonicRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ode: Vec<OdeRecord>,
    pub overall: Verdict,
}

impl Report {
    fn new(command: &str, config: &CampaignConfig) -> Self {
        Self {
            schema: SCHEMA.to_string(),
            command: command.to_string(),
            config: config.clone(),
            environment: Environment::now(),
            basis: Vec::new(),
            eigen: Vec::new(),
            harmonic: Vec::new(),
            ode: Vec::new(),
            overall: Verdict::Pass,
        }
    }

    fn finish(mut self) -> Self {
        self.overall = Verdict::combine(
            self.basis
                .iter()
                .map(|r| r.verdict)
                .chain(self.eigen.iter().map(|r| r.verdict))
                .chain(self.harmonic.iter().map(|r| r.verdict))
                .chain(self.ode.iter().map(|r| r.verdict)),
        );
        self
    }

    pub fn exit_code(&self) -> i32 {
        self.overall.exit_code()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Writes the report through a sibling temp file and a rename.
    pub fn write_atomic(&self, path: &Path) -> Result<()> {
        let dir = path
            .parent()
            .filter(|d| !d.as_os_str().is_empty())
            .unwrap_or(Path::new("."));
        let name = path
            .file_name()
            .ok_or_else(|| Error::Io(format!("{} is not a file path", path.display())))?;
        let tmp = dir.join(format!(
            ".{}.tmp{}",
            name.to_string_lossy(),
            std::process::id()
        ));
        let write = || -> std::io::Result<()> {
            let mut f = std::fs::File::create(&tmp)?;
            f.write_all(self.to_json().as_bytes())?;
            f.write_all(b"\n")?;
            f.sync_all()?;
            std::fs::rename(&tmp, path)
        };
        write().map_err(|e| {
            let _ = std::fs::remove_file(&tmp);
            Error::Io(format!("{}: {e}", path.display()))
        })
    }
}

pub fn basis_record(spec: &GroupSpec) -> Result<BasisRecord> {
    let basis = algebra_basis(spec);
    let gram = basis.gram_residual();
    let mut worst: f64 = 0.0;
    for x in &basis.basis {
        worst = worst.max(membership_residual(spec, &expm(&x.scale(0.1)))?);
    }
    let verdict = if gram <= 1e-12 && worst <= 1e-8 {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(BasisRecord {
        group: spec.to_string(),
        dim: basis.dim(),
        gram_residual: finite(gram),
        max_exp_membership: finite(worst),
        verdict,
    })
}

pub fn run_basis(config: &CampaignConfig) -> Result<Report> {
    config.validate()?;
    let mut report = Report::new("basis", config);
    for spec in config.specs()? {
        report.basis.push(basis_record(&spec)?);
    }
    Ok(report.finish())
}

fn eigen_records(config: &CampaignConfig, report: &mut Report) -> Result<()> {
    for spec in config.specs()? {
        for row in config.rows_for(&spec)? {
            let mut fam = family(config, &spec, row)?;
            fam.lambda += config.lambda_shift;
            let seed = seeds::derive(
                config.seed,
                &[
                    seeds::label("eigen"),
                    seeds::label(&spec.to_string()),
                    seeds::label(row.as_str()),
                ],
            );
            report.eigen.push(verify_eigen(
                &fam,
                &config.sampling(seed),
                config.tolerances.eigen,
            )?);
        }
    }
    Ok(())
}

pub fn run_eigen(config: &CampaignConfig) -> Result<Report> {
    config.validate()?;
    let mut report = Report::new("verify-eigen", config);
    eigen_records(config, &mut report)?;
    Ok(report.finish())
}

fn harmonic_records(config: &CampaignConfig, report: &mut Report) -> Result<()> {
    let t = &config.tolerances;
    for spec in config.specs()? {
        for row in config.rows_for(&spec)? {
            let fam = family(config, &spec, row)?;
            for &r in &config.orders {
                for (idx, (c1, c2)) in config.constants().into_iter().enumerate() {
                    let cand = match build_candidate(&fam, r, c1, c2) {
                        Ok(c) => c,
                        // constants that are inadmissible for this branch are skipped
                        Err(Error::InadmissibleConstants(_)) => continue,
                        Err(e) => return Err(e),
                    };
                    let check = HarmonicCheck {
                        r,
                        tol_zero: t.zero[r - 1],
                        tol_nonzero: t.nonzero,
                        margin: t.margin,
                    };
                    let seed = seeds::derive(
                        config.seed,
                        &[
                            seeds::label("harmonic"),
                            seeds::label(&spec.to_string()),
                            seeds::label(row.as_str()),
                            r as u64,
                            idx as u64,
                        ],
                    );
                    let record = match verify_harmonic(&cand, &config.sampling(seed), &check) {
                        Ok(rec) => rec,
                        Err(Error::InconclusiveDomain {
                            accepted,
                            requested,
                        }) => HarmonicRecord {
                            family: fam.record(),
                            r,
                            case: cand.holo.case,
                            c1: pair(c1),
                            c2: pair(c2),
                            samples: requested,
                            accepted,
                            max_zero_residual: 0.0,
                            max_lower: 0.0,
                            max_rounding_floor: 0.0,
                            properness_fraction: 0.0,
                            tol_zero: check.tol_zero,
                            tol_nonzero: check.tol_nonzero,
                            verdict: Verdict::Inconclusive,
                        },
                        Err(e) => return Err(e),
                    };
                    report.harmonic.push(record);
                }
            }
        }
    }
    Ok(())
}

pub fn run_harmonic(config: &CampaignConfig) -> Result<Report> {
    config.validate()?;
    let mut report = Report::new("verify-harmonic", config);
    harmonic_records(config, &mut report)?;
    Ok(report.finish())
}

/// Distinct `(λ, μ)` pairs of the selected rows, plus the synthetic μ = 0
/// pair `(1, 0)` that no catalog row realizes.
pub fn ode_pairs(config: &CampaignConfig) -> Result<Vec<(Complex64, Complex64)>> {
    let mut pairs: Vec<(Complex64, Complex64)> = Vec::new();
    for spec in config.specs()? {
        for row in config.rows_for(&spec)? {
            let lm = eigen_constants(&spec, row)?;
            if !pairs.contains(&lm) {
                pairs.push(lm);
            }
        }
    }
    let synthetic = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    if !pairs.contains(&synthetic) {
        pairs.push(synthetic);
    }
    Ok(pairs)
}

fn ode_records(config: &CampaignConfig, report: &mut Report) -> Result<()> {
    for (pair_idx, (lambda, mu)) in ode_pairs(config)?.into_iter().enumerate() {
        for &r in &config.orders {
            for (idx, (c1, c2)) in config.constants().into_iter().enumerate() {
                let holo = match HolomorphicCase::new(lambda, mu, r, c1, c2) {
                    Ok(h) => h,
                    Err(Error::InadmissibleConstants(_)) => continue,
                    Err(e) => return Err(e),
                };
                let seed = seeds::derive(
                    config.seed,
                    &[seeds::label("ode"), pair_idx as u64, r as u64, idx as u64],
                );
                report.ode.push(ode_sweep(
                    &holo,
                    config.centers,
                    seed,
                    config.tolerances.ode_zero,
                    config.tolerances.nonzero,
                )?);
            }
        }
    }
    Ok(())
}

pub fn run_ode(config: &CampaignConfig) -> Result<Report> {
    config.validate()?;
    let mut report = Report::new("ode-check", config);
    ode_records(config, &mut report)?;
    Ok(report.finish())
}

pub fn run_all(config: &CampaignConfig) -> Result<Report> {
    config.validate()?;
    let mut report = Report::new("all", config);
    for spec in config.specs()? {
        report.basis.push(basis_record(&spec)?);
    }
    eigen_records(config, &mut report)?;
    harmonic_records(config, &mut report)?;
    ode_records(config, &mut report)?;
    Ok(report.finish())
}

/// Runs `f` inside a rayon pool sized by [`THREADS_ENV`].
pub fn with_thread_cap<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0);
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Report JSON with the timestamp blanked, for reproducibility comparisons.
pub fn normalized_json(report: &Report) -> String {
    let mut r = report.clone();
    r.environment.timestamp = 0;
    r.to_json()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        let mut c = CampaignConfig::default();
        assert!(c.validate().is_ok());
        c.orders = vec![5];
        assert!(c.validate().is_err());
        let c = CampaignConfig {
            groups: vec!["nope:3".into()],
            ..CampaignConfig::default()
        };
        assert!(matches!(c.validate(), Err(Error::InvalidGroup(_))));
        let mut c = CampaignConfig::default();
        c.tolerances.eigen = 0.0;
        assert!(c.validate().is_err());
        let c = CampaignConfig {
            samples: 0,
            ..CampaignConfig::default()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn explicit_invalid_row_is_rejected() {
        let c = CampaignConfig {
            groups: vec!["so:4".into()],
            rows: vec!["p1".into()],
            ..CampaignConfig::default()
        };
        assert!(matches!(run_eigen(&c), Err(Error::InvalidRow { .. })));
    }

    #[test]
    fn ode_pairs_include_synthetic_mu_zero() {
        let c = CampaignConfig {
            groups: vec!["sostar:2".into(), "spp:1,1".into()],
            ..CampaignConfig::default()
        };
        let pairs = ode_pairs(&c).unwrap();
        // both SO*(4) rows and both Sp(1,1) rows give (-1/2, -1/2)
        assert_eq!(pairs.len(), 2);
        assert_eq!(
            pairs[1],
            (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
        );
    }

    #[test]
    fn atomic_write_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.json");
        let c = CampaignConfig {
            groups: vec!["so:3".into()],
            ..CampaignConfig::default()
        };
        let report = run_basis(&c).unwrap();
        report.write_atomic(&path).unwrap();
        let back: Report = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(back, report);
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
        assert!(report
            .write_atomic(&dir.path().join("missing/r.json"))
            .is_err());
    }
}
