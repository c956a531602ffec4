use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use polyharmonia::campaign::{self, CampaignConfig, Report, DEFAULT_HARMONIC_GROUPS};
use polyharmonia::groups::GroupSpec;
use polyharmonia::report::Verdict;
use polyharmonia::Error;

#[derive(Parser)]
#[command(
    name = "polyharmonia",
    version,
    about = "Certify proper r-harmonic functions on classical Lie groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the algebra dimension and Gram residual of a group.
    Basis { group: String },
    /// Check the eigenfunction catalog.
    VerifyEigen(Opts),
    /// Check the r-harmonic candidates.
    VerifyHarmonic(Opts),
    /// Run the ODE oracle sweep.
    OdeCheck(Opts),
    /// Basis, eigen, harmonic and ODE suites in one report.
    All(Opts),
}

#[derive(Args, Clone)]
struct Opts {
    /// Comma-separated group specs, e.g. `so:4,soo:2,2,su:3`.
    #[arg(long)]
    groups: Option<String>,
    /// Comma-separated row tags (main, p1, q2, xy, zw, z, w); default all.
    #[arg(long)]
    rows: Option<String>,
    #[arg(long, default_value = "1,2,3")]
    orders: String,
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long, default_value_t = 100)]
    centers: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 0.3)]
    scale: f64,
    #[arg(long, default_value_t = 1e-8)]
    tol_eigen: f64,
    /// Comma-separated tol_zero for r = 1.. (missing entries keep defaults).
    #[arg(long)]
    tol_zero: Option<String>,
    #[arg(long, default_value_t = 1e-6)]
    tol_nonzero: f64,
    #[arg(long, default_value_t = 1e-6)]
    margin: f64,
    #[arg(long, default_value_t = 1e-9)]
    tol_ode: f64,
    /// `c1,c2` pairs separated by `;`, complex values as `a+bi`.
    #[arg(long)]
    constants: Option<String>,
    /// Shift added to every λ before the eigen check (negative control).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    lambda_shift: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Splits `so:4,soo:2,2,su:3` into specs, gluing bare numbers to the
/// previous token.
fn split_groups(s: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match out.last_mut() {
            Some(last) if tok.chars().all(|c| c.is_ascii_digit()) => {
                last.push(',');
                last.push_str(tok);
            }
            _ => out.push(tok.to_string()),
        }
    }
    out
}

fn parse_complex(s: &str) -> Result<Complex64, Error> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Config(format!("bad complex number {s:?}"));
    if let Some(body) = s.strip_suffix('i') {
        // split at the last sign that is not a leading sign or an exponent sign
        let bytes = body.as_bytes();
        let cut = (1..bytes.len())
            .rev()
            .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        let (re, im) = match cut {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => "1",
            "-" => "-1",
            x => x,
        };
        Ok(Complex64::new(
            re.parse().map_err(|_| bad())?,
            im.parse().map_err(|_| bad())?,
        ))
    } else {
        Ok(Complex64::new(s.parse().map_err(|_| bad())?, 0.0))
    }
}

fn list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, Error> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad {what} {x:?}")))
        })
        .collect()
}

fn config(opts: &Opts, default_groups: Option<&[&str]>) -> Result<CampaignConfig, Error> {
    let mut c = CampaignConfig::default();
    if let Some(g) = &opts.groups {
        c.groups = split_groups(g);
    } else if let Some(d) = default_groups {
        c.groups = d.iter().map(|s| s.to_string()).collect();
    }
    if let Some(r) = &opts.rows {
        c.rows = split_groups(r);
    }
    c.orders = list(&opts.orders, "order")?;
    c.samples = opts.samples;
    c.centers = opts.centers;
    c.seed = opts.seed;
    c.scale = opts.scale;
    c.tolerances.eigen = opts.tol_eigen;
    c.tolerances.nonzero = opts.tol_nonzero;
    c.tolerances.margin = opts.margin;
    c.tolerances.ode_zero = opts.tol_ode;
    if let Some(t) = &opts.tol_zero {
        let vals: Vec<f64> = list(t, "tolerance")?;
        if vals.len() > 4 {
            return Err(Error::Config("at most four tol-zero values".into()));
        }
        c.tolerances.zero[..vals.len()].copy_from_slice(&vals);
    }
    if let Some(k) = &opts.constants {
        c.constants = k
            .split(';')
            .map(|pair| {
                let parts: Vec<&str> = pair.split(',').collect();
                match parts.as_slice() {
                    [a, b] => {
                        let (a, b) = (parse_complex(a)?, parse_complex(b)?);
                        Ok([[a.re, a.im], [b.re, b.im]])
                    }
                    _ => Err(Error::Config(format!("bad constant pair {pair:?}"))),
                }
            })
            .collect::<Result<_, Error>>()?;
    }
    c.lambda_shift = opts.lambda_shift;
    c.validate()?;
    Ok(c)
}

fn summarize(report: &Report) {
    for b in &report.basis {
        println!(
            "basis    {:<10} dim={:<3} gram={:.1e} exp-membership={:.1e} {:?}",
            b.group, b.dim, b.gram_residual, b.max_exp_membership, b.verdict
        );
    }
    for e in &report.eigen {
        println!(
            "eigen    {:<10} {:<4} e_tau={:.1e} e_kappa={:.1e} {:?}",
            e.family.group, e.family.row, e.max_e_tau, e.max_e_kappa, e.verdict
        );
    }
    for h in &report.harmonic {
        println!(
            "harmonic {:<10} {:<4} r={} {:?} c=({:?},{:?}) |tau^r|={:.1e} floor={:.1e} max|tau^(r-1)|={:.1e} proper={:.2} {:?}",
            h.family.group,
            h.family.row,
            h.r,
            h.case,
            h.c1,
            h.c2,
            h.max_zero_residual,
            h.max_rounding_floor,
            h.max_lower,
            h.properness_fraction,
            h.verdict
        );
    }
    for o in &report.ode {
        println!(
            "ode      lambda={:?} mu={:?} r={} {:?} |L^r f|={:.1e} proper={:.2} {:?}",
            o.lambda, o.mu, o.r, o.case, o.max_zero_residual, o.properness_fraction, o.verdict
        );
    }
    println!("overall {:?}", report.overall);
}

fn run(cli: Cli) -> Result<i32, Error> {
    let (opts, report) = match cli.command {
        Command::Basis { group } => {
            let spec: GroupSpec = group.parse()?;
            let rec = campaign::basis_record(&spec)?;
            if rec.gram_residual <= 1e-12 {
                println!("dim={} gram_residual<=1e-12", rec.dim);
            } else {
                println!("dim={} gram_residual={:e}", rec.dim, rec.gram_residual);
            }
            return Ok(if rec.verdict == Verdict::Pass { 0 } else { 2 });
        }
        Command::VerifyEigen(o) => {
            let c = config(&o, None)?;
            (o, campaign::with_thread_cap(|| campaign::run_eigen(&c))?)
        }
        Command::VerifyHarmonic(o) => {
            let c = config(&o, Some(DEFAULT_HARMONIC_GROUPS))?;
            (o, campaign::with_thread_cap(|| campaign::run_harmonic(&c))?)
        }
        Command::OdeCheck(o) => {
            let c = config(&o, Some(DEFAULT_HARMONIC_GROUPS))?;
            (o, campaign::with_thread_cap(|| campaign::run_ode(&c))?)
        }
        Command::All(o) => {
            let c = config(&o, None)?;
            (o, campaign::with_thread_cap(|| campaign::run_all(&c))?)
        }
    };
    summarize(&report);
    if let Some(path) = &opts.out {
        report.write_atomic(path)?;
    }
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
