//! Command-line driver for `quotdeg-core`.
//!
//! Exit codes: 0 success, 1 usage error, 2 computation error,
//! 3 cross-check or selftest failure.

use std::ffi::OsString;
use std::io::Write;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use quotdeg_core::{
    chow_rank, contributions, enumerate_components, euler_characteristic, sum_contributions,
    vi_invariant_with, vi_plucker_degree, ComponentContribution, EvaluationPath, LocalizationError,
    Rational, VIError, VIOptions, VIQuery, WeightVector,
};

mod report;
pub mod selftest;

pub use report::{Check, ComponentEntry, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_COMPUTE: i32 = 2;
pub const EXIT_CHECK: i32 = 3;

/// Environment variable overriding the starting precision of the VI float path.
pub const PRECISION_ENV: &str = "QUOTDEG_PRECISION_BITS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
    #[error("{0}")]
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Compute(_) => EXIT_COMPUTE,
            CliError::Check(_) => EXIT_CHECK,
        }
    }
}

impl From<LocalizationError> for CliError {
    fn from(e: LocalizationError) -> Self {
        CliError::Compute(e.to_string())
    }
}

impl From<VIError> for CliError {
    fn from(e: VIError) -> Self {
        match e {
            VIError::InvalidQuery(_) | VIError::SelectionRule { .. } => {
                CliError::Usage(e.to_string())
            }
            VIError::Precision { .. } | VIError::NonIntegral(_) => CliError::Compute(e.to_string()),
        }
    }
}

/// Deliberate defects for exercising error paths from tests.
#[derive(Debug, Clone, Copy, Default)]
pub struct Faults {
    /// Negate one component residue before summing.
    pub flip_residue_sign: bool,
}

#[derive(Debug, Parser)]
#[command(
    name = "quotdeg",
    version,
    about = "Degree of the Plücker embedding of the Quot scheme R_d"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute the Plücker degree of R_d.
    Degree(DegreeArgs),
    /// List the torus-fixed components of R_d.
    Components(ComponentsArgs),
    /// Evaluate a genus-0 Grassmannian invariant by the root-of-unity sum.
    Vi(ViArgs),
    /// Run the built-in verification battery.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Bott,
    Vafa,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct DegreeArgs {
    #[arg(long)]
    d: u32,
    #[arg(long, default_value = "0,1,2,3", allow_hyphen_values = true)]
    weights: WeightVector,
    #[arg(long, value_enum, default_value_t = Method::Both)]
    method: Method,
    /// Include every component residue in the report.
    #[arg(long)]
    per_component: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for component evaluation.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Debug, Args)]
struct ComponentsArgs {
    #[arg(long)]
    d: u32,
}

#[derive(Debug, Args)]
struct ViArgs {
    #[arg(long)]
    k: u32,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    d: u32,
    /// Insertion indices, e.g. `1x16` or `2,1,1,1` or `2x2,1x4`.
    #[arg(long)]
    insertions: Insertions,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct SelftestArgs {
    /// Only degrees up to 3.
    #[arg(long)]
    quick: bool,
    #[arg(long)]
    json: bool,
}

/// Multiset of insertion indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Insertions(pub Vec<u32>);

impl FromStr for Insertions {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = Vec::new();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (a, m) = match item.split_once('x') {
                Some((a, m)) => (
                    a,
                    m.parse::<usize>()
                        .map_err(|_| format!("bad multiplicity in {item:?}"))?,
                ),
                None => (item, 1),
            };
            let a = a
                .parse::<u32>()
                .map_err(|_| format!("bad insertion index in {item:?}"))?;
            out.extend(std::iter::repeat_n(a, m));
        }
        Ok(Insertions(out))
    }
}

/// Runs the CLI on real stdout/stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(
        args,
        Faults::default(),
        &mut stdout.lock(),
        &mut stderr.lock(),
    )
}

/// Runs the CLI with the given faults, writing to the given streams; returns the exit code.
pub fn run_with<I, T>(args: I, faults: Faults, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Degree(a) => cmd_degree(&a, faults, out),
        Command::Components(a) => cmd_components(&a, out),
        Command::Vi(a) => cmd_vi(&a, out),
        Command::Selftest(a) => cmd_selftest(&a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Compute(format!("write failed: {e}"))
}

/// Bott residues with any injected faults applied.
fn bott_residues(
    d: u32,
    w: &WeightVector,
    jobs: usize,
    faults: Faults,
) -> Result<Vec<ComponentContribution>, LocalizationError> {
    let mut parts = contributions(d, w, jobs)?;
    if faults.flip_residue_sign {
        // a residue with denominator above 2 makes the flipped total non-integral
        let two = BigInt::from(2);
        let idx = parts
            .iter()
            .position(|p| p.value.denom() > &two)
            .unwrap_or(0);
        if let Some(p) = parts.get_mut(idx) {
            p.value = -p.value.clone();
        }
    }
    Ok(parts)
}

pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Builds the report for a `degree` run.
pub fn degree_report(
    d: u32,
    w: &WeightVector,
    method: Method,
    per_component: bool,
    jobs: usize,
    faults: Faults,
) -> Result<Report, CliError> {
    let mut checks = Vec::new();
    let mut entries = None;
    let bott = match method {
        Method::Bott | Method::Both => {
            let parts = bott_residues(d, w, jobs, faults)?;
            let total = sum_contributions(&parts)?;
            checks.push(Check {
                detail: format!("{} residues sum to an integer", parts.len()),
                name: "bott_integrality".into(),
                pass: true,
            });
            if per_component {
                entries = Some(
                    parts
                        .iter()
                        .map(|p| ComponentEntry {
                            contribution: format_rational(&p.value),
                            pattern: p.component.pattern().map(|s| s.to_string()),
                        })
                        .collect(),
                );
            }
            Some(total)
        }
        Method::Vafa => None,
    };
    if per_component && entries.is_none() {
        return Err(CliError::Usage(
            "--per-component needs --method bott or both".into(),
        ));
    }
    let vafa = match method {
        Method::Vafa | Method::Both => Some(vi_plucker_degree(d)?),
        Method::Bott => None,
    };
    let total = match (&bott, &vafa) {
        (Some(b), Some(v)) => {
            checks.push(Check {
                detail: format!("bott = {b}, vafa = {v}"),
                name: "bott_equals_vafa".into(),
                pass: b == v,
            });
            b.clone()
        }
        (Some(x), None) | (None, Some(x)) => x.clone(),
        (None, None) => unreachable!("every method computes at least one total"),
    };
    Ok(Report {
        checks,
        d,
        method,
        per_component: entries,
        total_degree: total,
        weights: w.as_array(),
    })
}

fn cmd_degree(a: &DegreeArgs, faults: Faults, out: &mut dyn Write) -> Result<(), CliError> {
    let report = degree_report(
        a.d,
        &a.weights,
        a.method,
        a.per_component,
        a.jobs.max(1),
        faults,
    )?;
    match a.format {
        Format::Json => writeln!(out, "{}", report.to_json()).map_err(io_err)?,
        Format::Text => write!(out, "{}", report.to_text()).map_err(io_err)?,
    }
    match report.checks.iter().find(|c| !c.pass) {
        Some(c) => Err(CliError::Check(format!(
            "check {} failed: {}",
            c.name, c.detail
        ))),
        None => Ok(()),
    }
}

fn cmd_components(a: &ComponentsArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cs = enumerate_components(a.d);
    let mut total = 0;
    for c in &cs {
        let rank = chow_rank(c);
        total += rank;
        writeln!(
            out,
            "{c}  (b,a)=({},{})  {}  rank {rank}",
            c.b(),
            c.a(),
            c.fixed_locus()
        )
        .map_err(io_err)?;
    }
    writeln!(
        out,
        "components: {}  total rank: {total}  euler characteristic: {}",
        cs.len(),
        euler_characteristic(a.d)
    )
    .map_err(io_err)
}

fn vi_options() -> Result<VIOptions, CliError> {
    let mut opts = VIOptions::default();
    if let Ok(v) = std::env::var(PRECISION_ENV) {
        let bits: u32 = v.trim().parse().ok().filter(|&b| b >= 2).ok_or_else(|| {
            CliError::Usage(format!(
                "{PRECISION_ENV} must be an integer >= 2, got {v:?}"
            ))
        })?;
        opts.precision_bits = bits;
        opts.max_precision_bits = opts.max_precision_bits.max(bits);
    }
    Ok(opts)
}

#[derive(Debug, Serialize)]
struct ViOutput<'a> {
    d: u32,
    insertions: &'a [u32],
    #[serde(with = "report::bigint_number")]
    invariant: BigInt,
    k: u32,
    n: u32,
    path: &'static str,
    precision_bits: Option<u32>,
}

fn cmd_vi(a: &ViArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let q = VIQuery::new(a.k, a.n, a.d, a.insertions.0.clone())?;
    let r = vi_invariant_with(&q, &vi_options()?)?;
    let (path, bits) = match r.path {
        EvaluationPath::Exact => ("exact", None),
        EvaluationPath::Float { precision_bits } => ("float", Some(precision_bits)),
    };
    match a.format {
        Format::Text => writeln!(out, "{}", r.value).map_err(io_err),
        Format::Json => {
            let o = ViOutput {
                d: a.d,
                insertions: &q.insertions,
                invariant: r.value,
                k: a.k,
                n: a.n,
                path,
                precision_bits: bits,
            };
            let s =
                serde_json::to_string_pretty(&o).map_err(|e| CliError::Compute(e.to_string()))?;
            writeln!(out, "{s}").map_err(io_err)
        }
    }
}

fn cmd_selftest(a: &SelftestArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let checks = selftest::run_battery(a.quick);
    if a.json {
        let s =
            serde_json::to_string_pretty(&checks).map_err(|e| CliError::Compute(e.to_string()))?;
        writeln!(out, "{s}").map_err(io_err)?;
    } else {
        for c in &checks {
            writeln!(out, "{}", c.line()).map_err(io_err)?;
        }
    }
    match checks.iter().find(|c| !c.pass) {
        Some(c) => Err(CliError::Check(format!(
            "selftest failed at {}: {}",
            c.name, c.detail
        ))),
        None => Ok(()),
    }
}
