//! `mapl` command line: argument parsing into a [`RunPlan`] and its execution.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use mapl_core::arith::gcd;
use mapl_core::coeffs::{ak_table, Method, K_MAX};
use mapl_core::mertens::{estimate_mertens_constant, MIN_X_REF};
use mapl_core::multisum::{APSpec, Theorem, BRUTEFORCE_MAX_N, HYPERBOLA_MAX_N, MIN_PREDICTION_X};
use mapl_core::primes::{logk_recip_sum_ap, ClassKey, PrimeTable};
use mapl_core::special::ConstantsCache;

use crate::cache::load_or_build;
use crate::grid::{parse_count, parse_grid};
use crate::harness::{run_verify, VerifyConfig};
use crate::identities::{identity_table, run_identities};
use crate::output::{Cell, Format, Table};
use crate::shared::SharedPrefixCache;
use crate::{Error, Result};

pub const CACHE_ENV: &str = "MAPL_CACHE";

const DEFAULT_SIEVE_LIMIT: u64 = 1_000_000;
const DEFAULT_X_REF: u64 = 10_000_000;

#[derive(Debug, Parser)]
#[command(name = "mapl", version, about = "Multiple Mertens sums over primes in arithmetic progressions")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Sieve limit; defaults to what the command needs.
    #[arg(long, global = true)]
    limit: Option<String>,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    output: Format,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Prime table cache file; MAPL_CACHE takes precedence.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Sieve and tabulate prime counts and reciprocal sums.
    Sieve {
        #[arg(long)]
        grid: Option<String>,
    },
    /// a_k by the three methods.
    Coeffs {
        #[arg(long, default_value_t = 20)]
        kmax: u32,
    },
    /// Empirical Mertens constants for one modulus.
    Constants {
        #[arg(long, visible_alias = "moduli")]
        modulus: String,
        #[arg(long)]
        residues: Option<String>,
        #[arg(long)]
        x_ref: Option<String>,
        #[arg(long)]
        all_residues: bool,
    },
    /// Compare exact sums against an asymptotic expansion on a grid.
    Verify {
        /// 1.1, 1.3 or 1.4.
        #[arg(long, default_value = "1.4")]
        theorem: String,
        /// Number of prime variables.
        #[arg(long)]
        n: Option<usize>,
        /// Log-weight exponent (1.3 only).
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        moduli: Option<String>,
        #[arg(long)]
        residues: Option<String>,
        #[arg(long, default_value = "1e5:1e7:decade")]
        grid: String,
        /// Calibration point for the constants; defaults to the sieve limit.
        #[arg(long)]
        x_ref: Option<String>,
        /// Bound on the scaled residuals over the trend window.
        #[arg(long)]
        bound: Option<f64>,
        /// Number of final decades the non-increasing test covers.
        #[arg(long, default_value_t = 2)]
        window: usize,
    },
    /// Run the identity suites.
    Identities {
        #[arg(long, default_value_t = 2000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Residues {
    All,
    List(Vec<u64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyPlan {
    pub theorem: Theorem,
    pub n: usize,
    pub spec: APSpec,
    pub grid: Vec<u64>,
    pub x_ref: Option<u64>,
    pub bound: Option<f64>,
    pub window: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Sieve { grid: Option<Vec<u64>> },
    Coeffs { k_max: u32 },
    Constants { modulus: u64, residues: Residues, x_ref: Option<u64> },
    Verify(VerifyPlan),
    Identities { trials: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunPlan {
    pub command: Command,
    pub limit: Option<u64>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub cache: Option<PathBuf>,
    pub threads: Option<usize>,
}

fn parse_list(flag: &str, s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|t| parse_count(t).map_err(|e| Error::usage(format!("--{flag}: {e}"))))
        .collect()
}

fn parse_theorem(s: &str, k: Option<u32>) -> Result<Theorem> {
    match s.trim_start_matches("thm") {
        "1.1" | "11" => Ok(Theorem::Thm11),
        "1.3" | "13" => {
            let k = k.unwrap_or(1);
            if k == 0 {
                return Err(Error::usage("--k must be at least 1 for theorem 1.3"));
            }
            Ok(Theorem::Thm13 { k })
        }
        "1.4" | "14" => Ok(Theorem::Thm14),
        _ => Err(Error::usage(format!("--theorem: unknown theorem `{s}` (expected 1.1, 1.3 or 1.4)"))),
    }
}

fn optional_count(flag: &str, s: Option<&String>) -> Result<Option<u64>> {
    s.map(|v| parse_count(v).map_err(|e| Error::usage(format!("--{flag}: {e}"))))
        .transpose()
}

fn verify_plan(
    theorem: &str,
    n: Option<usize>,
    k: Option<u32>,
    moduli: Option<&String>,
    residues: Option<&String>,
    grid: &str,
    x_ref: Option<&String>,
    bound: Option<f64>,
    window: usize,
) -> Result<VerifyPlan> {
    let theorem = parse_theorem(theorem, k)?;
    if k.is_some() && !matches!(theorem, Theorem::Thm13 { .. }) {
        return Err(Error::usage("--k only applies to theorem 1.3"));
    }
    let moduli = moduli.map(|s| parse_list("moduli", s)).transpose()?;
    let residues = residues.map(|s| parse_list("residues", s)).transpose()?;
    let pairs: Option<Vec<(u64, u64)>> = match (moduli, residues) {
        (Some(m), Some(h)) => {
            if m.len() != h.len() {
                return Err(Error::usage(format!(
                    "--moduli has {} entries but --residues has {}",
                    m.len(),
                    h.len()
                )));
            }
            Some(h.into_iter().zip(m).collect())
        }
        (Some(m), None) => Some(m.into_iter().map(|m| (1, m)).collect()),
        (None, Some(_)) => return Err(Error::usage("--residues needs --moduli")),
        (None, None) => None,
    };
    if let Some(p) = &pairs {
        for &(h, m) in p {
            if m == 0 {
                return Err(mapl_core::Error::ZeroModulus.into());
            }
            if gcd(h % m, m) != 1 {
                return Err(mapl_core::Error::NotCoprime { residue: h, modulus: m }.into());
            }
        }
    }
    let offset = usize::from(matches!(theorem, Theorem::Thm13 { .. }));
    let n = match (n, &pairs) {
        (Some(n), _) => n,
        (None, Some(p)) => p.len() + offset,
        (None, None) => match theorem {
            Theorem::Thm11 => 1,
            _ => 2,
        },
    };
    let (lo, hi) = match theorem {
        Theorem::Thm11 => (1, 1),
        Theorem::Thm13 { .. } => (2, BRUTEFORCE_MAX_N),
        Theorem::Thm14 => (1, HYPERBOLA_MAX_N),
    };
    if n < lo || n > hi {
        return Err(Error::usage(format!(
            "--n {n} is out of range for theorem {} (supported {lo}..={hi})",
            theorem.label()
        )));
    }
    let pairs = pairs.unwrap_or_else(|| vec![(0, 1); n - offset]);
    if pairs.len() != n - offset {
        return Err(Error::usage(format!(
            "theorem {} with n = {n} needs {} progressions, got {}",
            theorem.label(),
            n - offset,
            pairs.len()
        )));
    }
    let spec = APSpec::new(&pairs)?;
    let grid = parse_grid(grid)?;
    if grid[0] < MIN_PREDICTION_X {
        return Err(Error::usage(format!("--grid must start at {MIN_PREDICTION_X} or above")));
    }
    let x_ref = optional_count("x-ref", x_ref)?;
    if let Some(x) = x_ref {
        if x < MIN_X_REF {
            return Err(mapl_core::Error::PrecisionWarning { x_ref: x, min: MIN_X_REF }.into());
        }
    }
    if window < 2 {
        return Err(Error::usage("--window must be at least 2"));
    }
    Ok(VerifyPlan {
        theorem,
        n,
        spec,
        grid,
        x_ref,
        bound,
        window,
    })
}

fn parse_cli<I, T>(argv: I) -> std::result::Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    Cli::try_parse_from(std::iter::once(std::ffi::OsString::from("mapl")).chain(argv.into_iter().map(Into::into)))
}

/// Validated plan from `argv` (without the program name).
pub fn parse_args<I, T>(argv: I) -> Result<RunPlan>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = parse_cli(argv).map_err(|e| Error::usage(e.to_string().trim_end().to_string()))?;
    plan_from(cli)
}

fn plan_from(cli: Cli) -> Result<RunPlan> {
    let command = match cli.command {
        Sub::Sieve { grid } => Command::Sieve {
            grid: grid.as_deref().map(parse_grid).transpose()?,
        },
        Sub::Coeffs { kmax } => {
            if kmax > K_MAX {
                return Err(Error::usage(format!("--kmax {kmax} exceeds the supported maximum {K_MAX}")));
            }
            Command::Coeffs { k_max: kmax }
        }
        Sub::Constants {
            modulus,
            residues,
            x_ref,
            all_residues,
        } => {
            let modulus = parse_count(&modulus).map_err(|e| Error::usage(format!("--modulus: {e}")))?;
            if modulus == 0 {
                return Err(mapl_core::Error::ZeroModulus.into());
            }
            let residues = match (all_residues, residues) {
                (true, Some(_)) => return Err(Error::usage("--all-residues and --residues are exclusive")),
                (true, None) => Residues::All,
                (false, r) => {
                    let list = r.map(|s| parse_list("residues", &s)).transpose()?.unwrap_or_else(|| vec![1]);
                    for &h in &list {
                        ClassKey::new(modulus, h, 0)?;
                    }
                    Residues::List(list)
                }
            };
            let x_ref = optional_count("x-ref", x_ref.as_ref())?;
            if let Some(x) = x_ref {
                if x < MIN_X_REF {
                    return Err(mapl_core::Error::PrecisionWarning { x_ref: x, min: MIN_X_REF }.into());
                }
            }
            Command::Constants {
                modulus,
                residues,
                x_ref,
            }
        }
        Sub::Verify {
            theorem,
            n,
            k,
            moduli,
            residues,
            grid,
            x_ref,
            bound,
            window,
        } => Command::Verify(verify_plan(
            &theorem,
            n,
            k,
            moduli.as_ref(),
            residues.as_ref(),
            &grid,
            x_ref.as_ref(),
            bound,
            window,
        )?),
        Sub::Identities { trials, seed } => {
            if trials == 0 {
                return Err(Error::usage("--trials must be positive"));
            }
            Command::Identities { trials, seed }
        }
    };
    let limit = optional_count("limit", cli.common.limit.as_ref())?;
    if let Some(l) = limit {
        if l < 2 {
            return Err(mapl_core::Error::EmptyTable(l).into());
        }
    }
    if cli.common.threads == Some(0) {
        return Err(Error::usage("--threads must be positive"));
    }
    Ok(RunPlan {
        command,
        limit,
        format: cli.common.output,
        out: cli.common.out,
        cache: cli.common.cache,
        threads: cli.common.threads,
    })
}

/// Result of a successful run; `passed` is false when a verification or
/// identity check failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub table: Table,
    pub passed: bool,
    pub summary: Vec<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

/// `MAPL_CACHE` when set and non-empty, else `--cache`.
pub fn cache_path(plan: &RunPlan) -> Option<PathBuf> {
    match std::env::var_os(CACHE_ENV) {
        Some(v) if !v.is_empty() => Some(PathBuf::from(v)),
        _ => plan.cache.clone(),
    }
}

fn table_for(plan: &RunPlan, needed: u64) -> Result<PrimeTable> {
    let limit = plan.limit.unwrap_or(needed);
    let table = load_or_build(limit, cache_path(plan).as_deref())?;
    table.check(needed)?;
    Ok(table)
}

fn moduli_field(spec: &APSpec, f: impl Fn(&mapl_core::multisum::Progression) -> u64) -> String {
    spec.pairs().iter().map(|p| f(p).to_string()).collect::<Vec<_>>().join(",")
}

/// Runs `plan` and returns its table without writing it anywhere.
pub fn evaluate(plan: &RunPlan) -> Result<Outcome> {
    match &plan.command {
        Command::Sieve { grid } => {
            let grid = grid.clone().unwrap_or_else(|| vec![plan.limit.unwrap_or(DEFAULT_SIEVE_LIMIT)]);
            let top = *grid.last().expect("grids are non-empty");
            let table = SharedPrefixCache::new(Arc::new(table_for(plan, top.max(2))?));
            let mut t = Table::new(&["x", "prime_count", "recip_sum", "log_recip_sum"]);
            for &x in &grid {
                t.push(vec![
                    x.into(),
                    (table.shared_table().count_upto(x) as u64).into(),
                    logk_recip_sum_ap(&table, x, 0, 1, 0)?.into(),
                    logk_recip_sum_ap(&table, x, 1, 1, 0)?.into(),
                ]);
            }
            let summary = vec![format!(
                "sieved {} primes up to {}",
                table.shared_table().len(),
                table.shared_table().limit()
            )];
            Ok(Outcome {
                table: t,
                passed: true,
                summary,
            })
        }
        Command::Coeffs { k_max } => {
            let cache = ConstantsCache::default();
            let tables: Vec<_> = Method::ALL
                .iter()
                .map(|&m| ak_table(*k_max, m, &cache))
                .collect::<mapl_core::Result<_>>()?;
            let mut t = Table::new(&["k", "a_recurrence", "a_gamma", "a_bell", "max_pairwise_diff"]);
            for k in 0..=*k_max {
                let v: Vec<f64> = tables.iter().map(|a| a.get(k)).collect();
                let mut diff = 0.0f64;
                for i in 0..v.len() {
                    for j in i + 1..v.len() {
                        diff = diff.max((v[i] - v[j]).abs());
                    }
                }
                t.push(vec![u64::from(k).into(), v[0].into(), v[1].into(), v[2].into(), diff.into()]);
            }
            Ok(Outcome {
                table: t,
                passed: true,
                summary: Vec::new(),
            })
        }
        Command::Constants {
            modulus,
            residues,
            x_ref,
        } => {
            let x_ref = x_ref.or(plan.limit).unwrap_or(DEFAULT_X_REF);
            let src = SharedPrefixCache::new(Arc::new(table_for(plan, x_ref)?));
            let hs: Vec<u64> = match residues {
                Residues::All => (0..*modulus).filter(|&h| gcd(h, *modulus) == 1).collect(),
                Residues::List(l) => l.clone(),
            };
            let mut t = Table::new(&["m", "h", "value", "uncertainty", "x_ref"]);
            for h in hs {
                let c = estimate_mertens_constant(&src, *modulus, h, x_ref)?;
                t.push(vec![c.m.into(), c.h.into(), c.value.into(), c.uncertainty.into(), c.x_ref.into()]);
            }
            Ok(Outcome {
                table: t,
                passed: true,
                summary: Vec::new(),
            })
        }
        Command::Verify(v) => {
            let top = *v.grid.last().expect("grids are non-empty");
            let x_ref = v.x_ref.unwrap_or_else(|| plan.limit.unwrap_or(top));
            let src = SharedPrefixCache::new(Arc::new(table_for(plan, top.max(x_ref))?));
            let a = ak_table((v.n as u32).max(2), Method::Recurrence, &ConstantsCache::default())?;
            let run = run_verify(
                &src,
                &a,
                VerifyConfig {
                    theorem: v.theorem,
                    spec: v.spec.clone(),
                    grid: v.grid.clone(),
                    x_ref,
                    bound: v.bound,
                    window: v.window,
                },
            )?;
            let moduli = moduli_field(&v.spec, |p| p.m);
            let residues = moduli_field(&v.spec, |p| p.h);
            let mut t = Table::new(&[
                "theorem",
                "n",
                "k",
                "moduli",
                "residues",
                "x",
                "empirical",
                "predicted",
                "residual",
                "scaled_residual",
            ]);
            for r in &run.rows {
                t.push(vec![
                    v.theorem.label().into(),
                    (v.n as u64).into(),
                    u64::from(run.config.k()).into(),
                    Cell::Text(moduli.clone()),
                    Cell::Text(residues.clone()),
                    r.x.into(),
                    r.empirical.into(),
                    r.predicted.into(),
                    r.residual.into(),
                    r.scaled_residual.into(),
                ]);
            }
            let mode = if run.hold_out() { "hold-out" } else { "in-sample" };
            let mut summary = vec![
                format!("theorem {} n={} constants at x_ref={x_ref} ({mode})", v.theorem.label(), v.n),
                run.trend.describe(),
            ];
            if let Some(s) = &run.stronger {
                summary.push(format!("with (loglog x)^(n-2): {}", s.describe()));
            }
            summary.push(format!("trend test {}", if run.passed() { "passed" } else { "FAILED" }));
            Ok(Outcome {
                table: t,
                passed: run.passed(),
                summary,
            })
        }
        Command::Identities { trials, seed } => {
            let rows = run_identities(*trials, *seed)?;
            let passed = rows.iter().all(|r| r.passed());
            let summary = rows
                .iter()
                .map(|r| format!("{:<56} {}", r.name, if r.passed() { "pass" } else { "FAIL" }))
                .collect();
            Ok(Outcome {
                table: identity_table(&rows),
                passed,
                summary,
            })
        }
    }
}

/// Runs `plan` on its own thread pool when `--threads` is set, writes the
/// table and returns the outcome.
pub fn execute(plan: &RunPlan) -> Result<Outcome> {
    let outcome = match plan.threads {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build()?.install(|| evaluate(plan))?,
        None => evaluate(plan)?,
    };
    outcome.table.emit(plan.format, plan.out.as_deref())?;
    Ok(outcome)
}

/// Full command line behaviour; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match parse_cli(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = plan_from(cli).and_then(|plan| execute(&plan));
    match result {
        Ok(outcome) => {
            for line in &outcome.summary {
                eprintln!("{line}");
            }
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
