//! `coxfilt invariants | basis | verify`.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::mpsc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use coxfilt_algebra::render_poly;
use coxfilt_core::coxeter::{cached_basic_invariants, load_invariants, realize, CoxeterDatum, CoxeterType, InvariantSet};
use coxfilt_core::filtration::{determinant_constant, FiltrationContext};
use coxfilt_core::report::VerificationReport;
use coxfilt_core::Error;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "coxfilt", version, about = "Contact-order filtration bases of Coxeter arrangements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute or load basic invariants and print their summary.
    Invariants(Common),
    /// Print the basis xi^(m) and its certificate.
    Basis {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        m: usize,
    },
    /// Run every identity check up to the given bounds.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        k_max: usize,
        /// Defaults to 2*k_max+1.
        #[arg(long)]
        m_max: Option<usize>,
        /// Corrupt one coefficient of xi_2^(1) so that checks must fail.
        #[arg(long)]
        perturb: bool,
    },
}

#[derive(Args)]
struct Common {
    /// Comma-separated group labels, e.g. A2,B3,I2(5).
    #[arg(long = "type", value_delimiter = ',', required = true)]
    types: Vec<CoxeterType>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Invariant cache; unset means no caching.
    #[arg(long, env = "COXFILT_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// User-supplied invariant file (single label only).
    #[arg(long)]
    invariants: Option<PathBuf>,
    /// Labels processed concurrently; 0 means one per core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Records,
}

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Invariants(common) => cmd_invariants(&common),
        Command::Basis { common, m } => cmd_basis(&common, m),
        Command::Verify { common, k_max, m_max, perturb } => {
            cmd_verify(&common, k_max, m_max.unwrap_or(2 * k_max + 1), perturb)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("coxfilt: {e}");
            ExitCode::from(e.code)
        }
    }
}

struct CliError {
    code: u8,
    msg: String,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.msg)
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError { code: EXIT_USAGE, msg: msg.into() }
}

fn from_core(e: Error) -> CliError {
    let code = match e {
        Error::UnknownLabel(_) | Error::Unsupported { .. } | Error::InvariantFile { .. } | Error::Io(_) => EXIT_USAGE,
        _ => EXIT_FAIL,
    };
    CliError { code, msg: e.to_string() }
}

impl Common {
    fn validate(&self) -> Result<(), CliError> {
        if self.invariants.is_some() && self.types.len() != 1 {
            return Err(usage("--invariants needs exactly one --type"));
        }
        if let Some(dir) = &self.cache_dir {
            std::fs::create_dir_all(dir).map_err(|e| usage(format!("cache directory {}: {e}", dir.display())))?;
        }
        Ok(())
    }

    fn pool(&self) -> Result<rayon::ThreadPool, CliError> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .map_err(|e| usage(format!("thread pool: {e}")))
    }

    fn load(&self, kind: CoxeterType) -> Result<(CoxeterDatum, InvariantSet), Error> {
        let datum = realize(kind)?;
        let inv = match &self.invariants {
            Some(path) => load_invariants(&datum, path).map_err(|e| match e {
                Error::InvariantFile { .. } => e,
                other => Error::InvariantFile { path: path.display().to_string(), msg: other.to_string() },
            })?,
            None => cached_basic_invariants(&datum, self.cache_dir.as_deref())?,
        };
        Ok((datum, inv))
    }
}

/// Runs `f` on every label concurrently and hands results to `emit` in label
/// order as soon as each prefix is complete.
fn ordered_par<T: Send>(
    common: &Common,
    f: impl Fn(CoxeterType) -> T + Sync,
    mut emit: impl FnMut(T) -> io::Result<()>,
) -> Result<(), CliError> {
    let pool = common.pool()?;
    let (tx, rx) = mpsc::channel();
    let mut io_err = None;
    std::thread::scope(|s| {
        s.spawn(|| {
            pool.install(|| {
                common.types.par_iter().enumerate().for_each_with(tx, |tx, (i, &kind)| {
                    let _ = tx.send((i, f(kind)));
                });
            });
        });
        let mut pending = BTreeMap::new();
        let mut next = 0;
        for (i, item) in rx {
            pending.insert(i, item);
            while let Some(item) = pending.remove(&next) {
                next += 1;
                if io_err.is_none() {
                    if let Err(e) = emit(item) {
                        io_err = Some(e);
                    }
                }
            }
        }
    });
    match io_err {
        Some(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(CliError { code: EXIT_FAIL, msg: e.to_string() }),
        _ => Ok(()),
    }
}

#[derive(Serialize)]
struct InvariantRecord {
    label: String,
    degrees: Vec<u32>,
    coxeter_number: u32,
    hyperplanes: usize,
    c: String,
    invariants: Vec<String>,
}

fn cmd_invariants(common: &Common) -> Result<u8, CliError> {
    common.validate()?;
    let mut first_err = None;
    let stdout = io::stdout();
    ordered_par(
        common,
        |kind| common.load(kind),
        |res| {
            let mut out = stdout.lock();
            let (datum, inv) = match res {
                Ok(x) => x,
                Err(e) => {
                    first_err.get_or_insert(e);
                    return Ok(());
                }
            };
            let rec = InvariantRecord {
                label: datum.label(),
                degrees: datum.degrees.clone(),
                coxeter_number: datum.coxeter_number(),
                hyperplanes: datum.hyperplanes.len(),
                c: inv.c.to_string(),
                invariants: inv.p.iter().map(|p| render_poly(p, "X")).collect(),
            };
            match common.format {
                Format::Records => writeln!(out, "{}", serde_json::to_string(&rec).expect("serializable")),
                Format::Text => {
                    let ds: Vec<String> = rec.degrees.iter().map(u32::to_string).collect();
                    writeln!(
                        out,
                        "{}: degrees {}, h={}, {} hyperplanes, Delta = {}*Q",
                        rec.label,
                        ds.join(" "),
                        rec.coxeter_number,
                        rec.hyperplanes,
                        rec.c
                    )?;
                    for (i, p) in rec.invariants.iter().enumerate() {
                        writeln!(out, "  P{} = {p}", i + 1)?;
                    }
                    Ok(())
                }
            }
        },
    )?;
    match first_err {
        Some(e) => Err(from_core(e)),
        None => Ok(0),
    }
}

#[derive(Serialize)]
struct BasisRecord {
    label: String,
    m: usize,
    /// Coefficients of each derivation along `d/dX1 … d/dXl`.
    basis: Vec<Vec<String>>,
    degrees: Vec<Option<u32>>,
    /// `c` with coefficient determinant `c·Q^m`.
    det_constant: Option<String>,
    certificate: Vec<VerificationReport>,
}

fn cmd_basis(common: &Common, m: usize) -> Result<u8, CliError> {
    common.validate()?;
    let mut first_err = None;
    let mut failed = false;
    let stdout = io::stdout();
    ordered_par(
        common,
        |kind| -> Result<BasisRecord, Error> {
            let (datum, inv) = common.load(kind)?;
            let ctx = FiltrationContext::new(datum, inv, false)?;
            let basis = ctx.xi_basis(m)?;
            Ok(BasisRecord {
                label: ctx.label(),
                m,
                basis: basis
                    .iter()
                    .map(|x| x.coeffs().iter().map(|c| coxfilt_algebra::render_ratfunc(c, "X")).collect())
                    .collect(),
                degrees: basis
                    .iter()
                    .map(|x| x.coeffs().iter().filter_map(|c| c.as_poly()?.total_degree()).max())
                    .collect(),
                det_constant: determinant_constant(&basis, m, &ctx.inv.q)?.map(|c| c.to_string()),
                certificate: ctx.certify_basis(m),
            })
        },
        |res| {
            let mut out = stdout.lock();
            let rec = match res {
                Ok(r) => r,
                Err(e) => {
                    first_err.get_or_insert(e);
                    return Ok(());
                }
            };
            failed |= rec.certificate.iter().any(|r| !r.passed());
            match common.format {
                Format::Records => writeln!(out, "{}", serde_json::to_string(&rec).expect("serializable")),
                Format::Text => {
                    writeln!(out, "{} xi^({})", rec.label, rec.m)?;
                    for (j, (coeffs, deg)) in rec.basis.iter().zip(&rec.degrees).enumerate() {
                        let deg = deg.map_or("-".to_string(), |d| d.to_string());
                        writeln!(out, "xi_{}  degree {deg}", j + 1)?;
                        for (i, c) in coeffs.iter().enumerate() {
                            writeln!(out, "  d/dX{}: {c}", i + 1)?;
                        }
                    }
                    match &rec.det_constant {
                        Some(c) => writeln!(out, "det = {c}*Q^{}", rec.m)?,
                        None => writeln!(out, "det is not a nonzero multiple of Q^{}", rec.m)?,
                    }
                    for r in &rec.certificate {
                        writeln!(out, "{r}")?;
                    }
                    Ok(())
                }
            }
        },
    )?;
    if let Some(e) = first_err {
        return Err(from_core(e));
    }
    Ok(if failed { EXIT_FAIL } else { 0 })
}

fn cmd_verify(common: &Common, k_max: usize, m_max: usize, perturb: bool) -> Result<u8, CliError> {
    common.validate()?;
    if k_max == 0 {
        return Err(usage("--k-max must be at least 1"));
    }
    let mut failed = false;
    let mut first_err = None;
    let stdout = io::stdout();
    ordered_par(
        common,
        |kind| -> Result<Vec<VerificationReport>, Error> {
            let (datum, inv) = common.load(kind)?;
            let ctx = FiltrationContext::new(datum, inv, perturb)?;
            Ok(ctx.run_all(k_max, m_max))
        },
        |res| {
            let reports = match res {
                Ok(r) => r,
                Err(e) => {
                    first_err.get_or_insert(e);
                    return Ok(());
                }
            };
            let mut out = stdout.lock();
            for r in &reports {
                failed |= !r.passed();
                match common.format {
                    Format::Records => writeln!(out, "{}", serde_json::to_string(r).expect("serializable"))?,
                    Format::Text => writeln!(out, "{r}")?,
                }
            }
            out.flush()
        },
    )?;
    if let Some(e) = first_err {
        return Err(from_core(e));
    }
    Ok(if failed { EXIT_FAIL } else { 0 })
}

