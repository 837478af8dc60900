//! Command-line front end.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use crate::abelian::k_groups_low_dim;
use crate::endomorphisms::{builtin, EndoError, ExpandingEndo, BUILTIN_NAMES};
use crate::files::{load_endo, resolve_manifold, FileError, ManifoldFile};
use crate::invariants::{compute_report, periodic_points, run_checks, InvariantError, Status};
use crate::manifolds::{catalog, FlatManifold};
use crate::oracle::DEFAULT_DEPTH;
use crate::report::{render_text, ReportDocument, ReportError};
use crate::verify::{builtin_check_table, run_all};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "flatsol", version, about = "Invariants of solenoids over flat manifolds")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List catalog manifolds and builtin endomorphisms.
    List,
    /// Homology, cohomology and K-groups of one manifold.
    Show {
        /// Catalog name or manifold file.
        #[arg(long)]
        manifold: String,
    },
    /// Full invariant report for an endomorphism.
    Compute {
        /// Builtin name or endomorphism file.
        #[arg(long)]
        endo: String,
    },
    /// Acceptance criteria and theorem checks over all builtins.
    Verify {
        /// Oracle fingerprint depth.
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: u32,
    },
    /// Periodic-point counts `|Per_k|`.
    Periodic {
        /// Builtin name or endomorphism file.
        #[arg(long)]
        endo: String,
        /// A period `k` or an inclusive range `a..b`.
        #[arg(long, default_value = "1")]
        k: String,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    File(#[from] FileError),
    #[error(transparent)]
    Endo(#[from] EndoError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error("bad period range {0:?}; use k or a..b with 1 <= a <= b")]
    Range(String),
}

/// Output text and exit status.
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

fn ok(stdout: String) -> Outcome {
    Outcome { stdout, code: 0 }
}

fn resolve_endo(reference: &str) -> Result<ExpandingEndo, CliError> {
    let path = Path::new(reference);
    if path.is_file() {
        Ok(load_endo(path)?)
    } else {
        Ok(builtin(reference)?)
    }
}

pub fn parse_range(s: &str) -> Result<(u32, u32), CliError> {
    let err = || CliError::Range(s.to_string());
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a.trim(), b.trim().trim_start_matches('=')),
        None => (s.trim(), s.trim()),
    };
    let (a, b): (u32, u32) = (a.parse().map_err(|_| err())?, b.parse().map_err(|_| err())?);
    if a == 0 || a > b {
        return Err(err());
    }
    Ok((a, b))
}

fn list(format: Format) -> String {
    let ms = catalog();
    match format {
        Format::Json => {
            let manifolds: Vec<ManifoldFile> = ms.iter().map(ManifoldFile::from).collect();
            format!("{:#}\n", json!({ "manifolds": manifolds, "endomorphisms": BUILTIN_NAMES }))
        }
        Format::Text => {
            let mut out = String::from("manifolds\n");
            for m in &ms {
                let h: Vec<String> = m.homology.iter().map(ToString::to_string).collect();
                let _ = writeln!(
                    out,
                    "  {:<6} d={} {:<13} |F|={:<2} H_* = ({})",
                    m.name,
                    m.dim,
                    if m.orientable { "orientable" } else { "nonorientable" },
                    m.holonomy_order,
                    h.join(", ")
                );
            }
            out.push_str("endomorphisms\n");
            for name in BUILTIN_NAMES {
                let e = builtin(name).expect("builtins load");
                let _ = writeln!(out, "  {:<8} {} of {}", name, e.degree, e.manifold.name);
            }
            out
        }
    }
}

fn show(m: &FlatManifold, format: Format) -> Result<String, CliError> {
    let cohomology = m.cohomology().map_err(FileError::from)?;
    let k = k_groups_low_dim(&cohomology, m.dim).ok();
    let kh = k_groups_low_dim(&m.homology, m.dim).ok();
    let render = |gs: &[crate::abelian::FgAbGroup]| gs.iter().map(ToString::to_string).collect::<Vec<_>>();
    Ok(match format {
        Format::Json => {
            let pair = |p: &Option<(crate::abelian::FgAbGroup, crate::abelian::FgAbGroup)>| match p {
                Some((a, b)) => json!([a.to_string(), b.to_string()]),
                None => json!("unsupported"),
            };
            format!(
                "{:#}\n",
                json!({
                    "name": m.name,
                    "dim": m.dim,
                    "orientable": m.orientable,
                    "holonomy_order": m.holonomy_order,
                    "homology": render(&m.homology),
                    "cohomology": render(&cohomology),
                    "k_theory": pair(&k),
                    "k_homology": pair(&kh),
                })
            )
        }
        Format::Text => {
            let mut out = m.to_string();
            for (i, c) in cohomology.iter().enumerate() {
                let _ = writeln!(out, "  H^{i} = {c}");
            }
            match (k, kh) {
                (Some((k0, k1)), Some((h0, h1))) => {
                    let _ = writeln!(out, "  K^0 = {k0}, K^1 = {k1}");
                    let _ = writeln!(out, "  K_0 = {h0}, K_1 = {h1}");
                }
                _ => {
                    let _ = writeln!(out, "  K-groups unsupported above dimension three");
                }
            }
            out
        }
    })
}

fn compute(e: &ExpandingEndo, format: Format) -> Result<String, CliError> {
    let r = compute_report(e)?;
    let spinc = e.manifold.orientable && e.dim() <= 3;
    let checks = run_checks(e, &r, spinc);
    Ok(match format {
        Format::Json => ReportDocument::new(&r, &checks)?.to_json(),
        Format::Text => render_text(&r, &checks),
    })
}

fn periodic(e: &ExpandingEndo, range: (u32, u32), format: Format) -> Result<String, CliError> {
    let mut rows = Vec::new();
    for k in range.0..=range.1 {
        rows.push((k, periodic_points(e, k)?));
    }
    Ok(match format {
        Format::Json => {
            let items: Vec<_> = rows
                .iter()
                .map(|(k, p)| json!({ "k": k, "value": p.value.to_string(), "bound": [p.bound.0.to_string(), p.bound.1.to_string()] }))
                .collect();
            format!("{:#}\n", json!({ "manifold": e.manifold.name, "degree": e.degree.to_string(), "periodic": items }))
        }
        Format::Text => {
            let mut out = format!("{}, {}-fold cover, top-degree sign {:+}\n", e.manifold.name, e.degree, e.top_sign);
            for (k, p) in rows {
                let _ = writeln!(out, "  |Per_{k}| = {}    bound {{{}, {}}}", p.value, p.bound.0, p.bound.1);
            }
            out
        }
    })
}

fn verify(depth: u32, format: Format) -> Outcome {
    let criteria = run_all(depth);
    let checks = builtin_check_table();
    let failed = criteria.iter().any(|c| !c.passed) || checks.iter().any(|c| c.2 == Status::Fail);
    let stdout = match format {
        Format::Json => {
            let cs: Vec<_> = criteria.iter().map(|c| json!({ "id": c.id, "name": c.name, "passed": c.passed, "detail": c.detail })).collect();
            let ts: Vec<_> = checks
                .iter()
                .map(|(endo, name, status, detail)| json!({ "endo": endo, "name": name, "status": status, "detail": detail }))
                .collect();
            format!("{:#}\n", json!({ "criteria": cs, "checks": ts, "passed": !failed }))
        }
        Format::Text => {
            let mut out = String::from("acceptance criteria\n");
            for c in &criteria {
                let _ = writeln!(out, "  {c}");
            }
            out.push_str("theorem checks\n");
            for (endo, name, status, detail) in &checks {
                let _ = writeln!(out, "  {:<8} {:<24} {:<7} {detail}", endo, name, status.to_string());
            }
            let _ = writeln!(out, "{}", if failed { "FAILED" } else { "all passed" });
            out
        }
    };
    Outcome { stdout, code: if failed { 1 } else { 0 } }
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let f = cfg.format;
    match &cfg.command {
        Command::List => Ok(ok(list(f))),
        Command::Show { manifold } => Ok(ok(show(&resolve_manifold(manifold, None)?, f)?)),
        Command::Compute { endo } => Ok(ok(compute(&resolve_endo(endo)?, f)?)),
        Command::Verify { depth } => Ok(verify(*depth, f)),
        Command::Periodic { endo, k } => Ok(ok(periodic(&resolve_endo(endo)?, parse_range(k)?, f)?)),
    }
}

/// Parses arguments, runs, prints, and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cfg) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            outcome.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
