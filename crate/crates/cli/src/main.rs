//! Command-line front end: structure checks, taming/SKT verdicts with exact
//! certificates, catalog access, the verdict-regression table, and standalone
//! report re-verification.
//!
//! Exit codes for `decide`: 0 = exists, 1 = not-exists, 2 = unknown,
//! 3 = input/processing error. `paper-table` exits nonzero on any mismatch;
//! `verify-report` exits nonzero when a certificate fails to re-verify.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use solvtame_core::catalog;
use solvtame_core::doc::AlgebraDocument;
use solvtame_core::report::{self, DecideMode, VerdictReport};

#[derive(Parser)]
#[command(name = "solvtame", version, about = "Invariant taming/SKT feasibility for solvable Lie algebras, with exact certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct OutputOpts {
    /// Emit the full JSON report.
    #[arg(long, conflicts_with = "text")]
    json: bool,
    /// Emit a human-readable summary (default).
    #[arg(long)]
    text: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an algebra document and report structure facts.
    Check {
        file: PathBuf,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Decide taming or SKT existence and emit a certificate report.
    Decide {
        file: PathBuf,
        /// Decide existence of an invariant symplectic form taming J (default).
        #[arg(long, conflicts_with = "skt")]
        taming: bool,
        /// Decide existence of an invariant SKT metric.
        #[arg(long)]
        skt: bool,
        /// Seed for the randomized feasibility restarts.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Clustering tolerance for the floating weight regime.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// List or emit catalog entries.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Run the expected-verdict regression table over the catalog roster.
    PaperTable {
        /// Only run entries whose id contains this substring.
        #[arg(long)]
        only: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Re-verify every certificate in a report, exactly, from the JSON alone.
    VerifyReport { file: PathBuf },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// List catalog ids and their parameters.
    List,
    /// Emit a catalog entry as an algebra document.
    Emit {
        id: String,
        /// Parameter overrides, `--param key=value` (repeatable).
        #[arg(long = "param", value_parser = parse_kv)]
        params: Vec<(String, String)>,
    },
}

fn parse_kv(s: &str) -> Result<(String, String), String> {
    match s.split_once('=') {
        Some((k, v)) => Ok((k.trim().to_string(), v.trim().to_string())),
        None => Err(format!("expected key=value, got `{s}`")),
    }
}

fn read_doc(path: &PathBuf) -> Result<AlgebraDocument, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    AlgebraDocument::parse(&text).map_err(|e| e.to_string())
}

fn print_report_text(report: &VerdictReport) {
    let f = &report.facts;
    println!("digest        {}", report.digest);
    println!("dimension     {}", report.input.dimension);
    println!("solvable      {}", f.solvable);
    println!("nilpotent     {}", f.nilpotent);
    println!("abelian       {}", f.abelian);
    println!("unimodular    {}", f.unimodular);
    println!("derived len   {}", f.derived_length);
    if let Some(t) = f.type_i {
        println!("type (I)      {t}");
    }
    if let Some(d) = f.nilradical_dim {
        println!("nilradical    dim {d}");
    }
    if let Some(a) = f.almost_abelian {
        println!("almost-abelian {a}");
    }
    if let Some(i) = f.integrable {
        println!("J integrable  {i}");
    }
    if let Some(a) = f.abelian_j {
        println!("J abelian     {a}");
    }
    for (label, rec) in [("taming", &report.taming), ("skt", &report.skt)] {
        if let Some(rec) = rec {
            println!("{label:13} {} over {} (dim {})", rec.verdict, rec.condition, rec.space_dim);
            if let Some(dir) = &rec.direction {
                println!("  degenerate direction: [{}]", dir.join(", "));
            }
            if let Some(w) = &rec.witness {
                println!("  witness coefficients: [{}]", w.coefficients.join(", "));
                println!("  leading minors:       [{}]", w.minors.join(", "));
            }
            if let Some(d) = &rec.diagnostics {
                println!("  diagnostics: lambda_min ~ {:.3e}; {}", d.best_lambda_min, d.note);
            }
        }
    }
}

fn run() -> Result<u8, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Check { file, output } => {
            let doc = read_doc(&file)?;
            let report = report::run_check(&doc).map_err(|e| e.to_string())?;
            if output.json {
                println!("{}", report.to_json());
            } else {
                print_report_text(&report);
            }
            Ok(0)
        }
        Command::Decide { file, taming, skt, seed, tol, output } => {
            let doc = read_doc(&file)?;
            let mode = if skt {
                DecideMode::Skt
            } else {
                let _ = taming;
                DecideMode::Taming
            };
            let (report, code) = report::run_decide(&doc, mode, seed, tol).map_err(|e| e.to_string())?;
            if output.json {
                println!("{}", report.to_json());
            } else {
                print_report_text(&report);
            }
            Ok(code as u8)
        }
        Command::Catalog { action } => match action {
            CatalogAction::List => {
                for (id, desc) in catalog::catalog_ids() {
                    println!("{id:18} {desc}");
                }
                println!();
                println!("roster entries (paper-table order):");
                for e in catalog::default_entries() {
                    println!("  {:28} {}", e.id, e.description);
                }
                Ok(0)
            }
            CatalogAction::Emit { id, params } => {
                let map: BTreeMap<String, String> = params.into_iter().collect();
                let entry = catalog::build_by_id(&id, &map).map_err(|e| e.to_string())?;
                entry.validate().map_err(|e| e.to_string())?;
                println!("{}", AlgebraDocument::from_entry(&entry).emit());
                Ok(0)
            }
        },
        Command::PaperTable { only, seed, tol, output } => {
            let table = report::paper_table(only.as_deref(), seed, tol);
            if output.json {
                println!("{}", serde_json::to_string_pretty(&table).expect("table serialization"));
            } else {
                for r in &table.rows {
                    let fmt = |o: &Option<String>| o.clone().unwrap_or_else(|| "-".into());
                    println!(
                        "{:10} {:28} taming {:>10} (expected {:>10})  skt {:>10} (expected {:>10})  certs {}  {} ms",
                        if r.matched { "MATCH" } else { "MISMATCH" },
                        r.id,
                        fmt(&r.got_taming),
                        fmt(&r.expected_taming),
                        fmt(&r.got_skt),
                        fmt(&r.expected_skt),
                        if r.certificates_verified { "verified" } else { "FAILED" },
                        r.ms
                    );
                }
                println!("{}", if table.all_match { "all rows match" } else { "MISMATCHES PRESENT" });
            }
            Ok(if table.all_match { 0 } else { 1 })
        }
        Command::VerifyReport { file } => {
            let text = std::fs::read_to_string(&file).map_err(|e| format!("{}: {e}", file.display()))?;
            match report::verify_report(&text) {
                Ok(summary) => {
                    if let Some(t) = &summary.taming {
                        println!("taming: {t}");
                    }
                    if let Some(s) = &summary.skt {
                        println!("skt: {s}");
                    }
                    println!("digest: ok");
                    Ok(0)
                }
                Err(e) => {
                    eprintln!("verification FAILED: {e}");
                    Ok(1)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    // die quietly when stdout is closed mid-pipe (e.g. `solvtame ... | head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
