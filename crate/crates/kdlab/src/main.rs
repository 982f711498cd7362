//! Command-line front end: single-graph checks, spectral radius,
//! extremal constructions, verification suites, and lemma sweeps. All
//! structured output is JSON with a top-level schema_version of 1.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use kdlab::deficiency::{classify_gfc_gbc, deficiency_k, is_kd_critical_deficiency, CheckError};
use kdlab::extremal::{build_split_join, split_join_size};
use kdlab::harness::{lemma_sweep_rows, run_suite, CorpusSpec, GridSpec, SuiteId, SuiteSpec, Verdict};
use kdlab::kmatching::{is_kd_critical_witness, mu_k, MatchingError};
use kdlab::spectral::{half_join_poly, largest_root, spectral_radius, split_join_poly, DEFAULT_TOL};
use kdlab::{parse_graph6, write_graph6};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "kdlab",
    version,
    about = "Criticality, matchings, and spectral bounds for graphs up to 64 vertices"
)]
struct Cli {
    /// Worker threads (overrides the KDLAB_THREADS environment variable).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Deficiency, barriers, classification, and criticality of one graph.
    Check {
        /// graph6 string (quote it: many encodings contain shell metacharacters).
        graph6: String,
        /// Load bound k.
        #[arg(long)]
        k: u32,
        /// Restrict the criticality report to one defect d.
        #[arg(long)]
        d: Option<u32>,
    },
    /// Adjacency spectral radius with a convergence certificate.
    Rho {
        graph6: String,
        /// Residual tolerance for the power iteration.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Build the extremal clique join and report its invariants.
    Extremal {
        #[arg(long)]
        n: i64,
        /// Split parameter: clique size of the join.
        #[arg(long)]
        s: i64,
        #[arg(long, value_enum, default_value_t = Emit::Json)]
        emit: Emit,
    },
    /// Run a verification suite described by a JSON spec file.
    Suite {
        #[arg(long)]
        spec: PathBuf,
        /// Replace the spec's corpus with this graph6 file.
        #[arg(long)]
        corpus: Option<String>,
    },
    /// Run a lemma sweep over a parameter grid.
    Sweep {
        #[arg(long)]
        lemma: u32,
        /// JSON grid file; defaults apply when omitted.
        #[arg(long)]
        grid: Option<PathBuf>,
        /// Emit one CSV row per comparison case instead of a report.
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Json,
    Graph6,
    Csv,
}

fn main() -> ExitCode {
    // Pipelines (`kdlab ... | head`) close stdout early; die like any
    // classic filter instead of panicking on the broken pipe.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    if let Err(message) = init_threads(cli.threads) {
        eprintln!("error: {message}");
        return ExitCode::from(2);
    }
    let result = match cli.command {
        Command::Check { graph6, k, d } => cmd_check(&graph6, k, d),
        Command::Rho { graph6, tol } => cmd_rho(&graph6, tol),
        Command::Extremal { n, s, emit } => cmd_extremal(n, s, emit),
        Command::Suite { spec, corpus } => cmd_suite(&spec, corpus),
        Command::Sweep { lemma, grid, csv } => cmd_sweep(lemma, grid.as_deref(), csv),
    };
    match result {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn init_threads(flag: Option<usize>) -> Result<(), String> {
    let from_env = match std::env::var("KDLAB_THREADS") {
        Ok(text) => Some(
            text.trim()
                .parse::<usize>()
                .map_err(|_| format!("KDLAB_THREADS must be a positive integer, got {text:?}"))?,
        ),
        Err(_) => None,
    };
    let threads = flag.or(from_env);
    match threads {
        None => Ok(()),
        Some(0) => Err("thread count must be at least 1".into()),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| e.to_string()),
    }
}

fn emit_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn cmd_check(graph6: &str, k: u32, d: Option<u32>) -> Result<ExitCode, String> {
    let g = parse_graph6(graph6).map_err(|e| e.to_string())?;
    let n = g.order();
    let mut notes: Vec<String> = Vec::new();

    let deficiency = deficiency_k(&g, k).map_err(|e| e.to_string())?;

    let classification = match classify_gfc_gbc(&g, k) {
        Ok(v) => serde_json::to_value(v).expect("serializable"),
        Err(e @ (CheckError::Disconnected | CheckError::OrderTooSmall { .. } | CheckError::KTooSmall { .. })) => {
            notes.push(format!("classification skipped: {e}"));
            serde_json::Value::Null
        }
        Err(e) => return Err(e.to_string()),
    };

    let (mu, matching) = match mu_k(&g, k) {
        Ok((mu, m)) => (json!(mu), serde_json::to_value(m).expect("serializable")),
        Err(MatchingError::Budget { states, budget }) => {
            notes.push(format!(
                "matching oracle skipped: {states} states exceed the budget of {budget}"
            ));
            (serde_json::Value::Null, serde_json::Value::Null)
        }
        Err(e) => return Err(e.to_string()),
    };

    let mut criticality: Vec<serde_json::Value> = Vec::new();
    if k >= 3 && k % 2 == 1 {
        let ds: Vec<u32> = match d {
            Some(d) => vec![d],
            None => (1..=k).filter(|d| (*d as usize) % 2 == n % 2).collect(),
        };
        for d in ds {
            let by_deficiency = match is_kd_critical_deficiency(&g, k, d) {
                Ok(v) => v,
                Err(e) => {
                    notes.push(format!("criticality at d = {d} skipped: {e}"));
                    continue;
                }
            };
            let (by_witness, agree) = match is_kd_critical_witness(&g, k, d) {
                Ok(w) => {
                    let agree = w.holds == by_deficiency.holds;
                    (serde_json::to_value(w).expect("serializable"), json!(agree))
                }
                Err(MatchingError::Budget { .. }) => {
                    notes.push(format!("witness oracle at d = {d} skipped: over state budget"));
                    (serde_json::Value::Null, serde_json::Value::Null)
                }
                Err(e) => return Err(e.to_string()),
            };
            criticality.push(json!({
                "d": d,
                "deficiency_oracle": by_deficiency,
                "witness_oracle": by_witness,
                "oracles_agree": agree,
            }));
        }
    } else if d.is_some() {
        return Err(format!("criticality is defined for odd k >= 3, got k = {k}"));
    }

    emit_json(&json!({
        "schema_version": SCHEMA_VERSION,
        "graph6": write_graph6(&g),
        "order": n,
        "edges": g.edge_count(),
        "min_degree": g.min_degree(),
        "connected": g.is_connected(),
        "k": k,
        "deficiency": deficiency,
        "classification": classification,
        "mu": mu,
        "optimal_matching": matching,
        "criticality": criticality,
        "notes": notes,
    }));
    Ok(ExitCode::SUCCESS)
}

fn cmd_rho(graph6: &str, tol: f64) -> Result<ExitCode, String> {
    let g = parse_graph6(graph6).map_err(|e| e.to_string())?;
    let result = spectral_radius(&g, tol).map_err(|e| e.to_string())?;
    emit_json(&json!({
        "schema_version": SCHEMA_VERSION,
        "graph6": write_graph6(&g),
        "order": g.order(),
        "tol": tol,
        "rho": result.value,
        "iterations": result.iterations,
        "residual": result.residual,
    }));
    Ok(ExitCode::SUCCESS)
}

fn cmd_extremal(n: i64, s: i64, emit: Emit) -> Result<ExitCode, String> {
    let g = build_split_join(n, s).map_err(|e| e.to_string())?;
    let g6 = write_graph6(&g);
    if emit == Emit::Graph6 {
        println!("{g6}");
        return Ok(ExitCode::SUCCESS);
    }
    let size = split_join_size(n, s);
    debug_assert_eq!(size, g.edge_count() as i64);
    let poly: Vec<i64> = if 2 * s == n {
        half_join_poly(n).map_err(|e| e.to_string())?.to_vec()
    } else {
        split_join_poly(n, s).to_vec()
    };
    let floats: Vec<f64> = poly.iter().map(|&c| c as f64).collect();
    let root = largest_root(&floats).map_err(|e| e.to_string())?;
    let iterated = spectral_radius(&g, DEFAULT_TOL).map_err(|e| e.to_string())?;
    if emit == Emit::Csv {
        println!("n,s,edges,min_degree,rho");
        println!("{n},{s},{size},{},{root:.12}", g.min_degree().unwrap_or(0));
        return Ok(ExitCode::SUCCESS);
    }
    emit_json(&json!({
        "schema_version": SCHEMA_VERSION,
        "n": n,
        "s": s,
        "graph6": g6,
        "edges": size,
        "min_degree": g.min_degree(),
        "characteristic_factor": poly,
        "rho_root": root,
        "rho_iterated": iterated.value,
        "root_vs_iterated": (root - iterated.value).abs(),
    }));
    Ok(ExitCode::SUCCESS)
}

fn verdict_exit(verdict: Verdict) -> ExitCode {
    match verdict {
        Verdict::Pass => ExitCode::SUCCESS,
        Verdict::Fail | Verdict::Inconclusive => ExitCode::from(1),
    }
}

fn cmd_suite(path: &std::path::Path, corpus: Option<String>) -> Result<ExitCode, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read spec file {}: {e}", path.display()))?;
    let mut spec: SuiteSpec = serde_json::from_str(&text)
        .map_err(|e| format!("bad suite spec {}: {e}", path.display()))?;
    if let Some(path) = corpus {
        spec.corpus = CorpusSpec::Graph6File { path };
    }
    let report = run_suite(&spec).map_err(|e| e.to_string())?;
    emit_json(&serde_json::to_value(&report).expect("serializable"));
    Ok(verdict_exit(report.verdict))
}

fn cmd_sweep(lemma: u32, grid: Option<&std::path::Path>, csv: bool) -> Result<ExitCode, String> {
    let grid_spec: Option<GridSpec> = match grid {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read grid file {}: {e}", path.display()))?;
            Some(
                serde_json::from_str(&text)
                    .map_err(|e| format!("bad grid file {}: {e}", path.display()))?,
            )
        }
        None => None,
    };
    if csv {
        let grid = grid_spec.unwrap_or_default();
        let rows = lemma_sweep_rows(lemma, &grid).map_err(|e| e.to_string())?;
        let Some(rows) = rows else {
            return Err(format!(
                "lemma {lemma} is a randomized sweep with no case table; run without --csv"
            ));
        };
        println!("case,clause,outcome,margin,detail");
        let mut all_hold = true;
        for (label, v) in &rows {
            let outcome = match v.outcome {
                kdlab::extremal::ComparisonOutcome::Holds => "holds",
                kdlab::extremal::ComparisonOutcome::Fails => {
                    all_hold = false;
                    "fails"
                }
                kdlab::extremal::ComparisonOutcome::Inconclusive => {
                    all_hold = false;
                    "inconclusive"
                }
            };
            let margin = v.margin.map_or(String::new(), |m| format!("{m:.12e}"));
            println!(
                "{},{},{outcome},{margin},{}",
                csv_field(label),
                csv_field(&v.case),
                csv_field(&v.detail)
            );
        }
        return Ok(if all_hold { ExitCode::SUCCESS } else { ExitCode::from(1) });
    }
    let mut spec = SuiteSpec::new(SuiteId::LemmaSweep);
    spec.lemma = Some(lemma);
    spec.grid = grid_spec;
    let report = run_suite(&spec).map_err(|e| e.to_string())?;
    emit_json(&serde_json::to_value(&report).expect("serializable"));
    Ok(verdict_exit(report.verdict))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
