//! `lck`: check DSL workspaces, emit canonical definitions, lift
//! Gel'fand-Dorfman data, and explore O-operator hierarchies.

use clap::{Parser, Subcommand};
use lck::jsonout::to_json;
use lck::workspace::{ObjectData, RunOptions, Workspace};
use lck_core::report::Verdict;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "lck", version, about = "Lie conformal algebra verification kernel")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a workspace file and run its check statements.
    Check {
        file: PathBuf,
        /// Emit one JSON object per check (JSON lines).
        #[arg(long)]
        json: bool,
        /// Additionally run the evaluation oracle on every residual with
        /// this many points per symbol and report agreement.
        #[arg(long, value_name = "N")]
        oracle_points: Option<u32>,
        /// Seed for oracle points and witness search.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Include wall-clock timings in JSON output (breaks byte-for-byte
        /// report determinism).
        #[arg(long)]
        timing: bool,
    },
    /// Print the canonical DSL text of one object.
    Emit {
        file: PathBuf,
        #[arg(long)]
        object: String,
    },
    /// Construct the quadratic Lie conformal algebra of a gd block (and lift
    /// a scalar map onto it), printing the result as DSL.
    Lift {
        file: PathBuf,
        #[arg(long)]
        gd: String,
        #[arg(long)]
        map: Option<String>,
    },
    /// Run the O-operator hierarchy T_k = N^k ∘ T with pairwise
    /// compatibility checks.
    Hierarchy {
        file: PathBuf,
        #[arg(long)]
        t: String,
        #[arg(long)]
        n: String,
        #[arg(long)]
        s: String,
        #[arg(long, default_value_t = 3)]
        kmax: u32,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

fn load(file: &PathBuf) -> Result<Workspace, String> {
    let src = std::fs::read_to_string(file)
        .map_err(|e| format!("cannot read {}: {e}", file.display()))?;
    Workspace::parse(&src).map_err(|e| format!("{}: {e}", file.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Check {
            file,
            json,
            oracle_points,
            seed,
            timing,
        } => {
            let ws = load(&file)?;
            let opts = RunOptions { oracle_points, seed };
            let (outcomes, all_pass) = ws.run(&opts);
            for outcome in &outcomes {
                if json {
                    let dto = to_json(outcome, seed, timing);
                    println!("{}", serde_json::to_string(&dto).expect("serialize"));
                } else {
                    print_human(outcome, seed);
                }
            }
            if !json {
                let n_pass = outcomes
                    .iter()
                    .filter(|o| o.report.verdict == Verdict::Pass)
                    .count();
                println!("{n_pass}/{} checks passed", outcomes.len());
            }
            Ok(if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Emit { file, object } => {
            let ws = load(&file)?;
            let text = lck::emit_object(&ws, &object)?;
            print!("{text}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Lift { file, gd, map } => {
            let ws = load(&file)?;
            let text = lift_text(&ws, &gd, map.as_deref())?;
            print!("{text}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Hierarchy {
            file,
            t,
            n,
            s,
            kmax,
            json,
            seed,
        } => {
            let ws = load(&file)?;
            let stmt = lck::ast::CheckStmt {
                kind: "hierarchy".into(),
                args: vec![t, n, s],
                kmax: Some(kmax),
                pos: lck::lex::Pos { line: 0, col: 0 },
            };
            let start = std::time::Instant::now();
            let report = ws.run_check(&stmt);
            let outcome = lck::workspace::CheckOutcome {
                report,
                oracle: None,
                millis: start.elapsed().as_millis(),
            };
            let pass = outcome.report.verdict == Verdict::Pass;
            if json {
                let dto = to_json(&outcome, seed, false);
                println!("{}", serde_json::to_string(&dto).expect("serialize"));
            } else {
                print_human(&outcome, seed);
            }
            Ok(if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}

fn print_human(outcome: &lck::workspace::CheckOutcome, seed: u64) {
    let r = &outcome.report;
    println!(
        "[{}] {} {} ({} ms)",
        r.verdict, r.check, r.subject, outcome.millis
    );
    for note in &r.notes {
        println!("    note: {note}");
    }
    for item in &r.items {
        if item.pass {
            continue;
        }
        println!("    at {}:", item.location);
        for (component, poly) in &item.residuals {
            if !poly.is_zero() {
                println!("      {component}: {poly}");
            }
        }
        for (component, poly) in &item.diagnostics {
            println!("      {component} = {poly}");
        }
    }
    if let Some((point, value)) = r.witness(seed) {
        let rendered: Vec<String> = point.iter().map(|(s, v)| format!("{s}={v}")).collect();
        println!("    witness: {} -> {}", rendered.join(", "), value);
    }
    if let Some(oracle) = &outcome.oracle {
        println!(
            "    oracle: {} points/symbol, {}",
            oracle.points,
            if oracle.agrees { "agrees" } else { "DISAGREES" }
        );
    }
}

fn lift_text(ws: &Workspace, gd_name: &str, map_name: Option<&str>) -> Result<String, String> {
    let gd = match ws.lookup(gd_name) {
        Some(o) => match &o.data {
            ObjectData::Gd(g) => g.clone(),
            other => return Err(format!("`{gd_name}` is a {}, not a gd block", other.kind())),
        },
        None => return Err(format!("unknown gd bialgebra `{gd_name}`")),
    };
    let lifted = lck_core::gdnov::quadratic_from_gd(&gd).map_err(|e| e.to_string())?;
    let alg_name = format!("{gd_name}_lift");
    let mut out = String::new();
    // parameters used anywhere in the lifted tables
    let mut params: Vec<String> = Vec::new();
    for p in lifted.table().iter().flatten().flatten() {
        for idx in p.support() {
            if p.ctx().kind(idx) == lck_core::SymbolKind::Param {
                let name = p.ctx().name(idx).to_string();
                if !params.contains(&name) {
                    params.push(name);
                }
            }
        }
    }
    if let Some(mname) = map_name {
        let mat = match ws.lookup(mname) {
            Some(o) => match &o.data {
                ObjectData::ScalarMap { on, mat } if on == gd_name => mat.clone(),
                ObjectData::ScalarMap { on, .. } => {
                    return Err(format!("map `{mname}` is on `{on}`, not `{gd_name}`"))
                }
                other => return Err(format!("`{mname}` is a {}, not a scalar map", other.kind())),
            },
            None => return Err(format!("unknown map `{mname}`")),
        };
        for p in mat.iter().flatten() {
            for idx in p.support() {
                if p.ctx().kind(idx) == lck_core::SymbolKind::Param {
                    let name = p.ctx().name(idx).to_string();
                    if !params.contains(&name) {
                        params.push(name);
                    }
                }
            }
        }
    }
    if !params.is_empty() {
        out.push_str(&format!("scalars {};\n", params.join(" ")));
    }
    let n = lifted.rank();
    let basis = lifted.module().basis.clone();
    out.push_str(&format!(
        "algebra {} rank {} basis {} {{\n",
        alg_name,
        n,
        basis.join(" ")
    ));
    for i in 0..n {
        for j in i..n {
            let entry = lifted.entry(i, j);
            if !entry.is_zero() {
                let parts: Vec<String> = entry
                    .coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| !p.is_zero())
                    .map(|(k, p)| format!("({p})*{}", basis[k]))
                    .collect();
                out.push_str(&format!(
                    "  [{},{}] = {};\n",
                    basis[i],
                    basis[j],
                    parts.join(" + ")
                ));
            }
        }
    }
    out.push_str("}\n");
    if let Some(mname) = map_name {
        let mat = match &ws.lookup(mname).unwrap().data {
            ObjectData::ScalarMap { mat, .. } => mat.clone(),
            _ => unreachable!(),
        };
        let hom = lck_core::gdnov::lift_hom(&lifted, &mat).map_err(|e| e.to_string())?;
        out.push_str(&format!(
            "map {}_lift : {} -> {} {{\n",
            mname, alg_name, alg_name
        ));
        for (i, row) in hom.mat.iter().enumerate() {
            if row.iter().any(|p| !p.is_zero()) {
                let parts: Vec<String> = row
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| !p.is_zero())
                    .map(|(k, p)| format!("({p})*{}", basis[k]))
                    .collect();
                out.push_str(&format!("  {} -> {};\n", basis[i], parts.join(" + ")));
            }
        }
        out.push_str("}\n");
        out.push_str(&format!(
            "check nijenhuis {} {}_lift;\n",
            alg_name, mname
        ));
    }
    out.push_str(&format!("check lca {};\n", alg_name));
    Ok(out)
}
