use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hilbert_core::audit::{self, AuditReport};
use hilbert_core::axioms::{axiom_sets, AxiomSet, SET_NAMES};
use hilbert_core::engine::{bounded_closure, prove, Budget, SearchOutcome};
use hilbert_core::kernel::{check_proof_with, CheckOptions};
use hilbert_core::named::Params;
use hilbert_core::script::{apply_set, parse_formula_list, parse_proof, write_proof};
use hilbert_core::semantics::{eval_arith, falsifying_valuation, skeletonize, BoundedModelConfig, Universe};
use hilbert_core::Formula;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "hilbert", version, about = "Hilbert-style proof checker, prover and audit runner")]
struct Cli {
    /// Parameter binding `name=formula` (alpha_p, delta, beta0).
    #[arg(long = "set", global = true, value_name = "NAME=FORMULA")]
    sets: Vec<String>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a proof file.
    Check {
        file: PathBuf,
        /// Axiom sets the proof may cite (default: all).
        #[arg(long)]
        axioms: Option<String>,
        /// Reject gen over a variable free in a used hypothesis.
        #[arg(long)]
        strict: bool,
    },
    /// Search for a proof of a goal.
    Prove {
        #[arg(long)]
        goal: String,
        /// One hypothesis per line.
        #[arg(long)]
        hyp: Option<PathBuf>,
        #[arg(long, default_value = "L12")]
        axioms: String,
        #[arg(long, default_value_t = 1_000_000)]
        max_steps: u64,
        /// Write the proof here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Forward-chaining closure of a hypothesis file.
    Closure {
        #[arg(long)]
        hyp: PathBuf,
        #[arg(long, default_value = "L12")]
        axioms: String,
        #[arg(long, default_value_t = 10_000)]
        max_steps: u64,
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Tautology test for each formula in a file.
    Taut { file: PathBuf },
    /// Run an audit script: a builtin id, `all`, or a script file.
    Audit {
        script: String,
        #[arg(long)]
        deterministic: bool,
        /// Machine-readable report path; details go to `<path>.d/`.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = 1_000_000)]
        max_steps: u64,
    },
    /// Evaluate a sentence in the standard model truncated at a bound.
    Eval {
        #[arg(long)]
        bound: u64,
        #[arg(long, value_enum, default_value_t = UniverseArg::Naturals)]
        universe: UniverseArg,
        formula: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum UniverseArg {
    Naturals,
    Positive,
}

struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Usage> {
    fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn params(sets: &[String]) -> Result<Params, Usage> {
    let mut p = Params::default();
    for s in sets {
        let (name, value) = s.split_once('=').ok_or_else(|| Usage(format!("bad --set `{s}`")))?;
        apply_set(&mut p, name.trim(), value.trim()).map_err(Usage)?;
    }
    Ok(p)
}

fn sets(names: &str, p: &Params) -> Result<Vec<AxiomSet>, Usage> {
    Ok(axiom_sets(names, p)?)
}

fn hyps(path: Option<&Path>, p: &Params) -> Result<Vec<Formula>, Usage> {
    match path {
        Some(path) => Ok(parse_formula_list(&read(path)?, p)?),
        None => Ok(Vec::new()),
    }
}

fn check(file: &Path, axioms: Option<&str>, strict: bool, cli_params: Params) -> Result<u8, Usage> {
    let (proof, mut p) = parse_proof(&read(file)?)?;
    if p == Params::default() {
        p = cli_params;
    }
    let names = axioms.map_or_else(|| SET_NAMES.join(","), str::to_string);
    let r = check_proof_with(&proof, &sets(&names, &p)?, CheckOptions { strict });
    for s in &r.flagged {
        println!("warning: step {s}: gen over a variable free in a used hypothesis");
    }
    match r.failure {
        None => {
            println!("ok: {} steps", proof.len());
            Ok(0)
        }
        Some(f) => {
            println!("FAIL {f}");
            Ok(EXIT_FAIL)
        }
    }
}

fn taut(file: &Path, p: &Params) -> Result<u8, Usage> {
    let mut code = 0;
    for f in parse_formula_list(&read(file)?, p)? {
        let s = skeletonize(&f);
        match falsifying_valuation(&s)? {
            None => println!("TAUT"),
            Some(v) => {
                code = EXIT_FAIL;
                let shown: Vec<String> = s
                    .atoms
                    .iter()
                    .zip(v)
                    .map(|(a, b)| format!("[{a}]={}", if b { "T" } else { "F" }))
                    .collect();
                println!("NONTAUT {}", shown.join(", "));
            }
        }
    }
    Ok(code)
}

fn run_audit(script: &str, deterministic: bool, report: Option<PathBuf>, max_steps: u64) -> Result<u8, Usage> {
    let ids: Vec<String> = if script == "all" {
        audit::builtin_scripts().into_iter().map(String::from).collect()
    } else {
        vec![script.to_string()]
    };
    let budget = Budget {
        deterministic,
        ..Budget::steps(max_steps)
    };
    let mut failures = 0;
    for id in &ids {
        let claims = audit::load_script(id)?;
        let name = match audit::builtin_script(id) {
            Some(_) => id.clone(),
            None => Path::new(id).file_stem().map_or(id.clone(), |s| s.to_string_lossy().into_owned()),
        };
        let r: AuditReport = audit::run_audit(&name, &claims, budget);
        print!("{}", r.text());
        let tsv_path = match (&report, ids.len()) {
            (Some(p), 1) => p.clone(),
            (Some(p), _) => p.join(format!("{name}.tsv")),
            (None, _) => PathBuf::from("audit-out").join(format!("{name}.tsv")),
        };
        let detail_dir = PathBuf::from(format!("{}.d", tsv_path.display()));
        if detail_dir.exists() {
            fs::remove_dir_all(&detail_dir)?;
        }
        let paths = r.write_details(&detail_dir)?;
        if let Some(parent) = tsv_path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(&tsv_path, r.tsv(&paths))?;
        let rechecked = audit::recheck_files(&paths);
        let bad: Vec<_> = rechecked.iter().filter(|(_, r)| r.is_err()).collect();
        for (p, e) in &bad {
            println!("recheck FAIL {}: {}", p.display(), e.as_ref().unwrap_err());
        }
        println!(
            "recheck: {} certificates, {} failed; report {}\n",
            rechecked.len(),
            bad.len(),
            tsv_path.display()
        );
        failures += bad.len();
    }
    Ok(if failures == 0 { 0 } else { EXIT_FAIL })
}

fn run(cli: Cli) -> Result<u8, Usage> {
    let p = params(&cli.sets)?;
    match cli.cmd {
        Cmd::Check { file, axioms, strict } => check(&file, axioms.as_deref(), strict, p),
        Cmd::Prove {
            goal,
            hyp,
            axioms,
            max_steps,
            out,
        } => {
            let goal = p.parse(&goal)?;
            let x = hyps(hyp.as_deref(), &p)?;
            match prove(&goal, &x, &sets(&axioms, &p)?, Budget::steps(max_steps)) {
                SearchOutcome::Found(proof, r) => {
                    let text = write_proof(&proof);
                    match out {
                        Some(path) => fs::write(path, text)?,
                        None => print!("{text}"),
                    }
                    eprintln!("found: {} steps, {r}", proof.len());
                    Ok(0)
                }
                SearchOutcome::Exhausted(r) => {
                    println!("not found: {r}");
                    Ok(EXIT_BUDGET)
                }
            }
        }
        Cmd::Closure {
            hyp,
            axioms,
            max_steps,
            dump,
        } => {
            let x = hyps(Some(&hyp), &p)?;
            let st = bounded_closure(&x, &sets(&axioms, &p)?, Budget::steps(max_steps));
            if let Some(path) = dump {
                fs::write(path, st.dump())?;
            }
            println!(
                "{} formulas, {}{}",
                st.len(),
                st.report(),
                if st.saturated() { ", saturated" } else { "" }
            );
            Ok(if st.report().exhausted { EXIT_BUDGET } else { 0 })
        }
        Cmd::Taut { file } => taut(&file, &p),
        Cmd::Audit {
            script,
            deterministic,
            report,
            max_steps,
        } => run_audit(&script, deterministic, report, max_steps),
        Cmd::Eval {
            bound,
            universe,
            formula,
        } => {
            let f = p.parse(&formula)?;
            let universe = match universe {
                UniverseArg::Naturals => Universe::Naturals,
                UniverseArg::Positive => Universe::Positive,
            };
            println!("{}", eval_arith(&f, &BoundedModelConfig { bound, universe })?);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
