//! Command-line front end: validates JSON specs, computes cohomology tables,
//! drives deformations, and runs the built-in property suite.
//!
//! Exit codes: 0 success, 1 mathematical failure or invalid structure,
//! 2 I/O or parse failure.

use bihom::budget::Budget;
use bihom::classical::RestrictedComplex;
use bihom::cochain::Coefficients;
use bihom::cohomology::{CohomologyReport, Complex};
use bihom::deformation::{
    extend_deformation, obstruction, trivialize_first_order, verify_deformation, ExtensionOutcome,
};
use bihom::json::{deformation_to_spec, tensor_to_value, SpecFile};
use bihom::selftest::{run_selftest, SelftestOptions};
use bihom::workspace::Workspace;
use clap::{Parser, Subcommand};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "bihom", version, about = "Exact computer algebra for bihom-associative algebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a JSON spec (algebra, bimodule, cochain, deformation,
    /// extension, crossed module, a-infinity structure, splitting pair).
    Check {
        /// The spec file to validate.
        spec: PathBuf,
        /// Additional spec files loaded first to resolve references.
        #[arg(long)]
        context: Vec<PathBuf>,
        /// Render a plain-text summary instead of JSON.
        #[arg(long)]
        table: bool,
    },
    /// Exact cohomology dimensions of an algebra spec.
    Cohomology {
        /// An algebra spec file.
        spec: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
        /// `self` or the label of a bimodule (loaded via --context).
        #[arg(long, default_value = "self")]
        coefficients: String,
        /// Compute the restricted classical subcomplex instead: the spec's
        /// product must be associative and its twists invertible morphisms.
        #[arg(long)]
        classical: bool,
        #[arg(long)]
        table: bool,
        /// Cap on tensor entries per slice (default 200000; env BIHOM_BUDGET).
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        context: Vec<PathBuf>,
    },
    /// Verify, obstruct, extend or trivialize a truncated deformation.
    Deform {
        #[command(subcommand)]
        action: DeformAction,
    },
    /// Run the built-in property suite on the shipped corpus.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Corrupt a fixture on purpose; the suite must then fail.
        #[arg(long)]
        negative_control: bool,
    },
}

#[derive(Subcommand)]
enum DeformAction {
    /// Check the deformation equations at every order.
    Verify {
        spec: PathBuf,
        #[arg(long)]
        context: Vec<PathBuf>,
    },
    /// Compute the obstruction 3-cocycle of a verified deformation.
    Obstruct {
        spec: PathBuf,
        #[arg(long)]
        context: Vec<PathBuf>,
    },
    /// Solve for the next-order term and emit the extended deformation.
    Extend {
        spec: PathBuf,
        #[arg(long)]
        context: Vec<PathBuf>,
    },
    /// Find a first-order equivalence to the trivial deformation.
    Trivialize {
        spec: PathBuf,
        #[arg(long)]
        context: Vec<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_workspace(context: &[PathBuf]) -> Result<Workspace, String> {
    let mut ws = Workspace::with_builtins();
    ws.allow_override = true;
    for path in context {
        let spec = Workspace::parse_file(path).map_err(|e| e.to_string())?;
        let outcome = ws.check_and_insert(spec).map_err(|e| e.to_string())?;
        if !outcome.valid {
            return Err(format!(
                "context file {} is invalid: {}",
                path.display(),
                outcome.violations.join("; ")
            ));
        }
    }
    Ok(ws)
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.cmd {
        Cmd::Check { spec, context, table } => {
            let mut ws = load_workspace(&context)?;
            let parsed = Workspace::parse_file(&spec).map_err(|e| e.to_string())?;
            let outcome = ws.check_and_insert(parsed).map_err(|e| e.to_string())?;
            if table {
                println!(
                    "{} {} [{}]",
                    if outcome.valid { "valid" } else { "INVALID" },
                    outcome.label,
                    outcome.kind
                );
                for v in &outcome.violations {
                    println!("  - {v}");
                }
            } else {
                println!("{}", serde_json::to_string_pretty(&outcome.to_json()).unwrap());
            }
            Ok(if outcome.valid { 0 } else { 1 })
        }
        Cmd::Cohomology {
            spec,
            max_degree,
            coefficients,
            classical,
            table,
            budget,
            context,
        } => {
            let mut ws = load_workspace(&context)?;
            let parsed = Workspace::parse_file(&spec).map_err(|e| e.to_string())?;
            let label = parsed.label().to_string();
            let budget = budget.map(Budget::new).unwrap_or_else(Budget::from_env);
            let report: CohomologyReport = if classical {
                // reinterpret the raw (mu, alpha, beta) as an associative
                // product with designated commuting invertible morphisms;
                // the file need not be a valid bihom algebra
                let SpecFile::Algebra {
                    dim,
                    mu,
                    alpha,
                    beta,
                    ..
                } = parsed
                else {
                    return Err(format!("{} is not an algebra spec", spec.display()));
                };
                let mu = bihom::json::tensor_from_value(&mu, &[dim, dim, dim])?;
                let alpha = bihom::json::matrix_from_json(&alpha)?;
                let beta = bihom::json::matrix_from_json(&beta)?;
                let rc = RestrictedComplex::new(mu, alpha, beta, budget)
                    .map_err(|e| format!("classical mode: {e}"))?;
                rc.report(max_degree).map_err(|e| e.to_string())?
            } else {
                if !matches!(parsed, SpecFile::Algebra { .. }) {
                    return Err(format!("{} is not an algebra spec", spec.display()));
                }
                let outcome = ws.check_and_insert(parsed).map_err(|e| e.to_string())?;
                if !outcome.valid {
                    println!("{}", serde_json::to_string_pretty(&outcome.to_json()).unwrap());
                    return Ok(1);
                }
                let alg = ws.algebra(&label).map_err(|e| e.to_string())?;
                let coeffs = if coefficients == "self" {
                    Coefficients::SelfCoeffs
                } else {
                    let module = ws.bimodule(&coefficients).map_err(|e| e.to_string())?;
                    if module.base().as_ref() != alg.as_ref() {
                        return Err(format!(
                            "bimodule {} lives over {}, not over {}",
                            coefficients,
                            module.base().label(),
                            label
                        ));
                    }
                    Coefficients::Module(module)
                };
                let cx = Complex::with_budget(alg, coeffs, budget);
                cx.report(max_degree).map_err(|e| e.to_string())?
            };
            if table {
                println!("coefficients: {}", report.coefficients);
                println!("{:>3} {:>8} {:>6} {:>6} {:>6}", "n", "dim C^n", "rank", "ker", "H^n");
                for row in &report.rows {
                    println!(
                        "{:>3} {:>8} {:>6} {:>6} {:>6}",
                        row.n, row.dim_c, row.rank, row.ker, row.h
                    );
                }
            } else {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            }
            Ok(0)
        }
        Cmd::Deform { action } => {
            let (spec, context, verb) = match &action {
                DeformAction::Verify { spec, context } => (spec, context, "verify"),
                DeformAction::Obstruct { spec, context } => (spec, context, "obstruct"),
                DeformAction::Extend { spec, context } => (spec, context, "extend"),
                DeformAction::Trivialize { spec, context } => (spec, context, "trivialize"),
            };
            let mut ws = load_workspace(context)?;
            let parsed = Workspace::parse_file(spec).map_err(|e| e.to_string())?;
            let label = parsed.label().to_string();
            if !matches!(parsed, SpecFile::Deformation { .. }) {
                return Err(format!("{} is not a deformation spec", spec.display()));
            }
            let outcome = ws.check_and_insert(parsed).map_err(|e| e.to_string())?;
            if !outcome.valid {
                println!("{}", serde_json::to_string_pretty(&outcome.to_json()).unwrap());
                return Ok(1);
            }
            let d = ws.deformations.get(&label).expect("inserted above").clone();
            match verb {
                "verify" => {
                    let report = verify_deformation(&d);
                    let rows: Vec<_> = report
                        .orders
                        .iter()
                        .map(|o| {
                            json!({
                                "order": o.order,
                                "holds": o.holds,
                                "witness": o.witness.map(|(a, b, c)| vec![a, b, c]),
                            })
                        })
                        .collect();
                    let out = json!({
                        "label": label,
                        "verified": report.verified,
                        "formulations_agree": report.formulations_agree,
                        "orders": rows,
                    });
                    println!("{}", serde_json::to_string_pretty(&out).unwrap());
                    Ok(if report.verified { 0 } else { 1 })
                }
                "obstruct" => {
                    let ob = obstruction(&d).map_err(|e| e.to_string())?;
                    let out = json!({
                        "label": label,
                        "order": d.order(),
                        "obstruction": tensor_to_value(ob.tensor()),
                        "is_cocycle": bihom::cohomology::is_cocycle(&ob),
                    });
                    println!("{}", serde_json::to_string_pretty(&out).unwrap());
                    Ok(0)
                }
                "extend" => {
                    let cx = Complex::new(d.base().clone(), Coefficients::SelfCoeffs);
                    match extend_deformation(&d, &cx).map_err(|e| e.to_string())? {
                        ExtensionOutcome::Extended { term, extended } => {
                            let reverified = verify_deformation(&extended).verified;
                            let out = json!({
                                "label": label,
                                "extended": serde_json::to_value(deformation_to_spec(
                                    &format!("{label}_ext"),
                                    &extended
                                ))
                                .unwrap(),
                                "term": tensor_to_value(term.tensor()),
                                "reverified": reverified,
                            });
                            println!("{}", serde_json::to_string_pretty(&out).unwrap());
                            Ok(if reverified { 0 } else { 1 })
                        }
                        ExtensionOutcome::Obstructed { obstruction } => {
                            let out = json!({
                                "label": label,
                                "obstructed": true,
                                "obstruction": tensor_to_value(obstruction.tensor()),
                            });
                            println!("{}", serde_json::to_string_pretty(&out).unwrap());
                            Ok(1)
                        }
                    }
                }
                _ => {
                    let cx = Complex::new(d.base().clone(), Coefficients::SelfCoeffs);
                    match trivialize_first_order(&d, &cx).map_err(|e| e.to_string())? {
                        Some(phi1) => {
                            let out = json!({
                                "label": label,
                                "trivializable": true,
                                "phi1": tensor_to_value(phi1.tensor()),
                            });
                            println!("{}", serde_json::to_string_pretty(&out).unwrap());
                            Ok(0)
                        }
                        None => {
                            let out = json!({
                                "label": label,
                                "trivializable": false,
                            });
                            println!("{}", serde_json::to_string_pretty(&out).unwrap());
                            Ok(1)
                        }
                    }
                }
            }
        }
        Cmd::Selftest {
            seed,
            negative_control,
        } => {
            let report = run_selftest(&SelftestOptions {
                seed,
                negative_control,
            });
            print!("{}", report.render());
            Ok(if report.passed { 0 } else { 1 })
        }
    }
}
