use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use plde::bounds::{combined_bound, BoundError, BoundOptions};
use plde::equation::{EquationError, Plde};
use plde::factored::FactoredPoly;
use plde::geometry::{classify_module, ModuleClass};
use plde::lattice::{IntLattice, UnimodularMatrix};
use plde::polyring::{make_vars, parse_poly, parse_rational_function};
use plde::spread;
use plde::transform::transform_equation;
use plde::verify::{check_bound_covers, check_solution, CoverCase};

#[derive(Parser)]
#[command(name = "plde", version, about = "Denominator bounds for linear difference equations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the combined bounding algorithm on an equation file.
    Bound {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        /// Report the plain product over the strip.
        #[arg(long)]
        coarse: bool,
        /// Use the first useful pair only.
        #[arg(long)]
        no_refine: bool,
        #[arg(long)]
        keep_aperiodic_in_wpart: bool,
        /// Cross-check every coefficient factor's spread on [-R,R]^r.
        #[arg(long = "box", value_name = "R")]
        box_radius: Option<u32>,
    },
    /// Spread of a polynomial, or of a pair with --pair.
    Spread {
        poly: String,
        #[arg(long, value_delimiter = ',', required = true)]
        vars: Vec<String>,
        #[arg(long)]
        pair: Option<String>,
        /// Also list the spread points in [-R,R]^r found by brute force.
        #[arg(long = "box", value_name = "R")]
        box_radius: Option<u32>,
    },
    /// Classify a module against the support of an equation.
    Classify {
        file: PathBuf,
        #[arg(long)]
        module: String,
    },
    /// Apply the substitution y(n) -> y(A n) to an equation.
    Transform {
        file: PathBuf,
        #[arg(long)]
        matrix: String,
    },
    /// Check a candidate solution.
    Check {
        file: PathBuf,
        #[arg(long)]
        solution: String,
        /// Factored denominator of the solution; also checks it against the bound.
        #[arg(long)]
        denominator: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

/// Exit status 1 for malformed input, 2 for input outside the supported class.
struct Failure {
    code: u8,
    msg: String,
}

fn malformed(e: impl std::fmt::Display) -> Failure {
    Failure { code: 1, msg: e.to_string() }
}

fn unsupported(e: impl std::fmt::Display) -> Failure {
    Failure { code: 2, msg: e.to_string() }
}

fn load(file: &PathBuf) -> Result<Plde, Failure> {
    let text = std::fs::read_to_string(file).map_err(|e| malformed(format!("{}: {e}", file.display())))?;
    Plde::parse(&text).map_err(|e| match e {
        EquationError::Unsupported(_) => unsupported(e),
        _ => malformed(e),
    })
}

fn bound_failure(e: BoundError) -> Failure {
    unsupported(e)
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

/// The equation file layout with one term per line.
fn equation_text(eq: &Plde) -> String {
    let v = eq.to_json();
    let terms: Vec<String> = v["terms"]
        .as_array()
        .expect("terms list")
        .iter()
        .map(|t| format!("    {{\"shift\": {}, \"coefficient\": {}}}", t["shift"], t["coefficient"]))
        .collect();
    format!(
        "{{\n  \"variables\": {},\n  \"terms\": [\n{}\n  ],\n  \"rhs\": {}\n}}",
        v["variables"],
        terms.join(",\n"),
        v["rhs"]
    )
}

fn run(cmd: Cmd) -> Result<String, Failure> {
    let mut out = String::new();
    macro_rules! say {
        ($($t:tt)*) => {{
            use std::fmt::Write as _;
            let _ = writeln!(out, $($t)*);
        }};
    }
    match cmd {
        Cmd::Bound { file, json, coarse, no_refine, keep_aperiodic_in_wpart, box_radius } => {
            let eq = load(&file)?;
            let opts = BoundOptions { coarse, refine: !no_refine, keep_aperiodic: keep_aperiodic_in_wpart };
            let mut report = combined_bound(&eq, &opts).map_err(bound_failure)?;
            if let Some(radius) = box_radius {
                for a in eq.terms().values() {
                    for f in a.factors() {
                        let w = spread::invariance_lattice(&f.poly).expect("non-constant factor");
                        let c = spread::shift_equiv(&f.poly, &f.poly);
                        let exact = spread::coset_box_points(&c, eq.nvars(), radius);
                        if exact != spread::spread_box_oracle(&f.poly, &f.poly, radius) {
                            report.warnings.push(format!(
                                "spread {} of {} disagrees with the box search of radius {radius}",
                                w.generators_text(),
                                f.poly
                            ));
                        }
                    }
                }
            }
            if json {
                say!("{}", pretty(&report.to_json()));
            } else {
                out.push_str(&report.to_string());
            }
        }
        Cmd::Spread { poly, vars, pair, box_radius } => {
            let vars = make_vars(&vars);
            let p = parse_poly(&poly, &vars).map_err(malformed)?;
            if p.is_constant() {
                return Err(malformed("the spread of a constant is undefined"));
            }
            let q = match &pair {
                Some(t) => parse_poly(t, &vars).map_err(malformed)?,
                None => p.clone(),
            };
            let c = spread::shift_equiv(&p, &q);
            if pair.is_none() {
                let w = spread::invariance_lattice(&p).expect("non-constant");
                say!("lattice: {}", w.generators_text());
            } else {
                match (c.base(), c.lattice()) {
                    (Some(b), Some(w)) => {
                        let b: Vec<String> = b.iter().map(i64::to_string).collect();
                        say!("coset: ({}) + {}", b.join(","), w.generators_text());
                    }
                    _ => say!("coset: empty"),
                }
            }
            if let Some(radius) = box_radius {
                let points = spread::spread_box_oracle(&p, &q, radius);
                let agrees = points == spread::coset_box_points(&c, vars.len(), radius);
                let text: Vec<String> = points
                    .iter()
                    .map(|s| format!("({})", s.iter().map(i64::to_string).collect::<Vec<_>>().join(",")))
                    .collect();
                say!("box {radius}: {}", text.join(" "));
                say!("box {radius}: {}", if agrees { "agrees" } else { "DISAGREES" });
            }
        }
        Cmd::Classify { file, module } => {
            let eq = load(&file)?;
            let w = IntLattice::parse(&module, eq.nvars()).map_err(malformed)?;
            let class = classify_module(&eq.support(), &w);
            say!("{}", class.label());
            match &class {
                ModuleClass::InU(c) => say!("{}", pretty(&c.to_json())),
                ModuleClass::InOOnly { p, u } => say!("{}", pretty(&json!({"corner": p, "inner_vector": u}))),
                ModuleClass::Uncovered => {}
            }
        }
        Cmd::Transform { file, matrix } => {
            let eq = load(&file)?;
            let a = UnimodularMatrix::parse(&matrix).map_err(malformed)?;
            if a.dim() != eq.nvars() {
                return Err(malformed(format!(
                    "matrix is {0}x{0}, the equation has {1} variables",
                    a.dim(),
                    eq.nvars()
                )));
            }
            say!("{}", equation_text(&transform_equation(&eq, &a.inverse())));
        }
        Cmd::Check { file, solution, denominator, json } => {
            let eq = load(&file)?;
            let y = parse_rational_function(&solution, eq.vars()).map_err(malformed)?;
            let check = check_solution(&eq, &y);
            let mut verdict = json!({"ok": check.ok, "residual": check.residual.to_string()});
            let mut lines =
                vec![if check.ok { "ok".to_string() } else { format!("not ok: residual {}", check.residual) }];
            if let Some(den) = denominator {
                let den = FactoredPoly::parse(&den, eq.vars()).map_err(malformed)?;
                let report = combined_bound(&eq, &BoundOptions::default()).map_err(bound_failure)?;
                let verdicts = check_bound_covers(&eq, &den, &report);
                let mut list = Vec::new();
                for v in &verdicts {
                    let cases: Vec<&str> = v
                        .cases
                        .iter()
                        .map(|c| match c {
                            CoverCase::Bounded => "bounded",
                            CoverCase::Residual => "residual",
                            CoverCase::Uncovered => "uncovered",
                        })
                        .collect();
                    lines.push(format!("{}^{}: {} [{}]", v.factor, v.multiplicity, v.class.label(), cases.join(", ")));
                    list.push(json!({"factor": v.factor.to_string(), "multiplicity": v.multiplicity,
                        "class": v.class.label(), "cases": cases, "ok": v.ok()}));
                }
                verdict["factors"] = json!(list);
            }
            if json {
                say!("{}", pretty(&verdict));
            } else {
                for l in lines {
                    say!("{l}");
                }
            }
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(text) => {
            use std::io::Write as _;
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("plde: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
