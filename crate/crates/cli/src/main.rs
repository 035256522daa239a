use std::io::Write;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use rand::rngs::StdRng;
use rand::SeedableRng;

use uipcalc_core::calculus::canopy;
use uipcalc_core::interpolation::{compute_with, simplify, Interpolator, Quantifier, Target};
use uipcalc_core::oracle::{random_sequent, uniformity_harness, Budget};
use uipcalc_core::provers::{validate, Decision, Prover};
use uipcalc_core::syntax::{formula_to_json, parse_formula_in, parse_sequent_in, print_formula, print_sequent, Style};
use uipcalc_core::{Dialect, Formula, Logic, Sequent, Var};

#[derive(Parser)]
#[command(
    name = "uipcalc",
    version,
    about = "Uniform interpolants and proof search for K, GL, IL and iSL"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute A_p, E_p, ∀p or ∃p of a formula or sequent.
    #[command(group(ArgGroup::new("quantifier").required(true).args(["forall", "exists", "a", "e"])))]
    #[command(group(ArgGroup::new("target").required(true).args(["formula", "sequent"])))]
    Compute {
        #[arg(long)]
        logic: Logic,
        #[arg(long = "var", value_name = "P")]
        var: String,
        #[arg(long)]
        forall: bool,
        #[arg(long)]
        exists: bool,
        #[arg(long = "A")]
        a: bool,
        #[arg(long = "E")]
        e: bool,
        #[arg(long, value_name = "TEXT")]
        formula: Option<String>,
        #[arg(long, value_name = "TEXT")]
        sequent: Option<String>,
        /// Apply unit and idempotence rewrites to the result.
        #[arg(long)]
        simplify: bool,
        /// Print the result as a JSON syntax tree.
        #[arg(long)]
        json: bool,
    },
    /// Decide a sequent.
    Prove {
        #[arg(long)]
        logic: Logic,
        #[arg(long, value_name = "TEXT")]
        sequent: String,
        /// Print the derivation found.
        #[arg(long)]
        tree: bool,
    },
    /// Print the canopy of a classical sequent, one sequent per line.
    Canopy {
        #[arg(long, value_name = "TEXT")]
        sequent: String,
    },
    /// Run the invariant checks and the uniformity harness.
    Selftest {
        /// Number of variables (p, q, r, ...).
        #[arg(long, default_value_t = 2)]
        vars: usize,
        #[arg(long, default_value_t = 3)]
        max_weight: u32,
        #[arg(long, value_delimiter = ',', default_value = "K,GL,IL,iSL")]
        logics: Vec<Logic>,
        /// Seed for the sampled implication checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("uipcalc: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn parse_target_formula(logic: Logic, text: &str) -> Result<Formula, String> {
    parse_formula_in(text, Some(logic.dialect())).map_err(|e| e.to_string())
}

fn parse_target_sequent(logic: Logic, text: &str) -> Result<Sequent, String> {
    parse_sequent_in(text, Some(logic.dialect())).map_err(|e| e.to_string())
}

fn run(cmd: Command) -> Result<u8, String> {
    match cmd {
        Command::Compute {
            logic,
            var,
            forall,
            exists,
            a,
            e,
            formula,
            sequent,
            simplify: simp,
            json,
        } => {
            let p = Var::new(&var).ok_or_else(|| format!("invalid variable name {var:?}"))?;
            let q = match (forall, exists, a, e) {
                (true, ..) => Quantifier::Forall,
                (_, true, ..) => Quantifier::Exists,
                (_, _, true, _) => Quantifier::A,
                _ => Quantifier::E,
            };
            let target = match (formula, sequent) {
                (Some(f), _) => Target::Formula(parse_target_formula(logic, &f)?),
                (_, Some(s)) => Target::Sequent(parse_target_sequent(logic, &s)?),
                _ => unreachable!("clap requires a target"),
            };
            let mut ip = Interpolator::new(logic, p);
            let mut result = compute_with(&mut ip, q, &target).map_err(|e| e.to_string())?;
            if simp {
                result = simplify(&result);
            }
            if json {
                println!("{}", formula_to_json(&result));
            } else {
                println!("{}", print_formula(&result, Style::Resugared));
            }
            Ok(0)
        }
        Command::Prove { logic, sequent, tree } => {
            let mut s = parse_target_sequent(logic, &sequent)?;
            if logic.is_classical() {
                s = s.desugar_classical();
            }
            let decision = Prover::new(logic).decide(&s).map_err(|e| e.to_string())?;
            match decision {
                Decision::Provable(d) => {
                    debug_assert!(validate(logic, &d));
                    println!("provable in {}", logic.calculus_name());
                    if tree {
                        print!("{}", d.render(Style::Resugared));
                    }
                    Ok(0)
                }
                Decision::Refuted => {
                    println!("refuted in {}", logic.calculus_name());
                    Ok(1)
                }
            }
        }
        Command::Canopy { sequent } => {
            let s = parse_sequent_in(&sequent, Some(Dialect::Classical))
                .map_err(|e| e.to_string())?
                .desugar_classical();
            for leaf in canopy(&s).iter_occurrences() {
                println!("{}", print_sequent(leaf, Style::Resugared));
            }
            Ok(0)
        }
        Command::Selftest {
            vars,
            max_weight,
            logics,
            seed,
        } => selftest(vars, max_weight, &logics, seed),
    }
}

fn variable_names(n: usize) -> Result<Vec<Var>, String> {
    const NAMES: [&str; 8] = ["p", "q", "r", "s", "t", "u", "v", "w"];
    if n == 0 || n > NAMES.len() {
        return Err(format!("--vars must be between 1 and {}", NAMES.len()));
    }
    Ok(NAMES[..n].iter().map(|v| Var::new(v).expect("identifier")).collect())
}

fn selftest(nvars: usize, max_weight: u32, logics: &[Logic], seed: u64) -> Result<u8, String> {
    let vars = variable_names(nvars)?;
    let p = vars[0].clone();
    let budget = Budget {
        vars: vars.clone(),
        max_weight,
    };
    let mut rng = StdRng::seed_from_u64(seed);
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let mut failures = 0usize;
    for &logic in logics {
        let report = uniformity_harness(logic, &p, &budget);
        failures += report.violations.len();
        write!(out, "{}", report.json_lines()).map_err(|e| e.to_string())?;

        let mut sampled = 0usize;
        let mut broken = 0usize;
        let mut ip = Interpolator::new(logic, p.clone());
        let mut prover = Prover::new(logic);
        for _ in 0..200 {
            let s = random_sequent(&mut rng, &vars, max_weight.max(2), 2, logic.dialect());
            if logic == Logic::IL && s.formulas().any(Formula::has_box) {
                continue;
            }
            let s = if logic.is_classical() { s.desugar_classical() } else { s };
            sampled += 1;
            let a = ip.a(&s).map_err(|e| e.to_string())?;
            let e = ip.e(&s.left).map_err(|e| e.to_string())?;
            let ok = !a.mentions(&p)
                && !e.mentions(&p)
                && prover
                    .proves(&Sequent::new(s.left.with(a), s.right.clone()))
                    .map_err(|e| e.to_string())?
                && prover
                    .proves(&Sequent::intuitionistic(s.left.clone(), e))
                    .map_err(|e| e.to_string())?;
            if !ok {
                broken += 1;
                let line = serde_line(logic, &s);
                writeln!(out, "{line}").map_err(|e| e.to_string())?;
            }
        }
        failures += broken;
        writeln!(
            out,
            "{{\"type\":\"sampled\",\"logic\":\"{}\",\"seed\":{seed},\"sequents\":{sampled},\"violations\":{broken}}}",
            logic.name()
        )
        .map_err(|e| e.to_string())?;
    }
    writeln!(out, "{{\"type\":\"result\",\"violations\":{failures}}}").map_err(|e| e.to_string())?;
    Ok(if failures == 0 { 0 } else { 1 })
}

fn serde_line(logic: Logic, s: &Sequent) -> String {
    format!(
        "{{\"type\":\"violation\",\"logic\":\"{}\",\"check\":\"implication\",\"sequent\":{}}}",
        logic.name(),
        uipcalc_core::syntax::sequent_to_json(s)
    )
}
