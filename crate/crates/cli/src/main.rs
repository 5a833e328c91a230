use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use genoid::fol::{self, ModelSearch, Verdict};
use genoid::lambda::{Lambda, LambdaFlags, DEFAULT_LAMBDA_FUEL, DEFAULT_MAX_TERM_SIZE};
use genoid::oracle::{from_debruijn, parse_named, to_debruijn};
use genoid::selftest::{self, SelfTestConfig};
use genoid::sigma::{Mutant, Sigma};
use genoid::structure::{eval_term, Assignment, Structure};
use genoid::syntax::{parse_formula, parse_subst, parse_term};
use genoid::{random, Error, Term};

#[derive(Parser)]
#[command(name = "genoid", version, about = "Normalize, analyse and model-check genoid terms and formulas")]
struct Cli {
    /// Grammar for lambda inputs and outputs.
    #[arg(long, value_enum, default_value = "debruijn", global = true)]
    syntax: SyntaxKind,
    /// Budget of beta/eta steps.
    #[arg(long, default_value_t = DEFAULT_LAMBDA_FUEL, global = true)]
    fuel: u64,
    /// Stop reducing once a term grows past this many nodes.
    #[arg(long, default_value_t = DEFAULT_MAX_TERM_SIZE, global = true)]
    max_size: usize,
    #[arg(long, global = true)]
    no_eta: bool,
    #[arg(long, global = true)]
    no_beta: bool,
    /// Largest carrier examined by the validity checker.
    #[arg(long, default_value_t = 3, global = true)]
    max_carrier: usize,
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SyntaxKind {
    Debruijn,
    Named,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MutantArg {
    ShiftOffByOne,
    LamWithoutLift,
}

#[derive(Subcommand)]
enum Command {
    /// Beta/eta normal form of a term (or sigma normal form of a substitution).
    Norm {
        input: String,
        /// Read the input as a substitution.
        #[arg(long)]
        subst: bool,
    },
    /// Finite rank of a term.
    Rank { input: String },
    /// Closed term c with input = c x_n ... x_1.
    Close { input: String },
    /// Evaluate a formula (or a first-order term) in a finite structure.
    Eval {
        input: String,
        /// Structure file.
        #[arg(long)]
        model: String,
        /// Leading coordinates of the assignment, comma separated.
        #[arg(long, value_delimiter = ',')]
        env: Vec<usize>,
        /// Value of every coordinate past `--env`.
        #[arg(long, default_value_t = 0)]
        pad: usize,
        /// Read the input as a term.
        #[arg(long)]
        term: bool,
    },
    /// Bounded validity check.
    CheckValid { input: String },
    /// Bounded equivalence check.
    CheckEquiv { left: String, right: String },
    /// Run the law suites.
    Selftest {
        #[arg(long, default_value_t = random::DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        quick: bool,
        /// Run a single suite.
        #[arg(long)]
        suite: Option<String>,
        #[arg(long, value_enum, hide = true)]
        inject_mutant: Option<MutantArg>,
    },
}

/// Exit status and message of a command that did not produce an answer.
struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn domain(msg: impl Into<String>) -> Self {
        Failure { code: 1, msg: msg.into() }
    }

    fn exhausted(msg: impl Into<String>) -> Self {
        Failure { code: 2, msg: msg.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::EnumerationCap { .. } | Error::FuelExhausted(_) => Failure::exhausted(e.to_string()),
            _ => Failure::domain(e.to_string()),
        }
    }
}

/// Text and machine renderings of one answer.
struct Answer {
    text: String,
    json: Value,
    code: u8,
}

impl Answer {
    fn ok(text: String, json: Value) -> Self {
        Answer { text, json, code: 0 }
    }
}

/// `-` reads stdin, `@path` reads a file, anything else is the input itself.
fn read_input(arg: &str) -> Result<String, Failure> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::domain(format!("stdin: {e}")))?;
        Ok(s.trim().to_string())
    } else if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path)
            .map(|s| s.trim().to_string())
            .map_err(|e| Failure::domain(format!("{path}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

/// Parse errors are shown with a caret under the offending position.
fn parsed<T>(src: &str, r: Result<T, Error>) -> Result<T, Failure> {
    r.map_err(|e| match e {
        Error::Parse { pos, .. } if !src.contains('\n') => {
            Failure::domain(format!("{e}\n  {src}\n  {}^", " ".repeat(pos)))
        }
        other => other.into(),
    })
}

impl Cli {
    fn flags(&self) -> Result<LambdaFlags, Failure> {
        if self.fuel == 0 {
            return Err(Failure::domain("--fuel must be at least 1"));
        }
        Ok(LambdaFlags { beta: !self.no_beta, eta: !self.no_eta, fuel: self.fuel })
    }

    fn lambda_term(&self, arg: &str) -> Result<Term, Failure> {
        let src = read_input(arg)?;
        match self.syntax {
            SyntaxKind::Debruijn => parsed(&src, parse_term(&src)),
            SyntaxKind::Named => {
                let n = parsed(&src, parse_named(&src))?;
                Ok(to_debruijn(&n)?)
            }
        }
    }

    fn show_term(&self, t: &Term) -> Result<String, Failure> {
        match self.syntax {
            SyntaxKind::Debruijn => Ok(t.to_string()),
            SyntaxKind::Named => Ok(from_debruijn(t)?.to_string()),
        }
    }

    fn debruijn_only(&self, command: &str) -> Result<(), Failure> {
        if self.syntax == SyntaxKind::Named {
            return Err(Failure::domain(format!("--syntax named applies to lambda commands, not `{command}`")));
        }
        Ok(())
    }

    fn run(&self) -> Result<Answer, Failure> {
        match &self.command {
            Command::Norm { input, subst: true } => {
                self.debruijn_only("norm --subst")?;
                let src = read_input(input)?;
                let u = parsed(&src, parse_subst(&src))?;
                let r = Sigma::default().normalize_subst(&u);
                if !r.is_normal() {
                    return Err(Failure::exhausted(format!("fuel exhausted after {} steps", r.steps)));
                }
                let out = r.result.to_string();
                Ok(Answer::ok(out.clone(), json!({ "result": out, "status": "normal", "steps": r.steps })))
            }
            Command::Norm { input, subst: false } => {
                let t = self.lambda_term(input)?;
                let r = Lambda::new(self.flags()?).with_max_size(self.max_size).normalize(&t);
                if !r.is_normal() {
                    let text = if r.steps >= self.fuel {
                        format!("fuel exhausted after {} steps", r.steps)
                    } else {
                        format!("gave up after {} steps: term outgrew the size or substitution budget", r.steps)
                    };
                    return Ok(Answer {
                        text,
                        json: json!({ "status": "fuel-exhausted", "steps": r.steps }),
                        code: 2,
                    });
                }
                let out = self.show_term(&r.result)?;
                Ok(Answer::ok(out.clone(), json!({ "result": out, "status": "normal", "steps": r.steps })))
            }
            Command::Rank { input } => {
                let t = self.lambda_term(input)?;
                let rank = Sigma::unbounded().finite_rank(&t);
                Ok(Answer::ok(rank.to_string(), json!({ "rank": rank })))
            }
            Command::Close { input } => {
                let t = self.lambda_term(input)?;
                let c = Lambda::new(self.flags()?).closure_of(&t);
                let out = self.show_term(&c.closed)?;
                Ok(Answer::ok(format!("{out}\nrank {}", c.rank), json!({ "closed": out, "rank": c.rank })))
            }
            Command::Eval { input, model, env, pad, term } => {
                self.debruijn_only("eval")?;
                let text = read_input(&format!("@{model}"))?;
                let m = Structure::parse(&text).map_err(|e| Failure::domain(format!("{model}: {e}")))?;
                let env = Assignment::new(env.clone(), *pad);
                let src = read_input(input)?;
                if *term {
                    let t = parsed(&src, parse_term(&src))?;
                    let d = eval_term(&Sigma::default().norm(&t), &m, &env)?;
                    Ok(Answer::ok(d.to_string(), json!({ "value": d })))
                } else {
                    let f = parsed(&src, parse_formula(&src))?;
                    let b = fol::eval_formula(&f, &m, &env)?;
                    Ok(Answer::ok(b.to_string(), json!({ "value": b })))
                }
            }
            Command::CheckValid { input } => {
                self.debruijn_only("check-valid")?;
                let src = read_input(input)?;
                let f = parsed(&src, parse_formula(&src))?;
                Ok(verdict_answer(self.search()?.check_validity(&f)?))
            }
            Command::CheckEquiv { left, right } => {
                self.debruijn_only("check-equiv")?;
                let (l, r) = (read_input(left)?, read_input(right)?);
                let f = parsed(&l, parse_formula(&l))?;
                let g = parsed(&r, parse_formula(&r))?;
                Ok(verdict_answer(self.search()?.check_equivalence(&f, &g)?))
            }
            Command::Selftest { seed, quick, suite, inject_mutant } => {
                self.debruijn_only("selftest")?;
                let mutant = inject_mutant.map(|m| match m {
                    MutantArg::ShiftOffByOne => Mutant::ShiftOffByOne,
                    MutantArg::LamWithoutLift => Mutant::LamWithoutLift,
                });
                let cfg = SelfTestConfig { seed: *seed, quick: *quick, mutant };
                let reports = match suite {
                    Some(name) => vec![selftest::run_suite(name, &cfg)
                        .ok_or_else(|| Failure::domain(format!("unknown suite `{name}`")))?],
                    None => selftest::run_all(&cfg),
                };
                Ok(selftest_answer(&cfg, &reports))
            }
        }
    }

    fn search(&self) -> Result<ModelSearch, Failure> {
        if self.max_carrier == 0 {
            return Err(Failure::domain("--max-carrier must be at least 1"));
        }
        Ok(ModelSearch::new(self.max_carrier))
    }
}

fn verdict_answer(v: Verdict) -> Answer {
    match &v.counterexample {
        None => Answer::ok(
            format!("{} {}", v.status, v.bound),
            json!({ "status": v.status.to_string(), "bound": v.bound }),
        ),
        Some((m, env)) => Answer::ok(
            format!("{}\ncounterexample at {env}\n{m}", v.status),
            json!({
                "status": v.status.to_string(),
                "bound": v.bound,
                "counterexample": {
                    "structure": m.to_string(),
                    "env": env.values,
                    "pad": env.pad,
                },
            }),
        ),
    }
}

fn selftest_answer(cfg: &SelfTestConfig, reports: &[selftest::SuiteReport]) -> Answer {
    let mode = if cfg.quick { "quick" } else { "full" };
    let failed = reports.iter().filter(|r| !r.passed()).count();
    let mut text = format!("genoid selftest, seed {:#x}, {mode}\n", cfg.seed);
    for r in reports {
        text.push_str(&format!("{r}\n"));
    }
    if failed == 0 {
        text.push_str(&format!("all {} suites passed", reports.len()));
    } else {
        text.push_str(&format!("{failed} of {} suites failed", reports.len()));
    }
    let suites: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "name": r.name,
                "passed": r.passed(),
                "samples": r.samples,
                "checks": r.checks,
                "skipped": r.skipped,
                "failures": r.failures,
                "examples": r.examples,
            })
        })
        .collect();
    Answer {
        text,
        json: json!({ "seed": cfg.seed, "mode": mode, "suites": suites }),
        code: if failed == 0 { 0 } else { 1 },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.run() {
        Ok(a) => {
            match cli.format {
                Format::Text => println!("{}", a.text),
                Format::Json => println!("{}", a.json),
            }
            ExitCode::from(a.code)
        }
        Err(f) => {
            match cli.format {
                Format::Text => eprintln!("error: {}", f.msg),
                Format::Json => println!("{}", json!({ "error": f.msg, "exit": f.code })),
            }
            ExitCode::from(f.code)
        }
    }
}
