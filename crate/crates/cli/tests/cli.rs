use std::io::Write;
use std::process::{Command, Output, Stdio};

fn genoid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genoid")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim_end().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).to_string()
}

fn model(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("genoid-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn normalizes_k_applied() {
    let o = genoid(&["norm", r"(\.\. x2) x1 x2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "x1");
}

#[test]
fn identity_has_rank_zero() {
    let o = genoid(&["rank", r"\. x1"]);
    assert_eq!(stdout(&o), "0");
    assert_eq!(stdout(&genoid(&["rank", r"\. x4"])), "3");
}

#[test]
fn shift_instance_of_the_quantifier_axiom_is_valid() {
    let o = genoid(&["check-valid", "--max-carrier", "2", "P(x1) -> (exists. P(x1))[^]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "valid-up-to-bound 2");
}

#[test]
fn shifting_a_free_index_is_not_valid() {
    // (exists. P(x2))[^] is P(x2), so this is P(x1) -> P(x2).
    let o = genoid(&["check-valid", "--max-carrier", "2", "P(x1) -> (exists. P(x2))[^]"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("invalid\ncounterexample at [1, 0] pad 0\n2\n"), "{out}");
}

#[test]
fn counterexamples_replay_through_eval() {
    let o = genoid(&["--format", "json", "check-valid", "(exists. P(x1))[^] -> P(x1)"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "invalid");
    let ce = &v["counterexample"];
    let path = model("converse.txt", ce["structure"].as_str().unwrap());
    let env: Vec<String> = ce["env"].as_array().unwrap().iter().map(|d| d.to_string()).collect();
    let pad = ce["pad"].to_string();
    let mut args = vec!["eval", "(exists. P(x1))[^] -> P(x1)", "--model", &path, "--pad", &pad];
    let joined = env.join(",");
    if !env.is_empty() {
        args.extend(["--env", &joined]);
    }
    let replay = genoid(&args);
    assert_eq!(stdout(&replay), "false", "{}", stderr(&replay));
}

#[test]
fn equivalence_of_double_negation() {
    let o = genoid(&["check-equiv", "~~P(x1)", "P(x1)"]);
    assert_eq!(stdout(&o), "valid-up-to-bound 3");
    let o = genoid(&["check-equiv", "exists. P(x1) & Q(x1)", "(exists. P(x1)) & (exists. Q(x1))"]);
    assert!(stdout(&o).starts_with("invalid"));
}

#[test]
fn divergence_exits_with_two() {
    let o = genoid(&["--fuel", "50", "norm", r"(\. x1 x1) (\. x1 x1)"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o), "fuel exhausted after 50 steps");
}

#[test]
fn enumeration_cap_exits_with_two() {
    let o = genoid(&["--max-carrier", "4", "check-valid", "Q(x1, x2) -> Q(x3, x4) -> Q(x5, x6)"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn parse_errors_exit_with_one_and_point_at_the_input() {
    let o = genoid(&["norm", "x1 )"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("offset 3"), "{err}");
    assert!(err.contains("  x1 )\n     ^"), "{err}");
    assert_eq!(genoid(&["rank", "x0"]).status.code(), Some(1));
}

#[test]
fn named_syntax() {
    let o = genoid(&["--syntax", "named", "norm", r"(\x. \y. x) x1"]);
    assert_eq!(stdout(&o), r"\y0. x1");
    let o = genoid(&["--syntax", "named", "norm", r"(\f. \x. f (f x)) (\f. \x. f (f x))"]);
    assert_eq!(o.status.code(), Some(0));
    let o = genoid(&["--syntax", "named", "check-valid", "P(x1)"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn flags_select_reductions() {
    assert_eq!(stdout(&genoid(&["norm", r"\. x2 x1"])), "x1");
    assert_eq!(stdout(&genoid(&["--no-eta", "norm", r"\. x2 x1"])), r"\. x2 x1");
    assert_eq!(stdout(&genoid(&["--no-beta", "norm", r"(\. x1) x2"])), r"(\. x1) x2");
    assert_eq!(stdout(&genoid(&["norm", "--subst", "x1 . ^"])), "id");
}

#[test]
fn closure_of_an_application() {
    let o = genoid(&["close", "x1 x2"]);
    assert_eq!(stdout(&o), "\\. \\. x1 x2\nrank 2");
    let o = genoid(&["--format", "json", "close", "x1 x2"]);
    assert_eq!(stdout(&o), r#"{"closed":"\\. \\. x1 x2","rank":2}"#);
}

#[test]
fn evaluates_terms_and_formulas() {
    let path = model("m.txt", "2\nfun f/1: (0)=1 (1)=0\npred P/1: (1)\n");
    assert_eq!(stdout(&genoid(&["eval", "--term", "f(x2)", "--model", &path, "--env", "0,0"])), "1");
    assert_eq!(stdout(&genoid(&["eval", "P(f(x1))", "--model", &path, "--env", "0"])), "true");
    assert_eq!(stdout(&genoid(&["eval", "exists. ~P(x1)", "--model", &path])), "true");
    let o = genoid(&["eval", "P(x1)", "--model", &path, "--env", "5"]);
    assert_eq!(o.status.code(), Some(1));
    let bad = model("bad.txt", "2\npred P/1: (0)=1\n");
    assert_eq!(genoid(&["eval", "P(x1)", "--model", &bad]).status.code(), Some(1));
}

#[test]
fn inputs_from_files_and_stdin() {
    let path = model("term.txt", "(\\. x1) x3\n");
    assert_eq!(stdout(&genoid(&["norm", &format!("@{path}")])), "x3");
    let mut child = Command::new(env!("CARGO_BIN_EXE_genoid"))
        .args(["rank", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"x1 x7").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(stdout(&o), "7");
}

#[test]
fn output_is_deterministic() {
    let args = ["--format", "json", "check-valid", "((P(x1) -> Q(x1)) -> P(x1)) -> P(x1)"];
    assert_eq!(genoid(&args).stdout, genoid(&args).stdout);
    let run = ["selftest", "--quick", "--suite", "round-trips"];
    assert_eq!(genoid(&run).stdout, genoid(&run).stdout);
}

#[test]
fn echoed_terms_parse_back() {
    for input in [r"(\. \. x3 x1) (\. x1)", r"\. x1 (f(x2, \. x1))[x3 . ^]", r"S K K"] {
        let out = stdout(&genoid(&["norm", input]));
        let again = stdout(&genoid(&["norm", &out]));
        assert_eq!(out, again, "{input}");
    }
}

#[test]
fn quick_selftest_passes_and_reports_the_seed() {
    let o = genoid(&["selftest", "--quick"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert!(out.starts_with("genoid selftest, seed 0x67656e6f6964, quick\n"), "{out}");
    assert!(out.ends_with("all 10 suites passed"), "{out}");
}

#[test]
fn injected_mutant_fails_selftest() {
    let o = genoid(&["selftest", "--quick", "--inject-mutant", "lam-without-lift"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAILED"));
}

#[test]
fn unknown_suite_is_an_error() {
    assert_eq!(genoid(&["selftest", "--suite", "nope"]).status.code(), Some(1));
}
