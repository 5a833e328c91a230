//! Law suites behind `genoid selftest` and the acceptance tests.
//!
//! Every suite draws from its own ChaCha8 stream derived from the configured
//! seed, so a report is fully determined by `(seed, quick, mutant)`.

use std::fmt;

use rand::Rng;

use crate::clone::{clone_apply, clone_apply_prefix, evaluate_sequence, seq_compose, FinitarySequence};
use crate::error::Error;
use crate::fol::{self, check_equivalence, check_validity, eval_formula, formula_rank, normalize_formula, Formula};
use crate::lambda::{closure_of, combinator, Lambda, LambdaFlags};
use crate::oracle::{from_debruijn, oracle_normalize_bounded, parse_named, to_debruijn};
use crate::random::{self, FormulaGen, SuiteRng, TermGen};
use crate::sigma::{delta, kleisli_star, Mutant, Sigma};
use crate::structure::{eval_term, Assignment, Signature, Structure, StructureEnumerator};
use crate::syntax::{parse_formula, parse_subst, parse_term};
use crate::term::{v, Subst, Term};

/// β/η budget for lambda suites; a one-sided exhaustion is retried with
/// [`RETRY_FACTOR`] times as much before it counts as a failure.
pub const SUITE_LAMBDA_FUEL: u64 = 1_000;
pub const RETRY_FACTOR: u64 = 10;

/// Node limit for both the engine and the oracle in the lambda suites. Pure
/// terms have the same size in both representations, so a blow-up is cut
/// off at the same step on each side.
pub const SUITE_MAX_SIZE: usize = 20_000;

/// Failure messages kept per suite.
const KEEP: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SelfTestConfig {
    pub seed: u64,
    /// Reduced sample counts; every suite still runs.
    pub quick: bool,
    #[doc(hidden)]
    pub mutant: Option<Mutant>,
}

impl Default for SelfTestConfig {
    fn default() -> Self {
        SelfTestConfig { seed: random::DEFAULT_SEED, quick: false, mutant: None }
    }
}

impl SelfTestConfig {
    fn samples(&self, full: usize) -> usize {
        if self.quick {
            (full / 20).max(10)
        } else {
            full
        }
    }

    fn rng(&self, suite: u64) -> SuiteRng {
        random::rng(self.seed ^ suite.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }

    fn sigma(&self) -> Sigma {
        Sigma::default().with_mutant(self.mutant)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    /// Random draws (or fixed instances) examined.
    pub samples: usize,
    /// Individual law instances checked across all samples.
    pub checks: usize,
    /// Samples excluded because both sides ran out of fuel.
    pub skipped: usize,
    pub failures: usize,
    /// The first few failure descriptions.
    pub examples: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport { name, samples: 0, checks: 0, skipped: 0, failures: 0, examples: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.samples > 0
    }

    fn fail(&mut self, msg: String) {
        self.checks += 1;
        self.failures += 1;
        if self.examples.len() < KEEP {
            self.examples.push(msg);
        }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if ok {
            self.checks += 1;
        } else {
            self.fail(msg());
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "ok" } else { "FAILED" };
        write!(
            f,
            "{:<20} {verdict:<6} {} samples, {} checks, {} skipped, {} failures",
            self.name, self.samples, self.checks, self.skipped, self.failures
        )?;
        for e in &self.examples {
            write!(f, "\n    {e}")?;
        }
        Ok(())
    }
}

pub type SuiteFn = fn(&SelfTestConfig) -> SuiteReport;

/// All suites, in run order.
pub const SUITES: &[(&str, SuiteFn)] = &[
    ("genoid-axioms", genoid_axioms),
    ("monad", monad),
    ("combinators", combinators),
    ("lambda-formulas", lambda_formulas),
    ("oracle-differential", oracle_differential),
    ("rank-laws", rank_laws),
    ("clone", clone_laws),
    ("quantifier-algebra", quantifier_algebra),
    ("validity", validity),
    ("round-trips", round_trips),
];

pub fn run_suite(name: &str, cfg: &SelfTestConfig) -> Option<SuiteReport> {
    SUITES.iter().find(|(n, _)| *n == name).map(|(_, f)| f(cfg))
}

pub fn run_all(cfg: &SelfTestConfig) -> Vec<SuiteReport> {
    SUITES.iter().map(|(_, f)| f(cfg)).collect()
}

// --- σ laws -------------------------------------------------------------------

struct SigmaCheck<'a> {
    sigma: Sigma,
    report: &'a mut SuiteReport,
}

impl SigmaCheck<'_> {
    fn terms(&mut self, law: &str, l: &Term, r: &Term) {
        let a = self.sigma.normalize_term(l);
        let b = self.sigma.normalize_term(r);
        if !a.is_normal() || !b.is_normal() {
            self.report.fail(format!("{law}: fuel exhausted on {l} or {r}"));
        } else if a.result != b.result {
            self.report.fail(format!("{law}: {l} => {} but {r} => {}", a.result, b.result));
        } else {
            self.report.checks += 1;
        }
    }

    fn substs(&mut self, law: &str, l: &Subst, r: &Subst) {
        let a = self.sigma.normalize_subst(l);
        let b = self.sigma.normalize_subst(r);
        if !a.is_normal() || !b.is_normal() {
            self.report.fail(format!("{law}: fuel exhausted on {l} or {r}"));
        } else if a.result != b.result {
            self.report.fail(format!("{law}: {l} => {} but {r} => {}", a.result, b.result));
        } else {
            self.report.checks += 1;
        }
    }
}

/// (G1)-(G3), unit laws, the act law, distribution, extended (G3) for
/// n <= 5, termination and idempotence on random inputs of depth <= 8.
pub fn genoid_axioms(cfg: &SelfTestConfig) -> SuiteReport {
    let mut report = SuiteReport::new("genoid-axioms");
    let mut rng = cfg.rng(1);
    let gen = TermGen::default();
    let sigma = cfg.sigma();
    for i in 1..=6 {
        let mut c = SigmaCheck { sigma, report: &mut report };
        c.terms("index as shifted generator", &Term::sub(Term::X, Subst::shift_pow(i - 1)), &v(i));
    }
    for _ in 0..cfg.samples(10_000) {
        report.samples += 1;
        let t = gen.term_upto(&mut rng, 8);
        let a = gen.term_upto(&mut rng, 8);
        let u = gen.subst_upto(&mut rng, 8);
        let w = gen.subst_upto(&mut rng, 8);

        let nt = sigma.normalize_term(&t);
        let nu = sigma.normalize_subst(&u);
        if !nt.is_normal() || !nu.is_normal() {
            report.fail(format!("termination: {t} / {u}"));
            continue;
        }
        report.check(sigma.norm(&nt.result) == nt.result, || format!("idempotence: {t}"));
        report.check(sigma.normalize_subst(&nu.result).result == nu.result, || format!("idempotence: {u}"));
        report.check(nt.result.is_sigma_normal(), || format!("normal form has closures: {}", nt.result));

        let mut c = SigmaCheck { sigma, report: &mut report };
        let cons = |t: &Term, u: &Subst| Subst::cons(t.clone(), u.clone());
        let comp = |u: &Subst, w: &Subst| Subst::comp(u.clone(), w.clone());
        let sub = |t: &Term, u: &Subst| Term::sub(t.clone(), u.clone());

        c.terms("G1", &sub(&Term::X, &cons(&a, &u)), &a);
        c.substs("G2", &comp(&Subst::Shift, &cons(&a, &u)), &u);
        c.substs("G3", &cons(&sub(&Term::X, &u), &comp(&Subst::Shift, &u)), &u);
        c.terms("unit act", &sub(&t, &Subst::Id), &t);
        c.substs("left unit", &comp(&Subst::Id, &u), &u);
        c.substs("right unit", &comp(&u, &Subst::Id), &u);
        c.terms("act", &sub(&sub(&t, &u), &w), &sub(&t, &comp(&u, &w)));
        c.substs("associativity", &comp(&comp(&u, &w), &u), &comp(&u, &comp(&w, &u)));
        c.substs("distribution", &comp(&cons(&a, &u), &w), &cons(&sub(&a, &w), &comp(&u, &w)));
        c.terms("binder", &sub(&Term::lam(a.clone()), &u), &Term::lam(sub(&a, &delta(u.clone()))));
        for n in 1..=5 {
            let items = (1..=n).map(|i| sub(&v(i), &u));
            let lhs = Subst::cons_all(items, comp(&Subst::shift_pow(n), &u));
            c.substs(&format!("extended G3 n={n}"), &lhs, &u);
        }
    }
    report
}

/// `+- = (δ+)- = e`, `-- = (δ-)-`, and the Kleisli/δ identities on random
/// substitutions.
pub fn monad(cfg: &SelfTestConfig) -> SuiteReport {
    let mut report = SuiteReport::new("monad");
    let mut rng = cfg.rng(2);
    let sigma = cfg.sigma();
    let minus = Subst::minus;
    {
        report.samples += 1;
        let mut c = SigmaCheck { sigma, report: &mut report };
        c.substs("+- = e", &Subst::comp(Subst::Shift, minus()), &Subst::Id);
        c.substs("(δ+)- = e", &Subst::comp(delta(Subst::Shift), minus()), &Subst::Id);
        c.substs("-- = (δ-)-", &Subst::comp(minus(), minus()), &Subst::comp(delta(minus()), minus()));
    }
    let gen = TermGen::default();
    for _ in 0..cfg.samples(1_000) {
        report.samples += 1;
        let u = gen.subst_upto(&mut rng, 5);
        let w = gen.subst_upto(&mut rng, 5);
        let mut c = SigmaCheck { sigma, report: &mut report };
        c.substs("unit star", &kleisli_star(Subst::Id, w.clone()), &Subst::cons(Term::X, w.clone()));
        c.substs("shift star", &kleisli_star(Subst::Shift, w.clone()), &w);
        c.substs("star unit", &kleisli_star(u.clone(), Subst::Id), &Subst::comp(u.clone(), minus()));
        c.substs("δ identity", &delta(Subst::Id), &Subst::Id);
        c.substs(
            "δ composition",
            &delta(Subst::comp(u.clone(), w.clone())),
            &Subst::comp(delta(u.clone()), delta(w.clone())),
        );
        c.substs("+ after δ", &Subst::comp(Subst::Shift, delta(u.clone())), &Subst::comp(u.clone(), Subst::Shift));
    }
    report
}

// --- lambda laws --------------------------------------------------------------

enum Outcome {
    Equal,
    Diverged,
    Differ(String),
}

struct LambdaCheck {
    lam: Lambda,
    retry: Lambda,
}

impl LambdaCheck {
    fn new(cfg: &SelfTestConfig, flags: LambdaFlags) -> Self {
        let sigma = cfg.sigma();
        let retry = LambdaFlags { fuel: flags.fuel * RETRY_FACTOR, ..flags };
        let lam = |f| Lambda::with_sigma(f, sigma).with_max_size(SUITE_MAX_SIZE);
        LambdaCheck { lam: lam(flags), retry: lam(retry) }
    }

    fn compare_with(lam: &Lambda, l: &Term, r: &Term) -> Outcome {
        let a = lam.normalize(l);
        let b = lam.normalize(r);
        match (a.is_normal(), b.is_normal()) {
            (true, true) if a.result == b.result => Outcome::Equal,
            (true, true) => Outcome::Differ(format!("{l} => {} but {r} => {}", a.result, b.result)),
            (false, false) => Outcome::Diverged,
            (true, false) => Outcome::Differ(format!("{l} => {} but {r} ran out of fuel", a.result)),
            (false, true) => Outcome::Differ(format!("{l} ran out of fuel but {r} => {}", b.result)),
        }
    }

    /// Divergence on both sides excludes the sample; anything one-sided gets
    /// a second chance with more fuel.
    fn compare(&self, l: &Term, r: &Term) -> Outcome {
        match Self::compare_with(&self.lam, l, r) {
            Outcome::Differ(_) => Self::compare_with(&self.retry, l, r),
            other => other,
        }
    }

    fn record(&self, report: &mut SuiteReport, law: &str, l: &Term, r: &Term) {
        match self.compare(l, r) {
            Outcome::Equal => report.checks += 1,
            Outcome::Diverged => report.skipped += 1,
            Outcome::Differ(msg) => report.fail(format!("{law}: {msg}")),
        }
    }
}

/// `Lam^rank(t)`, closed by construction.
fn close_up(sigma: &Sigma, t: &Term) -> Term {
    let n = sigma.norm(t);
    let r = sigma.finite_rank(&n);
    Term::lam_n(r, n)
}

/// `Ia = a`, `Kab = a`, `Sabc = ac(bc)` on closed and open arguments.
pub fn combinators(cfg: &SelfTestConfig) -> SuiteReport {
    let mut report = SuiteReport::new("combinators");
    let mut rng = cfg.rng(3);
    let check = LambdaCheck::new(cfg, LambdaFlags { fuel: SUITE_LAMBDA_FUEL, ..LambdaFlags::default() });
    let sigma = Sigma::unbounded();
    let gen = TermGen::default();
    let [i, k, s] = ["I", "K", "S"].map(|c| combinator(c).expect("builtin combinator"));
    let arg = |rng: &mut SuiteRng| {
        let t = gen.term_upto(rng, 4);
        if rng.gen_bool(0.5) {
            close_up(&sigma, &t)
        } else {
            t
        }
    };
    for _ in 0..cfg.samples(1_000) {
        report.samples += 1;
        let (a, b, c) = (arg(&mut rng), arg(&mut rng), arg(&mut rng));
        check.record(&mut report, "I", &Term::app(i.clone(), a.clone()), &a);
        check.record(&mut report, "K", &Term::apply_all(k.clone(), [a.clone(), b.clone()]), &a);
        let lhs = Term::apply_all(s.clone(), [a.clone(), b.clone(), c.clone()]);
        let rhs = Term::app(Term::app(a, c.clone()), Term::app(b, c));
        check.record(&mut report, "S", &lhs, &rhs);
    }
    report
}

/// Formulas (1)-(6) for extensive lambda genoids, plus η soundness.
pub fn lambda_formulas(cfg: &SelfTestConfig) -> SuiteReport {
    let mut report = SuiteReport::new("lambda-formulas");
    let mut rng = cfg.rng(4);
    let check = LambdaCheck::new(cfg, LambdaFlags { fuel: SUITE_LAMBDA_FUEL, ..LambdaFlags::default() });
    let sigma = cfg.sigma();
    let gen = TermGen::default();
    let small = |n: u32| TermGen { max_index: n, sub: false, ..TermGen::default() };
    for _ in 0..cfg.samples(1_000) {
        report.samples += 1;
        let a = gen.term_upto(&mut rng, 5);
        let b = gen.term_upto(&mut rng, 4);
        let u = gen.subst_upto(&mut rng, 3);
        let lam_a = Term::lam(a.clone());

        check.record(&mut report, "(1)", &Term::app(lam_a.clone(), b.clone()), &Term::sub(a.clone(), Subst::cons(b.clone(), Subst::Id)));
        check.record(
            &mut report,
            "(2)",
            &Term::app(Term::sub(lam_a.clone(), u.clone()), b.clone()),
            &Term::sub(a.clone(), Subst::cons(b.clone(), u.clone())),
        );
        check.record(&mut report, "(3)", &Term::app(Term::lam(Term::sub(a.clone(), Subst::Shift)), b.clone()), &a);

        let n = rng.gen_range(1..=4);
        let gens: Vec<Term> = (1..=n).rev().map(v).collect();
        let shifted = Term::sub(Term::lam_n(n, a.clone()), Subst::shift_pow(n));
        check.record(&mut report, "(4)", &Term::apply_all(shifted, gens.clone()), &a);

        // (5): a of rank <= n is closed under n binders and recovered by x_n ... x_1.
        let c = small(n).term_upto(&mut rng, 5);
        let closed = Term::lam_n(n, c.clone());
        report.check(sigma.finite_rank(&closed) == 0, || format!("(5): {closed} is not closed"));
        check.record(&mut report, "(5)", &Term::apply_all(closed.clone(), gens.clone()), &c);
        let args: Vec<Term> = (0..n).map(|_| gen.term_upto(&mut rng, 3)).collect();
        let rhs = Term::sub(c.clone(), Subst::cons_all(args.iter().rev().cloned(), Subst::Id));
        check.record(&mut report, "(5) substitution form", &Term::apply_all(closed, args), &rhs);

        // (6): every a of finite rank n > 0 is c x_n ... x_1 for a closed c.
        let cl = closure_of(&a);
        report.check(sigma.finite_rank(&cl.closed) == 0, || format!("(6): closure of {a} is not closed"));
        if cl.rank > 0 {
            let gens: Vec<Term> = (1..=cl.rank).rev().map(v).collect();
            check.record(&mut report, "(6)", &Term::apply_all(cl.closed, gens), &a);
        }

        let eta = Term::lam(Term::app(Term::sub(a.clone(), Subst::Shift), Term::X));
        check.record(&mut report, "eta", &eta, &a);
    }
    report
}

/// `c1 c2 [c3]` for closed `ci`, at most 30 nodes: redex-rich, and
/// occasionally divergent.
fn applied_closures(gen: &TermGen, rng: &mut SuiteRng) -> Term {
    let sigma = Sigma::unbounded();
    let k = rng.gen_range(2..=3);
    let mut parts = (0..k).map(|_| {
        let p = gen.sized_lambda(rng, 30 / k - gen.max_index as usize - 1);
        Term::lam_n(sigma.finite_rank(&p).max(1), p)
    });
    let head = parts.next().expect("k >= 2");
    Term::apply_all(head, parts.collect::<Vec<_>>())
}

/// Engine β-normal forms against the named oracle on random convergent
/// pure terms of size <= 30.
pub fn oracle_differential(cfg: &SelfTestConfig) -> SuiteReport {
    let mut report = SuiteReport::new("oracle-differential");
    let mut rng = cfg.rng(5);
    let gen = TermGen { max_index: 3, ..TermGen::pure_lambda() };
    let fuel = SUITE_LAMBDA_FUEL;
    let sigma = cfg.sigma();
    let target = cfg.samples(1_000);
    let mut attempts = 0;
    while report.samples < target && attempts < 20 * target {
        attempts += 1;
        let t = if rng.gen_bool(0.5) { gen.sized_lambda(&mut rng, 30) } else { applied_closures(&gen, &mut rng) };
        let named = match from_debruijn(&t) {
            Ok(n) => n,
            Err(e) => {
                report.fail(format!("bridge: {t}: {e}"));
                continue;
            }
        };
        match to_debruijn(&named) {
            Ok(back) if back == t => {}
            other => report.fail(format!("bridge round trip: {t} came back as {other:?}")),
        }
        // Some(None): both sides exhausted; None: only one side converged.
        let mut outcome = None;
        for f in [fuel, fuel * RETRY_FACTOR] {
            let engine = Lambda::with_sigma(LambdaFlags::beta_only(f), sigma).with_max_size(SUITE_MAX_SIZE).normalize(&t);
            match (engine.is_normal(), oracle_normalize_bounded(&named, f, SUITE_MAX_SIZE)) {
                (true, Ok(o)) => {
                    outcome = Some(Some((engine.result, o)));
                    break;
                }
                (false, Err(_)) => {
                    outcome = Some(None);
                    break;
                }
                _ => outcome = None,
            }
        }
        match outcome {
            Some(Some((e, o))) => {
                report.samples += 1;
                match from_debruijn(&e) {
                    Ok(en) if en.alpha_eq(&o) => report.checks += 1,
                    Ok(en) => report.fail(format!("{named}: engine {en} vs oracle {o}")),
                    Err(err) => report.fail(format!("{named}: engine result {e}: {err}")),
                }
            }
            Some(None) => report.skipped += 1,
            None => {
                report.samples += 1;
                report.fail(format!("{named}: only one side converged"));
            }
        }
    }
    if report.samples < target {
        report.fail(format!("only {} convergent terms in {attempts} attempts", report.samples));
    }
    report
}

// --- rank ---------------------------------------------------------------------

/// Rank decrement under `Lam`, closed-term stability, rank soundness and
/// tightness.
pub fn rank_laws(cfg: &SelfTestConfig) -> SuiteReport {
    let mut report = SuiteReport::new("rank-laws");
    let mut rng = cfg.rng(6);
    let sigma = cfg.sigma();
    let gen = TermGen::default();
    let fresh = Term::fun("c", vec![]);
    for _ in 0..cfg.samples(2_000) {
        report.samples += 1;
        let t = gen.term_upto(&mut rng, 6);
        let u = gen.subst_upto(&mut rng, 4);
        let w = gen.subst_upto(&mut rng, 4);
        let Some(nt) = sigma.normalize_term(&t).normal() else {
            report.fail(format!("termination: {t}"));
            continue;
        };
        let r = sigma.finite_rank(&t);
        report.check(sigma.finite_rank(&nt) == r, || format!("rank not invariant under normalization: {t}"));
        report.check(
            sigma.finite_rank(&Term::lam(t.clone())) == r.saturating_sub(1),
            || format!("decrement: rank {r} of {t} but Lam gives {}", sigma.finite_rank(&Term::lam(t.clone()))),
        );

        let closed = Term::lam_n(r, nt.clone());
        report.check(sigma.finite_rank(&closed) == 0, || format!("{closed} should be closed"));
        let mut c = SigmaCheck { sigma, report: &mut report };
        c.terms("closed stability", &Term::sub(closed.clone(), u.clone()), &closed);
        if r == 0 {
            c.terms("closed stability", &Term::sub(t.clone(), u.clone()), &t);
        }

        let prefix: Vec<Term> = (0..r).map(|_| gen.term_upto(&mut rng, 3)).collect();
        let du = Subst::cons_all(prefix.iter().cloned(), u.clone());
        let dw = Subst::cons_all(prefix.iter().cloned(), w.clone());
        let mut c = SigmaCheck { sigma, report: &mut report };
        c.terms("soundness", &Term::sub(t.clone(), du), &Term::sub(t.clone(), dw));

        if r > 0 {
            let items = (1..r).map(v).chain([fresh.clone()]);
            let moved = sigma.norm(&Term::sub(t.clone(), Subst::cons_all(items, Subst::shift_pow(r))));
            report.check(moved != nt, || format!("tightness: x{r} does not occur in {nt}"));
        }
    }
    report
}

// --- clone --------------------------------------------------------------------

fn random_sequence(gen: &TermGen, rng: &mut SuiteRng) -> FinitarySequence {
    let k = rng.gen_range(0..=4);
    let prefix = (0..k).map(|_| gen.term_upto(rng, 2)).collect();
    FinitarySequence::new(prefix, gen.subst_upto(rng, 2))
}

fn random_assignment(rng: &mut SuiteRng, carrier: usize, len: usize) -> Assignment {
    Assignment::new((0..len).map(|_| rng.gen_range(0..carrier)).collect(), rng.gen_range(0..carrier))
}

fn all_structures(max_carrier: usize, sig: &Signature) -> Vec<Structure> {
    (1..=max_carrier)
        .flat_map(|n| StructureEnumerator::new(n, sig.clone()).expect("carrier is positive"))
        .collect()
}

/// Left-algebra axioms, independence of the prefix length, composition laws
/// and the substitution lemma over every structure of carrier <= 2 for one
/// binary function symbol.
pub fn clone_laws(cfg: &SelfTestConfig) -> SuiteReport {
    let mut report = SuiteReport::new("clone");
    let mut rng = cfg.rng(7);
    let sig = Signature::new().with_function("f", 2);
    let structures = all_structures(2, &sig);
    let gen = TermGen::first_order(sig.function_list(), 4);
    let sigma = Sigma::unbounded();
    for _ in 0..cfg.samples(500) {
        report.samples += 1;
        let a = gen.term_upto(&mut rng, 4);
        let (s, t, r) = (random_sequence(&gen, &mut rng), random_sequence(&gen, &mut rng), random_sequence(&gen, &mut rng));
        let rank = sigma.finite_rank(&a);

        let prefix: Vec<Term> = (0..rank).map(|_| gen.term_upto(&mut rng, 2)).collect();
        let mut padded = prefix.clone();
        padded.extend((0..rng.gen_range(1..=3)).map(|_| gen.term_upto(&mut rng, 2)));
        let base = clone_apply_prefix(&a, &prefix);
        report.check(base.is_ok() && base == clone_apply_prefix(&a, &padded), || format!("independence: {a}"));
        let tailed = clone_apply(&a, &FinitarySequence::new(prefix.clone(), gen.subst_upto(&mut rng, 2)));
        report.check(base.as_ref() == Ok(&tailed), || format!("independence of tail: {a}"));

        let st = seq_compose(&s, &t);
        report.check(clone_apply(&clone_apply(&a, &s), &t) == clone_apply(&a, &st), || {
            format!("action: {a} under {} then {}", s.to_subst(), t.to_subst())
        });
        let left = seq_compose(&st, &r);
        let right = seq_compose(&s, &seq_compose(&t, &r));
        report.check(left.expand(5) == right.expand(5) && left.equivalent(&right), || {
            format!("associativity: {} {} {}", s.to_subst(), t.to_subst(), r.to_subst())
        });
        let unit = FinitarySequence::unit();
        report.check(seq_compose(&unit, &s).equivalent(&s), || format!("left unit: {}", s.to_subst()));
        report.check(seq_compose(&s, &unit).equivalent(&s), || format!("right unit: {}", s.to_subst()));

        let applied = clone_apply(&a, &s);
        for m in &structures {
            let env = random_assignment(&mut rng, m.carrier(), 6);
            for i in 1..=7 {
                report.check(eval_term(&v(i), m, &env) == Ok(env.get(i)), || format!("axiom 2: x{i} at {env}"));
            }
            let lhs = eval_term(&applied, m, &env);
            let rhs = evaluate_sequence(&s, rank, m, &env).and_then(|e| eval_term(&a, m, &e));
            report.check(lhs.is_ok() && lhs == rhs, || {
                format!("axiom 1: {a} under {} at {env}: {lhs:?} vs {rhs:?}", s.to_subst())
            });
        }
    }
    report
}

// --- first-order logic --------------------------------------------------------

/// A formula evaluated by following the semantics of explicit substitution
/// directly, without normalizing the formula first.
enum Direct {
    Atom(String, Vec<Term>),
    Falsum,
    Implies(Box<Direct>, Box<Direct>),
    Exists(Box<Direct>),
    /// Body and the coordinates of the substitution it is under.
    Sub(Box<Direct>, Vec<Term>),
}

impl Direct {
    fn compile(f: &Formula, sigma: &Sigma) -> Direct {
        match f {
            Formula::Atom(p, args) => Direct::Atom(p.clone(), args.iter().map(|t| sigma.norm(t)).collect()),
            Formula::Falsum => Direct::Falsum,
            Formula::Implies(l, r) => Direct::Implies(Box::new(Self::compile(l, sigma)), Box::new(Self::compile(r, sigma))),
            Formula::Exists(b) => Direct::Exists(Box::new(Self::compile(b, sigma))),
            Formula::SubF(g, u) => {
                let coords = (1..=formula_rank(g)).map(|i| sigma.norm(&Term::sub(v(i), (**u).clone()))).collect();
                Direct::Sub(Box::new(Self::compile(g, sigma)), coords)
            }
        }
    }

    fn eval(&self, m: &Structure, env: &Assignment) -> Result<bool, Error> {
        match self {
            Direct::Atom(p, args) => {
                let vals = args.iter().map(|t| eval_term(t, m, env)).collect::<Result<Vec<_>, _>>()?;
                m.holds(p, &vals)
            }
            Direct::Falsum => Ok(false),
            Direct::Implies(l, r) => Ok(!l.eval(m, env)? || r.eval(m, env)?),
            Direct::Exists(b) => {
                let mut values = Vec::with_capacity(env.values.len() + 1);
                values.push(0);
                values.extend_from_slice(&env.values);
                let mut inner = Assignment::new(values, env.pad);
                for d in 0..m.carrier() {
                    inner.values[0] = d;
                    if b.eval(m, &inner)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Direct::Sub(b, coords) => {
                let values = coords.iter().map(|t| eval_term(t, m, env)).collect::<Result<Vec<_>, _>>()?;
                b.eval(m, &Assignment::new(values, 0))
            }
        }
    }
}

struct QuantifierCase {
    p: Formula,
    q: Formula,
    not_p: Formula,
    or: Formula,
    and: Formula,
    truth: Formula,
    exists_or: Formula,
    or_exists: Formula,
    lifted: Formula,
    sub_p: Formula,
    direct_p: Direct,
    direct_sub_p: Direct,
    rank: usize,
}

impl QuantifierCase {
    fn new(p_raw: &Formula, q_raw: &Formula, u: &Subst) -> Self {
        let sigma = Sigma::unbounded();
        let p = normalize_formula(p_raw);
        let q = normalize_formula(q_raw);
        let n = |f: Formula| normalize_formula(&f);
        QuantifierCase {
            not_p: n(Formula::not(p.clone())),
            or: n(Formula::or(p.clone(), q.clone())),
            and: n(Formula::and(p.clone(), q.clone())),
            truth: n(Formula::truth()),
            exists_or: n(Formula::exists(Formula::or(p.clone(), q.clone()))),
            or_exists: n(Formula::or(Formula::exists(p.clone()), Formula::exists(q.clone()))),
            lifted: n(Formula::subf(Formula::exists(p.clone()), Subst::Shift)),
            sub_p: fol::subst_formula(&p, u),
            direct_p: Direct::compile(p_raw, &sigma),
            direct_sub_p: Direct::compile(&Formula::subf(p_raw.clone(), u.clone()), &sigma),
            rank: formula_rank(&p) as usize,
            p,
            q,
        }
    }

    fn check(&self, m: &Structure, env: &Assignment, pad: &Assignment, report: &mut SuiteReport) -> Result<(), Error> {
        let e = |f: &Formula| fol::eval_normal_at(f, m, env);
        let (p, q) = (e(&self.p)?, e(&self.q)?);
        let at = |law: &str| format!("{law}: p = {}, q = {}, env {env}\n{m}", self.p, self.q);
        report.check(e(&self.not_p)? == !p, || at("negation"));
        report.check(e(&self.or)? == (p || q), || at("disjunction"));
        report.check(e(&self.and)? == (p && q), || at("conjunction"));
        report.check(e(&self.truth)?, || at("truth"));
        report.check(e(&self.exists_or)? == e(&self.or_exists)?, || at("axiom (ii)"));
        report.check(!p || e(&self.lifted)?, || at("axiom (iii)"));
        report.check(e(&self.sub_p)? == self.direct_sub_p.eval(m, env)?, || at("substitution lemma"));
        report.check(p == self.direct_p.eval(m, env)?, || at("normalization soundness"));
        report.check(p == fol::eval_normal_at(&self.p, m, pad)?, || at("rank padding"));
        Ok(())
    }
}

/// Boolean laws and axioms (ii), (iii), pointwise over every structure of
/// carrier <= 3 for a unary and a binary predicate.
pub fn quantifier_algebra(cfg: &SelfTestConfig) -> SuiteReport {
    let mut report = SuiteReport::new("quantifier-algebra");
    let mut rng = cfg.rng(8);
    let sig = Signature::new().with_predicate("P", 1).with_predicate("Q", 2);
    let structures = all_structures(3, &sig);
    let terms = TermGen::first_order(Vec::new(), 6);
    let gen = FormulaGen::new(sig.predicate_list(), terms.clone());
    let n = cfg.samples(500);
    let formulas: Vec<Formula> = (0..n).map(|_| gen.formula_upto(&mut rng, 5)).collect();
    for k in 0..n {
        report.samples += 1;
        let u = terms.subst(&mut rng, 2);
        let case = QuantifierCase::new(&formulas[k], &formulas[(k + 1) % n], &u);
        for m in &structures {
            let env = random_assignment(&mut rng, m.carrier(), case.rank.max(6));
            let mut altered = env.clone();
            for d in altered.values.iter_mut().skip(case.rank) {
                *d = rng.gen_range(0..m.carrier());
            }
            altered.pad = rng.gen_range(0..m.carrier());
            if let Err(e) = case.check(m, &env, &altered, &mut report) {
                report.fail(format!("evaluation error on {}: {e}", case.p));
            }
        }
    }
    report
}

fn expect_valid(report: &mut SuiteReport, text: &str, bound: usize) {
    report.samples += 1;
    match parse_formula(text).and_then(|f| check_validity(&f, bound)) {
        Ok(v) if v.is_valid() && v.bound == bound => report.checks += 1,
        Ok(v) => report.fail(format!("{text}: expected valid up to {bound}, got {} {:?}", v.status, v.counterexample)),
        Err(e) => report.fail(format!("{text}: {e}")),
    }
}

/// `f` must be refuted by a counterexample of carrier <= 2 that survives a
/// trip through the structure file format and re-evaluates to false.
fn expect_refuted(report: &mut SuiteReport, label: &str, f: &Formula, verdict: Result<fol::Verdict, Error>) {
    report.samples += 1;
    let (m, env) = match verdict {
        Ok(fol::Verdict { counterexample: Some(ce), .. }) => ce,
        Ok(v) => return report.fail(format!("{label}: expected invalid, got {}", v.status)),
        Err(e) => return report.fail(format!("{label}: {e}")),
    };
    report.check(m.carrier() <= 2, || format!("{label}: counterexample has carrier {}", m.carrier()));
    match Structure::parse(&m.to_string()) {
        Ok(back) if back == m => {}
        other => report.fail(format!("{label}: counterexample does not round trip: {other:?}")),
    }
    report.check(eval_formula(f, &m, &env) == Ok(false), || format!("{label}: replay at {env} did not falsify\n{m}"));
}

/// Tautologies and axiom-(iii) instances survive bound 3; the converse of
/// (iii) and distribution of `exists` over `&` are refuted.
pub fn validity(cfg: &SelfTestConfig) -> SuiteReport {
    let mut report = SuiteReport::new("validity");
    let _ = cfg;
    for text in [
        "P(x1) -> P(x1)",
        "((P(x1) -> Q(x1)) -> P(x1)) -> P(x1)",
        "((P(x1) -> Q(x2, x1)) -> P(x1)) -> P(x1)",
        "P(x1) -> (exists. P(x1))[^]",
        "Q(x1, x2) -> (exists. Q(x1, x2))[^]",
        "(P(x1) | Q(x2, x1)) -> (exists. P(x1) | Q(x2, x1))[^]",
        "P(x2) -> exists x2. P(x2)",
    ] {
        expect_valid(&mut report, text, 3);
    }

    let converse = parse_formula("(exists. P(x1))[^] -> P(x1)").expect("fixed formula");
    expect_refuted(&mut report, "converse of (iii)", &converse, check_validity(&converse, 3));

    let lhs = parse_formula("exists. P(x1) & Q(x1)").expect("fixed formula");
    let rhs = parse_formula("(exists. P(x1)) & (exists. Q(x1))").expect("fixed formula");
    let iff = Formula::iff(lhs.clone(), rhs.clone());
    expect_refuted(&mut report, "exists over &", &iff, check_equivalence(&lhs, &rhs, 3));
    report
}

// --- syntax -------------------------------------------------------------------

/// `parse(print(x)) = x` for terms, substitutions, named terms and formulas.
pub fn round_trips(cfg: &SelfTestConfig) -> SuiteReport {
    let mut report = SuiteReport::new("round-trips");
    let mut rng = cfg.rng(10);
    let gen = TermGen::default();
    let pure = TermGen::pure_lambda();
    let formulas = FormulaGen::new(vec![("P".into(), 1), ("Q".into(), 2), ("R".into(), 0)], gen.clone());
    for _ in 0..cfg.samples(5_000) {
        report.samples += 1;
        let t = gen.term_upto(&mut rng, 6);
        report.check(parse_term(&t.to_string()).as_ref() == Ok(&t), || format!("term: {t}"));
        let u = gen.subst_upto(&mut rng, 6);
        report.check(parse_subst(&u.to_string()).as_ref() == Ok(&u), || format!("substitution: {u}"));
        match from_debruijn(&pure.sized_lambda(&mut rng, 30)) {
            Ok(n) => report.check(parse_named(&n.to_string()).as_ref() == Ok(&n), || format!("named: {n}")),
            Err(e) => report.fail(format!("named: {e}")),
        }
        let f = formulas.formula_upto(&mut rng, 5);
        report.check(parse_formula(&f.to_string()).as_ref() == Ok(&f), || format!("formula: {f}"));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SelfTestConfig {
        SelfTestConfig { quick: true, ..SelfTestConfig::default() }
    }

    #[test]
    fn quick_run_passes() {
        for r in run_all(&quick()) {
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn names_are_unique() {
        let mut names: Vec<_> = SUITES.iter().map(|(n, _)| *n).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), SUITES.len());
        assert!(run_suite("no-such-suite", &quick()).is_none());
    }

    #[test]
    fn reports_are_deterministic() {
        assert_eq!(run_suite("genoid-axioms", &quick()), run_suite("genoid-axioms", &quick()));
    }
}
