//! The finitary clone of terms: infinite sequences `[a1, a2, ...]`, clone
//! application and sequence composition, and the left-algebra axioms for
//! finite structures.

use rand::Rng;

use crate::error::Error;
use crate::random::{self, TermGen};
use crate::sigma::{NormalSubst, Sigma};
use crate::structure::{eval_term, Assignment, Structure};
use crate::term::{v, Subst, Term};

/// `[t1, ..., tk, x1 tail, x2 tail, ...]`.
///
/// The unit `[x1, x2, ...]` is `prefix = [], tail = Id`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinitarySequence {
    pub prefix: Vec<Term>,
    pub tail: Subst,
}

impl FinitarySequence {
    pub fn new(prefix: Vec<Term>, tail: Subst) -> Self {
        FinitarySequence { prefix, tail }
    }

    pub fn unit() -> Self {
        FinitarySequence { prefix: Vec::new(), tail: Subst::Id }
    }

    /// The canonical embedding of a substitution: `[x1 u, x2 u, ...]`.
    pub fn from_subst(u: Subst) -> Self {
        FinitarySequence { prefix: Vec::new(), tail: u }
    }

    pub fn to_subst(&self) -> Subst {
        Subst::cons_all(self.prefix.iter().cloned(), self.tail.clone())
    }

    fn evaluated(&self) -> NormalSubst {
        Sigma::unbounded().evaluate_subst(&self.to_subst()).result
    }

    /// Coordinate `i` (1-based), σ-normal.
    pub fn coordinate(&self, i: u32) -> Term {
        self.evaluated().coordinate(i)
    }

    /// The first `n` coordinates.
    pub fn expand(&self, n: u32) -> Vec<Term> {
        let e = self.evaluated();
        (1..=n).map(|i| e.coordinate(i)).collect()
    }

    /// Normal prefix over a `+^n` tail; two sequences are equal iff their
    /// canonical forms are identical.
    pub fn canonical(&self) -> FinitarySequence {
        let e = self.evaluated();
        FinitarySequence { prefix: e.items().to_vec(), tail: Subst::shift_pow(e.shift_amount()) }
    }

    pub fn equivalent(&self, other: &FinitarySequence) -> bool {
        self.canonical() == other.canonical()
    }
}

/// `a[a1, a2, ...]`, σ-normal.
pub fn clone_apply(a: &Term, s: &FinitarySequence) -> Term {
    Sigma::unbounded().norm(&Term::sub(a.clone(), s.to_subst()))
}

/// `a[a1, ..., an, e]` for a prefix covering the rank of `a`. Entries past
/// the rank are irrelevant; a shorter prefix is rejected.
pub fn clone_apply_prefix(a: &Term, prefix: &[Term]) -> Result<Term, Error> {
    let rank = Sigma::unbounded().finite_rank(a);
    if prefix.len() < rank as usize {
        return Err(Error::InsufficientPrefix { have: prefix.len(), rank });
    }
    Ok(clone_apply(a, &FinitarySequence::new(prefix.to_vec(), Subst::Id)))
}

/// `[s1, s2, ...][t1, t2, ...] = [s1[t], s2[t], ...]`.
pub fn seq_compose(s: &FinitarySequence, t: &FinitarySequence) -> FinitarySequence {
    let ts = t.to_subst();
    let prefix = s.prefix.iter().map(|a| clone_apply(a, t)).collect();
    let tail = Sigma::unbounded().norm_subst(&Subst::comp(s.tail.clone(), ts));
    FinitarySequence { prefix, tail }
}

/// `env'` with `env'_i = eval(s_i, env)` for `i <= n`.
pub fn evaluate_sequence(
    s: &FinitarySequence,
    n: u32,
    m: &Structure,
    env: &Assignment,
) -> Result<Assignment, Error> {
    let values = s.expand(n).iter().map(|t| eval_term(t, m, env)).collect::<Result<_, _>>()?;
    Ok(Assignment::new(values, env.pad))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Randomized check of both left-algebra axioms on `m`:
///
/// 1. `(a[s])[d] = a[s1[d], s2[d], ...]`
/// 2. `xi[d] = di`
pub fn check_left_algebra_axioms(m: &Structure, samples: usize) -> AxiomReport {
    check_left_algebra_axioms_seeded(m, samples, random::DEFAULT_SEED)
}

pub fn check_left_algebra_axioms_seeded(m: &Structure, samples: usize, seed: u64) -> AxiomReport {
    let mut rng = random::rng(seed);
    let gen = TermGen::first_order(m.signature().function_list(), 5);
    let mut report = AxiomReport::default();
    let n = m.carrier();
    for _ in 0..samples {
        let env = Assignment::new((0..5).map(|_| rng.gen_range(0..n)).collect(), rng.gen_range(0..n));

        let i = rng.gen_range(1..=5);
        report.checked += 1;
        match eval_term(&v(i), m, &env) {
            Ok(d) if d == env.get(i) => {}
            other => report.failures.push(format!("axiom 2: x{i} at {env} gave {other:?}")),
        }

        let a = gen.term_upto(&mut rng, 3);
        let k = rng.gen_range(0..=4);
        let prefix: Vec<Term> = (0..k).map(|_| gen.term_upto(&mut rng, 2)).collect();
        let tail = Subst::shift_pow(rng.gen_range(0..=2));
        let s = FinitarySequence::new(prefix, tail);
        report.checked += 1;
        let lhs = eval_term(&clone_apply(&a, &s), m, &env);
        let rank = Sigma::unbounded().finite_rank(&a);
        let rhs = evaluate_sequence(&s, rank, m, &env).and_then(|env2| eval_term(&a, m, &env2));
        if lhs != rhs || lhs.is_err() {
            report.failures.push(format!("axiom 1: a = {a}, s = {}, env = {env}: {lhs:?} vs {rhs:?}", s.to_subst()));
        }
    }
    report
}
