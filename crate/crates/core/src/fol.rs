//! Predicate algebra over the term language.
//!
//! Formulas are built from atoms, falsum, implication, the nameless
//! existential binder and explicit substitution. Negation, disjunction,
//! conjunction and truth are derived. Semantics follows the power-set
//! algebra of `D^N`: a formula denotes the set of points where it holds, and
//! `exists. p` holds at `(d1, d2, ...)` iff `p` holds at `(a, d1, d2, ...)`
//! for some `a`.

use std::fmt;

use crate::error::Error;
use crate::lambda::binder_permutation;
use crate::sigma::{Exhausted, NormalSubst, Rewriter, Sigma};
use crate::structure::{eval_at, Assignment, Point, Signature, Structure, StructureEnumerator};
use crate::term::{Subst, Term};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(String, Vec<Term>),
    Falsum,
    Implies(Box<Formula>, Box<Formula>),
    Exists(Box<Formula>),
    /// Explicit right action `f[u]`.
    SubF(Box<Formula>, Box<Subst>),
}

impl Formula {
    pub fn atom(sym: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Atom(sym.into(), args)
    }

    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn exists(b: Formula) -> Formula {
        Formula::Exists(Box::new(b))
    }

    pub fn subf(f: Formula, u: Subst) -> Formula {
        Formula::SubF(Box::new(f), Box::new(u))
    }

    /// `~p = p -> false`
    pub fn not(p: Formula) -> Formula {
        Formula::implies(p, Formula::Falsum)
    }

    /// `T = ~F`
    pub fn truth() -> Formula {
        Formula::not(Formula::Falsum)
    }

    /// `p | q = ~p -> q`
    pub fn or(p: Formula, q: Formula) -> Formula {
        Formula::implies(Formula::not(p), q)
    }

    /// `p & q = ~(p -> ~q)`
    pub fn and(p: Formula, q: Formula) -> Formula {
        Formula::not(Formula::implies(p, Formula::not(q)))
    }

    pub fn iff(p: Formula, q: Formula) -> Formula {
        Formula::and(Formula::implies(p.clone(), q.clone()), Formula::implies(q, p))
    }

    pub fn is_sigma_normal(&self) -> bool {
        match self {
            Formula::Atom(_, args) => args.iter().all(Term::is_sigma_normal),
            Formula::Falsum => true,
            Formula::Implies(l, r) => l.is_sigma_normal() && r.is_sigma_normal(),
            Formula::Exists(b) => b.is_sigma_normal(),
            Formula::SubF(..) => false,
        }
    }

    /// Collects predicate and function symbols with their arities.
    pub fn signature(&self) -> Result<Signature, Error> {
        let mut sig = Signature::new();
        self.add_symbols(&mut sig)?;
        Ok(sig)
    }

    pub(crate) fn add_symbols(&self, sig: &mut Signature) -> Result<(), Error> {
        match self {
            Formula::Atom(p, args) => {
                sig.add_predicate(p, args.len())?;
                args.iter().try_for_each(|t| sig.add_term(t))
            }
            Formula::Falsum => Ok(()),
            Formula::Implies(l, r) => {
                l.add_symbols(sig)?;
                r.add_symbols(sig)
            }
            Formula::Exists(b) => b.add_symbols(sig),
            Formula::SubF(f, u) => {
                f.add_symbols(sig)?;
                sig.add_term(&Term::sub(Term::X, (**u).clone()))
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            Formula::Falsum => 1,
            Formula::Implies(l, r) => 1 + l.size() + r.size(),
            Formula::Exists(b) => 1 + b.size(),
            Formula::SubF(f, u) => 1 + f.size() + u.size(),
        }
    }
}

// --- substitution action ----------------------------------------------------

fn act(rw: &mut Rewriter, f: &Formula, env: Option<&NormalSubst>) -> Result<Formula, Exhausted> {
    match f {
        Formula::Atom(p, args) => {
            let args = args.iter().map(|t| rw.term(t, env)).collect::<Result<_, _>>()?;
            Ok(Formula::Atom(p.clone(), args))
        }
        Formula::Falsum => Ok(Formula::Falsum),
        Formula::Implies(l, r) => Ok(Formula::implies(act(rw, l, env)?, act(rw, r, env)?)),
        Formula::Exists(b) => match env {
            None => Ok(Formula::exists(act(rw, b, None)?)),
            Some(e) => {
                let lifted = rw.lift(e)?;
                Ok(Formula::exists(act(rw, b, Some(&lifted))?))
            }
        },
        Formula::SubF(g, u) => {
            let inner = rw.subst(u)?;
            let composed = match env {
                None => inner,
                Some(e) => rw.compose(&inner, e)?,
            };
            if composed.is_identity() {
                act(rw, g, None)
            } else {
                act(rw, g, Some(&composed))
            }
        }
    }
}

/// σ-normal form of a formula: all explicit substitutions pushed into atoms.
pub fn normalize_formula(f: &Formula) -> Formula {
    let mut rw = Sigma::unbounded().rewriter();
    act(&mut rw, f, None).expect("unbounded σ run")
}

/// `f[u]` in σ-normal form.
pub fn subst_formula(f: &Formula, u: &Subst) -> Formula {
    let mut rw = Sigma::unbounded().rewriter();
    let env = rw.subst(u).expect("unbounded σ run");
    let env = if env.is_identity() { None } else { Some(&env) };
    act(&mut rw, f, env).expect("unbounded σ run")
}

fn normal_rank(f: &Formula) -> u32 {
    match f {
        Formula::Atom(_, args) => args.iter().map(Term::max_free_index).max().unwrap_or(0),
        Formula::Falsum => 0,
        Formula::Implies(l, r) => normal_rank(l).max(normal_rank(r)),
        Formula::Exists(b) => normal_rank(b).saturating_sub(1),
        Formula::SubF(..) => unreachable!("rank is taken on σ-normal formulas"),
    }
}

/// Largest free index after normalization; 0 for sentences.
pub fn formula_rank(f: &Formula) -> u32 {
    if f.is_sigma_normal() {
        normal_rank(f)
    } else {
        normal_rank(&normalize_formula(f))
    }
}

/// Derived binder `exists xi. f = exists. f[x2, ..., xi, x1, +^(i+1)]`.
pub fn exists_xi(i: u32, f: &Formula) -> Result<Formula, Error> {
    Ok(Formula::exists(subst_formula(f, &binder_permutation(i)?)))
}

// --- semantics --------------------------------------------------------------

fn eval_normal(f: &Formula, m: &Structure, at: &mut Point<'_>) -> Result<bool, Error> {
    match f {
        Formula::Atom(p, args) => {
            let vals = args.iter().map(|t| eval_at(t, m, at)).collect::<Result<Vec<_>, _>>()?;
            m.holds(p, &vals)
        }
        Formula::Falsum => Ok(false),
        Formula::Implies(l, r) => Ok(!eval_normal(l, m, at)? || eval_normal(r, m, at)?),
        Formula::Exists(b) => {
            for a in 0..m.carrier() {
                at.front.push(a);
                let hit = eval_normal(b, m, at);
                at.front.pop();
                if hit? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::SubF(..) => unreachable!("evaluation runs on σ-normal formulas"),
    }
}

/// Evaluates a σ-normal formula without re-checking the assignment.
pub(crate) fn eval_normal_at(f: &Formula, m: &Structure, env: &Assignment) -> Result<bool, Error> {
    eval_normal(f, m, &mut Point { front: Vec::new(), base: env })
}

/// Truth value of `f` at `env` in `m`.
pub fn eval_formula(f: &Formula, m: &Structure, env: &Assignment) -> Result<bool, Error> {
    env.check(m)?;
    if f.is_sigma_normal() {
        eval_normal_at(f, m, env)
    } else {
        eval_normal_at(&normalize_formula(f), m, env)
    }
}

// --- bounded validity ---------------------------------------------------------

/// Default bound on the number of (structure, assignment) cases examined.
pub const DEFAULT_ENUMERATION_CAP: u128 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VerdictStatus {
    ValidUpToBound,
    Invalid,
}

impl fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerdictStatus::ValidUpToBound => write!(f, "valid-up-to-bound"),
            VerdictStatus::Invalid => write!(f, "invalid"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub counterexample: Option<(Structure, Assignment)>,
    pub bound: usize,
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        self.status == VerdictStatus::ValidUpToBound
    }
}

/// Bounded model search over all structures with carrier `1..=max_carrier`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModelSearch {
    pub max_carrier: usize,
    pub cap: u128,
}

impl ModelSearch {
    pub fn new(max_carrier: usize) -> Self {
        ModelSearch { max_carrier, cap: DEFAULT_ENUMERATION_CAP }
    }

    /// Number of (structure, assignment, pad) cases for a signature and rank.
    pub fn cost(&self, sig: &Signature, rank: u32) -> u128 {
        (1..=self.max_carrier)
            .map(|n| {
                let points = (n as u128).saturating_pow(rank).saturating_mul(n as u128);
                StructureEnumerator::count(n, sig).saturating_mul(points)
            })
            .fold(0u128, |a, b| a.saturating_add(b))
    }

    pub fn check_validity(&self, f: &Formula) -> Result<Verdict, Error> {
        if self.max_carrier == 0 {
            return Err(Error::Structure("max carrier must be at least 1".into()));
        }
        let sig = f.signature()?;
        let nf = normalize_formula(f);
        let rank = normal_rank(&nf);
        let estimate = self.cost(&sig, rank);
        if estimate > self.cap {
            return Err(Error::EnumerationCap { estimate, cap: self.cap });
        }
        for n in 1..=self.max_carrier {
            for m in StructureEnumerator::new(n, sig.clone())? {
                if let Some(env) = first_falsifying_point(&nf, &m, rank)? {
                    return Ok(Verdict {
                        status: VerdictStatus::Invalid,
                        counterexample: Some((m, env)),
                        bound: self.max_carrier,
                    });
                }
            }
        }
        Ok(Verdict { status: VerdictStatus::ValidUpToBound, counterexample: None, bound: self.max_carrier })
    }

    pub fn check_equivalence(&self, f: &Formula, g: &Formula) -> Result<Verdict, Error> {
        self.check_validity(&Formula::iff(f.clone(), g.clone()))
    }
}

/// Lexicographically least assignment of the first `rank` coordinates
/// (then the pad) at which `f` is false.
fn first_falsifying_point(f: &Formula, m: &Structure, rank: u32) -> Result<Option<Assignment>, Error> {
    let n = m.carrier();
    let mut values = vec![0usize; rank as usize];
    loop {
        for pad in 0..n {
            let env = Assignment::new(values.clone(), pad);
            if !eval_normal_at(f, m, &env)? {
                return Ok(Some(env));
            }
        }
        let mut k = values.len();
        loop {
            if k == 0 {
                return Ok(None);
            }
            k -= 1;
            values[k] += 1;
            if values[k] < n {
                break;
            }
            values[k] = 0;
        }
    }
}

pub fn check_validity(f: &Formula, max_carrier: usize) -> Result<Verdict, Error> {
    ModelSearch::new(max_carrier).check_validity(f)
}

pub fn check_equivalence(f: &Formula, g: &Formula, max_carrier: usize) -> Result<Verdict, Error> {
    ModelSearch::new(max_carrier).check_equivalence(f, g)
}

// --- printing -----------------------------------------------------------------

impl Formula {
    // 0 = implication and binders, 1 = operand of `->`, 2 = postfix/atoms.
    fn write_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        match self {
            Formula::Falsum => write!(f, "false"),
            Formula::Atom(p, args) => {
                write!(f, "{p}(")?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            Formula::SubF(g, u) => {
                g.write_prec(f, 2)?;
                write!(f, "[{u}]")
            }
            Formula::Implies(l, r) if **r == Formula::Falsum => {
                if prec > 1 {
                    write!(f, "(")?;
                }
                write!(f, "~")?;
                l.write_prec(f, 2)?;
                if prec > 1 {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Formula::Implies(l, r) => {
                if prec > 0 {
                    write!(f, "(")?;
                }
                l.write_prec(f, 1)?;
                write!(f, " -> ")?;
                r.write_prec(f, 0)?;
                if prec > 0 {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Formula::Exists(b) => {
                if prec > 0 {
                    write!(f, "(")?;
                }
                write!(f, "exists. ")?;
                b.write_prec(f, 0)?;
                if prec > 0 {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::v;

    fn p1(i: u32) -> Formula {
        Formula::atom("P", vec![v(i)])
    }

    fn model(carrier: usize, p: &[usize]) -> Structure {
        let mut m = Structure::new(carrier, Signature::new().with_predicate("P", 1)).unwrap();
        for &d in p {
            m.set_pred("P", &[d], true).unwrap();
        }
        m
    }

    #[test]
    fn substitution_examples() {
        let u = Subst::cons(v(3), Subst::Id);
        assert_eq!(subst_formula(&Formula::Falsum, &u), Formula::Falsum);
        assert_eq!(subst_formula(&p1(1), &u), p1(3));
        let q = Formula::exists(Formula::atom("P", vec![v(1), v(2)]));
        assert_eq!(
            subst_formula(&q, &Subst::Shift),
            Formula::exists(Formula::atom("P", vec![v(1), v(3)]))
        );
    }

    #[test]
    fn ranks() {
        assert_eq!(formula_rank(&p1(3)), 3);
        assert_eq!(formula_rank(&Formula::exists(p1(1))), 0);
        let f = Formula::implies(p1(1), Formula::exists(Formula::atom("Q", vec![v(1), v(2)])));
        assert_eq!(formula_rank(&f), 1);
        assert_eq!(formula_rank(&Formula::subf(p1(1), Subst::shift_pow(2))), 3);
    }

    #[test]
    fn semantics_basics() {
        let m = model(2, &[1]);
        let env = Assignment::new(vec![0, 1], 0);
        assert!(!eval_formula(&Formula::Falsum, &m, &env).unwrap());
        assert!(eval_formula(&Formula::implies(p1(1), p1(1)), &m, &env).unwrap());
        assert!(!eval_formula(&p1(1), &m, &env).unwrap());
        assert!(eval_formula(&p1(2), &m, &env).unwrap());
        assert!(eval_formula(&Formula::exists(p1(1)), &m, &env).unwrap());
        // exists. P(x2) reads the old first coordinate
        assert!(!eval_formula(&Formula::exists(p1(2)), &m, &env).unwrap());
        assert!(eval_formula(&Formula::subf(p1(1), Subst::Shift), &m, &env).unwrap());
    }

    #[test]
    fn derived_binder_replaces_coordinate() {
        let m = model(3, &[2]);
        for d1 in 0..3 {
            for d2 in 0..3 {
                let env = Assignment::new(vec![d1, d2], 0);
                let f = Formula::atom("P", vec![v(1)]);
                let g = Formula::atom("P", vec![v(2)]);
                assert!(eval_formula(&exists_xi(1, &f).unwrap(), &m, &env).unwrap());
                assert_eq!(eval_formula(&exists_xi(2, &f).unwrap(), &m, &env).unwrap(), d1 == 2);
                assert_eq!(eval_formula(&exists_xi(1, &g).unwrap(), &m, &env).unwrap(), d2 == 2);
            }
        }
    }

    #[test]
    fn signature_mismatch() {
        let m = model(2, &[]);
        let env = Assignment::new(vec![], 0);
        let f = Formula::atom("Q", vec![v(1)]);
        assert!(matches!(eval_formula(&f, &m, &env), Err(Error::UnknownSymbol(_))));
        let bad = Formula::implies(p1(1), Formula::atom("P", vec![v(1), v(2)]));
        assert!(matches!(bad.signature(), Err(Error::Arity { .. })));
        assert!(matches!(eval_formula(&p1(1), &m, &Assignment::new(vec![5], 0)), Err(Error::OutOfCarrier(5))));
    }

    #[test]
    fn validity_examples() {
        assert!(check_validity(&Formula::implies(p1(1), p1(1)), 3).unwrap().is_valid());
        let iii = Formula::implies(p1(1), Formula::subf(Formula::exists(p1(1)), Subst::Shift));
        assert!(check_validity(&iii, 3).unwrap().is_valid());

        let converse = Formula::implies(Formula::subf(Formula::exists(p1(1)), Subst::Shift), p1(1));
        let v = check_validity(&converse, 2).unwrap();
        assert_eq!(v.status, VerdictStatus::Invalid);
        let (m, env) = v.counterexample.clone().unwrap();
        assert_eq!(m.carrier(), 2);
        assert!(!eval_formula(&converse, &m, &env).unwrap());
        // lexicographically least: P = {1}, x1 = 0
        assert_eq!(m, model(2, &[1]));
        assert_eq!(env, Assignment::new(vec![0], 0));
    }

    #[test]
    fn equivalence_examples() {
        let p = p1(1);
        let q = Formula::atom("Q", vec![v(2)]);
        let lhs = Formula::exists(Formula::or(p.clone(), q.clone()));
        let rhs = Formula::or(Formula::exists(p.clone()), Formula::exists(q));
        assert!(check_equivalence(&lhs, &rhs, 3).unwrap().is_valid());
        assert!(check_equivalence(&p, &p, 3).unwrap().is_valid());
        assert!(check_equivalence(&Formula::not(Formula::not(p.clone())), &p, 3).unwrap().is_valid());
        let shifted = Formula::subf(Formula::exists(p.clone()), Subst::Shift);
        assert!(check_equivalence(&exists_xi(1, &p).unwrap(), &shifted, 3).unwrap().is_valid());
        assert!(check_equivalence(&exists_xi(2, &p).unwrap(), &p, 3).unwrap().is_valid());
    }

    #[test]
    fn cap_is_enforced() {
        let f = Formula::atom("R", vec![v(1), v(2), v(3), v(4)]);
        let search = ModelSearch { max_carrier: 3, cap: 1000 };
        assert!(matches!(search.check_validity(&f), Err(Error::EnumerationCap { .. })));
    }

    #[test]
    fn printing() {
        let f = Formula::implies(p1(1), Formula::subf(Formula::exists(Formula::atom("P", vec![v(2)])), Subst::Shift));
        assert_eq!(f.to_string(), "P(x1) -> (exists. P(x2))[^]");
        assert_eq!(Formula::not(p1(1)).to_string(), "~P(x1)");
        let g = Formula::implies(Formula::implies(p1(1), p1(2)), p1(3));
        assert_eq!(g.to_string(), "(P(x1) -> P(x2)) -> P(x3)");
    }
}
