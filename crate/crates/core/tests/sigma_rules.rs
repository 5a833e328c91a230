//! The σ normalizer against a literal one-rule-at-a-time rewriter.

use genoid::random::{rng, TermGen};
use genoid::sigma::Sigma;
use genoid::{var, Subst, Term};

fn idx(i: u32) -> Term {
    var(i).unwrap()
}

fn index_of(t: &Term) -> Option<u32> {
    match t {
        Term::X => Some(1),
        Term::Idx(i) => Some(*i),
        _ => None,
    }
}

/// `Comp(Shift, Comp(Shift, ... Shift))` with `n` shifts, `Id` for zero.
fn shift_count(u: &Subst) -> Option<u32> {
    match u {
        Subst::Id => Some(0),
        Subst::Shift => Some(1),
        Subst::Comp(a, b) if **a == Subst::Shift => shift_count(b).filter(|&n| n >= 1).map(|n| n + 1),
        _ => None,
    }
}

struct Rewriter {
    steps: u64,
}

impl Rewriter {
    /// Children first, then rules at the root until none applies.
    fn term(&mut self, t: &Term) -> Term {
        let t = match t {
            Term::X | Term::Idx(_) => t.clone(),
            Term::App(f, a) => Term::app(self.term(f), self.term(a)),
            Term::Lam(b) => Term::lam(self.term(b)),
            Term::Fun(g, args) => Term::Fun(g.clone(), args.iter().map(|a| self.term(a)).collect()),
            Term::Sub(s, u) => Term::sub(self.term(s), self.subst(u)),
        };
        match self.root_term(&t) {
            Some(next) => {
                self.steps += 1;
                self.term(&next)
            }
            None => t,
        }
    }

    fn root_term(&self, t: &Term) -> Option<Term> {
        let Term::Sub(s, u) = t else { return None };
        let u = &**u;
        if *u == Subst::Id {
            return Some((**s).clone());
        }
        if let Some(i) = index_of(s) {
            return match u {
                Subst::Cons(a, _) if i == 1 => Some((**a).clone()),
                Subst::Cons(_, rest) => Some(Term::sub(idx(i - 1), (**rest).clone())),
                _ => shift_count(u).map(|n| idx(i + n)),
            };
        }
        match &**s {
            Term::Sub(t0, u0) => Some(Term::sub((**t0).clone(), Subst::comp((**u0).clone(), u.clone()))),
            Term::App(f, a) => Some(Term::app(Term::sub((**f).clone(), u.clone()), Term::sub((**a).clone(), u.clone()))),
            Term::Lam(b) => Some(Term::lam(Term::sub(
                (**b).clone(),
                Subst::cons(Term::X, Subst::comp(u.clone(), Subst::Shift)),
            ))),
            Term::Fun(g, args) => Some(Term::Fun(g.clone(), args.iter().map(|a| Term::sub(a.clone(), u.clone())).collect())),
            _ => None,
        }
    }

    fn subst(&mut self, u: &Subst) -> Subst {
        let u = match u {
            Subst::Id | Subst::Shift => u.clone(),
            Subst::Cons(a, w) => Subst::cons(self.term(a), self.subst(w)),
            Subst::Comp(a, b) => Subst::comp(self.subst(a), self.subst(b)),
        };
        match self.root_subst(&u) {
            Some(next) => {
                self.steps += 1;
                self.subst(&next)
            }
            None => u,
        }
    }

    fn root_subst(&self, u: &Subst) -> Option<Subst> {
        let Subst::Comp(a, b) = u else { return None };
        match (&**a, &**b) {
            (Subst::Id, _) => Some((**b).clone()),
            (_, Subst::Id) => Some((**a).clone()),
            (Subst::Comp(p, q), _) => Some(Subst::comp((**p).clone(), Subst::comp((**q).clone(), (**b).clone()))),
            (Subst::Shift, Subst::Cons(_, w)) => Some((**w).clone()),
            (Subst::Cons(t, w), _) => {
                Some(Subst::cons(Term::sub((**t).clone(), (**b).clone()), Subst::comp((**w).clone(), (**b).clone())))
            }
            _ => None,
        }
    }
}

/// `[..., x_n, +^n]` to `[..., +^(n-1)]`, repeatedly.
fn collapse(u: Subst) -> Subst {
    let mut items = Vec::new();
    let mut tail = u;
    while let Subst::Cons(t, w) = tail {
        items.push(*t);
        tail = *w;
    }
    let mut n = shift_count(&tail).expect("normal tail is a shift power");
    while n > 0 && items.last().and_then(index_of) == Some(n) {
        items.pop();
        n -= 1;
    }
    Subst::cons_all(items, Subst::shift_pow(n))
}

#[test]
fn terms_agree_with_small_step_rules() {
    let gen = TermGen::default();
    let sigma = Sigma::default();
    let mut r = rng(11);
    for _ in 0..3_000 {
        let t = gen.term_upto(&mut r, 6);
        let mut small = Rewriter { steps: 0 };
        let expected = small.term(&t);
        assert!(expected.is_sigma_normal(), "{t} -> {expected}");
        assert_eq!(sigma.norm(&t), expected, "{t}");
    }
}

#[test]
fn substitutions_agree_with_small_step_rules() {
    let gen = TermGen::default();
    let sigma = Sigma::default();
    let mut r = rng(12);
    for _ in 0..3_000 {
        let u = gen.subst_upto(&mut r, 6);
        let expected = collapse(Rewriter { steps: 0 }.subst(&u));
        assert_eq!(sigma.norm_subst(&u), expected, "{u}");
    }
}

#[test]
fn small_step_rules_reproduce_the_worked_examples() {
    let mut rw = Rewriter { steps: 0 };
    assert_eq!(rw.term(&Term::sub(idx(2), Subst::cons(idx(5), Subst::Id))), Term::X);
    let body = Term::lam(Term::app(Term::X, idx(2)));
    assert_eq!(
        rw.term(&Term::sub(body, Subst::cons(idx(9), Subst::Id))),
        Term::lam(Term::app(Term::X, idx(10)))
    );
    assert_eq!(collapse(rw.subst(&Subst::comp(Subst::Shift, Subst::minus()))), Subst::Id);
    assert_eq!(collapse(Subst::cons(Term::X, Subst::Shift)), Subst::Id);
    assert!(rw.steps > 0);
}
