//! The σ-rewriting system: pushes explicit closures through terms until
//! only pure de Bruijn terms remain.
//!
//! The rewriter is big-step. Substitutions are first evaluated into a
//! [`NormalSubst`] (a finite list of normal terms over a shift tail), and
//! terms are then evaluated under such an environment. Each step of the
//! evaluation corresponds to one firing of a σ rule:
//!
//! * variable lookup: `x[a, u] -> a`, `x(i+1)[a, u] -> xi[u]`, `xi[+^n] -> x(i+n)`
//! * distribution: `(f a)[u] -> f[u] a[u]`, `g(..)[u] -> g(..[u])`,
//!   `(\. b)[u] -> \. b[x . (u ; ^)]`
//! * composition: `t[u][v] -> t[u ; v]`, `(a . u) ; v -> a[v] . (u ; v)`,
//!   `^ ; (a . u) -> u`, unit and associativity laws
//!
//! Surjective pairing `[x u, + u] = u` is applied once, as a post-pass on
//! the substitution produced at the end.

use crate::term::{v, Subst, Term};

/// Default σ step budget per normalization call.
pub const DEFAULT_SIGMA_FUEL: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Normal,
    FuelExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizeReport<T> {
    pub result: T,
    pub steps: u64,
    pub status: Status,
}

impl<T> NormalizeReport<T> {
    pub fn is_normal(&self) -> bool {
        self.status == Status::Normal
    }

    /// The result, or `None` if the budget ran out.
    pub fn normal(self) -> Option<T> {
        match self.status {
            Status::Normal => Some(self.result),
            Status::FuelExhausted => None,
        }
    }
}

/// Deliberately broken rules, used to check that the law suites notice.
#[doc(hidden)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mutant {
    /// `xi[+^n]` yields `x(i+n+1)`.
    ShiftOffByOne,
    /// `(\. b)[u]` forgets to lift `u` under the binder.
    LamWithoutLift,
}

/// A substitution in normal form: `[t1, ..., tk, +^shift]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalSubst {
    items: Vec<Term>,
    shift: u32,
}

impl NormalSubst {
    pub fn identity() -> Self {
        NormalSubst { items: Vec::new(), shift: 0 }
    }

    pub fn shift(n: u32) -> Self {
        NormalSubst { items: Vec::new(), shift: n }
    }

    /// Builds `[items, +^shift]`; the items must already be σ-normal.
    pub fn from_parts(items: Vec<Term>, shift: u32) -> Self {
        debug_assert!(items.iter().all(Term::is_sigma_normal));
        NormalSubst { items, shift }
    }

    pub fn items(&self) -> &[Term] {
        &self.items
    }

    pub fn shift_amount(&self) -> u32 {
        self.shift
    }

    /// Coordinate `i` (1-based): `xi` acted on by this substitution.
    pub fn coordinate(&self, i: u32) -> Term {
        assert!(i >= 1, "coordinates are 1-based");
        let k = self.items.len() as u32;
        if i <= k {
            self.items[(i - 1) as usize].clone()
        } else {
            v(i - k + self.shift)
        }
    }

    pub fn is_identity(&self) -> bool {
        self.shift as usize == self.items.len()
            && self.items.iter().enumerate().all(|(k, t)| t.as_index() == Some(k as u32 + 1))
    }

    /// Surjective pairing post-pass: `[.., x(n), +^n] = [.., +^(n-1)]`.
    pub fn collapse(mut self) -> Self {
        while self.shift >= 1 {
            match self.items.last() {
                Some(t) if t.as_index() == Some(self.shift) => {
                    self.items.pop();
                    self.shift -= 1;
                }
                _ => break,
            }
        }
        self
    }

    /// The substitution syntax of the collapsed form.
    pub fn to_subst(&self) -> Subst {
        let c = self.clone().collapse();
        Subst::cons_all(c.items, Subst::shift_pow(c.shift))
    }
}

#[derive(Debug)]
pub(crate) struct Exhausted;

type Step<T> = Result<T, Exhausted>;

/// One normalization run with its step counter.
pub(crate) struct Rewriter {
    steps: u64,
    fuel: u64,
    mutant: Option<Mutant>,
}

impl Rewriter {
    fn tick(&mut self) -> Step<()> {
        self.steps += 1;
        if self.steps > self.fuel {
            Err(Exhausted)
        } else {
            Ok(())
        }
    }

    /// `t[env]`, with `None` standing for the identity.
    pub(crate) fn term(&mut self, t: &Term, env: Option<&NormalSubst>) -> Step<Term> {
        match t {
            Term::X => self.lookup(1, env),
            Term::Idx(i) => {
                assert!(*i >= 1, "de Bruijn index 0 is not a term");
                self.lookup(*i, env)
            }
            Term::App(f, a) => {
                if env.is_some() {
                    self.tick()?;
                }
                Ok(Term::app(self.term(f, env)?, self.term(a, env)?))
            }
            Term::Fun(g, args) => {
                if env.is_some() {
                    self.tick()?;
                }
                let args = args.iter().map(|a| self.term(a, env)).collect::<Step<Vec<_>>>()?;
                Ok(Term::Fun(g.clone(), args))
            }
            Term::Lam(b) => match env {
                None => Ok(Term::lam(self.term(b, None)?)),
                Some(e) => {
                    self.tick()?;
                    if self.mutant == Some(Mutant::LamWithoutLift) {
                        return Ok(Term::lam(self.term(b, Some(e))?));
                    }
                    let lifted = self.lift(e)?;
                    Ok(Term::lam(self.term(b, Some(&lifted))?))
                }
            },
            Term::Sub(t, u) => {
                let inner = self.subst(u)?;
                let env = match env {
                    None => inner,
                    Some(e) => {
                        self.tick()?;
                        self.compose(&inner, e)?
                    }
                };
                self.tick()?;
                if env.is_identity() {
                    self.term(t, None)
                } else {
                    self.term(t, Some(&env))
                }
            }
        }
    }

    fn lookup(&mut self, i: u32, env: Option<&NormalSubst>) -> Step<Term> {
        let Some(e) = env else { return Ok(v(i)) };
        self.tick()?;
        let k = e.items.len() as u32;
        if i <= k {
            Ok(e.items[(i - 1) as usize].clone())
        } else {
            let extra = u32::from(self.mutant == Some(Mutant::ShiftOffByOne) && e.shift > 0);
            Ok(v(i - k + e.shift + extra))
        }
    }

    /// `x . (env ; ^)`
    pub(crate) fn lift(&mut self, e: &NormalSubst) -> Step<NormalSubst> {
        let up = NormalSubst::shift(1);
        let mut items = Vec::with_capacity(e.items.len() + 1);
        items.push(Term::X);
        for t in &e.items {
            self.tick()?;
            items.push(self.term(t, Some(&up))?);
        }
        Ok(NormalSubst { items, shift: e.shift + 1 })
    }

    /// `a ; b`
    pub(crate) fn compose(&mut self, a: &NormalSubst, b: &NormalSubst) -> Step<NormalSubst> {
        let mut items = Vec::with_capacity(a.items.len() + b.items.len());
        for t in &a.items {
            self.tick()?;
            items.push(self.term(t, Some(b))?);
        }
        let n = a.shift as usize;
        let shift = if n <= b.items.len() {
            items.extend(b.items[n..].iter().cloned());
            b.shift
        } else {
            b.shift + (n - b.items.len()) as u32
        };
        if n > 0 {
            self.tick()?;
        }
        Ok(NormalSubst { items, shift })
    }

    pub(crate) fn subst(&mut self, u: &Subst) -> Step<NormalSubst> {
        match u {
            Subst::Id => Ok(NormalSubst::identity()),
            Subst::Shift => Ok(NormalSubst::shift(1)),
            Subst::Cons(t, rest) => {
                let head = self.term(t, None)?;
                let mut tail = self.subst(rest)?;
                tail.items.insert(0, head);
                Ok(tail)
            }
            Subst::Comp(a, b) => {
                self.tick()?;
                let a = self.subst(a)?;
                let b = self.subst(b)?;
                self.compose(&a, &b)
            }
        }
    }
}

/// Normalizer configuration: the step budget per call.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sigma {
    pub fuel: u64,
    mutant: Option<Mutant>,
}

impl Default for Sigma {
    fn default() -> Self {
        Sigma { fuel: DEFAULT_SIGMA_FUEL, mutant: None }
    }
}

impl Sigma {
    pub fn with_fuel(fuel: u64) -> Self {
        Sigma { fuel, mutant: None }
    }

    /// No step budget; σ alone terminates.
    pub fn unbounded() -> Self {
        Sigma::with_fuel(u64::MAX)
    }

    #[doc(hidden)]
    pub fn with_mutant(self, mutant: Option<Mutant>) -> Self {
        Sigma { mutant, ..self }
    }

    pub fn mutant(&self) -> Option<Mutant> {
        self.mutant
    }

    pub(crate) fn rewriter(&self) -> Rewriter {
        Rewriter { steps: 0, fuel: self.fuel, mutant: self.mutant }
    }

    pub fn normalize_term(&self, t: &Term) -> NormalizeReport<Term> {
        let mut rw = self.rewriter();
        match rw.term(t, None) {
            Ok(result) => NormalizeReport { result, steps: rw.steps, status: Status::Normal },
            Err(Exhausted) => NormalizeReport { result: t.clone(), steps: rw.steps, status: Status::FuelExhausted },
        }
    }

    pub fn evaluate_subst(&self, u: &Subst) -> NormalizeReport<NormalSubst> {
        let mut rw = self.rewriter();
        match rw.subst(u) {
            Ok(s) => NormalizeReport { result: s.collapse(), steps: rw.steps, status: Status::Normal },
            Err(Exhausted) => NormalizeReport {
                result: NormalSubst::identity(),
                steps: rw.steps,
                status: Status::FuelExhausted,
            },
        }
    }

    pub fn normalize_subst(&self, u: &Subst) -> NormalizeReport<Subst> {
        let r = self.evaluate_subst(u);
        match r.status {
            Status::Normal => NormalizeReport { result: r.result.to_subst(), steps: r.steps, status: Status::Normal },
            Status::FuelExhausted => NormalizeReport { result: u.clone(), steps: r.steps, status: r.status },
        }
    }

    /// σ-normal form, panicking if the budget runs out.
    pub fn norm(&self, t: &Term) -> Term {
        let r = self.normalize_term(t);
        assert!(r.is_normal(), "σ-normalization exhausted {} steps", self.fuel);
        r.result
    }

    pub fn norm_subst(&self, u: &Subst) -> Subst {
        let r = self.normalize_subst(u);
        assert!(r.is_normal(), "σ-normalization exhausted {} steps", self.fuel);
        r.result
    }

    pub fn finite_rank(&self, t: &Term) -> u32 {
        Sigma::unbounded().with_mutant(self.mutant).norm(t).max_free_index()
    }
}

pub fn sigma_normalize(t: &Term) -> NormalizeReport<Term> {
    Sigma::default().normalize_term(t)
}

pub fn subst_normalize(u: &Subst) -> NormalizeReport<Subst> {
    Sigma::default().normalize_subst(u)
}

/// The least `n` such that `t[u]` only depends on the first `n`
/// coordinates of `u`: the largest free index of the normal form.
pub fn finite_rank(t: &Term) -> u32 {
    Sigma::default().finite_rank(t)
}

/// `δu = [x, u+]`.
pub fn delta(u: Subst) -> Subst {
    Subst::cons(Term::X, Subst::comp(u, Subst::Shift))
}

/// Kleisli product `u * v = u[x1, v]`.
pub fn kleisli_star(u: Subst, w: Subst) -> Subst {
    Subst::comp(u, Subst::cons(Term::X, w))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn norm(t: &Term) -> Term {
        let r = sigma_normalize(t);
        assert!(r.is_normal());
        r.result
    }

    fn snorm(u: &Subst) -> Subst {
        let r = subst_normalize(u);
        assert!(r.is_normal());
        r.result
    }

    #[test]
    fn shifted_generator_is_x2() {
        assert_eq!(norm(&Term::sub(Term::X, Subst::Shift)), Term::Idx(2));
        assert_eq!(norm(&Term::sub(Term::X, Subst::shift_pow(4))), Term::Idx(5));
        assert_eq!(norm(&Term::Idx(1)), Term::X);
    }

    #[test]
    fn projection_out_of_cons_list() {
        let items: Vec<Term> = (11..=15).map(v).collect();
        let u = Subst::cons_all(items, Subst::Id);
        assert_eq!(norm(&Term::sub(v(5), u.clone())), v(15));
        assert_eq!(norm(&Term::sub(Term::X, u)), v(11));
    }

    #[test]
    fn g1_instance() {
        assert_eq!(norm(&Term::sub(Term::X, Subst::cons(v(2), Subst::Id))), v(2));
    }

    #[test]
    fn index_lookup_drops_head() {
        assert_eq!(norm(&Term::sub(v(2), Subst::cons(v(5), Subst::Id))), Term::X);
    }

    #[test]
    fn lambda_lifting() {
        let t = Term::sub(Term::lam(Term::app(v(1), v(2))), Subst::cons(v(9), Subst::Id));
        assert_eq!(norm(&t), Term::lam(Term::app(v(1), v(10))));
    }

    #[test]
    fn identity_action() {
        let t = Term::lam(Term::app(v(3), Term::fun("f", vec![v(1), v(2)])));
        assert_eq!(norm(&Term::sub(t.clone(), Subst::Id)), t);
    }

    #[test]
    fn subst_examples() {
        assert_eq!(snorm(&Subst::comp(Subst::Shift, Subst::minus())), Subst::Id);
        assert_eq!(snorm(&Subst::comp(Subst::Id, Subst::Shift)), Subst::Shift);
        assert_eq!(snorm(&Subst::cons(Term::X, Subst::Shift)), Subst::Id);
        assert_eq!(snorm(&Subst::cons(v(2), Subst::shift_pow(2))), Subst::Shift);
        let u = Subst::cons(v(3), Subst::Shift);
        assert_eq!(snorm(&u), u);
    }

    #[test]
    fn delta_and_monad() {
        assert_eq!(snorm(&delta(Subst::Id)), Subst::Id);
        assert_eq!(delta(Subst::Shift), Subst::cons(Term::X, Subst::comp(Subst::Shift, Subst::Shift)));
        let m = Subst::minus();
        let lhs = snorm(&Subst::comp(m.clone(), m.clone()));
        let rhs = snorm(&Subst::comp(delta(m.clone()), m));
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, Subst::cons(Term::X, Subst::cons(Term::X, Subst::Id)));
        assert_eq!(snorm(&Subst::comp(delta(Subst::Shift), Subst::minus())), Subst::Id);
    }

    #[test]
    fn kleisli_examples() {
        let w = Subst::cons(v(4), Subst::shift_pow(2));
        assert_eq!(snorm(&kleisli_star(Subst::Id, w.clone())), snorm(&Subst::cons(Term::X, w.clone())));
        assert_eq!(snorm(&kleisli_star(Subst::Shift, w.clone())), snorm(&w));
    }

    #[test]
    fn kleisli_with_unit_fixes_first_coordinate() {
        // u * e = u[x1, e]: brute-force application to x1..x5.
        let u = Subst::cons(v(3), Subst::cons(Term::lam(v(2)), Subst::Shift));
        let star = snorm(&kleisli_star(u.clone(), Subst::Id));
        assert_eq!(star, snorm(&Subst::comp(u.clone(), Subst::minus())));
        let expected = [v(2), Term::lam(v(2)), Term::X, v(2), v(3)];
        for (i, want) in (1..=5).zip(expected) {
            assert_eq!(norm(&Term::sub(v(i), star.clone())), want, "coordinate {i}");
        }
    }

    #[test]
    fn ranks() {
        assert_eq!(finite_rank(&v(3)), 3);
        assert_eq!(finite_rank(&Term::lam(Term::X)), 0);
        assert_eq!(finite_rank(&Term::lam(v(4))), 3);
        assert_eq!(finite_rank(&Term::sub(v(3), Subst::cons(Term::lam(Term::X), Subst::Id))), 2);
    }

    #[test]
    fn exhaustion_is_reported() {
        let t = Term::sub(Term::lam(Term::app(v(1), v(2))), Subst::cons(v(9), Subst::Id));
        let r = Sigma::with_fuel(1).normalize_term(&t);
        assert_eq!(r.status, Status::FuelExhausted);
        assert_eq!(r.result, t);
        assert!(r.steps > 1);
    }

    #[test]
    fn collapse_is_total() {
        let s = NormalSubst::from_parts(vec![Term::X, v(2), v(3)], 3).collapse();
        assert!(s.items().is_empty());
        assert_eq!(s.shift_amount(), 0);
        assert!(NormalSubst::from_parts(vec![Term::X, v(2), v(3)], 3).is_identity());
    }
}
