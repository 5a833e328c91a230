//! β/η normalization for extensive lambda genoids.
//!
//! Reduction is normal order (leftmost-outermost). After every β step the
//! contractum `a[b . id]` is σ-normalized, so the engine always works on
//! pure de Bruijn terms between steps.

use crate::error::Error;
use crate::sigma::{NormalizeReport, Sigma, Status};
use crate::term::{v, Subst, Term};

pub const DEFAULT_LAMBDA_FUEL: u64 = 100_000;

/// Default node limit; a reduct past it ends reduction as exhaustion.
pub const DEFAULT_MAX_TERM_SIZE: usize = 1_000_000;

/// Which laws are oriented as reductions, and the β/η step budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LambdaFlags {
    pub beta: bool,
    pub eta: bool,
    pub fuel: u64,
}

impl Default for LambdaFlags {
    fn default() -> Self {
        LambdaFlags { beta: true, eta: true, fuel: DEFAULT_LAMBDA_FUEL }
    }
}

impl LambdaFlags {
    pub fn beta_only(fuel: u64) -> Self {
        LambdaFlags { beta: true, eta: false, fuel }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureResult {
    pub closed: Term,
    pub rank: u32,
}

/// A reducer pairing lambda flags with the σ normalizer it uses.
///
/// Fuel bounds the number of contractions but not the size of the term, so
/// reduction also stops, reporting exhaustion, once a reduct grows past
/// `max_size` nodes.
#[derive(Clone, Copy, Debug)]
pub struct Lambda {
    pub flags: LambdaFlags,
    pub sigma: Sigma,
    pub max_size: usize,
}

impl Default for Lambda {
    fn default() -> Self {
        Lambda::new(LambdaFlags::default())
    }
}

impl Lambda {
    pub fn new(flags: LambdaFlags) -> Self {
        Lambda::with_sigma(flags, Sigma::default())
    }

    pub fn with_sigma(flags: LambdaFlags, sigma: Sigma) -> Self {
        Lambda { flags, sigma, max_size: DEFAULT_MAX_TERM_SIZE }
    }

    pub fn with_max_size(self, max_size: usize) -> Self {
        Lambda { max_size, ..self }
    }

    /// Normal-order βη reduction. `steps` counts β and η contractions.
    pub fn normalize(&self, t: &Term) -> NormalizeReport<Term> {
        let first = self.sigma.normalize_term(t);
        if !first.is_normal() {
            return NormalizeReport { result: t.clone(), steps: 0, status: Status::FuelExhausted };
        }
        let mut cur = first.result;
        let mut steps = 0;
        loop {
            if !self.flags.beta && !self.flags.eta {
                return NormalizeReport { result: cur, steps, status: Status::Normal };
            }
            match self.step(&cur) {
                StepOutcome::Normal => return NormalizeReport { result: cur, steps, status: Status::Normal },
                StepOutcome::SigmaExhausted => {
                    return NormalizeReport { result: cur, steps, status: Status::FuelExhausted }
                }
                StepOutcome::Reduced(next) => {
                    if steps >= self.flags.fuel || next.size() > self.max_size {
                        return NormalizeReport { result: cur, steps, status: Status::FuelExhausted };
                    }
                    steps += 1;
                    cur = next;
                }
            }
        }
    }

    /// One leftmost-outermost contraction on a σ-normal term.
    fn step(&self, t: &Term) -> StepOutcome {
        match t {
            Term::X | Term::Idx(_) => StepOutcome::Normal,
            Term::App(f, a) => {
                if self.flags.beta {
                    if let Term::Lam(body) = &**f {
                        let contractum = Term::sub((**body).clone(), Subst::cons((**a).clone(), Subst::Id));
                        return match self.sigma.normalize_term(&contractum).normal() {
                            Some(r) => StepOutcome::Reduced(r),
                            None => StepOutcome::SigmaExhausted,
                        };
                    }
                }
                match self.step(f) {
                    StepOutcome::Reduced(f2) => StepOutcome::Reduced(Term::App(Box::new(f2), a.clone())),
                    StepOutcome::Normal => self.step(a).map(|a2| Term::App(f.clone(), Box::new(a2))),
                    other => other,
                }
            }
            Term::Lam(body) => {
                if self.flags.eta {
                    if let Some(contractum) = self.eta_contract(body) {
                        return contractum;
                    }
                }
                self.step(body).map(Term::lam)
            }
            Term::Fun(g, args) => {
                for (k, arg) in args.iter().enumerate() {
                    match self.step(arg) {
                        StepOutcome::Normal => continue,
                        StepOutcome::Reduced(r) => {
                            let mut args = args.clone();
                            args[k] = r;
                            return StepOutcome::Reduced(Term::Fun(g.clone(), args));
                        }
                        other => return other,
                    }
                }
                StepOutcome::Normal
            }
            Term::Sub(..) => unreachable!("reduction runs on σ-normal terms"),
        }
    }

    /// `\. (a[^] x) -> a`: the body must be an application to `x1` whose
    /// head does not mention `x1`.
    fn eta_contract(&self, body: &Term) -> Option<StepOutcome> {
        let Term::App(head, arg) = body else { return None };
        if **arg != Term::X || head.occurs_free(1) {
            return None;
        }
        // head = a[^]; recover a as head[x . id], which is exact since x1 is absent.
        let unshift = Term::sub((**head).clone(), Subst::minus());
        Some(match self.sigma.normalize_term(&unshift).normal() {
            Some(r) => StepOutcome::Reduced(r),
            None => StepOutcome::SigmaExhausted,
        })
    }

    /// `t = c xn ... x1` with `c` closed and `n` the rank of `t`.
    pub fn closure_of(&self, t: &Term) -> ClosureResult {
        let nf = self.sigma.norm(t);
        let rank = nf.max_free_index();
        ClosureResult { closed: Term::lam_n(rank, nf), rank }
    }
}

enum StepOutcome {
    Normal,
    Reduced(Term),
    SigmaExhausted,
}

impl StepOutcome {
    fn map(self, f: impl FnOnce(Term) -> Term) -> StepOutcome {
        match self {
            StepOutcome::Reduced(t) => StepOutcome::Reduced(f(t)),
            other => other,
        }
    }
}

pub fn beta_eta_normalize(t: &Term, flags: LambdaFlags) -> NormalizeReport<Term> {
    Lambda::new(flags).normalize(t)
}

/// The closed combinators `I`, `K` and `S`.
pub fn combinator(name: &str) -> Result<Term, Error> {
    match name {
        "I" => Ok(Term::lam(Term::X)),
        "K" => Ok(Term::lam(Term::lam(v(2)))),
        "S" => Ok(Term::lam_n(
            3,
            Term::app(Term::app(v(3), v(1)), Term::app(v(2), v(1))),
        )),
        other => Err(Error::UnknownCombinator(other.to_string())),
    }
}

/// The coordinate permutation `[x2, ..., xi, x1, +^(i+1)]` that turns the
/// nameless binder into a binder of `xi`.
pub fn binder_permutation(i: u32) -> Result<Subst, Error> {
    if i == 0 {
        return Err(Error::ZeroIndex);
    }
    let mut items: Vec<Term> = (2..=i).map(v).collect();
    items.push(Term::X);
    Ok(Subst::cons_all(items, Subst::shift_pow(i + 1)))
}

/// Classical `λxi. t`.
pub fn classic_lambda(i: u32, t: Term) -> Result<Term, Error> {
    Ok(Term::lam(Term::sub(t, binder_permutation(i)?)))
}

pub fn closure_of(t: &Term) -> ClosureResult {
    Lambda::default().closure_of(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigma::{finite_rank, sigma_normalize};

    fn nf(t: &Term) -> Term {
        let r = beta_eta_normalize(t, LambdaFlags::default());
        assert!(r.is_normal(), "diverged: {t}");
        r.result
    }

    fn comb(n: &str) -> Term {
        combinator(n).unwrap()
    }

    #[test]
    fn k_selects_first() {
        let t = Term::apply_all(comb("K"), [v(1), v(2)]);
        assert_eq!(nf(&t), v(1));
    }

    #[test]
    fn i_is_identity() {
        assert_eq!(nf(&Term::app(comb("I"), v(5))), v(5));
    }

    #[test]
    fn eta_law() {
        let t = Term::lam(Term::app(Term::sub(v(1), Subst::Shift), Term::X));
        assert_eq!(nf(&t), v(1));
        let no_eta = beta_eta_normalize(&t, LambdaFlags::beta_only(100));
        assert_eq!(no_eta.result, Term::lam(Term::app(v(2), Term::X)));
    }

    #[test]
    fn eta_needs_fresh_variable() {
        // \. x1 x1 is not an eta redex.
        let t = Term::lam(Term::app(Term::X, Term::X));
        assert_eq!(nf(&t), t);
    }

    #[test]
    fn skk_is_identity() {
        let t = Term::apply_all(comb("S"), [comb("K"), comb("K"), v(1)]);
        assert_eq!(nf(&t), v(1));
    }

    #[test]
    fn combinator_shapes() {
        assert_eq!(comb("I"), Term::lam(Term::X));
        assert_eq!(comb("K"), Term::lam(Term::lam(Term::Idx(2))));
        assert_eq!(finite_rank(&comb("S")), 0);
        assert!(matches!(combinator("W"), Err(Error::UnknownCombinator(_))));
    }

    #[test]
    fn classic_binders() {
        let i = classic_lambda(1, v(1)).unwrap();
        assert_eq!(nf(&i), comb("I"));
        let k = classic_lambda(1, classic_lambda(2, v(1)).unwrap()).unwrap();
        assert_eq!(nf(&k), comb("K"));
        assert_eq!(binder_permutation(1).unwrap(), Subst::cons(Term::X, Subst::shift_pow(2)));
        assert!(classic_lambda(0, v(1)).is_err());
    }

    #[test]
    fn classic_binder_of_x1_is_shifted_binder() {
        let t = Term::app(v(1), Term::app(v(3), v(2)));
        let lhs = sigma_normalize(&classic_lambda(1, t.clone()).unwrap()).result;
        let rhs = sigma_normalize(&Term::sub(Term::lam(t.clone()), Subst::Shift)).result;
        assert_eq!(lhs, rhs);
        // and the binder is recovered by −
        let back = sigma_normalize(&Term::sub(lhs, Subst::minus())).result;
        assert_eq!(back, Term::lam(t));
    }

    #[test]
    fn omega_exhausts() {
        let w = Term::lam(Term::app(Term::X, Term::X));
        let r = beta_eta_normalize(&Term::app(w.clone(), w), LambdaFlags::beta_only(50));
        assert_eq!(r.status, Status::FuelExhausted);
        assert_eq!(r.steps, 50);
    }

    #[test]
    fn closures() {
        let c = closure_of(&v(1));
        assert_eq!(c, ClosureResult { closed: Term::lam(Term::X), rank: 1 });
        let k = comb("K");
        assert_eq!(closure_of(&k), ClosureResult { closed: k, rank: 0 });

        let t = Term::app(v(1), v(2));
        let c = closure_of(&t);
        assert_eq!(c.rank, 2);
        assert_eq!(c.closed, Term::lam(Term::lam(Term::app(Term::X, v(2)))));
        assert_eq!(nf(&Term::apply_all(c.closed, [v(2), v(1)])), t);
    }

    #[test]
    fn beta_off_only_sigma() {
        let t = Term::app(comb("I"), v(3));
        let r = beta_eta_normalize(&t, LambdaFlags { beta: false, eta: true, fuel: 10 });
        assert_eq!(r.result, t);
        assert_eq!(r.steps, 0);
    }

    #[test]
    fn growth_is_cut_off_by_size() {
        let w3 = Term::lam(Term::apply_all(Term::X, [Term::X, Term::X]));
        let t = Term::app(w3.clone(), w3);
        let r = Lambda::new(LambdaFlags::beta_only(1_000)).with_max_size(60).normalize(&t);
        assert_eq!(r.status, Status::FuelExhausted);
        assert!(r.steps < 1_000 && r.result.size() <= 60);
    }
}
