//! Seeded random generators for the property suites.
//!
//! Constructors are chosen uniformly among those allowed at the current
//! depth; at depth zero only leaves are produced. Variable indices are drawn
//! uniformly from `1..=max_index` (default 6).

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::fol::Formula;
use crate::term::{v, Subst, Term};

/// Seed used by every suite unless overridden.
pub const DEFAULT_SEED: u64 = 0x6765_6e6f_6964;

pub type SuiteRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SuiteRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of generated terms.
#[derive(Clone, Debug)]
pub struct TermGen {
    pub max_index: u32,
    pub app: bool,
    pub lam: bool,
    pub sub: bool,
    /// Function symbols with arities; empty disables `Fun` nodes.
    pub functions: Vec<(String, usize)>,
}

impl Default for TermGen {
    fn default() -> Self {
        TermGen {
            max_index: 6,
            app: true,
            lam: true,
            sub: true,
            functions: vec![("f".into(), 1), ("g".into(), 2)],
        }
    }
}

#[derive(Clone, Copy)]
enum TermNode {
    Var,
    App,
    Lam,
    Fun,
    Sub,
}

impl TermGen {
    /// Pure λ-terms: variables, application, abstraction.
    pub fn pure_lambda() -> Self {
        TermGen { sub: false, functions: Vec::new(), ..TermGen::default() }
    }

    /// First-order terms over the given function symbols.
    pub fn first_order(functions: Vec<(String, usize)>, max_index: u32) -> Self {
        TermGen { max_index, app: false, lam: false, sub: false, functions }
    }

    pub fn index<R: Rng>(&self, rng: &mut R) -> Term {
        v(rng.gen_range(1..=self.max_index))
    }

    pub fn term<R: Rng>(&self, rng: &mut R, depth: u32) -> Term {
        let mut choices = vec![TermNode::Var];
        let constants: Vec<&(String, usize)> = self.functions.iter().filter(|(_, a)| *a == 0).collect();
        if depth > 0 {
            if self.app {
                choices.push(TermNode::App);
            }
            if self.lam {
                choices.push(TermNode::Lam);
            }
            if !self.functions.is_empty() {
                choices.push(TermNode::Fun);
            }
            if self.sub {
                choices.push(TermNode::Sub);
            }
        } else if !constants.is_empty() {
            choices.push(TermNode::Fun);
        }
        match choices[rng.gen_range(0..choices.len())] {
            TermNode::Var => self.index(rng),
            TermNode::App => Term::app(self.term(rng, depth - 1), self.term(rng, depth - 1)),
            TermNode::Lam => Term::lam(self.term(rng, depth - 1)),
            TermNode::Fun => {
                let pool: Vec<&(String, usize)> =
                    if depth == 0 { constants } else { self.functions.iter().collect() };
                let (name, arity) = pool[rng.gen_range(0..pool.len())];
                let args = (0..*arity).map(|_| self.term(rng, depth.saturating_sub(1))).collect();
                Term::Fun(name.clone(), args)
            }
            TermNode::Sub => Term::sub(self.term(rng, depth - 1), self.subst(rng, depth - 1)),
        }
    }

    pub fn subst<R: Rng>(&self, rng: &mut R, depth: u32) -> Subst {
        let pick = if depth == 0 { rng.gen_range(0..2) } else { rng.gen_range(0..4) };
        match pick {
            0 => Subst::Id,
            1 => Subst::Shift,
            2 => Subst::cons(self.term(rng, depth - 1), self.subst(rng, depth - 1)),
            _ => Subst::comp(self.subst(rng, depth - 1), self.subst(rng, depth - 1)),
        }
    }

    /// Random depth in `0..=max_depth`, then a term of that depth bound.
    pub fn term_upto<R: Rng>(&self, rng: &mut R, max_depth: u32) -> Term {
        let d = rng.gen_range(0..=max_depth);
        self.term(rng, d)
    }

    pub fn subst_upto<R: Rng>(&self, rng: &mut R, max_depth: u32) -> Subst {
        let d = rng.gen_range(0..=max_depth);
        self.subst(rng, d)
    }

    /// A pure λ-term with at most `max_size` nodes.
    pub fn sized_lambda<R: Rng>(&self, rng: &mut R, max_size: usize) -> Term {
        let budget = rng.gen_range(1..=max_size);
        self.sized(rng, budget)
    }

    fn sized<R: Rng>(&self, rng: &mut R, budget: usize) -> Term {
        if budget <= 1 {
            return self.index(rng);
        }
        if budget == 2 || rng.gen_bool(0.3) {
            return Term::lam(self.sized(rng, budget - 1));
        }
        let left = rng.gen_range(1..budget - 1);
        Term::app(self.sized(rng, left), self.sized(rng, budget - 1 - left))
    }
}

/// Shape of generated formulas.
#[derive(Clone, Debug)]
pub struct FormulaGen {
    pub predicates: Vec<(String, usize)>,
    pub terms: TermGen,
    pub term_depth: u32,
    /// Include explicit substitution nodes.
    pub subst: bool,
}

impl FormulaGen {
    pub fn new(predicates: Vec<(String, usize)>, terms: TermGen) -> Self {
        FormulaGen { predicates, terms, term_depth: 1, subst: true }
    }

    pub fn formula<R: Rng>(&self, rng: &mut R, depth: u32) -> Formula {
        let pick = if depth == 0 { rng.gen_range(0..2) } else { rng.gen_range(0..if self.subst { 5 } else { 4 }) };
        match pick {
            0 => {
                let (name, arity) = &self.predicates[rng.gen_range(0..self.predicates.len())];
                let args = (0..*arity).map(|_| self.terms.term_upto(rng, self.term_depth)).collect();
                Formula::Atom(name.clone(), args)
            }
            1 => {
                if depth == 0 || rng.gen_bool(0.5) {
                    let (name, arity) = &self.predicates[rng.gen_range(0..self.predicates.len())];
                    let args = (0..*arity).map(|_| self.terms.index(rng)).collect();
                    Formula::Atom(name.clone(), args)
                } else {
                    Formula::Falsum
                }
            }
            2 => Formula::implies(self.formula(rng, depth - 1), self.formula(rng, depth - 1)),
            3 => Formula::exists(self.formula(rng, depth - 1)),
            _ => {
                let plain = TermGen { sub: false, ..self.terms.clone() };
                Formula::subf(self.formula(rng, depth - 1), plain.subst(rng, 2))
            }
        }
    }

    pub fn formula_upto<R: Rng>(&self, rng: &mut R, max_depth: u32) -> Formula {
        let d = rng.gen_range(0..=max_depth);
        self.formula(rng, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let g = TermGen::default();
        let a = g.term(&mut rng(7), 6);
        let b = g.term(&mut rng(7), 6);
        assert_eq!(a, b);
    }

    #[test]
    fn sized_lambda_respects_bound() {
        let g = TermGen::pure_lambda();
        let mut r = rng(1);
        for _ in 0..200 {
            let t = g.sized_lambda(&mut r, 30);
            assert!(t.size() <= 30);
            assert!(t.is_sigma_normal());
        }
    }

    #[test]
    fn first_order_has_no_binders() {
        let g = TermGen::first_order(vec![("f".into(), 2), ("c".into(), 0)], 3);
        let mut r = rng(3);
        for _ in 0..100 {
            let t = g.term(&mut r, 4);
            assert!(!t.to_string().contains('\\'));
            assert!(t.is_sigma_normal());
        }
    }
}
