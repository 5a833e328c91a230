//! Two-sorted syntax: terms (sort A) and substitutions (sort G).
//!
//! Terms use de Bruijn indices. `X` is the distinguished generator and is
//! the same variable as `Idx(1)`; the normalizer always emits `X` for the
//! first coordinate, so `Idx(1)` never appears in normal forms.
//!
//! Substitutions compose in diagrammatic order: `Comp(u, v)` applies `u`
//! first and `v` second, so that `t[u][v] = t[u ; v]`.

use std::fmt;

use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    /// The generator `x = x1`.
    X,
    /// De Bruijn index `xi`, `i >= 1`.
    Idx(u32),
    App(Box<Term>, Box<Term>),
    Lam(Box<Term>),
    /// Function symbol applied to arguments (first-order operations).
    Fun(String, Vec<Term>),
    /// Explicit closure `t[u]`, the right action of a substitution.
    Sub(Box<Term>, Box<Subst>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subst {
    /// The monoid unit `e`.
    Id,
    /// The shift `+`.
    Shift,
    /// The pair `[a, u]`.
    Cons(Box<Term>, Box<Subst>),
    /// `Comp(u, v)`: `u` then `v`.
    Comp(Box<Subst>, Box<Subst>),
}

/// `xi` as a term. `var(1)` is `X`.
pub fn var(i: u32) -> Result<Term, Error> {
    match i {
        0 => Err(Error::ZeroIndex),
        1 => Ok(Term::X),
        i => Ok(Term::Idx(i)),
    }
}

/// Infallible variant of [`var`] for indices known to be positive.
pub(crate) fn v(i: u32) -> Term {
    debug_assert!(i >= 1);
    if i == 1 {
        Term::X
    } else {
        Term::Idx(i)
    }
}

impl Term {
    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn lam(body: Term) -> Term {
        Term::Lam(Box::new(body))
    }

    pub fn fun(sym: impl Into<String>, args: Vec<Term>) -> Term {
        Term::Fun(sym.into(), args)
    }

    pub fn sub(t: Term, u: Subst) -> Term {
        Term::Sub(Box::new(t), Box::new(u))
    }

    /// Left-nested application `f a1 a2 ... an`.
    pub fn apply_all(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    /// `n`-fold abstraction.
    pub fn lam_n(n: u32, body: Term) -> Term {
        (0..n).fold(body, |b, _| Term::lam(b))
    }

    /// The index this term denotes if it is a variable.
    pub fn as_index(&self) -> Option<u32> {
        match self {
            Term::X => Some(1),
            Term::Idx(i) => Some(*i),
            _ => None,
        }
    }

    /// True if no explicit closure occurs anywhere in the term.
    pub fn is_sigma_normal(&self) -> bool {
        match self {
            Term::X | Term::Idx(_) => true,
            Term::App(f, a) => f.is_sigma_normal() && a.is_sigma_normal(),
            Term::Lam(b) => b.is_sigma_normal(),
            Term::Fun(_, args) => args.iter().all(Term::is_sigma_normal),
            Term::Sub(..) => false,
        }
    }

    /// Number of constructor nodes, counting substitution nodes inside closures.
    pub fn size(&self) -> usize {
        match self {
            Term::X | Term::Idx(_) => 1,
            Term::App(f, a) => 1 + f.size() + a.size(),
            Term::Lam(b) => 1 + b.size(),
            Term::Fun(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            Term::Sub(t, u) => 1 + t.size() + u.size(),
        }
    }

    /// Whether de Bruijn index `i` occurs free in a closure-free term.
    pub fn occurs_free(&self, i: u32) -> bool {
        match self {
            Term::X => i == 1,
            Term::Idx(j) => *j == i,
            Term::App(f, a) => f.occurs_free(i) || a.occurs_free(i),
            Term::Lam(b) => b.occurs_free(i + 1),
            Term::Fun(_, args) => args.iter().any(|a| a.occurs_free(i)),
            // Conservative: callers pass normal forms.
            Term::Sub(..) => true,
        }
    }

    /// Largest free index of a closure-free term, 0 if closed.
    pub(crate) fn max_free_index(&self) -> u32 {
        match self {
            Term::X => 1,
            Term::Idx(i) => *i,
            Term::App(f, a) => f.max_free_index().max(a.max_free_index()),
            Term::Lam(b) => b.max_free_index().saturating_sub(1),
            Term::Fun(_, args) => args.iter().map(Term::max_free_index).max().unwrap_or(0),
            Term::Sub(..) => panic!("max_free_index on a term with an explicit closure"),
        }
    }
}

impl Subst {
    pub fn cons(t: Term, u: Subst) -> Subst {
        Subst::Cons(Box::new(t), Box::new(u))
    }

    pub fn comp(u: Subst, v: Subst) -> Subst {
        Subst::Comp(Box::new(u), Box::new(v))
    }

    /// `+^n` as a right-nested chain of shifts; `+^0 = Id`.
    pub fn shift_pow(n: u32) -> Subst {
        match n {
            0 => Subst::Id,
            1 => Subst::Shift,
            n => Subst::comp(Subst::Shift, Subst::shift_pow(n - 1)),
        }
    }

    /// `[t1, ..., tk, tail]`.
    pub fn cons_all(items: impl IntoIterator<Item = Term>, tail: Subst) -> Subst {
        let items: Vec<Term> = items.into_iter().collect();
        items.into_iter().rev().fold(tail, |acc, t| Subst::cons(t, acc))
    }

    /// `− = [x, e]`.
    pub fn minus() -> Subst {
        Subst::cons(Term::X, Subst::Id)
    }

    pub fn size(&self) -> usize {
        match self {
            Subst::Id | Subst::Shift => 1,
            Subst::Cons(t, u) => 1 + t.size() + u.size(),
            Subst::Comp(u, w) => 1 + u.size() + w.size(),
        }
    }

    /// If this substitution is literally `+^n` in normal shape, returns `n`.
    pub fn as_shift_pow(&self) -> Option<u32> {
        match self {
            Subst::Id => Some(0),
            Subst::Shift => Some(1),
            Subst::Comp(a, b) if **a == Subst::Shift => b.as_shift_pow().filter(|&n| n >= 1).map(|n| n + 1),
            _ => None,
        }
    }
}

// Printing. Precedence levels: 0 = lambda/body, 1 = application, 2 = atom
// (variables, function symbols, parenthesized, postfix closures).

impl Term {
    fn write_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        match self {
            Term::X => write!(f, "x1"),
            Term::Idx(i) => write!(f, "x{i}"),
            Term::Fun(sym, args) => {
                write!(f, "{sym}(")?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    a.write_prec(f, 0)?;
                }
                write!(f, ")")
            }
            Term::Sub(t, u) => {
                t.write_prec(f, 2)?;
                write!(f, "[{u}]")
            }
            Term::App(g, a) => {
                if prec > 1 {
                    write!(f, "(")?;
                }
                g.write_prec(f, 1)?;
                write!(f, " ")?;
                a.write_prec(f, 2)?;
                if prec > 1 {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Term::Lam(b) => {
                if prec > 0 {
                    write!(f, "(")?;
                }
                write!(f, "\\. ")?;
                b.write_prec(f, 0)?;
                if prec > 0 {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0)
    }
}

impl Subst {
    // 0 = composition, 1 = cons chain, 2 = atom.
    fn write_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        match self {
            Subst::Id => write!(f, "id"),
            Subst::Shift => write!(f, "^"),
            Subst::Cons(t, u) => {
                if prec > 1 {
                    write!(f, "(")?;
                }
                // A lambda head is fine here: its body stops at the dot.
                write!(f, "{t} . ")?;
                u.write_prec(f, 1)?;
                if prec > 1 {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Subst::Comp(u, w) => {
                if prec > 0 {
                    write!(f, "(")?;
                }
                u.write_prec(f, 1)?;
                write!(f, " ; ")?;
                w.write_prec(f, 0)?;
                if prec > 0 {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0)
    }
}
