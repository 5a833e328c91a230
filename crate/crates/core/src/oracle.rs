//! Named lambda calculus with textbook capture-avoiding substitution.
//!
//! This module shares nothing with the explicit-substitution engine except
//! the final bridge to de Bruijn terms, so it can serve as a differential
//! oracle for β-normalization. Free variables are restricted to the names
//! `x1`, `x2`, ... which map to the de Bruijn indices of the same number.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{parse_err, Error};
use crate::term::{v, Term};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NamedTerm {
    Var(String),
    Lam(String, Box<NamedTerm>),
    App(Box<NamedTerm>, Box<NamedTerm>),
}

impl NamedTerm {
    pub fn var(name: impl Into<String>) -> Self {
        NamedTerm::Var(name.into())
    }

    pub fn lam(binder: impl Into<String>, body: NamedTerm) -> Self {
        NamedTerm::Lam(binder.into(), Box::new(body))
    }

    pub fn app(f: NamedTerm, a: NamedTerm) -> Self {
        NamedTerm::App(Box::new(f), Box::new(a))
    }

    pub fn size(&self) -> usize {
        match self {
            NamedTerm::Var(_) => 1,
            NamedTerm::Lam(_, b) => 1 + b.size(),
            NamedTerm::App(f, a) => 1 + f.size() + a.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        match self {
            NamedTerm::Var(x) => {
                if !bound.contains(&x.as_str()) {
                    out.insert(x.clone());
                }
            }
            NamedTerm::Lam(x, b) => {
                bound.push(x);
                b.collect_free(bound, out);
                bound.pop();
            }
            NamedTerm::App(f, a) => {
                f.collect_free(bound, out);
                a.collect_free(bound, out);
            }
        }
    }

    fn all_names(&self, out: &mut BTreeSet<String>) {
        match self {
            NamedTerm::Var(x) => {
                out.insert(x.clone());
            }
            NamedTerm::Lam(x, b) => {
                out.insert(x.clone());
                b.all_names(out);
            }
            NamedTerm::App(f, a) => {
                f.all_names(out);
                a.all_names(out);
            }
        }
    }

    /// α-equivalence, decided by comparing de Bruijn forms.
    pub fn alpha_eq(&self, other: &NamedTerm) -> bool {
        match (to_debruijn(self), to_debruijn(other)) {
            (Ok(a), Ok(b)) => a == b,
            _ => self == other,
        }
    }

    fn write_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        match self {
            NamedTerm::Var(x) => write!(f, "{x}"),
            NamedTerm::Lam(x, b) => {
                if prec > 0 {
                    write!(f, "(")?;
                }
                write!(f, "\\{x}. ")?;
                b.write_prec(f, 0)?;
                if prec > 0 {
                    write!(f, ")")?;
                }
                Ok(())
            }
            NamedTerm::App(g, a) => {
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
        }
    }
}

impl fmt::Display for NamedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0)
    }
}

// --- parsing ---------------------------------------------------------------

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

fn ident_start(c: u8) -> bool {
    c.is_ascii_alphabetic() || c == b'_'
}

fn ident_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_' || c == b'\''
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), Error> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(parse_err(self.pos, format!("expected `{}`", c as char)))
        }
    }

    fn ident(&mut self) -> Result<String, Error> {
        self.skip_ws();
        let start = self.pos;
        if !self.src.get(self.pos).copied().is_some_and(ident_start) {
            return Err(parse_err(self.pos, "expected identifier"));
        }
        while self.src.get(self.pos).copied().is_some_and(ident_char) {
            self.pos += 1;
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn term(&mut self) -> Result<NamedTerm, Error> {
        if self.peek() == Some(b'\\') {
            self.pos += 1;
            let x = self.ident()?;
            self.expect(b'.')?;
            let body = self.term()?;
            return Ok(NamedTerm::lam(x, body));
        }
        let mut acc = self.atom()?;
        loop {
            match self.peek() {
                Some(b'\\') => {
                    // a trailing lambda is the last argument
                    let arg = self.term()?;
                    return Ok(NamedTerm::app(acc, arg));
                }
                Some(c) if c == b'(' || ident_start(c) => {
                    let arg = self.atom()?;
                    acc = NamedTerm::app(acc, arg);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn atom(&mut self) -> Result<NamedTerm, Error> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(b')')?;
                Ok(t)
            }
            Some(c) if ident_start(c) => Ok(NamedTerm::Var(self.ident()?)),
            Some(_) => Err(parse_err(self.pos, "expected a term")),
            None => Err(parse_err(self.pos, "unexpected end of input")),
        }
    }
}

pub fn parse_named(text: &str) -> Result<NamedTerm, Error> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let t = p.term()?;
    if p.peek().is_some() {
        return Err(parse_err(p.pos, "unexpected trailing input"));
    }
    Ok(t)
}

// --- bridge ----------------------------------------------------------------

/// Index of a free variable named `xi`.
fn free_index(name: &str) -> Option<u32> {
    let digits = name.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
        return None;
    }
    digits.parse().ok()
}

pub fn to_debruijn(t: &NamedTerm) -> Result<Term, Error> {
    fn go<'a>(t: &'a NamedTerm, binders: &mut Vec<&'a str>) -> Result<Term, Error> {
        match t {
            NamedTerm::Var(x) => {
                if let Some(depth) = binders.iter().rev().position(|b| b == x) {
                    return Ok(v(depth as u32 + 1));
                }
                let i = free_index(x).ok_or_else(|| Error::Unbound(x.clone()))?;
                Ok(v(i + binders.len() as u32))
            }
            NamedTerm::Lam(x, b) => {
                binders.push(x);
                let body = go(b, binders)?;
                binders.pop();
                Ok(Term::lam(body))
            }
            NamedTerm::App(f, a) => Ok(Term::app(go(f, binders)?, go(a, binders)?)),
        }
    }
    go(t, &mut Vec::new())
}

/// Inverse bridge; binders are named `y<depth>` so they never clash with
/// the free `xi` family. Fails on closures and function symbols.
pub fn from_debruijn(t: &Term) -> Result<NamedTerm, Error> {
    fn go(t: &Term, depth: u32) -> Result<NamedTerm, Error> {
        match t {
            Term::X | Term::Idx(_) => {
                let i = t.as_index().unwrap_or(1);
                if i <= depth {
                    Ok(NamedTerm::Var(format!("y{}", depth - i)))
                } else {
                    Ok(NamedTerm::Var(format!("x{}", i - depth)))
                }
            }
            Term::Lam(b) => Ok(NamedTerm::lam(format!("y{depth}"), go(b, depth + 1)?)),
            Term::App(f, a) => Ok(NamedTerm::app(go(f, depth)?, go(a, depth)?)),
            Term::Fun(..) | Term::Sub(..) => Err(Error::NotFirstOrder(format!("no named form for {t}"))),
        }
    }
    go(t, 0)
}

// --- reduction -------------------------------------------------------------

/// Smallest `base<k>` (k = 1, 2, ...) not in `avoid`.
fn fresh(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "v" } else { stem };
    (1..)
        .map(|k| format!("{stem}{k}"))
        .find(|n| !avoid.contains(n))
        .expect("unbounded supply of names")
}

/// Capture-avoiding `t[x := s]`.
pub fn substitute(t: &NamedTerm, x: &str, s: &NamedTerm) -> NamedTerm {
    let fv_s = s.free_vars();
    subst_rec(t, x, s, &fv_s)
}

fn subst_rec(t: &NamedTerm, x: &str, s: &NamedTerm, fv_s: &BTreeSet<String>) -> NamedTerm {
    match t {
        NamedTerm::Var(y) => {
            if y == x {
                s.clone()
            } else {
                t.clone()
            }
        }
        NamedTerm::App(f, a) => NamedTerm::app(subst_rec(f, x, s, fv_s), subst_rec(a, x, s, fv_s)),
        NamedTerm::Lam(y, body) => {
            if y == x || !body.free_vars().contains(x) {
                return t.clone();
            }
            if fv_s.contains(y) {
                let mut avoid = fv_s.clone();
                body.all_names(&mut avoid);
                avoid.insert(x.to_string());
                let z = fresh(y, &avoid);
                let renamed = subst_rec(body, y, &NamedTerm::Var(z.clone()), &BTreeSet::from([z.clone()]));
                NamedTerm::lam(z, subst_rec(&renamed, x, s, fv_s))
            } else {
                NamedTerm::lam(y.clone(), subst_rec(body, x, s, fv_s))
            }
        }
    }
}

fn step(t: &NamedTerm) -> Option<NamedTerm> {
    match t {
        NamedTerm::Var(_) => None,
        NamedTerm::Lam(x, b) => step(b).map(|b| NamedTerm::lam(x.clone(), b)),
        NamedTerm::App(f, a) => {
            if let NamedTerm::Lam(x, body) = &**f {
                return Some(substitute(body, x, a));
            }
            if let Some(f2) = step(f) {
                return Some(NamedTerm::App(Box::new(f2), a.clone()));
            }
            step(a).map(|a2| NamedTerm::App(f.clone(), Box::new(a2)))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleExhausted {
    pub steps: u64,
}

/// Normal-order β-normalization with at most `fuel` contractions.
pub fn oracle_normalize(t: &NamedTerm, fuel: u64) -> Result<NamedTerm, OracleExhausted> {
    oracle_normalize_bounded(t, fuel, usize::MAX)
}

/// As [`oracle_normalize`], also giving up once the term exceeds `max_size`
/// nodes.
pub fn oracle_normalize_bounded(t: &NamedTerm, fuel: u64, max_size: usize) -> Result<NamedTerm, OracleExhausted> {
    let mut cur = t.clone();
    let mut steps = 0;
    while let Some(next) = step(&cur) {
        if steps >= fuel || next.size() > max_size {
            return Err(OracleExhausted { steps });
        }
        steps += 1;
        cur = next;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::combinator;

    fn p(s: &str) -> NamedTerm {
        parse_named(s).unwrap()
    }

    #[test]
    fn parses() {
        assert_eq!(p("\\x.x"), NamedTerm::lam("x", NamedTerm::var("x")));
        assert_eq!(p("\\x.\\y.x"), NamedTerm::lam("x", NamedTerm::lam("y", NamedTerm::var("x"))));
        assert_eq!(
            p("x y z"),
            NamedTerm::app(NamedTerm::app(NamedTerm::var("x"), NamedTerm::var("y")), NamedTerm::var("z"))
        );
        assert_eq!(p("f \\x. x y"), NamedTerm::app(NamedTerm::var("f"), p("\\x. x y")));
    }

    #[test]
    fn parse_errors_have_positions() {
        assert_eq!(parse_named("\\.x"), Err(Error::Parse { pos: 1, msg: "expected identifier".into() }));
        assert!(matches!(parse_named("(x y"), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse_named("x )"), Err(Error::Parse { pos: 2, .. })));
    }

    #[test]
    fn bridge() {
        assert_eq!(to_debruijn(&p("\\x.x")).unwrap(), Term::lam(Term::X));
        assert_eq!(to_debruijn(&p("\\x.\\y.x")).unwrap(), combinator("K").unwrap());
        assert_eq!(to_debruijn(&p("\\y.\\z.\\w. y w (z w)")).unwrap(), combinator("S").unwrap());
        assert_eq!(to_debruijn(&p("\\y. x2 y")).unwrap(), Term::lam(Term::app(v(3), Term::X)));
        assert_eq!(to_debruijn(&p("\\y. q")), Err(Error::Unbound("q".into())));
        assert_eq!(to_debruijn(&p("x0")), Err(Error::Unbound("x0".into())));
    }

    #[test]
    fn bridge_back() {
        let s = combinator("S").unwrap();
        let named = from_debruijn(&s).unwrap();
        assert_eq!(named.to_string(), "\\y0. \\y1. \\y2. y0 y2 (y1 y2)");
        assert_eq!(to_debruijn(&named).unwrap(), s);
        let open = Term::lam(Term::app(v(3), Term::X));
        assert_eq!(from_debruijn(&open).unwrap().to_string(), "\\y0. x2 y0");
    }

    #[test]
    fn reduces() {
        assert_eq!(oracle_normalize(&p("(\\a.a) x1"), 10).unwrap(), p("x1"));
        assert_eq!(oracle_normalize(&p("(\\x.\\y.x) x1 x2"), 10).unwrap(), p("x1"));
        assert_eq!(oracle_normalize(&p("(\\x.x x)(\\x.x x)"), 100), Err(OracleExhausted { steps: 100 }));
    }

    #[test]
    fn capture_is_avoided() {
        // (\x.\y. x) y  ->  \y1. y
        let r = oracle_normalize(&p("(\\x.\\y. x) y"), 10).unwrap();
        assert_eq!(r, p("\\y1. y"));
        // the renamed binder skips names already in use
        let r = oracle_normalize(&p("(\\x.\\y. x y1) y"), 10).unwrap();
        assert_eq!(r, p("\\y2. y y1"));
    }

    #[test]
    fn fresh_names() {
        let avoid = BTreeSet::from(["y1".to_string(), "y2".to_string()]);
        assert_eq!(fresh("y", &avoid), "y3");
        assert_eq!(fresh("y7", &avoid), "y3");
        assert_eq!(fresh("x1", &BTreeSet::new()), "x1");
    }

    #[test]
    fn alpha() {
        assert!(p("\\a. a").alpha_eq(&p("\\b. b")));
        assert!(!p("\\a.\\b. a").alpha_eq(&p("\\a.\\b. b")));
    }
}
