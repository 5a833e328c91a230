//! Concrete syntax for terms, substitutions and formulas.
//!
//! ```text
//! term    := '\' '.' term | app
//! app     := postfix postfix*              (left-associative)
//! postfix := atom ('[' subst ']')*
//! atom    := 'x'INT | IDENT '(' term, ... ')' | 'I' | 'K' | 'S' | '(' term ')'
//!
//! subst   := cons (';' subst)?             (right-associative)
//! cons    := term '.' cons | 'id' | '^' | '(' subst ')'
//!
//! formula := or ('->' formula)?            (right-associative)
//! or      := and ('|' and)*
//! and     := unary ('&' unary)*
//! unary   := '~' unary | 'exists' '.' formula | 'exists' 'x'INT '.' formula | fpost
//! fpost   := fatom ('[' subst ']')*
//! fatom   := 'false' | 'true' | IDENT '(' term, ... ')' | '(' formula ')'
//! ```
//!
//! `I`, `K`, `S` are sugar for the closed combinators. Derived connectives
//! and the named binder `exists xI.` are expanded while parsing.

use crate::error::{parse_err, Error};
use crate::fol::{exists_xi, Formula};
use crate::lambda::combinator;
use crate::term::{var, Subst, Term};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

enum Word {
    Var(u32),
    Ident(String),
}

fn ident_start(c: u8) -> bool {
    c.is_ascii_alphabetic() || c == b'_'
}

fn ident_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_'
}

const RESERVED: &[&str] = &["id", "exists", "false", "true", "I", "K", "S"];

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { src: text.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), Error> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(parse_err(self.pos, format!("expected `{}`", c as char)))
        }
    }

    fn finish(&mut self) -> Result<(), Error> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(parse_err(self.pos, "unexpected trailing input")),
        }
    }

    /// Next identifier without consuming it.
    fn peek_ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        if !self.src.get(start).copied().is_some_and(ident_start) {
            return None;
        }
        let mut end = start;
        while self.src.get(end).copied().is_some_and(ident_char) {
            end += 1;
        }
        std::str::from_utf8(&self.src[start..end]).ok()
    }

    fn word(&mut self) -> Result<Word, Error> {
        let start = self.pos;
        let w = self.peek_ident().ok_or_else(|| parse_err(self.pos, "expected identifier"))?;
        self.pos += w.len();
        if let Some(digits) = w.strip_prefix('x') {
            if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                let i: u32 = digits.parse().map_err(|_| parse_err(start, "variable index too large"))?;
                if i == 0 {
                    return Err(parse_err(start, "variable indices start at 1"));
                }
                return Ok(Word::Var(i));
            }
        }
        Ok(Word::Ident(w.to_string()))
    }

    fn term_start(&mut self) -> bool {
        match self.peek() {
            Some(b'(') | Some(b'\\') => true,
            Some(c) if ident_start(c) => !matches!(self.peek_ident(), Some("id" | "exists" | "false" | "true")),
            _ => false,
        }
    }

    // --- terms ---

    fn term(&mut self) -> Result<Term, Error> {
        if self.eat(b'\\') {
            self.expect(b'.')?;
            return Ok(Term::lam(self.term()?));
        }
        let mut acc = self.postfix()?;
        while self.term_start() {
            if self.peek() == Some(b'\\') {
                let arg = self.term()?;
                return Ok(Term::app(acc, arg));
            }
            acc = Term::app(acc, self.postfix()?);
        }
        Ok(acc)
    }

    fn postfix(&mut self) -> Result<Term, Error> {
        let mut t = self.atom()?;
        while self.eat(b'[') {
            let u = self.subst()?;
            self.expect(b']')?;
            t = Term::sub(t, u);
        }
        Ok(t)
    }

    fn args(&mut self) -> Result<Vec<Term>, Error> {
        self.expect(b'(')?;
        let mut args = Vec::new();
        if self.eat(b')') {
            return Ok(args);
        }
        loop {
            args.push(self.term()?);
            if self.eat(b')') {
                return Ok(args);
            }
            self.expect(b',')?;
        }
    }

    fn atom(&mut self) -> Result<Term, Error> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(b')')?;
                Ok(t)
            }
            Some(c) if ident_start(c) => {
                let start = self.pos;
                match self.word()? {
                    Word::Var(i) => var(i),
                    Word::Ident(name) => match name.as_str() {
                        "I" | "K" | "S" => combinator(&name),
                        n if RESERVED.contains(&n) => Err(parse_err(start, format!("`{n}` is reserved"))),
                        _ => {
                            if self.peek() != Some(b'(') {
                                return Err(parse_err(self.pos, format!("expected `(` after function symbol `{name}`")));
                            }
                            Ok(Term::Fun(name, self.args()?))
                        }
                    },
                }
            }
            Some(_) => Err(parse_err(self.pos, "expected a term")),
            None => Err(parse_err(self.pos, "unexpected end of input")),
        }
    }

    // --- substitutions ---

    fn subst(&mut self) -> Result<Subst, Error> {
        let head = self.cons()?;
        if self.eat(b';') {
            Ok(Subst::comp(head, self.subst()?))
        } else {
            Ok(head)
        }
    }

    fn cons(&mut self) -> Result<Subst, Error> {
        let start = self.pos;
        if self.term_start() {
            match self.term() {
                Ok(t) if self.eat(b'.') => return Ok(Subst::cons(t, self.cons()?)),
                Ok(_) => {
                    if self.peek() != Some(b')') && self.peek() != Some(b';') {
                        return Err(parse_err(self.pos, "expected `.` after substitution entry"));
                    }
                }
                Err(e) if self.src.get(self.skip_from(start)) != Some(&b'(') => return Err(e),
                Err(_) => {}
            }
            self.pos = start;
        }
        match self.peek() {
            Some(b'^') => {
                self.pos += 1;
                Ok(Subst::Shift)
            }
            Some(b'(') => {
                self.pos += 1;
                let u = self.subst()?;
                self.expect(b')')?;
                Ok(u)
            }
            _ if self.peek_ident() == Some("id") => {
                self.pos += 2;
                Ok(Subst::Id)
            }
            Some(_) => Err(parse_err(self.pos, "expected a substitution")),
            None => Err(parse_err(self.pos, "unexpected end of input")),
        }
    }

    fn skip_from(&self, mut p: usize) -> usize {
        while self.src.get(p).is_some_and(u8::is_ascii_whitespace) {
            p += 1;
        }
        p
    }

    // --- formulas ---

    fn formula(&mut self) -> Result<Formula, Error> {
        let lhs = self.or()?;
        if self.eat_str("->") {
            Ok(Formula::implies(lhs, self.formula()?))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, Error> {
        let mut acc = self.and()?;
        while self.eat(b'|') {
            acc = Formula::or(acc, self.and()?);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Formula, Error> {
        let mut acc = self.unary()?;
        while self.eat(b'&') {
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, Error> {
        if self.eat(b'~') {
            return Ok(Formula::not(self.unary()?));
        }
        if self.peek_ident() == Some("exists") {
            self.pos += "exists".len();
            if self.eat(b'.') {
                return Ok(Formula::exists(self.formula()?));
            }
            let at = self.pos;
            let Word::Var(i) = self.word()? else {
                return Err(parse_err(at, "expected `.` or a variable after `exists`"));
            };
            self.expect(b'.')?;
            let body = self.formula()?;
            return exists_xi(i, &body);
        }
        let mut f = self.fatom()?;
        while self.eat(b'[') {
            let u = self.subst()?;
            self.expect(b']')?;
            f = Formula::subf(f, u);
        }
        Ok(f)
    }

    fn fatom(&mut self) -> Result<Formula, Error> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(b')')?;
                Ok(f)
            }
            Some(c) if ident_start(c) => {
                let start = self.pos;
                match self.word()? {
                    Word::Var(_) => Err(parse_err(start, "expected a formula, found a variable")),
                    Word::Ident(name) => match name.as_str() {
                        "false" => Ok(Formula::Falsum),
                        "true" => Ok(Formula::truth()),
                        n if RESERVED.contains(&n) => Err(parse_err(start, format!("`{n}` is reserved"))),
                        _ => Ok(Formula::Atom(name, self.args()?)),
                    },
                }
            }
            Some(_) => Err(parse_err(self.pos, "expected a formula")),
            None => Err(parse_err(self.pos, "unexpected end of input")),
        }
    }
}

pub fn parse_term(text: &str) -> Result<Term, Error> {
    let mut p = Parser::new(text);
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_subst(text: &str) -> Result<Subst, Error> {
    let mut p = Parser::new(text);
    let u = p.subst()?;
    p.finish()?;
    Ok(u)
}

pub fn parse_formula(text: &str) -> Result<Formula, Error> {
    let mut p = Parser::new(text);
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}
