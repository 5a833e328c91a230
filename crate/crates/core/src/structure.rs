//! Finite structures: left algebras of the term clone, extended with
//! predicate tables for first-order semantics.
//!
//! Text format:
//!
//! ```text
//! 2
//! fun f/2: (0,0)=1 (0,1)=0 (1,0)=0 (1,1)=1
//! fun c/0: ()=1
//! pred P/1: (1)
//! pred Q/2: (0,1) (1,0)
//! ```
//!
//! The first non-comment line is the carrier size. Function tables must be
//! total; a predicate line lists exactly the tuples in the relation.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::Error;
use crate::term::Term;

/// Function and predicate symbols with their arities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Signature {
    pub functions: BTreeMap<String, usize>,
    pub predicates: BTreeMap<String, usize>,
}

impl Signature {
    pub fn new() -> Self {
        Signature::default()
    }

    pub fn with_function(mut self, name: &str, arity: usize) -> Self {
        self.functions.insert(name.to_string(), arity);
        self
    }

    pub fn with_predicate(mut self, name: &str, arity: usize) -> Self {
        self.predicates.insert(name.to_string(), arity);
        self
    }

    pub fn add_function(&mut self, name: &str, arity: usize) -> Result<(), Error> {
        if self.predicates.contains_key(name) {
            return Err(Error::SymbolClash(name.to_string()));
        }
        match self.functions.get(name) {
            Some(&a) if a != arity => Err(Error::Arity { sym: name.to_string(), expected: a, got: arity }),
            _ => {
                self.functions.insert(name.to_string(), arity);
                Ok(())
            }
        }
    }

    pub fn add_predicate(&mut self, name: &str, arity: usize) -> Result<(), Error> {
        if self.functions.contains_key(name) {
            return Err(Error::SymbolClash(name.to_string()));
        }
        match self.predicates.get(name) {
            Some(&a) if a != arity => Err(Error::Arity { sym: name.to_string(), expected: a, got: arity }),
            _ => {
                self.predicates.insert(name.to_string(), arity);
                Ok(())
            }
        }
    }

    /// Records every function symbol occurring in `t`.
    pub fn add_term(&mut self, t: &Term) -> Result<(), Error> {
        match t {
            Term::X | Term::Idx(_) => Ok(()),
            Term::App(f, a) => {
                self.add_term(f)?;
                self.add_term(a)
            }
            Term::Lam(b) => self.add_term(b),
            Term::Fun(g, args) => {
                self.add_function(g, args.len())?;
                args.iter().try_for_each(|a| self.add_term(a))
            }
            Term::Sub(t, u) => {
                self.add_term(t)?;
                self.add_subst(u)
            }
        }
    }

    fn add_subst(&mut self, u: &crate::term::Subst) -> Result<(), Error> {
        use crate::term::Subst;
        match u {
            Subst::Id | Subst::Shift => Ok(()),
            Subst::Cons(t, u) => {
                self.add_term(t)?;
                self.add_subst(u)
            }
            Subst::Comp(a, b) => {
                self.add_subst(a)?;
                self.add_subst(b)
            }
        }
    }

    /// Function symbols as `(name, arity)` pairs, in name order.
    pub fn function_list(&self) -> Vec<(String, usize)> {
        self.functions.iter().map(|(k, &a)| (k.clone(), a)).collect()
    }

    pub fn predicate_list(&self) -> Vec<(String, usize)> {
        self.predicates.iter().map(|(k, &a)| (k.clone(), a)).collect()
    }
}

fn table_len(carrier: usize, arity: usize) -> usize {
    carrier.pow(arity as u32)
}

/// Row-major index of a tuple, first component most significant.
fn tuple_index(carrier: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &d| acc * carrier + d)
}

fn index_tuple(carrier: usize, arity: usize, mut idx: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = idx % carrier;
        idx /= carrier;
    }
    out
}

/// A finite structure with carrier `{0, ..., n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Structure {
    carrier: usize,
    signature: Signature,
    funs: BTreeMap<String, Vec<usize>>,
    preds: BTreeMap<String, Vec<bool>>,
}

impl Structure {
    /// All function tables constantly 0 and all predicates empty.
    pub fn new(carrier: usize, signature: Signature) -> Result<Self, Error> {
        if carrier == 0 {
            return Err(Error::Structure("carrier must be nonempty".into()));
        }
        let funs = signature
            .functions
            .iter()
            .map(|(k, &a)| (k.clone(), vec![0; table_len(carrier, a)]))
            .collect();
        let preds = signature
            .predicates
            .iter()
            .map(|(k, &a)| (k.clone(), vec![false; table_len(carrier, a)]))
            .collect();
        Ok(Structure { carrier, signature, funs, preds })
    }

    pub fn carrier(&self) -> usize {
        self.carrier
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    fn check_tuple(&self, tuple: &[usize]) -> Result<(), Error> {
        match tuple.iter().find(|&&d| d >= self.carrier) {
            Some(&d) => Err(Error::OutOfCarrier(d)),
            None => Ok(()),
        }
    }

    pub fn set_fun(&mut self, name: &str, tuple: &[usize], value: usize) -> Result<(), Error> {
        self.check_tuple(tuple)?;
        self.check_tuple(&[value])?;
        let arity = *self.signature.functions.get(name).ok_or_else(|| Error::UnknownSymbol(name.into()))?;
        if arity != tuple.len() {
            return Err(Error::Arity { sym: name.into(), expected: arity, got: tuple.len() });
        }
        let idx = tuple_index(self.carrier, tuple);
        self.funs.get_mut(name).expect("table exists for declared symbol")[idx] = value;
        Ok(())
    }

    pub fn set_pred(&mut self, name: &str, tuple: &[usize], holds: bool) -> Result<(), Error> {
        self.check_tuple(tuple)?;
        let arity = *self.signature.predicates.get(name).ok_or_else(|| Error::UnknownSymbol(name.into()))?;
        if arity != tuple.len() {
            return Err(Error::Arity { sym: name.into(), expected: arity, got: tuple.len() });
        }
        let idx = tuple_index(self.carrier, tuple);
        self.preds.get_mut(name).expect("table exists for declared symbol")[idx] = holds;
        Ok(())
    }

    pub fn apply_fun(&self, name: &str, args: &[usize]) -> Result<usize, Error> {
        let table = self.funs.get(name).ok_or_else(|| Error::UnknownSymbol(name.into()))?;
        let arity = self.signature.functions[name];
        if arity != args.len() {
            return Err(Error::Arity { sym: name.into(), expected: arity, got: args.len() });
        }
        self.check_tuple(args)?;
        Ok(table[tuple_index(self.carrier, args)])
    }

    pub fn holds(&self, name: &str, args: &[usize]) -> Result<bool, Error> {
        let table = self.preds.get(name).ok_or_else(|| Error::UnknownSymbol(name.into()))?;
        let arity = self.signature.predicates[name];
        if arity != args.len() {
            return Err(Error::Arity { sym: name.into(), expected: arity, got: args.len() });
        }
        self.check_tuple(args)?;
        Ok(table[tuple_index(self.carrier, args)])
    }

    /// Parses the text format described in the module docs.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let bad = |line: usize, msg: String| Error::Structure(format!("line {line}: {msg}"));
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (n_line, first) = lines.next().ok_or_else(|| Error::Structure("empty structure".into()))?;
        let carrier: usize = first.parse().map_err(|_| bad(n_line, format!("bad carrier size `{first}`")))?;
        if carrier == 0 {
            return Err(bad(n_line, "carrier must be nonempty".into()));
        }

        struct Decl {
            line: usize,
            is_fun: bool,
            name: String,
            arity: usize,
            entries: Vec<(Vec<usize>, Option<usize>)>,
        }
        let mut decls = Vec::new();
        let mut signature = Signature::new();
        for (line, l) in lines {
            let (kind, rest) = l.split_once(char::is_whitespace).ok_or_else(|| bad(line, "expected `fun` or `pred`".into()))?;
            let is_fun = match kind {
                "fun" => true,
                "pred" => false,
                other => return Err(bad(line, format!("unknown declaration `{other}`"))),
            };
            let (head, body) = rest.split_once(':').ok_or_else(|| bad(line, "missing `:`".into()))?;
            let (name, arity) = head.trim().split_once('/').ok_or_else(|| bad(line, "expected name/arity".into()))?;
            let name = name.trim().to_string();
            let arity: usize = arity.trim().parse().map_err(|_| bad(line, format!("bad arity `{arity}`")))?;
            if is_fun {
                signature.add_function(&name, arity)?;
            } else {
                signature.add_predicate(&name, arity)?;
            }
            if decls.iter().any(|d: &Decl| d.name == name) {
                return Err(bad(line, format!("symbol `{name}` declared twice")));
            }
            let mut entries = Vec::new();
            for item in body.split_whitespace() {
                let (tuple, value) = if is_fun {
                    let (t, val) = item.split_once('=').ok_or_else(|| bad(line, format!("expected tuple=value, got `{item}`")))?;
                    let val: usize = val.parse().map_err(|_| bad(line, format!("bad value `{val}`")))?;
                    (t, Some(val))
                } else {
                    (item, None)
                };
                let inner = tuple
                    .strip_prefix('(')
                    .and_then(|t| t.strip_suffix(')'))
                    .ok_or_else(|| bad(line, format!("tuple must be parenthesized: `{tuple}`")))?;
                let comps: Vec<usize> = if inner.is_empty() {
                    Vec::new()
                } else {
                    inner
                        .split(',')
                        .map(|c| c.trim().parse().map_err(|_| bad(line, format!("bad tuple component `{c}`"))))
                        .collect::<Result<_, _>>()?
                };
                if comps.len() != arity {
                    return Err(bad(line, format!("tuple `{tuple}` has wrong length for arity {arity}")));
                }
                entries.push((comps, value));
            }
            decls.push(Decl { line, is_fun, name, arity, entries });
        }

        let mut m = Structure::new(carrier, signature)?;
        for d in decls {
            let mut seen = vec![false; table_len(carrier, d.arity)];
            for (tuple, value) in &d.entries {
                if let Some(&c) = tuple.iter().chain(value.iter()).find(|&&c| c >= carrier) {
                    return Err(bad(d.line, format!("element {c} outside carrier")));
                }
                let idx = tuple_index(carrier, tuple);
                if seen[idx] {
                    return Err(bad(d.line, format!("tuple {tuple:?} listed twice")));
                }
                seen[idx] = true;
                match value {
                    Some(val) => m.set_fun(&d.name, tuple, *val)?,
                    None => m.set_pred(&d.name, tuple, true)?,
                }
            }
            if d.is_fun && seen.iter().any(|s| !s) {
                let missing = index_tuple(carrier, d.arity, seen.iter().position(|s| !s).unwrap_or(0));
                return Err(bad(d.line, format!("table of `{}` is partial: missing {missing:?}", d.name)));
            }
        }
        Ok(m)
    }
}

fn write_tuple(f: &mut fmt::Formatter<'_>, t: &[usize]) -> fmt::Result {
    write!(f, "(")?;
    for (k, d) in t.iter().enumerate() {
        if k > 0 {
            write!(f, ",")?;
        }
        write!(f, "{d}")?;
    }
    write!(f, ")")
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.carrier)?;
        for (name, table) in &self.funs {
            let arity = self.signature.functions[name];
            write!(f, "fun {name}/{arity}:")?;
            for (idx, val) in table.iter().enumerate() {
                write!(f, " ")?;
                write_tuple(f, &index_tuple(self.carrier, arity, idx))?;
                write!(f, "={val}")?;
            }
            writeln!(f)?;
        }
        for (name, table) in &self.preds {
            let arity = self.signature.predicates[name];
            write!(f, "pred {name}/{arity}:")?;
            for (idx, _) in table.iter().enumerate().filter(|(_, &b)| b) {
                write!(f, " ")?;
                write_tuple(f, &index_tuple(self.carrier, arity, idx))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A point of `D^N` with finite description: coordinate `i` (1-based) is
/// `values[i-1]` when present, else `pad`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment {
    pub values: Vec<usize>,
    pub pad: usize,
}

impl Assignment {
    pub fn new(values: Vec<usize>, pad: usize) -> Self {
        Assignment { values, pad }
    }

    pub fn get(&self, i: u32) -> usize {
        assert!(i >= 1, "coordinates are 1-based");
        self.values.get(i as usize - 1).copied().unwrap_or(self.pad)
    }

    pub fn check(&self, m: &Structure) -> Result<(), Error> {
        match self.values.iter().chain(std::iter::once(&self.pad)).find(|&&d| d >= m.carrier()) {
            Some(&d) => Err(Error::OutOfCarrier(d)),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, d) in self.values.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "] pad {}", self.pad)
    }
}

/// Coordinates visible at some depth below binders: `front` holds the
/// values bound by the enclosing quantifiers, innermost last.
pub(crate) struct Point<'a> {
    pub front: Vec<usize>,
    pub base: &'a Assignment,
}

impl Point<'_> {
    pub fn get(&self, i: u32) -> usize {
        let k = self.front.len();
        let i = i as usize;
        if i <= k {
            self.front[k - i]
        } else {
            self.base.get((i - k) as u32)
        }
    }
}

pub(crate) fn eval_at(t: &Term, m: &Structure, at: &Point<'_>) -> Result<usize, Error> {
    match t {
        Term::X => Ok(at.get(1)),
        Term::Idx(i) => Ok(at.get(*i)),
        Term::Fun(g, args) => {
            let vals = args.iter().map(|a| eval_at(a, m, at)).collect::<Result<Vec<_>, _>>()?;
            m.apply_fun(g, &vals)
        }
        Term::Lam(_) | Term::App(..) => Err(Error::NotFirstOrder(t.to_string())),
        Term::Sub(..) => Err(Error::NotFirstOrder(format!("explicit closure in {t}"))),
    }
}

/// Value of a σ-normal first-order term at an assignment.
pub fn eval_term(t: &Term, m: &Structure, env: &Assignment) -> Result<usize, Error> {
    env.check(m)?;
    eval_at(t, m, &Point { front: Vec::new(), base: env })
}

/// Enumerates every structure of a signature over a fixed carrier, in
/// lexicographic order: function tables by symbol name then tuple, then
/// predicate tables likewise.
pub struct StructureEnumerator {
    template: Structure,
    cells: Vec<(bool, String, usize)>,
    digits: Vec<usize>,
    done: bool,
}

impl StructureEnumerator {
    pub fn new(carrier: usize, signature: Signature) -> Result<Self, Error> {
        let template = Structure::new(carrier, signature)?;
        let mut cells = Vec::new();
        for (name, table) in &template.funs {
            cells.extend((0..table.len()).map(|k| (true, name.clone(), k)));
        }
        for (name, table) in &template.preds {
            cells.extend((0..table.len()).map(|k| (false, name.clone(), k)));
        }
        let digits = vec![0; cells.len()];
        Ok(StructureEnumerator { template, cells, digits, done: false })
    }

    /// Number of structures this enumerator yields.
    pub fn count(carrier: usize, signature: &Signature) -> u128 {
        let c = carrier as u128;
        let fun_cells: u32 = signature.functions.values().map(|&a| table_len(carrier, a) as u32).sum();
        let pred_cells: u32 = signature.predicates.values().map(|&a| table_len(carrier, a) as u32).sum();
        c.checked_pow(fun_cells)
            .and_then(|x| 2u128.checked_pow(pred_cells).and_then(|y| x.checked_mul(y)))
            .unwrap_or(u128::MAX)
    }
}

impl Iterator for StructureEnumerator {
    type Item = Structure;

    fn next(&mut self) -> Option<Structure> {
        if self.done {
            return None;
        }
        let mut m = self.template.clone();
        for ((is_fun, name, idx), &d) in self.cells.iter().zip(&self.digits) {
            if *is_fun {
                m.funs.get_mut(name).expect("declared")[*idx] = d;
            } else {
                m.preds.get_mut(name).expect("declared")[*idx] = d == 1;
            }
        }
        // advance the mixed-radix counter, last cell least significant
        let mut k = self.cells.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            let radix = if self.cells[k].0 { self.template.carrier } else { 2 };
            self.digits[k] += 1;
            if self.digits[k] < radix {
                break;
            }
            self.digits[k] = 0;
        }
        Some(m)
    }
}
