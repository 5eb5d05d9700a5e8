//! First-order formulas and terms.
//!
//! Formulas are stored and exchanged in a TeX-macro prefix encoding
//! (`\dis{\neg{p}}{\neg{q}}`), entered by users in an infix notation
//! (`~p | ~q`), and displayed in unicode (`¬p ∨ ¬q`).
//!
//! Matching between formulas is purely syntactic. Bound variable names are
//! significant for [`PartialEq`]; [`Formula::alpha_eq`] is available as a
//! separate predicate but the rule engine never uses it.

mod infix;
mod prefix;
mod print;

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

pub use infix::{parse_infix, parse_term_infix};
pub use prefix::{parse_prefix, parse_term_prefix};

/// Name of the successor function of arithmetic.
pub const SUCC: &str = "s";
/// Name of the addition function.
pub const PLUS: &str = "+";
/// Name of the multiplication function.
pub const TIMES: &str = "·";
/// Name of the zero constant.
pub const ZERO: &str = "0";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Const(String),
    Func(String, Vec<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String, Vec<Term>),
    Falsum,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    ForAll(String, Box<Formula>),
    Exists(String, Box<Formula>),
    Equals(Term, Term),
}

/// A parse failure, located by character offset into the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseError {
    Syntax { position: usize, expected: String },
    Arity { symbol: String, expected: usize, found: usize },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { position, expected } => {
                write!(f, "syntax error at position {position}: expected {expected}")
            }
            ParseError::Arity { symbol, expected, found } => write!(
                f,
                "symbol `{symbol}` takes {expected} argument(s), found {found}"
            ),
        }
    }
}

impl core::error::Error for ParseError {}

impl ParseError {
    /// Stable machine code, shared with the session protocol.
    pub fn code(&self) -> &'static str {
        match self {
            ParseError::Syntax { .. } => "SyntaxError",
            ParseError::Arity { .. } => "ArityError",
        }
    }

    pub fn position(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { position, .. } => Some(*position),
            ParseError::Arity { .. } => None,
        }
    }
}

/// Identifiers beginning with `u`..`z` are variables unless they appear in a
/// position that binds them; everything else (`a`, `c1`, `a3`) is a constant.
pub fn is_variable_name(name: &str) -> bool {
    matches!(name.chars().next(), Some('u'..='z'))
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic()
}

pub(crate) fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '\''
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::Const(name.into())
    }

    pub fn zero() -> Term {
        Term::Const(ZERO.to_string())
    }

    pub fn succ(t: Term) -> Term {
        Term::Func(SUCC.to_string(), alloc::vec![t])
    }

    pub fn plus(a: Term, b: Term) -> Term {
        Term::Func(PLUS.to_string(), alloc::vec![a, b])
    }

    pub fn times(a: Term, b: Term) -> Term {
        Term::Func(TIMES.to_string(), alloc::vec![a, b])
    }

    /// A bare variable or constant (no arguments).
    pub fn is_name(&self) -> bool {
        matches!(self, Term::Var(_) | Term::Const(_))
    }

    fn collect_free(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::Func(_, args) => args.iter().for_each(|a| a.collect_free(out)),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(n) | Term::Const(n) => {
                out.insert(n.clone());
            }
            Term::Func(f, args) => {
                out.insert(f.clone());
                args.iter().for_each(|a| a.collect_names(out));
            }
        }
    }

    fn subst(&self, map: &BTreeMap<String, Term>) -> Term {
        match self {
            Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Const(_) => self.clone(),
            Term::Func(f, args) => Term::Func(f.clone(), args.iter().map(|a| a.subst(map)).collect()),
        }
    }

    fn replace(&self, from: &Term, to: &Term) -> Term {
        if self == from {
            return to.clone();
        }
        match self {
            Term::Func(f, args) => Term::Func(f.clone(), args.iter().map(|a| a.replace(from, to)).collect()),
            _ => self.clone(),
        }
    }

    fn contains_term(&self, t: &Term) -> bool {
        self == t
            || match self {
                Term::Func(_, args) => args.iter().any(|a| a.contains_term(t)),
                _ => false,
            }
    }

    fn mentions(&self, name: &str) -> bool {
        match self {
            Term::Var(n) | Term::Const(n) => n == name,
            Term::Func(f, args) => f == name || args.iter().any(|a| a.mentions(name)),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::term_unicode(self))
    }
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into(), Vec::new())
    }

    pub fn pred(name: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Atom(name.into(), args)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(v: impl Into<String>, body: Formula) -> Formula {
        Formula::ForAll(v.into(), Box::new(body))
    }

    pub fn exists(v: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(v.into(), Box::new(body))
    }

    pub fn equals(a: Term, b: Term) -> Formula {
        Formula::Equals(a, b)
    }

    /// Number of formula nodes; terms are not counted.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(..) | Formula::Falsum | Formula::Equals(..) => 1,
            Formula::Not(a) | Formula::ForAll(_, a) | Formula::Exists(_, a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// True when no quantifier, term argument or equality occurs.
    pub fn is_propositional(&self) -> bool {
        match self {
            Formula::Atom(_, args) => args.is_empty(),
            Formula::Falsum => true,
            Formula::Not(a) => a.is_propositional(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_propositional() && b.is_propositional()
            }
            Formula::ForAll(..) | Formula::Exists(..) | Formula::Equals(..) => false,
        }
    }

    /// Counts of each connective, used to state that substitution preserves
    /// logical structure. Order: ⊥ ¬ ∧ ∨ → ∀ ∃ = atom.
    pub fn connective_counts(&self) -> [usize; 9] {
        let mut c = [0usize; 9];
        self.count_into(&mut c);
        c
    }

    fn count_into(&self, c: &mut [usize; 9]) {
        match self {
            Formula::Falsum => c[0] += 1,
            Formula::Not(a) => {
                c[1] += 1;
                a.count_into(c)
            }
            Formula::And(a, b) => {
                c[2] += 1;
                a.count_into(c);
                b.count_into(c)
            }
            Formula::Or(a, b) => {
                c[3] += 1;
                a.count_into(c);
                b.count_into(c)
            }
            Formula::Implies(a, b) => {
                c[4] += 1;
                a.count_into(c);
                b.count_into(c)
            }
            Formula::ForAll(_, a) => {
                c[5] += 1;
                a.count_into(c)
            }
            Formula::Exists(_, a) => {
                c[6] += 1;
                a.count_into(c)
            }
            Formula::Equals(..) => c[7] += 1,
            Formula::Atom(..) => c[8] += 1,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(_, args) => args.iter().for_each(|t| t.collect_free(out)),
            Formula::Falsum => {}
            Formula::Not(a) => a.collect_free(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(out);
                b.collect_free(out);
            }
            Formula::ForAll(v, a) | Formula::Exists(v, a) => {
                let mut inner = BTreeSet::new();
                a.collect_free(&mut inner);
                inner.remove(v);
                out.extend(inner);
            }
            Formula::Equals(s, t) => {
                s.collect_free(out);
                t.collect_free(out);
            }
        }
    }

    /// Every identifier occurring anywhere: predicates, functions,
    /// constants, variables and binders.
    pub fn names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    pub(crate) fn collect_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(p, args) => {
                out.insert(p.clone());
                args.iter().for_each(|t| t.collect_names(out));
            }
            Formula::Falsum => {}
            Formula::Not(a) => a.collect_names(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_names(out);
                b.collect_names(out);
            }
            Formula::ForAll(v, a) | Formula::Exists(v, a) => {
                out.insert(v.clone());
                a.collect_names(out);
            }
            Formula::Equals(s, t) => {
                s.collect_names(out);
                t.collect_names(out);
            }
        }
    }

    /// Whether the identifier occurs anywhere in the formula.
    pub fn mentions(&self, name: &str) -> bool {
        match self {
            Formula::Atom(p, args) => p == name || args.iter().any(|t| t.mentions(name)),
            Formula::Falsum => false,
            Formula::Not(a) => a.mentions(name),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.mentions(name) || b.mentions(name)
            }
            Formula::ForAll(v, a) | Formula::Exists(v, a) => v == name || a.mentions(name),
            Formula::Equals(s, t) => s.mentions(name) || t.mentions(name),
        }
    }

    /// Capture-avoiding substitution of `t` for the free occurrences of `v`.
    pub fn substitute(&self, v: &str, t: &Term) -> Formula {
        let mut map = BTreeMap::new();
        map.insert(v.to_string(), t.clone());
        self.substitute_all(&map)
    }

    /// Simultaneous capture-avoiding substitution. A binder that would
    /// capture a variable of an inserted term is renamed to its smallest
    /// unused primed variant (`y'`, `y''`, ...).
    pub fn substitute_all(&self, map: &BTreeMap<String, Term>) -> Formula {
        match self {
            Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|a| a.subst(map)).collect()),
            Formula::Falsum => Formula::Falsum,
            Formula::Not(a) => Formula::not(a.substitute_all(map)),
            Formula::And(a, b) => Formula::and(a.substitute_all(map), b.substitute_all(map)),
            Formula::Or(a, b) => Formula::or(a.substitute_all(map), b.substitute_all(map)),
            Formula::Implies(a, b) => Formula::implies(a.substitute_all(map), b.substitute_all(map)),
            Formula::Equals(s, t) => Formula::Equals(s.subst(map), t.subst(map)),
            Formula::ForAll(v, body) | Formula::Exists(v, body) => {
                let body_free = body.free_vars();
                let active: BTreeMap<String, Term> = map
                    .iter()
                    .filter(|(k, _)| *k != v && body_free.contains(*k))
                    .map(|(k, t)| (k.clone(), t.clone()))
                    .collect();
                if active.is_empty() {
                    return self.clone();
                }
                let captured = active.values().any(|t| t.free_vars().contains(v));
                let (binder, body) = if captured {
                    let mut avoid = body.names();
                    for (k, t) in &active {
                        avoid.insert(k.clone());
                        avoid.extend(t.free_vars());
                    }
                    let fresh = primed_variant(v, &avoid);
                    let renamed = body.substitute(v, &Term::Var(fresh.clone()));
                    (fresh, renamed)
                } else {
                    (v.clone(), (**body).clone())
                };
                let inner = body.substitute_all(&active);
                match self {
                    Formula::ForAll(..) => Formula::forall(binder, inner),
                    _ => Formula::exists(binder, inner),
                }
            }
        }
    }

    /// Replaces every occurrence of the term `from` by `to`, skipping
    /// positions where a binder would capture a variable of either term.
    pub fn replace_term(&self, from: &Term, to: &Term) -> Formula {
        match self {
            Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|a| a.replace(from, to)).collect()),
            Formula::Falsum => Formula::Falsum,
            Formula::Not(a) => Formula::not(a.replace_term(from, to)),
            Formula::And(a, b) => Formula::and(a.replace_term(from, to), b.replace_term(from, to)),
            Formula::Or(a, b) => Formula::or(a.replace_term(from, to), b.replace_term(from, to)),
            Formula::Implies(a, b) => Formula::implies(a.replace_term(from, to), b.replace_term(from, to)),
            Formula::Equals(s, t) => Formula::Equals(s.replace(from, to), t.replace(from, to)),
            Formula::ForAll(v, body) | Formula::Exists(v, body) => {
                if from.free_vars().contains(v) || to.free_vars().contains(v) {
                    return self.clone();
                }
                let inner = body.replace_term(from, to);
                match self {
                    Formula::ForAll(..) => Formula::forall(v.clone(), inner),
                    _ => Formula::exists(v.clone(), inner),
                }
            }
        }
    }

    /// Whether the term occurs as a subterm anywhere.
    pub fn contains_term(&self, t: &Term) -> bool {
        match self {
            Formula::Atom(_, args) => args.iter().any(|a| a.contains_term(t)),
            Formula::Falsum => false,
            Formula::Not(a) | Formula::ForAll(_, a) | Formula::Exists(_, a) => a.contains_term(t),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.contains_term(t) || b.contains_term(t)
            }
            Formula::Equals(a, b) => a.contains_term(t) || b.contains_term(t),
        }
    }

    /// Finds the term standing at the first free occurrence of `v` in
    /// `self` when `self` is laid over `instance`. Returns `Some(None)` when
    /// the shapes agree but `v` does not occur free. Binder names are not
    /// compared, so an instance produced by a renaming substitution is
    /// still walked correctly; callers confirm with [`Formula::substitute`].
    pub fn instance_witness(&self, v: &str, instance: &Formula) -> Option<Option<Term>> {
        let mut found = None;
        if walk_instance(self, instance, v, &mut BTreeSet::new(), &mut found) {
            Some(found)
        } else {
            None
        }
    }

    /// If `instance` equals `self[v := t]` for some term `t`, returns it
    /// (or `None` inside when `v` is not free and the formulas are equal).
    pub fn match_instance(&self, v: &str, instance: &Formula) -> Option<Option<Term>> {
        let witness = self.instance_witness(v, instance)?;
        match &witness {
            Some(t) => (self.substitute(v, t) == *instance).then_some(witness),
            None => (self == instance).then_some(None),
        }
    }

    /// First-order matching of a schema's free variables against a target.
    /// Bound names must agree exactly.
    pub fn match_schema(&self, target: &Formula) -> Option<BTreeMap<String, Term>> {
        let mut map = BTreeMap::new();
        if match_formula(self, target, &mut BTreeSet::new(), &mut map) {
            Some(map)
        } else {
            None
        }
    }

    /// Equality up to consistent renaming of bound variables.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        alpha(self, other, &mut Vec::new())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_unicode(self))
    }
}

pub use print::{print_ascii, print_latex, print_prefix, print_unicode, term_ascii, term_prefix, term_unicode};

fn primed_variant(base: &str, avoid: &BTreeSet<String>) -> String {
    let mut candidate = format!("{base}'");
    while avoid.contains(&candidate) {
        candidate.push('\'');
    }
    candidate
}

fn walk_term(p: &Term, t: &Term, v: &str, bound: &BTreeSet<String>, found: &mut Option<Term>) -> bool {
    match (p, t) {
        (Term::Var(x), _) if x == v && !bound.contains(v) => {
            if found.is_none() {
                *found = Some(t.clone());
            }
            true
        }
        (Term::Var(a), Term::Var(b)) => a == b || bound.contains(a),
        (Term::Const(a), Term::Const(b)) => a == b,
        (Term::Func(f, xs), Term::Func(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| walk_term(x, y, v, bound, found))
        }
        _ => false,
    }
}

fn walk_instance(p: &Formula, t: &Formula, v: &str, bound: &mut BTreeSet<String>, found: &mut Option<Term>) -> bool {
    match (p, t) {
        (Formula::Atom(a, xs), Formula::Atom(b, ys)) => {
            a == b && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| walk_term(x, y, v, bound, found))
        }
        (Formula::Falsum, Formula::Falsum) => true,
        (Formula::Not(a), Formula::Not(b)) => walk_instance(a, b, v, bound, found),
        (Formula::And(a1, b1), Formula::And(a2, b2))
        | (Formula::Or(a1, b1), Formula::Or(a2, b2))
        | (Formula::Implies(a1, b1), Formula::Implies(a2, b2)) => {
            walk_instance(a1, a2, v, bound, found) && walk_instance(b1, b2, v, bound, found)
        }
        (Formula::ForAll(x, a), Formula::ForAll(_, b)) | (Formula::Exists(x, a), Formula::Exists(_, b)) => {
            let fresh = bound.insert(x.clone());
            let ok = walk_instance(a, b, v, bound, found);
            if fresh {
                bound.remove(x);
            }
            ok
        }
        (Formula::Equals(s1, t1), Formula::Equals(s2, t2)) => {
            walk_term(s1, s2, v, bound, found) && walk_term(t1, t2, v, bound, found)
        }
        _ => false,
    }
}

fn match_term(p: &Term, t: &Term, bound: &BTreeSet<String>, map: &mut BTreeMap<String, Term>) -> bool {
    match p {
        Term::Var(x) if !bound.contains(x) => match map.get(x) {
            Some(existing) => existing == t,
            None => {
                if t.free_vars().iter().any(|fv| bound.contains(fv)) {
                    return false;
                }
                map.insert(x.clone(), t.clone());
                true
            }
        },
        Term::Func(f, xs) => match t {
            Term::Func(g, ys) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_term(x, y, bound, map))
            }
            _ => false,
        },
        _ => p == t,
    }
}

fn match_formula(p: &Formula, t: &Formula, bound: &mut BTreeSet<String>, map: &mut BTreeMap<String, Term>) -> bool {
    match (p, t) {
        (Formula::Atom(a, xs), Formula::Atom(b, ys)) => {
            a == b && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_term(x, y, bound, map))
        }
        (Formula::Falsum, Formula::Falsum) => true,
        (Formula::Not(a), Formula::Not(b)) => match_formula(a, b, bound, map),
        (Formula::And(a1, b1), Formula::And(a2, b2))
        | (Formula::Or(a1, b1), Formula::Or(a2, b2))
        | (Formula::Implies(a1, b1), Formula::Implies(a2, b2)) => {
            match_formula(a1, a2, bound, map) && match_formula(b1, b2, bound, map)
        }
        (Formula::ForAll(x, a), Formula::ForAll(y, b)) | (Formula::Exists(x, a), Formula::Exists(y, b)) => {
            if x != y {
                return false;
            }
            let fresh = bound.insert(x.clone());
            let ok = match_formula(a, b, bound, map);
            if fresh {
                bound.remove(x);
            }
            ok
        }
        (Formula::Equals(s1, t1), Formula::Equals(s2, t2)) => {
            match_term(s1, s2, bound, map) && match_term(t1, t2, bound, map)
        }
        _ => false,
    }
}

fn alpha_term(a: &Term, b: &Term, env: &[(String, String)]) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => {
            for (l, r) in env.iter().rev() {
                if l == x || r == y {
                    return l == x && r == y;
                }
            }
            x == y
        }
        (Term::Const(x), Term::Const(y)) => x == y,
        (Term::Func(f, xs), Term::Func(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha_term(x, y, env))
        }
        _ => false,
    }
}

fn alpha(a: &Formula, b: &Formula, env: &mut Vec<(String, String)>) -> bool {
    match (a, b) {
        (Formula::Atom(p, xs), Formula::Atom(q, ys)) => {
            p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha_term(x, y, env))
        }
        (Formula::Falsum, Formula::Falsum) => true,
        (Formula::Not(x), Formula::Not(y)) => alpha(x, y, env),
        (Formula::And(a1, b1), Formula::And(a2, b2))
        | (Formula::Or(a1, b1), Formula::Or(a2, b2))
        | (Formula::Implies(a1, b1), Formula::Implies(a2, b2)) => alpha(a1, a2, env) && alpha(b1, b2, env),
        (Formula::ForAll(x, p), Formula::ForAll(y, q)) | (Formula::Exists(x, p), Formula::Exists(y, q)) => {
            env.push((x.clone(), y.clone()));
            let ok = alpha(p, q, env);
            env.pop();
            ok
        }
        (Formula::Equals(s1, t1), Formula::Equals(s2, t2)) => alpha_term(s1, s2, env) && alpha_term(t1, t2, env),
        _ => false,
    }
}

/// Smallest-index eigenvariable constant `a1, a2, ...` not present in `used`.
pub fn fresh_constant(used: &BTreeSet<String>) -> Term {
    let mut i = 1usize;
    loop {
        let name = format!("a{i}");
        if !used.contains(&name) {
            return Term::Const(name);
        }
        i += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn p(x: Term) -> Formula {
        Formula::pred("P", vec![x])
    }

    #[test]
    fn free_vars_examples() {
        let f = Formula::forall("x", Formula::pred("P", vec![Term::var("x"), Term::var("y")]));
        assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), vec!["y".to_string()]);
        assert!(Formula::atom("p").free_vars().is_empty());
        let g = Formula::exists("x", Formula::implies(p(Term::var("x")), Formula::pred("Q", vec![Term::var("z")])));
        assert_eq!(g.free_vars().into_iter().collect::<Vec<_>>(), vec!["z".to_string()]);
    }

    #[test]
    fn substitute_simple_and_capture() {
        assert_eq!(p(Term::var("x")).substitute("x", &Term::zero()), p(Term::zero()));

        let f = Formula::forall("y", Formula::pred("P", vec![Term::var("x"), Term::var("y")]));
        let got = f.substitute("x", &Term::var("y"));
        let want = Formula::forall("y'", Formula::pred("P", vec![Term::var("y"), Term::var("y'")]));
        assert_eq!(got, want);
    }

    #[test]
    fn capture_skips_used_primes() {
        // y' is already taken inside the body, so the binder becomes y''.
        let f = Formula::forall(
            "y",
            Formula::pred("P", vec![Term::var("x"), Term::var("y"), Term::var("y'")]),
        );
        let got = f.substitute("x", &Term::var("y"));
        let want = Formula::forall(
            "y''",
            Formula::pred("P", vec![Term::var("y"), Term::var("y''"), Term::var("y'")]),
        );
        assert_eq!(got, want);
    }

    #[test]
    fn substitution_leaves_bound_occurrences() {
        let f = Formula::forall("x", p(Term::var("x")));
        assert_eq!(f.substitute("x", &Term::zero()), f);
    }

    #[test]
    fn fresh_constant_smallest_index() {
        let used = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
        assert_eq!(fresh_constant(&used(&[])), Term::constant("a1"));
        assert_eq!(fresh_constant(&used(&["a1", "a2"])), Term::constant("a3"));
        assert_eq!(fresh_constant(&used(&["a1", "a3"])), Term::constant("a2"));
    }

    #[test]
    fn instance_matching() {
        let body = Formula::and(p(Term::var("x")), Formula::pred("Q", vec![Term::var("x")]));
        let inst = body.substitute("x", &Term::constant("a1"));
        assert_eq!(body.match_instance("x", &inst), Some(Some(Term::constant("a1"))));
        assert_eq!(body.match_instance("x", &Formula::atom("p")), None);
        let closed = Formula::atom("q");
        assert_eq!(closed.match_instance("x", &closed), Some(None));
    }

    #[test]
    fn schema_matching() {
        let schema = Formula::equals(Term::plus(Term::var("x"), Term::zero()), Term::var("x"));
        let target = Formula::equals(Term::plus(Term::succ(Term::zero()), Term::zero()), Term::succ(Term::zero()));
        let m = schema.match_schema(&target).unwrap();
        assert_eq!(m.get("x"), Some(&Term::succ(Term::zero())));
        assert_eq!(schema.substitute_all(&m), target);
        let bad = Formula::equals(Term::plus(Term::zero(), Term::zero()), Term::succ(Term::zero()));
        assert!(schema.match_schema(&bad).is_none());
    }

    #[test]
    fn replace_term_all_occurrences() {
        let f = Formula::and(p(Term::constant("a")), Formula::pred("Q", vec![Term::constant("a"), Term::constant("b")]));
        let g = f.replace_term(&Term::constant("a"), &Term::constant("b"));
        assert_eq!(g, Formula::and(p(Term::constant("b")), Formula::pred("Q", vec![Term::constant("b"), Term::constant("b")])));
    }

    #[test]
    fn alpha_equivalence_is_separate() {
        let a = Formula::forall("x", p(Term::var("x")));
        let b = Formula::forall("y", p(Term::var("y")));
        assert_ne!(a, b);
        assert!(a.alpha_eq(&b));
        assert!(!a.alpha_eq(&Formula::forall("y", p(Term::var("x")))));
    }

    #[test]
    fn variable_convention() {
        assert!(is_variable_name("x"));
        assert!(is_variable_name("y'"));
        assert!(!is_variable_name("a1"));
        assert!(!is_variable_name("c"));
    }
}
