use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{is_ident_continue, is_ident_start, is_variable_name, Formula, ParseError, Term, PLUS, SUCC, TIMES};

/// Parses the TeX-macro prefix encoding:
///
/// ```text
/// F ::= \falsum | \neg{F} | \con{F}{F} | \dis{F}{F} | \imp{F}{F}
///     | \all{v}{F} | \some{v}{F} | \eq{t}{t} | ident | ident(t,...)
/// t ::= ident | \zero | \suc{t} | \plus{t}{t} | \times{t}{t} | ident(t,...)
/// ```
///
/// Whitespace between tokens is ignored.
pub fn parse_prefix(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text);
    let f = p.formula()?;
    p.end()?;
    check_arities(&f)?;
    Ok(f)
}

pub fn parse_term_prefix(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text);
    let t = p.term()?;
    p.end()?;
    check_term_arities(&t, &mut BTreeMap::new())?;
    Ok(t)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    bound: Vec<String>,
}

impl Parser {
    fn new(text: &str) -> Self {
        Parser { chars: text.chars().collect(), pos: 0, bound: Vec::new() }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn err<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax { position: self.pos, expected: expected.to_string() })
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(&alloc::format!("`{c}`"))
        }
    }

    fn end(&mut self) -> Result<(), ParseError> {
        if self.peek().is_some() {
            self.err("end of input")
        } else {
            Ok(())
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(c) if is_ident_start(c) => {
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|&c| is_ident_continue(c)) {
                    self.pos += 1;
                }
                Ok(self.chars[start..self.pos].iter().collect())
            }
            _ => self.err("identifier"),
        }
    }

    fn macro_name(&mut self) -> Result<String, ParseError> {
        self.expect('\\')?;
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn braced_formula(&mut self) -> Result<Formula, ParseError> {
        self.expect('{')?;
        let f = self.formula()?;
        self.expect('}')?;
        Ok(f)
    }

    fn braced_term(&mut self) -> Result<Term, ParseError> {
        self.expect('{')?;
        let t = self.term()?;
        self.expect('}')?;
        Ok(t)
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some('\\') => {
                let at = self.pos;
                let name = self.macro_name()?;
                match name.as_str() {
                    "falsum" => Ok(Formula::Falsum),
                    "neg" => Ok(Formula::not(self.braced_formula()?)),
                    "con" | "dis" | "imp" => {
                        let a = self.braced_formula()?;
                        let b = self.braced_formula()?;
                        Ok(match name.as_str() {
                            "con" => Formula::and(a, b),
                            "dis" => Formula::or(a, b),
                            _ => Formula::implies(a, b),
                        })
                    }
                    "all" | "some" => {
                        self.expect('{')?;
                        let v = self.ident()?;
                        self.expect('}')?;
                        self.bound.push(v.clone());
                        let body = self.braced_formula();
                        self.bound.pop();
                        let body = body?;
                        Ok(if name == "all" { Formula::forall(v, body) } else { Formula::exists(v, body) })
                    }
                    "eq" => {
                        let s = self.braced_term()?;
                        let t = self.braced_term()?;
                        Ok(Formula::Equals(s, t))
                    }
                    _ => {
                        self.pos = at;
                        self.err("formula macro (\\falsum, \\neg, \\con, \\dis, \\imp, \\all, \\some, \\eq)")
                    }
                }
            }
            Some(c) if is_ident_start(c) => {
                let p = self.ident()?;
                let args = if self.peek() == Some('(') { self.args()? } else { Vec::new() };
                Ok(Formula::Atom(p, args))
            }
            _ => self.err("formula"),
        }
    }

    fn args(&mut self) -> Result<Vec<Term>, ParseError> {
        self.expect('(')?;
        let mut args = alloc::vec![self.term()?];
        while self.peek() == Some(',') {
            self.pos += 1;
            args.push(self.term()?);
        }
        self.expect(')')?;
        Ok(args)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some('\\') => {
                let at = self.pos;
                let name = self.macro_name()?;
                match name.as_str() {
                    "zero" => Ok(Term::zero()),
                    "suc" => Ok(Term::succ(self.braced_term()?)),
                    "plus" | "times" => {
                        let a = self.braced_term()?;
                        let b = self.braced_term()?;
                        Ok(if name == "plus" { Term::plus(a, b) } else { Term::times(a, b) })
                    }
                    _ => {
                        self.pos = at;
                        self.err("term macro (\\zero, \\suc, \\plus, \\times)")
                    }
                }
            }
            Some(c) if is_ident_start(c) => {
                let name = self.ident()?;
                if self.peek() == Some('(') {
                    let args = self.args()?;
                    return Ok(Term::Func(name, args));
                }
                Ok(name_term(name, &self.bound))
            }
            _ => self.err("term"),
        }
    }
}

/// Bound identifiers and those following the variable convention are
/// variables; the rest are constants.
pub(crate) fn name_term(name: String, bound: &[String]) -> Term {
    if bound.contains(&name) || is_variable_name(&name) {
        Term::Var(name)
    } else {
        Term::Const(name)
    }
}

fn record(symbol: &str, arity: usize, seen: &mut BTreeMap<String, usize>) -> Result<(), ParseError> {
    let fixed = match symbol {
        s if s == SUCC => Some(1),
        s if s == PLUS || s == TIMES => Some(2),
        _ => None,
    };
    let expected = fixed.or_else(|| seen.get(symbol).copied());
    if let Some(expected) = expected {
        if expected != arity {
            return Err(ParseError::Arity { symbol: symbol.to_string(), expected, found: arity });
        }
    }
    seen.insert(symbol.to_string(), arity);
    Ok(())
}

fn check_term_arities(t: &Term, seen: &mut BTreeMap<String, usize>) -> Result<(), ParseError> {
    if let Term::Func(f, args) = t {
        record(f, args.len(), seen)?;
        for a in args {
            check_term_arities(a, seen)?;
        }
    }
    Ok(())
}

/// Each predicate and function symbol must keep one arity throughout the
/// formula; the arithmetic symbols have fixed arities.
pub(crate) fn check_arities(f: &Formula) -> Result<(), ParseError> {
    fn go(
        f: &Formula,
        preds: &mut BTreeMap<String, usize>,
        funcs: &mut BTreeMap<String, usize>,
    ) -> Result<(), ParseError> {
        match f {
            Formula::Atom(p, args) => {
                if let Some(&n) = preds.get(p) {
                    if n != args.len() {
                        return Err(ParseError::Arity { symbol: p.clone(), expected: n, found: args.len() });
                    }
                }
                preds.insert(p.clone(), args.len());
                args.iter().try_for_each(|t| check_term_arities(t, funcs))
            }
            Formula::Falsum => Ok(()),
            Formula::Not(a) | Formula::ForAll(_, a) | Formula::Exists(_, a) => go(a, preds, funcs),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                go(a, preds, funcs)?;
                go(b, preds, funcs)
            }
            Formula::Equals(s, t) => {
                check_term_arities(s, funcs)?;
                check_term_arities(t, funcs)
            }
        }
    }
    go(f, &mut BTreeMap::new(), &mut BTreeMap::new())
}
