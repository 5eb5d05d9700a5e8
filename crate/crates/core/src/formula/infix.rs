use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::prefix::{check_arities, name_term};
use super::{is_ident_continue, is_ident_start, Formula, ParseError, Term};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Zero,
    LParen,
    RParen,
    Comma,
    Dot,
    Not,
    And,
    Or,
    Imp,
    Falsum,
    ForAll,
    Exists,
    Eq,
    Plus,
    Times,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '¬' | '~' => Tok::Not,
            '∧' | '&' => Tok::And,
            '∨' | '|' => Tok::Or,
            '→' => Tok::Imp,
            '-' if chars.get(i + 1) == Some(&'>') => {
                i += 1;
                Tok::Imp
            }
            '⊥' => Tok::Falsum,
            '#' if chars.get(i + 1) == Some(&'f') => {
                i += 1;
                Tok::Falsum
            }
            '∀' => Tok::ForAll,
            '∃' => Tok::Exists,
            '=' => Tok::Eq,
            '+' => Tok::Plus,
            '·' | '*' => Tok::Times,
            '0' => Tok::Zero,
            c if is_ident_start(c) => {
                while chars.get(i + 1).is_some_and(|&c| is_ident_continue(c)) {
                    i += 1;
                }
                let word: String = chars[start..=i].iter().collect();
                match word.as_str() {
                    "fa" => Tok::ForAll,
                    "ex" => Tok::Exists,
                    _ => Tok::Ident(word),
                }
            }
            _ => {
                return Err(ParseError::Syntax { position: start, expected: "formula symbol".to_string() });
            }
        };
        i += 1;
        out.push((tok, start));
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

/// Parses the user-facing infix notation. Precedence from tightest:
/// `¬`, `∧`, `∨`, `→`; `→` associates to the right, `∧`/`∨` to the left;
/// `∀x.` and `∃x.` scope as far right as possible (the dot is optional).
/// ASCII aliases: `~ & | -> #f fa ex`, and `*` for `·`.
pub fn parse_infix(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, bound: Vec::new() };
    let f = p.imp()?;
    p.expect(Tok::End, "end of input")?;
    check_arities(&f)?;
    Ok(f)
}

pub fn parse_term_infix(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, bound: Vec::new() };
    let t = p.sum()?;
    p.expect(Tok::End, "end of input")?;
    check_arities(&Formula::Equals(t.clone(), t.clone()))?;
    Ok(t)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    bound: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax { position: self.toks[self.pos].1, expected: expected.to_string() })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.err(what)
        }
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Imp {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::ForAll | Tok::Exists => {
                let universal = self.bump() == Tok::ForAll;
                let v = match self.bump() {
                    Tok::Ident(v) => v,
                    _ => {
                        self.pos -= 1;
                        return self.err("bound variable");
                    }
                };
                if *self.peek() == Tok::Dot {
                    self.bump();
                }
                self.bound.push(v.clone());
                let body = self.imp();
                self.bound.pop();
                let body = body?;
                Ok(if universal { Formula::forall(v, body) } else { Formula::exists(v, body) })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        let save = self.pos;
        if let Ok(lhs) = self.sum() {
            if *self.peek() == Tok::Eq {
                self.bump();
                let rhs = self.sum()?;
                return Ok(Formula::Equals(lhs, rhs));
            }
        }
        self.pos = save;
        match self.bump() {
            Tok::LParen => {
                let f = self.imp()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Falsum => Ok(Formula::Falsum),
            Tok::Ident(p) => {
                let args = if *self.peek() == Tok::LParen { self.args()? } else { Vec::new() };
                Ok(Formula::Atom(p, args))
            }
            _ => {
                self.pos = save;
                self.err("formula")
            }
        }
    }

    fn args(&mut self) -> Result<Vec<Term>, ParseError> {
        self.expect(Tok::LParen, "`(`")?;
        let mut args = alloc::vec![self.sum()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.sum()?);
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(args)
    }

    fn sum(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.product()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            lhs = Term::plus(lhs, self.product()?);
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.term_primary()?;
        while *self.peek() == Tok::Times {
            self.bump();
            lhs = Term::times(lhs, self.term_primary()?);
        }
        Ok(lhs)
    }

    fn term_primary(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Zero => {
                self.bump();
                Ok(Term::zero())
            }
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() == Tok::LParen {
                    let args = self.args()?;
                    return Ok(Term::Func(name, args));
                }
                Ok(name_term(name, &self.bound))
            }
            Tok::LParen => {
                self.bump();
                let t = self.sum()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => self.err("term"),
        }
    }
}
