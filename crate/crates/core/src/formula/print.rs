use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Formula, Term, PLUS, SUCC, TIMES, ZERO};

#[derive(Clone, Copy)]
struct Symbols {
    not: &'static str,
    and: &'static str,
    or: &'static str,
    imp: &'static str,
    falsum: &'static str,
    forall: &'static str,
    exists: &'static str,
    binder_sep: &'static str,
    times: &'static str,
}

const UNICODE: Symbols = Symbols {
    not: "¬",
    and: " ∧ ",
    or: " ∨ ",
    imp: " → ",
    falsum: "⊥",
    forall: "∀",
    exists: "∃",
    binder_sep: " ",
    times: " · ",
};

const ASCII: Symbols = Symbols {
    not: "~",
    and: " & ",
    or: " | ",
    imp: " -> ",
    falsum: "#f",
    forall: "fa ",
    exists: "ex ",
    binder_sep: ". ",
    times: " * ",
};

/// Unicode rendering with minimal parentheses: ¬ binds tighter than ∧,
/// ∧ tighter than ∨, ∨ tighter than →; → is right-associative, ∧ and ∨
/// left-associative; a quantifier extends as far right as possible.
pub fn print_unicode(f: &Formula) -> String {
    show(f, true, &UNICODE)
}

/// Same layout as [`print_unicode`] using the ASCII aliases
/// `~ & | -> #f fa ex`.
pub fn print_ascii(f: &Formula) -> String {
    show(f, true, &ASCII)
}

pub fn term_unicode(t: &Term) -> String {
    show_term(t, &UNICODE)
}

pub fn term_ascii(t: &Term) -> String {
    show_term(t, &ASCII)
}

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Implies(..) => 1,
        Formula::Or(..) => 2,
        Formula::And(..) => 3,
        Formula::Not(_) => 4,
        _ => 5,
    }
}

fn show(f: &Formula, rightmost: bool, s: &Symbols) -> String {
    match f {
        Formula::Atom(p, args) => atom(p, args, s),
        Formula::Falsum => s.falsum.into(),
        Formula::Equals(a, b) => format!("{} = {}", show_term(a, s), show_term(b, s)),
        Formula::Not(a) => {
            let wrap = prec(a) < 4 || matches!(**a, Formula::Equals(..));
            format!("{}{}", s.not, child(a, wrap, rightmost, s))
        }
        Formula::And(a, b) => binary(a, b, 3, false, s.and, rightmost, s),
        Formula::Or(a, b) => binary(a, b, 2, false, s.or, rightmost, s),
        Formula::Implies(a, b) => binary(a, b, 1, true, s.imp, rightmost, s),
        Formula::ForAll(v, body) | Formula::Exists(v, body) => {
            let q = if matches!(f, Formula::ForAll(..)) { s.forall } else { s.exists };
            let text = format!("{q}{v}{}{}", s.binder_sep, show(body, true, s));
            if rightmost {
                text
            } else {
                format!("({text})")
            }
        }
    }
}

fn child(f: &Formula, wrap: bool, rightmost: bool, s: &Symbols) -> String {
    if wrap {
        format!("({})", show(f, true, s))
    } else {
        show(f, rightmost, s)
    }
}

#[allow(clippy::too_many_arguments)]
fn binary(a: &Formula, b: &Formula, p: u8, right_assoc: bool, op: &str, rightmost: bool, s: &Symbols) -> String {
    let wrap_left = prec(a) < p || (right_assoc && prec(a) == p);
    let wrap_right = prec(b) < p || (!right_assoc && prec(b) == p);
    format!(
        "{}{op}{}",
        child(a, wrap_left, false, s),
        child(b, wrap_right, rightmost, s)
    )
}

fn atom(p: &str, args: &[Term], s: &Symbols) -> String {
    if args.is_empty() {
        return p.into();
    }
    let parts: Vec<String> = args.iter().map(|t| show_term(t, s)).collect();
    format!("{p}({})", parts.join(", "))
}

fn term_prec(t: &Term) -> u8 {
    match t {
        Term::Func(f, args) if f == PLUS && args.len() == 2 => 1,
        Term::Func(f, args) if f == TIMES && args.len() == 2 => 2,
        _ => 3,
    }
}

fn show_term(t: &Term, s: &Symbols) -> String {
    match t {
        Term::Var(n) | Term::Const(n) => n.clone(),
        Term::Func(f, args) if (f == PLUS || f == TIMES) && args.len() == 2 => {
            let p = term_prec(t);
            let op = if f == PLUS { " + " } else { s.times };
            let l = if term_prec(&args[0]) < p {
                format!("({})", show_term(&args[0], s))
            } else {
                show_term(&args[0], s)
            };
            let r = if term_prec(&args[1]) <= p {
                format!("({})", show_term(&args[1], s))
            } else {
                show_term(&args[1], s)
            };
            format!("{l}{op}{r}")
        }
        Term::Func(f, args) => {
            let parts: Vec<String> = args.iter().map(|a| show_term(a, s)).collect();
            format!("{f}({})", parts.join(", "))
        }
    }
}

/// Canonical storage form: TeX macros in prefix notation, no whitespace.
pub fn print_prefix(f: &Formula) -> String {
    let mut out = String::new();
    prefix_into(f, &mut out);
    out
}

/// LaTeX form used by the exporter. It is the storage form itself, since
/// the bundled style file defines every macro it uses.
pub fn print_latex(f: &Formula) -> String {
    print_prefix(f)
}

pub fn term_prefix(t: &Term) -> String {
    let mut out = String::new();
    term_prefix_into(t, &mut out);
    out
}

fn prefix_into(f: &Formula, out: &mut String) {
    let macro2 = |name: &str, a: &Formula, b: &Formula, out: &mut String| {
        out.push_str(name);
        out.push('{');
        prefix_into(a, out);
        out.push_str("}{");
        prefix_into(b, out);
        out.push('}');
    };
    match f {
        Formula::Atom(p, args) => {
            out.push_str(p);
            if !args.is_empty() {
                out.push('(');
                for (i, t) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    term_prefix_into(t, out);
                }
                out.push(')');
            }
        }
        Formula::Falsum => out.push_str("\\falsum"),
        Formula::Not(a) => {
            out.push_str("\\neg{");
            prefix_into(a, out);
            out.push('}');
        }
        Formula::And(a, b) => macro2("\\con", a, b, out),
        Formula::Or(a, b) => macro2("\\dis", a, b, out),
        Formula::Implies(a, b) => macro2("\\imp", a, b, out),
        Formula::ForAll(v, a) | Formula::Exists(v, a) => {
            out.push_str(if matches!(f, Formula::ForAll(..)) { "\\all{" } else { "\\some{" });
            out.push_str(v);
            out.push_str("}{");
            prefix_into(a, out);
            out.push('}');
        }
        Formula::Equals(s, t) => {
            out.push_str("\\eq{");
            term_prefix_into(s, out);
            out.push_str("}{");
            term_prefix_into(t, out);
            out.push('}');
        }
    }
}

fn term_prefix_into(t: &Term, out: &mut String) {
    match t {
        Term::Const(n) if n == ZERO => out.push_str("\\zero"),
        Term::Var(n) | Term::Const(n) => out.push_str(n),
        Term::Func(f, args) if f == SUCC && args.len() == 1 => {
            out.push_str("\\suc{");
            term_prefix_into(&args[0], out);
            out.push('}');
        }
        Term::Func(f, args) if (f == PLUS || f == TIMES) && args.len() == 2 => {
            out.push_str(if f == PLUS { "\\plus{" } else { "\\times{" });
            term_prefix_into(&args[0], out);
            out.push_str("}{");
            term_prefix_into(&args[1], out);
            out.push('}');
        }
        Term::Func(f, args) => {
            out.push_str(f);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                term_prefix_into(a, out);
            }
            out.push(')');
        }
    }
}
