//! Independent validation of a proof state.
//!
//! The checker re-derives box structure and scope from the layout itself
//! and inspects every justified line against its rule. It shares no code
//! with the engine beyond the formula operations.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::EngineError;
use crate::formula::{Formula, Term};
use crate::proof::{LineNo, Node, ProofLine, ProofState, Ref, Status};
use crate::rules::{RuleId, SystemProfile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum DiagCode {
    ScopeViolation,
    ShapeMismatch,
    BadRange,
    BadNumbering,
    EigenvariableViolation,
    RuleNotInSystem,
    UnjustifiedLine,
}

impl DiagCode {
    pub fn as_str(&self) -> &'static str {
        match self {
            DiagCode::ScopeViolation => "ScopeViolation",
            DiagCode::ShapeMismatch => "ShapeMismatch",
            DiagCode::BadRange => "BadRange",
            DiagCode::BadNumbering => "BadNumbering",
            DiagCode::EigenvariableViolation => "EigenvariableViolation",
            DiagCode::RuleNotInSystem => "RuleNotInSystem",
            DiagCode::UnjustifiedLine => "UnjustifiedLine",
        }
    }
}

impl fmt::Display for DiagCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: LineNo,
    pub code: DiagCode,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    /// `<creation>:<code>:<message>`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.line, self.code, self.message)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Complete,
    IncompleteButSound,
    Invalid,
}

impl CheckStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            CheckStatus::Complete => "Complete",
            CheckStatus::IncompleteButSound => "IncompleteButSound",
            CheckStatus::Invalid => "Invalid",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub status: CheckStatus,
    pub diagnostics: Vec<Diagnostic>,
}

struct Row<'a> {
    line: &'a ProofLine,
    /// Enclosing boxes, outermost first, named by the row that opens them.
    chain: Vec<usize>,
}

struct View<'a> {
    rows: Vec<Row<'a>>,
    by_creation: BTreeMap<LineNo, usize>,
    /// Last row of each box.
    box_end: BTreeMap<usize, usize>,
    system: &'a SystemProfile,
}

fn walk<'a>(nodes: &'a [Node], chain: &mut Vec<usize>, rows: &mut Vec<Row<'a>>, ends: &mut BTreeMap<usize, usize>) {
    for node in nodes {
        match node {
            Node::Line(line) => rows.push(Row { line, chain: chain.clone() }),
            Node::Box(inner) => {
                let open = rows.len();
                chain.push(open);
                walk(inner, chain, rows, ends);
                chain.pop();
                if rows.len() > open {
                    ends.insert(open, rows.len() - 1);
                }
            }
        }
    }
}

impl<'a> View<'a> {
    fn new(state: &'a ProofState) -> Self {
        let mut rows = Vec::new();
        let mut box_end = BTreeMap::new();
        walk(&state.layout, &mut Vec::new(), &mut rows, &mut box_end);
        let mut by_creation = BTreeMap::new();
        for (i, r) in rows.iter().enumerate() {
            by_creation.entry(r.line.creation).or_insert(i);
        }
        View { rows, by_creation, box_end, system: &state.system }
    }

    /// Row `i` is visible from row `at`: above it, in a box still open there.
    fn visible(&self, i: usize, at: usize) -> bool {
        i < at && self.rows[i].chain.iter().all(|b| self.rows[at].chain.contains(b))
    }

    fn is_assumption(&self, i: usize) -> bool {
        self.rows[i].line.justification.as_ref().is_some_and(|j| j.rule == RuleId::Ass)
    }

    fn open_assumptions(&self, at: usize) -> impl Iterator<Item = &ProofLine> + '_ {
        (0..at).filter(move |&i| self.visible(i, at) && self.is_assumption(i)).map(|i| self.rows[i].line)
    }

    fn premises(&self) -> impl Iterator<Item = &ProofLine> + '_ {
        self.rows
            .iter()
            .map(|r| r.line)
            .filter(|l| l.justification.as_ref().is_some_and(|j| j.rule == RuleId::Prem))
    }
}

type Check<T> = Result<T, (DiagCode, String)>;

fn fail<T>(code: DiagCode, msg: impl Into<String>) -> Check<T> {
    Err((code, msg.into()))
}

/// Rule matching is syntactic; bound names must agree too.
fn same(a: &Formula, b: &Formula) -> bool {
    a == b
}

fn shape_unless(ok: bool, msg: &str) -> Check<()> {
    if ok {
        Ok(())
    } else {
        fail(DiagCode::ShapeMismatch, msg)
    }
}

impl View<'_> {
    fn line_ref(&self, r: &Ref, at: usize) -> Check<&Formula> {
        let Ref::Line(n) = r else { return fail(DiagCode::ShapeMismatch, format!("expected a line, found range {r}")) };
        let Some(&i) = self.by_creation.get(n) else { return fail(DiagCode::BadRange, format!("line {n} does not exist")) };
        if !self.visible(i, at) {
            return fail(DiagCode::ScopeViolation, format!("line {n} is not in scope"));
        }
        Ok(&self.rows[i].line.formula)
    }

    /// A closed box in scope: its assumption and its last line.
    fn range_ref(&self, r: &Ref, at: usize) -> Check<(&Formula, &Formula, usize)> {
        let Ref::Range(a, b) = r else { return fail(DiagCode::ShapeMismatch, format!("expected a range, found line {r}")) };
        let (Some(&ia), Some(&ib)) = (self.by_creation.get(a), self.by_creation.get(b)) else {
            return fail(DiagCode::BadRange, format!("range {r} names a missing line"));
        };
        if self.box_end.get(&ia) != Some(&ib) || self.rows[ia].chain.last() != Some(&ia) {
            return fail(DiagCode::BadRange, format!("{r} is not a whole box"));
        }
        let outer = &self.rows[ia].chain[..self.rows[ia].chain.len() - 1];
        let here = &self.rows[at].chain;
        if ia >= at || here.contains(&ia) || !outer.iter().all(|b| here.contains(b)) {
            return fail(DiagCode::ScopeViolation, format!("box {r} is not closed and in scope"));
        }
        if !self.is_assumption(ia) {
            return fail(DiagCode::BadRange, format!("box {r} does not open with an assumption"));
        }
        Ok((&self.rows[ia].line.formula, &self.rows[ib].line.formula, ia))
    }

    fn eigenvariable(&self, c: &Term, at: usize, avoid: &[&Formula]) -> Check<()> {
        let name = match c {
            Term::Var(n) | Term::Const(n) => n,
            Term::Func(..) => return fail(DiagCode::EigenvariableViolation, format!("{c} is not a name")),
        };
        if avoid.iter().any(|f| f.mentions(name)) {
            return fail(DiagCode::EigenvariableViolation, format!("{name} occurs in the conclusion"));
        }
        if let Some(p) = self.premises().find(|l| l.formula.mentions(name)) {
            return fail(DiagCode::EigenvariableViolation, format!("{name} occurs in premise {}", p.creation));
        }
        if let Some(a) = self.open_assumptions(at).find(|l| l.formula.mentions(name)) {
            return fail(DiagCode::EigenvariableViolation, format!("{name} occurs in open assumption {}", a.creation));
        }
        Ok(())
    }

    fn check_row(&self, at: usize) -> Check<()> {
        let line = self.rows[at].line;
        if line.status == Status::Goal {
            return Ok(());
        }
        let Some(j) = &line.justification else {
            return fail(DiagCode::UnjustifiedLine, "justified line has no justification");
        };
        let g = &line.formula;
        let refs = &j.refs;
        let arity = |n: usize| -> Check<()> {
            if refs.len() == n {
                Ok(())
            } else {
                fail(DiagCode::ShapeMismatch, format!("{} takes {n} references, found {}", j.rule, refs.len()))
            }
        };
        match &j.rule {
            RuleId::Prem => {
                arity(0)?;
                if !self.rows[at].chain.is_empty() {
                    return fail(DiagCode::ScopeViolation, "premise inside a box");
                }
                return Ok(());
            }
            RuleId::Ass => {
                arity(0)?;
                if self.rows[at].chain.last() != Some(&at) {
                    return fail(DiagCode::ScopeViolation, "assumption does not open a box");
                }
                return Ok(());
            }
            RuleId::Ax(name) => {
                let Some(axiom) = self.system.axiom(name) else {
                    return fail(DiagCode::RuleNotInSystem, format!("axiom {name} is not in {}", self.system.name.as_str()));
                };
                if !self.system.allows(&j.rule) {
                    return fail(DiagCode::RuleNotInSystem, format!("axiom {name} is not enabled"));
                }
                arity(0)?;
                return shape_unless(axiom.formula.match_schema(g).is_some(), "not an instance of the axiom");
            }
            rule if !self.system.allows(rule) => {
                return fail(DiagCode::RuleNotInSystem, format!("{rule} is not a rule of {}", self.system.name.as_str()));
            }
            _ => {}
        }
        match &j.rule {
            RuleId::AndI => {
                arity(2)?;
                let (a, b) = (self.line_ref(&refs[0], at)?, self.line_ref(&refs[1], at)?);
                shape_unless(matches!(g, Formula::And(l, r) if same(l, a) && same(r, b)), "∧I: conclusion is not the conjunction of its references")
            }
            RuleId::OrI => {
                arity(1)?;
                let a = self.line_ref(&refs[0], at)?;
                shape_unless(matches!(g, Formula::Or(l, r) if same(l, a) || same(r, a)), "∨I: reference is not a disjunct")
            }
            RuleId::ImpI => {
                arity(1)?;
                let (a, b, _) = self.range_ref(&refs[0], at)?;
                shape_unless(matches!(g, Formula::Implies(l, r) if same(l, a) && same(r, b)), "→I: box does not match the implication")
            }
            RuleId::NotI => {
                arity(1)?;
                let (a, b, _) = self.range_ref(&refs[0], at)?;
                shape_unless(*b == Formula::Falsum && matches!(g, Formula::Not(l) if same(l, a)), "¬I: box must assume the negated formula and end in ⊥")
            }
            RuleId::DoubleNegE => {
                arity(1)?;
                let a = self.line_ref(&refs[0], at)?;
                shape_unless(same(a, &Formula::not(Formula::not(g.clone()))), "¬¬E: reference is not the double negation")
            }
            RuleId::ForallI => {
                arity(1)?;
                let a = self.line_ref(&refs[0], at)?;
                let Formula::ForAll(x, body) = g else { return fail(DiagCode::ShapeMismatch, "∀I: conclusion is not universal") };
                match body.match_instance(x, a) {
                    None => fail(DiagCode::ShapeMismatch, "∀I: reference is not an instance"),
                    Some(None) => Ok(()),
                    Some(Some(c)) => self.eigenvariable(&c, at, &[g]),
                }
            }
            RuleId::ExistsI => {
                arity(1)?;
                let a = self.line_ref(&refs[0], at)?;
                let Formula::Exists(x, body) = g else { return fail(DiagCode::ShapeMismatch, "∃I: conclusion is not existential") };
                shape_unless(body.match_instance(x, a).is_some(), "∃I: reference is not an instance")
            }
            RuleId::EqI => {
                arity(0)?;
                shape_unless(matches!(g, Formula::Equals(s, t) if s == t), "=I: sides differ")
            }
            RuleId::Ind => {
                arity(2)?;
                let (base, step) = (self.line_ref(&refs[0], at)?, self.line_ref(&refs[1], at)?);
                let Formula::ForAll(x, body) = g else { return fail(DiagCode::ShapeMismatch, "Ind: conclusion is not universal") };
                let want_base = body.substitute(x, &Term::zero());
                let want_step = Formula::forall(
                    x.clone(),
                    Formula::implies((**body).clone(), body.substitute(x, &Term::succ(Term::Var(x.clone())))),
                );
                shape_unless(same(base, &want_base) && same(step, &want_step), "Ind: base or step case does not match")
            }
            RuleId::Re => {
                arity(1)?;
                let a = self.line_ref(&refs[0], at)?;
                shape_unless(same(a, g), "Re: reference differs from the line")
            }
            RuleId::AndE => {
                arity(1)?;
                let a = self.line_ref(&refs[0], at)?;
                shape_unless(matches!(a, Formula::And(l, r) if same(l, g) || same(r, g)), "∧E: line is not a conjunct of the reference")
            }
            RuleId::ImpE => {
                arity(2)?;
                let (imp, ante) = (self.line_ref(&refs[0], at)?, self.line_ref(&refs[1], at)?);
                shape_unless(matches!(imp, Formula::Implies(l, r) if same(l, ante) && same(r, g)), "→E: references do not yield the line")
            }
            RuleId::NotE => {
                arity(2)?;
                let (neg, pos) = (self.line_ref(&refs[0], at)?, self.line_ref(&refs[1], at)?);
                shape_unless(*g == Formula::Falsum && matches!(neg, Formula::Not(l) if same(l, pos)), "¬E: references are not contradictory or line is not ⊥")
            }
            RuleId::OrE => {
                arity(3)?;
                let dis = self.line_ref(&refs[0], at)?;
                let (a1, c1, _) = self.range_ref(&refs[1], at)?;
                let (a2, c2, _) = self.range_ref(&refs[2], at)?;
                shape_unless(
                    matches!(dis, Formula::Or(l, r) if same(l, a1) && same(r, a2)) && same(c1, g) && same(c2, g),
                    "∨E: boxes do not discharge the disjuncts into the line",
                )
            }
            RuleId::FalsumE => {
                arity(1)?;
                let a = self.line_ref(&refs[0], at)?;
                shape_unless(*a == Formula::Falsum, "⊥E: reference is not ⊥")
            }
            RuleId::ForallE => {
                arity(1)?;
                let a = self.line_ref(&refs[0], at)?;
                shape_unless(matches!(a, Formula::ForAll(x, body) if body.match_instance(x, g).is_some()), "∀E: line is not an instance of the reference")
            }
            RuleId::ExistsE => {
                arity(2)?;
                let ex = self.line_ref(&refs[0], at)?;
                let (a, c, ia) = self.range_ref(&refs[1], at)?;
                let Formula::Exists(x, body) = ex else { return fail(DiagCode::ShapeMismatch, "∃E: reference is not existential") };
                if !same(c, g) {
                    return fail(DiagCode::ShapeMismatch, "∃E: box does not end in the line");
                }
                match body.match_instance(x, a) {
                    None => fail(DiagCode::ShapeMismatch, "∃E: box does not assume an instance"),
                    Some(None) => Ok(()),
                    Some(Some(w)) => self.eigenvariable(&w, ia, &[g, ex]),
                }
            }
            RuleId::EqE => {
                arity(2)?;
                let (eq, target) = (self.line_ref(&refs[0], at)?, self.line_ref(&refs[1], at)?);
                shape_unless(matches!(eq, Formula::Equals(s, t) if same(&target.replace_term(s, t), g)), "=E: rewriting does not give the line")
            }
            RuleId::Prem | RuleId::Ass | RuleId::Ax(_) => unreachable!(),
        }
    }

    fn numbering(&self, next_creation: LineNo) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for r in &self.rows {
            let n = r.line.creation;
            if n == 0 || n >= next_creation || !seen.insert(n) {
                out.push(Diagnostic { line: n, code: DiagCode::BadNumbering, message: format!("creation number {n} is invalid or repeated") });
            }
        }
        for (k, p) in self.premises().enumerate() {
            if p.creation as usize != k + 1 {
                out.push(Diagnostic { line: p.creation, code: DiagCode::BadNumbering, message: format!("premise numbered {} should be {}", p.creation, k + 1) });
            }
        }
        for &open in self.box_end.keys() {
            if !self.is_assumption(open) {
                let n = self.rows[open].line.creation;
                out.push(Diagnostic { line: n, code: DiagCode::ScopeViolation, message: "box does not open with an assumption".into() });
            }
        }
        out
    }
}

/// Checks every line. Any diagnostic makes the proof invalid; otherwise it
/// is complete when no goals remain.
pub fn check_proof(state: &ProofState) -> CheckReport {
    let view = View::new(state);
    let mut diagnostics = view.numbering(state.next_creation);
    for at in 0..view.rows.len() {
        if let Err((code, message)) = view.check_row(at) {
            diagnostics.push(Diagnostic { line: view.rows[at].line.creation, code, message });
        }
    }
    let status = if !diagnostics.is_empty() {
        CheckStatus::Invalid
    } else if view.rows.iter().any(|r| r.line.status == Status::Goal) {
        CheckStatus::IncompleteButSound
    } else {
        CheckStatus::Complete
    };
    CheckReport { status, diagnostics }
}

/// Diagnostics for a single line.
pub fn check_line(state: &ProofState, creation: LineNo) -> Result<Vec<Diagnostic>, EngineError> {
    let view = View::new(state);
    let &at = view.by_creation.get(&creation).ok_or(EngineError::NoSuchLine(creation))?;
    Ok(match view.check_row(at) {
        Ok(()) => Vec::new(),
        Err((code, message)) => alloc::vec![Diagnostic { line: creation, code, message }],
    })
}
