use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{Applicable, ApplyMode, Need, RuleApplication, RuleId, RuleKind, Side};
use crate::error::EngineError;
use crate::formula::{fresh_constant, Formula, Term};
use crate::proof::{Justification, LineNo, Node, ProofLine, ProofState, Ref, Role, Selection, Status};

/// Upper bound on magic-mode rounds.
pub const MAGIC_ROUNDS: usize = 10;

/// Rules magic mode may use: goal-driven and free of any extra input.
const MAGIC_RULES: [RuleId; 6] = [RuleId::Re, RuleId::AndI, RuleId::ImpI, RuleId::NotI, RuleId::ForallI, RuleId::EqI];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Applied {
    pub state: ProofState,
    /// The application as it should be recorded: eigenvariables picked by
    /// the engine and the line used by `Re` are filled in.
    pub record: RuleApplication,
}

fn shape<T>(msg: impl Into<String>) -> Result<T, EngineError> {
    Err(EngineError::ShapeMismatch(msg.into()))
}

struct Builder<'a> {
    st: &'a mut ProofState,
    goal: LineNo,
    new_goals: Vec<LineNo>,
}

impl Builder<'_> {
    fn number(&mut self) -> LineNo {
        let n = self.st.next_creation;
        self.st.next_creation += 1;
        n
    }

    fn goal_node(&mut self, formula: Formula) -> (LineNo, Node) {
        let n = self.number();
        self.new_goals.push(n);
        (n, Node::Line(ProofLine::goal(n, formula)))
    }

    fn assumption(&mut self, formula: Formula) -> (LineNo, Node) {
        let n = self.number();
        let line = ProofLine {
            creation: n,
            formula,
            status: Status::Justified,
            justification: Some(Justification::new(RuleId::Ass, Vec::new())),
            role: Role::Assumption,
        };
        (n, Node::Line(line))
    }

    fn derived(&mut self, formula: Formula, rule: RuleId, refs: Vec<Ref>) -> Node {
        let n = self.number();
        Node::Line(ProofLine {
            creation: n,
            formula,
            status: Status::Justified,
            justification: Some(Justification::new(rule, refs)),
            role: Role::Derived,
        })
    }

    fn insert(&mut self, nodes: Vec<Node>) -> Result<(), EngineError> {
        if nodes.is_empty() {
            return Ok(());
        }
        self.st.insert_above(self.goal, nodes)
    }

    fn justify(&mut self, rule: RuleId, refs: Vec<Ref>) {
        let line = self.st.line_mut(self.goal).expect("goal line exists");
        line.status = Status::Justified;
        line.justification = Some(Justification::new(rule, refs));
    }

    /// An in-scope line with the given formula, or a new goal for it.
    fn antecedent(&mut self, formula: &Formula) -> (LineNo, Option<Node>) {
        let existing = self
            .st
            .scope_lines(self.goal)
            .into_iter()
            .find(|l| l.formula == *formula)
            .map(|l| l.creation);
        match existing {
            Some(n) => (n, None),
            None => {
                let (n, node) = self.goal_node(formula.clone());
                (n, Some(node))
            }
        }
    }
}

/// Eigenvariable condition: `c` is a bare name not occurring in the
/// formulas given, in any premise, or in any open assumption at `goal`.
fn check_eigenvariable(st: &ProofState, goal: LineNo, c: &Term, extra: &[&Formula]) -> Result<(), EngineError> {
    let name = match c {
        Term::Var(n) | Term::Const(n) => n,
        Term::Func(..) => return Err(EngineError::EigenvariableViolation(format!("eigenvariable {c} is not a name"))),
    };
    if extra.iter().any(|f| f.mentions(name)) {
        return Err(EngineError::EigenvariableViolation(format!("{name} occurs in the formula being derived")));
    }
    if let Some(p) = st.premises().into_iter().find(|l| l.formula.mentions(name)) {
        return Err(EngineError::EigenvariableViolation(format!("{name} occurs in premise {}", p.creation)));
    }
    let open = st
        .scope_lines(goal)
        .into_iter()
        .find(|l| l.role == Role::Assumption && l.formula.mentions(name));
    if let Some(a) = open {
        return Err(EngineError::EigenvariableViolation(format!("{name} occurs in open assumption {}", a.creation)));
    }
    Ok(())
}

fn eigenvariable(
    st: &ProofState,
    app: &RuleApplication,
    mode: ApplyMode,
    extra: &[&Formula],
) -> Result<Term, EngineError> {
    match &app.args.witness {
        Some(c) => {
            if mode == ApplyMode::Interactive {
                check_eigenvariable(st, app.goal, c, extra)?;
            }
            Ok(c.clone())
        }
        None => Ok(fresh_constant(&st.used_names())),
    }
}

fn witness(app: &RuleApplication) -> Result<Term, EngineError> {
    app.args.witness.clone().ok_or(EngineError::MissingArgument(Need::Witness))
}

fn side(app: &RuleApplication) -> Result<Side, EngineError> {
    app.args.side.ok_or(EngineError::MissingArgument(Need::Side))
}

/// Applies one rule. Backward rules replace the goal by subgoals placed
/// directly above it; forward rules either justify the goal from the
/// resource or insert a derived line above the goal. New lines are
/// numbered consecutively from `next_creation`.
pub fn apply_rule(state: &ProofState, app: &RuleApplication, mode: ApplyMode) -> Result<Applied, EngineError> {
    if let RuleId::Ax(name) = &app.rule {
        if state.system.axiom(name).is_none() {
            return Err(EngineError::NoSuchAxiom(name.clone()));
        }
    }
    if app.rule.kind() == RuleKind::Structural {
        return Err(EngineError::RuleDisabled(app.rule.clone()));
    }
    if mode == ApplyMode::Interactive && !(state.palette.contains(&app.rule) && state.system.allows(&app.rule)) {
        return Err(EngineError::RuleDisabled(app.rule.clone()));
    }
    let goal_line = state.line(app.goal).ok_or(EngineError::NoSuchLine(app.goal))?;
    if !goal_line.is_goal() {
        return Err(EngineError::NotAGoal(app.goal));
    }
    let g = goal_line.formula.clone();
    let scope = state.lines_in_scope(app.goal)?;
    let resource = match app.resource {
        Some(r) => {
            let line = state.line(r).ok_or(EngineError::NoSuchLine(r))?;
            if line.is_goal() {
                return Err(EngineError::NotJustified(r));
            }
            if !scope.contains(&r) {
                return Err(EngineError::OutOfScope(r));
            }
            Some((r, line.formula.clone()))
        }
        None => None,
    };

    let mut next = state.clone();
    let mut record = app.clone();
    let mut b = Builder { st: &mut next, goal: app.goal, new_goals: Vec::new() };
    let rule = app.rule.clone();

    if rule.kind() == RuleKind::Backward {
        match (&rule, &g) {
            (RuleId::AndI, Formula::And(l, r)) => {
                let (nl, a) = b.goal_node((**l).clone());
                let (nr, c) = b.goal_node((**r).clone());
                b.insert(vec![a, c])?;
                b.justify(rule, vec![Ref::Line(nl), Ref::Line(nr)]);
            }
            (RuleId::OrI, Formula::Or(l, r)) => {
                let chosen = if side(app)? == Side::Left { l } else { r };
                let (n, node) = b.goal_node((**chosen).clone());
                b.insert(vec![node])?;
                b.justify(rule, vec![Ref::Line(n)]);
            }
            (RuleId::ImpI, Formula::Implies(l, r)) => {
                let (na, ass) = b.assumption((**l).clone());
                let (nc, goal) = b.goal_node((**r).clone());
                b.insert(vec![Node::Box(vec![ass, goal])])?;
                b.justify(rule, vec![Ref::Range(na, nc)]);
            }
            (RuleId::NotI, Formula::Not(a)) => {
                let (na, ass) = b.assumption((**a).clone());
                let (nc, goal) = b.goal_node(Formula::Falsum);
                b.insert(vec![Node::Box(vec![ass, goal])])?;
                b.justify(rule, vec![Ref::Range(na, nc)]);
            }
            (RuleId::DoubleNegE, _) => {
                let (n, node) = b.goal_node(Formula::not(Formula::not(g.clone())));
                b.insert(vec![node])?;
                b.justify(rule, vec![Ref::Line(n)]);
            }
            (RuleId::ForallI, Formula::ForAll(x, body)) => {
                let c = eigenvariable(state, app, mode, &[&g])?;
                record.args.witness = Some(c.clone());
                let (n, node) = b.goal_node(body.substitute(x, &c));
                b.insert(vec![node])?;
                b.justify(rule, vec![Ref::Line(n)]);
            }
            (RuleId::ExistsI, Formula::Exists(x, body)) => {
                let t = witness(app)?;
                let (n, node) = b.goal_node(body.substitute(x, &t));
                b.insert(vec![node])?;
                b.justify(rule, vec![Ref::Line(n)]);
            }
            (RuleId::EqI, Formula::Equals(s, t)) if s == t => {
                b.justify(rule, Vec::new());
            }
            (RuleId::Ind, Formula::ForAll(x, body)) => {
                let base = body.substitute(x, &Term::zero());
                let stepped = body.substitute(x, &Term::succ(Term::Var(x.clone())));
                let step = Formula::forall(x.clone(), Formula::implies((**body).clone(), stepped));
                let (n1, a) = b.goal_node(base);
                let (n2, c) = b.goal_node(step);
                b.insert(vec![a, c])?;
                b.justify(rule, vec![Ref::Line(n1), Ref::Line(n2)]);
            }
            (RuleId::Re, _) => {
                let r = match &resource {
                    Some((r, f)) if *f == g => *r,
                    Some((r, _)) => return shape(format!("line {r} does not match the goal")),
                    None => match state
                        .scope_lines(app.goal)
                        .into_iter()
                        .find(|l| !l.is_goal() && l.formula == g)
                    {
                        Some(l) => l.creation,
                        None => return shape("no line in scope matches the goal"),
                    },
                };
                record.resource = Some(r);
                b.justify(rule, vec![Ref::Line(r)]);
            }
            (RuleId::Ax(name), _) => {
                let axiom = state.system.axiom(name).ok_or_else(|| EngineError::NoSuchAxiom(name.clone()))?;
                if axiom.formula.substitute_all(&app.args.bindings) != g {
                    return shape(format!("axiom {name} does not state the goal"));
                }
                b.justify(rule, Vec::new());
            }
            (rule, _) => return shape(format!("{rule} does not apply to the goal {g}")),
        }
    } else {
        let (r, rf) = resource.ok_or(EngineError::MissingArgument(Need::Resource))?;
        match (&rule, &rf) {
            (RuleId::AndE, Formula::And(l, rr)) => {
                let chosen = if side(app)? == Side::Left { l } else { rr };
                if **chosen == g {
                    b.justify(rule, vec![Ref::Line(r)]);
                } else {
                    let node = b.derived((**chosen).clone(), rule, vec![Ref::Line(r)]);
                    b.insert(vec![node])?;
                }
            }
            (RuleId::ImpE, Formula::Implies(a, c)) => {
                let (na, pending) = b.antecedent(a);
                let mut nodes: Vec<Node> = pending.into_iter().collect();
                if **c == g {
                    b.insert(nodes)?;
                    b.justify(rule, vec![Ref::Line(r), Ref::Line(na)]);
                } else {
                    nodes.push(b.derived((**c).clone(), rule, vec![Ref::Line(r), Ref::Line(na)]));
                    b.insert(nodes)?;
                }
            }
            (RuleId::NotE, Formula::Not(a)) => {
                if g != Formula::Falsum {
                    return shape("¬E needs the goal ⊥");
                }
                let (na, pending) = b.antecedent(a);
                b.insert(pending.into_iter().collect())?;
                b.justify(rule, vec![Ref::Line(r), Ref::Line(na)]);
            }
            (RuleId::OrE, Formula::Or(l, rr)) => {
                let (a1, ass1) = b.assumption((**l).clone());
                let (g1, goal1) = b.goal_node(g.clone());
                let (a2, ass2) = b.assumption((**rr).clone());
                let (g2, goal2) = b.goal_node(g.clone());
                b.insert(vec![Node::Box(vec![ass1, goal1]), Node::Box(vec![ass2, goal2])])?;
                b.justify(rule, vec![Ref::Line(r), Ref::Range(a1, g1), Ref::Range(a2, g2)]);
            }
            (RuleId::FalsumE, Formula::Falsum) => {
                b.justify(rule, vec![Ref::Line(r)]);
            }
            (RuleId::ForallE, Formula::ForAll(x, body)) => {
                let t = witness(app)?;
                let inst = body.substitute(x, &t);
                if inst == g {
                    b.justify(rule, vec![Ref::Line(r)]);
                } else {
                    let node = b.derived(inst, rule, vec![Ref::Line(r)]);
                    b.insert(vec![node])?;
                }
            }
            (RuleId::ExistsE, Formula::Exists(x, body)) => {
                let c = eigenvariable(state, app, mode, &[&g, &rf])?;
                record.args.witness = Some(c.clone());
                let (na, ass) = b.assumption(body.substitute(x, &c));
                let (nc, goal) = b.goal_node(g.clone());
                b.insert(vec![Node::Box(vec![ass, goal])])?;
                b.justify(rule, vec![Ref::Line(r), Ref::Range(na, nc)]);
            }
            (RuleId::EqE, Formula::Equals(s, t)) => {
                let m = app.args.line.ok_or(EngineError::MissingArgument(Need::Line))?;
                let target = state.line(m).ok_or(EngineError::NoSuchLine(m))?;
                if target.is_goal() {
                    return Err(EngineError::NotJustified(m));
                }
                if !scope.contains(&m) {
                    return Err(EngineError::OutOfScope(m));
                }
                let rewritten = target.formula.replace_term(s, t);
                if rewritten == target.formula {
                    return shape(format!("{s} does not occur in line {m}"));
                }
                if rewritten == g {
                    b.justify(rule, vec![Ref::Line(r), Ref::Line(m)]);
                } else {
                    let node = b.derived(rewritten, rule, vec![Ref::Line(r), Ref::Line(m)]);
                    b.insert(vec![node])?;
                }
            }
            (rule, _) => return shape(format!("{rule} does not apply to line {r}")),
        }
    }

    let first_new_goal = b.new_goals.iter().min().copied();
    let goal = app.goal;
    next.selection = if next.line(goal).is_some_and(|l| l.is_goal()) {
        Selection { goal: Some(goal), resource: None }
    } else {
        Selection { goal: first_new_goal, resource: None }
    };
    Ok(Applied { state: next, record })
}

fn enabled(state: &ProofState, rule: &RuleId) -> bool {
    state.palette.contains(rule) && state.system.allows(rule)
}

fn backward_fits(rule: &RuleId, g: &Formula) -> bool {
    match rule {
        RuleId::AndI => matches!(g, Formula::And(..)),
        RuleId::OrI => matches!(g, Formula::Or(..)),
        RuleId::ImpI => matches!(g, Formula::Implies(..)),
        RuleId::NotI => matches!(g, Formula::Not(..)),
        RuleId::DoubleNegE => true,
        RuleId::ForallI | RuleId::Ind => matches!(g, Formula::ForAll(..)),
        RuleId::ExistsI => matches!(g, Formula::Exists(..)),
        RuleId::EqI => matches!(g, Formula::Equals(s, t) if s == t),
        _ => false,
    }
}

fn forward_fits(rule: &RuleId, r: &Formula, g: &Formula) -> bool {
    match rule {
        RuleId::AndE => matches!(r, Formula::And(..)),
        RuleId::ImpE => matches!(r, Formula::Implies(..)),
        RuleId::NotE => matches!(r, Formula::Not(..)) && *g == Formula::Falsum,
        RuleId::OrE => matches!(r, Formula::Or(..)),
        RuleId::FalsumE => *r == Formula::Falsum,
        RuleId::ForallE => matches!(r, Formula::ForAll(..)),
        RuleId::ExistsE => matches!(r, Formula::Exists(..)),
        RuleId::EqE => matches!(r, Formula::Equals(..)),
        _ => false,
    }
}

fn rewrite_targets<'a>(state: &'a ProofState, goal: LineNo, resource: &ProofLine) -> Vec<&'a ProofLine> {
    let Formula::Equals(s, t) = &resource.formula else { return Vec::new() };
    state
        .scope_lines(goal)
        .into_iter()
        .filter(|l| !l.is_goal() && l.creation != resource.creation && l.formula.replace_term(s, t) != l.formula)
        .collect()
}

fn extra_needs(rule: &RuleId) -> Vec<Need> {
    match rule {
        RuleId::OrI | RuleId::AndE => vec![Need::Side],
        RuleId::ExistsI | RuleId::ForallE => vec![Need::Witness],
        RuleId::EqE => vec![Need::Line],
        _ => Vec::new(),
    }
}

/// Rules offered for the current goal (and resource, when one is
/// selected), filtered by palette and system. Without a selected resource,
/// elimination rules are offered with [`Need::Resource`] when some
/// in-scope line could serve.
pub fn list_applicable(state: &ProofState) -> Vec<Applicable> {
    let Some(goal) = state.selection.goal else { return Vec::new() };
    let Some(goal_line) = state.line(goal) else { return Vec::new() };
    if !goal_line.is_goal() {
        return Vec::new();
    }
    let g = &goal_line.formula;
    let resources: Vec<&ProofLine> = state.scope_lines(goal).into_iter().filter(|l| !l.is_goal()).collect();
    let selected = state.selection.resource.and_then(|r| state.line(r));
    let mut out = Vec::new();
    for rule in RuleId::LOGICAL.iter().filter(|r| enabled(state, r)) {
        match rule.kind() {
            RuleKind::Backward => {
                let fits = match rule {
                    RuleId::Re => resources.iter().any(|l| l.formula == *g),
                    _ => backward_fits(rule, g),
                };
                if fits {
                    out.push(Applicable { rule: rule.clone(), needs: extra_needs(rule) });
                }
            }
            RuleKind::Forward => {
                let usable = |r: &ProofLine| {
                    forward_fits(rule, &r.formula, g)
                        && (*rule != RuleId::EqE || !rewrite_targets(state, goal, r).is_empty())
                };
                match selected {
                    Some(r) => {
                        if usable(r) {
                            out.push(Applicable { rule: rule.clone(), needs: extra_needs(rule) });
                        }
                    }
                    None => {
                        if resources.iter().any(|r| usable(r)) {
                            let mut needs = vec![Need::Resource];
                            needs.extend(extra_needs(rule));
                            out.push(Applicable { rule: rule.clone(), needs });
                        }
                    }
                }
            }
            RuleKind::Structural => {}
        }
    }
    for axiom in &state.system.axioms {
        let rule = RuleId::Ax(axiom.name.clone());
        if enabled(state, &rule) && axiom.formula.match_schema(g).is_some() {
            let needs = if axiom.formula.free_vars().is_empty() { Vec::new() } else { vec![Need::Bindings] };
            out.push(Applicable { rule, needs });
        }
    }
    out
}

/// Enables or disables a rule in the palette.
pub fn toggle_palette(state: &ProofState, rule: RuleId, on: bool) -> ProofState {
    let mut next = state.clone();
    if on {
        next.palette.insert(rule);
    } else {
        next.palette.remove(&rule);
    }
    next
}

/// Justifies the selected goal by an axiom instance.
pub fn instantiate_axiom(
    state: &ProofState,
    name: &str,
    bindings: BTreeMap<String, Term>,
) -> Result<Applied, EngineError> {
    let goal = state.selection.goal.ok_or(EngineError::NoGoalSelected)?;
    let mut app = RuleApplication::new(RuleId::Ax(name.into()), goal);
    app.args.bindings = bindings;
    apply_rule(state, &app, ApplyMode::Interactive)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MagicOutcome {
    pub state: ProofState,
    pub applications: Vec<RuleApplication>,
    /// Rounds run, including a final round that changed nothing.
    pub rounds: usize,
}

/// Repeatedly applies rules that need no input. Each round visits every
/// goal in creation order and applies the first rule that fits, trying
/// `Re, ∧I, →I, ¬I, ∀I, =I` in that order. Stops after a round with no
/// change or after [`MAGIC_ROUNDS`] rounds.
pub fn magic(state: &ProofState) -> MagicOutcome {
    let mut st = state.clone();
    let mut applications = Vec::new();
    let mut rounds = 0;
    while rounds < MAGIC_ROUNDS {
        rounds += 1;
        let mut changed = false;
        for goal in st.goals() {
            for rule in MAGIC_RULES.iter() {
                let app = RuleApplication::new(rule.clone(), goal);
                if let Ok(applied) = apply_rule(&st, &app, ApplyMode::Interactive) {
                    st = applied.state;
                    applications.push(applied.record);
                    changed = true;
                    break;
                }
            }
        }
        if !changed {
            break;
        }
    }
    MagicOutcome { state: st, applications, rounds }
}

/// Every concrete interactive application available anywhere in the proof,
/// drawing witness terms from `witnesses`. Used to drive random play.
pub fn moves(state: &ProofState, witnesses: &[Term]) -> Vec<RuleApplication> {
    let mut candidates = Vec::new();
    for goal in state.goals() {
        let Some(g) = state.line(goal).map(|l| l.formula.clone()) else { continue };
        let resources: Vec<&ProofLine> = state.scope_lines(goal).into_iter().filter(|l| !l.is_goal()).collect();
        for rule in RuleId::LOGICAL.iter().filter(|r| enabled(state, r)) {
            let base = RuleApplication::new(rule.clone(), goal);
            match rule.kind() {
                RuleKind::Backward => {
                    if *rule != RuleId::Re && !backward_fits(rule, &g) {
                        continue;
                    }
                    match rule {
                        RuleId::OrI => {
                            candidates.push(base.clone().side(Side::Left));
                            candidates.push(base.side(Side::Right));
                        }
                        RuleId::ExistsI => candidates.extend(witnesses.iter().map(|t| base.clone().witness(t.clone()))),
                        _ => candidates.push(base),
                    }
                }
                RuleKind::Forward => {
                    for r in &resources {
                        if !forward_fits(rule, &r.formula, &g) {
                            continue;
                        }
                        let with_r = base.clone().resource(r.creation);
                        match rule {
                            RuleId::AndE => {
                                candidates.push(with_r.clone().side(Side::Left));
                                candidates.push(with_r.side(Side::Right));
                            }
                            RuleId::ForallE => {
                                candidates.extend(witnesses.iter().map(|t| with_r.clone().witness(t.clone())))
                            }
                            RuleId::EqE => candidates.extend(
                                rewrite_targets(state, goal, r).into_iter().map(|m| with_r.clone().line(m.creation)),
                            ),
                            _ => candidates.push(with_r),
                        }
                    }
                }
                RuleKind::Structural => {}
            }
        }
        for axiom in &state.system.axioms {
            if let Some(bindings) = axiom.formula.match_schema(&g) {
                let mut app = RuleApplication::new(RuleId::Ax(axiom.name.clone()), goal);
                app.args.bindings = bindings;
                candidates.push(app);
            }
        }
    }
    candidates
        .into_iter()
        .filter(|app| apply_rule(state, app, ApplyMode::Interactive).is_ok())
        .collect()
}
