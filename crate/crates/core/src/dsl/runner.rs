//! Executes scripts: builds declared axiom sets and checks assertions.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::ast::{AssertStmt, AxiomRule, Node, Script, Span, Statement};
use super::lower::{atom_value, EvalError, Evaluator};
use super::{parse, ParseError};
use crate::algebra::{Axis, Expr, Families};
use crate::engine::{equivalent, AxiomSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

/// Outcome of one assertion instance (one index assignment of a `forall`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssertOutcome {
    pub span: Span,
    pub bindings: Vec<(String, u8)>,
    pub axioms: String,
    pub status: Status,
    /// Canonical forms of both sides under `axioms`, when evaluation succeeded.
    pub lhs: Option<Expr>,
    pub rhs: Option<Expr>,
    pub message: Option<String>,
}

impl AssertOutcome {
    pub fn binding_text(&self) -> String {
        let parts: Vec<String> = self.bindings.iter().map(|(v, a)| format!("{v}={a}")).collect();
        parts.join(",")
    }
}

impl fmt::Display for AssertOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.span, self.status.as_str())?;
        if !self.bindings.is_empty() {
            write!(f, " [{}]", self.binding_text())?;
        }
        write!(f, " under {}", self.axioms)?;
        if self.status != Status::Pass {
            if let (Some(l), Some(r)) = (&self.lhs, &self.rhs) {
                write!(f, "\n  lhs: {l}\n  rhs: {r}")?;
            }
            if let Some(m) = &self.message {
                write!(f, "\n  {m}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunReport {
    pub outcomes: Vec<AssertOutcome>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.status == Status::Pass)
    }

    pub fn counts(&self) -> (usize, usize) {
        let ok = self.outcomes.iter().filter(|o| o.status == Status::Pass).count();
        (ok, self.outcomes.len())
    }
}

/// Reasons a script could not be run at all.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{span}: axiom set {name}: {message}")]
    Axioms { span: Span, name: String, message: String },
}

impl ScriptError {
    pub fn span(&self) -> Span {
        match self {
            ScriptError::Parse(e) => e.span,
            ScriptError::Axioms { span, .. } => *span,
        }
    }
}

pub fn run_text(text: &str) -> Result<RunReport, ScriptError> {
    run(&parse(text)?)
}

/// All assignments of `vars` to axes, first variable slowest.
fn assignments(vars: &[String]) -> Vec<Vec<(String, Axis)>> {
    let mut out = vec![Vec::new()];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                Axis::ALL.into_iter().map(move |a| {
                    let mut p = prefix.clone();
                    p.push((v.clone(), a));
                    p
                })
            })
            .collect();
    }
    out
}

pub fn run(script: &Script) -> Result<RunReport, ScriptError> {
    let mut sets: BTreeMap<String, AxiomSet> = BTreeMap::new();
    let mut lets: BTreeMap<String, Node> = BTreeMap::new();
    let mut report = RunReport::default();
    for (stmt, span) in script.statements.iter().zip(&script.spans) {
        match stmt {
            Statement::Axioms { name, rules } => {
                let set = build_axioms(name, rules, &lets).map_err(|message| ScriptError::Axioms {
                    span: *span,
                    name: name.clone(),
                    message,
                })?;
                sets.insert(name.clone(), set);
            }
            Statement::Let { name, value } => {
                lets.insert(name.clone(), value.clone());
            }
            Statement::Assert(a) => report.outcomes.push(check(a, &[], *span, &sets, &lets)),
            Statement::Forall { vars, assertion } => {
                for assignment in assignments(vars) {
                    report.outcomes.push(check(assertion, &assignment, *span, &sets, &lets));
                }
            }
        }
    }
    Ok(report)
}

fn lookup(name: &str, sets: &BTreeMap<String, AxiomSet>) -> Option<AxiomSet> {
    sets.get(name).cloned().or_else(|| AxiomSet::builtin(name))
}

fn check(
    a: &AssertStmt,
    assignment: &[(String, Axis)],
    span: Span,
    sets: &BTreeMap<String, AxiomSet>,
    lets: &BTreeMap<String, Node>,
) -> AssertOutcome {
    let mut outcome = AssertOutcome {
        span,
        bindings: assignment.iter().map(|(v, x)| (v.clone(), x.get())).collect(),
        axioms: a.under.clone(),
        status: Status::Error,
        lhs: None,
        rhs: None,
        message: None,
    };
    let Some(ax) = lookup(&a.under, sets) else {
        outcome.message = Some(format!("unknown axiom set {}", a.under));
        return outcome;
    };
    let (mut lhs, mut rhs) = (a.lhs.clone(), a.rhs.clone());
    for (v, x) in assignment {
        lhs = lhs.bind(v, *x);
        rhs = rhs.bind(v, *x);
    }
    let ev = Evaluator { lets, axioms: Some(&ax), families: Families::none() };
    match (ev.eval(&lhs), ev.eval(&rhs)) {
        (Ok(l), Ok(r)) => {
            outcome.status = if equivalent(&l, &r, &ax) {
                Status::Pass
            } else {
                Status::Fail
            };
            outcome.lhs = Some(ax.canonical(&l));
            outcome.rhs = Some(ax.canonical(&r));
        }
        (Err(e), _) | (_, Err(e)) => outcome.message = Some(e.to_string()),
    }
    outcome
}

fn build_axioms(name: &str, rules: &[AxiomRule], lets: &BTreeMap<String, Node>) -> Result<AxiomSet, String> {
    let mut families = Families::none();
    for r in rules {
        if let AxiomRule::Commuting(kinds) = r {
            families.declare(kinds.iter().copied());
        }
    }
    let mut b = AxiomSet::builder(name);
    for kinds in families.sets() {
        b = b.family(kinds.iter().copied());
    }
    // values are taken literally; only identity and H-power merging apply
    let ev = Evaluator { lets, axioms: None, families: Families::none() };
    let err = |e: EvalError| e.to_string();
    for rule in rules {
        for assignment in assignments(&rule.free_vars()) {
            let mut r = rule.clone();
            for (v, x) in &assignment {
                r = r.bind(v, *x);
            }
            b = match r {
                AxiomRule::Comm(x, y, v) => b.commutator(atom_value(&x).map_err(err)?, atom_value(&y).map_err(err)?, ev.eval(&v).map_err(err)?),
                AxiomRule::Def(x, v) => b.definition(atom_value(&x).map_err(err)?, ev.eval(&v).map_err(err)?),
                AxiomRule::Rel(l, r) => b.relation(ev.eval(&l).map_err(err)?, ev.eval(&r).map_err(err)?),
                AxiomRule::Commuting(_) => b,
            };
        }
    }
    b.build().map_err(|e| e.to_string())
}
