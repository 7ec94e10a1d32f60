use num::BigRational;

use crate::algebra::{AtomKind, Axis};

/// 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

impl std::fmt::Display for Span {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndexRef {
    Lit(Axis),
    Var(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AtomRef {
    Id,
    H(i32),
    P(IndexRef),
    V(IndexRef),
    Q(IndexRef),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarFactor {
    I,
    Hbar(i32),
    C(i32),
}

/// A scalar literal as written: optional rational, then `i`, `hbar`, `c` factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarLit {
    pub rational: Option<BigRational>,
    pub factors: Vec<ScalarFactor>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Scalar(ScalarLit),
    Atom(AtomRef),
    /// Reference to a `let` binding.
    Name(String),
    /// Kronecker delta of two indices.
    Delta(IndexRef, IndexRef),
    Comm(Box<Node>, Box<Node>),
    Ddt(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Neg(Box<Node>),
    Mul(Box<Node>, Box<Node>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomRule {
    Comm(AtomRef, AtomRef, Node),
    Def(AtomRef, Node),
    Commuting(Vec<AtomKind>),
    Rel(Node, Node),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssertStmt {
    pub lhs: Node,
    pub rhs: Node,
    pub under: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Statement {
    Axioms { name: String, rules: Vec<AxiomRule> },
    Let { name: String, value: Node },
    Assert(AssertStmt),
    Forall { vars: Vec<String>, assertion: AssertStmt },
}

/// Parsed script. Equality ignores source positions.
#[derive(Clone, Debug)]
pub struct Script {
    pub statements: Vec<Statement>,
    /// Start of each statement, parallel to `statements`.
    pub spans: Vec<Span>,
}

impl PartialEq for Script {
    fn eq(&self, other: &Self) -> bool {
        self.statements == other.statements
    }
}

impl Eq for Script {}

impl Node {
    pub(crate) fn boxed(self) -> Box<Node> {
        Box::new(self)
    }

    /// Replaces index variable `var` by a concrete axis everywhere.
    pub fn bind(&self, var: &str, axis: Axis) -> Node {
        let idx = |i: &IndexRef| match i {
            IndexRef::Var(v) if v == var => IndexRef::Lit(axis),
            other => other.clone(),
        };
        match self {
            Node::Atom(a) => Node::Atom(a.bind(var, axis)),
            Node::Delta(a, b) => Node::Delta(idx(a), idx(b)),
            Node::Comm(a, b) => Node::Comm(a.bind(var, axis).boxed(), b.bind(var, axis).boxed()),
            Node::Ddt(a) => Node::Ddt(a.bind(var, axis).boxed()),
            Node::Add(a, b) => Node::Add(a.bind(var, axis).boxed(), b.bind(var, axis).boxed()),
            Node::Sub(a, b) => Node::Sub(a.bind(var, axis).boxed(), b.bind(var, axis).boxed()),
            Node::Mul(a, b) => Node::Mul(a.bind(var, axis).boxed(), b.bind(var, axis).boxed()),
            Node::Neg(a) => Node::Neg(a.bind(var, axis).boxed()),
            Node::Scalar(_) | Node::Name(_) => self.clone(),
        }
    }

    /// Index variables occurring free in the node, in first-use order.
    pub fn free_vars(&self, out: &mut Vec<String>) {
        let mut push = |i: &IndexRef| {
            if let IndexRef::Var(v) = i {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
        };
        match self {
            Node::Atom(a) => {
                if let Some(i) = a.index() {
                    push(i)
                }
            }
            Node::Delta(a, b) => {
                push(a);
                push(b);
            }
            Node::Comm(a, b) | Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) => {
                a.free_vars(out);
                b.free_vars(out);
            }
            Node::Ddt(a) | Node::Neg(a) => a.free_vars(out),
            Node::Scalar(_) | Node::Name(_) => {}
        }
    }
}

impl AtomRef {
    pub fn index(&self) -> Option<&IndexRef> {
        match self {
            AtomRef::P(i) | AtomRef::V(i) | AtomRef::Q(i) => Some(i),
            _ => None,
        }
    }

    pub fn bind(&self, var: &str, axis: Axis) -> AtomRef {
        let idx = |i: &IndexRef| match i {
            IndexRef::Var(v) if v == var => IndexRef::Lit(axis),
            other => other.clone(),
        };
        match self {
            AtomRef::P(i) => AtomRef::P(idx(i)),
            AtomRef::V(i) => AtomRef::V(idx(i)),
            AtomRef::Q(i) => AtomRef::Q(idx(i)),
            other => other.clone(),
        }
    }
}

impl AxiomRule {
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        let atom = |a: &AtomRef, out: &mut Vec<String>| Node::Atom(a.clone()).free_vars(out);
        match self {
            AxiomRule::Comm(a, b, v) => {
                atom(a, &mut out);
                atom(b, &mut out);
                v.free_vars(&mut out);
            }
            AxiomRule::Def(a, v) => {
                atom(a, &mut out);
                v.free_vars(&mut out);
            }
            AxiomRule::Commuting(_) => {}
            AxiomRule::Rel(a, b) => {
                a.free_vars(&mut out);
                b.free_vars(&mut out);
            }
        }
        out
    }

    pub fn bind(&self, var: &str, axis: Axis) -> AxiomRule {
        match self {
            AxiomRule::Comm(a, b, v) => AxiomRule::Comm(a.bind(var, axis), b.bind(var, axis), v.bind(var, axis)),
            AxiomRule::Def(a, v) => AxiomRule::Def(a.bind(var, axis), v.bind(var, axis)),
            AxiomRule::Commuting(k) => AxiomRule::Commuting(k.clone()),
            AxiomRule::Rel(a, b) => AxiomRule::Rel(a.bind(var, axis), b.bind(var, axis)),
        }
    }
}
