//! Evaluation of syntax trees to expressions, formally or under axioms.

use std::collections::BTreeMap;

use num::{BigRational, One};
use thiserror::Error;

use super::ast::{AtomRef, IndexRef, Node, ScalarFactor, ScalarLit};
use crate::algebra::{Atom, Axis, Expr, Families, Scalar};
use crate::engine::{commutator, ddt, AxiomSet, EngineError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("index variable '{0}' has no value here")]
    UnboundIndex(String),
    #[error("'{0}' is not bound")]
    UnknownName(String),
    #[error("ddt needs an axiom set")]
    NoAxioms,
    #[error(transparent)]
    Engine(#[from] EngineError),
}

pub fn scalar_value(lit: &ScalarLit) -> Scalar {
    let mut s = Scalar::rational(lit.rational.clone().unwrap_or_else(BigRational::one));
    for f in &lit.factors {
        s = s * match f {
            ScalarFactor::I => Scalar::imag(),
            ScalarFactor::Hbar(k) => Scalar::hbar(*k),
            ScalarFactor::C(k) => Scalar::c(*k),
        };
    }
    s
}

fn axis(i: &IndexRef) -> Result<Axis, EvalError> {
    match i {
        IndexRef::Lit(a) => Ok(*a),
        IndexRef::Var(v) => Err(EvalError::UnboundIndex(v.clone())),
    }
}

pub fn atom_value(a: &AtomRef) -> Result<Atom, EvalError> {
    Ok(match a {
        AtomRef::Id => Atom::Id,
        AtomRef::H(k) => Atom::H(*k),
        AtomRef::P(i) => Atom::P(axis(i)?),
        AtomRef::V(i) => Atom::V(axis(i)?),
        AtomRef::Q(i) => Atom::Q(axis(i)?),
    })
}

/// Lowers a closed expression without any axioms: brackets stay formal
/// (opaque) and products are normalized under the default `{H, P, V}` family.
pub fn lower(node: &Node) -> Result<Expr, EvalError> {
    Evaluator { lets: &BTreeMap::new(), axioms: None, families: Families::free_particle() }.eval(node)
}

pub(crate) struct Evaluator<'a> {
    pub lets: &'a BTreeMap<String, Node>,
    pub axioms: Option<&'a AxiomSet>,
    /// Reordering allowed in products when no axiom set is active.
    pub families: Families,
}

impl Evaluator<'_> {
    fn families(&self) -> &Families {
        self.axioms.map(AxiomSet::families).unwrap_or(&self.families)
    }

    pub fn eval(&self, node: &Node) -> Result<Expr, EvalError> {
        Ok(match node {
            Node::Scalar(lit) => Expr::scalar(scalar_value(lit)),
            Node::Atom(a) => Expr::atom(atom_value(a)?),
            Node::Name(n) => {
                let body = self.lets.get(n).ok_or_else(|| EvalError::UnknownName(n.clone()))?;
                self.eval(body)?
            }
            Node::Delta(a, b) => {
                if axis(a)? == axis(b)? {
                    Expr::identity()
                } else {
                    Expr::zero()
                }
            }
            Node::Comm(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                match self.axioms {
                    Some(ax) => commutator(&a, &b, ax),
                    None => Expr::formal_commutator(&a, &b).normalized_in(self.families()),
                }
            }
            Node::Ddt(a) => {
                let ax = self.axioms.ok_or(EvalError::NoAxioms)?;
                ddt(&self.eval(a)?, ax)?
            }
            Node::Add(a, b) => &self.eval(a)? + &self.eval(b)?,
            Node::Sub(a, b) => &self.eval(a)? - &self.eval(b)?,
            Node::Neg(a) => -self.eval(a)?,
            Node::Mul(a, b) => self.eval(a)?.mul_free(&self.eval(b)?).normalized_in(self.families()),
        })
    }
}
