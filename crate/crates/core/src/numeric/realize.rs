//! Numeric realization of symbolic expressions in the massless model:
//! `Q` is the photon position operator, `H = |p|`, `V_i = p_i / |p|`.

use std::fmt;

use num::complex::Complex64;

use super::grid::WaveFunction;
use super::ops::{apply, Dispersion, OperatorDesc, Position};
use crate::algebra::{Atom, Expr, Scalar};
use crate::engine::{commutator, AxiomSet};

/// Unevaluated operator expression, applied to wave functions as written.
#[derive(Clone, Debug, PartialEq)]
pub enum OpTree {
    Atom(Atom),
    Scale(Scalar, Box<OpTree>),
    Sum(Vec<OpTree>),
    /// Leftmost factor acts last.
    Product(Vec<OpTree>),
    Comm(Box<OpTree>, Box<OpTree>),
}

pub fn atom_operator(atom: &Atom) -> Option<OperatorDesc> {
    let d = Dispersion::Massless;
    match atom {
        Atom::P(i) => Some(OperatorDesc::P(*i)),
        Atom::V(i) => Some(OperatorDesc::V(*i, d)),
        Atom::Q(i) => Some(OperatorDesc::Q(*i, Position::Photon)),
        Atom::H(k) => Some(OperatorDesc::HPow(*k, d)),
        Atom::Id | Atom::Comm(..) => None,
    }
}

fn apply_atom(atom: &Atom, psi: &WaveFunction) -> WaveFunction {
    match atom {
        Atom::Id => psi.clone(),
        Atom::Comm(a, b) => apply_atom(a, &apply_atom(b, psi)).sub(&apply_atom(b, &apply_atom(a, psi))),
        other => apply(&atom_operator(other).expect("plain atom"), psi),
    }
}

fn natural(s: &Scalar) -> Complex64 {
    s.to_complex64(1.0, 1.0)
}

/// Applies a symbolic expression term by term, each monomial right to left.
/// Opaque brackets are applied as numeric commutators of their arguments.
pub fn realize(e: &Expr, psi: &WaveFunction) -> WaveFunction {
    let mut acc = psi.zeros_like();
    for t in e.terms() {
        let mut phi = psi.clone();
        for atom in t.monomial.atoms().iter().rev() {
            phi = apply_atom(atom, &phi);
        }
        acc = acc.add(&phi.scale(natural(&t.coeff)));
    }
    acc
}

impl OpTree {
    /// Direct nested application; brackets as `a(b psi) - b(a psi)`.
    pub fn apply(&self, psi: &WaveFunction) -> WaveFunction {
        match self {
            OpTree::Atom(a) => apply_atom(a, psi),
            OpTree::Scale(s, x) => x.apply(psi).scale(natural(s)),
            OpTree::Sum(xs) => xs.iter().fold(psi.zeros_like(), |acc, x| acc.add(&x.apply(psi))),
            OpTree::Product(xs) => xs.iter().rev().fold(psi.clone(), |phi, x| x.apply(&phi)),
            OpTree::Comm(a, b) => a.apply(&b.apply(psi)).sub(&b.apply(&a.apply(psi))),
        }
    }

    /// Symbolic value under the given axioms.
    pub fn to_expr(&self, ax: &AxiomSet) -> Expr {
        match self {
            OpTree::Atom(a) => Expr::atom(a.clone()),
            OpTree::Scale(s, x) => x.to_expr(ax).scale(s),
            OpTree::Sum(xs) => xs.iter().fold(Expr::zero(), |acc, x| &acc + &x.to_expr(ax)),
            OpTree::Product(xs) => xs
                .iter()
                .fold(Expr::identity(), |acc, x| acc.mul_free(&x.to_expr(ax)))
                .normalized_in(ax.families()),
            OpTree::Comm(a, b) => commutator(&a.to_expr(ax), &b.to_expr(ax), ax),
        }
    }
}

impl fmt::Display for OpTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpTree::Atom(a) => write!(f, "{a}"),
            OpTree::Scale(s, x) => write!(f, "({s})*({x})"),
            OpTree::Sum(xs) => {
                let parts: Vec<String> = xs.iter().map(|x| format!("({x})")).collect();
                f.write_str(&parts.join(" + "))
            }
            OpTree::Product(xs) => {
                let parts: Vec<String> = xs.iter().map(|x| format!("({x})")).collect();
                f.write_str(&parts.join("*"))
            }
            OpTree::Comm(a, b) => write!(f, "comm({a}, {b})"),
        }
    }
}
