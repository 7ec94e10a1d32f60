//! Text rendering of scalars, atoms, expressions and scripts.
//!
//! Everything printed here parses back to the same value.

use std::fmt::{self, Display, Formatter, Write};

use num::{BigRational, One, Signed, Zero};

use super::ast::{AssertStmt, AtomRef, AxiomRule, IndexRef, Node, ScalarFactor, ScalarLit, Script, Statement};
use crate::algebra::{Atom, Expr, Scalar};

fn rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn power(f: &mut Formatter<'_>, name: &str, exp: i32) -> fmt::Result {
    match exp {
        1 => write!(f, "{name}"),
        k => write!(f, "{name}^{k}"),
    }
}

/// `hbar^a*c^b` suffix, each factor prefixed by `*` unless `first`.
fn units(f: &mut Formatter<'_>, s: &Scalar, mut first: bool) -> fmt::Result {
    for (name, exp) in [("hbar", s.hbar_exp()), ("c", s.c_exp())] {
        if exp != 0 {
            if !first {
                f.write_char('*')?;
            }
            power(f, name, exp)?;
            first = false;
        }
    }
    Ok(())
}

/// Sign-free magnitude of a scalar whose value is real or purely imaginary,
/// or a parenthesized complex number. `None` means the magnitude is 1 and
/// nothing needs printing.
fn magnitude(s: &Scalar) -> (bool, Option<String>) {
    let v = s.value();
    if v.im.is_zero() {
        let r = v.re.abs();
        (v.re.is_negative(), (!r.is_one()).then(|| rational(&r)))
    } else if v.re.is_zero() {
        let r = v.im.abs();
        let text = if r.is_one() { "i".to_string() } else { format!("{}*i", rational(&r)) };
        (v.im.is_negative(), Some(text))
    } else {
        let op = if v.im.is_negative() { '-' } else { '+' };
        let im = v.im.abs();
        let im = if im.is_one() { "i".to_string() } else { format!("{}*i", rational(&im)) };
        (false, Some(format!("({} {op} {im})", rational(&v.re))))
    }
}

impl Display for Scalar {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let (neg, mag) = magnitude(self);
        if neg {
            f.write_char('-')?;
        }
        let bare = self.hbar_exp() == 0 && self.c_exp() == 0;
        match mag {
            Some(m) => {
                f.write_str(&m)?;
                units(f, self, false)
            }
            None if bare => f.write_char('1'),
            None => units(f, self, true),
        }
    }
}

impl Display for Atom {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Id => f.write_str("Id"),
            Atom::H(k) => power(f, "H", *k),
            Atom::P(a) => write!(f, "P[{a}]"),
            Atom::V(a) => write!(f, "V[{a}]"),
            Atom::Q(a) => write!(f, "Q[{a}]"),
            Atom::Comm(a, b) => write!(f, "comm({a},{b})"),
        }
    }
}

impl Display for Expr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, t) in self.terms().enumerate() {
            let (neg, mag) = magnitude(&t.coeff);
            match (k, neg) {
                (0, true) => f.write_char('-')?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut first = true;
            if let Some(m) = mag {
                f.write_str(&m)?;
                first = false;
            }
            let has_units = t.coeff.hbar_exp() != 0 || t.coeff.c_exp() != 0;
            if has_units {
                units(f, &t.coeff, first)?;
                first = false;
            }
            if t.monomial.is_empty() && first {
                f.write_str("Id")?;
            }
            for atom in t.monomial.atoms() {
                if !first {
                    f.write_char('*')?;
                }
                write!(f, "{atom}")?;
                first = false;
            }
        }
        Ok(())
    }
}

impl Display for IndexRef {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            IndexRef::Lit(a) => write!(f, "{a}"),
            IndexRef::Var(v) => f.write_str(v),
        }
    }
}

impl Display for AtomRef {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            AtomRef::Id => f.write_str("Id"),
            AtomRef::H(k) => power(f, "H", *k),
            AtomRef::P(i) => write!(f, "P[{i}]"),
            AtomRef::V(i) => write!(f, "V[{i}]"),
            AtomRef::Q(i) => write!(f, "Q[{i}]"),
        }
    }
}

impl Display for ScalarLit {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if let Some(r) = &self.rational {
            f.write_str(&rational(r))?;
            first = false;
        }
        for factor in &self.factors {
            if !first {
                f.write_char('*')?;
            }
            first = false;
            match factor {
                ScalarFactor::I => f.write_char('i')?,
                ScalarFactor::Hbar(k) => power(f, "hbar", *k)?,
                ScalarFactor::C(k) => power(f, "c", *k)?,
            }
        }
        Ok(())
    }
}

// Binding strength: sums and leading negation < products < primaries.
fn prec(n: &Node) -> u8 {
    match n {
        Node::Add(..) | Node::Sub(..) | Node::Neg(_) => 1,
        Node::Mul(..) => 2,
        _ => 3,
    }
}

fn node(f: &mut Formatter<'_>, n: &Node, min: u8) -> fmt::Result {
    if prec(n) < min {
        f.write_char('(')?;
        node(f, n, 0)?;
        return f.write_char(')');
    }
    match n {
        Node::Scalar(s) => write!(f, "{s}"),
        Node::Atom(a) => write!(f, "{a}"),
        Node::Name(x) => f.write_str(x),
        Node::Delta(a, b) => write!(f, "delta({a},{b})"),
        Node::Comm(a, b) => {
            f.write_str("comm(")?;
            node(f, a, 0)?;
            f.write_str(", ")?;
            node(f, b, 0)?;
            f.write_char(')')
        }
        Node::Ddt(a) => {
            f.write_str("ddt(")?;
            node(f, a, 0)?;
            f.write_char(')')
        }
        Node::Add(a, b) | Node::Sub(a, b) => {
            node(f, a, 1)?;
            f.write_str(if matches!(n, Node::Add(..)) { " + " } else { " - " })?;
            node(f, b, 2)
        }
        Node::Neg(a) => {
            f.write_char('-')?;
            node(f, a, 2)
        }
        Node::Mul(a, b) => {
            node(f, a, 2)?;
            f.write_char('*')?;
            // a bare scalar after '*' would be absorbed into the one before it
            if matches!(**b, Node::Scalar(_)) {
                f.write_char('(')?;
                node(f, b, 0)?;
                f.write_char(')')
            } else {
                node(f, b, 3)
            }
        }
    }
}

impl Display for Node {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        node(f, self, 0)
    }
}

impl Display for AssertStmt {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "assert {} == {} under {};", self.lhs, self.rhs, self.under)
    }
}

impl Display for AxiomRule {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            AxiomRule::Comm(a, b, v) => write!(f, "comm({a}, {b}) = {v};"),
            AxiomRule::Def(a, v) => write!(f, "def {a} = {v};"),
            AxiomRule::Commuting(kinds) => {
                let names: Vec<&str> = kinds.iter().map(|k| k.symbol()).collect();
                write!(f, "commuting {{{}}};", names.join(", "))
            }
            AxiomRule::Rel(a, b) => write!(f, "rel {a} = {b};"),
        }
    }
}

impl Display for Statement {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Axioms { name, rules } => {
                writeln!(f, "axioms {name} {{")?;
                for r in rules {
                    writeln!(f, "  {r}")?;
                }
                f.write_char('}')
            }
            Statement::Let { name, value } => write!(f, "let {name} = {value};"),
            Statement::Assert(a) => write!(f, "{a}"),
            Statement::Forall { vars, assertion } => write!(f, "forall {}: {assertion}", vars.join(",")),
        }
    }
}

impl Display for Script {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}
