//! Commutator expansion, Heisenberg derivative and velocity substitution.

use std::collections::HashMap;

use thiserror::Error;

use super::axioms::AxiomSet;
use crate::algebra::{Atom, Expr, Monomial, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Closure {
    /// Unresolvable brackets stay as opaque atoms.
    Open,
    /// Any opaque bracket left in the result is an error.
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("unresolved commutator comm({left}, {right}) under {axioms}")]
    UnresolvedCommutator { left: Atom, right: Atom, axioms: String },
}

fn unresolved(atom: &Atom, ax: &AxiomSet) -> EngineError {
    match atom {
        Atom::Comm(a, b) => EngineError::UnresolvedCommutator {
            left: (**a).clone(),
            right: (**b).clone(),
            axioms: ax.name().to_string(),
        },
        other => EngineError::UnresolvedCommutator {
            left: other.clone(),
            right: Atom::Id,
            axioms: ax.name().to_string(),
        },
    }
}

/// Resolves every opaque bracket in `e` as far as the axioms allow.
pub fn expand(e: &Expr, ax: &AxiomSet, closure: Closure) -> Result<Expr, EngineError> {
    let out = Resolver::new(ax).expand(e);
    if closure == Closure::Full {
        if let Some(atom) = out.opaque_atoms().into_iter().next() {
            return Err(unresolved(&atom, ax));
        }
    }
    Ok(out)
}

/// `[a, b]` with both operands first reduced by the stated relations.
pub fn commutator(a: &Expr, b: &Expr, ax: &AxiomSet) -> Expr {
    let mut r = Resolver::new(ax);
    let a = ax.reduce(&r.expand(a));
    let b = ax.reduce(&r.expand(b));
    r.commutator(&a, &b)
}

/// Heisenberg derivative `(1 / i hbar) [e, H]`.
///
/// Fails if the bracket with `H` introduces an opaque commutator that was
/// not already present in `e`.
pub fn ddt(e: &Expr, ax: &AxiomSet) -> Result<Expr, EngineError> {
    let x = expand(e, ax, Closure::Open)?;
    let before = x.opaque_atoms();
    let bracket = commutator(&x, &Expr::atom(Atom::H(1)), ax);
    let out = bracket.scale(&(Scalar::imag() * Scalar::integer(-1) * Scalar::hbar(-1)));
    let after = out.opaque_atoms();
    if let Some(fresh) = after.difference(&before).next() {
        return Err(unresolved(fresh, ax));
    }
    Ok(out)
}

/// Replaces `V_i` by its definition in `ax` and normalizes.
pub fn substitute_velocity(e: &Expr, ax: &AxiomSet) -> Expr {
    ax.substitute_velocity(e)
}

fn momentum_like(a: &Atom) -> bool {
    matches!(a, Atom::H(_) | Atom::P(_) | Atom::V(_))
}

/// `comm(x, y)` written out as `x y - y x`, recursively.
fn flatten_atom(a: &Atom) -> Expr {
    match a {
        Atom::Comm(x, y) => {
            let (x, y) = (flatten_atom(x), flatten_atom(y));
            &x.mul_free(&y) - &y.mul_free(&x)
        }
        other => Expr::atom(other.clone()),
    }
}

/// Canonical form used to decide operator equality.
///
/// Brackets are resolved as far as the axioms allow; the rest are written
/// out as `x y - y x`, so no relation among opaque brackets (Jacobi and
/// the like) is lost. Momentum-type atoms (`H^k`, `P`, `V`) are then moved
/// left with `x m = m x + [x, m]` wherever `[x, m]` resolves. Under the
/// massless axioms this leaves `f(P) Q_i Q_j ...` words, which are a basis
/// because the positions are free among themselves.
pub fn standard_form(e: &Expr, ax: &AxiomSet) -> Expr {
    let mut r = Resolver::new(ax);
    let flat = r
        .expand(e)
        .substitute(|a| matches!(a, Atom::Comm(..)).then(|| flatten_atom(a)));
    let mut order = Orderer { resolver: r, memo: HashMap::new(), active: Vec::new() };
    let out = order.expr(&ax.canonical(&flat));
    ax.canonical(&out)
}

/// Nesting cap for the word ordering; a pathological axiom set just stays
/// partially ordered.
const MAX_ORDER_DEPTH: usize = 256;

struct Orderer<'a> {
    resolver: Resolver<'a>,
    memo: HashMap<Monomial, Expr>,
    active: Vec<Monomial>,
}

impl Orderer<'_> {
    fn expr(&mut self, e: &Expr) -> Expr {
        let mut out = Expr::zero();
        for t in e.terms() {
            out = &out + &self.word(&t.monomial).scale(&t.coeff);
        }
        out
    }

    /// Standard form of a single word. Every step is an identity, so a word
    /// met again while it is still being ordered is left as it is.
    fn word(&mut self, w: &Monomial) -> Expr {
        if let Some(hit) = self.memo.get(w) {
            return hit.clone();
        }
        let plain = Expr::term(Scalar::one(), w.clone());
        if self.active.contains(w) || self.active.len() >= MAX_ORDER_DEPTH {
            return plain;
        }
        let ax = self.resolver.ax;
        let canon = ax.canonical(&plain);
        self.active.push(w.clone());
        let out = if canon != plain {
            self.expr(&canon)
        } else {
            let atoms = w.atoms();
            let swap = (0..atoms.len().saturating_sub(1)).find_map(|k| {
                let (x, m) = (&atoms[k], &atoms[k + 1]);
                if momentum_like(x) || !momentum_like(m) {
                    return None;
                }
                let b = self.resolver.bracket(x, m);
                (!b.contains_opaque()).then_some((k, b))
            });
            match swap {
                None => plain,
                Some((k, b)) => {
                    let mut swapped = atoms.to_vec();
                    swapped.swap(k, k + 1);
                    let left = Expr::product(atoms[..k].to_vec());
                    let right = Expr::product(atoms[k + 2..].to_vec());
                    let extra = left.mul_free(&b).mul_free(&right);
                    self.expr(&ax.canonical(&(&Expr::product(swapped) + &extra)))
                }
            }
        };
        self.active.pop();
        self.memo.insert(w.clone(), out.clone());
        out
    }
}

/// Equality as operators, as far as the axioms decide it.
pub fn equivalent(a: &Expr, b: &Expr, ax: &AxiomSet) -> bool {
    standard_form(&(a - b), ax).is_zero()
}

const MAX_DEPTH: usize = 24;

struct Resolver<'a> {
    ax: &'a AxiomSet,
    stack: Vec<(Atom, Atom)>,
    cache: HashMap<(Atom, Atom), Expr>,
    cut: bool,
}

impl<'a> Resolver<'a> {
    fn new(ax: &'a AxiomSet) -> Self {
        Resolver { ax, stack: Vec::new(), cache: HashMap::new(), cut: false }
    }

    fn expand(&mut self, e: &Expr) -> Expr {
        let mut out = Expr::zero();
        for t in e.terms() {
            let mut acc = Expr::scalar(t.coeff);
            for atom in t.monomial.atoms() {
                let piece = match atom {
                    Atom::Comm(a, b) => self.bracket(a, b),
                    other => Expr::atom(other.clone()),
                };
                acc = acc.mul_free(&piece);
                if acc.is_zero() {
                    break;
                }
            }
            out = &out + &acc;
        }
        out.normalized_in(self.ax.families())
    }

    fn commutator(&mut self, x: &Expr, y: &Expr) -> Expr {
        self.expand(&Expr::formal_commutator(x, y))
    }

    fn expand_atom(&mut self, a: &Atom) -> Expr {
        match a {
            Atom::Comm(x, y) => self.bracket(x, y),
            other => Expr::atom(other.clone()),
        }
    }

    fn bracket(&mut self, a: &Atom, b: &Atom) -> Expr {
        let ea = self.expand_atom(a);
        let eb = self.expand_atom(b);
        match (ea.as_single_atom(), eb.as_single_atom()) {
            (Some((sa, xa)), Some((sb, xb))) => {
                let (xa, xb) = (xa.clone(), xb.clone());
                self.pair(&xa, &xb).scale(&(&sa * &sb))
            }
            _ => self.commutator(&ea, &eb),
        }
    }

    fn opaque(a: &Atom, b: &Atom) -> Expr {
        match Atom::comm(a.clone(), b.clone()) {
            Some((sign, atom)) => Expr::atom(atom).scale(&Scalar::integer(sign)),
            None => Expr::zero(),
        }
    }

    /// `[a, b]` for atoms that are plain or irreducible brackets.
    fn pair(&mut self, a: &Atom, b: &Atom) -> Expr {
        if a == b || self.ax.families().commute(a, b) {
            return Expr::zero();
        }
        if let Some(v) = self.ax.commutator_value(a, b) {
            return v;
        }
        if a > b {
            return -self.pair(b, a);
        }
        let key = (a.clone(), b.clone());
        if let Some(hit) = self.cache.get(&key) {
            return hit.clone();
        }
        if self.stack.contains(&key) || self.stack.len() >= MAX_DEPTH {
            self.cut = true;
            return Self::opaque(a, b);
        }

        let outer_cut = std::mem::replace(&mut self.cut, false);
        self.stack.push(key.clone());
        let resolved = self.try_candidates(a, b);
        self.stack.pop();
        let inner_cut = self.cut;
        self.cut = outer_cut || inner_cut;

        let result = resolved.unwrap_or_else(|| Self::opaque(a, b));
        if !result.contains_opaque() || !inner_cut {
            self.cache.insert(key, result.clone());
        }
        result
    }

    /// First fully resolved candidate expansion, if any.
    fn try_candidates(&mut self, a: &Atom, b: &Atom) -> Option<Expr> {
        // Jacobi: [a, [x, y]] = [[a, x], y] + [x, [a, y]]
        if let Atom::Comm(x, y) = b {
            let (ex, ey) = (self.expand_atom(x), self.expand_atom(y));
            let ax_ = self.bracket(a, x);
            let ay = self.bracket(a, y);
            let r = &self.commutator(&ax_, &ey) + &self.commutator(&ex, &ay);
            if !r.contains_opaque() {
                return Some(r);
            }
        }
        // [[x, y], b] = [x, [y, b]] - [y, [x, b]]
        if let Atom::Comm(x, y) = a {
            let (ex, ey) = (self.expand_atom(x), self.expand_atom(y));
            let yb = self.bracket(y, b);
            let xb = self.bracket(x, b);
            let r = &self.commutator(&ex, &yb) - &self.commutator(&ey, &xb);
            if !r.contains_opaque() {
                return Some(r);
            }
        }
        if let Atom::H(k) = a {
            if let Some(r) = self.power_rule(b, *k) {
                let r = -r;
                if !r.contains_opaque() {
                    return Some(r);
                }
            }
        }
        if let Some(def) = self.ax.definition(b).cloned() {
            let r = self.commutator(&Expr::atom(a.clone()), &def);
            if !r.contains_opaque() {
                return Some(r);
            }
        }
        if let Some(def) = self.ax.definition(a).cloned() {
            let r = self.commutator(&def, &Expr::atom(b.clone()));
            if !r.contains_opaque() {
                return Some(r);
            }
        }
        None
    }

    /// `[x, H^k]` from `[x, H]` by the Leibniz rule and, for negative powers,
    /// `[x, H^-1] = -H^-1 [x, H] H^-1`. The inverse rule is only used when
    /// `[H, [x, H]] = 0`.
    fn power_rule(&mut self, x: &Atom, k: i32) -> Option<Expr> {
        let fam = self.ax.families().clone();
        let h = |p: i32| Expr::atom(Atom::H(p));
        match k {
            0 | 1 => None,
            k if k >= 2 => {
                let first = self.pair(x, &Atom::H(1)).mul_free(&h(k - 1));
                let rest = h(1).mul_free(&self.pair(x, &Atom::H(k - 1)));
                Some((&first + &rest).normalized_in(&fam))
            }
            -1 => {
                let inner = self.pair(x, &Atom::H(1));
                let side = self.commutator(&h(1), &inner);
                if !self.ax.canonical(&side).is_zero() {
                    return None;
                }
                Some(-h(-1).mul_free(&inner).mul_free(&h(-1)).normalized_in(&fam))
            }
            k => {
                let first = self.pair(x, &Atom::H(-1)).mul_free(&h(k + 1));
                let rest = h(-1).mul_free(&self.pair(x, &Atom::H(k + 1)));
                Some((&first + &rest).normalized_in(&fam))
            }
        }
    }
}
