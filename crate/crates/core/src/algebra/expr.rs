//! Sums of ordered operator monomials with exact coefficients.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Mul, Neg, Sub};

use super::atom::{Atom, Families};
use super::scalar::{gaussian_is_zero, Gaussian, Scalar};

/// Ordered product of atoms. The empty monomial is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<Atom>);

impl Monomial {
    pub fn identity() -> Self {
        Monomial(Vec::new())
    }

    /// Builds a monomial, dropping `Id` and merging adjacent powers of `H`.
    pub fn new(atoms: Vec<Atom>) -> Self {
        Monomial(merge_adjacent(atoms))
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Lexicographically least word equivalent under the commuting families.
    pub fn canonical(&self, families: &Families) -> Monomial {
        let mut current = self.0.clone();
        loop {
            let next = merge_adjacent(lex_least(&current, families));
            if next == current {
                return Monomial(next);
            }
            current = next;
        }
    }
}

fn merge_adjacent(atoms: Vec<Atom>) -> Vec<Atom> {
    let mut out: Vec<Atom> = Vec::with_capacity(atoms.len());
    for atom in atoms {
        match atom {
            Atom::Id | Atom::H(0) => {}
            Atom::H(k) => {
                if let Some(Atom::H(prev)) = out.last_mut() {
                    *prev += k;
                    if *prev == 0 {
                        out.pop();
                    }
                } else {
                    out.push(Atom::H(k));
                }
            }
            other => out.push(other),
        }
    }
    out
}

/// Repeatedly extracts the least atom that commutes with everything to its left.
fn lex_least(atoms: &[Atom], families: &Families) -> Vec<Atom> {
    let mut rest = atoms.to_vec();
    let mut out = Vec::with_capacity(rest.len());
    while !rest.is_empty() {
        let mut best = 0;
        for k in 1..rest.len() {
            if rest[k] < rest[best] && rest[..k].iter().all(|x| families.commute(x, &rest[k])) {
                best = k;
            }
        }
        out.push(rest.remove(best));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct TermKey {
    monomial: Monomial,
    hbar_exp: i32,
    c_exp: i32,
}

/// One term of an [`Expr`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: Scalar,
    pub monomial: Monomial,
}

/// Finite sum of terms. Terms sharing a monomial and the same powers of
/// hbar and c are merged; zero terms are dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Expr {
    terms: BTreeMap<TermKey, Gaussian>,
}

impl Expr {
    pub fn zero() -> Self {
        Expr::default()
    }

    pub fn identity() -> Self {
        Expr::scalar(Scalar::one())
    }

    pub fn scalar(s: Scalar) -> Self {
        Expr::term(s, Monomial::identity())
    }

    pub fn atom(atom: Atom) -> Self {
        Expr::term(Scalar::one(), Monomial::new(vec![atom]))
    }

    pub fn product(atoms: Vec<Atom>) -> Self {
        Expr::term(Scalar::one(), Monomial::new(atoms))
    }

    pub fn term(coeff: Scalar, monomial: Monomial) -> Self {
        let mut e = Expr::zero();
        e.push(coeff, monomial);
        e
    }

    fn push(&mut self, coeff: Scalar, monomial: Monomial) {
        if coeff.is_zero() {
            return;
        }
        let key = TermKey { monomial, hbar_exp: coeff.hbar_exp(), c_exp: coeff.c_exp() };
        let value = coeff.value().clone();
        match self.terms.get_mut(&key) {
            Some(existing) => {
                *existing = &*existing + &value;
                if gaussian_is_zero(existing) {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, value);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = Term> + '_ {
        self.terms.iter().map(|(k, v)| Term {
            coeff: Scalar::new(v.clone(), k.hbar_exp, k.c_exp),
            monomial: k.monomial.clone(),
        })
    }

    /// The single term `coeff * atom`, if that is what this is.
    pub fn as_single_atom(&self) -> Option<(Scalar, &Atom)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (k, v) = self.terms.iter().next()?;
        match k.monomial.atoms() {
            [a] => Some((Scalar::new(v.clone(), k.hbar_exp, k.c_exp), a)),
            _ => None,
        }
    }

    pub fn scale(&self, s: &Scalar) -> Expr {
        let mut out = Expr::zero();
        for t in self.terms() {
            out.push(&t.coeff * s, t.monomial);
        }
        out
    }

    /// Noncommutative product with only the simplifications valid in every
    /// axiom set (identity removal, merging adjacent powers of `H`).
    pub fn mul_free(&self, rhs: &Expr) -> Expr {
        let mut out = Expr::zero();
        for a in self.terms() {
            for b in rhs.terms() {
                let mut atoms = a.monomial.atoms().to_vec();
                atoms.extend_from_slice(b.monomial.atoms());
                out.push(&a.coeff * &b.coeff, Monomial::new(atoms));
            }
        }
        out
    }

    /// Canonical form under the given commuting families.
    pub fn normalized_in(&self, families: &Families) -> Expr {
        let mut out = Expr::zero();
        for t in self.terms() {
            out.push(t.coeff, t.monomial.canonical(families));
        }
        out
    }

    /// Canonical form under the default `{H, P, V}` family.
    pub fn normalized(&self) -> Expr {
        self.normalized_in(&Families::free_particle())
    }

    /// True iff `a - b` normalizes to zero under the default family.
    pub fn equal(a: &Expr, b: &Expr) -> bool {
        (a - b).normalized().is_zero()
    }

    /// Replaces atoms by expressions; atoms mapped to `None` stay.
    pub fn substitute<F: Fn(&Atom) -> Option<Expr>>(&self, f: F) -> Expr {
        let mut out = Expr::zero();
        for t in self.terms() {
            let mut acc = Expr::scalar(t.coeff);
            for atom in t.monomial.atoms() {
                let piece = f(atom).unwrap_or_else(|| Expr::atom(atom.clone()));
                acc = acc.mul_free(&piece);
            }
            out = &out + &acc;
        }
        out
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.terms.keys().flat_map(|k| k.monomial.atoms().iter().cloned()).collect()
    }

    pub fn opaque_atoms(&self) -> BTreeSet<Atom> {
        self.atoms().into_iter().filter(Atom::is_opaque).collect()
    }

    pub fn contains_opaque(&self) -> bool {
        self.terms.keys().any(|k| k.monomial.atoms().iter().any(Atom::is_opaque))
    }

    /// `[a, b]` expanded by bilinearity and the Leibniz rule down to opaque
    /// commutators of atom pairs. Valid in every axiom set.
    pub fn formal_commutator(a: &Expr, b: &Expr) -> Expr {
        let mut out = Expr::zero();
        for ta in a.terms() {
            for tb in b.terms() {
                let coeff = &ta.coeff * &tb.coeff;
                let xs = ta.monomial.atoms();
                let ys = tb.monomial.atoms();
                for (k, x) in xs.iter().enumerate() {
                    for (l, y) in ys.iter().enumerate() {
                        let Some((sign, bracket)) = Atom::comm(x.clone(), y.clone()) else {
                            continue;
                        };
                        let mut atoms = Vec::with_capacity(xs.len() + ys.len() - 1);
                        atoms.extend_from_slice(&xs[..k]);
                        atoms.extend_from_slice(&ys[..l]);
                        atoms.push(bracket);
                        atoms.extend_from_slice(&ys[l + 1..]);
                        atoms.extend_from_slice(&xs[k + 1..]);
                        out.push(&coeff * &Scalar::integer(sign), Monomial::new(atoms));
                    }
                }
            }
        }
        out
    }
}

impl From<Atom> for Expr {
    fn from(a: Atom) -> Self {
        Expr::atom(a)
    }
}

impl From<Scalar> for Expr {
    fn from(s: Scalar) -> Self {
        Expr::scalar(s)
    }
}

impl Add for &Expr {
    type Output = Expr;

    fn add(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        for t in rhs.terms() {
            out.push(t.coeff, t.monomial);
        }
        out
    }
}

impl Add for Expr {
    type Output = Expr;

    fn add(self, rhs: Expr) -> Expr {
        &self + &rhs
    }
}

impl Neg for &Expr {
    type Output = Expr;

    fn neg(self) -> Expr {
        self.scale(&Scalar::integer(-1))
    }
}

impl Neg for Expr {
    type Output = Expr;

    fn neg(self) -> Expr {
        -&self
    }
}

impl Sub for &Expr {
    type Output = Expr;

    fn sub(self, rhs: &Expr) -> Expr {
        self + &(-rhs)
    }
}

impl Sub for Expr {
    type Output = Expr;

    fn sub(self, rhs: Expr) -> Expr {
        &self - &rhs
    }
}

/// Product normalized under the default family.
impl Mul for &Expr {
    type Output = Expr;

    fn mul(self, rhs: &Expr) -> Expr {
        self.mul_free(rhs).normalized()
    }
}

impl Mul for Expr {
    type Output = Expr;

    fn mul(self, rhs: Expr) -> Expr {
        &self * &rhs
    }
}

impl Mul<&Expr> for &Scalar {
    type Output = Expr;

    fn mul(self, rhs: &Expr) -> Expr {
        rhs.scale(self)
    }
}

#[cfg(test)]
mod tests {
    use super::super::atom::{AtomKind, Axis};
    use super::*;

    fn p(i: u8) -> Expr {
        Expr::atom(Atom::P(Axis::new(i).unwrap()))
    }
    fn q(i: u8) -> Expr {
        Expr::atom(Atom::Q(Axis::new(i).unwrap()))
    }
    fn v(i: u8) -> Expr {
        Expr::atom(Atom::V(Axis::new(i).unwrap()))
    }
    fn h(k: i32) -> Expr {
        Expr::atom(Atom::H(k))
    }

    #[test]
    fn momenta_commute() {
        let e = &(&p(2) * &p(1)) - &(&p(1) * &p(2));
        assert!(e.normalized().is_zero());
    }

    #[test]
    fn like_terms_merge() {
        let e = &q(1).scale(&Scalar::integer(2)) + &q(1).scale(&Scalar::integer(3));
        assert_eq!(e, q(1).scale(&Scalar::integer(5)));
        assert_eq!(e.len(), 1);
    }

    #[test]
    fn inverse_power_merges_to_identity() {
        assert_eq!(&h(-1) * &h(1), Expr::identity());
    }

    #[test]
    fn position_momentum_left_alone() {
        let e = &q(1) * &p(1);
        let atoms: Vec<_> = e.terms().next().unwrap().monomial.atoms().to_vec();
        assert_eq!(atoms, vec![Atom::Q(Axis::new(1).unwrap()), Atom::P(Axis::new(1).unwrap())]);
        assert!(!Expr::equal(&(&q(1) * &p(1)), &(&p(1) * &q(1))));
    }

    #[test]
    fn h_sorts_before_momentum() {
        let e = &p(1) * &h(-1);
        let atoms: Vec<_> = e.terms().next().unwrap().monomial.atoms().to_vec();
        assert_eq!(atoms[0], Atom::H(-1));
    }

    #[test]
    fn identity_law_and_inverse() {
        assert_eq!(&Expr::identity() * &q(3), q(3));
        let e = &(&q(1) * &p(2)) + &v(1);
        assert!((&e + &e.scale(&Scalar::integer(-1))).is_zero());
    }

    #[test]
    fn commuting_run_sorting() {
        let lhs = &(&h(-2) * &p(1)) * &p(2);
        let rhs = &(&p(1) * &h(-2)) * &p(2);
        assert!(Expr::equal(&lhs, &rhs));
        let c2 = Expr::scalar(Scalar::c(2));
        assert!(Expr::equal(&(&(&c2 * &h(-1)) * &v(1)), &(&(&c2 * &h(-1)) * &v(1))));
    }

    #[test]
    fn h_powers_meet_across_commuting_atoms() {
        let e = &(&h(1) * &p(3)) * &h(-1);
        assert_eq!(e, p(3));
        // a Q in between blocks the merge
        let blocked = &(&h(1) * &q(3)) * &h(-1);
        assert_eq!(blocked.terms().next().unwrap().monomial.len(), 3);
    }

    #[test]
    fn restricted_families_keep_order() {
        let mut fam = Families::none();
        fam.declare([AtomKind::H, AtomKind::P]);
        let e = h(-1).mul_free(&v(1)).mul_free(&h(-1)).normalized_in(&fam);
        assert_eq!(e.terms().next().unwrap().monomial.len(), 3);
        assert_eq!(e.normalized().terms().next().unwrap().monomial.len(), 2);
    }

    #[test]
    fn formal_commutator_leibniz_shape() {
        // [Q1, H V2] = [Q1,H] V2 + H [Q1,V2]
        let e = Expr::formal_commutator(&q(1), &h(1).mul_free(&v(2)));
        assert_eq!(e.len(), 2);
        assert_eq!(e.opaque_atoms().len(), 2);
        assert!(Expr::formal_commutator(&p(1), &p(1)).is_zero());
    }
}
