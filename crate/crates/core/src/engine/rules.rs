//! Relations between commuting atoms, oriented into rewrite rules.

use crate::algebra::{Atom, Expr, Families, Term};

/// `lhs -> rhs` where `lhs` is a multiset of mutually commuting atoms.
///
/// A rule fires on any monomial containing the multiset inside one run of
/// mutually commuting atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    lhs: Vec<Atom>,
    rhs: Expr,
}

impl Rule {
    pub fn lhs(&self) -> &[Atom] {
        &self.lhs
    }

    pub fn rhs(&self) -> &Expr {
        &self.rhs
    }
}

fn leading(poly: &Expr) -> Option<Term> {
    poly.terms()
        .max_by(|a, b| (a.monomial.len(), &a.monomial).cmp(&(b.monomial.len(), &b.monomial)))
}

/// Turns `poly = 0` into a rule eliminating its leading monomial (longest,
/// then greatest in atom order). A leading power of `H` is cleared by
/// multiplying the relation on the left by its inverse.
pub(crate) fn orient(poly: &Expr, families: &Families) -> Result<Rule, String> {
    let mut poly = poly.normalized_in(families);
    for _ in 0..8 {
        let Some(lead) = leading(&poly) else {
            return Err("relation is trivially satisfied".into());
        };
        if let Some(Atom::H(k)) = lead.monomial.atoms().first() {
            poly = Expr::atom(Atom::H(-k)).mul_free(&poly).normalized_in(families);
            continue;
        }
        let atoms = lead.monomial.atoms();
        if atoms.is_empty() {
            return Err("relation has no operator term to eliminate".into());
        }
        if atoms.iter().any(|a| matches!(a, Atom::H(_) | Atom::Comm(..))) {
            return Err("leading monomial must not contain H or opaque commutators".into());
        }
        for (k, x) in atoms.iter().enumerate() {
            if atoms[k + 1..].iter().any(|y| !families.commute(x, y)) {
                return Err("leading monomial is not a product of commuting atoms".into());
            }
        }
        let inv = lead.coeff.inv().expect("terms are nonzero");
        let rest = &poly - &Expr::term(lead.coeff.clone(), lead.monomial.clone());
        let mut lhs = atoms.to_vec();
        lhs.sort();
        return Ok(Rule { lhs, rhs: rest.scale(&-inv).normalized_in(families) });
    }
    Err("could not isolate a leading monomial".into())
}

fn runs(atoms: &[Atom], families: &Families) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..=atoms.len() {
        if k == atoms.len() || !atoms[start..k].iter().all(|x| families.commute(x, &atoms[k])) {
            out.push((start, k));
            start = k;
        }
    }
    out
}

/// Removes one occurrence of each atom in `pattern`, or `None` if absent.
fn remove_multiset(run: &[Atom], pattern: &[Atom]) -> Option<Vec<Atom>> {
    let mut rest = run.to_vec();
    for p in pattern {
        let pos = rest.iter().position(|x| x == p)?;
        rest.remove(pos);
    }
    Some(rest)
}

fn rewrite_term(term: &Term, rules: &[Rule], families: &Families) -> Option<Expr> {
    let atoms = term.monomial.atoms();
    for (start, end) in runs(atoms, families) {
        for rule in rules {
            let Some(rest) = remove_multiset(&atoms[start..end], &rule.lhs) else {
                continue;
            };
            let mut before = atoms[..start].to_vec();
            before.extend(rest);
            let out = Expr::term(term.coeff.clone(), crate::algebra::Monomial::new(before))
                .mul_free(&rule.rhs)
                .mul_free(&Expr::product(atoms[end..].to_vec()));
            return Some(out);
        }
    }
    None
}

const MAX_PASSES: usize = 256;

pub(crate) fn reduce(e: &Expr, rules: &[Rule], families: &Families) -> Expr {
    let mut current = e.normalized_in(families);
    if rules.is_empty() {
        return current;
    }
    for _ in 0..MAX_PASSES {
        let mut changed = false;
        let mut out = Expr::zero();
        for t in current.terms() {
            match rewrite_term(&t, rules, families) {
                Some(x) => {
                    changed = true;
                    out = &out + &x;
                }
                None => out = &out + &Expr::term(t.coeff, t.monomial),
            }
        }
        current = out.normalized_in(families);
        if !changed {
            break;
        }
    }
    current
}
