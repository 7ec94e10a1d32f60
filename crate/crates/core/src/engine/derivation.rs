//! Built-in derivations of the massless commutation relation, replayed
//! index pair by index pair under an explicit list of axioms.

use std::fmt;
use std::str::FromStr;

use super::axioms::{AxiomId, AxiomSet};
use super::expand::{commutator, ddt, equivalent, expand, Closure};
use crate::algebra::{Atom, Axis, Expr, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DerivationId {
    /// Leibniz expansion of `[Q_i, c^-2 H V_j]` with `[Q_i, V_j]` left open.
    Eq3,
    /// The same bracket once `[Q_i, V_j] = 0`: `i hbar c^-2 V_i V_j`.
    Eq5,
    /// Momentum form `i hbar c^2 H^-2 P_i P_j`.
    Eq6,
    /// `[Q_i, sum_j V_j V_j]` by Leibniz, and zero under the speed relation.
    SectionAI,
    /// `[V_i, V_j] = 0` and `d/dt [Q_i, V_j] = 0`.
    SectionAII,
    /// `d^2 Q_j / dt^2 = 0`.
    DSquare,
}

impl DerivationId {
    pub const ALL: [DerivationId; 6] = [
        DerivationId::Eq3,
        DerivationId::Eq5,
        DerivationId::Eq6,
        DerivationId::SectionAI,
        DerivationId::SectionAII,
        DerivationId::DSquare,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DerivationId::Eq3 => "eq3",
            DerivationId::Eq5 => "eq5",
            DerivationId::Eq6 => "eq6",
            DerivationId::SectionAI => "sectionA-I",
            DerivationId::SectionAII => "sectionA-II",
            DerivationId::DSquare => "dsquare",
        }
    }
}

impl fmt::Display for DerivationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DerivationId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        DerivationId::ALL
            .into_iter()
            .find(|d| d.name().to_ascii_lowercase() == key)
            .ok_or_else(|| format!("unknown derivation '{s}'"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub id: DerivationId,
    /// The only axioms `replay` may use.
    pub axiom_requirements: Vec<AxiomId>,
}

const LEIBNIZ: [AxiomId; 3] = [AxiomId::FreeParticle, AxiomId::VelocityCommutes, AxiomId::Heisenberg];

impl Derivation {
    pub fn get(id: DerivationId) -> Derivation {
        let mut req = LEIBNIZ.to_vec();
        match id {
            DerivationId::Eq3 | DerivationId::DSquare => {}
            DerivationId::Eq5 => req.push(AxiomId::ConstantVelocity),
            DerivationId::Eq6 => req.extend([AxiomId::ConstantVelocity, AxiomId::MomentumVelocity]),
            DerivationId::SectionAI => req.push(AxiomId::LightSpeed),
            DerivationId::SectionAII => {
                req = vec![AxiomId::FreeParticle, AxiomId::Heisenberg, AxiomId::MomentumVelocity]
            }
        }
        Derivation { id, axiom_requirements: req }
    }

    pub fn all() -> Vec<Derivation> {
        DerivationId::ALL.into_iter().map(Derivation::get).collect()
    }

    pub fn axioms(&self) -> AxiomSet {
        AxiomSet::from_components(self.id.name(), &self.axiom_requirements)
    }
}

/// One checked step for one index assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairOutcome {
    pub indices: Vec<u8>,
    pub step: &'static str,
    pub pass: bool,
    pub computed: Expr,
    pub expected: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub id: DerivationId,
    pub axioms: String,
    pub outcomes: Vec<PairOutcome>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.pass)
    }

    pub fn first_failure(&self) -> Option<&PairOutcome> {
        self.outcomes.iter().find(|o| !o.pass)
    }

    /// Number of index assignments whose steps all pass, out of the total.
    pub fn tally(&self) -> (usize, usize) {
        let mut keys: Vec<&[u8]> = self.outcomes.iter().map(|o| o.indices.as_slice()).collect();
        keys.dedup();
        let ok = keys
            .iter()
            .filter(|k| self.outcomes.iter().filter(|o| o.indices == **k).all(|o| o.pass))
            .count();
        (ok, keys.len())
    }
}

/// Replays a derivation under exactly its own axiom requirements.
pub fn replay(d: &Derivation) -> CheckResult {
    let ax = d.axioms();
    let mut result = replay_under(d, &ax);
    if d.id == DerivationId::Eq3 {
        // isolation: without [Q_i, V_j] = 0 the bracket must stay open
        for o in &mut result.outcomes {
            o.pass &= o.computed.contains_opaque();
        }
    }
    result
}

/// Replays a derivation under an arbitrary axiom set.
pub fn replay_under(d: &Derivation, ax: &AxiomSet) -> CheckResult {
    let outcomes = match d.id {
        DerivationId::Eq3 => pairs().flat_map(|(i, j)| eq3(ax, i, j)).collect(),
        DerivationId::Eq5 => pairs().flat_map(|(i, j)| eq5(ax, i, j)).collect(),
        DerivationId::Eq6 => pairs().flat_map(|(i, j)| eq6(ax, i, j)).collect(),
        DerivationId::SectionAI => Axis::ALL.into_iter().flat_map(|i| section_a_i(ax, i)).collect(),
        DerivationId::SectionAII => pairs().flat_map(|(i, j)| section_a_ii(ax, i, j)).collect(),
        DerivationId::DSquare => Axis::ALL.into_iter().flat_map(|j| dsquare(ax, j)).collect(),
    };
    CheckResult { id: d.id, axioms: ax.name().to_string(), outcomes }
}

fn pairs() -> impl Iterator<Item = (Axis, Axis)> {
    Axis::ALL.into_iter().flat_map(|i| Axis::ALL.into_iter().map(move |j| (i, j)))
}

fn q(i: Axis) -> Expr {
    Expr::atom(Atom::Q(i))
}
fn p(i: Axis) -> Expr {
    Expr::atom(Atom::P(i))
}
fn v(i: Axis) -> Expr {
    Expr::atom(Atom::V(i))
}
fn h(k: i32) -> Expr {
    Expr::atom(Atom::H(k))
}
fn i_hbar() -> Scalar {
    Scalar::imag() * Scalar::hbar(1)
}

/// `c^-2 H V_j`, the momentum as written in terms of the velocity.
fn momentum_via_velocity(j: Axis) -> Expr {
    h(1).mul_free(&v(j)).scale(&Scalar::c(-2))
}

fn outcome(ax: &AxiomSet, indices: Vec<u8>, step: &'static str, computed: Expr, expected: Expr, literal: bool) -> PairOutcome {
    let pass = if literal {
        computed.normalized_in(ax.families()) == expected.normalized_in(ax.families())
    } else {
        equivalent(&computed, &expected, ax)
    };
    PairOutcome { indices, step, pass, computed, expected }
}

fn eq3(ax: &AxiomSet, i: Axis, j: Axis) -> Vec<PairOutcome> {
    let computed = commutator(&q(i), &momentum_via_velocity(j), ax);
    // whatever the active axioms make of [Q_i, V_j]; opaque under the bare set
    let open = expand(&Expr::formal_commutator(&q(i), &v(j)), ax, Closure::Open).unwrap_or_default();
    let expected = &v(i).mul_free(&v(j)).scale(&(i_hbar() * Scalar::c(-2)))
        + &h(1).mul_free(&open).scale(&Scalar::c(-2));
    let literal = computed.contains_opaque();
    vec![outcome(ax, vec![i.get(), j.get()], "leibniz", computed, expected, literal)]
}

fn eq5_value(i: Axis, j: Axis) -> Expr {
    v(i).mul_free(&v(j)).scale(&(i_hbar() * Scalar::c(-2)))
}

fn eq6_value(i: Axis, j: Axis) -> Expr {
    Expr::product(vec![Atom::H(-2), Atom::P(i), Atom::P(j)]).scale(&(i_hbar() * Scalar::c(2)))
}

fn eq5(ax: &AxiomSet, i: Axis, j: Axis) -> Vec<PairOutcome> {
    let computed = commutator(&q(i), &momentum_via_velocity(j), ax);
    vec![outcome(ax, vec![i.get(), j.get()], "velocity-form", computed, eq5_value(i, j), false)]
}

fn eq6(ax: &AxiomSet, i: Axis, j: Axis) -> Vec<PairOutcome> {
    let idx = vec![i.get(), j.get()];
    let via_eq5 = ax.substitute_velocity(&commutator(&q(i), &momentum_via_velocity(j), ax));
    let direct = ax.substitute_velocity(&commutator(&q(i), &p(j), ax));
    vec![
        outcome(ax, idx.clone(), "substituted", via_eq5, eq6_value(i, j), true),
        outcome(ax, idx, "direct", direct, eq6_value(i, j), true),
    ]
}

fn speed_sum() -> Expr {
    let mut sum = Expr::zero();
    for j in Axis::ALL {
        sum = &sum + &v(j).mul_free(&v(j));
    }
    sum
}

fn section_a_i(ax: &AxiomSet, i: Axis) -> Vec<PairOutcome> {
    let bare = ax.without_relations();
    let leibniz = commutator(&q(i), &speed_sum(), &bare);
    let mut expected = Expr::zero();
    for j in Axis::ALL {
        let open = expand(&Expr::formal_commutator(&q(i), &v(j)), &bare, Closure::Open).unwrap_or_default();
        expected = &expected + &(&open.mul_free(&v(j)) + &v(j).mul_free(&open));
    }
    let literal = leibniz.contains_opaque();
    let mut out = vec![outcome(&bare, vec![i.get()], "leibniz", leibniz, expected, literal)];
    let reduced = commutator(&q(i), &speed_sum(), ax);
    out.push(outcome(ax, vec![i.get()], "speed-relation", reduced, Expr::zero(), true));
    out
}

fn section_a_ii(ax: &AxiomSet, i: Axis, j: Axis) -> Vec<PairOutcome> {
    let idx = vec![i.get(), j.get()];
    let vv = commutator(&v(i), &v(j), ax);
    let bracket = expand(&Expr::formal_commutator(&q(i), &v(j)), ax, Closure::Open).unwrap_or_default();
    let (rate, pass_ddt) = match ddt(&bracket, ax) {
        Ok(e) => (e, true),
        Err(_) => (Expr::formal_commutator(&bracket, &h(1)), false),
    };
    let mut dd = outcome(ax, idx.clone(), "ddt-bracket", rate, Expr::zero(), true);
    dd.pass &= pass_ddt;
    vec![outcome(ax, idx, "velocities-commute", vv, Expr::zero(), true), dd]
}

fn dsquare(ax: &AxiomSet, j: Axis) -> Vec<PairOutcome> {
    let (computed, ok) = match ddt(&q(j), ax).and_then(|x| ddt(&x, ax)) {
        Ok(e) => (e, true),
        Err(_) => (Expr::formal_commutator(&Expr::formal_commutator(&q(j), &h(1)), &h(1)), false),
    };
    let mut o = outcome(ax, vec![j.get()], "second-derivative", computed, Expr::zero(), true);
    o.pass &= ok;
    vec![o]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_builtin_replays() {
        for d in Derivation::all() {
            let r = replay(&d);
            assert!(r.passed(), "{} failed: {:?}", d.id, r.first_failure());
        }
    }

    #[test]
    fn tallies() {
        assert_eq!(replay(&Derivation::get(DerivationId::Eq6)).tally(), (9, 9));
        assert_eq!(replay(&Derivation::get(DerivationId::SectionAI)).tally(), (3, 3));
    }

    #[test]
    fn eq3_keeps_the_open_bracket() {
        let r = replay(&Derivation::get(DerivationId::Eq3));
        let first = &r.outcomes[0];
        assert_eq!(first.indices, vec![1, 1]);
        assert!(first.computed.contains_opaque());
        let vv = Expr::product(vec![Atom::V(Axis::ALL[0]), Atom::V(Axis::ALL[0])]);
        assert!(first.computed.terms().any(|t| Expr::term(t.coeff.clone(), t.monomial.clone())
            == vv.scale(&(i_hbar() * Scalar::c(-2)))));
    }

    #[test]
    fn eq5_fails_under_massive() {
        let d = Derivation::get(DerivationId::Eq5);
        let m = AxiomSet::massive();
        let r = replay_under(&d, &m);
        assert!(!r.passed());
        let bad = r.first_failure().unwrap();
        assert_eq!(m.canonical(&bad.computed), Expr::scalar(i_hbar()));
        // off-diagonal pairs collapse to zero
        let off = r.outcomes.iter().find(|o| o.indices == vec![1, 2]).unwrap();
        assert!(m.canonical(&off.computed).is_zero());
    }

    #[test]
    fn eq3_holds_as_an_identity_under_massless() {
        let r = replay_under(&Derivation::get(DerivationId::Eq3), &AxiomSet::massless());
        assert!(r.passed());
    }

    #[test]
    fn parses_names() {
        assert_eq!("sectionA_I".parse::<DerivationId>().unwrap(), DerivationId::SectionAI);
        assert_eq!("EQ6".parse::<DerivationId>().unwrap(), DerivationId::Eq6);
        assert!("eq4".parse::<DerivationId>().is_err());
    }
}
