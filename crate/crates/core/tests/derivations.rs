//! Replays against hand-derived values. Expected expressions are built
//! directly from atoms and exact scalars, not through the engine.

use num::{BigRational, Complex, Zero};

use opalg_core::algebra::{Atom, Axis, Expr, Monomial, Scalar};
use opalg_core::engine::{commutator, equivalent, replay, replay_under, AxiomSet, Derivation, DerivationId};

fn i_hbar_c(c: i32) -> Scalar {
    Scalar::new(Complex::new(BigRational::zero(), BigRational::from_integer(1.into())), 1, c)
}

fn word(atoms: Vec<Atom>) -> Expr {
    Expr::term(Scalar::one(), Monomial::new(atoms))
}

fn q(i: Axis) -> Expr {
    Expr::atom(Atom::Q(i))
}

fn p(i: Axis) -> Expr {
    Expr::atom(Atom::P(i))
}

#[test]
fn every_builtin_derivation_replays() {
    for d in Derivation::all() {
        let r = replay(&d);
        assert!(r.passed(), "{}: {:?}", d.id, r.first_failure());
    }
}

#[test]
fn massless_bracket_matches_hand_value_for_all_pairs() {
    let m = AxiomSet::massless();
    for i in Axis::ALL {
        for j in Axis::ALL {
            let got = commutator(&q(i), &p(j), &m);
            // i hbar c^2 H^-2 P_i P_j, with P_i P_j in sorted order
            let (a, b) = if i <= j { (i, j) } else { (j, i) };
            let want = Expr::term(i_hbar_c(2), Monomial::new(vec![Atom::H(-2), Atom::P(a), Atom::P(b)]));
            assert_eq!(m.substitute_velocity(&got), want, "[Q{i}, P{j}]");
        }
    }
}

#[test]
fn massive_bracket_is_canonical() {
    let m = AxiomSet::massive();
    for i in Axis::ALL {
        for j in Axis::ALL {
            let got = commutator(&q(i), &p(j), &m);
            let want = if i == j { Expr::scalar(i_hbar_c(0)) } else { Expr::zero() };
            assert!(equivalent(&got, &want, &m), "[Q{i}, P{j}] = {got}");
        }
    }
}

#[test]
fn massive_velocity_bracket_by_hand() {
    // [Q_i, c^2 H^-1 P_j] = i hbar c^2 (delta_ij H^-1 - c^2 H^-3 P_i P_j)
    let m = AxiomSet::massive();
    for i in Axis::ALL {
        for j in Axis::ALL {
            let got = commutator(&q(i), &Expr::atom(Atom::V(j)), &m);
            let mut want = word(vec![Atom::H(-3), Atom::P(i), Atom::P(j)]).scale(&-i_hbar_c(4));
            if i == j {
                want = &want + &word(vec![Atom::H(-1)]).scale(&i_hbar_c(2));
            }
            assert!(equivalent(&got, &want, &m), "[Q{i}, V{j}] = {got}");
        }
    }
}

#[test]
fn inverse_energy_bracket_by_hand() {
    // [Q_1, H^-1] = -H^-1 [Q_1, H] H^-1 = -i hbar c^2 H^-3 P_1
    let m = AxiomSet::massless();
    let one = Axis::ALL[0];
    let got = commutator(&q(one), &Expr::atom(Atom::H(-1)), &m);
    let want = word(vec![Atom::H(-3), Atom::P(one)]).scale(&-i_hbar_c(2));
    assert_eq!(m.substitute_velocity(&got), want);
}

#[test]
fn replay_tallies() {
    let t = |id| replay(&Derivation::get(id)).tally();
    assert_eq!(t(DerivationId::Eq6), (9, 9));
    assert_eq!(t(DerivationId::Eq3), (9, 9));
    assert_eq!(t(DerivationId::Eq5), (9, 9));
    assert_eq!(t(DerivationId::SectionAI), (3, 3));
}

#[test]
fn eq3_keeps_the_velocity_bracket_opaque() {
    let r = replay(&Derivation::get(DerivationId::Eq3));
    for o in &r.outcomes {
        assert!(o.computed.contains_opaque(), "{}", o.computed);
        assert!(o.computed.to_string().contains("comm(V["), "{}", o.computed);
    }
}

#[test]
fn massless_result_does_not_survive_the_massive_axioms() {
    let r = replay_under(&Derivation::get(DerivationId::Eq5), &AxiomSet::massive());
    assert!(!r.passed());
    let r = replay_under(&Derivation::get(DerivationId::Eq6), &AxiomSet::massive());
    assert!(!r.passed());
}

#[test]
fn speed_relation_is_needed_for_step_one() {
    let d = Derivation::get(DerivationId::SectionAI);
    let r = replay_under(&d, &AxiomSet::heisenberg());
    assert!(!r.passed());
}
