//! Seeded random atoms, expressions and operator trees for property checks.

use num::{BigInt, BigRational, Complex};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{Atom, Axis, Expr, Monomial, Scalar};
use crate::numeric::OpTree;

fn axis<R: Rng>(rng: &mut R) -> Axis {
    *Axis::ALL.choose(rng).expect("three axes")
}

/// `Q`, `P`, `V` or a power of `H` in `-2..=2`.
pub fn atom<R: Rng>(rng: &mut R) -> Atom {
    match rng.gen_range(0..4) {
        0 => Atom::Q(axis(rng)),
        1 => Atom::P(axis(rng)),
        2 => Atom::V(axis(rng)),
        _ => Atom::H(*[-2, -1, 1, 2].choose(rng).expect("nonempty")),
    }
}

/// Atoms without `Q`: everything here is a function of momentum.
pub fn momentum_atom<R: Rng>(rng: &mut R) -> Atom {
    match rng.gen_range(0..3) {
        0 => Atom::P(axis(rng)),
        1 => Atom::V(axis(rng)),
        _ => Atom::H(*[-1, 1].choose(rng).expect("nonempty")),
    }
}

fn small_rational<R: Rng>(rng: &mut R) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(-6..=6)), BigInt::from(rng.gen_range(1..=4)))
}

/// Nonzero Gaussian rational with small powers of hbar and c.
pub fn scalar<R: Rng>(rng: &mut R) -> Scalar {
    loop {
        let re = small_rational(rng);
        let im = if rng.gen_bool(0.4) { small_rational(rng) } else { BigRational::from_integer(0.into()) };
        let s = Scalar::new(Complex::new(re, im), rng.gen_range(-2..=2), rng.gen_range(-2..=2));
        if !s.is_zero() {
            return s;
        }
    }
}

/// Random normalized expression; a few monomials carry opaque brackets.
pub fn expr<R: Rng>(rng: &mut R) -> Expr {
    let mut e = Expr::zero();
    for _ in 0..rng.gen_range(1..=4) {
        let mut atoms: Vec<Atom> = (0..rng.gen_range(0..=4)).map(|_| atom(rng)).collect();
        if rng.gen_bool(0.15) {
            if let Some((_, c)) = Atom::comm(atom(rng), atom(rng)) {
                let at = rng.gen_range(0..=atoms.len());
                atoms.insert(at, c);
            }
        }
        e = &e + &Expr::term(scalar(rng), Monomial::new(atoms));
    }
    e.normalized()
}

fn unit_scale<R: Rng>(rng: &mut R) -> Scalar {
    let s = *[1, -1, 2, -2].choose(rng).expect("nonempty");
    let r = Scalar::ratio(s, 2);
    if rng.gen_bool(0.3) {
        r * Scalar::imag()
    } else {
        r
    }
}

fn momentum_monomial<R: Rng>(rng: &mut R, max: usize) -> OpTree {
    let atoms: Vec<OpTree> = (0..rng.gen_range(1..=max)).map(|_| OpTree::Atom(momentum_atom(rng))).collect();
    if atoms.len() == 1 {
        atoms.into_iter().next().expect("one atom")
    } else {
        OpTree::Product(atoms)
    }
}

/// Operator tree with at most one position operator per term, so its
/// symbolic value is fully resolved under the massless axioms.
pub fn tree<R: Rng>(rng: &mut R) -> OpTree {
    let mut terms = Vec::new();
    for _ in 0..rng.gen_range(1..=2) {
        let bracket = OpTree::Comm(Box::new(OpTree::Atom(Atom::Q(axis(rng)))), Box::new(momentum_monomial(rng, 2)));
        let t = match rng.gen_range(0..3) {
            0 => bracket,
            1 => OpTree::Product(vec![OpTree::Atom(momentum_atom(rng)), bracket]),
            _ => OpTree::Comm(Box::new(OpTree::Atom(momentum_atom(rng))), Box::new(bracket)),
        };
        terms.push(OpTree::Scale(unit_scale(rng), Box::new(t)));
    }
    if terms.len() == 1 {
        terms.pop().expect("one term")
    } else {
        OpTree::Sum(terms)
    }
}
