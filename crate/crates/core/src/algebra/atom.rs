//! Operator atoms and declared commuting families.

use std::collections::BTreeSet;
use std::fmt;

/// Cartesian component, 1..=3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Axis(u8);

impl Axis {
    pub const ALL: [Axis; 3] = [Axis(1), Axis(2), Axis(3)];

    pub fn new(index: u8) -> Option<Axis> {
        (1..=3).contains(&index).then_some(Axis(index))
    }

    pub fn get(self) -> u8 {
        self.0
    }

    /// Zero-based offset, for array indexing.
    pub fn offset(self) -> usize {
        usize::from(self.0 - 1)
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A generator of the operator algebra.
///
/// Variant order is the monomial total order: `H^n < P < V < Q < [.,.]`.
/// `Comm` is an opaque commutator that the active axioms could not resolve;
/// it is stored with its arguments in ascending order (see [`Atom::comm`]).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Id,
    H(i32),
    P(Axis),
    V(Axis),
    Q(Axis),
    Comm(Box<Atom>, Box<Atom>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AtomKind {
    Id,
    H,
    P,
    V,
    Q,
    Comm,
}

impl AtomKind {
    pub fn symbol(self) -> &'static str {
        match self {
            AtomKind::Id => "Id",
            AtomKind::H => "H",
            AtomKind::P => "P",
            AtomKind::V => "V",
            AtomKind::Q => "Q",
            AtomKind::Comm => "comm",
        }
    }
}

impl Atom {
    pub fn kind(&self) -> AtomKind {
        match self {
            Atom::Id => AtomKind::Id,
            Atom::H(_) => AtomKind::H,
            Atom::P(_) => AtomKind::P,
            Atom::V(_) => AtomKind::V,
            Atom::Q(_) => AtomKind::Q,
            Atom::Comm(..) => AtomKind::Comm,
        }
    }

    pub fn axis(&self) -> Option<Axis> {
        match self {
            Atom::P(a) | Atom::V(a) | Atom::Q(a) => Some(*a),
            _ => None,
        }
    }

    /// Opaque commutator `[a, b]` in canonical orientation.
    ///
    /// Returns the sign (`1` or `-1`) and the atom, or `None` when `a == b`.
    pub fn comm(a: Atom, b: Atom) -> Option<(i64, Atom)> {
        use std::cmp::Ordering::*;
        match a.cmp(&b) {
            Equal => None,
            Less => Some((1, Atom::Comm(Box::new(a), Box::new(b)))),
            Greater => Some((-1, Atom::Comm(Box::new(b), Box::new(a)))),
        }
    }

    pub fn is_opaque(&self) -> bool {
        matches!(self, Atom::Comm(..))
    }
}

/// Sets of atom kinds whose members mutually commute.
///
/// Two atoms commute for reordering purposes iff they are identical, both
/// powers of `H`, one of them is `Id`, or some declared family contains both
/// kinds. Opaque commutators never commute with anything else.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Families {
    sets: Vec<BTreeSet<AtomKind>>,
}

impl Families {
    pub fn none() -> Self {
        Families::default()
    }

    /// `{H, P, V}`: a free particle whose velocity is a function of momentum.
    pub fn free_particle() -> Self {
        let mut f = Families::none();
        f.declare([AtomKind::H, AtomKind::P, AtomKind::V]);
        f
    }

    pub fn declare<I: IntoIterator<Item = AtomKind>>(&mut self, kinds: I) {
        let set: BTreeSet<AtomKind> = kinds.into_iter().collect();
        if !set.is_empty() && !self.sets.contains(&set) {
            self.sets.push(set);
        }
    }

    pub fn sets(&self) -> &[BTreeSet<AtomKind>] {
        &self.sets
    }

    pub fn commute(&self, a: &Atom, b: &Atom) -> bool {
        if a == b || matches!(a, Atom::Id) || matches!(b, Atom::Id) {
            return true;
        }
        let (ka, kb) = (a.kind(), b.kind());
        if ka == AtomKind::Comm || kb == AtomKind::Comm {
            return false;
        }
        if ka == AtomKind::H && kb == AtomKind::H {
            return true;
        }
        self.sets.iter().any(|s| s.contains(&ka) && s.contains(&kb))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ax(i: u8) -> Axis {
        Axis::new(i).unwrap()
    }

    #[test]
    fn atom_order_follows_kind_order() {
        let mut atoms = vec![Atom::Q(ax(1)), Atom::V(ax(3)), Atom::P(ax(2)), Atom::H(-2)];
        atoms.sort();
        assert_eq!(atoms, vec![Atom::H(-2), Atom::P(ax(2)), Atom::V(ax(3)), Atom::Q(ax(1))]);
    }

    #[test]
    fn comm_orientation() {
        let (s, c) = Atom::comm(Atom::V(ax(2)), Atom::Q(ax(1))).unwrap();
        assert_eq!(s, 1);
        let (s2, c2) = Atom::comm(Atom::Q(ax(1)), Atom::V(ax(2))).unwrap();
        assert_eq!(s2, -1);
        assert_eq!(c, c2);
        assert!(Atom::comm(Atom::P(ax(1)), Atom::P(ax(1))).is_none());
    }

    #[test]
    fn free_particle_family() {
        let f = Families::free_particle();
        assert!(f.commute(&Atom::P(ax(1)), &Atom::V(ax(2))));
        assert!(f.commute(&Atom::H(-1), &Atom::P(ax(3))));
        assert!(!f.commute(&Atom::Q(ax(1)), &Atom::P(ax(1))));
        assert!(!f.commute(&Atom::Q(ax(1)), &Atom::Q(ax(2))));
        let none = Families::none();
        assert!(none.commute(&Atom::H(2), &Atom::H(-1)));
        assert!(!none.commute(&Atom::P(ax(1)), &Atom::P(ax(2))));
    }

    #[test]
    fn axis_bounds() {
        assert!(Axis::new(0).is_none());
        assert!(Axis::new(4).is_none());
        assert_eq!(Axis::new(3).unwrap().offset(), 2);
    }
}
