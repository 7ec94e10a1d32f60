//! Axiom sets: base commutators, commuting families, definitions, relations.

use std::collections::BTreeMap;

use thiserror::Error;

use super::rules::{orient, reduce, Rule};
use crate::algebra::{Atom, AtomKind, Axis, Expr, Families, Scalar};

/// Named building blocks for the built-in axiom sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomId {
    /// `[P_i, P_j] = [H, P_i] = 0`.
    FreeParticle,
    /// Velocities commute with each other, with momenta and with `H`.
    VelocityCommutes,
    /// `[Q_i, H] = i hbar V_i`.
    Heisenberg,
    /// `[Q_i, V_j] = 0`.
    ConstantVelocity,
    /// `P_i = c^-2 H V_i`, equivalently `V_i = c^2 H^-1 P_i`.
    MomentumVelocity,
    /// `sum_j V_j V_j = c^2`.
    LightSpeed,
    /// `[Q_i, P_j] = i hbar delta_ij`.
    Canonical,
}

impl AxiomId {
    pub fn name(self) -> &'static str {
        match self {
            AxiomId::FreeParticle => "free-particle",
            AxiomId::VelocityCommutes => "velocity-commutes",
            AxiomId::Heisenberg => "heisenberg",
            AxiomId::ConstantVelocity => "constant-velocity",
            AxiomId::MomentumVelocity => "momentum-velocity",
            AxiomId::LightSpeed => "light-speed",
            AxiomId::Canonical => "canonical",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomError {
    #[error("conflicting values declared for comm({0}, {1})")]
    ConflictingCommutator(Atom, Atom),
    #[error("comm({0}, {1}) is nonzero but both atoms are in a commuting family")]
    FamilyConflict(Atom, Atom),
    #[error("comm({0}, {0}) must be zero")]
    SelfCommutator(Atom),
    #[error("atom {0} cannot carry an axiom")]
    InvalidAtom(Atom),
    #[error("definition of {0} refers to itself")]
    SelfReferentialDefinition(Atom),
    #[error("{0} is defined twice")]
    DuplicateDefinition(Atom),
    #[error("relation cannot be oriented: {0}")]
    Unorientable(String),
}

/// `lhs = rhs`, kept as stated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub lhs: Expr,
    pub rhs: Expr,
}

#[derive(Clone, Debug)]
pub struct AxiomSet {
    name: String,
    components: Vec<AxiomId>,
    families: Families,
    base: BTreeMap<(Atom, Atom), Expr>,
    defs: BTreeMap<Atom, Expr>,
    relations: Vec<Relation>,
    rules: Vec<Rule>,
    canonical_rules: Vec<Rule>,
}

pub const BUILTIN_NAMES: [&str; 3] = ["Massless", "Massive", "Heisenberg"];

#[cfg(test)]
fn ax(i: u8) -> Axis {
    Axis::new(i).expect("axis in 1..=3")
}

fn i_hbar() -> Scalar {
    Scalar::imag() * Scalar::hbar(1)
}

impl AxiomSet {
    pub fn builder(name: impl Into<String>) -> AxiomSetBuilder {
        AxiomSetBuilder {
            name: name.into(),
            components: Vec::new(),
            families: Families::none(),
            comms: Vec::new(),
            defs: Vec::new(),
            relations: Vec::new(),
        }
    }

    /// Assembles exactly the listed components, nothing else.
    pub fn from_components(name: impl Into<String>, ids: &[AxiomId]) -> AxiomSet {
        let mut b = AxiomSet::builder(name);
        let mut ids = ids.to_vec();
        ids.sort();
        ids.dedup();
        for &id in &ids {
            match id {
                AxiomId::FreeParticle => b = b.family([AtomKind::H, AtomKind::P]),
                AxiomId::VelocityCommutes => b = b.family([AtomKind::H, AtomKind::P, AtomKind::V]),
                AxiomId::Heisenberg => {
                    for i in Axis::ALL {
                        b = b.commutator(Atom::Q(i), Atom::H(1), Expr::atom(Atom::V(i)).scale(&i_hbar()));
                    }
                }
                AxiomId::ConstantVelocity => {
                    for i in Axis::ALL {
                        for j in Axis::ALL {
                            b = b.commutator(Atom::Q(i), Atom::V(j), Expr::zero());
                        }
                    }
                }
                AxiomId::MomentumVelocity => {
                    for k in Axis::ALL {
                        b = b.definition(
                            Atom::V(k),
                            Expr::product(vec![Atom::H(-1), Atom::P(k)]).scale(&Scalar::c(2)),
                        );
                        b = b.definition(
                            Atom::P(k),
                            Expr::product(vec![Atom::H(1), Atom::V(k)]).scale(&Scalar::c(-2)),
                        );
                    }
                }
                AxiomId::LightSpeed => {
                    let mut sum = Expr::zero();
                    for j in Axis::ALL {
                        sum = &sum + &Expr::product(vec![Atom::V(j), Atom::V(j)]);
                    }
                    b = b.relation(sum, Expr::scalar(Scalar::c(2)));
                }
                AxiomId::Canonical => {
                    for i in Axis::ALL {
                        for j in Axis::ALL {
                            let value = if i == j { Expr::scalar(i_hbar()) } else { Expr::zero() };
                            b = b.commutator(Atom::Q(i), Atom::P(j), value);
                        }
                    }
                }
            }
        }
        b.components = ids;
        b.build().expect("built-in components are consistent")
    }

    /// Massless particle: free particle, Heisenberg equation, constant
    /// velocity of magnitude c, and the momentum-velocity relation.
    pub fn massless() -> AxiomSet {
        AxiomSet::from_components(
            "Massless",
            &[
                AxiomId::FreeParticle,
                AxiomId::VelocityCommutes,
                AxiomId::Heisenberg,
                AxiomId::ConstantVelocity,
                AxiomId::MomentumVelocity,
                AxiomId::LightSpeed,
            ],
        )
    }

    /// Canonical position-momentum algebra with relativistic velocity.
    pub fn massive() -> AxiomSet {
        AxiomSet::from_components(
            "Massive",
            &[
                AxiomId::FreeParticle,
                AxiomId::VelocityCommutes,
                AxiomId::Heisenberg,
                AxiomId::MomentumVelocity,
                AxiomId::Canonical,
            ],
        )
    }

    /// Only the Leibniz machinery and `[Q_i, H] = i hbar V_i`.
    pub fn heisenberg() -> AxiomSet {
        AxiomSet::from_components(
            "Heisenberg",
            &[AxiomId::FreeParticle, AxiomId::VelocityCommutes, AxiomId::Heisenberg],
        )
    }

    pub fn builtin(name: &str) -> Option<AxiomSet> {
        match name {
            "Massless" => Some(AxiomSet::massless()),
            "Massive" => Some(AxiomSet::massive()),
            "Heisenberg" => Some(AxiomSet::heisenberg()),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn components(&self) -> &[AxiomId] {
        &self.components
    }

    pub fn families(&self) -> &Families {
        &self.families
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Value of `[a, b]` from the base table, using antisymmetry.
    pub fn commutator_value(&self, a: &Atom, b: &Atom) -> Option<Expr> {
        if let Some(v) = self.base.get(&(a.clone(), b.clone())) {
            return Some(v.clone());
        }
        self.base.get(&(b.clone(), a.clone())).map(|v| -v)
    }

    pub fn definition(&self, atom: &Atom) -> Option<&Expr> {
        self.defs.get(atom)
    }

    pub fn has_velocity_definitions(&self) -> bool {
        self.defs.keys().any(|a| matches!(a, Atom::V(_)))
    }

    /// Same set with every relation dropped.
    pub fn without_relations(&self) -> AxiomSet {
        let mut out = self.clone();
        out.relations.clear();
        out.rules.clear();
        out.canonical_rules.clear();
        out.components.retain(|c| *c != AxiomId::LightSpeed);
        out
    }

    /// Replaces every `V_i` that has a definition and normalizes.
    pub fn substitute_velocity(&self, e: &Expr) -> Expr {
        e.substitute(|a| match a {
            Atom::V(_) => self.defs.get(a).cloned(),
            _ => None,
        })
        .normalized_in(&self.families)
    }

    /// Applies the relations as stated (no velocity substitution).
    pub fn reduce(&self, e: &Expr) -> Expr {
        reduce(e, &self.rules, &self.families)
    }

    /// Normal form used for equality: velocities substituted by their
    /// definitions, then relations applied.
    pub fn canonical(&self, e: &Expr) -> Expr {
        let mut x = e.normalized_in(&self.families);
        if self.has_velocity_definitions() {
            x = self.substitute_velocity(&x);
        }
        reduce(&x, &self.canonical_rules, &self.families)
    }

    pub fn equivalent(&self, a: &Expr, b: &Expr) -> bool {
        self.canonical(&(a - b)).is_zero()
    }
}

pub struct AxiomSetBuilder {
    name: String,
    components: Vec<AxiomId>,
    families: Families,
    comms: Vec<(Atom, Atom, Expr)>,
    defs: Vec<(Atom, Expr)>,
    relations: Vec<Relation>,
}

fn check_atom(a: &Atom) -> Result<(), AxiomError> {
    match a {
        Atom::Id | Atom::Comm(..) | Atom::H(0) => Err(AxiomError::InvalidAtom(a.clone())),
        _ => Ok(()),
    }
}

impl AxiomSetBuilder {
    pub fn family<I: IntoIterator<Item = AtomKind>>(mut self, kinds: I) -> Self {
        self.families.declare(kinds);
        self
    }

    pub fn commutator(mut self, a: Atom, b: Atom, value: Expr) -> Self {
        self.comms.push((a, b, value));
        self
    }

    pub fn definition(mut self, atom: Atom, value: Expr) -> Self {
        self.defs.push((atom, value));
        self
    }

    pub fn relation(mut self, lhs: Expr, rhs: Expr) -> Self {
        self.relations.push(Relation { lhs, rhs });
        self
    }

    pub fn build(self) -> Result<AxiomSet, AxiomError> {
        let families = self.families;
        let mut base: BTreeMap<(Atom, Atom), Expr> = BTreeMap::new();
        for (a, b, value) in self.comms {
            check_atom(&a)?;
            check_atom(&b)?;
            let value = value.normalized_in(&families);
            if a == b {
                if !value.is_zero() {
                    return Err(AxiomError::SelfCommutator(a));
                }
                continue;
            }
            if families.commute(&a, &b) && !value.is_zero() {
                return Err(AxiomError::FamilyConflict(a, b));
            }
            let existing = base
                .get(&(a.clone(), b.clone()))
                .cloned()
                .or_else(|| base.get(&(b.clone(), a.clone())).map(|v| -v));
            match existing {
                Some(prev) if !(&prev - &value).normalized_in(&families).is_zero() => {
                    return Err(AxiomError::ConflictingCommutator(a, b));
                }
                Some(_) => {}
                None => {
                    base.insert((a, b), value);
                }
            }
        }

        let mut defs = BTreeMap::new();
        for (atom, value) in self.defs {
            check_atom(&atom)?;
            if value.atoms().contains(&atom) {
                return Err(AxiomError::SelfReferentialDefinition(atom));
            }
            if defs.insert(atom.clone(), value.normalized_in(&families)).is_some() {
                return Err(AxiomError::DuplicateDefinition(atom));
            }
        }

        let mut set = AxiomSet {
            name: self.name,
            components: self.components,
            families,
            base,
            defs,
            relations: self.relations,
            rules: Vec::new(),
            canonical_rules: Vec::new(),
        };
        for rel in &set.relations {
            let poly = &rel.lhs - &rel.rhs;
            let rule = orient(&poly, &set.families).map_err(AxiomError::Unorientable)?;
            let canonical = if set.has_velocity_definitions() {
                orient(&set.substitute_velocity(&poly), &set.families)
                    .map_err(AxiomError::Unorientable)?
            } else {
                rule.clone()
            };
            set.rules.push(rule);
            set.canonical_rules.push(canonical);
        }
        Ok(set)
    }
}
