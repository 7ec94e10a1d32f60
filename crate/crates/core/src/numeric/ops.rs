//! Momentum-space realizations of the operators (natural units, hbar = c = 1).

use num::complex::Complex64;

use super::grid::WaveFunction;
use crate::algebra::Axis;

/// Energy as a function of momentum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Dispersion {
    /// `E = |p|`.
    Massless,
    /// `E = sqrt(p^2 + m^2)`.
    Massive { mass: f64 },
}

impl Dispersion {
    /// Massive contrast case with `m c^2 = 1`.
    pub const UNIT_MASS: Dispersion = Dispersion::Massive { mass: 1.0 };

    pub fn energy(self, p: [f64; 3]) -> f64 {
        let p2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        match self {
            Dispersion::Massless => p2.sqrt(),
            Dispersion::Massive { mass } => (p2 + mass * mass).sqrt(),
        }
    }
}

/// Position realization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Position {
    /// `i (p_i p_k / p^2) d/dp_k`.
    Photon,
    /// `i d/dp_i`.
    Canonical,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OperatorDesc {
    P(Axis),
    /// `H^k`; `k = -1` is the inverse energy.
    HPow(i32, Dispersion),
    /// `V_i = H^-1 P_i`.
    V(Axis, Dispersion),
    Q(Axis, Position),
}

impl OperatorDesc {
    pub fn h(d: Dispersion) -> Self {
        OperatorDesc::HPow(1, d)
    }

    pub fn h_inv(d: Dispersion) -> Self {
        OperatorDesc::HPow(-1, d)
    }

    pub fn is_derivative(&self) -> bool {
        matches!(self, OperatorDesc::Q(..))
    }

    /// Multiplier for multiplication operators.
    pub fn symbol(&self, p: [f64; 3]) -> Option<f64> {
        match *self {
            OperatorDesc::P(i) => Some(p[i.offset()]),
            OperatorDesc::HPow(k, d) => Some(d.energy(p).powi(k)),
            OperatorDesc::V(i, d) => Some(p[i.offset()] / d.energy(p)),
            OperatorDesc::Q(..) => None,
        }
    }
}

/// Central difference along `axis`; valid one layer deeper than `psi`.
pub fn derivative(psi: &WaveFunction, axis: usize) -> WaveFunction {
    let g = psi.grid();
    let (n, s, h2) = (g.n(), g.stride(axis), 2.0 * g.spacing());
    let margin = psi.margin() + 1;
    let v = psi.values();
    let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
    for x in margin..n - margin {
        for y in margin..n - margin {
            for z in margin..n - margin {
                let k = g.index(x, y, z);
                out[k] = (v[k + s] - v[k - s]) / h2;
            }
        }
    }
    WaveFunction::from_parts(g, out, margin)
}

pub fn apply(op: &OperatorDesc, psi: &WaveFunction) -> WaveFunction {
    let i = Complex64::new(0.0, 1.0);
    match *op {
        OperatorDesc::Q(a, Position::Canonical) => derivative(psi, a.offset()).scale(i),
        OperatorDesc::Q(a, Position::Photon) => {
            let mut acc: Option<WaveFunction> = None;
            for k in 0..3 {
                let term = derivative(psi, k).multiply(|p| {
                    let p2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
                    p[a.offset()] * p[k] / p2
                });
                acc = Some(match acc {
                    None => term,
                    Some(s) => s.add(&term),
                });
            }
            acc.expect("three axes").scale(i)
        }
        _ => psi.multiply(|p| op.symbol(p).expect("multiplication operator")),
    }
}

/// `a(b psi) - b(a psi)`.
pub fn commutator_apply(a: &OperatorDesc, b: &OperatorDesc, psi: &WaveFunction) -> WaveFunction {
    apply(a, &apply(b, psi)).sub(&apply(b, &apply(a, psi)))
}
