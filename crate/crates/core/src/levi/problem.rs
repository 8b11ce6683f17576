//! Normalization problems: structure data, the input bivector and the
//! coordinate layout.

use malachite_base::num::arithmetic::traits::Pow;
use malachite_base::num::basic::traits::Zero;
use serde::Serialize;

use super::LeviError;
use crate::ce::Layout;
use crate::jet::poisson::jacobiator;
use crate::jet::{JetBivector, JetDiffeo, JetPoly, Monomial};
use crate::lie::{validate_structure, StructureData};
use crate::rational::{RationalString, Q};

/// A bivector to be put in Levi normal form, with coordinates
/// `(x_1..x_m, y_1..y_{n-m})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeviProblem {
    data: StructureData,
    pi: JetBivector,
    layout: Layout,
}

/// A coefficient where two bivectors differ, indices 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentWitness {
    pub pair: (usize, usize),
    pub exponents: Vec<u32>,
    pub expected: RationalString,
    pub found: RationalString,
}

impl std::fmt::Display for ComponentWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "component {:?} at exponents {:?}: expected {}, found {}",
            self.pair, self.exponents, self.expected, self.found
        )
    }
}

/// `{x_i, x_j} = Σ c_ij^k x_k`, `{x_i, y_α} = Σ a_iα^β y_β`, `{y, y} = 0`.
pub fn model_bivector(data: &StructureData, cap: u32) -> JetBivector {
    JetBivector::from_fn(data.n(), cap, |i, j| model_component(data, cap, i, j))
}

/// Model value of component `(i, j)`, `i < j`; zero when both are `y`.
pub fn model_component(data: &StructureData, cap: u32, i: usize, j: usize) -> JetPoly {
    let n = data.n();
    let m = data.m();
    let mut p = JetPoly::zero(n, cap);
    if j < m {
        for k in 0..m {
            p.add_term(Monomial::var(k), data.c(i, j, k).clone());
        }
    } else if i < m {
        for b in 0..data.r() {
            p.add_term(Monomial::var(m + b), data.a(i, j - m, b).clone());
        }
    }
    p
}

/// Whether `(i, j)`, `i < j`, is constrained by the normal form.
pub fn constrained(m: usize, i: usize, _j: usize) -> bool {
    i < m
}

/// First coefficient of degree `<= k` where `a` and `b` differ on the
/// constrained components.
pub fn first_difference(
    a: &JetBivector,
    b: &JetBivector,
    m: usize,
    k: u32,
    only_constrained: bool,
) -> Option<ComponentWitness> {
    let n = a.dim();
    for ((i, j), p) in a.pairs() {
        if only_constrained && !constrained(m, i, j) {
            continue;
        }
        let q = b.upper(i, j);
        let diff = (p - q).truncated(k);
        let first = diff.terms().next().map(|(mo, _)| *mo);
        if let Some(mono) = first {
            let mono = &mono;
            return Some(ComponentWitness {
                pair: (i + 1, j + 1),
                exponents: mono.exponents(n),
                expected: RationalString(q.coeff(mono)),
                found: RationalString(p.coeff(mono)),
            });
        }
    }
    None
}

/// Multiplies every degree-`k` coefficient by `s^{k-1}`: the bivector
/// `s^{-1}·(M_s)^*` for the homothety `M_s(z) = s z`, which keeps the
/// linear part and the Jacobi identity.
pub fn rescale_bivector(pi: &JetBivector, s: &Q) -> JetBivector {
    pi.map(|p| rescale_poly(p, s))
}

fn rescale_poly(p: &JetPoly, s: &Q) -> JetPoly {
    p.map_coeffs(|m, c| {
        let k = i64::from(m.degree()) - 1;
        let w = if k >= 0 {
            s.clone().pow(k as u64)
        } else {
            Q::from(1) / s.clone()
        };
        c * w
    })
}

/// Conjugates a diffeo by the homothety, `M_s ∘ θ ∘ M_s^{-1}` expressed in
/// coefficients: degree-`k` displacement terms scale by `s^{1-k}`.
pub fn rescale_diffeo(theta: &JetDiffeo, s: &Q) -> JetDiffeo {
    let inv = Q::from(1) / s.clone();
    let disp = theta.displacement().iter().map(|p| rescale_poly(p, &inv)).collect();
    JetDiffeo::from_displacement(disp).expect("rescaling keeps vanishing order")
}

impl LeviProblem {
    /// Validates the structure data and the input: matching dimension,
    /// vanishing at the origin, model linear part on the constrained
    /// components, and the Jacobi identity below degree `D`.
    pub fn new(data: StructureData, pi: JetBivector, layout: Layout) -> Result<Self, LeviError> {
        let report = validate_structure(&data);
        if !report.passed() {
            let names: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
            return Err(LeviError::Structure(names.join(", ")));
        }
        if pi.dim() != data.n() {
            return Err(LeviError::Dimension {
                expected: data.n(),
                got: pi.dim(),
            });
        }
        if let Layout::Algebroid { fiber_dim } = layout {
            if fiber_dim < data.m() || fiber_dim > data.n() {
                return Err(LeviError::Dimension {
                    expected: data.m(),
                    got: fiber_dim,
                });
            }
        }
        for ((i, j), p) in pi.pairs() {
            let c = p.coeff(&Monomial::ONE);
            if c != Q::ZERO {
                return Err(LeviError::NotVanishing {
                    pair: (i + 1, j + 1),
                    value: RationalString(c),
                });
            }
        }
        let model = model_bivector(&data, pi.cap());
        if let Some(w) = first_difference(&pi.linear_part(), &model, data.m(), 1, true) {
            return Err(LeviError::LinearPart(w));
        }
        let jac = jacobiator(&pi);
        if let Some(((i, j, k), exponents, c)) = jac.first_nonzero_up_to(pi.cap().saturating_sub(1)) {
            return Err(LeviError::Jacobi {
                triple: (i + 1, j + 1, k + 1),
                exponents,
                value: RationalString(c),
            });
        }
        if let Layout::Algebroid { fiber_dim } = layout {
            if let Some(pair) = super::algebroid::fiberwise_violation(&pi, fiber_dim) {
                return Err(LeviError::NotFiberwiseLinear { pair });
            }
        }
        Ok(LeviProblem { data, pi, layout })
    }

    pub fn data(&self) -> &StructureData {
        &self.data
    }

    pub fn pi(&self) -> &JetBivector {
        &self.pi
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn cap(&self) -> u32 {
        self.pi.cap()
    }

    pub fn n(&self) -> usize {
        self.data.n()
    }

    pub fn m(&self) -> usize {
        self.data.m()
    }
}

/// `π(P)`: constrained components replaced by the model, `y`-`y` kept.
pub fn project(data: &StructureData, pi: &JetBivector) -> JetBivector {
    let m = data.m();
    let cap = pi.cap();
    JetBivector::from_fn(pi.dim(), cap, |i, j| {
        if constrained(m, i, j) {
            model_component(data, cap, i, j)
        } else {
            pi.upper(i, j).clone()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::pushforward;
    use crate::rational::frac;

    fn conn_input(cap: u32) -> JetBivector {
        let data = StructureData::so3();
        let mut d = vec![JetPoly::zero(3, cap); 3];
        d[0] = JetPoly::monomial(3, cap, Monomial::from_exponents(&[0, 1, 1]), Q::from(1));
        let theta = JetDiffeo::from_displacement(d).unwrap();
        pushforward(&model_bivector(&data, cap), &theta)
    }

    #[test]
    fn model_is_accepted_and_fixed_by_projection() {
        let data = StructureData::so3_semidirect_r3();
        let pi = model_bivector(&data, 4);
        let p = LeviProblem::new(data.clone(), pi.clone(), Layout::Poisson).unwrap();
        assert_eq!(project(p.data(), p.pi()), pi);
    }

    #[test]
    fn pushforward_input_is_valid() {
        let p = LeviProblem::new(StructureData::so3(), conn_input(6), Layout::Poisson).unwrap();
        let proj = project(p.data(), p.pi());
        assert_eq!(project(p.data(), &proj), proj);
    }

    #[test]
    fn wrong_linear_part_reports_witness() {
        let data = StructureData::so3();
        let mut pi = model_bivector(&data, 3);
        let mut p = pi.upper(0, 1).clone();
        p.add_term(Monomial::var(0), Q::from(1));
        pi.set(0, 1, p);
        match LeviProblem::new(data, pi, Layout::Poisson) {
            Err(LeviError::LinearPart(w)) => {
                assert_eq!(w.pair, (1, 2));
                assert_eq!(w.exponents, vec![1, 0, 0]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_poisson_is_rejected() {
        let data = StructureData::so3();
        let mut pi = model_bivector(&data, 3);
        let mut p = pi.upper(0, 1).clone();
        p.add_term(Monomial::from_exponents(&[2, 0, 0]), Q::from(1));
        pi.set(0, 1, p);
        assert!(matches!(
            LeviProblem::new(data, pi, Layout::Poisson),
            Err(LeviError::Jacobi { .. })
        ));
    }

    #[test]
    fn rescaling_round_trips() {
        let pi = conn_input(5);
        let s = frac(1, 3);
        let back = rescale_bivector(&rescale_bivector(&pi, &s), &(Q::from(1) / s));
        assert_eq!(back, pi);
        assert_eq!(rescale_bivector(&pi, &frac(2, 1)).linear_part(), pi.linear_part());
    }
}
