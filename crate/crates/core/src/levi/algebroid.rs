//! Lie algebroids as fiber-wise linear Poisson structures on the dual
//! bundle.
//!
//! Coordinates on the dual bundle are `(e_1..e_N, x_1..x_n)`: fiber
//! coordinates first, so that the Levi factor `e_1..e_m` comes first as the
//! normal-form layout expects.

use malachite_base::num::basic::traits::Zero;
use rand::Rng;

use super::problem::LeviProblem;
use super::LeviError;
use crate::ce::Layout;
use crate::jet::poisson::jacobiator;
use crate::jet::random::{random_poly, JetShape};
use crate::jet::{JetBivector, JetDiffeo, JetPoly, Monomial};
use crate::lie::{levi_civita, StructureData};
use crate::rational::{int, RationalString, Q};

/// A local algebroid of rank `N` over `(ℝ^n, 0)` in a basis of sections:
/// `[e_i, e_j] = Σ_k brackets[i][j][k] e_k` and
/// `#e_i = Σ_j anchor[i][j] ∂/∂x_j`, all coefficients jets on the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algebroid {
    pub rank: usize,
    pub base_dim: usize,
    /// `N × N × N`, antisymmetric in the first two indices.
    pub brackets: Vec<Vec<Vec<JetPoly>>>,
    /// `N × n`.
    pub anchor: Vec<Vec<JetPoly>>,
    pub cap: u32,
}

/// Lifts a base jet to the dual bundle coordinates.
fn lift(p: &JetPoly, rank: usize) -> JetPoly {
    p.embed(rank + p.nvars(), rank)
}

/// Whether `(i, j)`, `i < j`, is consistent with fiber-wise linearity:
/// fiber-fiber brackets have fiber degree exactly 1, fiber-base brackets
/// degree 0, base-base brackets vanish.
fn component_ok(p: &JetPoly, i: usize, j: usize, rank: usize) -> bool {
    let want = match (i < rank, j < rank) {
        (true, true) => Some(1),
        (true, false) | (false, true) => Some(0),
        (false, false) => None,
    };
    match want {
        None => p.is_zero(),
        Some(w) => p.terms().all(|(m, _)| m.degree_in(0..rank) == w),
    }
}

/// First offending pair (1-based), if any.
pub fn fiberwise_violation(pi: &JetBivector, rank: usize) -> Option<(usize, usize)> {
    pi.pairs()
        .find(|((i, j), p)| !component_ok(p, *i, *j, rank))
        .map(|((i, j), _)| (i + 1, j + 1))
}

pub fn check_fiberwise_linear(pi: &JetBivector, rank: usize) -> bool {
    fiberwise_violation(pi, rank).is_none()
}

/// Whether `θ` maps fiber coordinates to fiber-wise linear functions and
/// base coordinates to base functions.
pub fn diffeo_preserves_fibers(theta: &JetDiffeo, rank: usize) -> bool {
    theta.displacement().iter().enumerate().all(|(i, p)| {
        let want = if i < rank { 1 } else { 0 };
        p.terms().all(|(m, _)| m.degree_in(0..rank) == want)
    })
}

/// `{e_i, e_j} = [e_i, e_j]`, `{e_i, x_j} = #e_i(x_j)`, `{x_i, x_j} = 0`.
pub fn algebroid_to_poisson(alg: &Algebroid) -> Result<JetBivector, LeviError> {
    let (nn, n) = (alg.rank, alg.base_dim);
    if n == 0 {
        return Err(LeviError::Algebroid("the base must have positive dimension".into()));
    }
    if alg.brackets.len() != nn
        || alg.brackets.iter().any(|r| r.len() != nn || r.iter().any(|c| c.len() != nn))
        || alg.anchor.len() != nn
        || alg.anchor.iter().any(|r| r.len() != n)
    {
        return Err(LeviError::Algebroid("bracket or anchor table has the wrong shape".into()));
    }
    let base_ok = |p: &JetPoly| p.nvars() == n && p.cap() == alg.cap;
    if !alg.brackets.iter().flatten().flatten().chain(alg.anchor.iter().flatten()).all(base_ok) {
        return Err(LeviError::Algebroid("coefficients must be base jets at the common cap".into()));
    }
    for (i, row) in alg.anchor.iter().enumerate() {
        for (j, p) in row.iter().enumerate() {
            let c = p.coeff(&Monomial::ONE);
            if c != Q::ZERO {
                return Err(LeviError::AnchorAtOrigin {
                    section: i + 1,
                    coordinate: j + 1,
                    value: RationalString(c),
                });
            }
        }
    }
    let total = nn + n;
    let cap = alg.cap;
    let pi = JetBivector::from_fn(total, cap, |i, j| {
        if j < nn {
            let mut p = JetPoly::zero(total, cap);
            for k in 0..nn {
                let coeff = lift(&alg.brackets[i][j][k], nn);
                if !coeff.is_zero() {
                    p += &coeff.mul_var(k);
                }
            }
            p
        } else if i < nn {
            lift(&alg.anchor[i][j - nn], nn)
        } else {
            JetPoly::zero(total, cap)
        }
    });
    let jac = jacobiator(&pi);
    if let Some(((i, j, k), exponents, c)) = jac.first_nonzero_up_to(cap.saturating_sub(1)) {
        return Err(LeviError::Jacobi {
            triple: (i + 1, j + 1, k + 1),
            exponents,
            value: RationalString(c),
        });
    }
    Ok(pi)
}

/// Reads `𝔤 = span(e_1..e_m)` and its action on the complement
/// `(e_{m+1}..e_N, x_1..x_n)` off the linear part, and validates the
/// resulting normalization problem.
pub fn algebroid_problem(pi: JetBivector, rank: usize, levi_dim: usize) -> Result<LeviProblem, LeviError> {
    let total = pi.dim();
    if levi_dim == 0 || levi_dim > rank || rank > total {
        return Err(LeviError::Dimension {
            expected: rank,
            got: levi_dim,
        });
    }
    let data = algebroid_structure(&pi, levi_dim)?;
    LeviProblem::new(data, pi, Layout::Algebroid { fiber_dim: rank })
}

/// `c_ij^k` and `a_iα^β` read off the linear part of `π`, with `𝔤` spanned
/// by the first `levi_dim` coordinates.
pub fn algebroid_structure(pi: &JetBivector, levi_dim: usize) -> Result<StructureData, LeviError> {
    let m = levi_dim;
    Ok(StructureData::from_fn(
        pi.dim(),
        m,
        |i, j, k| pi.linear_coeff(i, j, k),
        |i, al, be| pi.linear_coeff(i, m + al, m + be),
    )?)
}

/// The action algebroid of so(3) rotating ℝ³: constant brackets `ε_ijk`
/// and anchor `#e_i = Σ_{j,k} ε_ijk x_k ∂/∂x_j`.
pub fn so3_transformation_algebroid(cap: u32) -> Algebroid {
    let constant = |c: i64| JetPoly::constant(3, cap, int(c));
    let brackets = (0..3)
        .map(|i| (0..3).map(|j| (0..3).map(|k| constant(levi_civita(i, j, k))).collect()).collect())
        .collect();
    let anchor = (0..3)
        .map(|i| {
            (0..3)
                .map(|j| {
                    let mut p = JetPoly::zero(3, cap);
                    for k in 0..3 {
                        let s = levi_civita(i, j, k);
                        if s != 0 {
                            p.add_term(Monomial::var(k), int(s));
                        }
                    }
                    p
                })
                .collect()
        })
        .collect();
    Algebroid {
        rank: 3,
        base_dim: 3,
        brackets,
        anchor,
        cap,
    }
}

/// A random change of basis of sections and of base coordinates:
/// `e_i ↦ e_i + Σ_k P_ik(x) e_k` with `P_ik(0) = 0`, `x ↦ x + q(x)` with `q`
/// of order 2.
pub fn random_fiber_preserving<R: Rng>(rng: &mut R, rank: usize, base_dim: usize, cap: u32, density: f64) -> JetDiffeo {
    let total = rank + base_dim;
    let shape_p = JetShape::new(1, cap.saturating_sub(1), density);
    let shape_q = JetShape::new(2, cap, density);
    let mut disp = Vec::with_capacity(total);
    for _ in 0..rank {
        let mut d = JetPoly::zero(total, cap);
        for k in 0..rank {
            let p = random_poly(rng, base_dim, cap, shape_p);
            d += &lift(&p, rank).mul_var(k);
        }
        disp.push(d);
    }
    for _ in 0..base_dim {
        disp.push(lift(&random_poly(rng, base_dim, cap, shape_q), rank));
    }
    JetDiffeo::from_displacement(disp).expect("displacement has order at least 2")
}
