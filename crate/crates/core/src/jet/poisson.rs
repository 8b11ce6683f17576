use super::{JetBivector, JetDiffeo, JetPoly, JetTrivector};

/// `{f, g} = Σ_{i<j} π_ij (∂_i f ∂_j g - ∂_j f ∂_i g)`, truncated.
pub fn poisson_bracket(pi: &JetBivector, f: &JetPoly, g: &JetPoly) -> JetPoly {
    let n = pi.dim();
    assert_eq!(f.nvars(), n, "bracket arity mismatch");
    let df: Vec<JetPoly> = (0..n).map(|i| f.derivative(i)).collect();
    let dg: Vec<JetPoly> = (0..n).map(|i| g.derivative(i)).collect();
    bracket_from_gradients(pi, &df, &dg)
}

pub(crate) fn bracket_from_gradients(pi: &JetBivector, df: &[JetPoly], dg: &[JetPoly]) -> JetPoly {
    let mut out = JetPoly::zero(pi.dim(), pi.cap());
    for ((i, j), p) in pi.pairs() {
        if p.is_zero() {
            continue;
        }
        let mut inner = &df[i] * &dg[j];
        inner -= &(&df[j] * &dg[i]);
        if !inner.is_zero() {
            out += &(p * &inner);
        }
    }
    out
}

/// `{z_a, f} = Σ_b π_ab ∂_b f`.
pub fn bracket_with_coordinate(pi: &JetBivector, a: usize, f: &JetPoly) -> JetPoly {
    let mut out = JetPoly::zero(pi.dim(), pi.cap());
    for b in 0..pi.dim() {
        if a == b {
            continue;
        }
        let dfb = f.derivative(b);
        if dfb.is_zero() {
            continue;
        }
        let p = pi.get(a, b);
        if !p.is_zero() {
            out += &(&p * &dfb);
        }
    }
    out
}

/// Components `∮_{ijk} {z_i, {z_j, z_k}} = ∮ Σ_a π_ia ∂_a π_jk`.
pub fn jacobiator(pi: &JetBivector) -> JetTrivector {
    let n = pi.dim();
    let cap = pi.cap();
    JetTrivector::from_fn(n, cap, |i, j, k| {
        let mut s = JetPoly::zero(n, cap);
        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
            s += &bracket_with_coordinate(pi, a, &pi.get(b, c));
        }
        s
    })
}

/// Alias kept for callers that think in Schouten-bracket terms.
pub fn schouten_jacobiator(pi: &JetBivector) -> JetTrivector {
    jacobiator(pi)
}

/// Whether the jacobiator vanishes in all degrees `< D`, the range where
/// truncation leaves it reliable.
pub fn is_poisson(pi: &JetBivector) -> bool {
    jacobiator(pi).is_zero_up_to(pi.cap().saturating_sub(1))
}

/// `f ∘ θ`.
pub fn compose(f: &JetPoly, theta: &JetDiffeo) -> JetPoly {
    theta.pull(f)
}

pub fn invert(theta: &JetDiffeo) -> JetDiffeo {
    theta.inverse()
}

/// `θ_* π` with component `(i, j)` equal to `{θ_i, θ_j}_π ∘ θ^{-1}`.
pub fn pushforward(pi: &JetBivector, theta: &JetDiffeo) -> JetBivector {
    pushforward_with_inverse(pi, theta, &theta.inverse())
}

/// As [`pushforward`] with a precomputed inverse.
pub fn pushforward_with_inverse(
    pi: &JetBivector,
    theta: &JetDiffeo,
    inverse: &JetDiffeo,
) -> JetBivector {
    let n = pi.dim();
    assert_eq!(theta.dim(), n, "pushforward dimension mismatch");
    if theta.is_identity() {
        return pi.clone();
    }
    let comps = theta.components();
    let grads: Vec<Vec<JetPoly>> = comps
        .iter()
        .map(|c| (0..n).map(|i| c.derivative(i)).collect())
        .collect();
    let mut sub = inverse.substitution();
    JetBivector::from_fn(n, pi.cap(), |i, j| {
        let b = bracket_from_gradients(pi, &grads[i], &grads[j]);
        sub.apply(&b)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::Monomial;
    use crate::lie::levi_civita;
    use crate::rational::int;

    fn so3(cap: u32) -> JetBivector {
        JetBivector::linear(3, cap, |i, j, k| int(levi_civita(i, j, k)))
    }

    #[test]
    fn so3_bracket_of_coordinates() {
        let pi = so3(3);
        let b = poisson_bracket(&pi, &JetPoly::var(3, 3, 0), &JetPoly::var(3, 3, 1));
        assert_eq!(b, JetPoly::var(3, 3, 2));
    }

    #[test]
    fn hand_example() {
        let mut pi = JetBivector::zero(2, 3);
        pi.set(0, 1, JetPoly::monomial(2, 3, Monomial::from_exponents(&[2, 0]), int(1)));
        let b = poisson_bracket(&pi, &JetPoly::var(2, 3, 0), &JetPoly::var(2, 3, 1));
        assert_eq!(b, JetPoly::monomial(2, 3, Monomial::from_exponents(&[2, 0]), int(1)));
    }

    #[test]
    fn linear_so3_is_poisson() {
        assert!(jacobiator(&so3(4)).is_zero());
    }

    #[test]
    fn broken_cyclic_structure_has_witness() {
        // π_12 = z3 + z1 z2, π_23 = z1 + z2 z3, π_31 = z2 - z3 z1
        let n = 3;
        let cap = 4;
        let mk = |lin: usize, a: usize, b: usize, sign: i64| {
            let mut p = JetPoly::var(n, cap, lin);
            p.add_term(Monomial::var(a).mul(&Monomial::var(b)), int(sign));
            p
        };
        let mut pi = JetBivector::zero(n, cap);
        pi.set(0, 1, mk(2, 0, 1, 1));
        pi.set(1, 2, mk(0, 1, 2, 1));
        pi.set(2, 0, mk(1, 2, 0, -1));
        let jac = jacobiator(&pi);
        let w = jac.first_nonzero_up_to(cap - 1);
        assert!(w.is_some());
        assert!(!is_poisson(&pi));
    }

    #[test]
    fn pushforward_of_so3_keeps_linear_part() {
        let pi = so3(3);
        let mut chi = vec![JetPoly::zero(3, 3); 3];
        chi[0] = JetPoly::monomial(3, 3, Monomial::from_exponents(&[0, 2, 0]), int(1));
        let theta = JetDiffeo::from_displacement(chi).unwrap();
        let pushed = pushforward(&pi, &theta);
        assert_eq!(pushed.linear_part(), pi);
        assert!(jacobiator(&pushed).is_zero_up_to(2));
        assert!(!pushed.eq_up_to(&pi, 3));
    }
}
