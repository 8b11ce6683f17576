use std::fmt;

use malachite_base::num::basic::traits::Zero;

use super::{JetError, JetPoly};
use crate::rational::{is_zero, Q};

/// `Σ u_i ∂/∂z_i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct JetVectorField {
    comps: Vec<JetPoly>,
}

impl JetVectorField {
    pub fn zero(ncomp: usize, nvars: usize, cap: u32) -> Self {
        JetVectorField {
            comps: vec![JetPoly::zero(nvars, cap); ncomp],
        }
    }

    pub fn new(comps: Vec<JetPoly>) -> Result<Self, JetError> {
        if let Some(first) = comps.first() {
            for c in &comps[1..] {
                if c.cap() != first.cap() {
                    return Err(JetError::CapMismatch {
                        left: first.cap(),
                        right: c.cap(),
                    });
                }
                if c.nvars() != first.nvars() {
                    return Err(JetError::VarsMismatch {
                        left: first.nvars(),
                        right: c.nvars(),
                    });
                }
            }
        }
        Ok(JetVectorField { comps })
    }

    pub fn components(&self) -> &[JetPoly] {
        &self.comps
    }

    pub fn component(&self, i: usize) -> &JetPoly {
        &self.comps[i]
    }

    pub fn component_mut(&mut self, i: usize) -> &mut JetPoly {
        &mut self.comps[i]
    }

    pub fn into_components(self) -> Vec<JetPoly> {
        self.comps
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(JetPoly::is_zero)
    }

    /// `u(F) = Σ u_i ∂F/∂z_i`.
    pub fn apply(&self, f: &JetPoly) -> JetPoly {
        let mut out = JetPoly::zero(f.nvars(), f.cap());
        for (i, u) in self.comps.iter().enumerate() {
            if !u.is_zero() {
                out += &(u * &f.derivative(i));
            }
        }
        out
    }
}

impl fmt::Debug for JetVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.comps).finish()
    }
}

fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Antisymmetric bivector `Σ_{i<j} π_ij ∂_i ∧ ∂_j`, stored upper-triangular.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct JetBivector {
    n: usize,
    cap: u32,
    comps: Vec<JetPoly>,
}

impl JetBivector {
    pub fn zero(n: usize, cap: u32) -> Self {
        JetBivector {
            n,
            cap,
            comps: vec![JetPoly::zero(n, cap); pair_count(n)],
        }
    }

    /// Builds from `f(i, j)` for `i < j`.
    pub fn from_fn(n: usize, cap: u32, mut f: impl FnMut(usize, usize) -> JetPoly) -> Self {
        let mut b = Self::zero(n, cap);
        for i in 0..n {
            for j in i + 1..n {
                b.set(i, j, f(i, j));
            }
        }
        b
    }

    /// Linear bivector `π_ij = Σ_k coeff(i, j, k) z_k` for `i < j`.
    pub fn linear(n: usize, cap: u32, coeff: impl Fn(usize, usize, usize) -> Q) -> Self {
        Self::from_fn(n, cap, |i, j| {
            let mut p = JetPoly::zero(n, cap);
            for k in 0..n {
                let c = coeff(i, j, k);
                if !is_zero(&c) {
                    p.add_term(super::Monomial::var(k), c);
                }
            }
            p
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    /// Signed component: `π_ji = -π_ij`, `π_ii = 0`.
    pub fn get(&self, i: usize, j: usize) -> JetPoly {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.comps[pair_index(self.n, i, j)].clone(),
            std::cmp::Ordering::Greater => -&self.comps[pair_index(self.n, j, i)],
            std::cmp::Ordering::Equal => JetPoly::zero(self.n, self.cap),
        }
    }

    /// Stored component for `i < j`.
    pub fn upper(&self, i: usize, j: usize) -> &JetPoly {
        assert!(i < j, "upper() needs i < j");
        &self.comps[pair_index(self.n, i, j)]
    }

    /// Sets `π_ij`; for `i > j` stores `-p` at `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, p: JetPoly) {
        assert!(i != j, "diagonal bivector component");
        assert!(p.cap() == self.cap && p.nvars() == self.n, "component shape mismatch");
        if i < j {
            self.comps[pair_index(self.n, i, j)] = p;
        } else {
            self.comps[pair_index(self.n, j, i)] = -&p;
        }
    }

    pub fn stored(&self) -> &[JetPoly] {
        &self.comps
    }

    /// `((i, j), π_ij)` for `i < j`.
    pub fn pairs(&self) -> impl Iterator<Item = ((usize, usize), &JetPoly)> + '_ {
        let n = self.n;
        (0..n)
            .flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
            .zip(self.comps.iter())
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(JetPoly::is_zero)
    }

    pub fn map(&self, f: impl Fn(&JetPoly) -> JetPoly) -> JetBivector {
        JetBivector {
            n: self.n,
            cap: self.cap,
            comps: self.comps.iter().map(f).collect(),
        }
    }

    pub fn linear_part(&self) -> JetBivector {
        self.map(|p| p.homogeneous(1))
    }

    pub fn truncated(&self, k: u32) -> JetBivector {
        self.map(|p| p.truncated(k))
    }

    pub fn eq_up_to(&self, other: &JetBivector, k: u32) -> bool {
        self.n == other.n
            && self
                .comps
                .iter()
                .zip(&other.comps)
                .all(|(a, b)| a.eq_up_to(b, k))
    }

    pub fn checked_sub(&self, other: &JetBivector) -> Result<JetBivector, JetError> {
        if self.n != other.n {
            return Err(JetError::VarsMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.checked_sub(b))
            .collect::<Result<_, _>>()?;
        Ok(JetBivector {
            n: self.n,
            cap: self.cap,
            comps,
        })
    }

    pub fn checked_add(&self, other: &JetBivector) -> Result<JetBivector, JetError> {
        if self.n != other.n {
            return Err(JetError::VarsMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.checked_add(b))
            .collect::<Result<_, _>>()?;
        Ok(JetBivector {
            n: self.n,
            cap: self.cap,
            comps,
        })
    }

    /// Components must all be at `cap` with `n` variables.
    pub fn from_components(
        n: usize,
        cap: u32,
        comps: Vec<JetPoly>,
    ) -> Result<JetBivector, JetError> {
        if comps.len() != pair_count(n) {
            return Err(JetError::ComponentCount {
                expected: pair_count(n),
                got: comps.len(),
            });
        }
        for c in &comps {
            if c.cap() != cap {
                return Err(JetError::CapMismatch {
                    left: cap,
                    right: c.cap(),
                });
            }
            if c.nvars() != n {
                return Err(JetError::VarsMismatch {
                    left: n,
                    right: c.nvars(),
                });
            }
        }
        Ok(JetBivector { n, cap, comps })
    }

    /// Coefficient `c` at `(i, j, k)` of the linear part: `π_ij ∋ c z_k`.
    pub fn linear_coeff(&self, i: usize, j: usize, k: usize) -> Q {
        if i == j {
            return Q::ZERO;
        }
        let c = self.comps[pair_index(self.n, i.min(j), i.max(j))]
            .coeff(&super::Monomial::var(k));
        if i < j {
            c
        } else {
            -c
        }
    }
}

impl fmt::Debug for JetBivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_map();
        for ((i, j), p) in self.pairs() {
            if !p.is_zero() {
                d.entry(&(i + 1, j + 1), p);
            }
        }
        d.finish()
    }
}

fn triple_list(n: usize) -> Vec<(usize, usize, usize)> {
    let mut v = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                v.push((i, j, k));
            }
        }
    }
    v
}

/// Totally antisymmetric trivector, stored for `i < j < k`.
#[derive(Clone, PartialEq, Eq)]
pub struct JetTrivector {
    n: usize,
    cap: u32,
    triples: Vec<(usize, usize, usize)>,
    comps: Vec<JetPoly>,
}

impl JetTrivector {
    pub fn zero(n: usize, cap: u32) -> Self {
        let triples = triple_list(n);
        let comps = vec![JetPoly::zero(n, cap); triples.len()];
        JetTrivector {
            n,
            cap,
            triples,
            comps,
        }
    }

    pub fn from_fn(n: usize, cap: u32, mut f: impl FnMut(usize, usize, usize) -> JetPoly) -> Self {
        let triples = triple_list(n);
        let comps = triples.iter().map(|&(i, j, k)| f(i, j, k)).collect();
        JetTrivector {
            n,
            cap,
            triples,
            comps,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn stored(&self) -> &[JetPoly] {
        &self.comps
    }

    pub fn components(&self) -> impl Iterator<Item = ((usize, usize, usize), &JetPoly)> + '_ {
        self.triples.iter().copied().zip(self.comps.iter())
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(JetPoly::is_zero)
    }

    /// Zero in all degrees `<= k`.
    pub fn is_zero_up_to(&self, k: u32) -> bool {
        self.comps.iter().all(|p| p.truncated(k).is_zero())
    }

    /// First nonzero term of degree `<= k`: `((i, j, k), exponents, coeff)`.
    pub fn first_nonzero_up_to(&self, k: u32) -> Option<((usize, usize, usize), Vec<u32>, Q)> {
        self.components().find_map(|(t, p)| {
            p.terms()
                .find(|(m, _)| m.degree() <= k)
                .map(|(m, c)| (t, m.exponents(self.n), c.clone()))
        })
    }
}

impl fmt::Debug for JetTrivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_map();
        for ((i, j, k), p) in self.components() {
            if !p.is_zero() {
                d.entry(&(i + 1, j + 1, k + 1), p);
            }
        }
        d.finish()
    }
}
