use std::collections::HashMap;
use std::fmt;

use super::{JetError, JetPoly, Monomial};

/// Evaluates polynomials at a fixed tuple of jets, caching the powers
/// `images^α` so that many compositions with the same map share work.
pub struct Substitution {
    images: Vec<JetPoly>,
    cache: HashMap<Monomial, JetPoly>,
}

impl Substitution {
    /// `images[i]` replaces the variable `z_i`.
    pub fn new(images: Vec<JetPoly>) -> Self {
        assert!(!images.is_empty(), "substitution needs at least one image");
        let (nvars, cap) = (images[0].nvars(), images[0].cap());
        let mut cache = HashMap::new();
        cache.insert(Monomial::ONE, JetPoly::one(nvars, cap));
        Substitution { images, cache }
    }

    fn ensure(&mut self, m: Monomial) {
        if self.cache.contains_key(&m) {
            return;
        }
        let i = m.first_var().expect("monomial ONE is always cached");
        let prev = m.div_var(i).unwrap();
        self.ensure(prev);
        let p = &self.cache[&prev] * &self.images[i];
        self.cache.insert(m, p);
    }

    /// `f(images)`, truncated at the images' cap.
    pub fn apply(&mut self, f: &JetPoly) -> JetPoly {
        assert_eq!(f.nvars(), self.images.len(), "substitution arity mismatch");
        let (nvars, cap) = (self.images[0].nvars(), self.images[0].cap());
        let mut out = JetPoly::zero(nvars, cap);
        for (m, c) in f.terms() {
            self.ensure(*m);
            out.add_scaled(&self.cache[m], c);
        }
        out
    }
}

/// Jet of a diffeomorphism `Id + χ` with `χ` of vanishing order at least 2.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct JetDiffeo {
    disp: Vec<JetPoly>,
}

impl JetDiffeo {
    pub fn identity(n: usize, cap: u32) -> Self {
        JetDiffeo {
            disp: vec![JetPoly::zero(n, cap); n],
        }
    }

    /// Validates that every displacement component has no terms of degree
    /// below 2 and that shapes agree.
    pub fn from_displacement(disp: Vec<JetPoly>) -> Result<Self, JetError> {
        let n = disp.len();
        let cap = disp.first().map_or(0, JetPoly::cap);
        for (i, p) in disp.iter().enumerate() {
            if p.nvars() != n {
                return Err(JetError::VarsMismatch {
                    left: n,
                    right: p.nvars(),
                });
            }
            if p.cap() != cap {
                return Err(JetError::CapMismatch {
                    left: cap,
                    right: p.cap(),
                });
            }
            if let Some(d) = p.min_degree().filter(|&d| d < 2) {
                return Err(JetError::NotUnipotent {
                    component: i,
                    degree: d,
                });
            }
        }
        Ok(JetDiffeo { disp })
    }

    /// Builds from full components `θ_i`; their linear part must be `z_i`.
    pub fn from_components(comps: Vec<JetPoly>) -> Result<Self, JetError> {
        let n = comps.len();
        let disp = comps
            .into_iter()
            .enumerate()
            .map(|(i, p)| {
                let z = JetPoly::var(n, p.cap(), i);
                p.checked_sub(&z)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_displacement(disp)
    }

    pub fn dim(&self) -> usize {
        self.disp.len()
    }

    pub fn cap(&self) -> u32 {
        self.disp.first().map_or(0, JetPoly::cap)
    }

    pub fn displacement(&self) -> &[JetPoly] {
        &self.disp
    }

    pub fn is_identity(&self) -> bool {
        self.disp.iter().all(JetPoly::is_zero)
    }

    /// `θ_i = z_i + χ_i`.
    pub fn component(&self, i: usize) -> JetPoly {
        &JetPoly::var(self.dim(), self.cap(), i) + &self.disp[i]
    }

    pub fn components(&self) -> Vec<JetPoly> {
        (0..self.dim()).map(|i| self.component(i)).collect()
    }

    pub fn substitution(&self) -> Substitution {
        Substitution::new(self.components())
    }

    /// `f ∘ self`.
    pub fn pull(&self, f: &JetPoly) -> JetPoly {
        self.substitution().apply(f)
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn after(&self, other: &JetDiffeo) -> JetDiffeo {
        assert_eq!(self.dim(), other.dim(), "diffeo dimension mismatch");
        assert_eq!(self.cap(), other.cap(), "diffeo cap mismatch");
        let mut sub = other.substitution();
        let disp = other
            .disp
            .iter()
            .zip(&self.disp)
            .map(|(b, a)| b + &sub.apply(a))
            .collect();
        JetDiffeo { disp }
    }

    /// Formal inverse by the fixed point `ξ = -χ ∘ (Id + ξ)`.
    ///
    /// Each pass fixes one more degree, so the pass `t` runs at working
    /// degree `t + 1`, and iteration stops once the full-degree pass is
    /// stable.
    pub fn inverse(&self) -> JetDiffeo {
        let n = self.dim();
        let cap = self.cap();
        if cap < 2 || self.is_identity() {
            return self.clone();
        }
        let mut xi: Vec<JetPoly> = vec![JetPoly::zero(n, cap); n];
        let mut t = 1u32;
        loop {
            let work = (t + 1).min(cap);
            let images: Vec<JetPoly> = (0..n)
                .map(|i| &JetPoly::var(n, work, i) + &xi[i].recapped(work))
                .collect();
            let mut sub = Substitution::new(images);
            let next: Vec<JetPoly> = self
                .disp
                .iter()
                .map(|c| -&sub.apply(&c.recapped(work)))
                .collect();
            let next: Vec<JetPoly> = next
                .into_iter()
                .map(|p| p.with_cap(cap).expect("working cap never exceeds cap"))
                .collect();
            let stable = work == cap && next == xi;
            xi = next;
            if stable {
                break;
            }
            t += 1;
            assert!(t <= cap + 1, "jet inversion failed to stabilize");
        }
        JetDiffeo { disp: xi }
    }

    /// Same map truncated to a new (not larger) cap.
    pub fn recapped(&self, cap: u32) -> JetDiffeo {
        JetDiffeo {
            disp: self.disp.iter().map(|p| p.recapped(cap)).collect(),
        }
    }

    pub fn eq_up_to(&self, other: &JetDiffeo, k: u32) -> bool {
        self.disp
            .iter()
            .zip(&other.disp)
            .all(|(a, b)| a.eq_up_to(b, k))
    }
}

impl fmt::Debug for JetDiffeo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Id + ")?;
        f.debug_list().entries(&self.disp).finish()
    }
}
