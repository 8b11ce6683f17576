use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use malachite_base::num::basic::traits::{One, Zero};

use super::monomial::{Monomial, MAX_VARS};
use super::JetError;
use crate::rational::{is_zero, Q};

/// A polynomial in `nvars` variables truncated at total degree `cap`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct JetPoly {
    nvars: usize,
    cap: u32,
    terms: BTreeMap<Monomial, Q>,
}

impl JetPoly {
    pub fn zero(nvars: usize, cap: u32) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables supported");
        JetPoly {
            nvars,
            cap,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, cap: u32, c: Q) -> Self {
        let mut p = Self::zero(nvars, cap);
        p.add_term(Monomial::ONE, c);
        p
    }

    pub fn one(nvars: usize, cap: u32) -> Self {
        Self::constant(nvars, cap, Q::ONE)
    }

    /// The coordinate function `z_i`.
    pub fn var(nvars: usize, cap: u32, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut p = Self::zero(nvars, cap);
        p.add_term(Monomial::var(i), Q::ONE);
        p
    }

    pub fn monomial(nvars: usize, cap: u32, mono: Monomial, c: Q) -> Self {
        let mut p = Self::zero(nvars, cap);
        p.add_term(mono, c);
        p
    }

    /// Builds from terms, rejecting any term above the cap. Repeated
    /// monomials are summed.
    pub fn from_terms(
        nvars: usize,
        cap: u32,
        terms: impl IntoIterator<Item = (Monomial, Q)>,
    ) -> Result<Self, JetError> {
        if nvars > MAX_VARS {
            return Err(JetError::TooManyVars(nvars));
        }
        let mut p = Self::zero(nvars, cap);
        for (m, c) in terms {
            if m.degree() > cap {
                return Err(JetError::DegreeAboveCap {
                    degree: m.degree(),
                    cap,
                });
            }
            if m.max_var().is_some_and(|v| v >= nvars) {
                return Err(JetError::ExponentLength {
                    expected: nvars,
                    got: m.max_var().unwrap() + 1,
                });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    /// Builds from `(exponent vector, coefficient)` pairs.
    pub fn from_exponent_terms(
        nvars: usize,
        cap: u32,
        terms: impl IntoIterator<Item = (Vec<u32>, Q)>,
    ) -> Result<Self, JetError> {
        let mut monos = Vec::new();
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(JetError::ExponentLength {
                    expected: nvars,
                    got: e.len(),
                });
            }
            monos.push((Monomial::from_exponents(&e), c));
        }
        Self::from_terms(nvars, cap, monos)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or(Q::ZERO)
    }

    /// Adds `c * m`; terms above the cap are discarded.
    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if m.degree() > self.cap || is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if is_zero(e.get()) {
                    e.remove();
                }
            }
        }
    }

    fn check_compatible(&self, other: &JetPoly) -> Result<(), JetError> {
        if self.cap != other.cap {
            return Err(JetError::CapMismatch {
                left: self.cap,
                right: other.cap,
            });
        }
        if self.nvars != other.nvars {
            return Err(JetError::VarsMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &JetPoly) -> Result<JetPoly, JetError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &JetPoly) -> Result<JetPoly, JetError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, -c);
        }
        Ok(out)
    }

    /// Truncated product.
    pub fn checked_mul(&self, other: &JetPoly) -> Result<JetPoly, JetError> {
        self.check_compatible(other)?;
        let mut acc: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (a, ca) in &self.terms {
            let budget = self.cap - a.degree();
            for (b, cb) in &other.terms {
                if b.degree() > budget {
                    break;
                }
                let prod = ca * cb;
                match acc.entry(a.mul(b)) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => *e.get_mut() += prod,
                }
            }
        }
        acc.retain(|_, c| !is_zero(c));
        Ok(JetPoly {
            nvars: self.nvars,
            cap: self.cap,
            terms: acc,
        })
    }

    pub fn scale(&self, s: &Q) -> JetPoly {
        if is_zero(s) {
            return JetPoly::zero(self.nvars, self.cap);
        }
        JetPoly {
            nvars: self.nvars,
            cap: self.cap,
            terms: self.terms.iter().map(|(m, c)| (*m, c * s)).collect(),
        }
    }

    /// `∂/∂z_i`.
    pub fn derivative(&self, i: usize) -> JetPoly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if let Some(d) = m.div_var(i) {
                terms.insert(d, c * Q::from(m.exp(i)));
            }
        }
        JetPoly {
            nvars: self.nvars,
            cap: self.cap,
            terms,
        }
    }

    /// `z_i · self`, truncated.
    pub fn mul_var(&self, i: usize) -> JetPoly {
        let mut out = JetPoly::zero(self.nvars, self.cap);
        for (m, c) in &self.terms {
            out.add_term(m.mul_var(i), c.clone());
        }
        out
    }

    /// Keeps only terms of degree at most `k` (same cap).
    pub fn truncated(&self, k: u32) -> JetPoly {
        JetPoly {
            nvars: self.nvars,
            cap: self.cap,
            terms: self
                .terms
                .iter()
                .take_while(|(m, _)| m.degree() <= k)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Homogeneous component of degree `k`.
    pub fn homogeneous(&self, k: u32) -> JetPoly {
        JetPoly {
            nvars: self.nvars,
            cap: self.cap,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == k)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Keeps terms satisfying `keep`.
    pub fn filtered(&self, keep: impl Fn(&Monomial) -> bool) -> JetPoly {
        JetPoly {
            nvars: self.nvars,
            cap: self.cap,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Equality of all terms of degree at most `k`.
    pub fn eq_up_to(&self, other: &JetPoly, k: u32) -> bool {
        self.truncated(k).terms == other.truncated(k).terms
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, other: &JetPoly, s: &Q) {
        self.check_compatible(other).unwrap_or_else(|e| panic!("{e}"));
        if is_zero(s) {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(*m, c * s);
        }
    }

    /// Drops terms above `cap` and lowers the cap to it.
    pub fn recapped(&self, cap: u32) -> JetPoly {
        let mut out = self.truncated(cap);
        out.cap = cap;
        out
    }

    /// Same terms under a different cap; errors if a term would be lost.
    pub fn with_cap(&self, cap: u32) -> Result<JetPoly, JetError> {
        if let Some(top) = self.max_degree() {
            if top > cap {
                return Err(JetError::DegreeAboveCap { degree: top, cap });
            }
        }
        Ok(JetPoly {
            nvars: self.nvars,
            cap,
            terms: self.terms.clone(),
        })
    }

    /// Re-embeds into `nvars` variables with variable `i` sent to `i + offset`.
    pub fn embed(&self, nvars: usize, offset: usize) -> JetPoly {
        assert!(self.nvars + offset <= nvars, "embedding out of range");
        let mut out = JetPoly::zero(nvars, self.cap);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; nvars];
            for i in 0..self.nvars {
                e[i + offset] = m.exp(i);
            }
            out.add_term(Monomial::from_exponents(&e), c.clone());
        }
        out
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial::degree)
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn map_coeffs(&self, f: impl Fn(&Monomial, &Q) -> Q) -> JetPoly {
        let mut out = JetPoly::zero(self.nvars, self.cap);
        for (m, c) in &self.terms {
            out.add_term(*m, f(m, c));
        }
        out
    }

    /// Terms as `(exponent vector, coefficient)` in graded order.
    pub fn to_exponent_terms(&self) -> Vec<(Vec<u32>, Q)> {
        self.terms
            .iter()
            .map(|(m, c)| (m.exponents(self.nvars), c.clone()))
            .collect()
    }
}

impl fmt::Debug for JetPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "JetPoly[n={}, D={}](", self.nvars, self.cap)?;
        fmt::Display::fmt(self, f)?;
        write!(f, ")")
    }
}

impl fmt::Display for JetPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("{c}*{m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add for &JetPoly {
    type Output = JetPoly;
    fn add(self, rhs: &JetPoly) -> JetPoly {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &JetPoly {
    type Output = JetPoly;
    fn sub(self, rhs: &JetPoly) -> JetPoly {
        self.checked_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for &JetPoly {
    type Output = JetPoly;
    fn mul(self, rhs: &JetPoly) -> JetPoly {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &JetPoly {
    type Output = JetPoly;
    fn neg(self) -> JetPoly {
        self.scale(&-Q::ONE)
    }
}

impl AddAssign<&JetPoly> for JetPoly {
    fn add_assign(&mut self, rhs: &JetPoly) {
        self.check_compatible(rhs).unwrap_or_else(|e| panic!("{e}"));
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl SubAssign<&JetPoly> for JetPoly {
    fn sub_assign(&mut self, rhs: &JetPoly) {
        self.check_compatible(rhs).unwrap_or_else(|e| panic!("{e}"));
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn p(nvars: usize, cap: u32, terms: &[(&[u32], i64)]) -> JetPoly {
        JetPoly::from_exponent_terms(
            nvars,
            cap,
            terms.iter().map(|(e, c)| (e.to_vec(), int(*c))),
        )
        .unwrap()
    }

    #[test]
    fn truncated_product() {
        let a = p(2, 3, &[(&[1, 0], 1), (&[0, 2], 1)]);
        let sq = &a * &a;
        assert_eq!(sq, p(2, 3, &[(&[2, 0], 1), (&[1, 2], 2)]));
    }

    #[test]
    fn cap_mismatch_is_error() {
        let a = JetPoly::var(2, 3, 0);
        let b = JetPoly::var(2, 4, 0);
        assert_eq!(
            a.checked_add(&b),
            Err(JetError::CapMismatch { left: 3, right: 4 })
        );
        assert!(JetPoly::from_terms(2, 1, [(Monomial::from_exponents(&[1, 1]), int(1))]).is_err());
    }

    #[test]
    fn derivative_and_cancellation() {
        let a = p(2, 4, &[(&[3, 1], 2), (&[0, 1], 5)]);
        assert_eq!(a.derivative(0), p(2, 4, &[(&[2, 1], 6)]));
        assert!((&a - &a).is_zero());
        assert_eq!(a.min_degree(), Some(1));
        assert_eq!(a.max_degree(), Some(4));
    }

    #[test]
    fn embed_shifts_variables() {
        let a = p(2, 3, &[(&[1, 2], 1)]);
        assert_eq!(a.embed(4, 2), p(4, 3, &[(&[0, 0, 1, 2], 1)]));
    }
}
