use malachite_base::num::basic::traits::Zero;

use super::{CeError, Exterior, ModuleSpec};
use crate::jet::{JetPoly, Order, VanishingOrder};
use crate::linalg::{axpy, SparseMatrix};
use crate::rational::{is_zero, Q};

/// A `j`-cochain: one module element (a list of jet components) per sorted
/// `j`-tuple of generator indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    degree: usize,
    values: Vec<Vec<JetPoly>>,
}

impl Cochain {
    pub fn zero(spec: &ModuleSpec, ext: &Exterior, degree: usize) -> Self {
        Cochain {
            degree,
            values: vec![spec.zero_element(); ext.dim(degree)],
        }
    }

    /// `values[t]` belongs to the sorted tuple `ext.tuple(degree, t)`.
    pub fn from_values(
        spec: &ModuleSpec,
        ext: &Exterior,
        degree: usize,
        values: Vec<Vec<JetPoly>>,
    ) -> Result<Self, CeError> {
        if values.len() != ext.dim(degree) {
            return Err(CeError::Shape(format!(
                "expected {} tuples in degree {degree}, got {}",
                ext.dim(degree),
                values.len()
            )));
        }
        for v in &values {
            if v.len() != spec.ncomp() {
                return Err(CeError::Shape(format!(
                    "expected {} components, got {}",
                    spec.ncomp(),
                    v.len()
                )));
            }
            if let Some(p) = v.iter().find(|p| p.nvars() != spec.nvars() || p.cap() != spec.cap()) {
                return Err(CeError::Shape(format!(
                    "jet with {} variables and cap {} in a module with {} variables and cap {}",
                    p.nvars(),
                    p.cap(),
                    spec.nvars(),
                    spec.cap()
                )));
            }
        }
        Ok(Cochain { degree, values })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[Vec<JetPoly>] {
        &self.values
    }

    pub fn value(&self, t: usize) -> &[JetPoly] {
        &self.values[t]
    }

    pub fn value_mut(&mut self, t: usize) -> &mut Vec<JetPoly> {
        &mut self.values[t]
    }

    pub fn into_values(self) -> Vec<Vec<JetPoly>> {
        self.values
    }

    /// Value on an arbitrary (unsorted) tuple, using antisymmetry.
    pub fn at(&self, ext: &Exterior, tuple: &[usize]) -> Option<Vec<JetPoly>> {
        let mut sorted = tuple.to_vec();
        let mut sign = 1i64;
        for i in 0..sorted.len() {
            for j in 0..sorted.len() - i - 1 {
                if sorted[j] == sorted[j + 1] {
                    return None;
                }
                if sorted[j] > sorted[j + 1] {
                    sorted.swap(j, j + 1);
                    sign = -sign;
                }
            }
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        let idx = ext.index_of(&sorted)?;
        let s = Q::from(sign);
        Some(self.values[idx].iter().map(|p| p.scale(&s)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().flatten().all(JetPoly::is_zero)
    }

    pub fn checked_sub(&self, other: &Cochain) -> Result<Cochain, CeError> {
        if self.degree != other.degree || self.values.len() != other.values.len() {
            return Err(CeError::Shape("cochain degree mismatch".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| {
                a.iter()
                    .zip(b)
                    .map(|(x, y)| x.checked_sub(y))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CeError::Shape(e.to_string()))?;
        Ok(Cochain {
            degree: self.degree,
            values,
        })
    }

    pub fn eq_up_to(&self, other: &Cochain, k: u32) -> bool {
        self.degree == other.degree
            && self
                .values
                .iter()
                .flatten()
                .zip(other.values.iter().flatten())
                .all(|(a, b)| a.eq_up_to(b, k))
    }
}

impl VanishingOrder for Cochain {
    fn vanishing_order(&self) -> Order {
        self.values.vanishing_order()
    }
}

/// The (sign-adjusted) Chevalley-Eilenberg differential on jets.
pub fn ce_differential(spec: &ModuleSpec, ext: &Exterior, c: &Cochain) -> Result<Cochain, CeError> {
    let j = c.degree;
    if j >= ext.m() {
        return Err(CeError::Degree {
            op: "ce_differential",
            degree: j,
        });
    }
    let lam = ext.lambda_differential(j);
    let mut values = Vec::with_capacity(ext.dim(j + 1));
    for t in 0..ext.dim(j + 1) {
        let mut out = spec.zero_element();
        for term in ext.action_terms(j, t) {
            let src = &c.values[term.source];
            if src.iter().all(JetPoly::is_zero) {
                continue;
            }
            for (o, a) in out.iter_mut().zip(spec.act(term.generator, src)) {
                o.add_scaled(&a, &term.sign);
            }
        }
        for (s, src) in c.values.iter().enumerate() {
            let coef = &lam[(t, s)];
            if is_zero(coef) {
                continue;
            }
            for (o, a) in out.iter_mut().zip(src) {
                o.add_scaled(a, coef);
            }
        }
        values.push(out);
    }
    Ok(Cochain {
        degree: j + 1,
        values,
    })
}

/// The same differential on block coordinate vectors: `u[s]` is the block
/// vector of the value on the `s`-th sorted `j`-tuple.
pub fn block_differential(
    ext: &Exterior,
    generators: &[SparseMatrix],
    j: usize,
    u: &[Vec<Q>],
) -> Vec<Vec<Q>> {
    let dim = u.first().map_or(0, Vec::len);
    if j >= ext.m() {
        return Vec::new();
    }
    let lam = ext.lambda_differential(j);
    (0..ext.dim(j + 1))
        .map(|t| {
            let mut out = vec![Q::ZERO; dim];
            for term in ext.action_terms(j, t) {
                generators[term.generator].mul_vec_acc(&u[term.source], &term.sign, &mut out);
            }
            for (s, src) in u.iter().enumerate() {
                let coef = &lam[(t, s)];
                if !is_zero(coef) {
                    axpy(&mut out, coef, src);
                }
            }
            out
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ce::{build_module, Layout, ModuleKind};
    use crate::jet::random::{random_poly, rng, JetShape};
    use crate::lie::StructureData;
    use crate::rational::int;

    #[test]
    fn degree_zero_is_the_action() {
        let d = StructureData::so3();
        let spec = build_module(&d, ModuleKind::Functions, Layout::Poisson, 3).unwrap();
        let ext = Exterior::new(&d);
        let f = random_poly(&mut rng(3), 3, 3, JetShape::new(0, 3, 0.5));
        let c = Cochain::from_values(&spec, &ext, 0, vec![vec![f.clone()]]).unwrap();
        let dc = ce_differential(&spec, &ext, &c).unwrap();
        for i in 0..3 {
            assert_eq!(dc.value(i)[0], spec.lie_derivative(i, &f));
        }
    }

    #[test]
    fn differential_squares_to_zero() {
        for (data, kind) in [
            (StructureData::so3(), ModuleKind::Functions),
            (StructureData::so3_semidirect_r3(), ModuleKind::YFields),
        ] {
            let spec = build_module(&data, kind, Layout::Poisson, 3).unwrap();
            let ext = Exterior::new(&data);
            let mut r = rng(11);
            for j in 0..2 {
                let values = (0..ext.dim(j))
                    .map(|_| {
                        (0..spec.ncomp())
                            .map(|_| random_poly(&mut r, data.n(), 3, JetShape::new(0, 3, 0.3)))
                            .collect()
                    })
                    .collect();
                let c = Cochain::from_values(&spec, &ext, j, values).unwrap();
                let dd = ce_differential(&spec, &ext, &ce_differential(&spec, &ext, &c).unwrap())
                    .unwrap();
                assert!(dd.is_zero(), "degree {j}");
            }
        }
    }

    #[test]
    fn block_and_jet_differentials_agree() {
        let data = StructureData::so3_semidirect_r3();
        let spec = build_module(&data, ModuleKind::YFields, Layout::Poisson, 2).unwrap();
        let ext = Exterior::new(&data);
        let mut r = rng(5);
        let values: Vec<Vec<JetPoly>> = (0..ext.dim(1))
            .map(|_| {
                (0..3)
                    .map(|_| random_poly(&mut r, 6, 2, JetShape::new(0, 2, 0.4)))
                    .collect()
            })
            .collect();
        let c = Cochain::from_values(&spec, &ext, 1, values).unwrap();
        let dc = ce_differential(&spec, &ext, &c).unwrap();
        for (b, block) in spec.blocks().iter().enumerate() {
            let u: Vec<Vec<Q>> = c
                .values()
                .iter()
                .map(|v| {
                    spec.decompose(v)
                        .unwrap()
                        .remove(&b)
                        .unwrap_or_else(|| vec![Q::ZERO; block.dim()])
                })
                .collect();
            let du = block_differential(&ext, &block.generators, 1, &u);
            for (t, v) in du.iter().enumerate() {
                let expect = spec
                    .decompose(dc.value(t))
                    .unwrap()
                    .remove(&b)
                    .unwrap_or_else(|| vec![Q::ZERO; block.dim()]);
                assert_eq!(v, &expect);
            }
        }
    }

    #[test]
    fn antisymmetric_lookup() {
        let d = StructureData::so3();
        let spec = build_module(&d, ModuleKind::Functions, Layout::Poisson, 1).unwrap();
        let ext = Exterior::new(&d);
        let vals = (0..3)
            .map(|t| vec![JetPoly::constant(3, 1, int(t as i64 + 1))])
            .collect();
        let c = Cochain::from_values(&spec, &ext, 2, vals).unwrap();
        let fwd = c.at(&ext, &[0, 1]).unwrap();
        let back = c.at(&ext, &[1, 0]).unwrap();
        assert_eq!(fwd[0], -&back[0]);
        assert!(c.at(&ext, &[1, 1]).is_none());
    }
}
