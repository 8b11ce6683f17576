//! The 𝔤-modules of jets on which the complexes are built, split into
//! invariant blocks by multidegree.

use std::collections::{BTreeMap, HashMap};
use std::ops::Range;

use malachite_base::num::basic::traits::Zero;
use serde::Serialize;

use super::CeError;
use crate::jet::{JetPoly, Monomial};
use crate::lie::StructureData;
use crate::linalg::SparseMatrix;
use crate::rational::{is_zero, Q};

/// Which jets the module consists of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModuleKind {
    /// Functions of all coordinates.
    Functions,
    /// Vector fields `Σ u_α ∂/∂y_α` along the complement coordinates.
    YFields,
    /// Functions of fiber degree exactly 1 (algebroid layout only).
    FiberwiseLinear,
    /// Functions of fiber degree 0 (algebroid layout only).
    BaseFunctions,
}

/// How the `n` coordinates are arranged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case", tag = "layout")]
pub enum Layout {
    /// `(x_1..x_m, y_1..y_{n-m})`.
    Poisson,
    /// `(e_1..e_N, base_1..base_{n-N})` with `𝔤` spanned by `e_1..e_m`.
    /// Fiber coordinates are the `e`; the complement is `e_{m+1}..e_N`
    /// followed by the base coordinates.
    Algebroid { fiber_dim: usize },
}

impl Layout {
    /// Variable groups preserved by the linear action.
    pub fn groups(&self, n: usize, m: usize) -> Vec<Range<usize>> {
        match *self {
            Layout::Poisson => vec![0..m, m..n],
            Layout::Algebroid { fiber_dim } => vec![0..m, m..fiber_dim, fiber_dim..n],
        }
    }

    pub fn fiber_range(&self) -> Option<Range<usize>> {
        match *self {
            Layout::Poisson => None,
            Layout::Algebroid { fiber_dim } => Some(0..fiber_dim),
        }
    }
}

/// Invariant block label: the variable group of the vector component (0
/// for functions) and the multidegree over the variable groups.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BlockKey {
    pub component_group: usize,
    pub multidegree: Vec<u32>,
}

impl BlockKey {
    pub fn total_degree(&self) -> u32 {
        self.multidegree.iter().sum()
    }
}

#[derive(Debug, Clone)]
pub struct Block {
    pub key: BlockKey,
    /// `(component, monomial)` basis in ascending order.
    pub basis: Vec<(usize, Monomial)>,
    index: HashMap<(usize, Monomial), usize>,
    /// `ρ(ξ_i)` on this block.
    pub generators: Vec<SparseMatrix>,
}

impl Block {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, comp: usize, m: &Monomial) -> Option<usize> {
        self.index.get(&(comp, *m)).copied()
    }
}

#[derive(Debug, Clone)]
pub struct ModuleSpec {
    data: StructureData,
    kind: ModuleKind,
    layout: Layout,
    cap: u32,
    groups: Vec<Range<usize>>,
    /// Linear vector fields `X_i` as `x_fields[i][j] = (X_i)_j`.
    x_fields: Vec<Vec<JetPoly>>,
    blocks: Vec<Block>,
    lookup: HashMap<BlockKey, usize>,
}

impl ModuleSpec {
    pub fn data(&self) -> &StructureData {
        &self.data
    }

    pub fn kind(&self) -> ModuleKind {
        self.kind
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn nvars(&self) -> usize {
        self.data.n()
    }

    pub fn m(&self) -> usize {
        self.data.m()
    }

    /// Number of jet components of a module element.
    pub fn ncomp(&self) -> usize {
        match self.kind {
            ModuleKind::YFields => self.data.r(),
            _ => 1,
        }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, key: &BlockKey) -> Option<&Block> {
        self.lookup.get(key).map(|&i| &self.blocks[i])
    }

    pub fn block_index(&self, key: &BlockKey) -> Option<usize> {
        self.lookup.get(key).copied()
    }

    pub fn multidegree(&self, m: &Monomial) -> Vec<u32> {
        self.groups.iter().map(|g| m.degree_in(g.clone())).collect()
    }

    fn component_group(&self, comp: usize) -> usize {
        match self.kind {
            ModuleKind::YFields => {
                let var = self.data.m() + comp;
                self.groups
                    .iter()
                    .position(|g| g.contains(&var))
                    .expect("component variable lies in a group")
            }
            _ => 0,
        }
    }

    pub fn key_of(&self, comp: usize, m: &Monomial) -> BlockKey {
        BlockKey {
            component_group: self.component_group(comp),
            multidegree: self.multidegree(m),
        }
    }

    /// Whether `(component, monomial)` belongs to the module.
    pub fn allows(&self, comp: usize, m: &Monomial) -> bool {
        if m.degree() > self.cap {
            return false;
        }
        let fiber_deg = self.layout.fiber_range().map(|r| m.degree_in(r));
        match (self.kind, fiber_deg) {
            (ModuleKind::Functions, _) => true,
            (ModuleKind::FiberwiseLinear, Some(f)) => f == 1,
            (ModuleKind::BaseFunctions, Some(f)) => f == 0,
            (ModuleKind::FiberwiseLinear | ModuleKind::BaseFunctions, None) => false,
            (ModuleKind::YFields, None) => true,
            (ModuleKind::YFields, Some(f)) => {
                let var = self.data.m() + comp;
                let fiber = self.layout.fiber_range().unwrap();
                if fiber.contains(&var) {
                    f == 1
                } else {
                    f == 0
                }
            }
        }
    }

    /// `X_i(F)` for the linear vector field `X_i`.
    pub fn lie_derivative(&self, i: usize, f: &JetPoly) -> JetPoly {
        let mut out = JetPoly::zero(f.nvars(), f.cap());
        for (j, xj) in self.x_fields[i].iter().enumerate() {
            if xj.is_zero() {
                continue;
            }
            let d = f.derivative(j);
            if !d.is_zero() {
                out += &(xj * &d);
            }
        }
        out
    }

    /// `ξ_i · u` on a module element given by its components.
    pub fn act(&self, i: usize, u: &[JetPoly]) -> Vec<JetPoly> {
        let mut out: Vec<JetPoly> = u.iter().map(|c| self.lie_derivative(i, c)).collect();
        if self.kind == ModuleKind::YFields {
            let r = self.data.r();
            for (g, o) in out.iter_mut().enumerate() {
                for (b, ub) in u.iter().enumerate().take(r) {
                    let a = self.data.a(i, g, b);
                    if !is_zero(a) {
                        *o -= &ub.scale(a);
                    }
                }
            }
        }
        out
    }

    /// Splits a module element into block coordinate vectors.
    pub fn decompose(&self, u: &[JetPoly]) -> Result<BTreeMap<usize, Vec<Q>>, CeError> {
        let mut out: BTreeMap<usize, Vec<Q>> = BTreeMap::new();
        for (comp, p) in u.iter().enumerate() {
            for (m, c) in p.terms() {
                if !self.allows(comp, m) {
                    return Err(CeError::OutsideModule {
                        component: comp,
                        exponents: m.exponents(self.nvars()),
                    });
                }
                let key = self.key_of(comp, m);
                let b = self.lookup[&key];
                let block = &self.blocks[b];
                let idx = block.index_of(comp, m).expect("allowed monomials are indexed");
                out.entry(b).or_insert_with(|| vec![Q::ZERO; block.dim()])[idx] = c.clone();
            }
        }
        Ok(out)
    }

    /// Adds the block vector `v` (length `dim`) into `u`.
    pub fn accumulate(&self, block: usize, v: &[Q], u: &mut [JetPoly]) {
        let b = &self.blocks[block];
        for (idx, c) in v.iter().enumerate() {
            if !is_zero(c) {
                let (comp, m) = b.basis[idx];
                u[comp].add_term(m, c.clone());
            }
        }
    }

    pub fn zero_element(&self) -> Vec<JetPoly> {
        vec![JetPoly::zero(self.nvars(), self.cap); self.ncomp()]
    }
}

fn x_fields(data: &StructureData, cap: u32) -> Vec<Vec<JetPoly>> {
    let n = data.n();
    let m = data.m();
    (0..m)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut p = JetPoly::zero(n, cap);
                    if j < m {
                        for k in 0..m {
                            p.add_term(Monomial::var(k), data.c(i, j, k).clone());
                        }
                    } else {
                        for b in 0..data.r() {
                            p.add_term(Monomial::var(m + b), data.a(i, j - m, b).clone());
                        }
                    }
                    p
                })
                .collect()
        })
        .collect()
}

/// Builds the module, its blocks and generator matrices, and verifies the
/// bracket relation `[ρ_i, ρ_j] = Σ c_ij^k ρ_k` on every block.
pub fn build_module(
    data: &StructureData,
    kind: ModuleKind,
    layout: Layout,
    cap: u32,
) -> Result<ModuleSpec, CeError> {
    let n = data.n();
    let m = data.m();
    if let Layout::Algebroid { fiber_dim } = layout {
        if fiber_dim < m || fiber_dim > n {
            return Err(CeError::Layout(format!(
                "fiber dimension {fiber_dim} must lie in [{m}, {n}]"
            )));
        }
    } else if matches!(kind, ModuleKind::FiberwiseLinear | ModuleKind::BaseFunctions) {
        return Err(CeError::Layout(format!("{kind:?} needs the algebroid layout")));
    }
    let mut spec = ModuleSpec {
        data: data.clone(),
        kind,
        layout,
        cap,
        groups: layout.groups(n, m),
        x_fields: x_fields(data, cap),
        blocks: Vec::new(),
        lookup: HashMap::new(),
    };

    let mut grouped: BTreeMap<BlockKey, Vec<(usize, Monomial)>> = BTreeMap::new();
    let monos = Monomial::all_up_to(n, cap);
    for comp in 0..spec.ncomp() {
        for mono in &monos {
            if spec.allows(comp, mono) {
                grouped.entry(spec.key_of(comp, mono)).or_default().push((comp, *mono));
            }
        }
    }

    for (key, basis) in grouped {
        let index: HashMap<(usize, Monomial), usize> =
            basis.iter().enumerate().map(|(i, b)| (*b, i)).collect();
        let mut generators = Vec::with_capacity(m);
        for i in 0..m {
            let mut cols = Vec::with_capacity(basis.len());
            for &(comp, mono) in &basis {
                let mut u = spec.zero_element();
                u[comp] = JetPoly::monomial(n, cap, mono, Q::from(1));
                let image = spec.act(i, &u);
                let mut col = Vec::new();
                for (c, p) in image.iter().enumerate() {
                    for (mm, v) in p.terms() {
                        let Some(&row) = index.get(&(c, *mm)) else {
                            return Err(CeError::NotInvariant {
                                block: key.clone(),
                                generator: i,
                            });
                        };
                        col.push((row, v.clone()));
                    }
                }
                cols.push(col);
            }
            generators.push(SparseMatrix::from_columns(basis.len(), cols));
        }
        for i in 0..m {
            for j in i + 1..m {
                let comm = generators[i].mul(&generators[j]).sub(&generators[j].mul(&generators[i]));
                let terms: Vec<(Q, &SparseMatrix)> =
                    (0..m).map(|k| (data.c(i, j, k).clone(), &generators[k])).collect();
                let rhs = SparseMatrix::linear_combination(basis.len(), basis.len(), &terms);
                if !comm.sub(&rhs).is_zero() {
                    return Err(CeError::Representation {
                        block: key.clone(),
                        i,
                        j,
                    });
                }
            }
        }
        spec.lookup.insert(key.clone(), spec.blocks.len());
        spec.blocks.push(Block {
            key,
            basis,
            index,
            generators,
        });
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{casimir_operator, ModuleAction};
    use crate::linalg::Matrix;
    use crate::rational::int;

    #[test]
    fn so3_linear_functions_are_coadjoint() {
        let d = StructureData::so3();
        let spec = build_module(&d, ModuleKind::Functions, Layout::Poisson, 2).unwrap();
        let b = spec
            .block(&BlockKey {
                component_group: 0,
                multidegree: vec![1, 0],
            })
            .unwrap();
        for i in 0..3 {
            // X_i(x_j) = Σ_k c_ij^k x_k, so the column of x_j holds c_ij^k.
            let dense = b.generators[i].to_dense();
            assert_eq!(dense, d.ad_matrix(i));
        }
    }

    #[test]
    fn quadratic_casimir_kernel_is_the_square_norm() {
        let d = StructureData::so3();
        let spec = build_module(&d, ModuleKind::Functions, Layout::Poisson, 2).unwrap();
        let b = spec
            .block(&BlockKey {
                component_group: 0,
                multidegree: vec![2, 0],
            })
            .unwrap();
        let gens: Vec<Matrix> = b.generators.iter().map(SparseMatrix::to_dense).collect();
        let cas = casimir_operator(&d, &ModuleAction::new(gens)).unwrap();
        let ker = cas.kernel();
        assert_eq!(ker.cols(), 1);
        let v = ker.column(0);
        for (idx, (_, mono)) in b.basis.iter().enumerate() {
            let is_square = mono.exponents(3).iter().any(|&e| e == 2);
            if is_square {
                assert_eq!(v[idx], v[0]);
            } else {
                assert_eq!(v[idx], int(0));
            }
        }
    }

    #[test]
    fn semidirect_yfields_build() {
        let d = StructureData::so3_semidirect_r3();
        let spec = build_module(&d, ModuleKind::YFields, Layout::Poisson, 3).unwrap();
        let total: usize = spec.blocks().iter().map(Block::dim).sum();
        assert_eq!(total, 3 * Monomial::all_up_to(6, 3).len());
    }

    #[test]
    fn zero_complement_action_is_trivial_on_y() {
        let d = StructureData::from_fn(
            5,
            3,
            |i, j, k| int(crate::lie::levi_civita(i, j, k)),
            |_, _, _| Q::ZERO,
        )
        .unwrap();
        let spec = build_module(&d, ModuleKind::YFields, Layout::Poisson, 1).unwrap();
        let b = spec
            .block(&BlockKey {
                component_group: 1,
                multidegree: vec![0, 0],
            })
            .unwrap();
        assert!(b.generators.iter().all(SparseMatrix::is_zero));
    }

    #[test]
    fn broken_complement_is_rejected() {
        let mut d = StructureData::so3_semidirect_r3();
        d.set_a(0, 1, 2, int(5));
        let err = build_module(&d, ModuleKind::YFields, Layout::Poisson, 1).unwrap_err();
        assert!(matches!(err, CeError::Representation { .. }));
    }

    #[test]
    fn fiberwise_kinds_need_algebroid_layout() {
        let d = StructureData::so3();
        assert!(build_module(&d, ModuleKind::FiberwiseLinear, Layout::Poisson, 2).is_err());
    }
}
