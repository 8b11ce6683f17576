//! Homotopy operators `h_j : W ⊗ Λ^j → W ⊗ Λ^{j-1}`.
//!
//! On every block the Casimir `Γ = Σ_k ρ(ξ_k) ρ(ξ^k)` splits the module as
//! `ker Γ ⊕ im Γ`. With `H = Σ_k ρ(ξ^k) ι(ξ_k)` one has `δH + Hδ = Γ`, so
//! `Γ^{-1} H` is a homotopy on `im Γ`; on `ker Γ`, where `𝔤` acts
//! trivially, the Hodge homotopy of `Λ•𝔤*` is used.

use std::collections::HashMap;
use std::rc::Rc;

use malachite_base::num::basic::traits::{One, Zero};

use super::cochain::Cochain;
use super::{build_module, convention_sign, CeError, Exterior, Layout, ModuleKind, ModuleSpec};
use crate::lie::{CasimirElement, StructureData};
use crate::linalg::{axpy, is_zero_vec, SparseMatrix};
use crate::rational::{is_zero, Q};

/// `Σ_k coeffs[k] Γ^k v` by Horner's rule.
fn apply_poly(gamma: &SparseMatrix, coeffs: &[Q], v: &[Q]) -> Vec<Q> {
    let mut r = vec![Q::ZERO; v.len()];
    for c in coeffs.iter().rev() {
        r = gamma.mul_vec(&r);
        if !is_zero(c) {
            axpy(&mut r, c, v);
        }
    }
    r
}

/// Monic minimal polynomial of `v` under `gamma`, lowest coefficient first.
fn krylov_minpoly(gamma: &SparseMatrix, v: &[Q]) -> Vec<Q> {
    // Echelon rows (pivot, vector, combination of Krylov vectors).
    let mut basis: Vec<(usize, Vec<Q>, Vec<Q>)> = Vec::new();
    let mut k = v.to_vec();
    for t in 0..=v.len() {
        let mut r = k.clone();
        let mut combo = vec![Q::ZERO; t + 1];
        combo[t] = Q::ONE;
        for (p, b, cb) in &basis {
            if is_zero(&r[*p]) {
                continue;
            }
            let f = &r[*p] / &b[*p];
            let nf = -&f;
            axpy(&mut r, &nf, b);
            axpy(&mut combo, &nf, cb);
        }
        match r.iter().position(|x| !is_zero(x)) {
            None => return combo,
            Some(p) => {
                let mut cb = combo;
                cb.push(Q::ZERO);
                for (_, _, old) in basis.iter_mut() {
                    old.push(Q::ZERO);
                }
                basis.push((p, r, cb));
            }
        }
        k = gamma.mul_vec(&k);
    }
    unreachable!("Krylov sequence is dependent after dim + 1 vectors")
}

fn poly_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn unit(dim: usize, k: usize) -> Vec<Q> {
    let mut e = vec![Q::ZERO; dim];
    e[k] = Q::ONE;
    e
}

/// Per-block data: Casimir, dual generators, the projector onto `ker Γ`
/// and the inverse of `Γ` on `im Γ`, both as explicit matrices.
#[derive(Debug, Clone)]
pub struct BlockTables {
    pub gamma: SparseMatrix,
    pub duals: Vec<SparseMatrix>,
    /// Minimal polynomial of `Γ` on the block, lowest coefficient first.
    pub minpoly: Vec<Q>,
    /// `P0 = q(Γ)/q(0)` where `minpoly = t·q`; `None` when `Γ` is invertible.
    kernel: Option<SparseMatrix>,
    /// `Γ^{-1}(1 - P0)`.
    inverse: SparseMatrix,
    /// `dim ker Γ`, the multiplicity of the trivial representation.
    pub trivial_dim: usize,
}

impl BlockTables {
    pub fn kernel_projection(&self, v: &[Q]) -> Vec<Q> {
        match &self.kernel {
            Some(p0) => p0.mul_vec(v),
            None => vec![Q::ZERO; v.len()],
        }
    }

    /// `Γ^{-1}` on the image of `Γ`, zero on its kernel.
    pub fn casimir_inverse(&self, v: &[Q]) -> Vec<Q> {
        self.inverse.mul_vec(v)
    }
}

/// Polynomials `(P0, Γ^{-1}(1-P0) before projection)` from a minimal
/// polynomial; `None` for `P0` when zero is not a root.
fn split_polys(minpoly: &[Q]) -> Option<(Vec<Q>, Vec<Q>)> {
    if is_zero(&minpoly[0]) {
        let q = &minpoly[1..];
        let q0 = q[0].clone();
        if is_zero(&q0) {
            return None;
        }
        let kernel: Vec<Q> = q.iter().map(|c| c / &q0).collect();
        let inverse: Vec<Q> = q[1..].iter().map(|c| -(c / &q0)).collect();
        Some((kernel, inverse))
    } else {
        let p0 = minpoly[0].clone();
        Some((Vec::new(), minpoly[1..].iter().map(|c| -(c / &p0)).collect()))
    }
}

/// Builds `P0` and `Γ^{-1}(1-P0)` column by column and checks each column
/// exactly: `Γ P0 e = 0`, `ρ_i P0 e = 0`, `Γ Ginv e = e - P0 e`.
fn split_matrices(
    gamma: &SparseMatrix,
    generators: &[SparseMatrix],
    kernel_poly: &[Q],
    inverse_poly: &[Q],
) -> Result<(Option<SparseMatrix>, SparseMatrix), bool> {
    let dim = gamma.rows();
    let mut p0_cols = Vec::with_capacity(dim);
    let mut inv_cols = Vec::with_capacity(dim);
    for k in 0..dim {
        let e = unit(dim, k);
        let p0 = if kernel_poly.is_empty() {
            vec![Q::ZERO; dim]
        } else {
            apply_poly(gamma, kernel_poly, &e)
        };
        if !is_zero_vec(&gamma.mul_vec(&p0)) {
            return Err(false);
        }
        if generators.iter().any(|g| !is_zero_vec(&g.mul_vec(&p0))) {
            return Err(true);
        }
        let mut w = e;
        axpy(&mut w, &-Q::ONE, &p0);
        let inv = apply_poly(gamma, inverse_poly, &w);
        if gamma.mul_vec(&inv) != w {
            return Err(false);
        }
        p0_cols.push(p0);
        inv_cols.push(inv);
    }
    let kernel = (!kernel_poly.is_empty()).then(|| SparseMatrix::from_dense_columns(dim, p0_cols));
    Ok((kernel, SparseMatrix::from_dense_columns(dim, inv_cols)))
}

fn build_block_tables(
    spec: &ModuleSpec,
    cas: &CasimirElement,
    block: usize,
) -> Result<BlockTables, CeError> {
    let b = &spec.blocks()[block];
    let dim = b.dim();
    let duals = cas.dual_generators(&b.generators);
    let prods: Vec<SparseMatrix> = b.generators.iter().zip(&duals).map(|(g, d)| g.mul(d)).collect();
    let terms: Vec<(Q, &SparseMatrix)> = prods.iter().map(|p| (Q::ONE, p)).collect();
    let gamma = SparseMatrix::linear_combination(dim, dim, &terms);
    let non_semisimple = || CeError::NonSemisimpleKernel { block: b.key.clone() };

    // A fixed generic vector almost always sees every eigenvalue; the
    // column checks catch the exceptions.
    let seed: Vec<Q> = (0..dim).map(|i| Q::from((i % 7) as i64 + 1)).collect();
    let mut minpoly = krylov_minpoly(&gamma, &seed);
    let (kp, ip) = split_polys(&minpoly).ok_or_else(non_semisimple)?;
    let split = match split_matrices(&gamma, &b.generators, &kp, &ip) {
        Ok(s) => s,
        Err(true) => return Err(CeError::KernelNotTrivial { block: b.key.clone() }),
        Err(false) => {
            // Absorb what the polynomial misses. Γ is diagonalizable when
            // the module is semisimple, so each new factor is coprime.
            for k in 0..dim {
                let rest = apply_poly(&gamma, &minpoly, &unit(dim, k));
                if !is_zero_vec(&rest) {
                    let extra = krylov_minpoly(&gamma, &rest);
                    minpoly = poly_mul(&minpoly, &extra);
                }
            }
            let (kp, ip) = split_polys(&minpoly).ok_or_else(non_semisimple)?;
            match split_matrices(&gamma, &b.generators, &kp, &ip) {
                Ok(s) => s,
                Err(true) => return Err(CeError::KernelNotTrivial { block: b.key.clone() }),
                Err(false) => return Err(non_semisimple()),
            }
        }
    };
    let (kernel, inverse) = split;
    let trivial_dim = kernel.as_ref().map_or(0, |p0| {
        usize::try_from(&p0.trace()).expect("projector trace is a dimension")
    });
    Ok(BlockTables {
        gamma,
        duals,
        minpoly,
        kernel,
        inverse,
        trivial_dim,
    })
}

/// Homotopy data for one module: the module itself, `Λ•𝔤*` tables and
/// per-block Casimir tables.
#[derive(Debug, Clone)]
pub struct HomotopyTables {
    spec: ModuleSpec,
    ext: Rc<Exterior>,
    blocks: Vec<BlockTables>,
    inverse_scale: Q,
}

impl HomotopyTables {
    pub fn build(spec: ModuleSpec, ext: Rc<Exterior>) -> Result<Self, CeError> {
        let cas = CasimirElement::new(spec.data())?;
        let blocks = (0..spec.blocks().len())
            .map(|b| build_block_tables(&spec, &cas, b))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(HomotopyTables {
            spec,
            ext,
            blocks,
            inverse_scale: Q::ONE,
        })
    }

    pub fn new(data: &StructureData, kind: ModuleKind, layout: Layout, cap: u32) -> Result<Self, CeError> {
        let spec = build_module(data, kind, layout, cap)?;
        Self::build(spec, Rc::new(Exterior::new(data)))
    }

    pub fn spec(&self) -> &ModuleSpec {
        &self.spec
    }

    pub fn exterior(&self) -> &Exterior {
        &self.ext
    }

    pub fn block_tables(&self, b: usize) -> &BlockTables {
        &self.blocks[b]
    }

    /// Fault injection: scales the Casimir inverse by `factor`.
    pub fn corrupt_inverse(&mut self, factor: Q) {
        self.inverse_scale = factor;
    }

    /// `h_j` on block `b`; `u[t]` is the block vector on the `t`-th sorted
    /// `j`-tuple. Requires `1 <= j <= m`.
    pub fn block_homotopy(&self, b: usize, j: usize, u: &[Vec<Q>]) -> Vec<Vec<Q>> {
        let ext = &*self.ext;
        let tb = &self.blocks[b];
        let dim = self.spec.blocks()[b].dim();
        let sign = convention_sign(j - 1) * &self.inverse_scale;
        let hodge = ext.hodge_homotopy(j);
        let p0: Vec<Option<Vec<Q>>> = u
            .iter()
            .map(|v| {
                if tb.trivial_dim == 0 || is_zero_vec(v) {
                    None
                } else {
                    Some(tb.kernel_projection(v))
                }
            })
            .collect();
        (0..ext.dim(j - 1))
            .map(|s| {
                let tuple = ext.tuple(j - 1, s);
                let mut w = vec![Q::ZERO; dim];
                for k in 0..ext.m() {
                    if let Some((c, t)) = ext.contraction(k, tuple) {
                        if !is_zero_vec(&u[t]) {
                            tb.duals[k].mul_vec_acc(&u[t], &c, &mut w);
                        }
                    }
                }
                let mut out = if is_zero_vec(&w) {
                    vec![Q::ZERO; dim]
                } else {
                    let mut g = tb.casimir_inverse(&w);
                    for x in g.iter_mut() {
                        *x *= &sign;
                    }
                    g
                };
                for (t, p) in p0.iter().enumerate() {
                    if let Some(p) = p {
                        let coef = &hodge[(s, t)];
                        if !is_zero(coef) {
                            axpy(&mut out, coef, p);
                        }
                    }
                }
                out
            })
            .collect()
    }
}

/// `h(c)`, computed block by block.
pub fn homotopy(tables: &HomotopyTables, c: &Cochain) -> Result<Cochain, CeError> {
    let j = c.degree();
    let ext = tables.exterior();
    let spec = tables.spec();
    if j == 0 || j > ext.m() {
        return Err(CeError::Degree { op: "homotopy", degree: j });
    }
    let mut per_block: HashMap<usize, Vec<Vec<Q>>> = HashMap::new();
    for (t, v) in c.values().iter().enumerate() {
        for (b, vec) in spec.decompose(v)? {
            let dim = spec.blocks()[b].dim();
            per_block
                .entry(b)
                .or_insert_with(|| vec![vec![Q::ZERO; dim]; ext.dim(j)])[t] = vec;
        }
    }
    let mut out = Cochain::zero(spec, ext, j - 1);
    let mut blocks: Vec<_> = per_block.into_iter().collect();
    blocks.sort_by_key(|(b, _)| *b);
    for (b, u) in blocks {
        for (s, v) in tables.block_homotopy(b, j, &u).into_iter().enumerate() {
            spec.accumulate(b, &v, out.value_mut(s));
        }
    }
    Ok(out)
}

/// Tables built on demand and shared per `(kind, layout, cap)` for one
/// structure.
#[derive(Debug)]
pub struct TablesCache {
    data: StructureData,
    ext: Rc<Exterior>,
    tables: HashMap<(ModuleKind, Layout, u32), Rc<HomotopyTables>>,
}

impl TablesCache {
    pub fn new(data: &StructureData) -> Self {
        TablesCache {
            data: data.clone(),
            ext: Rc::new(Exterior::new(data)),
            tables: HashMap::new(),
        }
    }

    pub fn data(&self) -> &StructureData {
        &self.data
    }

    pub fn get(&mut self, kind: ModuleKind, layout: Layout, cap: u32) -> Result<Rc<HomotopyTables>, CeError> {
        if let Some(t) = self.tables.get(&(kind, layout, cap)) {
            return Ok(Rc::clone(t));
        }
        let spec = build_module(&self.data, kind, layout, cap)?;
        let t = Rc::new(HomotopyTables::build(spec, Rc::clone(&self.ext))?);
        self.tables.insert((kind, layout, cap), Rc::clone(&t));
        Ok(t)
    }
}
