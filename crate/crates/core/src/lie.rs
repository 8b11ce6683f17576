//! Lie algebra data: structure constants of 𝔤 and its action on the
//! complement, validation, Killing form and Casimir operators.
//!
//! Indices are 0-based in the API and 1-based in reports.

use serde::Serialize;

use malachite_base::num::basic::traits::{One, Zero};

use crate::linalg::{Matrix, SparseMatrix};
use crate::rational::{int, is_zero, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("Killing form is singular; the algebra is not semisimple")]
    SingularKilling,
    #[error("module generators fail the bracket relation at ({i}, {j})")]
    NotRepresentation { i: usize, j: usize },
}

/// Structure constants `c_ij^k` of 𝔤 (dimension `m`) and `a_iα^β` of its
/// action on the complement (dimension `n - m`):
/// `[x_i, x_j] = Σ c_ij^k x_k`, `[x_i, y_α] = Σ a_iα^β y_β`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StructureData {
    n: usize,
    m: usize,
    c: Vec<Q>,
    a: Vec<Q>,
}

impl StructureData {
    pub fn new(
        n: usize,
        m: usize,
        c: Vec<Vec<Vec<Q>>>,
        a: Vec<Vec<Vec<Q>>>,
    ) -> Result<Self, LieError> {
        if m == 0 || m > n {
            return Err(LieError::Dimension(format!("need 1 <= m <= n, got n={n}, m={m}")));
        }
        let r = n - m;
        let cube_ok = |arr: &Vec<Vec<Vec<Q>>>, d0: usize, d: usize| {
            arr.len() == d0 && arr.iter().all(|p| p.len() == d && p.iter().all(|q| q.len() == d))
        };
        if !cube_ok(&c, m, m) {
            return Err(LieError::Dimension(format!("c must be {m}x{m}x{m}")));
        }
        if !cube_ok(&a, m, r) && !(r == 0 && (a.is_empty() || a.iter().all(Vec::is_empty))) {
            return Err(LieError::Dimension(format!("a must be {m}x{r}x{r}")));
        }
        Ok(StructureData {
            n,
            m,
            c: c.into_iter().flatten().flatten().collect(),
            a: a.into_iter().flatten().flatten().collect(),
        }
        .pad_a())
    }

    fn pad_a(mut self) -> Self {
        let r = self.n - self.m;
        self.a.resize(self.m * r * r, Q::ZERO);
        self
    }

    pub fn from_fn(
        n: usize,
        m: usize,
        c: impl Fn(usize, usize, usize) -> Q,
        a: impl Fn(usize, usize, usize) -> Q,
    ) -> Result<Self, LieError> {
        if m == 0 || m > n {
            return Err(LieError::Dimension(format!("need 1 <= m <= n, got n={n}, m={m}")));
        }
        let r = n - m;
        let mut cc = Vec::with_capacity(m * m * m);
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    cc.push(c(i, j, k));
                }
            }
        }
        let mut aa = Vec::with_capacity(m * r * r);
        for i in 0..m {
            for al in 0..r {
                for be in 0..r {
                    aa.push(a(i, al, be));
                }
            }
        }
        Ok(StructureData { n, m, c: cc, a: aa })
    }

    /// so(3) with `c_ij^k = ε_ijk`.
    pub fn so3() -> Self {
        Self::from_fn(3, 3, |i, j, k| int(levi_civita(i, j, k)), |_, _, _| Q::ZERO).unwrap()
    }

    /// so(3) ⋉ ℝ³ split as 𝔤 = so(3), complement ℝ³ with `a_iα^β = ε_iαβ`.
    pub fn so3_semidirect_r3() -> Self {
        Self::from_fn(
            6,
            3,
            |i, j, k| int(levi_civita(i, j, k)),
            |i, al, be| int(levi_civita(i, al, be)),
        )
        .unwrap()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Dimension `n - m` of the complement.
    pub fn r(&self) -> usize {
        self.n - self.m
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> &Q {
        &self.c[(i * self.m + j) * self.m + k]
    }

    pub fn a(&self, i: usize, al: usize, be: usize) -> &Q {
        let r = self.r();
        &self.a[(i * r + al) * r + be]
    }

    pub fn set_c(&mut self, i: usize, j: usize, k: usize, v: Q) {
        let m = self.m;
        self.c[(i * m + j) * m + k] = v;
    }

    pub fn set_a(&mut self, i: usize, al: usize, be: usize, v: Q) {
        let r = self.r();
        self.a[(i * r + al) * r + be] = v;
    }

    pub fn c_nested(&self) -> Vec<Vec<Vec<Q>>> {
        (0..self.m)
            .map(|i| {
                (0..self.m)
                    .map(|j| (0..self.m).map(|k| self.c(i, j, k).clone()).collect())
                    .collect()
            })
            .collect()
    }

    pub fn a_nested(&self) -> Vec<Vec<Vec<Q>>> {
        let r = self.r();
        (0..self.m)
            .map(|i| {
                (0..r)
                    .map(|al| (0..r).map(|be| self.a(i, al, be).clone()).collect())
                    .collect()
            })
            .collect()
    }

    /// Matrix of `ξ_i` acting on coordinates of linear forms in `y`:
    /// `M[β][α] = a_iα^β`, so that `y_α ↦ Σ_β a_iα^β y_β`.
    pub fn complement_matrix(&self, i: usize) -> Matrix {
        Matrix::from_fn(self.r(), self.r(), |be, al| self.a(i, al, be).clone())
    }

    /// Adjoint matrix `ad(ξ_i)[k][j] = c_ij^k`.
    pub fn ad_matrix(&self, i: usize) -> Matrix {
        Matrix::from_fn(self.m, self.m, |k, j| self.c(i, j, k).clone())
    }

    /// Basis change `ξ'_i = s ξ_i` applied to both `c` and `a`.
    pub fn rescaled(&self, s: &Q) -> Self {
        let mut out = self.clone();
        for v in &mut out.c {
            *v *= s;
        }
        for v in &mut out.a {
            *v *= s;
        }
        out
    }
}

/// The sign of the permutation `(i, j, k)` of `(0, 1, 2)`, or 0.
pub fn levi_civita(i: usize, j: usize, k: usize) -> i64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// 1-based index tuple locating the first failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
}

impl CheckResult {
    pub fn new(name: &str, witness: Option<Vec<usize>>) -> Self {
        CheckResult {
            name: name.to_string(),
            passed: witness.is_none(),
            witness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub const CHECK_ANTISYMMETRY: &str = "antisymmetry";
pub const CHECK_JACOBI: &str = "jacobi";
pub const CHECK_REPRESENTATION: &str = "complement representation";
pub const CHECK_KILLING: &str = "Killing form negative definite";

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

pub fn validate_structure(data: &StructureData) -> ValidationReport {
    let m = data.m;
    let r = data.r();

    let mut anti = None;
    'outer: for i in 0..m {
        for j in i..m {
            for k in 0..m {
                if !is_zero(&(data.c(i, j, k) + data.c(j, i, k))) {
                    anti = Some(one_based(&[i, j, k]));
                    break 'outer;
                }
            }
        }
    }

    let mut jac = None;
    'outer: for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for v in 0..m {
                    let s: Q = (0..m)
                        .map(|u| {
                            data.c(i, j, u) * data.c(u, k, v)
                                + data.c(j, k, u) * data.c(u, i, v)
                                + data.c(k, i, u) * data.c(u, j, v)
                        })
                        .sum();
                    if !is_zero(&s) {
                        jac = Some(one_based(&[i, j, k, v]));
                        break 'outer;
                    }
                }
            }
        }
    }

    let mut rep = None;
    if r > 0 {
        let mats: Vec<Matrix> = (0..m).map(|i| data.complement_matrix(i)).collect();
        'outer: for i in 0..m {
            for j in i + 1..m {
                let lhs = &(&mats[i] * &mats[j]) - &(&mats[j] * &mats[i]);
                let mut rhs = Matrix::zeros(r, r);
                for (k, mk) in mats.iter().enumerate() {
                    rhs = &rhs + &mk.scale(data.c(i, j, k));
                }
                let diff = &lhs - &rhs;
                if let Some((b, al)) = first_nonzero(&diff) {
                    rep = Some(one_based(&[i, j, al, b]));
                    break 'outer;
                }
            }
        }
    }

    let killing = match killing_form(data).negative_definite() {
        Ok(()) => None,
        Err(k) => Some(vec![k]),
    };

    ValidationReport {
        checks: vec![
            CheckResult::new(CHECK_ANTISYMMETRY, anti),
            CheckResult::new(CHECK_JACOBI, jac),
            CheckResult::new(CHECK_REPRESENTATION, rep),
            CheckResult::new(CHECK_KILLING, killing),
        ],
    }
}

fn first_nonzero(m: &Matrix) -> Option<(usize, usize)> {
    (0..m.rows())
        .flat_map(|r| (0..m.cols()).map(move |c| (r, c)))
        .find(|&(r, c)| !is_zero(&m[(r, c)]))
}

/// `B_ij = Σ_{k,l} c_ik^l c_jl^k`.
pub fn killing_form(data: &StructureData) -> Matrix {
    let m = data.m;
    Matrix::from_fn(m, m, |i, j| {
        let mut s = Q::ZERO;
        for k in 0..m {
            for l in 0..m {
                let a = data.c(i, k, l);
                if is_zero(a) {
                    continue;
                }
                s += a * data.c(j, l, k);
            }
        }
        s
    })
}

/// Killing Gram matrix and the coefficients of the B-dual basis
/// `ξ^i = Σ_j dual_coeffs[i][j] ξ_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CasimirElement {
    pub gram: Matrix,
    pub dual_coeffs: Matrix,
}

impl CasimirElement {
    pub fn new(data: &StructureData) -> Result<Self, LieError> {
        let gram = killing_form(data);
        let dual_coeffs = gram.inverse().map_err(|_| LieError::SingularKilling)?;
        Ok(CasimirElement { gram, dual_coeffs })
    }

    /// `ρ(ξ^i)` for each `i`, from the generator matrices `ρ(ξ_j)`.
    pub fn dual_generators(&self, gens: &[SparseMatrix]) -> Vec<SparseMatrix> {
        let m = gens.len();
        let (rows, cols) = gens.first().map_or((0, 0), |g| (g.rows(), g.cols()));
        (0..m)
            .map(|i| {
                let terms: Vec<(Q, &SparseMatrix)> =
                    (0..m).map(|j| (self.dual_coeffs[(i, j)].clone(), &gens[j])).collect();
                SparseMatrix::linear_combination(rows, cols, &terms)
            })
            .collect()
    }

    /// `Γ = Σ_i ρ(ξ_i) ρ(ξ^i)` on a sparse module.
    pub fn apply_sparse(&self, gens: &[SparseMatrix]) -> SparseMatrix {
        let duals = self.dual_generators(gens);
        let (rows, cols) = gens.first().map_or((0, 0), |g| (g.rows(), g.cols()));
        let prods: Vec<SparseMatrix> = gens.iter().zip(&duals).map(|(g, d)| g.mul(d)).collect();
        let terms: Vec<(Q, &SparseMatrix)> = prods.iter().map(|p| (Q::ONE, p)).collect();
        SparseMatrix::linear_combination(rows, cols, &terms)
    }
}

/// A 𝔤-module given by explicit generator matrices `ρ(ξ_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleAction {
    pub generators: Vec<Matrix>,
}

impl ModuleAction {
    pub fn new(generators: Vec<Matrix>) -> Self {
        ModuleAction { generators }
    }

    pub fn dim(&self) -> usize {
        self.generators.first().map_or(0, Matrix::rows)
    }

    pub fn adjoint(data: &StructureData) -> Self {
        ModuleAction::new((0..data.m).map(|i| data.ad_matrix(i)).collect())
    }

    pub fn trivial(m: usize, dim: usize) -> Self {
        ModuleAction::new(vec![Matrix::zeros(dim, dim); m])
    }

    /// Checks `[ρ_i, ρ_j] = Σ_k c_ij^k ρ_k`.
    pub fn check_representation(&self, data: &StructureData) -> Result<(), LieError> {
        let g = &self.generators;
        if g.len() != data.m || g.iter().any(|x| !x.is_square() || x.rows() != self.dim()) {
            return Err(LieError::Dimension("module generator shapes".into()));
        }
        for i in 0..g.len() {
            for j in i + 1..g.len() {
                let lhs = &(&g[i] * &g[j]) - &(&g[j] * &g[i]);
                let mut rhs = Matrix::zeros(self.dim(), self.dim());
                for (k, gk) in g.iter().enumerate() {
                    if !is_zero(data.c(i, j, k)) {
                        rhs = &rhs + &gk.scale(data.c(i, j, k));
                    }
                }
                if lhs != rhs {
                    return Err(LieError::NotRepresentation { i, j });
                }
            }
        }
        Ok(())
    }
}

/// `Σ_i ρ(ξ_i) ρ(ξ^i)` as a dense matrix.
pub fn casimir_operator(data: &StructureData, module: &ModuleAction) -> Result<Matrix, LieError> {
    module.check_representation(data)?;
    let cas = CasimirElement::new(data)?;
    let dim = module.dim();
    let mut out = Matrix::zeros(dim, dim);
    for i in 0..data.m {
        let mut dual = Matrix::zeros(dim, dim);
        for j in 0..data.m {
            let coef = &cas.dual_coeffs[(i, j)];
            if !is_zero(coef) {
                dual = &dual + &module.generators[j].scale(coef);
            }
        }
        out = &out + &(&module.generators[i] * &dual);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn so3_validates() {
        let rep = validate_structure(&StructureData::so3());
        assert!(rep.passed(), "{rep:?}");
        assert!(validate_structure(&StructureData::so3_semidirect_r3()).passed());
    }

    #[test]
    fn abelian_fails_killing() {
        let d = StructureData::from_fn(3, 3, |_, _, _| Q::ZERO, |_, _, _| Q::ZERO).unwrap();
        let rep = validate_structure(&d);
        assert!(rep.get(CHECK_ANTISYMMETRY).unwrap().passed);
        assert!(!rep.get(CHECK_KILLING).unwrap().passed);
    }

    #[test]
    fn one_sided_flip_witness() {
        let mut d = StructureData::so3();
        d.set_c(0, 1, 2, int(-1));
        let rep = validate_structure(&d);
        let anti = rep.get(CHECK_ANTISYMMETRY).unwrap();
        assert!(!anti.passed);
        assert_eq!(anti.witness, Some(vec![1, 2, 3]));
    }

    #[test]
    fn every_single_change_is_caught() {
        for idx in 0..27 {
            let (i, j, k) = (idx / 9, (idx / 3) % 3, idx % 3);
            let mut d = StructureData::so3();
            let old = d.c(i, j, k).clone();
            let new = if is_zero(&old) { int(1) } else { -old };
            d.set_c(i, j, k, new);
            assert!(!validate_structure(&d).passed(), "change at {i}{j}{k} not caught");
        }
    }

    #[test]
    fn killing_so3() {
        assert_eq!(killing_form(&StructureData::so3()), Matrix::identity(3).scale(&int(-2)));
        let ab = StructureData::from_fn(1, 1, |_, _, _| Q::ZERO, |_, _, _| Q::ZERO).unwrap();
        assert_eq!(killing_form(&ab), Matrix::zeros(1, 1));
        let scaled = StructureData::so3().rescaled(&int(2));
        assert_eq!(killing_form(&scaled), Matrix::identity(3).scale(&int(-8)));
    }

    #[test]
    fn casimir_adjoint_is_identity() {
        let d = StructureData::so3();
        let g = casimir_operator(&d, &ModuleAction::adjoint(&d)).unwrap();
        assert_eq!(g, Matrix::identity(3));
    }

    #[test]
    fn casimir_trivial_is_zero() {
        let d = StructureData::so3();
        let g = casimir_operator(&d, &ModuleAction::trivial(3, 1)).unwrap();
        assert!(g.is_zero());
    }

    #[test]
    fn singular_killing_is_error() {
        let ab = StructureData::from_fn(2, 2, |_, _, _| Q::ZERO, |_, _, _| Q::ZERO).unwrap();
        let module = ModuleAction::trivial(2, 2);
        assert_eq!(casimir_operator(&ab, &module), Err(LieError::SingularKilling));
    }

    #[test]
    fn complement_matrices_form_a_representation() {
        let d = StructureData::so3_semidirect_r3();
        let mats: Vec<Matrix> = (0..3).map(|i| d.complement_matrix(i)).collect();
        ModuleAction::new(mats).check_representation(&d).unwrap();
    }

    #[test]
    fn dimension_errors() {
        assert!(StructureData::new(3, 4, vec![], vec![]).is_err());
        assert!(StructureData::new(3, 3, vec![vec![vec![Q::ZERO; 3]; 3]; 2], vec![]).is_err());
    }
}
