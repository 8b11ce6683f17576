//! One normalization step: error cochains, the corrected `ĝ`, the update
//! `χ = (φ, ψ)` and the quadratic remainders `Q`, `T`, `U`.

use std::rc::Rc;

use super::problem::model_component;
use super::LeviError;
use crate::ce::{homotopy, Cochain, Exterior, HomotopyTables, Layout, ModuleKind, TablesCache};
use crate::jet::poisson::{bracket_with_coordinate, poisson_bracket};
use crate::jet::{pushforward_with_inverse, JetBivector, JetDiffeo, JetPoly, Order, VanishingOrder};
use crate::lie::StructureData;
use crate::rational::RationalString;

/// Homotopy tables for the function module (holding `f`, `φ`) and the
/// field module (holding `g`, `ψ`).
#[derive(Debug, Clone)]
pub struct LeviTables {
    pub functions: Rc<HomotopyTables>,
    pub fields: Rc<HomotopyTables>,
}

impl LeviTables {
    pub fn new(cache: &mut TablesCache, layout: Layout, cap: u32) -> Result<Self, LeviError> {
        let fkind = match layout {
            Layout::Poisson => ModuleKind::Functions,
            Layout::Algebroid { .. } => ModuleKind::FiberwiseLinear,
        };
        Ok(LeviTables {
            functions: cache.get(fkind, layout, cap)?,
            fields: cache.get(ModuleKind::YFields, layout, cap)?,
        })
    }

    pub fn data(&self) -> &StructureData {
        self.functions.spec().data()
    }

    pub fn cap(&self) -> u32 {
        self.functions.spec().cap()
    }
}

/// `f` as a 2-cochain of functions and `g` as a 1-cochain of fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorCochains {
    pub f: Cochain,
    pub g: Cochain,
}

impl ErrorCochains {
    /// Order of the combined error `ζ = (f, g)`.
    pub fn order(&self) -> Order {
        self.f.vanishing_order().min(self.g.vanishing_order())
    }
}

/// `f_ij = {x_i, x_j} - Σ c_ij^k x_k`, `g_iα = {x_i, y_α} - Σ a_iα^β y_β`.
pub fn error_cochains(tables: &LeviTables, pi: &JetBivector) -> Result<ErrorCochains, LeviError> {
    let data = tables.data();
    let cap = pi.cap();
    let m = data.m();
    let fspec = tables.functions.spec();
    let ext = tables.functions.exterior();
    let entry = |i: usize, j: usize| -> Result<JetPoly, LeviError> {
        let e = pi.upper(i, j) - &model_component(data, cap, i, j);
        if let Some((mono, _)) = e.terms().find(|(mono, _)| mono.degree() <= 1) {
            return Err(LeviError::LinearPart(super::problem::ComponentWitness {
                pair: (i + 1, j + 1),
                exponents: mono.exponents(data.n()),
                expected: RationalString(model_component(data, cap, i, j).coeff(mono)),
                found: RationalString(pi.upper(i, j).coeff(mono)),
            }));
        }
        Ok(e)
    };
    let fvals = ext
        .tuples(2)
        .iter()
        .map(|t| Ok(vec![entry(t[0], t[1])?]))
        .collect::<Result<Vec<_>, LeviError>>()?;
    let gvals = (0..m)
        .map(|i| (0..data.r()).map(|al| entry(i, m + al)).collect())
        .collect::<Result<Vec<_>, LeviError>>()?;
    Ok(ErrorCochains {
        f: Cochain::from_values(fspec, ext, 2, fvals)?,
        g: Cochain::from_values(tables.fields.spec(), ext, 1, gvals)?,
    })
}

/// `{F, y_α}` under `π`.
pub fn bracket_with_y(pi: &JetBivector, m: usize, alpha: usize, f: &JetPoly) -> JetPoly {
    -&bracket_with_coordinate(pi, m + alpha, f)
}

/// `ĝ_iα = g_iα - {h(f)_i, y_α}`.
pub fn corrected_g(tables: &LeviTables, pi: &JetBivector, g: &Cochain, hf: &Cochain) -> Result<Cochain, LeviError> {
    let m = tables.data().m();
    let values = (0..m)
        .map(|i| {
            g.value(i)
                .iter()
                .enumerate()
                .map(|(al, gia)| gia - &bracket_with_y(pi, m, al, &hf.value(i)[0]))
                .collect()
        })
        .collect();
    Ok(Cochain::from_values(
        tables.fields.spec(),
        tables.functions.exterior(),
        1,
        values,
    )?)
}

/// `S(t)` as a degree cutoff; `None` is the identity.
pub fn smooth(p: &JetPoly, cutoff: Option<u32>) -> JetPoly {
    match cutoff {
        Some(k) => p.truncated(k),
        None => p.clone(),
    }
}

/// Everything one step produces, kept for the consistency checks.
#[derive(Debug, Clone)]
pub struct StepArtifacts {
    pub errors: ErrorCochains,
    /// `h(f)`, a 1-cochain of functions.
    pub hf: Cochain,
    pub g_hat: Cochain,
    pub cutoff: Option<u32>,
    /// `φ_i = -S(h(f)_i)`.
    pub phi: Vec<JetPoly>,
    /// `ψ_α = -S(h(ĝ)_α)`.
    pub psi: Vec<JetPoly>,
    pub theta: JetDiffeo,
    pub inverse: JetDiffeo,
}

/// Builds `θ = Id + (φ, ψ)` and its inverse from `π_d`.
pub fn solve_step(tables: &LeviTables, pi: &JetBivector, cutoff: Option<u32>) -> Result<StepArtifacts, LeviError> {
    let errors = error_cochains(tables, pi)?;
    let hf = homotopy(&tables.functions, &errors.f)?;
    let g_hat = corrected_g(tables, pi, &errors.g, &hf)?;
    let hg = homotopy(&tables.fields, &g_hat)?;
    let phi: Vec<JetPoly> = hf.values().iter().map(|v| -&smooth(&v[0], cutoff)).collect();
    let psi: Vec<JetPoly> = hg.value(0).iter().map(|p| -&smooth(p, cutoff)).collect();
    let theta = JetDiffeo::from_displacement(phi.iter().chain(&psi).cloned().collect())?;
    let inverse = theta.inverse();
    Ok(StepArtifacts {
        errors,
        hf,
        g_hat,
        cutoff,
        phi,
        psi,
        theta,
        inverse,
    })
}

impl StepArtifacts {
    /// `π_{d+1} = θ_* π_d`.
    pub fn pushforward(&self, pi: &JetBivector) -> JetBivector {
        pushforward_with_inverse(pi, &self.theta, &self.inverse)
    }
}

/// Dense views `F[i][u] = f_iu` (`m × m`, antisymmetric) and
/// `G[i][β] = g_iβ`.
pub(crate) struct ErrorMatrices {
    pub f: Vec<Vec<JetPoly>>,
    pub g: Vec<Vec<JetPoly>>,
}

impl ErrorMatrices {
    pub fn new(e: &ErrorCochains, ext: &Exterior, n: usize, cap: u32) -> Self {
        let m = ext.m();
        let mut f = vec![vec![JetPoly::zero(n, cap); m]; m];
        for i in 0..m {
            for j in i + 1..m {
                let t = ext.index_of(&[i, j]).expect("pair index");
                let v = e.f.value(t)[0].clone();
                f[j][i] = -&v;
                f[i][j] = v;
            }
        }
        let g = (0..m).map(|i| e.g.value(i).to_vec()).collect();
        ErrorMatrices { f, g }
    }

    /// `Σ_u f_iu ∂_{x_u} P + Σ_β g_iβ ∂_{y_β} P`: the error part of the
    /// Hamiltonian field of `x_i` applied to `P`.
    pub fn apply(&self, i: usize, p: &JetPoly) -> JetPoly {
        let m = self.f.len();
        let mut out = JetPoly::zero(p.nvars(), p.cap());
        for (u, fiu) in self.f[i].iter().enumerate() {
            if !fiu.is_zero() {
                let d = p.derivative(u);
                if !d.is_zero() {
                    out += &(fiu * &d);
                }
            }
        }
        for (b, gib) in self.g[i].iter().enumerate() {
            if !gib.is_zero() {
                let d = p.derivative(m + b);
                if !d.is_zero() {
                    out += &(gib * &d);
                }
            }
        }
        out
    }
}

/// The remainders `Q_ij`, `T_iα`, `U_iα` of one step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticTerms {
    pub q: Cochain,
    pub t: Cochain,
    pub u: Cochain,
}

/// `Q_ij = E_i(φ_j) - E_j(φ_i) + {φ_i, φ_j}`, `T_iα = E_i(ψ_α) + {φ_i, ψ_α}`,
/// `U_iα = {h(f)_i - S h(f)_i, y_α}`, where `E_i` is the error field of
/// [`ErrorMatrices::apply`].
pub fn quadratic_terms(tables: &LeviTables, pi: &JetBivector, art: &StepArtifacts) -> Result<QuadraticTerms, LeviError> {
    let data = tables.data();
    let (n, m, cap) = (data.n(), data.m(), pi.cap());
    let ext = tables.functions.exterior();
    let em = ErrorMatrices::new(&art.errors, ext, n, cap);
    let qvals = ext
        .tuples(2)
        .iter()
        .map(|t| {
            let (i, j) = (t[0], t[1]);
            let mut v = em.apply(i, &art.phi[j]);
            v -= &em.apply(j, &art.phi[i]);
            v += &poisson_bracket(pi, &art.phi[i], &art.phi[j]);
            vec![v]
        })
        .collect();
    let tvals = (0..m)
        .map(|i| {
            art.psi
                .iter()
                .map(|ps| &em.apply(i, ps) + &poisson_bracket(pi, &art.phi[i], ps))
                .collect()
        })
        .collect();
    let uvals = (0..m)
        .map(|i| {
            let h = &art.hf.value(i)[0];
            let rest = h - &smooth(h, art.cutoff);
            (0..data.r()).map(|al| bracket_with_y(pi, m, al, &rest)).collect()
        })
        .collect();
    let fields = tables.fields.spec();
    Ok(QuadraticTerms {
        q: Cochain::from_values(tables.functions.spec(), ext, 2, qvals)?,
        t: Cochain::from_values(fields, ext, 1, tvals)?,
        u: Cochain::from_values(fields, ext, 1, uvals)?,
    })
}
