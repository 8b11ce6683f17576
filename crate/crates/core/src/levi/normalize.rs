//! The Levi problem as an instance of the abstract loop, and the
//! `normalize` entry point.

use std::cell::RefCell;
use std::rc::Rc;

use serde::Serialize;

use super::algebroid::{check_fiberwise_linear, diffeo_preserves_fibers};
use super::identities::{check_step, StepChecks};
use super::problem::{
    constrained, first_difference, model_bivector, project, rescale_bivector, rescale_diffeo, ComponentWitness,
    LeviProblem,
};
use super::step::{solve_step, LeviTables, StepArtifacts};
use super::LeviError;
use crate::ce::{Layout, TablesCache};
use crate::jet::{pushforward, pushforward_with_inverse, JetBivector, JetDiffeo, JetPoly, Order, VanishingOrder};
use crate::nash_moser::{
    audit_schedule, run, AuditReport, IterationLog, Mode, RunConfig, RunError, RunStatus, SciInstance,
};
use crate::norms::{max_norm, NormError, NormFlavor};
use crate::rational::Q;
use crate::schedule::ScheduleConstants;

/// A step transformation with its inverse; transformations coming straight
/// from a solve also carry the step artifacts.
#[derive(Debug, Clone)]
pub struct LeviTransform {
    pub theta: JetDiffeo,
    pub inverse: JetDiffeo,
    artifacts: Option<Rc<StepArtifacts>>,
}

impl LeviTransform {
    pub fn artifacts(&self) -> Option<&StepArtifacts> {
        self.artifacts.as_deref()
    }
}

#[derive(Debug)]
pub struct LeviInstance {
    tables: LeviTables,
    layout: Layout,
    checks_enabled: bool,
    checks: RefCell<Vec<StepChecks>>,
}

impl LeviInstance {
    pub fn new(tables: LeviTables, layout: Layout, checks_enabled: bool) -> Self {
        LeviInstance {
            tables,
            layout,
            checks_enabled,
            checks: RefCell::new(Vec::new()),
        }
    }

    pub fn take_checks(&self) -> Vec<StepChecks> {
        self.checks.take()
    }

    fn m(&self) -> usize {
        self.tables.data().m()
    }
}

impl SciInstance for LeviInstance {
    type Element = JetBivector;
    type Transform = LeviTransform;
    type Error = LeviError;

    fn cap(&self) -> u32 {
        self.tables.cap()
    }

    fn project(&self, f: &JetBivector) -> JetBivector {
        project(self.tables.data(), f)
    }

    fn zeta(&self, f: &JetBivector) -> JetBivector {
        self.difference(f, &self.project(f))
    }

    fn difference(&self, a: &JetBivector, b: &JetBivector) -> JetBivector {
        a.checked_sub(b).expect("bivectors share a shape")
    }

    fn error_order(&self, f: &JetBivector) -> Order {
        self.zeta(f).vanishing_order()
    }

    fn solve(&self, f: &JetBivector, cutoff: Option<u32>) -> Result<LeviTransform, LeviError> {
        let art = solve_step(&self.tables, f, cutoff)?;
        Ok(LeviTransform {
            theta: art.theta.clone(),
            inverse: art.inverse.clone(),
            artifacts: Some(Rc::new(art)),
        })
    }

    fn act(&self, phi: &LeviTransform, f: &JetBivector) -> Result<JetBivector, LeviError> {
        Ok(pushforward_with_inverse(f, &phi.theta, &phi.inverse))
    }

    fn compose(&self, outer: &LeviTransform, inner: &LeviTransform) -> LeviTransform {
        LeviTransform {
            theta: outer.theta.after(&inner.theta),
            inverse: inner.inverse.after(&outer.inverse),
            artifacts: None,
        }
    }

    fn identity(&self) -> LeviTransform {
        let id = JetDiffeo::identity(self.tables.data().n(), self.cap());
        LeviTransform {
            theta: id.clone(),
            inverse: id,
            artifacts: None,
        }
    }

    fn transform_order(&self, phi: &LeviTransform) -> Order {
        phi.theta.displacement().vanishing_order()
    }

    fn element_norm(&self, f: &JetBivector, flavor: NormFlavor, k: u32, r: &Q) -> Result<Q, NormError> {
        max_norm(flavor, f.stored(), k, r)
    }

    fn error_norms(&self, f: &JetBivector, flavor: NormFlavor, k: u32, r: &Q) -> Result<Vec<(String, Q)>, NormError> {
        let z = self.zeta(f);
        let m = self.m();
        let part = |want_xx: bool| -> Vec<&JetPoly> {
            z.pairs()
                .filter(|((i, j), _)| constrained(m, *i, *j) && (*j < m) == want_xx)
                .map(|(_, p)| p)
                .collect()
        };
        Ok(vec![
            ("f".to_string(), max_norm(flavor, part(true), k, r)?),
            ("g".to_string(), max_norm(flavor, part(false), k, r)?),
        ])
    }

    fn transform_norm(&self, phi: &LeviTransform, flavor: NormFlavor, k: u32, r: &Q) -> Result<Q, NormError> {
        max_norm(flavor, phi.theta.displacement(), k, r)
    }

    fn eq_mod_truncation(&self, a: &JetBivector, b: &JetBivector) -> bool {
        a == b
    }

    fn after_step(
        &self,
        step: usize,
        before: &JetBivector,
        phi: &LeviTransform,
        after: &JetBivector,
    ) -> Result<(), LeviError> {
        if !self.checks_enabled {
            return Ok(());
        }
        if let Some(art) = phi.artifacts() {
            let c = check_step(&self.tables, self.layout, step, before, art, after)?;
            self.checks.borrow_mut().push(c);
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct NormalizeConfig {
    pub mode: Mode,
    pub max_steps: usize,
    /// Rescale by the homothety with this factor before normalizing and
    /// map the result back.
    pub homothety: Option<Q>,
    /// Orders `l`, `L` for the norm log; required for the audit.
    pub constants: Option<ScheduleConstants>,
    pub timing: bool,
    pub checks: bool,
}

impl NormalizeConfig {
    /// Formal mode with the step budget `⌈log2 D⌉ + 2`.
    pub fn formal(cap: u32) -> Self {
        NormalizeConfig {
            mode: Mode::Formal,
            max_steps: formal_step_bound(cap),
            homothety: None,
            constants: None,
            timing: false,
            checks: true,
        }
    }
}

/// `⌈log2 D⌉ + 2`.
pub fn formal_step_bound(cap: u32) -> usize {
    let mut k = 0;
    while (1u64 << k) < u64::from(cap.max(1)) {
        k += 1;
    }
    k + 2
}

/// Final postconditions, indices 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationsReport {
    /// `{x_i, x_j} = Σ c_ij^k x_k` modulo degree > D.
    pub xx: bool,
    /// `{x_i, y_α} = Σ a_iα^β y_β` modulo degree > D.
    pub xy: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ComponentWitness>,
    /// `y`-`y` pairs with terms beyond the linear ones; these are free.
    pub free_nonlinear_pairs: Vec<(usize, usize)>,
    pub theta_order: Order,
    /// `Θ_* π_0 = π_∞` modulo degree > D.
    pub pushforward_consistent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fiberwise_linear: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_preserves_fibers: Option<bool>,
}

impl RelationsReport {
    pub fn passed(&self) -> bool {
        self.xx
            && self.xy
            && self.theta_order >= Order::Finite(2)
            && self.pushforward_consistent
            && self.fiberwise_linear.unwrap_or(true)
            && self.theta_preserves_fibers.unwrap_or(true)
    }
}

pub fn relations_report(problem: &LeviProblem, theta: &JetDiffeo, pi: &JetBivector) -> RelationsReport {
    let data = problem.data();
    let (m, cap) = (data.m(), problem.cap());
    let model = model_bivector(data, cap);
    let mut xx = true;
    let mut xy = true;
    for ((i, j), p) in pi.pairs() {
        if constrained(m, i, j) && p != model.upper(i, j) {
            if j < m {
                xx = false;
            } else {
                xy = false;
            }
        }
    }
    let free_nonlinear_pairs = pi
        .pairs()
        .filter(|((i, j), p)| !constrained(m, *i, *j) && p.terms().any(|(mo, _)| mo.degree() >= 2))
        .map(|((i, j), _)| (i + 1, j + 1))
        .collect();
    let (fiberwise_linear, theta_preserves_fibers) = match problem.layout() {
        Layout::Poisson => (None, None),
        Layout::Algebroid { fiber_dim } => (
            Some(check_fiberwise_linear(pi, fiber_dim)),
            Some(diffeo_preserves_fibers(theta, fiber_dim)),
        ),
    };
    RelationsReport {
        xx,
        xy,
        witness: first_difference(pi, &model, m, cap, true),
        free_nonlinear_pairs,
        theta_order: theta.displacement().vanishing_order(),
        pushforward_consistent: pushforward(problem.pi(), theta) == *pi,
        fiberwise_linear,
        theta_preserves_fibers,
    }
}

#[derive(Debug, Clone)]
pub struct NormalizeOutcome {
    pub status: RunStatus,
    pub theta: JetDiffeo,
    pub pi: JetBivector,
    pub log: IterationLog,
    pub checks: Vec<StepChecks>,
    pub relations: RelationsReport,
    pub audit: Option<AuditReport>,
}

impl NormalizeOutcome {
    /// Error orders `order(ζ_0), order(ζ_1), …` including the final one.
    pub fn order_sequence(&self) -> Vec<Order> {
        self.log
            .steps
            .iter()
            .map(|s| s.error_order)
            .chain(self.log.final_error_order)
            .collect()
    }

    pub fn checks_passed(&self, formal: bool) -> bool {
        self.checks.iter().all(|c| c.passed(formal))
    }
}

/// Normalizes with tables drawn from `cache`, which must be built for the
/// problem's structure data.
pub fn normalize_with(
    cache: &mut TablesCache,
    problem: &LeviProblem,
    config: &NormalizeConfig,
) -> Result<NormalizeOutcome, LeviError> {
    if cache.data() != problem.data() {
        return Err(LeviError::Structure("tables were built for different structure data".into()));
    }
    let tables = LeviTables::new(cache, problem.layout(), problem.cap())?;
    let inst = LeviInstance::new(tables, problem.layout(), config.checks);
    let start = match &config.homothety {
        Some(s) => rescale_bivector(problem.pi(), s),
        None => problem.pi().clone(),
    };
    let rc = RunConfig {
        mode: config.mode.clone(),
        max_steps: config.max_steps,
        constants: config.constants.clone(),
        timing: config.timing,
        check_composition: false,
    };
    let out = run(&inst, &start, &rc).map_err(|e| match e {
        RunError::Solve { source, .. } | RunError::Instance { source, .. } => source,
        RunError::Norm(e) => LeviError::Norm(e),
    })?;
    let (theta, pi) = match &config.homothety {
        Some(s) => (
            rescale_diffeo(&out.transform.theta, s),
            rescale_bivector(&out.result, &(Q::from(1) / s.clone())),
        ),
        None => (out.transform.theta, out.result),
    };
    let relations = relations_report(problem, &theta, &pi);
    let audit = match (&config.mode, &config.constants) {
        (Mode::Scheduled { t0 }, Some(c)) => Some(audit_schedule(&out.log, c, &t0.0)),
        _ => None,
    };
    Ok(NormalizeOutcome {
        status: out.status,
        theta,
        pi,
        log: out.log,
        checks: inst.take_checks(),
        relations,
        audit,
    })
}

pub fn normalize(problem: &LeviProblem, config: &NormalizeConfig) -> Result<NormalizeOutcome, LeviError> {
    normalize_with(&mut TablesCache::new(problem.data()), problem, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::random::{random_diffeo, rng};
    use crate::jet::Monomial;
    use crate::lie::StructureData;

    fn conn_problem(cap: u32) -> LeviProblem {
        let data = StructureData::so3();
        let mut d = vec![JetPoly::zero(3, cap); 3];
        d[0] = JetPoly::monomial(3, cap, Monomial::from_exponents(&[0, 1, 1]), Q::from(1));
        let theta = JetDiffeo::from_displacement(d).unwrap();
        let pi = pushforward(&model_bivector(&data, cap), &theta);
        LeviProblem::new(data, pi, Layout::Poisson).unwrap()
    }

    #[test]
    fn linear_model_is_already_normal() {
        let data = StructureData::so3_semidirect_r3();
        let p = LeviProblem::new(data.clone(), model_bivector(&data, 4), Layout::Poisson).unwrap();
        let out = normalize(&p, &NormalizeConfig::formal(4)).unwrap();
        assert_eq!(out.status, RunStatus::Converged);
        assert!(out.log.steps.is_empty());
        assert!(out.theta.is_identity());
    }

    #[test]
    fn conn_case_linearizes() {
        let p = conn_problem(8);
        let out = normalize(&p, &NormalizeConfig::formal(8)).unwrap();
        assert_eq!(out.status, RunStatus::Converged);
        assert_eq!(out.pi, model_bivector(p.data(), 8));
        assert!(out.relations.passed(), "{:?}", out.relations);
        assert_eq!(
            out.order_sequence(),
            vec![Order::Finite(2), Order::Finite(3), Order::Finite(5), Order::Infinite]
        );
        assert_eq!(out.checks.len(), 3);
        assert!(out.checks_passed(true), "{:#?}", out.checks);
    }

    #[test]
    fn homothety_gives_a_valid_normal_form() {
        let p = conn_problem(5);
        let mut cfg = NormalizeConfig::formal(5);
        cfg.homothety = Some(Q::from(1) / Q::from(3));
        let out = normalize(&p, &cfg).unwrap();
        assert_eq!(out.status, RunStatus::Converged);
        assert!(out.relations.passed());
    }

    #[test]
    fn semidirect_random_levi() {
        let data = StructureData::so3_semidirect_r3();
        let cap = 4;
        let theta = random_diffeo(&mut rng(3), 6, cap, cap, 0.05);
        let pi = pushforward(&model_bivector(&data, cap), &theta);
        let p = LeviProblem::new(data, pi, Layout::Poisson).unwrap();
        let out = normalize(&p, &NormalizeConfig::formal(cap)).unwrap();
        assert_eq!(out.status, RunStatus::Converged);
        assert!(out.relations.passed(), "{:?}", out.relations);
        assert!(!out.checks.is_empty());
        assert!(out.checks_passed(true), "{:#?}", out.checks);
    }

    #[test]
    fn transformation_algebroid_linearizes_fiberwise() {
        use crate::jet::random::rng;
        use crate::levi::algebroid::{
            algebroid_problem, algebroid_to_poisson, random_fiber_preserving, so3_transformation_algebroid,
        };
        let cap = 4;
        let pi0 = algebroid_to_poisson(&so3_transformation_algebroid(cap)).unwrap();
        let theta = random_fiber_preserving(&mut rng(11), 3, 3, cap, 0.1);
        let p = algebroid_problem(pushforward(&pi0, &theta), 3, 3).unwrap();
        let out = normalize(&p, &NormalizeConfig::formal(cap)).unwrap();
        assert_eq!(out.status, RunStatus::Converged);
        assert!(out.relations.passed(), "{:?}", out.relations);
        assert_eq!(out.relations.fiberwise_linear, Some(true));
        assert!(out.checks_passed(true), "{:#?}", out.checks);
    }

    #[test]
    fn scheduled_mode_logs_norms_and_audits() {
        use crate::rational::RationalString;
        use crate::schedule::{plan_constants, Variant};
        let p = conn_problem(6);
        let mut cfg = NormalizeConfig::formal(6);
        cfg.mode = Mode::Scheduled {
            t0: RationalString(Q::from(16)),
        };
        cfg.max_steps = 8;
        cfg.constants = Some(plan_constants(3, Variant::MainText, None).unwrap());
        let out = normalize(&p, &cfg).unwrap();
        assert_eq!(out.status, RunStatus::Converged);
        assert!(out.relations.passed());
        assert!(out.checks_passed(false), "{:#?}", out.checks);
        assert!(out.log.steps.iter().all(|s| s.norms.is_some()));
        assert!(out.audit.is_some());
    }
}
