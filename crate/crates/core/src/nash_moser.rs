//! The abstract normalization loop `f^{d+1} = Φ̂_{d+1} · f^d` over an
//! [`SciInstance`], with per-step logging and the a-posteriori schedule
//! audit.

use std::cmp::Ordering;
use std::fmt;
use std::time::Instant;

use malachite_base::num::basic::traits::{One, Zero};
use serde::Serialize;

use crate::jet::Order;
use crate::norms::{NormError, NormFlavor};
use crate::rational::{ln, RationalString, Q};
use crate::schedule::{radius, ScheduleConstants, Tvalue};

/// The capabilities the loop needs from a concrete normal-form problem.
pub trait SciInstance {
    type Element: Clone + PartialEq + fmt::Debug;
    type Transform: Clone;
    type Error: std::error::Error + 'static;

    /// Truncation degree `D` of every element.
    fn cap(&self) -> u32;
    /// `π`, the normal-form part.
    fn project(&self, f: &Self::Element) -> Self::Element;
    /// `ζ(f) = f - π(f)`.
    fn zeta(&self, f: &Self::Element) -> Self::Element;
    fn difference(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;
    /// Vanishing order of `ζ(f)`.
    fn error_order(&self, f: &Self::Element) -> Order;
    /// `Φ_f`, with every correction term above degree `cutoff` dropped.
    fn solve(&self, f: &Self::Element, cutoff: Option<u32>) -> Result<Self::Transform, Self::Error>;
    /// `Φ · f`.
    fn act(&self, phi: &Self::Transform, f: &Self::Element) -> Result<Self::Element, Self::Error>;
    /// `outer ∘ inner`, acting as `inner` first.
    fn compose(&self, outer: &Self::Transform, inner: &Self::Transform) -> Self::Transform;
    fn identity(&self) -> Self::Transform;
    fn transform_order(&self, phi: &Self::Transform) -> Order;
    fn element_norm(&self, f: &Self::Element, flavor: NormFlavor, k: u32, r: &Q) -> Result<Q, NormError>;
    /// Named parts of `ζ(f)` with their norms.
    fn error_norms(
        &self,
        f: &Self::Element,
        flavor: NormFlavor,
        k: u32,
        r: &Q,
    ) -> Result<Vec<(String, Q)>, NormError>;
    /// Norm of the displacement of `Φ`.
    fn transform_norm(&self, phi: &Self::Transform, flavor: NormFlavor, k: u32, r: &Q) -> Result<Q, NormError>;
    fn eq_mod_truncation(&self, a: &Self::Element, b: &Self::Element) -> bool;
    /// Called after each step with `f^d`, `Φ̂_{d+1}` and `f^{d+1}`.
    fn after_step(
        &self,
        _step: usize,
        _before: &Self::Element,
        _phi: &Self::Transform,
        _after: &Self::Element,
    ) -> Result<(), Self::Error> {
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum Mode {
    /// No smoothing.
    Formal,
    /// Degree cutoff at `t_d = t0^{(3/2)^d}`.
    Scheduled { t0: RationalString },
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mode: Mode,
    pub max_steps: usize,
    /// Orders `(l, L)` for the norm log; norms are logged when present.
    pub constants: Option<ScheduleConstants>,
    pub timing: bool,
    /// Recompute `Ψ · f0` at the end and compare with the final element.
    pub check_composition: bool,
}

impl RunConfig {
    pub fn formal(max_steps: usize) -> Self {
        RunConfig {
            mode: Mode::Formal,
            max_steps,
            constants: None,
            timing: false,
            check_composition: true,
        }
    }
}

/// Spectral and majorant norms at the orders `l` and `L`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormSet {
    pub spectral_l: RationalString,
    #[serde(rename = "spectral_L")]
    pub spectral_big_l: RationalString,
    pub majorant_l: RationalString,
    #[serde(rename = "majorant_L")]
    pub majorant_big_l: RationalString,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepNorms {
    /// Radius used for majorant norms, `r_d`.
    pub radius: RationalString,
    /// Radius used for spectral norms, `r_d / 2` (spectral weights need `r <= 1`).
    pub spectral_radius: RationalString,
    pub element: NormSet,
    pub errors: Vec<(String, NormSet)>,
    /// Displacement `χ^{d+1}` of the step's transformation.
    pub transform: NormSet,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepLog {
    pub step: usize,
    pub error_order: Order,
    /// Largest degree kept by smoothing; absent in formal mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<u32>,
    pub transform_order: Order,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norms: Option<StepNorms>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct IterationLog {
    pub steps: Vec<StepLog>,
    /// Error order of the element the run ended with.
    pub final_error_order: Option<Order>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Converged,
    Unconverged,
}

#[derive(Debug, Clone)]
pub struct RunOutcome<E, T> {
    pub status: RunStatus,
    pub result: E,
    /// `Ψ = Φ̂_d ∘ … ∘ Φ̂_1`.
    pub transform: T,
    pub log: IterationLog,
    pub composition_consistent: Option<bool>,
}

#[derive(Debug)]
pub enum RunError<I: SciInstance> {
    Solve {
        step: usize,
        source: I::Error,
        snapshot: Box<I::Element>,
    },
    Instance { step: usize, source: I::Error },
    Norm(NormError),
}

impl<I: SciInstance> fmt::Display for RunError<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Solve { step, source, .. } => write!(f, "solver failed at step {step}: {source}"),
            RunError::Instance { step, source } => write!(f, "step {step} failed: {source}"),
            RunError::Norm(e) => write!(f, "norm evaluation failed: {e}"),
        }
    }
}

impl<I: SciInstance + fmt::Debug> std::error::Error for RunError<I> {}

impl<I: SciInstance> From<NormError> for RunError<I> {
    fn from(e: NormError) -> Self {
        RunError::Norm(e)
    }
}

/// Largest integer `k` with `k <= t_d`, capped at `cap + 1`.
pub fn cutoff_degree(t0: &Q, d: usize, cap: u32) -> u32 {
    let t = Tvalue::new(t0, d);
    let mut k = 1;
    while k <= cap && t.pow_cmp(&Q::ONE, &Q::from(k + 1)) != Ordering::Less {
        k += 1;
    }
    k
}

fn norm_set<F>(mut eval: F, c: &ScheduleConstants, r: &Q, rs: &Q) -> Result<NormSet, NormError>
where
    F: FnMut(NormFlavor, u32, &Q) -> Result<Q, NormError>,
{
    let (l, big_l) = (c.l as u32, c.big_l as u32);
    Ok(NormSet {
        spectral_l: RationalString(eval(NormFlavor::SpectralDegree, l, rs)?),
        spectral_big_l: RationalString(eval(NormFlavor::SpectralDegree, big_l, rs)?),
        majorant_l: RationalString(eval(NormFlavor::MajorantAbsolute, l, r)?),
        majorant_big_l: RationalString(eval(NormFlavor::MajorantAbsolute, big_l, r)?),
    })
}

fn step_norms<I: SciInstance>(
    inst: &I,
    c: &ScheduleConstants,
    d: usize,
    f: &I::Element,
    phi: &I::Transform,
) -> Result<StepNorms, NormError> {
    let r = radius(d);
    let rs = &r / Q::from(2u32);
    let element = norm_set(|fl, k, rr| inst.element_norm(f, fl, k, rr), c, &r, &rs)?;
    let transform = norm_set(|fl, k, rr| inst.transform_norm(phi, fl, k, rr), c, &r, &rs)?;
    let names: Vec<String> = inst
        .error_norms(f, NormFlavor::SpectralDegree, 0, &rs)?
        .into_iter()
        .map(|(n, _)| n)
        .collect();
    let mut errors = Vec::new();
    for (i, name) in names.into_iter().enumerate() {
        let set = norm_set(
            |fl, k, rr| Ok(inst.error_norms(f, fl, k, rr)?.swap_remove(i).1),
            c,
            &r,
            &rs,
        )?;
        errors.push((name, set));
    }
    Ok(StepNorms {
        radius: RationalString(r),
        spectral_radius: RationalString(rs),
        element,
        errors,
        transform,
    })
}

/// Runs the loop until `ζ` vanishes modulo truncation or `max_steps` steps
/// have been taken.
pub fn run<I: SciInstance>(
    inst: &I,
    f0: &I::Element,
    config: &RunConfig,
) -> Result<RunOutcome<I::Element, I::Transform>, RunError<I>> {
    let cap = inst.cap();
    let mut f = f0.clone();
    let mut psi = inst.identity();
    let mut log = IterationLog::default();
    let mut status = RunStatus::Unconverged;
    for d in 0..=config.max_steps {
        let order = inst.error_order(&f);
        if order.beyond(cap) {
            status = RunStatus::Converged;
            break;
        }
        if d == config.max_steps {
            break;
        }
        let start = Instant::now();
        let cutoff = match &config.mode {
            Mode::Formal => None,
            Mode::Scheduled { t0 } => Some(cutoff_degree(&t0.0, d, cap)),
        };
        let phi = inst.solve(&f, cutoff).map_err(|source| RunError::Solve {
            step: d,
            source,
            snapshot: Box::new(f.clone()),
        })?;
        let norms = match &config.constants {
            Some(c) => Some(step_norms(inst, c, d, &f, &phi)?),
            None => None,
        };
        let next = inst
            .act(&phi, &f)
            .map_err(|source| RunError::Instance { step: d, source })?;
        inst.after_step(d, &f, &phi, &next)
            .map_err(|source| RunError::Instance { step: d, source })?;
        log.steps.push(StepLog {
            step: d,
            error_order: order,
            cutoff,
            transform_order: inst.transform_order(&phi),
            norms,
            elapsed_ms: config.timing.then(|| start.elapsed().as_secs_f64() * 1e3),
        });
        psi = inst.compose(&phi, &psi);
        f = next;
    }
    log.final_error_order = Some(inst.error_order(&f));
    let composition_consistent = if config.check_composition {
        let direct = inst
            .act(&psi, f0)
            .map_err(|source| RunError::Instance {
                step: log.steps.len(),
                source,
            })?;
        Some(inst.eq_mod_truncation(&direct, &f))
    } else {
        None
    };
    Ok(RunOutcome {
        status,
        result: f,
        transform: psi,
        log,
        composition_consistent,
    })
}

/// Checks `π(π(f)) = π(f)` and `ζ(f) = f - π(f)` on a snapshot.
pub fn check_projection<I: SciInstance>(inst: &I, f: &I::Element) -> bool {
    let p = inst.project(f);
    inst.project(&p) == p && inst.zeta(f) == inst.difference(f, &p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// The inequality holds for every `t0` above the bound.
    Lower,
    /// The inequality holds for every `t0` below the bound.
    Upper,
    /// The inequality does not involve `t0`.
    Independent,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditItem {
    /// Which inequality: `transform_small`, `element_high_norm`,
    /// `element_bounded`, and per error part `error_high_norm[..]`,
    /// `error_small[..]`.
    pub item: String,
    pub measured: RationalString,
    /// Human-readable bound, e.g. `t_d^(-1/2)`.
    pub bound: String,
    pub passed: bool,
    pub t0_bound: BoundKind,
    /// `ln` of the critical `t0`, approximate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t0_critical_ln_approx: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepAudit {
    pub step: usize,
    pub items: Vec<AuditItem>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub t0: RationalString,
    /// `C` in `element_bounded`, fixed as `4‖Π^0‖_{l,r_0}`.
    pub element_bound_constant: RationalString,
    pub steps: Vec<StepAudit>,
    pub passed: bool,
    /// `ln` of the smallest `t0` meeting every lower bound seen.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_t0_ln_approx: Option<f64>,
    /// `ln` of the largest `t0` meeting every upper bound seen.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_t0_ln_approx: Option<f64>,
    pub note: &'static str,
}

pub const AUDIT_NOTE: &str = "spectral norms at radius r_d/2 on exact jets; the constants \
target the analytic regime, so the inequalities are reported rather than required";

/// `x < t_d^p` with its `t0` bound.
fn power_item(item: String, x: &Q, t: &Tvalue, p: &Q, label: &str) -> AuditItem {
    let passed = *x == Q::ZERO || t.pow_cmp(p, x) == Ordering::Greater;
    let (kind, crit) = if *x == Q::ZERO {
        (BoundKind::Independent, None)
    } else {
        // x < t0^{p e}  <=>  ln t0 (>|<) ln x / (p e)
        let pe = crate::rational::to_f64(&(p * &t.exponent));
        let crit = ln(x) / pe;
        (if pe > 0.0 { BoundKind::Lower } else { BoundKind::Upper }, Some(crit))
    };
    AuditItem {
        item,
        measured: RationalString(x.clone()),
        bound: label.to_string(),
        passed,
        t0_bound: kind,
        t0_critical_ln_approx: crit,
    }
}

/// Evaluates the per-step inequalities against the schedule for
/// `t0`, using the logged spectral norms.
pub fn audit_schedule(log: &IterationLog, constants: &ScheduleConstants, t0: &Q) -> AuditReport {
    let a = Q::from(constants.a);
    let half = -(Q::ONE / Q::from(2u32));
    let first = log.steps.iter().find_map(|s| s.norms.as_ref());
    let c3 = first.map_or(Q::ZERO, |n| Q::from(4u32) * &n.element.spectral_l.0);
    let mut steps = Vec::new();
    for s in &log.steps {
        let Some(n) = &s.norms else { continue };
        let d = s.step;
        let t = Tvalue::new(t0, d);
        let mut items = vec![
            power_item("transform_small".into(), &n.transform.spectral_l.0, &t, &half, "t_d^(-1/2)"),
            power_item("element_high_norm".into(), &n.element.spectral_big_l.0, &t, &a, "t_d^A"),
        ];
        let bound3 = &c3 * Q::from(d as u64 + 1) / Q::from(d as u64 + 2);
        items.push(AuditItem {
            item: "element_bounded".into(),
            measured: n.element.spectral_l.0.clone().into(),
            bound: format!("C(d+1)/(d+2) = {bound3}"),
            passed: n.element.spectral_l.0 < bound3,
            t0_bound: BoundKind::Independent,
            t0_critical_ln_approx: None,
        });
        for (name, set) in &n.errors {
            items.push(power_item(format!("error_high_norm[{name}]"), &set.spectral_big_l.0, &t, &a, "t_d^A"));
        }
        for (name, set) in &n.errors {
            items.push(power_item(format!("error_small[{name}]"), &set.spectral_l.0, &t, &-Q::ONE, "t_d^(-1)"));
        }
        steps.push(StepAudit { step: d, items });
    }
    let all: Vec<&AuditItem> = steps.iter().flat_map(|s| &s.items).collect();
    let min_t0_ln_approx = all
        .iter()
        .filter(|i| i.t0_bound == BoundKind::Lower)
        .filter_map(|i| i.t0_critical_ln_approx)
        .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.max(x))));
    let max_t0_ln_approx = all
        .iter()
        .filter(|i| i.t0_bound == BoundKind::Upper)
        .filter_map(|i| i.t0_critical_ln_approx)
        .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.min(x))));
    AuditReport {
        t0: RationalString(t0.clone()),
        element_bound_constant: RationalString(c3),
        passed: all.iter().all(|i| i.passed),
        steps,
        min_t0_ln_approx,
        max_t0_ln_approx,
        note: AUDIT_NOTE,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::{JetPoly, VanishingOrder};
    use crate::norms::norm;

    /// One-variable toy: elements are jets, the normal form is the linear
    /// part, and `Φ_f` removes the lowest nonlinear term by subtraction.
    #[derive(Debug)]
    struct Toy {
        cap: u32,
    }

    #[derive(Debug, thiserror::Error)]
    #[error("toy")]
    struct ToyError;

    impl SciInstance for Toy {
        type Element = JetPoly;
        type Transform = JetPoly;
        type Error = ToyError;

        fn cap(&self) -> u32 {
            self.cap
        }
        fn project(&self, f: &JetPoly) -> JetPoly {
            f.truncated(1)
        }
        fn zeta(&self, f: &JetPoly) -> JetPoly {
            f - &f.truncated(1)
        }
        fn difference(&self, a: &JetPoly, b: &JetPoly) -> JetPoly {
            a - b
        }
        fn error_order(&self, f: &JetPoly) -> Order {
            self.zeta(f).vanishing_order()
        }
        fn solve(&self, f: &JetPoly, cutoff: Option<u32>) -> Result<JetPoly, ToyError> {
            let z = self.zeta(f);
            let z = match cutoff {
                Some(k) => z.truncated(k),
                None => z,
            };
            Ok(-&z)
        }
        fn act(&self, phi: &JetPoly, f: &JetPoly) -> Result<JetPoly, ToyError> {
            Ok(f + phi)
        }
        fn compose(&self, outer: &JetPoly, inner: &JetPoly) -> JetPoly {
            outer + inner
        }
        fn identity(&self) -> JetPoly {
            JetPoly::zero(1, self.cap)
        }
        fn transform_order(&self, phi: &JetPoly) -> Order {
            phi.vanishing_order()
        }
        fn element_norm(&self, f: &JetPoly, fl: NormFlavor, k: u32, r: &Q) -> Result<Q, NormError> {
            norm(fl, f, k, r)
        }
        fn error_norms(&self, f: &JetPoly, fl: NormFlavor, k: u32, r: &Q) -> Result<Vec<(String, Q)>, NormError> {
            Ok(vec![("f".into(), norm(fl, &self.zeta(f), k, r)?)])
        }
        fn transform_norm(&self, phi: &JetPoly, fl: NormFlavor, k: u32, r: &Q) -> Result<Q, NormError> {
            norm(fl, phi, k, r)
        }
        fn eq_mod_truncation(&self, a: &JetPoly, b: &JetPoly) -> bool {
            a == b
        }
    }

    fn toy_input() -> JetPoly {
        JetPoly::from_exponent_terms(1, 4, [(vec![1], Q::ONE), (vec![2], Q::ONE), (vec![4], Q::ONE)])
            .unwrap()
    }

    #[test]
    fn already_normal_takes_zero_steps() {
        let out = run(&Toy { cap: 4 }, &JetPoly::var(1, 4, 0), &RunConfig::formal(5)).unwrap();
        assert_eq!(out.status, RunStatus::Converged);
        assert!(out.log.steps.is_empty());
        assert!(out.transform.is_zero());
    }

    #[test]
    fn zero_steps_allowed_is_unconverged() {
        let out = run(&Toy { cap: 4 }, &toy_input(), &RunConfig::formal(0)).unwrap();
        assert_eq!(out.status, RunStatus::Unconverged);
        assert_eq!(out.log.final_error_order, Some(Order::Finite(2)));
    }

    #[test]
    fn converges_and_composes() {
        let out = run(&Toy { cap: 4 }, &toy_input(), &RunConfig::formal(5)).unwrap();
        assert_eq!(out.status, RunStatus::Converged);
        assert_eq!(out.composition_consistent, Some(true));
        assert!(check_projection(&Toy { cap: 4 }, &toy_input()));
    }

    #[test]
    fn scheduled_cutoff_and_audit() {
        let c = crate::schedule::plan_constants(1, crate::schedule::Variant::MainText, None).unwrap();
        let cfg = RunConfig {
            mode: Mode::Scheduled {
                t0: RationalString(Q::from(2u32)),
            },
            max_steps: 10,
            constants: Some(c.clone()),
            timing: false,
            check_composition: true,
        };
        let out = run(&Toy { cap: 4 }, &toy_input(), &cfg).unwrap();
        assert_eq!(out.status, RunStatus::Converged);
        assert_eq!(out.log.steps[0].cutoff, Some(2));
        let audit = audit_schedule(&out.log, &c, &Q::from(2u32));
        assert_eq!(audit.steps.len(), out.log.steps.len());
        let empty = audit_schedule(&IterationLog::default(), &c, &Q::from(2u32));
        assert!(empty.passed && empty.steps.is_empty());
    }

    #[test]
    fn cutoff_degrees() {
        assert_eq!(cutoff_degree(&Q::from(16u32), 0, 8), 9);
        assert_eq!(cutoff_degree(&Q::from(2u32), 0, 8), 2);
        assert_eq!(cutoff_degree(&Q::from(2u32), 1, 8), 2);
        assert_eq!(cutoff_degree(&Q::from(2u32), 2, 8), 4);
    }
}
