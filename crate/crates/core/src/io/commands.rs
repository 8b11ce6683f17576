//! Command entry points. Each takes the parsed input and merged options
//! and returns a [`RunReport`].

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::problem_file::{
    bivector_components, diffeo_components, BivectorComponent, DiffeoComponent, ModeName, ProblemFile, ProblemKind,
};
use super::report::{CommandOptions, ProblemCheck, RunReport, Timing, Validation};
use super::IoError;
use crate::ce::{cohomology_dims, verify_homotopy_identity, BlockCohomology, HomotopyReport, Layout, ModuleKind, Samples, TablesCache};
use crate::jet::random::{random_poly, JetShape};
use crate::jet::{Monomial, Order};
use crate::levi::{
    algebroid_problem, algebroid_structure, algebroid_to_poisson, formal_step_bound, normalize_with, LeviProblem,
    NormalizeConfig, RelationsReport, StepChecks,
};
use crate::lie::{validate_structure, StructureData};
use crate::nash_moser::{cutoff_degree, AuditReport, IterationLog, Mode, RunStatus};
use crate::norms::{check_sci_axioms, AxiomParams, NormFlavor, SciReport};
use crate::rational::{RationalString, Q};
use crate::schedule::{plan_constants, schedule, validate_constants, ConstantCheck, ScheduleConstants, ScheduleError, ScheduleSequence, Variant};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Validate,
    Normalize,
    Algebroid,
    Cohomology,
    Schedule,
    Axioms,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Normalize => "normalize",
            Command::Algebroid => "algebroid",
            Command::Cohomology => "cohomology",
            Command::Schedule => "schedule",
            Command::Axioms => "axioms",
        }
    }

    /// Whether the command reads a problem file.
    pub fn needs_input(self) -> bool {
        !matches!(self, Command::Schedule | Command::Axioms)
    }
}

pub fn load_problem(path: &std::path::Path) -> Result<ProblemFile, IoError> {
    let text = std::fs::read_to_string(path).map_err(|e| IoError::File {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    ProblemFile::from_json(&text)
}

/// Runs `cmd`. Parse and usage problems are errors; failed checks are a
/// report with `passed = false`.
pub fn run_command(cmd: Command, input: Option<&ProblemFile>, options: &CommandOptions) -> Result<RunReport, IoError> {
    let start = Instant::now();
    if cmd.needs_input() && input.is_none() {
        return Err(IoError::Usage(format!("{} needs --input", cmd.name())));
    }
    let file = match (input, options.degree) {
        (Some(f), Some(d)) => {
            if d < 1 {
                return Err(IoError::Usage("degree must be at least 1".into()));
            }
            Some(f.with_degree(d))
        }
        (Some(f), None) => Some(f.clone()),
        (None, _) => None,
    };
    let file = file.as_ref();
    let mut report = match cmd {
        Command::Validate => cmd_validate(file.expect("checked above"), options),
        Command::Normalize => cmd_normalize(file.expect("checked above"), options, false),
        Command::Algebroid => cmd_normalize(file.expect("checked above"), options, true),
        Command::Cohomology => cmd_cohomology(file.expect("checked above"), options),
        Command::Schedule => cmd_schedule(file, options),
        Command::Axioms => cmd_axioms(file, options),
    }?;
    if options.timing {
        report.timing = Some(Timing {
            total_ms_approx: start.elapsed().as_secs_f64() * 1e3,
        });
    }
    Ok(report)
}

/// The problem a file describes, with the structure checks that apply.
fn build_problem(file: &ProblemFile) -> Result<(Validation, Option<LeviProblem>), IoError> {
    match file.kind {
        ProblemKind::Poisson => {
            let data = file.structure_data()?;
            let structure = validate_structure(&data);
            let pi = file.bivector()?;
            let (problem, check) = match LeviProblem::new(data, pi, Layout::Poisson) {
                Ok(p) => (Some(p), ProblemCheck::ok()),
                Err(e) => (None, ProblemCheck::failed(&e)),
            };
            Ok((
                Validation {
                    structure: Some(structure),
                    problem: check,
                },
                problem,
            ))
        }
        ProblemKind::Algebroid => {
            let rank = file.rank.expect("checked on load");
            let pi = match file.algebroid {
                Some(_) => match algebroid_to_poisson(&file.algebroid()?) {
                    Ok(pi) => pi,
                    Err(e) => {
                        let v = Validation {
                            structure: None,
                            problem: ProblemCheck::failed(&e),
                        };
                        return Ok((v, None));
                    }
                },
                None => file.bivector()?,
            };
            let structure = algebroid_structure(&pi, file.m).ok().map(|d| validate_structure(&d));
            let (problem, check) = match algebroid_problem(pi, rank, file.m) {
                Ok(p) => (Some(p), ProblemCheck::ok()),
                Err(e) => (None, ProblemCheck::failed(&e)),
            };
            Ok((Validation { structure, problem: check }, problem))
        }
    }
}

pub fn cmd_validate(file: &ProblemFile, options: &CommandOptions) -> Result<RunReport, IoError> {
    let (validation, _) = build_problem(file)?;
    let mut report = RunReport::new("validate", Some(file), options.clone());
    report.passed = validation.passed();
    report.validation = Some(validation);
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct NormalizeResult {
    pub layout: Layout,
    pub mode: Mode,
    pub status: RunStatus,
    pub order_sequence: Vec<Order>,
    pub checks_passed: bool,
    pub relations: RelationsReport,
    pub log: IterationLog,
    pub checks: Vec<StepChecks>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constants: Option<ScheduleConstants>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub audit: Option<AuditReport>,
    /// `Θ_∞` by coordinate.
    pub theta: Vec<DiffeoComponent>,
    /// `π_∞`, nonzero upper components.
    pub pi: Vec<BivectorComponent>,
}

/// Steps until the cutoff passes `D`, plus the formal budget.
pub fn scheduled_step_bound(t0: &Q, cap: u32) -> usize {
    let mut d = 0;
    while cutoff_degree(t0, d, cap) <= cap && d < 64 {
        d += 1;
    }
    d + formal_step_bound(cap)
}

fn schedule_usage(e: ScheduleError) -> IoError {
    IoError::Usage(e.to_string())
}

pub fn cmd_normalize(file: &ProblemFile, options: &CommandOptions, algebroid: bool) -> Result<RunReport, IoError> {
    if algebroid && file.kind != ProblemKind::Algebroid {
        return Err(IoError::Usage("the algebroid command needs a file of kind \"algebroid\"".into()));
    }
    let sched = file.schedule.clone().unwrap_or_default();
    let mode_name = options.mode.unwrap_or(file.mode);
    let cap = file.degree;
    let mut effective = options.clone();
    effective.mode = Some(mode_name);
    effective.degree = Some(cap);
    let mut config = NormalizeConfig::formal(cap);
    config.homothety = file.homothety.as_ref().map(|h| h.0.clone());
    config.timing = options.timing;
    let mut notes = Vec::new();
    match mode_name {
        ModeName::Formal => {
            config.max_steps = options.max_steps.or(sched.max_steps).unwrap_or(config.max_steps);
        }
        ModeName::Scheduled => {
            let t0 = options
                .t0
                .clone()
                .or(sched.t0.clone())
                .ok_or_else(|| IoError::Usage("scheduled mode needs t0".into()))?;
            if t0.0 <= Q::from(1) {
                return Err(IoError::Usage(format!("t0 must exceed 1, got {t0}")));
            }
            let variant = options.variant.or(sched.variant).unwrap_or(Variant::MainText);
            let tau = options.tau.clone().or(sched.tau.clone());
            config.constants = Some(plan_constants(file.total_dim(), variant, tau.map(|t| t.0)).map_err(schedule_usage)?);
            config.max_steps = options
                .max_steps
                .or(sched.max_steps)
                .unwrap_or_else(|| scheduled_step_bound(&t0.0, cap));
            config.mode = Mode::Scheduled { t0: t0.clone() };
            effective.t0 = Some(t0);
            effective.variant = Some(variant);
            notes.push("the schedule audit is reported, not gated".to_string());
        }
    }
    effective.max_steps = Some(config.max_steps);
    let (validation, problem) = build_problem(file)?;
    let mut report = RunReport::new(if algebroid { "algebroid" } else { "normalize" }, Some(file), effective);
    report.notes = notes;
    let Some(problem) = problem else {
        report.validation = Some(validation);
        return Ok(report);
    };
    let mut cache = TablesCache::new(problem.data());
    let out = normalize_with(&mut cache, &problem, &config)?;
    let formal = mode_name == ModeName::Formal;
    let checks_passed = out.checks_passed(formal);
    report.passed =
        validation.passed() && out.status == RunStatus::Converged && out.relations.passed() && checks_passed;
    report.validation = Some(validation);
    let result = NormalizeResult {
        layout: problem.layout(),
        mode: config.mode.clone(),
        status: out.status,
        order_sequence: out.order_sequence(),
        checks_passed,
        relations: out.relations.clone(),
        theta: diffeo_components(&out.theta),
        pi: bivector_components(&out.pi),
        log: out.log,
        checks: out.checks,
        constants: config.constants,
        audit: out.audit,
    };
    Ok(report.with_result(&result))
}

#[derive(Debug, Clone, Serialize)]
pub struct ModuleCohomology {
    pub kind: ModuleKind,
    pub homotopy_identity_passed: bool,
    pub homotopy: HomotopyReport,
    pub cohomology: Vec<BlockCohomology>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CohomologyResult {
    pub layout: Layout,
    pub modules: Vec<ModuleCohomology>,
}

fn structure_for_cohomology(file: &ProblemFile) -> Result<(StructureData, Layout), Result<Validation, IoError>> {
    match file.kind {
        ProblemKind::Poisson => file.structure_data().map(|d| (d, Layout::Poisson)).map_err(Err),
        ProblemKind::Algebroid => match build_problem(file) {
            Ok((_, Some(p))) => Ok((p.data().clone(), p.layout())),
            Ok((v, None)) => Err(Ok(v)),
            Err(e) => Err(Err(e)),
        },
    }
}

pub fn cmd_cohomology(file: &ProblemFile, options: &CommandOptions) -> Result<RunReport, IoError> {
    let mut effective = options.clone();
    effective.degree = Some(file.degree);
    let (data, layout) = match structure_for_cohomology(file) {
        Ok(x) => x,
        Err(Ok(validation)) => {
            let mut report = RunReport::new("cohomology", Some(file), effective);
            report.validation = Some(validation);
            return Ok(report);
        }
        Err(Err(e)) => return Err(e),
    };
    let structure = validate_structure(&data);
    let validation = Validation {
        structure: Some(structure),
        problem: ProblemCheck::ok(),
    };
    let kinds = match (options.kind, layout) {
        (Some(k), Layout::Poisson) if matches!(k, ModuleKind::FiberwiseLinear | ModuleKind::BaseFunctions) => {
            return Err(IoError::Usage(format!("module kind {k:?} needs an algebroid problem")));
        }
        (Some(k), _) => vec![k],
        (None, Layout::Poisson) => {
            let mut v = vec![ModuleKind::Functions];
            if data.r() > 0 {
                v.push(ModuleKind::YFields);
            }
            v
        }
        (None, Layout::Algebroid { .. }) => vec![ModuleKind::FiberwiseLinear, ModuleKind::YFields],
    };
    let samples = match options.samples {
        Some(count) => Samples::Random {
            count,
            seed: options.seed.unwrap_or(0),
        },
        None => Samples::Spanning,
    };
    let mut report = RunReport::new("cohomology", Some(file), effective);
    if !validation.passed() {
        report.validation = Some(validation);
        return Ok(report);
    }
    report.validation = Some(validation);
    let mut cache = TablesCache::new(&data);
    let mut modules = Vec::new();
    for kind in kinds {
        let tables = cache.get(kind, layout, file.degree)?;
        let homotopy = verify_homotopy_identity(&tables, samples);
        modules.push(ModuleCohomology {
            kind,
            homotopy_identity_passed: homotopy.passed(),
            homotopy,
            cohomology: cohomology_dims(&tables),
        });
    }
    report.passed = modules.iter().all(|m| m.homotopy_identity_passed);
    Ok(report.with_result(&CohomologyResult { layout, modules }))
}

#[derive(Debug, Clone, Serialize)]
pub struct ScheduleResult {
    pub constants: ScheduleConstants,
    pub checks: Vec<ConstantCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sequence: Option<ScheduleSequence>,
}

/// Default number of `t_d` values listed.
pub const DEFAULT_SCHEDULE_STEPS: usize = 8;

pub fn cmd_schedule(file: Option<&ProblemFile>, options: &CommandOptions) -> Result<RunReport, IoError> {
    let sched = file.and_then(|f| f.schedule.clone()).unwrap_or_default();
    let n = options
        .n
        .or(file.map(ProblemFile::total_dim))
        .ok_or_else(|| IoError::Usage("schedule needs --n or --input".into()))?;
    let variant = options.variant.or(sched.variant).unwrap_or(Variant::MainText);
    let tau = options.tau.clone().or(sched.tau);
    let t0 = options.t0.clone().or(sched.t0);
    let steps = options.max_steps.or(sched.max_steps).unwrap_or(DEFAULT_SCHEDULE_STEPS);
    let constants = plan_constants(n, variant, tau.clone().map(|t| t.0)).map_err(schedule_usage)?;
    let checks = validate_constants(&constants);
    let sequence = match &t0 {
        Some(t) => Some(schedule(&t.0, steps).map_err(schedule_usage)?),
        None => None,
    };
    let effective = CommandOptions {
        n: Some(n),
        variant: Some(variant),
        tau,
        max_steps: t0.as_ref().map(|_| steps),
        t0,
        timing: options.timing,
        ..Default::default()
    };
    let mut report = RunReport::new("schedule", file, effective);
    report.passed = checks.iter().all(|c| c.passed);
    Ok(report.with_result(&ScheduleResult {
        constants,
        checks,
        sequence,
    }))
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomsResult {
    pub nvars: usize,
    pub max_order: u32,
    pub smoothing_parameters: Vec<RationalString>,
    pub radii: Vec<RationalString>,
    pub spectral: SciReport,
    pub majorant: SciReport,
}

pub const DEFAULT_AXIOM_SAMPLES: usize = 500;
pub const DEFAULT_AXIOM_DEGREE: u32 = 6;

/// Random jets for the axiom audit: every monomial of degree at most `cap`
/// is kept with probability chosen for about twelve terms per jet.
pub fn axiom_samples(nvars: usize, cap: u32, count: usize, seed: u64) -> Vec<crate::jet::JetPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let monomials = Monomial::all_up_to(nvars, cap).len() as f64;
    let density = (12.0 / monomials).clamp(0.01, 0.5);
    (0..count)
        .map(|_| random_poly(&mut rng, nvars, cap, JetShape::new(0, cap, density)))
        .collect()
}

pub fn cmd_axioms(file: Option<&ProblemFile>, options: &CommandOptions) -> Result<RunReport, IoError> {
    let nvars = options.n.or(file.map(ProblemFile::total_dim)).unwrap_or(3);
    if nvars == 0 || nvars > crate::jet::MAX_VARS {
        return Err(IoError::Usage(format!("n must be in 1..={}", crate::jet::MAX_VARS)));
    }
    let cap = options.degree.or(file.map(|f| f.degree)).unwrap_or(DEFAULT_AXIOM_DEGREE);
    let count = options.samples.unwrap_or(DEFAULT_AXIOM_SAMPLES);
    let seed = options.seed.unwrap_or(0);
    let samples = axiom_samples(nvars, cap, count, seed);
    let params = AxiomParams {
        max_order: cap,
        ..AxiomParams::default()
    };
    let spectral = check_sci_axioms(NormFlavor::SpectralDegree, &samples, &params)?;
    let majorant = check_sci_axioms(NormFlavor::MajorantAbsolute, &samples, &params)?;
    let effective = CommandOptions {
        n: Some(nvars),
        degree: Some(cap),
        samples: Some(count),
        seed: Some(seed),
        timing: options.timing,
        ..Default::default()
    };
    let mut report = RunReport::new("axioms", file, effective);
    report.passed = spectral.passed() && majorant.passed();
    let rs = |v: &[Q]| v.iter().cloned().map(RationalString).collect();
    Ok(report.with_result(&AxiomsResult {
        nvars,
        max_order: cap,
        smoothing_parameters: rs(&params.ts),
        radii: rs(&params.radii),
        spectral,
        majorant,
    }))
}
