//! Acceptance criteria, one test each. Every test prints a single
//! `[PASS]`/`[FAIL]` line; run with `--nocapture` to see them.

use std::sync::OnceLock;
use std::thread;

use levi_core::ce::{homotopy, verify_homotopy_identity, Cochain, HomotopyTables, Layout, ModuleKind, Samples, TablesCache};
use levi_core::io::commands::{axiom_samples, scheduled_step_bound};
use levi_core::jet::random::{random_diffeo, random_poly, rng, JetShape};
use levi_core::jet::{pushforward, Order, VanishingOrder};
use levi_core::levi::algebroid::random_fiber_preserving;
use levi_core::levi::{
    algebroid_problem, algebroid_to_poisson, model_bivector, normalize_with, so3_transformation_algebroid, LeviProblem,
    NormalizeConfig, NormalizeOutcome, RelationsReport, StepChecks,
};
use levi_core::nash_moser::{Mode, RunStatus};
use levi_core::norms::{check_sci_axioms, AxiomParams, NormFlavor, AXIOM_INTERPOLATION};
use levi_core::rational::{frac, RationalString};
use levi_core::schedule::{plan_constants, validate_constants, Variant};
use levi_core::{StructureData, Q};

const CONN_CAP: u32 = 8;
const CONN_RUNS: u64 = 10;
const LEVI_CAP: u32 = 6;
const LEVI_SEEDS: [u64; 3] = [21, 22, 23];

fn verdict(num: u32, name: &str, ok: bool, detail: impl AsRef<str>) {
    let tag = if ok { "PASS" } else { "FAIL" };
    println!("[{tag}] {num:02} {name}: {}", detail.as_ref());
    assert!(ok, "criterion {num:02} {name} failed: {}", detail.as_ref());
}

/// What later criteria need from a normalization run.
#[derive(Debug, Clone)]
struct RunSummary {
    label: String,
    status: RunStatus,
    linear: bool,
    steps: usize,
    orders: Vec<Order>,
    checks: Vec<StepChecks>,
    relations: RelationsReport,
}

impl RunSummary {
    fn new(label: String, problem: &LeviProblem, out: &NormalizeOutcome) -> Self {
        RunSummary {
            label,
            status: out.status,
            linear: out.pi == model_bivector(problem.data(), problem.cap()),
            steps: out.log.steps.len(),
            orders: out.order_sequence(),
            checks: out.checks.clone(),
            relations: out.relations.clone(),
        }
    }
}

fn conn_problem(seed: u64) -> LeviProblem {
    let data = StructureData::so3();
    let theta = random_diffeo(&mut rng(seed), 3, CONN_CAP, CONN_CAP, 0.2);
    let pi = pushforward(&model_bivector(&data, CONN_CAP), &theta);
    LeviProblem::new(data, pi, Layout::Poisson).unwrap()
}

fn conn_runs() -> &'static [RunSummary] {
    static RUNS: OnceLock<Vec<RunSummary>> = OnceLock::new();
    RUNS.get_or_init(|| {
        let mut cache = TablesCache::new(&StructureData::so3());
        (0..CONN_RUNS)
            .map(|seed| {
                let p = conn_problem(seed);
                let out = normalize_with(&mut cache, &p, &NormalizeConfig::formal(CONN_CAP)).unwrap();
                RunSummary::new(format!("conn seed {seed}"), &p, &out)
            })
            .collect()
    })
}

fn levi_runs() -> &'static [RunSummary] {
    static RUNS: OnceLock<Vec<RunSummary>> = OnceLock::new();
    RUNS.get_or_init(|| {
        thread::scope(|s| {
            let handles: Vec<_> = LEVI_SEEDS
                .iter()
                .map(|&seed| {
                    s.spawn(move || {
                        let data = StructureData::so3_semidirect_r3();
                        let theta = random_diffeo(&mut rng(seed), 6, LEVI_CAP, 4, 0.03);
                        let pi = pushforward(&model_bivector(&data, LEVI_CAP), &theta);
                        let p = LeviProblem::new(data.clone(), pi, Layout::Poisson).unwrap();
                        let mut cache = TablesCache::new(&data);
                        let out = normalize_with(&mut cache, &p, &NormalizeConfig::formal(LEVI_CAP)).unwrap();
                        RunSummary::new(format!("so3+r3 seed {seed}"), &p, &out)
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        })
    })
}

fn all_runs() -> impl Iterator<Item = &'static RunSummary> {
    conn_runs().iter().chain(levi_runs())
}

/// Runs and steps where `bad` holds, as `label step k`.
fn failing_steps<'a>(runs: impl Iterator<Item = &'a RunSummary>, bad: impl Fn(&StepChecks) -> bool) -> (usize, Vec<String>) {
    let mut total = 0;
    let mut failed = Vec::new();
    for r in runs {
        for c in &r.checks {
            total += 1;
            if bad(c) {
                failed.push(format!("{} step {}", r.label, c.step));
            }
        }
    }
    (total, failed)
}

#[test]
fn c01_homotopy_identity() {
    let cases = [
        ("so3 functions", StructureData::so3(), ModuleKind::Functions),
        ("so3+r3 functions", StructureData::so3_semidirect_r3(), ModuleKind::Functions),
        ("so3+r3 yfields", StructureData::so3_semidirect_r3(), ModuleKind::YFields),
    ];
    let results: Vec<(String, bool, usize)> = thread::scope(|s| {
        let handles: Vec<_> = cases
            .iter()
            .map(|(name, data, kind)| {
                s.spawn(move || {
                    let tables = HomotopyTables::new(data, *kind, Layout::Poisson, 6).unwrap();
                    let rep = verify_homotopy_identity(&tables, Samples::Spanning);
                    let samples = rep.entries.iter().map(|e| e.samples).sum();
                    let degrees_ok = rep.entries.iter().all(|e| e.cochain_degree == 1 || e.cochain_degree == 2);
                    (name.to_string(), rep.passed() && degrees_ok && samples > 0, samples)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let ok = results.iter().all(|r| r.1);
    let detail = results
        .iter()
        .map(|(n, p, k)| format!("{n} {} on {k} basis cochains", if *p { "exact" } else { "MISMATCH" }))
        .collect::<Vec<_>>()
        .join(", ");
    verdict(1, "homotopy_identity", ok, format!("D=6, degrees 1-2; {detail}"));
}

fn random_cochain(tables: &HomotopyTables, degree: usize, seed: u64, min_degree: u32) -> Cochain {
    let (spec, ext) = (tables.spec(), tables.exterior());
    let mut r = rng(seed);
    let cap = spec.cap();
    let values = (0..ext.dim(degree))
        .map(|_| {
            (0..spec.ncomp())
                .map(|comp| {
                    random_poly(&mut r, spec.nvars(), cap, JetShape::new(min_degree, cap, 0.2))
                        .filtered(|m| spec.allows(comp, m))
                })
                .collect()
        })
        .collect();
    Cochain::from_values(spec, ext, degree, values).unwrap()
}

#[test]
fn c02_order_preservation() {
    let tables = [
        HomotopyTables::new(&StructureData::so3(), ModuleKind::Functions, Layout::Poisson, 6).unwrap(),
        HomotopyTables::new(&StructureData::so3_semidirect_r3(), ModuleKind::YFields, Layout::Poisson, 4).unwrap(),
    ];
    let mut failures = Vec::new();
    let mut count = 0;
    for i in 0..200u64 {
        let t = &tables[(i % 2) as usize];
        let degree = 1 + (i / 2 % 3) as usize;
        let low = (i / 6 % 5) as u32;
        let c = random_cochain(t, degree, 1000 + i, low);
        let h = homotopy(t, &c).unwrap();
        count += 1;
        if h.vanishing_order() < c.vanishing_order() {
            failures.push(i);
        }
    }
    verdict(
        2,
        "order_preservation",
        failures.is_empty(),
        format!("{count} random cochains, {} lowered the order {:?}", failures.len(), failures),
    );
}

fn dominates(orders: &[Order]) -> bool {
    let floor = [2u32, 3, 5, 9];
    orders.iter().zip(floor).all(|(o, f)| *o >= Order::Finite(f))
}

#[test]
fn c03_conn_linearization() {
    let runs = conn_runs();
    let bad: Vec<_> = runs
        .iter()
        .filter(|r| !(r.status == RunStatus::Converged && r.linear && r.steps <= 4 && dominates(&r.orders)))
        .map(|r| format!("{} {:?} steps={} orders={:?}", r.label, r.status, r.steps, r.orders))
        .collect();
    let max_steps = runs.iter().map(|r| r.steps).max().unwrap_or(0);
    verdict(
        3,
        "conn_linearization",
        bad.is_empty(),
        format!("{} so3 runs at D={CONN_CAP}, exactly linear, at most {max_steps} steps; failures {:?}", runs.len(), bad),
    );
}

#[test]
fn c04_levi_decomposition() {
    let runs = levi_runs();
    let bad: Vec<_> = runs
        .iter()
        .filter(|r| !(r.status == RunStatus::Converged && r.relations.passed()))
        .map(|r| format!("{} {:?} {:?}", r.label, r.status, r.relations.witness))
        .collect();
    let free: Vec<_> = runs.iter().map(|r| r.relations.free_nonlinear_pairs.len()).collect();
    verdict(
        4,
        "levi_decomposition",
        bad.is_empty(),
        format!(
            "{} so3+r3 runs at D={LEVI_CAP}, x-x and x-y exact; nonlinear y-y pairs left free per run {:?}; failures {:?}",
            runs.len(),
            free,
            bad
        ),
    );
}

#[test]
fn c05_dual_path_consistency() {
    let (total, bad) = failing_steps(all_runs(), |c| !(c.dual_path_f && c.dual_path_g));
    verdict(5, "dual_path_consistency", bad.is_empty() && total > 0, format!("{total} steps checked, failures {bad:?}"));
}

#[test]
fn c06_differential_identities() {
    let (total, bad) = failing_steps(conn_runs().iter(), |c| !(c.differential_f && c.differential_g_hat));
    verdict(6, "differential_identities", bad.is_empty() && total > 0, format!("{total} steps checked, failures {bad:?}"));
}

#[test]
fn c07_jacobi_preservation() {
    let (total, bad) = failing_steps(all_runs(), |c| !c.jacobi);
    verdict(7, "jacobi_preservation", bad.is_empty() && total > 0, format!("{total} intermediate structures, failures {bad:?}"));
}

#[test]
fn c08_quadratic_progress() {
    let (total, bad) = failing_steps(all_runs(), |c| !c.quadratic_progress);
    verdict(8, "quadratic_progress", bad.is_empty() && total > 0, format!("{total} steps checked, failures {bad:?}"));
}

#[test]
fn c09_sci_axioms() {
    let samples = axiom_samples(3, 6, 500, 0);
    let params = AxiomParams {
        max_order: 6,
        ts: [2u32, 3, 5, 8].into_iter().map(Q::from).collect(),
        ..AxiomParams::default()
    };
    let rep = check_sci_axioms(NormFlavor::SpectralDegree, &samples, &params).unwrap();
    let tolerance = Q::from(1) + frac(1, 1_000_000_000);
    let interp_ok = rep.get(AXIOM_INTERPOLATION).is_some_and(|a| a.measured_constant.0 <= tolerance);
    let detail = rep
        .axioms
        .iter()
        .map(|a| format!("{} C={} over {} checks", a.name, a.measured_constant, a.checks))
        .collect::<Vec<_>>()
        .join(", ");
    verdict(9, "sci_axioms", rep.passed() && interp_ok, format!("500 jets, spectral norms; {detail}"));
}

#[test]
fn c10_schedule_constants() {
    let mut failures = Vec::new();
    let mut count = 0;
    for n in 1..=12 {
        let mut plans = vec![(Variant::MainText, None)];
        for tau in [frac(0, 1), frac(1, 2), frac(1, 1), frac(3, 1)] {
            plans.push((Variant::Appendix, Some(tau)));
        }
        for (variant, tau) in plans {
            count += 1;
            match plan_constants(n, variant, tau.clone()) {
                Ok(c) if validate_constants(&c).iter().all(|x| x.passed) => {}
                other => failures.push(format!("n={n} {variant:?} tau={tau:?}: {other:?}")),
            }
        }
    }
    let c3 = plan_constants(3, Variant::MainText, None).unwrap();
    let hand = c3.s == 2 && c3.a == 21;
    verdict(
        10,
        "schedule_constants",
        failures.is_empty() && hand,
        format!("{count} plans validated, n=3 gives s={} A={}; failures {failures:?}", c3.s, c3.a),
    );
}

#[test]
fn c11_algebroid_mode() {
    let cap = 5;
    let pi0 = algebroid_to_poisson(&so3_transformation_algebroid(cap)).unwrap();
    let theta = random_fiber_preserving(&mut rng(3), 3, 3, cap, 0.04);
    let p = algebroid_problem(pushforward(&pi0, &theta), 3, 3).unwrap();
    let mut cache = TablesCache::new(p.data());
    let out = normalize_with(&mut cache, &p, &NormalizeConfig::formal(cap)).unwrap();
    let steps_linear = out.checks.iter().all(|c| c.fiberwise_linear == Some(true));
    let ok = out.status == RunStatus::Converged
        && out.relations.passed()
        && out.relations.fiberwise_linear == Some(true)
        && steps_linear
        && out.checks_passed(true);
    verdict(
        11,
        "algebroid_mode",
        ok,
        format!(
            "D={cap}, {:?} in {} steps, relations {}, fiber-wise linear at all {} steps: {}",
            out.status,
            out.log.steps.len(),
            out.relations.passed(),
            out.checks.len(),
            steps_linear
        ),
    );
}

#[test]
fn c12_scheduled_mode() {
    let t0 = Q::from(16);
    let constants = plan_constants(3, Variant::MainText, None).unwrap();
    let mut cache = TablesCache::new(&StructureData::so3());
    let mut bad = Vec::new();
    let (mut audited, mut audit_passed, mut steps) = (0, 0, 0);
    for seed in 0..CONN_RUNS {
        let p = conn_problem(seed);
        let mut cfg = NormalizeConfig::formal(CONN_CAP);
        cfg.mode = Mode::Scheduled {
            t0: RationalString(t0.clone()),
        };
        cfg.max_steps = scheduled_step_bound(&t0, CONN_CAP);
        cfg.constants = Some(constants.clone());
        let out = normalize_with(&mut cache, &p, &cfg).unwrap();
        let dual = out.checks.iter().all(|c| c.dual_path_f && c.dual_path_g);
        let reported = out
            .audit
            .as_ref()
            .is_some_and(|a| a.steps.iter().all(|s| s.items.iter().all(|i| !i.bound.is_empty())));
        if !(out.status == RunStatus::Converged && dual && reported && out.relations.passed()) {
            bad.push(format!("seed {seed}: {:?} dual={dual} audit={reported}", out.status));
        }
        steps += out.log.steps.len();
        if let Some(a) = &out.audit {
            audited += a.steps.iter().map(|s| s.items.len()).sum::<usize>();
            audit_passed += a.steps.iter().flat_map(|s| &s.items).filter(|i| i.passed).count();
        }
    }
    verdict(
        12,
        "scheduled_mode",
        bad.is_empty(),
        format!(
            "t0=16, {CONN_RUNS} runs converged in {steps} steps total with dual paths exact; \
             audit (reported, not gated) {audit_passed}/{audited} inequalities hold; failures {bad:?}"
        ),
    );
}
