//! Norm families on jets, degree-cutoff smoothing and the SCI axiom audit.

use malachite_base::num::arithmetic::traits::{Abs, Pow};
use malachite_base::num::basic::traits::{One, Zero};
use serde::Serialize;

use crate::jet::{JetPoly, Monomial};
use crate::rational::{RationalString, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NormError {
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(String),
    #[error("spectral norms need radius at most 1, got {0}")]
    RadiusAboveOne(String),
    #[error("smoothing parameter must exceed 1, got {0}")]
    SmoothingParameter(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormFlavor {
    MajorantAbsolute,
    SpectralDegree,
}

fn check_radius(r: &Q, spectral: bool) -> Result<(), NormError> {
    if *r <= Q::ZERO {
        return Err(NormError::NonPositiveRadius(r.to_string()));
    }
    if spectral && *r > Q::ONE {
        return Err(NormError::RadiusAboveOne(r.to_string()));
    }
    Ok(())
}

/// `Σ_α |c_α| max(1, |α|)^k r^{|α|}`.
pub fn spectral_norm(f: &JetPoly, k: u32, r: &Q) -> Result<Q, NormError> {
    check_radius(r, true)?;
    let mut total = Q::ZERO;
    let mut weights: Vec<Option<Q>> = vec![None; f.cap() as usize + 1];
    for (m, c) in f.terms() {
        let d = m.degree();
        let w = weights[d as usize].get_or_insert_with(|| {
            Q::from(d.max(1)).pow(u64::from(k)) * r.clone().pow(u64::from(d))
        });
        total += c.abs() * &*w;
    }
    Ok(total)
}

/// `max_{|β| <= k} Σ_α |coeff of D^β f at α| r^{|α|}`, an upper bound for
/// the supremum of `|D^β f|` on the ball of radius `r`.
pub fn majorant_norm(f: &JetPoly, k: u32, r: &Q) -> Result<Q, NormError> {
    check_radius(r, false)?;
    let n = f.nvars();
    let top = k.min(f.max_degree().unwrap_or(0));
    let mut best = Q::ZERO;
    for beta in Monomial::all_up_to(n, top) {
        let mut sum = Q::ZERO;
        for (alpha, c) in f.terms() {
            let mut factor = Q::ONE;
            let mut ok = true;
            for i in 0..n {
                let (a, b) = (alpha.exp(i), beta.exp(i));
                if b > a {
                    ok = false;
                    break;
                }
                for j in 0..b {
                    factor *= Q::from(a - j);
                }
            }
            if ok {
                let deg = u64::from(alpha.degree() - beta.degree());
                sum += c.abs() * factor * r.clone().pow(deg);
            }
        }
        if sum > best {
            best = sum;
        }
    }
    Ok(best)
}

pub fn norm(flavor: NormFlavor, f: &JetPoly, k: u32, r: &Q) -> Result<Q, NormError> {
    match flavor {
        NormFlavor::MajorantAbsolute => majorant_norm(f, k, r),
        NormFlavor::SpectralDegree => spectral_norm(f, k, r),
    }
}

/// Largest norm over a collection of component jets.
pub fn max_norm<'a>(
    flavor: NormFlavor,
    parts: impl IntoIterator<Item = &'a JetPoly>,
    k: u32,
    r: &Q,
) -> Result<Q, NormError> {
    let mut best = Q::ZERO;
    for p in parts {
        let v = norm(flavor, p, k, r)?;
        if v > best {
            best = v;
        }
    }
    Ok(best)
}

/// `S(t)`: drops every term of degree above `t`.
pub fn smoothing(f: &JetPoly, t: &Q) -> Result<JetPoly, NormError> {
    if *t <= Q::ONE {
        return Err(NormError::SmoothingParameter(t.to_string()));
    }
    Ok(f.filtered(|m| Q::from(m.degree()) <= *t))
}

/// Parameters of the axiom audit.
#[derive(Debug, Clone)]
pub struct AxiomParams {
    pub max_order: u32,
    pub ts: Vec<Q>,
    pub radii: Vec<Q>,
}

impl Default for AxiomParams {
    fn default() -> Self {
        AxiomParams {
            max_order: 6,
            ts: [2u32, 3, 5, 8].into_iter().map(Q::from).collect(),
            radii: vec![Q::ONE / Q::from(2u32), Q::ONE],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomResult {
    pub name: &'static str,
    pub passed: bool,
    /// Largest observed `lhs / rhs` over cases with `rhs > 0`.
    pub measured_constant: RationalString,
    pub checks: usize,
    /// Cases with `rhs = 0 < lhs`, where no finite constant works.
    pub unbounded_cases: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SciReport {
    pub flavor: NormFlavor,
    pub samples: usize,
    pub axioms: Vec<AxiomResult>,
}

impl SciReport {
    pub fn passed(&self) -> bool {
        self.axioms.iter().all(|a| a.passed)
    }

    pub fn get(&self, name: &str) -> Option<&AxiomResult> {
        self.axioms.iter().find(|a| a.name == name)
    }
}

pub const AXIOM_MONOTONICITY: &str = "monotonicity";
pub const AXIOM_SMOOTHING_LOW: &str = "smoothing_low_pass";
pub const AXIOM_SMOOTHING_HIGH: &str = "smoothing_high_pass";
pub const AXIOM_INTERPOLATION: &str = "interpolation";

#[derive(Default)]
struct Tally {
    worst: Q,
    checks: usize,
    unbounded: usize,
}

impl Tally {
    fn record(&mut self, lhs: Q, rhs: Q) {
        self.checks += 1;
        if rhs == Q::ZERO {
            if lhs > Q::ZERO {
                self.unbounded += 1;
            }
            return;
        }
        let ratio = lhs / rhs;
        if ratio > self.worst {
            self.worst = ratio;
        }
    }

    fn finish(self, name: &'static str, bound_one: bool) -> AxiomResult {
        let passed = self.unbounded == 0 && (!bound_one || self.worst <= Q::ONE);
        AxiomResult {
            name,
            passed,
            measured_constant: RationalString(self.worst),
            checks: self.checks,
            unbounded_cases: self.unbounded,
        }
    }
}

/// Audits monotonicity, both smoothing inequalities and interpolation on
/// the samples. For the spectral flavor every constant must be at most 1;
/// for the majorant flavor smoothing and interpolation only need a finite
/// constant, which is reported.
pub fn check_sci_axioms(
    flavor: NormFlavor,
    samples: &[JetPoly],
    params: &AxiomParams,
) -> Result<SciReport, NormError> {
    let spectral = flavor == NormFlavor::SpectralDegree;
    let mut mono = Tally::default();
    let mut low = Tally::default();
    let mut high = Tally::default();
    let mut interp = Tally::default();
    let kmax = params.max_order;
    for f in samples {
        for (ri, r) in params.radii.iter().enumerate() {
            let norms: Vec<Q> = (0..=kmax)
                .map(|k| norm(flavor, f, k, r))
                .collect::<Result<_, _>>()?;
            for k in 0..kmax {
                mono.record(norms[k as usize].clone(), norms[k as usize + 1].clone());
            }
            if let Some(r2) = params.radii.get(ri + 1) {
                for k in 0..=kmax {
                    mono.record(norms[k as usize].clone(), norm(flavor, f, k, r2)?);
                }
            }
            for t in &params.ts {
                let sf = smoothing(f, t)?;
                let rest = f - &sf;
                let sn: Vec<Q> = (0..=kmax)
                    .map(|k| norm(flavor, &sf, k, r))
                    .collect::<Result<_, _>>()?;
                let rn: Vec<Q> = (0..=kmax)
                    .map(|k| norm(flavor, &rest, k, r))
                    .collect::<Result<_, _>>()?;
                for p in 0..=kmax {
                    for q in 0..=p {
                        let tpq = t.clone().pow(u64::from(p - q));
                        low.record(sn[p as usize].clone(), &tpq * &norms[q as usize]);
                        high.record(rn[q as usize].clone() * &tpq, norms[p as usize].clone());
                    }
                }
            }
            for p in 0..=kmax {
                for q in 0..=p {
                    for s in 0..=q {
                        let lhs = norms[q as usize].clone().pow(u64::from(p - s));
                        let rhs = norms[s as usize].clone().pow(u64::from(p - q))
                            * norms[p as usize].clone().pow(u64::from(q - s));
                        interp.record(lhs, rhs);
                    }
                }
            }
        }
    }
    Ok(SciReport {
        flavor,
        samples: samples.len(),
        axioms: vec![
            mono.finish(AXIOM_MONOTONICITY, true),
            low.finish(AXIOM_SMOOTHING_LOW, spectral),
            high.finish(AXIOM_SMOOTHING_HIGH, spectral),
            interp.finish(AXIOM_INTERPOLATION, spectral),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::random::{random_poly, rng, JetShape};
    use crate::rational::frac;

    fn x1sq() -> JetPoly {
        JetPoly::monomial(2, 4, Monomial::from_exponents(&[2, 0]), Q::ONE)
    }

    #[test]
    fn majorant_examples() {
        assert_eq!(majorant_norm(&x1sq(), 0, &Q::ONE).unwrap(), Q::ONE);
        assert_eq!(majorant_norm(&x1sq(), 1, &Q::ONE).unwrap(), Q::from(2u32));
    }

    #[test]
    fn spectral_examples() {
        let x1x2 = JetPoly::monomial(2, 4, Monomial::from_exponents(&[1, 1]), Q::ONE);
        assert_eq!(spectral_norm(&x1x2, 1, &Q::ONE).unwrap(), Q::from(2u32));
        assert_eq!(spectral_norm(&JetPoly::zero(2, 4), 3, &frac(1, 2)).unwrap(), Q::ZERO);
        assert!(matches!(
            spectral_norm(&x1x2, 1, &Q::from(2u32)),
            Err(NormError::RadiusAboveOne(_))
        ));
    }

    #[test]
    fn smoothing_examples() {
        let mut f = JetPoly::var(1, 4, 0);
        f.add_term(Monomial::from_exponents(&[3]), Q::ONE);
        assert_eq!(smoothing(&f, &Q::from(2u32)).unwrap(), JetPoly::var(1, 4, 0));
        assert_eq!(smoothing(&f, &Q::from(4u32)).unwrap(), f);
        assert!(smoothing(&f, &Q::ONE).is_err());
    }

    #[test]
    fn spectral_axioms_hold_with_constant_one() {
        let mut r = rng(21);
        let samples: Vec<JetPoly> = (0..20)
            .map(|_| random_poly(&mut r, 3, 8, JetShape::new(0, 8, 0.1)))
            .chain(std::iter::once(JetPoly::zero(3, 8)))
            .collect();
        let rep = check_sci_axioms(NormFlavor::SpectralDegree, &samples, &AxiomParams::default())
            .unwrap();
        assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn majorant_axioms_report_finite_constants() {
        let mut r = rng(22);
        let samples: Vec<JetPoly> =
            (0..5).map(|_| random_poly(&mut r, 2, 5, JetShape::new(0, 5, 0.3))).collect();
        let params = AxiomParams {
            max_order: 3,
            ..AxiomParams::default()
        };
        let rep = check_sci_axioms(NormFlavor::MajorantAbsolute, &samples, &params).unwrap();
        assert!(rep.get(AXIOM_MONOTONICITY).unwrap().passed);
    }
}
