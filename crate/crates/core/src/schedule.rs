//! Iteration constants `(s, A, ε, l, L)` and the sequences `t_d`, `r_d`.

use malachite_base::num::arithmetic::traits::{CheckedRoot, Pow};
use malachite_base::num::basic::traits::{One, Zero};
use malachite_nz::natural::Natural;
use serde::{Deserialize, Serialize};

use crate::rational::{ln, RationalString, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScheduleError {
    #[error("the appendix variant needs a value for tau")]
    MissingTau,
    #[error("tau must be non-negative")]
    NegativeTau,
    #[error("t0 must exceed 1, got {0}")]
    T0NotAboveOne(String),
    #[error("dimension must be at least 1")]
    ZeroDimension,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    #[serde(alias = "main")]
    MainText,
    Appendix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScheduleConstants {
    pub n: usize,
    pub variant: Variant,
    pub s: u64,
    #[serde(rename = "A")]
    pub a: u64,
    pub epsilon: RationalString,
    pub l: u64,
    #[serde(rename = "L")]
    pub big_l: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<RationalString>,
}

impl ScheduleConstants {
    pub fn epsilon(&self) -> &Q {
        &self.epsilon.0
    }

    /// `A` for main text, `A(1 + τ/2)` for the appendix.
    fn effective_a(&self) -> Q {
        let a = Q::from(self.a);
        match (&self.variant, &self.tau) {
            (Variant::Appendix, Some(t)) => a * (Q::ONE + &t.0 / Q::from(2u32)),
            _ => a,
        }
    }
}

/// Smallest integer strictly greater than `x`.
fn next_integer_above(x: &Q) -> u64 {
    let f = malachite_base::num::arithmetic::traits::Floor::floor(x.clone());
    u64::try_from(&f).expect("bound fits in u64") + 1
}

/// Deterministic constants: `ε` is half the largest value the decay
/// inequality admits, and `l` the smallest integer meeting both lower
/// bounds.
pub fn plan_constants(
    n: usize,
    variant: Variant,
    tau: Option<Q>,
) -> Result<ScheduleConstants, ScheduleError> {
    if n == 0 {
        return Err(ScheduleError::ZeroDimension);
    }
    let s = (n / 2) as u64 + 1;
    let (a, tau) = match variant {
        Variant::MainText => (6 * s + 9, None),
        Variant::Appendix => {
            let t = tau.ok_or(ScheduleError::MissingTau)?;
            if t < Q::ZERO {
                return Err(ScheduleError::NegativeTau);
            }
            (6 * s + 5, Some(t))
        }
    };
    let mut c = ScheduleConstants {
        n,
        variant,
        s,
        a,
        epsilon: RationalString(Q::ZERO),
        l: 0,
        big_l: 0,
        tau: tau.map(RationalString),
    };
    let eps = Q::ONE / (Q::from(8u32) * (Q::ONE + c.effective_a()));
    let (floor_l, numer) = match variant {
        Variant::MainText => (s, 3 * s + 5),
        Variant::Appendix => (3 * s + 3, 2 * s + 2),
    };
    let bound = Q::ONE + Q::from(numer) / &eps;
    let l = next_integer_above(&bound).max(floor_l + 1);
    c.epsilon = RationalString(eps);
    c.l = l;
    c.big_l = 2 * l - 1;
    Ok(c)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstantCheck {
    pub name: &'static str,
    pub passed: bool,
}

/// Every defining inequality of the constants, as exact rational checks.
pub fn validate_constants(c: &ScheduleConstants) -> Vec<ConstantCheck> {
    let s = c.s;
    let eps = c.epsilon();
    let quarter = Q::ONE / Q::from(4u32);
    let l_minus_one = Q::from(c.l) - Q::ONE;
    let mut out = vec![
        ConstantCheck {
            name: "s = floor(n/2) + 1",
            passed: s == (c.n / 2) as u64 + 1,
        },
        ConstantCheck {
            name: "0 < epsilon < 1",
            passed: *eps > Q::ZERO && *eps < Q::ONE,
        },
        ConstantCheck {
            name: "L = 2l - 1",
            passed: c.big_l == 2 * c.l - 1,
        },
    ];
    let decay = -(Q::ONE - eps) + c.effective_a() * eps;
    match c.variant {
        Variant::MainText => {
            out.push(ConstantCheck {
                name: "A = 6s + 9",
                passed: c.a == 6 * s + 9,
            });
            out.push(ConstantCheck {
                name: "A > 6s + 8",
                passed: c.a > 6 * s + 8,
            });
            out.push(ConstantCheck {
                name: "-(1 - epsilon) + A epsilon < -3/4",
                passed: decay < -quarter * Q::from(3u32),
            });
            out.push(ConstantCheck {
                name: "l > s",
                passed: c.l > s,
            });
            out.push(ConstantCheck {
                name: "(3s + 5)/(l - 1) < epsilon",
                passed: l_minus_one > Q::ZERO && Q::from(3 * s + 5) / &l_minus_one < *eps,
            });
        }
        Variant::Appendix => {
            out.push(ConstantCheck {
                name: "A = 6s + 5",
                passed: c.a == 6 * s + 5,
            });
            out.push(ConstantCheck {
                name: "A > 6s + 4",
                passed: c.a > 6 * s + 4,
            });
            out.push(ConstantCheck {
                name: "-(1 - epsilon) + A (1 + tau/2) epsilon < -3/4",
                passed: c.tau.is_some() && decay < -quarter * Q::from(3u32),
            });
            out.push(ConstantCheck {
                name: "l > 3s + 3",
                passed: c.l > 3 * s + 3,
            });
            out.push(ConstantCheck {
                name: "(2s + 2)/(l - 1) < epsilon",
                passed: l_minus_one > Q::ZERO && Q::from(2 * s + 2) / &l_minus_one < *eps,
            });
        }
    }
    out
}

/// `t_d = t0^{(3/2)^d}` kept as the pair `(t0, (3/2)^d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tvalue {
    pub t0: Q,
    pub exponent: Q,
}

/// Largest `d` for which `t_d` is handled with exact integer powers.
const EXACT_STEPS: usize = 12;

impl Tvalue {
    pub fn new(t0: &Q, d: usize) -> Self {
        Tvalue {
            t0: t0.clone(),
            exponent: Q::from(3u32).pow(d as u64) / Q::from(2u32).pow(d as u64),
        }
    }

    fn step(&self) -> usize {
        let mut den: Natural = self.exponent.denominator_ref().clone();
        let mut d = 0;
        while den > 1u32 {
            den >>= 1;
            d += 1;
        }
        d
    }

    /// `ln t_d = (3/2)^d ln t0`.
    pub fn ln(&self) -> f64 {
        crate::rational::to_f64(&self.exponent) * ln(&self.t0)
    }

    /// `t_d` itself when it is rational, i.e. when `t0` is a perfect
    /// `2^d`-th power.
    pub fn exact(&self) -> Option<Q> {
        let d = self.step();
        if d > EXACT_STEPS {
            return None;
        }
        let root = 1u64 << d;
        let num = self.t0.numerator_ref().clone().checked_root(root)?;
        let den = self.t0.denominator_ref().clone().checked_root(root)?;
        let cube = 3u64.pow(d as u32);
        Some(Q::from(num).pow(cube) / Q::from(den).pow(cube))
    }

    /// Ordering of `t_d^p` relative to a positive rational `x`, exact while
    /// the combined exponent `p·(3/2)^d` has small height, by logs beyond.
    pub fn pow_cmp(&self, p: &Q, x: &Q) -> std::cmp::Ordering {
        let e = p * &self.exponent;
        let num = u64::try_from(e.numerator_ref());
        let den = u64::try_from(e.denominator_ref());
        if let (Ok(nu), Ok(de)) = (num, den) {
            if nu <= 4096 && de <= 4096 {
                // t0^{±nu/de} against x  <=>  t0^{±nu} against x^{de}
                let lhs = self.t0.clone().pow(nu);
                let lhs = if e < Q::ZERO { Q::ONE / lhs } else { lhs };
                return lhs.cmp(&x.clone().pow(de));
            }
        }
        let lhs = crate::rational::to_f64(&e) * ln(&self.t0);
        lhs.partial_cmp(&ln(x)).unwrap_or(std::cmp::Ordering::Equal)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScheduleEntry {
    pub d: usize,
    /// `(3/2)^d`.
    pub t_exponent: RationalString,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_exact: Option<RationalString>,
    /// Decimal rendering of `t_d`, approximate.
    pub t_approx: String,
    pub r: RationalString,
    /// `t_d^{-1/2} >= 1/(d+2)^2`.
    pub t0_too_small: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScheduleSequence {
    pub t0: RationalString,
    pub entries: Vec<ScheduleEntry>,
    pub t0_too_small: bool,
}

pub fn radius(d: usize) -> Q {
    Q::ONE + Q::ONE / Q::from(d as u64 + 1)
}

/// `t_d^{-1/2} >= 1/(d+2)^2`, i.e. `t_d <= (d+2)^4`.
pub fn t0_too_small_at(t0: &Q, d: usize) -> bool {
    let bound = Q::from((d as u64 + 2).pow(4));
    Tvalue::new(t0, d).pow_cmp(&Q::ONE, &bound) != std::cmp::Ordering::Greater
}

fn render_ln(lnx: f64) -> String {
    let log10 = lnx / std::f64::consts::LN_10;
    if log10 < 15.0 {
        format!("{:.6}", lnx.exp())
    } else {
        let e = log10.floor();
        format!("{:.6}e{}", 10f64.powf(log10 - e), e as i64)
    }
}

pub fn schedule(t0: &Q, d_max: usize) -> Result<ScheduleSequence, ScheduleError> {
    if *t0 <= Q::ONE {
        return Err(ScheduleError::T0NotAboveOne(t0.to_string()));
    }
    let entries: Vec<ScheduleEntry> = (0..=d_max)
        .map(|d| {
            let t = Tvalue::new(t0, d);
            ScheduleEntry {
                d,
                t_exponent: RationalString(t.exponent.clone()),
                t_exact: t.exact().map(RationalString),
                t_approx: render_ln(t.ln()),
                r: RationalString(radius(d)),
                t0_too_small: t0_too_small_at(t0, d),
            }
        })
        .collect();
    let too_small = entries.iter().any(|e| e.t0_too_small);
    Ok(ScheduleSequence {
        t0: RationalString(t0.clone()),
        entries,
        t0_too_small: too_small,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn n3_main_text() {
        let c = plan_constants(3, Variant::MainText, None).unwrap();
        assert_eq!((c.s, c.a), (2, 21));
        assert_eq!(c.epsilon(), &frac(1, 176));
        assert_eq!((c.l, c.big_l), (1938, 3875));
        assert!(validate_constants(&c).iter().all(|k| k.passed));
    }

    #[test]
    fn n1_main_text() {
        let c = plan_constants(1, Variant::MainText, None).unwrap();
        assert_eq!((c.s, c.a), (1, 15));
    }

    #[test]
    fn appendix_needs_tau() {
        assert_eq!(
            plan_constants(3, Variant::Appendix, None),
            Err(ScheduleError::MissingTau)
        );
        let c = plan_constants(3, Variant::Appendix, Some(Q::ONE)).unwrap();
        assert_eq!(c.a, 17);
        assert!(validate_constants(&c).iter().all(|k| k.passed));
    }

    #[test]
    fn l_is_minimal() {
        let c = plan_constants(3, Variant::MainText, None).unwrap();
        let smaller = Q::from(c.l - 2);
        assert!(Q::from(11u32) / smaller >= *c.epsilon());
    }

    #[test]
    fn t_sequence_from_16() {
        let s = schedule(&Q::from(16u32), 2).unwrap();
        let t: Vec<Q> = s.entries.iter().map(|e| e.t_exact.clone().unwrap().0).collect();
        assert_eq!(t, vec![Q::from(16u32), Q::from(64u32), Q::from(512u32)]);
        let r: Vec<Q> = s.entries.iter().map(|e| e.r.0.clone()).collect();
        assert_eq!(r, vec![Q::from(2u32), frac(3, 2), frac(4, 3)]);
        assert!(s.entries[0].t0_too_small);
        assert!(s.entries[1].t0_too_small);
        assert!(!s.entries[2].t0_too_small);
    }

    #[test]
    fn barely_above_one_flags_at_zero() {
        let s = schedule(&frac(101, 100), 3).unwrap();
        assert!(s.entries[0].t0_too_small && s.t0_too_small);
    }

    #[test]
    fn large_t0_is_not_flagged() {
        assert!(!schedule(&Q::from(1000u32), 40).unwrap().t0_too_small);
    }

    #[test]
    fn radius_recursion() {
        for d in 0..20 {
            let ratio = radius(d + 1) / radius(d);
            let expect = Q::ONE - Q::ONE / Q::from(((d + 2) * (d + 2)) as u64);
            assert_eq!(ratio, expect);
        }
    }

    #[test]
    fn rejects_t0_at_most_one() {
        assert!(schedule(&Q::ONE, 2).is_err());
    }

    #[test]
    fn pow_cmp_exact_and_log() {
        let t = Tvalue::new(&Q::from(16u32), 1);
        assert_eq!(t.pow_cmp(&Q::ONE, &Q::from(64u32)), std::cmp::Ordering::Equal);
        assert_eq!(t.pow_cmp(&frac(-1, 2), &frac(1, 8)), std::cmp::Ordering::Equal);
        let big = Tvalue::new(&Q::from(16u32), 60);
        assert_eq!(big.pow_cmp(&Q::ONE, &Q::from(1_000_000u32)), std::cmp::Ordering::Greater);
    }
}
