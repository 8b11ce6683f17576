//! The versioned problem file and the jet wire format.
//!
//! Indices in files are 1-based. Jets travel as lists of
//! `(exponent vector, rational string)` pairs in graded order.

use serde::{Deserialize, Serialize};

use super::IoError;
use crate::jet::{JetBivector, JetDiffeo, JetPoly, Monomial};
use crate::levi::Algebroid;
use crate::lie::StructureData;
use crate::rational::{RationalString, Q};
use crate::schedule::Variant;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    Poisson,
    Algebroid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeName {
    #[default]
    Formal,
    Scheduled,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<RationalString>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<Variant>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<RationalString>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<usize>,
}

/// `c[i][j][k] = c_ij^k` (`m × m × m`) and `a[i][α][β] = a_iα^β`
/// (`m × r × r`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureConstants {
    pub c: Vec<Vec<Vec<RationalString>>>,
    #[serde(default)]
    pub a: Vec<Vec<Vec<RationalString>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JetTerm {
    pub exponents: Vec<u32>,
    pub coeff: RationalString,
}

/// One term of `π_ij`; a pair with `i > j` contributes to `π_ji` with the
/// opposite sign.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BivectorTerm {
    pub pair: [usize; 2],
    pub exponents: Vec<u32>,
    pub coeff: RationalString,
}

/// A term of the coefficient of `e_target` in `[e_i, e_j]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketTerm {
    pub sections: [usize; 2],
    pub target: usize,
    pub exponents: Vec<u32>,
    pub coeff: RationalString,
}

/// A term of the `∂/∂x_coordinate` component of `#e_section`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnchorTerm {
    pub section: usize,
    pub coordinate: usize,
    pub exponents: Vec<u32>,
    pub coeff: RationalString,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebroidData {
    #[serde(default)]
    pub brackets: Vec<BracketTerm>,
    #[serde(default)]
    pub anchor: Vec<AnchorTerm>,
}

/// A normalization problem.
///
/// For `kind = "poisson"`, `n` is the dimension, `m` the dimension of the
/// Levi factor, and `structure` plus `bivector` are required. For
/// `kind = "algebroid"`, `rank` is the number of sections `N`, `n` the base
/// dimension and `m ≤ N`; the structure is read off the linear part and the
/// algebroid is given either by `algebroid` or by a fiber-wise linear
/// `bivector` on the dual bundle `(e_1..e_N, x_1..x_n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub format_version: u32,
    pub kind: ProblemKind,
    pub n: usize,
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureConstants>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bivector: Vec<BivectorTerm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebroid: Option<AlgebroidData>,
    pub degree: u32,
    #[serde(default)]
    pub mode: ModeName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<ScheduleOptions>,
    /// Rescale by this factor before normalizing.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub homothety: Option<RationalString>,
}

fn schema(msg: impl Into<String>) -> IoError {
    IoError::Schema(msg.into())
}

fn rationals(v: &[Vec<Vec<Q>>]) -> Vec<Vec<Vec<RationalString>>> {
    v.iter()
        .map(|a| a.iter().map(|b| b.iter().cloned().map(RationalString).collect()).collect())
        .collect()
}

fn index(what: &str, i: usize, bound: usize) -> Result<usize, IoError> {
    if i == 0 || i > bound {
        return Err(schema(format!("{what}: index {i} outside 1..={bound}")));
    }
    Ok(i - 1)
}

fn exponents(what: &str, e: &[u32], nvars: usize, cap: u32) -> Result<Monomial, IoError> {
    if e.len() != nvars {
        return Err(schema(format!(
            "{what}: exponent vector has length {}, expected {nvars}",
            e.len()
        )));
    }
    if e.iter().sum::<u32>() > cap.min(255) {
        return Err(schema(format!("{what}: term degree exceeds the truncation degree {cap}")));
    }
    Ok(Monomial::from_exponents(e))
}

pub fn jet_terms(p: &JetPoly) -> Vec<JetTerm> {
    p.to_exponent_terms()
        .into_iter()
        .map(|(exponents, c)| JetTerm {
            exponents,
            coeff: RationalString(c),
        })
        .collect()
}

pub fn jet_from_terms(what: &str, nvars: usize, cap: u32, terms: &[JetTerm]) -> Result<JetPoly, IoError> {
    let mut p = JetPoly::zero(nvars, cap);
    for (t, term) in terms.iter().enumerate() {
        p.add_term(exponents(&format!("{what}[{t}]"), &term.exponents, nvars, cap)?, term.coeff.0.clone());
    }
    Ok(p)
}

/// Nonzero upper components `π_ij`, `i < j`, 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BivectorComponent {
    pub pair: [usize; 2],
    pub terms: Vec<JetTerm>,
}

pub fn bivector_components(pi: &JetBivector) -> Vec<BivectorComponent> {
    pi.pairs()
        .filter(|(_, p)| !p.is_zero())
        .map(|((i, j), p)| BivectorComponent {
            pair: [i + 1, j + 1],
            terms: jet_terms(p),
        })
        .collect()
}

/// `θ_i = z_i + χ_i`, listed by coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffeoComponent {
    pub coordinate: usize,
    pub terms: Vec<JetTerm>,
}

pub fn diffeo_components(theta: &JetDiffeo) -> Vec<DiffeoComponent> {
    theta
        .components()
        .iter()
        .enumerate()
        .map(|(i, p)| DiffeoComponent {
            coordinate: i + 1,
            terms: jet_terms(p),
        })
        .collect()
}

fn bivector_terms(pi: &JetBivector) -> Vec<BivectorTerm> {
    bivector_components(pi)
        .into_iter()
        .flat_map(|c| {
            c.terms.into_iter().map(move |t| BivectorTerm {
                pair: c.pair,
                exponents: t.exponents,
                coeff: t.coeff,
            })
        })
        .collect()
}

impl ProblemFile {
    /// Parses JSON, reporting the line and column of syntax and type
    /// errors, then checks the file's invariants.
    pub fn from_json(text: &str) -> Result<Self, IoError> {
        let file: ProblemFile = serde_json::from_str(text).map_err(|e| {
            let full = e.to_string();
            let message = match full.rsplit_once(" at line ") {
                Some((m, _)) => m.to_string(),
                None => full,
            };
            IoError::Parse {
                line: e.line(),
                column: e.column(),
                message,
            }
        })?;
        file.check()?;
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("problem files serialize");
        s.push('\n');
        s
    }

    pub fn poisson(data: &StructureData, pi: &JetBivector) -> Self {
        ProblemFile {
            format_version: FORMAT_VERSION,
            kind: ProblemKind::Poisson,
            n: data.n(),
            m: data.m(),
            rank: None,
            structure: Some(StructureConstants {
                c: rationals(&data.c_nested()),
                a: rationals(&data.a_nested()),
            }),
            bivector: bivector_terms(pi),
            algebroid: None,
            degree: pi.cap(),
            mode: ModeName::Formal,
            schedule: None,
            homothety: None,
        }
    }

    /// An algebroid given by its fiber-wise linear bivector on the dual
    /// bundle.
    pub fn algebroid_bivector(pi: &JetBivector, rank: usize, levi_dim: usize) -> Self {
        ProblemFile {
            format_version: FORMAT_VERSION,
            kind: ProblemKind::Algebroid,
            n: pi.dim() - rank,
            m: levi_dim,
            rank: Some(rank),
            structure: None,
            bivector: bivector_terms(pi),
            algebroid: None,
            degree: pi.cap(),
            mode: ModeName::Formal,
            schedule: None,
            homothety: None,
        }
    }

    pub fn from_algebroid(alg: &Algebroid, levi_dim: usize) -> Self {
        let mut brackets = Vec::new();
        for (i, row) in alg.brackets.iter().enumerate() {
            for (j, col) in row.iter().enumerate().skip(i + 1) {
                for (k, p) in col.iter().enumerate() {
                    for t in jet_terms(p) {
                        brackets.push(BracketTerm {
                            sections: [i + 1, j + 1],
                            target: k + 1,
                            exponents: t.exponents,
                            coeff: t.coeff,
                        });
                    }
                }
            }
        }
        let mut anchor = Vec::new();
        for (i, row) in alg.anchor.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                for t in jet_terms(p) {
                    anchor.push(AnchorTerm {
                        section: i + 1,
                        coordinate: j + 1,
                        exponents: t.exponents,
                        coeff: t.coeff,
                    });
                }
            }
        }
        ProblemFile {
            format_version: FORMAT_VERSION,
            kind: ProblemKind::Algebroid,
            n: alg.base_dim,
            m: levi_dim,
            rank: Some(alg.rank),
            structure: None,
            bivector: Vec::new(),
            algebroid: Some(AlgebroidData { brackets, anchor }),
            degree: alg.cap,
            mode: ModeName::Formal,
            schedule: None,
            homothety: None,
        }
    }

    /// Number of coordinates the bivector lives on.
    pub fn total_dim(&self) -> usize {
        match self.kind {
            ProblemKind::Poisson => self.n,
            ProblemKind::Algebroid => self.rank.unwrap_or(0) + self.n,
        }
    }

    /// Checks the version, dimensions, index ranges and exponent lengths.
    pub fn check(&self) -> Result<(), IoError> {
        if self.format_version != FORMAT_VERSION {
            return Err(IoError::Version(self.format_version));
        }
        if self.degree < 1 {
            return Err(schema("degree must be at least 1"));
        }
        match self.kind {
            ProblemKind::Poisson => {
                if self.m == 0 || self.m > self.n {
                    return Err(schema(format!("need 1 <= m <= n, got n={}, m={}", self.n, self.m)));
                }
                if self.structure.is_none() {
                    return Err(schema("a poisson problem needs structure constants"));
                }
                if self.algebroid.is_some() || self.rank.is_some() {
                    return Err(schema("rank and algebroid only apply to kind \"algebroid\""));
                }
            }
            ProblemKind::Algebroid => {
                let rank = self.rank.ok_or_else(|| schema("an algebroid problem needs rank"))?;
                if self.m == 0 || self.m > rank || self.n == 0 {
                    return Err(schema(format!(
                        "need 1 <= m <= rank and n >= 1, got rank={rank}, n={}, m={}",
                        self.n, self.m
                    )));
                }
                if self.structure.is_some() {
                    return Err(schema("an algebroid's structure is read off its linear part"));
                }
                if self.algebroid.is_some() == !self.bivector.is_empty() {
                    return Err(schema("give exactly one of algebroid and bivector"));
                }
            }
        }
        if self.total_dim() > crate::jet::MAX_VARS {
            return Err(schema(format!("at most {} coordinates are supported", crate::jet::MAX_VARS)));
        }
        if let Some(s) = &self.structure {
            let (m, r) = (self.m, self.n - self.m);
            let cube = |a: &Vec<Vec<Vec<RationalString>>>, d0: usize, d: usize| {
                a.len() == d0 && a.iter().all(|x| x.len() == d && x.iter().all(|y| y.len() == d))
            };
            if !cube(&s.c, m, m) {
                return Err(schema(format!("structure.c must be {m}x{m}x{m}")));
            }
            if !(cube(&s.a, m, r) || (r == 0 && s.a.is_empty())) {
                return Err(schema(format!("structure.a must be {m}x{r}x{r}")));
            }
        }
        if let Some(h) = &self.homothety {
            if h.0 == Q::from(0) {
                return Err(schema("homothety factor must be nonzero"));
            }
        }
        let total = self.total_dim();
        for (t, term) in self.bivector.iter().enumerate() {
            let what = format!("bivector[{t}]");
            let i = index(&what, term.pair[0], total)?;
            let j = index(&what, term.pair[1], total)?;
            if i == j {
                return Err(schema(format!("{what}: diagonal pair ({}, {})", i + 1, j + 1)));
            }
            exponents(&what, &term.exponents, total, self.degree)?;
        }
        if let Some(alg) = &self.algebroid {
            let (rank, base) = (self.rank.unwrap_or(0), self.n);
            for (t, term) in alg.brackets.iter().enumerate() {
                let what = format!("algebroid.brackets[{t}]");
                let i = index(&what, term.sections[0], rank)?;
                let j = index(&what, term.sections[1], rank)?;
                index(&what, term.target, rank)?;
                if i == j {
                    return Err(schema(format!("{what}: bracket of a section with itself")));
                }
                exponents(&what, &term.exponents, base, self.degree)?;
            }
            for (t, term) in alg.anchor.iter().enumerate() {
                let what = format!("algebroid.anchor[{t}]");
                index(&what, term.section, rank)?;
                index(&what, term.coordinate, base)?;
                exponents(&what, &term.exponents, base, self.degree)?;
            }
        }
        Ok(())
    }

    /// The file truncated to degree `d`: terms above `d` are dropped.
    pub fn with_degree(&self, d: u32) -> Self {
        let mut f = self.clone();
        f.degree = d;
        let keep = |e: &[u32]| e.iter().sum::<u32>() <= d;
        f.bivector.retain(|t| keep(&t.exponents));
        if let Some(alg) = &mut f.algebroid {
            alg.brackets.retain(|t| keep(&t.exponents));
            alg.anchor.retain(|t| keep(&t.exponents));
        }
        f
    }

    /// Declared structure constants of a poisson problem.
    pub fn structure_data(&self) -> Result<StructureData, IoError> {
        let s = self.structure.as_ref().ok_or_else(|| schema("no structure constants"))?;
        let unwrap = |a: &Vec<Vec<Vec<RationalString>>>| -> Vec<Vec<Vec<Q>>> {
            a.iter()
                .map(|x| x.iter().map(|y| y.iter().map(|z| z.0.clone()).collect()).collect())
                .collect()
        };
        StructureData::new(self.n, self.m, unwrap(&s.c), unwrap(&s.a)).map_err(|e| schema(e.to_string()))
    }

    /// The bivector from its listed terms; repeated terms add up.
    pub fn bivector(&self) -> Result<JetBivector, IoError> {
        let total = self.total_dim();
        let mut pi = JetBivector::zero(total, self.degree);
        for (t, term) in self.bivector.iter().enumerate() {
            let what = format!("bivector[{t}]");
            let i = index(&what, term.pair[0], total)?;
            let j = index(&what, term.pair[1], total)?;
            let mono = exponents(&what, &term.exponents, total, self.degree)?;
            let (a, b, c) = if i < j {
                (i, j, term.coeff.0.clone())
            } else {
                (j, i, -term.coeff.0.clone())
            };
            let mut p = pi.upper(a, b).clone();
            p.add_term(mono, c);
            pi.set(a, b, p);
        }
        Ok(pi)
    }

    /// Brackets and anchor of an algebroid file; `[e_j, e_i]` is filled in
    /// by antisymmetry.
    pub fn algebroid(&self) -> Result<Algebroid, IoError> {
        let data = self.algebroid.as_ref().ok_or_else(|| schema("no algebroid section"))?;
        let rank = self.rank.ok_or_else(|| schema("an algebroid problem needs rank"))?;
        let (base, cap) = (self.n, self.degree);
        let zero = JetPoly::zero(base, cap);
        let mut brackets = vec![vec![vec![zero.clone(); rank]; rank]; rank];
        for (t, term) in data.brackets.iter().enumerate() {
            let what = format!("algebroid.brackets[{t}]");
            let i = index(&what, term.sections[0], rank)?;
            let j = index(&what, term.sections[1], rank)?;
            let k = index(&what, term.target, rank)?;
            let mono = exponents(&what, &term.exponents, base, cap)?;
            brackets[i][j][k].add_term(mono, term.coeff.0.clone());
            brackets[j][i][k].add_term(mono, -term.coeff.0.clone());
        }
        let mut anchor = vec![vec![zero; base]; rank];
        for (t, term) in data.anchor.iter().enumerate() {
            let what = format!("algebroid.anchor[{t}]");
            let i = index(&what, term.section, rank)?;
            let j = index(&what, term.coordinate, base)?;
            let mono = exponents(&what, &term.exponents, base, cap)?;
            anchor[i][j].add_term(mono, term.coeff.0.clone());
        }
        Ok(Algebroid {
            rank,
            base_dim: base,
            brackets,
            anchor,
            cap,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levi::{model_bivector, so3_transformation_algebroid};
    use crate::rational::frac;

    #[test]
    fn poisson_file_round_trips() {
        let data = StructureData::so3_semidirect_r3();
        let mut pi = model_bivector(&data, 3);
        let mut p = pi.upper(0, 4).clone();
        p.add_term(Monomial::from_exponents(&[0, 0, 1, 0, 0, 1]), frac(-3, 7));
        pi.set(0, 4, p);
        let file = ProblemFile::poisson(&data, &pi);
        let back = ProblemFile::from_json(&file.to_json()).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.structure_data().unwrap(), data);
        assert_eq!(back.bivector().unwrap(), pi);
    }

    #[test]
    fn algebroid_file_round_trips() {
        let alg = so3_transformation_algebroid(3);
        let file = ProblemFile::from_algebroid(&alg, 3);
        let back = ProblemFile::from_json(&file.to_json()).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.algebroid().unwrap(), alg);
    }

    #[test]
    fn malformed_rational_reports_position() {
        let data = StructureData::so3();
        let text = ProblemFile::poisson(&data, &model_bivector(&data, 2))
            .to_json()
            .replacen("\"1\"", "\"1/0\"", 1);
        match ProblemFile::from_json(&text) {
            Err(IoError::Parse { line, message, .. }) => {
                assert!(line > 1);
                assert!(message.contains("1/0"), "{message}");
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn exponent_length_is_checked() {
        let data = StructureData::so3();
        let mut file = ProblemFile::poisson(&data, &model_bivector(&data, 2));
        file.bivector[0].exponents.push(0);
        assert!(matches!(file.check(), Err(IoError::Schema(_))));
        let mut file = ProblemFile::poisson(&data, &model_bivector(&data, 2));
        file.bivector[0].pair = [1, 4];
        assert!(matches!(file.check(), Err(IoError::Schema(_))));
    }

    #[test]
    fn lowering_the_degree_drops_terms() {
        let data = StructureData::so3();
        let mut pi = model_bivector(&data, 4);
        let mut p = pi.upper(0, 1).clone();
        p.add_term(Monomial::from_exponents(&[1, 1, 1]), frac(1, 2));
        pi.set(0, 1, p);
        let file = ProblemFile::poisson(&data, &pi).with_degree(2);
        assert_eq!(file.bivector().unwrap(), model_bivector(&data, 2));
    }
}
