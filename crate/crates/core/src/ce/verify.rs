//! Exact checks of `δh + hδ = Id` and cohomology dimension tables.

use malachite_base::num::basic::traits::Zero;
use rand::Rng;
use serde::Serialize;

use super::cochain::block_differential;
use super::{BlockKey, HomotopyTables};
use crate::jet::random::{rng, small_rational};
use crate::rational::{RationalString, Q};

/// Which cochains to test on each block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Samples {
    /// Every basis cochain of the block.
    Spanning,
    /// `count` random cochains per block and degree.
    Random { count: usize, seed: u64 },
}

/// A failing basis or random cochain, indices 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomotopyWitness {
    /// Input cochain as `(tuple, component, exponents, coefficient)`.
    pub input: Vec<(Vec<usize>, usize, Vec<u32>, RationalString)>,
    /// First tuple where `δh + hδ` differs from the input.
    pub tuple: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomotopyEntry {
    pub block: BlockKey,
    pub cochain_degree: usize,
    pub samples: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<HomotopyWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomotopyReport {
    pub entries: Vec<HomotopyEntry>,
}

impl HomotopyReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &HomotopyEntry> {
        self.entries.iter().filter(|e| !e.passed)
    }
}

fn witness(tables: &HomotopyTables, b: usize, j: usize, u: &[Vec<Q>], bad: usize) -> HomotopyWitness {
    let ext = tables.exterior();
    let block = &tables.spec().blocks()[b];
    let n = tables.spec().nvars();
    let one_based = |t: &[usize]| t.iter().map(|i| i + 1).collect::<Vec<_>>();
    let mut input = Vec::new();
    for (t, v) in u.iter().enumerate() {
        for (idx, c) in v.iter().enumerate() {
            if *c != Q::ZERO {
                let (comp, m) = block.basis[idx];
                input.push((
                    one_based(ext.tuple(j, t)),
                    comp + 1,
                    m.exponents(n),
                    RationalString(c.clone()),
                ));
            }
        }
    }
    HomotopyWitness {
        input,
        tuple: one_based(ext.tuple(j, bad)),
    }
}

/// `δ_{j-1} h_j u + h_{j+1} δ_j u` on one block.
fn identity_image(tables: &HomotopyTables, b: usize, j: usize, u: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let ext = tables.exterior();
    let gens = &tables.spec().blocks()[b].generators;
    let hu = tables.block_homotopy(b, j, u);
    let mut out = block_differential(ext, gens, j - 1, &hu);
    if j < ext.m() {
        let du = block_differential(ext, gens, j, u);
        let hdu = tables.block_homotopy(b, j + 1, &du);
        for (o, x) in out.iter_mut().zip(hdu) {
            for (a, c) in o.iter_mut().zip(x) {
                *a += c;
            }
        }
    }
    out
}

/// Checks the homotopy identity in cochain degrees 1 and 2 (those below
/// `m`) on every block.
pub fn verify_homotopy_identity(tables: &HomotopyTables, samples: Samples) -> HomotopyReport {
    let ext = tables.exterior();
    let degrees: Vec<usize> = (1..=2).filter(|&j| j < ext.m()).collect();
    let mut entries = Vec::new();
    let mut r = match samples {
        Samples::Random { seed, .. } => Some(rng(seed)),
        Samples::Spanning => None,
    };
    for (b, block) in tables.spec().blocks().iter().enumerate() {
        let dim = block.dim();
        for &j in &degrees {
            let nt = ext.dim(j);
            let inputs: Box<dyn Iterator<Item = Vec<Vec<Q>>>> = match (samples, r.as_mut()) {
                (Samples::Spanning, _) => Box::new((0..nt).flat_map(move |t| {
                    (0..dim).map(move |k| {
                        let mut u = vec![vec![Q::ZERO; dim]; nt];
                        u[t][k] = Q::from(1);
                        u
                    })
                })),
                (Samples::Random { count, .. }, Some(rg)) => {
                    let v: Vec<Vec<Vec<Q>>> = (0..count)
                        .map(|_| {
                            (0..nt)
                                .map(|_| {
                                    (0..dim)
                                        .map(|_| {
                                            if rg.gen_bool(0.5) {
                                                small_rational(rg)
                                            } else {
                                                Q::ZERO
                                            }
                                        })
                                        .collect()
                                })
                                .collect()
                        })
                        .collect();
                    Box::new(v.into_iter())
                }
                (Samples::Random { .. }, None) => unreachable!(),
            };
            let mut count = 0;
            let mut wit = None;
            for u in inputs {
                count += 1;
                let img = identity_image(tables, b, j, &u);
                if let Some(bad) = img.iter().zip(&u).position(|(a, e)| a != e) {
                    wit = Some(witness(tables, b, j, &u, bad));
                    break;
                }
            }
            entries.push(HomotopyEntry {
                block: block.key.clone(),
                cochain_degree: j,
                samples: count,
                passed: wit.is_none(),
                witness: wit,
            });
        }
    }
    HomotopyReport { entries }
}

/// Dimensions of one cochain space of one block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohomologyDims {
    pub cochain_degree: usize,
    pub cochains: usize,
    pub kernel: usize,
    pub image: usize,
    pub cohomology: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockCohomology {
    pub block: BlockKey,
    pub dim: usize,
    pub trivial_dim: usize,
    pub degrees: Vec<CohomologyDims>,
}

/// `dim H^j = dim(ker Γ) · b_j(𝔤)`; kernel and image dimensions of `δ`
/// follow from `ker δ_j = im δ_{j-1} ⊕ H^j` and rank-nullity.
pub fn cohomology_dims(tables: &HomotopyTables) -> Vec<BlockCohomology> {
    let ext = tables.exterior();
    tables
        .spec()
        .blocks()
        .iter()
        .enumerate()
        .map(|(b, block)| {
            let triv = tables.block_tables(b).trivial_dim;
            let mut prev_image = 0;
            let degrees = (0..=ext.m())
                .map(|j| {
                    let cochains = ext.dim(j) * block.dim();
                    let cohomology = triv * ext.betti(j);
                    let kernel = prev_image + cohomology;
                    let image = cochains - kernel;
                    prev_image = image;
                    CohomologyDims {
                        cochain_degree: j,
                        cochains,
                        kernel,
                        image: if j == ext.m() { 0 } else { image },
                        cohomology,
                    }
                })
                .collect();
            BlockCohomology {
                block: block.key.clone(),
                dim: block.dim(),
                trivial_dim: triv,
                degrees,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ce::{Layout, ModuleKind};
    use crate::lie::StructureData;
    use crate::linalg::Matrix;

    #[test]
    fn so3_functions_spanning_pass() {
        let t = HomotopyTables::new(&StructureData::so3(), ModuleKind::Functions, Layout::Poisson, 4)
            .unwrap();
        let rep = verify_homotopy_identity(&t, Samples::Spanning);
        assert!(rep.passed());
        assert_eq!(rep.entries.len(), 2 * t.spec().blocks().len());
    }

    #[test]
    fn corrupted_inverse_is_caught() {
        let mut t =
            HomotopyTables::new(&StructureData::so3(), ModuleKind::Functions, Layout::Poisson, 2)
                .unwrap();
        t.corrupt_inverse(Q::from(2));
        let rep = verify_homotopy_identity(&t, Samples::Spanning);
        assert!(!rep.passed());
        let bad = rep.failures().next().unwrap();
        assert!(bad.witness.as_ref().is_some_and(|w| !w.input.is_empty()));
    }

    #[test]
    fn random_samples_pass() {
        let t = HomotopyTables::new(
            &StructureData::so3_semidirect_r3(),
            ModuleKind::YFields,
            Layout::Poisson,
            2,
        )
        .unwrap();
        assert!(verify_homotopy_identity(&t, Samples::Random { count: 3, seed: 1 }).passed());
    }

    #[test]
    fn derived_dimensions_match_ranks() {
        let t = HomotopyTables::new(&StructureData::so3(), ModuleKind::Functions, Layout::Poisson, 3)
            .unwrap();
        let ext = t.exterior();
        for (b, bc) in cohomology_dims(&t).into_iter().enumerate() {
            let block = &t.spec().blocks()[b];
            let dim = block.dim();
            for j in 0..ext.m() {
                // Dense matrix of δ_j on the block, one column per basis cochain.
                let nt = ext.dim(j);
                let cols: Vec<Vec<Q>> = (0..nt * dim)
                    .map(|c| {
                        let mut u = vec![vec![Q::ZERO; dim]; nt];
                        u[c / dim][c % dim] = Q::from(1);
                        block_differential(ext, &block.generators, j, &u).concat()
                    })
                    .collect();
                let rows = cols[0].len();
                let m = Matrix::from_fn(rows, cols.len(), |r, c| cols[c][r].clone());
                assert_eq!(m.rank(), bc.degrees[j].image, "block {b} degree {j}");
            }
        }
    }
}
