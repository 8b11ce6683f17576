//! Index bookkeeping for `Λ•𝔤*`: sorted tuples, the trivial-coefficient
//! differential, its Hodge homotopy, and contraction tables.

use std::collections::HashMap;

use malachite_base::num::basic::traits::One;

use crate::lie::StructureData;
use crate::linalg::Matrix;
use crate::rational::{is_zero, Q};

/// Sign applied to the textbook differential in cochain degree `j`.
///
/// Degree 2 is flipped so that the differential of an error 2-cochain
/// equals the positive cyclic sum of quadratic terms produced by the Jacobi
/// identity; degrees 0 and 1 agree with the textbook formula. Any choice of
/// signs `±1` per degree still squares to zero.
pub fn convention_sign(j: usize) -> Q {
    if j == 2 {
        -Q::ONE
    } else {
        Q::ONE
    }
}

/// One summand `sign · ρ(ξ_generator) ω(source)` of `(δω)(T)`.
#[derive(Debug, Clone)]
pub struct ActionTerm {
    pub sign: Q,
    pub generator: usize,
    pub source: usize,
}

#[derive(Debug, Clone)]
pub struct Exterior {
    m: usize,
    tuples: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
    /// `action[j][T]` for `T ∈ Λ^{j+1}`, convention sign included.
    action: Vec<Vec<Vec<ActionTerm>>>,
    /// `lambda_d[j]`: trivial-module differential `Λ^j → Λ^{j+1}`, signed.
    lambda_d: Vec<Matrix>,
    /// `hodge[j]`: `Λ^j → Λ^{j-1}` for `j >= 1`; `hodge[0]` is empty.
    hodge: Vec<Matrix>,
    betti: Vec<usize>,
}

fn sorted_tuples(m: usize, j: usize) -> Vec<Vec<usize>> {
    fn rec(m: usize, j: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == j {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(m, j, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, j, 0, &mut Vec::new(), &mut out);
    out
}

/// `ξ_k ∧ ξ_S = sign · ξ_{sorted}`; `None` if `k ∈ S`.
pub fn insert_sorted(k: usize, s: &[usize]) -> Option<(i64, Vec<usize>)> {
    if s.contains(&k) {
        return None;
    }
    let pos = s.iter().filter(|&&x| x < k).count();
    let mut t = s.to_vec();
    t.insert(pos, k);
    Some((if pos % 2 == 0 { 1 } else { -1 }, t))
}

impl Exterior {
    pub fn new(data: &StructureData) -> Self {
        let m = data.m();
        let tuples: Vec<Vec<Vec<usize>>> = (0..=m).map(|j| sorted_tuples(m, j)).collect();
        let index: Vec<HashMap<Vec<usize>, usize>> = tuples
            .iter()
            .map(|ts| ts.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect())
            .collect();

        let mut action = Vec::new();
        let mut lambda_d = Vec::new();
        for j in 0..=m {
            let s = convention_sign(j);
            let targets: &[Vec<usize>] = if j < m { &tuples[j + 1] } else { &[] };
            let mut act_j = Vec::with_capacity(targets.len());
            let mut d = Matrix::zeros(targets.len(), tuples[j].len());
            for (ti, t) in targets.iter().enumerate() {
                let mut terms = Vec::new();
                for a in 0..t.len() {
                    let mut rest = t.clone();
                    let gen = rest.remove(a);
                    let sign = if a % 2 == 0 { s.clone() } else { -s.clone() };
                    terms.push(ActionTerm {
                        sign,
                        generator: gen,
                        source: index[j][&rest],
                    });
                }
                act_j.push(terms);
                for a in 0..t.len() {
                    for b in a + 1..t.len() {
                        let mut rest = t.clone();
                        rest.remove(b);
                        rest.remove(a);
                        let ab_sign = if (a + b) % 2 == 0 { 1 } else { -1 };
                        for l in 0..m {
                            let c = data.c(t[a], t[b], l);
                            if is_zero(c) {
                                continue;
                            }
                            if let Some((ins, src)) = insert_sorted(l, &rest) {
                                let si = index[j][&src];
                                d[(ti, si)] += c * Q::from(ab_sign * ins) * &s;
                            }
                        }
                    }
                }
            }
            action.push(act_j);
            lambda_d.push(d);
        }

        let mut hodge = vec![Matrix::zeros(0, 0)];
        let mut betti = Vec::new();
        for j in 0..=m {
            let dim = tuples[j].len();
            let mut lap = Matrix::zeros(dim, dim);
            if j > 0 {
                let prev = &lambda_d[j - 1];
                lap = &lap + &(prev * &prev.transpose());
            }
            let cur = &lambda_d[j];
            lap = &lap + &(&cur.transpose() * cur);
            betti.push(dim - lap.rank());
            if j > 0 {
                let pinv = lap.symmetric_pseudo_inverse();
                hodge.push(&lambda_d[j - 1].transpose() * &pinv);
            }
        }

        Exterior {
            m,
            tuples,
            index,
            action,
            lambda_d,
            hodge,
            betti,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self, j: usize) -> usize {
        self.tuples.get(j).map_or(0, Vec::len)
    }

    pub fn tuples(&self, j: usize) -> &[Vec<usize>] {
        &self.tuples[j]
    }

    pub fn tuple(&self, j: usize, idx: usize) -> &[usize] {
        &self.tuples[j][idx]
    }

    pub fn index_of(&self, t: &[usize]) -> Option<usize> {
        self.index.get(t.len())?.get(t).copied()
    }

    /// Summands of `(δω)(T)` for `T ∈ Λ^{j+1}`.
    pub fn action_terms(&self, j: usize, target: usize) -> &[ActionTerm] {
        &self.action[j][target]
    }

    pub fn lambda_differential(&self, j: usize) -> &Matrix {
        &self.lambda_d[j]
    }

    /// Hodge homotopy `Λ^j → Λ^{j-1}` of the trivial module, `j >= 1`.
    pub fn hodge_homotopy(&self, j: usize) -> &Matrix {
        &self.hodge[j]
    }

    /// `dim H^j(𝔤; ℝ)`.
    pub fn betti(&self, j: usize) -> usize {
        self.betti.get(j).copied().unwrap_or(0)
    }

    /// `u(ξ_k, ξ_S)` as `(sign, index of sorted(k ∪ S) in Λ^{j})` where
    /// `S ∈ Λ^{j-1}`.
    pub fn contraction(&self, k: usize, s: &[usize]) -> Option<(Q, usize)> {
        let (sign, t) = insert_sorted(k, s)?;
        Some((Q::from(sign), self.index[t.len()][&t]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_complex_squares_to_zero() {
        let ext = Exterior::new(&StructureData::so3());
        for j in 0..2 {
            let dd = ext.lambda_differential(j + 1) * ext.lambda_differential(j);
            assert!(dd.is_zero());
        }
    }

    #[test]
    fn so3_betti_numbers() {
        let ext = Exterior::new(&StructureData::so3());
        assert_eq!((0..=3).map(|j| ext.betti(j)).collect::<Vec<_>>(), vec![1, 0, 0, 1]);
    }

    #[test]
    fn hodge_homotopy_identity_in_degrees_one_and_two() {
        let ext = Exterior::new(&StructureData::so3());
        for j in 1..=2 {
            let lhs = &(ext.lambda_differential(j - 1) * ext.hodge_homotopy(j))
                + &(ext.hodge_homotopy(j + 1) * ext.lambda_differential(j));
            assert_eq!(lhs, Matrix::identity(ext.dim(j)));
        }
    }

    #[test]
    fn insertion_signs() {
        assert_eq!(insert_sorted(0, &[1, 2]), Some((1, vec![0, 1, 2])));
        assert_eq!(insert_sorted(1, &[0, 2]), Some((-1, vec![0, 1, 2])));
        assert_eq!(insert_sorted(2, &[0, 1]), Some((1, vec![0, 1, 2])));
        assert_eq!(insert_sorted(1, &[1]), None);
    }
}
