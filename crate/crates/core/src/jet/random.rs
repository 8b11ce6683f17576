//! Seeded random jets for tests, fixtures and benchmarks.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{JetBivector, JetDiffeo, JetPoly, Monomial};
use crate::rational::{frac, Q};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small nonzero rational `p/q` with `|p| <= 3`, `q ∈ {1, 2}`.
pub fn small_rational<R: Rng>(rng: &mut R) -> Q {
    let mut p = 0;
    while p == 0 {
        p = rng.gen_range(-3..=3);
    }
    frac(p, rng.gen_range(1..=2))
}

/// Shape of a random jet: degree window and per-monomial inclusion odds.
#[derive(Debug, Clone, Copy)]
pub struct JetShape {
    pub min_degree: u32,
    pub max_degree: u32,
    pub density: f64,
}

impl JetShape {
    pub fn new(min_degree: u32, max_degree: u32, density: f64) -> Self {
        JetShape {
            min_degree,
            max_degree,
            density,
        }
    }
}

pub fn random_poly<R: Rng>(rng: &mut R, nvars: usize, cap: u32, shape: JetShape) -> JetPoly {
    random_poly_filtered(rng, nvars, cap, shape, |_| true)
}

pub fn random_poly_filtered<R: Rng>(
    rng: &mut R,
    nvars: usize,
    cap: u32,
    shape: JetShape,
    keep: impl Fn(&Monomial) -> bool,
) -> JetPoly {
    let mut p = JetPoly::zero(nvars, cap);
    for d in shape.min_degree..=shape.max_degree.min(cap) {
        for m in Monomial::all_of_degree(nvars, d) {
            if keep(&m) && rng.gen_bool(shape.density) {
                p.add_term(m, small_rational(rng));
            }
        }
    }
    p
}

/// Random `Id + χ` with `χ` supported in degrees `[2, max_degree]`.
pub fn random_diffeo<R: Rng>(
    rng: &mut R,
    n: usize,
    cap: u32,
    max_degree: u32,
    density: f64,
) -> JetDiffeo {
    let shape = JetShape::new(2, max_degree, density);
    let disp = (0..n).map(|_| random_poly(rng, n, cap, shape)).collect();
    JetDiffeo::from_displacement(disp).expect("degree >= 2 by construction")
}

pub fn random_bivector<R: Rng>(rng: &mut R, n: usize, cap: u32, shape: JetShape) -> JetBivector {
    JetBivector::from_fn(n, cap, |_, _| random_poly(rng, n, cap, shape))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let a = random_poly(&mut rng(7), 3, 4, JetShape::new(0, 4, 0.3));
        let b = random_poly(&mut rng(7), 3, 4, JetShape::new(0, 4, 0.3));
        assert_eq!(a, b);
        let d = random_diffeo(&mut rng(1), 3, 4, 3, 0.5);
        assert!(d.displacement().iter().all(|p| p.min_degree().map_or(true, |k| k >= 2)));
    }
}
