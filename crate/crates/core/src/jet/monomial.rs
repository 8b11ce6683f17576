use std::cmp::Ordering;
use std::fmt;

/// Hard limit on the number of variables a jet can carry.
pub const MAX_VARS: usize = 16;

/// Exponent vector with cached total degree.
///
/// Ordering is graded: total degree first, then lexicographic with larger
/// powers of earlier variables first (`x1² < x1x2 < x2²`).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    deg: u8,
    exps: [u8; MAX_VARS],
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        deg: 0,
        exps: [0; MAX_VARS],
    };

    pub fn var(i: usize) -> Self {
        let mut m = Self::ONE;
        m.exps[i] = 1;
        m.deg = 1;
        m
    }

    /// Panics if `exps` is longer than [`MAX_VARS`] or the degree overflows.
    pub fn from_exponents(exps: &[u32]) -> Self {
        assert!(exps.len() <= MAX_VARS, "too many variables");
        let mut m = Self::ONE;
        let mut deg = 0u32;
        for (slot, &e) in m.exps.iter_mut().zip(exps) {
            *slot = u8::try_from(e).expect("exponent too large");
            deg += e;
        }
        m.deg = u8::try_from(deg).expect("degree too large");
        m
    }

    pub fn degree(&self) -> u32 {
        u32::from(self.deg)
    }

    pub fn exp(&self, i: usize) -> u32 {
        u32::from(self.exps[i])
    }

    pub fn exponents(&self, nvars: usize) -> Vec<u32> {
        self.exps[..nvars].iter().map(|&e| u32::from(e)).collect()
    }

    /// Degree restricted to the variables in `vars`.
    pub fn degree_in(&self, vars: std::ops::Range<usize>) -> u32 {
        self.exps[vars].iter().map(|&e| u32::from(e)).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = *self;
        for (a, b) in m.exps.iter_mut().zip(&other.exps) {
            *a += b;
        }
        m.deg += other.deg;
        m
    }

    /// `self / z_i` if `z_i` divides `self`.
    pub fn div_var(&self, i: usize) -> Option<Monomial> {
        if self.exps[i] == 0 {
            return None;
        }
        let mut m = *self;
        m.exps[i] -= 1;
        m.deg -= 1;
        Some(m)
    }

    pub fn mul_var(&self, i: usize) -> Monomial {
        let mut m = *self;
        m.exps[i] += 1;
        m.deg += 1;
        m
    }

    /// Index of the first variable with a positive exponent.
    pub fn first_var(&self) -> Option<usize> {
        self.exps.iter().position(|&e| e > 0)
    }

    pub fn max_var(&self) -> Option<usize> {
        self.exps.iter().rposition(|&e| e > 0)
    }

    /// All monomials in `nvars` variables with total degree exactly `d`, in
    /// ascending order.
    pub fn all_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        fn rec(nvars: usize, i: usize, left: u32, cur: &mut [u32], out: &mut Vec<Monomial>) {
            if i + 1 == nvars {
                cur[i] = left;
                out.push(Monomial::from_exponents(cur));
                return;
            }
            for e in (0..=left).rev() {
                cur[i] = e;
                rec(nvars, i + 1, left - e, cur, out);
            }
        }
        if nvars == 0 {
            return if d == 0 { vec![Monomial::ONE] } else { vec![] };
        }
        let mut out = Vec::new();
        rec(nvars, 0, d, &mut vec![0; nvars], &mut out);
        out
    }

    pub fn all_up_to(nvars: usize, d: u32) -> Vec<Monomial> {
        (0..=d).flat_map(|k| Self::all_of_degree(nvars, k)).collect()
    }

    /// `α!` as an integer.
    pub fn factorial(&self) -> u128 {
        self.exps
            .iter()
            .map(|&e| (1..=u128::from(e)).product::<u128>())
            .product()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg
            .cmp(&other.deg)
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.deg == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "z{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_order() {
        let x1sq = Monomial::from_exponents(&[2, 0]);
        let x1x2 = Monomial::from_exponents(&[1, 1]);
        let x2sq = Monomial::from_exponents(&[0, 2]);
        let x1 = Monomial::var(0);
        assert!(x1 < x1sq && x1sq < x1x2 && x1x2 < x2sq);
        assert_eq!(Monomial::all_of_degree(2, 2), vec![x1sq, x1x2, x2sq]);
    }

    #[test]
    fn counts() {
        assert_eq!(Monomial::all_up_to(3, 8).len(), 165);
        assert_eq!(Monomial::all_of_degree(6, 6).len(), 462);
        assert_eq!(Monomial::all_of_degree(0, 0), vec![Monomial::ONE]);
    }

    #[test]
    fn arithmetic() {
        let a = Monomial::from_exponents(&[1, 2, 0]);
        let b = Monomial::from_exponents(&[0, 1, 3]);
        let p = a.mul(&b);
        assert_eq!(p.exponents(3), vec![1, 3, 3]);
        assert_eq!(p.degree(), 7);
        assert_eq!(a.div_var(2), None);
        assert_eq!(a.div_var(1).unwrap().exponents(3), vec![1, 1, 0]);
        assert_eq!(p.factorial(), 36);
        assert_eq!(a.to_string(), "z1*z2^2");
    }
}
