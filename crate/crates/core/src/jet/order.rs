use std::fmt;

use serde::{Serialize, Serializer};

use super::{JetBivector, JetPoly, JetTrivector, JetVectorField};

/// Vanishing order at the origin: lowest degree with a nonzero coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(k) => Some(k),
            Order::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Order::Infinite
    }

    /// Treats every order above `cap` as infinite.
    pub fn beyond(self, cap: u32) -> bool {
        match self {
            Order::Finite(k) => k > cap,
            Order::Infinite => true,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Order::Finite(k) => s.serialize_u32(*k),
            Order::Infinite => s.serialize_str("inf"),
        }
    }
}

pub trait VanishingOrder {
    fn vanishing_order(&self) -> Order;
}

pub fn vanishing_order<T: VanishingOrder + ?Sized>(x: &T) -> Order {
    x.vanishing_order()
}

impl VanishingOrder for JetPoly {
    fn vanishing_order(&self) -> Order {
        self.min_degree().map_or(Order::Infinite, Order::Finite)
    }
}

impl<T: VanishingOrder> VanishingOrder for [T] {
    fn vanishing_order(&self) -> Order {
        self.iter()
            .map(VanishingOrder::vanishing_order)
            .min()
            .unwrap_or(Order::Infinite)
    }
}

impl<T: VanishingOrder> VanishingOrder for Vec<T> {
    fn vanishing_order(&self) -> Order {
        self.as_slice().vanishing_order()
    }
}

impl VanishingOrder for JetVectorField {
    fn vanishing_order(&self) -> Order {
        self.components().vanishing_order()
    }
}

impl VanishingOrder for JetBivector {
    fn vanishing_order(&self) -> Order {
        self.stored().vanishing_order()
    }
}

impl VanishingOrder for JetTrivector {
    fn vanishing_order(&self) -> Order {
        self.stored().vanishing_order()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::Monomial;
    use crate::rational::int;

    #[test]
    fn orders() {
        assert_eq!(JetPoly::zero(3, 4).vanishing_order(), Order::Infinite);
        let p = JetPoly::from_terms(
            3,
            4,
            [
                (Monomial::from_exponents(&[1, 1, 0]), int(1)),
                (Monomial::from_exponents(&[0, 0, 3]), int(1)),
            ],
        )
        .unwrap();
        assert_eq!(p.vanishing_order(), Order::Finite(2));
        assert!(Order::Finite(100) < Order::Infinite);
        assert!(Order::Finite(9).beyond(8));
    }
}
