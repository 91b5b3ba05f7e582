use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, AddAssign, Mul};

/// Polynomial in `U` over the two-element field, stored as the set of
/// exponents carrying a nonzero coefficient.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct F2UPoly {
    exponents: BTreeSet<u32>,
}

impl F2UPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    pub fn monomial(e: u32) -> Self {
        let mut exponents = BTreeSet::new();
        exponents.insert(e);
        F2UPoly { exponents }
    }

    pub fn from_exponents<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        let mut p = F2UPoly::zero();
        for e in iter {
            p.toggle(e);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponents(&self) -> impl Iterator<Item = u32> + '_ {
        self.exponents.iter().copied()
    }

    pub fn term_count(&self) -> usize {
        self.exponents.len()
    }

    pub fn min_exponent(&self) -> Option<u32> {
        self.exponents.iter().next().copied()
    }

    pub fn degree(&self) -> Option<u32> {
        self.exponents.iter().next_back().copied()
    }

    /// Adds `U^e` (characteristic two: adding an existing term removes it).
    pub fn toggle(&mut self, e: u32) {
        if !self.exponents.remove(&e) {
            self.exponents.insert(e);
        }
    }

    /// Multiplication by `U^k`.
    pub fn shift(&self, k: u32) -> Self {
        F2UPoly {
            exponents: self.exponents.iter().map(|e| e + k).collect(),
        }
    }
}

impl AddAssign<&F2UPoly> for F2UPoly {
    fn add_assign(&mut self, rhs: &F2UPoly) {
        for e in rhs.exponents() {
            self.toggle(e);
        }
    }
}

impl Add for &F2UPoly {
    type Output = F2UPoly;
    fn add(self, rhs: &F2UPoly) -> F2UPoly {
        let exponents = self
            .exponents
            .symmetric_difference(&rhs.exponents)
            .copied()
            .collect();
        F2UPoly { exponents }
    }
}

impl Mul for &F2UPoly {
    type Output = F2UPoly;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &F2UPoly) -> F2UPoly {
        let mut out = F2UPoly::zero();
        for a in self.exponents() {
            for b in rhs.exponents() {
                out.toggle(a + b);
            }
        }
        out
    }
}

impl fmt::Debug for F2UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .exponents()
            .map(|e| match e {
                0 => "1".to_string(),
                1 => "U".to_string(),
                _ => format!("U^{e}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly() -> impl Strategy<Value = F2UPoly> {
        prop::collection::vec(0u32..12, 0..6).prop_map(F2UPoly::from_exponents)
    }

    #[test]
    fn toggling_cancels() {
        let p = F2UPoly::from_exponents([1, 3, 1]);
        assert_eq!(p, F2UPoly::monomial(3));
        assert_eq!(format!("{p:?}"), "U^3");
    }

    #[test]
    fn square_of_binomial() {
        // (1 + U)^2 = 1 + U^2 in characteristic two
        let p = F2UPoly::from_exponents([0, 1]);
        assert_eq!(&p * &p, F2UPoly::from_exponents([0, 2]));
    }

    proptest! {
        #[test]
        fn self_sum_vanishes(p in poly()) {
            prop_assert!((&p + &p).is_zero());
        }

        #[test]
        fn shift_is_multiplication_by_monomial(p in poly(), k in 0u32..5) {
            prop_assert_eq!(p.shift(k), &p * &F2UPoly::monomial(k));
        }

        #[test]
        fn multiplication_distributes(a in poly(), b in poly(), c in poly()) {
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }
    }
}
