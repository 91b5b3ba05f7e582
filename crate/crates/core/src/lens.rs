//! d-invariants of lens spaces `L(p, q)` and their spin^c labels.

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use crate::algebra::Rational;
use crate::error::{Error, Result};

/// A spin^c structure `[value]` on a space with `H₁ = Z/modulus`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SpincLabel {
    pub value: u64,
    pub modulus: u64,
}

impl SpincLabel {
    /// `[value mod modulus]`.
    pub fn new(value: i128, modulus: u64) -> Self {
        SpincLabel {
            value: value.rem_euclid(modulus as i128) as u64,
            modulus,
        }
    }
}

pub(crate) fn check_coprime(p: u64, q: u64) -> Result<()> {
    if p == 0 || q == 0 {
        return Err(Error::Validation(format!(
            "parameters must be positive, got ({p}, {q})"
        )));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::Validation(format!("gcd({p}, {q}) ≠ 1")));
    }
    Ok(())
}

fn check_label(p: u64, i: u64) -> Result<()> {
    if i >= p {
        return Err(Error::Usage(format!(
            "spin^c label {i} out of range 0..{p}"
        )));
    }
    Ok(())
}

/// `d(L(p, q), [i])` by the Euclidean recursion
/// `d(L(p,q),i) = ((2i+1-p-q)² - pq)/(4pq) - d(L(q, p mod q), i mod q)`,
/// with `q` first reduced mod `p` and `d(L(1,0),0) = 0`.
pub fn lens_d(p: u64, q: u64, i: u64) -> Result<Rational> {
    check_coprime(p, q)?;
    check_label(p, i)?;
    Ok(recurse(p, q % p, i))
}

fn recurse(p: u64, q: u64, i: u64) -> Rational {
    if p == 1 {
        return Rational::zero();
    }
    let (p128, q128, i128) = (p as i128, q as i128, i as i128);
    let t = 2 * i128 + 1 - p128 - q128;
    let num = BigInt::from(t) * BigInt::from(t) - BigInt::from(p128 * q128);
    let den = BigInt::from(4 * p128 * q128);
    let head = Rational::from_bigints(num, den).expect("nonzero denominator");
    head - recurse(q, p % q, i % q)
}

/// `d(L(p, q), [i])` for every label `0 ≤ i < p`.
pub fn lens_d_all(p: u64, q: u64) -> Result<Vec<Rational>> {
    check_coprime(p, q)?;
    Ok((0..p).map(|i| recurse(p, q % p, i)).collect())
}

/// Conjugation `J([i]) = [p + q - 1 - i]`.
pub fn conj_spinc(p: u64, q: u64, i: u64) -> Result<SpincLabel> {
    check_coprime(p, q)?;
    check_label(p, i)?;
    Ok(SpincLabel::new(p as i128 + q as i128 - 1 - i as i128, p))
}

/// The fixed points of conjugation, in increasing order.
pub fn selfconj_spinc(p: u64, q: u64) -> Result<Vec<SpincLabel>> {
    check_coprime(p, q)?;
    let (p_i, q_i) = (p as i128, q as i128);
    let mut out = Vec::new();
    if q % 2 == 1 {
        out.push(SpincLabel::new((q_i - 1) / 2, p));
    }
    if p.is_multiple_of(2) || q.is_multiple_of(2) {
        out.push(SpincLabel::new((p_i + q_i - 1) / 2, p));
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use proptest::prelude::*;

    fn label(value: u64, modulus: u64) -> SpincLabel {
        SpincLabel { value, modulus }
    }

    #[test]
    fn small_values() {
        assert_eq!(lens_d(1, 1, 0).unwrap(), rat(0, 1));
        assert_eq!(lens_d(2, 1, 0).unwrap(), rat(1, 4));
        assert_eq!(lens_d(2, 1, 1).unwrap(), rat(-1, 4));
        assert_eq!(lens_d(3, 2, 1).unwrap(), rat(1, 6));
        assert_eq!(lens_d(3, 2, 0).unwrap(), rat(1, 6));
        assert_eq!(lens_d(3, 2, 2).unwrap(), rat(-1, 2));
        assert_eq!(lens_d(5, 3, 1).unwrap(), rat(0, 1));
    }

    #[test]
    fn q_reduced_mod_p() {
        assert_eq!(lens_d(3, 5, 1).unwrap(), lens_d(3, 2, 1).unwrap());
        assert_eq!(lens_d_all(5, 13).unwrap(), lens_d_all(5, 3).unwrap());
    }

    #[test]
    fn errors() {
        assert!(matches!(lens_d(4, 2, 0), Err(Error::Validation(_))));
        assert!(matches!(lens_d(0, 1, 0), Err(Error::Validation(_))));
        assert!(matches!(lens_d(3, 2, 3), Err(Error::Usage(_))));
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(conj_spinc(3, 2, 1).unwrap(), label(0, 3));
        assert_eq!(conj_spinc(3, 2, 2).unwrap(), label(2, 3));
        assert_eq!(conj_spinc(2, 1, 0).unwrap(), label(0, 2));
        assert_eq!(conj_spinc(2, 1, 1).unwrap(), label(1, 2));
    }

    #[test]
    fn self_conjugate_examples() {
        assert_eq!(selfconj_spinc(3, 5).unwrap(), vec![label(2, 3)]);
        assert_eq!(
            selfconj_spinc(2, 1).unwrap(),
            vec![label(0, 2), label(1, 2)]
        );
        assert_eq!(selfconj_spinc(3, 2).unwrap(), vec![label(2, 3)]);
        assert_eq!(selfconj_spinc(1, 1).unwrap(), vec![label(0, 1)]);
    }

    #[test]
    fn closed_form_for_q_one() {
        // one recursion step: ((2i - p)² - p) / 4p
        for p in 1..=50u64 {
            for i in 0..p {
                let t = 2 * i as i64 - p as i64;
                let expected = rat(t * t - p as i64, 4 * p as i64);
                assert_eq!(lens_d(p, 1, i).unwrap(), expected, "p={p} i={i}");
            }
        }
    }

    #[test]
    fn fixed_points_match_self_conjugate_list() {
        for p in 1..=30u64 {
            for q in 1..=30u64 {
                if p.gcd(&q) != 1 {
                    continue;
                }
                let fixed: Vec<SpincLabel> = (0..p)
                    .map(|i| conj_spinc(p, q, i).unwrap())
                    .enumerate()
                    .filter(|(i, j)| j.value == *i as u64)
                    .map(|(_, j)| j)
                    .collect();
                assert_eq!(fixed, selfconj_spinc(p, q).unwrap(), "({p},{q})");
            }
        }
    }

    proptest! {
        #[test]
        fn conjugation_symmetry(p in 1u64..60, q in 1u64..60) {
            prop_assume!(p.gcd(&q) == 1);
            let all = lens_d_all(p, q).unwrap();
            for i in 0..p {
                let j = conj_spinc(p, q, i).unwrap();
                prop_assert_eq!(&all[i as usize], &all[j.value as usize]);
                prop_assert_eq!(conj_spinc(p, q, j.value).unwrap().value, i);
            }
        }
    }
}
