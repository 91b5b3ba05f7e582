//! Alexander polynomials and `V_s` sequences of torus knots and their cables.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lens::check_coprime;

/// Symmetric Laurent polynomial with integer coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct AlexanderPoly {
    coefficients: BTreeMap<i64, i64>,
}

impl AlexanderPoly {
    /// From `exponent → coefficient` pairs; zero coefficients are dropped.
    pub fn new(coefficients: impl IntoIterator<Item = (i64, i64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (e, c) in coefficients {
            *map.entry(e).or_insert(0) += c;
        }
        map.retain(|_, c| *c != 0);
        let p = AlexanderPoly { coefficients: map };
        if let Some((&e, _)) = p
            .coefficients
            .iter()
            .find(|(&e, &c)| p.coefficient(-e) != c)
        {
            return Err(Error::Validation(format!(
                "Alexander polynomial not symmetric at t^{e}"
            )));
        }
        Ok(p)
    }

    pub fn one() -> Self {
        AlexanderPoly::new([(0, 1)]).expect("symmetric")
    }

    pub fn coefficient(&self, e: i64) -> i64 {
        self.coefficients.get(&e).copied().unwrap_or(0)
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.coefficients.iter().map(|(&e, &c)| (e, c))
    }

    /// Top exponent; 0 for constants.
    pub fn degree(&self) -> u64 {
        self.coefficients
            .keys()
            .next_back()
            .map_or(0, |&e| e.max(0) as u64)
    }

    pub fn eval_at_one(&self) -> i64 {
        self.coefficients.values().sum()
    }

    /// `Δ(t^k)`.
    pub fn substitute_power(&self, k: u64) -> AlexanderPoly {
        AlexanderPoly {
            coefficients: self
                .coefficients
                .iter()
                .map(|(&e, &c)| (e * k as i64, c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &AlexanderPoly) -> AlexanderPoly {
        let mut out: BTreeMap<i64, i64> = BTreeMap::new();
        for (a, x) in self.coefficients() {
            for (b, y) in other.coefficients() {
                *out.entry(a + b).or_insert(0) += x * y;
            }
        }
        out.retain(|_, c| *c != 0);
        AlexanderPoly { coefficients: out }
    }
}

impl fmt::Debug for AlexanderPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coefficients
            .iter()
            .rev()
            .map(|(e, c)| format!("{c}t^{e}"))
            .collect();
        write!(f, "Δ({})", terms.join(" + "))
    }
}

/// Non-increasing `V_0, V_1, …, V_g` ending in 0; later entries are 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct VSequence {
    values: Vec<u64>,
}

impl VSequence {
    pub fn new(mut values: Vec<u64>) -> Result<Self> {
        if values.is_empty() {
            values.push(0);
        }
        for (s, w) in values.windows(2).enumerate() {
            if w[0] < w[1] || w[0] - w[1] > 1 {
                return Err(Error::Validation(format!(
                    "V_{s} = {}, V_{} = {}: steps must be 0 or 1 downward",
                    w[0],
                    s + 1,
                    w[1]
                )));
            }
        }
        if let Some(&last) = values.last() {
            if last != 0 {
                return Err(Error::Validation(format!(
                    "V sequence must end in 0, ends in {last}"
                )));
            }
        }
        while values.len() > 1 && values[values.len() - 2] == 0 {
            values.pop();
        }
        Ok(VSequence { values })
    }

    pub fn zero() -> Self {
        VSequence { values: vec![0] }
    }

    /// `V_s`, with `V_s = 0` past the stored entries.
    pub fn get(&self, s: u64) -> u64 {
        usize::try_from(s)
            .ok()
            .and_then(|s| self.values.get(s))
            .copied()
            .unwrap_or(0)
    }

    pub fn v0(&self) -> u64 {
        self.values[0]
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }
}

impl TryFrom<Vec<u64>> for VSequence {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        VSequence::new(v)
    }
}

impl From<VSequence> for Vec<u64> {
    fn from(v: VSequence) -> Vec<u64> {
        v.values
    }
}

/// Multiplies dense ascending coefficient vectors.
fn dense_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `t^k - 1`, ascending.
fn t_power_minus_one(k: u64) -> Vec<i64> {
    let mut v = vec![0; k as usize + 1];
    v[0] = -1;
    v[k as usize] = 1;
    v
}

/// Exact division by a monic divisor; errors on a nonzero remainder.
fn dense_div(num: &[i64], den: &[i64]) -> Result<Vec<i64>> {
    let mut rem = num.to_vec();
    let dl = den.len();
    if rem.len() < dl {
        return Err(Error::Internal(
            "division by a polynomial of higher degree".into(),
        ));
    }
    let mut quot = vec![0; rem.len() - dl + 1];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dl - 1];
        quot[k] = c;
        for (j, d) in den.iter().enumerate() {
            rem[k + j] -= c * d;
        }
    }
    if rem.iter().any(|&r| r != 0) {
        return Err(Error::Internal("inexact polynomial division".into()));
    }
    Ok(quot)
}

/// `Δ_{T(p,q)} = (t^{pq} - 1)(t - 1) / ((t^p - 1)(t^q - 1))`, symmetrized.
pub fn alexander_torus(p: u64, q: u64) -> Result<AlexanderPoly> {
    check_coprime(p, q)?;
    if p == 1 || q == 1 {
        return Ok(AlexanderPoly::one());
    }
    let num = dense_mul(&t_power_minus_one(p * q), &t_power_minus_one(1));
    let den = dense_mul(&t_power_minus_one(p), &t_power_minus_one(q));
    let quot = dense_div(&num, &den)?;
    let g = ((p - 1) * (q - 1) / 2) as i64;
    AlexanderPoly::new(quot.into_iter().enumerate().map(|(i, c)| (i as i64 - g, c)))
}

/// `t_s = Σ_{j≥1} j · a_{s+j}`.
pub fn torsion_coeff(delta: &AlexanderPoly, s: u64) -> i64 {
    let s = s as i64;
    delta
        .coefficients()
        .filter(|&(e, _)| e > s)
        .map(|(e, c)| (e - s) * c)
        .sum()
}

/// Torsion coefficients `t_0, …, t_g` as a V sequence; errors if they do not
/// form one, which happens for knots that are not L-space knots.
pub fn vs_from_alexander(delta: &AlexanderPoly) -> Result<VSequence> {
    let values = (0..=delta.degree())
        .map(|s| {
            let t = torsion_coeff(delta, s);
            u64::try_from(t)
                .map_err(|_| Error::Validation(format!("negative torsion coefficient t_{s} = {t}")))
        })
        .collect::<Result<Vec<_>>>()?;
    VSequence::new(values)
}

/// The symmetric polynomial whose torsion coefficients are `v`: for `s ≥ 1`,
/// `a_s = V_{s-1} - 2V_s + V_{s+1}`, and `a_0` normalizes `Δ(1) = 1`.
pub fn alexander_from_vs(v: &VSequence) -> AlexanderPoly {
    let n = v.values().len() as u64;
    let mut coefficients = Vec::new();
    let mut total = 0;
    for s in 1..=n {
        let a = v.get(s - 1) as i64 - 2 * v.get(s) as i64 + v.get(s + 1) as i64;
        total += a;
        coefficients.push((s as i64, a));
        coefficients.push((-(s as i64), a));
    }
    coefficients.push((0, 1 - 2 * total));
    AlexanderPoly::new(coefficients).expect("symmetric by construction")
}

/// `V_s(T(p,q))` for `0 ≤ s ≤ g`, as torsion coefficients of `Δ_{T(p,q)}`.
pub fn torus_vs(p: u64, q: u64) -> Result<VSequence> {
    vs_from_alexander(&alexander_torus(p, q)?)
}

/// Number of gaps `k ∉ ⟨p, q⟩` with `k ≥ s + g`, `g = (p-1)(q-1)/2`.
pub fn gap_v(p: u64, q: u64, s: u64) -> Result<u64> {
    check_coprime(p, q)?;
    if p < 2 || q < 2 {
        return Err(Error::Validation(format!(
            "gap count needs p, q ≥ 2, got ({p}, {q})"
        )));
    }
    let g = (p - 1) * (q - 1) / 2;
    // the largest gap is pq - p - q = 2g - 1
    let bound = 2 * g;
    let mut in_semigroup = vec![false; bound as usize + 1];
    for a in (0..=bound).step_by(p as usize) {
        for b in (a..=bound).step_by(q as usize) {
            in_semigroup[b as usize] = true;
        }
    }
    Ok((s + g..bound)
        .filter(|&k| !in_semigroup[k as usize])
        .count() as u64)
}

/// `Δ_{K_{p,q}}(t) = Δ_K(t^p) · Δ_{T(p,q)}(t)`.
pub fn cable_alexander(delta_k: &AlexanderPoly, p: u64, q: u64) -> Result<AlexanderPoly> {
    Ok(delta_k.substitute_power(p).mul(&alexander_torus(p, q)?))
}

/// Whether the `(p,q)`-cable of an L-space knot of genus `g_k` is again an
/// L-space knot: `q ≥ p(2g_k - 1)`.
pub fn lspace_cable_check(g_k: u64, p: u64, q: u64) -> bool {
    q as i128 >= p as i128 * (2 * g_k as i128 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use proptest::prelude::*;

    #[test]
    fn trefoil_polynomial() {
        let d = alexander_torus(2, 3).unwrap();
        assert_eq!(d, AlexanderPoly::new([(1, 1), (0, -1), (-1, 1)]).unwrap());
        assert_eq!(d.degree(), 1);
        assert_eq!(torsion_coeff(&d, 0), 1);
    }

    #[test]
    fn t34_polynomial() {
        let d = alexander_torus(3, 4).unwrap();
        assert_eq!(
            d,
            AlexanderPoly::new([(3, 1), (2, -1), (0, 1), (-2, -1), (-3, 1)]).unwrap()
        );
        assert_eq!(torsion_coeff(&d, 0), 1);
        assert_eq!(torsion_coeff(&d, 7), 0);
    }

    #[test]
    fn unknot_cases() {
        assert_eq!(alexander_torus(1, 9).unwrap(), AlexanderPoly::one());
        assert_eq!(torus_vs(1, 9).unwrap().values(), &[0]);
        assert_eq!(torus_vs(5, 1).unwrap().values(), &[0]);
    }

    #[test]
    fn v_sequences() {
        assert_eq!(torus_vs(3, 2).unwrap().v0(), 1);
        assert_eq!(torus_vs(2, 3).unwrap().values(), &[1, 0]);
        assert_eq!(torus_vs(3, 5).unwrap().values(), &[2, 1, 1, 1, 0]);
        assert_eq!(torus_vs(2, 7).unwrap().v0(), 2);
    }

    #[test]
    fn gap_counts() {
        assert_eq!(gap_v(2, 3, 0).unwrap(), 1);
        assert_eq!(gap_v(3, 5, 0).unwrap(), 2);
        assert_eq!(gap_v(3, 5, 4).unwrap(), 0);
        assert!(matches!(gap_v(1, 5, 0), Err(Error::Validation(_))));
        assert!(matches!(gap_v(4, 6, 0), Err(Error::Validation(_))));
    }

    #[test]
    fn non_coprime_rejected() {
        assert!(matches!(alexander_torus(4, 6), Err(Error::Validation(_))));
        assert!(matches!(torus_vs(3, 9), Err(Error::Validation(_))));
    }

    #[test]
    fn cables() {
        let tref = alexander_torus(2, 3).unwrap();
        assert_eq!(
            cable_alexander(&AlexanderPoly::one(), 3, 4).unwrap(),
            alexander_torus(3, 4).unwrap()
        );
        assert_eq!(cable_alexander(&tref, 1, 5).unwrap(), tref);
        let c = cable_alexander(&tref, 2, 7).unwrap();
        assert_eq!(c.degree(), 5);
        assert_eq!(c.eval_at_one(), 1);
        assert!(vs_from_alexander(&c).is_ok());
    }

    #[test]
    fn regime_check() {
        assert!(lspace_cable_check(0, 2, 1));
        assert!(lspace_cable_check(1, 2, 7));
        assert!(!lspace_cable_check(1, 3, 1));
    }

    #[test]
    fn v_sequence_validation() {
        assert!(VSequence::new(vec![2, 0]).is_err());
        assert!(VSequence::new(vec![0, 1, 0]).is_err());
        assert!(VSequence::new(vec![1]).is_err());
        assert_eq!(VSequence::new(vec![1, 0, 0, 0]).unwrap().values(), &[1, 0]);
        let v: VSequence = serde_json::from_str("[2,1,1,0]").unwrap();
        assert_eq!(v.get(2), 1);
        assert_eq!(v.get(100), 0);
        assert!(serde_json::from_str::<VSequence>("[0,1]").is_err());
    }

    #[test]
    fn reconstruction_from_v() {
        for (p, q) in [(2, 3), (3, 4), (3, 5), (5, 7), (4, 9)] {
            let d = alexander_torus(p, q).unwrap();
            assert_eq!(alexander_from_vs(&torus_vs(p, q).unwrap()), d, "({p},{q})");
        }
        assert_eq!(alexander_from_vs(&VSequence::zero()), AlexanderPoly::one());
    }

    proptest! {
        #[test]
        fn torus_sequences_are_valid_and_symmetric(p in 1u64..25, q in 1u64..25) {
            prop_assume!(p.gcd(&q) == 1);
            let v = torus_vs(p, q).unwrap();
            prop_assert_eq!(&v, &torus_vs(q, p).unwrap());
            let d = alexander_torus(p, q).unwrap();
            prop_assert_eq!(d.degree(), (p - 1) * (q - 1) / 2);
            prop_assert_eq!(d.eval_at_one(), 1);
        }

        #[test]
        fn cable_degree(p in 1u64..6, q in 1u64..12, a in 2u64..5, b in 3u64..8) {
            prop_assume!(p.gcd(&q) == 1 && a.gcd(&b) == 1);
            let k = alexander_torus(a, b).unwrap();
            let c = cable_alexander(&k, p, q).unwrap();
            prop_assert_eq!(c.degree(), p * k.degree() + (p - 1) * (q - 1) / 2);
        }
    }
}
