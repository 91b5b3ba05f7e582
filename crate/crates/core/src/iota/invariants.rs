//! The correction terms `d`, `d̲` and `d̄` of an iota-complex.
//!
//! Each existence question is asked inside finitely many graded pieces and
//! answered by F₂ linear algebra. A homogeneous cycle `c` at grading `g` is
//! non-U-torsion iff `U^N c` is not a boundary, where `N` is the torsion
//! exponent of homology; in the bit model `U^N c` is the same vector viewed
//! in the piece at `g - 2N`.

use serde::Serialize;

use crate::algebra::{subspace_not_contained, BitVector, EchelonBasis, F2Matrix, Rational};
use crate::error::{Error, Result};

use super::complex::{Chain, IotaComplex};
use super::model::ValidatedIota;

/// The three correction terms of an iota-complex; `d_lower ≤ d ≤ d_upper`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DResults {
    pub d: Rational,
    pub d_lower: Rational,
    pub d_upper: Rational,
}

impl DResults {
    pub(crate) fn checked(d: Rational, d_lower: Rational, d_upper: Rational) -> Result<Self> {
        if !(d_lower <= d && d <= d_upper) {
            return Err(Error::Internal(format!(
                "d_lower ≤ d ≤ d_upper violated: ({d_lower}, {d}, {d_upper})"
            )));
        }
        Ok(DResults {
            d,
            d_lower,
            d_upper,
        })
    }
}

/// Search bounds for `d̲` and `d̄`.
///
/// With `scale = 1` the `m`-loop of `d̄` runs to `N + n` and the grading
/// window reaches `2N + 2` below `d`; larger scales multiply both and must
/// never change an answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    pub scale: u32,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { scale: 1 }
    }
}

impl SearchLimits {
    pub fn m_max(&self, c: &ValidatedIota) -> u32 {
        self.scale * (c.summary().torsion_exponent + c.len() as u32)
    }

    pub fn window_floor(&self, c: &ValidatedIota) -> Rational {
        let depth = self.scale as i64 * (2 * c.summary().torsion_exponent as i64 + 2);
        &c.summary().free_grading - &Rational::integer(depth)
    }
}

/// A cycle `a` with `(id + ι)a = ∂b` whose class is non-U-torsion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerWitness {
    pub grading: Rational,
    pub a: Chain,
    pub b: Chain,
}

/// A triple `(x, y, z)` with `∂y = (id + ι)x`, `∂z = U^m x` and
/// `U^m y + (id + ι)z` non-U-torsion; its value is `gr(y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpperWitness {
    pub value: Rational,
    pub m: u32,
    pub x: Chain,
    pub y: Chain,
    pub z: Chain,
}

impl ValidatedIota {
    pub fn d_invariant(&self) -> Rational {
        self.summary().free_grading.clone()
    }

    /// Non-U-torsion test for a cycle `c` in the piece at grading `g`.
    pub fn is_nontorsion(&self, c: &BitVector, g: &Rational) -> bool {
        let basis = self.torsion_test_basis(g);
        !basis.contains(c)
    }

    fn torsion_test_basis(&self, g: &Rational) -> EchelonBasis {
        let low = g - &Rational::integer(2 * self.summary().torsion_exponent as i64);
        let mut basis = EchelonBasis::new(self.len());
        for b in self.boundaries(&low) {
            basis.insert(&b).expect("same length");
        }
        basis
    }

    /// Gradings `d + 2j` from the largest one `≤ top` down to `floor`.
    fn ladder(&self, top: &Rational, floor: &Rational) -> Vec<Rational> {
        let d = &self.summary().free_grading;
        let j = ((top - d) / Rational::integer(2)).floor();
        let mut g = d + &(Rational::from(j) * Rational::integer(2));
        let mut out = Vec::new();
        while &g >= floor {
            out.push(g.clone());
            g -= &Rational::integer(2);
        }
        out
    }

    pub fn d_lower(&self) -> Result<Rational> {
        Ok(self.d_lower_with(SearchLimits::default())?.grading)
    }

    pub fn d_lower_with(&self, limits: SearchLimits) -> Result<LowerWitness> {
        let n = self.len();
        let floor = limits.window_floor(self);
        for g in self.ladder(&self.max_grading(), &floor) {
            if let Some(w) = self.lower_witness_at(&g)? {
                return Ok(w);
            }
        }
        Err(Error::Internal(format!(
            "no d_lower witness above {floor} ({n} generators)"
        )))
    }

    fn lower_witness_at(&self, g: &Rational) -> Result<Option<LowerWitness>> {
        let n = self.len();
        let a_slots: Vec<usize> = self.mask(g).ones().collect();
        let b_slots: Vec<usize> = self.mask(&(g + &Rational::integer(1))).ones().collect();
        if a_slots.is_empty() {
            return Ok(None);
        }
        // unknowns (a, b); equations ∂a = 0 and (id + ι)a + ∂b = 0
        let mut cols = Vec::with_capacity(a_slots.len() + b_slots.len());
        for &j in &a_slots {
            cols.push(self.d_cols()[j].concat(&self.one_plus_iota_cols()[j]));
        }
        for &j in &b_slots {
            cols.push(BitVector::zeros(n).concat(&self.d_cols()[j]));
        }
        let system = F2Matrix::from_columns(2 * n, &cols)?;
        let kernel = system.nullspace();
        let project = |v: &BitVector, slots: &[usize], offset: usize| {
            BitVector::from_indices(
                n,
                slots
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| v.get(offset + k))
                    .map(|(_, &j)| j),
            )
        };
        let a_parts: Vec<BitVector> = kernel.iter().map(|v| project(v, &a_slots, 0)).collect();
        let torsion =
            self.boundaries(&(g - &Rational::integer(2 * self.summary().torsion_exponent as i64)));
        let Some(a) = subspace_not_contained(&a_parts, &torsion)? else {
            return Ok(None);
        };
        let k = a_parts
            .iter()
            .position(|p| *p == a)
            .expect("returned from the list");
        let b = project(&kernel[k], &b_slots, a_slots.len());
        Ok(Some(LowerWitness {
            grading: g.clone(),
            a: self.to_chain(&a, g),
            b: self.to_chain(&b, &(g + &Rational::integer(1))),
        }))
    }

    pub fn d_upper(&self) -> Result<Rational> {
        Ok(self.d_upper_with(SearchLimits::default())?.value)
    }

    pub fn d_upper_with(&self, limits: SearchLimits) -> Result<UpperWitness> {
        let m_max = limits.m_max(self);
        let floor = limits.window_floor(self);
        let top = self.max_grading() + Rational::integer(1);
        for v in self.ladder(&top, &floor) {
            // z ↦ Uz turns a witness for m into one for m + 1, so test the
            // largest m first and only then look for the smallest
            if self.upper_witness_at(&v, m_max)?.is_none() {
                continue;
            }
            for m in 0..=m_max {
                if let Some(w) = self.upper_witness_at(&v, m)? {
                    return Ok(w);
                }
            }
            return Err(Error::Internal(format!(
                "d_upper witness at {v} not monotone in m"
            )));
        }
        Err(Error::Internal(format!("no d_upper witness above {floor}")))
    }

    fn upper_witness_at(&self, v: &Rational, m: u32) -> Result<Option<UpperWitness>> {
        let n = self.len();
        let one = Rational::integer(1);
        let gx = v - &one;
        let gz = v - &Rational::integer(2 * m as i64);
        let x_slots: Vec<usize> = self.mask(&gx).ones().collect();
        let y_slots: Vec<usize> = self.mask(v).ones().collect();
        let z_slots: Vec<usize> = self.mask(&gz).ones().collect();
        if x_slots.is_empty() && y_slots.is_empty() {
            return Ok(None);
        }
        // unknowns (x, y, z); equations ∂y + (id + ι)x = 0 and ∂z + U^m x = 0
        let mut cols = Vec::new();
        for &j in &x_slots {
            cols.push(self.one_plus_iota_cols()[j].concat(&BitVector::from_indices(n, [j])));
        }
        for &j in &y_slots {
            cols.push(self.d_cols()[j].concat(&BitVector::zeros(n)));
        }
        for &j in &z_slots {
            cols.push(BitVector::zeros(n).concat(&self.d_cols()[j]));
        }
        let system = F2Matrix::from_columns(2 * n, &cols)?;
        let kernel = system.nullspace();

        let (nx, ny) = (x_slots.len(), y_slots.len());
        let parts = |w: &BitVector| {
            let pick = |slots: &[usize], offset: usize| {
                BitVector::from_indices(
                    n,
                    slots
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| w.get(offset + k))
                        .map(|(_, &j)| j),
                )
            };
            (
                pick(&x_slots, 0),
                pick(&y_slots, nx),
                pick(&z_slots, nx + ny),
            )
        };
        let decomposed: Vec<_> = kernel.iter().map(parts).collect();
        let survivor = |y: &BitVector, z: &BitVector| {
            let mut c = y.clone();
            c.xor_assign(&ValidatedIota::apply(self.one_plus_iota_cols(), z));
            c
        };
        let classes: Vec<BitVector> = decomposed.iter().map(|(_, y, z)| survivor(y, z)).collect();
        let torsion = self
            .boundaries(&(&gz - &Rational::integer(2 * self.summary().torsion_exponent as i64)));

        // valid triples avoid two subspaces: {(x, y) = 0} and {class torsion};
        // a space is never the union of two proper subspaces
        let nonzero_xy = decomposed
            .iter()
            .position(|(x, y, _)| !x.is_zero() || !y.is_zero());
        let Some(nonzero_xy) = nonzero_xy else {
            return Ok(None);
        };
        let Some(c) = subspace_not_contained(&classes, &torsion)? else {
            return Ok(None);
        };
        let free = classes
            .iter()
            .position(|k| *k == c)
            .expect("returned from the list");

        let mut basis = EchelonBasis::new(n);
        for t in &torsion {
            basis.insert(t)?;
        }
        let (x1, y1, z1) = &decomposed[free];
        let (x, y, z) = if !x1.is_zero() || !y1.is_zero() {
            (x1.clone(), y1.clone(), z1.clone())
        } else {
            let (x2, y2, z2) = &decomposed[nonzero_xy];
            if !basis.contains(&classes[nonzero_xy]) {
                (x2.clone(), y2.clone(), z2.clone())
            } else {
                let sum = |a: &BitVector, b: &BitVector| {
                    let mut s = a.clone();
                    s.xor_assign(b);
                    s
                };
                (sum(x1, x2), sum(y1, y2), sum(z1, z2))
            }
        };
        Ok(Some(UpperWitness {
            value: v.clone(),
            m,
            x: self.to_chain(&x, &gx),
            y: self.to_chain(&y, v),
            z: self.to_chain(&z, &gz),
        }))
    }

    pub fn d_results(&self) -> Result<DResults> {
        self.d_results_with(SearchLimits::default())
    }

    pub fn d_results_with(&self, limits: SearchLimits) -> Result<DResults> {
        let lower = self.d_lower_with(limits)?.grading;
        let upper = self.d_upper_with(limits)?.value;
        DResults::checked(self.d_invariant(), lower, upper)
    }
}

pub fn d_invariant(c: &IotaComplex) -> Result<Rational> {
    Ok(ValidatedIota::new(c)?.d_invariant())
}

pub fn d_lower(c: &IotaComplex) -> Result<Rational> {
    ValidatedIota::new(c)?.d_lower()
}

pub fn d_upper(c: &IotaComplex) -> Result<Rational> {
    ValidatedIota::new(c)?.d_upper()
}

pub fn d_results(c: &IotaComplex) -> Result<DResults> {
    ValidatedIota::new(c)?.d_results()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::iota::fixtures;

    fn results(c: &IotaComplex) -> (Rational, Rational, Rational) {
        let r = d_results(c).unwrap();
        (r.d, r.d_lower, r.d_upper)
    }

    /// Checks a lower witness against the defining conditions on explicit chains.
    fn check_lower(c: &IotaComplex, w: &LowerWitness) {
        let d = c.complex().differential();
        assert!(Chain::apply(d, &w.a).is_zero(), "a is a cycle");
        let mut lhs = w.a.clone();
        lhs.add_assign(&Chain::apply(c.iota(), &w.a));
        assert_eq!(Chain::apply(d, &w.b), lhs, "∂b = (id + ι)a");
    }

    fn check_upper(c: &IotaComplex, w: &UpperWitness) {
        let d = c.complex().differential();
        assert!(!w.x.is_zero() || !w.y.is_zero());
        let mut one_plus_iota_x = w.x.clone();
        one_plus_iota_x.add_assign(&Chain::apply(c.iota(), &w.x));
        assert_eq!(Chain::apply(d, &w.y), one_plus_iota_x, "∂y = (id + ι)x");
        assert_eq!(Chain::apply(d, &w.z), w.x.shift(w.m), "∂z = U^m x");
    }

    #[test]
    fn s3_model() {
        assert_eq!(results(&fixtures::s3()), (rat(0, 1), rat(0, 1), rat(0, 1)));
    }

    #[test]
    fn shifted_s3() {
        let c = fixtures::s3().shift(&rat(1, 4));
        assert_eq!(d_invariant(&c).unwrap(), rat(1, 4));
        let c = fixtures::s3().shift(&rat(-1, 4));
        assert_eq!(d_invariant(&c).unwrap(), rat(-1, 4));
        assert_eq!(fixtures::s3().shift(&rat(0, 1)), fixtures::s3());
    }

    #[test]
    fn swap_complex() {
        let c = fixtures::swap();
        assert_eq!(results(&c), (rat(0, 1), rat(0, 1), rat(0, 1)));
        let v = ValidatedIota::new(&c).unwrap();
        let w = v.d_lower_with(SearchLimits::default()).unwrap();
        check_lower(&c, &w);
        let w = v.d_upper_with(SearchLimits::default()).unwrap();
        check_upper(&c, &w);
        // value 0 is reached through x = 0
        assert!(w.x.is_zero());
    }

    #[test]
    fn figure_eight_like() {
        let c = fixtures::figure_eight_like();
        assert_eq!(results(&c), (rat(0, 1), rat(-2, 1), rat(0, 1)));
        let v = ValidatedIota::new(&c).unwrap();
        let w = v.d_lower_with(SearchLimits::default()).unwrap();
        check_lower(&c, &w);
        // a = U·a₀ (+ possibly U²c), b = the generator with ∂b = U²c
        let a0 = c.complex().index_of("a").unwrap();
        assert_eq!(w.a.coefficient(a0).unwrap().min_exponent(), Some(1));
        check_upper(&c, &v.d_upper_with(SearchLimits::default()).unwrap());
    }

    #[test]
    fn figure_eight_like_shifted_by_two() {
        let c = fixtures::figure_eight_like().shift(&rat(2, 1));
        assert_eq!(results(&c), (rat(2, 1), rat(0, 1), rat(2, 1)));
    }

    #[test]
    fn tensor_with_unit_is_neutral() {
        for x in [fixtures::swap(), fixtures::figure_eight_like()] {
            let t = crate::iota::tensor(&fixtures::s3(), &x).unwrap();
            assert_eq!(results(&t), results(&x));
            let shifted = crate::iota::tensor(&fixtures::s3().shift(&rat(1, 3)), &x).unwrap();
            assert_eq!(results(&shifted), results(&x.shift(&rat(1, 3))));
        }
    }

    #[test]
    fn figure_eight_like_squared() {
        let f = fixtures::figure_eight_like();
        let t = crate::iota::tensor(&f, &f).unwrap();
        assert!(t.validate().passed());
        let r = d_results(&t).unwrap();
        assert_eq!(r.d, rat(0, 1));
        // HMZ chain: -4 ≤ d̲(f⊗f) ≤ -2 ≤ d̄(f⊗f) ≤ 0
        assert!(r.d_lower >= rat(-4, 1) && r.d_lower <= rat(-2, 1));
        assert!(r.d_upper >= rat(-2, 1) && r.d_upper <= rat(0, 1));
    }

    #[test]
    fn invalid_complex_refused() {
        let c = IotaComplex::builder()
            .generator("a", rat(0, 1))
            .generator("b", rat(1, 1))
            .iota_identity_elsewhere()
            .build()
            .unwrap();
        assert!(matches!(d_lower(&c), Err(Error::Validation(_))));
        assert!(matches!(d_upper(&c), Err(Error::Validation(_))));
    }

    #[test]
    fn doubled_limits_agree_on_fixtures() {
        for c in [
            fixtures::s3(),
            fixtures::swap(),
            fixtures::figure_eight_like(),
        ] {
            let v = ValidatedIota::new(&c).unwrap();
            assert_eq!(
                v.d_results().unwrap(),
                v.d_results_with(SearchLimits { scale: 2 }).unwrap()
            );
        }
    }
}
