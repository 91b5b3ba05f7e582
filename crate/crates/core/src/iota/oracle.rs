//! Exhaustive reference for `d`, `d̲` and `d̄`.
//!
//! Elements of each graded piece are enumerated as subsets of its monomials,
//! maps are applied to explicit chains, and boundaries are collected in hash
//! sets. Only monomials `U^k x` with `k < T` are searched, for a truncation
//! `T`; the torsion test itself always sees the whole complex, with `U^T`
//! standing in for `U^N`.

use std::collections::{HashMap, HashSet};

use crate::algebra::Rational;
use crate::error::{Error, Result};

use super::complex::{Chain, IotaComplex};
use super::invariants::DResults;
use super::model::ValidatedIota;

/// Largest complex the oracle will enumerate.
pub const MAX_GENERATORS: usize = 16;

struct Oracle<'a> {
    c: &'a IotaComplex,
    gradings: Vec<Rational>,
    truncation: u32,
    boundary_cache: HashMap<Rational, HashSet<Chain>>,
}

impl<'a> Oracle<'a> {
    /// Monomials `U^k x` of grading `g`, optionally with `k < T`.
    fn piece(&self, g: &Rational, truncated: bool) -> Vec<Chain> {
        self.gradings
            .iter()
            .enumerate()
            .filter_map(|(i, gi)| (gi - g).half_nonneg_integer().map(|k| (i, k)))
            .filter(|&(_, k)| !truncated || k < self.truncation)
            .map(|(i, k)| Chain::term(i, k))
            .collect()
    }

    fn elements(piece: &[Chain]) -> impl Iterator<Item = Chain> + '_ {
        (0u64..1 << piece.len()).map(move |mask| {
            let mut c = Chain::zero();
            for (k, m) in piece.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    c.add_assign(m);
                }
            }
            c
        })
    }

    fn d(&self, c: &Chain) -> Chain {
        Chain::apply(self.c.complex().differential(), c)
    }

    fn one_plus_iota(&self, c: &Chain) -> Chain {
        let mut out = c.clone();
        out.add_assign(&Chain::apply(self.c.iota(), c));
        out
    }

    /// `∂(C_{g+1})`, over the whole complex.
    fn boundaries(&mut self, g: &Rational) -> &HashSet<Chain> {
        if !self.boundary_cache.contains_key(g) {
            let piece = self.piece(&(g + &Rational::integer(1)), false);
            let set = Self::elements(&piece).map(|w| self.d(&w)).collect();
            self.boundary_cache.insert(g.clone(), set);
        }
        &self.boundary_cache[g]
    }

    fn nontorsion(&mut self, c: &Chain, g: &Rational) -> bool {
        let t = self.truncation;
        let low = g - &Rational::integer(2 * t as i64);
        let image = c.shift(t);
        !self.boundaries(&low).contains(&image)
    }

    /// `∂`-fibres of the truncated piece at `g`.
    fn fibres(&self, g: &Rational, f: impl Fn(&Chain) -> Chain) -> HashMap<Chain, Vec<Chain>> {
        let mut out: HashMap<Chain, Vec<Chain>> = HashMap::new();
        for e in Self::elements(&self.piece(g, true)) {
            out.entry(f(&e)).or_default().push(e);
        }
        out
    }

    fn has_free_cycle(&mut self, g: &Rational) -> bool {
        for a in Self::elements(&self.piece(g, true)).collect::<Vec<_>>() {
            if !a.is_zero() && self.d(&a).is_zero() && self.nontorsion(&a, g) {
                return true;
            }
        }
        false
    }

    fn lower_at(&mut self, g: &Rational) -> bool {
        let b_by_image = self.fibres(&(g + &Rational::integer(1)), |b| self.d(b));
        for a in Self::elements(&self.piece(g, true)).collect::<Vec<_>>() {
            if a.is_zero() || !self.d(&a).is_zero() {
                continue;
            }
            if b_by_image.contains_key(&self.one_plus_iota(&a)) && self.nontorsion(&a, g) {
                return true;
            }
        }
        false
    }

    fn upper_at(&mut self, v: &Rational, m: u32) -> bool {
        let gz = v - &Rational::integer(2 * m as i64);
        let y_by_image = self.fibres(v, |y| self.d(y));
        let z_by_image = self.fibres(&gz, |z| self.d(z));
        let empty = Vec::new();
        for x in Self::elements(&self.piece(&(v - &Rational::integer(1)), true)).collect::<Vec<_>>()
        {
            let ys = y_by_image.get(&self.one_plus_iota(&x)).unwrap_or(&empty);
            let zs = z_by_image.get(&x.shift(m)).unwrap_or(&empty);
            for y in ys {
                if x.is_zero() && y.is_zero() {
                    continue;
                }
                for z in zs {
                    let mut class = y.shift(m);
                    class.add_assign(&self.one_plus_iota(z));
                    if self.nontorsion(&class, &gz) {
                        return true;
                    }
                }
            }
        }
        false
    }
}

/// Computes `(d, d̲, d̄)` by exhaustive search with truncation `T`.
///
/// Refuses complexes with more than [`MAX_GENERATORS`] generators and
/// truncations below `N + n`, where `N` is the torsion exponent of homology
/// and `n` the number of generators.
pub fn brute_oracle(c: &IotaComplex, truncation: u32) -> Result<DResults> {
    let v = ValidatedIota::new(c)?;
    let n = v.len();
    if n > MAX_GENERATORS {
        return Err(Error::Usage(format!(
            "oracle limited to {MAX_GENERATORS} generators, got {n}"
        )));
    }
    let needed = v.summary().torsion_exponent + n as u32;
    if truncation < needed {
        return Err(Error::Usage(format!(
            "truncation {truncation} below N + n = {needed}"
        )));
    }
    let mut o = Oracle {
        c,
        gradings: c.complex().gradings(),
        truncation,
        boundary_cache: HashMap::new(),
    };

    let top = v.max_grading() + Rational::integer(1);
    let bottom = v.min_grading() - Rational::integer(2 * truncation as i64);
    // every grading g - 2k of a generator, in the search window
    let mut candidates: Vec<Rational> = Vec::new();
    for g in v.gradings() {
        let mut h = g + &Rational::integer(1);
        while h >= bottom {
            if h <= top && !candidates.contains(&h) {
                candidates.push(h.clone());
            }
            h -= &Rational::integer(1);
        }
    }
    candidates.sort();
    candidates.reverse();

    let d = candidates
        .iter()
        .find(|g| o.has_free_cycle(g))
        .cloned()
        .ok_or_else(|| Error::Internal("oracle found no free cycle".into()))?;
    let same_parity: Vec<Rational> = candidates
        .into_iter()
        .filter(|g| {
            let diff = g - &d;
            diff.is_integer() && diff.numer() % 2 == 0.into()
        })
        .collect();

    let d_lower = same_parity
        .iter()
        .find(|g| o.lower_at(g))
        .cloned()
        .ok_or_else(|| Error::Internal("oracle found no d_lower witness".into()))?;
    let d_upper = same_parity
        .iter()
        .find(|v| (0..truncation).any(|m| o.upper_at(v, m)))
        .cloned()
        .ok_or_else(|| Error::Internal("oracle found no d_upper witness".into()))?;
    DResults::checked(d, d_lower, d_upper)
}

/// A truncation comfortably above what the oracle needs for `c`.
pub fn default_truncation(c: &ValidatedIota) -> u32 {
    let span = (c.max_grading() - c.min_grading()).floor();
    let half_span: u32 = ((span + 1u32) / 2u32).try_into().unwrap_or(u32::MAX / 2);
    c.summary().torsion_exponent + c.len() as u32 + half_span + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::iota::fixtures;

    fn triple(r: DResults) -> (Rational, Rational, Rational) {
        (r.d, r.d_lower, r.d_upper)
    }

    #[test]
    fn fixtures_by_enumeration() {
        let zero = rat(0, 1);
        assert_eq!(
            triple(brute_oracle(&fixtures::figure_eight_like(), 8).unwrap()),
            (zero.clone(), rat(-2, 1), zero.clone())
        );
        assert_eq!(
            triple(brute_oracle(&fixtures::swap(), 4).unwrap()),
            (zero.clone(), zero.clone(), zero.clone())
        );
        assert_eq!(
            triple(brute_oracle(&fixtures::s3(), 1).unwrap()),
            (zero.clone(), zero.clone(), zero)
        );
    }

    #[test]
    fn refuses_short_truncation() {
        assert!(matches!(
            brute_oracle(&fixtures::figure_eight_like(), 4),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn shifted_fixture() {
        let c = fixtures::figure_eight_like().shift(&rat(1, 2));
        assert_eq!(
            triple(brute_oracle(&c, 8).unwrap()),
            (rat(1, 2), rat(-3, 2), rat(1, 2))
        );
    }
}
