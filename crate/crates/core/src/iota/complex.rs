use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{F2UPoly, Rational};
use crate::error::{Error, Result};

use super::model;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub grading: Rational,
}

/// F₂[U]-linear combination of generators, keyed by generator index.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Chain(BTreeMap<usize, F2UPoly>);

impl Chain {
    pub fn zero() -> Self {
        Chain::default()
    }

    pub fn term(generator: usize, upow: u32) -> Self {
        let mut c = Chain::zero();
        c.add_term(generator, upow);
        c
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_term(&mut self, generator: usize, upow: u32) {
        let p = self.0.entry(generator).or_default();
        p.toggle(upow);
        if p.is_zero() {
            self.0.remove(&generator);
        }
    }

    pub fn add_assign(&mut self, other: &Chain) {
        for (g, e) in other.terms() {
            self.add_term(g, e);
        }
    }

    /// Multiplication by `U^k`.
    pub fn shift(&self, k: u32) -> Chain {
        Chain(self.0.iter().map(|(&g, p)| (g, p.shift(k))).collect())
    }

    pub fn coefficient(&self, generator: usize) -> Option<&F2UPoly> {
        self.0.get(&generator)
    }

    /// All `(generator, exponent)` monomials.
    pub fn terms(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0
            .iter()
            .flat_map(|(&g, p)| p.exponents().map(move |e| (g, e)))
    }

    /// Extends `map` (images of generators) F₂[U]-linearly and applies it.
    pub fn apply(map: &[Chain], chain: &Chain) -> Chain {
        let mut out = Chain::zero();
        for (g, e) in chain.terms() {
            out.add_assign(&map[g].shift(e));
        }
        out
    }

    fn remap(&self, f: impl Fn(usize) -> usize) -> Chain {
        let mut out = Chain::zero();
        for (g, e) in self.terms() {
            out.add_term(f(g), e);
        }
        out
    }
}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(g, e)| {
                if e == 0 {
                    format!("#{g}")
                } else {
                    format!("U^{e}#{g}")
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Finitely generated free graded complex over F₂[U].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedComplex {
    generators: Vec<Generator>,
    differential: Vec<Chain>,
}

impl GradedComplex {
    pub fn new(generators: Vec<Generator>, differential: Vec<Chain>) -> Result<Self> {
        check_shape(&generators, &differential, "differential")?;
        Ok(GradedComplex {
            generators,
            differential,
        })
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn grading(&self, g: usize) -> &Rational {
        &self.generators[g].grading
    }

    pub fn gradings(&self) -> Vec<Rational> {
        self.generators.iter().map(|g| g.grading.clone()).collect()
    }

    pub fn differential(&self) -> &[Chain] {
        &self.differential
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Homogeneous of degree `degree`: every term `U^k y` in `map(x)` has
    /// `gr(x) + degree = gr(y) - 2k`.
    pub(crate) fn first_inhomogeneous(&self, map: &[Chain], degree: i64) -> Option<String> {
        let degree = Rational::integer(degree);
        for (x, image) in map.iter().enumerate() {
            for (y, k) in image.terms() {
                let lhs = self.grading(x) + &degree;
                let rhs = self.grading(y) - &Rational::integer(2 * k as i64);
                if lhs != rhs {
                    return Some(format!(
                        "term U^{k}·{} in the image of {} (grading {} vs {})",
                        self.generators[y].name,
                        self.generators[x].name,
                        self.grading(y),
                        self.grading(x)
                    ));
                }
            }
        }
        None
    }

    pub fn homology_summary(&self) -> Result<model::HomologySummary> {
        if let Some(t) = self.first_inhomogeneous(&self.differential, -1) {
            return Err(Error::Validation(format!(
                "differential not of degree -1: {t}"
            )));
        }
        if let Some(g) = self.first_nonzero_square() {
            return Err(Error::Validation(format!("∂∘∂ ≠ 0 on {g}")));
        }
        model::homology_summary(
            &self.gradings(),
            &model::bit_map(self.len(), &self.differential),
        )
    }

    /// The correction term: top grading of a non-U-torsion homology class.
    pub fn d_invariant(&self) -> Result<Rational> {
        Ok(self.homology_summary()?.free_grading)
    }

    fn first_nonzero_square(&self) -> Option<String> {
        self.differential.iter().enumerate().find_map(|(x, dx)| {
            (!Chain::apply(&self.differential, dx).is_zero())
                .then(|| self.generators[x].name.clone())
        })
    }
}

/// A graded complex together with an involution ι.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IotaComplex {
    complex: GradedComplex,
    iota: Vec<Chain>,
}

impl IotaComplex {
    pub fn new(complex: GradedComplex, iota: Vec<Chain>) -> Result<Self> {
        check_shape(&complex.generators, &iota, "iota")?;
        Ok(IotaComplex { complex, iota })
    }

    pub fn builder() -> IotaComplexBuilder {
        IotaComplexBuilder::default()
    }

    pub fn complex(&self) -> &GradedComplex {
        &self.complex
    }

    pub fn iota(&self) -> &[Chain] {
        &self.iota
    }

    pub fn len(&self) -> usize {
        self.complex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.complex.is_empty()
    }

    /// Checks every condition required of an iota-complex.
    pub fn validate(&self) -> ValidationReport {
        model::validate(self)
    }

    /// Grading shift by `r`; the differential and ι are unchanged.
    pub fn shift(&self, r: &Rational) -> IotaComplex {
        let generators = self
            .complex
            .generators
            .iter()
            .map(|g| Generator {
                name: g.name.clone(),
                grading: &g.grading + r,
            })
            .collect();
        IotaComplex {
            complex: GradedComplex {
                generators,
                differential: self.complex.differential.clone(),
            },
            iota: self.iota.clone(),
        }
    }

    /// Reorders generators: generator `order[k]` of `self` becomes generator `k`.
    pub fn permuted(&self, order: &[usize]) -> Result<IotaComplex> {
        let n = self.len();
        let mut inverse = vec![usize::MAX; n];
        for (k, &old) in order.iter().enumerate() {
            if old >= n || inverse[old] != usize::MAX {
                return Err(Error::Usage("not a permutation".into()));
            }
            inverse[old] = k;
        }
        if order.len() != n {
            return Err(Error::Usage("not a permutation".into()));
        }
        let generators = order
            .iter()
            .map(|&o| self.complex.generators[o].clone())
            .collect();
        let remap = |map: &[Chain]| -> Vec<Chain> {
            order
                .iter()
                .map(|&o| map[o].remap(|g| inverse[g]))
                .collect()
        };
        Ok(IotaComplex {
            complex: GradedComplex {
                generators,
                differential: remap(&self.complex.differential),
            },
            iota: remap(&self.iota),
        })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: ComplexFile = serde_json::from_str(s)?;
        file.into_complex()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(ComplexFile::from_complex(self)).expect("complex serializes")
    }
}

/// Tensor product `(C₁ ⊗ C₂, ι₁ ⊗ ι₂)`; both inputs must validate.
pub fn tensor(a: &IotaComplex, b: &IotaComplex) -> Result<IotaComplex> {
    for (which, c) in [("left", a), ("right", b)] {
        let report = c.validate();
        if let Some(f) = report.first_failure() {
            return Err(Error::Validation(format!("{which} factor: {f}")));
        }
    }
    let nb = b.len();
    let pair = |i: usize, j: usize| i * nb + j;
    let mut generators = Vec::with_capacity(a.len() * nb);
    let mut differential = Vec::with_capacity(a.len() * nb);
    let mut iota = Vec::with_capacity(a.len() * nb);
    for (i, ga) in a.complex.generators.iter().enumerate() {
        for (j, gb) in b.complex.generators.iter().enumerate() {
            generators.push(Generator {
                name: format!("{}⊗{}", ga.name, gb.name),
                grading: &ga.grading + &gb.grading,
            });
            let mut d = Chain::zero();
            for (x, e) in a.complex.differential[i].terms() {
                d.add_term(pair(x, j), e);
            }
            for (y, e) in b.complex.differential[j].terms() {
                d.add_term(pair(i, y), e);
            }
            differential.push(d);
            let mut t = Chain::zero();
            for (x, e) in a.iota[i].terms() {
                for (y, f) in b.iota[j].terms() {
                    t.add_term(pair(x, y), e + f);
                }
            }
            iota.push(t);
        }
    }
    Ok(IotaComplex {
        complex: GradedComplex {
            generators,
            differential,
        },
        iota,
    })
}

fn check_shape(generators: &[Generator], map: &[Chain], what: &str) -> Result<()> {
    if map.len() != generators.len() {
        return Err(Error::Validation(format!(
            "{what} has {} entries for {} generators",
            map.len(),
            generators.len()
        )));
    }
    let mut seen = HashMap::new();
    for (i, g) in generators.iter().enumerate() {
        if let Some(j) = seen.insert(g.name.as_str(), i) {
            return Err(Error::Validation(format!(
                "duplicate generator name {:?} (positions {j} and {i})",
                g.name
            )));
        }
    }
    for (x, image) in map.iter().enumerate() {
        if let Some((g, _)) = image.terms().find(|&(g, _)| g >= generators.len()) {
            return Err(Error::Validation(format!(
                "{what} of {:?} refers to generator index {g}",
                generators[x].name
            )));
        }
    }
    Ok(())
}

/// Outcome of one validation check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub(crate) fn push(&mut self, name: &'static str, failure: Option<String>) {
        self.checks.push(Check {
            name,
            passed: failure.is_none(),
            detail: failure,
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<String> {
        self.checks
            .iter()
            .find(|c| !c.passed)
            .map(|c| match &c.detail {
                Some(d) => format!("{}: {d}", c.name),
                None => c.name.to_string(),
            })
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Default)]
pub struct IotaComplexBuilder {
    generators: Vec<Generator>,
    differential: Vec<(String, Vec<(String, u32)>)>,
    iota: Vec<(String, Vec<(String, u32)>)>,
}

impl IotaComplexBuilder {
    pub fn generator(mut self, name: &str, grading: Rational) -> Self {
        self.generators.push(Generator {
            name: name.to_string(),
            grading,
        });
        self
    }

    pub fn differential(mut self, source: &str, terms: &[(&str, u32)]) -> Self {
        self.differential.push((source.into(), own_terms(terms)));
        self
    }

    pub fn iota(mut self, source: &str, terms: &[(&str, u32)]) -> Self {
        self.iota.push((source.into(), own_terms(terms)));
        self
    }

    /// Sets ι to the identity on every generator without an explicit ι entry.
    pub fn iota_identity_elsewhere(mut self) -> Self {
        let names: Vec<String> = self.generators.iter().map(|g| g.name.clone()).collect();
        for name in names {
            if !self.iota.iter().any(|(s, _)| *s == name) {
                self.iota.push((name.clone(), vec![(name, 0)]));
            }
        }
        self
    }

    pub fn build(self) -> Result<IotaComplex> {
        let index: HashMap<&str, usize> = self
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| (g.name.as_str(), i))
            .collect();
        let resolve =
            |what: &str, entries: &[(String, Vec<(String, u32)>)]| -> Result<Vec<Chain>> {
                let mut map = vec![Chain::zero(); self.generators.len()];
                for (source, terms) in entries {
                    let &s = index.get(source.as_str()).ok_or_else(|| {
                        Error::Validation(format!("unknown generator {source:?} as {what} source"))
                    })?;
                    for (target, upow) in terms {
                        let &t = index.get(target.as_str()).ok_or_else(|| {
                            Error::Validation(format!(
                                "unknown generator {target:?} in {what} of {source:?}"
                            ))
                        })?;
                        map[s].add_term(t, *upow);
                    }
                }
                Ok(map)
            };
        let differential = resolve("differential", &self.differential)?;
        let iota = resolve("iota", &self.iota)?;
        let complex = GradedComplex::new(self.generators, differential)?;
        IotaComplex::new(complex, iota)
    }
}

fn own_terms(terms: &[(&str, u32)]) -> Vec<(String, u32)> {
    terms.iter().map(|&(n, e)| (n.to_string(), e)).collect()
}

// On-disk JSON layout.

#[derive(Serialize, Deserialize)]
struct ComplexFile {
    generators: Vec<GeneratorEntry>,
    #[serde(default)]
    differential: BTreeMap<String, Vec<TermEntry>>,
    #[serde(default)]
    iota: BTreeMap<String, Vec<TermEntry>>,
}

#[derive(Serialize, Deserialize)]
struct GeneratorEntry {
    name: String,
    grading: String,
}

#[derive(Serialize, Deserialize)]
struct TermEntry {
    gen: String,
    upow: u32,
}

impl ComplexFile {
    fn into_complex(self) -> Result<IotaComplex> {
        let mut builder = IotaComplex::builder();
        for g in &self.generators {
            let grading: Rational = g.grading.parse().map_err(|_| {
                Error::Validation(format!(
                    "bad grading {:?} for generator {:?}",
                    g.grading, g.name
                ))
            })?;
            builder = builder.generator(&g.name, grading);
        }
        let convert = |entries: &[TermEntry]| -> Vec<(String, u32)> {
            entries.iter().map(|t| (t.gen.clone(), t.upow)).collect()
        };
        builder.differential = self
            .differential
            .iter()
            .map(|(s, t)| (s.clone(), convert(t)))
            .collect();
        builder.iota = self
            .iota
            .iter()
            .map(|(s, t)| (s.clone(), convert(t)))
            .collect();
        builder.build()
    }

    fn from_complex(c: &IotaComplex) -> Self {
        let gens = &c.complex.generators;
        let map_entries = |map: &[Chain]| -> BTreeMap<String, Vec<TermEntry>> {
            map.iter()
                .enumerate()
                .filter(|(_, image)| !image.is_zero())
                .map(|(x, image)| {
                    let terms = image
                        .terms()
                        .map(|(g, e)| TermEntry {
                            gen: gens[g].name.clone(),
                            upow: e,
                        })
                        .collect();
                    (gens[x].name.clone(), terms)
                })
                .collect()
        };
        ComplexFile {
            generators: gens
                .iter()
                .map(|g| GeneratorEntry {
                    name: g.name.clone(),
                    grading: g.grading.to_ratio_string(),
                })
                .collect(),
            differential: map_entries(&c.complex.differential),
            iota: map_entries(&c.iota),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::iota::fixtures;

    #[test]
    fn unknown_generator_is_reported() {
        let err = IotaComplex::builder()
            .generator("a", rat(0, 1))
            .differential("a", &[("nope", 1)])
            .build()
            .unwrap_err();
        assert!(
            matches!(&err, Error::Validation(m) if m.contains("nope")),
            "{err}"
        );

        let json =
            r#"{"generators":[{"name":"a","grading":"0"}],"iota":{"b":[{"gen":"a","upow":0}]}}"#;
        let err = IotaComplex::from_json_str(json).unwrap_err();
        assert!(
            matches!(&err, Error::Validation(m) if m.contains("\"b\"")),
            "{err}"
        );
    }

    #[test]
    fn duplicate_generator_rejected() {
        let err = IotaComplex::builder()
            .generator("a", rat(0, 1))
            .generator("a", rat(2, 1))
            .build()
            .unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }

    #[test]
    fn json_roundtrip_preserves_complex() {
        let c = fixtures::figure_eight_like();
        let text = c.to_json_value().to_string();
        assert_eq!(IotaComplex::from_json_str(&text).unwrap(), c);
    }

    #[test]
    fn json_format_example() {
        let json = r#"{
            "generators":[{"name":"a","grading":"0"},{"name":"c","grading":"2"},{"name":"b","grading":"-1"}],
            "differential":{"b":[{"gen":"c","upow":2}]},
            "iota":{"a":[{"gen":"a","upow":0},{"gen":"c","upow":1}],
                    "c":[{"gen":"c","upow":0}],
                    "b":[{"gen":"b","upow":0}]}
        }"#;
        let c = IotaComplex::from_json_str(json).unwrap();
        assert!(c.validate().passed());
        let fig8 = fixtures::figure_eight_like();
        let order: Vec<usize> = ["a", "c", "b"]
            .iter()
            .map(|n| fig8.complex().index_of(n).unwrap())
            .collect();
        assert_eq!(c, fig8.permuted(&order).unwrap());
    }

    #[test]
    fn missing_iota_entries_mean_zero() {
        let json = r#"{"generators":[{"name":"a","grading":"0"}]}"#;
        let c = IotaComplex::from_json_str(json).unwrap();
        assert!(c.iota()[0].is_zero());
        // ι = 0 is a chain map, but ι² = 0 is not homotopic to the identity here
        let report = c.validate();
        assert!(
            !report
                .check("iota squared homotopic to identity")
                .unwrap()
                .passed
        );
    }

    #[test]
    fn chain_arithmetic() {
        let mut c = Chain::term(0, 1);
        c.add_term(1, 0);
        c.add_term(0, 1);
        assert_eq!(c, Chain::term(1, 0));
        assert_eq!(c.shift(2), Chain::term(1, 2));
    }
}
