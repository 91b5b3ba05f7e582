//! Involutive concordance invariants of cables, surgery correction terms and
//! the genus and unknotting-number bounds derived from them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::Rational;
use crate::error::{Error, Result};
use crate::lens::{check_coprime, lens_d, lens_d_all, selfconj_spinc, SpincLabel};
use crate::torus::{
    alexander_from_vs, alexander_torus, cable_alexander, lspace_cable_check, torus_vs,
    vs_from_alexander, AlexanderPoly, VSequence,
};

/// `V̲₀`, `V̄₀` and whatever further data is known about a knot.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KnotInvariants {
    pub v_lower: i64,
    pub v_upper: i64,
    pub v_seq: Option<VSequence>,
    pub genus3: Option<u64>,
    pub genus4: Option<u64>,
    /// L-space knot, with `V_s` read off `alexander`.
    pub lspace: bool,
    #[serde(skip)]
    pub alexander: Option<AlexanderPoly>,
}

impl KnotInvariants {
    pub fn unknot() -> Self {
        KnotInvariants::torus(1, 1).expect("coprime")
    }

    /// `T(p,q)`: an L-space knot with `V̲₀ = V̄₀ = V₀`.
    pub fn torus(p: u64, q: u64) -> Result<Self> {
        let alexander = alexander_torus(p, q)?;
        let v_seq = vs_from_alexander(&alexander)?;
        let v0 = v_seq.v0() as i64;
        Ok(KnotInvariants {
            v_lower: v0,
            v_upper: v0,
            v_seq: Some(v_seq),
            genus3: Some(alexander.degree()),
            genus4: None,
            lspace: true,
            alexander: Some(alexander),
        })
    }

    /// Invariants supplied by the caller. For an L-space knot the Alexander
    /// polynomial is recovered from `v_seq`.
    pub fn custom(
        v_lower: i64,
        v_upper: i64,
        v_seq: Option<VSequence>,
        genus3: Option<u64>,
        lspace: bool,
    ) -> Result<Self> {
        if lspace && v_seq.is_none() {
            return Err(Error::insufficient(
                "v_seq",
                "an L-space knot needs its V sequence",
            ));
        }
        let alexander = if lspace {
            v_seq.as_ref().map(alexander_from_vs)
        } else {
            None
        };
        let inv = KnotInvariants {
            v_lower,
            v_upper,
            v_seq,
            genus3,
            genus4: None,
            lspace,
            alexander,
        };
        inv.check().map_err(Error::Validation)?;
        Ok(inv)
    }

    fn check(&self) -> std::result::Result<(), String> {
        if self.v_upper > self.v_lower {
            return Err(format!(
                "v_upper = {} exceeds v_lower = {}",
                self.v_upper, self.v_lower
            ));
        }
        if let Some(v) = &self.v_seq {
            let v0 = v.v0() as i64;
            if v0 < self.v_upper || v0 > self.v_lower {
                return Err(format!(
                    "V_0 = {v0} outside [v_upper, v_lower] = [{}, {}]",
                    self.v_upper, self.v_lower
                ));
            }
        }
        Ok(())
    }

    /// `g(K)` for the L-space regime test: the Alexander degree, else `genus3`.
    fn seifert_genus(&self) -> Option<u64> {
        self.alexander
            .as_ref()
            .map(AlexanderPoly::degree)
            .or(self.genus3)
    }
}

/// One cabling operation `K ↦ K_{p,q}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CableStage {
    pub p: u64,
    pub q: u64,
    /// For even `p`: the `s ∈ [0, q-1]` with `s ≡ (p+q-1)/2 mod q`.
    pub s_even_case: Option<u64>,
}

impl CableStage {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        check_coprime(p, q)?;
        let s_even_case = p.is_multiple_of(2).then(|| ((p + q - 1) / 2) % q);
        Ok(CableStage { p, q, s_even_case })
    }
}

/// Cabling formula for `(V̲₀, V̄₀)`; `V_s` of the cable is carried along
/// only when both `K` and `K_{p,q}` are L-space knots.
pub fn cable_inv_v0(stage: &CableStage, inv: &KnotInvariants) -> Result<KnotInvariants> {
    let (p, q) = (stage.p, stage.q);
    let v0t = torus_vs(p, q)?.v0() as i64;
    let (v_lower, v_upper) = match stage.s_even_case {
        None => (inv.v_lower + v0t, inv.v_upper + v0t),
        Some(s) => {
            let v = inv.v_seq.as_ref().ok_or_else(|| {
                Error::insufficient(
                    "v_seq",
                    format!("even cable ({p},{q}) reads V_s of the companion"),
                )
            })?;
            let a = v.get(s / p);
            let b = v.get((p + q - 1 - s) / p);
            (a.max(b) as i64 + v0t, v0t)
        }
    };

    let cable_poly = match (&inv.alexander, inv.lspace, inv.seifert_genus()) {
        (Some(delta), true, Some(g)) if lspace_cable_check(g, p, q) => {
            Some(cable_alexander(delta, p, q)?)
        }
        _ => None,
    };
    let (v_seq, genus3) = match &cable_poly {
        Some(delta) => (Some(vs_from_alexander(delta)?), Some(delta.degree())),
        None => (None, None),
    };
    let out = KnotInvariants {
        v_lower,
        v_upper,
        lspace: cable_poly.is_some(),
        v_seq,
        genus3,
        genus4: None,
        alexander: cable_poly,
    };
    out.check()
        .map_err(|e| Error::Internal(format!("cable ({p},{q}) output inconsistent: {e}")))?;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum KnotBase {
    Torus { p: u64, q: u64 },
    Custom(CustomKnot),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomKnot {
    pub v_lower: i64,
    pub v_upper: i64,
    #[serde(default)]
    pub v_seq: Option<VSequence>,
    #[serde(default)]
    pub genus3: Option<u64>,
    #[serde(default)]
    pub lspace: bool,
}

/// A base knot followed by cabling stages, applied left to right.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnotSpec {
    pub base: KnotBase,
    #[serde(default)]
    pub stages: Vec<(u64, u64)>,
}

impl KnotSpec {
    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn base_invariants(&self) -> Result<KnotInvariants> {
        match &self.base {
            KnotBase::Torus { p, q } => KnotInvariants::torus(*p, *q),
            KnotBase::Custom(c) => {
                KnotInvariants::custom(c.v_lower, c.v_upper, c.v_seq.clone(), c.genus3, c.lspace)
            }
        }
    }
}

/// Folds [`cable_inv_v0`] over the stages of `spec`.
pub fn iterated_cable(spec: &KnotSpec) -> Result<KnotInvariants> {
    let mut inv = spec.base_invariants()?;
    for (k, &(p, q)) in spec.stages.iter().enumerate() {
        let at = |e: Error| match e {
            Error::Insufficient { field, context } => Error::Insufficient {
                field,
                context: format!("stage {k}: {context}"),
            },
            Error::Validation(m) => Error::Validation(format!("stage {k} ({p},{q}): {m}")),
            other => other,
        };
        let stage = CableStage::new(p, q).map_err(at)?;
        inv = cable_inv_v0(&stage, &inv).map_err(at)?;
    }
    Ok(inv)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SliceVerdict {
    Obstructed,
    NoObstruction,
}

impl fmt::Display for SliceVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SliceVerdict::Obstructed => "obstructed (not smoothly slice)",
            SliceVerdict::NoObstruction => "no obstruction from V̲₀/V̄₀",
        })
    }
}

/// A slice knot has `V̲₀ = V̄₀ = 0`.
pub fn slice_obstruction(inv: &KnotInvariants) -> SliceVerdict {
    if inv.v_lower != 0 || inv.v_upper != 0 {
        SliceVerdict::Obstructed
    } else {
        SliceVerdict::NoObstruction
    }
}

/// Lower bound for `g₄` from `-⌈(g₄+1)/2⌉ ≤ V̄₀ ≤ V̲₀ ≤ ⌈(g₄+1)/2⌉`.
///
/// `V ≤ ⌈(g+1)/2⌉` holds iff `g ≥ 2V - 2`, with the even `g = 2V - 2`
/// attaining it.
pub fn genus_bounds(inv: &KnotInvariants) -> u64 {
    (2 * inv.v_lower - 2).max(-2 * inv.v_upper - 2).max(0) as u64
}

/// `d(S³_{p/q}(K), [s])` for `0 ≤ s < p`:
/// `d(L(p,q),[s]) - 2 max(V_{⌊s/q⌋}, V_{⌊(p+q-1-s)/q⌋})`.
pub fn niwu_d(p: u64, q: u64, v: &VSequence) -> Result<Vec<Rational>> {
    let lens = lens_d_all(p, q)?;
    Ok(lens
        .into_iter()
        .enumerate()
        .map(|(s, d)| {
            let s = s as u64;
            let m = v.get(s / q).max(v.get((p + q - 1 - s) / q));
            d - Rational::integer(2 * m as i64)
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvolutiveSurgery {
    pub label: SpincLabel,
    pub d_lower: Rational,
    pub d_upper: Rational,
}

/// `(d̲, d̄)` of `S³_{p/q}(K)` at each self-conjugate spin^c structure.
///
/// For odd `q`, at `[(q-1)/2]`: `d(L(p,q)) - 2V̲₀` and `d(L(p,q)) - 2V̄₀`.
/// When `p` or `q` is even, at `[(p+q-1)/2]`: the ordinary `d` of the
/// surgery and `d(L(p,q))`.
pub fn involutive_surgery_d(
    p: u64,
    q: u64,
    inv: &KnotInvariants,
) -> Result<Vec<InvolutiveSurgery>> {
    let labels = selfconj_spinc(p, q)?;
    let mut out = Vec::new();
    for label in labels {
        let lens = lens_d(p, q, label.value)?;
        let odd_branch = q % 2 == 1 && label.value == ((q - 1) / 2) % p;
        let entry = if odd_branch {
            InvolutiveSurgery {
                label,
                d_lower: &lens - &Rational::integer(2 * inv.v_lower),
                d_upper: &lens - &Rational::integer(2 * inv.v_upper),
            }
        } else {
            let v = inv.v_seq.as_ref().ok_or_else(|| {
                Error::insufficient(
                    "v_seq",
                    format!("d of {p}/{q} surgery at [{}]", label.value),
                )
            })?;
            InvolutiveSurgery {
                label,
                d_lower: niwu_d(p, q, v)?[label.value as usize].clone(),
                d_upper: lens,
            }
        };
        if entry.d_lower > entry.d_upper {
            return Err(Error::Internal(format!(
                "d_lower > d_upper at [{}] of {p}/{q} surgery",
                label.value
            )));
        }
        out.push(entry);
    }
    Ok(out)
}

/// Where `[0] ∈ Z/pq` lands on `S³_{q/p}(K)` and on `L(p,q)` under
/// `S³_{pq}(K_{p,q}) = S³_{q/p}(K) # L(p,q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectionPair {
    pub pi1: SpincLabel,
    pub pi2: SpincLabel,
}

pub fn spinc_projection_zero(p: u64, q: u64) -> Result<ProjectionPair> {
    check_coprime(p, q)?;
    let (pi, qi) = (p as i128, q as i128);
    let (a, b) = match (p % 2, q % 2) {
        (1, 1) => ((pi - 1) / 2, (qi - 1) / 2),
        (1, 0) => ((pi - 1) / 2, (pi + qi - 1) / 2),
        _ => ((pi + qi - 1) / 2, (qi - 1) / 2),
    };
    Ok(ProjectionPair {
        pi1: SpincLabel::new(a, q),
        pi2: SpincLabel::new(b, p),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundEntry {
    pub name: String,
    /// `None` when the bound does not apply.
    pub value: Option<i64>,
    pub note: String,
}

/// Lower bounds for `u(K_{p,q})`, each with its hypotheses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub stage: CableStage,
    pub entries: Vec<BoundEntry>,
    pub maximum: i64,
}

pub const BOUND_INVOLUTIVE_LOWER: &str = "involutive (V̲₀)";
pub const BOUND_INVOLUTIVE_UPPER: &str = "involutive (V̄₀)";
pub const BOUND_REFINED_LOWER: &str = "involutive (V̲₀), g₄ parity";
pub const BOUND_REFINED_UPPER: &str = "involutive (V̄₀), g₄ parity";
pub const BOUND_HLP: &str = "HLP";
pub const BOUND_V0: &str = "V₀";
pub const BOUND_GENUS: &str = "slice genus (JZ)";

impl BoundsReport {
    pub fn entry(&self, name: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn value(&self, name: &str) -> Option<i64> {
        self.entry(name).and_then(|e| e.value)
    }
}

pub fn unknotting_bounds(
    stage: &CableStage,
    companion: &KnotInvariants,
    v0_companion: Option<i64>,
    g4_parity: Option<Parity>,
) -> Result<BoundsReport> {
    let (p, q) = (stage.p, stage.q);
    let v0t = torus_vs(p, q)?.v0() as i64;
    let p_odd = p % 2 == 1;
    let needs_odd = "not applicable (requires p odd)".to_string();
    let mut entries = Vec::new();
    let mut push = |name: &str, value: Option<i64>, note: String| {
        entries.push(BoundEntry {
            name: name.into(),
            value,
            note,
        });
    };

    let lower = 2 * companion.v_lower + 2 * v0t;
    let upper = -2 * companion.v_upper - 2 * v0t;
    if p_odd {
        push(
            BOUND_INVOLUTIVE_LOWER,
            Some(lower - 2),
            "2V̲₀(K) + 2V₀(T) - 2".into(),
        );
        push(
            BOUND_INVOLUTIVE_UPPER,
            Some(upper - 2),
            "-2V̄₀(K) - 2V₀(T) - 2".into(),
        );
    } else {
        push(BOUND_INVOLUTIVE_LOWER, None, needs_odd.clone());
        push(BOUND_INVOLUTIVE_UPPER, None, needs_odd.clone());
    }
    match (p_odd, g4_parity) {
        (false, _) => {
            push(BOUND_REFINED_LOWER, None, needs_odd.clone());
            push(BOUND_REFINED_UPPER, None, needs_odd);
        }
        (true, None) => {
            let note = "not applicable (g₄ parity not given)".to_string();
            push(BOUND_REFINED_LOWER, None, note.clone());
            push(BOUND_REFINED_UPPER, None, note);
        }
        (true, Some(parity)) => {
            let (shift, label) = match parity {
                Parity::Odd => (1, "g₄ odd"),
                Parity::Even => (2, "g₄ even"),
            };
            push(BOUND_REFINED_LOWER, Some(lower - shift), label.into());
            push(BOUND_REFINED_UPPER, Some(upper - shift), label.into());
        }
    }
    push(BOUND_HLP, Some(p as i64), "u(K_{p,q}) ≥ p".into());
    match v0_companion {
        Some(v0) => push(
            BOUND_V0,
            Some(2 * v0 + 2 * v0t - 1),
            "2V₀(K) + 2V₀(T) - 1".into(),
        ),
        None => push(BOUND_V0, None, "not applicable (V₀(K) not given)".into()),
    }
    match cable_inv_v0(stage, companion) {
        Ok(cable) => push(
            BOUND_GENUS,
            Some(genus_bounds(&cable) as i64),
            "u ≥ g₄(K_{p,q}) ≥ max(2V̲₀ - 2, -2V̄₀ - 2, 0)".into(),
        ),
        Err(Error::Insufficient { field, .. }) => push(
            BOUND_GENUS,
            None,
            format!("not applicable ({field} missing)"),
        ),
        Err(e) => return Err(e),
    }

    let maximum = entries
        .iter()
        .filter_map(|e| e.value)
        .max()
        .expect("the HLP bound always applies");
    Ok(BoundsReport {
        stage: *stage,
        entries,
        maximum,
    })
}
