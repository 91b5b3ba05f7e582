//! Identity sweeps and the randomized engine suite behind `cablecalc verify`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{rat, Rational};
use crate::concordance::{niwu_d, spinc_projection_zero, CableStage, KnotInvariants};
use crate::error::{Error, Result};
use crate::iota::{
    brute_oracle, default_truncation, fixtures, random_iota_complex_seeded, DResults, IotaComplex,
    SearchLimits, ValidatedIota,
};
use crate::lens::lens_d;
use crate::torus::{cable_alexander, lspace_cable_check, torus_vs, vs_from_alexander};

/// Runs `f` on a pool capped by `CABLECALC_THREADS` when that is set.
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let threads = std::env::var("CABLECALC_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0);
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityRow {
    pub p: u64,
    pub q: u64,
    pub lhs: Rational,
    pub rhs: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct Identity13Report {
    pub max: u64,
    pub checked: usize,
    pub failures: Vec<IdentityRow>,
    pub warning: Option<String>,
}

impl Identity13Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Both sides of `d(L(pq,1),[0]) - 2V₀(T(p,q)) = d(L(q,p),[(p-1)/2]) + d(L(p,q),[(q-1)/2])`.
pub fn identity13_sides(p: u64, q: u64) -> Result<IdentityRow> {
    if p.is_multiple_of(2) || q.is_multiple_of(2) {
        return Err(Error::Usage(format!(
            "({p},{q}): both parameters must be odd"
        )));
    }
    let v0 = torus_vs(p, q)?.v0() as i64;
    let lhs = lens_d(p * q, 1, 0)? - Rational::integer(2 * v0);
    let rhs = lens_d(q, p, ((p - 1) / 2) % q)? + lens_d(p, q, ((q - 1) / 2) % p)?;
    Ok(IdentityRow { p, q, lhs, rhs })
}

/// Odd coprime `3 ≤ p < q ≤ max`.
pub fn identity13_pairs(max: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for p in (3..=max).step_by(2) {
        for q in (p + 2..=max).step_by(2) {
            if num_integer::gcd(p, q) == 1 {
                out.push((p, q));
            }
        }
    }
    out
}

pub fn run_verify_identity13(max: u64) -> Result<Identity13Report> {
    let pairs = identity13_pairs(max);
    let rows = with_pool(|| {
        pairs
            .par_iter()
            .map(|&(p, q)| identity13_sides(p, q))
            .collect::<Result<Vec<_>>>()
    })?;
    let warning = pairs
        .is_empty()
        .then(|| format!("no odd coprime pairs 3 ≤ p < q ≤ {max}; nothing checked"));
    Ok(Identity13Report {
        max,
        checked: rows.len(),
        failures: rows.into_iter().filter(|r| r.lhs != r.rhs).collect(),
        warning,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MoserRow {
    pub companion: (u64, u64),
    pub p: u64,
    pub q: u64,
    pub lhs: Rational,
    pub rhs: Rational,
}

/// Compares both sides of `S³_{pq}(K_{p,q}) = S³_{q/p}(K) # L(p,q)` at `[0]`
/// for the torus knot `K = T(a,b)`; `None` outside the L-space regime.
pub fn moser_check(companion: (u64, u64), p: u64, q: u64) -> Result<Option<MoserRow>> {
    let k = KnotInvariants::torus(companion.0, companion.1)?;
    let delta = k.alexander.as_ref().expect("torus knots carry Δ");
    CableStage::new(p, q)?;
    if !lspace_cable_check(delta.degree(), p, q) {
        return Ok(None);
    }
    let cable_v = vs_from_alexander(&cable_alexander(delta, p, q)?)?;
    let lhs = niwu_d(p * q, 1, &cable_v)?[0].clone();
    let pr = spinc_projection_zero(p, q)?;
    let v = k.v_seq.as_ref().expect("torus knots carry V");
    let rhs = &niwu_d(q, p, v)?[pr.pi1.value as usize] + &lens_d(p, q, pr.pi2.value)?;
    Ok(Some(MoserRow {
        companion,
        p,
        q,
        lhs,
        rhs,
    }))
}

#[derive(Clone, Debug, Serialize)]
pub struct MoserReport {
    pub max: u64,
    pub checked: usize,
    pub skipped: usize,
    pub failures: Vec<MoserRow>,
}

impl MoserReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs [`moser_check`] over every companion and coprime stage given.
pub fn moser_sweep(
    companions: &[(u64, u64)],
    stages: &[(u64, u64)],
    max: u64,
) -> Result<MoserReport> {
    let jobs: Vec<((u64, u64), (u64, u64))> = companions
        .iter()
        .flat_map(|&c| stages.iter().map(move |&s| (c, s)))
        .collect();
    let rows = with_pool(|| {
        jobs.par_iter()
            .map(|&(c, (p, q))| moser_check(c, p, q))
            .collect::<Result<Vec<_>>>()
    })?;
    let checked: Vec<MoserRow> = rows.iter().flatten().cloned().collect();
    Ok(MoserReport {
        max,
        checked: checked.len(),
        skipped: rows.len() - checked.len(),
        failures: checked.into_iter().filter(|r| r.lhs != r.rhs).collect(),
    })
}

/// Coprime pairs `(a, b)` with `lo_a ≤ a ≤ max_a`, `1 ≤ b ≤ max_b`, and `a < b` if `ordered`.
pub fn coprime_pairs(lo_a: u64, max_a: u64, max_b: u64, ordered: bool) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for a in lo_a..=max_a {
        for b in 1..=max_b {
            if (!ordered || a < b) && num_integer::gcd(a, b) == 1 {
                out.push((a, b));
            }
        }
    }
    out
}

/// Unknot plus torus companions `T(a,b)`, `2 ≤ a < b ≤ max`, against
/// stages `(p,q)` with `2 ≤ p ≤ max`, `q ≤ max`.
pub fn run_verify_moser(max: u64) -> Result<MoserReport> {
    if max < 2 {
        return Err(Error::Usage(format!("max must be at least 2, got {max}")));
    }
    let mut companions = vec![(1, 1)];
    companions.extend(coprime_pairs(2, max, max, true));
    moser_sweep(&companions, &coprime_pairs(2, max, max, false), max)
}

#[derive(Clone, Debug, Serialize)]
pub struct EngineFailure {
    pub index: usize,
    pub property: String,
    pub detail: String,
    pub complex: serde_json::Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct FixtureResult {
    pub name: String,
    pub results: DResults,
}

#[derive(Clone, Debug, Serialize)]
pub struct EngineReport {
    pub seed: u64,
    pub complexes: usize,
    pub pairs: usize,
    pub fixtures: Vec<FixtureResult>,
    pub failures: Vec<EngineFailure>,
}

impl EngineReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Expected `(d, d̲, d̄)` of the built-in fixtures.
pub fn fixture_expectations() -> Vec<(&'static str, IotaComplex, DResults)> {
    let r = |a, b, c| DResults {
        d: rat(a, 1),
        d_lower: rat(b, 1),
        d_upper: rat(c, 1),
    };
    vec![
        ("s3", fixtures::s3(), r(0, 0, 0)),
        ("swap", fixtures::swap(), r(0, 0, 0)),
        (
            "figure-eight-like",
            fixtures::figure_eight_like(),
            r(0, -2, 0),
        ),
    ]
}

fn is_identity(c: &IotaComplex) -> bool {
    c.iota()
        .iter()
        .enumerate()
        .all(|(i, image)| image.terms().eq([(i, 0)]))
}

/// Single-complex properties; returns `(property, detail)` on the first breach.
fn check_single(c: &IotaComplex, rng: &mut ChaCha8Rng) -> Checked {
    let fail = |p: &str, d: String| (p.to_string(), d);
    let v = ValidatedIota::new(c).map_err(|e| fail("validation", e.to_string()))?;
    let r = v
        .d_results()
        .map_err(|e| fail("d_lower ≤ d ≤ d_upper", e.to_string()))?;

    if is_identity(c) && !(r.d_lower == r.d && r.d == r.d_upper) {
        return Err(fail("ι = id gives equal invariants", format!("{r:?}")));
    }

    let oracle =
        brute_oracle(c, default_truncation(&v)).map_err(|e| fail("oracle", e.to_string()))?;
    if oracle != r {
        return Err(fail(
            "oracle agreement",
            format!("engine {r:?}, oracle {oracle:?}"),
        ));
    }

    let wide = v
        .d_results_with(SearchLimits { scale: 2 })
        .map_err(|e| fail("stability", e.to_string()))?;
    if wide != r {
        return Err(fail(
            "stability",
            format!("default {r:?}, doubled limits {wide:?}"),
        ));
    }

    let shift = rat(rng.gen_range(-6..=6), rng.gen_range(1..=4));
    let shifted = ValidatedIota::new(&c.shift(&shift))
        .and_then(|s| s.d_results())
        .map_err(|e| fail("shift covariance", e.to_string()))?;
    let expected = DResults {
        d: &r.d + &shift,
        d_lower: &r.d_lower + &shift,
        d_upper: &r.d_upper + &shift,
    };
    if shifted != expected {
        return Err(fail(
            "shift covariance",
            format!("shift {shift}: {shifted:?}"),
        ));
    }

    let mut order: Vec<usize> = (0..c.len()).collect();
    rand::seq::SliceRandom::shuffle(order.as_mut_slice(), rng);
    let permuted = c
        .permuted(&order)
        .and_then(|p| ValidatedIota::new(&p))
        .and_then(|p| p.d_results())
        .map_err(|e| fail("ordering independence", e.to_string()))?;
    if permuted != r {
        return Err(fail(
            "ordering independence",
            format!("{permuted:?} vs {r:?}"),
        ));
    }
    Ok(r)
}

/// Connected-sum properties of `A ⊗ B`.
fn check_pair(
    a: &DResults,
    b: &DResults,
    ab: &DResults,
) -> std::result::Result<(), (String, String)> {
    if ab.d != &a.d + &b.d {
        return Err(("d additive".into(), format!("{a:?} ⊗ {b:?} = {ab:?}")));
    }
    let chain = [
        &a.d_lower + &b.d_lower,
        ab.d_lower.clone(),
        &a.d_lower + &b.d_upper,
        ab.d_upper.clone(),
        &a.d_upper + &b.d_upper,
    ];
    if chain.windows(2).any(|w| w[0] > w[1]) {
        return Err((
            "tensor inequalities".into(),
            format!("{a:?} ⊗ {b:?} = {ab:?}"),
        ));
    }
    Ok(())
}

/// Seeded random suite plus the fixtures; consecutive complexes are also
/// paired under tensor product.
type Checked = std::result::Result<DResults, (String, String)>;

pub fn run_verify_engine(n_random: usize, seed: u64) -> Result<EngineReport> {
    if n_random == 0 {
        return Err(Error::Usage("need at least one random complex".into()));
    }
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<u64> = (0..n_random).map(|_| master.gen()).collect();

    let singles: Vec<(IotaComplex, Checked)> = with_pool(|| {
        seeds
            .par_iter()
            .map(|&s| {
                let c = random_iota_complex_seeded(s);
                let mut rng = ChaCha8Rng::seed_from_u64(s ^ 0x9e37_79b9_7f4a_7c15);
                let r = check_single(&c, &mut rng);
                (c, r)
            })
            .collect()
    });

    let mut failures = Vec::new();
    for (index, (c, r)) in singles.iter().enumerate() {
        if let Err((property, detail)) = r {
            failures.push(EngineFailure {
                index,
                property: property.clone(),
                detail: detail.clone(),
                complex: c.to_json_value(),
            });
        }
    }

    let pair_failures: Vec<Option<EngineFailure>> = with_pool(|| {
        (0..singles.len().saturating_sub(1))
            .into_par_iter()
            .map(|i| {
                let ((a, ra), (b, rb)) = (&singles[i], &singles[i + 1]);
                let (Ok(ra), Ok(rb)) = (ra, rb) else {
                    return None;
                };
                let va = ValidatedIota::new(a).ok()?;
                let vb = ValidatedIota::new(b).ok()?;
                let t = va.tensor(&vb);
                let outcome = t
                    .d_results()
                    .map_err(|e| ("tensor invariants".to_string(), e.to_string()))
                    .and_then(|rab| check_pair(ra, rb, &rab));
                outcome.err().map(|(property, detail)| EngineFailure {
                    index: i,
                    property,
                    detail,
                    complex: t.to_iota_complex().to_json_value(),
                })
            })
            .collect()
    });
    failures.extend(pair_failures.into_iter().flatten());

    let mut fixture_results = Vec::new();
    for (name, c, expected) in fixture_expectations() {
        let got = ValidatedIota::new(&c).and_then(|v| v.d_results())?;
        let oracle = brute_oracle(&c, default_truncation(&ValidatedIota::new(&c)?))?;
        if got != expected || oracle != expected {
            failures.push(EngineFailure {
                index: usize::MAX,
                property: format!("fixture {name}"),
                detail: format!("expected {expected:?}, engine {got:?}, oracle {oracle:?}"),
                complex: c.to_json_value(),
            });
        }
        fixture_results.push(FixtureResult {
            name: name.to_string(),
            results: got,
        });
    }

    Ok(EngineReport {
        seed,
        complexes: n_random,
        pairs: n_random - 1,
        fixtures: fixture_results,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_spot_value() {
        let row = identity13_sides(3, 5).unwrap();
        assert_eq!(row.lhs, rat(-1, 2));
        assert_eq!(row.rhs, rat(-1, 2));
    }

    #[test]
    fn identity_small_sweeps() {
        let r = run_verify_identity13(5).unwrap();
        assert_eq!(r.checked, 1);
        assert!(r.passed() && r.warning.is_none());
        let r = run_verify_identity13(3).unwrap();
        assert_eq!(r.checked, 0);
        assert!(r.passed() && r.warning.is_some());
        assert!(run_verify_identity13(15).unwrap().passed());
    }

    #[test]
    fn moser_examples() {
        let row = moser_check((1, 1), 3, 2).unwrap().unwrap();
        assert_eq!(row.lhs, row.rhs);
        let row = moser_check((2, 3), 2, 7).unwrap().unwrap();
        assert_eq!(row.lhs, row.rhs);
        assert_eq!(moser_check((2, 3), 3, 1).unwrap(), None);
    }

    #[test]
    fn small_moser_sweep() {
        let r = run_verify_moser(6).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert!(r.checked > 0 && r.skipped > 0);
    }

    #[test]
    fn small_engine_run() {
        let r = run_verify_engine(20, 3).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.fixtures.len(), 3);
    }
}
