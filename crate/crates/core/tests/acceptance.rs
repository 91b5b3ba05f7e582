//! Acceptance criteria, one PASS/FAIL line each. Exact comparisons only.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cablecalc::algebra::rat;
use cablecalc::concordance::{
    cable_inv_v0, iterated_cable, slice_obstruction, unknotting_bounds, CableStage, CustomKnot,
    KnotBase, KnotInvariants, KnotSpec, SliceVerdict, BOUND_HLP, BOUND_INVOLUTIVE_LOWER, BOUND_V0,
};
use cablecalc::iota::{brute_oracle, d_results, fixtures, DResults};
use cablecalc::torus::{gap_v, torus_vs};
use cablecalc::verify::{
    coprime_pairs, identity13_pairs, identity13_sides, moser_sweep, run_verify_engine,
};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn custom(v_lower: i64, v_upper: i64) -> KnotInvariants {
    KnotInvariants::custom(v_lower, v_upper, None, None, false).expect("valid invariants")
}

fn identity_sweep() -> Outcome {
    let pairs = identity13_pairs(35);
    let mut bad = Vec::new();
    for &(p, q) in &pairs {
        let row = identity13_sides(p, q).expect("odd coprime pair");
        if row.lhs != row.rhs {
            bad.push(format!("({p},{q}): {} vs {}", row.lhs, row.rhs));
        }
    }
    let spot = identity13_sides(3, 5).expect("pair");
    let spot_ok = spot.lhs == rat(-1, 2) && spot.rhs == rat(-1, 2);
    outcome(
        bad.is_empty() && spot_ok,
        format!(
            "{} odd coprime pairs 3 ≤ p < q ≤ 35, (3,5) sides {} and {}{}",
            pairs.len(),
            spot.lhs,
            spot.rhs,
            if bad.is_empty() {
                String::new()
            } else {
                format!("; mismatches {bad:?}")
            }
        ),
    )
}

fn example_bounds() -> Outcome {
    let companion = custom(3, 0);
    let stage = CableStage::new(3, 2).expect("stage");
    let report = unknotting_bounds(&stage, &companion, Some(0), None).expect("report");
    let cable = cable_inv_v0(&stage, &companion).expect("cable");
    let got = (
        report.value(BOUND_INVOLUTIVE_LOWER),
        report.value(BOUND_HLP),
        report.value(BOUND_V0),
        report.maximum,
        cable.v_lower,
    );
    outcome(
        got == (Some(6), Some(3), Some(1), 6, 4),
        format!(
            "involutive {:?}, HLP {:?}, V₀ {:?}, maximum {}, V̲₀(K_3,2) = {}",
            got.0, got.1, got.2, got.3, got.4
        ),
    )
}

fn family_scaling() -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for n in [3u64, 5, 7] {
        let stage = CableStage::new(n, 2).expect("stage");
        let report = unknotting_bounds(&stage, &custom(n as i64, 0), None, None).expect("report");
        let inv = report.value(BOUND_INVOLUTIVE_LOWER);
        let hlp = report.value(BOUND_HLP);
        let ok = inv == Some(2 * n as i64) && hlp == Some(n as i64) && inv > hlp;
        passed &= ok;
        parts.push(format!(
            "n={n}: involutive {} (expected {}), HLP {}",
            inv.map_or("-".into(), |v| v.to_string()),
            2 * n,
            hlp.map_or("-".into(), |v| v.to_string())
        ));
    }
    outcome(passed, parts.join("; "))
}

fn dual_v_algorithms() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for (p, q) in coprime_pairs(2, 30, 30, true) {
        let v = torus_vs(p, q).expect("coprime");
        let g = (p - 1) * (q - 1) / 2;
        for s in 0..=g {
            checked += 1;
            if v.get(s) != gap_v(p, q, s).expect("coprime") {
                bad.push((p, q, s));
            }
        }
    }
    let spot = torus_vs(2, 3).expect("pair").values() == [1, 0]
        && torus_vs(3, 5).expect("pair").values() == [2, 1, 1, 1, 0];
    outcome(
        bad.is_empty() && spot,
        format!(
            "{checked} entries over coprime 2 ≤ p < q ≤ 30, spot values {}, mismatches {bad:?}",
            if spot { "match" } else { "differ" }
        ),
    )
}

fn moser_consistency() -> Outcome {
    let stages = coprime_pairs(1, 4, 25, false);
    let report = moser_sweep(&[(2, 3), (2, 5), (3, 4), (3, 5)], &stages, 25).expect("sweep");
    outcome(
        report.passed() && report.checked > 0,
        format!(
            "{} stages in the L-space regime, {} skipped, {} mismatches",
            report.checked,
            report.skipped,
            report.failures.len()
        ),
    )
}

fn engine_suite() -> Outcome {
    let report = run_verify_engine(500, 1).expect("suite");
    let detail = match report.failures.first() {
        None => format!(
            "{} complexes, {} tensor pairs",
            report.complexes, report.pairs
        ),
        Some(f) => format!(
            "{} failures, first: #{} {}: {}",
            report.failures.len(),
            f.index,
            f.property,
            f.detail
        ),
    };
    outcome(report.passed(), detail)
}

fn fixture_values() -> Outcome {
    let r = |a, b, c| DResults {
        d: rat(a, 1),
        d_lower: rat(b, 1),
        d_upper: rat(c, 1),
    };
    let fig8 = d_results(&fixtures::figure_eight_like()).expect("valid");
    let fig8_oracle = brute_oracle(&fixtures::figure_eight_like(), 8).expect("valid");
    let swap = d_results(&fixtures::swap()).expect("valid");
    let swap_oracle = brute_oracle(&fixtures::swap(), 4).expect("valid");
    // V = -d/2 for the +1-surgery reading
    let v = |d: &cablecalc::algebra::Rational| -(d.clone()) / rat(2, 1);
    let vs = (v(&fig8.d), v(&fig8.d_lower), v(&fig8.d_upper));
    let passed = fig8 == r(0, -2, 0)
        && fig8_oracle == fig8
        && swap == r(0, 0, 0)
        && swap_oracle == swap
        && vs == (rat(0, 1), rat(1, 1), rat(0, 1));
    outcome(
        passed,
        format!(
            "figure-eight-like ({}, {}, {}), (V₀, V̲₀, V̄₀) = ({}, {}, {}); swap ({}, {}, {})",
            fig8.d,
            fig8.d_lower,
            fig8.d_upper,
            vs.0,
            vs.1,
            vs.2,
            swap.d,
            swap.d_lower,
            swap.d_upper
        ),
    )
}

fn iterated_slice() -> Outcome {
    let spec = |v_lower, v_upper| KnotSpec {
        base: KnotBase::Custom(CustomKnot {
            v_lower,
            v_upper,
            v_seq: None,
            genus3: None,
            lspace: false,
        }),
        stages: vec![(3, 1), (5, 1)],
    };
    let out = iterated_cable(&spec(1, 0)).expect("stages apply");
    let verdict = slice_obstruction(&out);
    let trivial = slice_obstruction(&iterated_cable(&spec(0, 0)).expect("stages apply"));
    outcome(
        (out.v_lower, out.v_upper) == (1, 0)
            && verdict == SliceVerdict::Obstructed
            && verdict.to_string() == "obstructed (not smoothly slice)"
            && trivial == SliceVerdict::NoObstruction,
        format!(
            "({}, {}) gives \"{verdict}\"; (0, 0) gives \"{trivial}\"",
            out.v_lower, out.v_upper
        ),
    )
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            "lens space identity sweep",
            Duration::from_secs(1),
            identity_sweep,
        ),
        (
            "example bounds report",
            Duration::from_secs(1),
            example_bounds,
        ),
        ("(n,2)-cable family", Duration::from_secs(1), family_scaling),
        (
            "V_s by torsion coefficients and by gap counts",
            Duration::from_secs(1),
            dual_v_algorithms,
        ),
        (
            "surgery on cables against the connected-sum splitting",
            Duration::from_secs(5),
            moser_consistency,
        ),
        (
            "engine property suite",
            Duration::from_secs(60),
            engine_suite,
        ),
        ("fixture invariants", Duration::from_secs(1), fixture_values),
        (
            "iterated (p,1)-cables and sliceness",
            Duration::from_secs(1),
            iterated_slice,
        ),
    ];
    let mut failed = 0;
    for (k, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        let elapsed = start.elapsed();
        failed += usize::from(!o.passed);
        println!(
            "criterion {}: {} {name}: {} [{:.3}s, budget {}s]",
            k + 1,
            if o.passed { "PASS" } else { "FAIL" },
            o.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
