use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cablecalc::algebra::Rational;
use cablecalc::concordance::{
    genus_bounds, involutive_surgery_d, iterated_cable, niwu_d, slice_obstruction,
    unknotting_bounds, CableStage, KnotInvariants, KnotSpec, Parity,
};
use cablecalc::iota::{brute_oracle, default_truncation, tensor, IotaComplex, ValidatedIota};
use cablecalc::lens::{lens_d, lens_d_all};
use cablecalc::torus::torus_vs;
use cablecalc::verify::{run_verify_engine, run_verify_identity13, run_verify_moser};
use cablecalc::Error;

const JSON_VERSION: u32 = 1;
const DEFAULT_SEED: u64 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "cablecalc",
    version,
    about = "Involutive correction terms of cables, lens spaces and iota-complexes"
)]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,

    /// Write the output to a file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lens space d-invariants.
    #[command(subcommand)]
    Lens(LensCmd),
    /// Torus knot V sequences.
    #[command(subcommand)]
    Torus(TorusCmd),
    /// Involutive invariants of an iterated cable.
    #[command(subcommand)]
    Cable(CableCmd),
    /// Unknotting-number bounds for a cable of the knot in a knot file.
    Bounds(BoundsArgs),
    /// d-invariants of surgeries.
    #[command(subcommand)]
    Surgery(SurgeryCmd),
    /// Iota-complexes from JSON files.
    #[command(subcommand)]
    Complex(ComplexCmd),
    /// Identity sweeps and the randomized engine suite.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand, Debug)]
enum LensCmd {
    /// d(L(p,q), [i]) for one label or all of them.
    D {
        p: u64,
        q: u64,
        #[arg(long)]
        spinc: Option<u64>,
    },
}

#[derive(Subcommand, Debug)]
enum TorusCmd {
    /// V_0, ..., V_g of T(p,q).
    Vs { p: u64, q: u64 },
}

#[derive(Subcommand, Debug)]
enum CableCmd {
    /// V̲₀ and V̄₀ of the knot described by a knot file.
    V0 {
        /// Knot file (JSON)
        #[arg(long)]
        spec: PathBuf,
    },
}

#[derive(Args, Debug)]
struct BoundsArgs {
    /// Knot file (JSON)
    #[arg(long)]
    spec: PathBuf,
    /// Cabling parameters p,q.
    #[arg(long, value_parser = parse_pair)]
    stage: (u64, u64),
    #[arg(long, value_enum)]
    g4_parity: Option<ParityArg>,
    /// V₀ of the companion, when the knot file carries no V sequence.
    #[arg(long, allow_hyphen_values = true)]
    v0: Option<i64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ParityArg {
    Odd,
    Even,
}

#[derive(Subcommand, Debug)]
enum SurgeryCmd {
    /// d(S³_{p/q}(K)) in every label, or (d̲, d̄) at the self-conjugate ones.
    D {
        /// Knot file (JSON)
        #[arg(long)]
        spec: PathBuf,
        /// Surgery coefficient p/q, written p,q
        #[arg(long, value_parser = parse_pair)]
        pq: (u64, u64),
        /// Only the self-conjugate labels, with d̲ and d̄
        #[arg(long)]
        involutive: bool,
    },
}

#[derive(Subcommand, Debug)]
enum ComplexCmd {
    /// Runs every iota-complex check.
    Validate { file: PathBuf },
    /// d, d̲, d̄ and the homology of the complex.
    Invariants { file: PathBuf },
    /// d, d̲, d̄ by exhaustive search.
    Oracle {
        file: PathBuf,
        #[arg(long)]
        truncation: Option<u32>,
    },
    /// Tensor product of two complexes, as a complex file.
    Tensor { left: PathBuf, right: PathBuf },
    /// Grading shift by a rational, as a complex file.
    Shift {
        file: PathBuf,
        #[arg(allow_hyphen_values = true)]
        by: Rational,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    /// d(L(pq,1),[0]) - 2V₀(T(p,q)) against the lens space sum, odd coprime p < q ≤ max.
    Identity13 {
        #[arg(long, default_value_t = 35)]
        max: u64,
    },
    /// Surgery on cables of torus knots against the connected-sum splitting.
    Moser {
        #[arg(long, default_value_t = 12)]
        max: u64,
    },
    /// Randomized iota-complexes against the oracle and the tensor inequalities.
    Engine {
        #[arg(long, default_value_t = 500)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// All three with their defaults.
    All {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

fn parse_pair(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected p,q, got {s:?}"))?;
    let parse = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("{t:?}: {e}"));
    Ok((parse(a)?, parse(b)?))
}

/// What a command produced: text, JSON, and the exit code of a failed check.
struct Output {
    text: String,
    json: Value,
    failure: Option<u8>,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output {
            text,
            json,
            failure: None,
        }
    }
}

/// Exit code for a complex that fails validation.
const EXIT_INVALID: u8 = 2;
/// Exit code for a verification sweep that found a counterexample.
const EXIT_ASSERTION: u8 = 3;

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn load_complex(path: &Path) -> Result<IotaComplex, Error> {
    IotaComplex::from_json_str(&read(path)?)
}

fn load_knot(path: &Path) -> Result<KnotInvariants, Error> {
    iterated_cable(&KnotSpec::from_json_str(&read(path)?)?)
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref()
        .map_or_else(|| "unknown".to_string(), T::to_string)
}

fn knot_text(inv: &KnotInvariants) -> String {
    let v_seq = inv.v_seq.as_ref().map_or_else(
        || "unavailable".to_string(),
        |v| {
            v.values()
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        },
    );
    format!(
        "V̲₀ = {}\nV̄₀ = {}\nV_s = {}\ng₃ = {}\nL-space knot: {}\n",
        inv.v_lower,
        inv.v_upper,
        v_seq,
        opt(&inv.genus3),
        if inv.lspace { "yes" } else { "unknown" }
    )
}

fn run(command: Command) -> Result<Output, Error> {
    match command {
        Command::Lens(LensCmd::D { p, q, spinc }) => {
            let values: Vec<(u64, Rational)> = match spinc {
                Some(i) => vec![(i, lens_d(p, q, i)?)],
                None => lens_d_all(p, q)?
                    .into_iter()
                    .enumerate()
                    .map(|(i, d)| (i as u64, d))
                    .collect(),
            };
            let text = values
                .iter()
                .map(|(i, d)| format!("d(L({p},{q}), [{i}]) = {d}\n"))
                .collect();
            let json = json!({
                "p": p, "q": q,
                "values": values.iter().map(|(i, d)| json!({"spinc": i, "d": d})).collect::<Vec<_>>(),
            });
            Ok(Output::ok(text, json))
        }
        Command::Torus(TorusCmd::Vs { p, q }) => {
            let v = torus_vs(p, q)?;
            let list: Vec<String> = v.values().iter().map(u64::to_string).collect();
            Ok(Output::ok(
                format!("V(T({p},{q})) = ({})\n", list.join(", ")),
                json!({"p": p, "q": q, "v_seq": v}),
            ))
        }
        Command::Cable(CableCmd::V0 { spec }) => {
            let inv = load_knot(&spec)?;
            let verdict = slice_obstruction(&inv);
            let g4 = genus_bounds(&inv);
            let text = format!("{}g₄ ≥ {g4}\nslice: {verdict}\n", knot_text(&inv));
            let json = json!({
                "invariants": inv,
                "g4_lower_bound": g4,
                "slice_verdict": verdict.to_string(),
            });
            Ok(Output::ok(text, json))
        }
        Command::Bounds(args) => {
            let companion = load_knot(&args.spec)?;
            let stage = CableStage::new(args.stage.0, args.stage.1)?;
            let v0 = args.v0.or(companion.v_seq.as_ref().map(|v| v.v0() as i64));
            let parity = args.g4_parity.map(|p| match p {
                ParityArg::Odd => Parity::Odd,
                ParityArg::Even => Parity::Even,
            });
            let report = unknotting_bounds(&stage, &companion, v0, parity)?;
            let mut text = format!("u(K_{{{},{}}}) lower bounds:\n", stage.p, stage.q);
            for e in &report.entries {
                let value = e.value.map_or_else(|| "-".to_string(), |v| v.to_string());
                text.push_str(&format!("  {:<28} {:>4}   {}\n", e.name, value, e.note));
            }
            text.push_str(&format!("maximum: {}\n", report.maximum));
            Ok(Output::ok(text, serde_json::to_value(&report)?))
        }
        Command::Surgery(SurgeryCmd::D {
            spec,
            pq: (p, q),
            involutive,
        }) => {
            let inv = load_knot(&spec)?;
            if involutive {
                let rows = involutive_surgery_d(p, q, &inv)?;
                let text = rows
                    .iter()
                    .map(|r| {
                        format!(
                            "[{}]: d̲ = {}, d̄ = {}\n",
                            r.label.value, r.d_lower, r.d_upper
                        )
                    })
                    .collect();
                Ok(Output::ok(
                    text,
                    json!({"p": p, "q": q, "self_conjugate": rows}),
                ))
            } else {
                let v = inv.v_seq.as_ref().ok_or_else(|| Error::Insufficient {
                    field: "v_seq".into(),
                    context: format!("d of {p}/{q} surgery"),
                })?;
                let values = niwu_d(p, q, v)?;
                let text = values
                    .iter()
                    .enumerate()
                    .map(|(s, d)| format!("d(S³_{p}/{q}(K), [{s}]) = {d}\n"))
                    .collect();
                Ok(Output::ok(text, json!({"p": p, "q": q, "d": values})))
            }
        }
        Command::Complex(cmd) => run_complex(cmd),
        Command::Verify(cmd) => run_verify(cmd),
    }
}

fn run_complex(cmd: ComplexCmd) -> Result<Output, Error> {
    match cmd {
        ComplexCmd::Validate { file } => {
            let report = load_complex(&file)?.validate();
            let mut text = String::new();
            for c in &report.checks {
                let status = if c.passed { "ok" } else { "FAILED" };
                text.push_str(&format!("{status:>6}  {}", c.name));
                if let Some(d) = &c.detail {
                    text.push_str(&format!(": {d}"));
                }
                text.push('\n');
            }
            let valid = report.passed();
            let json = json!({"valid": valid, "checks": report.checks});
            Ok(Output {
                text,
                json,
                failure: (!valid).then_some(EXIT_INVALID),
            })
        }
        ComplexCmd::Invariants { file } => {
            let v = ValidatedIota::new(&load_complex(&file)?)?;
            let r = v.d_results()?;
            let s = v.summary();
            let torsion: Vec<String> = s
                .torsion
                .iter()
                .map(|t| format!("F[U]/U^{} at {}", t.order, t.grading))
                .collect();
            let text = format!(
                "d = {}\nd̲ = {}\nd̄ = {}\nhomology: F[U] at {}{}{}\n",
                r.d,
                r.d_lower,
                r.d_upper,
                s.free_grading,
                if torsion.is_empty() { "" } else { " ⊕ " },
                torsion.join(" ⊕ ")
            );
            Ok(Output::ok(text, json!({"results": r, "homology": s})))
        }
        ComplexCmd::Oracle { file, truncation } => {
            let c = load_complex(&file)?;
            let t = match truncation {
                Some(t) => t,
                None => default_truncation(&ValidatedIota::new(&c)?),
            };
            let r = brute_oracle(&c, t)?;
            Ok(Output::ok(
                format!(
                    "truncation {t}\nd = {}\nd̲ = {}\nd̄ = {}\n",
                    r.d, r.d_lower, r.d_upper
                ),
                json!({"truncation": t, "results": r}),
            ))
        }
        ComplexCmd::Tensor { left, right } => {
            let t = tensor(&load_complex(&left)?, &load_complex(&right)?)?;
            complex_output(&t)
        }
        ComplexCmd::Shift { file, by } => {
            let c = load_complex(&file)?;
            let report = c.validate();
            if let Some(f) = report.first_failure() {
                return Err(Error::Validation(f));
            }
            complex_output(&c.shift(&by))
        }
    }
}

fn complex_output(c: &IotaComplex) -> Result<Output, Error> {
    let value = c.to_json_value();
    let text = serde_json::to_string_pretty(&value)? + "\n";
    Ok(Output::ok(text, json!({"complex": value})))
}

fn run_verify(cmd: VerifyCmd) -> Result<Output, Error> {
    match cmd {
        VerifyCmd::Identity13 { max } => identity_output(max),
        VerifyCmd::Moser { max } => moser_output(max),
        VerifyCmd::Engine { n, seed } => engine_output(n, seed),
        VerifyCmd::All { seed } => {
            let parts = [
                identity_output(35)?,
                moser_output(12)?,
                engine_output(500, seed)?,
            ];
            let text = parts.iter().map(|p| p.text.as_str()).collect();
            let failure = parts.iter().find_map(|p| p.failure);
            let json = json!({
                "identity13": parts[0].json,
                "moser": parts[1].json,
                "engine": parts[2].json,
            });
            Ok(Output {
                text,
                json,
                failure,
            })
        }
    }
}

fn status(failed: bool) -> &'static str {
    if failed {
        "FAIL"
    } else {
        "PASS"
    }
}

fn identity_output(max: u64) -> Result<Output, Error> {
    let r = run_verify_identity13(max)?;
    let mut text = format!(
        "identity13 (max {max}): {} pairs checked, {}\n",
        r.checked,
        status(!r.passed())
    );
    if let Some(w) = &r.warning {
        text.push_str(&format!("  warning: {w}\n"));
    }
    for f in &r.failures {
        text.push_str(&format!("  ({}, {}): {} ≠ {}\n", f.p, f.q, f.lhs, f.rhs));
    }
    Ok(Output {
        text,
        failure: (!r.passed()).then_some(EXIT_ASSERTION),
        json: serde_json::to_value(&r)?,
    })
}

fn moser_output(max: u64) -> Result<Output, Error> {
    let r = run_verify_moser(max)?;
    let mut text = format!(
        "moser (max {max}): {} checked, {} skipped outside the L-space regime, {}\n",
        r.checked,
        r.skipped,
        status(!r.passed())
    );
    for f in &r.failures {
        text.push_str(&format!(
            "  T({},{}) stage ({}, {}): {} ≠ {}\n",
            f.companion.0, f.companion.1, f.p, f.q, f.lhs, f.rhs
        ));
    }
    Ok(Output {
        text,
        failure: (!r.passed()).then_some(EXIT_ASSERTION),
        json: serde_json::to_value(&r)?,
    })
}

fn engine_output(n: usize, seed: u64) -> Result<Output, Error> {
    let r = run_verify_engine(n, seed)?;
    let mut text = format!(
        "engine (seed {seed}): {} complexes, {} tensor pairs, {}\n",
        r.complexes,
        r.pairs,
        status(!r.passed())
    );
    for f in &r.fixtures {
        text.push_str(&format!(
            "  fixture {}: (d, d̲, d̄) = ({}, {}, {})\n",
            f.name, f.results.d, f.results.d_lower, f.results.d_upper
        ));
    }
    for f in &r.failures {
        text.push_str(&format!(
            "  #{} {}: {}\n    {}\n",
            f.index, f.property, f.detail, f.complex
        ));
    }
    Ok(Output {
        text,
        failure: (!r.passed()).then_some(EXIT_ASSERTION),
        json: serde_json::to_value(&r)?,
    })
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, content).map_err(Error::Io),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let json = cli.json;
    let out = cli.out.clone();
    match run(cli.command) {
        Ok(output) => {
            let content = if json {
                let mut v = json!({"version": JSON_VERSION});
                if let (Value::Object(m), Value::Object(extra)) = (&mut v, output.json) {
                    m.extend(extra);
                }
                serde_json::to_string_pretty(&v).expect("json") + "\n"
            } else {
                output.text
            };
            if let Err(e) = emit(&out, &content) {
                eprintln!("error: {e}");
                return ExitCode::from(e.exit_code() as u8);
            }
            output.failure.map_or(ExitCode::SUCCESS, ExitCode::from)
        }
        Err(e) => {
            if json {
                let v = json!({"version": JSON_VERSION, "error": e.to_string(), "exit_code": e.exit_code()});
                eprintln!("{}", serde_json::to_string_pretty(&v).expect("json"));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
