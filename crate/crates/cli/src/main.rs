//! annuli: batch front end over the exact-arithmetic annulus toolkit.
//! One JSON problem document in (stdin or --input), one deterministic
//! document out; every rational crosses the boundary as an "a/b" string.

mod problem;

use std::collections::BTreeMap;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use annuli_core::annuli::AnnulusLength;
use annuli_core::cochains::{harm_group, theta_assemble, Cochain};
use annuli_core::lengthlab::{localize, pair_report, profile_direct};
use annuli_core::points::{fiber_count, fiber_tree, push_p, TrunkPoint};
use annuli_core::residues::ExtScalar;
use annuli_core::torsors::{
    witness_skeleton_solvable, witness_threshold_solvable, Certificate, ProbeOutcome,
    RadiusBound, TorsorClass, Verdict,
};
use annuli_core::valnum::{Endpoint, LogMag};
use annuli_core::{LogInterval, Rat, Thresholds};
use clap::{Parser, Subcommand};
use num_traits::{Signed, Zero};
use serde::Deserialize;
use serde_json::{json, Value};

use problem::{domain, validation, CmdError, ProblemFile, RatStr};

#[derive(Parser)]
#[command(name = "annuli", disable_help_subcommand = true)]
struct Cli {
    /// problem file; standard input when omitted
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    /// exit 4 instead of 0 when a verdict comes back unknown
    #[arg(long, global = true)]
    strict: bool,

    /// tab-separated output (fiber-tree only)
    #[arg(long, global = true)]
    tsv: bool,

    /// profile truncation degree
    #[arg(long, global = true, default_value_t = 32)]
    n_max: u32,

    /// residue-descent iteration cap
    #[arg(long, global = true, default_value_t = 24)]
    max_iter: u32,

    /// reserved for randomized vector generation; accepted and unused
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Subcommand)]
enum Cmd {
    /// tropical evaluation of newton data at one radius
    Eval,
    /// dominant degree of newton data over the annulus interval
    Dominant,
    /// fiber count of z -> z^{p^h} over one trunk point
    Fibers,
    /// fiber counts over a radius sweep
    FiberTree,
    /// push a trunk point through z -> z^p
    Push,
    /// harmonic-cochain group of the semigraph
    Harm,
    /// assemble per-edge degrees into a cochain and test harmonicity
    Theta,
    /// is the named edge a bridge?
    Bridge,
    /// norm-level splitting locus of the class
    SplitLocus,
    /// splitting verdict of the class at one radius
    SplitVerdict,
    /// splitting radius of the class around a rigid center
    SplitRadius,
    /// are two annuli isomorphic?
    AnnulusIso,
    /// localize a length from its threshold profile
    LengthLocalize,
    /// profile every grid pair and report the 2c bound status
    Thm1Sweep,
    /// solvability witnesses: skeleton rescale or edge threshold
    WitnessSolvable,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(u8::try_from(e.code).unwrap_or(2))
        }
    }
}

fn read_problem(cli: &Cli) -> Result<ProblemFile, CmdError> {
    let text = match &cli.input {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| validation(format!("cannot read {}: {e}", path.display())))?,
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| validation(format!("cannot read standard input: {e}")))?;
            buf
        }
    };
    ProblemFile::parse(&text)
}

fn run(cli: &Cli) -> Result<u8, CmdError> {
    let pf = read_problem(cli)?;
    if cli.tsv && !matches!(cli.cmd, Cmd::FiberTree) {
        return Err(validation("--tsv is only supported by fiber-tree"));
    }
    match cli.cmd {
        Cmd::Eval => cmd_eval(&pf),
        Cmd::Dominant => cmd_dominant(&pf),
        Cmd::Fibers => cmd_fibers(&pf),
        Cmd::FiberTree => cmd_fiber_tree(&pf, cli.tsv),
        Cmd::Push => cmd_push(&pf),
        Cmd::Harm => cmd_harm(&pf),
        Cmd::Theta => cmd_theta(&pf),
        Cmd::Bridge => cmd_bridge(&pf),
        Cmd::SplitLocus => cmd_split_locus(&pf),
        Cmd::SplitVerdict => cmd_split_verdict(&pf, cli.max_iter, cli.strict),
        Cmd::SplitRadius => cmd_split_radius(&pf, cli.max_iter),
        Cmd::AnnulusIso => cmd_annulus_iso(&pf),
        Cmd::LengthLocalize => cmd_length_localize(&pf, cli.n_max),
        Cmd::Thm1Sweep => cmd_thm1_sweep(&pf, cli.n_max),
        Cmd::WitnessSolvable => cmd_witness_solvable(&pf),
    }
}

// ---------------------------------------------------------------------
// serialization helpers

fn rs(r: &Rat) -> String {
    r.to_string()
}

fn mag_s(m: &LogMag) -> String {
    m.to_string()
}

fn end_json(e: &Endpoint, unbounded: &str) -> (String, bool) {
    match e {
        Endpoint::Unbounded => (unbounded.to_string(), false),
        Endpoint::At { value, closed } => (rs(value), *closed),
    }
}

fn interval_json(iv: &LogInterval) -> Value {
    if iv.is_empty() {
        return Value::Null;
    }
    let (lo, lo_closed) = end_json(iv.lo(), "-inf");
    let (hi, hi_closed) = end_json(iv.hi(), "inf");
    json!({ "lo": lo, "lo_closed": lo_closed, "hi": hi, "hi_closed": hi_closed })
}

fn length_json(l: &AnnulusLength) -> Value {
    match l {
        AnnulusLength::Infinite => Value::String("inf".into()),
        AnnulusLength::Finite(r) => Value::String(rs(r)),
    }
}

fn cochain_json(c: &Cochain) -> Value {
    let map: BTreeMap<&String, i64> = c.values().iter().map(|(k, v)| (k, *v)).collect();
    json!(map)
}

/// Write one output document plus trailing newline; a closed pipe is a
/// consumer's choice, not an error.
fn emit_text(text: &str) -> Result<u8, CmdError> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}") {
        Ok(()) => Ok(0),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(0),
        Err(e) => Err(CmdError { code: 2, msg: format!("cannot write output: {e}") }),
    }
}

fn emit(v: &Value) -> Result<u8, CmdError> {
    emit_text(&serde_json::to_string_pretty(v).expect("output maps are string-keyed"))
}

// ---------------------------------------------------------------------
// commands

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LambdaParams {
    lambda: RatStr,
}

fn cmd_eval(pf: &ProblemFile) -> Result<u8, CmdError> {
    let nd = pf.newton_data()?;
    let p: LambdaParams = pf.params()?;
    let lambda = p.lambda.0;
    emit(&json!({
        "lambda": rs(&lambda),
        "value": rs(&nd.eval_at(&lambda)),
        "argmax": nd.argmax_at(&lambda),
    }))
}

fn cmd_dominant(pf: &ProblemFile) -> Result<u8, CmdError> {
    let nd = pf.newton_data()?;
    let iv = match &pf.annulus {
        Some(spec) => spec.interval()?,
        None => LogInterval::new(Endpoint::Unbounded, Endpoint::Unbounded)
            .expect("full line"),
    };
    let degree = nd.dominant_degree(&iv);
    emit(&json!({
        "interval": interval_json(&iv),
        "degree": degree,
        "invertible": degree.is_some(),
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FibersParams {
    h: u32,
    m: RatStr,
    r: RatStr,
}

fn cmd_fibers(pf: &ProblemFile) -> Result<u8, CmdError> {
    let th = Thresholds::new(pf.p);
    let prm: FibersParams = pf.params()?;
    let count = fiber_count(&th, prm.h, &prm.m.0, &prm.r.0).map_err(domain)?;
    emit(&json!({
        "p": pf.p,
        "h": prm.h,
        "m": rs(&prm.m.0),
        "r": rs(&prm.r.0),
        "count": count,
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FiberTreeParams {
    h: u32,
    m: RatStr,
    radii: Vec<RatStr>,
}

fn cmd_fiber_tree(pf: &ProblemFile, tsv: bool) -> Result<u8, CmdError> {
    let th = Thresholds::new(pf.p);
    let prm: FiberTreeParams = pf.params()?;
    let radii: Vec<Rat> = prm.radii.iter().map(|r| r.0.clone()).collect();
    let rows = fiber_tree(&th, prm.h, &prm.m.0, &radii).map_err(domain)?;
    if tsv {
        let mut text = String::from("radius\tcount");
        for row in &rows {
            text.push_str(&format!("\n{}\t{}", rs(&row.radius), row.count));
        }
        return emit_text(&text);
    }
    let separations: Vec<String> =
        rows.first().map(|r| r.separations.iter().map(rs).collect()).unwrap_or_default();
    emit(&json!({
        "p": pf.p,
        "h": prm.h,
        "m": rs(&prm.m.0),
        "separations": separations,
        "rows": rows
            .iter()
            .map(|r| json!({ "radius": rs(&r.radius), "count": r.count }))
            .collect::<Vec<_>>(),
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PushParams {
    center_mag: RatStr,
    radius: RatStr,
    #[serde(default = "default_tag")]
    tag: String,
}

fn default_tag() -> String {
    "z".into()
}

fn cmd_push(pf: &ProblemFile) -> Result<u8, CmdError> {
    let th = Thresholds::new(pf.p);
    let prm: PushParams = pf.params()?;
    let pt = TrunkPoint::new(prm.center_mag.0, prm.radius.0, prm.tag).map_err(domain)?;
    let image = push_p(&pt, &th).map_err(domain)?;
    emit(&json!({
        "p": pf.p,
        "center_mag": rs(&image.center_mag),
        "radius": rs(&image.radius),
        "center_tag": image.center_tag,
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModulusParams {
    n: u64,
}

fn cmd_harm(pf: &ProblemFile) -> Result<u8, CmdError> {
    let g = pf.graph()?;
    let prm: ModulusParams = pf.params()?;
    if prm.n < 2 {
        return Err(validation("harm: the modulus n must be at least 2"));
    }
    let hs = harm_group(&g, prm.n);
    emit(&json!({
        "n": prm.n,
        "invariant_factors": hs.invariant_factors,
        "generators": hs.generators.iter().map(cochain_json).collect::<Vec<_>>(),
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ThetaParams {
    n: u64,
    degrees: BTreeMap<String, i64>,
}

fn cmd_theta(pf: &ProblemFile) -> Result<u8, CmdError> {
    let g = pf.graph()?;
    let prm: ThetaParams = pf.params()?;
    if prm.n < 2 {
        return Err(validation("theta: the modulus n must be at least 2"));
    }
    let (cochain, harmonic) =
        theta_assemble(&g, &prm.degrees, prm.n).map_err(|e| validation(format!("theta: {e}")))?;
    emit(&json!({
        "n": prm.n,
        "cochain": cochain_json(&cochain),
        "harmonic": harmonic,
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeParams {
    edge: String,
}

fn cmd_bridge(pf: &ProblemFile) -> Result<u8, CmdError> {
    let g = pf.graph()?;
    let prm: EdgeParams = pf.params()?;
    let bridge =
        g.is_bridge(&prm.edge).map_err(|e| validation(format!("bridge: {e}")))?;
    emit(&json!({ "edge": prm.edge, "bridge": bridge }))
}

fn torsor_class(pf: &ProblemFile) -> Result<TorsorClass, CmdError> {
    let ann = pf.annulus_spec()?.annulus()?;
    if pf.laurent.is_some() {
        TorsorClass::from_laurent(pf.p, pf.laurent_data()?, ann).map_err(domain)
    } else if pf.newton.is_some() {
        TorsorClass::from_newton(pf.p, pf.newton_data()?, ann).map_err(domain)
    } else {
        Err(validation("this command needs a \"laurent\" or \"newton\" block"))
    }
}

fn cmd_split_locus(pf: &ProblemFile) -> Result<u8, CmdError> {
    let th = Thresholds::new(pf.p);
    let class = torsor_class(pf)?;
    emit(&json!({
        "p": pf.p,
        "dominant_degree": class.dominant_degree(),
        "cochain_value": class.cochain_value(),
        "locus": interval_json(&class.split_locus(&th)),
    }))
}

fn certificate_json(c: &Certificate) -> Value {
    match c {
        Certificate::Degree { degree } => json!({ "type": "degree", "degree": degree }),
        Certificate::Residue(cert) => json!({
            "type": "residue",
            "lambda": rs(&cert.lambda),
            "level": rs(&cert.level),
            "residue": cert.residue.to_string(),
            "degree": cert.degree,
        }),
    }
}

fn cmd_split_verdict(pf: &ProblemFile, max_iter: u32, strict: bool) -> Result<u8, CmdError> {
    let th = Thresholds::new(pf.p);
    let class = torsor_class(pf)?;
    let prm: LambdaParams = pf.params()?;
    let lambda = prm.lambda.0;
    let report = class.split_verdict_report(&lambda, max_iter, &th).map_err(domain)?;
    let (verdict, reason) = match report.verdict {
        Verdict::Split => ("split", None),
        Verdict::NotSplit => ("not-split", None),
        Verdict::Unknown(r) => ("unknown", Some(r.to_string())),
    };
    let out = json!({
        "lambda": rs(&lambda),
        "verdict": verdict,
        "reason": reason,
        "iterations": report.iterations,
        "certificate": report.certificate.as_ref().map(certificate_json),
    });
    let code = emit(&out)?;
    if strict && matches!(report.verdict, Verdict::Unknown(_)) {
        return Ok(4);
    }
    Ok(code)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScalarSpec {
    unit: RatStr,
    exponent: RatStr,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SplitRadiusParams {
    alpha: ScalarSpec,
    #[serde(default = "default_i_max")]
    i_max: u32,
}

fn default_i_max() -> u32 {
    8
}

fn cmd_split_radius(pf: &ProblemFile, max_iter: u32) -> Result<u8, CmdError> {
    let th = Thresholds::new(pf.p);
    let class = torsor_class(pf)?;
    let prm: SplitRadiusParams = pf.params()?;
    if prm.alpha.unit.0.is_zero() {
        return Err(validation("split-radius: alpha must be nonzero"));
    }
    let alpha = ExtScalar::from_terms(pf.p, vec![(prm.alpha.unit.0, prm.alpha.exponent.0)]);
    let (bound, probes) = class
        .split_radius_rigid_report(&alpha, prm.i_max, max_iter, &th)
        .map_err(domain)?;
    let bound_json = match &bound {
        RadiusBound::Exact(r) => json!({ "exact": rs(r) }),
        RadiusBound::Bounds { lower, upper } => {
            json!({ "lower": rs(lower), "upper": rs(upper) })
        }
    };
    emit(&json!({
        "alpha": alpha.to_string(),
        "center_mag": mag_s(&alpha.mag()),
        "i_max": prm.i_max,
        "bound": bound_json,
        "probes": probes
            .iter()
            .map(|pr| {
                let (outcome, reason) = match &pr.outcome {
                    ProbeOutcome::Split => ("split", None),
                    ProbeOutcome::NotSplit => ("not-split", None),
                    ProbeOutcome::Inconclusive(r) => ("inconclusive", Some(r.clone())),
                };
                json!({ "radius": rs(&pr.radius), "outcome": outcome, "reason": reason })
            })
            .collect::<Vec<_>>(),
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AnnulusIsoParams {
    other: problem::AnnulusSpec,
}

fn cmd_annulus_iso(pf: &ProblemFile) -> Result<u8, CmdError> {
    let a = pf.annulus_spec()?.annulus()?;
    let prm: AnnulusIsoParams = pf.params()?;
    let b = prm.other.annulus()?;
    emit(&json!({
        "isomorphic": a.is_isomorphic(&b),
        "length": length_json(&a.length()),
        "other_length": length_json(&b.length()),
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LengthParams {
    length: String,
}

fn parse_length(s: &str) -> Result<AnnulusLength, CmdError> {
    match s.trim() {
        "inf" | "+inf" => Ok(AnnulusLength::Infinite),
        t => {
            let l = problem::parse_rat(t)?;
            if !l.is_positive() {
                return Err(validation("length must be positive"));
            }
            Ok(AnnulusLength::Finite(l))
        }
    }
}

fn cmd_length_localize(pf: &ProblemFile, n_max: u32) -> Result<u8, CmdError> {
    let th = Thresholds::new(pf.p);
    let prm: LengthParams = pf.params()?;
    let length = parse_length(&prm.length)?;
    let profile = profile_direct(&th, &length, n_max);
    let loc = localize(&th, &profile).map_err(domain)?;
    emit(&json!({
        "p": pf.p,
        "length": prm.length.trim(),
        "n_max": n_max,
        "passed": profile.passed,
        "failed": profile.failed,
        "lo": rs(&loc.lo),
        "hi": loc.hi.as_ref().map(rs),
        "saturated": loc.saturated,
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepParams {
    l_max: Option<RatStr>,
    step: Option<RatStr>,
}

fn cmd_thm1_sweep(pf: &ProblemFile, n_max: u32) -> Result<u8, CmdError> {
    let th = Thresholds::new(pf.p);
    let prm: SweepParams = pf.params()?;
    let l_max = prm.l_max.map(|r| r.0).unwrap_or_else(|| Rat::from_integer(4.into()));
    let step = prm.step.map(|r| r.0).unwrap_or_else(|| {
        Rat::new(1.into(), 2.into())
    });
    if !step.is_positive() {
        return Err(validation("thm1-sweep: step must be positive"));
    }
    if l_max < step {
        return Err(validation("thm1-sweep: l_max must be at least one step"));
    }
    let mut grid = Vec::new();
    let mut l = step.clone();
    while l <= l_max {
        grid.push(l.clone());
        l += &step;
    }
    let mut rows = Vec::new();
    let mut violations = 0u64;
    for (i, l1) in grid.iter().enumerate() {
        for l2 in &grid[i..] {
            let report = pair_report(
                &th,
                &AnnulusLength::Finite(l1.clone()),
                &AnnulusLength::Finite(l2.clone()),
                n_max,
            )
            .map_err(domain)?;
            let bound_status = match report.bound_2c_ok {
                Some(true) => "ok",
                Some(false) => {
                    violations += 1;
                    "violated"
                }
                None => "not-applicable",
            };
            rows.push(json!({
                "l1": rs(l1),
                "l2": rs(l2),
                "profiles_equal": report.profiles_equal,
                "first_difference": report.first_difference,
                "delta": report.delta.as_ref().map(rs),
                "bound_2c": bound_status,
                "findings": report.findings,
            }));
        }
    }
    emit(&json!({
        "p": pf.p,
        "n_max": n_max,
        "grid_size": grid.len(),
        "pairs": rows.len(),
        "violations": violations,
        "rows": rows,
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessParams {
    edge: Option<String>,
    m: Option<RatStr>,
    lambda: Option<RatStr>,
}

fn cmd_witness_solvable(pf: &ProblemFile) -> Result<u8, CmdError> {
    let th = Thresholds::new(pf.p);
    let prm: WitnessParams = pf.params()?;
    match (prm.edge, prm.lambda) {
        (Some(edge), None) => {
            let m = prm
                .m
                .ok_or_else(|| validation("witness-solvable: edge mode needs \"m\""))?
                .0;
            let g = pf.graph()?;
            let a = pf.annulus_spec()?.annulus()?;
            let w = witness_threshold_solvable(&g, &edge, &a, &m, &th).map_err(domain)?;
            emit(&json!({
                "mode": "threshold",
                "edge": w.edge,
                "m": rs(&m),
                "threshold": rs(&w.threshold),
                "probes": w
                    .probes
                    .iter()
                    .map(|(r, c)| json!({ "radius": rs(r), "count": c }))
                    .collect::<Vec<_>>(),
            }))
        }
        (None, Some(lambda)) => {
            if prm.m.is_some() {
                return Err(validation(
                    "witness-solvable: \"m\" only applies to edge mode",
                ));
            }
            let w = witness_skeleton_solvable(&lambda.0, &th);
            emit(&json!({
                "mode": "skeleton",
                "lambda": rs(&w.lambda),
                "rescale": rs(&w.rescale),
                "count_at_threshold": w.count_at_threshold,
                "count_below": w.count_below,
            }))
        }
        _ => Err(validation(
            "witness-solvable: give exactly one of \"edge\" (with \"m\") or \"lambda\"",
        )),
    }
}
