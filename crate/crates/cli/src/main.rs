//! `finitary`: command-line front end with JSON reports.
//!
//! Exit codes: 0 success, 1 failed selftest, 2 bad input or failed
//! precondition, 3 search cap or budget exhausted.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use finitary_core::constructions::{
    count_word, fractal_stats, fractal_word, verify_density_bound, verify_gap_structure, FractalSpec,
};
use finitary_core::density::{density_profile, prefix_density};
use finitary_core::differences::{jin_check, JinConfig};
use finitary_core::filter_lab::{
    check_superfilter, extend_ultrafilter, generate_filter, is_filter, is_ultrafilter, partition_regular,
    Builtin, SetFamily, SetPredicate, Subset, Universe,
};
use finitary_core::ground_set::parse_set_file;
use finitary_core::ramsey::{
    find_mono_fs, parse_certificate, verify_fs, vdw_number_with, write_certificate, Coloring, VdwOptions,
    VdwOutcome,
};
use finitary_core::selftest::{run_selftest, Fault, SelftestConfig};
use finitary_core::structure::{is_piecewise_syndetic, is_syndetic, is_thick, structure_report};
use finitary_core::{Error, GroundSet};
use serde::Serialize;
use serde_json::{json, Map, Value};

const SCHEMA_VERSION: u32 = 1;

const FS_CAVEAT: &str = "finite search: absence of a sequence below the cap says nothing about colorings of all of N";

#[derive(Parser, Serialize)]
#[command(name = "finitary", version, about = "Finite-window Ramsey theory and additive combinatorics")]
struct Cli {
    /// Worker threads for parallel searches.
    #[arg(long, global = true, env = "FINITARY_THREADS")]
    threads: Option<usize>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Include wall-clock timings (makes output nondeterministic).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Compute the van der Waerden number W(k, r).
    Vdw(VdwArgs),
    /// Syndetic / thick / piecewise syndetic checks on a set file.
    Classify(ClassifyArgs),
    /// Exact window densities of a set file.
    Density(DensityArgs),
    /// The self-similar words A_{n+1} = A_n A_n 0.
    Fractal(FractalArgs),
    /// Piecewise syndeticity of A - B.
    Jin(JinArgs),
    /// Search for a monochromatic finite-sums set.
    Fs(FsArgs),
    /// Filters and ultrafilters on a finite universe.
    Filterlab(FilterArgs),
    /// Run the cross-module invariant suite.
    Selftest(SelftestArgs),
}

#[derive(Args, Serialize)]
struct VdwArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..))]
    r: u8,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    cap: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    node_budget: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    time_budget_ms: Option<u64>,
    #[arg(long)]
    split_depth: Option<usize>,
    /// Write the certificate file here.
    #[arg(long)]
    emit_certificate: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ClassifyArgs {
    #[arg(long)]
    set: PathBuf,
    #[arg(long)]
    syndetic: Option<usize>,
    #[arg(long)]
    thick: Option<usize>,
    /// Piecewise syndetic parameters `d,N`.
    #[arg(long, value_parser = parse_pair)]
    pws: Option<(usize, usize)>,
}

#[derive(Args, Serialize)]
struct DensityArgs {
    #[arg(long)]
    set: PathBuf,
    /// Window lengths, comma separated.
    #[arg(long = "n", value_delimiter = ',', required = true)]
    windows: Vec<usize>,
    /// Also report the prefix density at each window length.
    #[arg(long)]
    prefix: bool,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum FractalCheck {
    Stats,
    Density,
    Gaps,
}

#[derive(Args, Serialize)]
struct FractalArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum)]
    verify: Option<FractalCheck>,
    /// Prefix length for the density and gap checks.
    #[arg(long)]
    len: Option<usize>,
    /// Write the word as a set file.
    #[arg(long)]
    emit_set: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct JinArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    #[arg(long)]
    dmax: usize,
    #[arg(long)]
    nreq: usize,
    /// Window for the density diagnostics (defaults to --nreq).
    #[arg(long)]
    density_n: Option<usize>,
}

#[derive(Args, Serialize)]
struct FsArgs {
    /// Color string such as RRBBRRBB.
    #[arg(long, conflicts_with = "certificate", required_unless_present = "certificate")]
    coloring: Option<String>,
    /// Read the coloring from a certificate file.
    #[arg(long)]
    certificate: Option<PathBuf>,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    sum_cap: usize,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum FilterOp {
    Filter,
    Ultrafilter,
    Generate,
    Superfilter,
    Extend,
    PartitionRegular,
}

#[derive(Args, Serialize)]
struct FilterArgs {
    /// Universe size m, elements 1..=m.
    #[arg(long)]
    m: usize,
    #[arg(long, value_enum)]
    op: FilterOp,
    /// JSON list of member lists, e.g. [[1,2],[1,2,3]].
    #[arg(long, default_value = "[]")]
    family: String,
    /// nonempty | meets:[..] | contains-some:[[..],..] | min-size:k
    #[arg(long)]
    predicate: Option<String>,
    /// Treat --family as generators and use the filter they generate.
    #[arg(long)]
    generated: bool,
}

#[derive(Args, Serialize)]
struct SelftestArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, value_enum)]
    inject_fault: Option<FaultArg>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum FaultArg {
    CorruptShift,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected d,N but got `{s}`"))?;
    let p = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("not a number: `{t}`"));
    Ok((p(a)?, p(b)?))
}

/// What went wrong, mapped to an exit code.
enum Failure {
    Input(String),
    Exhausted(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExhausted { nodes, best } => Failure::Exhausted(json!({
                "outcome": "budget_exhausted",
                "nodes": nodes,
                "best_length": best.len(),
                "certificate": best.to_string(),
            })),
            other => Failure::Input(other.to_string()),
        }
    }
}

struct Report {
    body: Value,
    code: u8,
}

impl Report {
    fn ok(body: impl Serialize) -> Result<Self, Failure> {
        Ok(Report {
            body: serde_json::to_value(body).map_err(|e| Failure::Input(e.to_string()))?,
            code: 0,
        })
    }
}

fn read_set(path: &Path) -> Result<GroundSet, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_set_file(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn run_vdw(a: &VdwArgs) -> Result<Report, Failure> {
    let opts = VdwOptions {
        node_budget: a.node_budget,
        time_budget: a.time_budget_ms.map(Duration::from_millis),
        split_depth: a.split_depth,
    };
    let k = a.k as usize;
    let res = vdw_number_with(k, a.r, a.cap as usize, &opts)?;
    if let Some(path) = &a.emit_certificate {
        write_file(path, &write_certificate(res.certificate(), k))?;
    }
    let (body, code) = match &res.outcome {
        VdwOutcome::Found { w, certificate } => (
            json!({ "outcome": "found", "W": w, "certificate": certificate.to_string() }),
            0,
        ),
        VdwOutcome::ExceededCap { cap, certificate } => (
            json!({ "outcome": "exceeded_cap", "cap": cap, "certificate": certificate.to_string() }),
            3,
        ),
    };
    let mut body = body;
    body["nodes"] = json!(res.stats.nodes);
    Ok(Report { body, code })
}

fn run_classify(a: &ClassifyArgs) -> Result<Report, Failure> {
    let set = read_set(&a.set)?;
    let mut out = Map::new();
    out.insert("window_len".into(), json!(set.window_len()));
    out.insert("count".into(), json!(set.count()));
    if let Some(d) = a.syndetic {
        let c = is_syndetic(&set, d)?;
        out.insert("syndetic".into(), json!(c.holds));
        out.insert("empty_window".into(), json!(c.empty_window));
    }
    if let Some(n) = a.thick {
        let c = is_thick(&set, n)?;
        out.insert("thick".into(), json!(c.holds));
        out.insert("run".into(), json!(c.run));
    }
    if let Some((d, n)) = a.pws {
        let c = is_piecewise_syndetic(&set, d, n)?;
        out.insert("piecewise_syndetic".into(), json!(c.holds));
        out.insert("pws_witness".into(), json!(c.witness));
    }
    out.insert("report".into(), serde_json::to_value(structure_report(&set, None)?).unwrap_or_default());
    Ok(Report { body: Value::Object(out), code: 0 })
}

fn run_density(a: &DensityArgs) -> Result<Report, Failure> {
    let set = read_set(&a.set)?;
    let profile = density_profile(&set, &a.windows)?;
    let mut body = json!({ "window_sup": profile });
    if a.prefix {
        let prefix = a
            .windows
            .iter()
            .map(|&n| {
                let r = prefix_density(&set, n)?;
                Ok(json!({ "n": n, "value": { "num": r.numer(), "den": r.denom() } }))
            })
            .collect::<Result<Vec<Value>, Error>>()?;
        body["prefix"] = Value::Array(prefix);
    }
    Ok(Report { body, code: 0 })
}

const WORD_PRINT_LIMIT: u64 = 1 << 16;

fn run_fractal(a: &FractalArgs) -> Result<Report, Failure> {
    let spec = FractalSpec::new(a.k, a.n)?;
    let stats = fractal_stats(spec)?;
    let mut body = json!({
        "length": stats.length,
        "ones": stats.ones,
        "trailing_zeros": stats.trailing_zeros,
    });
    let small = stats.length <= WORD_PRINT_LIMIT;
    let word = if small || a.emit_set.is_some() || matches!(a.verify, Some(FractalCheck::Stats)) {
        Some(fractal_word(spec)?)
    } else {
        None
    };
    if let (true, Some(w)) = (small, &word) {
        body["word"] = json!(w);
    }
    if let (Some(path), Some(w)) = (&a.emit_set, &word) {
        let set = GroundSet::from_bit_string(w)?;
        write_file(path, &finitary_core::ground_set::write_set_file(&set, finitary_core::ground_set::SetForm::Bits))?;
    }
    let prefix_len = a.len.unwrap_or(stats.length as usize);
    let ok = match a.verify {
        None => None,
        Some(FractalCheck::Stats) => {
            let direct = count_word(word.as_deref().unwrap_or(""));
            body["direct"] = json!(direct);
            Some(direct == stats)
        }
        Some(FractalCheck::Density) => {
            let rep = verify_density_bound(a.k, prefix_len)?;
            body["density_bound"] = serde_json::to_value(rep).unwrap_or_default();
            Some(rep.holds)
        }
        Some(FractalCheck::Gaps) => {
            let rep = verify_gap_structure(a.k, a.n, prefix_len)?;
            body["gaps"] = serde_json::to_value(rep).unwrap_or_default();
            Some(rep.holds)
        }
    };
    if let Some(ok) = ok {
        body["ok"] = json!(ok);
    }
    Ok(Report { body, code: 0 })
}

fn run_jin(a: &JinArgs) -> Result<Report, Failure> {
    let (sa, sb) = (read_set(&a.a)?, read_set(&a.b)?);
    let cfg = JinConfig {
        d_max: a.dmax,
        n_req: a.nreq,
        density_n: a.density_n,
    };
    Report::ok(jin_check(&sa, &sb, &cfg)?)
}

fn run_fs(a: &FsArgs) -> Result<Report, Failure> {
    let coloring: Coloring = match (&a.coloring, &a.certificate) {
        (Some(s), _) => s.parse()?,
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            parse_certificate(&text)?.0
        }
        (None, None) => return Err(Failure::Input("need --coloring or --certificate".into())),
    };
    if a.m == 0 || a.sum_cap == 0 {
        return Err(Failure::Input("--m and --sum-cap must be positive".into()));
    }
    let found = find_mono_fs(&coloring, a.m, a.sum_cap);
    let verified = found.as_ref().map(|w| verify_fs(&coloring, w));
    Report::ok(json!({
        "found": found.is_some(),
        "witness": found,
        "verified": verified,
        "caveat": FS_CAVEAT,
    }))
}

fn parse_builtin(s: &str) -> Result<Builtin, Failure> {
    let bad = |what: &str| Failure::Input(format!("bad predicate `{s}`: {what}"));
    let (name, arg) = s.split_once(':').map_or((s, None), |(n, a)| (n, Some(a)));
    match (name, arg) {
        ("nonempty", None) => Ok(Builtin::Nonempty),
        ("meets", Some(a)) => serde_json::from_str(a).map(Builtin::Meets).map_err(|_| bad("expected a list")),
        ("contains-some", Some(a)) => serde_json::from_str(a)
            .map(Builtin::ContainsSome)
            .map_err(|_| bad("expected a list of lists")),
        ("min-size", Some(a)) => a.parse().map(Builtin::MinSize).map_err(|_| bad("expected a number")),
        _ => Err(bad("unknown predicate")),
    }
}

fn run_filterlab(a: &FilterArgs) -> Result<Report, Failure> {
    let u = Universe::new(a.m)?;
    let lists: Vec<Vec<usize>> = serde_json::from_str(&a.family)
        .map_err(|e| Failure::Input(format!("bad family `{}`: {e}", a.family)))?;
    let subsets = lists.iter().map(|l| u.subset(l)).collect::<Result<Vec<Subset>, Error>>()?;
    let family = if a.generated {
        generate_filter(u, &subsets)?
    } else {
        SetFamily::from_members(u, subsets.iter().copied())?
    };
    let predicate = || -> Result<SetPredicate, Failure> {
        let p = a
            .predicate
            .as_deref()
            .ok_or_else(|| Failure::Input("this operation needs --predicate".into()))?;
        Ok(SetPredicate::builtin(u, &parse_builtin(p)?)?)
    };
    match a.op {
        FilterOp::Filter => Report::ok(is_filter(&family)),
        FilterOp::Ultrafilter => Report::ok(is_ultrafilter(&family)),
        FilterOp::Generate => Report::ok(json!({ "filter": generate_filter(u, &subsets)? })),
        FilterOp::Superfilter => Report::ok(check_superfilter(&predicate()?, &family)?),
        FilterOp::Extend => Report::ok(json!({ "ultrafilter": extend_ultrafilter(&family, &predicate()?)? })),
        FilterOp::PartitionRegular => Report::ok(partition_regular(u, &subsets)?),
    }
}

fn run_selftest_cmd(a: &SelftestArgs) -> Result<Report, Failure> {
    let cfg = SelftestConfig {
        seed: a.seed,
        trials: a.trials as usize,
        fault: a.inject_fault.map(|FaultArg::CorruptShift| Fault::CorruptShift),
    };
    let rep = run_selftest(&cfg);
    let code = if rep.passed { 0 } else { 1 };
    Ok(Report {
        body: serde_json::to_value(&rep).unwrap_or_default(),
        code,
    })
}

fn dispatch(cmd: &Command) -> Result<Report, Failure> {
    match cmd {
        Command::Vdw(a) => run_vdw(a),
        Command::Classify(a) => run_classify(a),
        Command::Density(a) => run_density(a),
        Command::Fractal(a) => run_fractal(a),
        Command::Jin(a) => run_jin(a),
        Command::Fs(a) => run_fs(a),
        Command::Filterlab(a) => run_filterlab(a),
        Command::Selftest(a) => run_selftest_cmd(a),
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Vdw(_) => "vdw",
        Command::Classify(_) => "classify",
        Command::Density(_) => "density",
        Command::Fractal(_) => "fractal",
        Command::Jin(_) => "jin",
        Command::Fs(_) => "fs",
        Command::Filterlab(_) => "filterlab",
        Command::Selftest(_) => "selftest",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let (body, code) = match dispatch(&cli.command) {
        Ok(r) => (r.body, r.code),
        Err(Failure::Exhausted(body)) => (body, 3),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let mut report = Map::new();
    report.insert("schema_version".into(), json!(SCHEMA_VERSION));
    report.insert("command".into(), json!(command_name(&cli.command)));
    report.insert("config".into(), serde_json::to_value(&cli).unwrap_or_default());
    match body {
        Value::Object(fields) => report.extend(fields),
        other => {
            report.insert("result".into(), other);
        }
    }
    if cli.timing {
        report.insert("elapsed_ms".into(), json!(start.elapsed().as_secs_f64() * 1e3));
    }
    let text = serde_json::to_string_pretty(&Value::Object(report)).unwrap_or_default() + "\n";
    match &cli.output {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code)
}
