use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use serre_lab::bdj2::{self, Gl2Ctx, Gl2TameType, Gl2Weight, RextMode};
use serre_lab::jantzen::{dl_dimension, jantzen_virtual};
use serre_lab::modreps::decompose_virtual_fp;
use serre_lab::tametypes::{all_tame_types, tau_of_pair, TamePair, TameType};
use serre_lab::weightsets::{adps_weights_gl3, predicted_count, w_question, w_question_gl3, CTauMode, CountVia, Route};
use serre_lab::{Perm, Weight};
use serre_lab_cli::checks;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "serre-lab", version, about = "Serre weights for tame inertial types")]
struct Cli {
    /// Indent JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Predicted weight set W?(tau) for GL_n(F_p).
    Wq(WqArgs),
    /// Number of generic predicted weights for GL_n.
    Counts {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "formula")]
        via: Via,
    },
    /// Types whose W? differs from the ADPS weights (n = 3).
    CompareAdps {
        #[arg(long)]
        p: i64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Jantzen's reduction of a Deligne-Lusztig representation.
    Jantzen {
        #[command(subcommand)]
        command: JantzenCommand,
    },
    /// GL_2 over F_{p^f}: BDJ weights, R_ext and the comparison theorem.
    Bdj {
        #[command(subcommand)]
        command: BdjCommand,
    },
    /// Run the acceptance checks.
    Selftest {
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Args)]
struct WqArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: i64,
    /// Orbits as "niveau:exponent,...", e.g. "2:8,1:0".
    #[arg(long)]
    tau: String,
    #[arg(long, value_enum, default_value = "exact")]
    route: RouteArg,
    /// Depth for the generic route (default n).
    #[arg(long)]
    delta: Option<i64>,
}

#[derive(Subcommand)]
enum JantzenCommand {
    Reduce {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: i64,
        /// Permutation in cycle notation, e.g. "(1 2 3)", or "id".
        #[arg(long)]
        w: String,
        /// Comma separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
}

#[derive(Subcommand)]
enum BdjCommand {
    Weights {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        f: u32,
        /// "niv1:c,c'" or "niv2:gamma".
        #[arg(long = "type")]
        ty: String,
    },
    Rext {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        f: u32,
        /// Digits m_0,...,m_{f-1}.
        #[arg(long)]
        m: String,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        #[arg(long, value_enum, default_value = "strict")]
        mode: ModeArg,
    },
    Verify {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        f: u32,
        #[arg(long, value_enum, default_value = "strict")]
        mode: ModeArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Exact,
    Generic,
    Gl3,
    Adps,
}

#[derive(Clone, Copy, ValueEnum)]
enum Via {
    Formula,
    Enumeration,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Strict,
    Weak,
}

impl From<ModeArg> for RextMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Strict => RextMode::Strict,
            ModeArg::Weak => RextMode::Weak,
        }
    }
}

/// Failures, mapped to exit codes.
enum Failure {
    /// Bad input or a library error naming the offending flag.
    Domain(String),
    /// A mathematical counterexample was found.
    Counterexample(String),
}

type CmdResult = Result<Value, Failure>;

fn flag<T, E: std::fmt::Display>(name: &str, r: Result<T, E>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Domain(format!("--{name}: {e}")))
}

fn check_p(p: i64) -> Result<(), Failure> {
    let prime = p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0);
    if prime {
        Ok(())
    } else {
        Err(Failure::Domain(format!("--p: {p} is not prime")))
    }
}

fn parse_ints(name: &str, s: &str) -> Result<Vec<i64>, Failure> {
    flag(name, s.split(',').map(|x| x.trim().parse::<i64>()).collect::<Result<Vec<_>, _>>())
}

fn envelope(kind: &str, body: Value) -> Value {
    let mut out = json!({ "schema_version": SCHEMA_VERSION, "command": kind });
    if let (Value::Object(o), Value::Object(b)) = (&mut out, body) {
        o.extend(b);
    }
    out
}

fn gl2_weight_json(w: &Gl2Weight) -> Value {
    json!({ "label": w.to_string(), "a": w.a(), "b": w.b, "m": w.m, "dimension": w.dimension() })
}

fn wq(a: &WqArgs) -> CmdResult {
    check_p(a.p)?;
    let tau = flag("tau", TameType::parse(&a.tau, a.p))?;
    if tau.n != a.n {
        return Err(Failure::Domain(format!("--tau: type has dimension {}, but --n is {}", tau.n, a.n)));
    }
    let route = match a.route {
        RouteArg::Exact => Route::ExactJantzen,
        RouteArg::Generic => Route::Generic,
        RouteArg::Gl3 => Route::Gl3Lists,
        RouteArg::Adps => Route::Adps,
    };
    let delta = a.delta.unwrap_or(a.n as i64);
    let ws = flag("tau", w_question(&tau, route, delta))?;
    let weights: Vec<Value> = ws
        .weights
        .iter()
        .map(|f| {
            let alcove = if f.in_lower_alcove() {
                "lower"
            } else if f.in_upper_alcove() {
                "upper"
            } else {
                "other"
            };
            json!({ "weight": f.weight, "alcove": alcove })
        })
        .collect();
    Ok(envelope(
        "wq",
        json!({
            "n": ws.n, "p": ws.p, "tau": tau.to_string(), "route": ws.provenance,
            "count": ws.len(), "weights": weights, "warnings": ws.warnings,
        }),
    ))
}

fn counts(n: usize, via: Via) -> CmdResult {
    let v = match via {
        Via::Formula => CountVia::Formula,
        Via::Enumeration => CountVia::Enumeration,
    };
    let c = flag("n", predicted_count(n, v))?;
    Ok(envelope("counts", json!({ "n": n, "count": c })))
}

fn compare_adps(p: i64) -> CmdResult {
    check_p(p)?;
    let mut rows = Vec::new();
    for t in flag("p", all_tame_types(3, p))? {
        let w = flag("p", w_question_gl3(&t, CTauMode::ClosedForm))?;
        let a = flag("p", adps_weights_gl3(&t))?;
        let extra: Vec<_> = w.weights.difference(&a.weights).map(|f| f.weight.clone()).collect();
        let missing: Vec<_> = a.weights.difference(&w.weights).map(|f| f.weight.clone()).collect();
        if !extra.is_empty() || !missing.is_empty() {
            rows.push(json!({
                "tau": t.to_string(), "w_question": w.len(), "adps": a.len(),
                "extra": extra, "missing": missing,
            }));
        }
    }
    Ok(envelope("compare-adps", json!({ "p": p, "rows": rows })))
}

fn jantzen_reduce(n: usize, p: i64, w: &str, lambda: &str) -> CmdResult {
    check_p(p)?;
    let perm = flag("w", Perm::parse(n, w))?;
    let coords = parse_ints("lambda", lambda)?;
    if coords.len() != n {
        return Err(Failure::Domain(format!("--lambda: expected {n} coordinates, got {}", coords.len())));
    }
    let pair = flag("lambda", TamePair::new(perm, Weight(coords), p))?;
    let v = flag("lambda", jantzen_virtual(&pair))?;
    let mut body = json!({
        "n": n, "p": p, "w": pair.w, "lambda": pair.mu, "tau": tau_of_pair(&pair).to_string(),
        "dimension": v.dimension().to_string(), "dl_dimension": dl_dimension(&pair.w, p).to_string(),
        "virtual": v,
    });
    if n <= 3 && p > n as i64 {
        let dec = flag("lambda", decompose_virtual_fp(&v, p))?;
        let jh: Vec<Value> = dec.iter().map(|(f, m)| json!({ "weight": f.weight, "multiplicity": m })).collect();
        body["constituents"] = Value::Array(jh);
    }
    Ok(envelope("jantzen-reduce", body))
}

fn gl2_ctx(p: i64, f: u32) -> Result<Gl2Ctx, Failure> {
    check_p(p)?;
    if p == 2 {
        return Err(Failure::Domain("--p: must be odd".into()));
    }
    flag("f", Gl2Ctx::new(p, f))
}

fn bdj(cmd: &BdjCommand) -> CmdResult {
    match cmd {
        BdjCommand::Weights { p, f, ty } => {
            let ctx = gl2_ctx(*p, *f)?;
            let rho = flag("type", Gl2TameType::parse(&ctx, ty))?;
            let label = flag("type", bdj2::v_p(&rho, &ctx))?;
            let bdj: Vec<_> = bdj2::w_bdj(&rho, &ctx).iter().map(gl2_weight_json).collect();
            let jh: Vec<_> = bdj2::diamond_constituents(&rho, &ctx).iter().map(gl2_weight_json).collect();
            Ok(envelope(
                "bdj-weights",
                json!({
                    "p": p, "f": f, "type": rho.to_string(), "v_p": label,
                    "v_p_dimension": label.dimension(&ctx), "w_bdj": bdj, "constituents": jh,
                }),
            ))
        }
        BdjCommand::Rext { p, f, m, b, mode } => {
            let ctx = gl2_ctx(*p, *f)?;
            let digits = parse_ints("m", m)?;
            let w = flag("m", Gl2Weight::new(&ctx, digits, *b))?;
            let mode: RextMode = (*mode).into();
            let image = match mode {
                RextMode::Strict => bdj2::r_ext(&w),
                RextMode::Weak => bdj2::r_ext_prime(&w),
            };
            let ss: Vec<_> = bdj2::ss_sets(&w).into_iter().map(|s| s.into_iter().collect::<Vec<_>>()).collect();
            let rp = bdj2::r_p(&w).ok().map(|x| gl2_weight_json(&x));
            Ok(envelope(
                "bdj-rext",
                json!({
                    "p": p, "f": f, "mode": mode, "weight": gl2_weight_json(&w), "ss": ss,
                    "r_p": rp, "r_ext": image.iter().map(gl2_weight_json).collect::<Vec<_>>(),
                }),
            ))
        }
        BdjCommand::Verify { p, f, mode } => {
            let ctx = gl2_ctx(*p, *f)?;
            let report = bdj2::verify_bdj_theorem(&ctx, (*mode).into());
            let body = serde_json::to_value(&report).expect("serializable");
            if report.passed {
                Ok(envelope("bdj-verify", body))
            } else {
                Err(Failure::Counterexample(envelope("bdj-verify", body).to_string()))
            }
        }
    }
}

fn selftest(quick: bool) -> Result<(), Failure> {
    let results = checks::run_all(quick);
    let failed = results.iter().filter(|r| !r.passed).count();
    let mut text: String = results.iter().map(|r| r.line() + "\n").collect();
    text.push_str(&format!("{} of {} criteria passed\n", results.len() - failed, results.len()));
    emit(&text);
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Counterexample(format!("{failed} criteria failed")))
    }
}

fn init_threads() {
    if let Ok(s) = std::env::var("SERRE_LAB_THREADS") {
        match s.parse::<usize>() {
            Ok(k) if k > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
            }
            _ => eprintln!("warning: ignoring SERRE_LAB_THREADS={s:?}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    init_threads();
    let out = match &cli.command {
        Command::Wq(a) => wq(a),
        Command::Counts { n, via } => counts(*n, *via),
        Command::CompareAdps { p, format } => compare_adps(*p).map(|v| match format {
            Format::Json => v,
            Format::Tsv => Value::String(adps_tsv(&v)),
        }),
        Command::Jantzen { command: JantzenCommand::Reduce { n, p, w, lambda } } => jantzen_reduce(*n, *p, w, lambda),
        Command::Bdj { command } => bdj(command),
        Command::Selftest { quick } => selftest(*quick).map(|_| Value::Null),
    };
    match out {
        Ok(Value::Null) => ExitCode::SUCCESS,
        Ok(Value::String(s)) => {
            emit(&s);
            ExitCode::SUCCESS
        }
        Ok(v) => {
            let text = if cli.pretty { serde_json::to_string_pretty(&v) } else { serde_json::to_string(&v) };
            emit(&(text.expect("serializable") + "\n"));
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Counterexample(msg)) => {
            emit(&(msg + "\n"));
            eprintln!("counterexample found");
            ExitCode::from(2)
        }
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(s: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(s.as_bytes()).and_then(|_| out.flush());
}

fn adps_tsv(v: &Value) -> String {
    let mut s = String::from("tau\tw_question\tadps\textra\tmissing\n");
    for row in v["rows"].as_array().into_iter().flatten() {
        s.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            row["tau"].as_str().unwrap_or(""),
            row["w_question"],
            row["adps"],
            row["extra"],
            row["missing"]
        ));
    }
    s
}
