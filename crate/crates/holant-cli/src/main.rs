use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use holant::classify::{
    in_a, in_akd, in_l, in_p, in_t, in_t1, verdict_csp, verdict_csp2, verdict_cspk, verdict_holant_odd,
    verdict_holantc, ClassMembership, DichotomyVerdict, Problem, Witness,
};
use holant::entangle::{
    analyze, base_case_analysis, check_bell_property, find_preserving_pin, odd_arity_normalize, reduce_to_base,
    ReductionTrace, Step,
};
use holant::factor::upf;
use holant::gadget::{holo, Transform2x2};
use holant::grid::{holant_eval, Mode};
use holant::io::{
    read_grid, read_signature, read_signature_set, scalar_string, signature_to_json, JsonScalar,
};
use holant::scalar::{set_epsilon, Backend};
use holant::signature::{builtin, set_arity_cap};
use holant::{CycloScalar, ExactSignature, FloatScalar, HolantError, Signature};

#[derive(Parser)]
#[command(name = "holant", version, about = "Holant problems, signatures and entanglement")]
struct Cli {
    #[arg(long, value_enum, default_value = "exact", global = true)]
    backend: BackendArg,
    /// Zero threshold of the float backend.
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    #[arg(long, env = "HOLANT_ARITY_CAP", global = true)]
    arity_cap: Option<usize>,
    /// Emit the result as a JSON document.
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Brute,
    Contract,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProblemArg {
    Csp,
    Csp2,
    Cspk,
    Holantc,
    HolantOdd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReduceArg {
    Base,
    Ternary,
    Odd,
}

#[derive(Clone, Copy, ValueEnum)]
enum NamedTransform {
    Identity,
    ZInv,
    Z,
    H,
    HRot,
    TAlpha,
    X,
    Y,
    PauliZ,
}

#[derive(Subcommand)]
enum Command {
    /// Holant value of a grid file.
    Eval {
        grid: PathBuf,
        #[arg(long, value_enum, default_value = "contract")]
        mode: ModeArg,
    },
    /// Class memberships of each signature, or a dichotomy verdict for the set.
    Classify {
        sigs: String,
        #[arg(long, value_enum)]
        problem: Option<ProblemArg>,
        #[arg(long, default_value_t = 3)]
        k: u32,
    },
    /// Unique prime factorization.
    Factor { sig: String },
    /// Entanglement report and preserving pin.
    Entangle { sig: String },
    /// Bell property over all pairs and Bell states.
    Bell {
        sig: String,
        #[arg(long)]
        strong: bool,
    },
    /// Reduction trace.
    Reduce {
        sig: String,
        #[arg(long, value_enum, default_value = "base")]
        mode: ReduceArg,
    },
    /// Holographic transformation of a signature.
    Transform {
        sig: String,
        #[arg(long, value_enum, conflicts_with = "matrix")]
        named: Option<NamedTransform>,
        /// Entries a,b,c,d of [[a,b],[c,d]].
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        matrix: Option<Vec<String>>,
    },
    /// Writes a named signature.
    Builtin {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Output {
    payload: Value,
    text: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(eps) = cli.epsilon {
        set_epsilon(eps);
    }
    if let Some(cap) = cli.arity_cap {
        set_arity_cap(cap);
    }
    let name = command_name(&cli.command);
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                let doc = json!({"status": "ok", "command": name, "payload": out.payload, "diagnostics": []});
                emit(&serde_json::to_string_pretty(&doc).expect("serializable"));
            } else {
                emit(out.text.trim_end());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let kind = e.downcast_ref::<HolantError>().map_or("io", |h| h.kind());
            if cli.json {
                let doc = json!({"status": "error", "command": name, "kind": kind, "message": e.to_string()});
                emit(&serde_json::to_string_pretty(&doc).expect("serializable"));
            } else {
                eprintln!("error[{kind}]: {e}");
            }
            ExitCode::from(1)
        }
    }
}

fn emit(s: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{s}");
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Eval { .. } => "eval",
        Command::Classify { .. } => "classify",
        Command::Factor { .. } => "factor",
        Command::Entangle { .. } => "entangle",
        Command::Bell { .. } => "bell",
        Command::Reduce { .. } => "reduce",
        Command::Transform { .. } => "transform",
        Command::Builtin { .. } => "builtin",
    }
}

fn exact_only(cli: &Cli) -> anyhow::Result<()> {
    if cli.backend == BackendArg::Float {
        return Err(HolantError::InexactBackend.into());
    }
    Ok(())
}

fn run(cli: &Cli) -> anyhow::Result<Output> {
    match &cli.command {
        Command::Eval { grid, mode } => match cli.backend {
            BackendArg::Exact => eval::<CycloScalar>(grid, *mode),
            BackendArg::Float => eval::<FloatScalar>(grid, *mode),
        },
        Command::Classify { sigs, problem, k } => {
            exact_only(cli)?;
            let set: Vec<ExactSignature> = read_signature_set(sigs)?;
            match problem {
                None => memberships(&set, *k),
                Some(p) => {
                    let v = match p {
                        ProblemArg::Csp => verdict_csp(&set)?,
                        ProblemArg::Csp2 => verdict_csp2(&set)?,
                        ProblemArg::Cspk => verdict_cspk(&set, *k)?,
                        ProblemArg::Holantc => verdict_holantc(&set)?,
                        ProblemArg::HolantOdd => verdict_holant_odd(&set)?,
                    };
                    Ok(verdict_output(&v))
                }
            }
        }
        Command::Factor { sig } => match cli.backend {
            BackendArg::Exact => factor::<CycloScalar>(sig),
            BackendArg::Float => factor::<FloatScalar>(sig),
        },
        Command::Entangle { sig } => match cli.backend {
            BackendArg::Exact => entangle::<CycloScalar>(sig),
            BackendArg::Float => entangle::<FloatScalar>(sig),
        },
        Command::Bell { sig, strong } => {
            exact_only(cli)?;
            let f: ExactSignature = read_signature(sig)?;
            let r = check_bell_property(&f, *strong)?;
            let failing = r.cases.iter().filter(|c| !c.ok).count();
            let text = format!(
                "{} Bell property: {} ({} cases, {} failing)",
                if *strong { "strong" } else { "plain" },
                if r.holds { "holds" } else { "fails" },
                r.cases.len(),
                failing
            );
            Ok(Output {
                payload: serde_json::to_value(&r)?,
                text,
            })
        }
        Command::Reduce { sig, mode } => {
            exact_only(cli)?;
            let f: ExactSignature = read_signature(sig)?;
            let t = match mode {
                ReduceArg::Base => reduce_to_base(&f)?,
                ReduceArg::Ternary => base_case_analysis(&f)?,
                ReduceArg::Odd => odd_arity_normalize(&f)?,
            };
            t.validate()?;
            Ok(trace_output(&t))
        }
        Command::Transform { sig, named, matrix } => match cli.backend {
            BackendArg::Exact => transform::<CycloScalar>(sig, *named, matrix.as_deref()),
            BackendArg::Float => transform::<FloatScalar>(sig, *named, matrix.as_deref()),
        },
        Command::Builtin { name, out } => match cli.backend {
            BackendArg::Exact => builtin_cmd::<CycloScalar>(name, out.as_ref()),
            BackendArg::Float => builtin_cmd::<FloatScalar>(name, out.as_ref()),
        },
    }
}

fn eval<S: JsonScalar>(path: &PathBuf, mode: ModeArg) -> anyhow::Result<Output> {
    let grid = read_grid::<S>(path)?;
    let mode = match mode {
        ModeArg::Brute => Mode::Brute,
        ModeArg::Contract => Mode::Contract,
    };
    let v = holant_eval(&grid, mode)?;
    let s = scalar_string(&v);
    Ok(Output {
        payload: json!({"value": s, "scalar": v.to_json()}),
        text: s,
    })
}

fn memberships(set: &[ExactSignature], k: u32) -> anyhow::Result<Output> {
    let mut docs = Vec::new();
    let mut text = String::new();
    for (idx, f) in set.iter().enumerate() {
        let mut ms: Vec<ClassMembership> = vec![in_t(f)?, in_t1(f)?, in_p(f)?, in_a(f)?, in_l(f)?];
        for d in 1..=k as i64 {
            ms.push(in_akd(f, k, d)?);
        }
        let line: Vec<String> = ms
            .iter()
            .map(|m| format!("{}={}", class_name(m), if m.member { "yes" } else { "no" }))
            .collect();
        text.push_str(&format!("#{idx} (arity {}): {}\n", f.arity(), line.join(" ")));
        docs.push(json!({"index": idx, "memberships": ms}));
    }
    Ok(Output {
        payload: Value::Array(docs),
        text,
    })
}

fn class_name(m: &ClassMembership) -> String {
    match m.class {
        holant::classify::ClassTag::Akd { k, d } => format!("A_{k}^{d}"),
        c => format!("{c:?}"),
    }
}

fn verdict_output(v: &DichotomyVerdict) -> Output {
    let detail = match &v.witness {
        Witness::Tractable { condition, transform, .. } => match transform {
            Some(t) => format!("{condition} (transform {t})"),
            None => condition.clone(),
        },
        Witness::Hard { failed, traces, .. } => format!(
            "failed: {}{}",
            failed.iter().map(|c| c.condition.as_str()).collect::<Vec<_>>().join(", "),
            if traces.is_empty() { String::new() } else { format!("; {} reduction traces", traces.len()) }
        ),
        Witness::Unknown { reason, .. } => reason.clone(),
    };
    Output {
        payload: serde_json::to_value(v).expect("serializable"),
        text: format!(
            "{}: {} ({detail})",
            problem_name(v.problem),
            serde_json::to_value(v.outcome).expect("serializable").as_str().unwrap_or_default()
        ),
    }
}

fn problem_name(p: Problem) -> String {
    match p {
        Problem::Csp => "csp".into(),
        Problem::Csp2 => "csp2".into(),
        Problem::Cspk { k } => format!("csp{k}"),
        Problem::HolantC => "holantc".into(),
        Problem::HolantOdd => "holant-odd".into(),
    }
}

fn trace_output(t: &ReductionTrace) -> Output {
    let mut text = String::new();
    for (k, s) in t.steps.iter().enumerate() {
        let line = match s {
            Step::Holo { label, .. } => format!("holo {label}"),
            other => serde_json::to_string(other).expect("serializable"),
        };
        text.push_str(&format!("{:>3}. {line}\n", k + 1));
    }
    text.push_str(&format!("terminal: {:?}, scalar {}\n", t.terminal, scalar_string(&t.scalar)));
    Output {
        payload: serde_json::to_value(t).expect("serializable"),
        text,
    }
}

fn factor<S: JsonScalar>(source: &str) -> anyhow::Result<Output> {
    let f: Signature<S> = read_signature(source)?;
    let fac = upf(&f)?;
    let factors: Vec<Value> = fac
        .factors
        .iter()
        .map(|x| json!({"scope": x.scope, "signature": signature_to_json(&x.signature)}))
        .collect();
    let mut text = format!("global scalar {}\n", scalar_string(&fac.global_scalar));
    for x in &fac.factors {
        text.push_str(&format!("arity {} on {:?}\n", x.signature.arity(), x.scope));
    }
    Ok(Output {
        payload: json!({
            "arity": fac.arity,
            "global_scalar": fac.global_scalar.to_json(),
            "factors": factors,
            "threshold": fac.threshold,
        }),
        text,
    })
}

fn entangle<S: JsonScalar>(source: &str) -> anyhow::Result<Output> {
    let f: Signature<S> = read_signature(source)?;
    let r = analyze(&f)?;
    let pin = if f.arity() >= 4 { find_preserving_pin(&f)? } else { None };
    let text = format!(
        "entangled={} genuinely_entangled={} multipartite={} factors={:?} preserving_pin={}",
        r.entangled,
        r.genuinely_entangled,
        r.multipartite,
        r.factor_scopes,
        pin.map_or("none".to_string(), |(i, c)| format!("x{i}={c}"))
    );
    Ok(Output {
        payload: json!({"report": r, "preserving_pin": pin.map(|(i, c)| json!({"var": i, "bit": c}))}),
        text,
    })
}

fn named<S: JsonScalar>(n: NamedTransform) -> Transform2x2<S> {
    match n {
        NamedTransform::Identity => Transform2x2::identity(),
        NamedTransform::ZInv => Transform2x2::z_inv(),
        NamedTransform::Z => Transform2x2::z(),
        NamedTransform::H => Transform2x2::hadamard(),
        NamedTransform::HRot => Transform2x2::hadamard_rotation(),
        NamedTransform::TAlpha => Transform2x2::t_alpha(),
        NamedTransform::X => Transform2x2::pauli_x(),
        NamedTransform::Y => Transform2x2::pauli_y(),
        NamedTransform::PauliZ => Transform2x2::pauli_z(),
    }
}

fn transform<S: JsonScalar>(source: &str, n: Option<NamedTransform>, m: Option<&[String]>) -> anyhow::Result<Output> {
    let f: Signature<S> = read_signature(source)?;
    let t = match (n, m) {
        (Some(n), _) => named(n),
        (None, Some(m)) if m.len() != 4 => {
            anyhow::bail!(HolantError::Parse(format!("--matrix needs 4 entries, got {}", m.len())))
        }
        (None, Some(m)) => {
            let e: Vec<S> = m
                .iter()
                .map(|s| S::from_json(&Value::String(s.clone())))
                .collect::<holant::Result<_>>()?;
            Transform2x2::new(e[0].clone(), e[1].clone(), e[2].clone(), e[3].clone())
        }
        (None, None) => anyhow::bail!(HolantError::Precondition("give --named or --matrix".into())),
    };
    let g = holo(&f, &t);
    let vals: Vec<String> = g.values().iter().map(scalar_string).collect();
    Ok(Output {
        payload: signature_to_json(&g),
        text: format!("[{}]", vals.join(", ")),
    })
}

fn builtin_cmd<S: JsonScalar>(name: &str, out: Option<&PathBuf>) -> anyhow::Result<Output> {
    let f: Signature<S> = builtin(name)?;
    let doc = signature_to_json(&f);
    let backend = if S::BACKEND == Backend::Exact { "exact" } else { "float" };
    let text = match out {
        Some(p) => {
            std::fs::write(p, serde_json::to_string_pretty(&doc)? + "\n")?;
            format!("wrote {} ({backend}, arity {})", p.display(), f.arity())
        }
        None => serde_json::to_string_pretty(&doc)?,
    };
    Ok(Output { payload: doc, text })
}
