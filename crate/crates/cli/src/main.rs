use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use curvelog::curve::ClassLetter;
use curvelog::hyperlog::{self, PathClass};
use curvelog::io;
use curvelog::iterint::{integrate_tensor, IntegratorConfig, Path};
use curvelog::kz::kz_specialization_check;
use curvelog::local_expansion::{expand_at, ExpansionTarget};
use curvelog::monodromy::{monodromy_operator, period_matrix, standard_loop};
use curvelog::par::Execution;
use curvelog::reduce::{d_map, normal_form};
use curvelog::selftest;
use curvelog::{Curve, Error, FormLetter, RationalFunction, Scalar, Section, ShuffleTensor, Word};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "curvelog", version, about = "Iterated integrals and hyperlogarithms on the punctured sphere")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Comma-separated exact points of S, e.g. `0,1,1/2+i`
    #[arg(long, global = true)]
    poles: Option<String>,
    /// Comma-separated pole labels (class word) or inline JSON list of form letters
    #[arg(long, global = true)]
    word: Option<String>,
    /// Tensor JSON, inline or `@file`
    #[arg(long, global = true)]
    tensor_json: Option<String>,
    /// Evaluation point(s), `;`-separated
    #[arg(long, global = true, allow_hyphen_values = true)]
    point: Option<String>,
    /// Path JSON, inline or `@file`
    #[arg(long, global = true)]
    path_json: Option<String>,
    /// Exact basepoint x₀
    #[arg(long, global = true, allow_hyphen_values = true)]
    basepoint: Option<String>,
    /// Section corrections g_s as a JSON list of rational functions, inline or `@file`
    #[arg(long, global = true)]
    section_json: Option<String>,
    #[arg(long, global = true)]
    weight: Option<usize>,
    #[arg(long, global = true)]
    rtol: Option<f64>,
    #[arg(long, global = true)]
    atol: Option<f64>,
    #[arg(long, global = true)]
    csv: bool,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Run batch work on one thread
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Subcommand)]
enum Command {
    /// L_w(z) for a class word, or I_{x₀}(w)(z) for a word of forms
    Eval,
    /// L_w(1)
    Mzv,
    /// Normal form of a tensor of forms
    Reduce,
    /// Membership in the kernel of the iterated integral map
    Kernel,
    /// Monodromy operator of the standard loop around a pole
    Monodromy {
        #[arg(long)]
        around: String,
    },
    /// Period matrix of the standard loops
    Periods,
    /// Log-Laurent expansion at a pole
    Expand {
        #[arg(long)]
        center: String,
        /// `J,K`: highest power and highest log degree kept
        #[arg(long)]
        orders: Option<String>,
    },
    /// Symbolic KZ specialization check for the points in --poles
    KzCheck,
    /// Runs the acceptance checks
    Selftest,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    rtol: Option<f64>,
    atol: Option<f64>,
    max_steps: Option<usize>,
    weight: Option<usize>,
    seed: Option<u64>,
    sequential: Option<bool>,
}

enum Failure {
    Usage(String),
    Lib(Error),
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Out = Result<String, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

struct Ctx {
    cli: Cli,
    cfg: IntegratorConfig,
    weight_given: bool,
    seed: u64,
    exec: Execution,
}

fn load_config(cli: Cli) -> Result<Ctx, Failure> {
    let file = match std::env::var_os("CURVELOG_CONFIG") {
        Some(p) => {
            let p = PathBuf::from(p);
            let text = std::fs::read_to_string(&p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            toml::from_str::<FileConfig>(&text).map_err(|e| usage(format!("{}: {e}", p.display())))?
        }
        None => FileConfig::default(),
    };
    let base = IntegratorConfig::default();
    let weight = cli.weight.or(file.weight);
    let cfg = IntegratorConfig {
        rtol: cli.rtol.or(file.rtol).unwrap_or(base.rtol),
        atol: cli.atol.or(file.atol).unwrap_or(base.atol),
        max_steps: file.max_steps.unwrap_or(base.max_steps),
        weight: weight.unwrap_or(base.weight),
    };
    cfg.validate()?;
    let sequential = cli.sequential || file.sequential.unwrap_or(false);
    Ok(Ctx {
        seed: cli.seed.or(file.seed).unwrap_or(20240611),
        exec: if sequential { Execution::Sequential } else { Execution::Parallel },
        weight_given: weight.is_some(),
        cfg,
        cli,
    })
}

fn read_json(arg: &str) -> Result<Value, Failure> {
    let text = match arg.strip_prefix('@') {
        Some(p) => std::fs::read_to_string(p).map_err(|e| usage(format!("{p}: {e}")))?,
        None if !arg.trim_start().starts_with(['{', '[']) && std::path::Path::new(arg).exists() => {
            std::fs::read_to_string(arg).map_err(|e| usage(format!("{arg}: {e}")))?
        }
        None => arg.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| Failure::Lib(curvelog::ParseError::Json(e.to_string()).into()))
}

fn parse_point(s: &str) -> Result<Complex64, Failure> {
    Ok(s.trim().parse::<Scalar>().map_err(Error::from)?.to_c64())
}

impl Ctx {
    fn curve(&self) -> Result<Curve, Failure> {
        let p = self.cli.poles.as_deref().ok_or_else(|| usage("--poles is required"))?;
        Ok(Curve::parse(p)?)
    }

    fn points(&self) -> Result<Vec<Complex64>, Failure> {
        match &self.cli.point {
            None => Ok(Vec::new()),
            Some(p) => p.split(';').filter(|s| !s.trim().is_empty()).map(parse_point).collect(),
        }
    }

    fn basepoint(&self, curve: &Curve) -> Result<Scalar, Failure> {
        match &self.cli.basepoint {
            Some(b) => Ok(b.parse::<Scalar>().map_err(Error::from)?),
            None => Ok(curve.default_basepoint()),
        }
    }

    fn section(&self, curve: &Curve) -> Result<Section, Failure> {
        let Some(arg) = &self.cli.section_json else {
            return Ok(Section::standard(curve));
        };
        let v = read_json(arg)?;
        let list = v
            .get("corrections")
            .unwrap_or(&v)
            .as_array()
            .ok_or_else(|| usage("section JSON must be a list of rational functions"))?;
        let gs = list
            .iter()
            .map(|g| io::rf_from(Some(curve), g))
            .collect::<curvelog::Result<Vec<RationalFunction>>>()?;
        Ok(Section::with_corrections(curve, gs)?)
    }

    fn class_word(&self, curve: &Curve) -> Result<Word<ClassLetter>, Failure> {
        let w = self.cli.word.as_deref().ok_or_else(|| usage("--word is required"))?;
        Ok(io::class_word_from_labels(curve, w)?)
    }

    fn form_tensor(&self, curve: &Curve, v: &Value) -> Result<ShuffleTensor<FormLetter>, Failure> {
        if let Some(d) = v.get("dmap") {
            let part = |k: &str| d.get(k).ok_or_else(|| usage(format!("dmap needs \"{k}\"")));
            let s = io::form_tensor_from(curve, part("s")?)?;
            let f = io::rf_from(Some(curve), part("f")?)?;
            let s2 = io::form_tensor_from(curve, part("s2")?)?;
            return Ok(d_map(&s, &f, &s2, &self.basepoint(curve)?)?);
        }
        Ok(io::form_tensor_from(curve, v)?)
    }

    fn tensor_arg(&self, curve: &Curve) -> Result<ShuffleTensor<FormLetter>, Failure> {
        let arg = self.cli.tensor_json.as_deref().ok_or_else(|| usage("--tensor-json is required"))?;
        self.form_tensor(curve, &read_json(arg)?)
    }

    fn path(&self) -> Result<Option<Path>, Failure> {
        match &self.cli.path_json {
            None => Ok(None),
            Some(arg) => {
                let v = read_json(arg)?;
                Ok(Some(Path::from_json(&v.to_string())?))
            }
        }
    }
}

fn value_record(z: Complex64, v: Complex64, word: &Value) -> Value {
    json!({"value": io::complex(v), "word": word, "point": io::complex(z)})
}

fn emit_values(ctx: &Ctx, word: Value, rows: &[(Complex64, Complex64)]) -> String {
    if ctx.cli.csv {
        let mut out = String::from("re_z,im_z,re,im\n");
        for (z, v) in rows {
            out.push_str(&format!("{},{},{},{}\n", z.re, z.im, v.re, v.im));
        }
        return out;
    }
    match rows {
        [(z, v)] => value_record(*z, *v, &word).to_string(),
        _ => Value::Array(rows.iter().map(|&(z, v)| value_record(z, v, &word)).collect()).to_string(),
    }
}

fn cmd_eval(ctx: &Ctx) -> Out {
    let curve = ctx.curve()?;
    let wtext = ctx.cli.word.as_deref().ok_or_else(|| usage("--word is required"))?;
    let path = ctx.path()?;
    let mut points = ctx.points()?;

    if wtext.trim_start().starts_with('[') {
        // word of forms, integrated from x₀
        let letters: Vec<Value> = serde_json::from_str(wtext).map_err(|e| Failure::Lib(curvelog::ParseError::Json(e.to_string()).into()))?;
        let w = letters.iter().map(|l| io::form_letter_from(&curve, l)).collect::<curvelog::Result<Vec<_>>>()?;
        let t = ShuffleTensor::word(curve.form_alphabet(), w);
        let x0 = ctx.basepoint(&curve)?.to_c64();
        let paths: Vec<Path> = match path {
            Some(p) => vec![p],
            None if points.is_empty() => return Err(usage("--point or --path-json is required")),
            None => points.iter().map(|&z| Path::route(curve.numeric_points(), x0, z)).collect(),
        };
        let vals = curvelog::par::par_try_map(ctx.exec, &paths, |p| integrate_tensor(&curve, p, &t, &ctx.cfg))?;
        let rows: Vec<_> = paths.iter().map(Path::end).zip(vals).collect();
        return Ok(emit_values(ctx, Value::Array(letters), &rows));
    }

    let w = ctx.class_word(&curve)?;
    let labels = json!(io::class_word_labels(&curve, &w));
    if let Some(p) = path {
        let z0 = hyperlog::base_point(&curve)?;
        let full = Path::route(curve.numeric_points(), z0, p.base()).then(&p)?;
        let z = full.end();
        let v = hyperlog::eval_l(&curve, &w, z, &PathClass::Explicit(full), &ctx.cfg)?;
        return Ok(emit_values(ctx, labels, &[(z, v)]));
    }
    if points.is_empty() {
        return Err(usage("--point or --path-json is required"));
    }
    points.dedup();
    let vals = hyperlog::eval_points(&curve, &w, &points, &ctx.cfg, ctx.exec)?;
    let rows: Vec<_> = points.into_iter().zip(vals).collect();
    Ok(emit_values(ctx, labels, &rows))
}

fn cmd_mzv(ctx: &Ctx) -> Out {
    let curve = ctx.curve()?;
    let w = ctx.class_word(&curve)?;
    let v = hyperlog::mzv(&curve, &w, &ctx.cfg)?;
    Ok(json!({"value": io::complex(v), "word": io::class_word_labels(&curve, &w)}).to_string())
}

fn cmd_reduce(ctx: &Ctx, kernel: bool) -> Out {
    let curve = ctx.curve()?;
    let t = ctx.tensor_arg(&curve)?;
    let nf = normal_form(&t, &ctx.section(&curve)?, &ctx.basepoint(&curve)?)?;
    let body = io::normal_form_json(&nf);
    Ok(if kernel {
        json!({"member": nf.is_zero(), "normal_form": body}).to_string()
    } else {
        body.to_string()
    })
}

fn cmd_monodromy(ctx: &Ctx, around: &str) -> Out {
    let curve = ctx.curve()?;
    let s = curve.index_of_label(around)?;
    let x0 = ctx.basepoint(&curve)?.to_c64();
    let n = if ctx.weight_given { ctx.cfg.weight } else { 3 };
    let gamma = standard_loop(&curve, s, x0)?;
    let m = monodromy_operator(&ctx.section(&curve)?, &gamma, n, &ctx.cfg)?;
    let words: Vec<Vec<String>> = m.words().iter().map(|w| io::class_word_labels(&curve, w)).collect();
    Ok(json!({
        "around": curve.label(s),
        "basepoint": io::complex(x0),
        "weight": n,
        "words": words,
        "matrix": io::complex_matrix(m.matrix()),
    })
    .to_string())
}

fn cmd_periods(ctx: &Ctx) -> Out {
    let curve = ctx.curve()?;
    let x0 = match &ctx.cli.basepoint {
        Some(_) => Some(ctx.basepoint(&curve)?.to_c64()),
        None => None,
    };
    let p = period_matrix(&ctx.section(&curve)?, x0, &ctx.cfg, ctx.exec)?;
    if ctx.cli.csv {
        let mut out = String::from("loop,class,re,im\n");
        for (s, row) in p.entries.iter().enumerate() {
            for (t, v) in row.iter().enumerate() {
                out.push_str(&format!("{},{},{},{}\n", curve.label(s), curve.label(t), v.re, v.im));
            }
        }
        return Ok(out);
    }
    Ok(json!({
        "basepoint": io::complex(p.basepoint),
        "matrix": io::complex_matrix(&p.entries),
        "determinant": io::complex(p.determinant()),
    })
    .to_string())
}

fn cmd_expand(ctx: &Ctx, center: &str, orders: Option<&str>) -> Out {
    let curve = ctx.curve()?;
    let s = curve.index_of_label(center)?;
    let w = ctx.class_word(&curve)?;
    let (j, k) = match orders {
        None => (10, w.weight()),
        Some(o) => {
            let (a, b) = o.split_once(',').ok_or_else(|| usage("--orders takes J,K"))?;
            let a = a.trim().parse().map_err(|_| usage("bad J in --orders"))?;
            let b = b.trim().parse().map_err(|_| usage("bad K in --orders"))?;
            (a, b)
        }
    };
    let target = match &ctx.cli.basepoint {
        Some(_) => ExpansionTarget::Based {
            x0: ctx.basepoint(&curve)?.to_c64(),
        },
        None => ExpansionTarget::Hyperlog,
    };
    let e = expand_at(&ctx.section(&curve)?, target, &w, s, j, k, &ctx.cfg)?;
    let mut out = e.to_json();
    let pts = ctx.points()?;
    if !pts.is_empty() {
        let vals = pts
            .iter()
            .map(|&z| Ok(json!({"point": io::complex(z), "value": io::complex(e.evaluate(z)?)})))
            .collect::<curvelog::Result<Vec<_>>>()?;
        out["values"] = Value::Array(vals);
    }
    Ok(out.to_string())
}

fn cmd_kz(ctx: &Ctx) -> Out {
    let p = ctx.cli.poles.as_deref().ok_or_else(|| usage("--poles is required"))?;
    let pts = p
        .split(',')
        .map(|s| s.trim().parse::<Scalar>().map_err(Error::from))
        .collect::<Result<Vec<_>, _>>()?;
    let holds = kz_specialization_check(&pts)?;
    let labels: Vec<String> = pts.iter().map(|s| s.to_string()).collect();
    Ok(json!({"points": labels, "holds": holds}).to_string())
}

fn cmd_selftest(ctx: &Ctx) -> Out {
    let reports = selftest::run_all(ctx.seed, ctx.exec);
    for r in &reports {
        eprintln!("{r}");
    }
    let all = reports.iter().all(|r| r.passed);
    let list: Vec<Value> = reports
        .iter()
        .map(|r| json!({"id": r.id, "name": r.name, "passed": r.passed, "detail": r.detail, "seconds": r.seconds}))
        .collect();
    println!("{}", json!({"seed": ctx.seed, "passed": all, "criteria": list}));
    if all {
        Ok(String::new())
    } else {
        Err(Failure::Checks)
    }
}

fn run(ctx: &Ctx) -> Out {
    match &ctx.cli.command {
        Command::Eval => cmd_eval(ctx),
        Command::Mzv => cmd_mzv(ctx),
        Command::Reduce => cmd_reduce(ctx, false),
        Command::Kernel => cmd_reduce(ctx, true),
        Command::Monodromy { around } => cmd_monodromy(ctx, around),
        Command::Periods => cmd_periods(ctx),
        Command::Expand { center, orders } => cmd_expand(ctx, center, orders.as_deref()),
        Command::KzCheck => cmd_kz(ctx),
        Command::Selftest => cmd_selftest(ctx),
    }
}

fn fail(f: Failure) -> ExitCode {
    let (msg, code) = match f {
        Failure::Usage(m) => (m, 1),
        Failure::Lib(e) => (e.to_string(), e.exit_code()),
        Failure::Checks => ("self-test failed".to_string(), 3),
    };
    eprintln!("{}", json!({"error": msg}));
    ExitCode::from(code as u8)
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
    let ctx = match load_config(cli) {
        Ok(c) => c,
        Err(f) => return fail(f),
    };
    match run(&ctx) {
        Ok(out) => {
            if !out.is_empty() {
                if out.ends_with('\n') {
                    print!("{out}");
                } else {
                    println!("{out}");
                }
            }
            ExitCode::SUCCESS
        }
        Err(f) => fail(f),
    }
}
