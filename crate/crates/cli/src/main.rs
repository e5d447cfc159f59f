use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use okbody::fiberspace::{self, BodySummary, CheckReport, CHECKS};
use okbody::io;
use okbody::rational::{format_q, parse_q};
use okbody::{Flag, Polytope, VarietyModel, Verdict, Q};

#[derive(Parser)]
#[command(
    name = "okbody",
    version,
    about = "Exact Newton-Okounkov bodies and fibre-space subadditivity checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct BodyArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    divisor: PathBuf,
    /// Defaults to the model's standard flag.
    #[arg(long)]
    flag: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlotFormat {
    Csv,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Valuative body of a divisor.
    Body(BodyArgs),
    /// Limiting body, perturbing by the model's default ample class.
    Limbody {
        #[command(flatten)]
        body: BodyArgs,
        #[arg(long)]
        epsilon: Option<String>,
    },
    /// Zariski decomposition of a surface class.
    Zariski {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        divisor: PathBuf,
    },
    /// Volume of a divisor.
    Vol {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        divisor: PathBuf,
    },
    /// Iitaka-type dimensions of a divisor.
    Dims {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        divisor: PathBuf,
    },
    /// Runs a check on an instance, or every check on a directory of instances.
    Check {
        /// One of thm1_3, cor3_5, thm1_1, thm1_2, lemma3_1, remark3_6.
        name: Option<String>,
        #[arg(long, required_unless_present = "all")]
        instance: Option<PathBuf>,
        /// Directory of instance files; checks them all in file-name order.
        #[arg(long, conflicts_with = "instance")]
        all: Option<PathBuf>,
    },
    /// Grid search for scalings relating the canonical bodies of an instance.
    ScalingSearch {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        grid_step: Option<String>,
        #[arg(long)]
        bound: Option<String>,
    },
    /// Compares the level-m lattice-point body of a toric divisor with the exact body.
    OracleCompare {
        #[command(flatten)]
        body: BodyArgs,
        #[arg(long, default_value_t = 20)]
        m: u32,
    },
    /// Writes plot data for a body.
    EmitPlot {
        #[command(flatten)]
        body: BodyArgs,
        #[arg(long, value_enum, default_value = "csv")]
        format: PlotFormat,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parses and validates files, or every JSON file under directories.
    Validate { paths: Vec<PathBuf> },
}

fn parse_opt_q(s: &Option<String>, what: &str) -> Result<Option<Q>> {
    s.as_deref()
        .map(|t| parse_q(t).with_context(|| format!("--{what}")))
        .transpose()
}

fn load_body_inputs(a: &BodyArgs) -> Result<(VarietyModel, Vec<Q>, Flag)> {
    let model = io::load_model(&a.model)?;
    let d = io::load_divisor(&a.divisor, &model)?.coeffs;
    let flag = match &a.flag {
        Some(p) => io::load_flag(p, &model)?,
        None => model.default_flag(),
    };
    Ok((model, d, flag))
}

fn qs(xs: &[Q]) -> Value {
    Value::Array(xs.iter().map(|x| Value::String(format_q(x))).collect())
}

fn emit(report: &Value, summary: &str) {
    println!("{}", serde_json::to_string_pretty(report).expect("json"));
    eprintln!("{summary}");
}

fn summarize_check(r: &CheckReport) -> String {
    let mut s = format!("{} on {}: {}", r.check, r.instance, r.verdict.as_str());
    if r.margin != "0" {
        s.push_str(&format!(" (margin {})", r.margin));
    }
    for g in r.hypotheses.iter().filter(|g| !g.ok) {
        s.push_str(&format!(
            "\n  unmet: {}{}",
            g.name,
            if g.detail.is_empty() {
                String::new()
            } else {
                format!(" ({})", g.detail)
            }
        ));
    }
    for n in &r.notes {
        s.push_str(&format!("\n  {n}"));
    }
    s
}

fn json_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    let entries = std::fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))?;
    for e in entries {
        let p = e?.path();
        if p.is_dir() {
            out.extend(json_files(&p)?);
        } else if p.extension().is_some_and(|x| x == "json") {
            out.push(p);
        }
    }
    out.sort();
    Ok(out)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Body(a) => {
            let (model, d, flag) = load_body_inputs(&a)?;
            let body = model.body_val(&d, &flag)?;
            let s = BodySummary::of(&body);
            emit(
                &json!({ "divisor": qs(&d), "flag": flag, "body": s }),
                &format!("body: {} vertices, dim {}", s.vertices.len(), s.dim),
            );
            Ok(0)
        }
        Command::Limbody { body: a, epsilon } => {
            let (model, d, flag) = load_body_inputs(&a)?;
            let amp = model.default_ample()?;
            let body = model.body_lim(&d, &flag, &amp, parse_opt_q(&epsilon, "epsilon")?)?;
            let s = BodySummary::of(&body);
            emit(
                &json!({ "divisor": qs(&d), "flag": flag, "ample": qs(&amp), "body": s }),
                &format!(
                    "limiting body: {} vertices, dim {}",
                    s.vertices.len(),
                    s.dim
                ),
            );
            Ok(0)
        }
        Command::Zariski { model, divisor } => {
            let m = io::load_model(&model)?;
            let d = io::load_divisor(&divisor, &m)?.coeffs;
            let VarietyModel::Surface(s) = &m else {
                bail!("zariski needs a surface model")
            };
            let z = s.zariski_decompose(&d)?;
            let vol = s.volume(&d)?;
            emit(
                &json!({ "divisor": qs(&d), "P": qs(&z.positive), "N": qs(&z.negative), "support": z.support, "volume": format_q(&vol) }),
                &format!(
                    "P = {:?}, N = {:?}, vol = {}",
                    qs(&z.positive),
                    qs(&z.negative),
                    format_q(&vol)
                ),
            );
            Ok(0)
        }
        Command::Vol { model, divisor } => {
            let m = io::load_model(&model)?;
            let d = io::load_divisor(&divisor, &m)?.coeffs;
            let vol = m.volume(&d)?;
            emit(
                &json!({ "divisor": qs(&d), "volume": format_q(&vol) }),
                &format!("vol = {}", format_q(&vol)),
            );
            Ok(0)
        }
        Command::Dims { model, divisor } => {
            let m = io::load_model(&model)?;
            let d = io::load_divisor(&divisor, &m)?.coeffs;
            let amp = m.default_ample()?;
            let dims = m.dims(&d, &amp)?;
            emit(
                &json!({ "divisor": qs(&d), "ample": qs(&amp), "dims": dims, "chain_holds": dims.chain_holds() }),
                &format!(
                    "ν = {}, κ_vol = {}, chain {}",
                    dims.nu_bdpp,
                    dims.kappa_vol,
                    if dims.chain_holds() { "holds" } else { "fails" }
                ),
            );
            Ok(0)
        }
        Command::Check {
            name,
            instance: Some(path),
            all: None,
        } => {
            let name = name.ok_or_else(|| anyhow!("check needs a name with --instance"))?;
            let fs = io::load_instance(&path)?;
            let r = fiberspace::run_check(&fs, &name)?;
            emit(&serde_json::to_value(&r)?, &summarize_check(&r));
            Ok(r.verdict.exit_code() as u8)
        }
        Command::Check {
            name,
            all: Some(dir),
            ..
        } => {
            let names: Vec<String> = match name {
                Some(n) => vec![n],
                None => CHECKS.iter().map(|s| s.to_string()).collect(),
            };
            let mut reports = Vec::new();
            let mut code = 0u8;
            for path in json_files(&dir)? {
                let fs = io::load_instance(&path)?;
                for n in &names {
                    let r = fiberspace::run_check(&fs, n)?;
                    let mismatch = fs.expect.get(n).is_some_and(|want| *want != r.verdict);
                    if r.verdict == Verdict::Fails || mismatch {
                        code = 1;
                    }
                    let mut line = summarize_check(&r);
                    if mismatch {
                        line.push_str(&format!("\n  expected {}", fs.expect[n].as_str()));
                    }
                    eprintln!("{line}");
                    reports.push(r);
                }
            }
            println!("{}", serde_json::to_string_pretty(&reports)?);
            Ok(code)
        }
        Command::Check { .. } => bail!("give either --instance or --all"),
        Command::ScalingSearch {
            instance,
            grid_step,
            bound,
        } => {
            let fs = io::load_instance(&instance)?;
            let r = fiberspace::scaling_search(
                &fs,
                parse_opt_q(&grid_step, "grid-step")?,
                parse_opt_q(&bound, "bound")?,
            )?;
            let summary = format!(
                "{} feasible triples; least α with β = γ = 1: {}; unit comparison {}{}",
                r.feasible.len(),
                r.min_alpha_unit.as_deref().unwrap_or("none on the grid"),
                r.unit_verdict.as_str(),
                if r.reverse_strict {
                    "; the sum strictly contains the total body"
                } else {
                    ""
                }
            );
            emit(&serde_json::to_value(&r)?, &summary);
            Ok(0)
        }
        Command::OracleCompare { body: a, m } => {
            let (model, d, flag) = load_body_inputs(&a)?;
            let (VarietyModel::Toric(x), Flag::Toric(f)) = (&model, &flag) else {
                bail!("oracle-compare needs a toric model")
            };
            let div = okbody::ToricDivisor::new(d.clone());
            let exact = x.okounkov_body(&div, f)?;
            let brute = x.okounkov_body_bruteforce(&div, f, m)?;
            let c = exact.contains(&brute);
            let missing: Vec<Vec<String>> = exact
                .vertices()
                .iter()
                .filter(|v| !brute.vertices().contains(v))
                .map(|v| v.to_strings())
                .collect();
            let ev = exact.intrinsic_volume()?;
            let bv = brute.volume_in_dim(exact.dim().unwrap_or(0))?;
            let ratio = if ev == Q::from_integer(0.into()) {
                None
            } else {
                Some(format_q(&(&bv / &ev)))
            };
            emit(
                &json!({
                    "m": m,
                    "exact": BodySummary::of(&exact),
                    "bruteforce": BodySummary::of(&brute),
                    "contained": c.contained,
                    "margin": format_q(&c.margin),
                    "missing_vertices": missing,
                    "volume_ratio": ratio,
                }),
                &format!(
                    "m = {m}: contained {}, volume ratio {}",
                    c.contained,
                    ratio.as_deref().unwrap_or("n/a")
                ),
            );
            Ok(if c.contained { 0 } else { 1 })
        }
        Command::EmitPlot {
            body: a,
            format,
            out,
        } => {
            let (model, d, flag) = load_body_inputs(&a)?;
            let body: Polytope = model.body_val(&d, &flag)?;
            let text = match format {
                PlotFormat::Csv => okbody::plot::csv(&body),
                PlotFormat::Svg => okbody::plot::svg(&body)?,
            };
            match out {
                Some(p) => {
                    std::fs::write(&p, &text)
                        .with_context(|| format!("writing {}", p.display()))?;
                    eprintln!("wrote {}", p.display());
                }
                None => print!("{text}"),
            }
            Ok(0)
        }
        Command::Validate { paths } => {
            if paths.is_empty() {
                bail!("validate needs at least one path");
            }
            let mut files = Vec::new();
            for p in &paths {
                if p.is_dir() {
                    files.extend(json_files(p)?);
                } else {
                    files.push(p.clone());
                }
            }
            let mut results = Vec::new();
            let mut code = 0u8;
            for f in files {
                match io::validate_file(&f) {
                    Ok(kind) => {
                        eprintln!("ok {} ({})", f.display(), kind.as_str());
                        results.push(json!({ "path": f.display().to_string(), "kind": kind.as_str(), "ok": true }));
                    }
                    Err(e) => {
                        eprintln!("error: {e}");
                        code = 2;
                        results.push(json!({ "path": f.display().to_string(), "ok": false, "error": e.to_string() }));
                    }
                }
            }
            println!("{}", serde_json::to_string_pretty(&results)?);
            Ok(code)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
