use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use ramfilt::atlas::{atlas, describe_field};
use ramfilt::classify::{ckp_degree, ckp_filtration, is_admissible, cyclic_check, Verdict};
use ramfilt::construct::{construct_extension, describe_subgroup};
use ramfilt::ramification::{filtration, kummer_filtration, JumpSequence};
use ramfilt::units::decompose;
use ramfilt::{ElementRepr, Error, FieldSpec, FieldSpecFile, KModP, RingElement, Subspace};

#[derive(Parser)]
#[command(
    name = "ramfilt",
    version,
    about = "Upper ramification jumps of elementary abelian p-extensions"
)]
struct Cli {
    /// Print tables instead of JSON.
    #[arg(long, global = true)]
    plain: bool,

    /// p-adic digits M, used when the field file leaves precision at 0.
    #[arg(long, global = true, env = "RAMFILT_PRECISION")]
    precision: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Invariants of K, the basis of K^×/(K^×)^p and ω_*.
    DescribeField { spec: PathBuf },
    /// Jumps of the maximal elementary abelian p-extension, closed form and computed.
    Ckp { spec: PathBuf },
    /// Jumps of the extension given by a normic subgroup or by Kummer radicands.
    Jumps {
        spec: PathBuf,
        /// Subgroup as basis rows or basis labels (file or inline JSON).
        #[arg(long, conflicts_with = "kummer", required_unless_present = "kummer")]
        norm: Option<String>,
        /// Radicands as a JSON list of elements (file or inline JSON).
        #[arg(long)]
        kummer: Option<String>,
    },
    /// Whether a jump sequence occurs for some elementary abelian extension.
    Admissible {
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        seq: String,
    },
    /// Whether a list of jumps occurs for a cyclic extension (ζ_p ∉ K).
    Cyclic {
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        jumps: String,
    },
    /// An extension realizing an admissible jump sequence.
    Construct {
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        seq: String,
    },
    /// Coordinates in K^×/(K^×)^p and unit decompositions of elements.
    Coordinates {
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        elements: String,
    },
    /// Every degree-p extension with its jump, plus consistency checks.
    Atlas {
        spec: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_codim: usize,
    },
}

/// A run that completed but answered "no" or failed a check.
struct Negative;

type Outcome = anyhow::Result<Result<(), Negative>>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Negative)) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            let semantic = matches!(
                e.downcast_ref::<Error>(),
                Some(Error::NotAdmissible(_) | Error::SelfVerificationFailed(_))
            );
            ExitCode::from(if semantic { 1 } else { 2 })
        }
    }
}

fn load_field(path: &Path, precision: Option<u32>) -> anyhow::Result<Arc<FieldSpec>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut file: FieldSpecFile =
        serde_json::from_str(&text).map_err(|e| Error::InvalidSpec(e.to_string()))?;
    if file.precision == 0 {
        file.precision = precision.unwrap_or(0);
    }
    Ok(FieldSpec::from_file(&file)?)
}

/// Inline JSON, or the contents of the named file.
fn json_arg(arg: &str) -> anyhow::Result<Value> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('[') || trimmed.starts_with('{') || trimmed.starts_with('-') {
        arg.to_string()
    } else if let Ok(text) = std::fs::read_to_string(arg) {
        text
    } else {
        arg.to_string()
    };
    serde_json::from_str(&text).with_context(|| format!("parsing JSON argument {arg:?}"))
}

fn parse_seq(arg: &str) -> anyhow::Result<Vec<(i64, i64)>> {
    serde_json::from_value(json_arg(arg)?).context("expected [[t, m], ...]")
}

fn parse_elements(k: &Arc<FieldSpec>, arg: &str) -> anyhow::Result<Vec<RingElement>> {
    let reprs: Vec<ElementRepr> =
        serde_json::from_value(json_arg(arg)?).context("expected a list of elements")?;
    Ok(reprs
        .iter()
        .map(|r| RingElement::from_repr(k, r))
        .collect::<Result<_, _>>()?)
}

fn parse_subspace(v: &KModP, arg: &str) -> anyhow::Result<Subspace> {
    let value = json_arg(arg)?;
    let items = value
        .as_array()
        .ok_or_else(|| anyhow!("expected a JSON list"))?;
    let p = v.p() as i64;
    let labels = v.label_strings();
    let rows = items
        .iter()
        .map(|item| match item {
            Value::String(name) => {
                let i = labels.iter().position(|l| l == name).ok_or_else(|| {
                    anyhow!(
                        "unknown basis label {name:?}; basis is {}",
                        labels.join(", ")
                    )
                })?;
                let mut row = vec![0u64; v.dim()];
                row[i] = 1;
                Ok(row)
            }
            _ => {
                let row: Vec<i64> =
                    serde_json::from_value(item.clone()).context("expected a row of integers")?;
                Ok(row.iter().map(|c| c.rem_euclid(p) as u64).collect())
            }
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(Subspace::span(&rows, v.dim(), v.p())?)
}

fn print_json(value: &impl serde::Serialize) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string(value)?);
    Ok(())
}

fn jump_table(s: &JumpSequence, p: u64) -> String {
    let mut out = String::from("  t  m\n");
    for &(t, m) in s.pairs() {
        out += &format!("{t:>3} {m:>2}\n");
    }
    for line in s.render_chain(p) {
        out += &format!("{line}\n");
    }
    out
}

fn verdict_line(v: &Verdict, p: u64) -> String {
    if v.admissible {
        let log = v.degree_log.unwrap_or(0);
        match v.degree(p) {
            Some(d) => format!("yes; degree {p}^{log} = {d}"),
            None => format!("yes; degree {p}^{log}"),
        }
    } else {
        let reason = v.reason.map(|r| r.to_string()).unwrap_or_default();
        format!("no: {reason} at index {}", v.index.unwrap_or(0))
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::DescribeField { spec } => {
            let k = load_field(spec, cli.precision)?;
            let s = describe_field(&k)?;
            if cli.plain {
                let (num, den) = s.crit;
                println!(
                    "p = {}; e = {}; f = {}; n = {}; q = {}",
                    s.p, s.e, s.f, s.n, s.q
                );
                println!(
                    "precision M = {} (pi-adic {})",
                    s.precision_digits,
                    k.precision()
                );
                match s.crit_int {
                    Some(c) => println!("crit = {c}"),
                    None => println!("crit = {num}/{den}"),
                }
                let levels: Vec<String> = s.levels.iter().map(|l| l.to_string()).collect();
                println!("I = {{{}}}", levels.join(", "));
                println!("zeta_p: {}", if s.zeta_p { "yes" } else { "no" });
                let mut line = format!("dim V = {}; basis {}", s.dim_v, s.basis.join(", "));
                if let Some(w) = &s.omega_star {
                    line += &format!("; omega_* = {w}");
                }
                println!("{line}");
            } else {
                print_json(&s)?;
            }
            Ok(Ok(()))
        }
        Command::Ckp { spec } => {
            let k = load_field(spec, cli.precision)?;
            let v = KModP::new(&k);
            let closed = ckp_filtration(&k);
            let computed = filtration(&v, &v.zero())?;
            let agree = closed == computed;
            if cli.plain {
                println!(
                    "degree {}",
                    ckp_degree(&k).map_or("overflow".into(), |d| d.to_string())
                );
                print!("{}", jump_table(&closed, k.p()));
                println!(
                    "computed {computed}: {}",
                    if agree { "agrees" } else { "DISAGREES" }
                );
            } else {
                print_json(&json!({
                    "degree": ckp_degree(&k).map(|d| d.to_string()),
                    "closed_form": closed,
                    "computed": computed,
                    "agree": agree,
                    "chain": closed.render_chain(k.p()),
                }))?;
            }
            Ok(if agree { Ok(()) } else { Err(Negative) })
        }
        Command::Jumps { spec, norm, kummer } => {
            let k = load_field(spec, cli.precision)?;
            let v = KModP::new(&k);
            let s = match (norm, kummer) {
                (Some(n), _) => filtration(&v, &parse_subspace(&v, n)?)?,
                (None, Some(a)) => {
                    let elems = parse_elements(&k, a)?;
                    let coords = elems
                        .iter()
                        .map(|x| v.coordinates(x))
                        .collect::<Result<Vec<_>, _>>()?;
                    kummer_filtration(&v, &coords)?
                }
                (None, None) => bail!("one of --norm or --kummer is required"),
            };
            if cli.plain {
                print!("{}", jump_table(&s, k.p()));
            } else {
                print_json(&json!({ "jumps": s, "chain": s.render_chain(k.p()) }))?;
            }
            Ok(Ok(()))
        }
        Command::Admissible { spec, seq } => {
            let k = load_field(spec, cli.precision)?;
            let verdict = is_admissible(&k, &parse_seq(seq)?)?;
            if cli.plain {
                println!("{}", verdict_line(&verdict, k.p()));
            } else {
                print_json(&verdict)?;
            }
            Ok(if verdict.admissible {
                Ok(())
            } else {
                Err(Negative)
            })
        }
        Command::Cyclic { spec, jumps } => {
            let k = load_field(spec, cli.precision)?;
            let jumps: Vec<i64> =
                serde_json::from_value(json_arg(jumps)?).context("expected [t1, t2, ...]")?;
            let verdict = cyclic_check(&k, &jumps)?;
            if cli.plain {
                println!("{}", verdict_line(&verdict, k.p()));
            } else {
                print_json(&verdict)?;
            }
            Ok(if verdict.admissible {
                Ok(())
            } else {
                Err(Negative)
            })
        }
        Command::Construct { spec, seq } => {
            let k = load_field(spec, cli.precision)?;
            let v = KModP::new(&k);
            let raw = parse_seq(seq)?;
            let pairs = raw
                .iter()
                .map(|&(t, m)| u32::try_from(m).map(|m| (t, m)))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| Error::NotAdmissible("M_RANGE".into()))?;
            let w = construct_extension(&v, &JumpSequence::new(pairs)?)?;
            if cli.plain {
                println!("{}", describe_subgroup(&v, &w.normic));
                if let Some(gens) = &w.kummer {
                    let names: Vec<String> = gens
                        .iter()
                        .map(|g| ramfilt::atlas::render_element(&g.element))
                        .collect();
                    println!("M = K({{a^(1/{}) : a in [{}]}})", k.p(), names.join(", "));
                }
                print!("{}", jump_table(&w.claimed, k.p()));
                println!("verified");
            } else {
                print_json(&w)?;
            }
            Ok(Ok(()))
        }
        Command::Coordinates { spec, elements } => {
            let k = load_field(spec, cli.precision)?;
            let v = KModP::new(&k);
            let mut rows = Vec::new();
            for a in parse_elements(&k, elements)? {
                let coords = v.coordinates(&a)?;
                let val = a.valuation().ok_or(Error::ZeroInput)?;
                let principal = a.div_pi_pow(val)?.pow(k.q() as u128 - 1);
                let dec = decompose(&principal, 1)?;
                rows.push(json!({
                    "element": a.to_repr(),
                    "valuation": val,
                    "coords": coords,
                    "unit_part": dec,
                }));
            }
            if cli.plain {
                println!("basis {}", v.label_strings().join(", "));
                for r in &rows {
                    println!("{} -> {}", r["element"], r["coords"]);
                }
            } else {
                print_json(&json!({ "basis": v.label_strings(), "elements": rows }))?;
            }
            Ok(Ok(()))
        }
        Command::Atlas { spec, max_codim } => {
            let k = load_field(spec, cli.precision)?;
            let v = KModP::new(&k);
            let report = atlas(&k, *max_codim)?;
            if cli.plain {
                println!(
                    "{} hyperplanes (basis {})",
                    report.hyperplanes.len(),
                    v.label_strings().join(", ")
                );
                for h in &report.hyperplanes {
                    println!("  ker {:?}  t = {}", h.normal, h.jump);
                }
                let ms: Vec<String> = report
                    .multiset
                    .iter()
                    .map(|(t, c)| format!("{t}:{c}"))
                    .collect();
                println!("jump multiset {{{}}}", ms.join(", "));
                match report.multiset_agreement {
                    Some(ok) => println!(
                        "norm/Kummer multisets: {}",
                        if ok { "agree" } else { "DISAGREE" }
                    ),
                    None => println!("norm/Kummer multisets: not applicable"),
                }
                println!(
                    "closed form vs computed: {}",
                    if report.ckp_agreement {
                        "agree"
                    } else {
                        "DISAGREE"
                    }
                );
                println!(
                    "admissibility: {} subspaces with codim <= {}, {} failures",
                    report.subspaces_checked,
                    report.max_codim,
                    report.inadmissible.len()
                );
                println!("{}", if report.passed { "PASS" } else { "FAIL" });
            } else {
                print_json(&report)?;
            }
            Ok(if report.passed { Ok(()) } else { Err(Negative) })
        }
    }
}
