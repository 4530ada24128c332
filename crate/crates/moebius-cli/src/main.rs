use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use moebius::band::hom_c_dim;
use moebius::equiv::{
    digits_to_coords, digits_to_point, obj_to_string, simple_object, string_to_obj, DigitPrefix,
};
use moebius::quotient::{cokernel, kernel, MorQ, SumObj};
use moebius::render::{render, RenderSpec};
use moebius::strings::StringWord;
use moebius::walk::{approximation, hom_ct_dim, support, walk_of};
use moebius::{cluster::mutate_standard, suite, ClusterPt, Error, Obj, Rect};

#[derive(Parser)]
#[command(
    name = "moebius",
    version,
    about = "Exact queries on the dyadic strip model"
)]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Hom dimensions in the cluster category and in the quotient.
    Hom { x: String, y: String },
    /// Cluster points where the module of X is nonzero.
    Support { x: String },
    /// The walk of X with vertex roles.
    Walk { x: String },
    /// Sources and sinks of the minimal cluster approximation.
    Approx { x: String },
    /// Flip a cluster point.
    Mutate { v: String },
    /// String word of an object.
    ToString { x: String },
    /// Object of a string word.
    FromString { word: String },
    /// The simple module at a cluster point.
    Simple { v: String },
    /// Kernel of a morphism read as JSON from stdin.
    Kernel,
    /// Cokernel of a morphism read as JSON from stdin.
    Cokernel,
    /// The cluster point reached from V by binary digits.
    Digits {
        v: String,
        /// Digits, as separate arguments or runs like 1011.
        digits: Vec<String>,
    },
    /// Run the acceptance checks on the grid of spacing 1/2^depth.
    Check {
        #[arg(long, default_value_t = 3)]
        depth: u32,
    },
    /// Draw an SVG picture of the strip.
    Render {
        /// JSON file with objects, rects, walks and cluster_depth.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long = "object")]
        objects: Vec<Obj>,
        #[arg(long = "rect")]
        rects: Vec<Rect>,
        #[arg(long = "walk")]
        walks: Vec<Obj>,
        #[arg(long)]
        cluster_depth: Option<u32>,
        /// Output file; standard output if absent.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

enum Fail {
    Parse(String),
    Domain(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        match e {
            Error::Parse(_) => Fail::Parse(e.to_string()),
            _ => Fail::Domain(e.to_string()),
        }
    }
}

struct Output {
    text: String,
    json: Value,
    ok: bool,
}

impl Output {
    fn new(text: impl Into<String>, json: Value) -> Output {
        Output {
            text: text.into(),
            json,
            ok: true,
        }
    }
}

fn joined<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|t| t.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn read_morphism() -> Result<MorQ, Fail> {
    let mut buf = String::new();
    std::io::stdin()
        .read_to_string(&mut buf)
        .map_err(|e| Fail::Domain(format!("reading stdin: {e}")))?;
    let v: Value =
        serde_json::from_str(&buf).map_err(|e| Fail::Parse(format!("morphism JSON: {e}")))?;
    Ok(MorQ::from_json(&v)?)
}

fn limit(obj: &SumObj, f: &MorQ, role: &str) -> Output {
    Output::new(
        format!("{role}: {obj}\n{}", f.to_json()),
        json!({ "object": obj, "morphism": f.to_json() }),
    )
}

fn parse_digits(args: &[String]) -> Result<Vec<u8>, Fail> {
    let mut out = Vec::new();
    for a in args {
        for c in a.chars() {
            match c {
                '0' => out.push(0),
                '1' => out.push(1),
                _ => {
                    return Err(Fail::Parse(format!(
                        "parse error: {c:?} is not a binary digit"
                    )))
                }
            }
        }
    }
    Ok(out)
}

/// Parses a positional argument; malformed text exits 2, anything the
/// library rejects on its merits exits 1.
fn arg<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<T, Fail> {
    Ok(s.parse()?)
}

fn run(cmd: Cmd) -> Result<Output, Fail> {
    Ok(match cmd {
        Cmd::Hom { x, y } => {
            let (x, y): (Obj, Obj) = (arg(&x)?, arg(&y)?);
            let c = hom_c_dim(&x, &y);
            let ct = hom_ct_dim(&x, &y);
            Output::new(format!("C: {c}, C/T: {ct}"), json!({ "c": c, "ct": ct }))
        }
        Cmd::Support { x } => {
            let x: Obj = arg(&x)?;
            let s = support(&x)?;
            Output::new(joined(&s), json!(s))
        }
        Cmd::Walk { x } => {
            let x: Obj = arg(&x)?;
            let w = walk_of(&x)?;
            let lines: Vec<String> = w
                .vertices
                .iter()
                .map(|v| {
                    format!(
                        "{} ({},{}) {}",
                        v.pt,
                        v.rep.0,
                        v.rep.1,
                        json!(v.role).as_str().unwrap_or("")
                    )
                })
                .collect();
            Output::new(lines.join("\n"), json!(w))
        }
        Cmd::Approx { x } => {
            let x: Obj = arg(&x)?;
            let a = approximation(&x)?;
            let text = format!(
                "sources: {}\nsinks: {}",
                joined(a.sources.iter().map(|p| p.0)),
                joined(a.sinks.iter().map(|p| p.0))
            );
            Output::new(text, json!(a))
        }
        Cmd::Mutate { v } => {
            let v: ClusterPt = arg(&v)?;
            let x = mutate_standard(&v);
            Output::new(x.to_string(), json!(x))
        }
        Cmd::ToString { x } => {
            let x: Obj = arg(&x)?;
            let w = obj_to_string(&x)?;
            Output::new(w.to_string(), json!(w))
        }
        Cmd::FromString { word } => {
            let word: StringWord = arg(&word)?;
            let x = string_to_obj(&word)?;
            Output::new(x.to_string(), json!(x))
        }
        Cmd::Simple { v } => {
            let v: ClusterPt = arg(&v)?;
            let x = simple_object(&v);
            Output::new(x.to_string(), json!(x))
        }
        Cmd::Kernel => {
            let (k, inc) = kernel(&read_morphism()?)?;
            limit(&k, &inc, "kernel")
        }
        Cmd::Cokernel => {
            let (c, proj) = cokernel(&read_morphism()?)?;
            limit(&c, &proj, "cokernel")
        }
        Cmd::Digits { v, digits } => {
            let p = DigitPrefix {
                v: arg(&v)?,
                digits: parse_digits(&digits)?,
            };
            let (a, b) = digits_to_coords(&p);
            let w = digits_to_point(&p);
            Output::new(
                format!("{w} at ({a},{b})"),
                json!({ "point": w, "rep": [a, b], "object": w.object() }),
            )
        }
        Cmd::Check { depth } => {
            let cap = moebius::config::max_depth();
            if depth > cap {
                return Err(Error::DepthLimit(depth, cap).into());
            }
            let results = suite::run_all(depth);
            let ok = results.iter().all(|r| r.passed);
            let text = joined_lines(results.iter().map(|r| r.to_string()));
            Output {
                text,
                json: json!(results),
                ok,
            }
        }
        Cmd::Render {
            spec,
            objects,
            rects,
            walks,
            cluster_depth,
            out,
        } => {
            let mut rs = match spec {
                Some(path) => {
                    let raw = std::fs::read_to_string(&path)
                        .map_err(|e| Fail::Domain(format!("{}: {e}", path.display())))?;
                    serde_json::from_str(&raw)
                        .map_err(|e| Fail::Parse(format!("render spec: {e}")))?
                }
                None => RenderSpec::default(),
            };
            rs.objects.extend(objects.iter().map(Obj::to_string));
            rs.rects.extend(rects.iter().map(Rect::to_string));
            rs.walks.extend(walks.iter().map(Obj::to_string));
            if cluster_depth.is_some() {
                rs.cluster_depth = cluster_depth;
            }
            let svg = render(&rs)?;
            match out {
                Some(path) => {
                    std::fs::write(&path, &svg)
                        .map_err(|e| Fail::Domain(format!("{}: {e}", path.display())))?;
                    let p = path.display().to_string();
                    Output::new(format!("wrote {p}"), json!({ "out": p }))
                }
                None => Output::new(svg.trim_end(), json!({ "svg": svg })),
            }
        }
    })
}

fn joined_lines(lines: impl Iterator<Item = String>) -> String {
    lines.collect::<Vec<_>>().join("\n")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(out) => {
            let text = if cli.json {
                serde_json::to_string_pretty(&out.json).expect("JSON output")
            } else {
                out.text
            };
            // a closed pipe downstream is not our failure
            let _ = writeln!(std::io::stdout(), "{text}");
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Fail::Parse(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Fail::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
