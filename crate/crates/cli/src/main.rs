use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sdof_core::dimensions::{receiver_dimension_audit, sdof_lower_bound, AlignmentParams};
use sdof_core::mac_sim::{self, Decoder, MacChannel, MacSchemeConfig};
use sdof_core::ops::{contains, decompose, irredundant_rows, max_weighted_sum, violated_rows};
use sdof_core::slice::region_slice;
use sdof_core::verify::{verify_all, VerifyOptions};
use sdof_core::vertex::{
    check_vertex_properties, enumerate_with, ic_closed_form, mac_closed_form, Method,
};
use sdof_core::{build_system, ChannelFamily, Error, ExtremePoint, FamilyKind, Rational};

// A closed pipe (e.g. `| head`) ends the program quietly.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        if writeln!(std::io::stdout().lock(), $($t)*).is_err() {
            std::process::exit(0);
        }
    }};
}

#[derive(Parser)]
#[command(
    name = "sdof",
    version,
    about = "Secure degrees-of-freedom regions: vertices, membership, decomposition and scheme checks"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Worker threads for parallel scans (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Mac,
    Ic,
}

impl From<Family> for FamilyKind {
    fn from(f: Family) -> Self {
        match f {
            Family::Mac => FamilyKind::Mac,
            Family::Ic => FamilyKind::Ic,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VertexMethod {
    Brute,
    Closed,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DecoderArg {
    Table,
    Exhaustive,
}

#[derive(clap::Args, Clone, Copy)]
struct Region {
    #[arg(long, value_enum)]
    family: Family,
    /// Number of users.
    #[arg(long = "K")]
    k: usize,
}

impl Region {
    fn family(&self) -> Result<ChannelFamily, Error> {
        ChannelFamily::new(self.family.into(), self.k)
    }
}

#[derive(Subcommand)]
enum Command {
    /// List the extreme points of a region.
    Vertices {
        #[command(flatten)]
        region: Region,
        #[arg(long, value_enum, default_value_t = VertexMethod::Brute)]
        method: VertexMethod,
        /// Skip subsets that cannot yield feasible points.
        #[arg(long)]
        pruned: bool,
    },
    /// Test membership of a point; reports violated rows.
    Check {
        #[command(flatten)]
        region: Region,
        /// Comma-separated rationals, e.g. "3/5,3/5,0,0".
        #[arg(long)]
        point: String,
    },
    /// Find the rows whose removal enlarges the region.
    Redundancy {
        #[command(flatten)]
        region: Region,
    },
    /// Maximize a weighted sum over the region.
    Maximize {
        #[command(flatten)]
        region: Region,
        #[arg(long)]
        weights: String,
    },
    /// Write a point as a convex combination of vertices.
    Decompose {
        #[command(flatten)]
        region: Region,
        #[arg(long)]
        point: String,
    },
    /// Monte Carlo of the MAC cooperative-jamming scheme over a power grid.
    SimulateMac {
        #[arg(long = "K")]
        k: usize,
        /// Message users; the rest are helpers.
        #[arg(long)]
        m: usize,
        #[arg(long = "P-grid", default_value = "1e2,1e3,1e4,1e5,1e6,1e7,1e8")]
        p_grid: String,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, env = "SDOF_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = DecoderArg::Table)]
        decoder: DecoderArg,
        #[arg(long, default_value_t = 1.0)]
        noise_var: f64,
    },
    /// Dimension-set sizes, audit and lower bounds of the IC alignment scheme.
    IcDimensions {
        #[arg(long, default_value_t = 0)]
        p: usize,
        #[arg(long)]
        m: usize,
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        l: u64,
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
        /// Build the sets and check every containment.
        #[arg(long)]
        audit: bool,
    },
    /// Polygon of a 2-D cross-section.
    RegionSlice {
        #[command(flatten)]
        region: Region,
        /// Fixed coordinates as 1-based "index=value" pairs, e.g. "3=0,4=0".
        #[arg(long, default_value = "")]
        fix: String,
    },
    /// Cross-check enumeration, closed forms, redundancy and properties.
    Verify {
        #[arg(long = "max-K", default_value_t = 4)]
        max_k: usize,
        /// Test fixture: "family:p/q,p/q,..." added to a closed-form list.
        #[arg(long, hide = true)]
        inject_vertex: Option<String>,
    },
}

enum Failure {
    Error(Error),
    /// Ran fine but found a discrepancy; the payload is printed.
    Mismatch(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn parse_point(s: &str) -> Result<Vec<Rational>, Error> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect()
}

fn rats(v: &[Rational]) -> Value {
    json!(v.iter().map(Rational::to_string).collect::<Vec<_>>())
}

fn decimals(v: &[Rational]) -> String {
    v.iter()
        .map(|x| format!("{:.6}", x.to_f64()))
        .collect::<Vec<_>>()
        .join("  ")
}

fn exact(v: &[Rational]) -> String {
    v.iter()
        .map(Rational::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn vertex_json(p: &ExtremePoint) -> Value {
    json!({"coords": rats(p.coords()), "active_set": p.active_set(), "witness": p.witness()})
}

fn emit_points(format: Format, head: Value, key: &str, pts: &[ExtremePoint]) {
    match format {
        Format::Json => {
            let mut doc = head;
            doc[key] = json!(pts.iter().map(vertex_json).collect::<Vec<_>>());
            out!("{}", serde_json::to_string_pretty(&doc).expect("json"));
        }
        Format::Csv => {
            let k = pts.first().map_or(0, |p| p.coords().len());
            let header: Vec<String> = (1..=k).map(|i| format!("d{i}")).collect();
            out!("{}", header.join(","));
            for p in pts {
                out!("{}", exact(p.coords()));
            }
        }
        Format::Pretty => {
            for p in pts {
                out!(
                    "{:<40} {}",
                    format!("({})", exact(p.coords())),
                    decimals(p.coords())
                );
            }
        }
    }
}

/// Structured results have no flat table form, so every format prints JSON.
fn print_value(_format: Format, v: &Value) {
    out!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn run(cli: Cli) -> Result<(), Failure> {
    let format = cli.format;
    match cli.command {
        Command::Vertices {
            region,
            method,
            pruned,
        } => {
            let fam = region.family()?;
            let sys = build_system(fam);
            let mode = if pruned {
                Method::Pruned
            } else {
                Method::Brute
            };
            let closed = || match fam.kind() {
                FamilyKind::Mac => mac_closed_form(fam.users()),
                FamilyKind::Ic => ic_closed_form(fam.users()),
            };
            let head = json!({"family": fam.kind(), "K": fam.users()});
            match method {
                VertexMethod::Brute => {
                    emit_points(format, head, "vertices", &enumerate_with(&sys, mode))
                }
                VertexMethod::Closed => emit_points(format, head, "vertices", &closed()?),
                VertexMethod::Both => {
                    let brute = enumerate_with(&sys, mode);
                    let closed = closed()?;
                    if brute != closed {
                        let only = |a: &[ExtremePoint], b: &[ExtremePoint]| {
                            json!(a
                                .iter()
                                .filter(|p| !b.contains(p))
                                .map(|p| rats(p.coords()))
                                .collect::<Vec<_>>())
                        };
                        return Err(Failure::Mismatch(json!({
                            "family": fam.kind(),
                            "K": fam.users(),
                            "in_enumeration_only": only(&brute, &closed),
                            "in_closed_form_only": only(&closed, &brute),
                        })));
                    }
                    let mut head = head;
                    head["match"] = json!(true);
                    head["count"] = json!(brute.len());
                    emit_points(format, head, "vertices", &brute);
                }
            }
        }
        Command::Check { region, point } => {
            let fam = region.family()?;
            let sys = build_system(fam);
            let d = parse_point(&point)?;
            let bad = violated_rows(&sys, &d)?;
            let inside = contains(&sys, &d)?;
            let mut out = json!({
                "point": rats(&d),
                "contains": inside,
                "violated": bad.iter().map(|&r| json!({"row": r, "tag": sys.tags()[r]})).collect::<Vec<_>>(),
            });
            if let Ok(v) = ExtremePoint::at(&sys, d.clone()) {
                out["vertex"] = vertex_json(&v);
                if fam.kind() == FamilyKind::Ic {
                    out["properties"] =
                        serde_json::to_value(check_vertex_properties(&v, &sys)?).expect("json");
                }
            } else {
                out["vertex"] = Value::Null;
            }
            print_value(format, &out);
        }
        Command::Redundancy { region } => {
            let fam = region.family()?;
            let sys = build_system(fam);
            let irr = irredundant_rows(&sys)?;
            let rows: Vec<Value> = (0..sys.len())
                .map(|r| json!({"row": r, "tag": sys.tags()[r], "redundant": !irr.contains(&r)}))
                .collect();
            print_value(
                format,
                &json!({"family": fam.kind(), "K": fam.users(), "irredundant": irr, "rows": rows}),
            );
        }
        Command::Maximize { region, weights } => {
            let fam = region.family()?;
            let sys = build_system(fam);
            let w = parse_point(&weights)?;
            let (value, argmax) = max_weighted_sum(&sys, &w)?;
            let head = json!({"weights": rats(&w), "value": value.to_string()});
            if format == Format::Pretty {
                out!("max = {value} ({:.6})", value.to_f64());
            }
            emit_points(format, head, "argmax", &argmax);
        }
        Command::Decompose { region, point } => {
            let fam = region.family()?;
            let sys = build_system(fam);
            let d = parse_point(&point)?;
            let dec = decompose(&sys, &d)?;
            match format {
                Format::Csv => {
                    out!(
                        "weight,{}",
                        (1..=d.len())
                            .map(|i| format!("d{i}"))
                            .collect::<Vec<_>>()
                            .join(",")
                    );
                    for (v, w) in &dec.terms {
                        out!("{w},{}", exact(v.coords()));
                    }
                }
                Format::Pretty => {
                    for (v, w) in &dec.terms {
                        out!(
                            "{:>12} x ({})   {:.6} x {}",
                            w.to_string(),
                            exact(v.coords()),
                            w.to_f64(),
                            decimals(v.coords())
                        );
                    }
                }
                Format::Json => print_value(
                    format,
                    &json!({
                        "point": rats(&d),
                        "terms": dec.terms.iter().map(|(v, w)| json!({"vertex": rats(v.coords()), "weight": w.to_string()})).collect::<Vec<_>>(),
                        "resum": rats(&dec.resum()),
                    }),
                ),
            }
        }
        Command::SimulateMac {
            k,
            m,
            p_grid,
            delta,
            trials,
            seed,
            decoder,
            noise_var,
        } => {
            let grid: Vec<f64> = p_grid
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("bad power {s:?}: {e}")))
                })
                .collect::<Result<_, _>>()?;
            let ch = MacChannel::from_seed(k, seed);
            let dec = match decoder {
                DecoderArg::Table => Decoder::Table,
                DecoderArg::Exhaustive => Decoder::Exhaustive,
            };
            let mut results = Vec::new();
            for &p in &grid {
                let cfg = MacSchemeConfig::new(k, m, p, delta, &ch)?.with_noise_var(noise_var);
                results.push(mac_sim::simulate(&cfg, &ch, trials, seed, dec)?);
            }
            let pts: Vec<(f64, f64)> = results
                .iter()
                .map(|r| (r.p, r.achieved_rate_bits))
                .collect();
            let slope = mac_sim::estimate_dof(&pts).ok();
            let summary = json!({
                "K": k,
                "m": m,
                "delta": delta,
                "trials": trials,
                "seed": seed,
                "channel": ch,
                "slope": slope,
                "target": mac_sim::dof_target(k, m, delta),
                "leakage_bound_bits": mac_sim::leakage_bound_bits(k),
            });
            match format {
                Format::Json => print_value(format, &json!({"rows": results, "summary": summary})),
                _ => {
                    out!("P,Q,a,error_rate,raw_rate_bits,achieved_rate_bits");
                    for r in &results {
                        out!(
                            "{},{},{},{},{},{}",
                            r.p,
                            r.q,
                            r.a,
                            r.symbol_error_rate,
                            r.raw_rate_bits,
                            r.achieved_rate_bits
                        );
                    }
                    eprintln!("{}", serde_json::to_string(&summary).expect("json"));
                }
            }
        }
        Command::IcDimensions {
            p,
            m,
            n,
            l,
            delta,
            audit,
        } => {
            let params = AlignmentParams::new(p, m, n, l, delta)?;
            let bound = sdof_lower_bound(&params);
            let mut out = json!({
                "params": params,
                "theta": params.theta(),
                "t_size": params.t_size().to_string(),
                "t_tilde_size": params.t_tilde_size().to_string(),
                "lower_bound": bound,
            });
            if audit {
                let rep = receiver_dimension_audit(params).map_err(|e| match e {
                    Error::Structural(msg) => Failure::Mismatch(json!({"audit_failure": msg})),
                    other => Failure::Error(other),
                })?;
                out["audit"] = serde_json::to_value(rep).expect("json");
            }
            print_value(format, &out);
        }
        Command::RegionSlice { region, fix } => {
            let fam = region.family()?;
            let mut fixed = Vec::new();
            for part in fix.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let (i, v) = part
                    .split_once('=')
                    .ok_or_else(|| Error::Usage(format!("expected index=value, got {part:?}")))?;
                let i: usize = i
                    .trim()
                    .parse()
                    .map_err(|_| Error::Usage(format!("bad coordinate index {i:?}")))?;
                if i == 0 {
                    return Err(Error::Usage("coordinate indices are 1-based".into()).into());
                }
                fixed.push((i - 1, v.trim().parse::<Rational>()?));
            }
            let s = region_slice(fam, &fixed)?;
            match format {
                Format::Json => print_value(
                    format,
                    &json!({
                        "family": fam.kind(),
                        "K": fam.users(),
                        "free": [s.free[0] + 1, s.free[1] + 1],
                        "vertices": s.vertices.iter().map(|v| rats(v)).collect::<Vec<_>>(),
                    }),
                ),
                Format::Csv => {
                    out!("d{},d{}", s.free[0] + 1, s.free[1] + 1);
                    for v in &s.vertices {
                        out!("{},{}", v[0], v[1]);
                    }
                }
                Format::Pretty => {
                    for v in &s.vertices {
                        out!("{:<24} {}", format!("({}, {})", v[0], v[1]), decimals(v));
                    }
                }
            }
        }
        Command::Verify {
            max_k,
            inject_vertex,
        } => {
            let mut opts = VerifyOptions::default();
            if let Some(arg) = inject_vertex {
                let (fam, pt) = arg
                    .split_once(':')
                    .ok_or_else(|| Error::Usage("expected family:point".into()))?;
                opts.inject = Some((fam.parse()?, parse_point(pt)?));
            }
            let rep = verify_all(max_k, &opts)?;
            let doc = serde_json::to_value(&rep).expect("json");
            if !rep.passed {
                return Err(Failure::Mismatch(doc));
            }
            print_value(format, &doc);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
        {
            eprintln!("warning: could not size the worker pool: {e}");
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::Structural(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
        Err(Failure::Mismatch(doc)) => {
            out!("{}", serde_json::to_string_pretty(&doc).expect("json"));
            eprintln!("verification mismatch");
            ExitCode::from(3)
        }
    }
}
