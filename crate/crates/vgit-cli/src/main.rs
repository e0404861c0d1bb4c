//! `vgit`: exact stability computations for pairs (degree-d hypersurface,
//! hyperplane) in projective (n+1)-space.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use vgit_core::families::{
    closed_orbit_candidates, maximal_families, ClosedOrbitReport, DestabilizingFamily, FamilyKind,
};
use vgit_core::fundamental::{fundamental_set_cached, FundamentalSet};
use vgit_core::io::{parse_pair, parse_rational, rational_json, rational_text};
use vgit_core::monomial::Monomial;
use vgit_core::stability::{
    is_semistable_torus, moduli_dimension, stability_interval, t_max, verdict,
    wall_chamber_decomposition, PairSupport, StabilityVerdict, WallChamberDecomposition,
};
use vgit_core::{Error, Rational, Result};

#[derive(Parser)]
#[command(
    name = "vgit",
    version,
    about = "Exact variation-of-GIT stability data for (hypersurface, hyperplane) pairs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct Common {
    /// Dimension parameter: hypersurfaces live in projective (n+1)-space.
    #[arg(long)]
    n: u32,

    /// Degree of the hypersurface.
    #[arg(long)]
    d: u32,

    #[arg(long, value_enum, default_value = "json")]
    format: Format,

    /// Cache directory for fundamental subgroup sets
    /// (default: $VGIT_CACHE_DIR, then ./.vgit-cache).
    #[arg(long)]
    cache_dir: Option<PathBuf>,

    /// Worker threads for wall and family computations.
    #[arg(long, default_value_t = 1)]
    jobs: usize,

    /// Write output to a file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the fundamental set of one-parameter subgroups.
    Ops(Common),
    /// Candidate walls, confirmed walls, and chambers.
    Walls(Common),
    /// Maximal destabilizing families at a parameter value.
    Families {
        #[command(flatten)]
        common: Common,
        /// Stability parameter, as `p/q` or an integer.
        #[arg(long)]
        t: String,
    },
    /// Candidate strictly semistable closed-orbit supports at t.
    ClosedOrbits {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        t: String,
    },
    /// Stability verdict and interval of stability for one pair.
    Check {
        #[command(flatten)]
        common: Common,
        /// Optional parameter value for a pointwise verdict.
        #[arg(long)]
        t: Option<String>,
        /// Inline pair, JSON or text form (`x0^2 + x0*x1 ; x1`).
        #[arg(long, conflicts_with = "pair_file")]
        pair: Option<String>,
        /// File holding the pair in JSON or text form.
        #[arg(long)]
        pair_file: Option<PathBuf>,
    },
    /// Dimension of the compactified moduli space (requires d >= 3).
    Dim(Common),
    /// The upper end d/(n+1) of the stability range.
    Tmax(Common),
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                Error::Domain(_) => 3,
                _ => 2,
            };
            std::process::exit(code);
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ops(common) => with_pool(&common, |s| cmd_ops(&common, s)),
        Command::Walls(common) => with_pool(&common, |s| cmd_walls(&common, s)),
        Command::Families { ref common, ref t } => {
            let t = parse_t(t)?;
            with_pool(common, |s| cmd_families(common, &t, s))
        }
        Command::ClosedOrbits { ref common, ref t } => {
            let t = parse_t(t)?;
            with_pool(common, |s| cmd_closed_orbits(common, &t, s))
        }
        Command::Check {
            ref common,
            ref t,
            ref pair,
            ref pair_file,
        } => {
            let t = t.as_deref().map(parse_t).transpose()?;
            let input = match (pair, pair_file) {
                (Some(text), None) => text.clone(),
                (None, Some(path)) => std::fs::read_to_string(path)?,
                _ => {
                    return Err(Error::InvalidInput(
                        "check needs exactly one of --pair or --pair-file".into(),
                    ))
                }
            };
            let parsed = parse_pair(&input, common.n, common.d)?;
            with_pool(common, |s| cmd_check(common, &parsed, t.as_ref(), s))
        }
        Command::Dim(common) => {
            check_degree(&common)?;
            let dim = moduli_dimension(common.n, common.d)?;
            let value = json!({"n": common.n, "d": common.d, "dimension": dim});
            let rendered = match common.format {
                Format::Json => pretty(&value),
                Format::Csv => format!("n,d,dimension\n{},{},{}\n", common.n, common.d, dim),
                Format::Text => format!(
                    "moduli dimension for (n, d) = ({}, {}): {}\n",
                    common.n, common.d, dim
                ),
            };
            emit(&common, &rendered)
        }
        Command::Tmax(common) => {
            check_degree(&common)?;
            let tm = t_max(common.n, common.d);
            let value = json!({"n": common.n, "d": common.d, "t_max": rational_json(&tm)});
            let rendered = match common.format {
                Format::Json => pretty(&value),
                Format::Csv => {
                    format!("n,d,t_max\n{},{},{}\n", common.n, common.d, rational_text(&tm))
                }
                Format::Text => format!(
                    "t_max for (n, d) = ({}, {}): {}\n",
                    common.n,
                    common.d,
                    rational_text(&tm)
                ),
            };
            emit(&common, &rendered)
        }
    }
}

fn parse_t(text: &str) -> Result<Rational> {
    let t = parse_rational(text)?;
    if t < Rational::from_integer(0.into()) {
        return Err(Error::Domain(format!("t must be nonnegative, got {text}")));
    }
    Ok(t)
}

fn check_degree(common: &Common) -> Result<()> {
    if common.d < 1 {
        return Err(Error::InvalidInput("degree d must be at least 1".into()));
    }
    Ok(())
}

fn cache_dir(common: &Common) -> PathBuf {
    common
        .cache_dir
        .clone()
        .or_else(|| std::env::var_os("VGIT_CACHE_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(".vgit-cache"))
}

/// Loads (or computes and caches) the fundamental set, then runs `body`
/// inside a worker pool sized by `--jobs`.
fn with_pool<F>(common: &Common, body: F) -> Result<()>
where
    F: FnOnce(&FundamentalSet) -> Result<()> + Send,
{
    check_degree(common)?;
    if common.jobs < 1 {
        return Err(Error::InvalidInput("--jobs must be at least 1".into()));
    }
    let (set, cache_warning) = fundamental_set_cached(&cache_dir(common), common.n, common.d);
    if let Some(warn) = cache_warning {
        eprintln!("warning: could not write fundamental-set cache: {warn}");
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(common.jobs)
        .build()
        .map_err(|e| Error::InvalidInput(format!("could not build worker pool: {e}")))?;
    pool.install(|| body(&set))
}

fn pretty(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text
}

fn emit(common: &Common, rendered: &str) -> Result<()> {
    match &common.output {
        Some(path) => {
            let mut file = std::fs::File::create(path)?;
            file.write_all(rendered.as_bytes())?;
        }
        None => {
            std::io::stdout().write_all(rendered.as_bytes())?;
        }
    }
    Ok(())
}

fn weights_json(lambda: &[i64]) -> Value {
    Value::Array(lambda.iter().map(|&w| json!(w)).collect())
}

fn weights_text(lambda: &[i64]) -> String {
    lambda
        .iter()
        .map(|w| w.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn monomials_json(monomials: &[Monomial]) -> Value {
    Value::Array(
        monomials
            .iter()
            .map(|m| Value::Array(m.exponents().iter().map(|&e| json!(e)).collect()))
            .collect(),
    )
}

fn monomials_text(monomials: &[Monomial]) -> String {
    monomials
        .iter()
        .map(|m| m.text_form())
        .collect::<Vec<_>>()
        .join(";")
}

fn indices_text(indices: &[usize]) -> String {
    indices
        .iter()
        .map(|i| format!("x{i}"))
        .collect::<Vec<_>>()
        .join(";")
}

fn cmd_ops(common: &Common, set: &FundamentalSet) -> Result<()> {
    let rendered = match common.format {
        Format::Json => pretty(&json!({
            "n": set.n,
            "d": set.d,
            "count": set.len(),
            "elements": set
                .iter()
                .map(|l| weights_json(l.weights()))
                .collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut out = String::from("index,weights\n");
            for (i, l) in set.iter().enumerate() {
                out.push_str(&format!("{i},{}\n", weights_text(l.weights())));
            }
            out
        }
        Format::Text => {
            let mut out = format!(
                "fundamental set for (n, d) = ({}, {}): {} subgroups\n",
                set.n,
                set.d,
                set.len()
            );
            for l in set.iter() {
                out.push_str(&format!("  ({})\n", weights_text(l.weights())));
            }
            out
        }
    };
    emit(common, &rendered)
}

fn walls_json(dec: &WallChamberDecomposition) -> Value {
    json!({
        "n": dec.n,
        "d": dec.d,
        "t_max": rational_json(&t_max(dec.n, dec.d)),
        "candidates": dec.candidates.iter().map(rational_json).collect::<Vec<_>>(),
        "walls": dec.walls.iter().map(rational_json).collect::<Vec<_>>(),
        "chambers": dec
            .chambers
            .iter()
            .map(|c| {
                json!({
                    "lo": rational_json(&c.lo),
                    "hi": rational_json(&c.hi),
                    "representative": rational_json(&c.representative),
                })
            })
            .collect::<Vec<_>>(),
    })
}

fn cmd_walls(common: &Common, set: &FundamentalSet) -> Result<()> {
    let dec = wall_chamber_decomposition(common.n, common.d, set);
    let rendered = match common.format {
        Format::Json => pretty(&walls_json(&dec)),
        Format::Csv => {
            let mut out = String::from("kind,t\n");
            for c in &dec.candidates {
                out.push_str(&format!("candidate,{}\n", rational_text(c)));
            }
            for w in &dec.walls {
                out.push_str(&format!("wall,{}\n", rational_text(w)));
            }
            for c in &dec.chambers {
                out.push_str(&format!("chamber_rep,{}\n", rational_text(&c.representative)));
            }
            out
        }
        Format::Text => {
            let mut out = format!("wall/chamber decomposition for (n, d) = ({}, {})\n", dec.n, dec.d);
            out.push_str(&format!(
                "  candidates: {}\n",
                dec.candidates
                    .iter()
                    .map(rational_text)
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
            out.push_str(&format!(
                "  walls: {}\n",
                dec.walls.iter().map(rational_text).collect::<Vec<_>>().join(", ")
            ));
            for c in &dec.chambers {
                out.push_str(&format!(
                    "  chamber ({}, {}) with representative {}\n",
                    rational_text(&c.lo),
                    rational_text(&c.hi),
                    rational_text(&c.representative)
                ));
            }
            out
        }
    };
    emit(common, &rendered)
}

/// Generic-member verdict of a weak family under the centroid criterion.
fn family_generic_verdict(f: &DestabilizingFamily, n: u32, d: u32) -> Result<&'static str> {
    let vars = (n + 2) as usize;
    let h: Vec<Monomial> = f.b_set.iter().map(|&i| Monomial::variable(i, vars)).collect();
    let p = PairSupport::new(n, d, f.v_set.clone(), h)?;
    Ok(if is_semistable_torus(&p, &f.t) {
        "strictly-semistable"
    } else {
        "unstable"
    })
}

fn family_json(f: &DestabilizingFamily, generic_verdict: Option<&str>) -> Value {
    let mut value = json!({
        "lambda": weights_json(f.lambda.weights()),
        "pivot": f.pivot,
        "V": monomials_json(&f.v_set),
        "B": f.b_set,
        "kind": f.kind.symbol(),
        "t": rational_json(&f.t),
    });
    if let Some(v) = generic_verdict {
        value["generic_verdict"] = json!(v);
    }
    value
}

fn cmd_families(common: &Common, t: &Rational, set: &FundamentalSet) -> Result<()> {
    let weak = maximal_families(common.n, common.d, t, FamilyKind::Weak, set)?;
    let strict = maximal_families(common.n, common.d, t, FamilyKind::Strict, set)?;
    let verdicts: Vec<&'static str> = weak
        .iter()
        .map(|f| family_generic_verdict(f, common.n, common.d))
        .collect::<Result<_>>()?;

    let rendered = match common.format {
        Format::Json => pretty(&json!({
            "n": common.n,
            "d": common.d,
            "t": rational_json(t),
            "oplus_families": weak
                .iter()
                .zip(&verdicts)
                .map(|(f, v)| family_json(f, Some(v)))
                .collect::<Vec<_>>(),
            "plus_families": strict
                .iter()
                .map(|f| family_json(f, None))
                .collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut out = String::from("kind,lambda,pivot,V,B,t,generic_verdict\n");
            for (f, v) in weak.iter().zip(&verdicts) {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    f.kind.symbol(),
                    weights_text(f.lambda.weights()),
                    f.pivot,
                    monomials_text(&f.v_set),
                    indices_text(&f.b_set),
                    rational_text(t),
                    v
                ));
            }
            for f in &strict {
                out.push_str(&format!(
                    "{},{},{},{},{},{},\n",
                    f.kind.symbol(),
                    weights_text(f.lambda.weights()),
                    f.pivot,
                    monomials_text(&f.v_set),
                    indices_text(&f.b_set),
                    rational_text(t)
                ));
            }
            out
        }
        Format::Text => {
            let mut out = format!(
                "maximal families for (n, d) = ({}, {}) at t = {}\n",
                common.n,
                common.d,
                rational_text(t)
            );
            for (f, v) in weak.iter().zip(&verdicts) {
                out.push_str(&format!(
                    "  ⊕ λ=({}) pivot=x{}  V={{{}}}  B={{{}}}  generic member: {}\n",
                    weights_text(f.lambda.weights()),
                    f.pivot,
                    monomials_text(&f.v_set),
                    indices_text(&f.b_set),
                    v
                ));
            }
            for f in &strict {
                out.push_str(&format!(
                    "  + λ=({}) pivot=x{}  V={{{}}}  B={{{}}}\n",
                    weights_text(f.lambda.weights()),
                    f.pivot,
                    monomials_text(&f.v_set),
                    indices_text(&f.b_set)
                ));
            }
            out
        }
    };
    emit(common, &rendered)
}

fn closed_orbits_json(report: &ClosedOrbitReport) -> Value {
    json!({
        "n": report.n,
        "d": report.d,
        "t": rational_json(&report.t),
        "boundary_warning": report.boundary_warning,
        "candidates": report
            .candidates
            .iter()
            .map(|c| {
                json!({
                    "V0": monomials_json(&c.v0),
                    "B0": c.b0,
                    "witnesses": c
                        .witnesses
                        .iter()
                        .map(|(l, pivot)| {
                            json!({"lambda": weights_json(l.weights()), "pivot": pivot})
                        })
                        .collect::<Vec<_>>(),
                })
            })
            .collect::<Vec<_>>(),
    })
}

fn cmd_closed_orbits(common: &Common, t: &Rational, set: &FundamentalSet) -> Result<()> {
    let report = closed_orbit_candidates(common.n, common.d, t, set)?;
    if report.boundary_warning {
        eprintln!(
            "warning: t = {} sits on the boundary of the stability range; \
annihilator product structure is only guaranteed strictly inside",
            rational_text(t)
        );
    }
    let rendered = match common.format {
        Format::Json => pretty(&closed_orbits_json(&report)),
        Format::Csv => {
            let mut out = String::from("V0,B0,witnesses,boundary_warning\n");
            for c in &report.candidates {
                let witnesses = c
                    .witnesses
                    .iter()
                    .map(|(l, p)| format!("{}:{}", weights_text(l.weights()), p))
                    .collect::<Vec<_>>()
                    .join("|");
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    monomials_text(&c.v0),
                    indices_text(&c.b0),
                    witnesses,
                    report.boundary_warning
                ));
            }
            out
        }
        Format::Text => {
            let mut out = format!(
                "closed-orbit candidates for (n, d) = ({}, {}) at t = {}{}\n",
                report.n,
                report.d,
                rational_text(t),
                if report.boundary_warning {
                    " (boundary value)"
                } else {
                    ""
                }
            );
            if report.candidates.is_empty() {
                out.push_str("  none\n");
            }
            for c in &report.candidates {
                out.push_str(&format!(
                    "  V0={{{}}}  B0={{{}}}  witnesses: {}\n",
                    monomials_text(&c.v0),
                    indices_text(&c.b0),
                    c.witnesses
                        .iter()
                        .map(|(l, p)| format!("λ=({}) pivot=x{}", weights_text(l.weights()), p))
                        .collect::<Vec<_>>()
                        .join(", ")
                ));
            }
            out
        }
    };
    emit(common, &rendered)
}

fn verdict_json(v: &StabilityVerdict) -> Value {
    json!({
        "status": v.status.as_str(),
        "witness": v.witness.as_ref().map(|w| {
            json!({
                "lambda": weights_json(w.lambda.weights()),
                "sigma": w.sigma,
            })
        }),
    })
}

fn cmd_check(
    common: &Common,
    pair: &PairSupport,
    t: Option<&Rational>,
    set: &FundamentalSet,
) -> Result<()> {
    let interval = stability_interval(pair, set);
    let pointwise = t.map(|t| verdict(pair, t, set));

    let rendered = match common.format {
        Format::Json => pretty(&json!({
            "n": common.n,
            "d": common.d,
            "pair": {
                "X": monomials_json(pair.x_set()),
                "H": pair
                    .h_set()
                    .iter()
                    .map(|m| m.variable_index().expect("degree one"))
                    .collect::<Vec<_>>(),
            },
            "t": t.map(rational_json),
            "verdict": pointwise.as_ref().map(verdict_json),
            "interval": interval.as_ref().map(|(a, b)| {
                json!({"a": rational_json(a), "b": rational_json(b)})
            }),
        })),
        Format::Csv => {
            let mut out = String::from("field,value\n");
            out.push_str(&format!("X,{}\n", monomials_text(pair.x_set())));
            out.push_str(&format!(
                "H,{}\n",
                pair.h_set()
                    .iter()
                    .map(|m| m.text_form())
                    .collect::<Vec<_>>()
                    .join(";")
            ));
            if let Some(t) = t {
                out.push_str(&format!("t,{}\n", rational_text(t)));
            }
            if let Some(v) = &pointwise {
                out.push_str(&format!("status,{}\n", v.status.as_str()));
            }
            match &interval {
                Some((a, b)) => {
                    out.push_str(&format!("interval_lo,{}\n", rational_text(a)));
                    out.push_str(&format!("interval_hi,{}\n", rational_text(b)));
                }
                None => out.push_str("interval,empty\n"),
            }
            out
        }
        Format::Text => {
            let mut out = format!(
                "pair X = {} ; H = {}\n",
                pair.x_set()
                    .iter()
                    .map(|m| m.text_form())
                    .collect::<Vec<_>>()
                    .join(" + "),
                pair.h_set()
                    .iter()
                    .map(|m| m.text_form())
                    .collect::<Vec<_>>()
                    .join(" + ")
            );
            if let (Some(t), Some(v)) = (t, &pointwise) {
                out.push_str(&format!(
                    "  at t = {}: {}\n",
                    rational_text(t),
                    v.status.as_str()
                ));
                if let Some(w) = &v.witness {
                    out.push_str(&format!(
                        "  witness: λ=({}) sigma={:?}\n",
                        weights_text(w.lambda.weights()),
                        w.sigma
                    ));
                }
            }
            match &interval {
                Some((a, b)) => out.push_str(&format!(
                    "  interval of stability: [{}, {}]\n",
                    rational_text(a),
                    rational_text(b)
                )),
                None => out.push_str("  interval of stability: empty\n"),
            }
            out
        }
    };
    emit(common, &rendered)
}
