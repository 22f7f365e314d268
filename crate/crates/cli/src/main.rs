//! `qloop`: command-line access to the exact computations of `qloop-core`.
//!
//! Every subcommand prints a deterministic JSON document on stdout (or a
//! plain-text table with `--format table`). Domain errors exit with status 1
//! and a JSON diagnostic; usage errors exit with status 2. Re-running a
//! command with identical inputs produces byte-identical output.

use clap::{Args, Parser, Subcommand, ValueEnum};
use qloop_core::grass::{all_graded_submodules, build_injective, enumerate_graded_submodules, euler_vs_kr};
use qloop_core::lattice::{
    build_operator_table, coeff_a_minus, coeff_a_plus, commutator_check, psi_series_a1,
    quot_poincare, Lambda,
};
use qloop_core::present::{
    check_relations, highest_weight_table, relation_catalogue, PresentationSpec,
};
use qloop_core::qchar::{
    fm_qcharacter, hj_limit, kr_dimvec, socle_bound_check, tpkr_criterion, TpkrVariant,
};
use qloop_core::quiver::{
    cartan_apply, derive_quiver, hall_pairing, DeriveKind, DimKey, DimVec, QuiverData, Support,
};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::io::Write;
use std::str::FromStr;

#[derive(Parser)]
#[command(name = "qloop", version, about = "Exact computations for shifted loop algebras, q-characters, and graded quiver Grassmannians", max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Also write the JSON result to a file.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,

    /// Write a run manifest (command, parameters, version, wall clock,
    /// output digest) to a file.
    #[arg(long, global = true)]
    manifest: Option<std::path::PathBuf>,

    /// Worker thread cap (also via the QLOOP_THREADS environment variable).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed for randomized property commands; fixed default for
    /// reproducibility.
    #[arg(long, global = true, default_value_t = 0x5eed_0001u64)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Quiver constructions and Cartan pairings.
    Quiver {
        #[command(subcommand)]
        cmd: QuiverCmd,
    },
    /// `w - 𝐜v` on plain or graded supports, with the dominance verdict.
    Cartan(CartanArgs),
    /// q-character computations.
    Qchar {
        #[command(subcommand)]
        cmd: QcharCmd,
    },
    /// Presentation catalogues and relation checking.
    Relations {
        #[command(subcommand)]
        cmd: RelationsCmd,
    },
    /// The fixed-point lattice representation.
    Lattice {
        #[command(subcommand)]
        cmd: LatticeCmd,
    },
    /// Quot-scheme cell counting.
    Quot {
        #[command(subcommand)]
        cmd: QuotCmd,
    },
    /// Graded submodule Grassmannians.
    Grass {
        #[command(subcommand)]
        cmd: GrassCmd,
    },
}

#[derive(Subcommand)]
enum QuiverCmd {
    /// Derive a new quiver (double, triple, framed, graded, ...).
    Derive {
        #[arg(long = "type")]
        quiver_type: String,
        #[arg(long)]
        kind: String,
        /// Spectral window `lo:hi` for the graded construction.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
}

#[derive(Args)]
struct CartanArgs {
    #[arg(long = "type")]
    quiver_type: String,
    /// Dimension vector v as JSON, e.g. '{"1":1}' or '{"1,0":1}'.
    #[arg(long)]
    v: String,
    /// Dimension vector w as JSON.
    #[arg(long)]
    w: String,
    #[arg(long, default_value_t = false)]
    graded: bool,
    /// Also report the arrow-wise pairing (v|w) (plain support only).
    #[arg(long, default_value_t = false)]
    hall: bool,
}

#[derive(Subcommand)]
enum QcharCmd {
    /// The q-character of a Kirillov-Reshetikhin module.
    Kr {
        #[arg(long = "type")]
        quiver_type: String,
        #[arg(long)]
        i: u32,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long)]
        l: u32,
        #[arg(long, default_value_t = 1_000_000)]
        step_cap: usize,
        /// Emit only the dimension and dominant-term count.
        #[arg(long, default_value_t = false)]
        summary: bool,
    },
    /// Stabilization of normalized KR characters along the bottom-anchored
    /// family.
    HjLimit {
        #[arg(long = "type")]
        quiver_type: String,
        #[arg(long)]
        i: u32,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long)]
        l_max: u32,
        #[arg(long, allow_hyphen_values = true)]
        cap: i64,
        #[arg(long, default_value_t = 1_000_000)]
        step_cap: usize,
    },
    /// The tensor-product simplicity criterion with its socle certificate.
    Tpkr {
        #[arg(long = "type", default_value = "A1")]
        quiver_type: String,
        #[arg(long)]
        variant: String,
        #[arg(long, allow_hyphen_values = true)]
        l: i64,
        /// Tuples `i,k,l`, repeatable.
        #[arg(long = "tuple", required = true)]
        tuples: Vec<String>,
    },
}

#[derive(Subcommand)]
enum RelationsCmd {
    /// Print the defining relation families of a presentation.
    Catalogue {
        #[arg(long = "type", default_value = "A1")]
        quiver_type: String,
        /// Shift as JSON, e.g. '{"1":-1}'.
        #[arg(long, default_value = "{}")]
        shift: String,
        #[arg(long, default_value_t = false)]
        toroidal: bool,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        shift_value: i64,
    },
    /// Run the relation checker against a preset operator table.
    Check {
        /// Preset: `a1-lattice`, `trivial`, or `toroidal-trivial`.
        #[arg(long)]
        preset: String,
        #[arg(long, default_value_t = 1)]
        w: usize,
        #[arg(long, default_value_t = 3)]
        cap: u32,
        #[arg(long, default_value_t = 2)]
        window: i64,
        /// Include per-instance results, not just the counts.
        #[arg(long, default_value_t = false)]
        detail: bool,
    },
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// A single raising or lowering matrix coefficient.
    Coeff {
        #[arg(long)]
        w: usize,
        /// Comma-separated parts, e.g. `1,0`; empty for the zero tuple.
        #[arg(long, default_value = "")]
        lambda: String,
        #[arg(long)]
        mu: String,
        /// `plus` or `minus`.
        #[arg(long)]
        op: String,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// The commutator identity at a fixed point.
    Commutator {
        #[arg(long)]
        w: usize,
        #[arg(long, default_value = "")]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// The diagonal psi-series at a fixed point.
    Psi {
        #[arg(long)]
        w: usize,
        #[arg(long, default_value = "")]
        lambda: String,
        /// `plus` or `minus`.
        #[arg(long)]
        sign: String,
        #[arg(long, default_value_t = 4)]
        trunc: i64,
    },
    /// Serialize the operator table (matrix coefficients as JSON).
    Table {
        #[arg(long)]
        w: usize,
        #[arg(long, default_value_t = 2)]
        cap: u32,
        #[arg(long, default_value_t = 1)]
        window: i64,
    },
}

#[derive(Subcommand)]
enum QuotCmd {
    /// Poincaré polynomial and Euler characteristic of the cell
    /// stratification.
    Poincare {
        #[arg(long)]
        w: u32,
        #[arg(long)]
        v: u32,
        #[arg(long, default_value_t = false)]
        punctual: bool,
    },
}

#[derive(Subcommand)]
enum GrassCmd {
    /// Enumerate graded submodules of an injective module.
    Enum {
        #[arg(long = "type")]
        quiver_type: String,
        #[arg(long)]
        i: u32,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long)]
        l: u32,
        /// Restrict to one dimension vector (JSON); otherwise enumerate all.
        #[arg(long)]
        v: Option<String>,
    },
    /// Compare the Grassmannian point count against the KR dimension.
    EulerVsKr {
        #[arg(long = "type")]
        quiver_type: String,
        #[arg(long)]
        i: u32,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long)]
        l: u32,
        #[arg(long, default_value_t = 1_000_000)]
        step_cap: usize,
    },
}

fn parse_lambda(w: usize, s: &str) -> Result<Lambda, String> {
    if s.trim().is_empty() {
        return Ok(Lambda::zero(w));
    }
    let parts: Result<Vec<u32>, _> = s.split(',').map(|x| x.trim().parse::<u32>()).collect();
    let parts = parts.map_err(|_| format!("bad tuple `{s}`"))?;
    if parts.len() != w {
        return Err(format!("tuple `{s}` does not have {w} parts"));
    }
    Ok(Lambda(parts))
}

fn parse_tuple(s: &str) -> Result<(u32, i64, u32), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("tuple `{s}` must be i,k,l"));
    }
    Ok((
        parts[0].trim().parse().map_err(|_| format!("bad vertex in `{s}`"))?,
        parts[1].trim().parse().map_err(|_| format!("bad spectral index in `{s}`"))?,
        parts[2].trim().parse().map_err(|_| format!("bad length in `{s}`"))?,
    ))
}

fn parse_dimvec(graded: bool, s: &str) -> Result<DimVec, String> {
    let support = if graded {
        Support::GradedVertices
    } else {
        Support::Vertices
    };
    let value: Value = serde_json::from_str(s).map_err(|e| format!("bad dimension vector: {e}"))?;
    DimVec::from_json(support, &value).map_err(|e| e.to_string())
}

fn series_json(s: &qloop_core::Series) -> Value {
    let (lo, hi) = s.window();
    let coeffs: Vec<Value> = s
        .iter()
        .map(|(e, c)| json!({ "exp": e, "value": c.to_string() }))
        .collect();
    json!({ "window": [lo, hi], "coeffs": coeffs })
}

fn run(cli: &Cli) -> Result<Value, String> {
    match &cli.command {
        Command::Quiver { cmd } => match cmd {
            QuiverCmd::Derive {
                quiver_type,
                kind,
                window,
            } => {
                let q = QuiverData::by_name(quiver_type).map_err(|e| e.to_string())?;
                let kind = DeriveKind::from_str(kind).map_err(|e| e.to_string())?;
                let window = match window {
                    None => None,
                    Some(w) => {
                        let parts: Vec<&str> = w.split(':').collect();
                        if parts.len() != 2 {
                            return Err(format!("window `{w}` must be lo:hi"));
                        }
                        Some((
                            parts[0].parse::<i64>().map_err(|e| e.to_string())?,
                            parts[1].parse::<i64>().map_err(|e| e.to_string())?,
                        ))
                    }
                };
                let derived =
                    derive_quiver(&q, kind, None, window).map_err(|e| e.to_string())?;
                Ok(serde_json::to_value(&derived).map_err(|e| e.to_string())?)
            }
        },
        Command::Cartan(args) => {
            let q = QuiverData::by_name(&args.quiver_type).map_err(|e| e.to_string())?;
            let v = parse_dimvec(args.graded, &args.v)?;
            let w = parse_dimvec(args.graded, &args.w)?;
            let out = cartan_apply(&q, &v, &w).map_err(|e| e.to_string())?;
            let mut doc = json!({
                "w_minus_cv": out.to_json(),
                "l_dominant": out.is_nonnegative(),
            });
            if args.hall {
                let h = hall_pairing(&q, &v, &w).map_err(|e| e.to_string())?;
                doc["hall_pairing"] = json!(h);
                doc["sign_twist"] = json!(if h % 2 == 0 { 1 } else { -1 });
            }
            Ok(doc)
        }
        Command::Qchar { cmd } => match cmd {
            QcharCmd::Kr {
                quiver_type,
                i,
                k,
                l,
                step_cap,
                summary,
            } => {
                let q = QuiverData::by_name(quiver_type).map_err(|e| e.to_string())?;
                let res = fm_qcharacter(&q, *i, *k, *l, *step_cap).map_err(|e| e.to_string())?;
                let dim = res.qchar.dimension();
                let dominant = res.qchar.dominant_monomials().len();
                if *summary {
                    Ok(json!({ "dim": dim, "dominant_count": dominant, "complete": res.complete }))
                } else {
                    Ok(json!({
                        "dim": dim,
                        "dominant_count": dominant,
                        "complete": res.complete,
                        "framing": kr_dimvec(*i, *k, *l).map_err(|e| e.to_string())?.to_json(),
                        "terms": res.qchar.to_json(),
                    }))
                }
            }
            QcharCmd::HjLimit {
                quiver_type,
                i,
                k,
                l_max,
                cap,
                step_cap,
            } => {
                let q = QuiverData::by_name(quiver_type).map_err(|e| e.to_string())?;
                let rep =
                    hj_limit(&q, *i, *k, *l_max, *cap, *step_cap).map_err(|e| e.to_string())?;
                let stabilized: Vec<Value> = rep
                    .stabilized
                    .iter()
                    .map(|(v, c)| json!({ "a_exponents": v.to_json(), "mult": c }))
                    .collect();
                Ok(json!({
                    "anchor": { "i": rep.i, "k": rep.k },
                    "l_max": rep.l_max,
                    "a_degree_cap": rep.a_degree_cap,
                    "agreement_degrees": rep.agreement,
                    "stabilized": stabilized,
                }))
            }
            QcharCmd::Tpkr {
                quiver_type,
                variant,
                l,
                tuples,
            } => {
                let q = QuiverData::by_name(quiver_type).map_err(|e| e.to_string())?;
                let tuples: Result<Vec<_>, _> = tuples.iter().map(|t| parse_tuple(t)).collect();
                let tuples = tuples?;
                let variant = TpkrVariant::from_str(variant).map_err(|e| e.to_string())?;
                let verdict = tpkr_criterion(&tuples, *l, variant);
                let mut doc = json!({ "criterion": verdict });
                if variant == TpkrVariant::B {
                    let cert = socle_bound_check(&q, &tuples, *l);
                    doc["socle_certificate"] =
                        serde_json::to_value(&cert).map_err(|e| e.to_string())?;
                }
                Ok(doc)
            }
        },
        Command::Relations { cmd } => match cmd {
            RelationsCmd::Catalogue {
                quiver_type,
                shift,
                toroidal,
                shift_value,
            } => {
                let spec = if *toroidal {
                    PresentationSpec::toroidal(*shift_value)
                } else {
                    let q = QuiverData::by_name(quiver_type).map_err(|e| e.to_string())?;
                    let shift = parse_dimvec(false, shift)?;
                    PresentationSpec::simply_laced(q, shift)
                };
                let cat = relation_catalogue(&spec);
                Ok(serde_json::to_value(&cat).map_err(|e| e.to_string())?)
            }
            RelationsCmd::Check {
                preset,
                w,
                cap,
                window,
                detail,
            } => {
                let (spec, table) = match preset.as_str() {
                    "a1-lattice" => {
                        let table = build_operator_table(*w, *cap, *window)
                            .map_err(|e| e.to_string())?;
                        let mut shift = DimVec::zero(Support::Vertices);
                        shift.set(DimKey::Plain(1), -(*w as i64));
                        (
                            PresentationSpec::simply_laced(QuiverData::type_a(1), shift),
                            table,
                        )
                    }
                    "trivial" => {
                        let mut shift = DimVec::zero(Support::Vertices);
                        shift.set(DimKey::Plain(1), *w as i64);
                        let spec =
                            PresentationSpec::simply_laced(QuiverData::type_a(1), shift);
                        let table =
                            highest_weight_table(&spec, &[*w]).map_err(|e| e.to_string())?;
                        (spec, table)
                    }
                    "toroidal-trivial" => {
                        let spec = PresentationSpec::toroidal(*w as i64);
                        let table =
                            highest_weight_table(&spec, &[*w]).map_err(|e| e.to_string())?;
                        (spec, table)
                    }
                    other => return Err(format!("unknown preset `{other}`")),
                };
                let report = check_relations(&spec, &table, *window).map_err(|e| e.to_string())?;
                if *detail {
                    Ok(serde_json::to_value(&report).map_err(|e| e.to_string())?)
                } else {
                    Ok(json!({
                        "pass": report.pass,
                        "fail": report.fail,
                        "undetermined": report.undetermined,
                    }))
                }
            }
        },
        Command::Lattice { cmd } => match cmd {
            LatticeCmd::Coeff { w, lambda, mu, op, n } => {
                let lam = parse_lambda(*w, lambda)?;
                let mu = parse_lambda(*w, mu)?;
                let value = match op.as_str() {
                    "plus" => coeff_a_plus(&lam, &mu, *n).map_err(|e| e.to_string())?,
                    "minus" => coeff_a_minus(&lam, &mu, *n),
                    other => return Err(format!("unknown operator `{other}`")),
                };
                Ok(json!({
                    "source": lam.label(),
                    "target": mu.label(),
                    "n": n,
                    "adjacent": lam.covers(&mu).is_some(),
                    "value": value.to_string(),
                }))
            }
            LatticeCmd::Commutator { w, lambda, m, n } => {
                let lam = parse_lambda(*w, lambda)?;
                let rep = commutator_check(&lam, *m, *n).map_err(|e| e.to_string())?;
                Ok(serde_json::to_value(&rep).map_err(|e| e.to_string())?)
            }
            LatticeCmd::Psi { w, lambda, sign, trunc } => {
                let lam = parse_lambda(*w, lambda)?;
                let sign = match sign.as_str() {
                    "plus" => true,
                    "minus" => false,
                    other => return Err(format!("unknown sign `{other}`")),
                };
                let s = psi_series_a1(&lam, sign, *trunc).map_err(|e| e.to_string())?;
                Ok(series_json(&s))
            }
            LatticeCmd::Table { w, cap, window } => {
                let table = build_operator_table(*w, *cap, *window).map_err(|e| e.to_string())?;
                let mut xs = Vec::new();
                for (family, mats) in [("x_plus", &table.gens.x_plus), ("x_minus", &table.gens.x_minus)] {
                    for (&(i, n), mat) in mats {
                        for (&(r, c), v) in mat.entries() {
                            xs.push(json!({
                                "generator": family,
                                "i": i,
                                "n": n,
                                "source": table.basis_labels[c],
                                "target": table.basis_labels[r],
                                "value": v.to_string(),
                            }));
                        }
                    }
                }
                Ok(json!({
                    "basis": table.basis_labels,
                    "entries": xs,
                }))
            }
        },
        Command::Quot { cmd } => match cmd {
            QuotCmd::Poincare { w, v, punctual } => {
                let (poly, euler) = quot_poincare(*w, *v, *punctual);
                Ok(json!({
                    "poly": poly.to_string().replace(' ', ""),
                    "euler": euler.to_string().parse::<i64>().unwrap_or(-1),
                }))
            }
        },
        Command::Grass { cmd } => match cmd {
            GrassCmd::Enum {
                quiver_type,
                i,
                k,
                l,
                v,
            } => {
                let q = QuiverData::by_name(quiver_type).map_err(|e| e.to_string())?;
                let module = build_injective(&q, *i, *k, *l).map_err(|e| e.to_string())?;
                match v {
                    Some(vs) => {
                        let v = parse_dimvec(true, vs)?;
                        let certs =
                            enumerate_graded_submodules(&module, &v).map_err(|e| e.to_string())?;
                        Ok(json!({
                            "module": module.to_json(),
                            "dimvec": v.to_json(),
                            "count": certs.len(),
                            "certificates": serde_json::to_value(&certs).map_err(|e| e.to_string())?,
                        }))
                    }
                    None => {
                        let strata = all_graded_submodules(&module).map_err(|e| e.to_string())?;
                        let total: usize = strata.iter().map(|(_, c)| c.len()).sum();
                        let strata_json: Vec<Value> = strata
                            .iter()
                            .map(|(v, c)| json!({ "dimvec": v.to_json(), "count": c.len() }))
                            .collect();
                        Ok(json!({
                            "module": module.to_json(),
                            "total": total,
                            "strata": strata_json,
                        }))
                    }
                }
            }
            GrassCmd::EulerVsKr {
                quiver_type,
                i,
                k,
                l,
                step_cap,
            } => {
                let q = QuiverData::by_name(quiver_type).map_err(|e| e.to_string())?;
                let r = euler_vs_kr(&q, *i, *k, *l, *step_cap).map_err(|e| e.to_string())?;
                Ok(serde_json::to_value(&r).map_err(|e| e.to_string())?)
            }
        },
    }
}

/// Renders a JSON document as an indented key/value table.
fn render_table(value: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                match v {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_table(v, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {v}\n")),
                }
            }
        }
        Value::Array(items) => {
            for (idx, v) in items.iter().enumerate() {
                match v {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}- [{idx}]\n"));
                        render_table(v, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}- {v}\n")),
                }
            }
        }
        other => out.push_str(&format!("{pad}{other}\n")),
    }
}

fn main() {
    let cli = Cli::parse();
    let threads = cli
        .threads
        .or_else(|| std::env::var("QLOOP_THREADS").ok().and_then(|v| v.parse().ok()));
    if let Some(n) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let start = std::time::Instant::now();
    let _ = cli.seed; // reserved for randomized subcommands
    match run(&cli) {
        Ok(value) => {
            let payload = serde_json::to_string_pretty(&value).expect("serializable");
            let rendered = match cli.format {
                Format::Json => format!("{payload}\n"),
                Format::Table => {
                    let mut s = String::new();
                    render_table(&value, 0, &mut s);
                    s
                }
            };
            print!("{rendered}");
            if let Some(path) = &cli.out {
                std::fs::write(path, payload.as_bytes()).expect("write --out file");
            }
            if let Some(path) = &cli.manifest {
                let digest: String = Sha256::digest(rendered.as_bytes())
                    .iter()
                    .map(|b| format!("{b:02x}"))
                    .collect();
                let manifest = json!({
                    "command": std::env::args().collect::<Vec<_>>(),
                    "version": env!("CARGO_PKG_VERSION"),
                    "wall_clock_ms": start.elapsed().as_millis() as u64,
                    "output_digest": digest,
                });
                let mut f = std::fs::File::create(path).expect("create manifest");
                writeln!(f, "{}", serde_json::to_string_pretty(&manifest).unwrap()).unwrap();
            }
        }
        Err(message) => {
            let diag = json!({ "error": message });
            println!("{}", serde_json::to_string_pretty(&diag).unwrap());
            std::process::exit(1);
        }
    }
}
