mod svg;

use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use itertools::Itertools;
use polychow_core::golden::{verify_examples, Golden, DEFAULT_GOLDEN};
use polychow_core::grassmann::{
    decomposition_check, gale_dual, multiplicity_index, orbit_polytope, plucker, random_full_rank, seeded_rng,
    support_polymatroid, weight_multiplicity_index,
};
use polychow_core::json::{matrix_to_json, parse_bases, parse_matrix, polytope_to_json, rat_vec_from_value, to_pretty};
use polychow_core::linalg::{fmt_vec, rat_vec, subsets};
use polychow_core::polymatroid::{
    base_polytope_of, check_exchange, is_polymatroid_configuration, is_polymatroid_polytope, CountVec,
};
use polychow_core::secondary::{complementary_pair_order, reorder, secondary_polytope, weight_config, EnumOptions};
use polychow_core::{BlockStructure, Matrix, Polymatroid, Polytope};
use serde_json::{json, Value};

use crate::svg::Marker;

#[derive(Parser)]
#[command(
    name = "polychow",
    version,
    about = "Exact polytopes, polymatroids and relations for Grassmannian torus orbits"
)]
struct Cli {
    /// Seed for every random choice; recorded in all JSON output.
    #[arg(long, global = true, env = "POLYCHOW_SEED", default_value_t = 0)]
    seed: u64,

    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Svg,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// The projected hypersimplex λ_r(Δ(d,n)) with its image multiset.
    Hypersimplex {
        d: usize,
        n: usize,
        /// Block sizes, e.g. 1,2,2; defaults to all ones.
        #[arg(long)]
        r: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Triangulations of the weight configuration and its secondary polytope.
    Secondary {
        d: usize,
        n: usize,
        #[arg(long)]
        r: Option<String>,
        /// Largest number of weights accepted.
        #[arg(long, default_value_t = polychow_core::secondary::DEFAULT_CAP)]
        cap: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// List coordinates as 12,34,13,24,14,23 (subset, complement) instead of lexicographically.
        #[arg(long, visible_alias = "paper-order")]
        pair_order: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Re-run the worked examples against the golden file.
    VerifyExamples {
        #[arg(long)]
        only: Option<String>,
        /// Alternative golden file; defaults to the shipped one.
        #[arg(long)]
        golden: Option<PathBuf>,
    },
    /// Discrete polymatroid utilities.
    Polymatroid {
        #[command(subcommand)]
        action: PolymatroidCommand,
    },
    /// Moment polytope of the block-torus orbit of a row space.
    Orbit {
        #[command(flatten)]
        input: MatrixInput,
        #[arg(long)]
        r: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Gale dual (orthogonal complement) of a row space.
    Gale {
        #[command(flatten)]
        input: MatrixInput,
    },
    /// Check that cells form a polyhedral decomposition of a target polytope.
    Decompose {
        /// JSON {"cells": [[point, ...], ...], "target": [point, ...]}; `-` reads stdin.
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum PolymatroidCommand {
    /// Exchange verdict and polytope criteria for a basis list.
    Check {
        /// JSON list of count vectors or {"bases": [...]}; `-` reads stdin.
        #[arg(long)]
        bases: PathBuf,
        /// Caps per block; defaults to the coordinatewise maximum.
        #[arg(long)]
        caps: Option<String>,
    },
    /// Dual polymatroid with respect to the caps.
    Dual {
        #[arg(long)]
        bases: PathBuf,
        #[arg(long)]
        caps: Option<String>,
    },
}

#[derive(Args)]
struct MatrixInput {
    /// JSON rows or a whitespace grid of rationals; `-` reads stdin.
    #[arg(long, conflicts_with = "random")]
    matrix: Option<PathBuf>,
    /// Sample a seeded full-rank D x N integer matrix instead.
    #[arg(long, num_args = 2, value_names = ["D", "N"])]
    random: Option<Vec<usize>>,
}

impl MatrixInput {
    fn load(&self, seed: u64) -> Result<Matrix> {
        match (&self.matrix, &self.random) {
            (Some(path), _) => Ok(parse_matrix(&read_input(path)?)?),
            (None, Some(dims)) => Ok(random_full_rank(&mut seeded_rng(seed), dims[0], dims[1])),
            (None, None) => bail!("pass --matrix FILE or --random D N"),
        }
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        return Ok(s);
    }
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn blocks_for(n: usize, r: Option<&str>) -> Result<BlockStructure> {
    let b = match r {
        Some(s) => BlockStructure::parse(s)?,
        None => BlockStructure::singletons(n),
    };
    if b.n() != n {
        bail!("blocks {b} sum to {}, expected n = {n}", b.n());
    }
    Ok(b)
}

fn parse_caps(s: &str) -> Result<Vec<u32>> {
    s.split(',').map(|x| x.trim().parse::<u32>().with_context(|| format!("bad cap {x:?}"))).collect()
}

/// What a command produced, before formatting.
enum Rendered {
    Json(Value),
    Text(String),
}

struct Output {
    body: Rendered,
    ok: bool,
}

impl Output {
    fn json(v: Value) -> Self {
        Self { body: Rendered::Json(v), ok: true }
    }
}

fn with_seed(seed: u64, command: &str, mut v: Value) -> Value {
    if let Value::Object(map) = &mut v {
        map.insert("seed".into(), json!(seed));
        map.insert("command".into(), json!(command));
    }
    v
}

/// Renders an SVG if the polytope is planar, otherwise warns and keeps JSON.
fn choose(
    format: Format,
    json_out: Value,
    text: impl FnOnce() -> String,
    svg: impl FnOnce() -> Option<String>,
) -> Output {
    match format {
        Format::Json => Output::json(json_out),
        Format::Text => Output { body: Rendered::Text(text()), ok: true },
        Format::Svg => match svg() {
            Some(s) => Output { body: Rendered::Text(s), ok: true },
            None => {
                eprintln!("warning: SVG needs affine dimension at most 2; writing JSON instead");
                Output::json(json_out)
            }
        },
    }
}

fn hypersimplex(seed: u64, d: usize, n: usize, r: Option<&str>, format: Format) -> Result<Output> {
    let b = blocks_for(n, r)?;
    let p = b.projected_hypersimplex(d)?;
    let images: BTreeMap<Vec<u32>, usize> =
        subsets(n, d).iter().map(|s| b.project_subset(s)).counts().into_iter().collect();
    let image_json: Vec<Value> = images
        .iter()
        .map(|(pt, k)| json!({"point": pt, "multiplicity": k, "vertex": p.is_vertex(&rat_vec(&pt.iter().map(|&x| i64::from(x)).collect_vec()))}))
        .collect();
    let out = with_seed(
        seed,
        "hypersimplex",
        json!({"d": d, "n": n, "r": b.parts(), "polytope": polytope_to_json(&p), "images": image_json}),
    );
    let text = || {
        let mut s = format!("λ_{b}(Δ({d},{n})): affine dim {}, {} vertices\n", p.affine_dim(), p.vertices().len());
        for (pt, k) in &images {
            s += &format!("  ({}) x{k}\n", pt.iter().join(","));
        }
        s
    };
    let svg = || {
        let markers: Vec<Marker> = images
            .iter()
            .map(|(pt, k)| Marker {
                point: rat_vec(&pt.iter().map(|&x| i64::from(x)).collect_vec()),
                label: format!("({}) x{k}", pt.iter().join(",")),
            })
            .collect();
        svg::render(&p, &markers, &format!("projected hypersimplex d={d} n={n} r={b}"))
    };
    Ok(choose(format, out, text, svg))
}

struct SecondaryArgs<'a> {
    d: usize,
    n: usize,
    r: Option<&'a str>,
    cap: usize,
    jobs: usize,
    pair_order: bool,
    format: Format,
}

fn secondary(seed: u64, a: SecondaryArgs) -> Result<Output> {
    if a.cap == 0 {
        bail!("--cap must be at least 1");
    }
    let b = blocks_for(a.n, a.r)?;
    let config = weight_config(a.d, &b)?;
    let perm = if a.pair_order {
        complementary_pair_order(a.d, a.n).context("--pair-order needs n = 2d")?
    } else {
        (0..config.len()).collect()
    };
    let sec = secondary_polytope(&config, EnumOptions { cap: a.cap, jobs: a.jobs.max(1) })?;
    let names = reorder(&config.names(), &perm);
    let triangulations: Vec<Value> = sec
        .triangulations
        .iter()
        .zip(&sec.char_vectors)
        .zip(&sec.is_vertex)
        .map(|((t, phi), v)| {
            let cells: Vec<Vec<String>> =
                t.cells().iter().map(|c| c.labels().iter().map(|&l| config.name(l)).collect()).collect();
            json!({"cells": cells, "char_vector": reorder(phi, &perm), "vertex": v})
        })
        .collect();
    let sigma_vertices: Vec<Vec<u64>> = sec
        .char_vectors
        .iter()
        .zip(&sec.is_vertex)
        .filter(|(_, v)| **v)
        .map(|(phi, _)| reorder(phi, &perm))
        .unique()
        .collect();
    let out = with_seed(
        seed,
        "secondary",
        json!({
            "d": a.d, "n": a.n, "r": b.parts(), "cap": a.cap,
            "labels": names,
            "count": sec.triangulations.len(),
            "triangulations": triangulations,
            "sigma": {
                "affine_dim": sec.polytope.affine_dim(),
                "vertices": sigma_vertices,
                "facets": sec.polytope.facets().len(),
            },
        }),
    );
    let text = || {
        let mut s = format!(
            "{} triangulations; Σ has affine dim {} and {} vertices\nlabels: {}\n",
            sec.triangulations.len(),
            sec.polytope.affine_dim(),
            sigma_vertices.len(),
            names.join(" ")
        );
        for phi in &sec.char_vectors {
            s += &format!("  ({})\n", reorder(phi, &perm).iter().join(","));
        }
        s
    };
    let svg = || svg::render(&sec.polytope, &svg::vertex_markers(&sec.polytope), "secondary polytope");
    Ok(choose(a.format, out, text, svg))
}

fn verify(only: Option<&str>, golden: Option<&Path>) -> Result<Output> {
    let text = match golden {
        Some(p) => read_input(p)?,
        None => DEFAULT_GOLDEN.to_string(),
    };
    let golden = Golden::parse(&text)?;
    if let Some(id) = only {
        if !golden.ids().contains(id) {
            bail!("no example {id:?}; known: {}", golden.ids().iter().join(", "));
        }
    }
    let outcomes = verify_examples(&golden, only);
    let width = outcomes.iter().map(|o| o.check.len()).max().unwrap_or(0);
    let mut s = String::new();
    for o in &outcomes {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        s += &format!("{:<9} {:<width$}  {tag}  {}\n", o.id, o.check, o.detail);
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    s += &format!("{} checks, {failed} failed\n", outcomes.len());
    Ok(Output { body: Rendered::Text(s), ok: failed == 0 && !outcomes.is_empty() })
}

fn load_polymatroid(path: &Path, caps: Option<&str>) -> Result<(BTreeSet<CountVec>, Vec<u32>)> {
    let bases: BTreeSet<CountVec> = parse_bases(&read_input(path)?)?.into_iter().collect();
    if bases.is_empty() {
        bail!("empty basis list");
    }
    let caps = match caps {
        Some(c) => parse_caps(c)?,
        None => {
            let m = bases.first().map_or(0, Vec::len);
            (0..m).map(|i| bases.iter().map(|b| b.get(i).copied().unwrap_or(0)).max().unwrap_or(0).max(1)).collect()
        }
    };
    Ok((bases, caps))
}

fn polymatroid_check(seed: u64, path: &Path, caps: Option<&str>) -> Result<Output> {
    let (bases, caps) = load_polymatroid(path, caps)?;
    let exchange = check_exchange(&bases)?;
    Polymatroid::new(caps.clone(), bases.iter().cloned())?;
    let blocks = BlockStructure::from_caps(&caps)?;
    let d = bases.first().map_or(0, |b| b.iter().sum::<u32>()) as usize;
    let hull = base_polytope_of(&bases)?;
    let lattice: BTreeSet<CountVec> = hull
        .lattice_points()
        .iter()
        .map(|p| p.iter().map(|x| u32::try_from(x).unwrap_or(u32::MAX)).collect())
        .collect();
    let out = with_seed(
        seed,
        "polymatroid check",
        json!({
            "caps": caps,
            "modulus": d,
            "bases": bases,
            "exchange": exchange,
            "polytope_criterion": is_polymatroid_polytope(&hull, d, &blocks),
            "configuration_criterion": is_polymatroid_configuration(&bases, d, &blocks),
            "bases_are_lattice_points": lattice == bases,
            "base_polytope": polytope_to_json(&hull),
        }),
    );
    Ok(Output::json(out))
}

fn polymatroid_dual(seed: u64, path: &Path, caps: Option<&str>) -> Result<Output> {
    let (bases, caps) = load_polymatroid(path, caps)?;
    let p = Polymatroid::new(caps, bases)?;
    let dual = p.dual();
    Ok(Output::json(with_seed(
        seed,
        "polymatroid dual",
        json!({"caps": dual.caps(), "bases": dual.bases(), "valid": dual.is_valid()}),
    )))
}

fn orbit(seed: u64, input: &MatrixInput, r: Option<&str>, format: Format) -> Result<Output> {
    let m = input.load(seed)?;
    let b = blocks_for(m.ncols(), r)?;
    let q = orbit_polytope(&m, &b)?;
    let poly = support_polymatroid(&m, &b)?;
    let index = |x: polychow_core::Result<num_bigint::BigInt>| match x {
        Ok(k) => json!(k.to_string()),
        Err(e) => json!({"error": e.to_string()}),
    };
    let out = with_seed(
        seed,
        "orbit",
        json!({
            "matrix": matrix_to_json(&m),
            "r": b.parts(),
            "polytope": polytope_to_json(&q),
            "polymatroid": {"caps": poly.caps(), "bases": poly.bases()},
            "multiplicity_index": index(multiplicity_index(&m, &b)),
            "weight_multiplicity_index": index(weight_multiplicity_index(&m, &b)),
        }),
    );
    let text = || {
        let mut s = format!("orbit polytope: affine dim {}, {} vertices\n", q.affine_dim(), q.vertices().len());
        for v in q.vertices() {
            s += &format!("  {}\n", fmt_vec(v));
        }
        s
    };
    let svg = || svg::render(&q, &svg::vertex_markers(&q), "orbit moment polytope");
    Ok(choose(format, out, text, svg))
}

fn gale(seed: u64, input: &MatrixInput) -> Result<Output> {
    let m = input.load(seed)?;
    let g = gale_dual(&m)?;
    let p = plucker(&m)?;
    Ok(Output::json(with_seed(
        seed,
        "gale",
        json!({"matrix": matrix_to_json(&m), "gale_dual": matrix_to_json(&g), "d": p.d(), "n": p.n()}),
    )))
}

fn points_from(v: &Value) -> Result<Vec<polychow_core::linalg::RatVec>> {
    let arr = v.as_array().context("expected an array of points")?;
    Ok(arr.iter().map(rat_vec_from_value).collect::<polychow_core::Result<Vec<_>>>()?)
}

fn decompose(seed: u64, path: &Path) -> Result<Output> {
    let v: Value = serde_json::from_str(&read_input(path)?).context("decompose input is not JSON")?;
    let cells = v
        .get("cells")
        .and_then(Value::as_array)
        .context("missing \"cells\"")?
        .iter()
        .map(|c| Ok(Polytope::hull(&points_from(c)?)?))
        .collect::<Result<Vec<_>>>()?;
    let target = Polytope::hull(&points_from(v.get("target").context("missing \"target\"")?)?)?;
    let ok = decomposition_check(&cells, &target)?;
    Ok(Output::json(with_seed(seed, "decompose", json!({"cells": cells.len(), "decomposition": ok}))))
}

fn run(cli: &Cli) -> Result<Output> {
    let seed = cli.seed;
    match &cli.command {
        Command::Hypersimplex { d, n, r, format } => hypersimplex(seed, *d, *n, r.as_deref(), *format),
        Command::Secondary { d, n, r, cap, jobs, pair_order, format } => secondary(
            seed,
            SecondaryArgs {
                d: *d,
                n: *n,
                r: r.as_deref(),
                cap: *cap,
                jobs: *jobs,
                pair_order: *pair_order,
                format: *format,
            },
        ),
        Command::VerifyExamples { only, golden } => verify(only.as_deref(), golden.as_deref()),
        Command::Polymatroid { action } => match action {
            PolymatroidCommand::Check { bases, caps } => polymatroid_check(seed, bases, caps.as_deref()),
            PolymatroidCommand::Dual { bases, caps } => polymatroid_dual(seed, bases, caps.as_deref()),
        },
        Command::Orbit { input, r, format } => orbit(seed, input, r.as_deref(), *format),
        Command::Gale { input } => gale(seed, input),
        Command::Decompose { input } => decompose(seed, input),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let mut text = match &out.body {
        Rendered::Json(v) => to_pretty(v),
        Rendered::Text(s) => s.clone(),
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: writing {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if out.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
