//! Command implementations for the `snakegraph` binary.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use thiserror::Error;

use snakegraph::algebra::LaurentPoly;
use snakegraph::generate::{random_polygon, random_walk_arc};
use snakegraph::mpath::{chi, ChiVariant};
use snakegraph::selftest::{self, SelftestConfig};
use snakegraph::skein::{verify_skein, SkeinInstance};
use snakegraph::snakecore::{build_band, build_snake, parse_shapes, SnakeLabels};
use snakegraph::surface::{CurveDescriptor, CurveKind, ExpandOptions, IdealTriangulation, SurfaceError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error in {0}: {1}")]
    Parse(String, String),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("methods disagree: {0}")]
    MethodMismatch(String),
    #[error("{0}: {1}")]
    Io(PathBuf, std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::MethodMismatch(_) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Both,
    Matchings,
    Matrices,
}

#[derive(Debug, Parser)]
#[command(name = "snakegraph", version, about = "Laurent expansions of arcs and loops by snake graphs and matrix products")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Keep boundary variables symbolic instead of setting them to 1.
    #[arg(long, global = true)]
    pub keep_boundary: bool,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest number of tiles for generated graphs.
    #[arg(long, global = true)]
    pub max_tiles: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print X, F and the normalized element of a curve.
    Expand { surface: String, curve: String },
    /// Print the signed adjacency matrix of a triangulation.
    Bmatrix { surface: String },
    /// List the perfect (or good) matchings of a curve's snake (or band) graph.
    Matchings { surface: String, curve: String },
    /// Emit the snake or band graph of a curve, or of a shape word with --shapes, as DOT.
    SnakeDot {
        surface: Option<String>,
        curve: Option<String>,
        /// Shape word such as NEEN for an abstract snake graph.
        #[arg(long)]
        shapes: Option<String>,
        /// Draw the band graph of the shape word instead.
        #[arg(long)]
        band: bool,
    },
    /// Compare the matching and matrix methods on a curve, or on seeded random polygon arcs.
    Verify {
        surface: Option<String>,
        curve: Option<String>,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        /// Number of random arcs when no curve is given.
        #[arg(long, default_value_t = 200)]
        random: usize,
    },
    /// Check a skein instance file.
    SkeinCheck { surface: String, instance: String },
    /// Run the seeded property suites.
    Selftest {
        /// Trial count for every suite (defaults to the full sizes).
        #[arg(long, env = "SNAKE_SELFTEST_TRIALS")]
        trials: Option<usize>,
    },
}

const BUNDLED: &[(&str, &str)] = &[
    ("annulus", include_str!("../fixtures/annulus.json")),
    ("annulus-loop", include_str!("../fixtures/annulus-loop.json")),
    ("folded-digon", include_str!("../fixtures/folded-digon.json")),
    ("folded-gamma1", include_str!("../fixtures/folded-gamma1.json")),
    ("folded-gamma2", include_str!("../fixtures/folded-gamma2.json")),
    ("hexagon", include_str!("../fixtures/hexagon.json")),
    ("hexagon-chord", include_str!("../fixtures/hexagon-chord.json")),
    ("punctured-torus", include_str!("../fixtures/punctured-torus.json")),
    ("square", include_str!("../fixtures/square.json")),
    ("square-ptolemy", include_str!("../fixtures/square-ptolemy.json")),
    ("torus-loop", include_str!("../fixtures/torus-loop.json")),
];

/// The contents of a file, or of a bundled fixture written `@name`.
pub fn read_input(spec: &str) -> Result<String, CliError> {
    if let Some(name) = spec.strip_prefix('@') {
        return BUNDLED
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, s)| s.to_string())
            .ok_or_else(|| CliError::Validation(format!("no bundled fixture named {name}")));
    }
    std::fs::read_to_string(spec).map_err(|e| CliError::Io(Path::new(spec).to_path_buf(), e))
}

pub fn bundled_names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|(n, _)| *n)
}

fn surface_error(e: SurfaceError) -> CliError {
    CliError::Validation(e.to_string())
}

pub fn load_surface(spec: &str) -> Result<IdealTriangulation, CliError> {
    let text = read_input(spec)?;
    let doc = serde_json::from_str(&text).map_err(|e| CliError::Parse(spec.to_string(), e.to_string()))?;
    IdealTriangulation::from_doc(doc).map_err(surface_error)
}

pub fn load_curve(spec: &str) -> Result<CurveDescriptor, CliError> {
    let text = read_input(spec)?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(spec.to_string(), e.to_string()))
}

fn need<'a>(v: &'a Option<String>, what: &str) -> Result<&'a str, CliError> {
    v.as_deref().ok_or_else(|| CliError::Validation(format!("missing {what}")))
}

/// Runs one command, appending its output to `out`. Ok(false) means some check failed.
pub fn run(cli: &Cli, out: &mut String) -> Result<bool, CliError> {
    let opts = ExpandOptions { keep_boundary: cli.keep_boundary, rel: 1 };
    match &cli.command {
        Command::Expand { surface, curve } => {
            let t = load_surface(surface)?;
            let c = load_curve(curve)?;
            let e = t.expand(&c, &opts).map_err(surface_error)?;
            match cli.format {
                Format::Json => {
                    let v = json!({"X": e.x.to_string(), "F": e.f.to_string(), "normalized": e.normalized.to_string(), "F_trop": LaurentPoly::from_monomial(e.f_trop.clone()).to_string()});
                    writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json value")).ok();
                }
                _ => {
                    writeln!(out, "X = {}", e.x).ok();
                    writeln!(out, "F = {}", e.f).ok();
                    writeln!(out, "x = {}", e.normalized).ok();
                }
            }
            Ok(true)
        }
        Command::Bmatrix { surface } => {
            let t = load_surface(surface)?;
            let b = t.signed_adjacency_matrix();
            match cli.format {
                Format::Json => {
                    writeln!(out, "{}", json!({"arcs": t.arcs, "matrix": b})).ok();
                }
                _ => {
                    let w = t.arcs.iter().map(|a| a.len()).max().unwrap_or(1).max(3);
                    write!(out, "{:w$}", "").ok();
                    for a in &t.arcs {
                        write!(out, " {a:>w$}").ok();
                    }
                    out.push('\n');
                    for (a, row) in t.arcs.iter().zip(&b) {
                        write!(out, "{a:>w$}").ok();
                        for v in row {
                            write!(out, " {v:>w$}").ok();
                        }
                        out.push('\n');
                    }
                }
            }
            Ok(true)
        }
        Command::Matchings { surface, curve } => {
            let t = load_surface(surface)?;
            let c = load_curve(curve)?;
            let rows = matching_rows(&t, &c)?;
            match cli.format {
                Format::Json => {
                    let v: Vec<_> = rows.iter().map(|(e, x, y)| json!({"edges": e, "x": x, "y": y})).collect();
                    writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json value")).ok();
                }
                _ => {
                    for (i, (edges, x, y)) in rows.iter().enumerate() {
                        writeln!(out, "{:>3}  x(P) = {x}  y(P) = {y}  edges: {}", i + 1, edges.join(" ")).ok();
                    }
                }
            }
            Ok(true)
        }
        Command::SnakeDot { surface, curve, shapes, band } => {
            let dot = match shapes {
                Some(s) => {
                    let sh = parse_shapes(s).ok_or_else(|| CliError::Validation(format!("shape word {s} uses letters other than N and E")))?;
                    let l = SnakeLabels::generic(sh.len() + 1);
                    if *band {
                        build_band(&sh, l.diagonals, l.glue, snakegraph::algebra::VarId::x("a"))
                            .map_err(|e| CliError::Validation(e.to_string()))?
                            .to_dot(s)
                    } else {
                        build_snake(&sh, l).map_err(|e| CliError::Validation(e.to_string()))?.to_dot(s)
                    }
                }
                None => {
                    let t = load_surface(need(surface, "surface")?)?;
                    let c = load_curve(need(curve, "curve")?)?;
                    match c.kind {
                        CurveKind::Loop => t.build_band_from_loop(&c).map_err(surface_error)?.to_dot("band"),
                        _ => t.build_snake_from_arc(&c).map_err(surface_error)?.to_dot("snake"),
                    }
                }
            };
            out.push_str(&dot);
            Ok(true)
        }
        Command::Verify { surface, curve, method, random } => {
            match (surface, curve) {
                (Some(s), Some(c)) => {
                    let t = load_surface(s)?;
                    let c = load_curve(c)?;
                    let line = verify_one(&t, &c, *method, &opts)?;
                    writeln!(out, "{line}").ok();
                }
                (None, None) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                    let max = cli.max_tiles.unwrap_or(8);
                    for k in 0..*random {
                        let n = rng.gen_range(4..=10);
                        let t = random_polygon(n, &mut rng);
                        let c = random_walk_arc(&t, max, &mut rng).expect("polygons with four or more sides have arcs");
                        let line = verify_one(&t, &c, *method, &opts).map_err(|e| match e {
                            CliError::MethodMismatch(m) => CliError::MethodMismatch(format!("arc {k} in polygon({n}): {m}")),
                            e => e,
                        })?;
                        if cli.format == Format::Json {
                            writeln!(out, "{}", json!({"trial": k, "n": n, "crossings": c.crossings, "X": line})).ok();
                        } else {
                            writeln!(out, "{k:>4} polygon({n}) {}: {line}", c.crossings.join(",")).ok();
                        }
                    }
                    writeln!(out, "{random} curves agree").ok();
                }
                _ => return Err(CliError::Validation("verify takes a surface and a curve, or neither".into())),
            }
            Ok(true)
        }
        Command::SkeinCheck { surface, instance } => {
            let t = load_surface(surface)?;
            let text = read_input(instance)?;
            let inst: SkeinInstance = serde_json::from_str(&text).map_err(|e| CliError::Parse(instance.clone(), e.to_string()))?;
            let r = verify_skein(&t, &inst).map_err(|e| CliError::Validation(e.to_string()))?;
            out.push_str(&r.to_string());
            Ok(r.holds)
        }
        Command::Selftest { trials } => {
            let mut cfg = SelftestConfig { seed: cli.seed, ..SelftestConfig::default() };
            if let Some(n) = trials {
                cfg = cfg.with_trials(*n);
            }
            if let Some(d) = cli.max_tiles {
                cfg.max_tiles = d;
            }
            let r = selftest::run(&cfg);
            match cli.format {
                Format::Json => {
                    writeln!(out, "{}", serde_json::to_string_pretty(&r).expect("report serializes")).ok();
                }
                _ => out.push_str(&r.to_string()),
            }
            Ok(r.ok())
        }
    }
}

/// (edge labels, x(P), y(P)) for each matching, minimal matching first.
pub fn matching_rows(t: &IdealTriangulation, c: &CurveDescriptor) -> Result<Vec<(Vec<String>, String, String)>, CliError> {
    let spec = |m: snakegraph::algebra::Monomial| t.specialize(&LaurentPoly::from_monomial(m), true).to_string();
    match c.kind {
        CurveKind::Loop => {
            let b = t.build_band_from_loop(c).map_err(surface_error)?;
            let min = b.base.minimal_matching();
            Ok(b.good_matchings()
                .iter()
                .map(|g| {
                    let edges = g.band.edges.iter().map(|&e| b.base.edges[e].label.to_string()).collect();
                    (edges, LaurentPoly::from_monomial(b.weight(g)).to_string(), spec(b.base.height_with(&g.lift, &min)))
                })
                .collect())
        }
        CurveKind::Arc if c.along.is_none() => {
            let g = t.build_snake_from_arc(c).map_err(surface_error)?;
            let all = g.perfect_matchings();
            let min = all[0].clone();
            Ok(all
                .iter()
                .map(|p| {
                    let edges = p.edges.iter().map(|&e| g.edges[e].label.to_string()).collect();
                    (edges, LaurentPoly::from_monomial(g.weight(p)).to_string(), spec(g.height_with(p, &min)))
                })
                .collect())
        }
        _ => Err(CliError::Validation("only arcs with crossings and essential loops have matchings".into())),
    }
}

/// Computes X by the requested methods and returns it; both methods must agree.
pub fn verify_one(t: &IdealTriangulation, c: &CurveDescriptor, method: Method, opts: &ExpandOptions) -> Result<String, CliError> {
    let finish = |p: LaurentPoly| if opts.keep_boundary { p } else { p.specialize_kind(snakegraph::algebra::VarKind::Boundary) };
    let by_matchings = || t.expand(c, &ExpandOptions { keep_boundary: true, rel: opts.rel }).map(|e| finish(e.x)).map_err(surface_error);
    let by_matrices = || {
        let x = chi(t, c, ChiVariant::Phi).map_err(|e| CliError::Validation(e.to_string()))?;
        Ok::<_, CliError>(finish(x))
    };
    let x = match method {
        Method::Matchings => by_matchings()?,
        Method::Matrices => by_matrices()?,
        Method::Both => {
            let (a, b) = (by_matchings()?, by_matrices()?);
            if a != b {
                return Err(CliError::MethodMismatch(format!("matchings give {a}, matrices give {b}")));
            }
            a
        }
    };
    Ok(x.to_string())
}
