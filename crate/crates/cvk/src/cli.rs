//! Command-line entry point: classify, truncate, tile, limit-set, fixtures.
//!
//! Exit codes: 0 success, 2 parse/validation failure, 3 precondition
//! refusal, 4 numerical-integrity abort (tile overlap or dedup ambiguity).

use crate::fixtures::{all_fixtures, FixtureKind};
use crate::io::{self, Input};
use crate::orbit::{self, OrbitError};
use crate::render;
use crate::report;
use crate::tol::MAX_WORD_LEN;
use crate::truncate::{self, TruncateError};
use clap::{Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_REFUSED: i32 = 3;
pub const EXIT_INTEGRITY: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "cvk", version, about = "Projective Coxeter polytopes: classification, truncation, tilings, limit sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Svg,
    Ply,
    Csv,
}

#[derive(Debug, clap::Args)]
pub struct CommonOpts {
    /// Input file: polytope JSON, Coxeter-system JSON, or a fixture name.
    #[arg(long)]
    pub input: String,
    /// Eigen/definiteness tolerance ε.
    #[arg(long, default_value_t = crate::tol::EPS)]
    pub eps: f64,
    /// Angle-recognition tolerance δ.
    #[arg(long, default_value_t = crate::tol::ANGLE_DELTA)]
    pub delta: f64,
    /// Dedup grid for matrix-level enumeration.
    #[arg(long, default_value_t = crate::tol::DEDUP_GRID)]
    pub grid: f64,
    /// Seed for all randomized sampling.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output path (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Full classification report as JSON.
    Classify {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Truncate every simple perfect loxodromic vertex; emits polytope JSON.
    Truncate {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Orbit tiling up to a word-length depth; emits stats JSON, SVG (d=2)
    /// or PLY (d=3).
    Tile {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Limit-set approximation; emits CSV of projective points plus a stats
    /// header, or JSON.
    LimitSet {
        #[command(flatten)]
        common: CommonOpts,
        /// Target number of sample points.
        #[arg(short, long, default_value_t = 200)]
        n: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Write the fixture catalog as JSON files.
    Fixtures {
        #[arg(long)]
        out: PathBuf,
    },
}

/// The run configuration invariants: 0 < ε < δ < 1, word length capped.
fn validate_config(common: &CommonOpts, depth: usize) -> Result<(), String> {
    if !(common.eps > 0.0 && common.eps < common.delta && common.delta < 1.0) {
        return Err(format!(
            "tolerances must satisfy 0 < eps < delta < 1 (got eps = {}, delta = {})",
            common.eps, common.delta
        ));
    }
    if !(common.grid > 0.0 && common.grid < 1.0) {
        return Err(format!("grid must lie in (0, 1), got {}", common.grid));
    }
    if depth > MAX_WORD_LEN {
        return Err(format!("depth {depth} exceeds the hard cap {MAX_WORD_LEN}"));
    }
    Ok(())
}

fn read_input(spec: &str) -> Result<Input, String> {
    // Fixture names resolve without touching the filesystem.
    for (name, kind) in all_fixtures() {
        if name == spec {
            return Ok(match kind {
                FixtureKind::System(sys) => Input::System(sys),
                FixtureKind::Polytope(p) => Input::Polytope(p),
            });
        }
    }
    let text = std::fs::read_to_string(spec).map_err(|e| format!("cannot read {spec}: {e}"))?;
    io::parse_input(&text).map_err(|e| e.to_string())
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => write_atomic(path, content).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Writes through a temp file in the same directory, then renames.
fn write_atomic(path: &Path, content: &str) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, content)?;
    std::fs::rename(&tmp, path)
}

fn integrity_exit(e: &OrbitError) -> i32 {
    match e {
        OrbitError::OverlapDetected(_) | OrbitError::DedupAmbiguity(_) => EXIT_INTEGRITY,
        OrbitError::Precondition(_) | OrbitError::NoProximalFound { .. } => EXIT_REFUSED,
        _ => EXIT_PARSE,
    }
}

pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(()) => EXIT_OK,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            code
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), (i32, String)> {
    match cli.command {
        Command::Classify { common, format } => {
            validate_config(&common, 0).map_err(|m| (EXIT_PARSE, m))?;
            if format != Format::Json {
                return Err((EXIT_PARSE, "classify only emits JSON".into()));
            }
            let p = read_input(&common.input).map_err(|m| (EXIT_PARSE, m))?.into_polytope();
            let report = report::classification_report(&p)
                .map_err(|e| (EXIT_PARSE, format!("classification failed: {e}")))?;
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            emit(&common.out, &(text + "\n")).map_err(|m| (EXIT_PARSE, m))
        }
        Command::Truncate { common } => {
            validate_config(&common, 0).map_err(|m| (EXIT_PARSE, m))?;
            let p = read_input(&common.input).map_err(|m| (EXIT_PARSE, m))?.into_polytope();
            let outcome = truncate::truncate_all(&p).map_err(|e| match e {
                TruncateError::FacetsCollide(_, _) | TruncateError::PostconditionFailed(_) => {
                    (EXIT_INTEGRITY, e.to_string())
                }
                TruncateError::Polytope(_) | TruncateError::Classify(_) => (EXIT_PARSE, e.to_string()),
                refusal => (EXIT_REFUSED, refusal.to_string()),
            })?;
            let json = io::polytope_to_json(&outcome.polytope);
            let text = serde_json::to_string_pretty(&json).expect("polytope serializes");
            emit(&common.out, &(text + "\n")).map_err(|m| (EXIT_PARSE, m))
        }
        Command::Tile { common, depth, format } => {
            validate_config(&common, depth).map_err(|m| (EXIT_PARSE, m))?;
            let p = read_input(&common.input).map_err(|m| (EXIT_PARSE, m))?.into_polytope();
            let snapshot = orbit::orbit_tiles_with(&p, depth, 3, common.seed, common.grid)
                .map_err(|e| (integrity_exit(&e), e.to_string()))?;
            match format {
                Format::Json => {
                    let counts = orbit::counts_by_length(&snapshot.elements, depth);
                    let stats = serde_json::json!({
                        "schema": io::SCHEMA,
                        "depth": depth,
                        "elements": snapshot.elements.len(),
                        "counts_by_length": counts,
                        "closed": snapshot.closed,
                        "overlap_samples_checked": snapshot.overlap_samples_checked,
                        "overlaps": 0,
                    });
                    let text = serde_json::to_string_pretty(&stats).expect("stats serialize");
                    emit(&common.out, &(text + "\n")).map_err(|m| (EXIT_PARSE, m))
                }
                Format::Svg => {
                    if p.dim() != 2 {
                        return Err((EXIT_PARSE, "SVG output needs a 2-dimensional polytope".into()));
                    }
                    let limit = orbit::limit_set_approx(&p, 200, (3, depth.max(4)), common.seed)
                        .map(|s| s.points)
                        .unwrap_or_default();
                    let svg = render::svg_tiling(&p, &snapshot, &limit);
                    emit(&common.out, &svg).map_err(|m| (EXIT_PARSE, m))
                }
                Format::Ply => {
                    if p.dim() != 3 {
                        return Err((EXIT_PARSE, "PLY output needs a 3-dimensional polytope".into()));
                    }
                    let chart = render::drawing_chart(&p);
                    let ply = render::ply_points(&snapshot.hull_sample, &chart);
                    emit(&common.out, &ply).map_err(|m| (EXIT_PARSE, m))
                }
                Format::Csv => Err((EXIT_PARSE, "tile does not emit CSV".into())),
            }
        }
        Command::LimitSet { common, n, format } => {
            validate_config(&common, 0).map_err(|m| (EXIT_PARSE, m))?;
            let p = read_input(&common.input).map_err(|m| (EXIT_PARSE, m))?.into_polytope();
            let sample = orbit::limit_set_approx(&p, n, (3, MAX_WORD_LEN), common.seed)
                .map_err(|e| (integrity_exit(&e), e.to_string()))?;
            // Residual against the invariant form, when the group has one.
            let residual = match crate::classify::zariski_closure(&p) {
                Ok(z) => match z.verdict {
                    crate::classify::ZariskiVerdict::ConjugateSOd1 { witness, .. } => {
                        let scale = witness.amax();
                        Some(
                            sample
                                .points
                                .iter()
                                .map(|x| (x.transpose() * &witness * x)[(0, 0)].abs() / scale)
                                .fold(0.0f64, f64::max),
                        )
                    }
                    _ => None,
                },
                Err(_) => None,
            };
            match format {
                Format::Csv => {
                    let mut text = format!(
                        "# points: {}, bi-proximal elements: {}, attempts: {}\n",
                        sample.points.len(),
                        sample.bi_proximal_found,
                        sample.attempted
                    );
                    if let Some(r) = residual {
                        text.push_str(&format!("# max residual to invariant quadric: {r:.3e}\n"));
                    }
                    text.push_str(&render::csv_points(&sample.points, &sample.words));
                    emit(&common.out, &text).map_err(|m| (EXIT_PARSE, m))
                }
                Format::Json => {
                    let stats = serde_json::json!({
                        "schema": io::SCHEMA,
                        "points": sample.points.len(),
                        "bi_proximal_found": sample.bi_proximal_found,
                        "attempted": sample.attempted,
                        "max_quadric_residual": residual,
                    });
                    let text = serde_json::to_string_pretty(&stats).expect("stats serialize");
                    emit(&common.out, &(text + "\n")).map_err(|m| (EXIT_PARSE, m))
                }
                _ => Err((EXIT_PARSE, "limit-set emits CSV or JSON".into())),
            }
        }
        Command::Fixtures { out } => {
            std::fs::create_dir_all(&out).map_err(|e| (EXIT_PARSE, e.to_string()))?;
            for (name, kind) in all_fixtures() {
                let text = match kind {
                    FixtureKind::System(sys) => {
                        serde_json::to_string_pretty(&io::system_to_json(&sys)).unwrap()
                    }
                    FixtureKind::Polytope(p) => {
                        serde_json::to_string_pretty(&io::polytope_to_json(&p)).unwrap()
                    }
                };
                let path = out.join(format!("{name}.json"));
                write_atomic(&path, &(text + "\n")).map_err(|e| (EXIT_PARSE, e.to_string()))?;
            }
            Ok(())
        }
    }
}
