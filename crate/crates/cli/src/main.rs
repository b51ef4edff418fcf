use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hyperbasis_core::bounds::BoundTable;
use hyperbasis_core::canonical;
use hyperbasis_core::cover::is_partial_basis;
use hyperbasis_core::growth::{arc_graph, simulate, verify_radius_bounds};
use hyperbasis_core::pipeline::run_pipeline;
use hyperbasis_core::prune::{prune, verify};
use hyperbasis_core::{Error, MetricModel, RegularDoubledPolygonModel, SphereMap, Subgraph, SyntheticModel};

/// Short independent loops on hyperelliptic surfaces: simulate, prune, verify.
#[derive(Parser)]
#[command(name = "hyperbasis", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the closed-form bounds for one genus.
    Bounds {
        #[arg(long)]
        genus: u32,
        /// Add a row for this ratio (repeatable).
        #[arg(long)]
        lambda: Vec<f64>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Run the growth process and write the event log.
    Simulate {
        #[arg(long)]
        genus: Option<u32>,
        /// `regular` or a synthetic model file.
        #[arg(long, default_value = "regular")]
        model: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the arc graph as a map file.
        #[arg(long)]
        map_out: Option<PathBuf>,
    },
    /// Prune an arc graph read from a map file.
    Prune {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check whether the lift of a set of arcs is a partial homology basis.
    Verify {
        #[arg(long)]
        map: PathBuf,
        /// Comma-separated arc ids; defaults to every edge and loop.
        #[arg(long, value_delimiter = ',')]
        subset: Option<Vec<u32>>,
    },
    /// Simulate, prune, verify and compare against the bounds.
    Pipeline {
        #[arg(long)]
        genus: Option<u32>,
        #[arg(long, default_value = "regular")]
        model: String,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Verification failed.
const EXIT_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_GEOMETRY: u8 = 3;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::GeometricAssumptionViolated(_) => EXIT_GEOMETRY,
        Error::VerificationFailure(_) | Error::BoundViolation { .. } | Error::Construction(_) | Error::NotACycle(_) => {
            EXIT_FAILED
        }
        _ => EXIT_INPUT,
    }
}

fn load_model(source: &str, genus: Option<u32>) -> Result<Box<dyn MetricModel>, Error> {
    if source == "regular" {
        let g = genus.ok_or_else(|| Error::Input("--genus is required for the regular model".into()))?;
        return Ok(Box::new(RegularDoubledPolygonModel::new(g)?));
    }
    let model = SyntheticModel::from_json(&fs::read_to_string(source)?)?;
    if let Some(g) = genus {
        if g != model.genus() {
            return Err(Error::Input(format!("--genus {g} differs from the model's genus {}", model.genus())));
        }
    }
    Ok(Box::new(model))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn round7(x: f64) -> f64 {
    (x * 1e7).round() / 1e7
}

fn write_csv<T: Serialize>(rows: &[T]) -> Result<String, Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Input(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Input(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn bounds(genus: u32, lambdas: &[f64], format: Format) -> Result<u8, Error> {
    let mut table = BoundTable::new(genus)?;
    if !lambdas.is_empty() {
        table = table.with_lambdas(lambdas)?;
    }
    let text = match format {
        Format::Json => canonical::to_string_pretty(&table)?,
        Format::Csv => {
            let mut rows = table.rows.clone();
            for r in &mut rows {
                r.radius_bound = round7(r.radius_bound);
                r.alpha_bound = round7(r.alpha_bound);
                r.theorem_bound = round7(r.theorem_bound);
            }
            let mut text = write_csv(&rows)?;
            if let Some(mut lrows) = table.lambda_rows.clone() {
                for r in &mut lrows {
                    r.n = round7(r.n);
                    r.w = round7(r.w);
                    r.d = round7(r.d);
                }
                text.push('\n');
                text.push_str(&write_csv(&lrows)?);
            }
            text
        }
    };
    print!("{text}");
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Bounds { genus, lambda, format } => bounds(genus, &lambda, format),
        Command::Simulate { genus, model, out, map_out } => {
            let model = load_model(&model, genus)?;
            let log = simulate(model.as_ref())?;
            emit(&log.to_json()?, out.as_deref())?;
            if let Some(p) = map_out {
                fs::write(p, arc_graph(&log, model.as_ref())?.to_json()?)?;
            }
            Ok(match verify_radius_bounds(&log) {
                Ok(_) => 0,
                Err(e) => {
                    eprintln!("{e}");
                    EXIT_FAILED
                }
            })
        }
        Command::Prune { map, out } => {
            let map = SphereMap::from_json(&fs::read_to_string(map)?)?;
            let result = prune(&map)?;
            emit(&result.to_json()?, out.as_deref())?;
            Ok(match verify(&result, &map) {
                Ok(report) => {
                    eprintln!("kept {} arcs (kappa {}), rank {}", report.kept, report.kappa, report.cover.rank);
                    0
                }
                Err(e) => {
                    eprintln!("{e}");
                    EXIT_FAILED
                }
            })
        }
        Command::Verify { map, subset } => {
            let map = SphereMap::from_json(&fs::read_to_string(map)?)?;
            let h = match subset {
                Some(ids) => Subgraph::new(ids),
                None => map.graph_arcs(),
            };
            map.check_subgraph(&h)?;
            let parity = map.is_nonseparating(&h);
            let report = is_partial_basis(&map, &h)?;
            println!("parity test: {}", if parity { "non-separating" } else { "separating" });
            println!("cover complement components: {}", report.complement_components);
            println!("rank: {}", report.rank);
            println!("{}", if report.partial_basis { "partial basis" } else { "separating" });
            Ok(if report.partial_basis && parity { 0 } else { EXIT_FAILED })
        }
        Command::Pipeline { genus, model, lambda, out } => {
            let model = load_model(&model, genus)?;
            let (report, timings) = run_pipeline(model.as_ref(), lambda)?;
            fs::write(&out, report.to_json()?)?;
            eprintln!(
                "simulate {:?}, prune {:?}, verify {:?}, total {:?}",
                timings.simulate, timings.prune, timings.verify, timings.total
            );
            eprintln!(
                "M = {}, kept {} of kappa {}, rank {}: {}",
                report.growth.events,
                report.kept,
                report.kappa,
                report.cover.rank,
                if report.verified { "verified" } else { "FAILED" }
            );
            Ok(if report.verified { 0 } else { EXIT_FAILED })
        }
    }
}

fn main() -> ExitCode {
    // HYPERBASIS_SEEDLESS is accepted for compatibility; every run is deterministic already.
    let _ = std::env::var_os("HYPERBASIS_SEEDLESS");
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
