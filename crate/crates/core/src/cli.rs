//! The `shapes` command line: validate, generate and bench.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::bench::{run_benchmark, write_csv, BenchConfig, Engine, SchemaMode};
use crate::rdf::{parse_turtle, serialize_turtle};
use crate::shacl::{load_shacl, scope_targets};
use crate::shexc::parse_shexc_document;
use crate::validate::{parse_shape_map, validate_shacl_pairs, ShexEngine, ValidationReport};
use crate::wigen::{generate, GenConfig, ShapeKind};

#[derive(Debug, Parser)]
#[command(name = "shapes", version, about = "Validate RDF data against ShEx or SHACL shapes")]
struct Cli {
    /// Worker threads for validation; 1 validates sequentially.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a Turtle data file.
    Validate(ValidateArgs),
    /// Generate WebIndex data and its manifest.
    Generate(GenerateArgs),
    /// Time validation over a sweep of generated graphs.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long)]
    data: PathBuf,
    /// ShExC document for `shex`, Turtle shapes graph for `shacl`.
    #[arg(long)]
    schema: PathBuf,
    #[arg(long)]
    engine: Engine,
    /// `node@shape` entries separated by `;`. Required for ShEx; SHACL
    /// falls back to the shapes graph's scopes.
    #[arg(long)]
    shape_map: Option<String>,
    /// Write the per-pair results here as JSON lines instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 0)]
    countries: usize,
    #[arg(long, default_value_t = 0)]
    datasets: usize,
    #[arg(long, default_value_t = 0)]
    slices: usize,
    #[arg(long, default_value_t = 0)]
    observations: usize,
    #[arg(long, default_value_t = 0)]
    computations: usize,
    #[arg(long, default_value_t = 0)]
    indicators: usize,
    #[arg(long, default_value_t = 0)]
    organizations: usize,
    #[arg(long, default_value_t = 0)]
    invalid_country: usize,
    #[arg(long, default_value_t = 0)]
    invalid_dataset: usize,
    #[arg(long, default_value_t = 0)]
    invalid_slice: usize,
    #[arg(long, default_value_t = 0)]
    invalid_observation: usize,
    #[arg(long, default_value_t = 0)]
    invalid_computation: usize,
    #[arg(long, default_value_t = 0)]
    invalid_indicator: usize,
    #[arg(long, default_value_t = 0)]
    invalid_organization: usize,
    /// Also type countries so class scopes reach every node.
    #[arg(long)]
    typed: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    manifest: PathBuf,
}

impl GenerateArgs {
    fn config(&self) -> GenConfig {
        use ShapeKind::*;
        let mut cfg = GenConfig {
            n_countries: self.countries,
            n_datasets: self.datasets,
            n_slices: self.slices,
            n_observations: self.observations,
            n_computations: self.computations,
            n_indicators: self.indicators,
            n_organizations: self.organizations,
            typed: self.typed,
            seed: self.seed,
            ..GenConfig::default()
        };
        let invalid = [
            (Country, self.invalid_country),
            (DataSet, self.invalid_dataset),
            (Slice, self.invalid_slice),
            (Observation, self.invalid_observation),
            (Computation, self.invalid_computation),
            (Indicator, self.invalid_indicator),
            (Organization, self.invalid_organization),
        ];
        cfg.invalid = invalid.into_iter().filter(|(_, k)| *k > 0).collect();
        cfg
    }
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// countries, datasets, slices, observations, computations, indicators or organizations.
    #[arg(long)]
    axis: ShapeKind,
    #[arg(long, value_delimiter = ',', default_value = "1,5,10,50,100,500,1000")]
    values: Vec<usize>,
    #[arg(long)]
    engine: Engine,
    #[arg(long, default_value_t = SchemaMode::Recursive)]
    schema_mode: SchemaMode,
    #[arg(long)]
    inject_invalid: bool,
    #[arg(long, default_value_t = 3)]
    repetitions: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    csv: PathBuf,
}

/// A failure and the exit code it maps to.
struct Failure(i32, String);

fn usage(msg: impl std::fmt::Display) -> Failure {
    Failure(2, msg.to_string())
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write(path: &PathBuf, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn validate(args: &ValidateArgs, threads: usize) -> Result<i32, Failure> {
    let data = parse_turtle(&read(&args.data)?).map_err(|e| usage(format!("{}: {e}", args.data.display())))?;
    let schema_text = read(&args.schema)?;
    let at_schema = |e: &dyn std::fmt::Display| usage(format!("{}: {e}", args.schema.display()));
    let mut prefixes = data.prefixes().to_vec();
    let report: ValidationReport = match args.engine {
        Engine::Shex => {
            let doc = parse_shexc_document(&schema_text).map_err(|e| at_schema(&e))?;
            for w in &doc.warnings {
                eprintln!("warning: {w}");
            }
            prefixes.extend(doc.schema.prefixes.iter().cloned());
            let Some(map) = &args.shape_map else {
                return Err(usage("--shape-map is required with --engine shex"));
            };
            let pairs = parse_shape_map(map, &prefixes).map_err(usage)?;
            let engine = ShexEngine::new(&doc.schema).map_err(|e| at_schema(&e))?;
            engine.validate_shape_map_parallel(&data, &pairs, threads).map_err(usage)?
        }
        Engine::Shacl => {
            let shapes = parse_turtle(&schema_text).map_err(|e| at_schema(&e))?;
            let (schema, warnings) = load_shacl(&shapes).map_err(|e| at_schema(&e))?;
            for w in &warnings {
                eprintln!("warning: {w}");
            }
            prefixes.extend(shapes.prefixes().iter().cloned());
            let pairs = match &args.shape_map {
                Some(map) => parse_shape_map(map, &prefixes).map_err(usage)?,
                None => scope_targets(&schema, &data),
            };
            validate_shacl_pairs(&data, &schema, &pairs, threads).map_err(usage)?
        }
    };
    let lines = report.to_jsonl(&prefixes);
    match &args.report {
        Some(path) => write(path, &lines)?,
        None => print!("{lines}"),
    }
    println!("{}", report.summary());
    Ok(if report.is_conformant() { 0 } else { 1 })
}

fn generate_cmd(args: &GenerateArgs) -> Result<i32, Failure> {
    let (graph, manifest) = generate(&args.config()).map_err(usage)?;
    write(&args.out, &serialize_turtle(&graph))?;
    write(&args.manifest, &manifest.to_tsv())?;
    println!("{} triples, {} nodes, {} invalid", graph.len(), manifest.node_count(), manifest.invalid.len());
    Ok(0)
}

fn bench(args: &BenchArgs, threads: usize) -> Result<i32, Failure> {
    let b = BenchConfig {
        axis: args.axis,
        values: args.values.clone(),
        engine: args.engine,
        schema_mode: args.schema_mode,
        inject_invalid: args.inject_invalid,
        repetitions: args.repetitions,
        seed: args.seed,
        threads,
    };
    let rows = match run_benchmark(&b) {
        Ok(rows) => rows,
        Err(e @ crate::bench::BenchError::Correctness { .. }) => return Err(Failure(1, e.to_string())),
        Err(e) => return Err(usage(e)),
    };
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf).map_err(usage)?;
    write(&args.csv, &String::from_utf8(buf).expect("csv is utf-8"))?;
    for r in &rows {
        println!(
            "{}={}: {} nodes, {} nonconformant, {:.3} ms",
            r.axis, r.value, r.nodes, r.nonconformant, r.elapsed_ms
        );
    }
    Ok(0)
}

/// Runs the command line and returns the exit code: 0 on success (and full
/// conformance for `validate`), 1 when nonconformant results are present,
/// 2 on usage or input errors.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let threads = cli.threads.max(1);
    let outcome = match &cli.command {
        Command::Validate(a) => validate(a, threads),
        Command::Generate(a) => generate_cmd(a),
        Command::Bench(a) => bench(a, threads),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            code
        }
    }
}
