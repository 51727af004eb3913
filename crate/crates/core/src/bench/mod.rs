//! Timing sweeps over generated data: one row per axis value, each row the
//! median of several validation runs, checked against the manifest.

use std::collections::HashMap;
use std::fmt;
use std::io;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::rdf::{parse_turtle, Graph, RdfTerm};
use crate::schemas;
use crate::shacl::{load_shacl, scope_targets, ShaclSchema};
use crate::shape::ShapeLabel;
use crate::shexc::parse_shexc;
use crate::validate::{validate_shacl_pairs, ShexEngine, Status, ValidationReport};
use crate::wigen::{generate, GenConfig, GenError, GenManifest, ShapeKind};

pub const DEFAULT_VALUES: [usize; 7] = [1, 5, 10, 50, 100, 500, 1000];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Shex,
    Shacl,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Shex => "shex",
            Engine::Shacl => "shacl",
        })
    }
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "shex" => Ok(Engine::Shex),
            "shacl" => Ok(Engine::Shacl),
            _ => Err(format!("unknown engine {s:?} (shex or shacl)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemaMode {
    Recursive,
    NonRecursive,
}

impl fmt::Display for SchemaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemaMode::Recursive => "recursive",
            SchemaMode::NonRecursive => "non-recursive",
        })
    }
}

impl FromStr for SchemaMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "recursive" => Ok(SchemaMode::Recursive),
            "non-recursive" | "nonrecursive" => Ok(SchemaMode::NonRecursive),
            _ => Err(format!("unknown schema mode {s:?} (recursive or non-recursive)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchConfig {
    pub axis: ShapeKind,
    pub values: Vec<usize>,
    pub engine: Engine,
    pub schema_mode: SchemaMode,
    pub inject_invalid: bool,
    pub repetitions: usize,
    pub seed: u64,
    pub threads: usize,
}

impl BenchConfig {
    pub fn new(axis: ShapeKind, engine: Engine, schema_mode: SchemaMode) -> Self {
        BenchConfig {
            axis,
            values: DEFAULT_VALUES.to_vec(),
            engine,
            schema_mode,
            inject_invalid: false,
            repetitions: 3,
            seed: 0,
            threads: 1,
        }
    }

    /// The generator configuration for one axis value: the axis at `value`
    /// (plus one invalid node when injecting), every other count at 1.
    pub fn gen_config(&self, value: usize) -> GenConfig {
        let mut cfg = GenConfig::uniform(1);
        cfg.seed = self.seed;
        cfg.typed = self.schema_mode == SchemaMode::NonRecursive;
        if self.inject_invalid {
            cfg.set_count(self.axis, value + 1);
            cfg.invalid.insert(self.axis, 1);
        } else {
            cfg.set_count(self.axis, value);
        }
        cfg
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    #[serde(serialize_with = "plural_name")]
    pub axis: ShapeKind,
    pub value: usize,
    pub engine: Engine,
    pub schema_mode: SchemaMode,
    pub inject_invalid: bool,
    pub nodes: usize,
    pub conformant: usize,
    pub nonconformant: usize,
    pub elapsed_ms: f64,
}

fn plural_name<S: serde::Serializer>(kind: &ShapeKind, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(crate::wigen::plural(*kind))
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid benchmark configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Generate(#[from] GenError),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("{axis}={value}: {detail}")]
    Correctness { axis: ShapeKind, value: usize, detail: String },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// Either engine's schemas for one mode, parsed once per sweep.
pub struct Schemas {
    mode: SchemaMode,
    shex: ShexEngine,
    shacl: ShaclSchema,
}

impl Schemas {
    pub fn load(mode: SchemaMode) -> Result<Self, BenchError> {
        let (shexc, shacl_ttl) = match mode {
            SchemaMode::Recursive => (schemas::WEBINDEX_SHEX, schemas::WEBINDEX_SHACL),
            SchemaMode::NonRecursive => (schemas::WEBINDEX_NONREC_SHEX, schemas::WEBINDEX_NONREC_SHACL),
        };
        let err = |e: &dyn fmt::Display| BenchError::Schema(e.to_string());
        let schema = parse_shexc(shexc).map_err(|e| err(&e))?;
        let shex = ShexEngine::new(&schema).map_err(|e| err(&e))?;
        let g = parse_turtle(shacl_ttl).map_err(|e| err(&e))?;
        let (shacl, _) = load_shacl(&g).map_err(|e| err(&e))?;
        Ok(Schemas { mode, shex, shacl })
    }

    /// The pairs to validate: the manifest's template pairs for recursive
    /// schemas, the class scopes of the shapes graph otherwise.
    pub fn pairs(&self, graph: &Graph, manifest: &GenManifest) -> Vec<(RdfTerm, ShapeLabel)> {
        match self.mode {
            SchemaMode::Recursive => manifest.pairs(),
            SchemaMode::NonRecursive => scope_targets(&self.shacl, graph),
        }
    }

    pub fn validate(
        &self,
        engine: Engine,
        graph: &Graph,
        pairs: &[(RdfTerm, ShapeLabel)],
        threads: usize,
    ) -> Result<ValidationReport, BenchError> {
        match engine {
            Engine::Shex => self
                .shex
                .validate_shape_map_parallel(graph, pairs, threads)
                .map_err(|e| BenchError::Schema(e.to_string())),
            Engine::Shacl => {
                validate_shacl_pairs(graph, &self.shacl, pairs, threads).map_err(|e| BenchError::Schema(e.to_string()))
            }
        }
    }
}

/// Compares each verdict with the manifest; the pair set must be exactly
/// the manifest's.
pub fn check_report(report: &ValidationReport, manifest: &GenManifest) -> Result<(), String> {
    let mut want: HashMap<(RdfTerm, ShapeLabel), Status> =
        manifest.expected().into_iter().map(|(n, l, s)| ((n, l), s)).collect();
    for r in &report.results {
        match want.remove(&(r.node.clone(), r.shape.clone())) {
            Some(s) if s == r.status => {}
            Some(s) => return Err(format!("{}@{}: expected {s:?}, got {:?}", r.node, r.shape, r.status)),
            None => return Err(format!("{}@{} is not a generated pair", r.node, r.shape)),
        }
    }
    match want.keys().next() {
        Some((n, l)) => Err(format!("{} pairs never validated, e.g. {n}@{l}", want.len())),
        None => Ok(()),
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

pub fn run_benchmark(b: &BenchConfig) -> Result<Vec<BenchRow>, BenchError> {
    let schemas = Schemas::load(b.schema_mode)?;
    run_benchmark_with(b, &schemas)
}

/// Like [`run_benchmark`] with schemas already loaded for `b.schema_mode`.
pub fn run_benchmark_with(b: &BenchConfig, schemas: &Schemas) -> Result<Vec<BenchRow>, BenchError> {
    if b.values.is_empty() || b.values.contains(&0) {
        return Err(BenchError::Config("values must be non-empty and positive".into()));
    }
    if b.repetitions == 0 {
        return Err(BenchError::Config("repetitions must be positive".into()));
    }
    if schemas.mode != b.schema_mode {
        return Err(BenchError::Config(format!("schemas loaded for {} mode", schemas.mode)));
    }
    let mut rows = Vec::with_capacity(b.values.len());
    for &value in &b.values {
        let (graph, manifest) = generate(&b.gen_config(value))?;
        let pairs = schemas.pairs(&graph, &manifest);
        let mut times = Vec::with_capacity(b.repetitions);
        let mut last = None;
        for _ in 0..b.repetitions {
            let start = Instant::now();
            let report = schemas.validate(b.engine, &graph, &pairs, b.threads)?;
            times.push(start.elapsed().as_secs_f64() * 1e3);
            check_report(&report, &manifest).map_err(|detail| BenchError::Correctness {
                axis: b.axis,
                value,
                detail,
            })?;
            last = Some(report.stats);
        }
        let stats = last.expect("at least one repetition");
        rows.push(BenchRow {
            axis: b.axis,
            value,
            engine: b.engine,
            schema_mode: b.schema_mode,
            inject_invalid: b.inject_invalid,
            nodes: stats.nodes,
            conformant: stats.conformant,
            nonconformant: stats.nonconformant,
            elapsed_ms: median(times),
        });
    }
    Ok(rows)
}

/// Writes rows as CSV with a header line.
pub fn write_csv<W: io::Write>(rows: &[BenchRow], out: W) -> Result<(), BenchError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record([
        "axis",
        "value",
        "engine",
        "schema_mode",
        "inject_invalid",
        "nodes",
        "conformant",
        "nonconformant",
        "elapsed_ms",
    ])?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_odd_and_even() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn injected_config_keeps_one_valid_node() {
        let mut b = BenchConfig::new(ShapeKind::Country, Engine::Shex, SchemaMode::Recursive);
        b.inject_invalid = true;
        let cfg = b.gen_config(5);
        assert_eq!((cfg.n_countries, cfg.invalid_count(ShapeKind::Country), cfg.n_slices), (6, 1, 1));
    }
}
