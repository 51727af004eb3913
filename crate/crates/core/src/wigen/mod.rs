//! Deterministic WebIndex data generator with controlled invalid nodes.
//!
//! Every reference points at a node that was generated valid, and mutated
//! nodes are never referenced, so a mutation affects only its own verdict.

mod manifest;
mod rng;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use manifest::{GenManifest, ManifestError};
pub use rng::SplitMix64;

use crate::rdf::vocab::{rdf, rdfs, standard_prefixes, wi, xsd};
use crate::rdf::{Graph, Iri, RdfTerm, Triple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ShapeKind {
    Country,
    DataSet,
    Slice,
    Observation,
    Computation,
    Indicator,
    Organization,
}

impl ShapeKind {
    pub const ALL: [ShapeKind; 7] = [
        ShapeKind::Country,
        ShapeKind::DataSet,
        ShapeKind::Slice,
        ShapeKind::Observation,
        ShapeKind::Computation,
        ShapeKind::Indicator,
        ShapeKind::Organization,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ShapeKind::Country => "Country",
            ShapeKind::DataSet => "DataSet",
            ShapeKind::Slice => "Slice",
            ShapeKind::Observation => "Observation",
            ShapeKind::Computation => "Computation",
            ShapeKind::Indicator => "Indicator",
            ShapeKind::Organization => "Organization",
        }
    }

    /// Local-name stem of generated node IRIs.
    pub fn stem(self) -> &'static str {
        match self {
            ShapeKind::Country => "country",
            ShapeKind::DataSet => "dataset",
            ShapeKind::Slice => "slice",
            ShapeKind::Observation => "obs",
            ShapeKind::Computation => "comp",
            ShapeKind::Indicator => "indicator",
            ShapeKind::Organization => "org",
        }
    }

    pub fn node(self, i: usize) -> Iri {
        Iri::new(format!("{}{}{i}", wi::EX, self.stem()))
    }

    pub fn mutation(self) -> Mutation {
        match self {
            ShapeKind::Country => Mutation::DropIso2,
            ShapeKind::DataSet => Mutation::WrongStructure,
            ShapeKind::Slice => Mutation::DropIndicator,
            ShapeKind::Observation => Mutation::SourceAndComputation,
            ShapeKind::Computation => Mutation::WrongType,
            ShapeKind::Indicator => Mutation::DropProvider,
            ShapeKind::Organization => Mutation::UndeclaredPredicate,
        }
    }
}

impl fmt::Display for ShapeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ShapeKind {
    type Err = String;

    /// Accepts the shape name or the plural CLI spelling, case-insensitively.
    fn from_str(s: &str) -> Result<Self, String> {
        let lower = s.to_ascii_lowercase();
        ShapeKind::ALL
            .into_iter()
            .find(|k| {
                let name = k.name().to_ascii_lowercase();
                lower == name || lower == k.stem() || lower == plural(*k)
            })
            .ok_or_else(|| format!("unknown shape {s:?}"))
    }
}

/// Parameter spelling: `countries`, `datasets`, ...
pub fn plural(kind: ShapeKind) -> &'static str {
    match kind {
        ShapeKind::Country => "countries",
        ShapeKind::DataSet => "datasets",
        ShapeKind::Slice => "slices",
        ShapeKind::Observation => "observations",
        ShapeKind::Computation => "computations",
        ShapeKind::Indicator => "indicators",
        ShapeKind::Organization => "organizations",
    }
}

/// One way to break a node of each shape. Each touches only the node itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mutation {
    /// Country without `wf:iso2`.
    DropIso2,
    /// DataSet whose `qb:structure` is `wf:BadDSD`.
    WrongStructure,
    /// Slice without `cex:indicator`.
    DropIndicator,
    /// Observation with both `wf:source` and `cex:computation`.
    SourceAndComputation,
    /// Computation with a second type `cex:Raw`.
    WrongType,
    /// Indicator without `wf:provider`.
    DropProvider,
    /// Organization with a `foaf:name`, which the closed shape forbids.
    UndeclaredPredicate,
}

impl Mutation {
    pub const ALL: [Mutation; 7] = [
        Mutation::DropIso2,
        Mutation::WrongStructure,
        Mutation::DropIndicator,
        Mutation::SourceAndComputation,
        Mutation::WrongType,
        Mutation::DropProvider,
        Mutation::UndeclaredPredicate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mutation::DropIso2 => "drop-iso2",
            Mutation::WrongStructure => "wrong-structure",
            Mutation::DropIndicator => "drop-indicator",
            Mutation::SourceAndComputation => "source-and-computation",
            Mutation::WrongType => "wrong-type",
            Mutation::DropProvider => "drop-provider",
            Mutation::UndeclaredPredicate => "undeclared-predicate",
        }
    }
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mutation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Mutation::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| format!("unknown mutation {s:?}"))
    }
}

pub fn mutation_catalog() -> BTreeMap<ShapeKind, Mutation> {
    ShapeKind::ALL.into_iter().map(|k| (k, k.mutation())).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenConfig {
    pub n_countries: usize,
    pub n_datasets: usize,
    pub n_slices: usize,
    pub n_observations: usize,
    pub n_computations: usize,
    pub n_indicators: usize,
    pub n_organizations: usize,
    pub invalid: BTreeMap<ShapeKind, usize>,
    pub typed: bool,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig::uniform(0)
    }
}

impl GenConfig {
    /// Every count set to `n`, nothing invalid, untyped, seed 0.
    pub fn uniform(n: usize) -> Self {
        GenConfig {
            n_countries: n,
            n_datasets: n,
            n_slices: n,
            n_observations: n,
            n_computations: n,
            n_indicators: n,
            n_organizations: n,
            invalid: BTreeMap::new(),
            typed: false,
            seed: 0,
        }
    }

    /// 80 countries, 40 datasets, 80 slices, 5000 observations,
    /// 4000 computations, 50 indicators and 4 organizations.
    pub fn realistic(seed: u64) -> Self {
        GenConfig {
            n_countries: 80,
            n_datasets: 40,
            n_slices: 80,
            n_observations: 5000,
            n_computations: 4000,
            n_indicators: 50,
            n_organizations: 4,
            seed,
            ..GenConfig::uniform(0)
        }
    }

    pub fn count(&self, kind: ShapeKind) -> usize {
        match kind {
            ShapeKind::Country => self.n_countries,
            ShapeKind::DataSet => self.n_datasets,
            ShapeKind::Slice => self.n_slices,
            ShapeKind::Observation => self.n_observations,
            ShapeKind::Computation => self.n_computations,
            ShapeKind::Indicator => self.n_indicators,
            ShapeKind::Organization => self.n_organizations,
        }
    }

    pub fn set_count(&mut self, kind: ShapeKind, n: usize) {
        let slot = match kind {
            ShapeKind::Country => &mut self.n_countries,
            ShapeKind::DataSet => &mut self.n_datasets,
            ShapeKind::Slice => &mut self.n_slices,
            ShapeKind::Observation => &mut self.n_observations,
            ShapeKind::Computation => &mut self.n_computations,
            ShapeKind::Indicator => &mut self.n_indicators,
            ShapeKind::Organization => &mut self.n_organizations,
        };
        *slot = n;
    }

    pub fn invalid_count(&self, kind: ShapeKind) -> usize {
        self.invalid.get(&kind).copied().unwrap_or(0)
    }

    pub fn valid_count(&self, kind: ShapeKind) -> usize {
        self.count(kind).saturating_sub(self.invalid_count(kind))
    }

    /// Checks that every reference the templates need has a valid target.
    pub fn check(&self) -> Result<(), GenError> {
        for kind in ShapeKind::ALL {
            let (invalid, count) = (self.invalid_count(kind), self.count(kind));
            if invalid > count {
                return Err(GenError::TooManyInvalid { shape: kind, invalid, count });
            }
        }
        use ShapeKind::*;
        let needs: [(ShapeKind, &[ShapeKind]); 4] = [
            (Observation, &[Country, DataSet, Slice, Indicator]),
            (DataSet, &[Organization]),
            (Indicator, &[Organization]),
            (Slice, &[Indicator]),
        ];
        for (kind, targets) in needs {
            if self.count(kind) == 0 {
                continue;
            }
            for &target in targets {
                if self.valid_count(target) == 0 {
                    return Err(GenError::Precondition(format!(
                        "{} {} need at least one valid {}",
                        self.count(kind),
                        plural(kind),
                        target.name()
                    )));
                }
            }
        }
        if self.invalid_count(Observation) > 0 && self.valid_count(Computation) == 0 {
            return Err(GenError::Precondition("invalid observations need at least one valid Computation".to_string()));
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("{0}")]
    Precondition(String),
    #[error("{invalid} invalid {shape} nodes requested but only {count} generated")]
    TooManyInvalid { shape: ShapeKind, invalid: usize, count: usize },
}

fn iri(ns: &str, local: &str) -> Iri {
    Iri::new(format!("{ns}{local}"))
}

fn node(ns: &str, local: &str) -> RdfTerm {
    RdfTerm::Iri(iri(ns, local))
}

struct Emitter {
    triples: Vec<Triple>,
}

impl Emitter {
    fn add(&mut self, s: &Iri, p: Iri, o: RdfTerm) {
        self.triples.push(Triple { subject: RdfTerm::Iri(s.clone()), predicate: p, object: o });
    }

    fn ty(&mut self, s: &Iri, ns: &str, class: &str) {
        self.add(s, Iri::new(rdf::TYPE), node(ns, class));
    }

    fn label(&mut self, s: &Iri, text: String) {
        self.add(s, Iri::new(rdfs::LABEL), RdfTerm::string(text));
    }
}

/// Picks uniformly from the valid indices of a shape.
fn pick(rng: &mut SplitMix64, valid: &[usize]) -> usize {
    valid[rng.below(valid.len())]
}

fn iso2(i: usize) -> String {
    let a = (b'A' + (i / 26 % 26) as u8) as char;
    let b = (b'A' + (i % 26) as u8) as char;
    format!("{a}{b}")
}

fn date_time(rng: &mut SplitMix64) -> String {
    let year = 2000 + rng.below(16);
    let month = 1 + rng.below(12);
    let day = 1 + rng.below(28);
    let (h, m, s) = (rng.below(24), rng.below(60), rng.below(60));
    format!("{year}-{month:02}-{day:02}T{h:02}:{m:02}:{s:02}")
}

/// Generates a graph for `cfg`. Node indices start at 1.
pub fn generate(cfg: &GenConfig) -> Result<(Graph, GenManifest), GenError> {
    use ShapeKind::*;
    cfg.check()?;
    let mut rng = SplitMix64::new(cfg.seed);

    let mut invalid: BTreeMap<ShapeKind, Vec<bool>> = BTreeMap::new();
    let mut valid: BTreeMap<ShapeKind, Vec<usize>> = BTreeMap::new();
    for kind in ShapeKind::ALL {
        let n = cfg.count(kind);
        let mut flags = vec![false; n];
        for i in rng.sample(n, cfg.invalid_count(kind)) {
            flags[i] = true;
        }
        valid.insert(kind, (0..n).filter(|&i| !flags[i]).collect());
        invalid.insert(kind, flags);
    }
    let bad = |kind: ShapeKind, i: usize| invalid[&kind][i];
    let ix = |kind: ShapeKind, i: usize| kind.node(i + 1);

    let mut out = Emitter { triples: Vec::new() };
    let (wf, qb, cex, dct, foaf, org) = (wi::WF, wi::QB, wi::CEX, wi::DCT, wi::FOAF, wi::ORG);

    for i in 0..cfg.n_organizations {
        let s = ix(Organization, i);
        out.ty(&s, org, "Organization");
        out.label(&s, format!("Organization {}", i + 1));
        out.add(&s, iri(foaf, "homepage"), RdfTerm::iri(format!("{}home/org{}", wi::EX, i + 1)));
        if bad(Organization, i) {
            out.add(&s, iri(foaf, "name"), RdfTerm::string(format!("Org {}", i + 1)));
        }
    }

    for i in 0..cfg.n_indicators {
        let s = ix(Indicator, i);
        let class = if rng.coin() { "PrimaryIndicator" } else { "SecondaryIndicator" };
        out.ty(&s, wf, class);
        out.label(&s, format!("Indicator {}", i + 1));
        let provider = pick(&mut rng, &valid[&Organization]);
        if !bad(Indicator, i) {
            out.add(&s, iri(wf, "provider"), RdfTerm::Iri(ix(Organization, provider)));
        }
    }

    for i in 0..cfg.n_countries {
        let s = ix(Country, i);
        if cfg.typed {
            out.ty(&s, wf, "Country");
        }
        out.label(&s, format!("Country {}", i + 1));
        if !bad(Country, i) {
            out.add(&s, iri(wf, "iso2"), RdfTerm::string(iso2(i)));
        }
    }

    for i in 0..cfg.n_computations {
        let s = ix(Computation, i);
        out.ty(&s, cex, "Computation");
        if bad(Computation, i) {
            out.ty(&s, cex, "Raw");
        }
    }

    // slice -> dataset and observation -> slice assignment, valid nodes only
    let mut slices_of: Vec<Vec<usize>> = vec![Vec::new(); cfg.n_datasets];
    let mut parent: Vec<Option<usize>> = vec![None; cfg.n_slices];
    for (i, slot) in parent.iter_mut().enumerate() {
        let s = ix(Slice, i);
        out.ty(&s, qb, "Slice");
        out.add(&s, iri(qb, "sliceStructure"), node(wf, "sliceByYear"));
        let indicator = pick(&mut rng, &valid[&Indicator]);
        if !bad(Slice, i) {
            out.add(&s, iri(cex, "indicator"), RdfTerm::Iri(ix(Indicator, indicator)));
            if !valid[&DataSet].is_empty() {
                let d = pick(&mut rng, &valid[&DataSet]);
                slices_of[d].push(i);
                *slot = Some(d);
            }
        }
    }

    for (i, slices) in slices_of.iter().enumerate() {
        let s = ix(DataSet, i);
        out.ty(&s, qb, "DataSet");
        let structure = if bad(DataSet, i) { "BadDSD" } else { "DSD" };
        out.add(&s, iri(qb, "structure"), node(wf, structure));
        out.label(&s, format!("Dataset {}", i + 1));
        let publisher = pick(&mut rng, &valid[&Organization]);
        out.add(&s, iri(dct, "publisher"), RdfTerm::Iri(ix(Organization, publisher)));
        for &slice in slices {
            out.add(&s, iri(qb, "slice"), RdfTerm::Iri(ix(Slice, slice)));
        }
    }

    let computations = &valid[&Computation];
    for i in 0..cfg.n_observations {
        let s = ix(Observation, i);
        out.ty(&s, qb, "Observation");
        out.ty(&s, wf, "Observation");
        let value = rng.unit() * 100.0;
        out.add(&s, iri(cex, "value"), RdfTerm::typed(format!("{value:.2}"), xsd::FLOAT));
        out.label(&s, format!("Observation {}", i + 1));
        let issued = date_time(&mut rng);
        out.add(&s, iri(dct, "issued"), RdfTerm::typed(issued, xsd::DATE_TIME));
        let dataset = if bad(Observation, i) {
            pick(&mut rng, &valid[&DataSet])
        } else {
            let slice = pick(&mut rng, &valid[&Slice]);
            out.add(&ix(Slice, slice), iri(qb, "observation"), RdfTerm::Iri(s.clone()));
            parent[slice].expect("valid slices have a parent when observations exist")
        };
        out.add(&s, iri(qb, "dataSet"), RdfTerm::Iri(ix(DataSet, dataset)));
        let country = pick(&mut rng, &valid[&Country]);
        out.add(&s, iri(cex, "ref-area"), RdfTerm::Iri(ix(Country, country)));
        let indicator = pick(&mut rng, &valid[&Indicator]);
        out.add(&s, iri(cex, "indicator"), RdfTerm::Iri(ix(Indicator, indicator)));
        let year = 2000 + rng.below(16);
        out.add(&s, iri(cex, "ref-year"), RdfTerm::typed(year.to_string(), xsd::G_YEAR));
        let source = RdfTerm::iri(format!("{}source/obs{}", wi::EX, i + 1));
        let computed = !computations.is_empty() && rng.coin();
        if bad(Observation, i) {
            let c = pick(&mut rng, computations);
            out.add(&s, iri(wf, "source"), source);
            out.add(&s, iri(cex, "computation"), RdfTerm::Iri(ix(Computation, c)));
        } else if computed {
            let c = pick(&mut rng, computations);
            out.add(&s, iri(cex, "computation"), RdfTerm::Iri(ix(Computation, c)));
        } else {
            out.add(&s, iri(wf, "source"), source);
        }
    }

    let mut manifest = GenManifest { seed: cfg.seed, ..Default::default() };
    for kind in ShapeKind::ALL {
        let n = cfg.count(kind);
        if n == 0 {
            continue;
        }
        manifest.nodes.insert(kind, (0..n).map(|i| ix(kind, i)).collect());
        for i in (0..n).filter(|&i| bad(kind, i)) {
            manifest.invalid.push((ix(kind, i), kind, kind.mutation()));
        }
    }
    Ok((Graph::new(out.triples, standard_prefixes()), manifest))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_config_is_empty() {
        let (g, m) = generate(&GenConfig::default()).unwrap();
        assert!(g.is_empty() && m.is_empty() && m.invalid.is_empty());
    }

    #[test]
    fn names_parse_back() {
        for k in ShapeKind::ALL {
            assert_eq!(k.name().parse::<ShapeKind>().unwrap(), k);
            assert_eq!(plural(k).parse::<ShapeKind>().unwrap(), k);
            assert_eq!(k.mutation().name().parse::<Mutation>().unwrap(), k.mutation());
        }
    }

    #[test]
    fn preconditions() {
        let mut cfg = GenConfig::uniform(0);
        cfg.n_observations = 1;
        assert!(matches!(generate(&cfg), Err(GenError::Precondition(_))));
        let mut cfg = GenConfig::uniform(1);
        cfg.invalid.insert(ShapeKind::Country, 2);
        assert!(matches!(generate(&cfg), Err(GenError::TooManyInvalid { .. })));
        cfg.invalid.insert(ShapeKind::Country, 1);
        assert!(matches!(generate(&cfg), Err(GenError::Precondition(_))));
    }
}
