mod common;

use common::*;
use proptest::prelude::*;
use shapes_core::rdf::vocab::wi;
use shapes_core::rdf::{parse_turtle, serialize_turtle, Iri, RdfTerm};
use shapes_core::validate::{validate_shacl_pairs, validate_shape_map, Status};
use shapes_core::wigen::{generate, mutation_catalog, GenConfig, GenManifest, Mutation, ShapeKind};

fn one_invalid(kind: ShapeKind) -> GenConfig {
    let mut cfg = GenConfig::uniform(1);
    cfg.set_count(kind, 2);
    cfg.invalid.insert(kind, 1);
    cfg.seed = 11;
    cfg
}

#[test]
fn unit_config_has_template_arity_and_conforms() {
    let (g, m) = generate(&GenConfig::uniform(1)).unwrap();
    // country 2, organization 3, indicator 3, computation 1,
    // slice 3 + 1 observation link, dataset 4 + 1 slice link, observation 10
    assert_eq!(g.len(), 2 + 3 + 3 + 1 + 4 + 5 + 10);
    assert_eq!(m.node_count(), 7);
    let bad = manifest_mismatches(&g, &m, &shex(), &shacl());
    assert!(bad.is_empty(), "{bad:#?}");
}

#[test]
fn each_mutation_breaks_only_its_node() {
    for (kind, mutation) in mutation_catalog() {
        let (g, m) = generate(&one_invalid(kind)).unwrap();
        assert_eq!(m.invalid.len(), 1);
        assert_eq!((m.invalid[0].1, m.invalid[0].2), (kind, mutation));
        let bad = manifest_mismatches(&g, &m, &shex(), &shacl());
        assert!(bad.is_empty(), "{kind}: {bad:#?}");
    }
}

#[test]
fn observation_mutation_violates_the_exclusive_or() {
    let (g, m) = generate(&one_invalid(ShapeKind::Observation)).unwrap();
    let node = RdfTerm::Iri(m.invalid[0].0.clone());
    let pair = [(node, ShapeKind::Observation.label())];
    let a = validate_shape_map(&g, &shex(), &pair).unwrap();
    let b = validate_shacl_pairs(&g, &shacl(), &pair, 1).unwrap();
    let shex_paths = a.results[0].reason_paths().join("\n");
    let shacl_paths = b.results[0].reason_paths().join("\n");
    assert!(shex_paths.contains("wf:source") || shex_paths.contains("cex:computation"), "{shex_paths}");
    assert!(shex_paths.contains("only one of"), "{shex_paths}");
    assert!(shacl_paths.to_lowercase().contains("not"), "{shacl_paths}");
    assert_eq!((a.results[0].status, b.results[0].status), (Status::Nonconformant, Status::Nonconformant));
}

#[test]
fn generation_is_deterministic_and_round_trips() {
    let mut cfg = GenConfig::uniform(5);
    cfg.invalid.insert(ShapeKind::Country, 2);
    cfg.seed = 99;
    let (g1, m1) = generate(&cfg).unwrap();
    let (g2, m2) = generate(&cfg).unwrap();
    let text = serialize_turtle(&g1);
    assert_eq!(text, serialize_turtle(&g2));
    assert_eq!(m1, m2);
    assert_eq!(parse_turtle(&text).unwrap(), g1);
    cfg.seed = 100;
    assert_ne!(serialize_turtle(&generate(&cfg).unwrap().0), text);
}

#[test]
fn manifest_tsv_round_trips() {
    let mut cfg = GenConfig::uniform(3);
    cfg.invalid.insert(ShapeKind::Organization, 1);
    cfg.invalid.insert(ShapeKind::Slice, 2);
    cfg.seed = 5;
    let (_, m) = generate(&cfg).unwrap();
    let tsv = m.to_tsv();
    assert!(tsv.starts_with("# seed=5\n"));
    assert_eq!(tsv.lines().filter(|l| l.ends_with("\tundeclared-predicate")).count(), 1);
    assert_eq!(GenManifest::from_tsv(&tsv).unwrap(), m);
    assert!(GenManifest::from_tsv("Country\tx\tvalid").is_err());
}

#[test]
fn realistic_preset_counts() {
    let (g, m) = generate(&GenConfig::realistic(1)).unwrap();
    let got: Vec<usize> = ShapeKind::ALL.iter().map(|k| m.count(*k)).collect();
    assert_eq!(got, vec![80, 40, 80, 5000, 4000, 50, 4]);
    for iris in m.nodes.values() {
        for iri in iris {
            assert!(!g.triples_out(&RdfTerm::Iri(iri.clone())).is_empty(), "{iri}");
        }
    }
}

#[test]
fn single_country_collects_every_ref_area() {
    let mut cfg = GenConfig::uniform(1);
    cfg.n_observations = 17;
    let (g, _) = generate(&cfg).unwrap();
    let country = RdfTerm::Iri(ShapeKind::Country.node(1));
    let area = Iri::new(format!("{}ref-area", wi::CEX));
    assert_eq!(g.subjects_for(&area, &country).len(), 17);
}

#[test]
fn dataset_degree_matches_its_slices() {
    let mut cfg = GenConfig::uniform(4);
    cfg.n_slices = 12;
    cfg.seed = 3;
    let (g, m) = generate(&cfg).unwrap();
    let slice_p = Iri::new(format!("{}slice", wi::QB));
    let mut linked = 0;
    for ds in &m.nodes[&ShapeKind::DataSet] {
        let ds = RdfTerm::Iri(ds.clone());
        let slices = g.values_for(&ds, &slice_p).len();
        assert_eq!(g.triples_out(&ds).len(), 4 + slices);
        linked += slices;
    }
    assert_eq!(linked, 12);
}

#[test]
fn typed_mode_only_adds_country_types() {
    let cfg = GenConfig { typed: true, ..GenConfig::uniform(2) };
    let (typed, _) = generate(&cfg).unwrap();
    let (plain, _) = generate(&GenConfig::uniform(2)).unwrap();
    assert_eq!(typed.len(), plain.len() + 2);
}

#[test]
fn mutation_names_are_stable() {
    let names: Vec<&str> = mutation_catalog().values().map(|m| m.name()).collect();
    assert_eq!(names.len(), 7);
    assert_eq!(mutation_catalog()[&ShapeKind::Observation], Mutation::SourceAndComputation);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn random_configs_inject_exactly(cfg in gen_config(12)) {
        let (g, m) = generate(&cfg).unwrap();
        let injected: usize = cfg.invalid.values().sum();
        prop_assert_eq!(m.invalid.len(), injected);
        let bad = manifest_mismatches(&g, &m, &shex(), &shacl());
        prop_assert!(bad.is_empty(), "{:#?}", bad);
    }
}
