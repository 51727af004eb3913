use std::fs;
use std::path::Path;

use shapes_core::cli::cli_main;
use shapes_core::schemas;
use shapes_core::wigen::GenManifest;

fn run(args: &[&str]) -> i32 {
    cli_main(std::iter::once("shapes").chain(args.iter().copied()))
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

fn write_schemas(dir: &Path) -> (String, String) {
    let (shex, shacl) = (p(dir, "wi.shex"), p(dir, "wi.ttl"));
    fs::write(&shex, schemas::WEBINDEX_SHEX).unwrap();
    fs::write(&shacl, schemas::WEBINDEX_SHACL).unwrap();
    (shex, shacl)
}

fn generate(dir: &Path, extra: &[&str]) -> (String, String) {
    let (data, manifest) = (p(dir, "data.ttl"), p(dir, "manifest.tsv"));
    let mut args = vec!["generate"];
    for flag in
        ["--countries", "--datasets", "--slices", "--observations", "--computations", "--indicators", "--organizations"]
    {
        args.extend([flag, "3"]);
    }
    args.extend(["--seed", "7", "--out", &data, "--manifest", &manifest]);
    args.extend(extra);
    assert_eq!(run(&args), 0);
    (data, manifest)
}

fn shape_map(manifest: &str) -> String {
    let m = GenManifest::from_tsv(&fs::read_to_string(manifest).unwrap()).unwrap();
    m.pairs().iter().map(|(n, l)| format!("{n}@{l}")).collect::<Vec<_>>().join(";")
}

#[test]
fn validate_generated_data_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let (shex, shacl) = write_schemas(dir.path());
    let (data, manifest) = generate(dir.path(), &[]);
    let map = shape_map(&manifest);
    let report = p(dir.path(), "report.jsonl");
    assert_eq!(
        run(&[
            "validate",
            "--data",
            &data,
            "--schema",
            &shex,
            "--engine",
            "shex",
            "--shape-map",
            &map,
            "--report",
            &report
        ]),
        0
    );
    assert_eq!(fs::read_to_string(&report).unwrap().lines().count(), 21);
    assert_eq!(
        run(&[
            "--threads",
            "2",
            "validate",
            "--data",
            &data,
            "--schema",
            &shacl,
            "--engine",
            "shacl",
            "--shape-map",
            &map
        ]),
        0
    );
}

#[test]
fn invalid_nodes_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let (shex, _) = write_schemas(dir.path());
    let (data, manifest) = generate(dir.path(), &["--invalid-country", "1"]);
    let map = shape_map(&manifest);
    assert_eq!(run(&["validate", "--data", &data, "--schema", &shex, "--engine", "shex", "--shape-map", &map]), 1);
    assert!(fs::read_to_string(&manifest).unwrap().contains("\tinvalid\tdrop-iso2"));
}

#[test]
fn shacl_without_map_uses_scopes() {
    let dir = tempfile::tempdir().unwrap();
    let shapes = p(dir.path(), "nonrec.ttl");
    fs::write(&shapes, schemas::WEBINDEX_NONREC_SHACL).unwrap();
    let (data, _) = generate(dir.path(), &["--typed"]);
    let report = p(dir.path(), "r.jsonl");
    assert_eq!(run(&["validate", "--data", &data, "--schema", &shapes, "--engine", "shacl", "--report", &report]), 0);
    assert_eq!(fs::read_to_string(&report).unwrap().lines().count(), 21);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let (shex, _) = write_schemas(dir.path());
    assert_eq!(run(&["frobnicate"]), 2);
    assert_eq!(
        run(&[
            "validate",
            "--data",
            "/nonexistent.ttl",
            "--schema",
            &shex,
            "--engine",
            "shex",
            "--shape-map",
            ":a@:Country"
        ]),
        2
    );
    let bad = p(dir.path(), "bad.ttl");
    fs::write(&bad, "<http://x/a> <http://x/p> .").unwrap();
    assert_eq!(
        run(&["validate", "--data", &bad, "--schema", &shex, "--engine", "shex", "--shape-map", ":a@:Country"]),
        2
    );
    let (data, _) = generate(dir.path(), &[]);
    // ShEx needs a shape map; unknown shapes are usage errors
    assert_eq!(run(&["validate", "--data", &data, "--schema", &shex, "--engine", "shex"]), 2);
    assert_eq!(
        run(&["validate", "--data", &data, "--schema", &shex, "--engine", "shex", "--shape-map", ":country1@:Nope"]),
        2
    );
    assert_eq!(run(&["generate", "--observations", "1", "--out", &data, "--manifest", &p(dir.path(), "m")]), 2);
    assert_eq!(run(&["validate", "--data", &data, "--schema", &shex, "--engine", "owl"]), 2);
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = p(dir.path(), "out.csv");
    let args = [
        "bench",
        "--axis",
        "countries",
        "--values",
        "1,5",
        "--engine",
        "shacl",
        "--inject-invalid",
        "--repetitions",
        "1",
        "--csv",
        &csv,
    ];
    assert_eq!(run(&args), 0);
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "axis,value,engine,schema_mode,inject_invalid,nodes,conformant,nonconformant,elapsed_ms");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("countries,1,shacl,recursive,true,8,7,1,"), "{}", lines[1]);
    assert!(lines[2].starts_with("countries,5,shacl,recursive,true,12,11,1,"), "{}", lines[2]);
}
