use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cusco_core::cli::{self, parse_spec, serialize, Entity, Options, SpecDoc};
use cusco_core::corpus::{Corpus, MapKind};
use cusco_core::rat::parse_rat;
use proptest::prelude::*;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn cusco(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cusco")).args(args).output().expect("run cusco")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn with_file(file: &str, rest: &[&str]) -> Output {
    let path = fixture(file);
    let mut args: Vec<&str> = vec![rest[0], path.to_str().unwrap()];
    args.extend(&rest[1..]);
    cusco(&args)
}

#[test]
fn jump_is_hyperplane_minimal_but_not_qc() {
    let o = with_file("jump.sv", &["check-hpmin", "f"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("hyperplane minimal: true; quasicontinuous: false"));
    let o = with_file("jump.sv", &["check-qc", "f"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn blowup_cluster_set() {
    let o = with_file("blowup.sv", &["csc", "f", "--at", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "[0, +inf)");
    let o = with_file("blowup.sv", &["check-subcont", "f"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn constant_map_samples() {
    let o = with_file("const_map.sv", &["sample", "F", "--step", "1/4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "x,lo,hi");
    assert_eq!(rows.len(), 6);
    assert!(rows[1..].iter().all(|r| r.ends_with(",0,1")));
}

#[test]
fn rejected_construction_exits_one() {
    let o = with_file("jump.sv", &["construct-min-cusco", "f"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("rejected"));
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(with_file("const_map.sv", &["check-qc", "missing"]).status.code(), Some(2));
    assert_eq!(with_file("const_map.sv", &["check-qc", "F"]).status.code(), Some(2));
    assert_eq!(with_file("const_map.sv", &["sample", "F", "--step", "0"]).status.code(), Some(2));
    assert_eq!(cusco(&["check-qc", "/nonexistent.sv", "f"]).status.code(), Some(2));
    assert_eq!(cusco(&["csc"]).status.code(), Some(2));

    let dir = std::env::temp_dir().join(format!("cusco-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.sv");
    std::fs::write(&bad, "function f\n  breakpoints 1 0\n  affine 0 0\n  at 0 = 0\n  at 1 = 0\nend\n").unwrap();
    let o = cusco(&["check-qc", bad.to_str().unwrap(), "f"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    std::fs::write(&bad, "").unwrap();
    let o = cusco(&["check-qc", bad.to_str().unwrap(), "f"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("no entities"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn json_reports_parse() {
    let o = with_file("jump.sv", &["check-qc", "--json", "f"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["exit_code"], 1);
    assert_eq!(v["verdict"]["holds"], false);
    assert_eq!(v["verdict"]["witnesses"][0]["point"], "0");
}

#[test]
fn subdifferential_output_reparses() {
    let o = with_file("const_map.sv", &["subdiff", "g"]);
    assert_eq!(o.status.code(), Some(0));
    let doc = parse_spec(&stdout(&o)).unwrap();
    assert!(matches!(doc.get("g_subdiff"), Some(Entity::Map(_))));
    let o = with_file("const_map.sv", &["within-min-cusco", "F", "--variant", "sup"]);
    assert!(parse_spec(&stdout(&o)).is_ok());
}

fn corpus_doc(seed: u64) -> SpecDoc {
    let mut c = Corpus::new(seed);
    let mut doc = SpecDoc::default();
    doc.push("f", Entity::Function(c.function()));
    doc.push("q", Entity::Function(c.qc_function()));
    doc.push("m", Entity::Map(c.convex_map(MapKind::Broken)));
    doc.push("u", Entity::Map(c.multi_band_map(seed.is_multiple_of(2))));
    doc.push("c", Entity::Curve(c.curve()));
    doc.push("g", Entity::Convex(c.convex_pw_affine()));
    doc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parse_inverts_serialize(seed in any::<u64>()) {
        let doc = corpus_doc(seed);
        let text: String = doc.entities().iter().map(|(n, e)| serialize(n, e)).collect();
        prop_assert_eq!(parse_spec(&text).unwrap(), doc);
    }

    #[test]
    fn exit_codes_follow_verdicts(seed in any::<u64>()) {
        let doc = corpus_doc(seed);
        let opts = Options { step: Some(parse_rat("1/4").unwrap()), ..Options::default() };
        for (name, _) in doc.entities() {
            for command in [cli::Command::CheckQc, cli::Command::CheckHpmin, cli::Command::CheckUsco,
                            cli::Command::CheckMinCusco, cli::Command::ConstructMinCusco,
                            cli::Command::WithinMinCusco, cli::Command::Sample] {
                match cli::run(command, &doc, name, &opts) {
                    Ok(r) => match &r.verdict {
                        Some(v) => prop_assert_eq!(r.exit_code, if v.holds { 0 } else { 1 }),
                        None => prop_assert_eq!(r.exit_code, 0),
                    },
                    Err(cli::UsageError::WrongKind { .. }) => {}
                    Err(e) => prop_assert!(false, "{}", e),
                }
            }
        }
    }

    #[test]
    fn sampled_maps_have_ordered_bounds(seed in any::<u64>()) {
        let doc = corpus_doc(seed);
        let step = parse_rat("1/8").unwrap();
        for name in ["m", "u"] {
            let csv = cli::sample(doc.get(name).unwrap(), &step).unwrap();
            for row in csv.lines().skip(1) {
                let cols: Vec<&str> = row.split(',').collect();
                prop_assert!(parse_rat(cols[1]).unwrap() <= parse_rat(cols[2]).unwrap(), "{}", row);
            }
        }
    }

    #[test]
    fn sampled_minimal_cusco_is_single_valued_off_breakpoints(seed in any::<u64>()) {
        let f = Corpus::new(seed).qc_function();
        let map = cusco_core::minimal::minimal_cusco_from(&f).unwrap();
        let breakpoints = map.breakpoints().to_vec();
        let csv = cli::sample(&Entity::Map(map), &parse_rat("1/8").unwrap()).unwrap();
        for row in csv.lines().skip(1) {
            let cols: Vec<&str> = row.split(',').collect();
            let (x, lo, hi) = (parse_rat(cols[0]).unwrap(), parse_rat(cols[1]).unwrap(), parse_rat(cols[2]).unwrap());
            prop_assert!(lo <= hi, "{}", row);
            if !breakpoints.contains(&x) {
                prop_assert_eq!(lo, hi, "{}", row);
            }
        }
    }
}
