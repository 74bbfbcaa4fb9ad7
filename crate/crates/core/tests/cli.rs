use std::process::{Command, Output};

use formclass::cli::{exit_code_for, EXIT_INVALID, EXIT_MISMATCH, EXIT_OK, EXIT_PRECISION};
use formclass::extended::GroupJson;
use formclass::golden::{verify, Golden};
use formclass::modular::{Invariant, PolyJson};
use formclass::{Error, SubgroupT};
use rug::Integer;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_formclass"))
        .args(args)
        .env_remove("FORMCLASS_PRECISION")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn reduce_command() {
    let o = run(&["reduce", "7,22,18"]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    assert!(stdout(&o).starts_with("2,2,3\n"));
    for f in ["1,0,5", "2,2,3"] {
        assert!(stdout(&run(&["reduce", f])).starts_with(&format!("{f}\n")));
    }
    let o = run(&["--format", "json", "reduce", "523,-194,18"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["reduced"]["a"], "2");
    assert_eq!(v["reduced"]["b"], "2");
    assert_eq!(run(&["reduce", "1,2"]).status.code(), Some(EXIT_INVALID));
    assert_eq!(run(&["reduce", "1,0,-5"]).status.code(), Some(EXIT_INVALID));
}

#[test]
fn classgroup_command() {
    let g = |d: &str| -> GroupJson {
        let o = run(&["--format", "json", "classgroup", "--d", d]);
        assert_eq!(o.status.code(), Some(EXIT_OK));
        serde_json::from_slice(&o.stdout).unwrap()
    };
    let g20 = g("-20");
    assert_eq!(g20.reps.len(), 2);
    assert_eq!(g20.table, vec![vec![0, 1], vec![1, 0]]);
    assert_eq!(g("-3").reps.len(), 1);
    let g23 = g("-23");
    assert_eq!(g23.reps.len(), 3);
    // Cyclic of order 3: a non-identity element generates.
    let e = g23.identity_index;
    let x = (e + 1) % 3;
    assert_ne!(g23.table[x][x], e);
    assert_eq!(
        run(&["classgroup", "--d", "-21"]).status.code(),
        Some(EXIT_INVALID)
    );
    assert_eq!(
        run(&["classgroup", "--d", "-80"]).status.code(),
        Some(EXIT_INVALID)
    );
}

#[test]
fn extgroup_command() {
    let order = |args: &[&str]| -> usize {
        let mut all = vec!["--format", "json", "extgroup"];
        all.extend_from_slice(args);
        let o = run(&all);
        assert_eq!(o.status.code(), Some(EXIT_OK), "{args:?}");
        let g: GroupJson = serde_json::from_slice(&o.stdout).unwrap();
        g.reps.len()
    };
    assert_eq!(order(&["--d", "-20", "--N", "12", "--T", "full"]), 16);
    assert_eq!(order(&["--d", "-20", "--N", "12", "--T", "1,5,7,11"]), 16);
    assert_eq!(order(&["--d", "-20", "--N", "1"]), 2);
    assert_eq!(order(&["--d", "-20", "--N", "12", "--T", "one"]), 32);
    let bad = run(&["extgroup", "--d", "-20", "--N", "12", "--T", "1,5,7"]);
    assert_eq!(bad.status.code(), Some(EXIT_INVALID));
    assert!(!bad.stderr.is_empty());

    let csv = run(&["--format", "csv", "extgroup", "--d", "-20", "--N", "12"]);
    let mut reader = csv::Reader::from_reader(csv.stdout.as_slice());
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        ["index", "a", "b", "c", "inverse_index"]
    );
    assert_eq!(reader.records().count(), 16);
}

#[test]
fn classpoly_command() {
    let poly = |extra: &[&str], env: Option<&str>| -> PolyJson {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_formclass"));
        cmd.args(["--format", "json", "classpoly", "--d", "-20", "--N", "12"])
            .args(extra);
        match env {
            Some(p) => cmd.env("FORMCLASS_PRECISION", p),
            None => cmd.env_remove("FORMCLASS_PRECISION"),
        };
        let o = cmd.output().unwrap();
        assert_eq!(o.status.code(), Some(EXIT_OK));
        serde_json::from_slice(&o.stdout).unwrap()
    };
    let golden = Golden::example().class_polynomial;
    let p = poly(&[], None);
    assert_eq!(p.degree, 16);
    assert_eq!(p.precision_bits, 512);
    assert_eq!(p.coefficients, golden);
    let p = poly(&["--precision", "1024"], None);
    assert_eq!(p.coefficients, golden);
    let p = poly(&[], Some("768"));
    assert_eq!(p.precision_bits, 768);
    assert_eq!(p.coefficients, golden);
    let s = poly(&["--invariant", "siegel"], None);
    assert_eq!(
        s.coefficients[1],
        "-4074358963317658037659497738339549184"
            .parse::<Integer>()
            .unwrap()
    );

    let text = stdout(&run(&["classpoly", "--d", "-20", "--N", "12"]));
    assert!(text.starts_with("x^16 + 1251968x^15 - 14929949056x^14"));
    assert!(text.trim_end().ends_with("- 1597177179712x + 1"));
    assert_eq!(
        run(&["classpoly", "--d", "-20", "--N", "12", "--precision", "32"])
            .status
            .code(),
        Some(EXIT_INVALID)
    );
    assert_eq!(
        run(&["classpoly", "--d", "-20", "--invariant", "j"])
            .status
            .code(),
        Some(EXIT_INVALID)
    );
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("group.json");
    let o = run(&[
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
        "extgroup",
        "--d",
        "-15",
        "--N",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    assert!(o.stdout.is_empty());
    let g: GroupJson = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(g.reps.len(), 4);
}

#[test]
fn commands_are_deterministic() {
    let args = [
        "--format", "json", "extgroup", "--d", "-20", "--N", "12", "--T", "one",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn verify_example_command() {
    let o = run(&["verify-example"]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    assert!(stdout(&o).ends_with("verify-example: PASS\n"));
    let o = run(&["verify-example", "--T", "one"]);
    assert_eq!(o.status.code(), Some(EXIT_MISMATCH));
    assert!(stdout(&o).contains("FAIL representatives: 32 classes, expected 16"));
    let o = run(&["--format", "json", "verify-example"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 4);
}

#[test]
fn verify_flags_a_corrupted_coefficient() {
    let mut golden = Golden::example();
    golden.class_polynomial[16] += 1;
    let t = SubgroupT::parse(&golden.t, golden.n.clone()).unwrap();
    let report = verify(&golden, &t, &Invariant::weber(), 512).unwrap();
    assert!(!report.passed);
    let poly = report
        .checks
        .iter()
        .find(|c| c.name == "class polynomial")
        .unwrap();
    assert!(!poly.passed);
    assert!(poly.detail.contains("coefficient 16: got 1, expected 2"));
    assert!(report
        .checks
        .iter()
        .filter(|c| c.name != "class polynomial")
        .all(|c| c.passed));
}

#[test]
fn sign_symmetric_subgroup_still_verifies() {
    // {1, 5} and {1, 5, 7, 11} differ only by -1, a unit, so they define the same group.
    let o = run(&["verify-example", "--T", "1,5"]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let o = run(&["verify-example", "--T", "1,11"]);
    assert_eq!(o.status.code(), Some(EXIT_MISMATCH));
}

#[test]
fn exit_code_mapping() {
    assert_eq!(
        exit_code_for(&Error::PrecisionExhausted {
            bits: 64,
            residual: 1.0
        }),
        EXIT_PRECISION
    );
    assert_eq!(exit_code_for(&Error::Parse("x".into())), EXIT_INVALID);
    assert_eq!(
        run(&["extgroup", "--d", "-20", "--N", "0"]).status.code(),
        Some(EXIT_INVALID)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(EXIT_INVALID));
}
