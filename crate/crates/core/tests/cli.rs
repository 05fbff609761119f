//! Runs the binary on every shipped example and compares against the files
//! in `tests/golden`. Set `TORIFIC_BLESS=1` to rewrite them.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const GOLDEN: &[(&str, &[&str])] = &[
    ("embed_pi", &["embed", "--example", "pi"]),
    ("verify_pi", &["verify", "--example", "pi"]),
    ("embed_cusp", &["embed", "--example", "cusp"]),
    ("verify_cusp", &["verify", "--example", "cusp"]),
    ("embed_branch", &["embed", "--example", "branch-4-6-13"]),
    ("verify_branch", &["verify", "--example", "branch-4-6-13"]),
    (
        "artin_schreier_2",
        &["verify", "--example", "artin-schreier", "--p", "2"],
    ),
    (
        "artin_schreier_3",
        &["verify", "--example", "artin-schreier", "--p", "3"],
    ),
    (
        "semigroup_branch",
        &["semigroup", "--example", "branch-4-6-13"],
    ),
    ("tower", &["tower", "--example", "tower"]),
    ("fan_pi", &["fan", "--example", "pi"]),
    ("fan_cusp", &["fan", "--example", "cusp"]),
    ("fan_branch", &["fan", "--example", "branch-4-6-13"]),
    (
        "jacobi_perron",
        &[
            "fan",
            "--jacobi-perron",
            "--weights",
            "1,pi",
            "--steps",
            "3",
        ],
    ),
];

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torific"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// A fresh scratch directory under the target directory.
fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn golden_outputs() {
    let bless = std::env::var_os("TORIFIC_BLESS").is_some();
    let mut mismatched = Vec::new();
    for (name, args) in GOLDEN {
        let out = run(args);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{name}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let path = golden_dir().join(format!("{name}.json"));
        if bless {
            fs::write(&path, &out.stdout).unwrap();
            continue;
        }
        let expected =
            fs::read(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
        if expected != out.stdout {
            mismatched.push(*name);
        }
    }
    assert!(
        mismatched.is_empty(),
        "output differs from golden files: {mismatched:?}"
    );
}

#[test]
fn reruns_are_byte_identical() {
    for args in [
        &["verify", "--example", "pi"][..],
        &["fan", "--example", "branch-4-6-13"],
        &["tower", "--example", "tower"],
    ] {
        let (a, b) = (run(args), run(args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn output_flag_writes_the_report() {
    let path = scratch("output_flag").join("cusp.json");
    let out = run(&[
        "--output",
        path.to_str().unwrap(),
        "embed",
        "--example",
        "cusp",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        fs::read(&path).unwrap(),
        run(&["embed", "--example", "cusp"]).stdout
    );
}

#[test]
fn verification_failure_exits_1() {
    let dir = scratch("audit_quadrant");
    let fan = dir.join("quadrant.json");
    fs::write(&fan, r#"{"b":2,"cones":[[[1,0],[0,1]]]}"#).unwrap();
    let out = run(&["fan", "--audit", fan.to_str().unwrap(), "--example", "cusp"]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["audit"]["constraints_compatible"], false);
}

#[test]
fn input_errors_exit_2() {
    let dir = scratch("malformed");
    let garbage = dir.join("garbage.json");
    fs::write(&garbage, "not json").unwrap();
    let singular = dir.join("singular.json");
    fs::write(&singular, r#"{"b":2,"cones":[[[1,0],[1,2]]]}"#).unwrap();
    let g = garbage.to_str().unwrap();
    let s = singular.to_str().unwrap();
    let cases: &[&[&str]] = &[
        &["embed", "--example", "pi", "--fan", g],
        &["embed", "--example", "cusp", "--fan", s],
        &["embed", g],
        &["embed", "--example", "nope"],
        &["embed", "--example", "pi", "--cutoff", "ten"],
        &["semigroup"],
        &["tower", "--terms", "7/4,3/2"],
        &["bogus-subcommand"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(out.stdout.is_empty(), "{args:?} printed a report");
    }
}

#[test]
fn resource_caps_exit_3() {
    let cases: &[&[&str]] = &[
        &["fan", "--b", "5"],
        &[
            "embed",
            "--example",
            "branch-4-6-13",
            "--auto-subdivide",
            "--max-stellar-steps",
            "2",
        ],
        &[
            "embed",
            "--example",
            "pi",
            "--precision-ceiling",
            "8",
            "--cutoff",
            "355-113pi",
        ],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(
            out.status.code(),
            Some(3),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}
