use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use semifrob::cli::MonoidDocument;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semifrob")).current_dir(root()).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

const GOLDEN: &[(&str, &[&str])] = &[
    ("whitney_classify", &["classify", "corpus/whitney.json"]),
    ("whitney_ratio", &["ratio", "corpus/whitney.json"]),
    ("whitney_ratio_json", &["--json", "ratio", "corpus/whitney.json"]),
    ("whitney_splitting", &["splitting", "corpus/whitney.json"]),
    ("whitney_splitting_json", &["--json", "splitting", "corpus/whitney.json"]),
    ("whitney_ideals", &["ideals", "corpus/whitney.json"]),
    ("whitney_test_ideal", &["test-ideal", "corpus/whitney.json"]),
    ("whitney_sigma", &["sigma", "corpus/whitney.json"]),
    ("whitney_hom_fail", &["hom-check", "corpus/whitney.json", "-e", "1", "-a=-1,0"]),
    ("whitney_hom_ok", &["hom-check", "corpus/whitney.json", "-e", "1", "-a=-2,0"]),
    ("whitney_hom_json", &["--json", "hom-check", "corpus/whitney.json", "-e", "1", "-a=-1,0"]),
    ("whitney_oracle", &["hom-oracle", "corpus/whitney.json", "-e", "1", "-a=-1,0"]),
    ("whitney_compose", &["compose", "corpus/whitney.json", "-a=-2,0", "--e1", "1", "-b=-2,0", "--e2", "1"]),
    ("whitney_probe", &["probe", "corpus/whitney.json", "--ideal", "test", "-e", "1"]),
    ("whitney_p2_conditions", &["--prime", "2", "hom-check", "corpus/whitney.json", "-e", "1", "-a=-1,0", "--conditions-only"]),
    ("fan4_classify", &["classify", "corpus/fan4.json"]),
    ("fan4_is_fsplit", &["is-fsplit", "corpus/fan4.json"]),
    ("fan4_conditions", &["hom-check", "corpus/fan4.json", "-e", "1", "-a=-1,0", "--conditions-only"]),
    ("fan4_ideals", &["ideals", "corpus/fan4.json"]),
    ("cube_splitting", &["splitting", "corpus/cube.json"]),
    ("cube_ideals", &["ideals", "corpus/cube.json"]),
    ("quadrant_splitting", &["splitting", "corpus/quadrant.json"]),
    ("sn_2_ratio", &["ratio", "corpus/sn_2.json"]),
    ("sn_3_ratio", &["ratio", "corpus/sn_3.json"]),
    ("sn_4_ratio", &["ratio", "corpus/sn_4.json"]),
    ("sn_5_ratio", &["ratio", "corpus/sn_5.json"]),
];

#[test]
fn golden_outputs() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut mismatches = Vec::new();
    for (name, args) in GOLDEN {
        let path = root().join("corpus/golden").join(format!("{name}.out"));
        let actual = stdout(args);
        assert_eq!(actual, stdout(args), "{name}: output differs between runs");
        if update {
            fs::write(&path, &actual).unwrap();
        } else if fs::read_to_string(&path).ok().as_deref() != Some(actual.as_str()) {
            mismatches.push(format!("{name}:\n{actual}"));
        }
    }
    assert!(mismatches.is_empty(), "golden mismatches:\n{}", mismatches.join("\n"));
}

#[test]
fn pinned_lines() {
    assert_eq!(stdout(&["ratio", "corpus/whitney.json"]), "1/2\n");
    assert_eq!(stdout(&["is-fsplit", "corpus/fan4.json"]), "false: p-face ⟨(1,0)⟩\n");
    assert_eq!(stdout(&["is-fsplit", "corpus/whitney.json"]), "true\n");
    assert_eq!(
        stdout(&["hom-check", "corpus/fan4.json", "-e", "1", "-a=-1,0", "--conditions-only"]),
        "conditions: yes; strict: LevelTooSmall (e_min=3)\n"
    );
}

#[test]
fn exit_codes() {
    let cases: &[(&[&str], i32, &str)] = &[
        (&["ratio", "corpus/fan4.json"], 1, "error[NotFSplit]"),
        (&["hom-check", "corpus/fan4.json", "-e", "1", "-a=-1,0"], 1, "error[LevelTooSmall]"),
        (&["--prime", "4", "ratio", "corpus/whitney.json"], 2, "error[NotPrime]"),
        (&["ratio", "corpus/missing.json"], 2, "error[ReadError]"),
        (&["bogus"], 2, "error[UsageError]"),
    ];
    for (args, code, prefix) in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(*code), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(err.starts_with(prefix), "{args:?}: {err}");
    }
}

#[test]
fn missing_prime_is_a_usage_error() {
    let dir = std::env::temp_dir().join(format!("semifrob-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let doc = dir.join("noprime.json");
    fs::write(&doc, r#"{"rank":2,"monoid_generators":[[2,0],[0,1],[1,1]]}"#).unwrap();
    let out = run(&["ratio", doc.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[MissingPrime]"));
    assert_eq!(stdout(&["--prime", "3", "ratio", doc.to_str().unwrap()]), "1/2\n");
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn normalized_form_round_trips() {
    let dir = std::env::temp_dir().join(format!("semifrob-norm-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    for entry in fs::read_dir(root().join("corpus")).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_none_or(|x| x != "json") {
            continue;
        }
        let original = MonoidDocument::parse(&fs::read_to_string(&path).unwrap()).unwrap();
        let normalized = stdout(&["validate", "--emit-normalized", path.to_str().unwrap()]);
        let again_path = dir.join(path.file_name().unwrap());
        fs::write(&again_path, &normalized).unwrap();
        let again = stdout(&["validate", "--emit-normalized", again_path.to_str().unwrap()]);
        assert_eq!(normalized, again, "{path:?}");
        let parsed = MonoidDocument::parse(&normalized).unwrap();
        assert_eq!(parsed.prime, original.prime);
        assert!(parsed.build().unwrap().same_monoid(&original.build().unwrap()), "{path:?}");
    }
    fs::remove_dir_all(&dir).unwrap();
}
