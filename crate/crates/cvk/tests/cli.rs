//! End-to-end CLI tests: exit codes, output formats, and the committed
//! fixture catalog.

use std::path::PathBuf;
use std::process::Command;

fn cvk() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cvk"))
}

fn repo_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf()
}

#[test]
fn classify_fixture_exits_zero_with_schema() {
    let out = cvk()
        .args(["classify", "--input", "triangle-237"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["schema"], "cvk/1");
    assert_eq!(report["polytope_class"]["class"], "Loxodromic");
    assert_eq!(report["action"]["cocompact"]["verdict"], "True");
}

#[test]
fn classify_parabolic_marks_action_not_applicable() {
    let out = cvk().args(["classify", "--input", "tits-A~2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["polytope_class"]["class"], "Parabolic");
    assert_eq!(report["action"]["cocompact"]["verdict"], "NotApplicable");
}

#[test]
fn malformed_json_exits_two() {
    let dir = std::env::temp_dir().join("cvk-cli-test-bad");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, "{not json").unwrap();
    let out = cvk()
        .args(["classify", "--input", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_tolerances_exit_two() {
    let out = cvk()
        .args(["classify", "--input", "triangle-237", "--eps", "0.5", "--delta", "0.1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn truncate_refusal_exits_three() {
    // The cone over a Lannér triangle has a loxodromic simple apex but is
    // exactly the exceptional shape.
    let dir = std::env::temp_dir().join("cvk-cli-test-cone");
    std::fs::create_dir_all(&dir).unwrap();
    let cone = cvk::MirrorPolytope::cone_over(&cvk::MirrorPolytope::tits_simplex(
        &cvk::fixtures::triangle_237(),
    ));
    let json = serde_json::to_string(&cvk::io::polytope_to_json(&cone)).unwrap();
    let path = dir.join("cone.json");
    std::fs::write(&path, json).unwrap();
    let out = cvk()
        .args(["truncate", "--input", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn truncate_quadrilateral_emits_the_pentagon() {
    let out = cvk()
        .args(["truncate", "--input", "quad-loxodromic"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let poly: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(poly["facets"].as_array().unwrap().len(), 5);
}

#[test]
fn tile_stats_count_elements_by_length() {
    let out = cvk()
        .args(["tile", "--input", "tits-A3", "--depth", "8"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stats: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(stats["elements"], 24);
    assert_eq!(stats["closed"], true);
    let counts: Vec<u64> = stats["counts_by_length"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    assert_eq!(counts[..7], [1, 3, 5, 6, 5, 3, 1]);
}

#[test]
fn tile_svg_has_polygons_and_limit_points() {
    let out = cvk()
        .args(["tile", "--input", "triangle-237", "--depth", "5", "--format", "svg"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(svg.matches("<polygon").count() > 30);
    assert!(svg.contains("<circle"));
}

#[test]
fn tile_ply_for_dimension_three() {
    let out = cvk()
        .args(["tile", "--input", "prism-euclidean", "--depth", "3", "--format", "ply"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let ply = String::from_utf8(out.stdout).unwrap();
    assert!(ply.starts_with("ply\n"));
}

#[test]
fn tile_depth_over_cap_exits_two() {
    let out = cvk()
        .args(["tile", "--input", "tits-A3", "--depth", "15"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn limit_set_csv_is_deterministic_per_seed() {
    let run = || {
        cvk()
            .args(["limit-set", "--input", "triangle-237", "-n", "40", "--seed", "5"])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("x0,x1,x2,word"));
    assert!(text.contains("max residual to invariant quadric"));
}

#[test]
fn limit_set_on_elliptic_input_exits_three() {
    let out = cvk()
        .args(["limit-set", "--input", "tits-A3", "-n", "10"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn committed_fixture_catalog_is_current() {
    let dir = std::env::temp_dir().join(format!("cvk-fixtures-{}", std::process::id()));
    let out = cvk()
        .args(["fixtures", "--out", dir.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let committed = repo_root().join("fixtures");
    assert!(committed.is_dir(), "fixtures/ missing at the repo root");
    for entry in std::fs::read_dir(&dir).unwrap() {
        let entry = entry.unwrap();
        let name = entry.file_name();
        let generated = std::fs::read_to_string(entry.path()).unwrap();
        let checked_in = std::fs::read_to_string(committed.join(&name))
            .unwrap_or_else(|_| panic!("fixtures/{} is not committed", name.to_string_lossy()));
        assert_eq!(generated, checked_in, "fixtures/{} is stale", name.to_string_lossy());
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn classify_accepts_a_committed_fixture_file() {
    let path = repo_root().join("fixtures").join("quad-loxodromic.json");
    let out = cvk()
        .args(["classify", "--input", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["action"]["convex_cocompact"]["verdict"], "True");
    assert_eq!(report["action"]["finite_covolume"]["verdict"], "False");
}
