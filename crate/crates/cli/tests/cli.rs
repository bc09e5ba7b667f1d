use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures")
}

fn bin(name: &str) -> PathBuf {
    fixtures().join("bin").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_inlinescope"))
        .args(args)
        .env_remove("INLINESCOPE_CC")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn version_is_one_parseable_line() {
    let o = run(&["--version"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1);
    assert!(text.trim() == format!("inlinescope {} registry=isc-62.v1", env!("CARGO_PKG_VERSION")));
}

#[test]
fn ground_truth_report_and_flow() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "ground-truth",
        p(&bin("single_O2")),
        "--baseline",
        p(&bin("single_O0")),
        "--out",
        p(dir.path()),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("single_O2.report.json")).unwrap()).unwrap();
    assert_eq!(report["totals"]["functions"], 2);
    assert_eq!(report["totals"]["ratio"].as_f64(), Some(0.5));
    let flow: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("single_O2.flow.json")).unwrap()).unwrap();
    assert_eq!(flow["inlined_eliminated"], 1);
    assert_eq!(flow["not_inlined"], 1);
}

#[test]
fn reruns_overwrite_identically() {
    let dir = tempfile::tempdir().unwrap();
    let trio = bin("trio_O2.so");
    let args = ["ground-truth", p(&trio), "--out", p(dir.path())];
    assert!(run(&args).status.success());
    let first = std::fs::read(dir.path().join("trio_O2.so.report.json")).unwrap();
    assert!(run(&args).status.success());
    assert_eq!(std::fs::read(dir.path().join("trio_O2.so.report.json")).unwrap(), first);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn stdout_report_matches_library() {
    let o = run(&["ground-truth", p(&bin("trio_O2.so"))]);
    let bytes = std::fs::read(bin("trio_O2.so")).unwrap();
    let label = bin("trio_O2.so").display().to_string();
    let expected = inlinescope::ground_truth::compute_inlining_report(&bytes, &label)
        .unwrap()
        .to_json();
    assert_eq!(stdout(&o), expected);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["ground-truth", "/no/such/file"]).status.code(), Some(2));
    assert_eq!(
        run(&["ground-truth", p(&bin("single_O2_nodebug"))]).status.code(),
        Some(4)
    );

    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.elf");
    std::fs::write(&junk, b"\x7fELF garbage").unwrap();
    assert_eq!(run(&["ground-truth", p(&junk)]).status.code(), Some(4));

    let bad_json = dir.path().join("bad.json");
    std::fs::write(&bad_json, "{ nope").unwrap();
    assert_eq!(run(&["simulate", "--site", p(&bad_json)]).status.code(), Some(2));

    let bad_yaml = dir.path().join("bad.yaml");
    std::fs::write(&bad_yaml, "projects: [unclosed").unwrap();
    assert_eq!(run(&["sweep", p(&bad_yaml), "--dry-run"]).status.code(), Some(2));
}

#[test]
fn all_failed_sweep_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::create_dir(dir.path().join("src")).unwrap();
    let cfg = dir.path().join("broken.yaml");
    std::fs::write(
        &cfg,
        "toolchain: {compiler_path: /bin/false}\n\
         projects: [{name: p, source_dir: src, build_command_template: \"{CC} {FLAGS}\", artifact_glob: app}]\n\
         axes: [{name: inline-threshold, kind: {type: integer_sequence, start: 0, step: 1, count: 2}}]\n",
    )
    .unwrap();
    let o = run(&["sweep", p(&cfg), "--out", p(dir.path())]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn simulate_verdicts_are_data() {
    let dir = tempfile::tempdir().unwrap();
    let site = dir.path().join("ai.json");
    std::fs::write(&site, r#"{"callee_attrs": ["AlwaysInline"]}"#).unwrap();
    let o = run(&["simulate", "--site", p(&site), "--opt", "O0"]);
    assert!(o.status.success());
    let d: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(d["verdict"], "Always");

    let never = dir.path().join("rec.json");
    std::fs::write(&never, r#"{"callee_is_recursive": true}"#).unwrap();
    let o = run(&["simulate", "--site", p(&never)]);
    assert!(o.status.success());
    let d: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(d["verdict"], "Never");
    assert_eq!(d["params"]["inline_threshold"], 225);

    let case = fixtures().join("parity/medium_O3.site.json");
    let o = run(&["simulate", "--site", p(&case), "--profile", "clang14"]);
    let d: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        (d["opt_level"].as_str(), d["threshold"].as_i64()),
        (Some("O3"), Some(250))
    );
}

#[test]
fn sweep_dry_run_and_presets() {
    let o = run(&["sweep", p(&fixtures().join("sweep_grid.yaml")), "--dry-run"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let grid = stdout(&o);
    assert_eq!(grid.lines().count(), 6);
    assert!(grid
        .lines()
        .next()
        .unwrap()
        .starts_with("0\t-O2 -mllvm -inline-threshold=0 "));

    let o = run(&[
        "sweep",
        p(&fixtures().join("sweep_grid.yaml")),
        "--dry-run",
        "--preset",
        "extreme-coreutils-style",
    ]);
    assert!(stdout(&o).contains("-O3 -flto=full -mllvm -inline-threshold=200000"));

    let o = run(&["sweep", "--list-presets"]);
    let line = stdout(&o)
        .lines()
        .find(|l| l.starts_with("extreme-coreutils-style"))
        .unwrap()
        .to_string();
    assert!(line.contains("-O3 -flto=full -inline-threshold=200000"));
}

#[test]
fn remarks_features_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path());
    let o = run(&[
        "remarks",
        p(&fixtures().join("remarks/three_O2.stderr")),
        "--out",
        out,
        "--json",
    ]);
    assert!(o.status.success());
    let listed: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(listed["written"].as_array().unwrap().len(), 2);
    let remarks: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("three_O2.stderr.remarks.json")).unwrap())
            .unwrap();
    assert_eq!(remarks.as_array().unwrap().len(), 3);

    for l in ["corpus_O0.txt", "corpus_O2.txt"] {
        let o = run(&["features", p(&fixtures().join("listings").join(l)), "--out", out]);
        assert!(o.status.success());
    }
    let csv = std::fs::read_to_string(dir.path().join("corpus_O2.txt.features.csv")).unwrap();
    assert!(csv.lines().last().unwrap().starts_with("__binary__,"));

    let o = run(&[
        "report",
        "drift",
        p(&dir.path().join("corpus_O0.txt.features.csv")),
        p(&dir.path().join("corpus_O2.txt.features.csv")),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let drift = stdout(&o);
    assert!(drift.starts_with("index,name,median_a,median_b,gap,kept_a,kept_b\n"));
    assert_eq!(drift.lines().count(), 63);

    let sweep_csv = dir.path().join("grid.csv");
    std::fs::write(
        &sweep_csv,
        "variant_index,flags,status,total_functions,inlined,remaining,eliminated,ratio,compile_seconds,binary_bytes\n\
         0,-O2,Ok,10,5,1,4,0.5000,,100\n1,-O3,BuildFailed,,,,,,,\n2,-O3,Ok,10,7,1,6,0.7000,,90\n",
    )
    .unwrap();
    let o = run(&["report", "cdf", p(&sweep_csv), "--out", out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let cdf = std::fs::read_to_string(dir.path().join("grid.cdf.csv")).unwrap();
    assert!(cdf.starts_with("ratio,fraction\n"));
    assert!(std::fs::read_to_string(dir.path().join("cdf.svg"))
        .unwrap()
        .starts_with("<svg"));
}
