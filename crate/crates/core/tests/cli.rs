use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;

use lcs_verify::cli::anchors::ANCHORS;
use lcs_verify::cli::{run, run_resolved, RunConfig, Section, Status};
use lcs_verify::fbc::FbcGroup;
use lcs_verify::lcs::{Engine, EngineConfig};
use lcs_verify::Error;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn lcs(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lcs"))
        .args(args)
        .env_remove("LCS_CLASS_CAP")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn tamper_fixture_exits_one() {
    let path = fixture("tamper.json");
    let (code, stdout, _) = lcs(&["report", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["verdict"], "fail");
    assert_eq!(v["counts"]["fail"], 1);
}

#[test]
fn malformed_configs_exit_two() {
    for name in ["malformed.json", "unknown_section.json", "missing.json"] {
        let path = fixture(name);
        let (code, stdout, stderr) = lcs(&["report", "--config", path.to_str().unwrap()]);
        assert_eq!(code, 2, "{name}");
        assert!(stdout.is_empty());
        assert!(stderr.contains("config error"), "{stderr}");
    }
    let (code, _, stderr) = lcs(&["norms", "--max-norm", "0"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("caps.norm_max"));
    let (code, _, _) = lcs(&["norms", "--preset", "nope"]);
    assert_eq!(code, 2);
}

#[test]
fn subcommands_select_one_section() {
    let (code, stdout, _) = lcs(&["homology", "--format", "text"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("[homology]"));
    assert!(!stdout.contains("[norms]"));
    assert!(stdout.contains("verdict: PASS"));
}

#[test]
fn env_overrides_caps() {
    let out = Command::new(env!("CARGO_BIN_EXE_lcs"))
        .args(["witnesses"])
        .env("LCS_WITNESS_MAX", "2")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["caps"]["witness_max"], 2);
    assert_eq!(v["sections"][0]["entries"][0]["data"].as_array().unwrap().len(), 2);
}

#[test]
fn out_flag_writes_identical_payloads() {
    let dir = std::env::temp_dir().join(format!("lcs-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (a, b) = (dir.join("a.json"), dir.join("b.json"));
    for p in [&a, &b] {
        let (code, _, _) = lcs(&["lcs", "--max-class", "5", "--out", p.to_str().unwrap()]);
        assert_eq!(code, 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&a).unwrap()).unwrap();
    assert!(v.get("durations_ms").is_none());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn custom_group_fixture_passes() {
    let text = std::fs::read_to_string(fixture("custom.json")).unwrap();
    let report = run(&RunConfig::from_json(&text).unwrap()).unwrap();
    assert!(report.passed(), "{}", report.render_text());
    let graded = report.entry(Section::Lcs, "graded quotients, n = 1..3").unwrap();
    assert_eq!(graded.data[1]["quotient"], "Z/2");
    let id = report.entry(Section::Identities, "t-conjugation").unwrap();
    assert_eq!(id.status, Status::Pass);
}

#[test]
fn matrix_only_fixture_runs_matrix_sections() {
    let text = std::fs::read_to_string(fixture("matrix_only.json")).unwrap();
    let report = run(&RunConfig::from_json(&text).unwrap()).unwrap();
    assert!(report.passed(), "{}", report.render_text());
    let sections: Vec<Section> = report.sections.iter().map(|s| s.section).collect();
    assert_eq!(
        sections,
        [Section::Module, Section::Tensor, Section::Lie, Section::Norms, Section::Homology]
    );
    let e = report
        .entry(Section::Module, "subset products of eigenvalues of A - I")
        .unwrap();
    assert_eq!(e.data["residually_nilpotent"], false);
}

#[test]
fn config_errors_are_not_reports() {
    let err = run(&RunConfig::from_json(r#"{"group": {"rank": 2, "phi": ["y"]}}"#).unwrap());
    assert!(matches!(err, Err(Error::Config { .. })));
}

/// Full runs of both presets plus an inline group use exactly the
/// documented anchor list, and every entry carries one.
#[test]
fn anchor_set_matches_documented_list() {
    let mut used = BTreeSet::new();
    for preset in ["reference", "contrast-resnilp-fail"] {
        let report = run(&RunConfig::preset(preset).unwrap()).unwrap();
        assert!(report.passed(), "{}", report.render_text());
        for e in report.entries() {
            assert!(!e.anchor.is_empty());
            used.insert(e.anchor);
        }
        if preset == "reference" {
            assert_eq!(report.sections.len(), 8);
            let flagged: Vec<&str> = report
                .entries()
                .filter(|e| e.status == Status::Flagged)
                .map(|e| e.name.as_str())
                .collect();
            assert_eq!(flagged, ["even tensor exponents", "N_s divides N_1 for odd s"]);
        }
    }
    let text = std::fs::read_to_string(fixture("custom.json")).unwrap();
    for e in run(&RunConfig::from_json(&text).unwrap()).unwrap().entries() {
        used.insert(e.anchor);
    }
    let documented: BTreeSet<&str> = ANCHORS.iter().copied().collect();
    assert_eq!(used, documented);
}

#[test]
fn payload_is_deterministic_across_runs() {
    let mut r = RunConfig::preset("reference").unwrap().resolve().unwrap();
    r.caps.class_cap = 5;
    r.caps.degree_cap = 6;
    let a = serde_json::to_vec(&run_resolved(&r).payload_json()).unwrap();
    let b = serde_json::to_vec(&run_resolved(&r).payload_json()).unwrap();
    assert_eq!(a, b);
}

/// Golden engine dump; regenerate with `LCS_BLESS=1`.
#[test]
fn engine_dump_matches_golden() {
    let engine = Engine::build(EngineConfig::new(FbcGroup::reference(), 5).unwrap()).unwrap();
    let dump = engine.dump();
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/reference_c5.dump");
    if std::env::var_os("LCS_BLESS").is_some() {
        std::fs::write(&path, &dump).unwrap();
    }
    let golden = std::fs::read_to_string(&path).expect("golden dump present");
    assert_eq!(dump, golden);
}
