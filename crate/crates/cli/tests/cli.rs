use std::path::Path;
use std::process::{Command, Output};

use kframe_cli::scenario::{FrameSpec, KSpec};
use kframe_cli::{emit_report, fixture_scenario, load_scenario, run_suite, CliError, Format, Scenario, SuiteReport};

fn kframe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kframe")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn random_scenario() -> Scenario {
    let mut s = fixture_scenario("W1").unwrap();
    s.dim = 3;
    s.atoms = 6;
    s.k_spec = KSpec::RandomRank { rank: 2, seed: 8 };
    s.frame_spec = FrameSpec::GenerateParsevalK { seed: 9 };
    s.trials = 6;
    s
}

#[test]
fn load_scenario_reads_w1_from_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "w1.json",
        r#"{"dim": 2, "atoms": 3, "weights": "uniform",
            "k_spec": {"kind": "diagonal", "values": [1, 0]},
            "frame_spec": {"kind": "explicit",
                           "samples": [[0.7071067811865476, 0], [0.7071067811865476, 0], [0, 0]]},
            "trials": 100, "seed": 7}"#,
    );
    assert_eq!(load_scenario(Path::new(&path)).unwrap(), fixture_scenario("W1").unwrap());
    let err = load_scenario(&dir.path().join("missing.json")).unwrap_err();
    assert!(matches!(err, CliError::Io { .. }));
}

#[test]
fn fixtures_command_prints_loadable_scenarios() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["W1", "W1p"] {
        let out = kframe(&["fixtures", "--name", name]);
        assert!(out.status.success());
        let path = write(dir.path(), "fx.json", &String::from_utf8(out.stdout).unwrap());
        assert_eq!(load_scenario(Path::new(&path)).unwrap(), fixture_scenario(name).unwrap());
    }
    assert_eq!(kframe(&["fixtures", "--name", "W2"]).status.code(), Some(2));
}

#[test]
fn verify_writes_json_that_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "s.json", &random_scenario().to_json());
    let report = dir.path().join("r.json");
    let out = kframe(&[
        "verify",
        "--config",
        &config,
        "--properties",
        "l4,t1,t4",
        "--format",
        "json",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&report).unwrap();
    let parsed = SuiteReport::from_json(&text).unwrap();
    let ids: Vec<_> = parsed.properties.iter().map(|p| p.id.as_str()).collect();
    assert_eq!(ids, ["l4", "t1", "t4"]);
    assert!(parsed.all_pass());
    assert_eq!(parsed.scenario_echo, random_scenario());

    let direct = run_suite(&random_scenario(), &["l4,t1,t4"]).unwrap();
    for (a, b) in parsed.properties.iter().zip(&direct.properties) {
        assert_eq!(a.pass, b.pass);
        assert_eq!(a.max_residual.to_bits(), b.max_residual.to_bits());
    }
}

#[test]
fn overrides_are_echoed() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "s.json", &random_scenario().to_json());
    let out = kframe(&[
        "verify", "--config", &config, "--properties", "l1", "--trials", "2", "--seed", "99", "--format", "json",
    ]);
    assert!(out.status.success());
    let report = SuiteReport::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(report.scenario_echo.trials, 2);
    assert_eq!(report.scenario_echo.seed, 99);
    assert_eq!(report.properties[0].instances, 2);
}

#[test]
fn failing_property_exits_one_with_witness() {
    let mut s = random_scenario();
    s.frame_spec = FrameSpec::RandomBessel { seed: 3 };
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "s.json", &s.to_json());
    let out = kframe(&["verify", "--config", &config, "--properties", "l5", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let report = SuiteReport::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let witness = report.properties[0].witness.as_ref().unwrap();
    assert_eq!(witness.trial_index, 0);
    assert!(witness.reason.contains("Parseval"), "{}", witness.reason);

    // Replaying the witness scenario reproduces the failure.
    let replay = write(dir.path(), "replay.json", &witness.scenario.to_json());
    assert_eq!(kframe(&["verify", "--config", &replay, "--properties", "l5"]).status.code(), Some(1));
}

#[test]
fn usage_and_config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "s.json", &random_scenario().to_json());
    let out = kframe(&["verify", "--config", &config, "--properties", "l4,nope"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("nope") && stderr.contains("complement-parseval"), "{stderr}");

    let bad = write(dir.path(), "bad.json", r#"{"dim": 2, "atoms": 3"#);
    let out = kframe(&["verify", "--config", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));

    assert_eq!(kframe(&["verify"]).status.code(), Some(2));
    assert_eq!(kframe(&["verify", "--config", "/does/not/exist.json"]).status.code(), Some(2));
}

#[test]
fn text_report_is_a_table() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "s.json", &fixture_scenario("W1").unwrap().to_json());
    let out = kframe(&["verify", "--config", &config, "--properties", "t1,t2", "--trials", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("uniqueness_test = false"), "{text}");
    assert!(text.contains("2/2 properties passed"), "{text}");
}

#[test]
fn emit_report_json_and_text() {
    let dir = tempfile::tempdir().unwrap();
    let report = run_suite(&fixture_scenario("W1p").unwrap(), &["kdaggerk"]).unwrap();
    let json = dir.path().join("r.json");
    emit_report(&report, &json, Format::Json).unwrap();
    let back = SuiteReport::from_json(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(back, report);
    let text = dir.path().join("r.txt");
    emit_report(&report, &text, Format::Text).unwrap();
    assert!(std::fs::read_to_string(text).unwrap().contains("kdaggerk"));
}

#[test]
fn determinism_modulo_timing() {
    let a = run_suite::<&str>(&random_scenario(), &[]).unwrap();
    let mut b = run_suite::<&str>(&random_scenario(), &[]).unwrap();
    b.wall_time_ms = a.wall_time_ms;
    assert_eq!(a.to_json(), b.to_json());
}
