use causal_cli::pipeline::{pipeline_config, PIPELINES};
use causal_cli::{list_builtins, run_pipeline, Outcome, ScenarioConfig};
use causal_core::measurements::{shift_closed_form, Dpovm};
use causal_core::process_matrices::{quantum_switch, ProcessMatrix};

fn config(text: &str) -> ScenarioConfig {
    ScenarioConfig::from_toml(text).unwrap()
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let cfg = config(
        r#"process = "switch"
instruments = "switch_shift"
ensemble = "shift_sdiqi"
checks = ["validate", "completeness", "separability-p2f(nonseparable)", "game-shift"]"#,
    );
    let a = run_pipeline(&cfg).unwrap();
    let b = run_pipeline(&cfg).unwrap();
    assert_eq!(a.report.render(), b.report.render());
    assert_eq!(a.artifacts, b.artifacts);
    assert_eq!(a.report.exit_code(), 0);
}

#[test]
fn no_checks_gives_constructions_only() {
    let out = run_pipeline(&config("process = \"lugano_qcqc\"\nmeasurement = \"shift\"\nensemble = \"shift\"")).unwrap();
    assert_eq!(out.report.entries.len(), 3);
    assert!(out.report.entries.iter().all(|e| e.outcome == Outcome::Info && e.check.starts_with("construction")));
    let names: Vec<&str> = out.artifacts.iter().map(|a| a.name.as_str()).collect();
    assert_eq!(names, ["process.json", "dpovm.json", "ensemble.json"]);
    assert!(out.report.render().ends_with("summary: 0 passed, 0 failed, 0 inconclusive\n"));
}

#[test]
fn artifacts_round_trip() {
    let out = run_pipeline(&config("process = \"switch\"\nmeasurement = \"shift\"\nensemble = \"shift_sdiqi\"")).unwrap();
    let get = |n: &str| &out.artifacts.iter().find(|a| a.name == n).unwrap().contents;

    let w = ProcessMatrix::from_json(get("process.json")).unwrap();
    let reference = quantum_switch().unwrap();
    let diff = w.operator().unwrap().max_abs_diff(&reference.operator().unwrap()).unwrap();
    assert!(diff < 1e-15, "{diff}");
    assert_eq!(w.roles(), reference.roles());

    let d = Dpovm::from_json(get("dpovm.json")).unwrap();
    assert!(d.max_deviation(&shift_closed_form().unwrap()).unwrap() < 1e-15);

    // The ensemble file can be read back as an ensemble input.
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("ens.json"), get("ensemble.json")).unwrap();
    std::fs::write(dir.path().join("m.json"), get("dpovm.json")).unwrap();
    let path = dir.path().join("s.toml");
    std::fs::write(&path, "measurement = \"m.json\"\nensemble = \"ens.json\"\nchecks = [\"game-shift\"]").unwrap();
    let again = run_pipeline(&ScenarioConfig::from_file(&path).unwrap()).unwrap();
    let game = again.report.entries.iter().find(|e| e.check == "game-shift").unwrap();
    assert_eq!(game.detail("value"), Some("1.0000000000"));
    assert_eq!(again.artifacts[1].contents, *get("ensemble.json"));
}

#[test]
fn shift_equivalence_pipeline() {
    let out = run_pipeline(&pipeline_config("shift-equivalence").unwrap()).unwrap();
    let e = &out.report.entries[0];
    assert_eq!(e.outcome, Outcome::Pass);
    let dev: f64 = e.detail("max_deviation").unwrap().parse().unwrap();
    assert!(dev < 1e-12);
    assert!(e.anchor.contains("(c(b⊕1), a(c⊕1), b(a⊕1))"));
}

#[test]
fn exact_bounds_check() {
    let out = run_pipeline(&ScenarioConfig::for_checks(&["exact-bounds"])).unwrap();
    let e = &out.report.entries[0];
    assert_eq!(e.outcome, Outcome::Pass);
    assert!(e.details.iter().any(|(_, v)| v == "3/4"));
    assert!(e.details.iter().any(|(_, v)| v == "7/8"));
}

#[test]
fn named_pipelines_pass() {
    for name in ["shift-from-switch", "shift-from-qcqc", "comb", "nlwe(agb4, B)", "lugano-channel"] {
        let out = run_pipeline(&pipeline_config(name).unwrap()).unwrap();
        assert_eq!(out.report.exit_code(), 0, "{name}:\n{}", out.report.render());
    }
    assert!(pipeline_config("no-such-pipeline").is_none());
    assert_eq!(PIPELINES.len(), 9);
}

#[test]
fn expectation_mismatch_fails() {
    let out = run_pipeline(&config("measurement = \"computational\"\nchecks = [\"separability-p2f(nonseparable)\"]")).unwrap();
    assert_eq!(out.report.exit_code(), 1);
    assert_eq!(out.report.entries[1].detail("verdict"), Some("separable"));
}

#[test]
fn checks_needing_inputs_report_config_errors() {
    for text in [
        "checks = [\"completeness\"]",
        "measurement = \"shift\"\nchecks = [\"game-shift\"]",
        "checks = [\"game-ndi\"]",
    ] {
        assert!(run_pipeline(&config(text)).is_err(), "{text}");
    }
}

#[test]
fn catalog_lists_builtins_with_descriptive_provenance() {
    let cat = list_builtins();
    let lugano = cat.find("lugano").unwrap();
    assert_eq!(lugano.kind, "process");
    assert!(lugano.provenance.contains("x=c(b⊕1), y=a(c⊕1), z=b(a⊕1)"));
    assert!(cat.find("switch").unwrap().provenance.contains("quantum switch"));
    assert!(cat.find("tobar_costa4").unwrap().provenance.contains("Alice, Charlie and Daisy"));
    for e in &cat.entries {
        assert!(!e.provenance.is_empty(), "{}", e.name);
    }
    for name in causal_core::process_functions::BUILTIN_NAMES {
        assert!(cat.find(name).is_some(), "{name}");
    }
    let text = cat.render();
    assert!(text.starts_with("process:\n"));
}
