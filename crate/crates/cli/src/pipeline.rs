use causal_core::measurements::effective_dpovm;

use crate::checks::{self, Check, Context};
use crate::config::{InstrumentsRef, ScenarioConfig};
use crate::report::{num, sci, Artifact, Entry, Outcome, Report};
use crate::resolve::{self, ProcessRef};
use crate::Result;

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub report: Report,
    pub artifacts: Vec<Artifact>,
}

/// Builds the declared constructions, runs the checks in order, and
/// collects serialized operators. Deterministic given the config.
pub fn run_pipeline(cfg: &ScenarioConfig) -> Result<PipelineOutput> {
    cfg.validate()?;
    let base = cfg.base_dir.as_deref();
    let title = cfg.name.clone().unwrap_or_else(|| {
        if cfg.checks.is_empty() {
            "constructions".into()
        } else {
            cfg.checks.join(", ")
        }
    });
    let mut report = Report::new(title, cfg.seed);
    let mut artifacts = Vec::new();

    let process = cfg.process.as_deref().map(|p| resolve::process(p, base)).transpose()?;
    if let (Some(spec), Some(p)) = (&cfg.process, &process) {
        let mut e = Entry::new("construction: process", format!("process `{spec}`"), Outcome::Info);
        if let ProcessRef::Function(w) = p {
            e = e.with("parties", w.n_parties()).with("unique_fixed_point", w.check_unique_fixed_point());
        }
        match p.matrix() {
            Ok(m) => {
                e = e
                    .with("wires", m.names().join(","))
                    .with("trace", num(m.trace()))
                    .with("representation", if m.is_pure() { "pure" } else { "dense" });
                match m.to_json() {
                    Ok(json) => {
                        artifacts.push(Artifact { name: "process.json".into(), contents: json });
                        e = e.with("artifact", "process.json");
                    }
                    Err(err) => e = e.with("artifact", format!("not serialized ({err})")),
                }
            }
            Err(err) => e = e.with("matrix", format!("not built ({err})")),
        }
        report.push(e);
    }

    let measurement = match (&cfg.measurement, &cfg.instruments, &process) {
        (Some(m), _, _) => Some((m.clone(), resolve::measurement(m, base)?)),
        (None, Some(i), Some(p)) => {
            let label = match i {
                InstrumentsRef::Preset(s) => s.clone(),
                InstrumentsRef::Files(f) => f.join("+"),
            };
            Some((label, effective_dpovm(&p.matrix()?, &resolve::instruments(i, base)?)?))
        }
        _ => None,
    };
    if let Some((label, d)) = &measurement {
        report.push(
            Entry::new("construction: measurement", format!("distributed measurement `{label}`"), Outcome::Info)
                .with("wires", d.wire_names().join(","))
                .with("effects", d.effects.len())
                .with("completeness_deviation", sci(d.completeness_check()))
                .with("artifact", "dpovm.json"),
        );
        artifacts.push(Artifact { name: "dpovm.json".into(), contents: d.to_json() });
    }

    let ensemble = cfg.ensemble.as_deref().map(|e| resolve::ensemble(e, base)).transpose()?;
    if let (Some(spec), Some(e)) = (&cfg.ensemble, &ensemble) {
        let (norm, prior) = e.normalization_defect();
        report.push(
            Entry::new("construction: ensemble", format!("input ensemble `{spec}`"), Outcome::Info)
                .with("wires", e.wires.iter().map(|s| s.name.as_str()).collect::<Vec<_>>().join(","))
                .with("states", e.states.len())
                .with("norm_defect", sci(norm))
                .with("prior_defect", sci(prior))
                .with("artifact", "ensemble.json"),
        );
        artifacts.push(Artifact { name: "ensemble.json".into(), contents: resolve::ensemble_to_json(e)? });
    }

    let ctx = Context { cfg, process, measurement: measurement.map(|(_, d)| d), ensemble };
    for c in &cfg.checks {
        let check: Check = c.parse()?;
        report.push(checks::run(&check, &ctx)?);
    }
    Ok(PipelineOutput { report, artifacts })
}

/// Names of the preset pipelines accepted by `check`.
pub const PIPELINES: [&str; 9] = [
    "shift-equivalence",
    "bounds",
    "shift-from-switch",
    "shift-from-lopf",
    "shift-from-qcqc",
    "comb",
    "builtin-processes",
    "nlwe(<process>, <party>)",
    "lugano-channel[(<abc>)]",
];

/// A preset pipeline by name.
pub fn pipeline_config(name: &str) -> Option<ScenarioConfig> {
    let (head, args) = resolve::split_call(name);
    let with = |process: Option<&str>, instruments: Option<&str>, measurement: Option<&str>, ensemble: Option<&str>, checks: &[&str]| {
        let mut cfg = ScenarioConfig::for_checks(checks);
        cfg.name = Some(name.to_string());
        cfg.process = process.map(Into::into);
        cfg.instruments = instruments.map(|s| InstrumentsRef::Preset(s.into()));
        cfg.measurement = measurement.map(Into::into);
        cfg.ensemble = ensemble.map(Into::into);
        cfg
    };
    match (head.as_str(), args.len()) {
        ("shift-equivalence", 0) => Some(with(None, None, None, None, &["shift-equivalence"])),
        ("bounds", 0) => Some(with(None, None, None, None, &["bounds"])),
        ("shift-from-switch", 0) => Some(with(
            Some("switch"),
            Some("switch_shift"),
            None,
            Some("shift_sdiqi"),
            &["validate", "shift-from-switch", "completeness", "game-shift", "game-ndi", "separability-p2f(nonseparable)"],
        )),
        ("shift-from-lopf", 0) => Some(with(
            None,
            None,
            Some("lopf(lugano)"),
            Some("shift"),
            &["shift-from-lopf", "completeness", "game-shift", "separability-tri(nonseparable)"],
        )),
        ("shift-from-qcqc", 0) => Some(with(
            Some("lugano_qcqc"),
            Some("qcqc_shift"),
            None,
            Some("shift_sdiqi"),
            &["validate", "shift-from-qcqc", "completeness", "game-shift", "game-ndi", "separability-p2f(nonseparable)"],
        )),
        ("comb", 0) => Some(with(
            Some("comb"),
            Some("comb"),
            None,
            None,
            &["validate", "completeness", "separability-p2f(separable)"],
        )),
        ("builtin-processes", 0) => {
            let mut checks = Vec::new();
            for (p, parties) in [
                ("lugano", &["A", "B", "C"][..]),
                ("agb4", &["A", "B", "C", "D"][..]),
                ("ardehali_svetlichny4", &["A", "C"][..]),
                ("tobar_costa4", &["A", "C", "D"][..]),
            ] {
                checks.push(format!("transparency({p})"));
                checks.push(format!("fixed-point({p})"));
                checks.push(format!("contractions({p})"));
                for i in parties {
                    checks.push(format!("nlwe({p}, {i})"));
                }
            }
            let refs: Vec<&str> = checks.iter().map(|s| s.as_str()).collect();
            Some(with(None, None, None, None, &refs))
        }
        ("nlwe", 2) => {
            let p = args[0].as_str();
            let checks = [name.to_string(), format!("transparency({p})"), format!("fixed-point({p})"), format!("contractions({p})")];
            let refs: Vec<&str> = checks.iter().map(|s| s.as_str()).collect();
            Some(with(None, None, None, None, &refs))
        }
        ("lugano-channel", 0 | 1) => Some(with(None, None, None, None, &[name])),
        _ => None,
    }
}
