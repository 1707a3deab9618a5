//! Resolution of named built-ins and files into toolkit objects.
//!
//! Names may carry arguments: `qcqc(lugano, C)`, `lopf(agb4)`, `mix(shift, 0.5)`.

use std::path::{Path, PathBuf};

use causal_core::hilbert::{LabeledKet, LabeledOperator, OperatorDoc, SpaceLabel};
use causal_core::measurements::{
    computational_dpovm, effective_dpovm, fiona_fixed_setting, losupcc_measurement, lopf_measurement,
    measure_and_forward, phil_identity, projective_dpovm, qcqc_instruments, shift_basis, shift_closed_form,
    standard_instruments, Agent, Dpovm, InputEnsemble, Instrument, InstrumentSet, ProjectiveFamily, Scenario,
};
use causal_core::certification::{mix_with_white_noise, GameSpec};
use causal_core::process_functions::{aux_wire, builtin, nlwe_basis, BooleanProcessFunction, Word};
use causal_core::process_matrices::{
    builtin_process, fixed_order_comb, from_process_function, parse_party, quantum_switch, to_qcqc, ProcessMatrix,
};
use nalgebra::DVector;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::{CliError, Result};

/// Splits `head(a, b)` into `("head", ["a", "b"])`; a bare name has no arguments.
pub fn split_call(s: &str) -> (String, Vec<String>) {
    let s = s.trim();
    match (s.find('('), s.strip_suffix(')')) {
        (Some(i), Some(body)) => {
            let args = body[i + 1..].split(',').map(|a| a.trim().to_string()).filter(|a| !a.is_empty()).collect();
            (s[..i].trim().to_string(), args)
        }
        _ => (s.to_string(), Vec::new()),
    }
}

fn arity(name: &str, args: &[String], n: usize) -> Result<()> {
    if args.len() != n {
        return Err(CliError::Config(format!("`{name}` takes {n} argument(s), got {}", args.len())));
    }
    Ok(())
}

pub fn function(name: &str) -> Result<BooleanProcessFunction> {
    builtin(name.trim()).ok_or_else(|| CliError::Config(format!("unknown process function `{name}`")))
}

fn file_in(base: Option<&Path>, spec: &str) -> Option<PathBuf> {
    let p = Path::new(spec);
    let p = match base {
        Some(b) if p.is_relative() => b.join(p),
        _ => p.to_path_buf(),
    };
    p.is_file().then_some(p)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// A process given by name or file.
#[derive(Debug, Clone)]
pub enum ProcessRef {
    /// A process function; its diagonal process matrix is built on demand.
    Function(BooleanProcessFunction),
    Matrix(ProcessMatrix),
}

impl ProcessRef {
    pub fn matrix(&self) -> Result<ProcessMatrix> {
        match self {
            ProcessRef::Function(w) => Ok(from_process_function(w)?),
            ProcessRef::Matrix(m) => Ok(m.clone()),
        }
    }

    pub fn function(&self) -> Option<&BooleanProcessFunction> {
        match self {
            ProcessRef::Function(w) => Some(w),
            ProcessRef::Matrix(_) => None,
        }
    }
}

pub fn process(spec: &str, base: Option<&Path>) -> Result<ProcessRef> {
    if let Some(w) = builtin(spec.trim()) {
        return Ok(ProcessRef::Function(w));
    }
    match builtin_process(spec.trim()) {
        Ok(m) => Ok(ProcessRef::Matrix(m)),
        Err(e) => match file_in(base, spec) {
            Some(p) => Ok(ProcessRef::Matrix(ProcessMatrix::from_json(&read(&p)?)?)),
            None => Err(CliError::Config(format!("process `{spec}`: {e}"))),
        },
    }
}

fn hadamards(n: usize) -> Vec<ProjectiveFamily> {
    vec![ProjectiveFamily::hadamard(); n]
}

/// Measure-and-forward (Hadamard family) parties on the fixed-order comb,
/// with Fiona measuring F in the basis `H^z`.
pub fn comb_instruments(z: u8) -> Result<InstrumentSet> {
    let h = ProjectiveFamily::hadamard();
    Ok(InstrumentSet {
        agents: vec![
            Agent::fixed("phil", phil_identity()?),
            Agent::fixed("fiona", fiona_fixed_setting(z)?),
            Agent::fixed("alice", measure_and_forward(0, &h)?),
            Agent::fixed("bob", measure_and_forward(1, &h)?),
        ],
        word_perm: None,
    })
}

/// A D-POVM by name or file.
pub fn measurement(spec: &str, base: Option<&Path>) -> Result<Dpovm> {
    let (head, args) = split_call(spec);
    let d = match head.as_str() {
        "shift" => {
            arity(&head, &args, 0)?;
            shift_closed_form()?
        }
        "shift_projectors" => {
            arity(&head, &args, 0)?;
            projective_dpovm(&shift_basis()?)?
        }
        "computational" => {
            arity(&head, &args, 0)?;
            computational_dpovm(&(0..3).map(aux_wire).collect::<Vec<_>>())?
        }
        "switch" => {
            arity(&head, &args, 0)?;
            effective_dpovm(&quantum_switch()?, &standard_instruments(Scenario::SwitchShift)?)?
        }
        "comb" => {
            arity(&head, &args, 0)?;
            effective_dpovm(&fixed_order_comb(false)?, &comb_instruments(1)?)?
        }
        "lopf" => {
            arity(&head, &args, 1)?;
            let w = function(&args[0])?;
            lopf_measurement(&w, &hadamards(w.n_parties()))?
        }
        "losupcc" => {
            arity(&head, &args, 2)?;
            let w = function(&args[0])?;
            losupcc_measurement(&w, parse_party(&args[1], w.n_parties())?)?
        }
        "qcqc" => {
            arity(&head, &args, 2)?;
            let w = function(&args[0])?;
            let i = parse_party(&args[1], w.n_parties())?;
            effective_dpovm(&to_qcqc(&w, i)?, &qcqc_instruments(w.n_parties(), i)?)?
        }
        "mix" => {
            arity(&head, &args, 2)?;
            let lambda: f64 =
                args[1].parse().map_err(|_| CliError::Config(format!("mixing weight `{}`", args[1])))?;
            if !(0.0..=1.0).contains(&lambda) {
                return Err(CliError::Config(format!("mixing weight {lambda} outside [0, 1]")));
            }
            mix_with_white_noise(&measurement(&args[0], base)?, lambda)
        }
        _ => match file_in(base, spec) {
            Some(p) => Dpovm::from_json(&read(&p)?)?,
            None => return Err(CliError::Config(format!("unknown measurement `{spec}`"))),
        },
    };
    Ok(d)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateDoc {
    label: Word,
    /// `[re, im]` pairs in the wire order of the document.
    amplitudes: Vec<[f64; 2]>,
    prior: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnsembleDoc {
    wires: Vec<SpaceLabel>,
    states: Vec<StateDoc>,
}

/// `{"wires": [...], "states": [{"label", "amplitudes", "prior"}]}`.
pub fn ensemble_to_json(e: &InputEnsemble) -> Result<String> {
    let states = e
        .states
        .iter()
        .map(|(w, k, p)| {
            let k = k.aligned_to(&e.wires)?;
            let amplitudes = k.amplitudes().iter().map(|z| [z.re, z.im]).collect();
            Ok(StateDoc { label: w.clone(), amplitudes, prior: *p })
        })
        .collect::<Result<Vec<_>>>()?;
    serde_json::to_string(&EnsembleDoc { wires: e.wires.clone(), states }).map_err(|e| CliError::Io(e.to_string()))
}

/// An input ensemble by name or file.
pub fn ensemble(spec: &str, base: Option<&Path>) -> Result<InputEnsemble> {
    let (head, args) = split_call(spec);
    match head.as_str() {
        "shift" => Ok(shift_basis()?),
        "shift_sdiqi" => Ok(GameSpec::shift_sdiqi()?.ensemble.expect("state game")),
        "shift_sdiqi_phil_first" => Ok(GameSpec::shift_sdiqi_phil_first()?.ensemble.expect("state game")),
        "nlwe" => {
            arity(&head, &args, 1)?;
            Ok(InputEnsemble::uniform(&nlwe_basis(&function(&args[0])?)?)?)
        }
        _ => {
            let p = file_in(base, spec).ok_or_else(|| CliError::Config(format!("unknown ensemble `{spec}`")))?;
            let doc: EnsembleDoc =
                serde_json::from_str(&read(&p)?).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            let states = doc
                .states
                .into_iter()
                .map(|s| {
                    let v = DVector::from_iterator(s.amplitudes.len(), s.amplitudes.iter().map(|[re, im]| C64::new(*re, *im)));
                    Ok((s.label, LabeledKet::new(doc.wires.clone(), v)?, s.prior))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(InputEnsemble { wires: doc.wires, states })
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementDoc {
    outcome: Word,
    operator: OperatorDoc,
}

/// On-disk instrument: wires and outcome-labeled Choi operators.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstrumentDoc {
    name: String,
    inputs: Vec<SpaceLabel>,
    outputs: Vec<SpaceLabel>,
    elements: Vec<ElementDoc>,
}

/// Instruments from a preset name or a list of instrument files (one fixed
/// agent per file, in order).
pub fn instruments(spec: &crate::config::InstrumentsRef, base: Option<&Path>) -> Result<InstrumentSet> {
    match spec {
        crate::config::InstrumentsRef::Preset(name) => {
            let (head, args) = split_call(name);
            match head.as_str() {
                "comb" => {
                    arity(&head, &args, 0)?;
                    comb_instruments(1)
                }
                "qcqc" => {
                    arity(&head, &args, 2)?;
                    let n: usize = args[0].parse().map_err(|_| CliError::Config(format!("party count `{}`", args[0])))?;
                    Ok(qcqc_instruments(n, parse_party(&args[1], n)?)?)
                }
                _ => Ok(standard_instruments(name.parse::<Scenario>()?)?),
            }
        }
        crate::config::InstrumentsRef::Files(files) => {
            let mut agents = Vec::new();
            for f in files {
                let p = file_in(base, f).ok_or_else(|| CliError::Config(format!("instrument file `{f}` not found")))?;
                let doc: InstrumentDoc =
                    serde_json::from_str(&read(&p)?).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
                let elements = doc
                    .elements
                    .into_iter()
                    .map(|e| Ok((e.outcome, LabeledOperator::try_from(e.operator)?)))
                    .collect::<Result<Vec<_>>>()?;
                agents.push(Agent::fixed(doc.name, Instrument::new(doc.inputs, doc.outputs, elements)?));
            }
            Ok(InstrumentSet { agents, word_perm: None })
        }
    }
}
