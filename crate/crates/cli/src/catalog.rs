//! Catalog of built-in names with one-line provenance.

use crate::checks::CHECKS;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub kind: &'static str,
    pub name: &'static str,
    pub provenance: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn find(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut kind = "";
        for e in &self.entries {
            if e.kind != kind {
                kind = e.kind;
                out.push_str(&format!("{kind}:\n"));
            }
            if e.name.chars().count() > 28 {
                out.push_str(&format!("  {}\n  {:<28} {}\n", e.name, "", e.provenance));
            } else {
                out.push_str(&format!("  {:<28} {}\n", e.name, e.provenance));
            }
        }
        out
    }
}

const ENTRIES: &[(&str, &str, &str)] = &[
    ("process", "lugano", "Lugano process function x=c(b⊕1), y=a(c⊕1), z=b(a⊕1)"),
    ("process", "agb4", "four-party AGB process function, every party transparent"),
    ("process", "ardehali_svetlichny4", "four-party Ardehali–Svetlichny process function, Alice and Charlie transparent"),
    ("process", "tobar_costa4", "four-party Tobar–Costa process function, Alice, Charlie and Daisy transparent"),
    ("process", "constant3", "three-party constant process function (no signalling)"),
    ("process", "bipartite_loop", "two-party loop x=b, y=a⊕1: no unique fixed point (counterexample)"),
    ("process", "switch", "quantum switch with global past P, control future F and target future Ft"),
    ("process", "comb", "fixed-order comb P ≺ A ≺ B ≺ F of identity channels"),
    ("process", "lugano_w", "diagonal process matrix Σ_a |a⟩⟨a|^{A_O} ⊗ |w(a)⟩⟨w(a)|^{A_I} of the Lugano function"),
    ("process", "lugano_qcqc", "QC-QC of the Lugano process with Charlie as coherent control"),
    ("process", "qcqc(<function>, <party>)", "QC-QC of a process function for a transparent party"),
    ("instruments", "switch_shift", "Phil's identity, measure-and-forward Alice and Bob, Fiona measuring H^{b(a⊕1)}"),
    ("instruments", "qcqc_shift", "Phil's identity, Fiona reading the target, measure-and-forward parties"),
    ("instruments", "ndi", "classical inputs reported back, Fiona reporting f and the target bit"),
    ("instruments", "comb", "measure-and-forward parties on the fixed-order comb, Fiona in the Hadamard basis"),
    ("instruments", "qcqc(<n>, <party>)", "QC-QC preset for an n-party process controlled by the given party"),
    ("measurement", "shift", "closed-form SHIFT measurement on (Aux^P, Aux^1, Aux^2)"),
    ("measurement", "shift_projectors", "projectors onto the eight SHIFT states on (Aux^1, Aux^2, Aux^3)"),
    ("measurement", "computational", "product computational-basis measurement on three qubits"),
    ("measurement", "switch", "SHIFT measurement induced by the quantum switch"),
    ("measurement", "comb", "measurement induced by the fixed-order comb"),
    ("measurement", "lopf(<function>)", "local operations with a process function, Hadamard families"),
    ("measurement", "losupcc(<function>, <party>)", "local operations with superposed classical communication"),
    ("measurement", "qcqc(<function>, <party>)", "measurement induced by the QC-QC of a process function"),
    ("measurement", "mix(<measurement>, <λ>)", "λ·E + (1−λ)·1/K white-noise mixture"),
    ("ensemble", "shift", "SHIFT states H^{w_L(a)}|a⟩ on (Aux^1, Aux^2, Aux^3), uniform prior"),
    ("ensemble", "shift_sdiqi", "SHIFT states with Charlie's system handed to Phil, labels (γ, α, β)"),
    ("ensemble", "shift_sdiqi_phil_first", "SHIFT states with Phil as the first Lugano party"),
    ("ensemble", "nlwe(<function>)", "NLWE basis {H^{w(a)}|a⟩} of a process function without global past"),
];

/// Every named process, instrument preset, measurement, ensemble, check and pipeline.
pub fn list_builtins() -> Catalog {
    let mut entries: Vec<CatalogEntry> =
        ENTRIES.iter().map(|(kind, name, provenance)| CatalogEntry { kind, name, provenance }).collect();
    for name in crate::pipeline::PIPELINES {
        entries.push(CatalogEntry { kind: "pipeline", name, provenance: pipeline_provenance(name) });
    }
    for (name, provenance) in CHECKS {
        entries.push(CatalogEntry { kind: "check", name, provenance });
    }
    Catalog { entries }
}

fn pipeline_provenance(name: &str) -> &'static str {
    match name {
        "shift-equivalence" => "SHIFT from LOPF, quantum switch, QC-QC, LOSupCC and closed form coincide",
        "bounds" => "Lugano guessing game 3/4, LOPF discrimination 7/8, see-saw bound ≈0.9268",
        "shift-from-switch" => "SHIFT measurement from the quantum switch; its separability and games",
        "shift-from-lopf" => "SHIFT measurement from the Lugano process; tripartite separability",
        "shift-from-qcqc" => "SHIFT measurement from the Lugano QC-QC; its separability and games",
        "comb" => "fixed-order comb: valid process, separable measurement",
        "builtin-processes" => "transparency, NLWE bases and contraction identities of the four built-in processes",
        "nlwe(<process>, <party>)" => "NLWE basis of a process function via LOPF, LOSupCC and QC-QC",
        _ => "Lugano process as a channel realized by the SHIFT measurement",
    }
}
