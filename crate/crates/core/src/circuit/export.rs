use std::fmt::Write as _;
use std::io;

use serde::{Deserialize, Serialize};

use super::{lower_gate, Circuit, CircuitMetadata, Control, Gate, OneQubit, Polarity};

#[derive(Debug, thiserror::Error)]
pub enum ExportError {
    #[error("OpenQASM export needs a basis circuit; found `{0}`")]
    NotBasis(String),
    #[error("gate {index}: {msg}")]
    BadGate { index: usize, msg: String },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Serialize, Deserialize)]
struct GateJson {
    kind: String,
    qubits: Vec<usize>,
    params: Vec<f64>,
    controls: Vec<(usize, u8)>,
}

#[derive(Serialize, Deserialize, Default)]
struct MetadataJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    graph_hash: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_nodes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    steps: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct CircuitJson {
    n_qubits: usize,
    gates: Vec<GateJson>,
    #[serde(default)]
    metadata: MetadataJson,
}

fn gate_to_json(g: &Gate) -> GateJson {
    let (qubits, params, controls) = match g {
        Gate::Single { op, target } => (vec![*target], op.angle().into_iter().collect(), vec![]),
        Gate::Cx { control, target } => (vec![*control, *target], vec![], vec![]),
        Gate::Swap { a, b } => (vec![*a, *b], vec![], vec![]),
        Gate::MultiControlled { op, controls, target } => (
            vec![*target],
            op.angle().into_iter().collect(),
            controls.iter().map(|c| (c.qubit, c.polarity.as_u8())).collect(),
        ),
    };
    GateJson { kind: g.kind(), qubits, params, controls }
}

fn gate_from_json(index: usize, gj: &GateJson) -> Result<Gate, ExportError> {
    let bad = |msg: String| ExportError::BadGate { index, msg };
    let angle = match gj.params.as_slice() {
        [] => None,
        [t] => Some(*t),
        _ => return Err(bad(format!("expected at most one parameter, got {}", gj.params.len()))),
    };
    let gate = match (gj.kind.as_str(), gj.qubits.as_slice()) {
        ("cx", [c, t]) => Gate::cx(*c, *t),
        ("swap", [a, b]) => Gate::swap(*a, *b),
        (kind, [t]) => {
            let (base, multi) = match kind.strip_prefix("mc") {
                Some(base) => (base, true),
                None => (kind, false),
            };
            let op = OneQubit::from_name(base, angle)
                .ok_or_else(|| bad(format!("unknown kind `{kind}` with {} params", gj.params.len())))?;
            if multi {
                let controls = gj
                    .controls
                    .iter()
                    .map(|&(qubit, pol)| match pol {
                        0 => Ok(Control { qubit, polarity: Polarity::Zero }),
                        1 => Ok(Control { qubit, polarity: Polarity::One }),
                        other => Err(bad(format!("control polarity must be 0 or 1, got {other}"))),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Gate::MultiControlled { op, controls, target: *t }
            } else {
                Gate::single(op, *t)
            }
        }
        (kind, qs) => return Err(bad(format!("`{kind}` cannot act on {} qubits", qs.len()))),
    };
    Ok(gate)
}

/// JSON gate list:
/// `{"n_qubits": m, "gates": [{"kind", "qubits", "params", "controls"}], "metadata": {...}}`.
/// Multi-controlled gates list only their target under `qubits` and their
/// controls as `[qubit, polarity]` pairs.
pub fn circuit_to_json(c: &Circuit) -> String {
    let doc = CircuitJson {
        n_qubits: c.n_qubits,
        gates: c.gates.iter().map(gate_to_json).collect(),
        metadata: MetadataJson {
            graph_hash: c.metadata.graph_hash.clone(),
            n_nodes: c.metadata.n_nodes,
            steps: c.metadata.steps,
        },
    };
    serde_json::to_string(&doc).expect("circuit serialization cannot fail")
}

pub fn circuit_from_json(text: &str) -> Result<Circuit, ExportError> {
    let doc: CircuitJson = serde_json::from_str(text)?;
    let gates = doc
        .gates
        .iter()
        .enumerate()
        .map(|(i, g)| gate_from_json(i, g))
        .collect::<Result<Vec<_>, _>>()?;
    let c = Circuit {
        n_qubits: doc.n_qubits,
        gates,
        metadata: CircuitMetadata {
            graph_hash: doc.metadata.graph_hash,
            n_nodes: doc.metadata.n_nodes,
            steps: doc.metadata.steps,
        },
    };
    if let Err(msg) = c.validate() {
        return Err(ExportError::BadGate { index: 0, msg });
    }
    Ok(c)
}

fn qasm_preamble(out: &mut String, n_qubits: usize, header: &[String]) {
    for line in header {
        writeln!(out, "// {line}").unwrap();
    }
    out.push_str("OPENQASM 3.0;\ninclude \"stdgates.inc\";\n");
    writeln!(out, "qubit[{n_qubits}] q;").unwrap();
}

/// One QASM statement for a basis gate; `Phase` adds its `t/2` to `global_phase`.
fn qasm_statement(g: &Gate, global_phase: &mut f64, out: &mut String) -> Result<(), ExportError> {
    match g {
        Gate::Single { op, target } => match *op {
            OneQubit::H => writeln!(out, "h q[{target}];"),
            OneQubit::X => writeln!(out, "x q[{target}];"),
            OneQubit::Rx(t) => writeln!(out, "rx({t:?}) q[{target}];"),
            OneQubit::Ry(t) => writeln!(out, "ry({t:?}) q[{target}];"),
            OneQubit::Rz(t) => writeln!(out, "rz({t:?}) q[{target}];"),
            OneQubit::Phase(t) => {
                *global_phase += t / 2.0;
                writeln!(out, "rz({t:?}) q[{target}];")
            }
        },
        Gate::Cx { control, target } => writeln!(out, "cx q[{control}], q[{target}];"),
        other => return Err(ExportError::NotBasis(other.kind())),
    }
    .unwrap();
    Ok(())
}

fn qasm_epilogue(out: &mut String, global_phase: f64) {
    if global_phase != 0.0 {
        writeln!(out, "gphase({global_phase:?});").unwrap();
    }
}

/// OpenQASM 3 text for a basis circuit using only `rx ry rz h x cx`.
///
/// `phase(t)` is written as `rz(t)`; the accumulated global phase is emitted
/// once at the end as `gphase`. Qubit `q[0]` is the most significant bit of
/// register `x`.
pub fn circuit_to_qasm(c: &Circuit, header: &[String]) -> Result<String, ExportError> {
    let mut out = String::new();
    qasm_preamble(&mut out, c.n_qubits, header);
    let mut global_phase = 0.0;
    for g in &c.gates {
        qasm_statement(g, &mut global_phase, &mut out)?;
    }
    qasm_epilogue(&mut out, global_phase);
    Ok(out)
}

/// Lowers `c` gate by gate and streams the basis QASM into `w`; same text as
/// `circuit_to_qasm(&decompose_to_basis(c), header)` without holding the
/// basis circuit.
pub fn write_lowered_qasm(c: &Circuit, header: &[String], w: &mut impl io::Write) -> io::Result<()> {
    let mut out = String::new();
    qasm_preamble(&mut out, c.n_qubits, header);
    let mut global_phase = 0.0;
    let mut lowered = Vec::new();
    for g in &c.gates {
        lowered.clear();
        lower_gate(g, c.n_qubits, &mut lowered);
        for b in &lowered {
            qasm_statement(b, &mut global_phase, &mut out).expect("lowering yields basis gates");
        }
        if out.len() > 1 << 16 {
            w.write_all(out.as_bytes())?;
            out.clear();
        }
    }
    qasm_epilogue(&mut out, global_phase);
    w.write_all(out.as_bytes())
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn json_layout() {
        let c = Circuit::with_gates(
            3,
            vec![
                Gate::single(OneQubit::Ry(0.5), 0),
                Gate::cx(0, 1),
                Gate::MultiControlled {
                    op: OneQubit::Phase(PI),
                    controls: vec![Control::off(0), Control::on(1)],
                    target: 2,
                },
            ],
        );
        let text = circuit_to_json(&c);
        assert!(text.starts_with(r#"{"n_qubits":3,"gates":[{"kind":"ry","qubits":[0],"params":[0.5],"controls":[]}"#));
        assert!(text.contains(r#"{"kind":"mcphase","qubits":[2],"params":[3.141592653589793],"controls":[[0,0],[1,1]]}"#));
        assert_eq!(circuit_from_json(&text).unwrap(), c);
    }

    #[test]
    fn json_rejects_garbage() {
        assert!(circuit_from_json(r#"{"n_qubits":2,"gates":[{"kind":"foo","qubits":[0],"params":[],"controls":[]}]}"#).is_err());
        assert!(circuit_from_json(r#"{"n_qubits":2,"gates":[{"kind":"cx","qubits":[0,5],"params":[],"controls":[]}]}"#).is_err());
        assert!(circuit_from_json(r#"{"n_qubits":2,"gates":[{"kind":"mcx","qubits":[0],"params":[],"controls":[[1,2]]}]}"#).is_err());
    }

    #[test]
    fn qasm_text() {
        let c = Circuit::with_gates(2, vec![Gate::h(0), Gate::cx(0, 1), Gate::single(OneQubit::Phase(1.0), 1)]);
        let q = circuit_to_qasm(&c, &["hello".to_string()]).unwrap();
        assert_eq!(
            q,
            "// hello\nOPENQASM 3.0;\ninclude \"stdgates.inc\";\nqubit[2] q;\nh q[0];\ncx q[0], q[1];\nrz(1.0) q[1];\ngphase(0.5);\n"
        );
        let c = Circuit::with_gates(2, vec![Gate::swap(0, 1)]);
        assert!(matches!(circuit_to_qasm(&c, &[]), Err(ExportError::NotBasis(_))));
    }

    #[test]
    fn streamed_qasm_matches_lowered_text() {
        let c = Circuit::with_gates(
            3,
            vec![
                Gate::swap(0, 2),
                Gate::MultiControlled { op: OneQubit::Ry(0.3), controls: vec![Control::off(0), Control::on(1)], target: 2 },
                Gate::MultiControlled { op: OneQubit::Phase(PI), controls: vec![Control::on(0)], target: 1 },
            ],
        );
        let header = ["a".to_string()];
        let mut buf = Vec::new();
        write_lowered_qasm(&c, &header, &mut buf).unwrap();
        let want = circuit_to_qasm(&crate::circuit::decompose_to_basis(&c), &header).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), want);
    }
}
