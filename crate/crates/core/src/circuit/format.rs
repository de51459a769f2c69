// Copyright contributors to the qhf project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Circuit serialization: the line-based native format, an OPENQASM 2.0
//! subset (no mcx), and a JSON mirror of the native structure.

use super::{Circuit, CircuitError, Gate, RegisterLayout, WireRole};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircuitFormat {
    Native,
    Qasm2,
    Json,
}

pub fn serialize(circuit: &Circuit, format: CircuitFormat) -> Result<String, CircuitError> {
    match format {
        CircuitFormat::Native => Ok(to_native(circuit)),
        CircuitFormat::Qasm2 => to_qasm2(circuit),
        CircuitFormat::Json => Ok(to_json(circuit)),
    }
}

pub fn deserialize(text: &str, format: CircuitFormat) -> Result<Circuit, CircuitError> {
    match format {
        CircuitFormat::Native => from_native(text),
        CircuitFormat::Qasm2 => from_qasm2(text),
        CircuitFormat::Json => from_json(text),
    }
}

fn gate_line(gate: &Gate) -> String {
    match gate {
        Gate::H(q) => format!("h {q}"),
        Gate::X(q) => format!("x {q}"),
        Gate::S(q) => format!("s {q}"),
        Gate::Sdg(q) => format!("sdg {q}"),
        Gate::T(q) => format!("t {q}"),
        Gate::Tdg(q) => format!("tdg {q}"),
        Gate::Cx(c, t) => format!("cx {c} {t}"),
        Gate::Tof(a, b, t) => format!("ccx {a} {b} {t}"),
        Gate::Mcx(cs, t) => {
            let controls: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
            format!("mcx {} {}", controls.join(","), t)
        }
    }
}

// ---------------------------------------------------------------------------
// Native format
// ---------------------------------------------------------------------------

fn to_native(circuit: &Circuit) -> String {
    let mut out = String::new();
    out.push_str(&format!("qubits {}\n", circuit.m()));
    for (i, role) in circuit.layout().roles().iter().enumerate() {
        out.push_str(&format!("role {i} {}\n", role.as_str()));
    }
    for (name, lo, hi) in circuit.layout().regs() {
        out.push_str(&format!("reg {name} {lo} {hi}\n"));
    }
    for gate in circuit.gates() {
        out.push_str(&gate_line(gate));
        out.push('\n');
    }
    out
}

fn parse_wire(token: &str, line: usize) -> Result<usize, CircuitError> {
    token.parse().map_err(|_| CircuitError::Parse {
        line,
        msg: format!("expected a wire index, got `{token}`"),
    })
}

fn from_native(text: &str) -> Result<Circuit, CircuitError> {
    let mut m: Option<usize> = None;
    let mut roles: Vec<WireRole> = Vec::new();
    let mut regs: Vec<(String, usize, usize)> = Vec::new();
    let mut gates: Vec<Gate> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let arity_err = || CircuitError::Parse {
            line,
            msg: format!("wrong number of operands for `{}`", tokens[0]),
        };
        match tokens[0] {
            "qubits" => {
                if m.is_some() {
                    return Err(CircuitError::Parse {
                        line,
                        msg: "duplicate qubits header".into(),
                    });
                }
                if tokens.len() != 2 {
                    return Err(arity_err());
                }
                let count = parse_wire(tokens[1], line)?;
                m = Some(count);
                roles = vec![WireRole::Free; count];
            }
            _ if m.is_none() => {
                return Err(CircuitError::Parse {
                    line,
                    msg: "expected `qubits M` header first".into(),
                });
            }
            "role" => {
                if tokens.len() != 3 {
                    return Err(arity_err());
                }
                let wire = parse_wire(tokens[1], line)?;
                if wire >= m.unwrap() {
                    return Err(CircuitError::WireOutOfRange {
                        gate: "role".into(),
                        wire,
                        m: m.unwrap(),
                    });
                }
                roles[wire] = WireRole::parse(tokens[2]).ok_or_else(|| CircuitError::Parse {
                    line,
                    msg: format!("unknown role `{}`", tokens[2]),
                })?;
            }
            "reg" => {
                if tokens.len() != 4 {
                    return Err(arity_err());
                }
                let lo = parse_wire(tokens[2], line)?;
                let hi = parse_wire(tokens[3], line)?;
                regs.push((tokens[1].to_string(), lo, hi));
            }
            "h" | "x" | "s" | "sdg" | "t" | "tdg" => {
                if tokens.len() != 2 {
                    return Err(arity_err());
                }
                let q = parse_wire(tokens[1], line)?;
                gates.push(match tokens[0] {
                    "h" => Gate::H(q),
                    "x" => Gate::X(q),
                    "s" => Gate::S(q),
                    "sdg" => Gate::Sdg(q),
                    "t" => Gate::T(q),
                    _ => Gate::Tdg(q),
                });
            }
            "cx" => {
                if tokens.len() != 3 {
                    return Err(arity_err());
                }
                gates.push(Gate::Cx(
                    parse_wire(tokens[1], line)?,
                    parse_wire(tokens[2], line)?,
                ));
            }
            "ccx" => {
                if tokens.len() != 4 {
                    return Err(arity_err());
                }
                gates.push(Gate::Tof(
                    parse_wire(tokens[1], line)?,
                    parse_wire(tokens[2], line)?,
                    parse_wire(tokens[3], line)?,
                ));
            }
            "mcx" => {
                if tokens.len() != 3 {
                    return Err(arity_err());
                }
                let controls: Result<Vec<usize>, _> =
                    tokens[1].split(',').map(|t| parse_wire(t, line)).collect();
                gates.push(Gate::Mcx(controls?, parse_wire(tokens[2], line)?));
            }
            other => {
                return Err(CircuitError::Parse {
                    line,
                    msg: format!("unknown directive `{other}`"),
                });
            }
        }
        if let Some(gate) = gates.last() {
            gate.validate(m.unwrap())?;
        }
    }

    let m = m.ok_or(CircuitError::Parse {
        line: 1,
        msg: "missing `qubits M` header".into(),
    })?;
    debug_assert_eq!(roles.len(), m);
    let layout = RegisterLayout::new(roles, regs)?;
    Circuit::new(layout, gates)
}

// ---------------------------------------------------------------------------
// OPENQASM 2.0 subset
// ---------------------------------------------------------------------------

fn to_qasm2(circuit: &Circuit) -> Result<String, CircuitError> {
    if circuit.gates().iter().any(|g| matches!(g, Gate::Mcx(..))) {
        return Err(CircuitError::McxInQasm);
    }
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\n");
    out.push_str("include \"qelib1.inc\";\n");
    for (i, role) in circuit.layout().roles().iter().enumerate() {
        out.push_str(&format!("// role {i} {}\n", role.as_str()));
    }
    out.push_str(&format!("qreg q[{}];\n", circuit.m()));
    for gate in circuit.gates() {
        let args: Vec<String> = gate.wires().iter().map(|w| format!("q[{w}]")).collect();
        out.push_str(&format!("{} {};\n", gate.kind_name(), args.join(",")));
    }
    Ok(out)
}

fn parse_qasm_arg(token: &str, line: usize) -> Result<usize, CircuitError> {
    let inner = token
        .strip_prefix("q[")
        .and_then(|rest| rest.strip_suffix(']'))
        .ok_or_else(|| CircuitError::Parse {
            line,
            msg: format!("expected `q[i]`, got `{token}`"),
        })?;
    parse_wire(inner, line)
}

fn from_qasm2(text: &str) -> Result<Circuit, CircuitError> {
    let mut saw_version = false;
    let mut m: Option<usize> = None;
    let mut roles: Vec<(usize, WireRole)> = Vec::new();
    let mut gates: Vec<Gate> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix("//") {
            let tokens: Vec<&str> = comment.split_whitespace().collect();
            if tokens.len() == 3 && tokens[0] == "role" {
                let wire = parse_wire(tokens[1], line)?;
                if let Some(role) = WireRole::parse(tokens[2]) {
                    roles.push((wire, role));
                }
            }
            continue;
        }
        let Some(stmt) = trimmed.strip_suffix(';') else {
            return Err(CircuitError::Parse {
                line,
                msg: "expected `;` at end of statement".into(),
            });
        };
        let stmt = stmt.trim();
        if !saw_version {
            if stmt == "OPENQASM 2.0" {
                saw_version = true;
                continue;
            }
            return Err(CircuitError::Parse {
                line,
                msg: "expected `OPENQASM 2.0;` first".into(),
            });
        }
        if stmt.starts_with("include") {
            continue;
        }
        if let Some(decl) = stmt.strip_prefix("qreg") {
            let decl = decl.trim();
            let inner = decl
                .strip_prefix("q[")
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| CircuitError::QasmUnsupported {
                    line,
                    construct: stmt.to_string(),
                })?;
            if m.is_some() {
                return Err(CircuitError::QasmUnsupported {
                    line,
                    construct: "second qreg".into(),
                });
            }
            m = Some(parse_wire(inner, line)?);
            continue;
        }
        let Some(m_val) = m else {
            return Err(CircuitError::Parse {
                line,
                msg: "gate before qreg declaration".into(),
            });
        };
        let (name, rest) =
            stmt.split_once(char::is_whitespace)
                .ok_or_else(|| CircuitError::QasmUnsupported {
                    line,
                    construct: stmt.to_string(),
                })?;
        if !matches!(name, "h" | "x" | "s" | "sdg" | "t" | "tdg" | "cx" | "ccx") {
            return Err(CircuitError::QasmUnsupported {
                line,
                construct: name.to_string(),
            });
        }
        let args: Result<Vec<usize>, _> = rest
            .split(',')
            .map(|a| parse_qasm_arg(a.trim(), line))
            .collect();
        let args = args?;
        let arity_err = || CircuitError::Parse {
            line,
            msg: format!("wrong number of arguments for `{name}`"),
        };
        let gate = match name {
            "h" | "x" | "s" | "sdg" | "t" | "tdg" => {
                if args.len() != 1 {
                    return Err(arity_err());
                }
                match name {
                    "h" => Gate::H(args[0]),
                    "x" => Gate::X(args[0]),
                    "s" => Gate::S(args[0]),
                    "sdg" => Gate::Sdg(args[0]),
                    "t" => Gate::T(args[0]),
                    _ => Gate::Tdg(args[0]),
                }
            }
            "cx" => {
                if args.len() != 2 {
                    return Err(arity_err());
                }
                Gate::Cx(args[0], args[1])
            }
            "ccx" => {
                if args.len() != 3 {
                    return Err(arity_err());
                }
                Gate::Tof(args[0], args[1], args[2])
            }
            other => {
                return Err(CircuitError::QasmUnsupported {
                    line,
                    construct: other.to_string(),
                })
            }
        };
        gate.validate(m_val)?;
        gates.push(gate);
    }

    let m = m.ok_or(CircuitError::Parse {
        line: 1,
        msg: "missing qreg declaration".into(),
    })?;
    let mut role_vec = vec![WireRole::Free; m];
    for (wire, role) in roles {
        if wire < m {
            role_vec[wire] = role;
        }
    }
    let layout = RegisterLayout::new(role_vec, Vec::new())?;
    Circuit::new(layout, gates)
}

// ---------------------------------------------------------------------------
// JSON mirror
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum GateDoc {
    H { q: usize },
    X { q: usize },
    S { q: usize },
    Sdg { q: usize },
    T { q: usize },
    Tdg { q: usize },
    Cx { control: usize, target: usize },
    Ccx { c0: usize, c1: usize, target: usize },
    Mcx { controls: Vec<usize>, target: usize },
}

#[derive(Serialize, Deserialize)]
struct RegDoc {
    name: String,
    lo: usize,
    hi: usize,
}

#[derive(Serialize, Deserialize)]
struct CircuitDoc {
    qubits: usize,
    roles: Vec<WireRole>,
    regs: Vec<RegDoc>,
    gates: Vec<GateDoc>,
}

impl From<&Gate> for GateDoc {
    fn from(gate: &Gate) -> Self {
        match gate {
            Gate::H(q) => GateDoc::H { q: *q },
            Gate::X(q) => GateDoc::X { q: *q },
            Gate::S(q) => GateDoc::S { q: *q },
            Gate::Sdg(q) => GateDoc::Sdg { q: *q },
            Gate::T(q) => GateDoc::T { q: *q },
            Gate::Tdg(q) => GateDoc::Tdg { q: *q },
            Gate::Cx(c, t) => GateDoc::Cx {
                control: *c,
                target: *t,
            },
            Gate::Tof(a, b, t) => GateDoc::Ccx {
                c0: *a,
                c1: *b,
                target: *t,
            },
            Gate::Mcx(cs, t) => GateDoc::Mcx {
                controls: cs.clone(),
                target: *t,
            },
        }
    }
}

impl From<GateDoc> for Gate {
    fn from(doc: GateDoc) -> Self {
        match doc {
            GateDoc::H { q } => Gate::H(q),
            GateDoc::X { q } => Gate::X(q),
            GateDoc::S { q } => Gate::S(q),
            GateDoc::Sdg { q } => Gate::Sdg(q),
            GateDoc::T { q } => Gate::T(q),
            GateDoc::Tdg { q } => Gate::Tdg(q),
            GateDoc::Cx { control, target } => Gate::Cx(control, target),
            GateDoc::Ccx { c0, c1, target } => Gate::Tof(c0, c1, target),
            GateDoc::Mcx { controls, target } => Gate::Mcx(controls, target),
        }
    }
}

fn to_json(circuit: &Circuit) -> String {
    let doc = CircuitDoc {
        qubits: circuit.m(),
        roles: circuit.layout().roles().to_vec(),
        regs: circuit
            .layout()
            .regs()
            .iter()
            .map(|(name, lo, hi)| RegDoc {
                name: name.clone(),
                lo: *lo,
                hi: *hi,
            })
            .collect(),
        gates: circuit.gates().iter().map(GateDoc::from).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("circuit docs always serialize")
}

fn from_json(text: &str) -> Result<Circuit, CircuitError> {
    let doc: CircuitDoc =
        serde_json::from_str(text).map_err(|e| CircuitError::Json(e.to_string()))?;
    if doc.roles.len() != doc.qubits {
        return Err(CircuitError::RoleCount {
            m: doc.qubits,
            got: doc.roles.len(),
        });
    }
    let layout = RegisterLayout::new(
        doc.roles,
        doc.regs.into_iter().map(|r| (r.name, r.lo, r.hi)).collect(),
    )?;
    Circuit::new(layout, doc.gates.into_iter().map(Gate::from).collect())
}
