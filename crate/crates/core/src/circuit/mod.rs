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

//! Circuit intermediate representation: gates over indexed wires, register
//! layout with ancilla roles, gate classification, resource counting, and
//! rewrites (inversion, strict H+TOF lowering).

pub mod format;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A primitive gate. Wire operands are indices into the layout; all operands
/// of one gate are pairwise distinct. `Mcx` carries three or more controls;
/// smaller controlled-X gates are `X`/`Cx`/`Tof`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gate {
    H(usize),
    X(usize),
    S(usize),
    Sdg(usize),
    T(usize),
    Tdg(usize),
    Cx(usize, usize),
    Tof(usize, usize, usize),
    Mcx(Vec<usize>, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("gate {gate} uses wire {wire} but the circuit has {m} wires")]
    WireOutOfRange { gate: String, wire: usize, m: usize },
    #[error("gate {gate} repeats wire {wire}")]
    DuplicateOperand { gate: String, wire: usize },
    #[error("mcx requires at least 3 controls, got {got}")]
    TooFewControls { got: usize },
    #[error("layout declares {m} wires but {got} roles")]
    RoleCount { m: usize, got: usize },
    #[error("{m} wires exceed the 64-wire limit of the basis-key representation")]
    TooManyWires { m: usize },
    #[error("register `{name}` span {lo}..{hi} is invalid for {m} wires")]
    BadRegisterSpan {
        name: String,
        lo: usize,
        hi: usize,
        m: usize,
    },
    #[error("registers `{first}` and `{second}` overlap")]
    RegisterOverlap { first: String, second: String },
    #[error("assignment has {got} bits but the layout has {want} free wires")]
    AssignmentLength { want: usize, got: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: unsupported qasm2 construct `{construct}`")]
    QasmUnsupported { line: usize, construct: String },
    #[error("qasm2 cannot express mcx; lower the circuit first")]
    McxInQasm,
    #[error("strict H+TOF lowering does not accept {kind} gates")]
    NotHTofLowerable { kind: String },
    #[error("json: {0}")]
    Json(String),
}

impl Gate {
    /// Operand wires in declaration order (controls before targets).
    pub fn wires(&self) -> Vec<usize> {
        match self {
            Gate::H(q) | Gate::X(q) | Gate::S(q) | Gate::Sdg(q) | Gate::T(q) | Gate::Tdg(q) => {
                vec![*q]
            }
            Gate::Cx(c, t) => vec![*c, *t],
            Gate::Tof(a, b, t) => vec![*a, *b, *t],
            Gate::Mcx(cs, t) => {
                let mut w = cs.clone();
                w.push(*t);
                w
            }
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Gate::H(_) => "h",
            Gate::X(_) => "x",
            Gate::S(_) => "s",
            Gate::Sdg(_) => "sdg",
            Gate::T(_) => "t",
            Gate::Tdg(_) => "tdg",
            Gate::Cx(..) => "cx",
            Gate::Tof(..) => "ccx",
            Gate::Mcx(..) => "mcx",
        }
    }

    pub fn validate(&self, m: usize) -> Result<(), CircuitError> {
        if let Gate::Mcx(cs, _) = self {
            if cs.len() < 3 {
                return Err(CircuitError::TooFewControls { got: cs.len() });
            }
        }
        let wires = self.wires();
        for (i, &w) in wires.iter().enumerate() {
            if w >= m {
                return Err(CircuitError::WireOutOfRange {
                    gate: self.kind_name().into(),
                    wire: w,
                    m,
                });
            }
            if wires[..i].contains(&w) {
                return Err(CircuitError::DuplicateOperand {
                    gate: self.kind_name().into(),
                    wire: w,
                });
            }
        }
        Ok(())
    }

    /// The inverse gate: `S`/`T` swap with their daggers, the rest are
    /// self-inverse.
    pub fn inverse(&self) -> Gate {
        match self {
            Gate::S(q) => Gate::Sdg(*q),
            Gate::Sdg(q) => Gate::S(*q),
            Gate::T(q) => Gate::Tdg(*q),
            Gate::Tdg(q) => Gate::T(*q),
            other => other.clone(),
        }
    }
}

/// Initial value of a wire: a circuit input or an ancilla pinned to 0 or 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WireRole {
    Free,
    Anc0,
    Anc1,
}

impl WireRole {
    pub fn as_str(&self) -> &'static str {
        match self {
            WireRole::Free => "free",
            WireRole::Anc0 => "anc0",
            WireRole::Anc1 => "anc1",
        }
    }

    pub fn parse(text: &str) -> Option<WireRole> {
        match text {
            "free" => Some(WireRole::Free),
            "anc0" => Some(WireRole::Anc0),
            "anc1" => Some(WireRole::Anc1),
            _ => None,
        }
    }
}

/// Wire count, per-wire roles, and named contiguous register spans
/// (inclusive bounds).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterLayout {
    m: usize,
    roles: Vec<WireRole>,
    regs: Vec<(String, usize, usize)>,
}

impl RegisterLayout {
    pub fn new(
        roles: Vec<WireRole>,
        regs: Vec<(String, usize, usize)>,
    ) -> Result<Self, CircuitError> {
        let m = roles.len();
        if m > 64 {
            return Err(CircuitError::TooManyWires { m });
        }
        for (name, lo, hi) in &regs {
            if lo > hi || *hi >= m {
                return Err(CircuitError::BadRegisterSpan {
                    name: name.clone(),
                    lo: *lo,
                    hi: *hi,
                    m,
                });
            }
        }
        for (i, (name_a, lo_a, hi_a)) in regs.iter().enumerate() {
            for (name_b, lo_b, hi_b) in &regs[..i] {
                if lo_a <= hi_b && lo_b <= hi_a {
                    return Err(CircuitError::RegisterOverlap {
                        first: name_b.clone(),
                        second: name_a.clone(),
                    });
                }
            }
        }
        Ok(RegisterLayout { m, roles, regs })
    }

    /// All-free layout over `m` wires.
    pub fn free(m: usize) -> Self {
        assert!(m <= 64, "basis keys are u64");
        RegisterLayout {
            m,
            roles: vec![WireRole::Free; m],
            regs: Vec::new(),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn roles(&self) -> &[WireRole] {
        &self.roles
    }

    pub fn regs(&self) -> &[(String, usize, usize)] {
        &self.regs
    }

    pub fn register(&self, name: &str) -> Option<(usize, usize)> {
        self.regs
            .iter()
            .find(|(n, _, _)| n == name)
            .map(|(_, lo, hi)| (*lo, *hi))
    }

    /// Free wires in increasing index order.
    pub fn free_wires(&self) -> Vec<usize> {
        (0..self.m)
            .filter(|&i| self.roles[i] == WireRole::Free)
            .collect()
    }

    /// Packs the initial basis state: ancilla-1 wires set, free wires taken
    /// from `assignment` in increasing wire order. Bit `i` of the key is
    /// wire `i`.
    pub fn initial_key(&self, assignment: &[bool]) -> Result<u64, CircuitError> {
        let free = self.free_wires();
        if assignment.len() != free.len() {
            return Err(CircuitError::AssignmentLength {
                want: free.len(),
                got: assignment.len(),
            });
        }
        let mut key = 0u64;
        for (i, role) in self.roles.iter().enumerate() {
            if *role == WireRole::Anc1 {
                key |= 1 << i;
            }
        }
        for (&wire, &bit) in free.iter().zip(assignment) {
            if bit {
                key |= 1 << wire;
            }
        }
        Ok(key)
    }
}

/// An ordered gate list over a register layout. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    layout: RegisterLayout,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(layout: RegisterLayout, gates: Vec<Gate>) -> Result<Self, CircuitError> {
        for g in &gates {
            g.validate(layout.m())?;
        }
        Ok(Circuit { layout, gates })
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn m(&self) -> usize {
        self.layout.m()
    }

    /// Gates reversed with each gate inverted; composing with the original
    /// yields the identity.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            layout: self.layout.clone(),
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Gate classification and resource counting
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GateClass {
    Clifford,
    NonClifford,
    Superposition,
    Entanglement,
}

pub const ALL_CLASSES: [GateClass; 4] = [
    GateClass::Clifford,
    GateClass::NonClifford,
    GateClass::Superposition,
    GateClass::Entanglement,
];

/// Classifies a gate: H is the only superposition gate here; CX, TOF and MCX
/// entangle; T-family and (multi-)controlled-controlled X are non-Clifford.
/// X permutes one qubit's basis states, so it is Clifford and neither a
/// superposition nor an entanglement gate.
pub fn classify_gate(gate: &Gate) -> Vec<GateClass> {
    match gate {
        Gate::H(_) => vec![GateClass::Clifford, GateClass::Superposition],
        Gate::X(_) | Gate::S(_) | Gate::Sdg(_) => vec![GateClass::Clifford],
        Gate::Cx(..) => vec![GateClass::Clifford, GateClass::Entanglement],
        Gate::T(_) | Gate::Tdg(_) => vec![GateClass::NonClifford],
        Gate::Tof(..) | Gate::Mcx(..) => {
            vec![GateClass::NonClifford, GateClass::Entanglement]
        }
    }
}

/// Per-class tallies, used for both counts and depths.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ClassTally {
    pub clifford: usize,
    pub non_clifford: usize,
    pub superposition: usize,
    pub entanglement: usize,
}

impl ClassTally {
    pub fn get(&self, class: GateClass) -> usize {
        match class {
            GateClass::Clifford => self.clifford,
            GateClass::NonClifford => self.non_clifford,
            GateClass::Superposition => self.superposition,
            GateClass::Entanglement => self.entanglement,
        }
    }

    fn bump(&mut self, class: GateClass) {
        match class {
            GateClass::Clifford => self.clifford += 1,
            GateClass::NonClifford => self.non_clifford += 1,
            GateClass::Superposition => self.superposition += 1,
            GateClass::Entanglement => self.entanglement += 1,
        }
    }
}

/// Gate counts by kind and class, plus ASAP depths. `s`/`t` include the
/// dagger variants. MCX gates count as `mcx` before lowering and as the
/// `tof` gates they expand to afterwards.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ResourceReport {
    pub h: usize,
    pub x: usize,
    pub s: usize,
    pub t: usize,
    pub cx: usize,
    pub tof: usize,
    pub mcx: usize,
    pub total: usize,
    pub total_depth: usize,
    pub class_counts: ClassTally,
    pub class_depths: ClassTally,
}

/// Counts gates and computes depths under earliest-possible greedy layering:
/// a gate lands one layer after the latest gate sharing any of its wires,
/// and a class depth is the number of layers holding at least one gate of
/// that class.
pub fn count_resources(circuit: &Circuit) -> ResourceReport {
    let mut report = ResourceReport::default();
    let mut wire_layer = vec![0usize; circuit.m()];
    // class -> set of occupied layers, tracked as bitmaps over layer index
    let mut class_layers: [Vec<bool>; 4] = Default::default();

    for gate in circuit.gates() {
        match gate {
            Gate::H(_) => report.h += 1,
            Gate::X(_) => report.x += 1,
            Gate::S(_) | Gate::Sdg(_) => report.s += 1,
            Gate::T(_) | Gate::Tdg(_) => report.t += 1,
            Gate::Cx(..) => report.cx += 1,
            Gate::Tof(..) => report.tof += 1,
            Gate::Mcx(..) => report.mcx += 1,
        }
        report.total += 1;

        let layer = gate
            .wires()
            .iter()
            .map(|&w| wire_layer[w])
            .max()
            .unwrap_or(0)
            + 1;
        for &w in &gate.wires() {
            wire_layer[w] = layer;
        }
        report.total_depth = report.total_depth.max(layer);

        for class in classify_gate(gate) {
            report.class_counts.bump(class);
            let layers = &mut class_layers[class as usize];
            if layers.len() < layer {
                layers.resize(layer, false);
            }
            layers[layer - 1] = true;
        }
    }

    for class in ALL_CLASSES {
        let occupied = class_layers[class as usize].iter().filter(|&&b| b).count();
        match class {
            GateClass::Clifford => report.class_depths.clifford = occupied,
            GateClass::NonClifford => report.class_depths.non_clifford = occupied,
            GateClass::Superposition => report.class_depths.superposition = occupied,
            GateClass::Entanglement => report.class_depths.entanglement = occupied,
        }
    }
    report
}

// ---------------------------------------------------------------------------
// Strict H+TOF lowering
// ---------------------------------------------------------------------------

/// Rewrites an H/X/CX/TOF/MCX circuit into H and TOF only. X and CX borrow
/// constant controls from shared ancilla-1 wires appended to the layout
/// (one for CX, two for X); MCX gates expand through the clean-ancilla
/// ladder. The action on the original wires is unchanged.
pub fn lower_strict_h_tof(circuit: &Circuit) -> Result<Circuit, CircuitError> {
    let mut need_u1 = false;
    let mut need_u2 = false;
    let mut mcx_scratch = 0usize;
    for gate in circuit.gates() {
        match gate {
            Gate::H(_) | Gate::Tof(..) => {}
            Gate::X(_) => {
                need_u1 = true;
                need_u2 = true;
            }
            Gate::Cx(..) => need_u1 = true,
            Gate::Mcx(cs, _) => mcx_scratch = mcx_scratch.max(cs.len() - 2),
            other => {
                return Err(CircuitError::NotHTofLowerable {
                    kind: other.kind_name().into(),
                })
            }
        }
    }

    let m = circuit.m();
    let mut roles = circuit.layout().roles().to_vec();
    let mut next = m;
    let u1 = need_u1.then(|| {
        roles.push(WireRole::Anc1);
        next += 1;
        next - 1
    });
    let u2 = need_u2.then(|| {
        roles.push(WireRole::Anc1);
        next += 1;
        next - 1
    });
    let scratch: Vec<usize> = (next..next + mcx_scratch).collect();
    roles.extend(std::iter::repeat_n(WireRole::Anc0, mcx_scratch));

    let mut gates = Vec::with_capacity(circuit.gates().len());
    for gate in circuit.gates() {
        match gate {
            Gate::H(q) => gates.push(Gate::H(*q)),
            Gate::Tof(a, b, t) => gates.push(Gate::Tof(*a, *b, *t)),
            Gate::X(t) => gates.push(Gate::Tof(u1.unwrap(), u2.unwrap(), *t)),
            Gate::Cx(c, t) => gates.push(Gate::Tof(*c, u1.unwrap(), *t)),
            Gate::Mcx(cs, t) => {
                let ladder = crate::synth::lower_mcx(cs, *t, &scratch)
                    .expect("scratch pool sized for the largest mcx");
                gates.extend(ladder);
            }
            _ => unreachable!("rejected above"),
        }
    }

    let layout = RegisterLayout::new(roles, circuit.layout().regs().to_vec())?;
    Circuit::new(layout, gates)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free_circuit(m: usize, gates: Vec<Gate>) -> Circuit {
        Circuit::new(RegisterLayout::free(m), gates).unwrap()
    }

    #[test]
    fn gate_validation() {
        assert!(Gate::H(0).validate(1).is_ok());
        assert!(matches!(
            Gate::H(5).validate(1),
            Err(CircuitError::WireOutOfRange { wire: 5, m: 1, .. })
        ));
        assert!(matches!(
            Gate::Cx(2, 2).validate(3),
            Err(CircuitError::DuplicateOperand { wire: 2, .. })
        ));
        assert!(matches!(
            Gate::Mcx(vec![0, 1], 2).validate(3),
            Err(CircuitError::TooFewControls { got: 2 })
        ));
        assert!(Gate::Mcx(vec![0, 1, 2], 3).validate(4).is_ok());
    }

    #[test]
    fn classification_table() {
        use GateClass::*;
        assert_eq!(classify_gate(&Gate::H(0)), vec![Clifford, Superposition]);
        assert_eq!(classify_gate(&Gate::X(0)), vec![Clifford]);
        assert_eq!(classify_gate(&Gate::S(0)), vec![Clifford]);
        assert_eq!(classify_gate(&Gate::Sdg(0)), vec![Clifford]);
        assert_eq!(classify_gate(&Gate::Cx(0, 1)), vec![Clifford, Entanglement]);
        assert_eq!(classify_gate(&Gate::T(0)), vec![NonClifford]);
        assert_eq!(classify_gate(&Gate::Tdg(0)), vec![NonClifford]);
        assert_eq!(
            classify_gate(&Gate::Tof(0, 1, 2)),
            vec![NonClifford, Entanglement]
        );
        assert_eq!(
            classify_gate(&Gate::Mcx(vec![0, 1, 2], 3)),
            vec![NonClifford, Entanglement]
        );
    }

    #[test]
    fn resource_counts_and_depth() {
        // H(0) and H(1) share layer 1, the CX lands in layer 2.
        let c = free_circuit(2, vec![Gate::H(0), Gate::H(1), Gate::Cx(0, 1)]);
        let r = count_resources(&c);
        assert_eq!((r.h, r.cx, r.total), (2, 1, 3));
        assert_eq!(r.total_depth, 2);
        assert_eq!(r.class_depths.superposition, 1);
        assert_eq!(r.class_depths.entanglement, 1);
        assert_eq!(r.class_counts.clifford, 3);

        let empty = free_circuit(1, vec![]);
        let r = count_resources(&empty);
        assert_eq!(r.total, 0);
        assert_eq!(r.total_depth, 0);

        // Two T gates on the same wire occupy two layers.
        let c = free_circuit(1, vec![Gate::T(0), Gate::T(0)]);
        let r = count_resources(&c);
        assert_eq!(r.t, 2);
        assert_eq!(r.total_depth, 2);
        assert_eq!(r.class_depths.non_clifford, 2);
    }

    /// Brute-force longest wire-sharing chain in the gate dependency graph.
    fn longest_chain(gates: &[Gate]) -> usize {
        let shares = |a: &Gate, b: &Gate| a.wires().iter().any(|w| b.wires().contains(w));
        let mut best = vec![0usize; gates.len()];
        for i in 0..gates.len() {
            best[i] = 1
                + (0..i)
                    .filter(|&j| shares(&gates[j], &gates[i]))
                    .map(|j| best[j])
                    .max()
                    .unwrap_or(0);
        }
        best.into_iter().max().unwrap_or(0)
    }

    #[test]
    fn depth_matches_longest_dependency_chain() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let m = rng.gen_range(2..7);
            let len = rng.gen_range(0..50);
            let mut gates = Vec::new();
            for _ in 0..len {
                let q = rng.gen_range(0..m);
                gates.push(match rng.gen_range(0..4) {
                    0 => Gate::H(q),
                    1 => Gate::T(q),
                    2 => {
                        let t = (q + rng.gen_range(1..m)) % m;
                        Gate::Cx(q, t)
                    }
                    _ => {
                        if m < 3 {
                            Gate::X(q)
                        } else {
                            let a = q;
                            let b = (q + 1) % m;
                            let t = (q + 2) % m;
                            Gate::Tof(a, b, t)
                        }
                    }
                });
            }
            let c = free_circuit(m, gates);
            let r = count_resources(&c);
            assert_eq!(r.total_depth, longest_chain(c.gates()));
            assert_eq!(r.total, r.h + r.x + r.s + r.t + r.cx + r.tof + r.mcx);
            for class in ALL_CLASSES {
                assert!(r.class_counts.get(class) <= r.total);
                assert!(r.class_depths.get(class) <= r.total_depth);
            }
        }
    }

    #[test]
    fn inverse_examples() {
        let c = free_circuit(1, vec![Gate::H(0), Gate::T(0)]);
        assert_eq!(c.inverse().gates(), &[Gate::Tdg(0), Gate::H(0)]);

        let empty = free_circuit(1, vec![]);
        assert_eq!(empty.inverse().gates(), &[] as &[Gate]);
    }

    #[test]
    fn lowering_examples() {
        // X borrows two constant controls.
        let c = free_circuit(1, vec![Gate::X(0)]);
        let lowered = lower_strict_h_tof(&c).unwrap();
        assert_eq!(lowered.m(), 3);
        assert_eq!(lowered.gates(), &[Gate::Tof(1, 2, 0)]);
        assert_eq!(lowered.layout().roles()[1], WireRole::Anc1);
        assert_eq!(lowered.layout().roles()[2], WireRole::Anc1);

        // CX borrows one.
        let c = free_circuit(2, vec![Gate::Cx(0, 1)]);
        let lowered = lower_strict_h_tof(&c).unwrap();
        assert_eq!(lowered.m(), 3);
        assert_eq!(lowered.gates(), &[Gate::Tof(0, 2, 1)]);

        // T-family gates are rejected.
        let c = free_circuit(1, vec![Gate::T(0)]);
        assert!(matches!(
            lower_strict_h_tof(&c),
            Err(CircuitError::NotHTofLowerable { .. })
        ));
    }

    #[test]
    fn layout_validation() {
        assert!(matches!(
            RegisterLayout::new(vec![WireRole::Free], vec![("a".into(), 0, 1)]),
            Err(CircuitError::BadRegisterSpan { .. })
        ));
        assert!(matches!(
            RegisterLayout::new(
                vec![WireRole::Free; 4],
                vec![("a".into(), 0, 2), ("b".into(), 2, 3)]
            ),
            Err(CircuitError::RegisterOverlap { .. })
        ));
    }

    #[test]
    fn initial_key_packing() {
        let layout = RegisterLayout::new(
            vec![
                WireRole::Anc1,
                WireRole::Free,
                WireRole::Anc0,
                WireRole::Free,
            ],
            vec![],
        )
        .unwrap();
        assert_eq!(layout.free_wires(), vec![1, 3]);
        assert_eq!(layout.initial_key(&[true, false]).unwrap(), 0b0011);
        assert_eq!(layout.initial_key(&[false, true]).unwrap(), 0b1001);
        assert!(matches!(
            layout.initial_key(&[true]),
            Err(CircuitError::AssignmentLength { want: 2, got: 1 })
        ));
    }
}
