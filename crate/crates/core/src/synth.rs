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

//! Compiles Boolean formulas into circuits: the phase oracle mapping
//! `|x> -> (-1)^phi(x) |x>`, the Deutsch-Jozsa sandwich `H U H`, the gadget
//! that conditions a gate G on the DJ register reading all-ones, and the
//! full reduction circuit whose action is the identity exactly when the
//! formula is balanced. Also provides the analytic state oracles computed
//! by direct summation, independent of the gate-level path.

use crate::circuit::{Circuit, Gate, RegisterLayout, WireRole};
use crate::exactsim::{RingAmplitude, SparseState};
use crate::formula::{FormulaAst, FormulaError, Node, DEFAULT_VAR_GUARD};
use num_bigint::BigInt;
use std::collections::BTreeMap;
use std::ops::Range;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("mcx lowering requires at least 3 controls, got {got}")]
    TooFewControls { got: usize },
    #[error("mcx lowering over {controls} controls needs {needed} scratch wires, got {got}")]
    InsufficientScratch {
        controls: usize,
        needed: usize,
        got: usize,
    },
    #[error("basis input {x} out of range for {wires} wires")]
    BasisOutOfRange { x: u64, wires: usize },
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

/// A phase-oracle block: `|x>` on `data_span` picks up `(-1)^phi(x)`, with
/// the kickback wire restored to 1 and all scratch wires restored to 0 on
/// every basis input (compute-uncompute discipline).
#[derive(Debug, Clone)]
pub struct OracleFragment {
    pub circuit: Circuit,
    pub data_span: Range<usize>,
    pub kickback_wire: usize,
    pub scratch_span: Range<usize>,
}

/// The gate G parameterizing the gadget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GadgetGate {
    Cx,
    Tof,
}

impl GadgetGate {
    pub fn wire_count(&self) -> usize {
        match self {
            GadgetGate::Cx => 2,
            GadgetGate::Tof => 3,
        }
    }

    /// Basis action on this gate's own wires (bit 0 = first wire).
    pub fn apply_key(&self, x: u64) -> u64 {
        match self {
            GadgetGate::Cx => x ^ ((x & 1) << 1),
            GadgetGate::Tof => x ^ (((x & (x >> 1)) & 1) << 2),
        }
    }
}

/// Wire map of the reduction circuit. The only free inputs are `w_a`, `w_b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionLayout {
    pub n: usize,
    pub r1: Range<usize>,
    pub w_h: usize,
    pub w_t1: usize,
    pub r2: Range<usize>,
    pub w_a: usize,
    pub w_b: usize,
    pub w_t2: usize,
    pub kickback: usize,
    pub scratch: Range<usize>,
}

// ---------------------------------------------------------------------------
// Formula compute network
// ---------------------------------------------------------------------------

fn scratch_nodes(node: &Node) -> usize {
    match node {
        Node::Var(_) => 1,
        Node::Not(c) => scratch_nodes(c),
        Node::And(l, r) | Node::Or(l, r) => 1 + scratch_nodes(l) + scratch_nodes(r),
    }
}

/// Number of scratch wires the phase oracle for this formula consumes: one
/// per Var/And/Or node (Not toggles its child's flag in place).
pub fn oracle_scratch_count(formula: &FormulaAst) -> usize {
    scratch_nodes(formula.root())
}

/// Emits the gates computing `node` into a fresh scratch flag, returning the
/// flag wire. And maps to TOF, Not to X, Or to De Morgan with X and TOF;
/// Var copies its data wire so sibling subtrees never read toggled inputs.
fn emit_compute(
    node: &Node,
    data: &[usize],
    scratch: &[usize],
    next: &mut usize,
    gates: &mut Vec<Gate>,
) -> usize {
    match node {
        Node::Var(i) => {
            let flag = scratch[*next];
            *next += 1;
            gates.push(Gate::Cx(data[i - 1], flag));
            flag
        }
        Node::Not(child) => {
            let flag = emit_compute(child, data, scratch, next, gates);
            gates.push(Gate::X(flag));
            flag
        }
        Node::And(l, r) => {
            let fl = emit_compute(l, data, scratch, next, gates);
            let fr = emit_compute(r, data, scratch, next, gates);
            let flag = scratch[*next];
            *next += 1;
            gates.push(Gate::Tof(fl, fr, flag));
            flag
        }
        Node::Or(l, r) => {
            let fl = emit_compute(l, data, scratch, next, gates);
            let fr = emit_compute(r, data, scratch, next, gates);
            let flag = scratch[*next];
            *next += 1;
            gates.push(Gate::X(fl));
            gates.push(Gate::X(fr));
            gates.push(Gate::Tof(fl, fr, flag));
            gates.push(Gate::X(flag));
            gates.push(Gate::X(fl));
            gates.push(Gate::X(fr));
            flag
        }
    }
}

/// Full oracle block: compute the flag, kick the phase through H-CX-H on the
/// |1>-prepared kickback wire, then uncompute. All compute gates are
/// self-inverse, so the reversed prefix is the exact inverse.
fn phase_oracle_gates(
    formula: &FormulaAst,
    data: &[usize],
    kickback: usize,
    scratch: &[usize],
) -> Vec<Gate> {
    let mut compute = Vec::new();
    let mut next = 0usize;
    let flag = emit_compute(formula.root(), data, scratch, &mut next, &mut compute);
    let mut gates = compute.clone();
    gates.push(Gate::H(kickback));
    gates.push(Gate::Cx(flag, kickback));
    gates.push(Gate::H(kickback));
    gates.extend(compute.into_iter().rev());
    gates
}

/// DJ block on the given data wires: `H^n`, oracle, `H^n`.
fn dj_gates(formula: &FormulaAst, data: &[usize], kickback: usize, scratch: &[usize]) -> Vec<Gate> {
    let mut gates: Vec<Gate> = data.iter().map(|&q| Gate::H(q)).collect();
    gates.extend(phase_oracle_gates(formula, data, kickback, scratch));
    gates.extend(data.iter().map(|&q| Gate::H(q)));
    gates
}

// ---------------------------------------------------------------------------
// Synthesis entry points
// ---------------------------------------------------------------------------

/// Builds the standalone phase oracle: data wires 0..n (free), kickback
/// (ancilla-1), scratch (ancilla-0).
pub fn synth_phase_oracle(formula: &FormulaAst) -> OracleFragment {
    let n = formula.n_vars();
    let s = oracle_scratch_count(formula);
    let kickback = n;
    let data: Vec<usize> = (0..n).collect();
    let scratch: Vec<usize> = (n + 1..n + 1 + s).collect();

    let mut roles = vec![WireRole::Free; n];
    roles.push(WireRole::Anc1);
    roles.extend(std::iter::repeat_n(WireRole::Anc0, s));
    let regs = vec![
        ("data".to_string(), 0, n - 1),
        ("kick".to_string(), n, n),
        ("scratch".to_string(), n + 1, n + s),
    ];
    let layout = RegisterLayout::new(roles, regs).expect("oracle layout is well-formed");
    let gates = phase_oracle_gates(formula, &data, kickback, &scratch);
    let circuit = Circuit::new(layout, gates).expect("oracle gates are in range");
    OracleFragment {
        circuit,
        data_span: 0..n,
        kickback_wire: kickback,
        scratch_span: n + 1..n + 1 + s,
    }
}

/// Builds the Deutsch-Jozsa circuit `H^n . U+-_phi . H^n` over the oracle's
/// wire plan.
pub fn synth_dj(formula: &FormulaAst) -> Circuit {
    let n = formula.n_vars();
    let s = oracle_scratch_count(formula);
    let data: Vec<usize> = (0..n).collect();
    let scratch: Vec<usize> = (n + 1..n + 1 + s).collect();

    let mut roles = vec![WireRole::Free; n];
    roles.push(WireRole::Anc1);
    roles.extend(std::iter::repeat_n(WireRole::Anc0, s));
    let regs = vec![
        ("data".to_string(), 0, n - 1),
        ("kick".to_string(), n, n),
        ("scratch".to_string(), n + 1, n + s),
    ];
    let layout = RegisterLayout::new(roles, regs).expect("dj layout is well-formed");
    let gates = dj_gates(formula, &data, n, &scratch);
    Circuit::new(layout, gates).expect("dj gates are in range")
}

/// Builds the gadget: DJ on an all-ones register, G controlled on the
/// register (controls ordered register first, then G's own controls), DJ
/// again. G's wires are the free inputs.
pub fn synth_q_gadget(formula: &FormulaAst, g: GadgetGate) -> Circuit {
    let n = formula.n_vars();
    let gw = g.wire_count();
    let s = oracle_scratch_count(formula);
    let register: Vec<usize> = (0..n).collect();
    let kickback = n + gw;
    let scratch: Vec<usize> = (n + gw + 1..n + gw + 1 + s).collect();

    let mut roles = vec![WireRole::Anc1; n];
    roles.extend(std::iter::repeat_n(WireRole::Free, gw));
    roles.push(WireRole::Anc1);
    roles.extend(std::iter::repeat_n(WireRole::Anc0, s));
    let regs = vec![
        ("r".to_string(), 0, n - 1),
        ("g".to_string(), n, n + gw - 1),
        ("kick".to_string(), kickback, kickback),
        ("scratch".to_string(), n + gw + 1, n + gw + s),
    ];
    let layout = RegisterLayout::new(roles, regs).expect("gadget layout is well-formed");

    let mut gates = dj_gates(formula, &register, kickback, &scratch);
    let mut controls = register.clone();
    let target = match g {
        GadgetGate::Cx => {
            controls.push(n);
            n + 1
        }
        GadgetGate::Tof => {
            controls.push(n);
            controls.push(n + 1);
            n + 2
        }
    };
    gates.push(controlled_x(&controls, target));
    gates.extend(dj_gates(formula, &register, kickback, &scratch));
    Circuit::new(layout, gates).expect("gadget gates are in range")
}

/// Picks the right controlled-X representation for the control count.
fn controlled_x(controls: &[usize], target: usize) -> Gate {
    match controls.len() {
        0 => Gate::X(target),
        1 => Gate::Cx(controls[0], target),
        2 => Gate::Tof(controls[0], controls[1], target),
        _ => Gate::Mcx(controls.to_vec(), target),
    }
}

/// Standard compute-uncompute ladder for a k-controlled X (k >= 3), using
/// k-2 clean scratch wires and `2(k-2)+1` TOF gates.
pub fn lower_mcx(
    controls: &[usize],
    target: usize,
    scratch: &[usize],
) -> Result<Vec<Gate>, SynthError> {
    let k = controls.len();
    if k < 3 {
        return Err(SynthError::TooFewControls { got: k });
    }
    if scratch.len() < k - 2 {
        return Err(SynthError::InsufficientScratch {
            controls: k,
            needed: k - 2,
            got: scratch.len(),
        });
    }
    let mut ladder = vec![Gate::Tof(controls[0], controls[1], scratch[0])];
    for i in 1..=k - 3 {
        ladder.push(Gate::Tof(controls[i + 1], scratch[i - 1], scratch[i]));
    }
    let mut gates = ladder.clone();
    gates.push(Gate::Tof(controls[k - 1], scratch[k - 3], target));
    gates.extend(ladder.into_iter().rev());
    Ok(gates)
}

/// Emits a controlled-X over any control count, lowering through the ladder
/// when the count exceeds TOF.
fn lowered_controlled_x(controls: &[usize], target: usize, scratch: &[usize]) -> Vec<Gate> {
    if controls.len() <= 2 {
        vec![controlled_x(controls, target)]
    } else {
        lower_mcx(controls, target, scratch).expect("scratch pool sized for the reduction")
    }
}

/// Builds the reduction circuit: an upper `Q(CX, phi)` block whose CX acts
/// on an H-conjugated ancilla pair, and a lower `Q(TOF, phi)` block whose
/// TOF reads the two free inputs. The four DJ instances share one kickback
/// and one scratch pool; the multi-controlled X gates are lowered in place.
pub fn synth_reduction(formula: &FormulaAst) -> (Circuit, ReductionLayout) {
    let n = formula.n_vars();
    let s_oracle = oracle_scratch_count(formula);
    // The widest ladder has n+2 controls, needing n scratch wires.
    let s = s_oracle.max(n);

    let r1: Vec<usize> = (0..n).collect();
    let w_h = n;
    let w_t1 = n + 1;
    let r2: Vec<usize> = (n + 2..2 * n + 2).collect();
    let w_a = 2 * n + 2;
    let w_b = 2 * n + 3;
    let w_t2 = 2 * n + 4;
    let kickback = 2 * n + 5;
    let scratch: Vec<usize> = (2 * n + 6..2 * n + 6 + s).collect();

    let mut roles = Vec::new();
    roles.extend(std::iter::repeat_n(WireRole::Anc1, n)); // r1
    roles.push(WireRole::Anc0); // w_h
    roles.push(WireRole::Anc0); // w_t1
    roles.extend(std::iter::repeat_n(WireRole::Anc1, n)); // r2
    roles.push(WireRole::Free); // w_a
    roles.push(WireRole::Free); // w_b
    roles.push(WireRole::Anc0); // w_t2
    roles.push(WireRole::Anc1); // kickback
    roles.extend(std::iter::repeat_n(WireRole::Anc0, s));
    let regs = vec![
        ("r1".to_string(), 0, n - 1),
        ("wh".to_string(), w_h, w_h),
        ("wt1".to_string(), w_t1, w_t1),
        ("r2".to_string(), n + 2, 2 * n + 1),
        ("wa".to_string(), w_a, w_a),
        ("wb".to_string(), w_b, w_b),
        ("wt2".to_string(), w_t2, w_t2),
        ("kick".to_string(), kickback, kickback),
        ("scratch".to_string(), 2 * n + 6, 2 * n + 5 + s),
    ];
    let layout = RegisterLayout::new(roles, regs).expect("reduction layout is well-formed");

    let mut gates = Vec::new();
    // Upper block: Q(CX, phi) with the CX conjugated by H on w_h.
    gates.extend(dj_gates(formula, &r1, kickback, &scratch));
    gates.push(Gate::H(w_h));
    let mut upper_controls = r1.clone();
    upper_controls.push(w_h);
    gates.extend(lowered_controlled_x(&upper_controls, w_t1, &scratch));
    gates.extend(dj_gates(formula, &r1, kickback, &scratch));
    gates.push(Gate::H(w_h));
    // Lower block: Q(TOF, phi) on the free inputs.
    gates.extend(dj_gates(formula, &r2, kickback, &scratch));
    let mut lower_controls = r2.clone();
    lower_controls.push(w_a);
    lower_controls.push(w_b);
    gates.extend(lowered_controlled_x(&lower_controls, w_t2, &scratch));
    gates.extend(dj_gates(formula, &r2, kickback, &scratch));

    let circuit = Circuit::new(layout, gates).expect("reduction gates are in range");
    let layout = ReductionLayout {
        n,
        r1: 0..n,
        w_h,
        w_t1,
        r2: n + 2..2 * n + 2,
        w_a,
        w_b,
        w_t2,
        kickback,
        scratch: 2 * n + 6..2 * n + 6 + s,
    };
    (circuit, layout)
}

// ---------------------------------------------------------------------------
// Analytic state oracles (direct summation, no gates)
// ---------------------------------------------------------------------------

/// Numerator of `S(x,z) = (1/2^n) sum_w (-1)^(phi(w) + x.w + w.z)` over the
/// precomputed truth table.
fn s_numerator(phi: &[bool], n: usize, x: u64, z: u64) -> i128 {
    let mut total = 0i128;
    for w in 0..1u64 << n {
        let sign = phi[w as usize] as u32 + (x & w).count_ones() + (w & z).count_ones();
        total += if sign.is_multiple_of(2) { 1 } else { -1 };
    }
    total
}

fn truth_table(formula: &FormulaAst, guard: usize) -> Result<Vec<bool>, SynthError> {
    let n = formula.n_vars();
    if n > guard {
        return Err(FormulaError::GuardExceeded { n_vars: n, guard }.into());
    }
    Ok((0..1u64 << n).map(|w| formula.evaluate_mask(w)).collect())
}

/// Predicted DJ output `sum_z S(x,z) |z>` on the n data wires, computed by
/// direct double summation with exact dyadic amplitudes.
pub fn predicted_dj_state(formula: &FormulaAst, x: u64) -> Result<SparseState, SynthError> {
    predicted_dj_state_with_guard(formula, x, DEFAULT_VAR_GUARD)
}

pub fn predicted_dj_state_with_guard(
    formula: &FormulaAst,
    x: u64,
    guard: usize,
) -> Result<SparseState, SynthError> {
    let n = formula.n_vars();
    if x >= 1 << n {
        return Err(SynthError::BasisOutOfRange { x, wires: n });
    }
    let phi = truth_table(formula, guard)?;
    let mut entries = BTreeMap::new();
    for z in 0..1u64 << n {
        let num = s_numerator(&phi, n, x, z);
        if num != 0 {
            entries.insert(
                z,
                RingAmplitude::from_bigints(
                    [
                        BigInt::from(num),
                        BigInt::from(0),
                        BigInt::from(0),
                        BigInt::from(0),
                    ],
                    2 * n as u32,
                ),
            );
        }
    }
    Ok(SparseState::from_entries(n, entries))
}

/// Predicted gadget output `|psi>|x> + beta |psi'> (G|x>)` on the register
/// wires (low bits) and G's wires (high bits), with
/// `psi = sum_{z != 1^n} S(1^n,z) sum_w S(z,w) |w>` and
/// `psi' = sum_w S(1^n,w) |w>`, all by direct summation.
pub fn predicted_gadget_state(
    formula: &FormulaAst,
    g: GadgetGate,
    x: u64,
) -> Result<SparseState, SynthError> {
    predicted_gadget_state_with_guard(formula, g, x, DEFAULT_VAR_GUARD)
}

pub fn predicted_gadget_state_with_guard(
    formula: &FormulaAst,
    g: GadgetGate,
    x: u64,
    guard: usize,
) -> Result<SparseState, SynthError> {
    let n = formula.n_vars();
    let gw = g.wire_count();
    if x >= 1 << gw {
        return Err(SynthError::BasisOutOfRange { x, wires: gw });
    }
    let phi = truth_table(formula, guard)?;
    let all_ones = (1u64 << n) - 1;
    let size = 1usize << n;

    // Numerators over the common denominator 4^n.
    let mut acc: BTreeMap<u64, i128> = BTreeMap::new();
    for w in 0..size as u64 {
        let mut psi_num = 0i128;
        for z in 0..size as u64 {
            if z == all_ones {
                continue;
            }
            psi_num += s_numerator(&phi, n, all_ones, z) * s_numerator(&phi, n, z, w);
        }
        if psi_num != 0 {
            *acc.entry(w | (x << n)).or_insert(0) += psi_num;
        }
        let beta_branch =
            s_numerator(&phi, n, all_ones, all_ones) * s_numerator(&phi, n, all_ones, w);
        if beta_branch != 0 {
            *acc.entry(w | (g.apply_key(x) << n)).or_insert(0) += beta_branch;
        }
    }

    let mut entries = BTreeMap::new();
    for (key, num) in acc {
        if num == 0 {
            continue;
        }
        entries.insert(
            key,
            RingAmplitude::from_bigints(
                [
                    BigInt::from(num),
                    BigInt::from(0),
                    BigInt::from(0),
                    BigInt::from(0),
                ],
                4 * n as u32,
            ),
        );
    }
    Ok(SparseState::from_entries(n + gw, entries))
}
