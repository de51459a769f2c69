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

//! Semantic circuit checks: identity up to a global phase (over initialized
//! inputs and over the full unitary), superposition and non-affine
//! correlation detectors, basis preservation, a Clifford membership test by
//! Pauli conjugation, zero-budget deciders, and the end-to-end reduction
//! verifier.

use crate::circuit::{Circuit, CircuitError, Gate};
use crate::exactsim::{
    key_to_bitstring, run_circuit, unitary_column_with_guard, RingAmplitude, SimError,
};
use crate::formula::{count_sat_with_guard, FormulaAst, FormulaError, SatSummary};
use crate::synth::{synth_reduction, ReductionLayout, SynthError};
use serde::Serialize;
use std::collections::BTreeSet;
use thiserror::Error;

/// Guard limits for the exhaustive checks. Sweeping `2^f` initialized runs,
/// `2^m` columns, or `2m * 2^m` Pauli conjugations gets expensive fast;
/// these caps keep desk-scale calls honest about what they enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guards {
    pub max_free_wires: usize,
    pub max_full_qubits: usize,
    pub max_clifford_qubits: usize,
    pub max_formula_vars: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            max_free_wires: 20,
            max_full_qubits: 14,
            max_clifford_qubits: 10,
            max_formula_vars: 24,
        }
    }
}

/// Default cap on formula arity for `verify_reduction` sweeps; single
/// instances may raise it (to 5 in the CLI).
pub const DEFAULT_REDUCTION_VAR_GUARD: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("{free} free wires exceed the guard of {guard}")]
    FreeWireGuard { free: usize, guard: usize },
    #[error("{m} qubits exceed the Clifford-check guard of {guard}")]
    CliffordGuard { m: usize, guard: usize },
    #[error("{n} variables exceed the reduction guard of {guard}")]
    ReductionGuard { n: usize, guard: usize },
    #[error("zero-budget decision is unsupported for class `{class}`")]
    UnsupportedClass { class: String },
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Synth(#[from] SynthError),
}

/// Structured evidence attached to a verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A free-input assignment whose output breaks an initialized-identity
    /// check, with the offending output state.
    Assignment { input: String, output: Vec<String> },
    /// A full-space basis column breaking a column-wise check.
    Column { input: String, output: Vec<String> },
    /// An input producing a superposition, with two of its support elements.
    Superposition {
        input: String,
        first: String,
        second: String,
    },
    /// A triple inside the relation set whose XOR escapes it.
    AffineViolation {
        x: String,
        y: String,
        z: String,
        xor: String,
    },
    /// A Pauli generator whose conjugation by the circuit is not a signed
    /// Pauli, with the offending column.
    PauliConjugation {
        generator: String,
        column: String,
        output: Vec<String>,
    },
}

/// Outcome of a check. `global_phase` is set by identity checks when they
/// hold; it is always a ring unit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Witness>,
    pub global_phase: Option<RingAmplitude>,
}

impl Verdict {
    fn pass() -> Self {
        Verdict {
            holds: true,
            witness: None,
            global_phase: None,
        }
    }

    fn pass_with_phase(phase: RingAmplitude) -> Self {
        Verdict {
            holds: true,
            witness: None,
            global_phase: Some(phase),
        }
    }

    fn fail(witness: Witness) -> Self {
        Verdict {
            holds: false,
            witness: Some(witness),
            global_phase: None,
        }
    }

    fn not_detected() -> Self {
        Verdict {
            holds: false,
            witness: None,
            global_phase: None,
        }
    }

    fn detected(witness: Witness) -> Self {
        Verdict {
            holds: true,
            witness: Some(witness),
            global_phase: None,
        }
    }
}

fn assignment_bits(v: u64, free: usize) -> Vec<bool> {
    (0..free).map(|j| (v >> j) & 1 == 1).collect()
}

fn free_count_checked(circuit: &Circuit, guards: &Guards) -> Result<usize, VerifyError> {
    let free = circuit.layout().free_wires().len();
    // Enumerations are keyed into u64, so 63 caps any configured guard.
    let guard = guards.max_free_wires.min(63);
    if free > guard {
        return Err(VerifyError::FreeWireGuard { free, guard });
    }
    Ok(free)
}

fn full_space_checked(circuit: &Circuit, guards: &Guards) -> Result<usize, VerifyError> {
    let m = circuit.m();
    let guard = guards.max_full_qubits.min(63);
    if m > guard {
        return Err(SimError::GuardExceeded { m, guard }.into());
    }
    Ok(m)
}

// ---------------------------------------------------------------------------
// Identity checks
// ---------------------------------------------------------------------------

/// Checks that the circuit fixes every initialized input up to one common
/// unit phase: for each free-input assignment the output must be exactly
/// `lambda * |initial state>` with the same `lambda` throughout.
pub fn check_identity_initialized(
    circuit: &Circuit,
    guards: &Guards,
) -> Result<Verdict, VerifyError> {
    let free = free_count_checked(circuit, guards)?;
    let mut phase: Option<RingAmplitude> = None;
    for v in 0..1u64 << free {
        let bits = assignment_bits(v, free);
        let out = run_circuit(circuit, &bits)?;
        let expected = circuit.layout().initial_key(&bits)?;
        let witness = || Witness::Assignment {
            input: key_to_bitstring(v, free),
            output: out.render_lines(),
        };
        if out.support_size() != 1 {
            return Ok(Verdict::fail(witness()));
        }
        let amp = out.amplitude(expected);
        if amp.is_zero() {
            return Ok(Verdict::fail(witness()));
        }
        match &phase {
            None => phase = Some(amp),
            Some(previous) if *previous != amp => return Ok(Verdict::fail(witness())),
            _ => {}
        }
    }
    Ok(Verdict::pass_with_phase(phase.expect("at least one input")))
}

/// Checks identity as a full unitary: every basis column must map to itself
/// under one common unit phase, ancilla roles ignored.
pub fn check_identity_full(circuit: &Circuit, guards: &Guards) -> Result<Verdict, VerifyError> {
    let m = full_space_checked(circuit, guards)?;
    let mut phase: Option<RingAmplitude> = None;
    for x in 0..1u64 << m {
        let col = unitary_column_with_guard(circuit, x, guards.max_full_qubits)?;
        let witness = || Witness::Column {
            input: key_to_bitstring(x, m),
            output: col.render_lines(),
        };
        if col.support_size() != 1 {
            return Ok(Verdict::fail(witness()));
        }
        let amp = col.amplitude(x);
        if amp.is_zero() {
            return Ok(Verdict::fail(witness()));
        }
        match &phase {
            None => phase = Some(amp),
            Some(previous) if *previous != amp => return Ok(Verdict::fail(witness())),
            _ => {}
        }
    }
    Ok(Verdict::pass_with_phase(
        phase.expect("at least one column"),
    ))
}

// ---------------------------------------------------------------------------
// Detectors
// ---------------------------------------------------------------------------

/// Detects superposition generation: holds iff some initialized input maps
/// to an output with support of two or more basis states.
pub fn detect_superposition(circuit: &Circuit, guards: &Guards) -> Result<Verdict, VerifyError> {
    let free = free_count_checked(circuit, guards)?;
    for v in 0..1u64 << free {
        let bits = assignment_bits(v, free);
        let out = run_circuit(circuit, &bits)?;
        if out.support_size() >= 2 {
            let mut keys = out.support();
            let first = keys.next().expect("support >= 2");
            let second = keys.next().expect("support >= 2");
            return Ok(Verdict::detected(Witness::Superposition {
                input: key_to_bitstring(v, free),
                first: key_to_bitstring(first, circuit.m()),
                second: key_to_bitstring(second, circuit.m()),
            }));
        }
    }
    Ok(Verdict::not_detected())
}

/// Affine-closure test over GF(2): holds iff the set is a coset of a linear
/// subspace, i.e. closed under `x ^ y ^ z`. On failure the witness is a
/// violating triple. The set must be nonempty.
pub fn is_affine_closed(points: &BTreeSet<u64>, width: usize) -> Verdict {
    assert!(!points.is_empty(), "affine closure of the empty set");
    let base = *points.iter().next().expect("nonempty");

    // Rank of the translated set; |S| = 2^rank certifies closure.
    let mut basis: Vec<u64> = Vec::new();
    for &p in points {
        let mut v = p ^ base;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    if points.len() == 1usize << basis.len() {
        return Verdict::pass();
    }

    // Not a coset, so some pair combined with the base escapes the set.
    for &x in points {
        for &y in points {
            let combined = x ^ y ^ base;
            if !points.contains(&combined) {
                return Verdict::fail(Witness::AffineViolation {
                    x: key_to_bitstring(x, width),
                    y: key_to_bitstring(y, width),
                    z: key_to_bitstring(base, width),
                    xor: key_to_bitstring(combined, width),
                });
            }
        }
    }
    unreachable!("|S| != 2^rank implies a violating pair exists")
}

/// Detects non-affine input-output correlation: builds the relation set
/// `{ input bits || output bits (restricted) }` over all initialized runs
/// and holds iff that set is not affine-closed.
pub fn detect_non_affine(
    circuit: &Circuit,
    restrict: Option<&[usize]>,
    guards: &Guards,
) -> Result<Verdict, VerifyError> {
    let free = free_count_checked(circuit, guards)?;
    let all_wires: Vec<usize> = (0..circuit.m()).collect();
    let wires = restrict.unwrap_or(&all_wires);
    let mut relation = BTreeSet::new();
    for v in 0..1u64 << free {
        let bits = assignment_bits(v, free);
        let out = run_circuit(circuit, &bits)?;
        for key in out.support() {
            let mut projected = 0u64;
            for (j, &w) in wires.iter().enumerate() {
                projected |= ((key >> w) & 1) << j;
            }
            relation.insert(v | (projected << free));
        }
    }
    let closure = is_affine_closed(&relation, free + wires.len());
    if closure.holds {
        Ok(Verdict::not_detected())
    } else {
        Ok(Verdict::detected(
            closure.witness.expect("failure carries a triple"),
        ))
    }
}

/// Holds iff every full-space column has support exactly one, i.e. the
/// circuit permutes basis states (possibly with phases).
pub fn is_basis_preserving(circuit: &Circuit, guards: &Guards) -> Result<Verdict, VerifyError> {
    let m = full_space_checked(circuit, guards)?;
    for x in 0..1u64 << m {
        let col = unitary_column_with_guard(circuit, x, guards.max_full_qubits)?;
        if col.support_size() != 1 {
            return Ok(Verdict::fail(Witness::Column {
                input: key_to_bitstring(x, m),
                output: col.render_lines(),
            }));
        }
    }
    Ok(Verdict::pass())
}

// ---------------------------------------------------------------------------
// Clifford membership
// ---------------------------------------------------------------------------

/// Semantic Clifford test: conjugates every Pauli generator `X_i`, `Z_i` by
/// the circuit and checks the result is a signed Pauli with a unit phase,
/// i.e. `M|x> = lambda (-1)^(s.x) |x ^ delta>`. Z is realized as two S gates.
pub fn check_clifford(circuit: &Circuit, guards: &Guards) -> Result<Verdict, VerifyError> {
    let m = circuit.m();
    let guard = guards.max_clifford_qubits.min(63);
    if m > guard {
        return Err(VerifyError::CliffordGuard { m, guard });
    }
    let inverse = circuit.inverse();
    for wire in 0..m {
        for (name, generator) in [
            (format!("X{wire}"), vec![Gate::X(wire)]),
            (format!("Z{wire}"), vec![Gate::S(wire), Gate::S(wire)]),
        ] {
            let mut gates = inverse.gates().to_vec();
            gates.extend(generator);
            gates.extend(circuit.gates().iter().cloned());
            let conjugated = Circuit::new(circuit.layout().clone(), gates)
                .expect("conjugation reuses validated wires");

            if let Some(witness) = conjugated_is_signed_pauli(&conjugated, &name)? {
                return Ok(Verdict::fail(witness));
            }
        }
    }
    Ok(Verdict::pass())
}

/// Returns a witness if the circuit's unitary is not of the form
/// `lambda X^delta Z^s`; `None` when the pattern fits.
fn conjugated_is_signed_pauli(
    conjugated: &Circuit,
    generator: &str,
) -> Result<Option<Witness>, VerifyError> {
    let m = conjugated.m();
    let mut delta = 0u64;
    let mut lambda = RingAmplitude::one();
    let mut signs = vec![false; 1 << m];
    for x in 0..1u64 << m {
        let col = unitary_column_with_guard(conjugated, x, m)?;
        let witness = || {
            Some(Witness::PauliConjugation {
                generator: generator.to_string(),
                column: key_to_bitstring(x, m),
                output: col.render_lines(),
            })
        };
        if col.support_size() != 1 {
            return Ok(witness());
        }
        let (key, amp) = col.entries().next().expect("support == 1");
        if x == 0 {
            delta = key;
            lambda = amp.clone();
            continue;
        }
        if key != x ^ delta {
            return Ok(witness());
        }
        let ratio = amp * &lambda.conjugate();
        if ratio.is_one() {
            signs[x as usize] = false;
        } else if (-&ratio).is_one() {
            signs[x as usize] = true;
        } else {
            return Ok(witness());
        }
    }
    // The signs must be linear: s is read off the unit vectors.
    let mut s_mask = 0u64;
    for j in 0..m {
        if signs[1 << j] {
            s_mask |= 1 << j;
        }
    }
    for x in 0..1u64 << m {
        let expected = (s_mask & x).count_ones() % 2 == 1;
        if signs[x as usize] != expected {
            return Ok(Some(Witness::PauliConjugation {
                generator: generator.to_string(),
                column: key_to_bitstring(x, m),
                output: vec![format!(
                    "sign pattern is not linear at {}",
                    key_to_bitstring(x, m)
                )],
            }));
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Zero-budget deciders
// ---------------------------------------------------------------------------

/// Resource class for the budget-0 decision problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BudgetClass {
    NonIdentity,
    NonClifford,
    Superposition,
    Entanglement,
}

/// Decides whether the circuit can be implemented with zero gates of the
/// class: identity check for non-identity, Clifford membership for
/// non-Clifford, basis preservation for superposition. Semantic product-state
/// testing is out of scope, so the entanglement class is an explicit error.
pub fn decide_zero_budget(
    circuit: &Circuit,
    class: BudgetClass,
    guards: &Guards,
) -> Result<Verdict, VerifyError> {
    match class {
        BudgetClass::NonIdentity => check_identity_full(circuit, guards),
        BudgetClass::NonClifford => check_clifford(circuit, guards),
        BudgetClass::Superposition => is_basis_preserving(circuit, guards),
        BudgetClass::Entanglement => Err(VerifyError::UnsupportedClass {
            class: "entanglement".into(),
        }),
    }
}

// ---------------------------------------------------------------------------
// End-to-end reduction verification
// ---------------------------------------------------------------------------

/// Everything measured about one reduction instance. `identity_full` is
/// present only when the circuit fits the full-space guard (real reductions
/// usually exceed it). No assertions: callers decide what to do.
#[derive(Debug, Clone, Serialize)]
pub struct ReductionReport {
    pub formula: String,
    pub sat: SatSummary,
    pub balanced: bool,
    pub identity_initialized: Verdict,
    pub identity_full: Option<Verdict>,
    pub superposition: Verdict,
    pub non_affine: Verdict,
    pub non_affine_abt: Verdict,
    pub promise_respected: bool,
    pub biconditional_holds: bool,
}

impl ReductionReport {
    /// Human-readable summary, one line per check.
    pub fn render_text(&self) -> String {
        let yn = |b: bool| if b { "yes" } else { "no" };
        let verdict = |v: &Verdict| if v.holds { "holds" } else { "fails" };
        let mut out = String::new();
        out.push_str(&format!("formula: {}\n", self.formula));
        out.push_str(&format!(
            "#SAT = {} of {}, beta = {}\n",
            self.sat.count_sat,
            1u64 << self.sat.n_vars,
            self.sat.beta_string()
        ));
        out.push_str(&format!("balanced: {}\n", yn(self.balanced)));
        out.push_str(&format!(
            "identity (initialized inputs): {}\n",
            verdict(&self.identity_initialized)
        ));
        match &self.identity_full {
            Some(v) => out.push_str(&format!("identity (full unitary): {}\n", verdict(v))),
            None => out.push_str("identity (full unitary): skipped (exceeds qubit guard)\n"),
        }
        out.push_str(&format!(
            "superposition generated: {}\n",
            yn(self.superposition.holds)
        ));
        out.push_str(&format!(
            "non-affine correlation (all wires): {}\n",
            yn(self.non_affine.holds)
        ));
        out.push_str(&format!(
            "non-affine correlation (a, b, target): {}\n",
            yn(self.non_affine_abt.holds)
        ));
        out.push_str(&format!(
            "promise respected: {}\n",
            yn(self.promise_respected)
        ));
        out.push_str(&format!(
            "biconditional holds: {}\n",
            yn(self.biconditional_holds)
        ));
        out
    }
}

/// Synthesizes the reduction for the formula and runs the full battery of
/// checks with the default sweep-scale arity guard.
pub fn verify_reduction(
    formula: &FormulaAst,
    guards: &Guards,
) -> Result<ReductionReport, VerifyError> {
    verify_reduction_with_max_vars(formula, guards, DEFAULT_REDUCTION_VAR_GUARD)
}

pub fn verify_reduction_with_max_vars(
    formula: &FormulaAst,
    guards: &Guards,
    max_vars: usize,
) -> Result<ReductionReport, VerifyError> {
    let n = formula.n_vars();
    if n > max_vars {
        return Err(VerifyError::ReductionGuard { n, guard: max_vars });
    }
    let sat = count_sat_with_guard(formula, guards.max_formula_vars)?;
    let balanced = sat.is_balanced();
    let (circuit, layout) = synth_reduction(formula);

    let identity_initialized = check_identity_initialized(&circuit, guards)?;
    let identity_full = if circuit.m() <= guards.max_full_qubits {
        Some(check_identity_full(&circuit, guards)?)
    } else {
        None
    };
    let superposition = detect_superposition(&circuit, guards)?;
    let non_affine = detect_non_affine(&circuit, None, guards)?;
    let abt = abt_wires(&layout);
    let non_affine_abt = detect_non_affine(&circuit, Some(&abt), guards)?;

    let promise_respected = identity_initialized.holds || (superposition.holds && non_affine.holds);
    let biconditional_holds = balanced == identity_initialized.holds;
    Ok(ReductionReport {
        formula: formula.to_string(),
        sat,
        balanced,
        identity_initialized,
        identity_full,
        superposition,
        non_affine,
        non_affine_abt,
        promise_respected,
        biconditional_holds,
    })
}

/// The (a, b, target) wires of the lower gadget, the paper's non-affine
/// witness register.
pub fn abt_wires(layout: &ReductionLayout) -> Vec<usize> {
    vec![layout.w_a, layout.w_b, layout.w_t2]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::RegisterLayout;
    use crate::formula::parse_formula;
    use crate::synth::{synth_dj, synth_q_gadget, GadgetGate};

    fn guards() -> Guards {
        Guards::default()
    }

    fn free_circuit(m: usize, gates: Vec<Gate>) -> Circuit {
        Circuit::new(RegisterLayout::free(m), gates).unwrap()
    }

    #[test]
    fn empty_circuit_is_identity() {
        let c = free_circuit(2, vec![]);
        let v = check_identity_initialized(&c, &guards()).unwrap();
        assert!(v.holds);
        assert_eq!(v.global_phase, Some(RingAmplitude::one()));

        let v = check_identity_full(&c, &guards()).unwrap();
        assert!(v.holds);
        assert_eq!(v.global_phase, Some(RingAmplitude::one()));
    }

    #[test]
    fn single_hadamard_fails_identity() {
        let c = free_circuit(1, vec![Gate::H(0)]);
        let v = check_identity_full(&c, &guards()).unwrap();
        assert!(!v.holds);
        match v.witness {
            Some(Witness::Column { input, .. }) => assert_eq!(input, "0"),
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn global_phase_is_reported() {
        // X S S X S S is a global phase of -1 on one wire... use simpler:
        // S S X S S X = (phase on |1>) conjugated; easier: the empty circuit
        // with an S-pair sandwich on an ancilla-1 wire gives lambda = -1.
        use crate::circuit::WireRole;
        let layout = RegisterLayout::new(vec![WireRole::Anc1], vec![]).unwrap();
        let c = Circuit::new(layout, vec![Gate::S(0), Gate::S(0)]).unwrap();
        let v = check_identity_initialized(&c, &guards()).unwrap();
        assert!(v.holds);
        assert_eq!(v.global_phase, Some(RingAmplitude::from_int(-1)));

        // As a full unitary the same circuit is Z, not a global phase.
        let v = check_identity_full(&c, &guards()).unwrap();
        assert!(!v.holds);
    }

    #[test]
    fn dj_self_composition_is_identity() {
        for text in ["x1", "x1 & x2", "x1 | !x2"] {
            let f = parse_formula(text).unwrap();
            let dj = synth_dj(&f);
            let mut gates = dj.gates().to_vec();
            gates.extend(dj.gates().iter().cloned());
            let doubled = Circuit::new(dj.layout().clone(), gates).unwrap();
            let v = check_identity_full(&doubled, &guards()).unwrap();
            assert!(v.holds, "phi={text}");
            assert_eq!(v.global_phase, Some(RingAmplitude::one()));
        }
    }

    #[test]
    fn superposition_detector() {
        let tof_only = free_circuit(3, vec![Gate::Tof(0, 1, 2), Gate::X(0), Gate::Cx(1, 2)]);
        assert!(!detect_superposition(&tof_only, &guards()).unwrap().holds);

        let with_h = free_circuit(1, vec![Gate::H(0)]);
        let v = detect_superposition(&with_h, &guards()).unwrap();
        assert!(v.holds);
        assert!(matches!(v.witness, Some(Witness::Superposition { .. })));
    }

    #[test]
    fn affine_closure_examples() {
        let width = 3;
        let coset: BTreeSet<u64> = ["000", "010", "100", "110"]
            .iter()
            .map(|s| crate::exactsim::bitstring_to_key(s, width).unwrap())
            .collect();
        assert!(is_affine_closed(&coset, width).holds);

        let broken: BTreeSet<u64> = ["000", "010", "100", "111"]
            .iter()
            .map(|s| crate::exactsim::bitstring_to_key(s, width).unwrap())
            .collect();
        let v = is_affine_closed(&broken, width);
        assert!(!v.holds);
        match v.witness {
            Some(Witness::AffineViolation { x, y, z, xor }) => {
                let parse = |s: &str| crate::exactsim::bitstring_to_key(s, width).unwrap();
                let (kx, ky, kz, kxor) = (parse(&x), parse(&y), parse(&z), parse(&xor));
                assert!(broken.contains(&kx) && broken.contains(&ky) && broken.contains(&kz));
                assert_eq!(kx ^ ky ^ kz, kxor);
                assert!(!broken.contains(&kxor));
            }
            other => panic!("unexpected witness {other:?}"),
        }

        let singleton: BTreeSet<u64> = [0b101u64].into_iter().collect();
        assert!(is_affine_closed(&singleton, width).holds);
    }

    #[test]
    fn linear_circuits_are_never_non_affine() {
        // X/CX outputs are affine functions of inputs over GF(2).
        let c = free_circuit(3, vec![Gate::Cx(0, 1), Gate::X(2), Gate::Cx(1, 2)]);
        assert!(!detect_non_affine(&c, None, &guards()).unwrap().holds);
    }

    #[test]
    fn basis_preservation() {
        let tof = free_circuit(3, vec![Gate::Tof(0, 1, 2)]);
        assert!(is_basis_preserving(&tof, &guards()).unwrap().holds);

        let h = free_circuit(1, vec![Gate::H(0)]);
        let v = is_basis_preserving(&h, &guards()).unwrap();
        assert!(!v.holds);
        assert!(v.witness.is_some());

        // DJ for a non-constant formula moves some basis state.
        let f = parse_formula("x1 & x2").unwrap();
        let dj = synth_dj(&f);
        assert!(!is_basis_preserving(&dj, &guards()).unwrap().holds);
    }

    #[test]
    fn clifford_check_examples() {
        let clifford = free_circuit(2, vec![Gate::H(0), Gate::S(0), Gate::Cx(0, 1)]);
        assert!(check_clifford(&clifford, &guards()).unwrap().holds);

        let t = free_circuit(1, vec![Gate::T(0)]);
        let v = check_clifford(&t, &guards()).unwrap();
        assert!(!v.holds);
        assert!(matches!(v.witness, Some(Witness::PauliConjugation { .. })));

        let tof = free_circuit(3, vec![Gate::Tof(0, 1, 2)]);
        assert!(!check_clifford(&tof, &guards()).unwrap().holds);
    }

    #[test]
    fn clifford_guard() {
        let c = free_circuit(11, vec![]);
        assert!(matches!(
            check_clifford(&c, &guards()),
            Err(VerifyError::CliffordGuard { m: 11, guard: 10 })
        ));
    }

    #[test]
    fn zero_budget_deciders() {
        let empty = free_circuit(1, vec![]);
        assert!(
            decide_zero_budget(&empty, BudgetClass::NonIdentity, &guards())
                .unwrap()
                .holds
        );

        let f = parse_formula("x1 & x2").unwrap();
        let dj = synth_dj(&f);
        let mut gates = dj.gates().to_vec();
        gates.extend(dj.gates().iter().cloned());
        let doubled = Circuit::new(dj.layout().clone(), gates).unwrap();
        assert!(
            decide_zero_budget(&doubled, BudgetClass::NonIdentity, &guards())
                .unwrap()
                .holds
        );

        assert!(matches!(
            decide_zero_budget(&empty, BudgetClass::Entanglement, &guards()),
            Err(VerifyError::UnsupportedClass { .. })
        ));
    }

    #[test]
    fn subspace_vs_full_divergence() {
        // Balanced non-constant formula: the gadget is identity on
        // initialized inputs but not as a full unitary.
        let f = parse_formula("vars 2 x1").unwrap();
        let gadget = synth_q_gadget(&f, GadgetGate::Cx);
        let init = check_identity_initialized(&gadget, &guards()).unwrap();
        assert!(init.holds);
        assert_eq!(init.global_phase, Some(RingAmplitude::one()));

        let full = check_identity_full(&gadget, &guards()).unwrap();
        assert!(!full.holds);
        assert!(matches!(full.witness, Some(Witness::Column { .. })));
    }

    #[test]
    fn verify_reduction_balanced() {
        let f = parse_formula("x1").unwrap();
        let report = verify_reduction(&f, &guards()).unwrap();
        assert!(report.balanced);
        assert!(report.identity_initialized.holds);
        assert_eq!(
            report.identity_initialized.global_phase,
            Some(RingAmplitude::one())
        );
        assert!(!report.superposition.holds);
        assert!(!report.non_affine.holds);
        assert!(report.biconditional_holds);
        assert!(report.promise_respected);
    }

    #[test]
    fn verify_reduction_unbalanced() {
        let f = parse_formula("x1 & x2").unwrap();
        let report = verify_reduction(&f, &guards()).unwrap();
        assert!(!report.balanced);
        assert!(!report.identity_initialized.holds);
        assert!(report.superposition.holds);
        assert!(report.non_affine.holds);
        assert!(report.non_affine_abt.holds);
        assert!(report.biconditional_holds);
        assert!(report.promise_respected);
    }

    #[test]
    fn verify_reduction_constant_true() {
        let f = parse_formula("x1 | !x1").unwrap();
        let report = verify_reduction(&f, &guards()).unwrap();
        assert!(!report.balanced);
        assert!(!report.identity_initialized.holds);
        assert!(report.superposition.holds);
        assert!(report.non_affine.holds);
        assert!(report.promise_respected);
        assert!(report.biconditional_holds);

        // The controls fire unconditionally, so the (a, b, target) relation
        // is exactly the AND graph {000, 010, 100, 111}.
        let (circuit, layout) = crate::synth::synth_reduction(&f);
        let abt = abt_wires(&layout);
        let mut relation = BTreeSet::new();
        for v in 0..4u64 {
            let bits: Vec<bool> = (0..2).map(|j| (v >> j) & 1 == 1).collect();
            let out = run_circuit(&circuit, &bits).unwrap();
            for key in out.support() {
                let proj: u64 = abt
                    .iter()
                    .enumerate()
                    .map(|(j, &w)| ((key >> w) & 1) << j)
                    .sum();
                relation.insert(proj);
            }
        }
        let expected: BTreeSet<u64> = [0b000, 0b010, 0b001, 0b111].into_iter().collect();
        assert_eq!(relation, expected);
    }

    #[test]
    fn verify_reduction_guard() {
        let f = parse_formula("x1 & x2 & x3 & x4").unwrap();
        assert!(matches!(
            verify_reduction(&f, &guards()),
            Err(VerifyError::ReductionGuard { n: 4, guard: 3 })
        ));
        assert!(verify_reduction_with_max_vars(&f, &guards(), 5).is_ok());
    }

    #[test]
    fn full_identity_implies_initialized_identity() {
        // Checked on small circuits with mixed roles.
        use crate::circuit::WireRole;
        let layout =
            RegisterLayout::new(vec![WireRole::Free, WireRole::Anc1, WireRole::Anc0], vec![])
                .unwrap();
        let cases: Vec<Vec<Gate>> = vec![
            vec![],
            vec![Gate::H(0), Gate::H(0)],
            vec![Gate::Cx(0, 2), Gate::Cx(0, 2)],
            vec![Gate::S(1), Gate::S(1), Gate::S(1), Gate::S(1)],
        ];
        for gates in cases {
            let c = Circuit::new(layout.clone(), gates).unwrap();
            let full = check_identity_full(&c, &guards()).unwrap();
            let init = check_identity_initialized(&c, &guards()).unwrap();
            if full.holds {
                assert!(init.holds);
            }
        }
    }

    #[test]
    fn superposition_iff_not_basis_preserving_when_all_free() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let m = rng.gen_range(2..=8);
            let len = rng.gen_range(0..12);
            let gates: Vec<Gate> = (0..len)
                .map(|_| {
                    let q = rng.gen_range(0..m);
                    match rng.gen_range(0..4) {
                        0 => Gate::H(q),
                        1 => Gate::X(q),
                        2 => Gate::T(q),
                        _ => Gate::Cx(q, (q + 1) % m),
                    }
                })
                .collect();
            let c = free_circuit(m, gates);
            let sup = detect_superposition(&c, &guards()).unwrap();
            let basis = is_basis_preserving(&c, &guards()).unwrap();
            assert_eq!(sup.holds, !basis.holds);
        }
    }
}
