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

//! Compiles Boolean formulas into H+TOF circuits built around Deutsch-Jozsa
//! phase oracles, simulates them exactly over the ring `Z[w]/sqrt(2)^k`
//! (`w = exp(i pi/4)`), and verifies the central property of the
//! construction: the reduction circuit acts as the identity on its
//! initialized inputs precisely when the formula is balanced, and otherwise
//! generates both superposition and non-affine measurement correlation.
//!
//! Modules:
//! - [`formula`]: parsing (infix and DIMACS CNF), evaluation, exhaustive
//!   model counting, the balance oracle, and truth-table DNF construction.
//! - [`circuit`]: the gate IR, ancilla-role layouts, gate classification,
//!   resource counting, serialization (native / OPENQASM 2.0 subset / JSON),
//!   and strict H+TOF lowering.
//! - [`synth`]: phase oracles, DJ circuits, the controlled-gate gadget, the
//!   reduction circuit, multi-controlled-X lowering, and analytic state
//!   oracles computed by direct summation.
//! - [`exactsim`]: sparse state vectors with exact cyclotomic amplitudes.
//! - [`verify`]: identity/superposition/non-affine/Clifford checks, budget-0
//!   deciders, and the end-to-end reduction verifier.

pub mod circuit;
pub mod exactsim;
pub mod formula;
pub mod synth;
pub mod verify;

pub use circuit::{Circuit, Gate, RegisterLayout, ResourceReport, WireRole};
pub use exactsim::{RingAmplitude, SparseState};
pub use formula::{FormulaAst, SatSummary};
pub use synth::{GadgetGate, OracleFragment, ReductionLayout};
pub use verify::{Guards, ReductionReport, Verdict, Witness};
