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

//! Exact sparse state-vector simulation. Amplitudes live in the ring
//! `Z[w]/sqrt(2)^k`, so equivalence and amplitude checks are bit-exact:
//! destructive interference produces true zeros, which are dropped.

pub mod ring;

pub use ring::RingAmplitude;

use crate::circuit::{Circuit, CircuitError, Gate};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Default cap on qubit count for whole-unitary (all columns) work.
pub const DEFAULT_FULL_GUARD: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("{m} qubits exceed the full-space guard of {guard}")]
    GuardExceeded { m: usize, guard: usize },
    #[error("bitstring `{text}` is not {m} characters of 0/1")]
    BadBitstring { text: String, m: usize },
}

/// A finite map from basis states to nonzero exact amplitudes. Bit `i` of a
/// key is wire `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseState {
    m: usize,
    entries: BTreeMap<u64, RingAmplitude>,
}

impl SparseState {
    /// The basis state `|key>`.
    pub fn basis(m: usize, key: u64) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(key, RingAmplitude::one());
        SparseState { m, entries }
    }

    /// Builds a state from explicit entries, dropping exact zeros.
    pub fn from_entries(m: usize, entries: BTreeMap<u64, RingAmplitude>) -> Self {
        let entries = entries.into_iter().filter(|(_, a)| !a.is_zero()).collect();
        SparseState { m, entries }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    /// Support keys in increasing numeric order.
    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.keys().copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, &RingAmplitude)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    /// Amplitude at `key`; exact zero when absent.
    pub fn amplitude(&self, key: u64) -> RingAmplitude {
        self.entries.get(&key).cloned().unwrap_or_default()
    }

    /// `sum |amp|^2` as an exact ring element.
    pub fn norm_sqr(&self) -> RingAmplitude {
        self.entries
            .values()
            .fold(RingAmplitude::zero(), |acc, a| &acc + &a.norm_sqr())
    }

    /// Keeps the wires in `keep` (their order defines the new bit order),
    /// assuming every dropped wire holds one common basis value across the
    /// whole support; returns `None` otherwise.
    pub fn restricted(&self, keep: &[usize]) -> Option<SparseState> {
        let dropped: Vec<usize> = (0..self.m).filter(|w| !keep.contains(w)).collect();
        let mut fixed: Option<u64> = None;
        let mut entries = BTreeMap::new();
        for (&key, amp) in &self.entries {
            let mut dropped_bits = 0u64;
            for (j, &w) in dropped.iter().enumerate() {
                dropped_bits |= ((key >> w) & 1) << j;
            }
            match fixed {
                None => fixed = Some(dropped_bits),
                Some(f) if f != dropped_bits => return None,
                _ => {}
            }
            let mut new_key = 0u64;
            for (j, &w) in keep.iter().enumerate() {
                new_key |= ((key >> w) & 1) << j;
            }
            entries.insert(new_key, amp.clone());
        }
        Some(SparseState {
            m: keep.len(),
            entries,
        })
    }

    /// Support lines sorted by rendered bitstring (wire 0 leftmost).
    pub fn render_lines(&self) -> Vec<String> {
        let mut lines: Vec<(String, &RingAmplitude)> = self
            .entries
            .iter()
            .map(|(k, a)| (key_to_bitstring(*k, self.m), a))
            .collect();
        lines.sort_by(|a, b| a.0.cmp(&b.0));
        lines
            .into_iter()
            .map(|(bits, amp)| {
                let (re, im) = amp.approx();
                format!("{bits} -> {amp} ~ {re:+.6}{im:+.6}i")
            })
            .collect()
    }

    fn insert_add(entries: &mut BTreeMap<u64, RingAmplitude>, key: u64, amp: RingAmplitude) {
        if amp.is_zero() {
            return;
        }
        match entries.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(amp);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &amp;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }
}

impl fmt::Display for SparseState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.render_lines() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Renders a key as a bitstring with wire 0 as the leftmost character.
pub fn key_to_bitstring(key: u64, m: usize) -> String {
    (0..m)
        .map(|i| if (key >> i) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Parses a bitstring (wire 0 leftmost) into a key.
pub fn bitstring_to_key(text: &str, m: usize) -> Result<u64, SimError> {
    if text.len() != m || !text.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(SimError::BadBitstring {
            text: text.into(),
            m,
        });
    }
    Ok(text
        .bytes()
        .enumerate()
        .fold(0u64, |key, (i, b)| key | (((b - b'0') as u64) << i)))
}

/// Applies one gate. Permutation gates rewrite keys, phase gates scale the
/// `|1>` component, and H splits each entry in two and merges, dropping
/// exact zeros.
pub fn apply_gate(state: &SparseState, gate: &Gate) -> Result<SparseState, SimError> {
    gate.validate(state.m)?;
    let m = state.m;
    let mut entries = BTreeMap::new();
    match gate {
        Gate::X(q) => {
            for (&key, amp) in &state.entries {
                entries.insert(key ^ (1 << q), amp.clone());
            }
        }
        Gate::Cx(c, t) => {
            for (&key, amp) in &state.entries {
                let flip = (key >> c) & 1;
                entries.insert(key ^ (flip << t), amp.clone());
            }
        }
        Gate::Tof(a, b, t) => {
            for (&key, amp) in &state.entries {
                let flip = (key >> a) & (key >> b) & 1;
                entries.insert(key ^ (flip << t), amp.clone());
            }
        }
        Gate::Mcx(cs, t) => {
            for (&key, amp) in &state.entries {
                let all = cs.iter().all(|&c| (key >> c) & 1 == 1);
                entries.insert(key ^ ((all as u64) << t), amp.clone());
            }
        }
        Gate::S(q) | Gate::Sdg(q) | Gate::T(q) | Gate::Tdg(q) => {
            let phase = match gate {
                Gate::S(_) => RingAmplitude::omega_pow(2),
                Gate::Sdg(_) => RingAmplitude::omega_pow(6),
                Gate::T(_) => RingAmplitude::omega_pow(1),
                _ => RingAmplitude::omega_pow(7),
            };
            for (&key, amp) in &state.entries {
                let amp = if (key >> q) & 1 == 1 {
                    amp * &phase
                } else {
                    amp.clone()
                };
                entries.insert(key, amp);
            }
        }
        Gate::H(q) => {
            for (&key, amp) in &state.entries {
                let half = amp.div_sqrt2();
                let low = key & !(1 << q);
                let high = key | (1 << q);
                if (key >> q) & 1 == 0 {
                    SparseState::insert_add(&mut entries, low, half.clone());
                    SparseState::insert_add(&mut entries, high, half);
                } else {
                    SparseState::insert_add(&mut entries, low, half.clone());
                    SparseState::insert_add(&mut entries, high, -half);
                }
            }
        }
    }
    Ok(SparseState { m, entries })
}

/// Runs a circuit from its initialized input: ancilla wires per their roles,
/// free wires per `assignment` (in increasing wire order).
pub fn run_circuit(circuit: &Circuit, assignment: &[bool]) -> Result<SparseState, SimError> {
    let key = circuit.layout().initial_key(assignment)?;
    run_from_key(circuit, key)
}

/// Runs a circuit from the arbitrary basis state `|key>`, ignoring roles.
/// Guarded because callers typically sweep all `2^m` columns.
pub fn unitary_column(circuit: &Circuit, key: u64) -> Result<SparseState, SimError> {
    unitary_column_with_guard(circuit, key, DEFAULT_FULL_GUARD)
}

pub fn unitary_column_with_guard(
    circuit: &Circuit,
    key: u64,
    guard: usize,
) -> Result<SparseState, SimError> {
    if circuit.m() > guard {
        return Err(SimError::GuardExceeded {
            m: circuit.m(),
            guard,
        });
    }
    run_from_key(circuit, key)
}

fn run_from_key(circuit: &Circuit, key: u64) -> Result<SparseState, SimError> {
    let mut state = SparseState::basis(circuit.m(), key);
    for gate in circuit.gates() {
        state = apply_gate(&state, gate)?;
    }
    Ok(state)
}
