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

//! Floating-point shadow check: the exact ring simulator, evaluated
//! numerically with w = exp(i pi/4), must agree with an independent dense
//! double-precision simulator on sizable random circuits.

use num_complex::Complex64;
use qhf_core::circuit::{Circuit, Gate, RegisterLayout};
use qhf_core::exactsim::unitary_column_with_guard;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Dense state-vector simulator over f64 complex amplitudes. Test-only
/// oracle, written against the gate definitions directly and sharing no
/// code with the ring simulator.
struct DenseSim {
    m: usize,
    amps: Vec<Complex64>,
}

impl DenseSim {
    fn basis(m: usize, key: u64) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << m];
        amps[key as usize] = Complex64::new(1.0, 0.0);
        DenseSim { m, amps }
    }

    fn apply(&mut self, gate: &Gate) {
        let dim = 1usize << self.m;
        match gate {
            Gate::H(q) => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                for i in 0..dim {
                    if i & (1 << q) == 0 {
                        let j = i | (1 << q);
                        let (a, b) = (self.amps[i], self.amps[j]);
                        self.amps[i] = (a + b) * s;
                        self.amps[j] = (a - b) * s;
                    }
                }
            }
            Gate::S(q) | Gate::Sdg(q) | Gate::T(q) | Gate::Tdg(q) => {
                let angle = match gate {
                    Gate::S(_) => std::f64::consts::FRAC_PI_2,
                    Gate::Sdg(_) => -std::f64::consts::FRAC_PI_2,
                    Gate::T(_) => std::f64::consts::FRAC_PI_4,
                    _ => -std::f64::consts::FRAC_PI_4,
                };
                let phase = Complex64::from_polar(1.0, angle);
                for i in 0..dim {
                    if i & (1 << q) != 0 {
                        self.amps[i] *= phase;
                    }
                }
            }
            Gate::X(_) | Gate::Cx(..) | Gate::Tof(..) | Gate::Mcx(..) => {
                let (fires, target): (Box<dyn Fn(usize) -> bool>, usize) = match gate {
                    Gate::X(t) => (Box::new(|_| true), *t),
                    Gate::Cx(c, t) => {
                        let c = *c;
                        (Box::new(move |i: usize| i & (1 << c) != 0), *t)
                    }
                    Gate::Tof(a, b, t) => {
                        let (a, b) = (*a, *b);
                        (
                            Box::new(move |i: usize| i & (1 << a) != 0 && i & (1 << b) != 0),
                            *t,
                        )
                    }
                    Gate::Mcx(cs, t) => {
                        let cs = cs.clone();
                        (
                            Box::new(move |i: usize| cs.iter().all(|&c| i & (1 << c) != 0)),
                            *t,
                        )
                    }
                    _ => unreachable!(),
                };
                for i in 0..dim {
                    if i & (1 << target) == 0 && fires(i) {
                        self.amps.swap(i, i | (1 << target));
                    }
                }
            }
        }
    }
}

fn random_circuit(rng: &mut ChaCha8Rng, m: usize, len: usize, with_mcx: bool) -> Circuit {
    let wires: Vec<usize> = (0..m).collect();
    let mut gates = Vec::with_capacity(len);
    for _ in 0..len {
        let mut picks = wires.clone();
        picks.shuffle(rng);
        let kind_max = match m {
            1 => 6,
            2 => 7,
            _ if with_mcx && m >= 5 => 9,
            _ => 8,
        };
        gates.push(match rng.gen_range(0..kind_max) {
            0 => Gate::H(picks[0]),
            1 => Gate::X(picks[0]),
            2 => Gate::S(picks[0]),
            3 => Gate::Sdg(picks[0]),
            4 => Gate::T(picks[0]),
            5 => Gate::Tdg(picks[0]),
            6 => Gate::Cx(picks[0], picks[1]),
            7 => Gate::Tof(picks[0], picks[1], picks[2]),
            _ => {
                let k = rng.gen_range(3..=(m - 1).min(4));
                Gate::Mcx(picks[..k].to_vec(), picks[k])
            }
        });
    }
    Circuit::new(RegisterLayout::free(m), gates).unwrap()
}

fn assert_shadow_agrees(circuit: &Circuit, input: u64, tolerance: f64) {
    let exact = unitary_column_with_guard(circuit, input, circuit.m()).unwrap();
    let mut dense = DenseSim::basis(circuit.m(), input);
    for gate in circuit.gates() {
        dense.apply(gate);
    }
    for i in 0..1u64 << circuit.m() {
        let (re, im) = exact.amplitude(i).approx();
        let d = dense.amps[i as usize];
        assert!(
            (re - d.re).abs() <= tolerance && (im - d.im).abs() <= tolerance,
            "mismatch at basis {i}: exact ~ ({re}, {im}), dense ({}, {})",
            d.re,
            d.im
        );
    }
}

#[test]
fn shadow_small_circuits_all_columns() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..25 {
        let m = rng.gen_range(1..=5);
        let len = rng.gen_range(0..40);
        let c = random_circuit(&mut rng, m, len, m >= 5);
        for x in 0..1u64 << m {
            assert_shadow_agrees(&c, x, 1e-9);
        }
    }
}

#[test]
fn shadow_long_circuits_twelve_qubits() {
    // 200 gates on 12 qubits: numerators here overflow any fixed-width
    // integer, which is exactly what the unbounded coefficients are for.
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for case in 0..3 {
        let c = random_circuit(&mut rng, 12, 200, true);
        let input = rng.gen_range(0..1u64 << 12);
        assert_shadow_agrees(&c, input, 1e-9);
        // Exact unitarity survives the whole run.
        let exact = unitary_column_with_guard(&c, input, 12).unwrap();
        assert!(exact.norm_sqr().is_one(), "case {case} lost normalization");
    }
}

#[test]
fn shadow_dj_circuits() {
    use qhf_core::formula::parse_formula;
    use qhf_core::synth::synth_dj;
    for text in ["x1 & x2", "x1 | (x2 & !x3)"] {
        let dj = synth_dj(&parse_formula(text).unwrap());
        for x in 0..1u64 << dj.m().min(6) {
            assert_shadow_agrees(&dj, x, 1e-9);
        }
    }
}
