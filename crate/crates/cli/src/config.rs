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

//! Run configuration: guard limits, output format, worker count, seed.
//! Defaults can be overridden by `QHF_*` environment variables, which in
//! turn are overridden by command-line flags.

use qhf_core::Guards;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    pub max_free_wires: usize,
    pub max_full_qubits: usize,
    pub max_clifford_qubits: usize,
    pub max_formula_vars: usize,
    pub output: OutputFormat,
    pub workers: usize,
    pub seed: u64,
}

fn env_value<T: std::str::FromStr>(name: &str, default: T) -> Result<T, String> {
    match std::env::var(name) {
        Ok(text) => text
            .parse()
            .map_err(|_| format!("{name}={text} is not a valid value")),
        Err(_) => Ok(default),
    }
}

impl RunConfig {
    /// Defaults merged with any `QHF_*` environment overrides.
    pub fn from_env() -> Result<Self, String> {
        let default = Guards::default();
        let config = RunConfig {
            max_free_wires: env_value("QHF_MAX_FREE_WIRES", default.max_free_wires)?,
            max_full_qubits: env_value("QHF_MAX_FULL_QUBITS", default.max_full_qubits)?,
            max_clifford_qubits: env_value("QHF_MAX_CLIFFORD_QUBITS", default.max_clifford_qubits)?,
            max_formula_vars: env_value("QHF_MAX_FORMULA_VARS", default.max_formula_vars)?,
            output: OutputFormat::Text,
            workers: env_value("QHF_WORKERS", 0usize)?,
            seed: env_value("QHF_SEED", 0u64)?,
        };
        for (name, value) in [
            ("QHF_MAX_FREE_WIRES", config.max_free_wires),
            ("QHF_MAX_FULL_QUBITS", config.max_full_qubits),
            ("QHF_MAX_CLIFFORD_QUBITS", config.max_clifford_qubits),
            ("QHF_MAX_FORMULA_VARS", config.max_formula_vars),
        ] {
            if value == 0 {
                return Err(format!("{name} must be positive"));
            }
        }
        Ok(config)
    }

    pub fn guards(&self) -> Guards {
        Guards {
            max_free_wires: self.max_free_wires,
            max_full_qubits: self.max_full_qubits,
            max_clifford_qubits: self.max_clifford_qubits,
            max_formula_vars: self.max_formula_vars,
        }
    }
}
