// Copyright 2026 The deepmix Authors
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace deepmix {

/// A request that is well-formed but exceeds a configured resource cap
/// (operator dimension, copy count, qubit budget).
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid experiment configuration. The message names the offending key.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Resource caps shared by every module. Values, not constants: callers
/// override per run.
struct Limits {
    /// Largest dense operator dimension (rows) any routine may allocate.
    std::size_t max_operator_dim = 4096;
    /// Largest copy count k for symmetric-group sums (7! = 5040 terms).
    int max_k = 7;
    /// Largest total register (|X| + chain sites) for statevector evolution.
    int max_state_qubits = 22;
    /// Largest measured register for dense outcome enumeration.
    int max_measured_qubits = 14;
};

}  // namespace deepmix
