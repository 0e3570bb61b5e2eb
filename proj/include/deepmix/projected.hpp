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

#include <cstdint>
#include <span>
#include <vector>

#include "deepmix/ensembles.hpp"
#include "deepmix/errors.hpp"
#include "deepmix/tensor_core.hpp"

namespace deepmix {

/// Outcomes with probability below this are dropped and the rest renormalized.
inline constexpr double kPruneThreshold = 1e-14;

struct PeEntry {
    double weight = 0.0;
    DensityMatrix state;
    /// Measured bitstring z_B; the first (lowest) B site is the most significant bit.
    std::uint64_t outcome = 0;
};

struct ProjectedEnsemble {
    std::size_t local_dim = 0;
    std::vector<PeEntry> entries;
    /// Σ_z p(z) over every outcome before pruning.
    double total_probability = 0.0;
};

/// rho_A(z) = Tr_B[Π_z rho] / p(z) for every z_B. A and B must partition the register.
ProjectedEnsemble pe_from_density(const DensityMatrix& rho, std::span<const int> a_sites, std::span<const int> b_sites,
                                  const Limits& limits = {});

/// rho_A(z) = Tr_X of the normalized (I ⊗ <z|_B)|psi>. X, A and B must partition the register.
ProjectedEnsemble pe_from_purification(const StateVector& psi, std::span<const int> x_sites,
                                       std::span<const int> a_sites, std::span<const int> b_sites, int threads = 1,
                                       const Limits& limits = {});

/// Σ_z p(z) rho_A(z)^{⊗k}.
MomentOperator pe_moment(const ProjectedEnsemble& ens, int k, int threads = 1, const Limits& limits = {});

/// ‖m1 - m2‖₁.
double pe_delta(const MomentOperator& m1, const MomentOperator& m2);

/// Moments of the purification-route ensemble for each k in `ks`.
std::vector<MomentOperator> projected_moments(const StateVector& psi, std::span<const int> x_sites,
                                              std::span<const int> a_sites, std::span<const int> b_sites,
                                              std::span<const int> ks, int threads = 1, const Limits& limits = {});

struct ReferencePeResult {
    /// One estimate per requested k; `std` is the across-unitary spread.
    std::vector<MomentEstimate> moments;
    double avg_purity_mean = 0.0;
    double avg_purity_stderr = 0.0;
};

/// Empirical reference ensemble: rho0 = U diag(spectrum) U† with U Haar on
/// 2^(a_size + b_size) levels, A the leading a_size qubits, B the rest.
/// Unitary i uses the stream derive_seed(seed, "unitary", i). Spectra shorter
/// than the total dimension are padded with zeros.
ReferencePeResult mc_reference_pe(const Spectrum& spectrum, int a_size, int b_size, std::span<const int> ks,
                                  std::size_t n_unitaries, std::uint64_t seed, int threads = 1,
                                  const Limits& limits = {});

}  // namespace deepmix
