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
#include <vector>

#include "deepmix/errors.hpp"
#include "deepmix/tensor_core.hpp"

namespace deepmix {

/// A k-th moment operator on (C^local_dim)^{⊗k}.
struct MomentOperator {
    int k = 0;
    std::size_t local_dim = 0;
    OperatorMatrix matrix;
};

struct MomentCheck {
    double hermiticity = 0.0;
    double min_eigenvalue = 0.0;
    double trace_error = 0.0;

    bool ok(double tolerance = kStateTolerance) const {
        return hermiticity <= tolerance && min_eigenvalue >= -tolerance && trace_error <= tolerance;
    }
};

/// Hermiticity, PSD and trace diagnostics; also checks the shape against k and local_dim.
MomentCheck check_moment(const MomentOperator& m);

/// Monte Carlo estimate of a moment: sample mean plus, per entry, the sample
/// standard deviation (sqrt of the unbiased E|X - mean|^2) and standard error.
struct MomentEstimate {
    int k = 0;
    std::size_t local_dim = 0;
    std::size_t n_samples = 0;
    OperatorMatrix mean;
    Eigen::MatrixXd std;
    Eigen::MatrixXd stderr_;
};

// --- analytic references --------------------------------------------------------

/// [Σ_σ h_σ Perm(σ)] / [Σ_σ h_σ D_A^{|σ|}] with h_σ from the spectrum's power traces.
MomentOperator eref_moment(const Spectrum& spectrum, std::size_t local_dim, int k, const Limits& limits = {});

/// (I + p SWAP) / (D_A^2 + p D_A) for purity p in (0, 1].
MomentOperator eref_second_moment(double purity, std::size_t local_dim, const Limits& limits = {});

/// (1 + D_A p) / (D_A + p).
double avg_purity(double purity, std::size_t local_dim);

/// Σ_σ Perm(σ) / D_A (D_A+1) ... (D_A+k-1).
MomentOperator haar_moment(std::size_t local_dim, int k, const Limits& limits = {});

/// Σ_σ D_R^{|σ|} Perm(σ) / Σ_σ (D_R D_A)^{|σ|}.
MomentOperator ghse_moment(std::size_t rank_dim, std::size_t local_dim, int k, const Limits& limits = {});

/// ‖eref_moment - haar_moment‖₁.
double delta_haar(const Spectrum& spectrum, std::size_t local_dim, int k, const Limits& limits = {});

/// -ln Tr rho^2.
double renyi2(const Spectrum& spectrum);

/// λ_1 = (1-ε) + ε/d, λ_{i>1} = ε/d on d levels; ε in [0, 1].
Spectrum interpolated_spectrum(double epsilon, std::size_t dimension);

// --- Monte Carlo estimators ---------------------------------------------------------

/// Average of (Tr_R |ψ><ψ|)^{⊗k}, ψ Haar on C^{D_R} ⊗ C^{D_A} (R leading).
/// Sample i uses the stream derive_seed(seed, "ghse", i).
MomentEstimate ghse_moment_mc(std::size_t rank_dim, std::size_t local_dim, int k, std::size_t n_samples,
                              std::uint64_t seed, int threads = 1, const Limits& limits = {});

/// (rho0ᵀ ⊗ I_A) / D_A with the X register leading.
DensityMatrix scrooge_rho_xa(const DensityMatrix& rho0, std::size_t local_dim);

/// Average over Haar ψ on X∪A of D_XA (Tr_X[√ρ ψψ† √ρ])^{⊗k} / <ψ|ρ|ψ>^{k-1}.
/// Sample i uses the stream derive_seed(seed, "scrooge", i).
MomentEstimate scrooge_moment_mc(const DensityMatrix& rho_xa, std::span<const int> trace_out, int k,
                                 std::size_t n_samples, std::uint64_t seed, int threads = 1,
                                 const Limits& limits = {});

}  // namespace deepmix
