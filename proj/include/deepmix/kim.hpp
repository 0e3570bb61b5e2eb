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

#include <numbers>
#include <variant>
#include <vector>

#include "deepmix/errors.hpp"
#include "deepmix/random.hpp"
#include "deepmix/tensor_core.hpp"

namespace deepmix {

/// Open kicked Ising chain, U_F = exp(-i h Σ Y_j) exp(-i Σ_j [J Z_j Z_{j+1} + g Z_j]).
struct KimParams {
    double J = 0.0;
    double g = 0.0;
    double h = 0.0;
    int n_sites = 2;

    bool self_dual() const noexcept {
        constexpr double q = std::numbers::pi / 4.0;
        return std::abs(J - q) < 1e-12 && std::abs(h - q) < 1e-12;
    }
};

/// One Floquet period on the contiguous sites [first_site, first_site + n_sites).
/// The diagonal layer acts first; sites outside the chain are untouched.
class FloquetOperator {
public:
    FloquetOperator(const KimParams& params, const QubitRegister& reg, int first_site);
    void apply(StateVector& state) const;

private:
    QubitRegister reg_;
    int first_ = 0;
    int n_sites_ = 0;
    std::vector<Complex> phases_;
    OperatorMatrix kick_;
};

void floquet_step(StateVector& state, const KimParams& params, int first_site = 0);

struct GinibreRho {
    /// 0 means full rank.
    std::size_t rank = 0;
};
struct FlatRho {
    std::size_t rank = 1;
};
/// |0..0><0..0|.
struct PureRho {};
using RhoSpec = std::variant<DensityMatrix, GinibreRho, FlatRho, PureRho>;

struct PlusStates {};
/// Independent Haar qubit states.
struct RandomStates {};
using EStateSpec = std::variant<std::vector<Amplitudes>, PlusStates, RandomStates>;

struct InitialStateSpec {
    int s_size = 0;
    RhoSpec rho_s = PureRho{};
    EStateSpec e_states = PlusStates{};
};

/// Draws or validates rho_S on s_size qubits.
DensityMatrix make_rho_s(const RhoSpec& spec, int s_size, Rng& rng);

struct InitialState {
    /// Register X (s_size qubits) followed by the chain S ∪ E.
    StateVector psi;
    DensityMatrix rho_s;
};

/// Purification of rho_S ⊗ Π_j |v_j><v_j|. rho_S draws use `rho_rng`, random
/// |v_j> draws use `v_rng`.
InitialState build_initial(const InitialStateSpec& spec, int n_sites, Rng& rho_rng, Rng& v_rng,
                           const Limits& limits = {});

struct DeltaRow {
    int t = 0;
    int k = 0;
    double delta = 0.0;
};

/// Δ_k(t) for t = 0..t_max against eref_moment(spectrum(rho_S), 2^a_size, k).
/// A is the leading a_size chain sites, B the rest of the chain.
std::vector<DeltaRow> dynamics_run(const KimParams& params, const InitialStateSpec& spec, int a_size, int t_max,
                                   std::span<const int> ks, Rng& rho_rng, Rng& v_rng, int threads = 1,
                                   const Limits& limits = {});

struct SelfDualRow {
    int t = 0;
    int k = 0;
    double delta = 0.0;
    bool plateau_onset = false;
};

/// Self-dual chain (J = h = π/4) of a_size + b_size sites with |+> states on E.
/// plateau_onset marks t = a_size + s_size.
std::vector<SelfDualRow> selfdual_run(double g, int s_size, int a_size, int b_size, int t_max, std::span<const int> ks,
                                      const RhoSpec& rho_s, Rng& rho_rng, int threads = 1, const Limits& limits = {});

/// True when g is an integer multiple of π/8 (the non-generic self-dual points).
bool is_pi_over_8_multiple(double g);

}  // namespace deepmix
