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

#include "deepmix/kim.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "deepmix/ensembles.hpp"
#include "deepmix/projected.hpp"

namespace deepmix {

FloquetOperator::FloquetOperator(const KimParams& params, const QubitRegister& reg, int first_site)
    : reg_(reg), first_(first_site), n_sites_(params.n_sites), kick_(y_rotation(params.h)) {
    if (params.n_sites < 1 || first_site < 0 || first_site + params.n_sites > reg.n_qubits()) {
        throw std::invalid_argument("floquet_step: chain [" + std::to_string(first_site) + ", " +
                                    std::to_string(first_site + params.n_sites) + ") outside register of " +
                                    std::to_string(reg.n_qubits()) + " qubits");
    }
    const int L = n_sites_;
    phases_.resize(std::size_t{1} << L);
    for (std::size_t c = 0; c < phases_.size(); ++c) {
        double phase = 0.0;
        int prev = 0;
        for (int j = 0; j < L; ++j) {
            const int s = 1 - 2 * static_cast<int>((c >> (L - 1 - j)) & 1U);
            phase += params.g * s;
            if (j > 0) phase += params.J * prev * s;
            prev = s;
        }
        phases_[c] = std::polar(1.0, -phase);
    }
}

void FloquetOperator::apply(StateVector& state) const {
    if (!(state.reg() == reg_)) throw std::invalid_argument("FloquetOperator: register mismatch");
    const int shift = reg_.n_qubits() - first_ - n_sites_;
    const std::uint64_t mask = (std::uint64_t{1} << n_sites_) - 1;
    Amplitudes& amps = state.amplitudes();
    for (Eigen::Index b = 0; b < amps.size(); ++b) {
        amps[b] *= phases_[(static_cast<std::uint64_t>(b) >> shift) & mask];
    }
    for (int j = 0; j < n_sites_; ++j) {
        const int site = first_ + j;
        apply_gate(state, kick_, std::span<const int>(&site, 1));
    }
}

void floquet_step(StateVector& state, const KimParams& params, int first_site) {
    FloquetOperator(params, state.reg(), first_site).apply(state);
}

DensityMatrix make_rho_s(const RhoSpec& spec, int s_size, Rng& rng) {
    if (s_size < 0) throw std::invalid_argument("rho_s: negative |S|");
    const std::size_t d = std::size_t{1} << s_size;
    return std::visit(
        [&](const auto& v) -> DensityMatrix {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, DensityMatrix>) {
                if (v.dimension() != d) {
                    throw std::invalid_argument("rho_s: explicit matrix has dimension " + std::to_string(v.dimension()) +
                                                ", expected " + std::to_string(d));
                }
                return v;
            } else if constexpr (std::is_same_v<T, GinibreRho>) {
                return ginibre_density(d, v.rank == 0 ? d : v.rank, rng);
            } else if constexpr (std::is_same_v<T, FlatRho>) {
                if (v.rank == 0 || v.rank > d) throw std::invalid_argument("rho_s: flat rank outside [1, 2^|S|]");
                OperatorMatrix m = OperatorMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
                for (std::size_t i = 0; i < v.rank; ++i) {
                    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0 / static_cast<double>(v.rank);
                }
                return DensityMatrix::from_trusted(std::move(m));
            } else {
                return DensityMatrix::pure(StateVector::basis(s_size, 0));
            }
        },
        spec);
}

InitialState build_initial(const InitialStateSpec& spec, int n_sites, Rng& rho_rng, Rng& v_rng, const Limits& limits) {
    if (spec.s_size < 0 || spec.s_size > n_sites) {
        throw std::invalid_argument("build_initial: |S| = " + std::to_string(spec.s_size) + " not within chain of " +
                                    std::to_string(n_sites) + " sites");
    }
    if (spec.s_size + n_sites > limits.max_state_qubits) {
        throw BudgetError("build_initial: " + std::to_string(spec.s_size + n_sites) + " qubits exceed cap " +
                          std::to_string(limits.max_state_qubits));
    }
    DensityMatrix rho_s = make_rho_s(spec.rho_s, spec.s_size, rho_rng);
    const int n_e = n_sites - spec.s_size;

    std::vector<StateVector> factors;
    factors.push_back(purify(rho_s));
    const double r = 1.0 / std::sqrt(2.0);
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::vector<Amplitudes>>) {
                if (static_cast<int>(v.size()) != n_e) {
                    throw std::invalid_argument("build_initial: " + std::to_string(v.size()) + " explicit E states for " +
                                                std::to_string(n_e) + " E sites");
                }
                for (const Amplitudes& a : v) factors.emplace_back(QubitRegister(1), a);
            } else if constexpr (std::is_same_v<T, PlusStates>) {
                for (int j = 0; j < n_e; ++j) factors.emplace_back(QubitRegister(1), Amplitudes::Constant(2, r));
            } else {
                for (int j = 0; j < n_e; ++j) factors.push_back(haar_state(2, v_rng));
            }
        },
        spec.e_states);

    // purify() orders X before S; the remaining factors follow in chain order.
    return {StateVector::product(factors), std::move(rho_s)};
}

namespace {

struct Layout {
    std::vector<int> x;
    std::vector<int> a;
    std::vector<int> b;
};

Layout layout(int s_size, int n_sites, int a_size) {
    Layout l;
    for (int i = 0; i < s_size; ++i) l.x.push_back(i);
    for (int i = 0; i < a_size; ++i) l.a.push_back(s_size + i);
    for (int i = a_size; i < n_sites; ++i) l.b.push_back(s_size + i);
    return l;
}

void check_run(int n_sites, int a_size, int t_max, std::span<const int> ks, const Limits& limits) {
    if (a_size < 1 || a_size > n_sites) throw std::invalid_argument("run: |A| must lie in [1, n_sites]");
    if (t_max < 0) throw std::invalid_argument("run: negative t_max");
    if (ks.empty()) throw std::invalid_argument("run: empty k list");
    if (n_sites - a_size > limits.max_measured_qubits) {
        throw BudgetError("run: |B| = " + std::to_string(n_sites - a_size) + " exceeds cap " +
                          std::to_string(limits.max_measured_qubits));
    }
}

std::vector<DeltaRow> evolve(const KimParams& params, InitialState init, int s_size, int a_size, int t_max,
                             std::span<const int> ks, int threads, const Limits& limits) {
    const Layout l = layout(s_size, params.n_sites, a_size);
    const Spectrum spectrum = Spectrum::of(init.rho_s);
    const std::size_t da = std::size_t{1} << a_size;
    std::vector<MomentOperator> refs;
    for (const int k : ks) refs.push_back(eref_moment(spectrum, da, k, limits));
    const FloquetOperator uf(params, init.psi.reg(), s_size);
    std::vector<DeltaRow> rows;
    StateVector& psi = init.psi;
    for (int t = 0; t <= t_max; ++t) {
        if (t > 0) uf.apply(psi);
        const std::vector<MomentOperator> moments = projected_moments(psi, l.x, l.a, l.b, ks, threads, limits);
        for (std::size_t q = 0; q < ks.size(); ++q) rows.push_back({t, ks[q], pe_delta(moments[q], refs[q])});
    }
    return rows;
}

}  // namespace

std::vector<DeltaRow> dynamics_run(const KimParams& params, const InitialStateSpec& spec, int a_size, int t_max,
                                   std::span<const int> ks, Rng& rho_rng, Rng& v_rng, int threads,
                                   const Limits& limits) {
    check_run(params.n_sites, a_size, t_max, ks, limits);
    InitialState init = build_initial(spec, params.n_sites, rho_rng, v_rng, limits);
    return evolve(params, std::move(init), spec.s_size, a_size, t_max, ks, threads, limits);
}

bool is_pi_over_8_multiple(double g) {
    const double r = g / (std::numbers::pi / 8.0);
    return std::abs(r - std::round(r)) < 1e-9;
}

std::vector<SelfDualRow> selfdual_run(double g, int s_size, int a_size, int b_size, int t_max, std::span<const int> ks,
                                      const RhoSpec& rho_s, Rng& rho_rng, int threads, const Limits& limits) {
    if (is_pi_over_8_multiple(g)) {
        throw std::invalid_argument("selfdual_run: g = " + std::to_string(g) + " is a multiple of pi/8");
    }
    if (b_size < 0) throw std::invalid_argument("selfdual_run: negative |B|");
    constexpr double q = std::numbers::pi / 4.0;
    const KimParams params{q, g, q, a_size + b_size};
    check_run(params.n_sites, a_size, t_max, ks, limits);
    const InitialStateSpec spec{s_size, rho_s, PlusStates{}};
    Rng unused(0);
    InitialState init = build_initial(spec, params.n_sites, rho_rng, unused, limits);
    const std::vector<DeltaRow> rows = evolve(params, std::move(init), s_size, a_size, t_max, ks, threads, limits);
    std::vector<SelfDualRow> out;
    out.reserve(rows.size());
    for (const DeltaRow& r : rows) out.push_back({r.t, r.k, r.delta, r.t == a_size + s_size});
    return out;
}

}  // namespace deepmix
