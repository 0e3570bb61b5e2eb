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

#include "deepmix/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "deepmix/random.hpp"
#include "deepmix/symm.hpp"
#include "sample_stats.hpp"

namespace deepmix {

namespace {

MomentOperator weighted_permutation_sum(std::size_t local_dim, int k, const Limits& limits, auto&& weight) {
    if (local_dim == 0) throw std::invalid_argument("moment: zero local dimension");
    const std::vector<Permutation> perms = enumerate_sk(k, limits.max_k);
    std::vector<double> coeffs;
    coeffs.reserve(perms.size());
    double norm = 0.0;
    for (const Permutation& p : perms) {
        const CycleType ct = cycle_type(p);
        const double w = weight(ct);
        coeffs.push_back(w);
        norm += w * std::pow(static_cast<double>(local_dim), ct.num_cycles());
    }
    for (double& c : coeffs) c /= norm;
    return {k, local_dim, permutation_sum(perms, coeffs, local_dim, limits)};
}

std::size_t power_dim(std::size_t local_dim, int k, const Limits& limits) {
    std::size_t d = 1;
    for (int a = 0; a < k; ++a) {
        d *= local_dim;
        if (d > limits.max_operator_dim) {
            throw BudgetError("moment: dimension " + std::to_string(local_dim) + "^" + std::to_string(k) +
                              " exceeds cap " + std::to_string(limits.max_operator_dim));
        }
    }
    return d;
}

void check_k(int k, const Limits& limits) {
    if (k < 1) throw std::invalid_argument("moment: k must be positive");
    if (k > limits.max_k) throw BudgetError("moment: k = " + std::to_string(k) + " exceeds cap " + std::to_string(limits.max_k));
}

}  // namespace

MomentCheck check_moment(const MomentOperator& m) {
    if (m.k < 1 || m.local_dim == 0) throw std::invalid_argument("check_moment: empty moment");
    std::size_t d = 1;
    for (int a = 0; a < m.k; ++a) d *= m.local_dim;
    if (static_cast<std::size_t>(m.matrix.rows()) != d || m.matrix.cols() != m.matrix.rows()) {
        throw std::invalid_argument("check_moment: matrix shape does not match local_dim^k");
    }
    MomentCheck c;
    c.hermiticity = hermiticity_error(m.matrix);
    c.min_eigenvalue = c.hermiticity <= kEigenTolerance ? hermitian_eigenvalues(m.matrix).back() : -1.0;
    c.trace_error = std::abs(m.matrix.trace() - 1.0);
    return c;
}

MomentOperator eref_moment(const Spectrum& spectrum, std::size_t local_dim, int k, const Limits& limits) {
    check_k(k, limits);
    power_dim(local_dim, k, limits);
    const std::vector<double> traces = power_traces(spectrum, k);
    return weighted_permutation_sum(local_dim, k, limits, [&](const CycleType& ct) { return h_sigma(traces, ct); });
}

MomentOperator eref_second_moment(double purity, std::size_t local_dim, const Limits& limits) {
    if (!(purity > 0.0 && purity <= 1.0 + 1e-12)) {
        throw std::invalid_argument("eref_second_moment: purity " + std::to_string(purity) + " outside (0, 1]");
    }
    const auto d = static_cast<double>(local_dim);
    const auto dim = static_cast<Eigen::Index>(power_dim(local_dim, 2, limits));
    const OperatorMatrix swap = perm_operator(Permutation::transposition(2, 0, 1), local_dim, limits);
    OperatorMatrix m = (OperatorMatrix::Identity(dim, dim) + purity * swap) / (d * d + purity * d);
    return {2, local_dim, std::move(m)};
}

double avg_purity(double purity, std::size_t local_dim) {
    if (!(purity > 0.0 && purity <= 1.0 + 1e-12)) {
        throw std::invalid_argument("avg_purity: purity " + std::to_string(purity) + " outside (0, 1]");
    }
    const auto d = static_cast<double>(local_dim);
    return (1.0 + d * purity) / (d + purity);
}

MomentOperator haar_moment(std::size_t local_dim, int k, const Limits& limits) {
    check_k(k, limits);
    power_dim(local_dim, k, limits);
    const std::vector<Permutation> perms = enumerate_sk(k, limits.max_k);
    OperatorMatrix m = permutation_sum(perms, std::vector<double>(perms.size(), 1.0), local_dim, limits);
    m /= rising_factorial(static_cast<double>(local_dim), k);
    return {k, local_dim, std::move(m)};
}

MomentOperator ghse_moment(std::size_t rank_dim, std::size_t local_dim, int k, const Limits& limits) {
    if (rank_dim == 0) throw std::invalid_argument("ghse_moment: zero rank dimension");
    check_k(k, limits);
    power_dim(local_dim, k, limits);
    const auto dr = static_cast<double>(rank_dim);
    return weighted_permutation_sum(local_dim, k, limits,
                                    [&](const CycleType& ct) { return std::pow(dr, ct.num_cycles()); });
}

double delta_haar(const Spectrum& spectrum, std::size_t local_dim, int k, const Limits& limits) {
    const MomentOperator e = eref_moment(spectrum, local_dim, k, limits);
    const MomentOperator h = haar_moment(local_dim, k, limits);
    return trace_norm(e.matrix - h.matrix);
}

double renyi2(const Spectrum& spectrum) { return std::max(0.0, -std::log(spectrum.purity())); }

Spectrum interpolated_spectrum(double epsilon, std::size_t dimension) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("interpolated_spectrum: epsilon outside [0, 1]");
    if (dimension == 0) throw std::invalid_argument("interpolated_spectrum: zero dimension");
    const double floor = epsilon / static_cast<double>(dimension);
    std::vector<double> v(dimension, floor);
    v[0] = (1.0 - epsilon) + floor;
    return Spectrum::from_eigenvalues(std::move(v));
}

MomentEstimate ghse_moment_mc(std::size_t rank_dim, std::size_t local_dim, int k, std::size_t n_samples,
                              std::uint64_t seed, int threads, const Limits& limits) {
    if (rank_dim == 0 || local_dim == 0) throw std::invalid_argument("ghse_moment_mc: zero dimension");
    if (n_samples == 0) throw std::invalid_argument("ghse_moment_mc: no samples");
    check_k(k, limits);
    const auto dim = static_cast<Eigen::Index>(power_dim(local_dim, k, limits));
    const auto da = static_cast<Eigen::Index>(local_dim);
    const auto dr = static_cast<Eigen::Index>(rank_dim);
    auto stats = detail::accumulate_samples(n_samples, threads, dim, dim, [&](std::size_t i) {
        Rng rng(derive_seed(seed, "ghse", i));
        const Amplitudes psi = haar_vector(rank_dim * local_dim, rng);
        // psi[r * D_A + a] -> M(a, r); Tr_R |psi><psi| = M M†.
        const Eigen::Map<const OperatorMatrix> m(psi.data(), da, dr);
        const OperatorMatrix rho = m * m.adjoint();
        return tensor_power(rho, k, limits);
    });
    return {k, local_dim, n_samples, std::move(stats.mean), std::move(stats.std), std::move(stats.stderr_)};
}

DensityMatrix scrooge_rho_xa(const DensityMatrix& rho0, std::size_t local_dim) {
    const auto da = static_cast<Eigen::Index>(local_dim);
    OperatorMatrix m = kron(rho0.matrix().transpose(), OperatorMatrix::Identity(da, da)) / static_cast<double>(local_dim);
    return DensityMatrix::from_matrix(std::move(m));
}

MomentEstimate scrooge_moment_mc(const DensityMatrix& rho_xa, std::span<const int> trace_out, int k,
                                 std::size_t n_samples, std::uint64_t seed, int threads, const Limits& limits) {
    if (n_samples == 0) throw std::invalid_argument("scrooge_moment_mc: no samples");
    check_k(k, limits);
    const std::size_t d = rho_xa.dimension();
    const int n = qubit_count(d);
    const QubitRegister reg(n);
    std::vector<int> keep;
    {
        std::vector<bool> traced(static_cast<std::size_t>(n), false);
        for (const int s : trace_out) {
            if (!reg.contains(s)) throw std::invalid_argument("scrooge_moment_mc: trace_out site outside register");
            traced[static_cast<std::size_t>(s)] = true;
        }
        for (int s = 0; s < n; ++s) {
            if (!traced[static_cast<std::size_t>(s)]) keep.push_back(s);
        }
    }
    const std::size_t local_dim = std::size_t{1} << keep.size();
    const auto dim = static_cast<Eigen::Index>(power_dim(local_dim, k, limits));
    const OperatorMatrix root = psd_sqrt(rho_xa.matrix(), kStateTolerance);
    const double dxa = static_cast<double>(d);
    auto stats = detail::accumulate_samples(n_samples, threads, dim, dim, [&](std::size_t i) {
        Rng rng(derive_seed(seed, "scrooge", i));
        const Amplitudes psi = haar_vector(d, rng);
        const Amplitudes w = root * psi;
        const double p = w.squaredNorm();
        if (!(p > 0.0)) return OperatorMatrix::Zero(dim, dim).eval();
        // Tr_X[w w†] = p · Tr_X[ŵ ŵ†], so the term is D_XA · p · (Tr_X[ŵ ŵ†])^{⊗k}.
        const StateVector unit(reg, w / std::sqrt(p), 1e-8);
        const DensityMatrix sigma = partial_trace(unit, keep, limits);
        return (dxa * p * tensor_power(sigma.matrix(), k, limits)).eval();
    });
    return {k, local_dim, n_samples, std::move(stats.mean), std::move(stats.std), std::move(stats.stderr_)};
}

}  // namespace deepmix
