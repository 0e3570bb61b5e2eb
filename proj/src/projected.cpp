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

#include "deepmix/projected.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "deepmix/parallel.hpp"
#include "deepmix/random.hpp"
#include "sample_stats.hpp"

namespace deepmix {

namespace {

std::vector<int> sorted(std::span<const int> sites) {
    std::vector<int> v(sites.begin(), sites.end());
    std::sort(v.begin(), v.end());
    return v;
}

void check_partition(std::initializer_list<std::span<const int>> sets, int n, const char* what) {
    std::vector<int> owner(static_cast<std::size_t>(n), -1);
    int tag = 0;
    for (const auto set : sets) {
        for (const int s : set) {
            if (s < 0 || s >= n) {
                throw std::invalid_argument(std::string(what) + ": site " + std::to_string(s) + " outside register");
            }
            if (owner[static_cast<std::size_t>(s)] != -1) {
                throw std::invalid_argument(std::string(what) + ": site " + std::to_string(s) + " listed twice");
            }
            owner[static_cast<std::size_t>(s)] = tag;
        }
        ++tag;
    }
    for (int s = 0; s < n; ++s) {
        if (owner[static_cast<std::size_t>(s)] == -1) {
            throw std::invalid_argument(std::string(what) + ": site " + std::to_string(s) + " not assigned");
        }
    }
}

void check_measured(std::size_t b, const Limits& limits) {
    if (b > static_cast<std::size_t>(limits.max_measured_qubits)) {
        throw BudgetError("projected ensemble: " + std::to_string(b) + " measured qubits exceed cap " +
                          std::to_string(limits.max_measured_qubits));
    }
}

struct RawOutcome {
    double p = 0.0;
    OperatorMatrix rho;  // unnormalized
};

ProjectedEnsemble finish(std::size_t local_dim, std::vector<RawOutcome>& raw) {
    ProjectedEnsemble ens;
    ens.local_dim = local_dim;
    double kept = 0.0;
    for (const RawOutcome& r : raw) {
        ens.total_probability += r.p;
        if (r.p >= kPruneThreshold) kept += r.p;
    }
    if (!(kept > 0.0)) throw std::domain_error("projected ensemble: every outcome has zero probability");
    for (std::size_t z = 0; z < raw.size(); ++z) {
        RawOutcome& r = raw[z];
        if (r.p < kPruneThreshold) continue;
        OperatorMatrix m = r.rho / r.p;
        m = 0.5 * (m + m.adjoint()).eval();
        ens.entries.push_back({r.p / kept, DensityMatrix::from_trusted(std::move(m)), z});
    }
    return ens;
}

}  // namespace

ProjectedEnsemble pe_from_density(const DensityMatrix& rho, std::span<const int> a_sites, std::span<const int> b_sites,
                                  const Limits& limits) {
    const QubitRegister reg(qubit_count(rho.dimension()));
    check_partition({a_sites, b_sites}, reg.n_qubits(), "pe_from_density");
    check_measured(b_sites.size(), limits);
    const std::vector<int> a = sorted(a_sites);
    const std::vector<int> b = sorted(b_sites);
    const std::vector<std::uint64_t> ad = deposit_table(a, reg);
    const std::vector<std::uint64_t> bd = deposit_table(b, reg);
    const auto da = static_cast<Eigen::Index>(ad.size());
    const OperatorMatrix& m = rho.matrix();
    std::vector<RawOutcome> raw(bd.size());
    for (std::size_t z = 0; z < bd.size(); ++z) {
        OperatorMatrix block(da, da);
        for (Eigen::Index j = 0; j < da; ++j) {
            for (Eigen::Index i = 0; i < da; ++i) {
                block(i, j) = m(static_cast<Eigen::Index>(ad[static_cast<std::size_t>(i)] | bd[z]),
                                static_cast<Eigen::Index>(ad[static_cast<std::size_t>(j)] | bd[z]));
            }
        }
        raw[z].p = block.trace().real();
        raw[z].rho = std::move(block);
    }
    return finish(ad.size(), raw);
}

ProjectedEnsemble pe_from_purification(const StateVector& psi, std::span<const int> x_sites,
                                       std::span<const int> a_sites, std::span<const int> b_sites, int threads,
                                       const Limits& limits) {
    const QubitRegister& reg = psi.reg();
    check_partition({x_sites, a_sites, b_sites}, reg.n_qubits(), "pe_from_purification");
    check_measured(b_sites.size(), limits);
    const std::vector<int> x = sorted(x_sites);
    const std::vector<int> a = sorted(a_sites);
    const std::vector<int> b = sorted(b_sites);
    const std::vector<std::uint64_t> xd = deposit_table(x, reg);
    const std::vector<std::uint64_t> ad = deposit_table(a, reg);
    const std::vector<std::uint64_t> bd = deposit_table(b, reg);
    const auto da = static_cast<Eigen::Index>(ad.size());
    const auto dx = static_cast<Eigen::Index>(xd.size());
    std::vector<RawOutcome> raw(bd.size());
    parallel_for(bd.size(), threads, [&](std::size_t z) {
        OperatorMatrix w(da, dx);
        for (Eigen::Index r = 0; r < dx; ++r) {
            for (Eigen::Index i = 0; i < da; ++i) {
                w(i, r) = psi[ad[static_cast<std::size_t>(i)] | xd[static_cast<std::size_t>(r)] | bd[z]];
            }
        }
        raw[z].p = w.squaredNorm();
        raw[z].rho = w * w.adjoint();
    });
    return finish(ad.size(), raw);
}

MomentOperator pe_moment(const ProjectedEnsemble& ens, int k, int threads, const Limits& limits) {
    if (k < 1) throw std::invalid_argument("pe_moment: k must be positive");
    if (ens.entries.empty()) throw std::invalid_argument("pe_moment: empty ensemble");
    std::size_t dim = 1;
    for (int a = 0; a < k; ++a) {
        dim *= ens.local_dim;
        if (dim > limits.max_operator_dim) {
            throw BudgetError("pe_moment: dimension " + std::to_string(ens.local_dim) + "^" + std::to_string(k) +
                              " exceeds cap " + std::to_string(limits.max_operator_dim));
        }
    }
    const auto d = static_cast<Eigen::Index>(dim);
    OperatorMatrix m = detail::ordered_sum(ens.entries.size(), threads, d, d, [&](std::size_t i) {
        const PeEntry& e = ens.entries[i];
        return (e.weight * tensor_power(e.state.matrix(), k, limits)).eval();
    });
    return {k, ens.local_dim, std::move(m)};
}

double pe_delta(const MomentOperator& m1, const MomentOperator& m2) {
    if (m1.k != m2.k || m1.local_dim != m2.local_dim || m1.matrix.rows() != m2.matrix.rows()) {
        throw std::invalid_argument("pe_delta: moments of different shape");
    }
    return trace_norm(m1.matrix - m2.matrix);
}

std::vector<MomentOperator> projected_moments(const StateVector& psi, std::span<const int> x_sites,
                                              std::span<const int> a_sites, std::span<const int> b_sites,
                                              std::span<const int> ks, int threads, const Limits& limits) {
    const ProjectedEnsemble ens = pe_from_purification(psi, x_sites, a_sites, b_sites, threads, limits);
    std::vector<MomentOperator> out;
    out.reserve(ks.size());
    for (const int k : ks) out.push_back(pe_moment(ens, k, threads, limits));
    return out;
}

ReferencePeResult mc_reference_pe(const Spectrum& spectrum, int a_size, int b_size, std::span<const int> ks,
                                  std::size_t n_unitaries, std::uint64_t seed, int threads, const Limits& limits) {
    if (a_size < 0 || b_size < 0) throw std::invalid_argument("mc_reference_pe: negative subsystem size");
    if (n_unitaries == 0) throw std::invalid_argument("mc_reference_pe: no unitaries");
    if (ks.empty()) throw std::invalid_argument("mc_reference_pe: empty k list");
    check_measured(static_cast<std::size_t>(b_size), limits);
    const std::uint64_t total = std::uint64_t{1} << (a_size + b_size);
    if (total > limits.max_operator_dim) {
        throw BudgetError("mc_reference_pe: total dimension " + std::to_string(total) + " exceeds cap " +
                          std::to_string(limits.max_operator_dim));
    }
    if (spectrum.size() > total) throw std::invalid_argument("mc_reference_pe: spectrum longer than the total dimension");
    const std::size_t da = std::size_t{1} << a_size;
    const std::size_t db = std::size_t{1} << b_size;
    std::vector<double> lambda;
    for (const double v : spectrum.eigenvalues()) {
        if (v > 0.0) lambda.push_back(v);
    }
    const std::size_t rank = lambda.size();
    Eigen::VectorXd root(static_cast<Eigen::Index>(rank));
    for (std::size_t l = 0; l < rank; ++l) root[static_cast<Eigen::Index>(l)] = std::sqrt(lambda[l]);
    std::vector<Eigen::Index> dims;
    for (const int k : ks) {
        if (k < 1) throw std::invalid_argument("mc_reference_pe: k must be positive");
        std::size_t d = 1;
        for (int a = 0; a < k; ++a) d *= da;
        if (d > limits.max_operator_dim) throw BudgetError("mc_reference_pe: moment dimension exceeds cap");
        dims.push_back(static_cast<Eigen::Index>(d));
    }

    struct PerUnitary {
        std::vector<OperatorMatrix> moments;
        double purity = 0.0;
    };
    std::vector<PerUnitary> results(n_unitaries);
    parallel_for(n_unitaries, threads, [&](std::size_t u) {
        Rng rng(derive_seed(seed, "unitary", u));
        const OperatorMatrix v = haar_isometry(total, rank, rng) * root.asDiagonal();
        ProjectedEnsemble ens;
        ens.local_dim = da;
        std::vector<RawOutcome> raw(db);
        for (std::size_t z = 0; z < db; ++z) {
            OperatorMatrix w(static_cast<Eigen::Index>(da), static_cast<Eigen::Index>(rank));
            for (std::size_t i = 0; i < da; ++i) w.row(static_cast<Eigen::Index>(i)) = v.row(static_cast<Eigen::Index>(i * db + z));
            raw[z].rho = w * w.adjoint();
            raw[z].p = raw[z].rho.trace().real();
        }
        ens = finish(da, raw);
        PerUnitary& out = results[u];
        for (const int k : ks) out.moments.push_back(pe_moment(ens, k, 1, limits).matrix);
        for (const PeEntry& e : ens.entries) out.purity += e.weight * e.state.purity();
    });

    ReferencePeResult res;
    const auto n = static_cast<double>(n_unitaries);
    for (std::size_t q = 0; q < ks.size(); ++q) {
        const Eigen::Index d = dims[q];
        OperatorMatrix mean = OperatorMatrix::Zero(d, d);
        for (const PerUnitary& r : results) mean += r.moments[q];
        mean /= n;
        Eigen::MatrixXd var = Eigen::MatrixXd::Zero(d, d);
        for (const PerUnitary& r : results) var += (r.moments[q] - mean).cwiseAbs2();
        var /= n_unitaries > 1 ? n - 1.0 : 1.0;
        Eigen::MatrixXd sd = var.cwiseSqrt();
        Eigen::MatrixXd se = sd / std::sqrt(n);
        res.moments.push_back({ks[q], da, n_unitaries, std::move(mean), std::move(sd), std::move(se)});
    }
    double pm = 0.0;
    for (const PerUnitary& r : results) pm += r.purity;
    pm /= n;
    double pv = 0.0;
    for (const PerUnitary& r : results) pv += (r.purity - pm) * (r.purity - pm);
    pv /= n_unitaries > 1 ? n - 1.0 : 1.0;
    res.avg_purity_mean = pm;
    res.avg_purity_stderr = std::sqrt(pv / n);
    return res;
}

}  // namespace deepmix
