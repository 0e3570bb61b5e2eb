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

#include "deepmix/harness/experiments.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "deepmix/ensembles.hpp"
#include "deepmix/kim.hpp"
#include "deepmix/parallel.hpp"
#include "deepmix/projected.hpp"
#include "deepmix/random.hpp"

#ifndef DEEPMIX_VERSION
#define DEEPMIX_VERSION "0.0.0+unknown"
#endif

namespace deepmix::harness {

namespace {

using nlohmann::json;

const std::vector<std::string> kEntryColumns = {"k",     "entry_row", "entry_col", "analytic_re",
                                                "analytic_im", "mc_re", "mc_im",     "stderr"};

void budget(bool ok, const std::string& what) {
    if (!ok) throw BudgetError(what);
}

void check_moments(int a_size, const std::vector<int>& ks, const Limits& limits) {
    for (const int k : ks) {
        budget(k <= limits.max_k, "k = " + std::to_string(k) + " exceeds cap " + std::to_string(limits.max_k));
        budget(static_cast<double>(a_size) * k <= std::log2(static_cast<double>(limits.max_operator_dim)),
               "moment dimension 2^(" + std::to_string(a_size) + "*" + std::to_string(k) + ") exceeds cap " +
                   std::to_string(limits.max_operator_dim));
    }
}

void check_chain(int s, int a, int b, const Limits& limits) {
    budget(s + a + b <= limits.max_state_qubits, "state of " + std::to_string(s + a + b) + " qubits exceeds cap " +
                                                     std::to_string(limits.max_state_qubits));
    budget(b <= limits.max_measured_qubits, "|B| = " + std::to_string(b) + " exceeds measured-qubit cap " +
                                                std::to_string(limits.max_measured_qubits));
}

bool fits_operator(int qubits, const Limits& limits) {
    return qubits < 63 && (std::uint64_t{1} << qubits) <= limits.max_operator_dim;
}

ResultTable entry_table(const std::string& name, int k, const OperatorMatrix& analytic, const MomentEstimate& mc,
                        ResultTable table) {
    if (table.columns.empty()) {
        table.name = name;
        table.columns = kEntryColumns;
    }
    for (Eigen::Index i = 0; i < analytic.rows(); ++i) {
        for (Eigen::Index j = 0; j < analytic.cols(); ++j) {
            table.add_row({std::int64_t{k}, std::int64_t{i}, std::int64_t{j}, analytic(i, j).real(), analytic(i, j).imag(),
                           mc.mean(i, j).real(), mc.mean(i, j).imag(), mc.stderr_(i, j)});
        }
    }
    return table;
}

double sample_mean(const std::vector<double>& x) {
    double s = 0.0;
    for (const double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double sample_std(const std::vector<double>& x, double mean) {
    if (x.size() < 2) return 0.0;
    double s = 0.0;
    for (const double v : x) s += (v - mean) * (v - mean);
    return std::sqrt(s / static_cast<double>(x.size() - 1));
}

std::vector<ResultTable> run(const ExperimentConfig&, const Fig1bParams& p, const Limits& limits) {
    ResultTable t{"fig1b", {"s2", "k", "delta_k"}, {}, {}};
    const std::size_t d = std::size_t{1} << (p.a_size + p.b_size);
    const std::size_t da = std::size_t{1} << p.a_size;
    for (const double eps : p.epsilon_grid) {
        const Spectrum spectrum = interpolated_spectrum(eps, d);
        const double s2 = renyi2(spectrum);
        for (const int k : p.k_list) t.add_row({s2, std::int64_t{k}, delta_haar(spectrum, da, k, limits)});
    }
    return {t};
}

std::vector<ResultTable> run(const ExperimentConfig& c, const DynamicsParams& p, const Limits& limits) {
    const std::size_t nb = p.b_sizes.size();
    const auto nr = static_cast<std::size_t>(p.n_realizations);
    std::vector<std::vector<DeltaRow>> results(nb * nr);
    parallel_for(nb * nr, c.threads, [&](std::size_t u) {
        const int b = p.b_sizes[u / nr];
        const std::size_t r = u % nr;
        Rng rho_rng(derive_seed(c.master_seed, "rho_s", r));
        Rng v_rng(derive_seed(c.master_seed, "v", r));
        const KimParams kim{p.J, p.g, p.h, p.a_size + b};
        const InitialStateSpec spec{p.s_size, p.rho_s, p.e_states};
        results[u] = dynamics_run(kim, spec, p.a_size, p.t_max, p.k_list, rho_rng, v_rng, 1, limits);
    });

    ResultTable rows{"dynamics", {"t", "k", "b_size", "realization", "delta_k"}, {}, {}};
    ResultTable agg{"dynamics_aggregate", {"t", "k", "b_size", "delta_mean", "delta_stderr", "n"}, {}, {}};
    for (std::size_t bi = 0; bi < nb; ++bi) {
        const std::int64_t b = p.b_sizes[bi];
        for (std::size_t r = 0; r < nr; ++r) {
            for (const DeltaRow& row : results[bi * nr + r]) {
                rows.add_row({std::int64_t{row.t}, std::int64_t{row.k}, b, static_cast<std::int64_t>(r), row.delta});
            }
        }
        const std::size_t per = results[bi * nr].size();
        for (std::size_t q = 0; q < per; ++q) {
            std::vector<double> x;
            for (std::size_t r = 0; r < nr; ++r) x.push_back(results[bi * nr + r][q].delta);
            const double mean = sample_mean(x);
            const double se = sample_std(x, mean) / std::sqrt(static_cast<double>(nr));
            const DeltaRow& head = results[bi * nr][q];
            agg.add_row({std::int64_t{head.t}, std::int64_t{head.k}, b, mean, se, static_cast<std::int64_t>(nr)});
        }
    }
    return {rows, agg};
}

std::vector<ResultTable> run(const ExperimentConfig& c, const SelfDualParams& p, const Limits& limits) {
    ResultTable t{"selfdual", {"t", "k", "b_size", "delta_k", "plateau_onset"}, {}, {}};
    for (const int b : p.b_sizes) {
        Rng rho_rng(derive_seed(c.master_seed, "rho_s", 0));
        const auto rows = selfdual_run(p.g, p.s_size, p.a_size, b, p.t_max, p.k_list, p.rho_s, rho_rng, c.threads, limits);
        for (const SelfDualRow& r : rows) {
            t.add_row({std::int64_t{r.t}, std::int64_t{r.k}, std::int64_t{b}, r.delta, std::int64_t{r.plateau_onset ? 1 : 0}});
        }
    }
    return {t};
}

std::vector<ResultTable> run(const ExperimentConfig& c, const ScroogeParams& p, const Limits& limits) {
    Rng rho_rng(derive_seed(c.master_seed, "rho_s", 0));
    const DensityMatrix rho0 = make_rho_s(p.rho0, p.s_size, rho_rng);
    const std::size_t da = std::size_t{1} << p.a_size;
    const DensityMatrix rho_xa = scrooge_rho_xa(rho0, da);
    std::vector<int> x;
    for (int i = 0; i < p.s_size; ++i) x.push_back(i);
    const Spectrum spectrum = Spectrum::of(rho0);
    ResultTable t;
    for (const int k : p.k_list) {
        const MomentOperator ref = eref_moment(spectrum, da, k, limits);
        const MomentEstimate mc = scrooge_moment_mc(rho_xa, x, k, p.n_samples,
                                                    derive_seed(c.master_seed, "scrooge", static_cast<std::uint64_t>(k)),
                                                    c.threads, limits);
        t = entry_table("scrooge_check", k, ref.matrix, mc, std::move(t));
    }
    t.metadata["rho0_eigenvalues"] = spectrum.eigenvalues();
    return {t};
}

std::vector<ResultTable> run(const ExperimentConfig& c, const GhseParams& p, const Limits& limits) {
    const std::size_t da = std::size_t{1} << p.a_size;
    ResultTable t;
    for (const int k : p.k_list) {
        const MomentOperator ref = ghse_moment(p.rank_dim, da, k, limits);
        const MomentEstimate mc = ghse_moment_mc(p.rank_dim, da, k, p.n_samples,
                                                 derive_seed(c.master_seed, "ghse", static_cast<std::uint64_t>(k)),
                                                 c.threads, limits);
        t = entry_table("ghse_check", k, ref.matrix, mc, std::move(t));
    }
    return {t};
}

std::vector<ResultTable> run(const ExperimentConfig& c, const McRefParams& p, const Limits& limits) {
    const Spectrum spectrum = Spectrum::from_eigenvalues(p.eigenvalues);
    const std::size_t da = std::size_t{1} << p.a_size;
    const ReferencePeResult res = mc_reference_pe(spectrum, p.a_size, p.b_size, p.k_list, p.n_unitaries,
                                                  derive_seed(c.master_seed, "mc_ref", 0), c.threads, limits);
    ResultTable t;
    for (std::size_t q = 0; q < p.k_list.size(); ++q) {
        const int k = p.k_list[q];
        t = entry_table("mc_ref_check", k, eref_moment(spectrum, da, k, limits).matrix, res.moments[q], std::move(t));
    }
    t.metadata["avg_purity_mean"] = res.avg_purity_mean;
    t.metadata["avg_purity_stderr"] = res.avg_purity_stderr;
    return {t};
}

std::vector<ResultTable> run(const ExperimentConfig& c, const ConcentrationParams& p, const Limits& limits) {
    ResultTable t{"concentration_scan", {"dim", "stat", "mean", "std"}, {}, {}};
    const std::size_t da = std::size_t{1} << p.a_size;
    const MomentOperator ref = eref_moment(Spectrum::pure(), da, p.k, limits);
    for (const std::uint64_t dim : p.dims) {
        const int n = qubit_count(dim);
        const std::uint64_t stream = derive_seed(c.master_seed, "concentration", dim);
        // Balanced split for the conditional-norm statistic; A fixed for the moment statistics.
        const std::uint64_t db_half = std::uint64_t{1} << (n / 2);
        std::vector<int> x, a, b;
        for (int i = 0; i < p.a_size; ++i) a.push_back(i);
        for (int i = p.a_size; i < n; ++i) b.push_back(i);
        std::vector<double> norm(p.n_samples), entry(p.n_samples), delta(p.n_samples);
        parallel_for(p.n_samples, c.threads, [&](std::size_t i) {
            Rng rng(derive_seed(stream, "sample", i));
            const StateVector psi = haar_state(dim, rng);
            double w = 0.0;
            for (std::uint64_t r = 0; r < dim / db_half; ++r) w += std::norm(psi[r * db_half]);
            norm[i] = static_cast<double>(db_half) * w;
            const ProjectedEnsemble ens = pe_from_purification(psi, x, a, b, 1, limits);
            const MomentOperator m = pe_moment(ens, p.k, 1, limits);
            entry[i] = m.matrix(0, 0).real();
            delta[i] = pe_delta(m, ref);
        });
        const auto dim_cell = static_cast<std::int64_t>(dim);
        for (const auto& [name, values] : {std::pair<const char*, const std::vector<double>*>{"cond_norm", &norm},
                                           {"moment_entry", &entry},
                                           {"delta_eref", &delta}}) {
            const double mean = sample_mean(*values);
            t.add_row({dim_cell, std::string(name), mean, sample_std(*values, mean)});
        }
    }
    return {t};
}

}  // namespace

std::string version_string() { return DEEPMIX_VERSION; }

void check_budget(const ExperimentConfig& config, const Limits& limits) {
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Fig1bParams>) {
                check_moments(p.a_size, p.k_list, limits);
                budget(p.a_size + p.b_size <= limits.max_state_qubits,
                       "spectrum on 2^" + std::to_string(p.a_size + p.b_size) + " levels exceeds cap 2^" +
                           std::to_string(limits.max_state_qubits));
            } else if constexpr (std::is_same_v<T, DynamicsParams> || std::is_same_v<T, SelfDualParams>) {
                check_moments(p.a_size, p.k_list, limits);
                for (const int b : p.b_sizes) check_chain(p.s_size, p.a_size, b, limits);
            } else if constexpr (std::is_same_v<T, ScroogeParams>) {
                check_moments(p.a_size, p.k_list, limits);
                budget(fits_operator(p.s_size + p.a_size, limits),
                       "rho_XA dimension 2^" + std::to_string(p.s_size + p.a_size) + " exceeds cap " +
                           std::to_string(limits.max_operator_dim));
            } else if constexpr (std::is_same_v<T, GhseParams>) {
                check_moments(p.a_size, p.k_list, limits);
                budget(static_cast<double>(p.rank_dim) * std::ldexp(1.0, p.a_size) <= std::ldexp(1.0, limits.max_state_qubits),
                       "gHSe sample dimension exceeds cap 2^" + std::to_string(limits.max_state_qubits));
            } else if constexpr (std::is_same_v<T, McRefParams>) {
                check_moments(p.a_size, p.k_list, limits);
                budget(fits_operator(p.a_size + p.b_size, limits),
                       "total dimension 2^" + std::to_string(p.a_size + p.b_size) + " exceeds cap " +
                           std::to_string(limits.max_operator_dim));
                budget(p.b_size <= limits.max_measured_qubits,
                       "|B| = " + std::to_string(p.b_size) + " exceeds cap " + std::to_string(limits.max_measured_qubits));
            } else {
                check_moments(p.a_size, {p.k}, limits);
                for (const std::uint64_t d : p.dims) {
                    budget(d <= limits.max_operator_dim,
                           "dimension " + std::to_string(d) + " exceeds cap " + std::to_string(limits.max_operator_dim));
                }
            }
        },
        config.params);
}

std::vector<ResultTable> run_experiment(const ExperimentConfig& config, const Limits& limits) {
    check_budget(config, limits);
    const auto start = std::chrono::steady_clock::now();
    std::vector<ResultTable> tables = std::visit([&](const auto& p) { return run(config, p, limits); }, config.params);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json echo = config.source;
    echo["master_seed"] = config.master_seed;
    echo["threads"] = config.threads;
    echo["output_dir"] = config.output_dir.string();
    for (ResultTable& t : tables) {
        t.metadata["experiment"] = config.experiment;
        t.metadata["table"] = t.name;
        t.metadata["columns"] = t.columns;
        t.metadata["rows"] = t.rows.size();
        t.metadata["master_seed"] = config.master_seed;
        t.metadata["config"] = echo;
        t.metadata["version"] = version_string();
        t.metadata["wall_time_seconds"] = wall;
    }
    return tables;
}

}  // namespace deepmix::harness
