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

#include "deepmix/symm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace deepmix {

Permutation::Permutation(std::vector<int> image) : image_(std::move(image)) {
    std::vector<bool> hit(image_.size(), false);
    for (const int v : image_) {
        if (v < 0 || static_cast<std::size_t>(v) >= image_.size() || hit[static_cast<std::size_t>(v)]) {
            throw std::invalid_argument("Permutation: image is not a bijection");
        }
        hit[static_cast<std::size_t>(v)] = true;
    }
}

Permutation Permutation::identity(int k) {
    if (k < 0) throw std::invalid_argument("Permutation::identity: negative size");
    std::vector<int> image(static_cast<std::size_t>(k));
    std::iota(image.begin(), image.end(), 0);
    return Permutation(std::move(image));
}

Permutation Permutation::transposition(int k, int a, int b) {
    Permutation p = identity(k);
    if (a < 0 || b < 0 || a >= k || b >= k) throw std::invalid_argument("Permutation::transposition: index out of range");
    std::swap(p.image_[static_cast<std::size_t>(a)], p.image_[static_cast<std::size_t>(b)]);
    return p;
}

Permutation Permutation::compose(const Permutation& other) const {
    if (other.size() != size()) throw std::invalid_argument("Permutation::compose: size mismatch");
    std::vector<int> image(image_.size());
    for (std::size_t a = 0; a < image.size(); ++a) image[a] = (*this)(other(static_cast<int>(a)));
    return Permutation(std::move(image));
}

Permutation Permutation::inverse() const {
    std::vector<int> image(image_.size());
    for (std::size_t a = 0; a < image.size(); ++a) image[static_cast<std::size_t>(image_[a])] = static_cast<int>(a);
    return Permutation(std::move(image));
}

bool Permutation::is_identity() const noexcept {
    for (std::size_t a = 0; a < image_.size(); ++a) {
        if (image_[a] != static_cast<int>(a)) return false;
    }
    return true;
}

int CycleType::order() const noexcept { return std::accumulate(parts.begin(), parts.end(), 0); }

std::vector<Permutation> enumerate_sk(int k, int max_k) {
    if (k < 1) throw std::invalid_argument("enumerate_sk: k must be positive");
    if (k > max_k) throw BudgetError("enumerate_sk: k = " + std::to_string(k) + " exceeds cap " + std::to_string(max_k));
    std::vector<int> image(static_cast<std::size_t>(k));
    std::iota(image.begin(), image.end(), 0);
    std::vector<Permutation> out;
    do {
        out.emplace_back(image);
    } while (std::next_permutation(image.begin(), image.end()));
    return out;
}

CycleType cycle_type(const Permutation& sigma) {
    const int k = sigma.size();
    std::vector<bool> seen(static_cast<std::size_t>(k), false);
    CycleType ct;
    for (int a = 0; a < k; ++a) {
        if (seen[static_cast<std::size_t>(a)]) continue;
        int len = 0;
        for (int b = a; !seen[static_cast<std::size_t>(b)]; b = sigma(b)) {
            seen[static_cast<std::size_t>(b)] = true;
            ++len;
        }
        ct.parts.push_back(len);
    }
    std::sort(ct.parts.begin(), ct.parts.end(), std::greater<>());
    return ct;
}

std::vector<std::uint64_t> perm_index_map(const Permutation& sigma, std::size_t local_dim) {
    if (local_dim == 0) throw std::invalid_argument("perm_index_map: zero local dimension");
    const int k = sigma.size();
    std::vector<std::uint64_t> weight(static_cast<std::size_t>(k));
    std::uint64_t dim = 1;
    for (int a = k - 1; a >= 0; --a) {
        weight[static_cast<std::size_t>(a)] = dim;
        dim *= local_dim;
    }
    std::vector<std::uint64_t> map(dim);
    std::vector<std::uint64_t> digit(static_cast<std::size_t>(k), 0);
    for (std::uint64_t i = 0; i < dim; ++i) {
        std::uint64_t out = 0;
        for (int a = 0; a < k; ++a) out += digit[static_cast<std::size_t>(a)] * weight[static_cast<std::size_t>(sigma(a))];
        map[i] = out;
        for (int a = k - 1; a >= 0; --a) {
            if (++digit[static_cast<std::size_t>(a)] < local_dim) break;
            digit[static_cast<std::size_t>(a)] = 0;
        }
    }
    return map;
}

namespace {

std::uint64_t checked_power(std::size_t local_dim, int k, const Limits& limits) {
    std::uint64_t dim = 1;
    for (int a = 0; a < k; ++a) {
        dim *= local_dim;
        if (dim > limits.max_operator_dim) {
            throw BudgetError("permutation operator: dimension " + std::to_string(local_dim) + "^" + std::to_string(k) +
                              " exceeds cap " + std::to_string(limits.max_operator_dim));
        }
    }
    return dim;
}

}  // namespace

OperatorMatrix perm_operator(const Permutation& sigma, std::size_t local_dim, const Limits& limits) {
    const auto dim = static_cast<Eigen::Index>(checked_power(local_dim, sigma.size(), limits));
    const std::vector<std::uint64_t> map = perm_index_map(sigma, local_dim);
    OperatorMatrix p = OperatorMatrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) p(static_cast<Eigen::Index>(map[static_cast<std::size_t>(i)]), i) = 1.0;
    return p;
}

OperatorMatrix permutation_sum(const std::vector<Permutation>& perms, const std::vector<double>& coeffs,
                               std::size_t local_dim, const Limits& limits) {
    if (perms.empty() || perms.size() != coeffs.size()) {
        throw std::invalid_argument("permutation_sum: need one coefficient per permutation");
    }
    const auto dim = static_cast<Eigen::Index>(checked_power(local_dim, perms.front().size(), limits));
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t s = 0; s < perms.size(); ++s) {
        if (perms[s].size() != perms.front().size()) throw std::invalid_argument("permutation_sum: mixed k");
        const std::vector<std::uint64_t> map = perm_index_map(perms[s], local_dim);
        for (Eigen::Index i = 0; i < dim; ++i) acc(static_cast<Eigen::Index>(map[static_cast<std::size_t>(i)]), i) += coeffs[s];
    }
    return acc.cast<Complex>();
}

std::vector<double> power_traces(const Spectrum& spectrum, int k) {
    if (k < 1) throw std::invalid_argument("power_traces: k must be positive");
    std::vector<double> t(static_cast<std::size_t>(k));
    for (int n = 1; n <= k; ++n) t[static_cast<std::size_t>(n - 1)] = spectrum.power_sum(n);
    return t;
}

double h_sigma(const std::vector<double>& traces, const CycleType& ct) {
    double h = 1.0;
    for (const int n : ct.parts) {
        if (n < 1 || static_cast<std::size_t>(n) > traces.size()) {
            throw std::invalid_argument("h_sigma: cycle of length " + std::to_string(n) + " but only " +
                                        std::to_string(traces.size()) + " power traces");
        }
        h *= traces[static_cast<std::size_t>(n - 1)];
    }
    return h;
}

double rising_factorial(double d, int k) {
    double r = 1.0;
    for (int a = 0; a < k; ++a) r *= d + a;
    return r;
}

}  // namespace deepmix
