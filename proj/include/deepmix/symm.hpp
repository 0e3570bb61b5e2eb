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

/// An element of S_k stored as its image array: a -> image[a].
class Permutation {
public:
    explicit Permutation(std::vector<int> image);
    static Permutation identity(int k);
    /// The transposition (a b) in S_k.
    static Permutation transposition(int k, int a, int b);

    int size() const noexcept { return static_cast<int>(image_.size()); }
    const std::vector<int>& image() const noexcept { return image_; }
    int operator()(int a) const { return image_[static_cast<std::size_t>(a)]; }

    /// (this ∘ other)(a) = this(other(a)).
    Permutation compose(const Permutation& other) const;
    Permutation inverse() const;
    bool is_identity() const noexcept;

    bool operator==(const Permutation&) const = default;

private:
    std::vector<int> image_;
};

struct CycleType {
    /// Cycle lengths, descending.
    std::vector<int> parts;

    int num_cycles() const noexcept { return static_cast<int>(parts.size()); }
    int order() const noexcept;
    bool operator==(const CycleType&) const = default;
};

/// All k! permutations in lexicographic order of their image arrays.
/// Throws BudgetError when k > max_k.
std::vector<Permutation> enumerate_sk(int k, int max_k = Limits{}.max_k);

CycleType cycle_type(const Permutation& sigma);

/// Basis-index action of Perm(sigma) on (C^local_dim)^{⊗k}: entry i is the
/// image of basis index i. Copy 0 is the most significant digit, and the
/// digit in copy a moves to copy sigma(a), i.e.
/// |i_1..i_k> -> |i_{sigma^-1(1)}..i_{sigma^-1(k)}>.
std::vector<std::uint64_t> perm_index_map(const Permutation& sigma, std::size_t local_dim);

/// Dense 0/1 matrix of Perm(sigma). Satisfies P(s)P(t) = P(s∘t).
OperatorMatrix perm_operator(const Permutation& sigma, std::size_t local_dim, const Limits& limits = {});

/// Σ_σ coeffs[i]·Perm(perms[i]) without materializing each term.
OperatorMatrix permutation_sum(const std::vector<Permutation>& perms, const std::vector<double>& coeffs,
                               std::size_t local_dim, const Limits& limits = {});

/// [t_1, .., t_k] with t_n = Tr rho^n.
std::vector<double> power_traces(const Spectrum& spectrum, int k);

/// Π_m traces[n_m - 1] over the cycle lengths n_m.
double h_sigma(const std::vector<double>& traces, const CycleType& ct);

/// D (D+1) ... (D+k-1).
double rising_factorial(double d, int k);

}  // namespace deepmix
