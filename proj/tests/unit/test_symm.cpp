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

#include <gtest/gtest.h>

#include <cmath>

#include "deepmix/symm.hpp"
#include "test_util.hpp"

namespace deepmix {
namespace {

TEST(EnumerateSk, Sizes) {
    const auto s1 = enumerate_sk(1);
    ASSERT_EQ(s1.size(), 1u);
    EXPECT_TRUE(s1[0].is_identity());
    EXPECT_EQ(enumerate_sk(3).size(), 6u);
    EXPECT_EQ(enumerate_sk(5).size(), 120u);
}

TEST(EnumerateSk, LexicographicAndDistinct) {
    const auto s4 = enumerate_sk(4);
    for (std::size_t i = 1; i < s4.size(); ++i) EXPECT_LT(s4[i - 1].image(), s4[i].image());
}

TEST(EnumerateSk, Cap) {
    EXPECT_THROW(enumerate_sk(8), BudgetError);
    EXPECT_NO_THROW(enumerate_sk(4, 4));
    EXPECT_THROW(enumerate_sk(5, 4), BudgetError);
    EXPECT_THROW(enumerate_sk(0), std::invalid_argument);
}

TEST(Permutation, GroupLaw) {
    for (int k = 1; k <= 5; ++k) {
        for (const Permutation& s : enumerate_sk(k)) {
            EXPECT_TRUE(s.compose(s.inverse()).is_identity());
            EXPECT_TRUE(s.inverse().compose(s).is_identity());
        }
    }
}

TEST(Permutation, RejectsNonBijection) {
    EXPECT_THROW(Permutation({0, 0}), std::invalid_argument);
    EXPECT_THROW(Permutation({0, 2}), std::invalid_argument);
}

TEST(CycleType, Examples) {
    const CycleType id = cycle_type(Permutation::identity(4));
    EXPECT_EQ(id.parts, (std::vector<int>{1, 1, 1, 1}));
    EXPECT_EQ(id.num_cycles(), 4);
    const CycleType t = cycle_type(Permutation::transposition(3, 0, 1));
    EXPECT_EQ(t.parts, (std::vector<int>{2, 1}));
    EXPECT_EQ(t.num_cycles(), 2);
    const CycleType full = cycle_type(Permutation({1, 2, 3, 4, 0}));
    EXPECT_EQ(full.parts, (std::vector<int>{5}));
    EXPECT_EQ(full.num_cycles(), 1);
}

TEST(PermOperator, IdentityAndSwap) {
    const OperatorMatrix id = perm_operator(Permutation::identity(3), 2);
    EXPECT_EQ(test::max_diff(id, test::identity(8)), 0.0);
    const OperatorMatrix sw = perm_operator(Permutation::transposition(2, 0, 1), 2);
    EXPECT_EQ(test::max_diff(sw, test::swap_operator(2)), 0.0);
    EXPECT_EQ(sw.trace(), Complex(2.0));
    EXPECT_EQ(perm_operator(Permutation({1, 2, 0}), 2).trace(), Complex(2.0));
}

TEST(PermOperator, MovesCopyAToSigmaA) {
    // sigma = (0 -> 1, 1 -> 2, 2 -> 0): |i0 i1 i2> -> |i2 i0 i1>.
    const Permutation sigma({1, 2, 0});
    const auto map = perm_index_map(sigma, 3);
    const std::uint64_t in = 0 * 9 + 1 * 3 + 2;
    const std::uint64_t out = 2 * 9 + 0 * 3 + 1;
    EXPECT_EQ(map[in], out);
}

TEST(PermOperator, Homomorphism) {
    for (const std::size_t d : {2u, 3u}) {
        const auto s3 = enumerate_sk(3);
        for (const Permutation& s : s3) {
            for (const Permutation& t : s3) {
                const OperatorMatrix lhs = perm_operator(s, d) * perm_operator(t, d);
                EXPECT_EQ(test::max_diff(lhs, perm_operator(s.compose(t), d)), 0.0);
            }
        }
    }
}

TEST(PermOperator, TraceIdentity) {
    for (const std::size_t d : {2u, 3u}) {
        for (const Permutation& s : enumerate_sk(4)) {
            EXPECT_EQ(perm_operator(s, d).trace().real(), std::pow(static_cast<double>(d), cycle_type(s).num_cycles()));
        }
    }
}

TEST(PermOperator, DimensionCap) {
    Limits lim;
    lim.max_operator_dim = 16;
    EXPECT_THROW(perm_operator(Permutation::identity(3), 3, lim), BudgetError);
}

TEST(PermutationSum, RisingFactorial) {
    for (int k = 1; k <= 6; ++k) {
        const auto perms = enumerate_sk(k);
        for (int d = 1; d <= 4; ++d) {
            double sum = 0.0;
            for (const Permutation& p : perms) sum += std::pow(d, cycle_type(p).num_cycles());
            EXPECT_DOUBLE_EQ(sum, rising_factorial(d, k));
        }
    }
}

TEST(PermutationSum, MatchesExplicitSum) {
    const auto perms = enumerate_sk(3);
    std::vector<double> c;
    OperatorMatrix expected = OperatorMatrix::Zero(8, 8);
    for (std::size_t i = 0; i < perms.size(); ++i) {
        c.push_back(0.1 * static_cast<double>(i + 1));
        expected += c.back() * perm_operator(perms[i], 2);
    }
    EXPECT_LT(test::max_diff(permutation_sum(perms, c, 2), expected), 1e-15);
}

TEST(PowerTraces, Examples) {
    for (const double t : power_traces(Spectrum::pure(3), 5)) EXPECT_EQ(t, 1.0);
    const auto flat = power_traces(Spectrum::flat(2), 4);
    for (int n = 1; n <= 4; ++n) EXPECT_NEAR(flat[static_cast<std::size_t>(n - 1)], std::pow(2.0, 1 - n), 1e-15);
    EXPECT_NEAR(power_traces(Spectrum::from_eigenvalues({0.5, 0.5}), 3)[2], 0.25, 1e-15);
}

TEST(PowerTraces, MonotoneNonIncreasing) {
    Rng rng(4);
    for (int rep = 0; rep < 10; ++rep) {
        const auto t = power_traces(Spectrum::of(ginibre_density(8, 5, rng)), 7);
        EXPECT_NEAR(t[0], 1.0, 1e-10);
        for (std::size_t n = 1; n < t.size(); ++n) EXPECT_LE(t[n], t[n - 1] + 1e-15);
    }
}

TEST(HSigma, Examples) {
    const Spectrum half = Spectrum::from_eigenvalues({0.5, 0.5});
    const auto tr = power_traces(half, 3);
    EXPECT_NEAR(h_sigma(tr, cycle_type(Permutation::identity(3))), 1.0, 1e-15);
    EXPECT_NEAR(h_sigma(tr, CycleType{{2, 1}}), 0.5, 1e-15);
    const auto pure = power_traces(Spectrum::pure(2), 4);
    for (const Permutation& p : enumerate_sk(4)) EXPECT_EQ(h_sigma(pure, cycle_type(p)), 1.0);
    EXPECT_THROW(h_sigma(tr, CycleType{{4}}), std::invalid_argument);
}

TEST(HSigma, RangeAndPurity) {
    Rng rng(12);
    for (int rep = 0; rep < 10; ++rep) {
        const Spectrum s = Spectrum::of(ginibre_density(4, 4, rng));
        const auto tr = power_traces(s, 4);
        bool all_one = true;
        for (const Permutation& p : enumerate_sk(4)) {
            const double h = h_sigma(tr, cycle_type(p));
            EXPECT_GE(h, 0.0);
            EXPECT_LE(h, 1.0 + 1e-12);
            if (std::abs(h - 1.0) > 1e-10) all_one = false;
        }
        EXPECT_FALSE(all_one);
    }
}

TEST(HSigma, MaximallyMixed) {
    for (const std::size_t d : {2u, 8u, 64u}) {
        const auto tr = power_traces(Spectrum::flat(d), 4);
        for (const Permutation& p : enumerate_sk(4)) {
            const CycleType ct = cycle_type(p);
            EXPECT_NEAR(h_sigma(tr, ct), std::pow(static_cast<double>(d), ct.num_cycles() - 4), 1e-15);
        }
    }
}

}  // namespace
}  // namespace deepmix
