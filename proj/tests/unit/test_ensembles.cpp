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
#include <numeric>

#include "deepmix/ensembles.hpp"
#include "deepmix/projected.hpp"
#include "deepmix/symm.hpp"
#include "test_util.hpp"

namespace deepmix {
namespace {

using test::identity;
using test::max_diff;
using test::swap_operator;

void expect_valid(const MomentOperator& m) {
    const MomentCheck c = check_moment(m);
    EXPECT_LE(c.hermiticity, 1e-10);
    EXPECT_GE(c.min_eigenvalue, -1e-10);
    EXPECT_LE(c.trace_error, 1e-10);
}

// a I + b SWAP on C^2 ⊗ C^2 has eigenvalue a + b on the symmetric subspace
// (multiplicity 3) and a - b on the antisymmetric one (multiplicity 1).
double delta2_closed_form(double p) {
    const double a = 1.0 / (4.0 + 2.0 * p), b = p / (4.0 + 2.0 * p);
    const double haar = 1.0 / 6.0;
    return 3.0 * std::abs((a + b) - 2.0 * haar) + std::abs(a - b);
}

TEST(ErefMoment, FirstMomentIsMaximallyMixed) {
    Rng rng(1);
    const Spectrum s = Spectrum::of(ginibre_density(4, 4, rng));
    for (const std::size_t da : {2u, 4u}) {
        EXPECT_LT(max_diff(eref_moment(s, da, 1).matrix, identity(static_cast<Eigen::Index>(da)) / static_cast<double>(da)),
                  1e-15);
    }
}

TEST(ErefMoment, PureSecondMoment) {
    const MomentOperator m = eref_moment(Spectrum::pure(), 2, 2);
    EXPECT_LT(max_diff(m.matrix, (identity(4) + swap_operator(2)) / 6.0), 1e-15);
}

TEST(ErefMoment, FlatQuarterPurity) {
    const MomentOperator m = eref_moment(Spectrum::flat(4), 2, 2);
    EXPECT_LT(max_diff(m.matrix, (identity(4) + 0.25 * swap_operator(2)) / 4.5), 1e-15);
}

TEST(ErefMoment, Caps) {
    EXPECT_THROW(eref_moment(Spectrum::pure(), 2, 8), BudgetError);
    Limits lim;
    lim.max_operator_dim = 16;
    EXPECT_THROW(eref_moment(Spectrum::pure(), 4, 3, lim), BudgetError);
}

TEST(ErefSecondMoment, MatchesGroupSum) {
    for (const std::size_t da : {2u, 4u}) {
        for (const double p : {0.25, 0.5, 0.9, 1.0}) {
            // Any spectrum with the requested purity: two levels a, 1 - a.
            const double a = 0.5 * (1.0 + std::sqrt(2.0 * p - 1.0 > 0 ? 2.0 * p - 1.0 : 0.0));
            const Spectrum s = p >= 0.5 ? Spectrum::from_eigenvalues({a, 1.0 - a}) : Spectrum::flat(static_cast<std::size_t>(std::lround(1.0 / p)));
            ASSERT_NEAR(s.purity(), p, 1e-14);
            EXPECT_LT(max_diff(eref_second_moment(p, da).matrix, eref_moment(s, da, 2).matrix), 1e-14);
        }
    }
    EXPECT_NEAR(eref_second_moment(0.25, 2).matrix.trace().real(), 1.0, 1e-15);
    EXPECT_LT(max_diff(eref_second_moment(1.0, 2).matrix, (identity(4) + swap_operator(2)) / 6.0), 1e-15);
    EXPECT_THROW(eref_second_moment(0.0, 2), std::invalid_argument);
    EXPECT_THROW(eref_second_moment(1.5, 2), std::invalid_argument);
}

TEST(AvgPurity, Examples) {
    EXPECT_DOUBLE_EQ(avg_purity(1.0, 2), 1.0);
    EXPECT_DOUBLE_EQ(avg_purity(1.0, 8), 1.0);
    EXPECT_NEAR(avg_purity(0.25, 2), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(avg_purity(0.5, 2), 0.8, 1e-15);
}

TEST(AvgPurity, IncreasingAndBounded) {
    double prev = 0.0;
    for (int i = 1; i <= 100; ++i) {
        const double v = avg_purity(i / 100.0, 4);
        EXPECT_GT(v, prev);
        EXPECT_LE(v, 1.0);
        prev = v;
    }
}

TEST(AvgPurity, ConsistentWithSecondMoment) {
    for (const std::size_t da : {2u, 4u}) {
        for (const double p : {0.25, 0.5, 0.75, 1.0}) {
            const auto d = static_cast<Eigen::Index>(da);
            const Complex tr = (eref_second_moment(p, da).matrix * swap_operator(d)).trace();
            EXPECT_NEAR(tr.real(), avg_purity(p, da), 1e-12);
        }
    }
}

TEST(HaarMoment, Examples) {
    EXPECT_LT(max_diff(haar_moment(4, 1).matrix, identity(4) / 4.0), 1e-15);
    EXPECT_LT(max_diff(haar_moment(2, 2).matrix, (identity(4) + swap_operator(2)) / 6.0), 1e-15);
    for (int k = 1; k <= 5; ++k) {
        EXPECT_LT(max_diff(haar_moment(2, k).matrix, eref_moment(Spectrum::pure(), 2, k).matrix), 1e-14);
    }
}

TEST(HaarMoment, ScaledSymmetricProjector) {
    const MomentOperator m = haar_moment(2, 3);
    const OperatorMatrix p = m.matrix * rising_factorial(2, 3) / 6.0;
    EXPECT_LT(max_diff(p * p, p), 1e-13);
    EXPECT_NEAR(p.trace().real(), 4.0, 1e-13);
}

TEST(GhseMoment, Examples) {
    for (int k = 1; k <= 4; ++k) EXPECT_LT(max_diff(ghse_moment(1, 2, k).matrix, haar_moment(2, k).matrix), 1e-15);
    EXPECT_LT(max_diff(ghse_moment(2, 2, 2).matrix, (2.0 * identity(4) + swap_operator(2)) / 10.0), 1e-15);
    EXPECT_LT(max_diff(ghse_moment(1 << 20, 2, 2).matrix, identity(4) / 4.0), 1e-6);
}

TEST(GhseMoment, FlatSpectrumReduction) {
    for (const std::size_t r : {1u, 2u, 4u}) {
        for (const std::size_t da : {2u, 4u}) {
            for (int k = 1; k <= 4; ++k) {
                EXPECT_LT(max_diff(ghse_moment(r, da, k).matrix, eref_moment(Spectrum::flat(r), da, k).matrix), 1e-14);
            }
        }
    }
}

TEST(Moments, ValidAndUnitarilyCovariant) {
    Rng rng(31);
    const Spectrum s = Spectrum::of(ginibre_density(4, 4, rng));
    for (int k = 1; k <= 3; ++k) {
        const MomentOperator m = eref_moment(s, 2, k);
        expect_valid(m);
        expect_valid(haar_moment(2, k));
        expect_valid(ghse_moment(3, 2, k));
        for (int rep = 0; rep < 10; ++rep) {
            const OperatorMatrix v = tensor_power(haar_unitary(2, rng), k);
            EXPECT_LT(test::max_abs(v * m.matrix - m.matrix * v), 1e-10);
        }
    }
}

TEST(DeltaHaar, Examples) {
    for (int k = 1; k <= 4; ++k) EXPECT_LT(delta_haar(Spectrum::pure(), 2, k), 1e-12);
    Rng rng(2);
    const Spectrum s = Spectrum::of(ginibre_density(4, 4, rng));
    EXPECT_LT(delta_haar(s, 2, 1), 1e-14);
    EXPECT_NEAR(delta_haar(Spectrum::flat(4), 2, 2), 1.0 / 3.0, 1e-12);
}

TEST(DeltaHaar, ClosedFormDimensionTwo) {
    for (const double p : {0.25, 0.5, 0.75, 1.0}) {
        const double oracle = delta2_closed_form(p);
        EXPECT_NEAR(oracle, (1.0 - p) / (2.0 + p), 1e-15);
        const double a = 0.5 * (1.0 + std::sqrt(std::max(0.0, 2.0 * p - 1.0)));
        const Spectrum s = p >= 0.5 ? Spectrum::from_eigenvalues({a, 1.0 - a}) : Spectrum::flat(4);
        EXPECT_NEAR(delta_haar(s, 2, 2), oracle, 1e-12);
    }
}

TEST(DeltaHaar, MonotoneAlongInterpolation) {
    for (int k = 2; k <= 4; ++k) {
        double prev_s2 = -1.0, prev = -1.0;
        for (int i = 0; i <= 20; ++i) {
            const Spectrum s = interpolated_spectrum(i / 20.0, 16);
            const double s2 = renyi2(s);
            const double d = delta_haar(s, 2, k);
            EXPECT_GT(s2, prev_s2);
            EXPECT_GE(d, prev - 1e-12);
            prev_s2 = s2;
            prev = d;
        }
    }
}

TEST(Renyi2, Examples) {
    EXPECT_EQ(renyi2(Spectrum::pure(2)), 0.0);
    EXPECT_FALSE(std::signbit(renyi2(Spectrum::pure(2))));
    EXPECT_NEAR(renyi2(Spectrum::flat(8)), std::log(8.0), 1e-14);
    EXPECT_NEAR(renyi2(Spectrum::from_eigenvalues({0.5, 0.5})), std::log(2.0), 1e-15);
}

TEST(InterpolatedSpectrum, Endpoints) {
    EXPECT_TRUE(interpolated_spectrum(0.0, 8).is_pure());
    EXPECT_NEAR(interpolated_spectrum(1.0, 8).purity(), 1.0 / 8.0, 1e-15);
    EXPECT_THROW(interpolated_spectrum(1.5, 8), std::invalid_argument);
}

TEST(GhseMc, RankOneIsHaar) {
    const MomentEstimate e = ghse_moment_mc(1, 2, 2, 20000, 77);
    EXPECT_LT(max_diff(e.mean, haar_moment(2, 2).matrix), 5.0 / std::sqrt(20000.0));
}

TEST(GhseMc, RankTwoWithinThreeSigma) {
    const MomentEstimate e = ghse_moment_mc(2, 2, 2, 100000, 2024);
    EXPECT_NEAR(e.mean.trace().real(), 1.0, 1e-12);
    EXPECT_LT(test::max_sigma(e.mean, (2.0 * identity(4) + swap_operator(2)) / 10.0, e.stderr_), 3.0);
}

TEST(GhseMc, FirstMoment) {
    const MomentEstimate e = ghse_moment_mc(3, 4, 1, 20000, 5);
    EXPECT_LT(test::max_sigma(e.mean, identity(4) / 4.0, e.stderr_), 4.0);
}

TEST(GhseMc, ThreadCountIndependent) {
    const MomentEstimate a = ghse_moment_mc(2, 2, 2, 1000, 9, 1);
    const MomentEstimate b = ghse_moment_mc(2, 2, 2, 1000, 9, 4);
    EXPECT_EQ(max_diff(a.mean, b.mean), 0.0);
    EXPECT_EQ((a.stderr_ - b.stderr_).cwiseAbs().maxCoeff(), 0.0);
}

TEST(ScroogeRhoXa, Structure) {
    Rng rng(3);
    const DensityMatrix rho0 = ginibre_density(2, 2, rng);
    const DensityMatrix r = scrooge_rho_xa(rho0, 2);
    const std::vector<int> x{0};
    EXPECT_LT(max_diff(partial_trace(r, x).matrix(), rho0.matrix().transpose()), 1e-15);
}

TEST(ScroogeMc, MaximallyMixedFirstMoment) {
    const DensityMatrix rho = scrooge_rho_xa(DensityMatrix::maximally_mixed(2), 2);
    const std::vector<int> x{0};
    const MomentEstimate e = scrooge_moment_mc(rho, x, 1, 20000, 1);
    EXPECT_LT(test::max_sigma(e.mean, identity(2) / 2.0, e.stderr_), 4.0);
}

TEST(ScroogeMc, PureLimit) {
    const DensityMatrix rho = scrooge_rho_xa(DensityMatrix::pure(StateVector::basis(1, 0)), 2);
    const std::vector<int> x{0};
    const MomentEstimate e = scrooge_moment_mc(rho, x, 2, 100000, 2);
    EXPECT_LT(test::max_sigma(e.mean, (identity(4) + swap_operator(2)) / 6.0, e.stderr_), 3.0);
}

TEST(ScroogeMc, FlatSpectrumMatchesPermutationSum) {
    for (const int k : {2, 3}) {
        const DensityMatrix rho = scrooge_rho_xa(DensityMatrix::maximally_mixed(2), 2);
        const std::vector<int> x{0};
        const MomentEstimate e = scrooge_moment_mc(rho, x, k, 100000, 3 + static_cast<std::uint64_t>(k));
        EXPECT_LT(test::max_sigma(e.mean, eref_moment(Spectrum::flat(2), 2, k).matrix, e.stderr_), 3.0);
    }
}

TEST(ScroogeMc, TwoLevelSpectrumMatchesReference) {
    const DensityMatrix rho0 = DensityMatrix::from_matrix(
        (OperatorMatrix(2, 2) << 0.75, 0.0, 0.0, 0.25).finished());
    const DensityMatrix rho = scrooge_rho_xa(rho0, 2);
    const std::vector<int> x{0};
    const MomentEstimate e = scrooge_moment_mc(rho, x, 2, 100000, 9);
    const OperatorMatrix ref = eref_moment(Spectrum::from_eigenvalues({0.75, 0.25}), 2, 2).matrix;
    EXPECT_LT(test::max_sigma(e.mean, ref, e.stderr_), 3.0);
}

TEST(ScroogeMc, TwoLevelSpectrumMatchesScrambledEnsemble) {
    // Same spectrum through the Haar-scrambled projected ensemble on 2^10 levels; the fixed
    // 2e-3 term covers that ensemble's finite-dimension bias.
    const DensityMatrix rho0 = DensityMatrix::from_matrix(
        (OperatorMatrix(2, 2) << 0.75, 0.0, 0.0, 0.25).finished());
    const std::vector<int> x{0};
    const MomentEstimate e = scrooge_moment_mc(scrooge_rho_xa(rho0, 2), x, 2, 100000, 10);
    const std::vector<int> ks{2};
    const auto lit = mc_reference_pe(Spectrum::from_eigenvalues({0.75, 0.25}), 1, 9, ks, 200, 11);
    const MomentEstimate& m = lit.moments[0];
    for (Eigen::Index j = 0; j < 4; ++j) {
        for (Eigen::Index i = 0; i < 4; ++i) {
            const double band = 3.0 * std::hypot(e.stderr_(i, j), m.stderr_(i, j)) + 2e-3;
            EXPECT_LE(std::abs(e.mean(i, j) - m.mean(i, j)), band) << i << "," << j;
        }
    }
}

TEST(ScroogeMc, SampleTraceIdentity) {
    // Each term has trace D_XA <psi|rho|psi>, whose Haar mean is Tr rho = 1.
    Rng rng(4);
    const DensityMatrix rho = scrooge_rho_xa(ginibre_density(4, 4, rng), 2);
    const std::vector<int> x{0, 1};
    const MomentEstimate e = scrooge_moment_mc(rho, x, 1, 50000, 8);
    const double trace_se = e.stderr_.diagonal().sum();
    EXPECT_LT(std::abs(e.mean.trace().real() - 1.0), 4.0 * trace_se);
}

TEST(ScroogeMc, RejectsNonPsd) {
    OperatorMatrix m = OperatorMatrix::Zero(2, 2);
    m(0, 0) = 1.01;
    m(1, 1) = -0.01;
    const std::vector<int> none;
    EXPECT_THROW(scrooge_moment_mc(DensityMatrix::from_trusted(m), none, 1, 10, 1), std::invalid_argument);
}

}  // namespace
}  // namespace deepmix
