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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "deepmix/parallel.hpp"

namespace deepmix::detail {

struct SampleStats {
    Eigen::MatrixXcd mean;
    Eigen::MatrixXd std;
    Eigen::MatrixXd stderr_;
};

// Mean and per-entry spread of sample(i), i in [0, n). Samples are summed in
// ascending order inside fixed-size blocks and the blocks are folded in
// ascending order, so the result does not depend on `threads`.
template <typename SampleFn>
SampleStats accumulate_samples(std::size_t n, int threads, Eigen::Index rows, Eigen::Index cols, SampleFn&& sample) {
    constexpr std::size_t kWindow = 64;
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(rows, cols);
    Eigen::MatrixXd sumsq = Eigen::MatrixXd::Zero(rows, cols);
    const std::size_t blocks = block_count(n);
    std::vector<Eigen::MatrixXcd> bsum(kWindow);
    std::vector<Eigen::MatrixXd> bsq(kWindow);
    for (std::size_t start = 0; start < blocks; start += kWindow) {
        const std::size_t count = std::min(kWindow, blocks - start);
        parallel_for(count, threads, [&](std::size_t w) {
            const std::size_t lo = (start + w) * kReductionBlock;
            const std::size_t hi = std::min(n, lo + kReductionBlock);
            Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(rows, cols);
            Eigen::MatrixXd q = Eigen::MatrixXd::Zero(rows, cols);
            for (std::size_t i = lo; i < hi; ++i) {
                const Eigen::MatrixXcd x = sample(i);
                s += x;
                q += x.cwiseAbs2();
            }
            bsum[w] = std::move(s);
            bsq[w] = std::move(q);
        });
        for (std::size_t w = 0; w < count; ++w) {
            sum += bsum[w];
            sumsq += bsq[w];
        }
    }
    SampleStats out;
    const double nn = static_cast<double>(n);
    out.mean = sum / nn;
    if (n > 1) {
        const Eigen::MatrixXd var = ((sumsq / nn - out.mean.cwiseAbs2()) * (nn / (nn - 1.0))).cwiseMax(0.0);
        out.std = var.cwiseSqrt();
    } else {
        out.std = Eigen::MatrixXd::Zero(rows, cols);
    }
    out.stderr_ = out.std / std::sqrt(nn);
    return out;
}

// Σ term(i) over i in [0, n) with the same fixed, thread-independent order.
template <typename TermFn>
Eigen::MatrixXcd ordered_sum(std::size_t n, int threads, Eigen::Index rows, Eigen::Index cols, TermFn&& term) {
    constexpr std::size_t kWindow = 64;
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(rows, cols);
    const std::size_t blocks = block_count(n);
    std::vector<Eigen::MatrixXcd> partial(kWindow);
    for (std::size_t start = 0; start < blocks; start += kWindow) {
        const std::size_t count = std::min(kWindow, blocks - start);
        parallel_for(count, threads, [&](std::size_t w) {
            const std::size_t lo = (start + w) * kReductionBlock;
            const std::size_t hi = std::min(n, lo + kReductionBlock);
            Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(rows, cols);
            for (std::size_t i = lo; i < hi; ++i) s += term(i);
            partial[w] = std::move(s);
        });
        for (std::size_t w = 0; w < count; ++w) sum += partial[w];
    }
    return sum;
}

}  // namespace deepmix::detail
