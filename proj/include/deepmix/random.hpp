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

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

namespace deepmix {

/// The one engine type used everywhere. Streams are always constructed from
/// an explicit seed; nothing in the library touches ambient randomness.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer (Steele, Lea, Flood 2014). A bijection on 64-bit words.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// 64-bit FNV-1a hash of a byte string.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Derives an independent stream seed from (master, label, index).
///
/// Mixing function:
///   s0 = splitmix64(master)
///   s1 = splitmix64(s0 ^ fnv1a64(label))
///   s2 = splitmix64(s1 ^ splitmix64(index))
///
/// For fixed (master, label) the map index -> seed is a bijection, so distinct
/// indices never collide. Distinct labels collide only through a 64-bit hash
/// collision. Pure integer arithmetic; identical on every platform.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t index) noexcept;

/// Standard complex Gaussian sample (real and imaginary parts N(0, 1)).
inline std::complex<double> complex_gaussian(Rng& rng) {
    std::normal_distribution<double> normal;
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

}  // namespace deepmix
