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
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "deepmix/errors.hpp"
#include "deepmix/random.hpp"

namespace deepmix {

using Complex = std::complex<double>;
using Amplitudes = Eigen::VectorXcd;
/// Dense complex square matrix: gates, permutation operators, moments.
using OperatorMatrix = Eigen::MatrixXcd;

/// Default tolerances for the validated value types.
inline constexpr double kStateTolerance = 1e-10;
inline constexpr double kEigenTolerance = 1e-8;

/// A register of n qubits labelled 0..n-1. Site 0 is the leftmost chain site
/// and the most significant bit of a basis index.
class QubitRegister {
public:
    QubitRegister() = default;
    explicit QubitRegister(int n_qubits);

    int n_qubits() const noexcept { return n_; }
    std::uint64_t dimension() const noexcept { return std::uint64_t{1} << n_; }
    bool contains(int site) const noexcept { return site >= 0 && site < n_; }
    /// Bit position of `site` inside a basis index.
    int bit(int site) const noexcept { return n_ - 1 - site; }

    bool operator==(const QubitRegister&) const = default;

private:
    int n_ = 0;
};

/// Normalized pure state on a qubit register.
class StateVector {
public:
    /// Validates length and unit norm (within `tolerance`).
    StateVector(QubitRegister reg, Amplitudes amplitudes, double tolerance = kStateTolerance);

    static StateVector basis(int n_qubits, std::uint64_t index);
    /// Tensor product of normalized factors, leftmost factor most significant.
    static StateVector product(std::span<const StateVector> factors);

    const QubitRegister& reg() const noexcept { return reg_; }
    int n_qubits() const noexcept { return reg_.n_qubits(); }
    std::uint64_t dimension() const noexcept { return reg_.dimension(); }
    const Amplitudes& amplitudes() const noexcept { return amps_; }
    /// Mutable access for in-place kernels. Callers keep the norm at one.
    Amplitudes& amplitudes() noexcept { return amps_; }
    Complex operator[](std::uint64_t i) const { return amps_[static_cast<Eigen::Index>(i)]; }

private:
    QubitRegister reg_;
    Amplitudes amps_;
};

/// Sub-normalized state, e.g. the post-measurement component (1 ⊗ <z|)|psi>.
/// Carries its squared norm so zero-probability branches are detected
/// without dividing by a vanishing number.
struct UnnormalizedStateVector {
    QubitRegister reg;
    Amplitudes amplitudes;
    double norm2 = 0.0;

    /// Throws std::domain_error when norm2 is zero.
    StateVector normalized() const;
};

/// Hermitian, positive semidefinite, unit-trace matrix.
class DensityMatrix {
public:
    /// Full validation: Hermitian, trace one and eigenvalues >= -tolerance.
    static DensityMatrix from_matrix(OperatorMatrix m, double tolerance = kStateTolerance);
    /// No validation. For matrices that are density matrices by construction
    /// (partial traces of normalized states, Gram matrices over their trace).
    static DensityMatrix from_trusted(OperatorMatrix m);
    static DensityMatrix pure(const StateVector& psi);
    static DensityMatrix maximally_mixed(std::size_t dimension);

    const OperatorMatrix& matrix() const noexcept { return m_; }
    std::size_t dimension() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    double purity() const;

private:
    explicit DensityMatrix(OperatorMatrix m) : m_(std::move(m)) {}
    OperatorMatrix m_;
};

/// Eigenvalues of a density matrix, descending. Everything the reference
/// ensembles need from an initial state.
class Spectrum {
public:
    /// Sorts descending; each value must lie in [-1e-12, 1] and the sum must be
    /// one within `tolerance`.
    static Spectrum from_eigenvalues(std::vector<double> values, double tolerance = kStateTolerance);
    static Spectrum of(const DensityMatrix& rho);
    /// [1, 0, ..., 0] on `dimension` levels.
    static Spectrum pure(std::size_t dimension = 1);
    /// `rank` equal eigenvalues 1/rank, padded with zeros to `dimension`.
    static Spectrum flat(std::size_t rank, std::size_t dimension = 0);

    const std::vector<double>& eigenvalues() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    /// Tr rho^n.
    double power_sum(int n) const;
    double purity() const { return power_sum(2); }
    bool is_pure(double tolerance = 1e-10) const;

private:
    explicit Spectrum(std::vector<double> v) : values_(std::move(v)) {}
    std::vector<double> values_;
};

// --- operators -------------------------------------------------------------

/// Kronecker product, `a` on the slow (left) index. Throws BudgetError when
/// the result dimension exceeds limits.max_operator_dim.
OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b, const Limits& limits = {});
/// a^{⊗k}; k = 0 gives the 1x1 identity.
OperatorMatrix tensor_power(const OperatorMatrix& a, int k, const Limits& limits = {});

OperatorMatrix pauli_x();
OperatorMatrix pauli_y();
OperatorMatrix pauli_z();
OperatorMatrix hadamard();
/// exp(-i angle Y) = [[cos, -sin], [sin, cos]].
OperatorMatrix y_rotation(double angle);

/// Largest |m - m^†| entry.
double hermiticity_error(const OperatorMatrix& m);

/// Real eigenvalues of a Hermitian matrix, descending. The input is
/// symmetrized first; throws std::invalid_argument when it is not Hermitian
/// within `tolerance`.
std::vector<double> hermitian_eigenvalues(const OperatorMatrix& h, double tolerance = kEigenTolerance);

/// Schatten-1 norm of a Hermitian matrix (sum of |eigenvalues|, no 1/2).
double trace_norm(const OperatorMatrix& a);

/// Square root of a PSD matrix via eigendecomposition. Eigenvalues in
/// [-clip_tolerance, 0) are clipped to zero; more negative ones throw.
OperatorMatrix psd_sqrt(const OperatorMatrix& m, double clip_tolerance = 1e-10);

// --- state kernels -----------------------------------------------------------

/// Applies a 2^m x 2^m gate to the listed target qubits; targets[0] is the
/// most significant qubit of the gate's own index.
void apply_gate(StateVector& state, const OperatorMatrix& gate, std::span<const int> targets);

/// amplitude[b] *= exp(-i phase(b)) for every basis index b.
template <typename PhaseFn>
void apply_diagonal_phases(StateVector& state, PhaseFn&& phase) {
    Amplitudes& amps = state.amplitudes();
    for (Eigen::Index b = 0; b < amps.size(); ++b) {
        amps[b] *= std::polar(1.0, -static_cast<double>(phase(static_cast<std::uint64_t>(b))));
    }
}

/// Reduced density matrix on the `keep` sites (output in ascending site
/// order). An empty keep set yields the 1x1 matrix [1].
DensityMatrix partial_trace(const StateVector& state, std::span<const int> keep, const Limits& limits = {});
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep, const Limits& limits = {});

/// (1_rest ⊗ <outcome|_measured) |psi>; outcome[i] ∈ {0,1} is the result on
/// site measured[i]. Remaining sites keep their relative order.
UnnormalizedStateVector conditional_component(const StateVector& state, std::span<const int> measured,
                                              std::span<const int> outcome);

// --- sampling -----------------------------------------------------------------

/// Normalized complex-Gaussian vector of arbitrary dimension (Haar state).
Amplitudes haar_vector(std::size_t dimension, Rng& rng);
/// Haar-random state; `dimension` must be a power of two.
StateVector haar_state(std::size_t dimension, Rng& rng);
/// Haar unitary: Ginibre matrix, Householder QR, columns rephased by the
/// diagonal of R.
OperatorMatrix haar_unitary(std::size_t dimension, Rng& rng);
/// First `columns` columns of a Haar unitary (same construction on a
/// dimension x columns Ginibre matrix).
OperatorMatrix haar_isometry(std::size_t dimension, std::size_t columns, Rng& rng);
/// rho = G G^† / Tr(G G^†), G a dimension x rank complex Gaussian matrix.
DensityMatrix ginibre_density(std::size_t dimension, std::size_t rank, Rng& rng);

/// |phi> = (1_X ⊗ sqrt(rho)) sum_i |i>_X |i>, with X as the leading factor.
/// Tr_X |phi><phi| = rho and Tr_sys |phi><phi| = rho^T.
StateVector purify(const DensityMatrix& rho);

// --- index helpers -------------------------------------------------------------

/// log2 of a power of two; throws std::invalid_argument otherwise.
int qubit_count(std::uint64_t dimension);

/// Spreads the low bits of `value` onto the bit positions of `sites`
/// (sites[0] receives the most significant bit of value).
std::uint64_t deposit_bits(std::uint64_t value, std::span<const int> sites, const QubitRegister& reg);

/// Builds deposit_bits(v, sites, reg) for every v in [0, 2^|sites|).
std::vector<std::uint64_t> deposit_table(std::span<const int> sites, const QubitRegister& reg);

}  // namespace deepmix
