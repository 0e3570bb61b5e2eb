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

#include "deepmix/tensor_core.hpp"

#include <algorithm>
#include <iterator>
#include <cmath>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace deepmix {

namespace {

void check_sites(std::span<const int> sites, const QubitRegister& reg, const char* what) {
    std::uint64_t seen = 0;
    for (const int s : sites) {
        if (!reg.contains(s)) {
            throw std::invalid_argument(std::string(what) + ": site " + std::to_string(s) +
                                        " outside register of " + std::to_string(reg.n_qubits()) + " qubits");
        }
        const std::uint64_t mask = std::uint64_t{1} << s;
        if (seen & mask) throw std::invalid_argument(std::string(what) + ": repeated site " + std::to_string(s));
        seen |= mask;
    }
}

std::vector<int> complement(std::span<const int> sites, int n) {
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (const int s : sites) used[static_cast<std::size_t>(s)] = true;
    std::vector<int> rest;
    for (int s = 0; s < n; ++s) {
        if (!used[static_cast<std::size_t>(s)]) rest.push_back(s);
    }
    return rest;
}

void check_dim(std::uint64_t dim, const Limits& limits, const char* what) {
    if (dim > limits.max_operator_dim) {
        throw BudgetError(std::string(what) + ": operator dimension " + std::to_string(dim) +
                          " exceeds cap " + std::to_string(limits.max_operator_dim));
    }
}

OperatorMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
    OperatorMatrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
        for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = complex_gaussian(rng);
    }
    return g;
}

// Q from a Householder QR with the phases of diag(R) pushed into Q's columns,
// which is what makes the result Haar distributed.
OperatorMatrix phase_fixed_q(const OperatorMatrix& g) {
    const Eigen::HouseholderQR<OperatorMatrix> qr(g);
    OperatorMatrix q = qr.householderQ() * OperatorMatrix::Identity(g.rows(), g.cols());
    const OperatorMatrix& r = qr.matrixQR();
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
        const Complex d = r(j, j);
        const double a = std::abs(d);
        if (a > 0.0) q.col(j) *= d / a;
    }
    return q;
}

}  // namespace

// --- value types -------------------------------------------------------------

QubitRegister::QubitRegister(int n_qubits) : n_(n_qubits) {
    if (n_qubits < 0 || n_qubits > 62) {
        throw std::invalid_argument("QubitRegister: qubit count " + std::to_string(n_qubits) + " out of range");
    }
}

StateVector::StateVector(QubitRegister reg, Amplitudes amplitudes, double tolerance)
    : reg_(reg), amps_(std::move(amplitudes)) {
    if (static_cast<std::uint64_t>(amps_.size()) != reg_.dimension()) {
        throw std::invalid_argument("StateVector: " + std::to_string(amps_.size()) +
                                    " amplitudes for a register of dimension " + std::to_string(reg_.dimension()));
    }
    const double norm = amps_.norm();
    if (!(std::abs(norm - 1.0) <= tolerance)) {
        throw std::invalid_argument("StateVector: norm " + std::to_string(norm) + " is not 1");
    }
}

StateVector StateVector::basis(int n_qubits, std::uint64_t index) {
    QubitRegister reg(n_qubits);
    if (index >= reg.dimension()) throw std::invalid_argument("StateVector::basis: index out of range");
    Amplitudes a = Amplitudes::Zero(static_cast<Eigen::Index>(reg.dimension()));
    a[static_cast<Eigen::Index>(index)] = 1.0;
    return {reg, std::move(a)};
}

StateVector StateVector::product(std::span<const StateVector> factors) {
    Amplitudes acc = Amplitudes::Ones(1);
    int n = 0;
    for (const StateVector& f : factors) {
        acc = Eigen::kroneckerProduct(acc, f.amplitudes()).eval();
        n += f.n_qubits();
    }
    return {QubitRegister(n), std::move(acc)};
}

StateVector UnnormalizedStateVector::normalized() const {
    if (!(norm2 > 0.0)) throw std::domain_error("normalized: zero-probability component");
    return {reg, amplitudes / std::sqrt(norm2), 1e-8};
}

DensityMatrix DensityMatrix::from_matrix(OperatorMatrix m, double tolerance) {
    if (m.rows() != m.cols() || m.rows() == 0) throw std::invalid_argument("DensityMatrix: matrix must be square");
    if (!m.allFinite()) throw std::invalid_argument("DensityMatrix: non-finite entries");
    if (hermiticity_error(m) > tolerance) throw std::invalid_argument("DensityMatrix: not Hermitian");
    const Complex tr = m.trace();
    if (std::abs(tr - 1.0) > tolerance) {
        throw std::invalid_argument("DensityMatrix: trace " + std::to_string(tr.real()) + " is not 1");
    }
    OperatorMatrix h = 0.5 * (m + m.adjoint());
    const std::vector<double> ev = hermitian_eigenvalues(h);
    if (ev.back() < -tolerance) {
        throw std::invalid_argument("DensityMatrix: negative eigenvalue " + std::to_string(ev.back()));
    }
    return DensityMatrix(std::move(h));
}

DensityMatrix DensityMatrix::from_trusted(OperatorMatrix m) { return DensityMatrix(std::move(m)); }

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
    return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dimension) {
    const auto d = static_cast<Eigen::Index>(dimension);
    return DensityMatrix(OperatorMatrix::Identity(d, d) / static_cast<double>(dimension));
}

double DensityMatrix::purity() const { return m_.squaredNorm(); }

Spectrum Spectrum::from_eigenvalues(std::vector<double> values, double tolerance) {
    if (values.empty()) throw std::invalid_argument("Spectrum: empty");
    double sum = 0.0;
    for (const double v : values) {
        if (!(v >= -1e-12 && v <= 1.0 + 1e-12)) {
            throw std::invalid_argument("Spectrum: eigenvalue " + std::to_string(v) + " outside [0, 1]");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > tolerance) throw std::invalid_argument("Spectrum: eigenvalues sum to " + std::to_string(sum));
    std::sort(values.begin(), values.end(), std::greater<>());
    return Spectrum(std::move(values));
}

Spectrum Spectrum::of(const DensityMatrix& rho) {
    std::vector<double> ev = hermitian_eigenvalues(rho.matrix());
    for (double& v : ev) {
        if (v < 0.0 && v > -kStateTolerance) v = 0.0;
    }
    return from_eigenvalues(std::move(ev));
}

Spectrum Spectrum::pure(std::size_t dimension) {
    if (dimension == 0) throw std::invalid_argument("Spectrum::pure: zero dimension");
    std::vector<double> v(dimension, 0.0);
    v[0] = 1.0;
    return Spectrum(std::move(v));
}

Spectrum Spectrum::flat(std::size_t rank, std::size_t dimension) {
    if (rank == 0) throw std::invalid_argument("Spectrum::flat: zero rank");
    if (dimension == 0) dimension = rank;
    if (rank > dimension) throw std::invalid_argument("Spectrum::flat: rank exceeds dimension");
    std::vector<double> v(dimension, 0.0);
    std::fill_n(v.begin(), rank, 1.0 / static_cast<double>(rank));
    return Spectrum(std::move(v));
}

double Spectrum::power_sum(int n) const {
    double s = 0.0;
    for (const double v : values_) {
        if (v > 0.0) s += std::pow(v, n);
    }
    return s;
}

bool Spectrum::is_pure(double tolerance) const { return std::abs(values_.front() - 1.0) <= tolerance; }

// --- operators -------------------------------------------------------------

OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b, const Limits& limits) {
    check_dim(static_cast<std::uint64_t>(a.rows()) * static_cast<std::uint64_t>(b.rows()), limits, "kron");
    check_dim(static_cast<std::uint64_t>(a.cols()) * static_cast<std::uint64_t>(b.cols()), limits, "kron");
    return Eigen::kroneckerProduct(a, b).eval();
}

OperatorMatrix tensor_power(const OperatorMatrix& a, int k, const Limits& limits) {
    if (k < 0) throw std::invalid_argument("tensor_power: negative power");
    OperatorMatrix acc = OperatorMatrix::Identity(1, 1);
    for (int i = 0; i < k; ++i) acc = kron(acc, a, limits);
    return acc;
}

OperatorMatrix pauli_x() {
    OperatorMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

OperatorMatrix pauli_y() {
    OperatorMatrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

OperatorMatrix pauli_z() {
    OperatorMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

OperatorMatrix hadamard() {
    OperatorMatrix m(2, 2);
    m << 1, 1, 1, -1;
    return m / std::sqrt(2.0);
}

OperatorMatrix y_rotation(double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    OperatorMatrix m(2, 2);
    m << c, -s, s, c;
    return m;
}

double hermiticity_error(const OperatorMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("hermiticity_error: matrix not square");
    if (m.size() == 0) return 0.0;
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

std::vector<double> hermitian_eigenvalues(const OperatorMatrix& h, double tolerance) {
    if (hermiticity_error(h) > tolerance) {
        throw std::invalid_argument("hermitian_eigenvalues: matrix is not Hermitian within tolerance");
    }
    const OperatorMatrix sym = 0.5 * (h + h.adjoint());
    const Eigen::SelfAdjointEigenSolver<OperatorMatrix> solver(sym, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian_eigenvalues: solver failed");
    const Eigen::VectorXd& ev = solver.eigenvalues();
    return {std::make_reverse_iterator(ev.data() + ev.size()), std::make_reverse_iterator(ev.data())};
}

double trace_norm(const OperatorMatrix& a) {
    double s = 0.0;
    for (const double v : hermitian_eigenvalues(a)) s += std::abs(v);
    return s;
}

OperatorMatrix psd_sqrt(const OperatorMatrix& m, double clip_tolerance) {
    if (hermiticity_error(m) > kEigenTolerance) throw std::invalid_argument("psd_sqrt: matrix is not Hermitian");
    const Eigen::SelfAdjointEigenSolver<OperatorMatrix> solver(0.5 * (m + m.adjoint()));
    if (solver.info() != Eigen::Success) throw std::runtime_error("psd_sqrt: solver failed");
    Eigen::VectorXd ev = solver.eigenvalues();
    if (ev.size() > 0 && ev.minCoeff() < -clip_tolerance) {
        throw std::invalid_argument("psd_sqrt: eigenvalue " + std::to_string(ev.minCoeff()) + " is negative");
    }
    ev = ev.cwiseMax(0.0).cwiseSqrt();
    const OperatorMatrix& v = solver.eigenvectors();
    return v * ev.asDiagonal() * v.adjoint();
}

// --- state kernels -----------------------------------------------------------

void apply_gate(StateVector& state, const OperatorMatrix& gate, std::span<const int> targets) {
    const QubitRegister& reg = state.reg();
    check_sites(targets, reg, "apply_gate");
    const int m = static_cast<int>(targets.size());
    const auto gdim = static_cast<Eigen::Index>(std::uint64_t{1} << m);
    if (gate.rows() != gdim || gate.cols() != gdim) {
        throw std::invalid_argument("apply_gate: gate dimension " + std::to_string(gate.rows()) + " does not match " +
                                    std::to_string(m) + " targets");
    }
    Amplitudes& amps = state.amplitudes();
    const std::uint64_t dim = reg.dimension();

    if (m == 1) {
        const std::uint64_t stride = std::uint64_t{1} << reg.bit(targets[0]);
        const Complex g00 = gate(0, 0), g01 = gate(0, 1), g10 = gate(1, 0), g11 = gate(1, 1);
        for (std::uint64_t hi = 0; hi < dim; hi += 2 * stride) {
            for (std::uint64_t lo = 0; lo < stride; ++lo) {
                const auto i0 = static_cast<Eigen::Index>(hi + lo);
                const auto i1 = static_cast<Eigen::Index>(hi + lo + stride);
                const Complex a0 = amps[i0];
                const Complex a1 = amps[i1];
                amps[i0] = g00 * a0 + g01 * a1;
                amps[i1] = g10 * a0 + g11 * a1;
            }
        }
        return;
    }

    const std::vector<int> rest = complement(targets, reg.n_qubits());
    const std::vector<std::uint64_t> target_offsets = deposit_table(targets, reg);
    const std::vector<std::uint64_t> rest_offsets = deposit_table(rest, reg);
    Amplitudes local(gdim);
    for (const std::uint64_t base : rest_offsets) {
        for (Eigen::Index t = 0; t < gdim; ++t) {
            local[t] = amps[static_cast<Eigen::Index>(base | target_offsets[static_cast<std::size_t>(t)])];
        }
        const Amplitudes out = gate * local;
        for (Eigen::Index t = 0; t < gdim; ++t) {
            amps[static_cast<Eigen::Index>(base | target_offsets[static_cast<std::size_t>(t)])] = out[t];
        }
    }
}

DensityMatrix partial_trace(const StateVector& state, std::span<const int> keep, const Limits& limits) {
    const QubitRegister& reg = state.reg();
    check_sites(keep, reg, "partial_trace");
    std::vector<int> kept(keep.begin(), keep.end());
    std::sort(kept.begin(), kept.end());
    check_dim(std::uint64_t{1} << kept.size(), limits, "partial_trace");
    const std::vector<int> rest = complement(kept, reg.n_qubits());
    const std::vector<std::uint64_t> kd = deposit_table(kept, reg);
    const std::vector<std::uint64_t> rd = deposit_table(rest, reg);
    OperatorMatrix m(static_cast<Eigen::Index>(kd.size()), static_cast<Eigen::Index>(rd.size()));
    for (std::size_t r = 0; r < rd.size(); ++r) {
        for (std::size_t k = 0; k < kd.size(); ++k) {
            m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(r)) = state[kd[k] | rd[r]];
        }
    }
    return DensityMatrix::from_trusted(m * m.adjoint());
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep, const Limits& limits) {
    const QubitRegister reg(qubit_count(rho.dimension()));
    check_sites(keep, reg, "partial_trace");
    std::vector<int> kept(keep.begin(), keep.end());
    std::sort(kept.begin(), kept.end());
    check_dim(std::uint64_t{1} << kept.size(), limits, "partial_trace");
    const std::vector<int> rest = complement(kept, reg.n_qubits());
    const std::vector<std::uint64_t> kd = deposit_table(kept, reg);
    const std::vector<std::uint64_t> rd = deposit_table(rest, reg);
    const auto n = static_cast<Eigen::Index>(kd.size());
    OperatorMatrix out = OperatorMatrix::Zero(n, n);
    const OperatorMatrix& m = rho.matrix();
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            Complex s = 0.0;
            for (const std::uint64_t r : rd) {
                s += m(static_cast<Eigen::Index>(kd[static_cast<std::size_t>(i)] | r),
                       static_cast<Eigen::Index>(kd[static_cast<std::size_t>(j)] | r));
            }
            out(i, j) = s;
        }
    }
    return DensityMatrix::from_trusted(std::move(out));
}

UnnormalizedStateVector conditional_component(const StateVector& state, std::span<const int> measured,
                                              std::span<const int> outcome) {
    const QubitRegister& reg = state.reg();
    check_sites(measured, reg, "conditional_component");
    if (outcome.size() != measured.size()) {
        throw std::invalid_argument("conditional_component: outcome has " + std::to_string(outcome.size()) +
                                    " bits for " + std::to_string(measured.size()) + " measured sites");
    }
    std::uint64_t base = 0;
    for (std::size_t i = 0; i < measured.size(); ++i) {
        if (outcome[i] != 0 && outcome[i] != 1) throw std::invalid_argument("conditional_component: outcome bit not 0/1");
        if (outcome[i]) base |= std::uint64_t{1} << reg.bit(measured[i]);
    }
    const std::vector<int> rest = complement(measured, reg.n_qubits());
    const std::vector<std::uint64_t> rd = deposit_table(rest, reg);
    UnnormalizedStateVector out{QubitRegister(static_cast<int>(rest.size())),
                                Amplitudes(static_cast<Eigen::Index>(rd.size())), 0.0};
    for (std::size_t j = 0; j < rd.size(); ++j) out.amplitudes[static_cast<Eigen::Index>(j)] = state[rd[j] | base];
    out.norm2 = out.amplitudes.squaredNorm();
    return out;
}

// --- sampling -----------------------------------------------------------------

Amplitudes haar_vector(std::size_t dimension, Rng& rng) {
    if (dimension == 0) throw std::invalid_argument("haar_vector: zero dimension");
    Amplitudes v(static_cast<Eigen::Index>(dimension));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = complex_gaussian(rng);
    v.normalize();
    return v;
}

StateVector haar_state(std::size_t dimension, Rng& rng) {
    const int n = qubit_count(dimension);
    return {QubitRegister(n), haar_vector(dimension, rng)};
}

OperatorMatrix haar_unitary(std::size_t dimension, Rng& rng) {
    if (dimension == 0) throw std::invalid_argument("haar_unitary: zero dimension");
    return phase_fixed_q(ginibre(dimension, dimension, rng));
}

OperatorMatrix haar_isometry(std::size_t dimension, std::size_t columns, Rng& rng) {
    if (dimension == 0 || columns == 0 || columns > dimension) {
        throw std::invalid_argument("haar_isometry: need 0 < columns <= dimension");
    }
    return phase_fixed_q(ginibre(dimension, columns, rng));
}

DensityMatrix ginibre_density(std::size_t dimension, std::size_t rank, Rng& rng) {
    if (rank == 0) throw std::invalid_argument("ginibre_density: rank must be positive");
    if (rank > dimension) throw std::invalid_argument("ginibre_density: rank exceeds dimension");
    const OperatorMatrix g = ginibre(dimension, rank, rng);
    OperatorMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix::from_trusted(0.5 * (rho + rho.adjoint()));
}

StateVector purify(const DensityMatrix& rho) {
    const std::size_t d = rho.dimension();
    const int n = qubit_count(d);
    const OperatorMatrix s = psd_sqrt(rho.matrix(), kEigenTolerance);
    Amplitudes amps(static_cast<Eigen::Index>(d * d));
    // |phi> = sum_i |i>_X ⊗ sqrt(rho)|i>: amplitude (i, j) = sqrt(rho)_{j i}.
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            amps[static_cast<Eigen::Index>(i * d + j)] = s(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
        }
    }
    amps /= amps.norm();
    return {QubitRegister(2 * n), std::move(amps)};
}

// --- index helpers -------------------------------------------------------------

int qubit_count(std::uint64_t dimension) {
    if (dimension == 0 || (dimension & (dimension - 1)) != 0) {
        throw std::invalid_argument("dimension " + std::to_string(dimension) + " is not a power of two");
    }
    int n = 0;
    while ((std::uint64_t{1} << n) < dimension) ++n;
    return n;
}

std::uint64_t deposit_bits(std::uint64_t value, std::span<const int> sites, const QubitRegister& reg) {
    std::uint64_t out = 0;
    const std::size_t m = sites.size();
    for (std::size_t i = 0; i < m; ++i) {
        if ((value >> (m - 1 - i)) & 1U) out |= std::uint64_t{1} << reg.bit(sites[i]);
    }
    return out;
}

std::vector<std::uint64_t> deposit_table(std::span<const int> sites, const QubitRegister& reg) {
    const std::size_t count = std::size_t{1} << sites.size();
    std::vector<std::uint64_t> table(count);
    for (std::size_t v = 0; v < count; ++v) table[v] = deposit_bits(v, sites, reg);
    return table;
}

}  // namespace deepmix
