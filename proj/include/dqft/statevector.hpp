// Copyright 2026 The dqft Authors
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

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dqft/rng.hpp"

namespace dqft {

using Amplitude = std::complex<double>;

enum class GateKind { H, X, Z, P, CP, CNOT };

std::string to_string(GateKind kind);

/// A gate from the fixed six-gate set, generic over how operands are named
/// (global statevector indices, or node-qualified addresses in the fabric).
///
/// For CP and CNOT, operands[0] is the control and operands[1] the target.
/// CP is symmetric in its operands; CNOT is not.
template <class Operand>
struct BasicGate {
  GateKind kind = GateKind::H;
  std::array<Operand, 2> operands{};
  double angle = 0.0;  // radians, P and CP only

  std::size_t arity() const {
    return (kind == GateKind::CP || kind == GateKind::CNOT) ? 2 : 1;
  }
  std::span<const Operand> qubits() const { return {operands.data(), arity()}; }

  static BasicGate h(Operand q) { return {GateKind::H, {q, q}, 0.0}; }
  static BasicGate x(Operand q) { return {GateKind::X, {q, q}, 0.0}; }
  static BasicGate z(Operand q) { return {GateKind::Z, {q, q}, 0.0}; }
  static BasicGate p(Operand q, double phi) { return {GateKind::P, {q, q}, phi}; }
  static BasicGate cp(Operand control, Operand target, double phi) {
    return {GateKind::CP, {control, target}, phi};
  }
  static BasicGate cnot(Operand control, Operand target) {
    return {GateKind::CNOT, {control, target}, 0.0};
  }

  bool operator==(const BasicGate&) const = default;
};

using Gate = BasicGate<std::size_t>;

std::string describe(const Gate& gate);

/// Dense statevector over `num_qubits` qubits.
///
/// Qubit 0 is the MOST significant bit of a basis-state index: on three
/// qubits, |q0 q1 q2> = |1 0 0> is amplitude index 4. Every module in this
/// project uses that convention.
class StateVector {
 public:
  /// |0...0> on `num_qubits` qubits.
  explicit StateVector(std::size_t num_qubits);

  static StateVector basis(std::size_t num_qubits, std::uint64_t index);

  /// Takes ownership of `amps`; the length must be a power of two >= 2,
  /// every entry finite and the norm 1 within 1e-10.
  static StateVector from_amplitudes(std::vector<Amplitude> amps);

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t size() const { return amps_.size(); }
  std::size_t bytes() const { return amps_.size() * sizeof(Amplitude); }

  std::span<const Amplitude> amplitudes() const { return amps_; }
  const Amplitude& operator[](std::size_t i) const { return amps_[i]; }

  double norm_squared() const;

  /// Bit position of `qubit` inside a basis index.
  std::size_t bit_of(std::size_t qubit) const { return num_qubits_ - 1 - qubit; }

  /// Applies `gate` in place. Throws std::out_of_range for an operand
  /// >= num_qubits, std::invalid_argument for repeated operands or a
  /// non-finite angle.
  void apply(const Gate& gate);

  /// Probability that measuring `qubit` yields 1.
  double probability_one(std::size_t qubit) const;

  /// Projective Z measurement with collapse and renormalisation.
  int measure(std::size_t qubit, Rng& rng);

  /// Collapses onto a chosen outcome. Throws std::domain_error when that
  /// outcome has probability below 1e-12.
  void collapse(std::size_t qubit, int outcome);

  /// Measures `qubit` and flips it back to |0> if the outcome was 1.
  void reset(std::size_t qubit, Rng& rng);

  /// Keeps the leading `num_qubits() - count` qubits, asserting the trailing
  /// `count` qubits are |0...0> (probability mass elsewhere <= tol).
  StateVector drop_trailing_qubits(std::size_t count, double tol = 1e-10) const;

 private:
  StateVector(std::size_t num_qubits, std::vector<Amplitude> amps);

  void check_qubit(std::size_t qubit) const;
  std::array<double, 2> outcome_probabilities(std::size_t qubit) const;
  void collapse_known(std::size_t qubit, int outcome, double probability);

  std::size_t num_qubits_;
  std::vector<Amplitude> amps_;
};

/// Marginal distribution over `qubits`; entry `key` has qubits[0] as the
/// most significant bit of `key`.
std::vector<double> marginal_probabilities(const StateVector& state,
                                           std::span<const std::size_t> qubits);

/// Draws `shots` samples from `probs` (need not be normalised) and returns
/// per-index counts.
std::vector<std::uint64_t> sample_indices(std::span<const double> probs,
                                          std::uint64_t shots, Rng& rng);

/// Histogram of measured bitstrings over `qubits` (character i is qubits[i]).
std::map<std::string, std::uint64_t> sample_counts(const StateVector& state,
                                                   std::span<const std::size_t> qubits,
                                                   std::uint64_t shots, Rng& rng);

/// True iff some unit-modulus c has max_i |a_i - c b_i| <= tol. c is taken
/// from the largest-magnitude amplitude of b.
bool equal_up_to_global_phase(const StateVector& a, const StateVector& b, double tol);

/// Haar-ish random state: i.i.d. complex Gaussian amplitudes, normalised.
StateVector random_state(std::size_t num_qubits, Rng& rng);

/// Zero-padded binary rendering of `value` over `width` bits, MSB first.
std::string to_bitstring(std::uint64_t value, std::size_t width);

}  // namespace dqft
