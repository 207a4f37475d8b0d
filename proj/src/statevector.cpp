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

#include "dqft/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dqft {

namespace {

constexpr std::size_t kMaxQubits = 30;
constexpr double kCorruptProbability = 1e-12;

// Inserts a zero at bit position `bit`, shifting the higher bits up.
constexpr std::size_t insert_zero(std::size_t x, std::size_t bit) {
  const std::size_t low = x & ((std::size_t{1} << bit) - 1);
  return ((x >> bit) << (bit + 1)) | low;
}

// The r-th index (in increasing order) whose bits b0 and b1 are both clear.
constexpr std::size_t spread_two(std::size_t r, std::size_t b0, std::size_t b1) {
  return b0 < b1 ? insert_zero(insert_zero(r, b0), b1) : insert_zero(insert_zero(r, b1), b0);
}

}  // namespace

std::string to_string(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::Z: return "Z";
    case GateKind::P: return "P";
    case GateKind::CP: return "CP";
    case GateKind::CNOT: return "CNOT";
  }
  return "?";
}

std::string describe(const Gate& gate) {
  std::string out = to_string(gate.kind) + "(";
  for (std::size_t i = 0; i < gate.arity(); ++i) {
    if (i) out += ",";
    out += std::to_string(gate.operands[i]);
  }
  if (gate.kind == GateKind::P || gate.kind == GateKind::CP) {
    out += "; " + std::to_string(gate.angle);
  }
  return out + ")";
}

StateVector::StateVector(std::size_t num_qubits)
    : StateVector(num_qubits, {}) {
  amps_.assign(std::size_t{1} << num_qubits, Amplitude{0.0, 0.0});
  amps_[0] = 1.0;
}

StateVector::StateVector(std::size_t num_qubits, std::vector<Amplitude> amps)
    : num_qubits_(num_qubits), amps_(std::move(amps)) {
  if (num_qubits == 0 || num_qubits > kMaxQubits) {
    throw std::invalid_argument("StateVector: num_qubits must be in [1, " +
                                std::to_string(kMaxQubits) + "], got " +
                                std::to_string(num_qubits));
  }
}

StateVector StateVector::basis(std::size_t num_qubits, std::uint64_t index) {
  StateVector s(num_qubits);
  if (index >= s.size()) throw std::out_of_range("StateVector::basis: index out of range");
  s.amps_[0] = 0.0;
  s.amps_[index] = 1.0;
  return s;
}

StateVector StateVector::from_amplitudes(std::vector<Amplitude> amps) {
  if (amps.size() < 2 || !std::has_single_bit(amps.size())) {
    throw std::invalid_argument("from_amplitudes: length must be a power of two >= 2");
  }
  for (const auto& a : amps) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw std::invalid_argument("from_amplitudes: non-finite amplitude");
    }
  }
  const auto q = static_cast<std::size_t>(std::countr_zero(amps.size()));
  StateVector s(q, std::move(amps));
  if (std::abs(s.norm_squared() - 1.0) > 1e-10) {
    throw std::invalid_argument("from_amplitudes: state is not normalised");
  }
  return s;
}

double StateVector::norm_squared() const {
  double total = 0.0;
  for (const auto& a : amps_) total += std::norm(a);
  return total;
}

void StateVector::check_qubit(std::size_t qubit) const {
  if (qubit >= num_qubits_) {
    throw std::out_of_range("qubit " + std::to_string(qubit) + " out of range for " +
                            std::to_string(num_qubits_) + "-qubit state");
  }
}

void StateVector::apply(const Gate& gate) {
  for (auto q : gate.qubits()) check_qubit(q);
  if (gate.arity() == 2 && gate.operands[0] == gate.operands[1]) {
    throw std::invalid_argument("duplicate operands in " + describe(gate));
  }
  if (!std::isfinite(gate.angle)) {
    throw std::invalid_argument("non-finite angle in " + describe(gate));
  }

  const std::size_t n = amps_.size();
  const std::size_t first = std::size_t{1} << bit_of(gate.operands[0]);

  switch (gate.kind) {
    case GateKind::H: {
      const double s = std::numbers::sqrt2 / 2.0;
      for (std::size_t base = 0; base < n; base += 2 * first) {
        for (std::size_t i = base; i < base + first; ++i) {
          const Amplitude a = amps_[i];
          const Amplitude b = amps_[i + first];
          amps_[i] = s * (a + b);
          amps_[i + first] = s * (a - b);
        }
      }
      break;
    }
    case GateKind::X:
      for (std::size_t base = 0; base < n; base += 2 * first) {
        for (std::size_t i = base; i < base + first; ++i) std::swap(amps_[i], amps_[i + first]);
      }
      break;
    case GateKind::Z:
      for (std::size_t base = first; base < n; base += 2 * first) {
        for (std::size_t i = base; i < base + first; ++i) amps_[i] = -amps_[i];
      }
      break;
    case GateKind::P: {
      const Amplitude phase = std::polar(1.0, gate.angle);
      for (std::size_t base = first; base < n; base += 2 * first) {
        for (std::size_t i = base; i < base + first; ++i) amps_[i] *= phase;
      }
      break;
    }
    case GateKind::CP: {
      const Amplitude phase = std::polar(1.0, gate.angle);
      const std::size_t b0 = bit_of(gate.operands[0]);
      const std::size_t b1 = bit_of(gate.operands[1]);
      const std::size_t mask = (std::size_t{1} << b0) | (std::size_t{1} << b1);
      for (std::size_t r = 0; r < n / 4; ++r) amps_[spread_two(r, b0, b1) | mask] *= phase;
      break;
    }
    case GateKind::CNOT: {
      const std::size_t b0 = bit_of(gate.operands[0]);
      const std::size_t b1 = bit_of(gate.operands[1]);
      const std::size_t target = std::size_t{1} << b1;
      for (std::size_t r = 0; r < n / 4; ++r) {
        const std::size_t i = spread_two(r, b0, b1) | first;
        std::swap(amps_[i], amps_[i | target]);
      }
      break;
    }
  }
}

std::array<double, 2> StateVector::outcome_probabilities(std::size_t qubit) const {
  check_qubit(qubit);
  const std::size_t stride = std::size_t{1} << bit_of(qubit);
  std::array<double, 2> p{0.0, 0.0};
  for (std::size_t base = 0; base < amps_.size(); base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      p[0] += std::norm(amps_[i]);
      p[1] += std::norm(amps_[i + stride]);
    }
  }
  if (p[0] < kCorruptProbability && p[1] < kCorruptProbability) {
    throw std::runtime_error("corrupt state: both outcomes of qubit " + std::to_string(qubit) +
                             " have vanishing probability");
  }
  return p;
}

double StateVector::probability_one(std::size_t qubit) const {
  const auto p = outcome_probabilities(qubit);
  return p[1] / (p[0] + p[1]);
}

int StateVector::measure(std::size_t qubit, Rng& rng) {
  const auto p = outcome_probabilities(qubit);
  const int outcome = rng.uniform() < p[0] / (p[0] + p[1]) ? 0 : 1;
  collapse_known(qubit, outcome, p[outcome]);
  return outcome;
}

void StateVector::collapse(std::size_t qubit, int outcome) {
  if (outcome != 0 && outcome != 1) throw std::invalid_argument("collapse: outcome must be 0 or 1");
  const auto p = outcome_probabilities(qubit);
  if (p[outcome] < kCorruptProbability) {
    throw std::domain_error("collapse: outcome " + std::to_string(outcome) + " of qubit " +
                            std::to_string(qubit) + " has zero probability");
  }
  collapse_known(qubit, outcome, p[outcome]);
}

void StateVector::collapse_known(std::size_t qubit, int outcome, double probability) {
  const std::size_t stride = std::size_t{1} << bit_of(qubit);
  const std::size_t keep = outcome == 1 ? stride : 0;
  const double scale = 1.0 / std::sqrt(probability);
  const std::size_t drop = stride - keep;
  for (std::size_t base = 0; base < amps_.size(); base += 2 * stride) {
    std::fill_n(amps_.begin() + static_cast<std::ptrdiff_t>(base + drop), stride, Amplitude{0.0, 0.0});
    if (scale == 1.0) continue;
    for (std::size_t i = base + keep; i < base + keep + stride; ++i) amps_[i] *= scale;
  }
}

void StateVector::reset(std::size_t qubit, Rng& rng) {
  if (measure(qubit, rng) == 1) apply(Gate::x(qubit));
}

StateVector StateVector::drop_trailing_qubits(std::size_t count, double tol) const {
  if (count >= num_qubits_) throw std::invalid_argument("drop_trailing_qubits: nothing would remain");
  std::vector<Amplitude> kept(amps_.size() >> count);
  const std::size_t low = (std::size_t{1} << count) - 1;
  double stray = 0.0;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (i & low) {
      stray += std::norm(amps_[i]);
    } else {
      kept[i >> count] = amps_[i];
    }
  }
  if (stray > tol) {
    throw std::runtime_error("drop_trailing_qubits: trailing qubits are not |0> (stray mass " +
                             std::to_string(stray) + ")");
  }
  return StateVector(num_qubits_ - count, std::move(kept));
}

std::vector<double> marginal_probabilities(const StateVector& state,
                                           std::span<const std::size_t> qubits) {
  if (qubits.empty()) throw std::invalid_argument("marginal_probabilities: empty qubit list");
  std::vector<std::size_t> masks;
  masks.reserve(qubits.size());
  for (auto q : qubits) {
    if (q >= state.num_qubits()) throw std::out_of_range("marginal_probabilities: qubit out of range");
    masks.push_back(std::size_t{1} << state.bit_of(q));
  }
  std::vector<double> probs(std::size_t{1} << qubits.size(), 0.0);
  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    std::size_t key = 0;
    for (auto m : masks) key = (key << 1) | ((i & m) ? 1 : 0);
    probs[key] += std::norm(amps[i]);
  }
  return probs;
}

std::vector<std::uint64_t> sample_indices(std::span<const double> probs, std::uint64_t shots,
                                          Rng& rng) {
  if (shots == 0) throw std::invalid_argument("sample_indices: shots must be >= 1");
  std::vector<double> cumulative(probs.size());
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    total += probs[i];
    cumulative[i] = total;
  }
  std::vector<std::uint64_t> counts(probs.size(), 0);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    // Skip zero-width bins that upper_bound can land on at the very end.
    auto idx = static_cast<std::size_t>(it - cumulative.begin());
    while (idx > 0 && probs[idx] == 0.0) --idx;
    ++counts[idx];
  }
  return counts;
}

std::map<std::string, std::uint64_t> sample_counts(const StateVector& state,
                                                   std::span<const std::size_t> qubits,
                                                   std::uint64_t shots, Rng& rng) {
  const auto probs = marginal_probabilities(state, qubits);
  const auto counts = sample_indices(probs, shots, rng);
  std::map<std::string, std::uint64_t> histogram;
  for (std::size_t key = 0; key < counts.size(); ++key) {
    if (counts[key]) histogram[to_bitstring(key, qubits.size())] = counts[key];
  }
  return histogram;
}

bool equal_up_to_global_phase(const StateVector& a, const StateVector& b, double tol) {
  if (a.num_qubits() != b.num_qubits()) {
    throw std::invalid_argument("equal_up_to_global_phase: dimension mismatch");
  }
  const auto av = a.amplitudes();
  const auto bv = b.amplitudes();
  std::size_t pivot = 0;
  for (std::size_t i = 1; i < bv.size(); ++i) {
    if (std::abs(bv[i]) > std::abs(bv[pivot])) pivot = i;
  }
  Amplitude c{1.0, 0.0};
  if (std::abs(bv[pivot]) > 0.0) {
    const Amplitude ratio = av[pivot] / bv[pivot];
    if (std::abs(ratio) > 0.0) c = ratio / std::abs(ratio);
  }
  for (std::size_t i = 0; i < av.size(); ++i) {
    if (std::abs(av[i] - c * bv[i]) > tol) return false;
  }
  return true;
}

StateVector random_state(std::size_t num_qubits, Rng& rng) {
  std::vector<Amplitude> amps(std::size_t{1} << num_qubits);
  double norm = 0.0;
  for (auto& a : amps) {
    // Box-Muller; 1 - u keeps the logarithm finite.
    const double r = std::sqrt(-2.0 * std::log(1.0 - rng.uniform()));
    const double phi = 2.0 * std::numbers::pi * rng.uniform();
    a = std::polar(r, phi);
    norm += std::norm(a);
  }
  for (auto& a : amps) a /= std::sqrt(norm);
  return StateVector::from_amplitudes(std::move(amps));
}

std::string to_bitstring(std::uint64_t value, std::size_t width) {
  std::string out(width, '0');
  for (std::size_t i = 0; i < width; ++i) {
    if ((value >> (width - 1 - i)) & 1U) out[i] = '1';
  }
  return out;
}

}  // namespace dqft
