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

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "dqft/fabric.hpp"

namespace dqft {

/// Probability distribution over integer outcomes, stored sparsely and
/// sorted by outcome. Outcomes absent from the table have probability 0.
class Distribution {
 public:
  using Entry = std::pair<std::uint64_t, double>;

  Distribution() = default;

  /// Throws std::invalid_argument on a negative or non-finite probability,
  /// or when the total differs from 1 by more than 1e-9.
  static Distribution from_map(const std::map<std::uint64_t, double>& probs);
  /// Entry i is the probability of outcome i; zero entries are dropped.
  static Distribution from_dense(std::span<const double> probs);
  static Distribution from_counts(const std::map<std::uint64_t, std::uint64_t>& counts);

  const std::vector<Entry>& entries() const { return entries_; }
  double probability(std::uint64_t outcome) const;
  /// Most likely outcome; ties resolve to the smallest outcome.
  std::uint64_t modal() const;
  bool empty() const { return entries_.empty(); }

 private:
  explicit Distribution(std::vector<Entry> entries);
  std::vector<Entry> entries_;
};

/// Bhattacharyya overlap F = sum_i sqrt(p_i q_i), clamped to [0, 1].
double classical_fidelity(const Distribution& p, const Distribution& q);

/// Largest per-outcome absolute difference |p_i - q_i|.
double max_abs_difference(const Distribution& p, const Distribution& q);

/// EPR pairs consumed by the grouped (one cat per control qubit and remote
/// node) schedule: sum over nodes i < k-1 of m_i * (k-1-i), 0-based.
std::uint64_t epr_budget(const PartitionPlan& plan);

/// One EPR per two-qubit gate: n(n-1)/2.
std::uint64_t naive_epr_budget(std::size_t n);

struct RunMetrics {
  double wall_time_seconds = 0.0;
  std::uint64_t peak_state_bytes = 0;
  std::uint64_t epr_count = 0;
  std::uint64_t classical_msg_count = 0;
  std::uint64_t midcircuit_measurements = 0;
  std::uint64_t block_slots = 0;
  std::uint64_t shots = 0;
  double fidelity_vs_reference = 0.0;
};

/// Counter snapshot of a finished fabric.
RunMetrics metrics_from(const Fabric& fabric);

/// Times `run` on the steady clock and stores the elapsed seconds into the
/// metrics it returns.
RunMetrics measure_run(const std::function<RunMetrics()>& run);

}  // namespace dqft
