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

#include "dqft/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace dqft {

Distribution::Distribution(std::vector<Entry> entries) : entries_(std::move(entries)) {
  double total = 0.0;
  for (const auto& [outcome, p] : entries_) {
    if (!std::isfinite(p) || p < 0.0) {
      throw std::invalid_argument("Distribution: invalid probability for outcome " +
                                  std::to_string(outcome));
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("Distribution: probabilities sum to " + std::to_string(total));
  }
}

Distribution Distribution::from_map(const std::map<std::uint64_t, double>& probs) {
  return Distribution(std::vector<Entry>(probs.begin(), probs.end()));
}

Distribution Distribution::from_dense(std::span<const double> probs) {
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] != 0.0) entries.emplace_back(i, probs[i]);
  }
  return Distribution(std::move(entries));
}

Distribution Distribution::from_counts(const std::map<std::uint64_t, std::uint64_t>& counts) {
  std::uint64_t total = 0;
  for (const auto& [outcome, c] : counts) total += c;
  if (total == 0) throw std::invalid_argument("Distribution::from_counts: no samples");
  std::vector<Entry> entries;
  for (const auto& [outcome, c] : counts) {
    if (c) entries.emplace_back(outcome, static_cast<double>(c) / static_cast<double>(total));
  }
  return Distribution(std::move(entries));
}

double Distribution::probability(std::uint64_t outcome) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), outcome,
                             [](const Entry& e, std::uint64_t v) { return e.first < v; });
  return (it != entries_.end() && it->first == outcome) ? it->second : 0.0;
}

std::uint64_t Distribution::modal() const {
  if (entries_.empty()) throw std::logic_error("Distribution::modal: empty distribution");
  const auto it = std::max_element(entries_.begin(), entries_.end(),
                                   [](const Entry& a, const Entry& b) { return a.second < b.second; });
  return it->first;
}

namespace {

// Visits every outcome present in either distribution with (p, q).
template <class F>
void merge_visit(const Distribution& p, const Distribution& q, F&& visit) {
  const auto& a = p.entries();
  const auto& b = q.entries();
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      visit(a[i++].second, 0.0);
    } else if (i == a.size() || b[j].first < a[i].first) {
      visit(0.0, b[j++].second);
    } else {
      visit(a[i++].second, b[j++].second);
    }
  }
}

}  // namespace

double classical_fidelity(const Distribution& p, const Distribution& q) {
  double f = 0.0;
  merge_visit(p, q, [&](double x, double y) { f += std::sqrt(x * y); });
  return std::clamp(f, 0.0, 1.0);
}

double max_abs_difference(const Distribution& p, const Distribution& q) {
  double worst = 0.0;
  merge_visit(p, q, [&](double x, double y) { worst = std::max(worst, std::abs(x - y)); });
  return worst;
}

std::uint64_t epr_budget(const PartitionPlan& plan) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i + 1 < plan.k; ++i) total += plan.sizes[i] * (plan.k - 1 - i);
  return total;
}

std::uint64_t naive_epr_budget(std::size_t n) {
  return static_cast<std::uint64_t>(n) * (n == 0 ? 0 : n - 1) / 2;
}

RunMetrics metrics_from(const Fabric& fabric) {
  RunMetrics m;
  m.peak_state_bytes = fabric.peak_state_bytes();
  m.epr_count = fabric.counters().epr_created;
  m.classical_msg_count = fabric.counters().classical_messages;
  m.midcircuit_measurements = fabric.counters().midcircuit_measurements;
  m.block_slots = fabric.counters().block_slots;
  return m;
}

RunMetrics measure_run(const std::function<RunMetrics()>& run) {
  const auto start = std::chrono::steady_clock::now();
  RunMetrics m = run();
  const auto stop = std::chrono::steady_clock::now();
  m.wall_time_seconds = std::chrono::duration<double>(stop - start).count();
  return m;
}

}  // namespace dqft
