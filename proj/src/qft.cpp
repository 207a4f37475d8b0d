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

#include "dqft/qft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "dqft/telegate.hpp"

namespace dqft {

PhaseAngle::PhaseAngle(double theta) : theta_(theta) {
  if (!std::isfinite(theta) || theta < 0.0 || theta >= 1.0) {
    throw std::invalid_argument("theta must lie in [0, 1), got " + std::to_string(theta));
  }
}

double PhaseAngle::turn_angle(std::size_t exponent) const {
  const double scaled = std::ldexp(theta_, static_cast<int>(exponent));
  return 2.0 * std::numbers::pi * (scaled - std::floor(scaled));
}

std::vector<Gate> fourier_prep_gates(std::span<const std::size_t> qubits, PhaseAngle theta,
                                     std::size_t low_exponent) {
  std::vector<Gate> gates;
  gates.reserve(2 * qubits.size());
  for (std::size_t pos = 0; pos < qubits.size(); ++pos) {
    const std::size_t exponent = low_exponent + (qubits.size() - 1 - pos);
    gates.push_back(Gate::h(qubits[pos]));
    gates.push_back(Gate::p(qubits[pos], theta.turn_angle(exponent)));
  }
  return gates;
}

void fourier_prep(StateVector& state, std::span<const std::size_t> qubits, PhaseAngle theta,
                  std::size_t low_exponent) {
  for (const auto& g : fourier_prep_gates(qubits, theta, low_exponent)) state.apply(g);
}

double gradient_angle(std::size_t distance) {
  return -2.0 * std::numbers::pi / std::ldexp(1.0, static_cast<int>(distance + 1));
}

std::vector<Gate> inverse_qft_gates(std::span<const std::size_t> qubits) {
  std::vector<Gate> gates;
  for (std::size_t j = 0; j < qubits.size(); ++j) {
    for (std::size_t l = 0; l < j; ++l) {
      gates.push_back(Gate::cp(qubits[l], qubits[j], gradient_angle(j - l)));
    }
    gates.push_back(Gate::h(qubits[j]));
  }
  return gates;
}

void inverse_qft_local(StateVector& state, std::span<const std::size_t> qubits) {
  for (const auto& g : inverse_qft_gates(qubits)) state.apply(g);
}

std::size_t layer_count(std::span<const Gate> gates) {
  std::unordered_map<std::size_t, std::size_t> depth;
  std::size_t total = 0;
  for (const auto& g : gates) {
    std::size_t layer = 0;
    for (auto q : g.qubits()) layer = std::max(layer, depth[q]);
    ++layer;
    for (auto q : g.qubits()) depth[q] = layer;
    total = std::max(total, layer);
  }
  return total;
}

std::size_t DistributedSchedule::cat_sessions() const {
  std::size_t total = 0;
  for (const auto& slot : slots) {
    for (const auto& block : slot.blocks) {
      if (const auto* g = std::get_if<GradientBlock>(&block)) total += g->groups.size();
    }
  }
  return total;
}

std::size_t DistributedSchedule::gradient_blocks() const {
  std::size_t total = 0;
  for (const auto& slot : slots) {
    total += static_cast<std::size_t>(std::count_if(
        slot.blocks.begin(), slot.blocks.end(),
        [](const ScheduleBlock& b) { return std::holds_alternative<GradientBlock>(b); }));
  }
  return total;
}

DistributedSchedule build_schedule(const PartitionPlan& plan, ScheduleOptions options) {
  DistributedSchedule schedule{plan, std::vector<TimeSlot>(2 * plan.k - 1)};
  for (NodeId a = 0; a < plan.k; ++a) {
    schedule.slots[2 * a].blocks.emplace_back(LocalInverseQft{a});
  }
  for (NodeId a = 0; a < plan.k; ++a) {
    for (NodeId b = a + 1; b < plan.k; ++b) {
      GradientBlock block{a, b, {}};
      for (std::size_t c = 0; c < plan.sizes[a]; ++c) {
        const std::size_t control_global = plan.offsets[a] + c;
        CatGroup group{options.naive_control_order ? plan.sizes[a] - 1 - c : c, {}};
        for (std::size_t t = 0; t < plan.sizes[b]; ++t) {
          const std::size_t target_global = plan.offsets[b] + t;
          group.targets.push_back({t, gradient_angle(target_global - control_global)});
        }
        block.groups.push_back(std::move(group));
      }
      schedule.slots[a + b].blocks.emplace_back(std::move(block));
    }
  }
  return schedule;
}

std::vector<Gate> flatten(const DistributedSchedule& schedule) {
  const auto& plan = schedule.plan;
  std::vector<Gate> gates;
  for (const auto& slot : schedule.slots) {
    for (const auto& block : slot.blocks) {
      if (const auto* local = std::get_if<LocalInverseQft>(&block)) {
        const auto qs = plan.logical_qubits(local->node);
        const auto part = inverse_qft_gates(qs);
        gates.insert(gates.end(), part.begin(), part.end());
        continue;
      }
      const auto& grad = std::get<GradientBlock>(block);
      for (const auto& group : grad.groups) {
        for (const auto& t : group.targets) {
          gates.push_back(Gate::cp(plan.offsets[grad.control_node] + group.control_local,
                                   plan.offsets[grad.target_node] + t.target_local, t.angle));
        }
      }
    }
  }
  return gates;
}

std::uint64_t reverse_bits(std::uint64_t raw, std::size_t width) {
  std::uint64_t out = 0;
  for (std::size_t i = 0; i < width; ++i) out = (out << 1) | ((raw >> i) & 1U);
  return out;
}

std::uint64_t rev_postprocess(std::string_view raw_bits) {
  if (raw_bits.empty()) throw std::invalid_argument("rev_postprocess: empty bitstring");
  if (raw_bits.size() > 64) throw std::invalid_argument("rev_postprocess: more than 64 bits");
  std::uint64_t value = 0;
  for (std::size_t i = raw_bits.size(); i-- > 0;) {
    if (raw_bits[i] != '0' && raw_bits[i] != '1') {
      throw std::invalid_argument("rev_postprocess: non-binary character in bitstring");
    }
    value = (value << 1) | static_cast<std::uint64_t>(raw_bits[i] - '0');
  }
  return value;
}

MeasuredOutcome MeasuredOutcome::from_raw(std::string raw_bits) {
  const auto value = rev_postprocess(raw_bits);
  return {std::move(raw_bits), value};
}

Distribution value_distribution(const StateVector& logical) {
  const std::size_t n = logical.num_qubits();
  std::vector<double> probs(logical.size(), 0.0);
  const auto amps = logical.amplitudes();
  for (std::size_t raw = 0; raw < amps.size(); ++raw) {
    probs[reverse_bits(raw, n)] = std::norm(amps[raw]);
  }
  return Distribution::from_dense(probs);
}

std::string to_string(Mode mode) {
  return mode == Mode::Telegate ? "telegate" : "semiclassical";
}

Mode parse_mode(std::string_view text) {
  if (text == "telegate") return Mode::Telegate;
  if (text == "semiclassical") return Mode::Semiclassical;
  throw std::invalid_argument("unknown mode '" + std::string(text) + "'");
}

namespace {

void check_deadline(const RunOptions& options) {
  if (options.deadline && std::chrono::steady_clock::now() > *options.deadline) {
    throw RunTimeout("run exceeded its time limit");
  }
}

// Every node prepares its own slice of the Fourier state.
void prepare_nodes(Fabric& fabric, PhaseAngle theta) {
  const auto& plan = fabric.plan();
  for (NodeId node = 0; node < plan.k; ++node) {
    const auto qs = plan.logical_qubits(node);
    const std::size_t low_exponent = plan.n - (plan.offsets[node] + plan.sizes[node]);
    for (const auto& g : fourier_prep_gates(qs, theta, low_exponent)) fabric.apply_global(g);
  }
}

std::map<std::uint64_t, std::uint64_t> sample_values(const StateVector& logical,
                                                     std::uint64_t shots, Rng& rng) {
  std::vector<double> probs(logical.size());
  const auto amps = logical.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) probs[i] = std::norm(amps[i]);
  const auto raw_counts = sample_indices(probs, shots, rng);
  std::map<std::uint64_t, std::uint64_t> counts;
  for (std::size_t raw = 0; raw < raw_counts.size(); ++raw) {
    if (raw_counts[raw]) counts[reverse_bits(raw, logical.num_qubits())] = raw_counts[raw];
  }
  return counts;
}

void run_gradient_block(Fabric& fabric, const GradientBlock& block) {
  for (const auto& group : block.groups) {
    auto handle =
        cat_entangle(fabric, QubitAddr::logical(block.control_node, group.control_local),
                     block.target_node);
    for (const auto& t : group.targets) {
      apply_remote_controlled(fabric, handle, QubitAddr::logical(block.target_node, t.target_local),
                              t.angle);
    }
    cat_disentangle(fabric, handle);
  }
}

RunResult run_telegate(const PartitionPlan& plan, PhaseAngle theta, std::uint64_t shots,
                       std::uint64_t seed, const RunOptions& options) {
  RunResult result;
  result.metrics = measure_run([&] {
    Fabric fabric(plan, seed, {options.latency_ticks, true, options.faults});
    prepare_nodes(fabric, theta);
    const auto schedule = build_schedule(plan, {options.faults.naive_control_order});
    for (const auto& slot : schedule.slots) {
      check_deadline(options);
      for (const auto& block : slot.blocks) {
        if (const auto* local = std::get_if<LocalInverseQft>(&block)) {
          for (const auto& g : inverse_qft_gates(plan.logical_qubits(local->node))) {
            fabric.apply_global(g);
          }
        } else {
          run_gradient_block(fabric, std::get<GradientBlock>(block));
        }
      }
      fabric.record_slot();
    }
    auto logical = fabric.logical_state();
    result.counts = sample_values(logical, shots, fabric.rng());
    result.exact = value_distribution(logical);
    result.logical_state = std::move(logical);
    RunMetrics m = metrics_from(fabric);
    m.shots = shots;
    return m;
  });
  return result;
}

// Merged classically-conditioned phase for qubit `g` given earlier outcomes.
double conditioned_phase(std::span<const int> bits, std::size_t g) {
  double phase = 0.0;
  for (std::size_t l = 0; l < g; ++l) {
    if (bits[l] == 1) phase += gradient_angle(g - l);
  }
  return phase;
}

// One semiclassical trajectory. Returns the raw outcome, qubit 0 as MSB.
std::uint64_t semiclassical_shot(Fabric& fabric, PhaseAngle theta) {
  const auto& plan = fabric.plan();
  prepare_nodes(fabric, theta);
  // known[node][g]: outcome of global qubit g as known to that node, -1 if not.
  std::vector<std::vector<int>> known(plan.k, std::vector<int>(plan.n, -1));
  std::uint64_t raw = 0;
  for (NodeId a = 0; a < plan.k; ++a) {
    for (std::size_t local = 0; local < plan.sizes[a]; ++local) {
      const std::size_t g = plan.offsets[a] + local;
      const auto q = QubitAddr::logical(a, local);
      const double phase = conditioned_phase(known[a], g);
      if (phase != 0.0) fabric.apply(AddressedGate::p(q, phase));
      fabric.apply(AddressedGate::h(q));
      const int bit = fabric.measure(q);
      known[a][g] = bit;
      raw = (raw << 1) | static_cast<std::uint64_t>(bit);
    }
    // Ship this node's outcomes to every node still waiting on them.
    for (NodeId b = a + 1; b < plan.k; ++b) {
      for (std::size_t local = 0; local < plan.sizes[a]; ++local) {
        fabric.send_classical({a, b, "outcome", known[a][plan.offsets[a] + local], 0});
      }
    }
    fabric.advance_clock(fabric.options().latency_ticks);
    for (NodeId b = a + 1; b < plan.k; ++b) {
      for (std::size_t local = 0; local < plan.sizes[a]; ++local) {
        known[b][plan.offsets[a] + local] = fabric.receive(a, b, "outcome").payload;
      }
    }
    fabric.record_slot();
  }
  return raw;
}

}  // namespace

RunResult run_semiclassical(const PartitionPlan& plan, PhaseAngle theta, std::uint64_t shots,
                            std::uint64_t seed, const RunOptions& options) {
  if (shots == 0) throw std::invalid_argument("run_semiclassical: shots must be >= 1");
  RunResult result;
  result.metrics = measure_run([&] {
    RunMetrics first{};
    for (std::uint64_t shot = 0; shot < shots; ++shot) {
      check_deadline(options);
      Fabric fabric(plan, mix_seed(seed + shot), {options.latency_ticks, false, options.faults});
      const auto raw = semiclassical_shot(fabric, theta);
      ++result.counts[reverse_bits(raw, plan.n)];
      if (shot == 0) first = metrics_from(fabric);
    }
    first.shots = shots;
    return first;
  });
  result.exact = semiclassical_exact_distribution(plan, theta);
  return result;
}

Distribution semiclassical_exact_distribution(const PartitionPlan& plan, PhaseAngle theta) {
  // Depth-first over measurement outcomes. The measured qubit is always the
  // leading one, so after each outcome the state shrinks to the matching half
  // and the total work is O(n 2^n).
  constexpr double kPrune = 1e-18;
  const std::size_t n = plan.n;
  std::vector<double> probs(std::size_t{1} << n, 0.0);
  std::vector<int> bits(n, -1);

  StateVector initial(n);
  fourier_prep(initial, plan.all_logical_qubits(), theta);

  auto visit = [&](auto&& self, StateVector state, std::size_t g, double weight) -> void {
    const double phase = conditioned_phase(bits, g);
    if (phase != 0.0) state.apply(Gate::p(0, phase));
    state.apply(Gate::h(0));
    const auto amps = state.amplitudes();
    const std::size_t half = amps.size() / 2;
    for (int outcome = 0; outcome < 2; ++outcome) {
      const auto first = amps.begin() + static_cast<std::ptrdiff_t>(outcome == 0 ? 0 : half);
      double p = 0.0;
      for (std::size_t i = 0; i < half; ++i) p += std::norm(first[static_cast<std::ptrdiff_t>(i)]);
      if (p * weight < kPrune) continue;
      bits[g] = outcome;
      if (g + 1 == n) {
        std::uint64_t raw = 0;
        for (auto b : bits) raw = (raw << 1) | static_cast<std::uint64_t>(b);
        probs[reverse_bits(raw, n)] += weight * p;
      } else {
        std::vector<Amplitude> reduced(first, first + static_cast<std::ptrdiff_t>(half));
        const double scale = 1.0 / std::sqrt(p);
        for (auto& a : reduced) a *= scale;
        self(self, StateVector::from_amplitudes(std::move(reduced)), g + 1, weight * p);
      }
      bits[g] = -1;
    }
  };
  visit(visit, std::move(initial), 0, 1.0);

  double total = 0.0;
  for (auto p : probs) total += p;
  for (auto& p : probs) p /= total;
  return Distribution::from_dense(probs);
}

RunResult run_distributed(const PartitionPlan& plan, PhaseAngle theta, Mode mode,
                          std::uint64_t shots, std::uint64_t seed, const RunOptions& options) {
  if (shots == 0) throw std::invalid_argument("run_distributed: shots must be >= 1");
  if (mode == Mode::Semiclassical) return run_semiclassical(plan, theta, shots, seed, options);
  return run_telegate(plan, theta, shots, seed, options);
}

RunResult run_monolithic_reference(std::size_t n, PhaseAngle theta, std::uint64_t shots,
                                   std::uint64_t seed) {
  if (shots == 0) throw std::invalid_argument("run_monolithic_reference: shots must be >= 1");
  RunResult result;
  result.metrics = measure_run([&] {
    StateVector state(n);
    const auto qs = make_partition(n, 1).all_logical_qubits();
    fourier_prep(state, qs, theta);
    inverse_qft_local(state, qs);
    Rng rng(seed);
    result.counts = sample_values(state, shots, rng);
    result.exact = value_distribution(state);
    RunMetrics m;
    m.peak_state_bytes = state.bytes();
    m.block_slots = 1;
    m.shots = shots;
    result.logical_state = std::move(state);
    return m;
  });
  return result;
}

}  // namespace dqft
