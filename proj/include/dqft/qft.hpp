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

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dqft/fabric.hpp"
#include "dqft/metrics.hpp"
#include "dqft/statevector.hpp"

namespace dqft {

/// Encoded Fourier phase as a fraction of a full turn, 0 <= theta < 1.
class PhaseAngle {
 public:
  explicit PhaseAngle(double theta);

  double value() const { return theta_; }

  /// 2*pi * frac(theta * 2^exponent). Scaling by a power of two is exact, so
  /// the reduction loses no precision even for large exponents.
  double turn_angle(std::size_t exponent) const;

 private:
  double theta_;
};

// ---------------------------------------------------------------------------
// Circuit builders. All gate lists use global statevector indices.
// ---------------------------------------------------------------------------

/// Fourier-state preparation. `qubits` is listed most significant first; the
/// last listed qubit receives phase theta * 2^low_exponent, the one before it
/// theta * 2^(low_exponent + 1), and so on. With low_exponent = 0 over the
/// whole register this prepares sum_x e^{2 pi i theta x} |x> / sqrt(N), which
/// for theta = j / 2^n is column j of the DFT matrix.
std::vector<Gate> fourier_prep_gates(std::span<const std::size_t> qubits, PhaseAngle theta,
                                     std::size_t low_exponent = 0);
void fourier_prep(StateVector& state, std::span<const std::size_t> qubits, PhaseAngle theta,
                  std::size_t low_exponent = 0);

/// Angle of the inverse-QFT controlled phase between qubits `distance`
/// positions apart: -2*pi / 2^(distance + 1).
double gradient_angle(std::size_t distance);

/// Inverse QFT without the final bit reversal. For j = 0, 1, ... over
/// `qubits`: CP(qubits[l], qubits[j], gradient_angle(j - l)) for every
/// l < j in increasing l, then H(qubits[j]). The measured register comes out
/// bit-reversed; see rev_postprocess.
std::vector<Gate> inverse_qft_gates(std::span<const std::size_t> qubits);
void inverse_qft_local(StateVector& state, std::span<const std::size_t> qubits);

/// Depth under ASAP layering (each gate lands one layer after the latest
/// layer touching any of its qubits).
std::size_t layer_count(std::span<const Gate> gates);

// ---------------------------------------------------------------------------
// Distributed schedule
// ---------------------------------------------------------------------------

struct LocalInverseQft {
  NodeId node = 0;
};

struct GradientTarget {
  std::size_t target_local = 0;
  double angle = 0.0;
};

/// All phases driven by one control qubit onto one node: one cat session.
struct CatGroup {
  std::size_t control_local = 0;
  std::vector<GradientTarget> targets;  // ascending target_local
};

/// Controlled phase-gradient block from every qubit of `control_node` onto
/// every qubit of `target_node`.
struct GradientBlock {
  NodeId control_node = 0;
  NodeId target_node = 0;
  std::vector<CatGroup> groups;
};

using ScheduleBlock = std::variant<LocalInverseQft, GradientBlock>;

struct TimeSlot {
  std::vector<ScheduleBlock> blocks;
};

/// Wavefront schedule over 2k - 1 slots: slot 2a runs the local inverse QFT
/// of node a, and the gradient block a -> b (a < b) runs in slot a + b. No
/// node appears twice in a slot, and every gradient block sits after its
/// control node's local QFT and before its target node's.
struct DistributedSchedule {
  PartitionPlan plan;
  std::vector<TimeSlot> slots;

  std::size_t slot_count() const { return slots.size(); }
  std::size_t cat_sessions() const;
  std::size_t gradient_blocks() const;
};

struct ScheduleOptions {
  /// Fault injection: mirror control indices as if each local register still
  /// carried its own bit reversal.
  bool naive_control_order = false;
};

DistributedSchedule build_schedule(const PartitionPlan& plan, ScheduleOptions options = {});

/// The schedule as a monolithic gate list, with every telegated phase
/// replaced by a direct CP(control, target).
std::vector<Gate> flatten(const DistributedSchedule& schedule);

// ---------------------------------------------------------------------------
// Measurement postprocessing
// ---------------------------------------------------------------------------

/// Reverses bit order: "1000" -> 1. Throws on an empty or non-binary string.
std::uint64_t rev_postprocess(std::string_view raw_bits);
std::uint64_t reverse_bits(std::uint64_t raw, std::size_t width);

struct MeasuredOutcome {
  std::string raw_bits;
  std::uint64_t value = 0;

  static MeasuredOutcome from_raw(std::string raw_bits);
};

/// Distribution over REV-postprocessed values of an n-qubit logical state.
Distribution value_distribution(const StateVector& logical);

// ---------------------------------------------------------------------------
// Runs
// ---------------------------------------------------------------------------

enum class Mode { Telegate, Semiclassical };

std::string to_string(Mode mode);
/// Accepts "telegate" or "semiclassical".
Mode parse_mode(std::string_view text);

class RunTimeout : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  std::uint64_t latency_ticks = 1;
  FaultInjection faults{};
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct RunResult {
  /// REV-postprocessed value -> shot count.
  std::map<std::uint64_t, std::uint64_t> counts;
  RunMetrics metrics;
  /// Exact outcome distribution of the executed circuit.
  Distribution exact;
  /// Pre-measurement logical register (comm qubits removed). Absent in
  /// semiclassical mode, which measures as it goes.
  std::optional<StateVector> logical_state;
};

/// Fourier preparation on every node, the distributed schedule (gradients via
/// telegate, or via classical feed-forward in semiclassical mode), then
/// measurement of all logical qubits and REV.
///
/// In telegate mode the circuit is executed once and all shots are sampled
/// from the resulting logical state, which is independent of the internal
/// measurement branches. Counters describe one circuit execution.
RunResult run_distributed(const PartitionPlan& plan, PhaseAngle theta, Mode mode,
                          std::uint64_t shots, std::uint64_t seed, const RunOptions& options = {});

/// Same pipeline on a single n-qubit register with no communication qubits.
RunResult run_monolithic_reference(std::size_t n, PhaseAngle theta, std::uint64_t shots,
                                   std::uint64_t seed);

/// Teleportation-free dynamic circuit: qubits are measured as soon as their
/// gates finish and each outcome conditions later phases classically.
/// Every shot is a separate trajectory.
RunResult run_semiclassical(const PartitionPlan& plan, PhaseAngle theta, std::uint64_t shots,
                            std::uint64_t seed, const RunOptions& options = {});

/// Exact output distribution of the semiclassical procedure, by enumerating
/// every measurement branch with its probability.
Distribution semiclassical_exact_distribution(const PartitionPlan& plan, PhaseAngle theta);

}  // namespace dqft
