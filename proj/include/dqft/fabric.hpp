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

#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dqft/rng.hpp"
#include "dqft/statevector.hpp"

namespace dqft {

using NodeId = std::size_t;

/// Assignment of n logical qubits to k nodes, plus one communication qubit
/// per node.
///
/// Logical qubits are contiguous per node in node order; communication
/// qubits follow all logical qubits, so comm_slots[i] == n + i.
struct PartitionPlan {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> offsets;
  std::vector<std::size_t> comm_slots;

  std::size_t total_qubits() const { return n + k; }
  std::vector<std::size_t> logical_qubits(NodeId node) const;
  std::vector<std::size_t> all_logical_qubits() const;

  bool operator==(const PartitionPlan&) const = default;
};

/// Evenly partitioned, remainder in the last node.
/// Throws std::invalid_argument unless 1 <= k <= n.
PartitionPlan make_partition(std::size_t n, std::size_t k);

struct QubitAddr {
  NodeId node = 0;
  std::size_t local_index = 0;
  bool comm = false;

  static QubitAddr logical(NodeId node, std::size_t local_index) { return {node, local_index, false}; }
  static QubitAddr comm_slot(NodeId node) { return {node, 0, true}; }

  bool operator==(const QubitAddr&) const = default;
};

std::string to_string(const QubitAddr& addr);

using AddressedGate = BasicGate<QubitAddr>;

/// Raised when a gate's operands span more than one node.
class CrossNodeGate : public std::logic_error {
 public:
  CrossNodeGate(QubitAddr a, QubitAddr b);
  QubitAddr first;
  QubitAddr second;
};

/// Raised on misuse of the teleportation protocol (busy comm slot, message
/// not yet deliverable, double disentangle, ...).
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Passes iff every operand of `gate` lives on one node and is a valid
/// address under `plan`.
void check_locality(const PartitionPlan& plan, const AddressedGate& gate);

struct ClassicalMessage {
  NodeId src = 0;
  NodeId dst = 0;
  std::string tag;
  int payload = 0;
  std::uint64_t tick = 0;
};

struct FabricCounters {
  std::uint64_t epr_created = 0;
  std::uint64_t classical_messages = 0;
  std::uint64_t midcircuit_measurements = 0;
  std::uint64_t current_tick = 0;
  std::uint64_t block_slots = 0;
};

/// Deliberate protocol defects, used only to prove the verification checks
/// can detect them.
struct FaultInjection {
  bool drop_disentangle_z = false;
  bool naive_control_order = false;
};

struct FabricOptions {
  std::uint64_t latency_ticks = 1;
  /// Semiclassical runs need no communication qubits.
  bool with_comm_qubits = true;
  FaultInjection faults{};
};

/// k nodes sharing one global statevector. All gates go through apply(),
/// which enforces locality; every resource counter lives here.
class Fabric {
 public:
  Fabric(PartitionPlan plan, std::uint64_t seed, FabricOptions options = {});

  const PartitionPlan& plan() const { return plan_; }
  const FabricOptions& options() const { return options_; }
  const FabricCounters& counters() const { return counters_; }
  const StateVector& state() const { return state_; }
  std::size_t peak_state_bytes() const { return peak_state_bytes_; }
  Rng& rng() { return rng_; }

  std::size_t global_index(const QubitAddr& addr) const;
  QubitAddr address_of(std::size_t global) const;

  void apply(const AddressedGate& gate);
  void apply_global(const Gate& gate);

  /// Mid-circuit measurement; counted. Consumes a forced outcome if queued.
  int measure(const QubitAddr& q);
  /// Uncounted reset to |0>.
  void reset(const QubitAddr& q);

  /// Prepares the two comm qubits in (|00> + |11>)/sqrt(2) and reserves both
  /// slots. Throws ProtocolError when either slot is busy.
  std::pair<QubitAddr, QubitAddr> allocate_epr(NodeId a, NodeId b);
  bool comm_busy(NodeId node) const;
  void release_comm(NodeId node);

  /// Enqueues with tick = current_tick + latency.
  void send_classical(ClassicalMessage msg);
  /// Pops the oldest message on (src, dst). The message must be deliverable
  /// (tick <= current_tick) and carry `tag`.
  ClassicalMessage receive(NodeId src, NodeId dst, std::string_view tag);
  std::size_t deliverable(NodeId src, NodeId dst) const;
  std::size_t in_flight() const;

  void advance_clock(std::uint64_t ticks);
  void record_slot() { ++counters_.block_slots; }

  /// Queues outcomes for the next mid-circuit measurements, in order.
  void force_outcomes(std::vector<int> outcomes);

  /// Replaces the logical register with `logical`; comm qubits become |0>.
  void load_logical_state(const StateVector& logical);

  /// Logical register with the comm qubits removed; they must be |0>.
  StateVector logical_state(double tol = 1e-10) const;

 private:
  void check_node(NodeId node) const;

  PartitionPlan plan_;
  FabricOptions options_;
  StateVector state_;
  Rng rng_;
  FabricCounters counters_{};
  std::size_t peak_state_bytes_ = 0;
  std::vector<bool> comm_busy_;
  std::map<std::pair<NodeId, NodeId>, std::deque<ClassicalMessage>> channels_;
  std::deque<int> forced_;
};

}  // namespace dqft
