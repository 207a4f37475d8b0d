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

#include "dqft/fabric.hpp"

#include <algorithm>

namespace dqft {

std::vector<std::size_t> PartitionPlan::logical_qubits(NodeId node) const {
  if (node >= k) throw std::out_of_range("node " + std::to_string(node) + " out of range");
  std::vector<std::size_t> qs(sizes[node]);
  for (std::size_t i = 0; i < qs.size(); ++i) qs[i] = offsets[node] + i;
  return qs;
}

std::vector<std::size_t> PartitionPlan::all_logical_qubits() const {
  std::vector<std::size_t> qs(n);
  for (std::size_t i = 0; i < n; ++i) qs[i] = i;
  return qs;
}

PartitionPlan make_partition(std::size_t n, std::size_t k) {
  if (n == 0) throw std::invalid_argument("make_partition: n must be >= 1");
  if (k == 0) throw std::invalid_argument("make_partition: k must be >= 1");
  if (k > n) {
    throw std::invalid_argument("make_partition: k exceeds n (k=" + std::to_string(k) +
                                ", n=" + std::to_string(n) + ")");
  }
  PartitionPlan plan;
  plan.n = n;
  plan.k = k;
  plan.sizes.assign(k, n / k);
  plan.sizes.back() += n % k;
  std::size_t offset = 0;
  for (std::size_t i = 0; i < k; ++i) {
    plan.offsets.push_back(offset);
    offset += plan.sizes[i];
    plan.comm_slots.push_back(n + i);
  }
  return plan;
}

std::string to_string(const QubitAddr& addr) {
  if (addr.comm) return "node" + std::to_string(addr.node) + ".comm";
  return "node" + std::to_string(addr.node) + ".q" + std::to_string(addr.local_index);
}

CrossNodeGate::CrossNodeGate(QubitAddr a, QubitAddr b)
    : std::logic_error("cross-node gate between " + to_string(a) + " and " + to_string(b)),
      first(a),
      second(b) {}

void check_locality(const PartitionPlan& plan, const AddressedGate& gate) {
  for (const auto& q : gate.qubits()) {
    if (q.node >= plan.k) throw std::out_of_range("address " + to_string(q) + ": no such node");
    if (!q.comm && q.local_index >= plan.sizes[q.node]) {
      throw std::out_of_range("address " + to_string(q) + ": local index out of range");
    }
  }
  if (gate.arity() == 2 && gate.operands[0].node != gate.operands[1].node) {
    throw CrossNodeGate(gate.operands[0], gate.operands[1]);
  }
}

Fabric::Fabric(PartitionPlan plan, std::uint64_t seed, FabricOptions options)
    : plan_(std::move(plan)),
      options_(options),
      state_(options.with_comm_qubits ? plan_.total_qubits() : plan_.n),
      rng_(seed),
      peak_state_bytes_(state_.bytes()),
      comm_busy_(plan_.k, false) {}

void Fabric::check_node(NodeId node) const {
  if (node >= plan_.k) throw std::out_of_range("node " + std::to_string(node) + " out of range");
}

std::size_t Fabric::global_index(const QubitAddr& addr) const {
  check_node(addr.node);
  if (addr.comm) {
    if (!options_.with_comm_qubits) throw ProtocolError("fabric has no communication qubits");
    return plan_.comm_slots[addr.node];
  }
  if (addr.local_index >= plan_.sizes[addr.node]) {
    throw std::out_of_range("address " + to_string(addr) + ": local index out of range");
  }
  return plan_.offsets[addr.node] + addr.local_index;
}

QubitAddr Fabric::address_of(std::size_t global) const {
  if (global >= plan_.n) {
    if (options_.with_comm_qubits && global < plan_.total_qubits()) {
      return QubitAddr::comm_slot(global - plan_.n);
    }
    throw std::out_of_range("global qubit " + std::to_string(global) + " out of range");
  }
  const auto it = std::upper_bound(plan_.offsets.begin(), plan_.offsets.end(), global);
  const auto node = static_cast<NodeId>(it - plan_.offsets.begin()) - 1;
  return QubitAddr::logical(node, global - plan_.offsets[node]);
}

void Fabric::apply(const AddressedGate& gate) {
  check_locality(plan_, gate);
  Gate g{gate.kind, {global_index(gate.operands[0]), global_index(gate.operands[1])}, gate.angle};
  state_.apply(g);
}

void Fabric::apply_global(const Gate& gate) {
  AddressedGate g{gate.kind, {address_of(gate.operands[0]), address_of(gate.operands[1])},
                  gate.angle};
  apply(g);
}

int Fabric::measure(const QubitAddr& q) {
  const auto idx = global_index(q);
  ++counters_.midcircuit_measurements;
  if (!forced_.empty()) {
    const int outcome = forced_.front();
    forced_.pop_front();
    state_.collapse(idx, outcome);
    return outcome;
  }
  return state_.measure(idx, rng_);
}

void Fabric::reset(const QubitAddr& q) { state_.reset(global_index(q), rng_); }

std::pair<QubitAddr, QubitAddr> Fabric::allocate_epr(NodeId a, NodeId b) {
  check_node(a);
  check_node(b);
  if (a == b) throw ProtocolError("allocate_epr: both halves on node " + std::to_string(a));
  if (comm_busy_[a] || comm_busy_[b]) {
    throw ProtocolError("allocate_epr: comm slot busy on node " +
                        std::to_string(comm_busy_[a] ? a : b));
  }
  const auto qa = QubitAddr::comm_slot(a);
  const auto qb = QubitAddr::comm_slot(b);
  reset(qa);
  reset(qb);
  // The source prepares the pair; the two halves share a node for one CNOT.
  const auto ia = global_index(qa);
  const auto ib = global_index(qb);
  state_.apply(Gate::h(ia));
  state_.apply(Gate::cnot(ia, ib));
  comm_busy_[a] = true;
  comm_busy_[b] = true;
  ++counters_.epr_created;
  return {qa, qb};
}

bool Fabric::comm_busy(NodeId node) const {
  check_node(node);
  return comm_busy_[node];
}

void Fabric::release_comm(NodeId node) {
  check_node(node);
  comm_busy_[node] = false;
}

void Fabric::send_classical(ClassicalMessage msg) {
  check_node(msg.src);
  check_node(msg.dst);
  if (msg.src == msg.dst) {
    throw ProtocolError("send_classical: src and dst are both node " + std::to_string(msg.src));
  }
  msg.tick = counters_.current_tick + options_.latency_ticks;
  channels_[{msg.src, msg.dst}].push_back(std::move(msg));
  ++counters_.classical_messages;
}

ClassicalMessage Fabric::receive(NodeId src, NodeId dst, std::string_view tag) {
  auto it = channels_.find({src, dst});
  if (it == channels_.end() || it->second.empty()) {
    throw ProtocolError("receive: no message from node " + std::to_string(src) + " to node " +
                        std::to_string(dst));
  }
  auto& queue = it->second;
  if (queue.front().tick > counters_.current_tick) {
    throw ProtocolError("receive: message not deliverable before tick " +
                        std::to_string(queue.front().tick));
  }
  if (queue.front().tag != tag) {
    throw ProtocolError("receive: expected tag '" + std::string(tag) + "', got '" +
                        queue.front().tag + "'");
  }
  ClassicalMessage msg = std::move(queue.front());
  queue.pop_front();
  return msg;
}

std::size_t Fabric::deliverable(NodeId src, NodeId dst) const {
  auto it = channels_.find({src, dst});
  if (it == channels_.end()) return 0;
  return static_cast<std::size_t>(std::count_if(
      it->second.begin(), it->second.end(),
      [&](const ClassicalMessage& m) { return m.tick <= counters_.current_tick; }));
}

std::size_t Fabric::in_flight() const {
  std::size_t total = 0;
  for (const auto& [key, queue] : channels_) total += queue.size();
  return total;
}

void Fabric::advance_clock(std::uint64_t ticks) { counters_.current_tick += ticks; }

void Fabric::force_outcomes(std::vector<int> outcomes) {
  forced_.insert(forced_.end(), outcomes.begin(), outcomes.end());
}

void Fabric::load_logical_state(const StateVector& logical) {
  if (logical.num_qubits() != plan_.n) {
    throw std::invalid_argument("load_logical_state: expected " + std::to_string(plan_.n) +
                                " qubits, got " + std::to_string(logical.num_qubits()));
  }
  const std::size_t shift = state_.num_qubits() - plan_.n;
  std::vector<Amplitude> amps(state_.size(), Amplitude{0.0, 0.0});
  const auto src = logical.amplitudes();
  for (std::size_t i = 0; i < src.size(); ++i) amps[i << shift] = src[i];
  state_ = StateVector::from_amplitudes(std::move(amps));
}

StateVector Fabric::logical_state(double tol) const {
  if (!options_.with_comm_qubits) return state_;
  return state_.drop_trailing_qubits(plan_.k, tol);
}

}  // namespace dqft
