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

#include "dqft/telegate.hpp"

namespace dqft {

CatHandle cat_entangle(Fabric& fabric, const QubitAddr& control, NodeId target_node) {
  if (control.comm) throw ProtocolError("cat_entangle: control must be a logical qubit");
  (void)fabric.global_index(control);
  if (control.node == target_node) {
    throw ProtocolError("cat_entangle: control already lives on node " + std::to_string(target_node));
  }
  if (fabric.comm_busy(target_node)) {
    throw ProtocolError("cat_entangle: comm slot busy on node " + std::to_string(target_node));
  }

  const NodeId source = control.node;
  const auto [local_half, remote_half] = fabric.allocate_epr(source, target_node);
  const std::uint64_t epr_id = fabric.counters().epr_created;

  fabric.apply(AddressedGate::cnot(control, local_half));
  const int bit = fabric.measure(local_half);
  fabric.reset(local_half);
  fabric.release_comm(source);

  fabric.send_classical({source, target_node, kCatEntangleTag, bit, 0});
  fabric.advance_clock(fabric.options().latency_ticks);
  if (fabric.receive(source, target_node, kCatEntangleTag).payload == 1) {
    fabric.apply(AddressedGate::x(remote_half));
  }
  return {control, remote_half, epr_id, CatState::Entangled};
}

void apply_remote_controlled(Fabric& fabric, const CatHandle& handle, const QubitAddr& target,
                             double phi) {
  if (handle.state != CatState::Entangled) {
    throw ProtocolError("apply_remote_controlled: handle already disentangled");
  }
  if (target.comm || target.node != handle.remote_cat.node) {
    throw ProtocolError("apply_remote_controlled: target " + to_string(target) +
                        " is not a logical qubit on node " + std::to_string(handle.remote_cat.node));
  }
  fabric.apply(AddressedGate::cp(handle.remote_cat, target, phi));
}

void cat_disentangle(Fabric& fabric, CatHandle& handle) {
  if (handle.state != CatState::Entangled) {
    throw ProtocolError("cat_disentangle: handle already disentangled");
  }
  const NodeId cat_node = handle.remote_cat.node;
  const NodeId control_node = handle.control.node;

  fabric.apply(AddressedGate::h(handle.remote_cat));
  const int bit = fabric.measure(handle.remote_cat);
  fabric.reset(handle.remote_cat);
  fabric.release_comm(cat_node);

  fabric.send_classical({cat_node, control_node, kCatDisentangleTag, bit, 0});
  fabric.advance_clock(fabric.options().latency_ticks);
  const int received = fabric.receive(cat_node, control_node, kCatDisentangleTag).payload;
  if (received == 1 && !fabric.options().faults.drop_disentangle_z) {
    fabric.apply(AddressedGate::z(handle.control));
  }
  handle.state = CatState::Disentangled;
}

}  // namespace dqft
