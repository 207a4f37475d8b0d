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

#include "dqft/fabric.hpp"

namespace dqft {

enum class CatState { Entangled, Disentangled };

/// A live teleported-control session: `remote_cat` on the target node
/// mirrors `control` in the computational basis until cat_disentangle.
struct CatHandle {
  QubitAddr control;
  QubitAddr remote_cat;
  std::uint64_t epr_id = 0;
  CatState state = CatState::Entangled;
};

inline constexpr const char* kCatEntangleTag = "cat-entangle";
inline constexpr const char* kCatDisentangleTag = "cat-disentangle";

/// Cat-entangler: CNOT(control -> local EPR half), measure it, send the bit
/// to the target node, X-correct the remote half on delivery.
///
/// Costs one EPR pair, one classical message and one mid-circuit
/// measurement. The sender's comm slot is reset and freed before returning;
/// the receiver's stays reserved by the handle.
CatHandle cat_entangle(Fabric& fabric, const QubitAddr& control, NodeId target_node);

/// CP(phi) between the remote cat and `target`, a gate local to the target
/// node.
void apply_remote_controlled(Fabric& fabric, const CatHandle& handle, const QubitAddr& target,
                             double phi);

/// Cat-disentangler: H on the cat, measure, send the bit back, Z-correct the
/// control on delivery, reset and free the cat slot. Costs one message and
/// one mid-circuit measurement.
void cat_disentangle(Fabric& fabric, CatHandle& handle);

}  // namespace dqft
