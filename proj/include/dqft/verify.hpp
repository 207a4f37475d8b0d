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
#include <iosfwd>
#include <string>
#include <vector>

#include "dqft/fabric.hpp"
#include "dqft/statevector.hpp"

namespace dqft {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  FaultInjection faults{};
  std::size_t max_n = 12;
  std::size_t seeds = 3;
};

/// Flattened schedule == swap-free inverse QFT gate multiset (built here from
/// the closed-form angle pattern), every CP ordered after the H on its lower
/// qubit and before the H on its upper one, and 2k - 1 slots, for all plans
/// with n <= max_n, k <= 8.
CheckResult check_gate_multiset(const VerifyOptions& options);

/// One cat session on a random 3-logical-qubit state, every combination of
/// the two internal measurement outcomes, against direct CP gates.
CheckResult check_telegate_branches(const VerifyOptions& options);

/// Distributed (both modes) vs monolithic reference over the benchmark grid
/// up to max_n.
CheckResult check_distributed_equivalence(const VerifyOptions& options);

/// Runtime EPR, message and slot counters vs the closed-form budgets.
CheckResult check_epr_formula(const VerifyOptions& options);

std::vector<CheckResult> run_verification(const VerifyOptions& options = {});

/// Prints a pass/fail table; returns 0 if every check passed, else 1.
int report_checks(const std::vector<CheckResult>& checks, std::ostream& out);

/// Canonical comparison of two gate lists as multisets. CP is symmetric, so
/// operands are ordered before comparing; angles match within `angle_tol`.
bool same_gate_multiset(std::vector<Gate> a, std::vector<Gate> b, double angle_tol = 1e-12);

}  // namespace dqft
