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

#include "dqft/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <tuple>

#include "dqft/metrics.hpp"
#include "dqft/qft.hpp"
#include "dqft/telegate.hpp"

namespace dqft {

namespace {

Gate canonical(Gate g) {
  if (g.kind == GateKind::CP && g.operands[0] > g.operands[1]) std::swap(g.operands[0], g.operands[1]);
  if (g.arity() == 1) g.operands[1] = g.operands[0];
  return g;
}

bool gate_less(const Gate& a, const Gate& b) {
  return std::tie(a.kind, a.operands, a.angle) < std::tie(b.kind, b.operands, b.angle);
}

// The swap-free inverse QFT over n qubits, written out from its closed form.
std::vector<Gate> expected_inverse_qft(std::size_t n) {
  std::vector<Gate> gates;
  for (std::size_t hi = 0; hi < n; ++hi) {
    gates.push_back(Gate::h(hi));
    for (std::size_t lo = 0; lo < hi; ++lo) {
      const double angle = -2.0 * std::numbers::pi * std::pow(0.5, static_cast<double>(hi - lo + 1));
      gates.push_back(Gate::cp(lo, hi, angle));
    }
  }
  return gates;
}

// Every CP(lo, hi) must follow H(lo) and precede H(hi).
bool respects_order(const std::vector<Gate>& gates, std::size_t n) {
  std::vector<bool> done(n, false);
  for (const auto& raw : gates) {
    const Gate g = canonical(raw);
    if (g.kind == GateKind::H) {
      done[g.operands[0]] = true;
    } else if (g.kind == GateKind::CP) {
      if (!done[g.operands[0]] || done[g.operands[1]]) return false;
    }
  }
  return true;
}

std::string plan_label(const PartitionPlan& plan) {
  return "n=" + std::to_string(plan.n) + " k=" + std::to_string(plan.k);
}

}  // namespace

bool same_gate_multiset(std::vector<Gate> a, std::vector<Gate> b, double angle_tol) {
  if (a.size() != b.size()) return false;
  for (auto& g : a) g = canonical(g);
  for (auto& g : b) g = canonical(g);
  std::sort(a.begin(), a.end(), gate_less);
  std::sort(b.begin(), b.end(), gate_less);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].kind != b[i].kind || a[i].operands != b[i].operands) return false;
    if (std::abs(a[i].angle - b[i].angle) > angle_tol) return false;
  }
  return true;
}

CheckResult check_gate_multiset(const VerifyOptions& options) {
  CheckResult result{"gate-multiset oracle", true, {}};
  std::size_t plans = 0;
  for (std::size_t n = 1; n <= options.max_n; ++n) {
    for (std::size_t k = 1; k <= std::min<std::size_t>(8, n); ++k) {
      const auto plan = make_partition(n, k);
      const auto schedule = build_schedule(plan, {options.faults.naive_control_order});
      const auto gates = flatten(schedule);
      std::string why;
      if (schedule.slot_count() != 2 * k - 1) {
        why = "slot count " + std::to_string(schedule.slot_count());
      } else if (schedule.cat_sessions() != epr_budget(plan)) {
        why = "cat sessions " + std::to_string(schedule.cat_sessions());
      } else if (!same_gate_multiset(gates, expected_inverse_qft(n))) {
        why = "gate multiset differs";
      } else if (!respects_order(gates, n)) {
        why = "CP outside its H window";
      }
      if (!why.empty()) {
        result.passed = false;
        result.detail = plan_label(plan) + ": " + why;
        return result;
      }
      ++plans;
    }
  }
  result.detail = std::to_string(plans) + " plans";
  return result;
}

CheckResult check_telegate_branches(const VerifyOptions& options) {
  CheckResult result{"telegate branch exhaustion", true, {}};
  const auto plan = make_partition(3, 2);  // node 0: {q0}, node 1: {q1, q2}
  Rng rng(0x7e1e);
  std::size_t cases = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const auto input = random_state(3, rng);
    const double phi0 = 2.0 * std::numbers::pi * rng.uniform() - std::numbers::pi;
    const double phi1 = 2.0 * std::numbers::pi * rng.uniform() - std::numbers::pi;

    StateVector direct = input;
    direct.apply(Gate::cp(0, 1, phi0));
    direct.apply(Gate::cp(0, 2, phi1));

    for (int b_entangle = 0; b_entangle < 2; ++b_entangle) {
      for (int b_disentangle = 0; b_disentangle < 2; ++b_disentangle) {
        Fabric fabric(plan, rng.next_u64(), {1, true, options.faults});
        fabric.load_logical_state(input);
        fabric.force_outcomes({b_entangle, b_disentangle});
        auto handle = cat_entangle(fabric, QubitAddr::logical(0, 0), 1);
        apply_remote_controlled(fabric, handle, QubitAddr::logical(1, 0), phi0);
        apply_remote_controlled(fabric, handle, QubitAddr::logical(1, 1), phi1);
        cat_disentangle(fabric, handle);

        const auto& c = fabric.counters();
        const bool resources_ok =
            c.epr_created == 1 && c.classical_messages == 2 && c.midcircuit_measurements == 2;
        if (!resources_ok || !equal_up_to_global_phase(fabric.logical_state(), direct, 1e-10)) {
          result.passed = false;
          result.detail = "trial " + std::to_string(trial) + " branch (" +
                          std::to_string(b_entangle) + "," + std::to_string(b_disentangle) +
                          (resources_ok ? "): state differs from direct CP" : "): resource counts");
          return result;
        }
        ++cases;
      }
    }
  }
  result.detail = std::to_string(cases) + " branch cases";
  return result;
}

CheckResult check_distributed_equivalence(const VerifyOptions& options) {
  CheckResult result{"distributed == monolithic", true, {}};
  const double thetas[] = {0.0, 1.0 / 3.0, 2.0 / 3.0};
  std::size_t runs = 0;
  for (std::size_t n = 4; n <= options.max_n; n += 2) {
    for (std::size_t k : {1, 2, 4, 8}) {
      if (k > n) continue;
      const auto plan = make_partition(n, k);
      for (double t : thetas) {
        const PhaseAngle theta(t);
        const auto reference = run_monolithic_reference(n, theta, 1, 1);
        for (std::uint64_t seed = 1; seed <= options.seeds; ++seed) {
          RunOptions ro;
          ro.faults = options.faults;
          for (Mode mode : {Mode::Telegate, Mode::Semiclassical}) {
            const auto run = run_distributed(plan, theta, mode, 16, seed, ro);
            const double f = classical_fidelity(run.exact, reference.exact);
            bool ok = std::abs(1.0 - f) <= 1e-10;
            if (mode == Mode::Telegate) {
              ok = ok && equal_up_to_global_phase(*run.logical_state, *reference.logical_state, 1e-8);
            } else {
              ok = ok && max_abs_difference(run.exact, reference.exact) <= 1e-10 &&
                   run.metrics.epr_count == 0;
            }
            if (!ok) {
              std::ostringstream why;
              why << plan_label(plan) << " theta=" << t << " seed=" << seed
                  << " mode=" << to_string(mode) << " fidelity=" << std::setprecision(12) << f;
              result.passed = false;
              result.detail = why.str();
              return result;
            }
            ++runs;
          }
        }
      }
    }
  }
  result.detail = std::to_string(runs) + " runs";
  return result;
}

CheckResult check_epr_formula(const VerifyOptions& options) {
  CheckResult result{"EPR / message / slot budgets", true, {}};
  RunOptions ro;
  ro.faults = options.faults;
  std::size_t runs = 0;
  for (std::size_t n = 4; n <= options.max_n; n += 2) {
    for (std::size_t k : {1, 2, 4, 8}) {
      if (k > n) continue;
      const auto plan = make_partition(n, k);
      const auto m = run_distributed(plan, PhaseAngle(1.0 / 3.0), Mode::Telegate, 1, 7, ro).metrics;
      const auto budget = epr_budget(plan);
      if (m.epr_count != budget || m.classical_msg_count != 2 * budget ||
          m.midcircuit_measurements != 2 * budget || m.block_slots != 2 * k - 1) {
        result.passed = false;
        result.detail = plan_label(plan) + ": epr=" + std::to_string(m.epr_count) +
                        " expected " + std::to_string(budget);
        return result;
      }
      ++runs;
    }
  }
  if (epr_budget(make_partition(8, 4)) != 12 || naive_epr_budget(8) != 28) {
    result.passed = false;
    result.detail = "n=8 k=4 budget is not 12 (naive 28)";
    return result;
  }
  result.detail = std::to_string(runs) + " runs; n=8 k=4: 12 grouped vs 28 naive";
  return result;
}

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
  std::vector<CheckResult> checks;
  auto guarded = [&](CheckResult (*check)(const VerifyOptions&), const char* name) {
    try {
      checks.push_back(check(options));
    } catch (const std::exception& e) {
      checks.push_back({name, false, std::string("threw: ") + e.what()});
    }
  };
  guarded(check_gate_multiset, "gate-multiset oracle");
  guarded(check_telegate_branches, "telegate branch exhaustion");
  guarded(check_distributed_equivalence, "distributed == monolithic");
  guarded(check_epr_formula, "EPR / message / slot budgets");
  return checks;
}

int report_checks(const std::vector<CheckResult>& checks, std::ostream& out) {
  bool all = true;
  for (const auto& c : checks) {
    out << (c.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(32) << c.name << c.detail
        << '\n';
    all = all && c.passed;
  }
  return all ? 0 : 1;
}

}  // namespace dqft
