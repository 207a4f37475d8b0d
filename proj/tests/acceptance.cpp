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


// Acceptance suite: one line per criterion. Criterion 8 measures wall time
// and only warns on failure; every other criterion sets the exit code.

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "dqft/config.hpp"
#include "dqft/metrics.hpp"
#include "dqft/qft.hpp"
#include "dqft/sweep.hpp"
#include "dqft/telegate.hpp"

namespace fs = std::filesystem;
using namespace dqft;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  bool soft;
  std::function<Outcome()> run;
};

std::string fmt(double v, int precision = 6) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

// Output distribution of the ideal inverse QFT on the Fourier state of theta,
// from the dense DFT matrix: p(v) = |(1/N) sum_x e^{2 pi i (theta - v/N) x}|^2.
std::vector<double> dft_oracle(std::size_t n, double theta) {
  const std::size_t N = std::size_t{1} << n;
  std::vector<double> p(N);
  for (std::size_t v = 0; v < N; ++v) {
    std::complex<double> acc = 0.0;
    for (std::size_t x = 0; x < N; ++x) {
      acc += std::polar(1.0, 2.0 * kPi * (theta * double(x) - double((v * x) % N) / double(N)));
    }
    p[v] = std::norm(acc / double(N));
  }
  return p;
}

std::uint64_t formula_budget(const PartitionPlan& plan) {
  // Node i (1-based) sends one EPR per qubit to each of the k - i later nodes.
  std::uint64_t total = 0;
  for (std::size_t i = 1; i < plan.k; ++i) total += plan.sizes[i - 1] * (plan.k - i);
  return total;
}

std::vector<std::size_t> grid_nodes(std::size_t n) {
  std::vector<std::size_t> ks;
  for (std::size_t k : {1, 2, 4, 8}) {
    if (k <= n) ks.push_back(k);
  }
  return ks;
}

Outcome noiseless_equivalence() {
  const double thetas[] = {0.0, 1.0 / 3.0, 2.0 / 3.0};
  std::size_t runs = 0;
  double worst_state = 0.0;
  double worst_fidelity = 0.0;
  for (std::size_t n = 4; n <= 12; n += 2) {
    for (double t : thetas) {
      const PhaseAngle theta(t);
      const auto reference = run_monolithic_reference(n, theta, 1, 1);
      for (std::size_t k : grid_nodes(n)) {
        const auto plan = make_partition(n, k);
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
          for (Mode mode : {Mode::Telegate, Mode::Semiclassical}) {
            const auto run = run_distributed(plan, theta, mode, 100, seed);
            const double f = classical_fidelity(run.exact, reference.exact);
            worst_fidelity = std::max(worst_fidelity, std::abs(1.0 - f));
            bool ok = std::abs(1.0 - f) <= 1e-10;
            if (mode == Mode::Telegate) {
              ok = ok && equal_up_to_global_phase(*run.logical_state, *reference.logical_state, 1e-8);
              // Track the residual after aligning the global phase on the largest amplitude.
              const auto& a = *run.logical_state;
              const auto& b = *reference.logical_state;
              std::size_t pivot = 0;
              for (std::size_t i = 0; i < b.size(); ++i) {
                if (std::abs(b[i]) > std::abs(b[pivot])) pivot = i;
              }
              const auto c = a[pivot] / b[pivot];
              for (std::size_t i = 0; i < a.size(); ++i) {
                worst_state = std::max(worst_state, std::abs(a[i] - c / std::abs(c) * b[i]));
              }
            } else {
              ok = ok && max_abs_difference(run.exact, reference.exact) <= 1e-10;
            }
            if (!ok) {
              return {false, "n=" + std::to_string(n) + " k=" + std::to_string(k) + " theta=" + fmt(t) +
                                 " seed=" + std::to_string(seed) + " mode=" + to_string(mode) +
                                 " fidelity=" + fmt(f, 15)};
            }
            ++runs;
          }
        }
      }
    }
  }
  return {true, std::to_string(runs) + " runs; max |1-F| " + fmt(worst_fidelity, 3) +
                    ", max state residual " + fmt(worst_state, 3)};
}

Outcome epr_budget_criterion() {
  std::size_t points = 0;
  for (std::size_t n = 4; n <= 12; n += 2) {
    for (std::size_t k : grid_nodes(n)) {
      for (double t : {0.0, 1.0 / 3.0, 2.0 / 3.0}) {
        const auto plan = make_partition(n, k);
        const auto m = run_distributed(plan, PhaseAngle(t), Mode::Telegate, 1, 5).metrics;
        if (m.epr_count != formula_budget(plan) || m.epr_count != epr_budget(plan)) {
          return {false, "n=" + std::to_string(n) + " k=" + std::to_string(k) + ": counter " +
                             std::to_string(m.epr_count) + " vs formula " +
                             std::to_string(formula_budget(plan))};
        }
        ++points;
      }
    }
  }
  const auto plan = make_partition(8, 4);
  const auto m = run_distributed(plan, PhaseAngle(1.0 / 3.0), Mode::Telegate, 1, 5).metrics;
  const bool ok = m.epr_count == 12 && naive_epr_budget(8) == 28;
  return {ok, std::to_string(points) + " sweep points match; n=8 k=4: " + std::to_string(m.epr_count) +
                  " EPR (naive " + std::to_string(naive_epr_budget(8)) + ")"};
}

Outcome block_count() {
  std::string detail;
  for (std::size_t k : {1, 2, 4, 8}) {
    const auto plan = make_partition(8, k);
    const auto schedule = build_schedule(plan);
    const auto tele = run_distributed(plan, PhaseAngle(0.2), Mode::Telegate, 1, 1).metrics;
    if (schedule.slot_count() != 2 * k - 1 || tele.block_slots != 2 * k - 1) {
      return {false, "k=" + std::to_string(k) + ": schedule " + std::to_string(schedule.slot_count()) +
                         ", counter " + std::to_string(tele.block_slots)};
    }
    detail += (detail.empty() ? "" : ", ") + ("k=" + std::to_string(k) + ":" + std::to_string(tele.block_slots));
  }
  return {true, "slots " + detail};
}

Outcome phase_recovery() {
  std::size_t checked = 0;
  Rng rng(404);
  for (std::size_t n : {4, 6, 8}) {
    std::vector<std::uint64_t> js;
    const std::uint64_t N = std::uint64_t{1} << n;
    if (n == 4) {
      for (std::uint64_t j = 0; j < N; ++j) js.push_back(j);
    } else {
      js = {0, 1, N / 2, N - 1};
      for (int i = 0; i < 8; ++i) js.push_back(rng.next_u64() % N);
    }
    for (auto j : js) {
      const PhaseAngle theta(double(j) / double(N));
      for (std::size_t k : {1, 2, 4}) {
        const auto run = run_distributed(make_partition(n, k), theta, Mode::Telegate, 1, j + 1);
        const double amp = std::abs((*run.logical_state)[reverse_bits(j, n)]);
        const auto semi = run_distributed(make_partition(n, k), theta, Mode::Semiclassical, 4, j + 1);
        const bool ok = std::abs(amp - 1.0) <= 1e-10 && std::abs(run.exact.probability(j) - 1.0) <= 1e-10 &&
                        std::abs(semi.exact.probability(j) - 1.0) <= 1e-10 && semi.counts.at(j) == 4;
        if (!ok) {
          return {false, "n=" + std::to_string(n) + " k=" + std::to_string(k) + " j=" + std::to_string(j) +
                             ": |amp|=" + fmt(amp, 15)};
        }
        ++checked;
      }
    }
  }
  return {true, std::to_string(checked) + " (n, k, j) cases, exhaustive at n=4"};
}

Outcome nonrepresentable_phase() {
  const auto oracle = dft_oracle(4, 1.0 / 3.0);
  const auto best = static_cast<std::uint64_t>(std::max_element(oracle.begin(), oracle.end()) - oracle.begin());
  double worst = 0.0;
  for (std::size_t k : {1, 2, 4}) {
    for (Mode mode : {Mode::Telegate, Mode::Semiclassical}) {
      const auto run = run_distributed(make_partition(4, k), PhaseAngle(1.0 / 3.0), mode, 100, 17);
      for (std::uint64_t v = 0; v < 16; ++v) worst = std::max(worst, std::abs(run.exact.probability(v) - oracle[v]));
      if (run.exact.modal() != best) return {false, "modal " + std::to_string(run.exact.modal())};
    }
  }
  // 5/16 is the closest 4-bit fraction to 1/3.
  const bool ok = worst <= 1e-10 && best == 5 && std::abs(oracle[5] - 0.6848953893117379) < 1e-12;
  return {ok, "max deviation " + fmt(worst, 3) + "; modal " + std::to_string(best) + " with p=" +
                  fmt(oracle[best], 12)};
}

Outcome branch_exhaustion() {
  const auto plan = make_partition(3, 2);  // node 0: q0 ; node 1: q1 q2
  Rng rng(6006);
  std::size_t cases = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto input = random_state(3, rng);
    const double phi1 = 2.0 * kPi * rng.uniform();
    const double phi2 = 2.0 * kPi * rng.uniform();
    StateVector direct = input;
    direct.apply(Gate::cp(0, 1, phi1));
    direct.apply(Gate::cp(0, 2, phi2));
    for (int b = 0; b < 4; ++b) {
      Fabric fabric(plan, rng.next_u64());
      fabric.load_logical_state(input);
      fabric.force_outcomes({b >> 1, b & 1});
      auto handle = cat_entangle(fabric, QubitAddr::logical(0, 0), 1);
      apply_remote_controlled(fabric, handle, QubitAddr::logical(1, 0), phi1);
      apply_remote_controlled(fabric, handle, QubitAddr::logical(1, 1), phi2);
      cat_disentangle(fabric, handle);
      if (!equal_up_to_global_phase(fabric.logical_state(), direct, 1e-10)) {
        return {false, "trial " + std::to_string(trial) + " branch " + std::to_string(b)};
      }
      ++cases;
    }
  }
  return {true, std::to_string(cases) + " cases (50 random states x 4 branches)"};
}

Outcome resource_linearity() {
  const std::size_t n = 12;
  const double naive = double(naive_epr_budget(n));
  std::string detail;
  double previous_savings = 0.0;
  for (std::size_t k : {2, 3, 4, 6}) {
    const auto plan = make_partition(n, k);
    const auto m = run_distributed(plan, PhaseAngle(1.0 / 3.0), Mode::Telegate, 1, 3).metrics;
    // Equal partitions: m * C(k, 2) = n (k - 1) / 2, linear in k.
    const std::uint64_t expected = n * (k - 1) / 2;
    if (m.epr_count != expected || m.epr_count != formula_budget(plan) ||
        m.classical_msg_count != 2 * expected) {
      return {false, "k=" + std::to_string(k) + ": " + std::to_string(m.epr_count) + " EPR, expected " +
                         std::to_string(expected)};
    }
    const double ratio = double(m.epr_count) / naive;
    if (std::abs(ratio - double(k - 1) / double(n - 1)) > 1e-15) return {false, "ratio " + fmt(ratio)};
    const double savings = naive / double(m.epr_count);
    if (previous_savings != 0.0 && !(savings < previous_savings)) {
      return {false, "naive/grouped did not decrease at k=" + std::to_string(k)};
    }
    previous_savings = savings;
    detail += (detail.empty() ? "" : ", ") + ("k=" + std::to_string(k) + ":" + std::to_string(m.epr_count) +
                                              "/" + std::to_string(naive_epr_budget(n)));
  }
  return {true, "grouped/naive " + detail + "; ratio (k-1)/(n-1), naive/grouped decreasing"};
}

Outcome time_trend() {
  std::vector<double> medians;
  std::string detail;
  for (std::size_t n : {8, 10, 12, 14}) {
    std::vector<double> times;
    for (std::uint64_t r = 0; r < 3; ++r) {
      times.push_back(
          run_distributed(make_partition(n, 2), PhaseAngle(1.0 / 3.0), Mode::Telegate, 100, r + 1)
              .metrics.wall_time_seconds);
    }
    std::sort(times.begin(), times.end());
    medians.push_back(times[1]);
    detail += (detail.empty() ? "" : ", ") + ("n=" + std::to_string(n) + ":" + fmt(times[1], 3) + "s");
  }
  bool increasing = true;
  for (std::size_t i = 1; i < medians.size(); ++i) increasing = increasing && medians[i] > medians[i - 1];
  return {increasing, "median wall time " + detail};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / ("dqft_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  ::unsetenv(kOutputDirEnv);

  const std::string text =
      "num_qubits: [4, 6, 8]\n"
      "nodes: [1, 2, 4, 8]\n"
      "theta: [0.0, 0.333333, 0.666667]\n"
      "modes: [telegate, semiclassical]\n"
      "shots: 100\n"
      "seed: 2024\n"
      "repeats: 2\n"
      "timing: false\n";
  std::ostringstream log;
  auto a = parse_config(text);
  a.output_path = dir / "a.csv";
  a.jobs = 4;
  auto b = parse_config(text);
  b.output_path = dir / "b.csv";
  b.jobs = 1;
  const auto oa = run_sweep(a, log);
  const auto ob = run_sweep(b, log);
  const auto ca = read_file(a.output_path);
  const auto cb = read_file(b.output_path);
  fs::remove_all(dir);
  const bool ok = oa.exit_code == 0 && ob.exit_code == 0 && oa.rows_written > 0 && ca == cb;
  return {ok, std::to_string(oa.rows_written) + " rows, " + std::to_string(ca.size()) + " bytes, " +
                  (ca == cb ? "identical" : "DIFFERENT")};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "noiseless equivalence", false, noiseless_equivalence},
      {2, "EPR budget", false, epr_budget_criterion},
      {3, "block count", false, block_count},
      {4, "deterministic phase recovery", false, phase_recovery},
      {5, "non-representable phase distribution", false, nonrepresentable_phase},
      {6, "telegate branch exhaustion", false, branch_exhaustion},
      {7, "resource linearity in k", false, resource_linearity},
      {8, "exponential time trend", true, time_trend},
      {9, "CSV determinism", false, determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const char* tag = o.passed ? "PASS" : (c.soft ? "WARN" : "FAIL");
    std::cout << tag << "  criterion " << c.id << ": " << c.title << " -- " << o.detail << std::endl;
    if (!o.passed && !c.soft) ++failures;
  }
  std::cout << (failures ? "acceptance FAILED" : "acceptance passed") << std::endl;
  return failures ? 1 : 0;
}
