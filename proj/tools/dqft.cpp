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

// dqft: distributed inverse-QFT emulator.
//
//   dqft run --n 8 --k 4 --theta 0.333333 [--mode telegate] [--shots 100] [--seed 1]
//   dqft sweep configs/table1.cfg
//   dqft verify

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dqft/config.hpp"
#include "dqft/sweep.hpp"
#include "dqft/verify.hpp"

namespace {

constexpr int kUsageError = 2;

int usage_error(const CLI::App& app, const std::string& message) {
  std::cerr << "error: " << message << "\n\n" << app.help();
  return kUsageError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed inverse-QFT emulator: telegate and semiclassical execution, "
               "verification and benchmark sweeps"};
  app.require_subcommand(1);

  std::size_t n = 0;
  std::size_t k = 1;
  double theta = 0.0;
  std::string mode = "telegate";
  std::uint64_t shots = 100;
  std::uint64_t seed = 1;
  auto* run = app.add_subcommand("run", "Execute one distributed run and print its result row");
  run->add_option("--n", n, "Logical qubits")->required()->check(CLI::PositiveNumber);
  run->add_option("--k", k, "Nodes")->capture_default_str()->check(CLI::PositiveNumber);
  run->add_option("--theta", theta, "Encoded phase in [0, 1)")->capture_default_str();
  run->add_option("--mode", mode, "telegate or semiclassical")
      ->capture_default_str()
      ->check(CLI::IsMember({"telegate", "semiclassical"}));
  run->add_option("--shots", shots, "Circuit repetitions")->capture_default_str()->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "RNG seed")->capture_default_str();

  std::string config_path;
  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep from a config file into CSV");
  sweep->add_option("config", config_path, "Sweep configuration file")->required();

  auto* verify = app.add_subcommand("verify", "Run the structural and equivalence checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (run->parsed()) {
      if (k > n) return usage_error(*run, "k exceeds n (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");
      if (!(theta >= 0.0 && theta < 1.0)) return usage_error(*run, "theta must lie in [0, 1)");
      const dqft::RunPoint point{n, k, dqft::normalize_theta(theta), dqft::parse_mode(mode), 0, seed};
      const auto row = dqft::execute_point(point, shots);
      std::cout << dqft::format_table(row) << '\n'
                << dqft::csv_header() << '\n'
                << dqft::format_row(row) << '\n';
      return row.fidelity_exact < 1.0 - dqft::kExactFidelityTolerance ? 1 : 0;
    }
    if (sweep->parsed()) {
      const auto config = dqft::load_config(config_path);
      return dqft::run_sweep(config, std::cerr).exit_code;
    }
    if (verify->parsed()) {
      return dqft::report_checks(dqft::run_verification(), std::cout);
    }
  } catch (const dqft::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
