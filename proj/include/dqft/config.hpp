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
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dqft/qft.hpp"

namespace dqft {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameter sweep description. Defaults reproduce the benchmark table:
/// n = 4..20 step 2, k in {1, 2, 4, 8}, theta in {0, 1/3, 2/3}, 100 shots.
struct SweepConfig {
  std::vector<std::size_t> num_qubits{4, 6, 8, 10, 12, 14, 16, 18, 20};
  std::vector<std::size_t> nodes{1, 2, 4, 8};
  std::vector<double> theta{0.0, 1.0 / 3.0, 2.0 / 3.0};
  std::uint64_t shots = 100;
  std::vector<Mode> modes{Mode::Telegate};
  std::uint64_t seed = 1;
  std::uint64_t repeats = 1;
  std::filesystem::path output_path = "results.csv";

  // Optional keys beyond the core set.
  bool timing = true;              // false writes wall_time_seconds as 0
  std::size_t jobs = 1;            // concurrent runs
  double timeout_seconds = 600.0;  // per run
  std::size_t max_state_qubits = 26;
};

/// Parses the key-value format:
///
///   # comment
///   num_qubits: [4, 6, 8]
///   theta: [0.0, 0.333333, 0.666667]
///   modes: [telegate, semiclassical]
///   shots: 100
///
/// A scalar is accepted where a list is expected. Keys not given keep their
/// defaults; unknown or repeated keys are errors.
SweepConfig parse_config(std::string_view text);
SweepConfig load_config(const std::filesystem::path& path);

/// Snaps six-decimal renderings of 1/3 and 2/3 onto the exact rationals.
double normalize_theta(double theta);

/// Directory override for sweep output, read from DQFT_OUTPUT_DIR.
inline constexpr const char* kOutputDirEnv = "DQFT_OUTPUT_DIR";

/// config.output_path, relocated under $DQFT_OUTPUT_DIR when that is set.
std::filesystem::path resolve_output_path(const SweepConfig& config);

}  // namespace dqft
