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

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "dqft/config.hpp"
#include "dqft/qft.hpp"

namespace dqft {

/// One CSV row per completed run. Column order is the field order.
struct ResultRow {
  std::size_t n = 0;
  std::size_t k = 0;
  double theta = 0.0;
  Mode mode = Mode::Telegate;
  std::uint64_t seed = 0;
  std::uint64_t repeat = 0;
  double wall_time_seconds = 0.0;
  std::uint64_t peak_state_bytes = 0;
  std::uint64_t epr_count = 0;
  std::uint64_t classical_msg_count = 0;
  std::uint64_t block_slots = 0;
  double fidelity_exact = 0.0;
  double fidelity_sampled = 0.0;
  std::uint64_t modal_outcome = 0;
};

inline constexpr std::array<std::string_view, 14> kCsvColumns{
    "n",           "k",          "theta",       "mode",
    "seed",        "repeat",     "wall_time_seconds",
    "peak_state_bytes", "epr_count", "classical_msg_count",
    "block_slots", "fidelity_exact", "fidelity_sampled", "modal_outcome"};

/// Noiseless runs must reach fidelity_exact >= 1 - kExactFidelityTolerance.
inline constexpr double kExactFidelityTolerance = 1e-9;

std::string csv_header();
/// One CSV line without the trailing newline; reals use 9 significant digits.
std::string format_row(const ResultRow& row);
/// Inverse of format_row. Throws std::invalid_argument on malformed input.
ResultRow parse_row(std::string_view line);

/// A single (n, k, theta, mode, repeat) sweep point with its derived seed.
struct RunPoint {
  std::size_t n = 0;
  std::size_t k = 0;
  double theta = 0.0;
  Mode mode = Mode::Telegate;
  std::uint64_t repeat = 0;
  std::uint64_t seed = 0;
};

std::uint64_t derive_seed(std::uint64_t base, std::size_t n, std::size_t k, double theta, Mode mode,
                          std::uint64_t repeat);

/// Expands a config in (n, k, theta, mode, repeat) order. Pairs with k > n,
/// and points whose statevector would exceed max_state_qubits, are skipped
/// with a notice on `log`.
std::vector<RunPoint> expand_points(const SweepConfig& config, std::ostream& log);

/// Executes one point and scores it against the monolithic reference.
ResultRow execute_point(const RunPoint& point, std::uint64_t shots, const RunOptions& options = {},
                        bool timing = true);

/// Human-readable rendering of a row.
std::string format_table(const ResultRow& row);

struct SweepOutcome {
  std::size_t rows_written = 0;
  std::size_t rows_skipped = 0;  // already present in the output file
  std::size_t fidelity_failures = 0;
  std::size_t timeouts = 0;  // logged, not counted as failures
  std::size_t errors = 0;    // runs that threw for any other reason
  int exit_code = 0;
};

/// Runs every point not already present in the output CSV, appending one
/// flushed line per run in point order, then prints a per-(n, k) summary.
SweepOutcome run_sweep(const SweepConfig& config, std::ostream& log);

}  // namespace dqft
