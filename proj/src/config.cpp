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

#include "dqft/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace dqft {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view value, std::size_t line) {
  value = trim(value);
  if (!value.empty() && value.front() == '[') {
    if (value.back() != ']') {
      throw ConfigError("line " + std::to_string(line) + ": unterminated list");
    }
    value = value.substr(1, value.size() - 2);
  }
  std::vector<std::string_view> items;
  while (true) {
    const auto comma = value.find(',');
    const auto item = trim(value.substr(0, comma));
    if (!item.empty()) items.push_back(item);
    if (comma == std::string_view::npos) break;
    value.remove_prefix(comma + 1);
  }
  return items;
}

std::uint64_t parse_uint(std::string_view s, std::size_t line) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError("line " + std::to_string(line) + ": expected a non-negative integer, got '" +
                      std::string(s) + "'");
  }
  return v;
}

double parse_double(std::string_view s, std::size_t line) {
  // std::from_chars for double is missing from older libstdc++; strtod on a
  // copied buffer is equivalent here.
  const std::string copy(s);
  char* end = nullptr;
  const double v = std::strtod(copy.c_str(), &end);
  if (copy.empty() || end != copy.c_str() + copy.size() || !std::isfinite(v)) {
    throw ConfigError("line " + std::to_string(line) + ": expected a number, got '" + copy + "'");
  }
  return v;
}

bool parse_bool(std::string_view s, std::size_t line) {
  if (s == "true" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "no" || s == "off") return false;
  throw ConfigError("line " + std::to_string(line) + ": expected true or false");
}

template <class T, class F>
std::vector<T> parse_nonempty(std::string_view value, std::size_t line, std::string_view key,
                              F&& parse_item) {
  std::vector<T> out;
  for (auto item : split_list(value, line)) out.push_back(parse_item(item, line));
  if (out.empty()) {
    throw ConfigError("line " + std::to_string(line) + ": '" + std::string(key) + "' is empty");
  }
  return out;
}

}  // namespace

double normalize_theta(double theta) {
  constexpr double kSnap = 5e-6;
  if (std::abs(theta - 1.0 / 3.0) < kSnap) return 1.0 / 3.0;
  if (std::abs(theta - 2.0 / 3.0) < kSnap) return 2.0 / 3.0;
  return theta;
}

SweepConfig parse_config(std::string_view text) {
  SweepConfig cfg;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key: value'");
    }
    const auto key = trim(line.substr(0, colon));
    const auto value = trim(line.substr(colon + 1));
    if (!seen.emplace(key).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + std::string(key) + "'");
    }

    if (key == "num_qubits") {
      cfg.num_qubits = parse_nonempty<std::size_t>(value, line_no, key, parse_uint);
    } else if (key == "nodes") {
      cfg.nodes = parse_nonempty<std::size_t>(value, line_no, key, parse_uint);
    } else if (key == "theta") {
      cfg.theta = parse_nonempty<double>(value, line_no, key, [](std::string_view s, std::size_t l) {
        return normalize_theta(parse_double(s, l));
      });
    } else if (key == "shots") {
      cfg.shots = parse_uint(value, line_no);
    } else if (key == "modes") {
      cfg.modes = parse_nonempty<Mode>(value, line_no, key, [](std::string_view s, std::size_t l) {
        try {
          return parse_mode(s);
        } catch (const std::invalid_argument& e) {
          throw ConfigError("line " + std::to_string(l) + ": " + e.what());
        }
      });
    } else if (key == "seed") {
      cfg.seed = parse_uint(value, line_no);
    } else if (key == "repeats") {
      cfg.repeats = parse_uint(value, line_no);
    } else if (key == "output_path") {
      if (value.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty output_path");
      cfg.output_path = std::string(value);
    } else if (key == "timing") {
      cfg.timing = parse_bool(value, line_no);
    } else if (key == "jobs") {
      cfg.jobs = parse_uint(value, line_no);
    } else if (key == "timeout_seconds") {
      cfg.timeout_seconds = parse_double(value, line_no);
    } else if (key == "max_state_qubits") {
      cfg.max_state_qubits = parse_uint(value, line_no);
    } else {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    }
  }

  if (cfg.shots == 0) throw ConfigError("shots must be >= 1");
  if (cfg.repeats == 0) throw ConfigError("repeats must be >= 1");
  if (cfg.jobs == 0) throw ConfigError("jobs must be >= 1");
  if (!(cfg.timeout_seconds > 0.0)) throw ConfigError("timeout_seconds must be positive");
  for (auto n : cfg.num_qubits) {
    if (n == 0) throw ConfigError("num_qubits entries must be >= 1");
  }
  for (auto k : cfg.nodes) {
    if (k == 0) throw ConfigError("nodes entries must be >= 1");
  }
  for (auto t : cfg.theta) {
    if (t < 0.0 || t >= 1.0) throw ConfigError("theta entries must lie in [0, 1)");
  }
  return cfg;
}

SweepConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::filesystem::path resolve_output_path(const SweepConfig& config) {
  if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) {
    return std::filesystem::path(dir) / config.output_path.filename();
  }
  return config.output_path;
}

}  // namespace dqft
