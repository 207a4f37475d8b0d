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

#include "dqft/sweep.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

namespace dqft {

namespace {

std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

using RowKey = std::tuple<std::size_t, std::size_t, std::string, std::string, std::uint64_t,
                          std::uint64_t>;

RowKey key_of(const ResultRow& r) {
  return {r.n, r.k, fmt_real(r.theta), to_string(r.mode), r.seed, r.repeat};
}

RowKey key_of(const RunPoint& p) {
  return {p.n, p.k, fmt_real(p.theta), to_string(p.mode), p.seed, p.repeat};
}

std::uint64_t to_u64(const std::string& s) {
  std::size_t used = 0;
  const auto v = std::stoull(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad integer '" + s + "'");
  return v;
}

double to_real(const std::string& s) {
  std::size_t used = 0;
  const auto v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

}  // namespace

std::string csv_header() {
  std::string out;
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
    if (i) out += ',';
    out += kCsvColumns[i];
  }
  return out;
}

std::string format_row(const ResultRow& r) {
  std::ostringstream out;
  out << r.n << ',' << r.k << ',' << fmt_real(r.theta) << ',' << to_string(r.mode) << ','
      << r.seed << ',' << r.repeat << ',' << fmt_real(r.wall_time_seconds) << ','
      << r.peak_state_bytes << ',' << r.epr_count << ',' << r.classical_msg_count << ','
      << r.block_slots << ',' << fmt_real(r.fidelity_exact) << ',' << fmt_real(r.fidelity_sampled)
      << ',' << r.modal_outcome;
  return out.str();
}

ResultRow parse_row(std::string_view line) {
  std::vector<std::string> cells;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else if (c != '\r') {
      cell += c;
    }
  }
  cells.push_back(std::move(cell));
  if (cells.size() != kCsvColumns.size()) {
    throw std::invalid_argument("CSV row has " + std::to_string(cells.size()) + " cells, expected " +
                                std::to_string(kCsvColumns.size()));
  }
  ResultRow r;
  r.n = to_u64(cells[0]);
  r.k = to_u64(cells[1]);
  r.theta = to_real(cells[2]);
  r.mode = parse_mode(cells[3]);
  r.seed = to_u64(cells[4]);
  r.repeat = to_u64(cells[5]);
  r.wall_time_seconds = to_real(cells[6]);
  r.peak_state_bytes = to_u64(cells[7]);
  r.epr_count = to_u64(cells[8]);
  r.classical_msg_count = to_u64(cells[9]);
  r.block_slots = to_u64(cells[10]);
  r.fidelity_exact = to_real(cells[11]);
  r.fidelity_sampled = to_real(cells[12]);
  r.modal_outcome = to_u64(cells[13]);
  return r;
}

std::uint64_t derive_seed(std::uint64_t base, std::size_t n, std::size_t k, double theta, Mode mode,
                          std::uint64_t repeat) {
  std::uint64_t h = mix_seed(base);
  h = mix_seed(h ^ n);
  h = mix_seed(h ^ k);
  h = mix_seed(h ^ std::bit_cast<std::uint64_t>(theta));
  h = mix_seed(h ^ static_cast<std::uint64_t>(mode));
  h = mix_seed(h ^ repeat);
  // Keep seeds in the range every CSV reader handles as an exact integer.
  return h >> 11;
}

std::vector<RunPoint> expand_points(const SweepConfig& config, std::ostream& log) {
  std::vector<RunPoint> points;
  for (auto n : config.num_qubits) {
    for (auto k : config.nodes) {
      if (k > n) {
        log << "notice: skipping n=" << n << " k=" << k << " (k exceeds n)\n";
        continue;
      }
      for (auto theta : config.theta) {
        for (auto mode : config.modes) {
          const std::size_t qubits = mode == Mode::Telegate ? n + k : n;
          if (qubits > config.max_state_qubits) {
            log << "notice: skipping n=" << n << " k=" << k << " mode=" << to_string(mode)
                << " (" << qubits << " qubits exceeds max_state_qubits=" << config.max_state_qubits
                << ")\n";
            continue;
          }
          for (std::uint64_t r = 0; r < config.repeats; ++r) {
            points.push_back({n, k, theta, mode, r, derive_seed(config.seed, n, k, theta, mode, r)});
          }
        }
      }
    }
  }
  return points;
}

ResultRow execute_point(const RunPoint& point, std::uint64_t shots, const RunOptions& options,
                        bool timing) {
  const auto plan = make_partition(point.n, point.k);
  const PhaseAngle theta(point.theta);
  const auto run = run_distributed(plan, theta, point.mode, shots, point.seed, options);
  const auto reference = run_monolithic_reference(point.n, theta, shots, point.seed);

  ResultRow row;
  row.n = point.n;
  row.k = point.k;
  row.theta = point.theta;
  row.mode = point.mode;
  row.seed = point.seed;
  row.repeat = point.repeat;
  row.wall_time_seconds = timing ? run.metrics.wall_time_seconds : 0.0;
  row.peak_state_bytes = run.metrics.peak_state_bytes;
  row.epr_count = run.metrics.epr_count;
  row.classical_msg_count = run.metrics.classical_msg_count;
  row.block_slots = run.metrics.block_slots;
  row.fidelity_exact = classical_fidelity(run.exact, reference.exact);
  const auto sampled = Distribution::from_counts(run.counts);
  row.fidelity_sampled = classical_fidelity(sampled, reference.exact);
  row.modal_outcome = sampled.modal();
  return row;
}

std::string format_table(const ResultRow& r) {
  std::ostringstream out;
  const std::vector<std::string> values{
      std::to_string(r.n),          std::to_string(r.k),
      fmt_real(r.theta),            to_string(r.mode),
      std::to_string(r.seed),       std::to_string(r.repeat),
      fmt_real(r.wall_time_seconds), std::to_string(r.peak_state_bytes),
      std::to_string(r.epr_count),  std::to_string(r.classical_msg_count),
      std::to_string(r.block_slots), fmt_real(r.fidelity_exact),
      fmt_real(r.fidelity_sampled), std::to_string(r.modal_outcome)};
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << std::left << std::setw(22) << kCsvColumns[i] << values[i] << '\n';
  }
  return out.str();
}

namespace {

struct Slot {
  std::optional<ResultRow> row;
  std::string error;
  bool timed_out = false;
  bool done = false;
};

void print_summary(const std::vector<ResultRow>& rows, std::ostream& log) {
  struct Acc {
    double log_sum = 0.0;
    std::size_t timed = 0;
    double min_fidelity = std::numeric_limits<double>::infinity();
    std::size_t runs = 0;
  };
  std::map<std::pair<std::size_t, std::size_t>, Acc> acc;
  for (const auto& r : rows) {
    auto& a = acc[{r.n, r.k}];
    if (r.wall_time_seconds > 0.0) {
      a.log_sum += std::log(r.wall_time_seconds);
      ++a.timed;
    }
    a.min_fidelity = std::min(a.min_fidelity, r.fidelity_exact);
    ++a.runs;
  }
  log << "summary (per n, k):\n";
  log << std::left << std::setw(6) << "n" << std::setw(6) << "k" << std::setw(8) << "runs"
      << std::setw(20) << "geomean_wall_s" << "min_fidelity_exact\n";
  for (const auto& [nk, a] : acc) {
    log << std::left << std::setw(6) << nk.first << std::setw(6) << nk.second << std::setw(8)
        << a.runs << std::setw(20)
        << (a.timed ? fmt_real(std::exp(a.log_sum / static_cast<double>(a.timed))) : "n/a")
        << fmt_real(a.min_fidelity) << '\n';
  }
}

}  // namespace

SweepOutcome run_sweep(const SweepConfig& config, std::ostream& log) {
  SweepOutcome outcome;
  const auto path = resolve_output_path(config);

  std::vector<ResultRow> all_rows;
  std::set<RowKey> existing;
  bool need_header = true;
  {
    std::ifstream in(path);
    if (in) {
      std::string line;
      if (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line != csv_header()) {
          throw ConfigError("existing output " + path.string() + " has an unexpected header");
        }
        need_header = false;
        while (std::getline(in, line)) {
          if (line.empty()) continue;
          auto row = parse_row(line);
          existing.insert(key_of(row));
          all_rows.push_back(row);
        }
      }
    }
  }

  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) throw ConfigError("cannot write output file " + path.string());
  if (need_header) out << csv_header() << '\n' << std::flush;

  std::vector<RunPoint> todo;
  for (const auto& p : expand_points(config, log)) {
    if (existing.count(key_of(p))) {
      ++outcome.rows_skipped;
    } else {
      todo.push_back(p);
    }
  }

  std::vector<Slot> slots(todo.size());
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= todo.size()) return;
      Slot result;
      try {
        RunOptions options;
        options.deadline = std::chrono::steady_clock::now() +
                           std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                               std::chrono::duration<double>(config.timeout_seconds));
        result.row = execute_point(todo[i], config.shots, options, config.timing);
      } catch (const RunTimeout& e) {
        result.timed_out = true;
        result.error = e.what();
      } catch (const std::exception& e) {
        result.error = e.what();
      }
      result.done = true;
      {
        std::lock_guard lock(mu);
        slots[i] = std::move(result);
      }
      cv.notify_all();
    }
  };

  std::vector<std::jthread> pool;
  const std::size_t threads = std::min<std::size_t>(config.jobs, std::max<std::size_t>(todo.size(), 1));
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);

  // Single writer: rows land in point order regardless of completion order.
  for (std::size_t i = 0; i < todo.size(); ++i) {
    Slot s;
    {
      std::unique_lock lock(mu);
      cv.wait(lock, [&] { return slots[i].done; });
      s = std::move(slots[i]);
    }
    const auto& p = todo[i];
    if (!s.row) {
      log << (s.timed_out ? "warning: timeout" : "error") << " at n=" << p.n << " k=" << p.k
          << " theta=" << fmt_real(p.theta) << " mode=" << to_string(p.mode)
          << " repeat=" << p.repeat << ": " << s.error << '\n';
      ++(s.timed_out ? outcome.timeouts : outcome.errors);
      continue;
    }
    out << format_row(*s.row) << '\n' << std::flush;
    ++outcome.rows_written;
    if (s.row->fidelity_exact < 1.0 - kExactFidelityTolerance) {
      ++outcome.fidelity_failures;
      log << "FAIL: fidelity_exact=" << fmt_real(s.row->fidelity_exact) << " at n=" << p.n
          << " k=" << p.k << " theta=" << fmt_real(p.theta) << " mode=" << to_string(p.mode) << '\n';
    }
    all_rows.push_back(*s.row);
  }
  pool.clear();

  log << "wrote " << outcome.rows_written << " rows to " << path.string() << " ("
      << outcome.rows_skipped << " already present)\n";
  print_summary(all_rows, log);
  outcome.exit_code = (outcome.fidelity_failures || outcome.errors) ? 1 : 0;
  return outcome;
}

}  // namespace dqft
