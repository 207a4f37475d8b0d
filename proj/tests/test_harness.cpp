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


#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "doctest.h"
#include "dqft/config.hpp"
#include "dqft/sweep.hpp"
#include "dqft/verify.hpp"

namespace fs = std::filesystem;
using dqft::Mode;
using dqft::SweepConfig;

namespace {

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("dqft_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

SweepConfig small_config(const fs::path& out) {
  auto cfg = dqft::parse_config(
      "num_qubits: [4, 6]\n"
      "nodes: [1, 2, 4, 8]\n"
      "theta: [0.0, 0.333333, 0.666667]\n"
      "modes: [telegate, semiclassical]\n"
      "shots: 50\n"
      "seed: 7\n"
      "timing: false\n");
  cfg.output_path = out;
  return cfg;
}

struct NoOutputDirOverride {
  NoOutputDirOverride() { ::unsetenv(dqft::kOutputDirEnv); }
};

}  // namespace

TEST_CASE("config parsing") {
  const auto cfg = dqft::parse_config(
      "# benchmark table, small\n"
      "num_qubits: [4, 6, 8]   # trailing comment\n"
      "nodes: [1, 2]\n"
      "theta: [0.0, 0.333333, 0.666667]\n"
      "shots: 64\n"
      "modes: [semiclassical, telegate]\n"
      "seed: 99\n"
      "repeats: 3\n"
      "output_path: out/results.csv\n"
      "\n"
      "jobs: 4\n"
      "timing: false\n"
      "timeout_seconds: 12.5\n"
      "max_state_qubits: 20\n");
  CHECK(cfg.num_qubits == std::vector<std::size_t>{4, 6, 8});
  CHECK(cfg.nodes == std::vector<std::size_t>{1, 2});
  CHECK(cfg.theta == std::vector<double>{0.0, 1.0 / 3.0, 2.0 / 3.0});
  CHECK(cfg.shots == 64);
  CHECK(cfg.modes == std::vector<Mode>{Mode::Semiclassical, Mode::Telegate});
  CHECK(cfg.seed == 99);
  CHECK(cfg.repeats == 3);
  CHECK(cfg.output_path == fs::path("out/results.csv"));
  CHECK(cfg.jobs == 4);
  CHECK_FALSE(cfg.timing);
  CHECK(cfg.timeout_seconds == 12.5);
  CHECK(cfg.max_state_qubits == 20);
}

TEST_CASE("config defaults reproduce the benchmark table") {
  const auto cfg = dqft::parse_config("");
  CHECK(cfg.num_qubits == std::vector<std::size_t>{4, 6, 8, 10, 12, 14, 16, 18, 20});
  CHECK(cfg.nodes == std::vector<std::size_t>{1, 2, 4, 8});
  CHECK(cfg.theta == std::vector<double>{0.0, 1.0 / 3.0, 2.0 / 3.0});
  CHECK(cfg.shots == 100);
  CHECK(cfg.modes == std::vector<Mode>{Mode::Telegate});
  CHECK(cfg.timeout_seconds == 600.0);
}

TEST_CASE("scalars are accepted where lists are expected") {
  const auto cfg = dqft::parse_config("num_qubits: 8\nmodes: semiclassical\n");
  CHECK(cfg.num_qubits == std::vector<std::size_t>{8});
  CHECK(cfg.modes == std::vector<Mode>{Mode::Semiclassical});
}

TEST_CASE("config errors") {
  const char* bad[] = {
      "colour: blue\n",
      "shots: 10\nshots: 20\n",
      "shots: ten\n",
      "shots: -1\n",
      "shots: 0\n",
      "repeats: 0\n",
      "num_qubits: []\n",
      "num_qubits: [4, 6\n",
      "num_qubits: [0]\n",
      "nodes: [0, 1]\n",
      "modes: [telegate, teleport]\n",
      "theta: [1.0]\n",
      "theta: [abc]\n",
      "just a line\n",
      "timing: maybe\n",
      "timeout_seconds: 0\n",
      "output_path:\n",
  };
  for (const char* text : bad) {
    INFO(text);
    CHECK_THROWS_AS(dqft::parse_config(text), dqft::ConfigError);
  }
  CHECK_THROWS_AS(dqft::load_config("/nonexistent/dqft.cfg"), dqft::ConfigError);
}

TEST_CASE("theta normalisation") {
  CHECK(dqft::normalize_theta(0.333333) == 1.0 / 3.0);
  CHECK(dqft::normalize_theta(0.666667) == 2.0 / 3.0);
  CHECK(dqft::normalize_theta(0.33) == 0.33);
  CHECK(dqft::normalize_theta(0.25) == 0.25);
}

TEST_CASE("output directory override") {
  SweepConfig cfg;
  cfg.output_path = "nested/res.csv";
  ::unsetenv(dqft::kOutputDirEnv);
  CHECK(dqft::resolve_output_path(cfg) == fs::path("nested/res.csv"));
  ::setenv(dqft::kOutputDirEnv, "/tmp/elsewhere", 1);
  CHECK(dqft::resolve_output_path(cfg) == fs::path("/tmp/elsewhere/res.csv"));
  ::unsetenv(dqft::kOutputDirEnv);
}

TEST_CASE("point expansion") {
  std::ostringstream log;
  auto cfg = dqft::parse_config("num_qubits: [4, 6, 8, 10, 12]\n");
  const auto points = dqft::expand_points(cfg, log);
  // n in {4, 6}: k in {1, 2, 4}; n in {8, 10, 12}: k in {1, 2, 4, 8}; three thetas each.
  CHECK(points.size() == (2 * 3 + 3 * 4) * 3);
  CHECK(log.str().find("n=4 k=8") != std::string::npos);
  CHECK(log.str().find("n=6 k=8") != std::string::npos);
  for (const auto& p : points) CHECK(p.k <= p.n);

  cfg.modes = {Mode::Telegate, Mode::Semiclassical};
  cfg.repeats = 2;
  CHECK(dqft::expand_points(cfg, log).size() == (2 * 3 + 3 * 4) * 3 * 2 * 2);

  std::ostringstream big;
  cfg = dqft::parse_config("num_qubits: [20]\nnodes: [8]\nmodes: [telegate, semiclassical]\n");
  const auto capped = dqft::expand_points(cfg, big);
  CHECK(capped.size() == 3);  // 28-qubit telegate state skipped, semiclassical kept
  for (const auto& p : capped) CHECK(p.mode == Mode::Semiclassical);
  CHECK(big.str().find("max_state_qubits") != std::string::npos);
}

TEST_CASE("derived seeds are deterministic and distinct") {
  const auto a = dqft::derive_seed(1, 8, 4, 1.0 / 3.0, Mode::Telegate, 0);
  CHECK(a == dqft::derive_seed(1, 8, 4, 1.0 / 3.0, Mode::Telegate, 0));
  CHECK(a != dqft::derive_seed(2, 8, 4, 1.0 / 3.0, Mode::Telegate, 0));
  CHECK(a != dqft::derive_seed(1, 8, 2, 1.0 / 3.0, Mode::Telegate, 0));
  CHECK(a != dqft::derive_seed(1, 8, 4, 2.0 / 3.0, Mode::Telegate, 0));
  CHECK(a != dqft::derive_seed(1, 8, 4, 1.0 / 3.0, Mode::Semiclassical, 0));
  CHECK(a != dqft::derive_seed(1, 8, 4, 1.0 / 3.0, Mode::Telegate, 1));
  CHECK(a < (std::uint64_t{1} << 53));
}

TEST_CASE("CSV schema and round trip") {
  CHECK(dqft::csv_header() ==
        "n,k,theta,mode,seed,repeat,wall_time_seconds,peak_state_bytes,epr_count,"
        "classical_msg_count,block_slots,fidelity_exact,fidelity_sampled,modal_outcome");

  dqft::ResultRow row;
  row.n = 8;
  row.k = 4;
  row.theta = 1.0 / 3.0;
  row.mode = Mode::Semiclassical;
  row.seed = 123456789;
  row.repeat = 2;
  row.wall_time_seconds = 0.0123456789;
  row.peak_state_bytes = 65536;
  row.epr_count = 0;
  row.classical_msg_count = 12;
  row.block_slots = 4;
  row.fidelity_exact = 1.0;
  row.fidelity_sampled = 0.97;
  row.modal_outcome = 85;
  const auto line = dqft::format_row(row);
  CHECK(line == "8,4,0.333333333,semiclassical,123456789,2,0.0123456789,65536,0,12,4,1,0.97,85");
  const auto back = dqft::parse_row(line);
  CHECK(dqft::format_row(back) == line);
  CHECK(back.mode == Mode::Semiclassical);
  CHECK(back.modal_outcome == 85);

  CHECK_THROWS_AS(dqft::parse_row("1,2,3"), std::invalid_argument);
  CHECK_THROWS_AS(dqft::parse_row("8,4,x,telegate,1,0,0,1,0,0,1,1,1,0"), std::invalid_argument);
}

TEST_CASE("execute_point rows") {
  const auto tele = dqft::execute_point({8, 4, 1.0 / 3.0, Mode::Telegate, 0, 11}, 100);
  CHECK(tele.epr_count == 12);
  CHECK(tele.classical_msg_count == 24);
  CHECK(tele.block_slots == 7);
  CHECK(tele.peak_state_bytes == 16u << 12);
  CHECK(tele.fidelity_exact >= 1.0 - dqft::kExactFidelityTolerance);
  CHECK(tele.fidelity_sampled >= 0.9);
  CHECK(tele.modal_outcome == 85);  // round(256 / 3)
  CHECK(tele.wall_time_seconds > 0.0);

  const auto semi = dqft::execute_point({8, 4, 1.0 / 3.0, Mode::Semiclassical, 0, 11}, 100, {}, false);
  CHECK(semi.epr_count == 0);
  CHECK(semi.classical_msg_count > 0);
  CHECK(semi.peak_state_bytes == 16u << 8);
  CHECK(semi.fidelity_exact >= 1.0 - dqft::kExactFidelityTolerance);
  CHECK(semi.wall_time_seconds == 0.0);
}

TEST_CASE("benchmark table up to n = 12") {
  NoOutputDirOverride guard;
  TempDir dir;
  auto cfg = dqft::parse_config("num_qubits: [4, 6, 8, 10, 12]\njobs: 4\n");
  cfg.output_path = dir.path() / "table.csv";
  std::ostringstream log;
  const auto outcome = dqft::run_sweep(cfg, log);
  CHECK(outcome.exit_code == 0);
  CHECK(outcome.rows_written == 54);

  std::ifstream in(cfg.output_path);
  std::string line;
  std::getline(in, line);
  CHECK(line == dqft::csv_header());
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    const auto r = dqft::parse_row(line);
    ++rows;
    CHECK(r.fidelity_exact >= 1.0 - dqft::kExactFidelityTolerance);
    CHECK(r.fidelity_sampled >= 0.9);
    CHECK(r.epr_count == dqft::epr_budget(dqft::make_partition(r.n, r.k)));
    CHECK(r.classical_msg_count == 2 * r.epr_count);
    CHECK(r.block_slots == 2 * r.k - 1);
    CHECK(r.peak_state_bytes == (std::uint64_t{16} << (r.n + r.k)));
  }
  CHECK(rows == 54);
  CHECK(log.str().find("summary") != std::string::npos);
}

TEST_CASE("sweeps are resumable and deterministic") {
  NoOutputDirOverride guard;
  TempDir dir;
  std::ostringstream log;

  auto first = small_config(dir.path() / "a.csv");
  first.jobs = 3;
  const auto o1 = dqft::run_sweep(first, log);
  CHECK(o1.exit_code == 0);
  CHECK(o1.rows_written == 36);  // 6 (n, k) pairs x 3 thetas x 2 modes
  const auto full = slurp(first.output_path);
  CHECK(count_lines(full) == 37);
  CHECK(full.find('\r') == std::string::npos);

  SUBCASE("rerun writes nothing") {
    const auto again = dqft::run_sweep(first, log);
    CHECK(again.rows_written == 0);
    CHECK(again.rows_skipped == 36);
    CHECK(again.exit_code == 0);
    CHECK(slurp(first.output_path) == full);
  }
  SUBCASE("identical config and seed give identical bytes") {
    auto second = small_config(dir.path() / "b.csv");
    second.jobs = 1;
    dqft::run_sweep(second, log);
    CHECK(slurp(second.output_path) == full);
  }
  SUBCASE("a truncated file is completed to the same bytes") {
    std::string partial;
    std::istringstream lines(full);
    std::string line;
    for (int i = 0; i < 11 && std::getline(lines, line); ++i) partial += line + '\n';
    {
      std::ofstream out(first.output_path, std::ios::binary | std::ios::trunc);
      out << partial;
    }
    const auto resumed = dqft::run_sweep(first, log);
    CHECK(resumed.rows_skipped == 10);
    CHECK(resumed.rows_written == 26);
    CHECK(slurp(first.output_path) == full);
  }
  SUBCASE("a different seed changes the rows") {
    auto other = small_config(dir.path() / "c.csv");
    other.seed = 8;
    dqft::run_sweep(other, log);
    CHECK(slurp(other.output_path) != full);
  }
  SUBCASE("semiclassical rows use no EPR pairs") {
    std::istringstream lines(full);
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line)) {
      const auto r = dqft::parse_row(line);
      if (r.mode == Mode::Semiclassical) CHECK(r.epr_count == 0);
    }
  }
}

TEST_CASE("a foreign header is refused") {
  NoOutputDirOverride guard;
  TempDir dir;
  auto cfg = small_config(dir.path() / "x.csv");
  {
    std::ofstream out(cfg.output_path);
    out << "a,b,c\n";
  }
  std::ostringstream log;
  CHECK_THROWS_AS(dqft::run_sweep(cfg, log), dqft::ConfigError);
}

TEST_CASE("sweep output honours the directory override") {
  TempDir dir;
  auto cfg = dqft::parse_config("num_qubits: [4]\nnodes: [2]\ntheta: [0.0]\nshots: 10\n");
  cfg.output_path = "ignored/dir/o.csv";
  ::setenv(dqft::kOutputDirEnv, dir.path().c_str(), 1);
  std::ostringstream log;
  const auto outcome = dqft::run_sweep(cfg, log);
  ::unsetenv(dqft::kOutputDirEnv);
  CHECK(outcome.rows_written == 1);
  CHECK(fs::exists(dir.path() / "o.csv"));
}

TEST_CASE("verification passes on the pristine protocol") {
  dqft::VerifyOptions options;
  options.max_n = 8;
  options.seeds = 2;
  for (const auto& check : dqft::run_verification(options)) {
    INFO(check.name << ": " << check.detail);
    CHECK(check.passed);
  }
}

TEST_CASE("verification catches a dropped Z correction") {
  dqft::VerifyOptions options;
  options.max_n = 6;
  options.seeds = 2;
  options.faults.drop_disentangle_z = true;
  CHECK_FALSE(dqft::check_distributed_equivalence(options).passed);
  CHECK_FALSE(dqft::check_telegate_branches(options).passed);
}

TEST_CASE("verification catches mirrored controls") {
  dqft::VerifyOptions options;
  options.max_n = 6;
  options.faults.naive_control_order = true;
  const auto result = dqft::check_gate_multiset(options);
  CHECK_FALSE(result.passed);
  CHECK(result.detail.find("gate multiset differs") != std::string::npos);
}

TEST_CASE("report_checks exit code") {
  std::ostringstream out;
  CHECK(dqft::report_checks({{"a", true, "ok"}}, out) == 0);
  CHECK(dqft::report_checks({{"a", true, "ok"}, {"b", false, "bad"}}, out) == 1);
  CHECK(out.str().find("FAIL") != std::string::npos);
}
