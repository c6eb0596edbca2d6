// Copyright 2026 The vcrw Authors
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "vcrw/config.hpp"
#include "vcrw/csv.hpp"

using namespace vcrw;
namespace fs = std::filesystem;

namespace {

// Both locations are baked in at build time; an environment variable of the
// same name wins so the binary can be pointed elsewhere by hand.
fs::path tmp_dir() {
  const char* env = std::getenv("VCRW_TEST_TMPDIR");
  fs::path dir(env != nullptr ? env : VCRW_TEST_TMPDIR);
  fs::create_directories(dir);
  return dir;
}

std::string cli_path() {
  const char* env = std::getenv("VCRW_CLI_PATH");
  return env != nullptr ? env : VCRW_CLI_PATH;
}

fs::path write_config(const std::string& name, const std::string& body) {
  const fs::path path = tmp_dir() / name;
  std::ofstream os(path, std::ios::binary);
  os << body;
  REQUIRE(os.good());
  return path;
}

int run_cli(const std::string& args, const fs::path& stderr_file = {}) {
  std::string cmd = cli_path() + " " + args;
  if (!stderr_file.empty()) cmd += " 2> " + stderr_file.string();
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  REQUIRE(WIFEXITED(rc));
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(is.good());
  return parse_csv(is);
}

std::string join(const std::vector<std::string>& cells) {
  std::string out;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ",";
    out += cells[i];
  }
  return out;
}

}  // namespace

TEST_CASE("an empty config file keeps the reference defaults") {
  const fs::path path = write_config("empty.ini", "# nothing here\n");
  const RunConfig cfg = load_config(path.string());
  CHECK(cfg.model.variant == Variant::kVcrw2);
  CHECK(cfg.model.k == 200.0);
  CHECK(cfg.model.phi == 0.1);
  CHECK(cfg.sim.dt == 1e-4);
  CHECK(cfg.sim.duration == 3.0);
  CHECK(cfg.sweep.phi_steps == 11);
  CHECK(cfg.sweep.b_list.size() == 8);
  CHECK(cfg.output.prefix == "vcrw");
}

TEST_CASE("sections and keys land in their fields") {
  const fs::path path = write_config("full.ini",
                                     "[model]\n"
                                     "variant = vcrw3\n"
                                     "k = 150\n"
                                     "phi = 0\n"
                                     "; comment line\n"
                                     "[upper_body]\n"
                                     "KP = 80\n"
                                     "theta5d = 0.25\n"
                                     "[sim]\n"
                                     "duration = 1.5\n"
                                     "record_stride = 5\n"
                                     "[sweep]\n"
                                     "phi_min = 0.08\n"
                                     "phi_max = 0.16\n"
                                     "phi_steps = 3\n"
                                     "b_list = 0.2, 0.25\n"
                                     "[output]\n"
                                     "prefix = run1\n");
  const RunConfig cfg = load_config(path.string());
  CHECK(cfg.model.variant == Variant::kVcrw3);
  CHECK(cfg.model.k == 150.0);
  CHECK(cfg.model.phi == 0.0);
  CHECK(cfg.model.Kp == 80.0);
  CHECK(cfg.model.theta5_ref == 0.25);
  CHECK(cfg.sim.duration == 1.5);
  CHECK(cfg.sim.record_stride == 5);
  CHECK(cfg.sweep.phi_steps == 3);
  REQUIRE(cfg.sweep.b_list.size() == 2);
  CHECK(cfg.sweep.b_list[1] == 0.25);
  CHECK(cfg.output.prefix == "run1");

  const std::vector<double> grid = cfg.sweep.phi_grid();
  REQUIRE(grid.size() == 3);
  CHECK(grid[0] == doctest::Approx(0.08));
  CHECK(grid[1] == doctest::Approx(0.12));
  CHECK(grid[2] == doctest::Approx(0.16));
}

TEST_CASE("unknown keys are rejected with their line number") {
  const fs::path path = write_config("typo.ini",
                                     "[model]\n"
                                     "phi = 0.1\n"
                                     "masss = 1\n");
  try {
    load_config(path.string());
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    CHECK(std::string(e.what()).find("masss") != std::string::npos);
  }

  const fs::path bad = write_config("badnum.ini", "[model]\nk = fast\n");
  CHECK_THROWS_AS(load_config(bad.string()), ConfigError);
  CHECK_THROWS_AS(load_config((tmp_dir() / "missing.ini").string()),
                  ConfigError);
}

TEST_CASE("overrides accept bare and section-qualified keys") {
  const fs::path path = write_config("base.ini", "\n");
  RunConfig cfg = load_config(path.string());
  apply_override(&cfg, "phi=0.12");
  CHECK(cfg.model.phi == 0.12);
  apply_override(&cfg, "sim.duration=5");
  CHECK(cfg.sim.duration == 5.0);
  apply_override(&cfg, "output.prefix=alt");
  CHECK(cfg.output.prefix == "alt");
  CHECK_THROWS_AS(apply_override(&cfg, "nonsense=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(&cfg, "no_equals_sign"), ConfigError);
}

TEST_CASE("g17 formatting round-trips doubles exactly") {
  const double values[] = {M_PI, 1.0 / 3.0, 9.8, -2.7182818284590452e-7,
                           0.22961005941905388};
  for (double x : values) {
    CHECK(std::stod(format_g17(x)) == x);
  }
  std::istringstream csv("a,b\r\n1,2\n3,\n");
  const auto cells = parse_csv(csv);
  REQUIRE(cells.size() == 3);
  CHECK(cells[0][1] == "b");  // CR stripped
  CHECK(cells[1][0] == "1");
  REQUIRE(cells[2].size() == 2);
  CHECK(cells[2][1] == "");  // trailing empty cell survives
}

TEST_CASE("simulate writes the passive time-series schema and exits 0") {
  const fs::path out = tmp_dir() / "sim_ok";
  const fs::path cfg = write_config("sim_ok.ini",
                                    "[sim]\nduration = 1.0\n"
                                    "[output]\nprefix = walk\n");
  const int rc = run_cli("simulate --config " + cfg.string() + " --out " +
                         out.string());
  CHECK(rc == 0);

  const auto ts = read_csv(out / "walk_timeseries.csv");
  REQUIRE(ts.size() > 10);
  CHECK(join(ts[0]) ==
        "t,x1,z1,th1,x2,z2,th2,x3,z3,th3,x4,z4,th4,mode,vgrf_rear,vgrf_fore");
  // Data rows parse as numbers except the mode column.
  CHECK(std::stod(ts[1][0]) == 0.0);
  CHECK(ts[1][13].substr(0, 3) == "SLS");

  const auto ev = read_csv(out / "walk_events.csv");
  REQUIRE(ev.size() >= 3);
  CHECK(join(ev[0]) == "t,kind,rear,fore,impulse_norm");
  CHECK(ev[1][1] == "touchdown");
  CHECK(ev[2][1] == "liftoff");
}

TEST_CASE("simulate reports the assisted schema with torque column") {
  const fs::path out = tmp_dir() / "sim3";
  const fs::path cfg = write_config("sim3.ini",
                                    "[model]\nvariant = vcrw3\nphi = 0\n"
                                    "[sim]\nduration = 0.5\n");
  const int rc = run_cli("simulate --config " + cfg.string() + " --out " +
                         out.string());
  CHECK(rc == 0);
  const auto ts = read_csv(out / "vcrw_timeseries.csv");
  CHECK(join(ts[0]) ==
        "t,x1,z1,th1,x2,z2,th2,x3,z3,th3,x4,z4,th4,th5,mode,vgrf_rear,"
        "vgrf_fore,u");
  bool torque_seen = false;
  for (size_t i = 1; i < ts.size(); ++i)
    torque_seen = torque_seen || std::abs(std::stod(ts[i][17])) > 1e-6;
  CHECK(torque_seen);
}

TEST_CASE("a failed walk still writes its data and exits 2") {
  const fs::path out = tmp_dir() / "sim_fail";
  const fs::path cfg = write_config("sim_fail.ini",
                                    "[model]\nphi = 0\n"
                                    "[sim]\nomega0 = 0.5\nduration = 5\n");
  const fs::path errs = tmp_dir() / "fail_stderr.txt";
  const int rc = run_cli(
      "simulate --config " + cfg.string() + " --out " + out.string(), errs);
  CHECK(rc == 2);
  CHECK(fs::exists(out / "vcrw_timeseries.csv"));
  CHECK(fs::exists(out / "vcrw_events.csv"));
  CHECK(slurp(errs).find("simulation failed") != std::string::npos);

  const auto ev = read_csv(out / "vcrw_events.csv");
  CHECK(ev.back()[1] == "failure");
}

TEST_CASE("config errors surface on stderr with exit 1") {
  const fs::path cfg = write_config("broken.ini", "[model]\nmasss = 1\n");
  const fs::path errs = tmp_dir() / "broken_stderr.txt";
  const int rc = run_cli("simulate --config " + cfg.string(), errs);
  CHECK(rc == 1);
  const std::string msg = slurp(errs);
  CHECK(msg.find("config error") != std::string::npos);
  CHECK(msg.find("line 2") != std::string::npos);

  CHECK(run_cli("simulate --config " +
                    (tmp_dir() / "not_there.ini").string(),
                tmp_dir() / "devnull.txt") == 1);
  CHECK(run_cli("bogus_subcommand", tmp_dir() / "devnull.txt") == 1);
}

TEST_CASE("sweep writes one row per cell and reruns byte-identically") {
  const fs::path out = tmp_dir() / "sweep1";
  const fs::path out2 = tmp_dir() / "sweep2";
  const fs::path cfg = write_config("sweep.ini",
                                    "[sim]\nrecord_stride = 0\n"
                                    "[sweep]\n"
                                    "phi_min = 0.1\nphi_max = 0.1\n"
                                    "phi_steps = 1\nb_list = 0.25\n"
                                    "settle_time = 5\nmeasure_steps = 5\n");
  CHECK(run_cli("sweep --config " + cfg.string() + " --out " + out.string()) ==
        0);
  const auto rows = read_csv(out / "sweep.csv");
  REQUIRE(rows.size() == 2);
  CHECK(join(rows[0]) ==
        "phi,b,period_mean,length_mean,speed_mean,periodicity,outcome");
  CHECK(std::stod(rows[1][0]) == 0.1);
  CHECK(std::stod(rows[1][1]) == 0.25);
  CHECK(rows[1][5] == "1");
  CHECK(rows[1][6] == "completed");

  CHECK(run_cli("sweep --config " + cfg.string() + " --out " +
                out2.string()) == 0);
  CHECK(slurp(out / "sweep.csv") == slurp(out2 / "sweep.csv"));
}

TEST_CASE("stick emits frames and rejects a bad stride") {
  const fs::path out = tmp_dir() / "stick1";
  const fs::path cfg = write_config("stick.ini", "[sim]\nduration = 0.5\n");
  CHECK(run_cli("stick --config " + cfg.string() + " --t0 0 --t1 0.5" +
                " --stride 200 --out " + out.string()) == 0);
  const auto rows = read_csv(out / "stick.csv");
  REQUIRE(rows.size() > 6);
  CHECK(join(rows[0]) == "frame_idx,segment_id,x0,z0,x1,z1");
  CHECK(rows[1][0] == "0");
  CHECK(rows[1][1] == "limb1");
  // Marker rows duplicate their point.
  bool marker = false;
  for (size_t i = 1; i < rows.size(); ++i) {
    if (rows[i][1] == "G13") {
      marker = true;
      CHECK(rows[i][2] == rows[i][4]);
      CHECK(rows[i][3] == rows[i][5]);
    }
  }
  CHECK(marker);

  CHECK(run_cli("stick --config " + cfg.string() + " --stride 0 --out " +
                    out.string(),
                tmp_dir() / "devnull.txt") == 1);
}
