// Copyright 2026 The gdmp Authors
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

// End-to-end checks of the command-line pipeline: file formats, exit
// codes, composability of the stages, and byte-level determinism.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "gdmp/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kCli = GDMP_CLI_PATH;

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "gdmp_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_line_demo(const fs::path& file) {
  std::ofstream f(file);
  f << "t,x1,x2\n";
  for (int k = 0; k <= 100; ++k)
    f << gdmp::format_double(k * 0.01) << "," << gdmp::format_double(k * 0.01)
      << ",0\n";
}

void write_pause_demo(const fs::path& file) {
  std::ofstream f(file);
  f << "t,x1\n";
  f << "0,0\n1,0\n2,0\n3,0\n4,1\n";
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("resample command writes path, law, and summary") {
  const fs::path dir = fresh_dir("resample_line");
  write_line_demo(dir / "demo.csv");
  const int rc = run("resample --in " + (dir / "demo.csv").string() +
                     " --delta 0.25 --out " + (dir / "out").string());
  REQUIRE(rc == 0);

  const gdmp::SpatialPath path = gdmp::read_spatial_path((dir / "out/path.csv").string());
  CHECK(path.sample_count() == 5);
  CHECK(path.points(4, 0) == doctest::Approx(1.0).epsilon(1e-9));

  const gdmp::TimingLaw law = gdmp::read_timing_law((dir / "out/timing_law.csv").string());
  CHECK(law.sample_count() == 5);

  const json summary = gdmp::load_json((dir / "out/summary.json").string());
  CHECK(summary.at("samples") == 5);
  CHECK(summary.at("pause_intervals") == 0);
  CHECK(fs::exists(dir / "out/run_manifest.json"));
  CHECK(fs::exists(dir / "out/config.effective.json"));
}

TEST_CASE("resample reports pause intervals") {
  const fs::path dir = fresh_dir("resample_pause");
  write_pause_demo(dir / "demo.csv");
  const int rc = run("resample --in " + (dir / "demo.csv").string() +
                     " --delta 0.5 --out " + (dir / "out").string());
  REQUIRE(rc == 0);
  const json summary = gdmp::load_json((dir / "out/summary.json").string());
  CHECK(summary.at("samples") == 3);
  CHECK(summary.at("pause_intervals") == 1);
}

TEST_CASE("exit codes: parse error 2, degenerate path 3") {
  const fs::path dir = fresh_dir("exit_codes");
  {
    std::ofstream f(dir / "broken.csv");
    f << "t,x1\n0,abc\n1,2\n";
  }
  CHECK(run("resample --in " + (dir / "broken.csv").string() + " --delta 0.1 --out " +
            (dir / "o1").string()) == 2);

  write_line_demo(dir / "demo.csv");
  CHECK(run("resample --in " + (dir / "demo.csv").string() + " --delta 5.0 --out " +
            (dir / "o2").string()) == 3);

  CHECK(run("resample --in " + (dir / "missing.csv").string() +
            " --delta 0.1 --out " + (dir / "o3").string()) == 2);
}

TEST_CASE("pipeline composes: resample, fit, rollout, optimize, simulate") {
  const fs::path dir = fresh_dir("pipeline");
  write_line_demo(dir / "demo.csv");
  REQUIRE(run("resample --in " + (dir / "demo.csv").string() + " --delta 0.01 --out " +
              (dir / "rs").string()) == 0);
  REQUIRE(run("fit --in " + (dir / "rs/path.csv").string() + " --out " +
              (dir / "fit").string()) == 0);

  SUBCASE("rollout with the original law reproduces the demonstration") {
    REQUIRE(run("rollout --curve " + (dir / "fit/curve.json").string() +
                " --phase original --law " + (dir / "rs/timing_law.csv").string() +
                " --out " + (dir / "ro").string()) == 0);
    const gdmp::CsvTable trace = gdmp::read_csv((dir / "ro/trace.csv").string());
    // columns: t,s,sd,x1,x2,v1,v2,a1,a2
    REQUIRE(trace.header.size() == 9);
    double rms = 0.0;
    int count = 0;
    for (Eigen::Index r = 0; r < trace.rows.rows(); ++r) {
      const double t = trace.rows(r, 0);
      if (t > 1.0) break;
      rms += std::pow(trace.rows(r, 3) - t, 2.0) + std::pow(trace.rows(r, 4), 2.0);
      ++count;
    }
    rms = std::sqrt(rms / count);
    CHECK(rms <= 1e-2);
  }

  SUBCASE("optimize reproduces the trapezoid duration") {
    const json cfg = {{"phaseopt", {{"sd_max", 1.7}, {"sdd_max", 13.0}}}};
    gdmp::write_json((dir / "cons.json").string(), cfg);
    REQUIRE(run("--config " + (dir / "cons.json").string() + " optimize --curve " +
                (dir / "fit/curve.json").string() + " --out " +
                (dir / "opt").string()) == 0);
    const json summary = gdmp::load_json((dir / "opt/summary.json").string());
    const double expect = 1.0 / 1.7 + 1.7 / 13.0;
    CHECK(summary.at("duration").get<double>() ==
          doctest::Approx(expect).epsilon(0.01));
    CHECK(summary.at("feasible").get<bool>());
    // exported profile is ingestible by rollout
    REQUIRE(run("rollout --curve " + (dir / "fit/curve.json").string() +
                " --phase profile --profile " + (dir / "opt/profile.csv").string() +
                " --out " + (dir / "ro2").string()) == 0);
  }

  SUBCASE("simulate completes a co-manipulation run") {
    const json cfg = {
        {"hil",
         {{"m", 2.0},
          {"b", 17.0},
          {"duration", 4.0},
          {"human",
           {{"kind", "intent"}, {"s_goal", 0.8}, {"K_p", 200.0}, {"K_d", 15.0}}}}}};
    gdmp::write_json((dir / "hil.json").string(), cfg);
    REQUIRE(run("--config " + (dir / "hil.json").string() + " simulate --curve " +
                (dir / "fit/curve.json").string() + " --out " +
                (dir / "sim").string()) == 0);
    const json metrics = gdmp::load_json((dir / "sim/metrics.json").string());
    CHECK(!metrics.at("diverged").get<bool>());
    CHECK(metrics.at("passivity").at("violations").get<int>() == 0);
  }
}

TEST_CASE("stability map at zero delay is positive everywhere") {
  const fs::path dir = fresh_dir("stability");
  REQUIRE(run("stability --t0 0 --out " + (dir / "st").string()) == 0);
  const gdmp::CsvTable map = gdmp::read_csv((dir / "st/margin_map.csv").string());
  CHECK(map.rows.minCoeff() > 0.0);
  const json axes = gdmp::load_json((dir / "st/axes.json").string());
  CHECK(axes.at("m_grid").size() == 5);
}

TEST_CASE("unknown config keys are rejected") {
  const fs::path dir = fresh_dir("badcfg");
  write_line_demo(dir / "demo.csv");
  const json cfg = {{"sampling", {{"delta", 0.01}, {"typo_key", 1}}}};
  gdmp::write_json((dir / "cfg.json").string(), cfg);
  CHECK(run("--config " + (dir / "cfg.json").string() + " resample --in " +
            (dir / "demo.csv").string() + " --delta 0.01 --out " +
            (dir / "out").string()) == 2);
}

TEST_CASE("two pipeline runs produce byte-identical outputs") {
  const fs::path dir = fresh_dir("determinism");
  write_line_demo(dir / "demo.csv");
  const json cfg = {{"phaseopt", {{"sd_max", 1.7}, {"sdd_max", 13.0}}},
                    {"hil",
                     {{"duration", 2.0},
                      {"human", {{"kind", "intent"}, {"s_goal", 0.5}}}}}};
  gdmp::write_json((dir / "cfg.json").string(), cfg);

  const auto run_pipeline = [&](const std::string& tag) {
    const fs::path base = dir / tag;
    REQUIRE(run("resample --in " + (dir / "demo.csv").string() +
                " --delta 0.01 --out " + (base / "rs").string()) == 0);
    REQUIRE(run("fit --in " + (base / "rs/path.csv").string() + " --out " +
                (base / "fit").string()) == 0);
    REQUIRE(run("--config " + (dir / "cfg.json").string() + " optimize --curve " +
                (base / "fit/curve.json").string() + " --out " +
                (base / "opt").string()) == 0);
    REQUIRE(run("rollout --curve " + (base / "fit/curve.json").string() +
                " --phase original --law " + (base / "rs/timing_law.csv").string() +
                " --out " + (base / "ro").string()) == 0);
    REQUIRE(run("--config " + (dir / "cfg.json").string() + " simulate --curve " +
                (base / "fit/curve.json").string() + " --out " +
                (base / "sim").string()) == 0);
    REQUIRE(run("stability --t0 0.01 --out " + (base / "st").string()) == 0);
  };
  run_pipeline("a");
  run_pipeline("b");

  int compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir / "a")) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), dir / "a");
    if (rel.filename() == "run_manifest.json") continue;  // carries wall time
    const fs::path twin = dir / "b" / rel;
    REQUIRE(fs::exists(twin));
    CHECK(slurp(entry.path()) == slurp(twin));
    ++compared;
  }
  CHECK(compared >= 12);
}
