// Copyright 2026 The gaitug Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "io.hpp"
#include "trials.hpp"

using namespace gaitug;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + GAITUG_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

fs::path dir(const std::string& name) { return test::fresh_dir(GAITUG_TEST_TMP, name); }

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

fs::path write_still_trial(const fs::path& d, const std::string& pid) {
  std::vector<JointFrame> frames(120);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    frames[i].frame_index = i;
    for (std::size_t j = 0; j < kJointCount; ++j) frames[i].positions[j] = {0.01 * j, 0.5 + 0.02 * j, 0.0};
  }
  const fs::path p = d / (pid + "_trial1_trajectory.csv");
  io::write_text_file(p, io::format_trajectory(TrialRecording(pid, 1, 30.0, frames)));
  return p;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run_cli("") == 2);
  CHECK(run_cli("dance") == 2);
  CHECK(run_cli("--help") == 0);
  const fs::path out = dir("usage");
  CHECK(run_cli("analyze --out-dir " + quoted(out)) == 2);
  CHECK(run_cli("analyze /nonexistent.csv --out-dir " + quoted(out)) == 2);
  CHECK(run_cli("analyze --units furlongs --out-dir " + quoted(out)) == 2);
}

TEST_CASE("synth default and config errors") {
  const fs::path out = dir("synth");
  CHECK(run_cli("synth --out-dir " + quoted(out)) == 0);
  CHECK(std::distance(fs::directory_iterator(out), fs::directory_iterator{}) == 3);
  const fs::path cfg = out / "bad.json";
  io::write_text_file(cfg, R"({"cadence": -1})");
  CHECK(run_cli("synth " + quoted(cfg) + " --out-dir " + quoted(dir("synth_bad"))) == 2);
}

TEST_CASE("analyze exit code follows the successes") {
  const fs::path in = dir("analyze_in");
  const fs::path cfg = in / "cohort.json";
  io::write_text_file(cfg, R"({"participants": 2, "trials": 1, "noise_sd": 0.002})");
  REQUIRE(run_cli("synth " + quoted(cfg) + " --seed 5 --out-dir " + quoted(in)) == 0);
  const fs::path still = write_still_trial(in, "P900");

  const fs::path out = dir("analyze_out");
  CHECK(run_cli("analyze " + quoted(in / "P001_trial1_trajectory.csv") + " " +
                quoted(in / "P002_trial1_trajectory.csv") + " " + quoted(still) + " --out-dir " +
                quoted(out)) == 0);
  CHECK(io::load_metrics(out / "metrics.csv").rows.size() == 2);
  CHECK(fs::exists(out / "failures.json"));

  CHECK(run_cli("analyze " + quoted(still) + " --out-dir " + quoted(dir("analyze_none"))) == 1);
}

TEST_CASE("downstream command errors") {
  const fs::path in = dir("chain_in");
  const fs::path cfg = in / "cohort.json";
  io::write_text_file(cfg, R"({"participants": 3, "trials": 3, "noise_sd": 0.002})");
  REQUIRE(run_cli("synth " + quoted(cfg) + " --seed 8 --out-dir " + quoted(in)) == 0);
  const fs::path out = dir("chain_out");
  std::string trajectories;
  for (int p = 1; p <= 3; ++p) {
    for (int t = 1; t <= 3; ++t) {
      trajectories += quoted(in / ("P00" + std::to_string(p) + "_trial" + std::to_string(t) + "_trajectory.csv")) + " ";
    }
  }
  REQUIRE(run_cli("analyze " + trajectories + "--out-dir " + quoted(out)) == 0);
  const std::string metrics = quoted(out / "metrics.csv");
  const std::string covariates = quoted(in / "covariates.csv");

  const fs::path other = dir("other_imu");
  REQUIRE(run_cli("synth --seed 1 --out-dir " + quoted(other)) == 0);
  CHECK(run_cli("compare --metrics " + metrics + " " + quoted(other / "SYN001_trial1_imu.csv") + " --out-dir " +
                quoted(out)) == 1);
  CHECK(run_cli("compare --metrics " + metrics + " " + quoted(in / "P001_trial1_imu.csv") + " --out-dir " +
                quoted(out)) == 1);
  CHECK(run_cli("lme --metrics " + metrics + " --covariates " + covariates +
                " --outcome missing_col --predictor age --out-dir " + quoted(out)) == 2);
  CHECK(run_cli("lme --metrics " + metrics + " --covariates " + covariates +
                " --outcome sl_mean_cm --predictor age --out-dir " + quoted(out)) == 0);
  CHECK(run_cli("report --metrics " + metrics + " --covariates " + covariates + " --metric sl_mean_cm " +
                "--factor steadi --factor age --out-dir " + quoted(out / "report")) == 0);
  CHECK(fs::exists(out / "report" / "sl_mean_cm_vs_age.svg"));
}
