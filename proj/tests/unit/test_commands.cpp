// Copyright 2026 The gaitug Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "error.hpp"
#include "io.hpp"
#include "trials.hpp"

using namespace gaitug;
namespace fs = std::filesystem;

namespace {

template <typename Fn>
ErrorKind kind_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected gaitug::Error");
  return ErrorKind::kIo;
}

fs::path scratch(const std::string& name) {
  return test::fresh_dir(fs::temp_directory_path() / "gaitug_commands_test", name);
}

// A valid trajectory of a subject who never moves.
fs::path write_still_trial(const fs::path& dir, const std::string& pid) {
  std::vector<JointFrame> frames(120);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    frames[i].frame_index = i;
    for (std::size_t j = 0; j < kJointCount; ++j) frames[i].positions[j] = {0.01 * j, 0.5 + 0.02 * j, 0.0};
  }
  const fs::path p = dir / (pid + "_still.csv");
  io::write_text_file(p, io::format_trajectory(TrialRecording(pid, 1, 30.0, frames)));
  return p;
}

std::vector<fs::path> files_matching(const fs::path& dir, const std::string& suffix) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().filename().string().ends_with(suffix)) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

synth::CohortConfig cohort(int participants, int trials, std::uint64_t seed) {
  synth::CohortConfig c;
  c.participants = participants;
  c.trials_per_participant = trials;
  c.base.seed = seed;
  c.base.noise_sd = 0.002;
  return c;
}

}  // namespace

TEST_SUITE("commands") {

TEST_CASE("parallel_for visits every index and rethrows the lowest failure") {
  std::vector<std::atomic<int>> hits(50);
  parallel_for(50, 4, [&](std::size_t i) { ++hits[i]; });
  for (const auto& h : hits) CHECK(h.load() == 1);
  try {
    parallel_for(20, 3, [](std::size_t i) {
      if (i == 7 || i == 13) throw std::runtime_error(std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "7");
  }
  CHECK_NOTHROW(parallel_for(0, 4, [](std::size_t) {}));
}

TEST_CASE("synth writes one trial's files and repeats byte for byte") {
  const fs::path a = scratch("synth_a");
  const fs::path b = scratch("synth_b");
  synth::CohortConfig c;
  CHECK(run_synth(c, a, 2) == 3);
  CHECK(run_synth(c, b, 1) == 3);
  const auto fa = files_matching(a, "");
  REQUIRE(fa.size() == 3);
  for (const auto& f : fa) CHECK(io::read_text_file(f) == io::read_text_file(b / f.filename()));
  CHECK(fs::exists(a / "SYN001_trial1_trajectory.csv"));
  CHECK(fs::exists(a / "SYN001_trial1_imu.csv"));
  CHECK(fs::exists(a / "SYN001_trial1_truth.json"));
}

TEST_CASE("cohort synth adds covariates") {
  const fs::path dir = scratch("cohort");
  CHECK(run_synth(cohort(3, 2, 4), dir, 2) == 3 * 6 + 1);
  CHECK(io::load_covariates(dir / "covariates.csv").size() == 3);
  CHECK(kind_of([] { synth::parse_cohort_config(R"({"cadence": -1})"); }) == ErrorKind::kConfig);
}

TEST_CASE("analyze keeps good trials and records failures") {
  const fs::path in = scratch("analyze_in");
  run_synth(cohort(1, 3, 6), in, 2);
  auto trajectories = files_matching(in, "_trajectory.csv");
  REQUIRE(trajectories.size() == 3);

  const fs::path out3 = scratch("analyze_out3");
  const AnalyzeSummary all = run_analyze(trajectories, out3, AnalysisOptions{}, Units::kReport, 2);
  CHECK(all.succeeded == 3);
  CHECK(io::load_metrics(out3 / "metrics.csv").rows.size() == 3);
  CHECK(files_matching(out3 / "segmentation", ".json").size() == 3);

  std::vector<fs::path> mixed{trajectories[0], trajectories[1], write_still_trial(in, "P900")};
  const fs::path out = scratch("analyze_out");
  const AnalyzeSummary s = run_analyze(mixed, out, AnalysisOptions{}, Units::kReport, 2);
  CHECK(s.succeeded == 2);
  CHECK(s.failed == 1);
  CHECK(io::load_metrics(out / "metrics.csv").rows.size() == 2);
  const auto failures = nlohmann::json::parse(io::read_text_file(out / "failures.json"));
  REQUIRE(failures.size() == 1);
  CHECK(failures[0]["source"].get<std::string>().find("P900") != std::string::npos);
  CHECK(failures[0]["kind"] == "segmentation error");

  const fs::path bad = scratch("analyze_bad");
  const AnalyzeSummary none = run_analyze({write_still_trial(in, "P901")}, bad, AnalysisOptions{}, Units::kSi, 1);
  CHECK(none.succeeded == 0);
  CHECK(none.failed == 1);
  CHECK(kind_of([&] { run_analyze({}, bad, AnalysisOptions{}, Units::kSi, 1); }) == ErrorKind::kUsage);
}

TEST_CASE("analysis output does not depend on the worker count") {
  const fs::path in = scratch("threads_in");
  run_synth(cohort(2, 3, 9), in, 2);
  const auto trajectories = files_matching(in, "_trajectory.csv");
  const fs::path one = scratch("threads_1");
  const fs::path four = scratch("threads_4");
  run_analyze(trajectories, one, AnalysisOptions{}, Units::kReport, 1);
  std::vector<fs::path> reversed(trajectories.rbegin(), trajectories.rend());
  run_analyze(reversed, four, AnalysisOptions{}, Units::kReport, 4);
  CHECK(io::read_text_file(one / "metrics.csv") == io::read_text_file(four / "metrics.csv"));
}

TEST_CASE("compare, lme and report run on a small cohort") {
  const fs::path in = scratch("pipeline_in");
  run_synth(cohort(5, 3, 12), in, 2);
  const fs::path out = scratch("pipeline_out");
  run_analyze(files_matching(in, "_trajectory.csv"), out, AnalysisOptions{}, Units::kReport, 2);

  auto imus = files_matching(in, "_imu.csv");
  imus.erase(std::remove_if(imus.begin(), imus.end(),
                            [](const fs::path& p) { return p.filename().string() == "P005_trial3_imu.csv"; }),
             imus.end());
  const CompareSummary cmp = run_compare(out / "metrics.csv", imus, out, AnalysisOptions{}, 2);
  CHECK(cmp.pairs == 12);
  const auto agreement = nlohmann::json::parse(io::read_text_file(out / "agreement.json"));
  CHECK(agreement["excluded"][0]["participant_id"] == "P005");
  CHECK(kind_of([&] { run_compare(out / "metrics.csv", {}, out, AnalysisOptions{}, 1); }) == ErrorKind::kUsage);

  const LmeSummary lme = run_lme(out / "metrics.csv", in / "covariates.csv", "sl_mean_cm", {"steadi", "age"}, out);
  CHECK(lme.n_groups <= 5);
  CHECK(fs::exists(out / "lme_sl_mean_cm_steadi_age.json"));
  CHECK(fs::exists(out / "lme_sl_mean_cm_steadi_age.txt"));
  CHECK(kind_of([&] { run_lme(out / "metrics.csv", in / "covariates.csv", "sl_mean_cm", {}, out); }) ==
        ErrorKind::kUsage);

  const fs::path rep = scratch("report");
  CHECK(run_report(out / "metrics.csv", in / "covariates.csv", kDefaultReportMetrics,
                   {"short_fes_i", "btracks"}, rep) == 7);
  CHECK(files_matching(rep, ".svg").size() == 6);
}

}  // TEST_SUITE
