// Copyright 2026 The gaitug Authors
// SPDX-License-Identifier: Apache-2.0

// gaitug command line. Links only the C library interface.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "gaitug/gaitug.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAnalysis = 1;
constexpr int kExitUsage = 2;

struct Common {
  std::string out_dir = ".";
  std::optional<double> fps;
  double sigma = 3.0;
  double cutoff_hz = 2.0;
  int order = 4;
  double height_k = 0.8;
  double dist_frac = 0.7;
  std::string units = "report";
  std::string joints;
};

void add_filter_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--fps", c.fps, "Override the frame rate in the trajectory headers")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--sigma", c.sigma, "Gaussian smoothing sigma in samples")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--butter-cutoff-hz", c.cutoff_hz, "Butterworth cutoff frequency")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--butter-order", c.order, "Butterworth order")->check(CLI::Range(1, 12));
  cmd->add_option("--peak-height-k", c.height_k, "Adaptive peak height: mean + k * sd");
  cmd->add_option("--peak-dist-frac", c.dist_frac,
                  "Adaptive peak distance as a fraction of |argmax - argmin|")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--joints", c.joints, "JSON joint index table")->check(CLI::ExistingFile);
}

unsigned worker_count() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("GAITUG_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0 && static_cast<unsigned long>(cap) < n) {
      n = static_cast<unsigned>(cap);
    }
  }
  return n;
}

int exit_code(gaitug_status s) {
  switch (s) {
    case GAITUG_OK:
      return kExitOk;
    case GAITUG_E_USAGE:
    case GAITUG_E_CONFIG:
    case GAITUG_E_INVALID_ARGUMENT:
      return kExitUsage;
    default:
      return kExitAnalysis;
  }
}

int report_failure(const char* what, gaitug_status s) {
  std::cerr << "gaitug " << what << ": " << gaitug_status_name(s) << ": " << gaitug_last_error()
            << "\n";
  return exit_code(s);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Options {
 public:
  Options() { gaitug_options_create(&handle_); }
  ~Options() { gaitug_options_destroy(handle_); }
  Options(const Options&) = delete;
  Options& operator=(const Options&) = delete;

  gaitug_status configure(const Common& c) {
    gaitug_status s = gaitug_options_set_sigma(handle_, c.sigma);
    if (s == GAITUG_OK) s = gaitug_options_set_butterworth(handle_, c.order, c.cutoff_hz);
    if (s == GAITUG_OK) s = gaitug_options_set_peak_rule(handle_, c.height_k, c.dist_frac);
    if (s == GAITUG_OK && c.fps) s = gaitug_options_set_fps_override(handle_, *c.fps);
    if (s == GAITUG_OK) {
      s = gaitug_options_set_units(handle_, c.units == "si" ? GAITUG_UNITS_SI : GAITUG_UNITS_REPORT);
    }
    if (s == GAITUG_OK && !c.joints.empty()) {
      s = gaitug_options_set_joint_table_json(handle_, read_file(c.joints).c_str());
    }
    if (s == GAITUG_OK) s = gaitug_options_set_threads(handle_, worker_count());
    return s;
  }
  const gaitug_options* get() const { return handle_; }

 private:
  gaitug_options* handle_ = nullptr;
};

std::vector<const char*> c_strings(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  for (const auto& s : v) out.push_back(s.c_str());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Timed Up and Go gait analysis from 3D joint trajectories"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(gaitug_version()));
  Common common;

  std::optional<std::uint64_t> seed;
  std::string synth_config;
  auto* synth = app.add_subcommand("synth", "Generate synthetic trials with ground truth");
  synth->add_option("config", synth_config, "JSON synthesis config (default: one trial)")
      ->check(CLI::ExistingFile);
  synth->add_option("--seed", seed, "Random seed");
  synth->add_option("--out-dir", common.out_dir, "Output directory")->required();

  std::vector<std::string> trajectories;
  auto* analyze = app.add_subcommand("analyze", "Segment trials and compute gait metrics");
  analyze->add_option("trajectories", trajectories, "Trajectory files")->check(CLI::ExistingFile);
  analyze->add_option("--out-dir", common.out_dir, "Output directory")->required();
  analyze->add_option("--units", common.units, "Metric units")
      ->check(CLI::IsMember({"si", "report"}));
  add_filter_flags(analyze, common);

  std::string metrics, covariates;
  std::vector<std::string> imu_files;
  auto* compare = app.add_subcommand("compare", "Video versus insole step time agreement");
  compare->add_option("--metrics", metrics, "Video metrics CSV from analyze")
      ->required()
      ->check(CLI::ExistingFile);
  compare->add_option("imu", imu_files, "Insole IMU files")->check(CLI::ExistingFile);
  compare->add_option("--out-dir", common.out_dir, "Output directory")->required();
  add_filter_flags(compare, common);

  std::string outcome;
  std::vector<std::string> predictors;
  auto* lme = app.add_subcommand("lme", "Random-intercept mixed model of a metric on covariates");
  lme->add_option("--metrics", metrics, "Metrics CSV")->required()->check(CLI::ExistingFile);
  lme->add_option("--covariates", covariates, "Covariates CSV")
      ->required()
      ->check(CLI::ExistingFile);
  lme->add_option("--outcome", outcome, "Outcome column")->required();
  lme->add_option("--predictor", predictors, "Predictor (repeatable)")->required();
  lme->add_option("--out-dir", common.out_dir, "Output directory")->required();

  std::vector<std::string> report_metrics, report_factors;
  auto* report = app.add_subcommand("report", "Scatterplots with marginal trends and a summary");
  report->add_option("--metrics", metrics, "Metrics CSV")->required()->check(CLI::ExistingFile);
  report->add_option("--covariates", covariates, "Covariates CSV")
      ->required()
      ->check(CLI::ExistingFile);
  report->add_option("--metric", report_metrics, "Metric column (repeatable)");
  report->add_option("--factor", report_factors, "Fall-risk factor (repeatable)");
  report->add_option("--out-dir", common.out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  Options options;
  if (const gaitug_status s = options.configure(common); s != GAITUG_OK) {
    return report_failure("options", s);
  }

  if (*synth) {
    const std::string text = synth_config.empty() ? std::string() : read_file(synth_config);
    std::size_t files = 0;
    const gaitug_status s =
        gaitug_run_synth(synth_config.empty() ? nullptr : text.c_str(), seed.has_value(),
                         seed.value_or(0), common.out_dir.c_str(), options.get(), &files);
    if (s != GAITUG_OK) return report_failure("synth", s);
    std::cout << "wrote " << files << " files to " << common.out_dir << "\n";
    return kExitOk;
  }
  if (*analyze) {
    if (trajectories.empty()) {
      std::cerr << "gaitug analyze: no trajectory files given\n";
      return kExitUsage;
    }
    const auto paths = c_strings(trajectories);
    std::size_t ok = 0, failed = 0;
    const gaitug_status s = gaitug_run_analyze(paths.data(), paths.size(), common.out_dir.c_str(),
                                               options.get(), &ok, &failed);
    if (s != GAITUG_OK) return report_failure("analyze", s);
    std::cout << ok << " trial(s) analysed, " << failed << " failed\n";
    return ok > 0 ? kExitOk : kExitAnalysis;
  }
  if (*compare) {
    if (imu_files.empty()) {
      std::cerr << "gaitug compare: no insole files given\n";
      return kExitUsage;
    }
    const auto paths = c_strings(imu_files);
    std::size_t pairs = 0;
    const gaitug_status s = gaitug_run_compare(metrics.c_str(), paths.data(), paths.size(),
                                               common.out_dir.c_str(), options.get(), &pairs);
    if (s != GAITUG_OK) return report_failure("compare", s);
    std::cout << pairs << " paired trial(s)\n";
    return kExitOk;
  }
  if (*lme) {
    const auto preds = c_strings(predictors);
    const gaitug_status s = gaitug_run_lme(metrics.c_str(), covariates.c_str(), outcome.c_str(),
                                           preds.data(), preds.size(), common.out_dir.c_str());
    if (s != GAITUG_OK) return report_failure("lme", s);
    return kExitOk;
  }
  if (*report) {
    const auto m = c_strings(report_metrics);
    const auto f = c_strings(report_factors);
    std::size_t files = 0;
    const gaitug_status s =
        gaitug_run_report(metrics.c_str(), covariates.c_str(), m.data(), m.size(), f.data(),
                          f.size(), common.out_dir.c_str(), &files);
    if (s != GAITUG_OK) return report_failure("report", s);
    std::cout << "wrote " << files << " files to " << common.out_dir << "\n";
    return kExitOk;
  }
  return kExitUsage;
}
