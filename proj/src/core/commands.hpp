// Copyright 2026 The gaitug Authors
// SPDX-License-Identifier: Apache-2.0

// File-level commands. Each writes its outputs under out_dir and returns a
// short summary; inputs are processed in a worker pool but outputs are
// ordered by participant and trial so reruns are byte-identical.

#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "options.hpp"
#include "pipeline.hpp"
#include "synth.hpp"

namespace gaitug {

struct AnalyzeSummary {
  std::size_t succeeded = 0;
  std::size_t failed = 0;
};

AnalyzeSummary run_analyze(const std::vector<std::filesystem::path>& trajectories,
                           const std::filesystem::path& out_dir, const AnalysisOptions& options,
                           Units units, unsigned threads);

struct CompareSummary {
  std::size_t pairs = 0;
  double rho = 0.0;
  double mean_bias_s = 0.0;
};

CompareSummary run_compare(const std::filesystem::path& video_metrics,
                           const std::vector<std::filesystem::path>& imu_files,
                           const std::filesystem::path& out_dir, const AnalysisOptions& options,
                           unsigned threads);

struct LmeSummary {
  std::size_t n_obs = 0;
  std::size_t n_groups = 0;
  double icc = 0.0;
};

LmeSummary run_lme(const std::filesystem::path& metrics, const std::filesystem::path& covariates,
                   const std::string& outcome, const std::vector<std::string>& predictors,
                   const std::filesystem::path& out_dir);

std::size_t run_report(const std::filesystem::path& metrics,
                       const std::filesystem::path& covariates,
                       const std::vector<std::string>& metric_names,
                       const std::vector<std::string>& factor_names,
                       const std::filesystem::path& out_dir);

// Returns the number of files written.
std::size_t run_synth(const synth::CohortConfig& config, const std::filesystem::path& out_dir,
                      unsigned threads);

// Runs fn(i) for i in [0, n) on up to `threads` workers. Exceptions escape
// from the lowest failing index.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace gaitug
