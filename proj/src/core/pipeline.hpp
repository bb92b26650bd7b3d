// Copyright 2026 The gaitug Authors
// SPDX-License-Identifier: Apache-2.0

// In-memory orchestration shared by the C API and the command line.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "domain.hpp"
#include "gait_metrics.hpp"
#include "io.hpp"
#include "lme.hpp"
#include "options.hpp"
#include "segmentation.hpp"
#include "stats.hpp"

namespace gaitug {

// Report units: step length/width means in cm and variability in mm.
enum class Units { kReport, kSi };
const char* to_string(Units units) noexcept;
std::optional<Units> parse_units(std::string_view text);

struct TrialAnalysis {
  SegmentationResult segmentation;
  GaitMetrics metrics;
};

TrialAnalysis analyze_trial(const TrialRecording& trial, const AnalysisOptions& options);

std::vector<std::string> metrics_columns(Units units);
io::MetricsRow metrics_row(const TrialRecording& trial, const TrialAnalysis& analysis, Units units);
std::string segmentation_json(const TrialRecording& trial, const TrialAnalysis& analysis);

struct FailureRecord {
  std::string source;
  std::string kind;
  std::string message;
};

// Insole trial means keyed by participant and trial.
struct InsoleMean {
  stats::TrialKey key;
  double mean_step_time_s = 0.0;
};

struct Agreement {
  stats::AgreementReport report;
  std::vector<stats::TrialKey> video_only;
  std::vector<stats::TrialKey> insole_only;
  std::vector<FailureRecord> insole_failures;
};

// Pairs video st_mean with insole means; throws a matching error when no
// key is shared.
Agreement compare_tables(const io::MetricsTable& video, const std::vector<InsoleMean>& insole);
std::string agreement_json(const Agreement& agreement);
std::string step_times_csv(const Agreement& agreement);

struct LmeData {
  stats::LmeSpec spec;
  std::vector<stats::LmeRow> rows;
  std::size_t unmatched_trials = 0;       // metrics rows without covariates
  std::vector<std::string> repeat_groups;  // participants with more trials than one session
};

// Joins per-trial metrics with participant covariates. Predictors are looked
// up among the covariates first, then among the metrics columns.
LmeData join_for_lme(const io::MetricsTable& metrics,
                     const std::vector<FallRiskCovariates>& covariates,
                     const std::string& outcome, const std::vector<std::string>& predictors);

std::string lme_json(const LmeData& data, const stats::LmeFit& fit, std::string_view units);
std::string lme_table(const LmeData& data, const stats::LmeFit& fit, std::string_view units);

struct ReportFile {
  std::string name;
  std::string content;
};

inline const std::vector<std::string> kDefaultReportMetrics = {"sl_mean_cm", "sl_sd_mm", "sts1_s"};
inline const std::vector<std::string> kDefaultReportFactors = {"steadi", "short_fes_i", "btracks"};

std::vector<ReportFile> build_report(const io::MetricsTable& metrics,
                                     const std::vector<FallRiskCovariates>& covariates,
                                     const std::vector<std::string>& metric_names,
                                     const std::vector<std::string>& factor_names);

}  // namespace gaitug
