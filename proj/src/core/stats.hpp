// Copyright 2026 The gaitug Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gaitug::stats {

struct SpearmanResult {
  double rho = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

struct ShapiroResult {
  double w_statistic = 1.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

// 1-based ranks; tied values share the mean of the ranks they occupy.
std::vector<double> midranks(std::span<const double> values);

double pearson(std::span<const double> x, std::span<const double> y);

// Pearson correlation of mid-ranks; two-sided p from t with n - 2 df.
SpearmanResult spearman(std::span<const double> x, std::span<const double> y);

// Royston's W approximation and p-value (algorithm AS R94), 3 <= n <= 5000.
ShapiroResult shapiro_wilk(std::span<const double> sample);

double normal_cdf(double z);
double normal_quantile(double p);

struct TrialKey {
  std::string participant_id;
  int trial_index = 0;
  auto operator<=>(const TrialKey&) const = default;
};

struct TrialPair {
  TrialKey key;
  double video_s = 0.0;
  double insole_s = 0.0;
};

struct Exclusion {
  std::string participant_id;
  std::string reason;
};

struct AgreementReport {
  SpearmanResult spearman;
  double mean_bias_s = 0.0;  // mean of video - insole
  std::vector<TrialPair> pairs;
  std::vector<Exclusion> excluded;
  std::optional<ShapiroResult> video_normality;
  std::optional<ShapiroResult> insole_normality;
};

inline constexpr int kTrialsPerParticipant = 3;

// Keeps only participants with all three trials paired, then correlates the
// per-trial mean step times.
AgreementReport compare_video_insole(const std::vector<TrialPair>& candidates);

}  // namespace gaitug::stats
