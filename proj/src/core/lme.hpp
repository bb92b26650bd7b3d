// Copyright 2026 The gaitug Authors
// SPDX-License-Identifier: Apache-2.0

// Random-intercept linear mixed model
//   y_ij = b0 + x_ij' beta + u_i + e_ij,  u_i ~ N(0, tau00),  e_ij ~ N(0, sigma2)
// fitted by REML. The variance ratio theta = tau00 / sigma2 is profiled out
// and the restricted deviance is minimised over log(theta) in [-12, 12].

#pragma once

#include <optional>
#include <string>
#include <vector>

namespace gaitug::stats {

struct LmeSpec {
  std::string outcome;
  std::vector<std::string> predictors;  // an intercept is always added
  std::string grouping = "participant_id";
};

struct LmeRow {
  std::string group;
  std::optional<double> outcome;
  std::vector<std::optional<double>> predictors;  // same order as LmeSpec::predictors
};

struct FixedEffect {
  std::string name;
  double estimate = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double z = 0.0;
  double p_value = 1.0;
};

enum class Convergence { kConverged, kBoundary };
const char* to_string(Convergence c) noexcept;

struct LmeFit {
  std::vector<FixedEffect> fixed;
  double sigma2 = 0.0;
  double tau00 = 0.0;
  double icc = 0.0;
  std::size_t n_groups = 0;
  std::size_t n_obs = 0;
  std::size_t n_dropped = 0;  // rows removed for missing values
  double r2_marginal = 0.0;
  double r2_conditional = 0.0;
  double fixed_variance = 0.0;  // sample variance of X beta
  double theta = 0.0;
  double reml_deviance = 0.0;
  Convergence convergence = Convergence::kConverged;
};

struct LmeOptions {
  // Skip the optimiser and use this variance ratio (0 gives ordinary least squares).
  std::optional<double> fixed_theta;
};

inline constexpr double kWaldZ95 = 1.96;
inline constexpr double kLogThetaMin = -12.0;
inline constexpr double kLogThetaMax = 12.0;

LmeFit fit_lme(const LmeSpec& spec, const std::vector<LmeRow>& rows, const LmeOptions& options = {});

inline double intraclass_correlation(double tau00, double sigma2) {
  return tau00 / (tau00 + sigma2);
}

}  // namespace gaitug::stats
