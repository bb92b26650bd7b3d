// Copyright 2026 The gaitug Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "domain.hpp"
#include "options.hpp"

namespace gaitug {

struct ImuStepEvent {
  Side foot;
  std::size_t sample;  // offset from the first sample
};

struct ImuStepSeries {
  std::vector<std::size_t> left_events;
  std::vector<std::size_t> right_events;
  std::vector<ImuStepEvent> merged;
  std::vector<double> step_times;  // seconds, opposite-foot pairs only
  std::size_t same_foot_pairs = 0; // consecutive events on one foot (excluded)
  double mean = 0.0;
  std::optional<double> sd;

  bool non_alternating() const { return same_foot_pairs > 0; }
};

// Mid-swing gyro-z peaks per foot, each kept only when a vertical
// acceleration peak of the same foot lies within +/- options.imu_window_s.
ImuStepSeries imu_step_times(const ImuRecording& rec, const AnalysisOptions& options = {});

double trial_mean_step_time(const ImuStepSeries& series);

}  // namespace gaitug
