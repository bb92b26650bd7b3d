// Copyright 2026 The gaitug Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>

#include "domain.hpp"
#include "signal.hpp"

namespace gaitug {

struct FilterOptions {
  double sigma = 3.0;  // samples
  int butter_order = 4;
  double butter_cutoff_hz = 2.0;
};

struct AnalysisOptions {
  FilterOptions filter;
  signal::AdaptiveRule peaks;
  // Shortest admissible interval between two contacts of the same foot.
  double step_min_interval_s = 0.3;
  // Gyro/accel corroboration half-window for insole step events.
  double imu_window_s = 0.15;
  std::optional<double> fps_override;
  JointIndexTable joints;
};

}  // namespace gaitug
