// Copyright 2026 The gaitug Authors
// SPDX-License-Identifier: Apache-2.0

#include "imu_gait.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "error.hpp"
#include "signal.hpp"

namespace gaitug {

namespace {

std::vector<std::size_t> periodic_peaks(std::span<const double> smoothed, std::size_t min_distance,
                                        const signal::AdaptiveRule& rule) {
  signal::PeakParams params;
  try {
    params = signal::adaptive_peak_params(smoothed, signal::Polarity::kPositive, rule);
  } catch (const Error&) {
    return {};
  }
  params.min_distance = min_distance;
  std::vector<std::size_t> frames;
  for (const auto& p : signal::find_peaks(smoothed, params, signal::Polarity::kPositive)) {
    frames.push_back(p.peak_frame);
  }
  return frames;
}

}  // namespace

ImuStepSeries imu_step_times(const ImuRecording& rec, const AnalysisOptions& options) {
  rec.validate();
  if (static_cast<double>(rec.size()) < 2.0 * rec.fps) {
    throw Error(ErrorKind::kDomain,
                fmt::format("imu recording has {} samples; at least 2 s required", rec.size()));
  }
  const auto kernel = signal::make_gaussian_kernel(options.filter.sigma);
  const auto min_distance = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(options.step_min_interval_s * rec.fps + 0.5)));
  const auto window = static_cast<std::size_t>(std::floor(options.imu_window_s * rec.fps + 0.5));

  ImuStepSeries out;
  for (Side side : {Side::kLeft, Side::kRight}) {
    const ImuChannels& ch = rec.side(side);
    const auto gyro = signal::smooth(ch.gyro[2], kernel);
    const auto accel = signal::smooth(ch.accel[static_cast<std::size_t>(rec.vertical_axis)], kernel);
    const auto swings = periodic_peaks(gyro, min_distance, options.peaks);
    const auto contacts = periodic_peaks(accel, min_distance, options.peaks);

    std::vector<std::size_t>& validated = side == Side::kLeft ? out.left_events : out.right_events;
    for (std::size_t s : swings) {
      const bool corroborated = std::any_of(contacts.begin(), contacts.end(), [&](std::size_t c) {
        return (c > s ? c - s : s - c) <= window;
      });
      if (corroborated) validated.push_back(s);
    }
    if (validated.empty()) {
      throw Error(ErrorKind::kDetection,
                  fmt::format("no corroborated step events on the {} insole", to_string(side)));
    }
    for (std::size_t s : validated) out.merged.push_back({side, s});
  }
  std::sort(out.merged.begin(), out.merged.end(), [](const ImuStepEvent& a, const ImuStepEvent& b) {
    return a.sample != b.sample ? a.sample < b.sample : a.foot < b.foot;
  });
  for (std::size_t i = 1; i < out.merged.size(); ++i) {
    if (out.merged[i].foot == out.merged[i - 1].foot) {
      ++out.same_foot_pairs;
      continue;
    }
    out.step_times.push_back(
        static_cast<double>(out.merged[i].sample - out.merged[i - 1].sample) / rec.fps);
  }
  if (!out.step_times.empty()) {
    out.mean = signal::mean(out.step_times);
    if (out.step_times.size() >= 2) out.sd = signal::sample_sd(out.step_times);
  }
  return out;
}

double trial_mean_step_time(const ImuStepSeries& series) {
  if (series.step_times.empty()) {
    throw Error(ErrorKind::kPrecondition, "no insole step times to average");
  }
  return signal::mean(series.step_times);
}

}  // namespace gaitug
