// Copyright 2026 The gaitug Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "domain.hpp"
#include "options.hpp"
#include "segmentation.hpp"

namespace gaitug {

enum class WalkPhase { kOutbound, kInbound };
const char* to_string(WalkPhase phase) noexcept;

struct StepEvent {
  Side foot = Side::kLeft;
  std::size_t frame = 0;  // sample offset from the first frame
  Vec3 ankle_position;
  WalkPhase phase = WalkPhase::kOutbound;
};

struct PhaseAxes {
  WalkPhase phase;
  Vec3 anterior;
  Vec3 lateral;
};

// Frame window [first, last] of each walking phase: sts1 end to turn1 start,
// then turn1 end to turn2 start.
std::array<std::pair<std::size_t, std::size_t>, 2> walking_windows(const SubtaskSegmentation& seg);

// Ankle-height minima of each foot inside the walking windows, merged in
// frame order. Throws an insufficient-steps error when a phase keeps fewer
// than two events.
std::vector<StepEvent> detect_steps(const TrialRecording& trial, const SubtaskSegmentation& seg,
                                    const AnalysisOptions& options = {});

// Net horizontal hip-midpoint displacement across each walking window.
std::array<PhaseAxes, 2> phase_axes(const TrialRecording& trial, const SubtaskSegmentation& seg,
                                    const JointIndexTable& joints);

// One record per consecutive opposite-foot pair within a phase; the landing
// (later) foot owns the step.
struct StepRecord {
  WalkPhase phase;
  Side foot;
  double time_s;
  double length_m;
  double width_m;
};

std::vector<double> step_times(const std::vector<StepEvent>& events, double fps);

struct LengthWidth {
  std::vector<double> lengths;
  std::vector<double> widths;
};
LengthWidth step_length_width(const std::vector<StepEvent>& events,
                              const std::array<PhaseAxes, 2>& axes);

std::vector<StepRecord> step_records(const std::vector<StepEvent>& events, double fps,
                                     const std::array<PhaseAxes, 2>& axes);

struct MetricSummary {
  std::vector<double> values;
  double mean = 0.0;
  std::optional<double> sd;        // sample SD; missing for a single value
  std::optional<double> symmetry;  // percent; missing unless both feet have steps
};

// Symmetry index |mean_L - mean_R| / (0.5 (mean_L + mean_R)) * 100.
MetricSummary summarize(const std::vector<double>& values, const std::vector<Side>& feet);

struct GaitMetrics {
  std::vector<StepRecord> steps;
  MetricSummary step_time;
  MetricSummary step_length;
  MetricSummary step_width;
  std::size_t n_steps() const { return steps.size(); }
};

GaitMetrics compute_gait_metrics(const TrialRecording& trial, const SubtaskSegmentation& seg,
                                 const AnalysisOptions& options = {});

}  // namespace gaitug
