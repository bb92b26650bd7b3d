// Copyright 2026 The gaitug Authors
// SPDX-License-Identifier: Apache-2.0

// TUG subtask segmentation from hip and shoulder trajectories.
//
// The sit-to-stand composite is
//   STS = 1.0 * d/dt(hip height) + 0.7 * d/dt(shoulder anterior offset)
//         + 0.5 * d/dt(trunk flexion angle)
// and turns are read from the velocity of the hip line, the signed lateral
// separation of the right and left hip joints.

#pragma once

#include <cstddef>
#include <optional>

#include "domain.hpp"
#include "options.hpp"
#include "signal.hpp"

namespace gaitug {

inline constexpr double kStsHipWeight = 1.0;
inline constexpr double kStsShoulderWeight = 0.7;
inline constexpr double kStsTrunkWeight = 0.5;

struct CompositeSignals {
  signal::Samples sts;
  signal::Samples hip_line;           // metres
  signal::Samples hip_line_velocity;  // m/s
  signal::Samples trunk_angle;        // radians, positive for forward flexion
  signal::Samples vertical_hip_velocity;
  signal::Samples shoulder_anterior_velocity;
  signal::Samples trunk_angular_velocity;
  Vec3 anterior;  // unit, horizontal
  Vec3 lateral;   // up x anterior, points to the body's left when facing anterior
};

struct SubtaskEvent {
  signal::Peak peak;
  double duration_s = 0.0;

  std::size_t duration_frames() const { return peak.end_frame - peak.start_frame; }
};

struct SubtaskSegmentation {
  SubtaskEvent sts1;
  SubtaskEvent turn1;
  SubtaskEvent turn2;
  SubtaskEvent sts2;
};

// Filtering applied to every velocity: Gaussian smoothing, then zero-phase
// Butterworth low-pass.
signal::Samples smooth_and_filter(std::span<const double> samples, double fps,
                                  const FilterOptions& filter);

// Horizontal unit vector from the first hip-midpoint position towards the
// farthest one; +Z when the subject never leaves the starting spot.
Vec3 provisional_anterior_axis(const TrialRecording& trial, const JointIndexTable& joints);

CompositeSignals compute_signals(const TrialRecording& trial, const JointIndexTable& joints,
                                 const FilterOptions& filter = {},
                                 std::optional<Vec3> anterior = std::nullopt);

// Frame indices in the result are sample offsets from the first frame.
SubtaskSegmentation segment(const TrialRecording& trial, const CompositeSignals& signals,
                            const signal::AdaptiveRule& rule = {});

struct SegmentationResult {
  CompositeSignals signals;
  SubtaskSegmentation segmentation;
};

// Two passes: the first uses the provisional anterior axis, the second the
// hip displacement over the outbound walk found by the first.
SegmentationResult segment_trial(const TrialRecording& trial, const AnalysisOptions& options);

}  // namespace gaitug
